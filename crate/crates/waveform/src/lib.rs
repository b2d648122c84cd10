//! Soliton waveform layer for the chi-channel toolkit: physical-unit
//! normalization ([`fiberlink`]), split-step Fourier propagation of the
//! noisy scalar NSE ([`solitonsim`]), forward-NFT amplitude detection with
//! the end-to-end Monte-Carlo campaign ([`nft`]), and the statistical
//! validation of the campaign output against the chi law ([`validation`]).

// Validation guards use `!(x > 0.0)` on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fiberlink;
pub mod nft;
pub mod solitonsim;
pub mod validation;

pub use fiberlink::{DerivedScales, FiberSystem};
pub use nft::{campaign, CampaignConfig, CampaignResult, SlotRecord, SlotStatus};
pub use solitonsim::{PulseTrainConfig, WaveformFrame};
