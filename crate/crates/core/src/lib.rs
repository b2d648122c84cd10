//! Numerical toolkit for capacity lower bounds of the noncentral chi-channel
//! with 2n degrees of freedom.
//!
//! The crate provides the channel law itself ([`channel`]), the catalogue of
//! amplitude input distributions ([`inputs`]), closed-form and asymptotic
//! differential entropies for the Rayleigh input ([`entropy`]), and
//! mutual-information estimators for arbitrary inputs ([`mi`]). Everything is
//! built on overflow-safe special functions ([`specfun`]) and adaptive
//! Gauss–Kronrod quadrature ([`quad`]).
//!
//! All normalized-channel computations fix σ_N² = 1 unless a σ_N² is passed
//! explicitly; mutual information is invariant under the simultaneous
//! rescaling of input, output and noise, so nothing is lost.

// Validation guards use `!(x > 0.0)` on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod entropy;
pub mod inputs;
pub mod mi;
pub mod quad;
pub mod rngstream;
pub mod specfun;
pub mod stats;

pub use channel::{AmplitudePair, ChannelSpec};
pub use entropy::EntropyReport;
pub use inputs::InputSpec;
pub use mi::MIEstimate;

/// Effective SNR ρ from a dB value: ρ = 10^(dB/10).
pub fn rho_from_db(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// dB value of an effective SNR ρ.
pub fn db_from_rho(rho: f64) -> f64 {
    10.0 * rho.log10()
}
