//! Statistical validation of campaign output against the noncentral chi
//! channel law.
//!
//! Each usable (x_sent, y_received) pair is mapped through the conditional
//! CDF of the chi law (probability integral transform); under the law the
//! transformed values are uniform on [0,1] no matter how the sent amplitudes
//! are distributed. The pairs are then grouped into sent-amplitude bins and
//! each bin is chi-square tested for uniformity; the per-bin statistics
//! combine into one global test, which is the pass/fail arbiter.

use crate::nft::{NftError, SlotRecord};
use chi_capacity_core::channel::ChannelSpec;
use chi_capacity_core::stats::{self, ChiSquareTest};

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    /// Significance level of the combined goodness-of-fit test.
    pub significance: f64,
    /// Minimum pairs per amplitude bin.
    pub min_bin_count: usize,
    /// Uniformity cells per bin.
    pub cells: usize,
    /// Model-validity cutoff â: pairs with A_sent = x_sent² below it are
    /// excluded from the fit (the perturbative channel law does not claim
    /// validity for low-amplitude, strongly interacting solitons).
    pub amplitude_cutoff: f64,
    /// Off-diagonal threshold for the memorylessness check.
    pub max_off_diagonal: f64,
}

impl ValidationConfig {
    /// Defaults for a campaign with normalized symbol period `ts_norm`: the
    /// cutoff â = 8/T_s keeps the windowing/interaction bias of the slots
    /// entering the fit an order of magnitude under the chi-law conditional
    /// spread.
    pub fn for_symbol_period(ts_norm: f64) -> Self {
        ValidationConfig {
            significance: 0.01,
            min_bin_count: 200,
            cells: 20,
            amplitude_cutoff: 8.0 / ts_norm,
            max_off_diagonal: 0.05,
        }
    }
}

/// Goodness-of-fit outcome for one sent-amplitude bin.
#[derive(Debug, Clone, Copy)]
pub struct BinReport {
    pub a_lo: f64,
    pub a_hi: f64,
    pub count: usize,
    pub test: ChiSquareTest,
}

/// Full validation verdict.
#[derive(Debug, Clone)]
pub struct GofReport {
    pub bins: Vec<BinReport>,
    pub combined: ChiSquareTest,
    /// Pairs entering the fit (usable status and above the cutoff).
    pub used_pairs: usize,
    pub pass: bool,
}

/// Run the conditional goodness-of-fit test of the records against the chi
/// law `channel`.
pub fn conditional_gof(
    records: &[SlotRecord],
    channel: &ChannelSpec,
    config: &ValidationConfig,
) -> Result<GofReport, NftError> {
    let mut pairs: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.status.is_usable() && r.y_received.is_finite())
        .filter(|r| r.x_sent * r.x_sent >= config.amplitude_cutoff)
        .map(|r| (r.x_sent, r.y_received))
        .collect();
    if pairs.len() < config.min_bin_count {
        return Err(NftError::InvalidFrame(format!(
            "only {} usable pairs above the amplitude cutoff",
            pairs.len()
        )));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Equal-count amplitude bins of at least min_bin_count pairs.
    let n_bins = (pairs.len() / config.min_bin_count.max(1)).clamp(1, 40);
    let per_bin = pairs.len() / n_bins;
    let mut bins = Vec::with_capacity(n_bins);
    for b in 0..n_bins {
        let start = b * per_bin;
        let end = if b + 1 == n_bins {
            pairs.len()
        } else {
            (b + 1) * per_bin
        };
        let chunk = &pairs[start..end];
        let pit: Vec<f64> = chunk
            .iter()
            .map(|&(x, y)| {
                channel
                    .conditional_cdf(x, y)
                    .expect("x > 0 above the cutoff")
            })
            .collect();
        let test = stats::uniformity_test(&pit, config.cells);
        bins.push(BinReport {
            a_lo: chunk.first().unwrap().0.powi(2),
            a_hi: chunk.last().unwrap().0.powi(2),
            count: chunk.len(),
            test,
        });
    }
    let combined = stats::combine_chi_square(&bins.iter().map(|b| b.test).collect::<Vec<_>>());
    let used_pairs = pairs.len();
    Ok(GofReport {
        bins,
        combined,
        used_pairs,
        pass: combined.passes(config.significance),
    })
}
