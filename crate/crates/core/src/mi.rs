//! Mutual-information estimators for arbitrary amplitude inputs: adaptive
//! quadrature, seeded Monte-Carlo with a tabulated output marginal, the
//! finite-sum ASK expression, and the truncated-input rate-loss comparison
//! with its analytic entropy bracket.

use crate::channel::{ChannelError, ChannelSpec};
use crate::entropy::{self, EntropyError};
use crate::inputs::{ask_points, InputError, InputSpec};
use crate::quad::{self, QuadError};
use crate::rngstream;
use rayon::prelude::*;
use thiserror::Error;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Error)]
pub enum MiError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input kind not supported here: {0}")]
    UnsupportedInput(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

/// Estimation method tag carried by [`MIEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiMethod {
    Quadrature,
    MonteCarlo,
    AskQuadrature,
}

impl MiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            MiMethod::Quadrature => "quadrature",
            MiMethod::MonteCarlo => "monte_carlo",
            MiMethod::AskQuadrature => "ask_quadrature",
        }
    }
}

/// A mutual-information value in bits per channel use with its provenance.
#[derive(Debug, Clone)]
pub struct MIEstimate {
    pub value_bits: f64,
    /// Standard error of the mean (0 for deterministic quadrature).
    pub std_error_bits: f64,
    pub method: MiMethod,
    pub samples: u64,
    /// Effective SNR σ_S²/σ_N² (parent σ_S² for the truncated Rayleigh).
    pub rho: f64,
    pub n: u32,
    pub input: InputSpec,
}

/// ln p_{Y|X}(y|x) with the x = 0 leg routed to the central chi limit.
fn log_conditional(spec: &ChannelSpec, x: f64, y: f64) -> f64 {
    if x == 0.0 {
        spec.log_density_central(y)
    } else {
        spec.log_density(x, y).expect("x > 0, y >= 0")
    }
}

/// Integration window around the conditional density's bump at
/// m = sqrt(x² + n σ_N²), padded by `k` noise standard deviations.
fn bump_window(spec: &ChannelSpec, x: f64, k: f64) -> (f64, f64) {
    let sigma = spec.sigma_n_sq().sqrt();
    let m = spec.conditional_second_moment(x).sqrt();
    let mut lo = m - k * sigma;
    if lo < 3.0 * sigma {
        lo = 0.0;
    }
    (lo.max(0.0), m + k * sigma)
}

fn bump_breakpoints(spec: &ChannelSpec, x: f64, lo: f64, hi: f64) -> Vec<f64> {
    let sigma = spec.sigma_n_sq().sqrt();
    let m = spec.conditional_second_moment(x).sqrt();
    let mut pts = vec![lo, hi];
    for c in [m - 4.0 * sigma, m - sigma, m, m + sigma, m + 4.0 * sigma] {
        if c > lo && c < hi {
            pts.push(c);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Conditional differential entropy g(x) = -∫ p(y|x) ln p(y|x) dy in nats,
/// by adaptive quadrature. Accepts x = 0 through the central chi limit.
pub fn g_quadrature_nats(spec: &ChannelSpec, x: f64, rel_tol: f64) -> Result<f64, MiError> {
    if !(x >= 0.0) {
        return Err(MiError::InvalidParameter(format!(
            "x must be nonnegative, got {x}"
        )));
    }
    let (lo, hi) = bump_window(spec, x, 16.0);
    let pts = bump_breakpoints(spec, x, lo, hi);
    let r = quad::integrate_segments(
        |y| {
            let ld = log_conditional(spec, x, y);
            let p = ld.exp();
            if p == 0.0 {
                0.0
            } else {
                -p * ld
            }
        },
        &pts,
        rel_tol,
        1e-14,
    )?;
    Ok(r.value)
}

/// g(x) in bits; companion evaluator for [`g_bounds`].
pub fn g_quadrature(spec: &ChannelSpec, x: f64, rel_tol: f64) -> Result<f64, MiError> {
    Ok(g_quadrature_nats(spec, x, rel_tol)? / LN_2)
}

/// Analytic bracket (lower, upper) for g(x) in bits:
///
///   lower: (1/2) ln((2x² + nσ_N²)/(x² + nσ_N²)) + ln σ_N
///          (log-concavity of the chi-squared reparametrization plus Jensen),
///   upper: x² + nσ_N² + ln(√π/2)
///          (cross-entropy against the unit half-Gaussian).
pub fn g_bounds(spec: &ChannelSpec, x: f64) -> (f64, f64) {
    assert!(x >= 0.0);
    let s2 = spec.sigma_n_sq();
    let n = spec.n() as f64;
    let ratio = (2.0 * x * x + n * s2) / (x * x + n * s2);
    let lower = 0.5 * ratio.ln() + 0.5 * s2.ln();
    let upper = x * x + n * s2 + (std::f64::consts::PI.sqrt() / 2.0).ln();
    (lower / LN_2, upper / LN_2)
}

/// h_{Y|X} = ∫ p_X(x) g(x) dx in bits, by nested adaptive quadrature.
/// This is the direct oracle counterpart of the closed form in
/// [`crate::entropy::cond_entropy_closed_form`].
pub fn cond_entropy_quadrature(
    spec: &ChannelSpec,
    input: &InputSpec,
    tol: f64,
) -> Result<f64, MiError> {
    if !input.is_continuous() {
        return Err(MiError::UnsupportedInput(
            "conditional-entropy quadrature needs a continuous input".into(),
        ));
    }
    input.validate()?;
    let x_max = input.upper_cutoff(1e-18);
    let inner_tol = (tol * 1e-2).clamp(1e-13, 1e-7);
    let mut pts = quad::geometric_points(0.0, x_max, x_max / 512.0);
    if let InputSpec::TruncatedRayleigh { x_hat, .. } = *input {
        if x_hat > 0.0 && x_hat < x_max {
            pts.push(x_hat);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
        }
    }
    let r = quad::integrate_segments(
        |x| {
            let w = input.density(x).expect("continuous");
            if w == 0.0 {
                return 0.0;
            }
            w * g_quadrature_nats(spec, x, inner_tol).expect("inner entropy")
        },
        &pts,
        tol * 0.2,
        1e-14,
    )?;
    Ok(r.value / LN_2)
}

/// Output marginal p_Y(y) = ∫ p(y|x) p_X(x) dx by adaptive quadrature over
/// the conditional bump (and the small-x leg when y sits near the origin).
pub fn marginal_density(spec: &ChannelSpec, input: &InputSpec, y: f64) -> Result<f64, MiError> {
    if y <= 0.0 {
        return Ok(0.0);
    }
    let sigma = spec.sigma_n_sq().sqrt();
    let x_max = input.upper_cutoff(1e-18);
    let hi = x_max.min(y + 16.0 * sigma);
    let mut lo = y - 16.0 * sigma;
    if lo < 3.0 * sigma {
        lo = 0.0;
    }
    if lo >= hi {
        return Ok(0.0);
    }
    let mut pts = vec![lo, hi];
    for c in [y - 3.0 * sigma, y, y + 3.0 * sigma] {
        if c > lo && c < hi {
            pts.push(c);
        }
    }
    if let InputSpec::TruncatedRayleigh { x_hat, .. } = *input {
        if x_hat > lo && x_hat < hi {
            pts.push(x_hat);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = quad::integrate_segments(
        |x| {
            let w = input.density(x).expect("continuous");
            if w == 0.0 || x <= 0.0 {
                return 0.0;
            }
            let ld = spec.log_density(x, y).expect("x > 0");
            ld.exp() * w
        },
        &pts,
        1e-10,
        1e-280,
    )?;
    Ok(r.value)
}

/// ln p_Y(y): closed form for the Rayleigh input, exact finite mixture for
/// ASK, marginalization quadrature otherwise.
fn ln_marginal(spec: &ChannelSpec, input: &InputSpec, y: f64) -> Result<f64, MiError> {
    match *input {
        InputSpec::Rayleigh { sigma_s_sq } => {
            let rho = sigma_s_sq / spec.sigma_n_sq();
            let sigma = spec.sigma_n_sq().sqrt();
            let p = entropy::output_density_rayleigh(spec.n(), rho, y / sigma)? / sigma;
            Ok(p.ln())
        }
        InputSpec::Ask {
            m_points,
            sigma_s_sq,
        } => {
            let pts = ask_points(m_points, sigma_s_sq);
            let logs: Vec<f64> = pts.iter().map(|&x| log_conditional(spec, x, y)).collect();
            let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max == f64::NEG_INFINITY {
                return Ok(f64::NEG_INFINITY);
            }
            let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
            Ok(max + sum.ln() - (m_points as f64).ln())
        }
        _ => Ok(marginal_density(spec, input, y)?.ln()),
    }
}

/// Output differential entropy h_Y in bits by quadrature over the marginal.
pub fn output_entropy_quadrature(
    spec: &ChannelSpec,
    input: &InputSpec,
    tol: f64,
) -> Result<f64, MiError> {
    let sigma = spec.sigma_n_sq().sqrt();
    let x_max = input.upper_cutoff(1e-18);
    let y_max = (x_max * x_max + spec.n() as f64 * spec.sigma_n_sq()).sqrt() + 16.0 * sigma;
    let pts = quad::geometric_points(0.0, y_max, sigma / 8.0);
    let r = quad::integrate_segments(
        |y| {
            let lp = ln_marginal(spec, input, y).expect("marginal");
            let p = lp.exp();
            if p == 0.0 {
                0.0
            } else {
                -p * lp
            }
        },
        &pts,
        tol * 0.2,
        1e-14,
    )?;
    Ok(r.value / LN_2)
}

/// MI by deterministic quadrature: h_Y - h_{Y|X}, both to tolerance `tol`
/// (bits). Continuous inputs only; use [`mi_ask`] for constellations.
pub fn mi_quadrature(spec: &ChannelSpec, input: &InputSpec, tol: f64) -> Result<MIEstimate, MiError> {
    if !input.is_continuous() {
        return Err(MiError::UnsupportedInput(
            "mi_quadrature needs a continuous input; use mi_ask".into(),
        ));
    }
    input.validate()?;
    if !(tol > 0.0) {
        return Err(MiError::InvalidParameter("tol must be positive".into()));
    }
    let h_y = output_entropy_quadrature(spec, input, tol * 0.5)?;
    let h_yx = cond_entropy_quadrature(spec, input, tol * 0.5)?;
    Ok(MIEstimate {
        value_bits: h_y - h_yx,
        std_error_bits: 0.0,
        method: MiMethod::Quadrature,
        samples: 0,
        rho: input.sigma_s_sq() / spec.sigma_n_sq(),
        n: spec.n(),
        input: *input,
    })
}

/// Tabulated output marginal on a uniform grid with local-cubic
/// interpolation, so Monte-Carlo density lookups cost O(1) instead of one
/// quadrature each. Every conditional density carries a y^{2n-1} prefactor,
/// so the table stores ln p_Y(y) - (2n-1) ln y, which is smooth through
/// y -> 0 and interpolates cleanly on a uniform grid.
struct MarginalTable {
    y0: f64,
    dy: f64,
    prefactor: f64,
    smooth: Vec<f64>,
}

impl MarginalTable {
    fn build(spec: &ChannelSpec, input: &InputSpec) -> Result<Self, MiError> {
        let sigma = spec.sigma_n_sq().sqrt();
        let x_max = input.upper_cutoff(1e-18);
        let y_max = (x_max * x_max + spec.n() as f64 * spec.sigma_n_sq()).sqrt() + 16.0 * sigma;
        let dy = sigma / 16.0;
        let count = ((y_max / dy).ceil() as usize + 2).min(300_000);
        let dy = y_max / (count - 1) as f64;
        let y0 = dy * 1e-3; // keep the first node off the y=0 log singularity
        let prefactor = 2.0 * spec.n() as f64 - 1.0;
        let smooth: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| {
                let y = y0 + i as f64 * dy;
                ln_marginal(spec, input, y).expect("marginal") - prefactor * y.ln()
            })
            .collect();
        Ok(Self {
            y0,
            dy,
            prefactor,
            smooth,
        })
    }

    /// 4-point Lagrange interpolation of ln p_Y; None outside the grid.
    fn lookup(&self, y: f64) -> Option<f64> {
        let t = (y - self.y0) / self.dy;
        if !(t >= 1.0) || t >= (self.smooth.len() - 2) as f64 {
            return None;
        }
        let i = t as usize; // node, with i-1 .. i+2 in range
        let s = t - i as f64;
        let (p0, p1, p2, p3) = (
            self.smooth[i - 1],
            self.smooth[i],
            self.smooth[i + 1],
            self.smooth[i + 2],
        );
        // Lagrange basis on offsets -1, 0, 1, 2.
        let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        Some(w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3 + self.prefactor * y.ln())
    }
}

/// Monte-Carlo MI estimate: sample mean of log₂[p(Y|X)/p_Y(Y)] over seeded
/// (X, Y) draws, with the marginal looked up from a table that tabulates the
/// exact marginalization. Deterministic for a given (seed, samples) pair:
/// the work is split into fixed shards with per-shard RNG streams, reduced in
/// shard order.
pub fn mi_monte_carlo(
    spec: &ChannelSpec,
    input: &InputSpec,
    samples: u64,
    seed: u64,
) -> Result<MIEstimate, MiError> {
    if samples < 1_000 {
        return Err(MiError::InvalidParameter(
            "monte-carlo estimation needs at least 1e3 samples".into(),
        ));
    }
    input.validate()?;
    let table = MarginalTable::build(spec, input)?;

    let shards: u64 = 64;
    let base = samples / shards;
    let extra = samples % shards;
    let partials: Vec<(f64, f64, u64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let quota = base + u64::from(shard < extra);
            let mut rng = rngstream::stream(seed, shard);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..quota {
                let x = input.sample(&mut rng);
                let y = spec.sample(x, &mut rng);
                let ln_cond = log_conditional(spec, x, y);
                let ln_marg = table
                    .lookup(y)
                    .unwrap_or_else(|| ln_marginal(spec, input, y).expect("marginal"));
                let ll = (ln_cond - ln_marg) / LN_2;
                sum += ll;
                sum_sq += ll * ll;
            }
            (sum, sum_sq, quota)
        })
        .collect();

    let (sum, sum_sq, count) = partials
        .iter()
        .fold((0.0, 0.0, 0u64), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    let n = count as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MIEstimate {
        value_bits: mean,
        std_error_bits: (var / n).sqrt(),
        method: MiMethod::MonteCarlo,
        samples: count,
        rho: input.sigma_s_sq() / spec.sigma_n_sq(),
        n: spec.n(),
        input: *input,
    })
}

/// MI of the equiprobable M-ASK constellation:
///
///   I = (1/M) Σ_x ∫ p(y|x) log₂[ p(y|x) / ((1/M) Σ_{x'} p(y|x')) ] dy,
///
/// with the x = 0 leg using the central chi limit density. Each leg is a
/// conditional relative entropy, integrated over the leg's bump with
/// breakpoints at the neighboring constellation points.
pub fn mi_ask(
    spec: &ChannelSpec,
    m_points: u32,
    sigma_s_sq: f64,
    tol: f64,
) -> Result<MIEstimate, MiError> {
    if m_points < 1 {
        return Err(MiError::InvalidParameter("M must be >= 1".into()));
    }
    if !(sigma_s_sq > 0.0) {
        return Err(MiError::InvalidParameter(
            "sigma_s_sq must be positive".into(),
        ));
    }
    let input = InputSpec::Ask {
        m_points,
        sigma_s_sq,
    };
    let rho = sigma_s_sq / spec.sigma_n_sq();
    if m_points == 1 {
        return Ok(MIEstimate {
            value_bits: 0.0,
            std_error_bits: 0.0,
            method: MiMethod::AskQuadrature,
            samples: 0,
            rho,
            n: spec.n(),
            input,
        });
    }
    let pts_x = ask_points(m_points, sigma_s_sq);
    let ln_m = (m_points as f64).ln();
    let ln_mixture = |y: f64| {
        let mut max = f64::NEG_INFINITY;
        let mut logs = Vec::with_capacity(pts_x.len());
        for &x in &pts_x {
            let l = log_conditional(spec, x, y);
            logs.push(l);
            if l > max {
                max = l;
            }
        }
        if max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        max + sum.ln() - ln_m
    };

    let mut total = 0.0;
    for &x in &pts_x {
        let (lo, hi) = bump_window(spec, x, 16.0);
        let mut pts = bump_breakpoints(spec, x, lo, hi);
        for &other in &pts_x {
            if other > lo && other < hi {
                pts.push(other);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let leg = quad::integrate_segments(
            |y| {
                let lc = log_conditional(spec, x, y);
                let p = lc.exp();
                if p == 0.0 {
                    return 0.0;
                }
                p * (lc - ln_mixture(y))
            },
            &pts,
            tol * 0.2,
            1e-14,
        )?;
        total += leg.value;
    }
    Ok(MIEstimate {
        value_bits: total / (m_points as f64) / LN_2,
        std_error_bits: 0.0,
        method: MiMethod::AskQuadrature,
        samples: 0,
        rho,
        n: spec.n(),
        input,
    })
}

/// Rate loss I_{X,Y} - I_{X̃,Ỹ} between the Rayleigh input with parameter
/// σ_S² and its truncation at x̂ (same parent parameter). Zero at x̂ = 0 by
/// construction.
pub fn rate_loss_truncated(
    spec: &ChannelSpec,
    sigma_s_sq: f64,
    x_hat: f64,
    tol: f64,
) -> Result<f64, MiError> {
    if !(x_hat >= 0.0) {
        return Err(MiError::InvalidParameter(
            "x_hat must be nonnegative".into(),
        ));
    }
    if x_hat == 0.0 {
        return Ok(0.0);
    }
    let full = mi_quadrature(spec, &InputSpec::Rayleigh { sigma_s_sq }, tol)?;
    let trunc = mi_quadrature(
        spec,
        &InputSpec::TruncatedRayleigh { sigma_s_sq, x_hat },
        tol,
    )?;
    Ok(full.value_bits - trunc.value_bits)
}

/// Kullback-Leibler divergence D(p_Ỹ ‖ p_Y) in bits between the output
/// marginals under the truncated and the full Rayleigh input. Analytic
/// bound: ≤ x̂²/σ_S² · log₂ e.
pub fn kl_marginal_truncated(
    spec: &ChannelSpec,
    sigma_s_sq: f64,
    x_hat: f64,
    tol: f64,
) -> Result<f64, MiError> {
    let truncated = InputSpec::TruncatedRayleigh { sigma_s_sq, x_hat };
    let full = InputSpec::Rayleigh { sigma_s_sq };
    truncated.validate()?;
    let sigma = spec.sigma_n_sq().sqrt();
    let x_max = truncated.upper_cutoff(1e-18);
    let y_max = (x_max * x_max + spec.n() as f64 * spec.sigma_n_sq()).sqrt() + 16.0 * sigma;
    let pts = quad::geometric_points(0.0, y_max, sigma / 8.0);
    let r = quad::integrate_segments(
        |y| {
            let lp_t = ln_marginal(spec, &truncated, y).expect("marginal");
            let p_t = lp_t.exp();
            if p_t == 0.0 {
                return 0.0;
            }
            let lp = ln_marginal(spec, &full, y).expect("marginal");
            p_t * (lp_t - lp)
        },
        &pts,
        tol * 0.2,
        1e-13,
    )?;
    Ok(r.value / LN_2)
}
