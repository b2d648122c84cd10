//! Input-distribution catalogue: every amplitude distribution studied for the
//! chi-channel, parametrized by its second moment σ_S² = E[X²] (the average
//! soliton amplitude). The truncated Rayleigh keeps σ_S² as the *parent*
//! parameter; its own second moment is x̂² + σ_S².

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum InputError {
    #[error("invalid input parameter: {0}")]
    InvalidParameter(String),
    #[error("operation requires a continuous input distribution; {0} is discrete")]
    DiscreteKind(&'static str),
    #[error("unknown input kind `{0}`")]
    UnknownKind(String),
}

/// Amplitude input distribution with σ_S² parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputSpec {
    /// p(x) = (2x/σ_S²) exp(-x²/σ_S²)
    Rayleigh { sigma_s_sq: f64 },
    /// Continuous exponential: p(x) = (√2/σ_S) exp(-√2 x/σ_S)
    Geometric { sigma_s_sq: f64 },
    /// p(x) = √2/(√π σ_S) exp(-x²/(2σ_S²))
    HalfGaussian { sigma_s_sq: f64 },
    /// p(x) = 3√6 x²/(√π σ_S³) exp(-3x²/(2σ_S²))
    MaxwellBoltzmann { sigma_s_sq: f64 },
    /// Rayleigh conditioned on X >= x̂, i.e. p(x) H(x-x̂)/(1-η).
    TruncatedRayleigh { sigma_s_sq: f64, x_hat: f64 },
    /// M equally likely, equally spaced points {0, Δ, ..., (M-1)Δ} scaled so
    /// the constellation second moment equals σ_S².
    Ask { m_points: u32, sigma_s_sq: f64 },
}

impl InputSpec {
    pub fn validate(&self) -> Result<(), InputError> {
        let s = self.sigma_s_sq();
        if !(s > 0.0) || !s.is_finite() {
            return Err(InputError::InvalidParameter(format!(
                "sigma_s_sq must be positive and finite, got {s}"
            )));
        }
        match *self {
            InputSpec::TruncatedRayleigh { x_hat, .. } if !(x_hat >= 0.0) => Err(
                InputError::InvalidParameter(format!("x_hat must be nonnegative, got {x_hat}")),
            ),
            InputSpec::Ask { m_points, .. } if m_points < 1 => Err(InputError::InvalidParameter(
                "ASK needs at least one constellation point".into(),
            )),
            _ => Ok(()),
        }
    }

    /// The σ_S² parameter (parent parameter for the truncated Rayleigh).
    pub fn sigma_s_sq(&self) -> f64 {
        match *self {
            InputSpec::Rayleigh { sigma_s_sq }
            | InputSpec::Geometric { sigma_s_sq }
            | InputSpec::HalfGaussian { sigma_s_sq }
            | InputSpec::MaxwellBoltzmann { sigma_s_sq }
            | InputSpec::TruncatedRayleigh { sigma_s_sq, .. }
            | InputSpec::Ask { sigma_s_sq, .. } => sigma_s_sq,
        }
    }

    /// E[X²]. Equals σ_S² by construction except for the truncated Rayleigh,
    /// where the exponential memorylessness of X² gives x̂² + σ_S².
    pub fn second_moment(&self) -> f64 {
        match *self {
            InputSpec::TruncatedRayleigh { sigma_s_sq, x_hat } => x_hat * x_hat + sigma_s_sq,
            _ => self.sigma_s_sq(),
        }
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, InputSpec::Ask { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            InputSpec::Rayleigh { .. } => "rayleigh",
            InputSpec::Geometric { .. } => "geometric",
            InputSpec::HalfGaussian { .. } => "half-gaussian",
            InputSpec::MaxwellBoltzmann { .. } => "maxwell-boltzmann",
            InputSpec::TruncatedRayleigh { .. } => "truncated-rayleigh",
            InputSpec::Ask { .. } => "ask",
        }
    }

    /// Probability density at x >= 0 (continuous kinds only).
    pub fn density(&self, x: f64) -> Result<f64, InputError> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let s_sq = self.sigma_s_sq();
        let s = s_sq.sqrt();
        match *self {
            InputSpec::Rayleigh { .. } => Ok(2.0 * x / s_sq * (-x * x / s_sq).exp()),
            InputSpec::Geometric { .. } => {
                let rate = std::f64::consts::SQRT_2 / s;
                Ok(rate * (-rate * x).exp())
            }
            InputSpec::HalfGaussian { .. } => Ok((2.0 / std::f64::consts::PI).sqrt() / s
                * (-x * x / (2.0 * s_sq)).exp()),
            InputSpec::MaxwellBoltzmann { .. } => {
                let c = 3.0 * 6.0f64.sqrt() / std::f64::consts::PI.sqrt();
                Ok(c * x * x / (s_sq * s) * (-1.5 * x * x / s_sq).exp())
            }
            InputSpec::TruncatedRayleigh { x_hat, .. } => {
                if x < x_hat {
                    return Ok(0.0);
                }
                let eta = outage_probability(s_sq, x_hat * x_hat);
                Ok(2.0 * x / s_sq * (-x * x / s_sq).exp() / (1.0 - eta))
            }
            InputSpec::Ask { .. } => Err(InputError::DiscreteKind("ask")),
        }
    }

    /// Draw one amplitude. Inverse-CDF transforms for the closed-form CDFs,
    /// Gaussian transforms otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let s_sq = self.sigma_s_sq();
        let s = s_sq.sqrt();
        match *self {
            InputSpec::Rayleigh { .. } => {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                (-s_sq * u.ln()).sqrt()
            }
            InputSpec::Geometric { .. } => {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                -u.ln() * s / std::f64::consts::SQRT_2
            }
            InputSpec::HalfGaussian { .. } => {
                let z: f64 = StandardNormal.sample(rng);
                (s * z).abs()
            }
            InputSpec::MaxwellBoltzmann { .. } => {
                let a = s / 3.0f64.sqrt();
                let (z1, z2, z3): (f64, f64, f64) = (
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                );
                a * (z1 * z1 + z2 * z2 + z3 * z3).sqrt()
            }
            InputSpec::TruncatedRayleigh { x_hat, .. } => {
                // X² - x̂² is exponential with mean σ_S² above the threshold.
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                (x_hat * x_hat - s_sq * u.ln()).sqrt()
            }
            InputSpec::Ask { m_points, .. } => {
                let pts = ask_points(m_points, s_sq);
                pts[rng.gen_range(0..pts.len())]
            }
        }
    }

    /// Upper integration cutoff: beyond it the tail mass is below `eps` with
    /// a wide safety margin for entropy-weighted integrands.
    pub fn upper_cutoff(&self, eps: f64) -> f64 {
        let l = -eps.ln() + 12.0;
        let s_sq = self.sigma_s_sq();
        let s = s_sq.sqrt();
        match *self {
            InputSpec::Rayleigh { .. } => (s_sq * l).sqrt(),
            InputSpec::Geometric { .. } => s * l / std::f64::consts::SQRT_2,
            InputSpec::HalfGaussian { .. } => s * (2.0 * l).sqrt(),
            InputSpec::MaxwellBoltzmann { .. } => s * (2.0 * l / 3.0).sqrt(),
            InputSpec::TruncatedRayleigh { x_hat, .. } => (x_hat * x_hat + s_sq * l).sqrt(),
            InputSpec::Ask { m_points, .. } => {
                *ask_points(m_points, s_sq).last().expect("nonempty")
            }
        }
    }

    /// Parse "rayleigh", "geometric", ... as used by the CLI.
    pub fn from_kind_str(
        kind: &str,
        sigma_s_sq: f64,
        x_hat: Option<f64>,
        m_points: Option<u32>,
    ) -> Result<Self, InputError> {
        let spec = match kind {
            "rayleigh" => InputSpec::Rayleigh { sigma_s_sq },
            "geometric" => InputSpec::Geometric { sigma_s_sq },
            "half-gaussian" => InputSpec::HalfGaussian { sigma_s_sq },
            "maxwell-boltzmann" => InputSpec::MaxwellBoltzmann { sigma_s_sq },
            "truncated-rayleigh" => InputSpec::TruncatedRayleigh {
                sigma_s_sq,
                x_hat: x_hat.ok_or_else(|| {
                    InputError::InvalidParameter("truncated-rayleigh requires x_hat".into())
                })?,
            },
            "ask" => InputSpec::Ask {
                m_points: m_points.ok_or_else(|| {
                    InputError::InvalidParameter("ask requires the constellation size".into())
                })?,
                sigma_s_sq,
            },
            other => return Err(InputError::UnknownKind(other.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InputSpec::TruncatedRayleigh { x_hat, .. } => {
                write!(f, "{}(x_hat={})", self.kind_name(), x_hat)
            }
            InputSpec::Ask { m_points, .. } => write!(f, "{}-{}", m_points, self.kind_name()),
            _ => write!(f, "{}", self.kind_name()),
        }
    }
}

/// The equally spaced M-point ASK constellation {0, Δ, ..., (M-1)Δ} anchored
/// at zero, with Δ = sqrt(6 σ_S² / ((M-1)(2M-1))) so the equiprobable second
/// moment is exactly σ_S². M = 1 collapses to {0}.
pub fn ask_points(m_points: u32, sigma_s_sq: f64) -> Vec<f64> {
    assert!(m_points >= 1 && sigma_s_sq > 0.0);
    if m_points == 1 {
        return vec![0.0];
    }
    let m = m_points as f64;
    let delta = (sigma_s_sq * 6.0 / ((m - 1.0) * (2.0 * m - 1.0))).sqrt();
    (0..m_points).map(|i| i as f64 * delta).collect()
}

/// Outage probability η = P[A < â] = 1 - exp(-â/σ_S²) for the Rayleigh input
/// (â = x̂² is the squared amplitude threshold).
pub fn outage_probability(sigma_s_sq: f64, a_hat: f64) -> f64 {
    assert!(sigma_s_sq > 0.0 && a_hat >= 0.0);
    -(-a_hat / sigma_s_sq).exp_m1()
}
