//! The noncentral chi-channel with 2n degrees of freedom: log-domain density
//! evaluation, exact sampling from the input-output relation, conditional
//! CDF/quantiles, and the noncentral chi-squared reparametrization.

use crate::quad;
use crate::specfun::{self, ln_factorial};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ChannelError {
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
    #[error("density conditioning variable must be positive (got x = {0}); the x -> 0 limit is the central chi density")]
    NonPositiveInput(f64),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
}

/// One transmitted/received amplitude pair (x = sqrt(A_sent), y = sqrt(A_received)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub x: f64,
    pub y: f64,
}

/// A noncentral chi-channel instance: half-degrees-of-freedom n (2n total)
/// and normalized noise variance σ_N².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    n: u32,
    sigma_n_sq: f64,
}

impl ChannelSpec {
    pub fn new(n: u32, sigma_n_sq: f64) -> Result<Self, ChannelError> {
        if n < 1 {
            return Err(ChannelError::InvalidParameter("n must be >= 1".into()));
        }
        if !(sigma_n_sq > 0.0) || !sigma_n_sq.is_finite() {
            return Err(ChannelError::InvalidParameter(format!(
                "sigma_n_sq must be positive and finite, got {sigma_n_sq}"
            )));
        }
        Ok(Self { n, sigma_n_sq })
    }

    /// Normalized channel (σ_N² = 1) with 2n degrees of freedom.
    pub fn normalized(n: u32) -> Result<Self, ChannelError> {
        Self::new(n, 1.0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sigma_n_sq(&self) -> f64 {
        self.sigma_n_sq
    }

    /// ln p_{Y|X}(y|x) for x > 0, y >= 0:
    ///
    ///   ln 2 - ln σ_N² + n ln y - (n-1) ln x - (x²+y²)/σ_N²
    ///        + ln I_{n-1}(2xy/σ_N²).
    ///
    /// Returns -inf at y = 0 (the y^n prefactor wins against the Bessel
    /// sentinel for every n >= 1).
    pub fn log_density(&self, x: f64, y: f64) -> Result<f64, ChannelError> {
        if !(x > 0.0) {
            return Err(ChannelError::NonPositiveInput(x));
        }
        if !(y >= 0.0) {
            return Err(ChannelError::InvalidParameter(format!(
                "y must be nonnegative, got {y}"
            )));
        }
        if y == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let s2 = self.sigma_n_sq;
        let n = self.n as f64;
        let log_i = specfun::log_bessel_i(self.n - 1, 2.0 * x * y / s2)?;
        Ok(std::f64::consts::LN_2 - s2.ln() + n * y.ln() - (n - 1.0) * x.ln()
            - (x * x + y * y) / s2
            + log_i)
    }

    /// p_{Y|X}(y|x); see [`ChannelSpec::log_density`].
    pub fn density(&self, x: f64, y: f64) -> Result<f64, ChannelError> {
        Ok(self.log_density(x, y)?.exp())
    }

    /// ln of the x -> 0 limit of the conditional density: the central chi law
    ///
    ///   p(y|0) = 2 y^{2n-1} e^{-y²/σ_N²} / (Γ(n) σ_N^{2n}).
    pub fn log_density_central(&self, y: f64) -> f64 {
        if y == 0.0 {
            return f64::NEG_INFINITY;
        }
        let s2 = self.sigma_n_sq;
        let n = self.n as f64;
        std::f64::consts::LN_2 + (2.0 * n - 1.0) * y.ln() - y * y / s2
            - n * s2.ln()
            - ln_factorial(self.n - 1)
    }

    /// Draw Y for a transmitted X = x through the input-output relation
    ///
    ///   Y² = (1/2) Σ_{i=1}^{2n} (x/√n + N_i)²,   N_i ~ N(0, σ_N²) i.i.d.
    ///
    /// Accepts x = 0 (central chi).
    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        assert!(x >= 0.0, "transmitted amplitude must be nonnegative");
        let mean = x / (self.n as f64).sqrt();
        let normal = Normal::new(0.0, self.sigma_n_sq.sqrt()).expect("valid sigma");
        let mut sum_sq = 0.0;
        for _ in 0..2 * self.n {
            let v = mean + normal.sample(rng);
            sum_sq += v * v;
        }
        (0.5 * sum_sq).sqrt()
    }

    /// E[Y² | X = x] = x² + n σ_N².
    pub fn conditional_second_moment(&self, x: f64) -> f64 {
        x * x + self.n as f64 * self.sigma_n_sq
    }

    /// Integration breakpoints covering the conditional density's support.
    fn bump_points(&self, x: f64, lo: f64, hi: f64) -> Vec<f64> {
        let sigma = self.sigma_n_sq.sqrt();
        let m = self.conditional_second_moment(x).sqrt();
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

    /// Conditional CDF P[Y <= y | X = x] by adaptive quadrature of the density.
    pub fn conditional_cdf(&self, x: f64, y: f64) -> Result<f64, ChannelError> {
        if !(x > 0.0) {
            return Err(ChannelError::NonPositiveInput(x));
        }
        if y <= 0.0 {
            return Ok(0.0);
        }
        let sigma = self.sigma_n_sq.sqrt();
        let m = self.conditional_second_moment(x).sqrt();
        // Mass below m - 20 sigma is beyond f64 resolution.
        let lo = (m - 20.0 * sigma).max(0.0);
        if y <= lo {
            return Ok(0.0);
        }
        if y >= m + 20.0 * sigma {
            return Ok(1.0);
        }
        let pts = self.bump_points(x, lo, y);
        let r = quad::integrate_segments(
            |t| self.log_density(x, t).map(f64::exp).unwrap_or(0.0),
            &pts,
            1e-11,
            1e-13,
        )?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// Conditional quantile: the y with P[Y <= y | X = x] = p, by bisection on
    /// the quadrature CDF to absolute tolerance 1e-10.
    pub fn conditional_quantile(&self, x: f64, p: f64) -> Result<f64, ChannelError> {
        if !(0.0 < p && p < 1.0) {
            return Err(ChannelError::InvalidParameter(format!(
                "quantile level must be in (0,1), got {p}"
            )));
        }
        let sigma = self.sigma_n_sq.sqrt();
        let m = self.conditional_second_moment(x).sqrt();
        let mut lo = (m - 20.0 * sigma).max(0.0);
        let mut hi = m + 20.0 * sigma;
        while hi - lo > 1e-10 * (1.0 + hi.abs()) {
            let mid = 0.5 * (lo + hi);
            if self.conditional_cdf(x, mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Equal-probability bin edges for goodness-of-fit tests (interior edges;
    /// the outer edges are 0 and +inf).
    pub fn equal_probability_edges(&self, x: f64, bins: usize) -> Result<Vec<f64>, ChannelError> {
        assert!(bins >= 2);
        (1..bins)
            .map(|i| self.conditional_quantile(x, i as f64 / bins as f64))
            .collect()
    }
}

/// Noncentral chi-squared density with k (even) degrees of freedom and
/// noncentrality λ >= 0, at z > 0:
///
///   p(z|λ) = (1/2) (z/λ)^{(k-2)/4} e^{-(z+λ)/2} I_{(k-2)/2}(√(λz)),
///
/// with mean k + λ and variance 2(k + 2λ). λ = 0 reduces to the central law.
pub fn noncentral_chi2_density(k: u32, lambda: f64, z: f64) -> Result<f64, ChannelError> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(ChannelError::InvalidParameter(format!(
            "degrees of freedom must be a positive even integer, got {k}"
        )));
    }
    if !(lambda >= 0.0) {
        return Err(ChannelError::InvalidParameter(format!(
            "noncentrality must be nonnegative, got {lambda}"
        )));
    }
    if !(z > 0.0) {
        return Err(ChannelError::InvalidParameter(format!(
            "z must be positive, got {z}"
        )));
    }
    let half_k = k / 2;
    if lambda == 0.0 {
        // Central chi-squared.
        let ln_p = (half_k as f64 - 1.0) * z.ln() - 0.5 * z
            - (half_k as f64) * std::f64::consts::LN_2
            - ln_factorial(half_k - 1);
        return Ok(ln_p.exp());
    }
    let order = half_k - 1;
    let log_i = specfun::log_bessel_i(order, (lambda * z).sqrt())?;
    let ln_p = -std::f64::consts::LN_2 + 0.25 * (k as f64 - 2.0) * (z.ln() - lambda.ln())
        - 0.5 * (z + lambda)
        + log_i;
    Ok(ln_p.exp())
}
