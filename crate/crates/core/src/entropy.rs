//! Closed-form and asymptotic differential entropies for the Rayleigh-input
//! chi-channel, on the σ_N² = 1 normalized channel.
//!
//! All internal integrals are carried in nats and converted to bits only at
//! the reporting boundary. The crossings between the formulas here and the
//! brute quadrature in [`crate::mi`] are the main correctness check of the
//! whole crate.

use crate::quad;
use crate::specfun::{self, digamma, lerch_phi_1n};
use crate::stats::poisson_tail;
use thiserror::Error;

pub const LOG2_E: f64 = std::f64::consts::LOG2_E;

#[derive(Debug, Clone, Error)]
pub enum EntropyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
}

/// α(ρ) = ρ/(ρ+1), the geometric weight of the Rayleigh-input output law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn from_rho(rho: f64) -> Result<Self, EntropyError> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(EntropyError::InvalidParameter(format!(
                "rho must be positive and finite, got {rho}"
            )));
        }
        Ok(AlphaParam(rho / (rho + 1.0)))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// How an [`EntropyReport`] row was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMethod {
    ClosedForm,
    Quadrature,
    Asymptotic,
}

impl EntropyMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EntropyMethod::ClosedForm => "closed_form",
            EntropyMethod::Quadrature => "quadrature",
            EntropyMethod::Asymptotic => "asymptotic",
        }
    }
}

/// Entropies and MI at one (ρ, n) point, all in bits per channel use.
#[derive(Debug, Clone, Copy)]
pub struct EntropyReport {
    pub rho: f64,
    pub n: u32,
    pub h_y_given_x_bits: f64,
    pub h_y_bits: f64,
    pub mi_bits: f64,
    pub method: EntropyMethod,
}

/// F_n(ρ) = ∫₀^∞ ξ K_{n-1}(√(1+1/ρ) ξ) I_{n-1}(ξ) ln I_{n-1}(ξ) dξ,
/// the non-elementary part of the Rayleigh-input conditional entropy.
///
/// The integrand is assembled from exponentially scaled Bessel factors:
///   ξ e^{-(b-1)ξ} [e^{bξ}K_{n-1}(bξ)] [e^{-ξ}I_{n-1}(ξ)] ln I_{n-1}(ξ),
/// with b = √(1+1/ρ); b-1 ≈ 1/(2ρ) is tiny at high SNR, so the integral
/// effectively runs to O(ρ ln(1/tol)).
pub fn f_n_integral(n: u32, rho: f64, tol: f64) -> Result<f64, EntropyError> {
    if n < 1 {
        return Err(EntropyError::InvalidParameter("n must be >= 1".into()));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(EntropyError::InvalidParameter(format!(
            "rho must be positive and finite, got {rho}"
        )));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(EntropyError::InvalidParameter(format!(
            "tol must be in (0, 1e-4], got {tol}"
        )));
    }
    let nu = n - 1;
    let b = (1.0 + 1.0 / rho).sqrt();
    // b - 1 without cancellation: (b^2 - 1)/(b + 1) = 1/(rho (b+1)).
    let b_minus_1 = 1.0 / (rho * (b + 1.0));

    let integrand = move |xi: f64| {
        if xi <= 0.0 {
            return 0.0;
        }
        let log_i = specfun::log_bessel_i(nu, xi).expect("xi > 0");
        if log_i == f64::NEG_INFINITY {
            return 0.0;
        }
        let i_scaled = specfun::log_bessel_i_scaled(nu, xi)
            .expect("xi > 0")
            .exp();
        let k_scaled = specfun::bessel_k_scaled(nu, b * xi).expect("xi > 0");
        xi * (-b_minus_1 * xi).exp() * k_scaled * i_scaled * log_i
    };

    // Envelope past the Bessel crossover: ~ (xi/2) e^{-(b-1) xi}. Truncate
    // where the analytic tail bound drops below tol relative to the 2 rho^2
    // scale of the integral.
    let decay = b_minus_1.max(1e-12);
    let target = (tol * 1e-3).min(1e-12);
    let xi_max = ((-target.ln() + 2.0 * (1.0 / decay).ln() + 20.0) / decay).max(50.0);
    let pts = quad::geometric_points(0.0, xi_max, 0.5);
    let r = quad::integrate_segments(integrand, &pts, (tol * 0.1).min(1e-11), 0.0)?;
    Ok(r.value)
}

/// Closed-form conditional differential entropy h_{Y|X}(ρ) in bits for the
/// σ_N² = 1 channel with Rayleigh input:
///
///   h = (2ρ + n - (n/2)ψ(n)) log₂e - 1 + ((n-1)/2)(log₂ρ + ψ(1) log₂e)
///       - (n/2) α Φ(α,1,n) log₂e - ρ⁻¹ α^{(1-n)/2} F_n(ρ) log₂e.
pub fn cond_entropy_closed_form(n: u32, rho: f64, tol: f64) -> Result<f64, EntropyError> {
    let alpha = AlphaParam::from_rho(rho)?.value();
    let n_f = n as f64;
    let f_n = f_n_integral(n, rho, tol)?;
    let nats = 2.0 * rho + n_f - 0.5 * n_f * digamma(n_f)? - std::f64::consts::LN_2
        + 0.5 * (n_f - 1.0) * (rho.ln() + digamma(1.0)?)
        - 0.5 * n_f * alpha * lerch_phi_1n(alpha, n)?
        - alpha.powf(0.5 * (1.0 - n_f)) * f_n / rho;
    Ok(nats * LOG2_E)
}

/// Conditional entropy for a channel with arbitrary σ_N²: differential
/// entropy shifts by log₂ σ_N under the rescaling Y -> σ_N · Y.
pub fn cond_entropy_closed_form_scaled(
    n: u32,
    rho: f64,
    sigma_n_sq: f64,
    tol: f64,
) -> Result<f64, EntropyError> {
    if !(sigma_n_sq > 0.0) {
        return Err(EntropyError::InvalidParameter(
            "sigma_n_sq must be positive".into(),
        ));
    }
    Ok(cond_entropy_closed_form(n, rho, tol)? + 0.5 * sigma_n_sq.log2())
}

/// Rayleigh-input output density on the normalized channel:
///
///   p_Y(y) = (2y / (ρ α^{n-2})) e^{-y²/(ρ+1)} (1 - e^{-αy²} Σ_{k=0}^{n-2} (αy²)^k / k!),
///
/// the parenthesis being the Poisson tail P[Poisson(αy²) >= n-1] (empty sum
/// for n = 1, so the parenthesis is 1).
pub fn output_density_rayleigh(n: u32, rho: f64, y: f64) -> Result<f64, EntropyError> {
    let alpha = AlphaParam::from_rho(rho)?.value();
    if n < 1 {
        return Err(EntropyError::InvalidParameter("n must be >= 1".into()));
    }
    if y < 0.0 {
        return Ok(0.0);
    }
    let tail = poisson_tail(n - 1, alpha * y * y);
    Ok(2.0 * y / (rho * alpha.powi(n as i32 - 2)) * (-y * y / (rho + 1.0)).exp() * tail)
}

/// Exact output entropy h_Y(ρ) in bits, assembled from the decomposition
///
///   h_Y = ln(ρ α^{n-2}/2) - E[ln Y] + E[Y²]/(ρ+1) + h_Y^{(4)}   (nats)
///
/// with E[ln Y] = (α Φ(α,1,n) + ψ(n))/2, E[Y²] = ρ + n, and
/// h_Y^{(4)} = -(ρ α^{n-1})⁻¹ ∫₀^∞ e^{-z/ρ} f(z) ln f(z) dz, where
/// f(z) = 1 - e^{-z} Σ_{k=0}^{n-2} z^k/k!.
pub fn output_entropy_exact(n: u32, rho: f64, tol: f64) -> Result<f64, EntropyError> {
    let alpha = AlphaParam::from_rho(rho)?.value();
    if n < 1 {
        return Err(EntropyError::InvalidParameter("n must be >= 1".into()));
    }
    let n_f = n as f64;
    let e_ln_y = 0.5 * (alpha * lerch_phi_1n(alpha, n)? + digamma(n_f)?);
    let h4 = output_entropy_h4(n, rho, tol)?;
    let nats = (rho * alpha.powi(n as i32 - 2) / 2.0).ln() - e_ln_y + (rho + n_f) / (rho + 1.0)
        + h4;
    Ok(nats * LOG2_E)
}

/// The nonnegative correction h_Y^{(4)}(ρ) in nats; identically 0 for n = 1
/// (f(z) = 1), bounded by (n-1)/(ρ α^{n-1}).
pub fn output_entropy_h4(n: u32, rho: f64, tol: f64) -> Result<f64, EntropyError> {
    let alpha = AlphaParam::from_rho(rho)?.value();
    if n == 1 {
        return Ok(0.0);
    }
    let m = n - 1;
    let integrand = move |z: f64| {
        let f = poisson_tail(m, z);
        if f <= 0.0 || f >= 1.0 {
            return 0.0;
        }
        -(-z / rho).exp() * f * f.ln()
    };
    // -f ln f decays like the Poisson head e^{-z} z^{n-2} once z >> n.
    let z_max = 3.0 * n as f64 + 80.0;
    let pts = quad::geometric_points(0.0, z_max, 0.0625);
    let r = quad::integrate_segments(integrand, &pts, (tol * 0.1).min(1e-11), 1e-300)?;
    Ok(r.value / (rho * alpha.powi(m as i32)))
}

/// Two-term asymptotic output entropy (bits):
/// h_Y = (1/2) log₂ ρ + (1 - ψ(1)/2) log₂ e - 1 + O(1/ρ).
pub fn output_entropy_asymptotic(rho: f64) -> f64 {
    assert!(rho > 0.0);
    let psi1 = digamma(1.0).expect("psi(1)");
    0.5 * rho.log2() + (1.0 - 0.5 * psi1) * LOG2_E - 1.0
}

/// High-SNR MI asymptote (bits):
/// I(ρ) = (1/2) log₂( e^{1-ψ(1)} ρ / (4π) ) + O(1/ρ).
pub fn mi_asymptote(rho: f64) -> f64 {
    assert!(rho > 0.0);
    let psi1 = digamma(1.0).expect("psi(1)");
    0.5 * (rho.log2() + ((1.0 - psi1).exp() / (4.0 * std::f64::consts::PI)).log2())
}

/// Full closed-form route at one (ρ, n): exact output entropy minus exact
/// conditional entropy.
pub fn mi_closed_form(n: u32, rho: f64, tol: f64) -> Result<EntropyReport, EntropyError> {
    let h_y = output_entropy_exact(n, rho, tol)?;
    let h_yx = cond_entropy_closed_form(n, rho, tol)?;
    Ok(EntropyReport {
        rho,
        n,
        h_y_given_x_bits: h_yx,
        h_y_bits: h_y,
        mi_bits: h_y - h_yx,
        method: EntropyMethod::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    const EULER_GAMMA: f64 = 0.5772156649015329;

    /// Brute-force trapezoid oracle for F_n on [0, xi_max] — deliberately
    /// independent of the adaptive engine and the scaled evaluation path.
    fn f_n_trapezoid_oracle(n: u32, rho: f64, xi_max: f64, points: usize) -> f64 {
        let nu = n - 1;
        let b = (1.0 + 1.0 / rho).sqrt();
        let h = xi_max / points as f64;
        let f = |xi: f64| {
            if xi == 0.0 {
                return 0.0;
            }
            let log_i = specfun::log_bessel_i(nu, xi).unwrap();
            let i = log_i.exp();
            // Unscaled K via the integral representation's complement: use
            // scaled K but undo the scaling explicitly at moderate arguments.
            let k = specfun::bessel_k_scaled(nu, b * xi).unwrap() * (-b * xi).exp();
            xi * k * i * log_i
        };
        let mut s = 0.5 * (f(0.0) + f(xi_max));
        for i in 1..points {
            s += f(i as f64 * h);
        }
        s * h
    }

    #[test]
    fn f_n_small_rho_against_trapezoid_oracle() {
        // rho = 1: integrand decays like e^{-0.414 xi}; [0, 200] is converged.
        let oracle = f_n_trapezoid_oracle(2, 1.0, 200.0, 2_000_000);
        let got = f_n_integral(2, 1.0, 1e-10).unwrap();
        assert!(
            (got - oracle).abs() / oracle.abs() < 1e-8,
            "got {got} oracle {oracle}"
        );
    }

    #[test]
    fn f_n_large_rho_law() {
        // F_n(rho)/(2 rho^2) -> 1 for n in {1,2,3} at rho = 1e5.
        for &n in &[1u32, 2, 3] {
            let rho = 1e5;
            let f = f_n_integral(n, rho, 1e-8).unwrap();
            let ratio = f / (2.0 * rho * rho);
            assert!((ratio - 1.0).abs() < 1e-2, "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn f_n_subleading_term() {
        // (F_n - 2 rho^2)/rho -> (1/2)(-ln rho + 1 - ln 4pi - psi(1)) within 5%.
        let rho = 1e5f64;
        let expect = 0.5
            * (-rho.ln() + 1.0 - (4.0 * std::f64::consts::PI).ln() + EULER_GAMMA);
        for &n in &[1u32, 2, 3] {
            let f = f_n_integral(n, rho, 1e-10).unwrap();
            let sub = (f - 2.0 * rho * rho) / rho;
            assert!(
                ((sub - expect) / expect).abs() < 0.05,
                "n={n} sub={sub} expect={expect}"
            );
        }
    }

    #[test]
    fn f_n_rejects_bad_arguments() {
        assert!(f_n_integral(0, 1.0, 1e-8).is_err());
        assert!(f_n_integral(2, -1.0, 1e-8).is_err());
        assert!(f_n_integral(2, 1.0, 1e-3).is_err());
    }

    #[test]
    fn cond_entropy_high_snr_limit() {
        // h_{Y|X}(1e6) -> (1/2) log2(pi e) ~ 1.5471, n-independent.
        let limit = 0.5 * (std::f64::consts::PI * std::f64::consts::E).log2();
        for &n in &[1u32, 2, 3] {
            let h = cond_entropy_closed_form(n, 1e6, 1e-9).unwrap();
            assert!((h - limit).abs() < 1e-2, "n={n} h={h} limit={limit}");
        }
        // n-independence at rho = 1e4.
        let h1 = cond_entropy_closed_form(1, 1e4, 1e-9).unwrap();
        let h12 = cond_entropy_closed_form(12, 1e4, 1e-9).unwrap();
        assert!((h1 - h12).abs() <= 1e-2, "h1={h1} h12={h12}");
    }

    #[test]
    fn cond_entropy_scaled_offset() {
        let base = cond_entropy_closed_form(2, 10.0, 1e-9).unwrap();
        let scaled = cond_entropy_closed_form_scaled(2, 10.0, 4.0, 1e-9).unwrap();
        assert!((scaled - base - 1.0).abs() < 1e-12);
    }

    #[test]
    fn output_density_normalizes_and_marginalizes() {
        // Normalization at (n=3, rho=5).
        let n = 3u32;
        let rho = 5.0;
        let pts = quad::geometric_points(0.0, 40.0, 0.05);
        let mass = quad::integrate_segments(
            |y| output_density_rayleigh(n, rho, y).unwrap(),
            &pts,
            1e-12,
            0.0,
        )
        .unwrap()
        .value;
        assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");

        // Matches the marginalization integral of the channel law at 20 points
        // for (n=2, rho=2).
        let spec = crate::channel::ChannelSpec::normalized(2).unwrap();
        let input = crate::inputs::InputSpec::Rayleigh { sigma_s_sq: 2.0 };
        for i in 1..=20 {
            let y = 0.25 * i as f64;
            let got = output_density_rayleigh(2, 2.0, y).unwrap();
            let hi = input.upper_cutoff(1e-18).max(y + 16.0);
            let oracle = quad::integrate_segments(
                |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        spec.density(x, y).unwrap() * input.density(x).unwrap()
                    }
                },
                &quad::geometric_points(0.0, hi, 0.05),
                1e-11,
                1e-14,
            )
            .unwrap()
            .value;
            assert!(
                (got - oracle).abs() <= 1e-9 + 1e-8 * oracle,
                "y={y}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn output_density_second_moment() {
        // E[Y^2] = rho + n at (n=2, rho=10).
        let pts = quad::geometric_points(0.0, 60.0, 0.05);
        let m2 = quad::integrate_segments(
            |y| y * y * output_density_rayleigh(2, 10.0, y).unwrap(),
            &pts,
            1e-12,
            0.0,
        )
        .unwrap()
        .value;
        assert!((m2 - 12.0).abs() < 1e-9, "m2 {m2}");
    }

    #[test]
    fn output_entropy_matches_direct_quadrature() {
        // -int p_Y log2 p_Y at (n=3, rho=7) within 1e-8 bits.
        let n = 3u32;
        let rho = 7.0;
        let got = output_entropy_exact(n, rho, 1e-10).unwrap();
        let pts = quad::geometric_points(0.0, 60.0, 0.02);
        let oracle = quad::integrate_segments(
            |y| {
                let p = output_density_rayleigh(n, rho, y).unwrap();
                if p <= 0.0 {
                    0.0
                } else {
                    -p * p.log2()
                }
            },
            &pts,
            1e-12,
            0.0,
        )
        .unwrap()
        .value;
        assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn h4_bound_and_n1_degeneracy() {
        // h_Y^{(4)} <= (n-1)/(rho alpha^{n-1}) in nats at (n=3, rho=100).
        let n = 3u32;
        let rho = 100.0;
        let alpha = rho / (rho + 1.0);
        let h4 = output_entropy_h4(n, rho, 1e-10).unwrap();
        let bound = (n as f64 - 1.0) / (rho * alpha.powi(n as i32 - 1));
        assert!(h4 > 0.0 && h4 <= bound, "h4={h4} bound={bound}");
        assert_eq!(output_entropy_h4(1, 3.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn output_entropy_gap_decays_and_n_independent() {
        // |exact - asymptotic| shrinks from rho=1e3 to rho=1e4 (n=2) and both
        // are below 10/rho * log2 e.
        let gap = |rho: f64| {
            (output_entropy_exact(2, rho, 1e-10).unwrap() - output_entropy_asymptotic(rho)).abs()
        };
        let g3 = gap(1e3);
        let g4 = gap(1e4);
        assert!(g3 >= g4, "g3={g3} g4={g4}");
        assert!(g3 <= 10.0 / 1e3 * LOG2_E && g4 <= 10.0 / 1e4 * LOG2_E);
        // n-independence of the exact value at high SNR.
        let e1 = output_entropy_exact(1, 1e4, 1e-10).unwrap();
        let e3 = output_entropy_exact(3, 1e4, 1e-10).unwrap();
        assert!((e1 - e3).abs() <= 1e-2, "e1={e1} e3={e3}");
    }

    #[test]
    fn asymptotic_output_entropy_at_rho_one() {
        // (1/2)log2(1) + (1 + gamma/2) log2 e - 1.
        let expect = (1.0 + 0.5 * EULER_GAMMA) * LOG2_E - 1.0;
        assert!((output_entropy_asymptotic(1.0) - expect).abs() < 1e-14);
    }

    #[test]
    fn mi_asymptote_identities() {
        // mi_asymptote = output_entropy_asymptotic - (1/2) log2(pi e), exactly.
        for &rho in &[1.0, 10.0, 100.0] {
            let lhs = mi_asymptote(rho);
            let rhs = output_entropy_asymptotic(rho)
                - 0.5 * (std::f64::consts::PI * std::f64::consts::E).log2();
            assert!((lhs - rhs).abs() < 1e-12, "rho={rho}");
        }
        // Half-log slope: value(4 rho) - value(rho) = 1 bit exactly.
        for &rho in &[0.3, 7.0, 1e4] {
            assert!((mi_asymptote(4.0 * rho) - mi_asymptote(rho) - 1.0).abs() < 1e-12);
        }
        // rho = 25 dB reference, cross-checked at high precision.
        let rho = 10f64.powf(2.5);
        assert!((mi_asymptote(rho) - 3.464382662955959).abs() < 1e-12);
    }

    #[test]
    fn alpha_param_invariant() {
        for &rho in &[1e-3, 0.5, 1.0, 42.0, 1e8] {
            let a = AlphaParam::from_rho(rho).unwrap().value();
            assert!((a * (rho + 1.0) - rho).abs() <= 1e-15 * rho.max(1.0));
        }
        assert!(AlphaParam::from_rho(0.0).is_err());
        assert!(AlphaParam::from_rho(f64::INFINITY).is_err());
    }
}
