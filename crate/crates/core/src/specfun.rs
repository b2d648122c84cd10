//! Overflow-safe special functions: scaled modified Bessel functions of
//! integer order, the digamma function, and the Lerch-transcendent special
//! case Φ(α,1,n).
//!
//! Every channel-law evaluation goes through [`log_bessel_i`] so that the
//! noncentral chi density stays finite at Bessel arguments up to 1e9, which
//! the high-SNR asymptotics require.

// Reference tables below keep their published guard digits.
#![allow(clippy::excessive_precision)]

use crate::quad;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecFunError {
    #[error("argument {value} outside domain: {reason}")]
    Domain { value: f64, reason: &'static str },
}

/// ln k! for integer k, exact table below 32, Stirling series above.
pub fn ln_factorial(k: u32) -> f64 {
    const TABLE: [f64; 32] = [
        0.0,
        0.0,
        std::f64::consts::LN_2,
        1.791759469228055,
        3.1780538303479458,
        4.787491742782046,
        6.579251212010101,
        8.525161361065415,
        10.60460290274525,
        12.801827480081469,
        15.104412573075516,
        17.502307845873887,
        19.987214495661885,
        22.552163853123425,
        25.19122118273868,
        27.89927138384089,
        30.671860106080675,
        33.50507345013689,
        36.39544520803305,
        39.339884187199495,
        42.335616460753485,
        45.38013889847691,
        48.47118135183523,
        51.60667556776438,
        54.78472939811232,
        58.00360522298052,
        61.261701761002,
        64.55753862700634,
        67.88974313718154,
        71.25703896716801,
        74.65823634883016,
        78.0922235533153,
    ];
    if (k as usize) < TABLE.len() {
        return TABLE[k as usize];
    }
    // Stirling series for ln Gamma(k+1); k >= 32 keeps the remainder below 1e-16.
    let x = k as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// ln Γ(nu + 1/2) for integer nu ≥ 0, via Γ(nu+1/2) = (2nu)! √π / (4^nu nu!).
fn ln_gamma_half(nu: u32) -> f64 {
    let nu_f = nu as f64;
    ln_factorial(2 * nu) + 0.5 * std::f64::consts::PI.ln()
        - 2.0 * nu_f * std::f64::consts::LN_2
        - ln_factorial(nu)
}

/// Switch point between the power series and the large-argument expansion.
/// The asymptotic series needs x to clear mu = 4 nu^2 before its terms decay.
fn asymptotic_cutoff(nu: u32) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    40.0_f64.max(1.2 * mu + 30.0)
}

/// Large-argument expansion of ln[sqrt(2 pi x) e^{-x} I_nu(x)], i.e. the
/// log of the bracketed series in DLMF 10.40.1. Also used for K via 10.40.2
/// (same terms, all-plus signs).
fn asymptotic_series(nu: u32, x: f64, bessel_k: bool) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..30u32 {
        let k_f = k as f64;
        let odd = 2.0 * k_f - 1.0;
        let factor = (mu - odd * odd) / (8.0 * x * k_f);
        term *= if bessel_k { factor } else { -factor };
        let mag = term.abs();
        if mag >= prev {
            break; // divergent tail of the asymptotic series
        }
        sum += term;
        if mag < 1e-17 * sum.abs() {
            break;
        }
        prev = mag;
    }
    sum
}

/// Natural log of the modified Bessel function I_nu(x), nu a non-negative
/// integer, valid without overflow for x up to 1e9.
///
/// Returns `-inf` where I_nu(x) = 0 exactly (x = 0, nu >= 1); this sentinel is
/// an ordinary value for downstream log-domain arithmetic.
pub fn log_bessel_i(nu: u32, x: f64) -> Result<f64, SpecFunError> {
    Ok(log_bessel_i_scaled(nu, x)? + x)
}

/// ln[e^{-x} I_nu(x)], computed without ever forming the `x + small - x`
/// round trip that would lose absolute precision at large arguments.
pub fn log_bessel_i_scaled(nu: u32, x: f64) -> Result<f64, SpecFunError> {
    if !(x >= 0.0) {
        return Err(SpecFunError::Domain {
            value: x,
            reason: "log_bessel_i requires x >= 0",
        });
    }
    if x == 0.0 {
        return Ok(if nu == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x < asymptotic_cutoff(nu) {
        // Ascending series, all terms positive: I_nu(x) = sum_k (x/2)^{2k+nu} / (k! (k+nu)!).
        // Accumulated with periodic rescaling so the running sum never overflows.
        let q = 0.25 * x * x;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut scale_log = 0.0f64;
        for k in 1..100_000u32 {
            let k_f = k as f64;
            term *= q / (k_f * (k_f + nu as f64));
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
            if sum > 1e250 {
                sum *= 1e-250;
                term *= 1e-250;
                scale_log += 250.0 * std::f64::consts::LN_10;
            }
        }
        Ok(scale_log + sum.ln() + (nu as f64) * (0.5 * x).ln() - ln_factorial(nu) - x)
    } else {
        let series = asymptotic_series(nu, x, false);
        Ok(series.ln() - 0.5 * (2.0 * std::f64::consts::PI * x).ln())
    }
}

/// Convenience wrapper: e^{-x} I_nu(x).
pub fn bessel_i_scaled(nu: u32, x: f64) -> Result<f64, SpecFunError> {
    Ok((log_bessel_i(nu, x)? - x).exp())
}

/// Exponentially scaled modified Bessel function of the second kind,
/// e^{x} K_nu(x), finite for all x in (0, 1e9].
pub fn bessel_k_scaled(nu: u32, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain {
            value: x,
            reason: "bessel_k_scaled requires x > 0",
        });
    }
    let prefactor = (std::f64::consts::PI / (2.0 * x)).sqrt();
    if x >= asymptotic_cutoff(nu) {
        return Ok(prefactor * asymptotic_series(nu, x, true));
    }
    // DLMF 10.32.8 after t = 1 + s^2/x:
    //   e^x K_nu(x) = sqrt(pi/(2x)) * 2/Gamma(nu+1/2)
    //                 * int_0^inf e^{-s^2} s^{2 nu} (1 + s^2/(2x))^{nu - 1/2} ds,
    // a smooth positive integrand for every x > 0 and integer nu >= 0.
    let nu_f = nu as f64;
    let half_pow = nu_f - 0.5;
    let integrand = move |s: f64| {
        let s2 = s * s;
        (-s2).exp() * s2.powf(nu_f) * (1.0 + s2 / (2.0 * x)).powf(half_pow)
    };
    // The integrand peaks near sqrt(2 nu); 12 units of e^{-s^2} decay past the
    // peak bound the tail far below f64 resolution. The knee of the algebraic
    // factor sits at s ~ sqrt(2x), which matters when x << 1.
    let s_peak = (2.0 * nu_f + 1.0).sqrt();
    let s_max = s_peak + 12.0;
    let knee = (2.0 * x).sqrt();
    let mut pts = vec![0.0];
    if knee < s_max / 4.0 {
        pts.push(knee);
        pts.push(4.0 * knee.min(s_max / 8.0));
    }
    pts.push(s_max * 0.5);
    pts.push(s_max);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let integral = quad::integrate_segments(integrand, &pts, 1e-13, 0.0)
        .expect("bessel K kernel integral converges for x > 0");
    Ok(prefactor * 2.0 / ln_gamma_half(nu).exp() * integral.value)
}

/// Digamma function psi(x) for x > 0, accurate to ~1e-14.
pub fn digamma(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain {
            value: x,
            reason: "digamma requires x > 0",
        });
    }
    // Shift into the asymptotic region with psi(x) = psi(x+1) - 1/x.
    let mut shift = 0.0;
    let mut xs = x;
    while xs < 10.0 {
        shift -= 1.0 / xs;
        xs += 1.0;
    }
    // Asymptotic series with Bernoulli coefficients B_2..B_14.
    let inv = 1.0 / xs;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(shift + xs.ln() - 0.5 * inv - series)
}

/// Lerch transcendent special case Φ(α, 1, n) for 0 < α < 1 and integer n ≥ 1:
///
///   Φ(α,1,n) = -ln(1-α)/α^n - Σ_{k=0}^{n-2} α^{k+1-n} / (k+1),
///
/// the sum being empty for n = 1.
pub fn lerch_phi_1n(alpha: f64, n: u32) -> Result<f64, SpecFunError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SpecFunError::Domain {
            value: alpha,
            reason: "lerch_phi_1n requires 0 < alpha < 1",
        });
    }
    if n == 0 {
        return Err(SpecFunError::Domain {
            value: 0.0,
            reason: "lerch_phi_1n requires n >= 1",
        });
    }
    // The closed form cancels catastrophically for small α and large n: the
    // -ln(1-α)/α^n and Σ α^{k+1-n}/(k+1) pieces dwarf their difference. Below
    // the crossover the defining series Σ_{k>=0} α^k/(k+n) converges in a few
    // hundred terms, so use it there; above, the closed form loses at most a
    // few digits.
    if alpha < 0.75 {
        let mut sum = 0.0f64;
        let mut pow = 1.0f64;
        for k in 0..100_000u64 {
            let term = pow / (k as f64 + n as f64);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            pow *= alpha;
        }
        return Ok(sum);
    }
    let ln_one_minus = (-alpha).ln_1p(); // ln(1-α), accurate for α near 1
    let mut value = -ln_one_minus * alpha.powi(-(n as i32));
    // k = 0..n-2 contributes α^{k+1-n}/(k+1); powers walk up from α^{1-n}.
    let mut power = alpha.powi(1 - n as i32);
    for k in 0..n.saturating_sub(1) {
        value -= power / (k as f64 + 1.0);
        power *= alpha;
    }
    Ok(value)
}
