//! Goodness-of-fit statistics shared by the sampler tests and the
//! end-to-end waveform validation: regularized incomplete gamma, chi-square
//! survival function, and Pearson chi-square tests against binned laws.

use crate::specfun::ln_factorial;

/// ln Γ(a) for a > 0 (Lanczos, g = 7, n = 9).
#[allow(clippy::excessive_precision)] // published coefficient digits
pub fn ln_gamma(a: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(a > 0.0);
    if a < 0.5 {
        // Reflection: Γ(a)Γ(1-a) = π / sin(πa)
        let pi = std::f64::consts::PI;
        return (pi / (pi * a).sin()).ln() - ln_gamma(1.0 - a);
    }
    let x = a - 1.0;
    let mut s = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + s.ln()
}

/// Regularized lower incomplete gamma P(a, x), by series (x < a+1) or the
/// Lentz continued fraction for Q (otherwise). Standard textbook scheme.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // Series for P(a,x)
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..1000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom: P[X > stat].
pub fn chi_square_sf(stat: f64, dof: f64) -> f64 {
    assert!(dof > 0.0);
    if stat <= 0.0 {
        return 1.0;
    }
    gamma_q(0.5 * dof, 0.5 * stat)
}

/// Poisson tail P[Poisson(z) >= m] = e^{-z} sum_{k>=m} z^k/k!, the regularized
/// lower incomplete gamma P(m, z) for integer m. Computed from whichever side
/// avoids the 1 - (1 - eps) cancellation.
pub fn poisson_tail(m: u32, z: f64) -> f64 {
    assert!(z >= 0.0);
    if m == 0 {
        return 1.0;
    }
    if z == 0.0 {
        return 0.0;
    }
    if z < m as f64 + 1.0 {
        // Tail series e^{-z} z^m/m! [1 + z/(m+1) + z^2/((m+1)(m+2)) + ...]
        let mut term = (m as f64 * z.ln() - z - ln_factorial(m)).exp();
        let mut sum = term;
        let mut k = m as f64;
        for _ in 0..10_000 {
            k += 1.0;
            term *= z / k;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        sum.min(1.0)
    } else {
        // Head is small here; direct complement is stable.
        let mut term = (-z).exp();
        let mut head = term;
        for k in 1..m {
            term *= z / k as f64;
            head += term;
        }
        (1.0 - head).clamp(0.0, 1.0)
    }
}

/// Outcome of a Pearson chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Pearson chi-square test of observed bin counts against bin probabilities.
/// Probabilities must sum to ~1; dof = bins - 1.
pub fn chi_square_test(observed: &[u64], probabilities: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), probabilities.len());
    assert!(observed.len() >= 2);
    let n: f64 = observed.iter().map(|&c| c as f64).sum();
    let mut stat = 0.0;
    for (&obs, &p) in observed.iter().zip(probabilities) {
        let expect = n * p;
        assert!(expect > 0.0, "zero expected count in chi-square test");
        let d = obs as f64 - expect;
        stat += d * d / expect;
    }
    let dof = (observed.len() - 1) as f64;
    ChiSquareTest {
        statistic: stat,
        dof,
        p_value: chi_square_sf(stat, dof),
    }
}

/// Chi-square uniformity test for values already mapped through a probability
/// integral transform (uniform on [0,1] under the null), with `bins` equal cells.
pub fn uniformity_test(pit_values: &[f64], bins: usize) -> ChiSquareTest {
    assert!(bins >= 2 && !pit_values.is_empty());
    let mut counts = vec![0u64; bins];
    for &u in pit_values {
        let idx = ((u * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let probs = vec![1.0 / bins as f64; bins];
    chi_square_test(&counts, &probs)
}

/// Combine independent chi-square statistics: the sum is chi-square with the
/// summed degrees of freedom under the joint null.
pub fn combine_chi_square(tests: &[ChiSquareTest]) -> ChiSquareTest {
    let stat: f64 = tests.iter().map(|t| t.statistic).sum();
    let dof: f64 = tests.iter().map(|t| t.dof).sum();
    ChiSquareTest {
        statistic: stat,
        dof,
        p_value: chi_square_sf(stat, dof),
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    assert!(n >= 2.0);
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
