//! Acceptance suite: every exit criterion of the project, one test per
//! criterion, each printing a PASS/FAIL line with the measured numbers.
//! Criteria run at their stated tolerances; none are tuned at test time.
//!
//! The two waveform variants (2000 km, 1.45 dBm) are behind `--ignored`.

use chi_capacity_core::channel::ChannelSpec;
use chi_capacity_core::entropy;
use chi_capacity_core::inputs::InputSpec;
use chi_capacity_core::mi;
use chi_capacity_core::rngstream;
use chi_capacity_core::stats;
use chi_capacity_waveform::nft::{self, CampaignConfig, ExtractConfig};
use chi_capacity_waveform::solitonsim::{self, PropagationParams, PulseTrainConfig};
use chi_capacity_waveform::validation::{conditional_gof, ValidationConfig};
use chi_capacity_waveform::FiberSystem;
use num_complex::Complex64;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn a01_headline_rates() {
    let spec = ChannelSpec::normalized(2).unwrap();
    let rho = 10f64.powf(2.5);
    let half_gauss = mi::mi_quadrature(&spec, &InputSpec::HalfGaussian { sigma_s_sq: rho }, 1e-6)
        .unwrap()
        .value_bits;
    let ask16 = mi::mi_ask(&spec, 16, rho, 1e-6).unwrap().value_bits;
    let hg_ok = (half_gauss - 3.68).abs() <= 0.05;
    let ask_ok = (ask16 - 3.45).abs() <= 0.05;
    report(
        "headline rates at 25 dB, n=2",
        hg_ok && ask_ok,
        &format!("half-Gaussian {half_gauss:.4} (3.68±0.05), 16-ASK {ask16:.4} (3.45±0.05)"),
    );
    assert!(hg_ok && ask_ok);
}

#[test]
fn a02_cond_entropy_oracle_equivalence() {
    let mut max_delta = 0.0f64;
    for &n in &[1u32, 2, 3] {
        let spec = ChannelSpec::normalized(n).unwrap();
        for &rho in &[1.0, 10.0, 100.0] {
            let closed = entropy::cond_entropy_closed_form(n, rho, 1e-11).unwrap();
            let quad = mi::cond_entropy_quadrature(
                &spec,
                &InputSpec::Rayleigh { sigma_s_sq: rho },
                1e-8,
            )
            .unwrap();
            let delta = (closed - quad).abs();
            max_delta = max_delta.max(delta);
        }
    }
    let pass = max_delta <= 1e-6;
    report(
        "closed-form conditional entropy vs 2-D quadrature oracle",
        pass,
        &format!("max |delta| = {max_delta:.2e} bits on the 9-point grid (tol 1e-6)"),
    );
    assert!(pass);
}

#[test]
fn a03_mi_asymptote_convergence() {
    let grid = [1e2, 1e3, 1e4, 1e5];
    let gaps: Vec<f64> = grid
        .iter()
        .map(|&rho| {
            let exact = entropy::mi_closed_form(2, rho, 1e-11).unwrap().mi_bits;
            (exact - entropy::mi_asymptote(rho)).abs()
        })
        .collect();
    let decreasing = gaps.windows(2).all(|w| w[0] > w[1]);
    let k_fit = gaps
        .iter()
        .zip(&grid)
        .map(|(g, r)| g * r)
        .fold(0.0f64, f64::max);
    let bounded = gaps
        .iter()
        .zip(&grid)
        .all(|(g, r)| *g <= k_fit / r + 1e-15);
    let tail_ok = gaps[3] <= 1e-3;
    // Half-log slope at rho = 1e4.
    let slope = entropy::mi_closed_form(2, 4e4, 1e-11).unwrap().mi_bits
        - entropy::mi_closed_form(2, 1e4, 1e-11).unwrap().mi_bits;
    let slope_ok = (slope - 1.0).abs() <= 1e-2;
    let pass = decreasing && bounded && tail_ok && slope_ok;
    report(
        "MI converges to the half-log asymptote",
        pass,
        &format!(
            "gaps {:?} bits decreasing={decreasing} (the signed remainder crosses zero near \
             rho~8e3 and |gap| re-grows by ~8e-7 bits between 1e4 and 1e5 before decaying \
             again), fitted K={k_fit:.3}, gap(1e5)={:.2e}<=1e-3, MI(4e4)-MI(1e4)={slope:.5} \
             (1±0.01)",
            gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>(),
            gaps[3]
        ),
    );
    assert!(pass, "strict gap decrease fails on the pinned grid; see ledger");
}

#[test]
fn a04_output_entropy_asymptote() {
    let grid = [1e2, 1e3, 1e4, 1e5];
    let gaps: Vec<f64> = grid
        .iter()
        .map(|&rho| {
            (entropy::output_entropy_exact(2, rho, 1e-11).unwrap()
                - entropy::output_entropy_asymptotic(rho))
            .abs()
        })
        .collect();
    let c_fit = gaps
        .iter()
        .zip(&grid)
        .map(|(g, r)| g * r)
        .fold(0.0f64, f64::max);
    let bounded = gaps
        .iter()
        .zip(&grid)
        .all(|(g, r)| *g <= c_fit / r + 1e-15);
    let decreasing = gaps.windows(2).all(|w| w[0] > w[1]);
    // Pointwise analytic bound on the h_Y^{(4)} correction, in bits.
    let mut h4_ok = true;
    for &n in &[2u32, 3] {
        for &rho in &grid {
            let alpha = rho / (rho + 1.0);
            let h4_bits = entropy::output_entropy_h4(n, rho, 1e-11).unwrap() * entropy::LOG2_E;
            let bound = (n as f64 - 1.0) / (rho * alpha.powi(n as i32 - 1)) * entropy::LOG2_E;
            h4_ok &= h4_bits >= 0.0 && h4_bits <= bound;
        }
    }
    let pass = bounded && decreasing && h4_ok;
    report(
        "output entropy converges with bounded h4 correction",
        pass,
        &format!(
            "gaps {:?} decreasing={decreasing}, fitted C'={c_fit:.3}, h4 bound pointwise={h4_ok}",
            gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}

#[test]
fn a05_mi_band_across_degrees_of_freedom() {
    let rho = 1e3; // 30 dB
    let values: Vec<f64> = [1u32, 2, 3, 12]
        .iter()
        .map(|&n| entropy::mi_closed_form(n, rho, 1e-11).unwrap().mi_bits)
        .collect();
    let band = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    let pass = band <= 0.06;
    report(
        "MI for n=1,2,3,12 sits in a 0.06-bit band at 30 dB",
        pass,
        &format!(
            "values {:?}, band {band:.4} bits",
            values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}

#[test]
fn a06_input_orderings() {
    let samples = 400_000;
    let mut all_pass = true;
    let mut lines = Vec::new();
    for &n in &[1u32, 2, 3] {
        let spec = ChannelSpec::normalized(n).unwrap();
        // geometric > half-Gaussian at 0 dB
        let geo = mi::mi_monte_carlo(&spec, &InputSpec::Geometric { sigma_s_sq: 1.0 }, samples, 101)
            .unwrap();
        let hg0 = mi::mi_monte_carlo(
            &spec,
            &InputSpec::HalfGaussian { sigma_s_sq: 1.0 },
            samples,
            102,
        )
        .unwrap();
        let t1 = geo.value_bits - hg0.value_bits
            > 3.0 * (geo.std_error_bits + hg0.std_error_bits);
        // half-Gaussian > Rayleigh > Maxwell-Boltzmann at 25 dB
        let rho = 10f64.powf(2.5);
        let hg = mi::mi_monte_carlo(
            &spec,
            &InputSpec::HalfGaussian { sigma_s_sq: rho },
            samples,
            103,
        )
        .unwrap();
        let ray = mi::mi_monte_carlo(&spec, &InputSpec::Rayleigh { sigma_s_sq: rho }, samples, 104)
            .unwrap();
        let mb = mi::mi_monte_carlo(
            &spec,
            &InputSpec::MaxwellBoltzmann { sigma_s_sq: rho },
            samples,
            105,
        )
        .unwrap();
        let t2 = hg.value_bits - ray.value_bits
            > 3.0 * (hg.std_error_bits + ray.std_error_bits)
            && ray.value_bits - mb.value_bits > 3.0 * (ray.std_error_bits + mb.std_error_bits);
        // OOK > half-Gaussian at -5 dB
        let rho_low = 10f64.powf(-0.5);
        let ook = mi::mi_ask(&spec, 2, rho_low, 1e-7).unwrap();
        let hg_low = mi::mi_monte_carlo(
            &spec,
            &InputSpec::HalfGaussian {
                sigma_s_sq: rho_low,
            },
            samples,
            106,
        )
        .unwrap();
        let t3 = ook.value_bits - hg_low.value_bits > 3.0 * hg_low.std_error_bits;
        all_pass &= t1 && t2 && t3;
        lines.push(format!(
            "n={n}: geo {:.4} > hG {:.4} at 0 dB ({t1}); hG {:.4} > Ray {:.4} > MB {:.4} at 25 dB \
             ({t2}); OOK {:.4} > hG {:.4} at -5 dB ({t3})",
            geo.value_bits,
            hg0.value_bits,
            hg.value_bits,
            ray.value_bits,
            mb.value_bits,
            ook.value_bits,
            hg_low.value_bits
        ));
    }
    report(
        "input-distribution orderings with non-overlapping error bars",
        all_pass,
        &format!(
            "{} || note: binary-vs-half-Gaussian only reverses near 4-6 dB and only for \
             n in {{1,2}}; at -5 dB the half-Gaussian is ahead for every n",
            lines.join(" | ")
        ),
    );
    assert!(all_pass, "the OOK > half-Gaussian clause fails at -5 dB; see ledger");
}

#[test]
fn a07_sampler_goodness_of_fit() {
    let bins = 50;
    let samples = 100_000;
    let mut all_pass = true;
    let mut worst_p = 1.0f64;
    for (i, &n) in [1u32, 2, 3].iter().enumerate() {
        let spec = ChannelSpec::normalized(n).unwrap();
        for (j, &x) in [0.5, 2.0, 10.0].iter().enumerate() {
            let edges = spec.equal_probability_edges(x, bins).unwrap();
            let mut counts = vec![0u64; bins];
            let mut rng = rngstream::stream(2026, (i * 3 + j) as u64);
            for _ in 0..samples {
                let y = spec.sample(x, &mut rng);
                counts[edges.partition_point(|&e| e < y)] += 1;
            }
            let test = stats::chi_square_test(&counts, &vec![1.0 / bins as f64; bins]);
            worst_p = worst_p.min(test.p_value);
            all_pass &= test.passes(0.01);
        }
    }
    report(
        "channel sampler matches the law (chi-square, 50 bins, 1e5 samples)",
        all_pass,
        &format!("9-point grid n in {{1,2,3}} x x in {{0.5,2,10}}, worst p = {worst_p:.4}"),
    );
    assert!(all_pass);
}

#[test]
fn a08_truncation_rate_loss_and_brackets() {
    let spec = ChannelSpec::normalized(2).unwrap();
    let x_hat = 0.5;
    // Strict decrease over {0, 10, 20, 30} dB, as stated.
    let grid_db = [0.0, 10.0, 20.0, 30.0];
    let losses: Vec<f64> = grid_db
        .iter()
        .map(|&db| {
            mi::rate_loss_truncated(&spec, 10f64.powf(db / 10.0), x_hat, 1e-7).unwrap()
        })
        .collect();
    let decreasing = losses.windows(2).all(|w| w[0] > w[1]);
    // KL bound at every grid point.
    let mut kl_ok = true;
    for &db in &grid_db {
        let rho = 10f64.powf(db / 10.0);
        let kl = mi::kl_marginal_truncated(&spec, rho, x_hat, 1e-7).unwrap();
        let bound = x_hat * x_hat / rho * std::f64::consts::LOG2_E;
        kl_ok &= (-1e-9..=bound).contains(&kl);
    }
    // Analytic bracket around the conditional-entropy function g.
    let mut bracket_ok = true;
    for &x in &[0.1, 1.0, 5.0] {
        let (lo, hi) = mi::g_bounds(&spec, x);
        let g = mi::g_quadrature(&spec, x, 1e-10).unwrap();
        bracket_ok &= lo <= g && g <= hi;
    }
    let pass = decreasing && kl_ok && bracket_ok;
    report(
        "truncated-input rate loss decreasing with KL and entropy brackets",
        pass,
        &format!(
            "losses {:?} bits over {{0,10,20,30}} dB decreasing={decreasing} \
             (measured: the loss peaks near 10 dB; the 0->10 dB decrease asserted here does not \
             hold numerically), KL bound={kl_ok}, g-bracket={bracket_ok}",
            losses.iter().map(|l| format!("{l:.5}")).collect::<Vec<_>>()
        ),
    );
    assert!(pass, "rate-loss criterion failed: losses = {losses:?}");
}

#[test]
fn a09_simulator_physics() {
    // Noiseless soliton invariance at the stated discretization.
    let config = PulseTrainConfig {
        amplitudes: vec![1.0],
        ts: 40.0,
        beta0: 0.0,
        guard: 0.5,
        interaction_budget: 1e-3,
    };
    let frame = solitonsim::synthesize(&config, 0.01).unwrap();
    let out = solitonsim::propagate(
        &frame,
        &PropagationParams::new(10.0, 1e-3, 0.0),
        &mut rngstream::stream(0, 0),
    )
    .unwrap();
    let rot = Complex64::from_polar(1.0, 5.0);
    let max_dev = frame
        .samples
        .iter()
        .zip(&out.frame.samples)
        .map(|(a, b)| (b - a * rot).norm())
        .fold(0.0f64, f64::max);
    let phase_ok = max_dev <= 1e-6;

    // Second-order convergence in dz.
    let run = |dz: f64| {
        solitonsim::propagate(
            &frame,
            &PropagationParams::new(1.0, dz, 0.0),
            &mut rngstream::stream(0, 0),
        )
        .unwrap()
        .frame
    };
    let reference = run(1.0 / 4096.0);
    let err = |f: &solitonsim::WaveformFrame| {
        f.samples
            .iter()
            .zip(&reference.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max)
    };
    let ratio = err(&run(1.0 / 16.0)) / err(&run(1.0 / 32.0));
    let order_ok = (2.8..6.0).contains(&ratio);

    // Clean-sech NFT calibration.
    let a = 2.0;
    let dt = 0.005;
    let half = 15.0 / a;
    let n = (2.0 * half / dt) as usize;
    let sech = solitonsim::WaveformFrame {
        dt,
        t0: -half,
        samples: (0..n)
            .map(|i| {
                let t = -half + i as f64 * dt;
                Complex64::new(a / (a * t).cosh(), 0.0)
            })
            .collect(),
    };
    let eig = nft::extract_amplitude(&sech, &ExtractConfig::default()).unwrap();
    let nft_ok = (eig.amplitude - a).abs() / a <= 1e-4;

    let pass = phase_ok && order_ok && nft_ok;
    report(
        "split-step physics and NFT calibration",
        pass,
        &format!(
            "phase-only deviation {max_dev:.2e} (<=1e-6), dz-halving ratio {ratio:.2} (~4), \
             sech amplitude {:.6} (2 within 1e-4 relative)",
            eig.amplitude
        ),
    );
    assert!(pass);
}

fn run_reference_campaign(power_dbm: f64, distance_km: f64, seed: u64) -> (bool, bool, String) {
    let system = FiberSystem {
        distance_km,
        ..FiberSystem::default()
    };
    let mut config = CampaignConfig::reference(system);
    config.launch_power_dbm = power_dbm;
    config.master_seed = seed;
    let result = nft::campaign(&config).unwrap();
    let channel = ChannelSpec::new(2, result.scales.sigma_n_sq).unwrap();
    let vconfig = ValidationConfig::for_symbol_period(result.symbol_period_norm);
    let gof = conditional_gof(&result.records, &channel, &vconfig).unwrap();
    let corr = nft::correlation_matrix(&result.records, config.slots).unwrap();
    let max_off = nft::max_off_diagonal(&corr);
    let corr_ok = max_off < 0.05;
    let detail = format!(
        "{} usable pairs, combined chi2 {:.1}/{} dof, p = {:.4} (>=0.01), \
         max |c_kk'| = {:.4} (<0.05)",
        gof.used_pairs, gof.combined.statistic, gof.combined.dof, gof.combined.p_value, max_off
    );
    (gof.pass, corr_ok, detail)
}

#[test]
fn a10_waveform_channel_validation() {
    // The reference protocol at full scale: 1000 runs x 10 slots, 500 km,
    // -1.5 dBm. Runs for a few minutes.
    let (gof_ok, corr_ok, detail) = run_reference_campaign(-1.5, 500.0, 7);
    report(
        "end-to-end waveform statistics follow the chi law",
        gof_ok && corr_ok,
        &detail,
    );
    assert!(gof_ok && corr_ok);
}

#[test]
#[ignore = "long variant; run with --ignored"]
fn a10_variant_long_distance() {
    let (gof_ok, corr_ok, detail) = run_reference_campaign(-1.5, 2000.0, 11);
    report("variant campaign at 2000 km", gof_ok && corr_ok, &detail);
    assert!(gof_ok && corr_ok);
}

#[test]
#[ignore = "long variant; run with --ignored"]
fn a10_variant_high_power() {
    let (gof_ok, corr_ok, detail) = run_reference_campaign(1.45, 500.0, 13);
    report("variant campaign at 1.45 dBm", gof_ok && corr_ok, &detail);
    assert!(gof_ok && corr_ok);
}
