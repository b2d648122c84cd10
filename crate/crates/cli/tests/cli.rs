//! Black-box tests of the command-line surface: flag validation, output
//! discipline (metadata header + reproducibility), and the documented
//! reference values.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chi-capacity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn chi-capacity")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Value of `column` in the first data row of a CSV output.
fn first_row_value(csv: &str, column: &str) -> f64 {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header
        .iter()
        .position(|c| *c == column)
        .unwrap_or_else(|| panic!("column {column} in {header:?}"));
    lines
        .next()
        .expect("data row")
        .split(',')
        .nth(idx)
        .unwrap()
        .parse()
        .expect("numeric cell")
}

#[test]
fn mi_curve_headline_value() {
    let out = run(&[
        "mi-curve",
        "--n",
        "2",
        "--input",
        "half-gaussian",
        "--snr-db",
        "25",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# version"));
    let mi = first_row_value(&text, "mi_bits");
    assert!((mi - 3.68).abs() <= 0.05, "mi = {mi}");
}

#[test]
fn mi_curve_monte_carlo_is_reproducible() {
    let args = [
        "mi-curve",
        "--n",
        "1",
        "--input",
        "rayleigh",
        "--snr-db",
        "-10:40:5",
        "--method",
        "mc",
        "--samples",
        "20000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let rows = stdout(&a)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("snr_db"))
        .count();
    assert_eq!(rows, 11);
}

#[test]
fn mi_curve_with_asymptote_column() {
    let out = run(&[
        "mi-curve",
        "--n",
        "2",
        "--input",
        "rayleigh",
        "--snr-db",
        "25",
        "--with-asymptote",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let asym = first_row_value(&text, "mi_asymptote_bits");
    assert!((asym - 3.4644).abs() < 1e-3, "asymptote {asym}");
}

#[test]
fn ask_headline_value() {
    let out = run(&["ask", "--m", "16", "--n", "2", "--snr-db", "25"]);
    assert!(out.status.success());
    let mi = first_row_value(&stdout(&out), "mi_bits");
    assert!((mi - 3.45).abs() <= 0.05, "16-ASK mi = {mi}");
}

#[test]
fn cond_entropy_approaches_high_snr_limit() {
    let out = run(&["cond-entropy", "--n", "3", "--snr-db", "40"]);
    assert!(out.status.success());
    let h = first_row_value(&stdout(&out), "h_y_given_x_bits");
    assert!((h - 1.5471).abs() < 5e-3, "h = {h}");
}

#[test]
fn rate_loss_vanishes_without_truncation() {
    let out = run(&["rate-loss", "--x-hat", "0", "--snr-db", "10"]);
    assert!(out.status.success());
    assert_eq!(first_row_value(&stdout(&out), "rate_loss_bits"), 0.0);
}

#[test]
fn json_format_is_valid() {
    let out = run(&[
        "asymptote",
        "--snr-db",
        "0:20:10",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_flags_exit_nonzero() {
    assert!(!run(&["mi-curve", "--input", "cauchy", "--snr-db", "10"])
        .status
        .success());
    assert!(!run(&["mi-curve", "--input", "rayleigh", "--snr-db", "10:0:5"])
        .status
        .success());
    assert!(!run(&["ask", "--m", "16", "--n", "2", "--snr-db", "25", "--format", "yaml"])
        .status
        .success());
}

#[test]
fn simulate_is_byte_reproducible_and_extractable() {
    let dir_a = std::env::temp_dir().join("chi-capacity-test-sim-a");
    let dir_b = std::env::temp_dir().join("chi-capacity-test-sim-b");
    for dir in [&dir_a, &dir_b] {
        let _ = std::fs::remove_dir_all(dir);
    }
    let args = |dir: &Path| {
        vec![
            "simulate".to_string(),
            "--runs".into(),
            "2".into(),
            "--slots".into(),
            "3".into(),
            "--seed".into(),
            "1".into(),
            "--save-waveforms".into(),
            "1".into(),
            "--out-dir".into(),
            dir.display().to_string(),
        ]
    };
    assert!(bin().args(args(&dir_a)).output().unwrap().status.success());
    assert!(bin().args(args(&dir_b)).output().unwrap().status.success());
    let pairs_a = std::fs::read(dir_a.join("pairs.csv")).unwrap();
    let pairs_b = std::fs::read(dir_b.join("pairs.csv")).unwrap();
    assert_eq!(pairs_a, pairs_b, "same seed must reproduce pairs.csv");
    let wave_a = std::fs::read(dir_a.join("run0000_received.wave")).unwrap();
    let wave_b = std::fs::read(dir_b.join("run0000_received.wave")).unwrap();
    assert_eq!(wave_a, wave_b);
    assert_eq!(&wave_a[..8], b"CHIWAVE1");

    // The saved sent waveform holds solitons; nft-extract must find one.
    let out = run(&[
        "nft-extract",
        "--input",
        dir_a.join("run0000_sent.wave").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let amp = first_row_value(&stdout(&out), "amplitude");
    assert!(amp > 0.5, "amplitude {amp}");
}

#[test]
fn validate_passes_on_analytic_sampler_pairs() {
    // Ground-truth pairs straight from the channel sampler at the derived
    // noise level: validate must pass and exit 0.
    use chi_capacity_core::inputs::InputSpec;
    use chi_capacity_core::rngstream;
    use chi_capacity_core::ChannelSpec;
    use chi_capacity_waveform::nft::{records_to_csv, SlotRecord, SlotStatus};
    use chi_capacity_waveform::FiberSystem;

    let scales = FiberSystem::default().derive_scales().unwrap();
    let channel = ChannelSpec::new(2, scales.sigma_n_sq).unwrap();
    let ts = FiberSystem::default().symbol_period_norm(1.7).unwrap();
    let input = InputSpec::TruncatedRayleigh {
        sigma_s_sq: 2.0 - 8.0 / ts,
        x_hat: (8.0 / ts).sqrt(),
    };
    let mut rng = rngstream::stream(3, 0);
    let mut records = Vec::new();
    for i in 0..4000u32 {
        let x = input.sample(&mut rng);
        records.push(SlotRecord {
            run: i / 10,
            slot: i % 10,
            x_sent: x,
            y_received: channel.sample(x, &mut rng),
            status: SlotStatus::Ok,
        });
    }
    let dir = std::env::temp_dir().join("chi-capacity-test-validate");
    let _ = std::fs::create_dir_all(&dir);
    let path = dir.join("pairs.csv");
    std::fs::write(&path, records_to_csv(&records)).unwrap();

    let out = run(&["validate", "--pairs", path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "validate failed: {}",
        stdout(&out)
    );
    let text = stdout(&out);
    assert!(text.contains("# verdict = pass"), "{text}");

    // Fabricated mismatch (received values inflated by 3 conditional sigmas)
    // must fail with exit code 1.
    let bias = (scales.sigma_n_sq / 2.0).sqrt() * 3.0;
    for r in records.iter_mut() {
        r.y_received += bias;
    }
    std::fs::write(&path, records_to_csv(&records)).unwrap();
    let out = run(&["validate", "--pairs", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
