//! Command-line surface for the chi-channel capacity toolkit.
//!
//! Information-theory commands (mi-curve, ask, cond-entropy, asymptote,
//! rate-loss) sweep the normalized channel; waveform commands (simulate,
//! nft-extract, validate) drive the split-step simulator and the NFT
//! detector against physical fiber parameters.

// Validation guards use `!(x > 0.0)` on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use clap::{Args, Parser, Subcommand};
use output::{fmt_g, Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

use chi_capacity_core::entropy;
use chi_capacity_core::inputs::InputSpec;
use chi_capacity_core::mi;
use chi_capacity_core::{rho_from_db, ChannelSpec};
use chi_capacity_waveform::nft::{self, AmplitudeCutoff, CampaignConfig};
use chi_capacity_waveform::solitonsim::{self, PulseTrainConfig, WaveformFrame};
use chi_capacity_waveform::validation::{conditional_gof, ValidationConfig};
use chi_capacity_waveform::FiberSystem;

#[derive(Parser)]
#[command(
    name = "chi-capacity",
    version,
    about = "Capacity lower bounds of the noncentral chi-channel and soliton waveform validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information vs SNR for a continuous input distribution.
    MiCurve(MiCurveArgs),
    /// Mutual information of equiprobable M-ASK constellations.
    Ask(AskArgs),
    /// Closed-form Rayleigh-input entropies and MI.
    CondEntropy(CondEntropyArgs),
    /// High-SNR asymptotes of the Rayleigh-input MI and output entropy.
    Asymptote(AsymptoteArgs),
    /// Rate loss of the truncated Rayleigh input against the full one.
    RateLoss(RateLossArgs),
    /// Run the split-step soliton campaign and write amplitude pairs.
    Simulate(SimulateArgs),
    /// Extract the soliton amplitude from a waveform file.
    NftExtract(NftExtractArgs),
    /// Goodness-of-fit and correlation validation of an amplitude-pair CSV.
    Validate(ValidateArgs),
}

/// A parsed SNR grid in dB.
#[derive(Debug, Clone)]
struct SnrGrid(Vec<f64>);

/// "from:to:step" or a single "value" in dB.
fn parse_snr_grid(text: &str) -> Result<SnrGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| format!("bad SNR value `{s}`: {e}"))
    };
    match parts.as_slice() {
        [single] => Ok(SnrGrid(vec![parse(single)?])),
        [from, to, step] => {
            let (from, to, step) = (parse(from)?, parse(to)?, parse(step)?);
            if !(step > 0.0) {
                return Err("SNR step must be positive".into());
            }
            if to < from {
                return Err("SNR range end below start".into());
            }
            let mut grid = Vec::new();
            let mut v = from;
            while v <= to + 1e-9 {
                grid.push(v);
                v += step;
            }
            Ok(SnrGrid(grid))
        }
        _ => Err("expected `value` or `from:to:step`".into()),
    }
}

#[derive(Args)]
struct MiCurveArgs {
    /// Half-degrees-of-freedom n (2n total).
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// rayleigh | geometric | half-gaussian | maxwell-boltzmann | truncated-rayleigh
    #[arg(long)]
    input: String,
    /// SNR grid in dB: `from:to:step` or a single value.
    #[arg(long, value_parser = parse_snr_grid, allow_hyphen_values = true)]
    snr_db: SnrGrid,
    /// quadrature | mc
    #[arg(long, default_value = "quadrature")]
    method: String,
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature tolerance in bits.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Truncation threshold (truncated-rayleigh only).
    #[arg(long)]
    x_hat: Option<f64>,
    /// Add the asymptotic-expansion column.
    #[arg(long)]
    with_asymptote: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_mi_curve(args: &MiCurveArgs) -> Result<Table, String> {
    let spec = ChannelSpec::normalized(args.n).map_err(|e| e.to_string())?;
    let mut columns = vec![
        "snr_db",
        "rho",
        "n",
        "input",
        "mi_bits",
        "stderr_bits",
        "method",
    ];
    if args.with_asymptote {
        columns.push("mi_asymptote_bits");
    }
    let mut table = Table::new(columns);
    table.meta("command", "mi-curve");
    table.meta("n", args.n);
    table.meta("input", &args.input);
    table.meta("method", &args.method);
    table.meta("tol", args.tol);
    if args.method == "mc" {
        table.meta("samples", args.samples);
        table.meta("seed", args.seed);
    }
    if let Some(x_hat) = args.x_hat {
        table.meta("x_hat", x_hat);
    }
    for &db in &args.snr_db.0 {
        let rho = rho_from_db(db);
        let input = InputSpec::from_kind_str(&args.input, rho, args.x_hat, None)
            .map_err(|e| e.to_string())?;
        let est = match args.method.as_str() {
            "quadrature" => mi::mi_quadrature(&spec, &input, args.tol),
            "mc" => mi::mi_monte_carlo(&spec, &input, args.samples, args.seed),
            other => return Err(format!("unknown method `{other}` (quadrature|mc)")),
        }
        .map_err(|e| e.to_string())?;
        let mut row = vec![
            format!("{db}"),
            fmt_g(rho),
            args.n.to_string(),
            input.kind_name().to_string(),
            fmt_g(est.value_bits),
            fmt_g(est.std_error_bits),
            est.method.name().to_string(),
        ];
        if args.with_asymptote {
            row.push(fmt_g(entropy::mi_asymptote(rho)));
        }
        table.row(row);
    }
    Ok(table)
}

#[derive(Args)]
struct AskArgs {
    /// Constellation size M.
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, value_parser = parse_snr_grid, allow_hyphen_values = true)]
    snr_db: SnrGrid,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_ask(args: &AskArgs) -> Result<Table, String> {
    let spec = ChannelSpec::normalized(args.n).map_err(|e| e.to_string())?;
    let mut table = Table::new(vec!["snr_db", "rho", "n", "m_points", "mi_bits", "method"]);
    table.meta("command", "ask");
    table.meta("m", args.m);
    table.meta("n", args.n);
    table.meta("tol", args.tol);
    for &db in &args.snr_db.0 {
        let rho = rho_from_db(db);
        let est = mi::mi_ask(&spec, args.m, rho, args.tol).map_err(|e| e.to_string())?;
        table.row(vec![
            format!("{db}"),
            fmt_g(rho),
            args.n.to_string(),
            args.m.to_string(),
            fmt_g(est.value_bits),
            est.method.name().to_string(),
        ]);
    }
    Ok(table)
}

#[derive(Args)]
struct CondEntropyArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, value_parser = parse_snr_grid, allow_hyphen_values = true)]
    snr_db: SnrGrid,
    /// Relative tolerance of the Bessel-kernel integral.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_cond_entropy(args: &CondEntropyArgs) -> Result<Table, String> {
    let mut table = Table::new(vec![
        "snr_db",
        "rho",
        "n",
        "h_y_given_x_bits",
        "h_y_bits",
        "mi_bits",
        "method",
    ]);
    table.meta("command", "cond-entropy");
    table.meta("n", args.n);
    table.meta("tol", args.tol);
    for &db in &args.snr_db.0 {
        let rho = rho_from_db(db);
        let report = entropy::mi_closed_form(args.n, rho, args.tol).map_err(|e| e.to_string())?;
        table.row(vec![
            format!("{db}"),
            fmt_g(rho),
            args.n.to_string(),
            fmt_g(report.h_y_given_x_bits),
            fmt_g(report.h_y_bits),
            fmt_g(report.mi_bits),
            report.method.name().to_string(),
        ]);
    }
    Ok(table)
}

#[derive(Args)]
struct AsymptoteArgs {
    #[arg(long, value_parser = parse_snr_grid, allow_hyphen_values = true)]
    snr_db: SnrGrid,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_asymptote(args: &AsymptoteArgs) -> Result<Table, String> {
    let mut table = Table::new(vec![
        "snr_db",
        "rho",
        "mi_asymptote_bits",
        "h_y_asymptotic_bits",
    ]);
    table.meta("command", "asymptote");
    for &db in &args.snr_db.0 {
        let rho = rho_from_db(db);
        table.row(vec![
            format!("{db}"),
            fmt_g(rho),
            fmt_g(entropy::mi_asymptote(rho)),
            fmt_g(entropy::output_entropy_asymptotic(rho)),
        ]);
    }
    Ok(table)
}

#[derive(Args)]
struct RateLossArgs {
    /// Truncation threshold x̂ (amplitude-symbol units).
    #[arg(long)]
    x_hat: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, value_parser = parse_snr_grid, allow_hyphen_values = true)]
    snr_db: SnrGrid,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_rate_loss(args: &RateLossArgs) -> Result<Table, String> {
    let spec = ChannelSpec::normalized(args.n).map_err(|e| e.to_string())?;
    let mut table = Table::new(vec![
        "snr_db",
        "rho",
        "n",
        "x_hat",
        "rate_loss_bits",
        "kl_bits",
        "kl_bound_bits",
    ]);
    table.meta("command", "rate-loss");
    table.meta("n", args.n);
    table.meta("x_hat", args.x_hat);
    table.meta("tol", args.tol);
    for &db in &args.snr_db.0 {
        let rho = rho_from_db(db);
        let loss =
            mi::rate_loss_truncated(&spec, rho, args.x_hat, args.tol).map_err(|e| e.to_string())?;
        let (kl, bound) = if args.x_hat > 0.0 {
            let kl = mi::kl_marginal_truncated(&spec, rho, args.x_hat, args.tol)
                .map_err(|e| e.to_string())?;
            (kl, args.x_hat * args.x_hat / rho * std::f64::consts::LOG2_E)
        } else {
            (0.0, 0.0)
        };
        table.row(vec![
            format!("{db}"),
            fmt_g(rho),
            args.n.to_string(),
            fmt_g(args.x_hat),
            fmt_g(loss),
            fmt_g(kl),
            fmt_g(bound),
        ]);
    }
    Ok(table)
}

#[derive(Args)]
struct SimulateArgs {
    /// Fiber config file (key=value); defaults are the standard system.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    runs: u32,
    #[arg(long, default_value_t = 10)]
    slots: u32,
    #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
    power_dbm: f64,
    #[arg(long)]
    distance_km: Option<f64>,
    #[arg(long, default_value_t = 1.7)]
    baud_gbd: f64,
    #[arg(long, default_value_t = 4.6)]
    dt_ps: f64,
    #[arg(long, default_value_t = 0.1)]
    dz_km: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Disable amplifier noise.
    #[arg(long)]
    noiseless: bool,
    /// Disable the transmitter-side amplitude cutoff (plain Rayleigh draws).
    #[arg(long)]
    no_cutoff: bool,
    /// Write sent/received waveform files for the first N runs.
    #[arg(long, default_value_t = 2)]
    save_waveforms: u32,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), String> {
    let mut system = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            FiberSystem::from_config_str(&text).map_err(|e| e.to_string())?
        }
        None => FiberSystem::default(),
    };
    if let Some(d) = args.distance_km {
        system.distance_km = d;
    }
    let mut config = CampaignConfig::reference(system);
    config.runs = args.runs;
    config.slots = args.slots;
    config.launch_power_dbm = args.power_dbm;
    config.baud_rate_gbd = args.baud_gbd;
    config.sample_interval_ps = args.dt_ps;
    config.step_km = args.dz_km;
    config.master_seed = args.seed;
    config.noiseless = args.noiseless;
    if args.no_cutoff {
        config.amplitude_cutoff = AmplitudeCutoff::Disabled;
    }

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| format!("cannot create {}: {e}", args.out_dir.display()))?;
    let result = nft::campaign(&config).map_err(|e| e.to_string())?;

    let mut table = Table::new(vec!["run", "slot", "x_sent", "y_received", "status"]);
    table.meta("command", "simulate");
    table.meta("seed", config.master_seed);
    table.meta("runs", config.runs);
    table.meta("slots", config.slots);
    table.meta("power_dbm", config.launch_power_dbm);
    table.meta("baud_gbd", config.baud_rate_gbd);
    table.meta("dt_ps", config.sample_interval_ps);
    table.meta("dz_km", config.step_km);
    table.meta("distance_km", config.system.distance_km);
    table.meta("noiseless", config.noiseless);
    table.meta("sigma_s_sq", fmt_g(result.sigma_s_sq));
    table.meta("sigma_n_sq", fmt_g(result.scales.sigma_n_sq));
    table.meta("d_noise", fmt_g(result.scales.d_noise));
    table.meta("z_norm", fmt_g(result.scales.z_norm));
    table.meta("symbol_period_norm", fmt_g(result.symbol_period_norm));
    table.meta("max_step_phase_rad", fmt_g(result.max_step_phase_rad));
    if result.max_step_phase_rad > 0.05 {
        table.comment("warning: nonlinear phase per step exceeded 0.05 rad; reduce dz");
    }
    for r in &result.records {
        let y = if r.y_received.is_finite() {
            format!("{:.17e}", r.y_received)
        } else {
            String::new()
        };
        table.row(vec![
            r.run.to_string(),
            r.slot.to_string(),
            format!("{:.17e}", r.x_sent),
            y,
            r.status.as_str().to_string(),
        ]);
    }
    let pairs_path = args.out_dir.join("pairs.csv");
    table
        .emit(&Some(pairs_path.clone()), Format::Csv)
        .map_err(|e| e.to_string())?;
    eprintln!("wrote {}", pairs_path.display());

    // Regenerate the first runs deterministically and dump their waveforms.
    let scales = config.system.derive_scales().map_err(|e| e.to_string())?;
    let dt_norm = config.sample_interval_ps / scales.tau0_ps;
    for run in 0..args.save_waveforms.min(args.runs) {
        let mut rng = chi_capacity_core::rngstream::stream(config.master_seed, run as u64);
        let a_hat = match config.amplitude_cutoff {
            AmplitudeCutoff::Disabled => 0.0,
            AmplitudeCutoff::Auto => 8.0 / result.symbol_period_norm,
            AmplitudeCutoff::Fixed(v) => v,
        };
        let input = if a_hat > 0.0 {
            InputSpec::TruncatedRayleigh {
                sigma_s_sq: result.sigma_s_sq - a_hat,
                x_hat: a_hat.sqrt(),
            }
        } else {
            InputSpec::Rayleigh {
                sigma_s_sq: result.sigma_s_sq,
            }
        };
        let amplitudes: Vec<f64> = (0..config.slots)
            .map(|_| {
                let x = input.sample(&mut rng);
                x * x
            })
            .collect();
        let mut train = PulseTrainConfig::new(amplitudes, result.symbol_period_norm);
        train.guard = config.guard_symbols;
        train.interaction_budget = 1.0;
        let sent = solitonsim::synthesize(&train, dt_norm).map_err(|e| e.to_string())?;
        let propagated = solitonsim::propagate(
            &sent,
            &solitonsim::PropagationParams::new(
                scales.z_norm,
                config.step_km / scales.l0_km,
                if config.noiseless { 0.0 } else { scales.d_noise },
            ),
            &mut rng,
        )
        .map_err(|e| e.to_string())?;
        for (tag, frame) in [("sent", &sent), ("received", &propagated.frame)] {
            let path = args.out_dir.join(format!("run{run:04}_{tag}.wave"));
            let file = std::fs::File::create(&path).map_err(|e| e.to_string())?;
            frame
                .write_to(std::io::BufWriter::new(file))
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

#[derive(Args)]
struct NftExtractArgs {
    /// CHIWAVE1 waveform file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    sigma_min: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_nft_extract(args: &NftExtractArgs) -> Result<Table, String> {
    let file = std::fs::File::open(&args.input)
        .map_err(|e| format!("cannot open {}: {e}", args.input.display()))?;
    let frame =
        WaveformFrame::read_from(std::io::BufReader::new(file)).map_err(|e| e.to_string())?;
    let config = nft::ExtractConfig {
        sigma_min: args.sigma_min,
        ..nft::ExtractConfig::default()
    };
    let eig = nft::extract_amplitude(&frame, &config).map_err(|e| e.to_string())?;
    let mut table = Table::new(vec!["amplitude", "residual", "multiple_roots"]);
    table.meta("command", "nft-extract");
    table.meta("input", args.input.display());
    table.meta("samples", frame.samples.len());
    table.meta("dt", frame.dt);
    table.row(vec![
        fmt_g(eig.amplitude),
        fmt_g(eig.residual),
        eig.multiple_roots.to_string(),
    ]);
    Ok(table)
}

#[derive(Args)]
struct ValidateArgs {
    /// Amplitude-pair CSV (as written by `simulate`).
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    distance_km: Option<f64>,
    #[arg(long, default_value_t = 1.7)]
    baud_gbd: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 0.01)]
    significance: f64,
    #[arg(long, default_value_t = 200)]
    min_bin: usize,
    #[arg(long, default_value_t = 0.05)]
    max_off_diagonal: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn cmd_validate(args: &ValidateArgs) -> Result<(Table, bool), String> {
    let mut system = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            FiberSystem::from_config_str(&text).map_err(|e| e.to_string())?
        }
        None => FiberSystem::default(),
    };
    if let Some(d) = args.distance_km {
        system.distance_km = d;
    }
    let scales = system.derive_scales().map_err(|e| e.to_string())?;
    let ts_norm = system
        .symbol_period_norm(args.baud_gbd)
        .map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&args.pairs)
        .map_err(|e| format!("cannot read {}: {e}", args.pairs.display()))?;
    let records = nft::records_from_csv(&text).map_err(|e| e.to_string())?;
    let slots = records.iter().map(|r| r.slot).max().map_or(0, |s| s + 1);

    let channel = ChannelSpec::new(args.n, scales.sigma_n_sq).map_err(|e| e.to_string())?;
    let mut vconfig = ValidationConfig::for_symbol_period(ts_norm);
    vconfig.significance = args.significance;
    vconfig.min_bin_count = args.min_bin;
    vconfig.max_off_diagonal = args.max_off_diagonal;
    let gof = conditional_gof(&records, &channel, &vconfig).map_err(|e| e.to_string())?;

    let corr = nft::correlation_matrix(&records, slots).map_err(|e| e.to_string())?;
    let max_off = nft::max_off_diagonal(&corr);
    let corr_pass = max_off < vconfig.max_off_diagonal;

    let mut table = Table::new(vec!["a_lo", "a_hi", "count", "chi2", "dof", "p_value"]);
    table.meta("command", "validate");
    table.meta("pairs", args.pairs.display());
    table.meta("n", args.n);
    table.meta("sigma_n_sq", fmt_g(scales.sigma_n_sq));
    table.meta("amplitude_cutoff", fmt_g(vconfig.amplitude_cutoff));
    table.meta("significance", args.significance);
    table.meta("used_pairs", gof.used_pairs);
    table.meta("combined_chi2", fmt_g(gof.combined.statistic));
    table.meta("combined_dof", gof.combined.dof);
    table.meta("combined_p_value", fmt_g(gof.combined.p_value));
    table.meta("gof_pass", gof.pass);
    table.meta("max_off_diagonal", fmt_g(max_off));
    table.meta("correlation_pass", corr_pass);
    let pass = gof.pass && corr_pass;
    table.meta("verdict", if pass { "pass" } else { "fail" });
    for row in &corr {
        table.comment(format!(
            "corr: {}",
            row.iter()
                .map(|v| format!("{v:+.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    for bin in &gof.bins {
        table.row(vec![
            fmt_g(bin.a_lo),
            fmt_g(bin.a_hi),
            bin.count.to_string(),
            fmt_g(bin.test.statistic),
            fmt_g(bin.test.dof),
            fmt_g(bin.test.p_value),
        ]);
    }
    Ok((table, pass))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CHI_CAPACITY_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result: Result<(), String> = match &cli.command {
        Command::MiCurve(args) => cmd_mi_curve(args)
            .and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string())),
        Command::Ask(args) => {
            cmd_ask(args).and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string()))
        }
        Command::CondEntropy(args) => cmd_cond_entropy(args)
            .and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string())),
        Command::Asymptote(args) => cmd_asymptote(args)
            .and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string())),
        Command::RateLoss(args) => cmd_rate_loss(args)
            .and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string())),
        Command::Simulate(args) => cmd_simulate(args),
        Command::NftExtract(args) => cmd_nft_extract(args)
            .and_then(|t| t.emit(&args.out, args.format).map_err(|e| e.to_string())),
        Command::Validate(args) => match cmd_validate(args) {
            Ok((table, pass)) => {
                if let Err(e) = table.emit(&args.out, args.format) {
                    Err(e.to_string())
                } else if pass {
                    Ok(())
                } else {
                    eprintln!("validation failed (see report)");
                    return ExitCode::from(1);
                }
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
