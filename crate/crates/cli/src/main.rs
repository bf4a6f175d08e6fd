//! `thinwall`: deterministic driver for the wall-decay simulator.
//!
//! Verbs: `run` (single trajectory), `sweep` (cartesian parameter grid with
//! a manifest), `profile` (field snapshot on an x-grid), `check` (validate a
//! config and report the resolved calibration). Exit codes: 0 success,
//! 1 configuration error, 2 runtime/numeric error, 3 I/O error.

mod grid;
mod output;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thinwall_core::{run_simulation, summarize, RunConfig, RunSummary};

#[derive(Parser)]
#[command(name = "thinwall", version, about = "Thin-wall decay simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation and emit the time series plus a summary.
    Run {
        /// Path to a TOML config (all keys optional, unknown keys rejected).
        config: PathBuf,
        /// Write the series here instead of the config's output.path/stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the output format: csv or records.
        #[arg(long)]
        format: Option<String>,
        /// Override a config key, e.g. --set schedule.lambda_n=0.6.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run a cartesian grid of configs and write one file per point plus a
    /// manifest.csv in deterministic grid order.
    Sweep {
        config: PathBuf,
        /// Grid spec: `key=v1,v2;key2=w1,...` with dotted config keys.
        #[arg(long)]
        grid: String,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Dump phi(x) and dphi/dx at a frozen time for external plotting.
    Profile {
        config: PathBuf,
        /// Snapshot time.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Left edge of the x-grid (default: the integration window edge).
        #[arg(long)]
        xmin: Option<f64>,
        /// Right edge of the x-grid (default: the integration window edge).
        #[arg(long)]
        xmax: Option<f64>,
        /// Number of sample points (>= 2).
        #[arg(long, default_value_t = 801)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Validate a config, including the entropy calibration, and report the
    /// resolved values.
    Check {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug, Clone)]
enum Failure {
    Config(String),
    Runtime(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Runtime(m) | Failure::Io(m) => m,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn io_fail(context: &str, e: std::io::Error) -> Failure {
    Failure::Io(format!("{context}: {e}"))
}

/// Read a config file, apply `--set` overrides, and resolve it strictly.
fn load_config(path: &Path, sets: &[String]) -> CliResult<(RunConfig, Vec<String>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| io_fail(&format!("reading {}", path.display()), e))?;
    if sets.is_empty() {
        return RunConfig::from_toml_str(&text).map_err(|e| Failure::Config(e.to_string()));
    }
    let mut value: toml::Value =
        toml::from_str(&text).map_err(|e| Failure::Config(e.to_string()))?;
    apply_sets(&mut value, sets)?;
    let text = toml::to_string(&value).map_err(|e| Failure::Config(e.to_string()))?;
    RunConfig::from_toml_str(&text).map_err(|e| Failure::Config(e.to_string()))
}

fn apply_sets(value: &mut toml::Value, sets: &[String]) -> CliResult<()> {
    for s in sets {
        let (key, raw) = s
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("--set expects KEY=VALUE, got `{s}`")))?;
        grid::apply_override(value, key.trim(), raw.trim()).map_err(Failure::Config)?;
    }
    Ok(())
}

fn emit_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| io_fail(&format!("writing {}", path.display()), e))
}

fn cmd_run(
    config: &Path,
    out: Option<PathBuf>,
    format: Option<String>,
    sets: &[String],
) -> CliResult<()> {
    let (mut cfg, warnings) = load_config(config, sets)?;
    emit_warnings(&warnings);
    if let Some(f) = format {
        cfg.output.format = f.parse().map_err(Failure::Config)?;
    }
    if let Some(p) = out {
        cfg.output.path = Some(p.to_string_lossy().into_owned());
    }
    let records = run_simulation(&cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
    let sig = cfg.output.precision;
    let series = output::render_series(&records, cfg.output.format, sig);
    let summary = summarize(&records, cfg.phi0).expect("run produced at least one record");
    let text = output::summary_text(records.len(), &summary, sig);
    match &cfg.output.path {
        Some(p) => {
            // Series to the file, summary to stdout.
            write_text(Path::new(p), &series)?;
            print!("{text}");
        }
        None => {
            // Series to stdout (kept machine-parseable), summary to stderr.
            print!("{series}");
            eprint!("{text}");
        }
    }
    Ok(())
}

struct PointOutcome {
    label: String,
    file: Option<String>,
    summary: Option<RunSummary>,
    precision: usize,
    error: Option<Failure>,
}

fn run_point(base: &toml::Value, assignments: &[(&str, &str)], out_dir: &Path) -> PointOutcome {
    let label = grid::point_label(assignments);
    let mut precision = 12;
    let mut attempt = || -> CliResult<(String, RunSummary)> {
        let mut value = base.clone();
        for (key, raw) in assignments {
            grid::apply_override(&mut value, key, raw).map_err(Failure::Config)?;
        }
        let text = toml::to_string(&value).map_err(|e| Failure::Config(e.to_string()))?;
        let (cfg, _) = RunConfig::from_toml_str(&text).map_err(|e| Failure::Config(e.to_string()))?;
        precision = cfg.output.precision;
        let records = run_simulation(&cfg).map_err(|e| Failure::Runtime(e.to_string()))?;
        let ext = match cfg.output.format {
            thinwall_core::OutputFormat::Csv => "csv",
            thinwall_core::OutputFormat::Records => "jsonl",
        };
        let name = format!("{}.{ext}", grid::encode_point(assignments));
        let series = output::render_series(&records, cfg.output.format, cfg.output.precision);
        write_text(&out_dir.join(&name), &series)?;
        let summary = summarize(&records, cfg.phi0).expect("run produced at least one record");
        Ok((name, summary))
    };
    match attempt() {
        Ok((file, summary)) => PointOutcome {
            label,
            file: Some(file),
            summary: Some(summary),
            precision,
            error: None,
        },
        Err(e) => PointOutcome {
            label,
            file: None,
            summary: None,
            precision,
            error: Some(e),
        },
    }
}

fn cmd_sweep(config: &Path, grid_spec: &str, out_dir: &Path, sets: &[String]) -> CliResult<()> {
    let text = fs::read_to_string(config)
        .map_err(|e| io_fail(&format!("reading {}", config.display()), e))?;
    let mut base: toml::Value =
        toml::from_str(&text).map_err(|e| Failure::Config(e.to_string()))?;
    apply_sets(&mut base, sets)?;
    let axes = grid::parse_grid(grid_spec).map_err(Failure::Config)?;
    let points = grid::cartesian(&axes);
    fs::create_dir_all(out_dir)
        .map_err(|e| io_fail(&format!("creating {}", out_dir.display()), e))?;

    // Points run concurrently; collect() preserves grid order for the
    // manifest.
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|assignments| run_point(&base, assignments, out_dir))
        .collect();

    let mut manifest = String::from("point,file,status,breakdown_onset,cc_onset,final_regime\n");
    for o in &outcomes {
        let entry = |t: Option<f64>| {
            t.map_or_else(|| "never".to_string(), |t| output::format_sig(t, o.precision))
        };
        let (status, onset, cc, regime) = match (&o.summary, &o.error) {
            (Some(s), None) => (
                "ok".to_string(),
                entry(s.breakdown_entry),
                entry(s.cc_entry),
                s.final_record.regime.to_string(),
            ),
            (_, Some(e)) => (
                format!("error: {}", e.message()),
                String::new(),
                String::new(),
                String::new(),
            ),
            _ => unreachable!("outcome carries either a summary or an error"),
        };
        manifest.push_str(&format!(
            "{},{},{},{},{},{}\n",
            output::csv_field(&o.label),
            o.file.as_deref().unwrap_or(""),
            output::csv_field(&status),
            onset,
            cc,
            regime
        ));
    }
    write_text(&out_dir.join("manifest.csv"), &manifest)?;

    for o in outcomes {
        if let Some(e) = o.error {
            eprintln!("error: point {} failed: {}", o.label, e.message());
            return Err(e);
        }
    }
    Ok(())
}

fn cmd_profile(
    config: &Path,
    t: f64,
    xmin: Option<f64>,
    xmax: Option<f64>,
    points: usize,
    out: Option<PathBuf>,
    sets: &[String],
) -> CliResult<()> {
    let (cfg, warnings) = load_config(config, sets)?;
    emit_warnings(&warnings);
    if points < 2 {
        return Err(Failure::Config(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    let params = cfg
        .schedule
        .eval(t)
        .map_err(|e| Failure::Config(format!("--t: {e}")))?;
    let edge = 0.5 * params.l() + 40.0 / params.b();
    let lo = xmin.unwrap_or(-edge);
    let hi = xmax.unwrap_or(edge);
    if lo.is_nan() || hi.is_nan() || hi <= lo {
        return Err(Failure::Config(format!(
            "empty x-range: xmin {lo} must be below xmax {hi}"
        )));
    }
    let sig = cfg.output.precision;
    let mut text = String::from("x,phi,grad_phi\n");
    for i in 0..points {
        let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let phi = params.phi(x).map_err(|e| Failure::Runtime(e.to_string()))?;
        let grad = params
            .grad_phi(x)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
        text.push_str(&format!(
            "{},{},{}\n",
            output::format_sig(x, sig),
            output::format_sig(phi, sig),
            output::format_sig(grad, sig)
        ));
    }
    match out {
        Some(p) => write_text(&p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_check(config: &Path, sets: &[String]) -> CliResult<()> {
    let (cfg, warnings) = load_config(config, sets)?;
    emit_warnings(&warnings);
    let sig = cfg.output.precision;
    println!("config ok");
    println!(
        "entropy.s0 = {}",
        output::format_sig(cfg.calibration.s0, sig)
    );
    println!(
        "thresholds.phi_cc = {}",
        output::format_sig(cfg.thresholds.phi_cc, sig)
    );
    println!(
        "calibration residual = {:e}",
        cfg.calibration.calibration_residual(cfg.phi0)
    );
    println!(
        "records per run = {}",
        thinwall_core::grid_steps(cfg.numerics.dt, cfg.numerics.t_end) + 1
    );
    Ok(())
}

fn dispatch(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Run {
            config,
            out,
            format,
            set,
        } => cmd_run(&config, out, format, &set),
        Cmd::Sweep {
            config,
            grid,
            out_dir,
            set,
        } => cmd_sweep(&config, &grid, &out_dir, &set),
        Cmd::Profile {
            config,
            t,
            xmin,
            xmax,
            points,
            out,
            set,
        } => cmd_profile(&config, t, xmin, xmax, points, out, &set),
        Cmd::Check { config, set } => cmd_check(&config, &set),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
