use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ioncosmo::config::{parse_config, ExperimentConfig, Format};
use ioncosmo::report::{conformal_report, emit_conformal, emit_modes, modes_report, selftest};
use ioncosmo::{emit, run_sweep, CliError};

#[derive(Parser)]
#[command(
    name = "ioncosmo",
    version,
    about = "Ion-trap simulator of detector response in expanding spacetimes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (`key = value` lines); defaults apply without it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; overrides `output.path`. Stdout when neither is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; overrides `output.format`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative quadrature tolerance; overrides `quadrature.rel_tol`.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Timestamp to record in JSON metadata. Falls back to
    /// SOURCE_DATE_EPOCH; omitted otherwise.
    #[arg(long, global = true)]
    timestamp: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print equilibrium positions and normal modes.
    Modes,
    /// Tabulate conformal time and the detector schedules over the window.
    Conformal {
        /// Number of sample times.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Evaluate the configured detector at its base point.
    Response,
    /// Evaluate the configured sweep grid.
    Sweep,
    /// Check quadrature against the de Sitter closed form on a fixed grid.
    Selftest,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Argument("--tolerance must be positive".into()));
        }
        cfg.quadrature.rel_tol = t;
    }
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(p) = &cli.output {
        cfg.output_path = Some(p.clone());
    }
    Ok(cfg)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load(cli)?;
    let out = cfg.output_path.as_deref();
    let timestamp = cli
        .timestamp
        .clone()
        .or_else(|| std::env::var("SOURCE_DATE_EPOCH").ok());
    match &cli.command {
        Command::Modes => {
            let r = modes_report(&cfg)?;
            write_out(out, emit_modes(&r, cfg.output_format).as_bytes())
        }
        Command::Conformal { points } => {
            let r = conformal_report(&cfg, *points)?;
            write_out(out, emit_conformal(&r, cfg.output_format).as_bytes())
        }
        Command::Response => {
            let single = ExperimentConfig {
                sweep: None,
                ..cfg.clone()
            };
            let result = run_sweep(&single, timestamp)?;
            write_out(out, &emit(&result, cfg.output_format))?;
            match &result.rows[0].error {
                Some(msg) => Err(CliError::PointFailed(msg.clone())),
                None => Ok(()),
            }
        }
        Command::Sweep => {
            let result = run_sweep(&cfg, timestamp)?;
            write_out(out, &emit(&result, cfg.output_format))
        }
        Command::Selftest => {
            let tolerance = 1e-5;
            let points = selftest(&cfg.quadrature, tolerance)?;
            let mut text = String::new();
            for p in &points {
                let gap = p.gap.map_or("error".to_string(), |g| format!("{g:.3e}"));
                text.push_str(&format!(
                    "{} kappa={} detuning={} kappa_t={} gap={}\n",
                    if p.pass { "PASS" } else { "FAIL" },
                    p.kappa,
                    p.detuning,
                    p.kappa_t,
                    gap
                ));
            }
            let failed = points.iter().filter(|p| !p.pass).count();
            text.push_str(&format!(
                "{} of {} points within {tolerance:e}\n",
                points.len() - failed,
                points.len()
            ));
            write_out(out, text.as_bytes())?;
            if failed > 0 {
                return Err(CliError::SelftestFailed(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ioncosmo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
