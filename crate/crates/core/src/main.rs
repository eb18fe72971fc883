use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nls_floquet::cli::run;
use nls_floquet::config::{parse_config, Mode};

#[derive(Parser)]
#[command(
    name = "nls-floquet",
    about = "Floquet analysis of time-periodic boundary pairs for the half-line NLS"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to a key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the report and CSV emissions.
    #[arg(long)]
    out: Option<String>,
    /// Override the numerical tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker count hint (computations are deterministic regardless).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a single-exponential triple (lambda, alpha, omega, c).
    ClassifyExp(Common),
    /// Scan a window for discriminant zeros and produce a verdict.
    Scan(Common),
    /// Check the stationary-soliton closed-form identities.
    SolitonCheck(Common),
    /// Tabulate the monodromy matrix and Floquet data at given k points.
    Monodromy(Common),
    /// Spectral functions from sampled initial datum and boundary traces.
    Spectra(Common),
    /// Emit domains/zeros/cuts/contour CSV files for plotting.
    PlotData(Common),
}

impl Cmd {
    fn split(self) -> (Mode, Common) {
        match self {
            Cmd::ClassifyExp(c) => (Mode::ClassifyExp, c),
            Cmd::Scan(c) => (Mode::Scan, c),
            Cmd::SolitonCheck(c) => (Mode::SolitonCheck, c),
            Cmd::Monodromy(c) => (Mode::Monodromy, c),
            Cmd::Spectra(c) => (Mode::Spectra, c),
            Cmd::PlotData(c) => (Mode::PlotData, c),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common) = cli.cmd.split();

    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let has_mode = text.lines().any(|l| {
        let l = l.trim();
        l.starts_with("mode") && l[4..].trim_start().starts_with('=')
    });
    let full = if has_mode {
        text
    } else {
        format!("mode = {}\n{text}", mode.as_str())
    };

    let mut cfg = match parse_config(&full) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cfg.mode != mode {
        eprintln!(
            "error: config mode {:?} does not match subcommand {:?}",
            cfg.mode.as_str(),
            mode.as_str()
        );
        return ExitCode::from(2);
    }
    if let Some(out) = common.out {
        cfg.out = Some(out);
    }
    if let Some(tol) = common.tol {
        if !(tol > 0.0) {
            eprintln!("error: --tol must be positive");
            return ExitCode::from(2);
        }
        cfg.tol = tol;
    }
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        cfg.jobs = jobs;
    }

    match run(&cfg) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(dir) = &cfg.out {
                let path = std::path::Path::new(dir).join("report.json");
                if let Some(parent) = path.parent() {
                    if let Err(e) = std::fs::create_dir_all(parent) {
                        eprintln!("error: {}: {e}", parent.display());
                        return ExitCode::from(2);
                    }
                }
                if let Err(e) = std::fs::write(&path, &json) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
