use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gradflow_cli::config::{parse_kind, RunConfig};
use gradflow_cli::convergence::{self, Reference};
use gradflow_cli::error::CliError;
use gradflow_cli::{initial, output, preset, runner};
use gradflow_core::analyzer;
use gradflow_core::tableau::registry_get;
use gradflow_core::Definiteness;

/// Integrating-factor Runge-Kutta schemes for gradient flows: runs,
/// convergence studies and energy-dissipation certification.
#[derive(Parser)]
#[command(name = "gradflow", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

/// Config sources shared by `run` and `converge`: a preset and/or a file,
/// then `--set` overrides, then the dedicated flags.
#[derive(Args)]
struct ConfigArgs {
    /// Start from a named preset (see `gradflow preset --list`).
    #[arg(long)]
    preset: Option<String>,
    /// Flat key=value config file applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Individual KEY=VALUE overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Scheme shorthand for `--set scheme=...`.
    #[arg(long)]
    scheme: Option<String>,
    /// Correction kind shorthand: raw, T or N.
    #[arg(long)]
    kind: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.preset {
            Some(name) => preset::preset(name)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        } else if self.preset.is_none() {
            return Err(CliError::Usage(
                "need --preset and/or --config to define the run".into(),
            ));
        }
        cfg.apply_overrides(&self.overrides)?;
        if let Some(s) = &self.scheme {
            cfg.scheme = s.clone();
        }
        if let Some(k) = &self.kind {
            cfg.kind = parse_kind(k)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write trace/snapshot/manifest files.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output root (default: $GRADFLOW_OUT or ./gradflow-out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Temporal convergence study over a ladder of halving step sizes.
    Converge {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated step sizes, each half the previous.
        #[arg(long, value_delimiter = ',', required = true)]
        taus: Vec<f64>,
        /// Reference step size; default is min(taus)/10.
        #[arg(long)]
        ref_tau: Option<f64>,
        /// Divisor for the default self reference.
        #[arg(long, default_value_t = 10)]
        ref_div: u32,
        /// Also write the order table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Scan the differentiation matrix of a scheme/correction pair over
    /// z <= 0 and report per-minor minima and a definiteness verdict.
    Certify {
        /// Scheme name: if1, heun2, ralston2, heun3, ralston3, kutta4.
        scheme: String,
        /// Correction kind: T or N (raw schemes have no such certificate).
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = -50.0, allow_hyphen_values = true)]
        z_min: f64,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        /// Exit with code 3 unless the verdict is positive (semi-)definite.
        #[arg(long)]
        expect_pd: bool,
        /// Write the scan table (z, minor_1..minor_s) as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List presets or print one as a reusable key=value config.
    Preset {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Command::Run { config, out } => {
            let cfg = config.resolve()?;
            let root = output::out_root(out.as_deref());
            let artifacts = runner::run(&cfg, &root)?;
            println!("run {} complete: {} steps", artifacts.run_id, artifacts.result.steps);
            println!("  trace:    {}", artifacts.trace_path.display());
            println!("  manifest: {}", artifacts.manifest_path.display());
            if !artifacts.snapshots.is_empty() {
                println!("  snapshots: {} files", artifacts.snapshots.len());
            }
            Ok(())
        }
        Command::Converge { config, taus, ref_tau, ref_div, csv } => {
            let cfg = config.resolve()?;
            let reference = match ref_tau {
                Some(tau) => Reference::FixedTau { tau },
                None => Reference::SelfFinest { divide: ref_div },
            };
            let table = convergence::converge(&cfg, &taus, reference)?;
            print!("{}", table.text_table());
            if let Some(path) = csv {
                std::fs::write(&path, table.csv_string())?;
                println!("table written to {}", path.display());
            }
            Ok(())
        }
        Command::Certify { scheme, kind, z_min, points, expect_pd, csv } => {
            let kind = parse_kind(&kind)?;
            if !kind.is_corrected() {
                return Err(CliError::Usage(
                    "certification applies to corrected schemes; pass --kind T or --kind N".into(),
                ));
            }
            let tableau = registry_get(&scheme).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = analyzer::certify(&tableau, kind, z_min, points)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            print!("{}", report.summary());
            if let Some(path) = csv {
                std::fs::write(&path, report.csv_string())?;
                println!("scan written to {}", path.display());
            }
            if expect_pd && report.verdict == Definiteness::Indefinite {
                return Err(CliError::Certification(format!(
                    "{} ({}) is Indefinite on [{z_min}, 0]",
                    tableau.name(),
                    kind.tag()
                )));
            }
            Ok(())
        }
        Command::Preset { name, list } => {
            if list || name.is_none() {
                for (name, blurb) in preset::NAMES {
                    println!("{name:16} {blurb}");
                }
                for (id, dim, blurb) in initial::IDS {
                    println!("ic:{id:14} {dim}D  {blurb}");
                }
                return Ok(());
            }
            let cfg = preset::preset(name.as_deref().expect("checked"))?;
            print!("{}", cfg.to_text());
            Ok(())
        }
    }
}
