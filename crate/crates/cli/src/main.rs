use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use gup_jcm_cli::config::{Preset, RunConfig};
use gup_jcm_cli::output::Output;
use gup_jcm_cli::{commands, verify};

/// Simulations of the Jaynes-Cummings model with minimal-length corrections.
#[derive(Parser)]
#[command(name = "gupjcm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in parameter set: fig1, fig2 or fig3.
    #[arg(long, global = true)]
    preset: Option<Preset>,
    /// Output directory (default: the config's output_dir, else out/<command>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a config field, e.g. --set gup.gamma=1e4. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Inversion time series and Rabi frequency shifts.
    Rabi,
    /// Dispersive evolution and its photon-added decomposition.
    Dispersive,
    /// Wigner function difference against the uncorrected coherent state.
    WignerDiff,
    /// ζ_LQ and ζ_RQ maps over field frequency and detuning.
    ZetaMaps,
    /// Run the self-check suite; exits non-zero if any check fails.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Rabi => "rabi",
            Self::Dispersive => "dispersive",
            Self::WignerDiff => "wigner-diff",
            Self::ZetaMaps => "zeta-maps",
            Self::Verify => "verify",
        }
    }
}

fn resolve_config(common: &Common) -> Result<RunConfig> {
    let base = match (&common.config, common.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(p)) => RunConfig::preset(p),
        (None, None) => RunConfig::default(),
    };
    let mut cfg = base.with_overrides(&common.overrides)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let cfg = resolve_config(&cli.common)?;
    let name = cli.command.name();
    let dir = cli
        .common
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(name));
    let start = Instant::now();
    let mut out = Output::create(&dir)?;
    let mut passed = true;
    match cli.command {
        Command::Rabi => commands::rabi(&cfg, &mut out)?,
        Command::Dispersive => commands::dispersive(&cfg, &mut out)?,
        Command::WignerDiff => commands::wigner_diff(&cfg, &mut out)?,
        Command::ZetaMaps => commands::zeta_maps(&cfg, &mut out)?,
        Command::Verify => {
            let results = verify::run_all(&cfg);
            verify::print_table(&results);
            passed = results.iter().all(|(r, _)| r.passed);
            let report: Vec<_> = results.into_iter().map(|(r, _)| r).collect();
            out.json("verify_report.json", &report)?;
        }
    }
    let dir = out.finish(name, &cfg, start.elapsed())?;
    eprintln!("wrote {}", dir.display());
    Ok(passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
