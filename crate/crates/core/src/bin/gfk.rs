use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use gfk::run::{self, RunConfig};
use gfk::Error;

/// Generalized Feynman-Kac path-integral energies from a TOML run config.
///
/// Exit status: 0 success, 1 I/O or other failure, 2 invalid config,
/// 3 a requested fit failed (outputs are still written), 4 a walk
/// exhausted its resampling attempts.
#[derive(Parser, Debug)]
#[command(name = "gfk", version)]
struct Cli {
    /// Run configuration (TOML).
    config: PathBuf,
    /// Output directory; overrides `output_dir`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads; overrides `workers`.
    #[arg(short, long)]
    workers: Option<usize>,
    /// Master seed; overrides `seed`.
    #[arg(short, long)]
    seed: Option<u32>,
    /// Validate the config and print the resolved manifest without running.
    #[arg(long)]
    dry_run: bool,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config { .. }) => 2,
        Some(Error::GuardExhausted { .. }) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match real_main() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn real_main() -> anyhow::Result<u8> {
    let cli = Cli::parse();
    let mut config = RunConfig::load(&cli.config)?;
    if let Some(dir) = cli.output {
        config.output_dir = dir;
    }
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    config.validate()?;

    if cli.dry_run {
        let cfg = config.path_config()?;
        print!("{}", config.manifest());
        println!(
            "# {} replications x {} steps, {} workers, output {}",
            config.paths,
            cfg.total_steps(),
            config.workers,
            config.output_dir.display()
        );
        return Ok(0);
    }

    let outcome = run::run(&config).with_context(|| format!("run `{}`", config.name))?;
    for line in run::energy_lines(config.lambda0, &outcome.analysis.fits) {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    if let Some(fail) = outcome.analysis.fit_failures.first() {
        eprintln!("{:?} fit failed: {}", fail.model, fail.message);
        return Ok(3);
    }
    Ok(0)
}
