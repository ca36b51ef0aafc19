//! End-to-end runs: config in, checkpoint table, plot data, JSON summary
//! and a replayable manifest out.
//!
//! Replications are sharded over a fixed-size thread pool by contiguous
//! index ranges. Replication `k` always draws from substream `k` of the
//! master seed and results are reduced in index order, so every output is
//! independent of the worker count.

mod config;
mod output;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{aggregate, attach_fit, fit_linear, fit_nonlinear, CheckpointStat, FitModel, FitResult, Weighting};
use crate::propagator::{random_start, run_replication, FkModel, GfkModel, PathConfig, PathModel};
use crate::rng::substream;
use crate::system::AtomSpec;
use crate::trialfn::TrialFunctionSpec;

pub use config::{FitSelection, Mode, RunConfig, TrialSelection, DEFAULT_CHECKPOINTS, FAMILIES};
pub use output::{emit_plot_data, emit_table, energy_lines, format_with_error, TABLE_COLUMNS};

pub const TABLE_FILE: &str = "table.tsv";
pub const PLOT_FILE: &str = "plot.dat";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Per-replication `(t, Z)` traces, indexed by replication.
pub type Traces = Vec<Vec<(f64, f64)>>;

/// A fit that was requested but failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitFailure {
    pub model: FitModel,
    pub message: String,
    /// The iteration cap was reached.
    pub nonconvergence: bool,
}

/// Checkpoint statistics and fits of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub stats: Vec<CheckpointStat>,
    pub fits: Vec<FitResult>,
    pub fit_failures: Vec<FitFailure>,
}

impl Analysis {
    /// The fit shown in the table's `ls fit` column: linear when available.
    pub fn primary_fit(&self) -> Option<&FitResult> {
        self.fits.first()
    }
}

/// File contents of a run, before they are written.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub table: String,
    pub plot: String,
    pub summary: String,
    pub manifest: String,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub analysis: Analysis,
    pub files: Vec<PathBuf>,
}

/// Runs all replications of `config`.
pub fn simulate(config: &RunConfig) -> Result<Traces> {
    config.validate()?;
    let cfg = config.path_config()?;
    match (&config.mode, &config.trial) {
        (Mode::Fk, _) => replicate_all(&FkModel { atom: config.atom }, config, &cfg),
        (Mode::Gfk, Some(sel)) => {
            let model = GfkModel::new(sel.function.clone(), config.lambda0, config.atom)?;
            replicate_all(&model, config, &cfg)
        }
        (Mode::Gfk, None) => Err(Error::config("trial", "required in gfk mode")),
    }
}

/// Contiguous replication-index ranges, several per worker.
fn shards(paths: u64, workers: usize) -> Vec<(u64, u64)> {
    let count = (workers as u64 * 4).clamp(1, paths.max(1));
    let len = paths.div_ceil(count);
    (0..paths).step_by(len as usize).map(|lo| (lo, (lo + len).min(paths))).collect()
}

fn replicate_all<M: PathModel + Sync>(model: &M, config: &RunConfig, cfg: &PathConfig) -> Result<Traces> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let n = config.atom.n_electrons;
    let ranges = shards(config.paths, config.workers);
    log::info!(
        "{}: {} replications x {} steps on {} workers",
        config.name,
        config.paths,
        cfg.total_steps(),
        config.workers
    );
    let shards: Vec<Traces> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let out = (lo..hi)
                    .map(|k| {
                        let mut rng = substream(config.seed, k);
                        let start = random_start(model, n, cfg, &mut rng)?;
                        run_replication(model, cfg, start, &mut rng)
                    })
                    .collect::<Result<Traces>>();
                log::debug!("replications {lo}..{hi} done");
                out
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(shards.into_iter().flatten().collect())
}

/// Aggregates traces and runs the requested fits. Fit failures are
/// recorded rather than returned, so that the statistics survive.
pub fn analyse(config: &RunConfig, traces: &[Vec<(f64, f64)>]) -> Result<Analysis> {
    let mut stats = aggregate(traces)?;
    let mut fits = Vec::new();
    let mut fit_failures = Vec::new();
    let mut record = |model, result: Result<FitResult>| match result {
        Ok(fit) => fits.push(fit),
        Err(e) => {
            log::warn!("{model:?} fit failed: {e}");
            fit_failures.push(FitFailure {
                model,
                nonconvergence: matches!(e, Error::NonConvergence { .. }),
                message: e.to_string(),
            })
        }
    };
    if config.fit.linear() {
        record(FitModel::Linear, fit_linear(&stats, config.lambda0, config.weighting));
    }
    if config.fit.nonlinear() {
        record(FitModel::Nonlinear, fit_nonlinear(&stats, config.lambda0, config.weighting));
    }
    if let Some(fit) = fits.first() {
        attach_fit(&mut stats, fit);
    }
    Ok(Analysis {
        stats,
        fits,
        fit_failures,
    })
}

#[derive(Serialize)]
struct Summary<'a> {
    engine_version: &'a str,
    name: &'a str,
    mode: Mode,
    atom: &'a AtomSpec,
    trial_label: &'a str,
    trial: Option<&'a TrialFunctionSpec>,
    lambda0: f64,
    scale: u32,
    checkpoints: &'a [f64],
    paths: u64,
    seed: u32,
    fit: FitSelection,
    weighting: Weighting,
    #[serde(flatten)]
    analysis: &'a Analysis,
}

/// Renders the four output files.
pub fn render(config: &RunConfig, analysis: &Analysis) -> Result<Rendered> {
    let header = format!(
        "# gfk {}  run = {}\n# Z = {}  electrons = {}  repulsion = {}  mode = {}  trial = {}\n# scale = {}  paths = {}  seed = {}\n",
        crate::VERSION,
        config.name,
        config.atom.nuclear_charge,
        config.atom.n_electrons,
        config.atom.electron_repulsion,
        config.mode,
        config.trial_label(),
        config.scale,
        config.paths,
        config.seed,
    );
    let mut header = header;
    for fail in &analysis.fit_failures {
        let label = match fail.model {
            FitModel::Linear => "lin fit",
            FitModel::Nonlinear => "nlin fit",
        };
        header.push_str(&format!("# {label} failed: {}\n", fail.message));
    }
    let table = header + &emit_table(&analysis.stats, config.lambda0, &analysis.fits)?;
    let plot = emit_plot_data(&analysis.stats)?;
    let summary = Summary {
        engine_version: crate::VERSION,
        name: &config.name,
        mode: config.mode,
        atom: &config.atom,
        trial_label: config.trial_label(),
        trial: config.trial.as_ref().map(|t| t.function.spec()),
        lambda0: config.lambda0,
        scale: config.scale,
        checkpoints: &config.checkpoints,
        paths: config.paths,
        seed: config.seed,
        fit: config.fit,
        weighting: config.weighting,
        analysis,
    };
    let mut summary = serde_json::to_string_pretty(&summary).expect("summary always serializes");
    summary.push('\n');
    Ok(Rendered {
        table,
        plot,
        summary,
        manifest: config.manifest(),
    })
}

/// Writes rendered outputs into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, rendered: &Rendered) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        (TABLE_FILE, &rendered.table),
        (PLOT_FILE, &rendered.plot),
        (SUMMARY_FILE, &rendered.summary),
        (MANIFEST_FILE, &rendered.manifest),
    ];
    files
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Simulates, fits, and writes all outputs to `config.output_dir`.
///
/// Returns an error only when no statistics could be produced; failed
/// fits are reported in [`Analysis::fit_failures`] with the outputs
/// written regardless.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let traces = simulate(config)?;
    let analysis = analyse(config, &traces)?;
    let rendered = render(config, &analysis)?;
    let files = write_outputs(&config.output_dir, &rendered)?;
    Ok(RunOutcome { analysis, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_every_index_once() {
        for paths in [1u64, 2, 7, 100, 1001] {
            for workers in [1usize, 2, 3, 8, 64] {
                let s = shards(paths, workers);
                assert_eq!(s.first().unwrap().0, 0);
                assert_eq!(s.last().unwrap().1, paths);
                assert!(s.windows(2).all(|w| w[0].1 == w[1].0 && w[0].0 < w[0].1));
            }
        }
    }
}
