//! Discretized Feynman-Kac paths.
//!
//! Each of the `d` coordinates moves by `eps / sqrt(n)` per step, with `eps`
//! a `+-1` sign from the replication's generator and `n = scale^2` steps per
//! unit of time, so the spatial step is `1/scale` Bohr. Importance-sampled
//! (GFK) paths add the Euler-Maruyama drift increment `(grad phi / phi) / n`,
//! limited in norm to one lattice step.
//!
//! A path keeps its position as `start + lattice / scale + drift_offset`
//! with an integer lattice counter per coordinate, so unguided paths stay
//! exactly on the lattice.

use crate::error::{Error, Result};
use crate::rng::RngState;
use crate::system::{coulomb_potential, perturbation_from_eval, AtomSpec, Walker};
use crate::trialfn::{drift_from_eval, TrialEval, TrialFunction};

/// Resampling attempts per step before giving up.
pub const MAX_GUARD_ATTEMPTS: u32 = 100;

/// Step size and checkpoint schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct PathConfig {
    scale: u32,
    checkpoint_times: Vec<f64>,
    checkpoint_steps: Vec<u64>,
}

impl PathConfig {
    /// `scale` sets the step `1/scale`; every checkpoint time times
    /// `scale^2` must be a whole number of steps.
    pub fn new(scale: u32, checkpoint_times: Vec<f64>) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Parameter("scale must be positive".into()));
        }
        if checkpoint_times.is_empty() {
            return Err(Error::Parameter("at least one checkpoint time is required".into()));
        }
        let n = u64::from(scale) * u64::from(scale);
        let mut steps = Vec::with_capacity(checkpoint_times.len());
        for (i, &t) in checkpoint_times.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Parameter(format!("checkpoint time {t} must be positive")));
            }
            if i > 0 && t <= checkpoint_times[i - 1] {
                return Err(Error::Parameter("checkpoint times must be strictly ascending".into()));
            }
            let exact = t * n as f64;
            let rounded = exact.round();
            if (exact - rounded).abs() > 1e-9 * exact.max(1.0) {
                return Err(Error::Parameter(format!(
                    "checkpoint time {t} is not a whole number of steps of 1/{n}"
                )));
            }
            steps.push(rounded as u64);
        }
        Ok(Self {
            scale,
            checkpoint_times,
            checkpoint_steps: steps,
        })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// `n = scale^2`.
    pub fn steps_per_unit_time(&self) -> u64 {
        u64::from(self.scale) * u64::from(self.scale)
    }

    /// Spatial step `1/scale = 1/sqrt(n)`.
    pub fn step_length(&self) -> f64 {
        1.0 / f64::from(self.scale)
    }

    /// Time step `1/n`.
    pub fn time_step(&self) -> f64 {
        1.0 / self.steps_per_unit_time() as f64
    }

    /// Minimum admissible electron-nucleus and electron-electron distance, `1/(10 scale)`.
    pub fn singularity_radius(&self) -> f64 {
        0.1 * self.step_length()
    }

    pub fn checkpoint_times(&self) -> &[f64] {
        &self.checkpoint_times
    }

    pub fn checkpoint_steps(&self) -> &[u64] {
        &self.checkpoint_steps
    }

    pub fn total_steps(&self) -> u64 {
        *self.checkpoint_steps.last().expect("nonempty")
    }
}

/// Outcome of a guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    Accept,
    Resample,
}

/// The quantities a path needs from the physical model.
///
/// `Site` caches whatever the model computes at a position (for GFK the
/// trial-function evaluation), so that the accepted proposal's evaluation
/// also serves as the next step's drift.
pub trait PathModel {
    type Site;

    fn dim(&self) -> usize;

    fn new_site(&self) -> Self::Site;

    /// Evaluates the model at `x` into `site`.
    fn evaluate(&self, x: &Walker, site: &mut Self::Site) -> Result<()>;

    /// Geometric rejection of a proposal before it is evaluated.
    fn singular(&self, _proposed: &Walker, _cfg: &PathConfig) -> bool {
        false
    }

    /// Whether moving from `current` to `proposed` leaves the nodal cell.
    fn crosses_node(&self, _current: &Self::Site, _proposed: &Self::Site) -> bool {
        false
    }

    /// Writes the drift velocity into `out`. Returns `false` (leaving `out`
    /// untouched) when the model has no drift.
    fn drift(&self, site: &Self::Site, out: &mut [f64]) -> Result<bool>;

    /// Potential accumulated along the path, evaluated at an accepted position.
    fn potential(&self, x: &Walker, site: &Self::Site) -> Result<f64>;
}

/// Plain Feynman-Kac: Brownian lattice walk weighted by the bare Coulomb potential.
#[derive(Clone, Debug)]
pub struct FkModel {
    pub atom: AtomSpec,
}

impl PathModel for FkModel {
    type Site = ();

    fn dim(&self) -> usize {
        self.atom.dim()
    }

    fn new_site(&self) {}

    fn evaluate(&self, _x: &Walker, _site: &mut ()) -> Result<()> {
        Ok(())
    }

    fn singular(&self, proposed: &Walker, cfg: &PathConfig) -> bool {
        singularity_guard(proposed, cfg) == Guard::Resample
    }

    fn drift(&self, _site: &(), _out: &mut [f64]) -> Result<bool> {
        Ok(false)
    }

    fn potential(&self, x: &Walker, _site: &()) -> Result<f64> {
        coulomb_potential(x, &self.atom)
    }
}

/// Generalized Feynman-Kac: drifted walk guided by a trial function,
/// weighted by the residual potential `V - lambda0 - laplacian(phi)/(2 phi)`.
#[derive(Clone, Debug)]
pub struct GfkModel {
    pub trial: TrialFunction,
    pub lambda0: f64,
    pub atom: AtomSpec,
}

impl GfkModel {
    pub fn new(trial: TrialFunction, lambda0: f64, atom: AtomSpec) -> Result<Self> {
        if trial.dim() != atom.dim() {
            return Err(Error::DimensionMismatch {
                expected: atom.dim(),
                got: trial.dim(),
            });
        }
        if !lambda0.is_finite() {
            return Err(Error::Parameter(format!("lambda0 must be finite, got {lambda0}")));
        }
        Ok(Self { trial, lambda0, atom })
    }
}

impl PathModel for GfkModel {
    type Site = TrialEval;

    fn dim(&self) -> usize {
        self.atom.dim()
    }

    fn new_site(&self) -> TrialEval {
        TrialEval::zeros(self.dim())
    }

    fn evaluate(&self, x: &Walker, site: &mut TrialEval) -> Result<()> {
        self.trial.evaluate_into(x, site)
    }

    fn singular(&self, proposed: &Walker, cfg: &PathConfig) -> bool {
        singularity_guard(proposed, cfg) == Guard::Resample
    }

    fn crosses_node(&self, current: &TrialEval, proposed: &TrialEval) -> bool {
        proposed.value == 0.0
            || (self.trial.has_nodes() && (current.value > 0.0) != (proposed.value > 0.0))
    }

    fn drift(&self, site: &TrialEval, out: &mut [f64]) -> Result<bool> {
        drift_from_eval(site, out)?;
        Ok(true)
    }

    fn potential(&self, x: &Walker, site: &TrialEval) -> Result<f64> {
        perturbation_from_eval(coulomb_potential(x, &self.atom)?, site, self.lambda0)
    }
}

/// Resample iff some electron is within `1/(10 scale)` of the nucleus or of
/// another electron.
pub fn singularity_guard(proposed: &Walker, cfg: &PathConfig) -> Guard {
    let delta = cfg.singularity_radius();
    let n = proposed.n_electrons();
    for i in 0..n {
        if proposed.radius(i) < delta {
            return Guard::Resample;
        }
        for j in i + 1..n {
            if proposed.separation(i, j) < delta {
                return Guard::Resample;
            }
        }
    }
    Guard::Accept
}

/// Resample iff the proposal leaves the nodal cell of `before`.
pub fn node_guard(trial: &TrialFunction, before: &Walker, proposed: &Walker) -> Result<Guard> {
    if !trial.has_nodes() {
        return Ok(Guard::Accept);
    }
    Ok(if trial.crossed_node(before, proposed)? {
        Guard::Resample
    } else {
        Guard::Accept
    })
}

/// State of one replication's walk.
#[derive(Clone, Debug)]
pub struct PathAccumulator<S> {
    walker: Walker,
    start: Vec<f64>,
    lattice: Vec<i64>,
    drift_offset: Vec<f64>,
    potential_sum: f64,
    step_index: u64,
    site: S,
    // Scratch for proposals.
    proposal: Walker,
    proposed_lattice: Vec<i64>,
    proposed_offset: Vec<f64>,
    proposed_site: S,
    drift: Vec<f64>,
}

impl<S> PathAccumulator<S> {
    pub fn new<M: PathModel<Site = S>>(model: &M, start: Walker) -> Result<Self> {
        if start.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: start.dim(),
            });
        }
        let mut site = model.new_site();
        model.evaluate(&start, &mut site)?;
        let dim = start.dim();
        Ok(Self {
            start: start.coords().to_vec(),
            proposal: start.clone(),
            walker: start,
            lattice: vec![0; dim],
            drift_offset: vec![0.0; dim],
            potential_sum: 0.0,
            step_index: 0,
            site,
            proposed_lattice: vec![0; dim],
            proposed_offset: vec![0.0; dim],
            proposed_site: model.new_site(),
            drift: vec![0.0; dim],
        })
    }

    pub fn walker(&self) -> &Walker {
        &self.walker
    }

    /// Running sum of the potential over accepted positions (Hartree x steps).
    pub fn potential_sum(&self) -> f64 {
        self.potential_sum
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    /// Integer lattice displacement of each coordinate.
    pub fn lattice(&self) -> &[i64] {
        &self.lattice
    }

    /// `exp(-potential_sum / n)`.
    pub fn weight(&self, cfg: &PathConfig) -> f64 {
        (-self.potential_sum / cfg.steps_per_unit_time() as f64).exp()
    }
}

/// Rescales `drift` so that its Euclidean norm is at most `max_speed`.
///
/// With `max_speed = scale` the drift moves a walker at most one lattice
/// step per time step. The drift of a noded trial function grows like the
/// inverse distance to the node; unlimited, a walker that comes within
/// ~1e-5 of a node is thrown hundreds of Bohr away on every proposal.
pub fn limit_drift(drift: &mut [f64], max_speed: f64) {
    let norm = drift.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > max_speed {
        let f = max_speed / norm;
        drift.iter_mut().for_each(|v| *v *= f);
    }
}

/// Advances the path by one accepted step.
///
/// The drift displacement of a step is limited to one lattice step (see
/// [`limit_drift`]).
pub fn step<M: PathModel>(
    model: &M,
    acc: &mut PathAccumulator<M::Site>,
    rng: &mut RngState,
    cfg: &PathConfig,
) -> Result<()> {
    let h = cfg.step_length();
    let dt = cfg.time_step();
    let drifted = model.drift(&acc.site, &mut acc.drift)?;
    if drifted {
        limit_drift(&mut acc.drift, h / dt);
    }
    for _ in 0..MAX_GUARD_ATTEMPTS {
        let coords = acc.proposal.coords_mut();
        for k in 0..coords.len() {
            let m = acc.lattice[k] + i64::from(rng.bernoulli());
            acc.proposed_lattice[k] = m;
            let offset = if drifted {
                acc.drift_offset[k] + acc.drift[k] * dt
            } else {
                acc.drift_offset[k]
            };
            acc.proposed_offset[k] = offset;
            coords[k] = acc.start[k] + m as f64 * h + offset;
        }
        if coords.iter().any(|c| !c.is_finite()) || model.singular(&acc.proposal, cfg) {
            continue;
        }
        model.evaluate(&acc.proposal, &mut acc.proposed_site)?;
        if model.crosses_node(&acc.site, &acc.proposed_site) {
            continue;
        }
        let v = model.potential(&acc.proposal, &acc.proposed_site)?;
        std::mem::swap(&mut acc.walker, &mut acc.proposal);
        std::mem::swap(&mut acc.lattice, &mut acc.proposed_lattice);
        std::mem::swap(&mut acc.drift_offset, &mut acc.proposed_offset);
        std::mem::swap(&mut acc.site, &mut acc.proposed_site);
        acc.potential_sum += v;
        acc.step_index += 1;
        return Ok(());
    }
    Err(Error::GuardExhausted {
        attempts: MAX_GUARD_ATTEMPTS,
        step: acc.step_index + 1,
    })
}

/// One plain Feynman-Kac step.
pub fn fk_step(
    acc: &mut PathAccumulator<()>,
    rng: &mut RngState,
    cfg: &PathConfig,
    model: &FkModel,
) -> Result<()> {
    step(model, acc, rng, cfg)
}

/// One importance-sampled step.
pub fn gfk_step(
    acc: &mut PathAccumulator<TrialEval>,
    rng: &mut RngState,
    cfg: &PathConfig,
    model: &GfkModel,
) -> Result<()> {
    step(model, acc, rng, cfg)
}

/// Runs a path to the last checkpoint and returns `(t, Z(t))` at every checkpoint.
pub fn run_replication<M: PathModel>(
    model: &M,
    cfg: &PathConfig,
    start: Walker,
    rng: &mut RngState,
) -> Result<Vec<(f64, f64)>> {
    let mut acc = PathAccumulator::new(model, start)?;
    let mut out = Vec::with_capacity(cfg.checkpoint_steps().len());
    for (&t, &target) in cfg.checkpoint_times().iter().zip(cfg.checkpoint_steps()) {
        while acc.step_index < target {
            step(model, &mut acc, rng, cfg)?;
        }
        out.push((t, acc.weight(cfg)));
    }
    Ok(out)
}

/// Draws a starting walker: each electron uniformly on a sphere whose
/// radius is uniform in `[0.5, 1.5)` Bohr. Draws that are singular or on a
/// node of the model are redrawn.
pub fn random_start<M: PathModel>(
    model: &M,
    n_electrons: usize,
    cfg: &PathConfig,
    rng: &mut RngState,
) -> Result<Walker> {
    let mut site = model.new_site();
    for _ in 0..MAX_GUARD_ATTEMPTS {
        let mut coords = Vec::with_capacity(3 * n_electrons);
        for _ in 0..n_electrons {
            let r = 0.5 + rng.uniform();
            let z = 2.0 * rng.uniform() - 1.0;
            let phi = 2.0 * std::f64::consts::PI * rng.uniform();
            let s = (1.0 - z * z).sqrt();
            coords.extend([r * s * phi.cos(), r * s * phi.sin(), r * z]);
        }
        let w = Walker::new(coords)?;
        if model.singular(&w, cfg) {
            continue;
        }
        model.evaluate(&w, &mut site)?;
        if model.crosses_node(&site, &site) {
            continue;
        }
        if model.drift(&site, &mut vec![0.0; model.dim()]).is_err() {
            continue;
        }
        return Ok(w);
    }
    Err(Error::GuardExhausted {
        attempts: MAX_GUARD_ATTEMPTS,
        step: 0,
    })
}
