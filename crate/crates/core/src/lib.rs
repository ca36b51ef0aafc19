//! Generalized Feynman-Kac path-integral Monte Carlo for few-electron atoms.
//!
//! Lowest energies of a given symmetry are obtained from the long-time
//! decay of `z_t`, the mean over many independent lattice random walks of
//! `exp(-(1/n) sum V_P)`. Walks are importance-sampled by a trial wave
//! function, which also fixes the symmetry (nodal structure) of the state.
//!
//! * [`rng`]: the reproducible sign generator and its per-walk substreams.
//! * [`system`]: walkers, Coulomb and perturbation potentials.
//! * [`trialfn`]: trial functions with analytic derivatives.
//! * [`propagator`]: the walk itself, plain or importance-sampled.
//! * [`estimator`]: checkpoint statistics and extrapolation fits.
//! * [`run`]: config files, parallel runs and output files.

pub mod error;
pub mod estimator;
pub mod propagator;
pub mod rng;
pub mod run;
pub mod system;
pub mod trialfn;

pub use error::{Error, Result};

/// Engine version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
