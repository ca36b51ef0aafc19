use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::Weighting;
use crate::propagator::PathConfig;
use crate::system::AtomSpec;
use crate::trialfn::{GoldmanTerm, PadeTerm, Symmetry, TrialFunction, TrialFunctionSpec};

/// Checkpoint grid used when a config does not name one.
pub const DEFAULT_CHECKPOINTS: [f64; 6] = [8.0, 16.0, 24.0, 32.0, 40.0, 48.0];

/// Trial-function families accepted by the `trial` key besides the presets.
pub const FAMILIES: [&str; 5] = ["slater", "node-polynomial", "pz-product", "goldman-ci", "pade-exp"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Plain Feynman-Kac: Brownian paths weighted by the Coulomb potential.
    Fk,
    /// Importance-sampled paths weighted by the perturbation potential.
    #[default]
    Gfk,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitSelection {
    #[default]
    Linear,
    Nonlinear,
    Both,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Fk => "fk",
            Mode::Gfk => "gfk",
        })
    }
}

impl FitSelection {
    pub fn linear(self) -> bool {
        matches!(self, Self::Linear | Self::Both)
    }

    pub fn nonlinear(self) -> bool {
        matches!(self, Self::Nonlinear | Self::Both)
    }
}

/// Trial function chosen by a config, with the name it was selected by.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSelection {
    /// Preset name, or the family name for explicit parameters.
    pub label: String,
    pub function: TrialFunction,
}

/// A validated run configuration.
///
/// Built with [`RunConfig::from_toml_str`] or [`RunConfig::load`]; the
/// fields may be edited afterwards and are checked again by
/// [`RunConfig::validate`] before a run starts.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub atom: AtomSpec,
    pub mode: Mode,
    /// Present exactly in GFK mode.
    pub trial: Option<TrialSelection>,
    /// Reference energy; zero in FK mode.
    pub lambda0: f64,
    pub scale: u32,
    pub checkpoints: Vec<f64>,
    pub paths: u64,
    pub seed: u32,
    pub workers: usize,
    pub fit: FitSelection,
    pub weighting: Weighting,
    pub output_dir: PathBuf,
}

/// `[coefficient, sigma, tau, s, t]`.
type GoldmanRow = (f64, f64, f64, u32, u32);
/// `[r1_power, r2_power, r12_power, coefficient]`.
type PadeRow = (u32, u32, u32, f64);

/// On-disk form. Every key is optional here; requirements are enforced
/// while resolving into [`RunConfig`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    engine_version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nuclear_charge: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    electrons: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    electron_repulsion: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checkpoints: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitSelection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighting: Option<Weighting>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_dir: Option<PathBuf>,

    #[serde(skip_serializing_if = "Option::is_none")]
    trial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symmetry: Option<Symmetry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<GoldmanRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numerator: Option<Vec<PadeRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    denominator: Option<Vec<PadeRow>>,
}

impl RawConfig {
    fn trial_params(&self) -> Vec<&'static str> {
        let mut present = Vec::new();
        let mut note = |name, set: bool| {
            if set {
                present.push(name)
            }
        };
        note("symmetry", self.symmetry.is_some());
        note("exponents", self.exponents.is_some());
        note("r0", self.r0.is_some());
        note("alpha1", self.alpha1.is_some());
        note("alpha2", self.alpha2.is_some());
        note("alpha", self.alpha.is_some());
        note("beta", self.beta.is_some());
        note("terms", self.terms.is_some());
        note("numerator", self.numerator.is_some());
        note("denominator", self.denominator.is_some());
        present
    }

    fn set_trial(&mut self, spec: &TrialFunctionSpec) {
        let pade = |terms: &[PadeTerm]| {
            terms
                .iter()
                .map(|p| (p.r1_power, p.r2_power, p.r12_power, p.coefficient))
                .collect()
        };
        match spec {
            TrialFunctionSpec::Slater { exponents } => {
                self.trial = Some("slater".into());
                self.exponents = Some(exponents.clone());
            }
            TrialFunctionSpec::NodePolynomial { r0, alpha1, alpha2 } => {
                self.trial = Some("node-polynomial".into());
                self.r0 = Some(*r0);
                self.alpha1 = Some(*alpha1);
                self.alpha2 = Some(*alpha2);
            }
            TrialFunctionSpec::PzProduct { alpha1, alpha2 } => {
                self.trial = Some("pz-product".into());
                self.alpha1 = Some(*alpha1);
                self.alpha2 = Some(*alpha2);
            }
            TrialFunctionSpec::GoldmanCi { symmetry, terms } => {
                self.trial = Some("goldman-ci".into());
                self.symmetry = Some(*symmetry);
                self.terms = Some(terms.iter().map(|g| (g.coefficient, g.sigma, g.tau, g.s, g.t)).collect());
            }
            TrialFunctionSpec::PadeExp {
                symmetry,
                numerator,
                denominator,
                alpha,
                beta,
            } => {
                self.trial = Some("pade-exp".into());
                self.symmetry = Some(*symmetry);
                self.numerator = Some(pade(numerator));
                self.denominator = Some(pade(denominator));
                self.alpha = Some(*alpha);
                self.beta = Some(*beta);
            }
        }
    }
}

fn required<T: Clone>(value: &Option<T>, field: &str, family: &str) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| Error::config(field, format!("required by trial family `{family}`")))
}

fn resolve_trial(raw: &RawConfig) -> Result<Option<TrialSelection>> {
    let params = raw.trial_params();
    let Some(name) = raw.trial.as_deref() else {
        if let Some(first) = params.first() {
            return Err(Error::config(*first, "trial parameter given without a `trial` key"));
        }
        return Ok(None);
    };
    let (spec, allowed): (TrialFunctionSpec, &[&str]) = if let Some(spec) = TrialFunctionSpec::preset(name) {
        (spec, &[])
    } else {
        match name {
            "slater" => (
                TrialFunctionSpec::Slater {
                    exponents: required(&raw.exponents, "exponents", name)?,
                },
                &["exponents"],
            ),
            "node-polynomial" => (
                TrialFunctionSpec::NodePolynomial {
                    r0: required(&raw.r0, "r0", name)?,
                    alpha1: required(&raw.alpha1, "alpha1", name)?,
                    alpha2: required(&raw.alpha2, "alpha2", name)?,
                },
                &["r0", "alpha1", "alpha2"],
            ),
            "pz-product" => (
                TrialFunctionSpec::PzProduct {
                    alpha1: required(&raw.alpha1, "alpha1", name)?,
                    alpha2: required(&raw.alpha2, "alpha2", name)?,
                },
                &["alpha1", "alpha2"],
            ),
            "goldman-ci" => (
                TrialFunctionSpec::GoldmanCi {
                    symmetry: raw.symmetry.unwrap_or(Symmetry::Symmetric),
                    terms: required(&raw.terms, "terms", name)?
                        .into_iter()
                        .map(|(coefficient, sigma, tau, s, t)| GoldmanTerm {
                            coefficient,
                            sigma,
                            tau,
                            s,
                            t,
                        })
                        .collect(),
                },
                &["symmetry", "terms"],
            ),
            "pade-exp" => {
                let pade = |rows: Vec<PadeRow>| {
                    rows.into_iter()
                        .map(|(r1_power, r2_power, r12_power, coefficient)| PadeTerm {
                            r1_power,
                            r2_power,
                            r12_power,
                            coefficient,
                        })
                        .collect()
                };
                (
                    TrialFunctionSpec::PadeExp {
                        symmetry: required(&raw.symmetry, "symmetry", name)?,
                        numerator: pade(required(&raw.numerator, "numerator", name)?),
                        denominator: pade(required(&raw.denominator, "denominator", name)?),
                        alpha: required(&raw.alpha, "alpha", name)?,
                        beta: required(&raw.beta, "beta", name)?,
                    },
                    &["symmetry", "numerator", "denominator", "alpha", "beta"],
                )
            }
            _ => {
                return Err(Error::config(
                    "trial",
                    format!(
                        "unknown trial function `{name}`; presets: {}; families: {}",
                        TrialFunctionSpec::PRESETS.join(", "),
                        FAMILIES.join(", ")
                    ),
                ))
            }
        }
    };
    if let Some(extra) = params.iter().find(|p| !allowed.contains(p)) {
        return Err(Error::config(*extra, format!("not a parameter of trial `{name}`")));
    }
    let function = TrialFunction::new(spec).map_err(|e| Error::config("trial", e.to_string()))?;
    Ok(Some(TrialSelection {
        label: name.to_string(),
        function,
    }))
}

fn check_atom(atom: &AtomSpec) -> Result<()> {
    if !(atom.nuclear_charge > 0.0 && atom.nuclear_charge.is_finite()) {
        return Err(Error::config("nuclear_charge", "must be positive and finite"));
    }
    if atom.n_electrons == 0 {
        return Err(Error::config("electrons", "at least one electron is required"));
    }
    Ok(())
}

impl RunConfig {
    /// Parses and validates a TOML config. `default_name` is used when the
    /// file has no `name` key.
    pub fn from_toml_str(text: &str, default_name: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = message
                .split('`')
                .nth(1)
                .filter(|_| message.starts_with("unknown field"))
                .unwrap_or("(toml)")
                .to_string();
            Error::Config {
                field,
                message: e.to_string().trim().to_string(),
            }
        })?;
        Self::resolve(raw, default_name)
    }

    /// Reads a config file; the file stem is the default run name.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
        Self::from_toml_str(&text, stem)
    }

    fn resolve(raw: RawConfig, default_name: &str) -> Result<Self> {
        if let Some(v) = &raw.engine_version {
            if v != crate::VERSION {
                log::warn!("config was written by engine {v}; this is {}", crate::VERSION);
            }
        }
        let name = raw.name.clone().unwrap_or_else(|| default_name.to_string());
        let nuclear_charge = raw.nuclear_charge.unwrap_or(2.0);
        let electrons = raw.electrons.unwrap_or(2);
        let atom = AtomSpec {
            nuclear_charge,
            n_electrons: electrons,
            electron_repulsion: raw.electron_repulsion.unwrap_or(true),
        };
        check_atom(&atom)?;
        let mode = raw.mode.unwrap_or_default();
        let trial = resolve_trial(&raw)?;
        let lambda0 = match mode {
            Mode::Gfk => {
                if trial.is_none() {
                    return Err(Error::config("trial", "required in gfk mode"));
                }
                raw.lambda0
                    .ok_or_else(|| Error::config("lambda0", "required in gfk mode"))?
            }
            Mode::Fk => {
                if trial.is_some() {
                    return Err(Error::config("trial", "fk mode samples unguided paths; remove the trial function"));
                }
                if raw.lambda0.is_some() {
                    return Err(Error::config("lambda0", "fk mode uses a zero reference energy; remove lambda0"));
                }
                0.0
            }
        };
        let config = Self {
            output_dir: raw.output_dir.clone().unwrap_or_else(|| PathBuf::from("runs").join(&name)),
            name,
            atom,
            mode,
            trial,
            lambda0,
            scale: raw.scale.unwrap_or(30),
            checkpoints: raw.checkpoints.clone().unwrap_or_else(|| DEFAULT_CHECKPOINTS.to_vec()),
            paths: raw
                .paths
                .ok_or_else(|| Error::config("paths", "number of replications is required"))?,
            seed: raw.seed.unwrap_or(1),
            workers: raw
                .workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            fit: raw.fit.unwrap_or_default(),
            weighting: raw.weighting.unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks every field; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must be nonempty and free of path separators"));
        }
        match (&self.mode, &self.trial) {
            (Mode::Gfk, None) => return Err(Error::config("trial", "required in gfk mode")),
            (Mode::Fk, Some(_)) => return Err(Error::config("trial", "not used in fk mode")),
            (Mode::Gfk, Some(sel)) => {
                if sel.function.dim() != self.atom.dim() {
                    return Err(Error::config(
                        "trial",
                        format!(
                            "`{}` acts on {} electrons but electrons = {}",
                            sel.label,
                            sel.function.dim() / 3,
                            self.atom.n_electrons
                        ),
                    ));
                }
            }
            (Mode::Fk, None) => {}
        }
        check_atom(&self.atom)?;
        if !self.lambda0.is_finite() {
            return Err(Error::config("lambda0", "must be finite"));
        }
        if self.mode == Mode::Fk && self.lambda0 != 0.0 {
            return Err(Error::config("lambda0", "fk mode uses a zero reference energy"));
        }
        if self.scale == 0 {
            return Err(Error::config("scale", "must be at least 1"));
        }
        self.path_config()?;
        if self.paths < 2 {
            return Err(Error::config("paths", "at least two replications are needed for error bars"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        let n = self.checkpoints.len();
        if self.fit.linear() && n < 3 {
            return Err(Error::config("fit", format!("linear fit needs at least 3 checkpoints, got {n}")));
        }
        if self.fit.nonlinear() && n < 4 {
            return Err(Error::config("fit", format!("nonlinear fit needs at least 4 checkpoints, got {n}")));
        }
        Ok(())
    }

    pub fn path_config(&self) -> Result<PathConfig> {
        PathConfig::new(self.scale, self.checkpoints.clone()).map_err(|e| Error::config("checkpoints", e.to_string()))
    }

    /// Label of the trial function, or `none` in FK mode.
    pub fn trial_label(&self) -> &str {
        self.trial.as_ref().map_or("none", |t| t.label.as_str())
    }

    /// Every setting that affects the numbers, as TOML that
    /// [`RunConfig::from_toml_str`] reads back. Presets are written out as
    /// their family parameters. Worker count and output directory are
    /// left out: they do not change any result.
    pub fn manifest(&self) -> String {
        let mut raw = RawConfig {
            engine_version: Some(crate::VERSION.to_string()),
            name: Some(self.name.clone()),
            nuclear_charge: Some(self.atom.nuclear_charge),
            electrons: Some(self.atom.n_electrons),
            electron_repulsion: Some(self.atom.electron_repulsion),
            mode: Some(self.mode),
            lambda0: (self.mode == Mode::Gfk).then_some(self.lambda0),
            scale: Some(self.scale),
            checkpoints: Some(self.checkpoints.clone()),
            paths: Some(self.paths),
            seed: Some(self.seed),
            fit: Some(self.fit),
            weighting: Some(self.weighting),
            ..RawConfig::default()
        };
        let mut header = String::new();
        if let Some(sel) = &self.trial {
            raw.set_trial(sel.function.spec());
            if TrialFunctionSpec::preset(&sel.label).is_some() {
                header = format!("# trial preset: {}\n", sel.label);
            }
        }
        let body = toml::to_string(&raw).expect("config fields always serialize");
        format!("{header}{body}")
    }
}
