//! Trial wave functions with analytic gradients and Laplacians.
//!
//! Every family is differentiated by hand in Cartesian coordinates. The
//! two-electron families are written as functions of `(r1, r2, r12)` and
//! mapped to Cartesian derivatives in [`pair`].

mod pair;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{coulomb_potential, AtomSpec, Walker};
use pair::{radial_factor, to_cartesian, PairDerivs, PairGeometry};

/// Value, Cartesian gradient and Laplacian of a trial function at a walker.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub laplacian: f64,
}

impl TrialEval {
    pub fn zeros(dim: usize) -> Self {
        Self {
            value: 0.0,
            gradient: vec![0.0; dim],
            laplacian: 0.0,
        }
    }
}

/// Exchange projector `(1 + P12)` or `(1 - P12)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn sign(self) -> f64 {
        match self {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        }
    }
}

/// One monomial `coefficient * r1^r1_power * r2^r2_power * r12^r12_power`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PadeTerm {
    pub r1_power: u32,
    pub r2_power: u32,
    pub r12_power: u32,
    pub coefficient: f64,
}

/// One configuration `c e^{-sigma r< - tau r>} r<^s r>^t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldmanTerm {
    pub coefficient: f64,
    pub sigma: f64,
    pub tau: f64,
    pub s: u32,
    pub t: u32,
}

/// Parameters of a trial function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TrialFunctionSpec {
    /// `exp(-sum_i a_i r_i)` for any number of electrons. A zero exponent
    /// leaves that electron unguided.
    Slater { exponents: Vec<f64> },
    /// `(1 +- P12) exp(N/D - alpha r1 - beta r2)` with `N`, `D` polynomials
    /// in `r1, r2, r12`.
    PadeExp {
        symmetry: Symmetry,
        numerator: Vec<PadeTerm>,
        denominator: Vec<PadeTerm>,
        alpha: f64,
        beta: f64,
    },
    /// `(r0 - r1) e^{-a1 r1 - a2 r2} - (r0 - r2) e^{-a2 r1 - a1 r2}`, nodal on `r1 = r2`.
    NodePolynomial { r0: f64, alpha1: f64, alpha2: f64 },
    /// `sum_i c_i [phi_i(1,2) + phi_i(2,1)]` over the `r<`/`r>` basis.
    GoldmanCi {
        symmetry: Symmetry,
        terms: Vec<GoldmanTerm>,
    },
    /// `(z1 + z2) [e^{-a1 r1 - a2 r2} + e^{-a2 r1 - a1 r2}]`, nodal on `z1 = -z2`.
    PzProduct { alpha1: f64, alpha2: f64 },
}

impl TrialFunctionSpec {
    pub fn fn3() -> Self {
        Self::NodePolynomial {
            r0: 1.0,
            alpha1: 1.0,
            alpha2: 2.0,
        }
    }

    pub fn fn4() -> Self {
        Self::NodePolynomial {
            r0: 1.0,
            alpha1: 0.67180691,
            alpha2: 2.00411836,
        }
    }

    pub fn fn5() -> Self {
        Self::NodePolynomial {
            r0: 0.73351723,
            alpha1: 0.636748,
            alpha2: 2.002777,
        }
    }

    /// Two-configuration ground-state CI function.
    pub fn goldman_ground() -> Self {
        Self::GoldmanCi {
            symmetry: Symmetry::Symmetric,
            terms: vec![
                GoldmanTerm {
                    coefficient: 77.457638,
                    sigma: 1.216604,
                    tau: 1.920647,
                    s: 0,
                    t: 0,
                },
                GoldmanTerm {
                    coefficient: -5.671781,
                    sigma: 1.994090,
                    tau: 2.070513,
                    s: 1,
                    t: 1,
                },
            ],
        }
    }

    /// Two-configuration CI function for the triplet S state.
    ///
    /// The first coefficient is carried exactly as printed at its source
    /// (`62454731`, no decimal point); its intended magnitude is unknown.
    pub fn goldman_triplet() -> Self {
        Self::GoldmanCi {
            symmetry: Symmetry::Symmetric,
            terms: vec![
                GoldmanTerm {
                    coefficient: 62454731.0,
                    sigma: 1.981402,
                    tau: 0.456199,
                    s: 0,
                    t: 0,
                },
                GoldmanTerm {
                    coefficient: 13.154490,
                    sigma: 1.213401,
                    tau: 1.810023,
                    s: 0,
                    t: 0,
                },
            ],
        }
    }

    /// Named parameter sets shipped with the engine.
    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "fn3" => Self::fn3(),
            "fn4" => Self::fn4(),
            "fn5" => Self::fn5(),
            "goldman-gs" => Self::goldman_ground(),
            "goldman-trip" => Self::goldman_triplet(),
            _ => return None,
        })
    }

    pub const PRESETS: [&'static str; 5] = ["fn3", "fn4", "fn5", "goldman-gs", "goldman-trip"];

    fn validate(&self) -> Result<()> {
        fn positive(name: &str, x: f64) -> Result<()> {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive and finite, got {x}")))
            }
        }
        fn finite(name: &str, x: f64) -> Result<()> {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be finite, got {x}")))
            }
        }
        match self {
            Self::Slater { exponents } => {
                if exponents.is_empty() {
                    return Err(Error::Parameter("slater: empty exponent list".into()));
                }
                for &a in exponents {
                    if !(a >= 0.0 && a.is_finite()) {
                        return Err(Error::Parameter(format!(
                            "slater exponents must be nonnegative and finite, got {a}"
                        )));
                    }
                }
            }
            Self::PadeExp {
                numerator,
                denominator,
                alpha,
                beta,
                ..
            } => {
                if numerator.is_empty() || denominator.is_empty() {
                    return Err(Error::Parameter("pade: empty numerator or denominator".into()));
                }
                for term in numerator.iter().chain(denominator) {
                    finite("pade coefficient", term.coefficient)?;
                }
                positive("alpha", *alpha)?;
                positive("beta", *beta)?;
            }
            Self::NodePolynomial { r0, alpha1, alpha2 } => {
                finite("r0", *r0)?;
                positive("alpha1", *alpha1)?;
                positive("alpha2", *alpha2)?;
            }
            Self::GoldmanCi { symmetry, terms } => {
                if terms.is_empty() {
                    return Err(Error::Parameter("goldman: empty term list".into()));
                }
                // Each basis function depends on the pair only through r< and r>,
                // so the antisymmetric projection is identically zero.
                if *symmetry == Symmetry::Antisymmetric {
                    return Err(Error::Parameter(
                        "goldman: the antisymmetric combination of r</r> basis functions vanishes identically".into(),
                    ));
                }
                for term in terms {
                    finite("goldman coefficient", term.coefficient)?;
                    positive("sigma", term.sigma)?;
                    positive("tau", term.tau)?;
                }
            }
            Self::PzProduct { alpha1, alpha2 } => {
                positive("alpha1", *alpha1)?;
                positive("alpha2", *alpha2)?;
            }
        }
        Ok(())
    }

    /// Number of Cartesian coordinates the function acts on.
    pub fn dim(&self) -> usize {
        match self {
            Self::Slater { exponents } => 3 * exponents.len(),
            _ => 6,
        }
    }

    /// Whether the function can change sign.
    pub fn has_nodes(&self) -> bool {
        match self {
            Self::Slater { .. } | Self::GoldmanCi { .. } => false,
            Self::PadeExp { symmetry, .. } => *symmetry == Symmetry::Antisymmetric,
            Self::NodePolynomial { .. } | Self::PzProduct { .. } => true,
        }
    }
}

/// A validated trial function.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialFunction {
    spec: TrialFunctionSpec,
}

impl TrialFunction {
    pub fn new(spec: TrialFunctionSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &TrialFunctionSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn has_nodes(&self) -> bool {
        self.spec.has_nodes()
    }

    fn check(&self, w: &Walker) -> Result<()> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: w.dim(),
            });
        }
        Ok(())
    }

    /// Value only.
    pub fn value(&self, w: &Walker) -> Result<f64> {
        self.check(w)?;
        Ok(self.value_unchecked(w))
    }

    fn value_unchecked(&self, w: &Walker) -> f64 {
        match &self.spec {
            TrialFunctionSpec::Slater { exponents } => {
                let exponent: f64 = exponents
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a * w.radius(i))
                    .sum();
                (-exponent).exp()
            }
            TrialFunctionSpec::PzProduct { alpha1, alpha2 } => {
                let (r1, r2) = (w.radius(0), w.radius(1));
                let z = w.coords()[2] + w.coords()[5];
                z * ((-alpha1 * r1 - alpha2 * r2).exp() + (-alpha1 * r2 - alpha2 * r1).exp())
            }
            _ => self.pair_derivs(&PairGeometry::new(w.electron(0), w.electron(1))).f,
        }
    }

    /// Value, gradient and Laplacian.
    pub fn evaluate(&self, w: &Walker) -> Result<TrialEval> {
        let mut out = TrialEval::zeros(self.dim());
        self.evaluate_into(w, &mut out)?;
        Ok(out)
    }

    /// [`evaluate`](Self::evaluate) into a reusable buffer.
    pub fn evaluate_into(&self, w: &Walker, out: &mut TrialEval) -> Result<()> {
        self.check(w)?;
        out.gradient.resize(self.dim(), 0.0);
        match &self.spec {
            TrialFunctionSpec::Slater { exponents } => {
                let mut exponent = 0.0;
                let mut lap_ratio = 0.0;
                for (i, &a) in exponents.iter().enumerate() {
                    let r = w.radius(i);
                    exponent += a * r;
                    if a != 0.0 {
                        lap_ratio += a * a - 2.0 * a / r;
                    }
                }
                let value = (-exponent).exp();
                for (i, &a) in exponents.iter().enumerate() {
                    let x = w.electron(i);
                    let r = w.radius(i);
                    for k in 0..3 {
                        out.gradient[3 * i + k] = if a == 0.0 || r == 0.0 {
                            0.0
                        } else {
                            -a * value * x[k] / r
                        };
                    }
                }
                out.value = value;
                out.laplacian = value * lap_ratio;
            }
            TrialFunctionSpec::PzProduct { .. } => {
                let geom = PairGeometry::new(w.electron(0), w.electron(1));
                let radial = self.pair_derivs(&geom);
                let mut grad_h = [0.0; 6];
                let lap_h = to_cartesian(&radial, &geom, &mut grad_h);
                let p = w.coords()[2] + w.coords()[5];
                out.value = p * radial.f;
                for (k, (g, gh)) in out.gradient.iter_mut().zip(grad_h).enumerate() {
                    *g = p * gh + if k == 2 || k == 5 { radial.f } else { 0.0 };
                }
                out.laplacian = p * lap_h + 2.0 * (grad_h[2] + grad_h[5]);
            }
            _ => {
                let geom = PairGeometry::new(w.electron(0), w.electron(1));
                let d = self.pair_derivs(&geom);
                out.value = d.f;
                out.laplacian = to_cartesian(&d, &geom, &mut out.gradient);
            }
        }
        Ok(())
    }

    /// `(r1, r2, r12)` derivatives of the two-electron families. For the Pz
    /// family this is the symmetric radial factor only.
    fn pair_derivs(&self, g: &PairGeometry) -> PairDerivs {
        match &self.spec {
            TrialFunctionSpec::NodePolynomial { r0, alpha1, alpha2 } => {
                let base = |r1: f64, r2: f64| {
                    let e = (-alpha1 * r1 - alpha2 * r2).exp();
                    let p = r0 - r1;
                    PairDerivs {
                        f: p * e,
                        f1: -e * (1.0 + alpha1 * p),
                        f2: -alpha2 * p * e,
                        f11: alpha1 * e * (2.0 + alpha1 * p),
                        f22: alpha2 * alpha2 * p * e,
                        ..PairDerivs::default()
                    }
                };
                base(g.r1, g.r2).combine(base(g.r2, g.r1).exchanged(), -1.0)
            }
            TrialFunctionSpec::PzProduct { alpha1, alpha2 } => {
                let base = |r1: f64, r2: f64| {
                    let e = (-alpha1 * r1 - alpha2 * r2).exp();
                    PairDerivs {
                        f: e,
                        f1: -alpha1 * e,
                        f2: -alpha2 * e,
                        f11: alpha1 * alpha1 * e,
                        f22: alpha2 * alpha2 * e,
                        ..PairDerivs::default()
                    }
                };
                base(g.r1, g.r2).combine(base(g.r2, g.r1).exchanged(), 1.0)
            }
            TrialFunctionSpec::GoldmanCi { terms, .. } => {
                // Ties r1 == r2 take the branch r< = r1.
                let (lesser, greater, swapped) = if g.r1 <= g.r2 {
                    (g.r1, g.r2, false)
                } else {
                    (g.r2, g.r1, true)
                };
                let mut d = PairDerivs::default();
                for term in terms {
                    let (a, a1, a2) = radial_factor(lesser, term.s, term.sigma);
                    let (b, b1, b2) = radial_factor(greater, term.t, term.tau);
                    // Both exchange images coincide for the symmetric projection.
                    let c = 2.0 * term.coefficient;
                    d.f += c * a * b;
                    d.f1 += c * a1 * b;
                    d.f2 += c * a * b1;
                    d.f11 += c * a2 * b;
                    d.f22 += c * a * b2;
                }
                if swapped {
                    d.exchanged()
                } else {
                    d
                }
            }
            TrialFunctionSpec::PadeExp {
                symmetry,
                numerator,
                denominator,
                alpha,
                beta,
            } => {
                let base = |r1: f64, r2: f64| pade_base(numerator, denominator, *alpha, *beta, r1, r2, g.r12);
                base(g.r1, g.r2).combine(base(g.r2, g.r1).exchanged(), symmetry.sign())
            }
            TrialFunctionSpec::Slater { .. } => unreachable!("slater is not a pair family"),
        }
    }

    /// `grad(phi) / phi`.
    pub fn drift(&self, w: &Walker) -> Result<Vec<f64>> {
        let eval = self.evaluate(w)?;
        let mut out = vec![0.0; self.dim()];
        drift_from_eval(&eval, &mut out)?;
        Ok(out)
    }

    /// True iff the sign at `after` differs from the sign at `before`, or
    /// the function vanishes at `after`.
    pub fn crossed_node(&self, before: &Walker, after: &Walker) -> Result<bool> {
        let a = self.value(before)?;
        let b = self.value(after)?;
        Ok(b == 0.0 || (a > 0.0) != (b > 0.0))
    }

    /// `-laplacian/(2 phi) + V`.
    pub fn local_energy(&self, w: &Walker, atom: &AtomSpec) -> Result<f64> {
        let v = coulomb_potential(w, atom)?;
        let eval = self.evaluate(w)?;
        if eval.value == 0.0 {
            return Err(Error::Node);
        }
        Ok(-0.5 * eval.laplacian / eval.value + v)
    }
}

#[inline]
pub(crate) fn drift_from_eval(eval: &TrialEval, out: &mut [f64]) -> Result<()> {
    if eval.value == 0.0 {
        return Err(Error::Node);
    }
    for (d, g) in out.iter_mut().zip(&eval.gradient) {
        *d = g / eval.value;
    }
    Ok(())
}

/// `x^n` with first and second derivatives.
#[inline]
fn power(x: f64, n: u32) -> (f64, f64, f64) {
    match n {
        0 => (1.0, 0.0, 0.0),
        1 => (x, 1.0, 0.0),
        _ => {
            let nf = f64::from(n);
            let p = x.powi(n as i32 - 2);
            (p * x * x, nf * p * x, nf * (nf - 1.0) * p)
        }
    }
}

fn polynomial(terms: &[PadeTerm], r1: f64, r2: f64, r12: f64) -> PairDerivs {
    let mut d = PairDerivs::default();
    for t in terms {
        let (p1, p1d, p1dd) = power(r1, t.r1_power);
        let (p2, p2d, p2dd) = power(r2, t.r2_power);
        let (p3, p3d, p3dd) = power(r12, t.r12_power);
        let c = t.coefficient;
        d.f += c * p1 * p2 * p3;
        d.f1 += c * p1d * p2 * p3;
        d.f2 += c * p1 * p2d * p3;
        d.f3 += c * p1 * p2 * p3d;
        d.f11 += c * p1dd * p2 * p3;
        d.f22 += c * p1 * p2dd * p3;
        d.f33 += c * p1 * p2 * p3dd;
        d.f13 += c * p1d * p2 * p3d;
        d.f23 += c * p1 * p2d * p3d;
    }
    d
}

fn pade_base(
    numerator: &[PadeTerm],
    denominator: &[PadeTerm],
    alpha: f64,
    beta: f64,
    r1: f64,
    r2: f64,
    r12: f64,
) -> PairDerivs {
    let n = polynomial(numerator, r1, r2, r12);
    let d = polynomial(denominator, r1, r2, r12);
    // R = N/D and its derivatives from R D = N.
    let r = n.f / d.f;
    let r1d = (n.f1 - r * d.f1) / d.f;
    let r2d = (n.f2 - r * d.f2) / d.f;
    let r3d = (n.f3 - r * d.f3) / d.f;
    let r11 = (n.f11 - 2.0 * r1d * d.f1 - r * d.f11) / d.f;
    let r22 = (n.f22 - 2.0 * r2d * d.f2 - r * d.f22) / d.f;
    let r33 = (n.f33 - 2.0 * r3d * d.f3 - r * d.f33) / d.f;
    let r13 = (n.f13 - r1d * d.f3 - r3d * d.f1 - r * d.f13) / d.f;
    let r23 = (n.f23 - r2d * d.f3 - r3d * d.f2 - r * d.f23) / d.f;

    let q1 = r1d - alpha;
    let q2 = r2d - beta;
    let q3 = r3d;
    let e = (r - alpha * r1 - beta * r2).exp();
    PairDerivs {
        f: e,
        f1: q1 * e,
        f2: q2 * e,
        f3: q3 * e,
        f11: (r11 + q1 * q1) * e,
        f22: (r22 + q2 * q2) * e,
        f33: (r33 + q3 * q3) * e,
        f13: (r13 + q1 * q3) * e,
        f23: (r23 + q2 * q3) * e,
    }
}
