//! Configuration space and Coulomb potentials.
//!
//! The nucleus is fixed at the origin with infinite mass. Energies are in
//! Hartree, lengths in Bohr.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trialfn::{TrialEval, TrialFunction};

/// A point in configuration space.
///
/// For atoms the coordinates are `N` consecutive `(x, y, z)` triples; the
/// lattice-walk machinery also accepts arbitrary dimensions for toy models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Walker {
    coords: Vec<f64>,
}

impl Walker {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Parameter("walker needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter("walker coordinates must be finite".into()));
        }
        Ok(Self { coords })
    }

    pub fn from_electrons(electrons: &[[f64; 3]]) -> Result<Self> {
        Self::new(electrons.iter().flatten().copied().collect())
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Number of complete electron triples.
    #[inline]
    pub fn n_electrons(&self) -> usize {
        self.coords.len() / 3
    }

    #[inline]
    pub fn electron(&self, i: usize) -> [f64; 3] {
        let c = &self.coords[3 * i..3 * i + 3];
        [c[0], c[1], c[2]]
    }

    /// Distance of electron `i` from the nucleus.
    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        norm(self.electron(i))
    }

    /// Distance between electrons `i` and `j`.
    #[inline]
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        let a = self.electron(i);
        let b = self.electron(j);
        norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    /// Copy with electrons `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut coords = self.coords.clone();
        for k in 0..3 {
            coords.swap(3 * i + k, 3 * j + k);
        }
        Self { coords }
    }
}

#[inline]
pub(crate) fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Nuclear charge and electron count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub nuclear_charge: f64,
    pub n_electrons: usize,
    /// Whether the `1/r_ij` terms are included. Disabling them gives the
    /// separable independent-electron model.
    pub electron_repulsion: bool,
}

impl AtomSpec {
    pub fn new(nuclear_charge: f64, n_electrons: usize) -> Result<Self> {
        if !(nuclear_charge > 0.0 && nuclear_charge.is_finite()) {
            return Err(Error::Parameter(format!(
                "nuclear charge must be positive, got {nuclear_charge}"
            )));
        }
        if n_electrons == 0 {
            return Err(Error::Parameter("at least one electron is required".into()));
        }
        Ok(Self {
            nuclear_charge,
            n_electrons,
            electron_repulsion: true,
        })
    }

    pub fn hydrogen() -> Self {
        Self {
            nuclear_charge: 1.0,
            n_electrons: 1,
            electron_repulsion: true,
        }
    }

    pub fn helium() -> Self {
        Self {
            nuclear_charge: 2.0,
            n_electrons: 2,
            electron_repulsion: true,
        }
    }

    pub fn without_repulsion(mut self) -> Self {
        self.electron_repulsion = false;
        self
    }

    pub fn dim(&self) -> usize {
        3 * self.n_electrons
    }

    pub(crate) fn check_walker(&self, w: &Walker) -> Result<()> {
        if w.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: w.dim(),
            });
        }
        Ok(())
    }
}

/// `sum_i -Z/r_i + sum_{i<j} 1/r_ij` (the pair sum only when repulsion is enabled).
pub fn coulomb_potential(w: &Walker, atom: &AtomSpec) -> Result<f64> {
    atom.check_walker(w)?;
    let n = atom.n_electrons;
    let mut v = 0.0;
    for i in 0..n {
        let r = w.radius(i);
        if r == 0.0 {
            return Err(Error::Singularity(format!("electron {i} at the nucleus")));
        }
        v -= atom.nuclear_charge / r;
    }
    if atom.electron_repulsion {
        for i in 0..n {
            for j in i + 1..n {
                let r = w.separation(i, j);
                if r == 0.0 {
                    return Err(Error::Singularity(format!("electrons {i} and {j} coincide")));
                }
                v += 1.0 / r;
            }
        }
    }
    Ok(v)
}

/// `V - lambda0 - laplacian/(2 value)` from an already evaluated trial function.
#[inline]
pub(crate) fn perturbation_from_eval(coulomb: f64, eval: &TrialEval, lambda0: f64) -> Result<f64> {
    if eval.value == 0.0 {
        return Err(Error::Node);
    }
    Ok(coulomb - lambda0 - 0.5 * eval.laplacian / eval.value)
}

/// The residual potential `V_P = V - lambda0 - (laplacian phi)/(2 phi)`.
///
/// Identically zero when `(phi, lambda0)` is an exact eigenpair of
/// `-laplacian/2 + V`.
pub fn perturbation_potential(
    w: &Walker,
    trial: &TrialFunction,
    lambda0: f64,
    atom: &AtomSpec,
) -> Result<f64> {
    let v = coulomb_potential(w, atom)?;
    let eval = trial.evaluate(w)?;
    perturbation_from_eval(v, &eval, lambda0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trialfn::TrialFunctionSpec;

    fn he_pair(a: [f64; 3], b: [f64; 3]) -> Walker {
        Walker::from_electrons(&[a, b]).unwrap()
    }

    #[test]
    fn helium_opposite_sides() {
        let w = he_pair([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]);
        assert_eq!(coulomb_potential(&w, &AtomSpec::helium()).unwrap(), -3.5);
    }

    #[test]
    fn hydrogen_at_two_bohr() {
        let w = Walker::from_electrons(&[[0.0, 2.0, 0.0]]).unwrap();
        assert_eq!(coulomb_potential(&w, &AtomSpec::hydrogen()).unwrap(), -0.5);
    }

    #[test]
    fn coincident_electrons_are_singular() {
        let w = he_pair([0.3, 0.1, 0.2], [0.3, 0.1, 0.2]);
        assert!(matches!(
            coulomb_potential(&w, &AtomSpec::helium()),
            Err(Error::Singularity(_))
        ));
        // Without repulsion the pair term is never formed.
        assert!(coulomb_potential(&w, &AtomSpec::helium().without_repulsion()).is_ok());
        let w = he_pair([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
        assert!(matches!(
            coulomb_potential(&w, &AtomSpec::helium()),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let w = Walker::from_electrons(&[[1.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            coulomb_potential(&w, &AtomSpec::helium()),
            Err(Error::DimensionMismatch { expected: 6, got: 3 })
        ));
    }

    #[test]
    fn invalid_walkers_and_atoms() {
        assert!(Walker::new(vec![]).is_err());
        assert!(Walker::new(vec![f64::NAN]).is_err());
        assert!(AtomSpec::new(0.0, 2).is_err());
        assert!(AtomSpec::new(2.0, 0).is_err());
    }

    #[test]
    fn perturbation_of_scaled_hydrogen_exponent() {
        let phi = TrialFunction::new(TrialFunctionSpec::Slater {
            exponents: vec![0.8],
        })
        .unwrap();
        let w = Walker::from_electrons(&[[0.0, 0.0, 1.0]]).unwrap();
        let vp = perturbation_potential(&w, &phi, -0.48, &AtomSpec::hydrogen()).unwrap();
        assert!((vp - (-0.04)).abs() < 1e-14, "{vp}");
    }

    #[test]
    fn exact_hydrogen_has_null_perturbation() {
        let phi = TrialFunction::new(TrialFunctionSpec::Slater {
            exponents: vec![1.0],
        })
        .unwrap();
        for r in [0.01, 0.3, 1.0, 2.5, 7.0] {
            let w = Walker::from_electrons(&[[r * 0.6, -r * 0.8, 0.0]]).unwrap();
            let vp = perturbation_potential(&w, &phi, -0.5, &AtomSpec::hydrogen()).unwrap();
            assert!(vp.abs() < 1e-12, "r = {r}: {vp}");
        }
    }

    #[test]
    fn lambda_shift_is_exact_translation() {
        let phi = TrialFunction::new(TrialFunctionSpec::fn3()).unwrap();
        let w = he_pair([0.4, -0.2, 0.9], [-1.1, 0.5, 0.3]);
        let atom = AtomSpec::helium();
        let a = perturbation_potential(&w, &phi, -2.0, &atom).unwrap();
        let b = perturbation_potential(&w, &phi, -2.0 + 0.25, &atom).unwrap();
        assert_eq!(a - 0.25, b);
    }
}
