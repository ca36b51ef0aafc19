//! Two-electron functions of `(r1, r2, r12)` and their Cartesian derivatives.

use crate::system::norm;

/// Value and partial derivatives of `f(r1, r2, r12)`.
///
/// Index 1 is `r1`, 2 is `r2`, 3 is `r12`. The mixed `r1`/`r2` partial never
/// enters the Laplacian and is not carried.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct PairDerivs {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f11: f64,
    pub f22: f64,
    pub f33: f64,
    pub f13: f64,
    pub f23: f64,
}

impl PairDerivs {
    /// Derivatives of `h(r1, r2, r12) = f(r2, r1, r12)`, given `self`
    /// evaluated at `(r2, r1, r12)`.
    pub fn exchanged(self) -> Self {
        Self {
            f: self.f,
            f1: self.f2,
            f2: self.f1,
            f3: self.f3,
            f11: self.f22,
            f22: self.f11,
            f33: self.f33,
            f13: self.f23,
            f23: self.f13,
        }
    }

    pub fn combine(self, other: Self, sign: f64) -> Self {
        Self {
            f: self.f + sign * other.f,
            f1: self.f1 + sign * other.f1,
            f2: self.f2 + sign * other.f2,
            f3: self.f3 + sign * other.f3,
            f11: self.f11 + sign * other.f11,
            f22: self.f22 + sign * other.f22,
            f33: self.f33 + sign * other.f33,
            f13: self.f13 + sign * other.f13,
            f23: self.f23 + sign * other.f23,
        }
    }

    fn depends_on_r12(&self) -> bool {
        self.f3 != 0.0 || self.f33 != 0.0 || self.f13 != 0.0 || self.f23 != 0.0
    }
}

/// Geometry of an electron pair about the nucleus.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairGeometry {
    pub r1: f64,
    pub r2: f64,
    pub r12: f64,
    pub u1: [f64; 3],
    pub u2: [f64; 3],
    pub u12: [f64; 3],
}

impl PairGeometry {
    pub fn new(x1: [f64; 3], x2: [f64; 3]) -> Self {
        let d = [x1[0] - x2[0], x1[1] - x2[1], x1[2] - x2[2]];
        let r1 = norm(x1);
        let r2 = norm(x2);
        let r12 = norm(d);
        Self {
            r1,
            r2,
            r12,
            u1: unit(x1, r1),
            u2: unit(x2, r2),
            u12: unit(d, r12),
        }
    }
}

fn unit(v: [f64; 3], r: f64) -> [f64; 3] {
    if r == 0.0 {
        [0.0; 3]
    } else {
        [v[0] / r, v[1] / r, v[2] / r]
    }
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cartesian gradient (6 components) and Laplacian of `f`.
pub(crate) fn to_cartesian(d: &PairDerivs, g: &PairGeometry, grad: &mut [f64]) -> f64 {
    let uses_r12 = d.depends_on_r12();
    for k in 0..3 {
        let mut g1 = d.f1 * g.u1[k];
        let mut g2 = d.f2 * g.u2[k];
        if uses_r12 {
            g1 += d.f3 * g.u12[k];
            g2 -= d.f3 * g.u12[k];
        }
        grad[k] = g1;
        grad[3 + k] = g2;
    }
    let mut lap = d.f11 + 2.0 * d.f1 / g.r1 + d.f22 + 2.0 * d.f2 / g.r2;
    if uses_r12 {
        lap += 2.0 * (d.f33 + 2.0 * d.f3 / g.r12) + 2.0 * d.f13 * dot(g.u1, g.u12)
            - 2.0 * d.f23 * dot(g.u2, g.u12);
    }
    lap
}

/// `r^k e^{-a r}` with its first two radial derivatives.
#[inline]
pub(crate) fn radial_factor(r: f64, k: u32, a: f64) -> (f64, f64, f64) {
    let e = (-a * r).exp();
    match k {
        0 => (e, -a * e, a * a * e),
        1 => (r * e, e * (1.0 - a * r), e * (a * a * r - 2.0 * a)),
        _ => {
            let kf = f64::from(k);
            let p = r.powi(k as i32 - 2);
            let q = kf - a * r;
            (p * r * r * e, p * r * e * q, p * e * (q * q - kf))
        }
    }
}
