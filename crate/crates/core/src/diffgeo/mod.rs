//! Numerical differential geometry: jets, fundamental forms, planarity of
//! coordinate lines, axial directions, affine quantities and the aggregated
//! invariant suite.

pub mod affine;
pub mod axial;
pub mod fd;
pub mod jet;
pub mod lines;
pub mod suite;

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weierstrass::{Family, FamilyKind};

pub use affine::{affine_determinants, affine_forms, affine_shape, affine_shape_with, affine_shape_closed_form, AffineData, AffineShape};
pub use axial::{axial_direction, axial_directions, axial_from_jet, plane_carrier_checks, AxialResult, AxialVector, Axis};
pub use fd::FdScheme;
pub use jet::{analytic_jet, fd_jet, fd_jet_with, fundamental_forms, hopf_from_jet, mean_curvature, FundamentalForms, SurfaceJet};
pub use lines::{extract_coordinate_polyline, plane_fit_residual, LineDirection, PlaneFit};
pub use suite::{run_invariant_suite, CheckRecord, SuiteConfig, Tolerances, VerificationReport};

/// A rectangular `nu × nv` parameter grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
}

impl GridSpec {
    pub fn new(u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<Self> {
        let g = Self {
            u_min: u.0,
            u_max: u.1,
            v_min: v.0,
            v_max: v.1,
            nu,
            nv,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::Domain(format!("grid needs at least 2x2 samples, got {}x{}", self.nu, self.nv)));
        }
        let all = [self.u_min, self.u_max, self.v_min, self.v_max];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("grid ranges must be finite".into()));
        }
        if !(self.u_min < self.u_max && self.v_min < self.v_max) {
            return Err(Error::Domain("grid ranges must be increasing".into()));
        }
        Ok(())
    }

    /// A pole-free rectangle on which the family is regular.
    pub fn default_for(kind: &FamilyKind, n: usize) -> Self {
        let (u, v) = match *kind {
            FamilyKind::Plane | FamilyKind::TrivialEnneper { .. } => ((-1.0, 1.0), (-1.0, 1.0)),
            FamilyKind::Catenoid { .. } => ((-1.0, 1.0), (0.0, 2.0 * PI)),
            FamilyKind::EnneperType { .. } => ((0.5, 2.0), (-1.0, 1.0)),
            FamilyKind::BonnetType { alpha, .. } => {
                let k = 1.0 / alpha;
                ((0.2 * k, 2.0 * k), (0.1 * k, (2.0 * PI - 0.1) * k))
            }
            FamilyKind::DeformTanh { alpha } => {
                let m = alpha.recip().min(1.0);
                ((-m, m), (-m, m))
            }
            FamilyKind::DeformPolar { r, theta } => {
                // stay left of the first pole on the real axis
                let (s, c) = theta.sin_cos();
                let u0 = if s > 0.0 && c > 0.0 { ((1.0 + c) / s).ln() / (r * c) } else { f64::INFINITY };
                let hi = if u0.is_finite() { (u0 - 0.7).min(0.5) } else { 0.5 };
                ((-1.0, hi), (-1.0, 1.0))
            }
        };
        Self {
            u_min: u.0,
            u_max: u.1,
            v_min: v.0,
            v_max: v.1,
            nu: n,
            nv: n,
        }
    }

    /// Like [`GridSpec::default_for`], but asymptotic-coordinate patches of
    /// the Bonnet-type family keep further away from the metric zeros at
    /// `z = 2πik/α`, where the affine normal varies too fast for differencing.
    pub fn default_for_family(f: &Family, n: usize) -> Self {
        let mut g = Self::default_for(&f.kind, n);
        if let (FamilyKind::BonnetType { alpha, .. }, true) = (f.kind, f.conjugated) {
            let period = 2.0 * PI / alpha;
            g.u_min = 0.5 / alpha;
            g.u_max = 2.0 / alpha;
            g.v_min = 0.5 / alpha;
            g.v_max = period - 0.5 / alpha;
        }
        g
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u_at(&self, i: usize) -> f64 {
        if i + 1 == self.nu {
            self.u_max
        } else {
            self.u_min + (self.u_max - self.u_min) * i as f64 / (self.nu - 1) as f64
        }
    }

    pub fn v_at(&self, j: usize) -> f64 {
        if j + 1 == self.nv {
            self.v_max
        } else {
            self.v_min + (self.v_max - self.v_min) * j as f64 / (self.nv - 1) as f64
        }
    }

    /// Points in row-major order: index `i * nv + j` is `(u_i, v_j)`.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (i, j)))
            .map(|(i, j)| Complex64::new(self.u_at(i), self.v_at(j)))
            .collect()
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.u_min + self.u_max), 0.5 * (self.v_min + self.v_max))
    }
}

/// The default grid for `DeformPolar(1, π/4)`.
pub fn polar_reference_grid(n: usize) -> GridSpec {
    GridSpec::default_for(&FamilyKind::DeformPolar { r: 1.0, theta: FRAC_PI_4 }, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = GridSpec::new((0.0, 1.0), (-2.0, 2.0), 3, 5).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 15);
        assert_eq!(p[0], Complex64::new(0.0, -2.0));
        assert_eq!(p[1], Complex64::new(0.0, -1.0));
        assert_eq!(p[14], Complex64::new(1.0, 2.0));
        assert!(GridSpec::new((0.0, 1.0), (0.0, 1.0), 1, 4).is_err());
        assert!(GridSpec::new((1.0, 0.0), (0.0, 1.0), 4, 4).is_err());
    }

    #[test]
    fn polar_grid_stays_left_of_pole() {
        let g = polar_reference_grid(41);
        assert_eq!((g.u_min, g.u_max), (-1.0, 0.5));
    }
}
