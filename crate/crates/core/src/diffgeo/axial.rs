//! Axial directions of the two families of planar curvature lines and the
//! lightlike carriers of the curvature-line planes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{Case, ConformalFactorModel, OmegaJet};
use crate::error::{Error, Result};
use crate::isotropic::{Vec4, P};
use crate::quadrature::CompositeRule;
use crate::weierstrass::Family;

use super::jet::{analytic_jet_with_rule, SurfaceJet};

/// `|ω_u|` or `|ω_v|` below this leaves the corresponding carrier undefined.
pub const CARRIER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// `w₁`, built from `f(u)`.
    First,
    /// `w₂`, built from `g(v)`.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxialVector {
    pub w: Vec4,
    /// `⟨w, w⟩`.
    pub norm: f64,
    /// Lightlike carrier of the curvature-line plane through the point.
    pub carrier: Option<Vec4>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxialResult {
    pub w1: AxialVector,
    pub w2: AxialVector,
    /// `⟨w₁, w₂⟩`.
    pub cross: f64,
}

/// `w₁ = ω_uu X_u - ω_uv X_v + ω_u p` or `w₂ = ω_uv X_u - ω_vv X_v + ω_v p`,
/// together with
/// `m₁ = -e^{-2ω} X_v + ω_v n - e^{-2ω}/(2ω_v) p` or
/// `m₂ = e^{-2ω} X_u + ω_u n - e^{-2ω}/(2ω_u) p`.
pub fn axial_from_jet(j: &SurfaceJet, o: &OmegaJet, exp_omega: f64, axis: Axis) -> AxialVector {
    let (xu, xv) = (j.xu.embed(), j.xv.embed());
    let e2 = exp_omega.powi(-2);
    let (w, carrier) = match axis {
        Axis::First => {
            let w = o.w_uu * xu - o.w_uv * xv + o.w_u * P;
            let m = (o.w_v.abs() > CARRIER_TOL).then(|| -e2 * xv + o.w_v * j.n - (e2 / (2.0 * o.w_v)) * P);
            (w, m)
        }
        Axis::Second => {
            let w = o.w_uv * xu - o.w_vv * xv + o.w_v * P;
            let m = (o.w_u.abs() > CARRIER_TOL).then(|| e2 * xu + o.w_u * j.n - (e2 / (2.0 * o.w_u)) * P);
            (w, m)
        }
    };
    AxialVector {
        w,
        norm: w.dot(&w),
        carrier,
    }
}

fn check_axis(model: &ConformalFactorModel, axis: Axis) -> Result<()> {
    match (model.case, axis) {
        (Case::Case2, Axis::First) => Err(Error::IdenticallyZero("f")),
        (Case::Case2 | Case::Case1a, Axis::Second) => Err(Error::IdenticallyZero("g")),
        _ => Ok(()),
    }
}

pub fn axial_direction(
    model: &ConformalFactorModel,
    f: &Family,
    z: Complex64,
    axis: Axis,
    rule: &CompositeRule,
    z0: Complex64,
) -> Result<AxialVector> {
    check_axis(model, axis)?;
    let j = analytic_jet_with_rule(f, z, rule, z0)?;
    let e = model.exp_omega(z.re, z.im)?;
    let o = model.omega_jet(z.re, z.im)?;
    Ok(axial_from_jet(&j, &o, e, axis))
}

pub fn axial_directions(
    model: &ConformalFactorModel,
    f: &Family,
    z: Complex64,
    rule: &CompositeRule,
    z0: Complex64,
) -> Result<AxialResult> {
    check_axis(model, Axis::First)?;
    check_axis(model, Axis::Second)?;
    let j = analytic_jet_with_rule(f, z, rule, z0)?;
    let e = model.exp_omega(z.re, z.im)?;
    let o = model.omega_jet(z.re, z.im)?;
    let w1 = axial_from_jet(&j, &o, e, Axis::First);
    let w2 = axial_from_jet(&j, &o, e, Axis::Second);
    Ok(AxialResult {
        w1,
        w2,
        cross: w1.w.dot(&w2.w),
    })
}

/// Residuals of the axial-direction identities over a set of points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CarrierResiduals {
    /// `max |⟨m₁, w₁⟩|`.
    pub m1_w1: f64,
    /// `max |⟨m₂, w₂⟩|`.
    pub m2_w2: f64,
    /// Largest component deviation of `w₁` from its value at the first point.
    pub w1_constancy: f64,
    pub w2_constancy: f64,
    /// Points where a carrier was undefined.
    pub carriers_skipped: usize,
}

pub fn plane_carrier_checks(results: &[AxialResult]) -> CarrierResiduals {
    let mut out = CarrierResiduals::default();
    let Some(first) = results.first() else {
        return out;
    };
    for a in results {
        match a.w1.carrier {
            Some(m) => out.m1_w1 = out.m1_w1.max(m.dot(&a.w1.w).abs()),
            None => out.carriers_skipped += 1,
        }
        match a.w2.carrier {
            Some(m) => out.m2_w2 = out.m2_w2.max(m.dot(&a.w2.w).abs()),
            None => out.carriers_skipped += 1,
        }
        out.w1_constancy = out.w1_constancy.max(a.w1.w.max_abs_diff(&first.w1.w));
        out.w2_constancy = out.w2_constancy.max(a.w2.w.max_abs_diff(&first.w2.w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::InitialCondition;
    use crate::isotropic::IsoPoint3;
    use crate::quadrature::QuadratureConfig;

    fn setup() -> (ConformalFactorModel, Family, CompositeRule, Complex64) {
        let m = ConformalFactorModel::new(1.0, 1.0, InitialCondition::ZeroAtOrigin).unwrap();
        let f = Family::bonnet_type(1.0, 1.0).unwrap();
        let rule = CompositeRule::new(&QuadratureConfig::default()).unwrap();
        (m, f, rule, Complex64::new(1.0, 1.0))
    }

    #[test]
    fn bonnet_axial_norms() {
        let (m, f, rule, z0) = setup();
        let a = axial_directions(&m, &f, Complex64::new(1.0, 0.7), &rule, z0).unwrap();
        assert!((a.w1.norm - 1.0).abs() < 1e-8);
        assert!((a.w2.norm - 1.0).abs() < 1e-8);
        assert!(a.cross.abs() < 1e-8);
        assert!(a.w1.carrier.unwrap().dot(&a.w1.w).abs() < 1e-8);
        // the carriers are lightlike
        let m1 = a.w1.carrier.unwrap();
        assert!(m1.dot(&m1).abs() < 1e-8);
    }

    #[test]
    fn catenoid_second_axis_is_undefined() {
        let m = ConformalFactorModel::new(1.0, 0.0, InitialCondition::ZeroAtOrigin).unwrap();
        let f = Family::catenoid(1.0).unwrap();
        let rule = CompositeRule::new(&QuadratureConfig::default()).unwrap();
        let z0 = Complex64::new(0.0, 0.0);
        let err = axial_direction(&m, &f, Complex64::new(0.2, 0.3), Axis::Second, &rule, z0).unwrap_err();
        assert_eq!(err, Error::IdenticallyZero("g"));
        assert!(err.to_string().contains("g is identically zero"));
        let w1 = axial_direction(&m, &f, Complex64::new(0.2, 0.3), Axis::First, &rule, z0).unwrap();
        assert!(w1.norm.abs() < 1e-12);
        assert!(w1.carrier.is_none());
    }

    #[test]
    fn perturbation_breaks_constancy() {
        let (m, f, rule, z0) = setup();
        let mut results = Vec::new();
        let mut perturbed = Vec::new();
        for (u, v) in [(0.5, 0.5), (1.0, 1.5), (1.5, 2.5), (1.8, 4.0)] {
            let z = Complex64::new(u, v);
            let mut j = analytic_jet_with_rule(&f, z, &rule, z0).unwrap();
            let e = m.exp_omega(u, v).unwrap();
            let o = m.omega_jet(u, v).unwrap();
            let w = |j: &SurfaceJet| AxialResult {
                w1: axial_from_jet(j, &o, e, Axis::First),
                w2: axial_from_jet(j, &o, e, Axis::Second),
                cross: 0.0,
            };
            results.push(w(&j));
            j.xu += IsoPoint3::new(0.03 * u * u, 0.0, 0.0);
            j.xuu += IsoPoint3::new(0.06 * u, 0.0, 0.0);
            perturbed.push(w(&j));
        }
        let clean = plane_carrier_checks(&results);
        assert!(clean.w1_constancy < 1e-10 && clean.w2_constancy < 1e-10);
        assert!(plane_carrier_checks(&perturbed).w1_constancy > 1e-3);
    }
}
