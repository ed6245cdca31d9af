//! Equiaffine quantities of a patch in asymptotic coordinates.

use nalgebra::{Matrix2, Matrix3x2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::OmegaJet;
use crate::error::{Error, Result};
use crate::isotropic::IsoPoint3;
use crate::weierstrass::Family;

use super::fd::{lattice_derivatives, FdScheme};
use super::jet::SurfaceJet;

/// Default step for the affine shape operator.
pub const AFFINE_STEP: f64 = 1e-2;

/// `det(a, b, c)` with the vectors as columns, in `(l, x, y)` coordinates.
pub fn det3(a: &IsoPoint3, b: &IsoPoint3, c: &IsoPoint3) -> f64 {
    a.l * (b.x * c.y - b.y * c.x) - b.l * (a.x * c.y - a.y * c.x) + c.l * (a.x * b.y - a.y * b.x)
}

/// `(L̃, M̃, Ñ) = (det(X_u, X_v, X_uu), det(X_u, X_v, X_uv), det(X_u, X_v, X_vv))`.
pub fn affine_determinants(j: &SurfaceJet) -> [f64; 3] {
    [
        det3(&j.xu, &j.xv, &j.xuu),
        det3(&j.xu, &j.xv, &j.xuv),
        det3(&j.xu, &j.xv, &j.xvv),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineData {
    pub l: f64,
    pub m: f64,
    pub n: f64,
    /// `e^ω = √M̃`.
    pub exp_omega: f64,
    /// Affine normal `ñ = e^{-ω} X_uv`.
    pub normal: IsoPoint3,
}

pub fn affine_forms(j: &SurfaceJet) -> Result<AffineData> {
    let [l, m, n] = affine_determinants(j);
    if !(m > 0.0) {
        return Err(Error::Degenerate(format!("det(X_u, X_v, X_uv) = {m:e} is not positive")));
    }
    let e = m.sqrt();
    Ok(AffineData {
        l,
        m,
        n,
        exp_omega: e,
        normal: (1.0 / e) * j.xuv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineShape {
    /// `S̃` with `ñ_u = -(S₁₁ X_u + S₂₁ X_v)`, `ñ_v = -(S₁₂ X_u + S₂₂ X_v)`.
    pub s: [[f64; 2]; 2],
    /// `H̃ = ½ tr S̃`.
    pub mean: f64,
    /// `K̃ = det S̃`.
    pub gauss: f64,
    /// Largest entry of `[X_u X_v] S̃ + [ñ_u ñ_v]`.
    pub tangential_residual: f64,
    /// `-e^{-ω} (ω_uv + ω_u ω_v)` with `ω = ½ log M̃` differenced numerically.
    pub mean_direct: f64,
}

/// `X_u`, `X_v`, `X_uv` straight from the integrand.
fn frame(f: &Family, u: f64, v: f64) -> Result<(IsoPoint3, IsoPoint3, IsoPoint3)> {
    let z = Complex64::new(u, v);
    let w = f.integrand(z);
    let wp = f.integrand_prime(z);
    let xu = IsoPoint3::new(w[0].re, w[1].re, w[2].re);
    let xv = IsoPoint3::new(-w[0].im, -w[1].im, -w[2].im);
    let xuv = IsoPoint3::new(-wp[0].im, -wp[1].im, -wp[2].im);
    Ok((xu, xv, xuv))
}

fn m_tilde(f: &Family, u: f64, v: f64) -> Result<f64> {
    let (xu, xv, xuv) = frame(f, u, v)?;
    let m = det3(&xu, &xv, &xuv);
    if !(m > 0.0) {
        return Err(Error::Degenerate(format!("det(X_u, X_v, X_uv) = {m:e} at ({u}, {v})")));
    }
    Ok(m)
}

fn affine_normal(f: &Family, u: f64, v: f64) -> Result<IsoPoint3> {
    let (_, _, xuv) = frame(f, u, v)?;
    Ok((1.0 / m_tilde(f, u, v)?.sqrt()) * xuv)
}

fn col(p: IsoPoint3) -> Vector3<f64> {
    Vector3::new(p.l, p.x, p.y)
}

/// Affine shape operator by central differences of `ñ` and a least-squares
/// solve of `[X_u X_v] S̃ = -[ñ_u ñ_v]`, with the default [`FdScheme`].
pub fn affine_shape(f: &Family, z: Complex64, step: f64) -> Result<AffineShape> {
    affine_shape_with(f, z, step, FdScheme::default())
}

pub fn affine_shape_with(f: &Family, z: Complex64, step: f64, scheme: FdScheme) -> Result<AffineShape> {
    let (u, v, k) = (z.re, z.im, step);
    let at = |i: i32, j: i32| (u + i as f64 * k, v + j as f64 * k);
    let (xu, xv, _) = frame(f, u, v)?;
    let (_, nu, nv, _, _, _) = lattice_derivatives(
        |i, j| {
            let (a, b) = at(i, j);
            affine_normal(f, a, b)
        },
        k,
        scheme,
    )?;

    let a = Matrix3x2::from_columns(&[col(xu), col(xv)]);
    let b = -Matrix3x2::from_columns(&[col(nu), col(nv)]);
    let svd = a.svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-10 * smax) {
        return Err(Error::Degenerate("tangent frame is ill-conditioned".into()));
    }
    let s: Matrix2<f64> = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Degenerate(format!("least-squares solve failed: {e}")))?;
    let tangential_residual = (a * s - b).amax();

    // direct route through ω = ½ log M̃
    let (w0, wu, wv, _, wuv, _) = lattice_derivatives(
        |i, j| {
            let (a, b) = at(i, j);
            Ok(0.5 * m_tilde(f, a, b)?.ln())
        },
        k,
        scheme,
    )?;

    Ok(AffineShape {
        s: [[s[(0, 0)], s[(0, 1)]], [s[(1, 0)], s[(1, 1)]]],
        mean: 0.5 * s.trace(),
        gauss: s.determinant(),
        tangential_residual,
        mean_direct: -(-w0).exp() * (wuv + wu * wv),
    })
}

/// `S̃ = -e^{-ω} [[ω_uv + ω_u ω_v, ω_vv - ω_u²], [ω_uu - ω_v², ω_uv + ω_u ω_v]]`.
pub fn affine_shape_closed_form(o: &OmegaJet, exp_omega: f64) -> [[f64; 2]; 2] {
    let k = -1.0 / exp_omega;
    let d = o.w_uv + o.w_u * o.w_v;
    [
        [k * d, k * (o.w_vv - o.w_u * o.w_u)],
        [k * (o.w_uu - o.w_v * o.w_v), k * d],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ConformalFactorModel, InitialCondition};
    use crate::diffgeo::jet::analytic_jet;
    use crate::quadrature::QuadratureConfig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn helicoid_is_affine_minimal() {
        let hel = Family::catenoid(1.0).unwrap().conjugate();
        let z = c(0.3, 1.1);
        let j = analytic_jet(&hel, z, &QuadratureConfig::default()).unwrap();
        let a = affine_forms(&j).unwrap();
        assert!(a.l.abs() < 1e-8 && a.n.abs() < 1e-8);
        assert!((a.exp_omega - hel.metric_factor(z)).abs() < 1e-8);
        let s = affine_shape(&hel, z, AFFINE_STEP).unwrap();
        assert!(s.mean.abs() < 1e-4, "{s:?}");
        assert!(s.mean_direct.abs() < 1e-4);
        assert!(s.tangential_residual < 1e-5);
    }

    #[test]
    fn ruled_quadric_has_constant_affine_normal() {
        let te = Family::trivial_enneper(0.0).unwrap().conjugate();
        let cfg = QuadratureConfig::default();
        let n0 = affine_forms(&analytic_jet(&te, c(0.0, 0.0), &cfg).unwrap()).unwrap().normal;
        for z in [c(0.5, -0.2), c(-0.9, 0.7)] {
            let n = affine_forms(&analytic_jet(&te, z, &cfg).unwrap()).unwrap().normal;
            assert!(n.max_abs_diff(&n0) < 1e-15);
        }
        assert_eq!(n0, IsoPoint3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn catenoid_in_curvature_line_coordinates_is_not_asymptotic() {
        let cat = Family::catenoid(1.0).unwrap();
        let j = analytic_jet(&cat, c(0.2, 0.3), &QuadratureConfig::default()).unwrap();
        let [l, m, _] = affine_determinants(&j);
        assert!(l.abs() > 0.1);
        assert!(m.abs() < 1e-12);
        assert!(affine_forms(&j).is_err());
    }

    #[test]
    fn shape_operator_matches_closed_form() {
        let th = Family::bonnet_type(1.0, 1.0).unwrap().conjugate();
        let model = ConformalFactorModel::new(1.0, 1.0, InitialCondition::ZeroAtOrigin).unwrap();
        let (u, v) = (0.8, 1.3);
        let s = affine_shape(&th, c(u, v), AFFINE_STEP).unwrap();
        let cf = affine_shape_closed_form(&model.omega_jet(u, v).unwrap(), model.exp_omega(u, v).unwrap());
        for i in 0..2 {
            for k in 0..2 {
                assert!((s.s[i][k] - cf[i][k]).abs() < 1e-4, "{:?} vs {:?}", s.s, cf);
            }
        }
    }
}
