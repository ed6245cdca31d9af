//! Second-order jets of a surface patch and the quantities read off them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::OmegaJet;
use crate::error::{Error, Result};
use crate::isotropic::{iso_inner, IsoPoint3, Vec4, P};
use crate::quadrature::{CompositeRule, QuadratureConfig};
use crate::weierstrass::{gauss_map_from_h, integrate_with_rule, Family};

use super::fd::{lattice_derivatives, FdScheme};

/// `|η|` below this marks a branch point of the metric.
pub const METRIC_TOL: f64 = 1e-12;

/// Default step for finite-difference jets.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJet {
    pub x: IsoPoint3,
    pub xu: IsoPoint3,
    pub xv: IsoPoint3,
    pub xuu: IsoPoint3,
    pub xuv: IsoPoint3,
    pub xvv: IsoPoint3,
    /// Lightlike Gauss map.
    pub n: Vec4,
    /// `(n_u, n_v)` when known analytically.
    pub dn: Option<[Vec4; 2]>,
}

fn re3(w: [Complex64; 3]) -> IsoPoint3 {
    IsoPoint3::new(w[0].re, w[1].re, w[2].re)
}

fn im3(w: [Complex64; 3]) -> IsoPoint3 {
    IsoPoint3::new(w[0].im, w[1].im, w[2].im)
}

/// Jet from the Weierstrass integrand. `X` itself comes from quadrature with `rule`
/// starting at `z0`.
pub fn analytic_jet_with_rule(f: &Family, z: Complex64, rule: &CompositeRule, z0: Complex64) -> Result<SurfaceJet> {
    let eta = f.eta(z);
    if eta.norm() < METRIC_TOL {
        return Err(Error::DegenerateMetric {
            u: z.re,
            v: z.im,
            factor: eta.norm(),
        });
    }
    let h = f.h(z)?;
    let hp = f.h_prime(z)?;
    let w = f.integrand(z);
    let wp = f.integrand_prime(z);
    let x = integrate_with_rule(f, rule, z0, z)?;

    // n = -½(1 + |h|², 2 Re h, -2 Im h, |h|² - 1) and h_v = i h'
    let dn = |d: Complex64| {
        let dm = 2.0 * (h.conj() * d).re;
        Vec4::new(-0.5 * dm, -d.re, d.im, -0.5 * dm)
    };
    let jet = SurfaceJet {
        x,
        xu: re3(w),
        xv: -im3(w),
        xuu: re3(wp),
        xuv: -im3(wp),
        xvv: -re3(wp),
        n: gauss_map_from_h(h),
        dn: Some([dn(hp), dn(Complex64::i() * hp)]),
    };
    if !jet.is_finite() {
        return Err(Error::NonFinite(format!("jet at {z}")));
    }
    Ok(jet)
}

pub fn analytic_jet(f: &Family, z: Complex64, cfg: &QuadratureConfig) -> Result<SurfaceJet> {
    let rule = CompositeRule::new(cfg)?;
    analytic_jet_with_rule(f, z, &rule, cfg.base_point)
}

/// Finite-difference jet of `sampler` at `(u, v)` with the default
/// [`FdScheme`].
///
/// The Gauss map is obtained from `⟨X_u, n⟩ = ⟨X_v, n⟩ = 0`, `⟨n, p⟩ = 1`,
/// `⟨n, n⟩ = 0`: the first two are linear in the horizontal part of `n` once
/// `⟨n, p⟩ = 1` is used, and the last then fixes the remaining component.
pub fn fd_jet<S>(sampler: S, u: f64, v: f64, step: f64) -> Result<SurfaceJet>
where
    S: Fn(f64, f64) -> Result<IsoPoint3>,
{
    fd_jet_with(sampler, u, v, step, FdScheme::default())
}

pub fn fd_jet_with<S>(sampler: S, u: f64, v: f64, step: f64, scheme: FdScheme) -> Result<SurfaceJet>
where
    S: Fn(f64, f64) -> Result<IsoPoint3>,
{
    let (x, xu, xv, xuu, xuv, xvv) =
        lattice_derivatives(|i, j| sampler(u + i as f64 * step, v + j as f64 * step), step, scheme)?;
    let n = gauss_map_from_tangents(&xu, &xv)?;
    let jet = SurfaceJet {
        x,
        xu,
        xv,
        xuu,
        xuv,
        xvv,
        n,
        dn: None,
    };
    if !jet.is_finite() {
        return Err(Error::NonFinite(format!("finite-difference jet at ({u}, {v})")));
    }
    Ok(jet)
}

/// The lightlike normal with `⟨n, p⟩ = 1` orthogonal to two tangent vectors.
pub fn gauss_map_from_tangents(xu: &IsoPoint3, xv: &IsoPoint3) -> Result<Vec4> {
    let det = xu.x * xv.y - xu.y * xv.x;
    let scale = xu.coord_norm() * xv.coord_norm();
    if !(det.abs() > 1e-14 * scale) || scale == 0.0 {
        return Err(Error::Degenerate("tangent plane has rank < 2".into()));
    }
    // l + x n_x + y n_y = 0 for both tangents
    let nx = (-xu.l * xv.y + xv.l * xu.y) / det;
    let ny = (-xu.x * xv.l + xv.x * xu.l) / det;
    let m = nx * nx + ny * ny;
    Ok(Vec4::new(-0.5 * (1.0 + m), nx, ny, 0.5 * (1.0 - m)))
}

impl SurfaceJet {
    pub fn is_finite(&self) -> bool {
        [self.x, self.xu, self.xv, self.xuu, self.xuv, self.xvv]
            .iter()
            .all(IsoPoint3::is_finite)
            && self.n.is_finite()
            && self.dn.is_none_or(|d| d.iter().all(Vec4::is_finite))
    }

    /// Largest component difference over the derivative slots `X_u … X_vv`.
    pub fn max_derivative_diff(&self, other: &SurfaceJet) -> f64 {
        [
            self.xu.max_abs_diff(&other.xu),
            self.xv.max_abs_diff(&other.xv),
            self.xuu.max_abs_diff(&other.xuu),
            self.xuv.max_abs_diff(&other.xuv),
            self.xvv.max_abs_diff(&other.xvv),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn second(&self, a: &IsoPoint3) -> f64 {
        a.embed().dot(&self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl FundamentalForms {
    /// `e^{2ω}`, taken as `E`.
    pub fn exp_2omega(&self) -> f64 {
        self.e
    }

    /// `max(|E - G|, |F|) / E`.
    pub fn conformality_defect(&self) -> f64 {
        (self.e - self.g).abs().max(self.f.abs()) / self.e
    }
}

pub fn fundamental_forms(j: &SurfaceJet) -> Result<FundamentalForms> {
    let e = iso_inner(&j.xu, &j.xu);
    if !(e > METRIC_TOL * METRIC_TOL) {
        return Err(Error::DegenerateMetric {
            u: f64::NAN,
            v: f64::NAN,
            factor: e.max(0.0).sqrt(),
        });
    }
    Ok(FundamentalForms {
        e,
        f: iso_inner(&j.xu, &j.xv),
        g: iso_inner(&j.xv, &j.xv),
        l: j.second(&j.xuu),
        m: j.second(&j.xuv),
        n: j.second(&j.xvv),
    })
}

/// `H = ½ e^{-2ω} (L + N)`.
pub fn mean_curvature(j: &SurfaceJet) -> Result<f64> {
    let ff = fundamental_forms(j)?;
    Ok(0.5 * (ff.l + ff.n) / ff.e)
}

/// `Q = ¼ (L - N - 2iM)`.
pub fn hopf_from_jet(j: &SurfaceJet) -> Result<Complex64> {
    let ff = fundamental_forms(j)?;
    Ok(Complex64::new(0.25 * (ff.l - ff.n), -0.5 * ff.m))
}

/// Residuals of the Gauss-Weingarten system in conformal coordinates with
/// constant second fundamental form coefficients `(L, M, N)`:
///
/// ```text
/// X_uu =  ω_u X_u - ω_v X_v + L p      n_u = -e^{-2ω} (L X_u + M X_v)
/// X_uv =  ω_v X_u + ω_u X_v + M p      n_v = -e^{-2ω} (M X_u + N X_v)
/// X_vv = -ω_u X_u + ω_v X_v + N p
/// ```
///
/// `(L, M, N) = (-1, 0, 1)` in curvature line coordinates and `(0, 1, 0)` in
/// asymptotic ones. Returns the max-norm of each of the five equations; the
/// Weingarten rows are `NaN` when the jet carries no `dn`.
pub fn gauss_weingarten_residuals(j: &SurfaceJet, w: &OmegaJet, exp_omega: f64, lmn: [f64; 3]) -> [f64; 5] {
    let [l, m, n] = lmn;
    let (xu, xv, p) = (j.xu.embed(), j.xv.embed(), P);
    let e2 = exp_omega.powi(-2);
    let r = |a: Vec4, b: Vec4| a.max_abs_diff(&b);
    let uu = r(j.xuu.embed(), w.w_u * xu - w.w_v * xv + l * p);
    let uv = r(j.xuv.embed(), w.w_v * xu + w.w_u * xv + m * p);
    let vv = r(j.xvv.embed(), -w.w_u * xu + w.w_v * xv + n * p);
    let (nu, nv) = match j.dn {
        Some([du, dv]) => (
            r(du, -e2 * (l * xu + m * xv)),
            r(dv, -e2 * (m * xu + n * xv)),
        ),
        None => (f64::NAN, f64::NAN),
    };
    [uu, uv, vv, nu, nv]
}

/// Expected `(L, M, N)` for a catalog family, read from its Hopf coefficient
/// `Q = -½ σ` where `σ` is the factor multiplying the canonical `η`.
pub fn expected_second_form(f: &Family) -> [f64; 3] {
    let q = f.expected_hopf();
    // L - N - 2iM = 4Q and L + N = 0
    [2.0 * q.re, -2.0 * q.im, -2.0 * q.re]
}
