//! Weierstrass-type representation `X = Re ∫ (h η, η, -i η) dz`.
//!
//! Every family is stored in its canonical normalization `η = -1 / h'`, which
//! fixes the Hopf differential to `Q = ½ η h' = -½`. Conjugation multiplies
//! `η` by `i` (so `Q = -i/2`). The cleaner data usually quoted for the plane,
//! trivial Enneper surface and catenoid differ from the canonical ones by a
//! constant factor on `η`, i.e. by an isometry composed with a homothety; set
//! [`Family::display`] to get those.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotropic::{IsoPoint3, Vec4};
pub use crate::quadrature::QuadratureConfig;
use crate::quadrature::CompositeRule;

/// Magnitude below which a denominator of `h` is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The catalog of Weierstrass data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `(0, dz)`.
    Plane,
    /// `(e^c z, -e^{-c} dz)`; flat metric `e^{-2c}`.
    TrivialEnneper { c: f64 },
    /// `(e^{αz}, -(1/α) e^{-αz} dz)`.
    Catenoid { alpha: f64 },
    /// `(2/(βz), (β z²/2) dz)`.
    EnneperType { beta: f64 },
    /// `((α/β) coth(αz/2), (2β/α²) sinh²(αz/2) dz)`.
    BonnetType { alpha: f64, beta: f64 },
    /// `((2/α) tanh(αz/2), -cosh²(αz/2) dz)`, the path `β = α²/2`.
    DeformTanh { alpha: f64 },
    /// Polar family joining catenoid (`θ → 0`), Bonnet-type and Enneper-type (`θ → π/2`).
    DeformPolar { r: f64, theta: f64 },
}

impl FamilyKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyKind::Plane => "plane",
            FamilyKind::TrivialEnneper { .. } => "trivial-enneper",
            FamilyKind::Catenoid { .. } => "catenoid",
            FamilyKind::EnneperType { .. } => "enneper-type",
            FamilyKind::BonnetType { .. } => "bonnet-type",
            FamilyKind::DeformTanh { .. } => "deform-tanh",
            FamilyKind::DeformPolar { .. } => "deform-polar",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
            }
        };
        match *self {
            FamilyKind::Plane => Ok(()),
            FamilyKind::TrivialEnneper { c } => {
                if c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("c must be finite, got {c}")))
                }
            }
            FamilyKind::Catenoid { alpha } | FamilyKind::DeformTanh { alpha } => pos("alpha", alpha),
            FamilyKind::EnneperType { beta } => pos("beta", beta),
            FamilyKind::BonnetType { alpha, beta } => {
                pos("alpha", alpha)?;
                pos("beta", beta)
            }
            FamilyKind::DeformPolar { r, theta } => {
                pos("r", r)?;
                if theta > 0.0 && theta < FRAC_PI_2 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("theta must lie in (0, pi/2), got {theta}")))
                }
            }
        }
    }

    /// `h` and `h'`.
    fn h_pair(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let pole = || Error::Pole { re: z.re, im: z.im };
        Ok(match *self {
            FamilyKind::Plane => (c(0.0, 0.0), c(0.0, 0.0)),
            FamilyKind::TrivialEnneper { c: k } => (k.exp() * z, c(k.exp(), 0.0)),
            FamilyKind::Catenoid { alpha } => {
                let e = (alpha * z).exp();
                (e, alpha * e)
            }
            FamilyKind::EnneperType { beta } => {
                if z.norm() < POLE_TOL {
                    return Err(pole());
                }
                (2.0 / (beta * z), -2.0 / (beta * z * z))
            }
            FamilyKind::BonnetType { alpha, beta } => {
                let w = 0.5 * alpha * z;
                let s = w.sinh();
                if s.norm() < POLE_TOL {
                    return Err(pole());
                }
                let h = (alpha / beta) * w.cosh() / s;
                let hp = -(alpha * alpha / (2.0 * beta)) / (s * s);
                (h, hp)
            }
            FamilyKind::DeformTanh { alpha } => {
                let w = 0.5 * alpha * z;
                let ch = w.cosh();
                if ch.norm() < POLE_TOL {
                    return Err(pole());
                }
                ((2.0 / alpha) * w.sinh() / ch, 1.0 / (ch * ch))
            }
            FamilyKind::DeformPolar { r, theta } => {
                let (st, ct) = theta.sin_cos();
                let s = r * ct;
                let e = (-s * z).exp();
                let d = e * (1.0 + ct) - st;
                if d.norm() < POLE_TOL {
                    return Err(pole());
                }
                let phase = Complex64::from_polar(1.0, 2.0 * theta);
                let h = 2.0 * ct * phase / d;
                let hp = 2.0 * ct * s * (1.0 + ct) * phase * e / (d * d);
                (h, hp)
            }
        })
    }

    /// Canonical `η` and `η'` (no conjugation or display factor).
    fn eta_pair(&self, z: Complex64) -> (Complex64, Complex64) {
        match *self {
            FamilyKind::Plane => (c(1.0, 0.0), c(0.0, 0.0)),
            FamilyKind::TrivialEnneper { c: k } => (c(-(-k).exp(), 0.0), c(0.0, 0.0)),
            FamilyKind::Catenoid { alpha } => {
                let e = (-alpha * z).exp();
                (-e / alpha, e)
            }
            FamilyKind::EnneperType { beta } => (0.5 * beta * z * z, beta * z),
            FamilyKind::BonnetType { alpha, beta } => {
                let s = (0.5 * alpha * z).sinh();
                (
                    (2.0 * beta / (alpha * alpha)) * s * s,
                    (beta / alpha) * (alpha * z).sinh(),
                )
            }
            FamilyKind::DeformTanh { alpha } => {
                let ch = (0.5 * alpha * z).cosh();
                (-ch * ch, -0.5 * alpha * (alpha * z).sinh())
            }
            FamilyKind::DeformPolar { r, theta } => {
                let (st, ct) = theta.sin_cos();
                let sz = r * ct * z;
                let phase = Complex64::from_polar(1.0, -2.0 * theta);
                let eta = phase * (ct * sz.sinh() - sz.cosh() + st) / (r * ct * ct);
                let eta_p = phase * (ct * sz.cosh() - sz.sinh()) / ct;
                (eta, eta_p)
            }
        }
    }

    /// Canonical `hη` and `(hη)'` in cancelled closed form; entire for every family.
    fn h_eta_pair(&self, z: Complex64) -> (Complex64, Complex64) {
        match *self {
            FamilyKind::Plane => (c(0.0, 0.0), c(0.0, 0.0)),
            FamilyKind::TrivialEnneper { .. } => (-z, c(-1.0, 0.0)),
            FamilyKind::Catenoid { alpha } => (c(-1.0 / alpha, 0.0), c(0.0, 0.0)),
            FamilyKind::EnneperType { .. } => (z, c(1.0, 0.0)),
            FamilyKind::BonnetType { alpha, .. } => {
                let w = alpha * z;
                (w.sinh() / alpha, w.cosh())
            }
            FamilyKind::DeformTanh { alpha } => {
                let w = alpha * z;
                (-w.sinh() / alpha, -w.cosh())
            }
            FamilyKind::DeformPolar { r, theta } => {
                let (st, ct) = theta.sin_cos();
                let e = (r * ct * z).exp();
                let he = -1.0 / (r * ct) + st * e / (r * ct * (1.0 + ct));
                (he, st * e / (1.0 + ct))
            }
        }
    }

    /// Squared modulus `|η|²` as a function of real `(a, b) = (u, v)`, continued
    /// to complex arguments.
    pub fn modulus_squared(&self, a: Complex64, b: Complex64) -> Complex64 {
        match *self {
            FamilyKind::Plane => c(1.0, 0.0),
            FamilyKind::TrivialEnneper { c: k } => c((-2.0 * k).exp(), 0.0),
            FamilyKind::Catenoid { alpha } => (-2.0 * alpha * a).exp() / (alpha * alpha),
            FamilyKind::EnneperType { beta } => {
                let s = a * a + b * b;
                0.25 * beta * beta * s * s
            }
            FamilyKind::BonnetType { alpha, beta } => {
                let t = (alpha * a).cosh() - (alpha * b).cos();
                (beta * beta / alpha.powi(4)) * t * t
            }
            FamilyKind::DeformTanh { alpha } => {
                let t = (alpha * a).cosh() + (alpha * b).cos();
                0.25 * t * t
            }
            FamilyKind::DeformPolar { r, theta } => {
                let (st, ct) = theta.sin_cos();
                let (al, be) = (r * ct, r * st);
                let t = al * (al * a).sinh() - r * (al * a).cosh() + be * (al * b).cos();
                t * t / al.powi(4)
            }
        }
    }

    /// Constant by which the display normalization rescales `η`.
    pub fn display_scale(&self) -> f64 {
        match *self {
            FamilyKind::TrivialEnneper { .. } => -1.0,
            FamilyKind::Catenoid { alpha } => -alpha,
            _ => 1.0,
        }
    }
}

/// A catalog family together with its conjugation state.
///
/// The effective 1-form is `i^k · s · η` where `k = conjugated + 2·reflected`
/// and `s` is the display scale when [`Family::display`] is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub kind: FamilyKind,
    pub conjugated: bool,
    /// Set after an even number of conjugations returns to the unconjugated
    /// side with `η -> -η` (a point reflection of the surface).
    pub reflected: bool,
    pub display: bool,
}

impl Family {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        kind.validate()?;
        Ok(Self {
            kind,
            conjugated: false,
            reflected: false,
            display: false,
        })
    }

    pub fn plane() -> Self {
        Self::new(FamilyKind::Plane).expect("valid")
    }

    pub fn trivial_enneper(c: f64) -> Result<Self> {
        Self::new(FamilyKind::TrivialEnneper { c })
    }

    pub fn catenoid(alpha: f64) -> Result<Self> {
        Self::new(FamilyKind::Catenoid { alpha })
    }

    pub fn enneper_type(beta: f64) -> Result<Self> {
        Self::new(FamilyKind::EnneperType { beta })
    }

    pub fn bonnet_type(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(FamilyKind::BonnetType { alpha, beta })
    }

    pub fn deform_tanh(alpha: f64) -> Result<Self> {
        Self::new(FamilyKind::DeformTanh { alpha })
    }

    pub fn deform_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(FamilyKind::DeformPolar { r, theta })
    }

    /// The conjugate surface: data `(h, iη)`.
    pub fn conjugate(&self) -> Self {
        let mut out = *self;
        if self.conjugated {
            out.conjugated = false;
            out.reflected = !self.reflected;
        } else {
            out.conjugated = true;
        }
        out
    }

    pub fn with_display(mut self, display: bool) -> Self {
        self.display = display;
        self
    }

    /// Human-readable name; conjugated families carry their own names.
    pub fn name(&self) -> String {
        let base = match (self.kind, self.conjugated) {
            (FamilyKind::Catenoid { .. }, true) => "helicoid",
            (FamilyKind::BonnetType { .. }, true) => "thomsen-type",
            (k, _) => k.tag(),
        };
        if self.conjugated && !matches!(self.kind, FamilyKind::Catenoid { .. } | FamilyKind::BonnetType { .. }) {
            format!("{base} (conjugate)")
        } else {
            base.to_string()
        }
    }

    /// Constant multiplying the canonical `η`.
    pub fn eta_factor(&self) -> Complex64 {
        let k = self.conjugated as u8 + 2 * self.reflected as u8;
        let rot = match k {
            0 => c(1.0, 0.0),
            1 => I,
            2 => c(-1.0, 0.0),
            _ => -I,
        };
        let s = if self.display { self.kind.display_scale() } else { 1.0 };
        rot * s
    }

    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.kind.h_pair(z)?.0)
    }

    pub fn h_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.kind.h_pair(z)?.1)
    }

    /// Coefficient of `dz` in the holomorphic 1-form.
    pub fn eta(&self, z: Complex64) -> Complex64 {
        self.eta_factor() * self.kind.eta_pair(z).0
    }

    pub fn eta_prime(&self, z: Complex64) -> Complex64 {
        self.eta_factor() * self.kind.eta_pair(z).1
    }

    /// `(hη, η, -iη)`; the first component uses the pole-free closed form.
    pub fn integrand(&self, z: Complex64) -> [Complex64; 3] {
        let f = self.eta_factor();
        let eta = f * self.kind.eta_pair(z).0;
        let he = f * self.kind.h_eta_pair(z).0;
        [he, eta, -I * eta]
    }

    /// Complex derivative of [`Family::integrand`].
    pub fn integrand_prime(&self, z: Complex64) -> [Complex64; 3] {
        let f = self.eta_factor();
        let ep = f * self.kind.eta_pair(z).1;
        let hep = f * self.kind.h_eta_pair(z).1;
        [hep, ep, -I * ep]
    }

    /// Conformal factor `e^ω = |η|`.
    pub fn metric_factor(&self, z: Complex64) -> f64 {
        self.eta(z).norm()
    }

    /// `Q = ½ η h'`.
    pub fn hopf_coefficient(&self, z: Complex64) -> Result<Complex64> {
        Ok(0.5 * self.eta(z) * self.h_prime(z)?)
    }

    /// The constant value the Hopf coefficient takes for this family.
    pub fn expected_hopf(&self) -> Complex64 {
        match self.kind {
            FamilyKind::Plane => c(0.0, 0.0),
            _ => -0.5 * self.eta_factor(),
        }
    }

    /// Lightlike Gauss map at `z`.
    pub fn gauss_map(&self, z: Complex64) -> Result<Vec4> {
        Ok(gauss_map_from_h(self.h(z)?))
    }

    /// `|η|²` evaluated at complex `(a, b)`.
    pub fn modulus_squared(&self, a: Complex64, b: Complex64) -> Complex64 {
        let s = if self.display { self.kind.display_scale() } else { 1.0 };
        s * s * self.kind.modulus_squared(a, b)
    }

    pub fn is_planar_family(&self) -> bool {
        matches!(self.kind, FamilyKind::Plane)
    }
}

/// `n = -½ (1 + |h|², 2 Re h, -2 Im h, -1 + |h|²)`.
pub fn gauss_map_from_h(h: Complex64) -> Vec4 {
    let m = h.norm_sqr();
    Vec4::new(-0.5 * (1.0 + m), -h.re, h.im, -0.5 * (m - 1.0))
}

fn real_part(v: [Complex64; 3]) -> IsoPoint3 {
    IsoPoint3::new(v[0].re, v[1].re, v[2].re)
}

fn check_finite(p: IsoPoint3, what: &str) -> Result<IsoPoint3> {
    if p.is_finite() {
        Ok(p)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// `X(z) = Re ∫_{z0}^{z} (hη, η, -iη) dζ` along the straight segment.
pub fn integrate_surface(f: &Family, z: Complex64, cfg: &QuadratureConfig) -> Result<IsoPoint3> {
    let rule = CompositeRule::new(cfg)?;
    integrate_with_rule(f, &rule, cfg.base_point, z)
}

/// Same as [`integrate_surface`] with a prebuilt rule, for repeated evaluation.
pub fn integrate_with_rule(
    f: &Family,
    rule: &CompositeRule,
    z0: Complex64,
    z: Complex64,
) -> Result<IsoPoint3> {
    let v = rule.segment(z0, z, &|w| f.integrand(w));
    check_finite(real_part(v), "surface integral")
}

/// Integral along a polyline; the first vertex is the base point.
pub fn integrate_polyline(f: &Family, path: &[Complex64], cfg: &QuadratureConfig) -> Result<IsoPoint3> {
    let rule = CompositeRule::new(cfg)?;
    let v = rule.polyline(path, &|w| f.integrand(w));
    check_finite(real_part(v), "polyline integral")
}

/// Largest coordinate difference between the integrals along two polylines
/// with common endpoints.
pub fn path_independence_check(
    f: &Family,
    path_a: &[Complex64],
    path_b: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (Some(a0), Some(a1), Some(b0), Some(b1)) =
        (path_a.first(), path_a.last(), path_b.first(), path_b.last())
    else {
        return Err(Error::Domain("paths must be non-empty".into()));
    };
    if a0 != b0 || a1 != b1 {
        return Err(Error::Domain("paths must share endpoints".into()));
    }
    let xa = integrate_polyline(f, path_a, cfg)?;
    let xb = integrate_polyline(f, path_b, cfg)?;
    Ok(xa.max_abs_diff(&xb))
}

/// Recovers `η(z)` from the squared modulus alone:
/// `η(z) = R²((z + conj z0)/2, (z - conj z0)/(2i)) / conj(η(z0))`,
/// choosing the base value `η(z0) = |η(z0)|` (real and positive).
///
/// The result equals the catalog `η` up to one unit-modulus constant.
pub fn recover_eta_from_modulus(f: &Family, z0: Complex64, z: Complex64) -> Result<Complex64> {
    let base = f.modulus_squared(c(z0.re, 0.0), c(z0.im, 0.0)).re;
    if !(base > POLE_TOL * POLE_TOL) {
        return Err(Error::Degenerate(format!(
            "eta vanishes at base point {z0}; choose another"
        )));
    }
    let a = 0.5 * (z + z0.conj());
    let b = (z - z0.conj()) / (2.0 * I);
    Ok(f.modulus_squared(a, b) / base.sqrt())
}
