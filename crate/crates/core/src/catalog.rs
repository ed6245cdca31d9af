//! Closed-form conformal factors of the zero mean curvature surfaces with
//! planar curvature lines.
//!
//! Non-constant solutions of `ω_uu + ω_vv = 0`, `ω_uv + ω_u ω_v = 0` are
//! written as `e^ω = (f² + g²) / (f_u + g_v)` where `f(u)`, `g(v)` solve
//!
//! ```text
//! f_uu = a f,   f_u² = a f² + b,   g_vv = -a g,   g_v² = -a g² + b
//! ```
//!
//! with `a = α²`, `b = β²`. Depending on the normalization of `f` and `g` the
//! quotient can come out negative (the catenoid case is the standard example);
//! the conformal factor is its absolute value, and every `ω` derivative is
//! taken from `log|f² + g²| - log|f_u + g_v|`, which is insensitive to that sign.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotropic::IsoPoint3;
use crate::weierstrass::{Family, FamilyKind};

/// Conformal factors below this are treated as metric zeros.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `α > 0, β = 0`: catenoid.
    Case1a,
    /// `α = 0, β > 0`: Enneper-type.
    Case1b,
    /// `α > 0, β > 0`: Bonnet-type.
    Case1c,
    /// constant `ω`: plane-like trivial Enneper surface.
    Case2,
}

/// Which normalization of `f, g` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialCondition {
    /// `f(0) = g(0) = 0` where possible (classification normalization).
    ZeroAtOrigin,
    /// `f(0) = 1, g(0) = 0` (used for the deformation to the catenoid).
    OneAtOrigin,
}

/// Picks the case from `(α, β)`.
pub fn classify(alpha: f64, beta: f64) -> Result<Case> {
    if !(alpha >= 0.0 && beta >= 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "alpha and beta must be finite and non-negative, got ({alpha}, {beta})"
        )));
    }
    Ok(match (alpha > 0.0, beta > 0.0) {
        (true, false) => Case::Case1a,
        (false, true) => Case::Case1b,
        (true, true) => Case::Case1c,
        (false, false) => Case::Case2,
    })
}

/// A single-variable function with its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1 {
    pub val: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet1 {
    fn new(val: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { val, d1, d2, d3 }
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(k * self.val, k * self.d1, k * self.d2, k * self.d3)
    }
}

/// First and second partials of `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OmegaJet {
    pub w_u: f64,
    pub w_v: f64,
    pub w_uu: f64,
    pub w_uv: f64,
    pub w_vv: f64,
}

/// `(ω_uu + ω_vv, ω_uv + ω_u ω_v)`.
pub fn pde_residuals_from_jet(j: &OmegaJet) -> (f64, f64) {
    (j.w_uu + j.w_vv, j.w_uv + j.w_u * j.w_v)
}

/// `(f_uu - a f, f_u² - a f² - b, g_vv + a g, g_v² + a g² - b)`.
pub fn ode_residuals_of(f: &Jet1, g: &Jet1, a: f64, b: f64) -> [f64; 4] {
    [
        f.d2 - a * f.val,
        f.d1 * f.d1 - a * f.val * f.val - b,
        g.d2 + a * g.val,
        g.d1 * g.d1 + a * g.val * g.val - b,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactorModel {
    pub case: Case,
    pub alpha: f64,
    pub beta: f64,
    /// Only used by [`Case::Case2`], where `e^ω = e^{-c}`.
    pub c: f64,
    pub ic: InitialCondition,
    /// `g -> -g`, i.e. the coordinate change `v -> -v` applied to the odd
    /// function `g`. The tanh deformation path uses this sign.
    pub g_negated: bool,
}

impl ConformalFactorModel {
    pub fn new(alpha: f64, beta: f64, ic: InitialCondition) -> Result<Self> {
        let case = classify(alpha, beta)?;
        if case == Case::Case2 {
            return Err(Error::Domain(
                "alpha = beta = 0 is the constant case; use ConformalFactorModel::constant".into(),
            ));
        }
        Ok(Self {
            case,
            alpha,
            beta,
            c: 0.0,
            ic,
            g_negated: false,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain(format!("c must be finite, got {c}")));
        }
        Ok(Self {
            case: Case::Case2,
            alpha: 0.0,
            beta: 0.0,
            c,
            ic: InitialCondition::ZeroAtOrigin,
            g_negated: false,
        })
    }

    pub fn with_g_negated(mut self, yes: bool) -> Self {
        self.g_negated = yes;
        self
    }

    /// The model whose conformal factor is `|η|` of the given family, if any.
    ///
    /// The plane has no model (it is umbilic, so there are no curvature line
    /// coordinates to normalize); display-normalized families whose `η` scale
    /// is not unimodular have none either.
    pub fn for_family(f: &Family) -> Option<Self> {
        if f.display && f.kind.display_scale().abs() != 1.0 {
            return None;
        }
        match f.kind {
            FamilyKind::Plane => None,
            FamilyKind::TrivialEnneper { c } => Self::constant(c).ok(),
            FamilyKind::Catenoid { alpha } => Self::new(alpha, 0.0, InitialCondition::ZeroAtOrigin).ok(),
            FamilyKind::EnneperType { beta } => Self::new(0.0, beta, InitialCondition::ZeroAtOrigin).ok(),
            FamilyKind::BonnetType { alpha, beta } => {
                Self::new(alpha, beta, InitialCondition::ZeroAtOrigin).ok()
            }
            FamilyKind::DeformTanh { alpha } => Self::new(alpha, 0.5 * alpha * alpha, InitialCondition::ZeroAtOrigin)
                .ok()
                .map(|m| m.with_g_negated(true)),
            FamilyKind::DeformPolar { r, theta } => {
                let (s, c) = theta.sin_cos();
                Self::new(r * c, r * s, InitialCondition::OneAtOrigin).ok()
            }
        }
    }

    pub fn a(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn b(&self) -> f64 {
        self.beta * self.beta
    }

    /// `f` and derivatives at `u`.
    pub fn f_jet(&self, u: f64) -> Jet1 {
        let (al, be) = (self.alpha, self.beta);
        match (self.case, self.ic) {
            (Case::Case2, _) => Jet1::default(),
            (Case::Case1a, _) => {
                let e = (-al * u).exp();
                Jet1::new(e, -al * e, al * al * e, -al * al * al * e)
            }
            (Case::Case1b, InitialCondition::ZeroAtOrigin) => Jet1::new(be * u, be, 0.0, 0.0),
            (Case::Case1b, InitialCondition::OneAtOrigin) => Jet1::new(1.0 - be * u, -be, 0.0, 0.0),
            (Case::Case1c, InitialCondition::ZeroAtOrigin) => {
                let (sh, ch) = ((al * u).sinh(), (al * u).cosh());
                Jet1::new((be / al) * sh, be * ch, al * be * sh, al * al * be * ch)
            }
            (Case::Case1c, InitialCondition::OneAtOrigin) => {
                let rho = al.hypot(be);
                let (sh, ch) = ((al * u).sinh(), (al * u).cosh());
                let f = ch - (rho / al) * sh;
                let fu = al * sh - rho * ch;
                Jet1::new(f, fu, al * al * f, al * al * fu)
            }
        }
    }

    /// `g` and derivatives at `v`.
    pub fn g_jet(&self, v: f64) -> Jet1 {
        let (al, be) = (self.alpha, self.beta);
        let jet = match (self.case, self.ic) {
            (Case::Case2, _) | (Case::Case1a, _) => Jet1::default(),
            (Case::Case1b, InitialCondition::ZeroAtOrigin) => Jet1::new(be * v, be, 0.0, 0.0),
            (Case::Case1b, InitialCondition::OneAtOrigin) => Jet1::new(-be * v, -be, 0.0, 0.0),
            (Case::Case1c, ic) => {
                let (s, c) = (al * v).sin_cos();
                let j = Jet1::new((be / al) * s, be * c, -al * be * s, -al * al * be * c);
                if ic == InitialCondition::OneAtOrigin {
                    j.scaled(-1.0)
                } else {
                    j
                }
            }
        };
        if self.g_negated {
            jet.scaled(-1.0)
        } else {
            jet
        }
    }

    /// `(f² + g²) / (f_u + g_v)` with its sign; `None` in the constant case.
    pub fn signed_quotient(&self, u: f64, v: f64) -> Option<f64> {
        if self.case == Case::Case2 {
            return None;
        }
        let (f, g) = (self.f_jet(u), self.g_jet(v));
        Some((f.val * f.val + g.val * g.val) / (f.d1 + g.d1))
    }

    /// Printed closed form of `e^ω` for each case.
    pub fn closed_form_exp_omega(&self, u: f64, v: f64) -> f64 {
        self.exp_omega_derivatives(u, v)[0]
    }

    /// `[E, E_u, E_v, E_uu, E_uv, E_vv]` for `E = e^ω` in closed form.
    pub fn exp_omega_derivatives(&self, u: f64, v: f64) -> [f64; 6] {
        let (al, be) = (self.alpha, self.beta);
        let flip = if self.g_negated { -1.0 } else { 1.0 };
        match (self.case, self.ic) {
            (Case::Case2, _) => [(-self.c).exp(), 0.0, 0.0, 0.0, 0.0, 0.0],
            (Case::Case1a, _) => {
                let e = (-al * u).exp() / al;
                [e, -al * e, 0.0, al * al * e, 0.0, 0.0]
            }
            (Case::Case1b, InitialCondition::ZeroAtOrigin) => {
                [0.5 * be * (u * u + v * v), be * u, be * v, be, 0.0, be]
            }
            (Case::Case1b, InitialCondition::OneAtOrigin) => {
                let du = 1.0 - be * u;
                [(du * du + be * be * v * v) / (2.0 * be), -du, be * v, be, 0.0, be]
            }
            (Case::Case1c, ic) => {
                let (sh, ch) = ((al * u).sinh(), (al * u).cosh());
                let (s, c) = (al * v).sin_cos();
                let k = be / (al * al);
                match ic {
                    InitialCondition::ZeroAtOrigin => [
                        k * (ch - flip * c),
                        (be / al) * sh,
                        flip * (be / al) * s,
                        be * ch,
                        0.0,
                        flip * be * c,
                    ],
                    InitialCondition::OneAtOrigin => {
                        let rho = al.hypot(be);
                        [
                            -(al * sh - rho * ch + flip * be * c) / (al * al),
                            -ch + (rho / al) * sh,
                            flip * (be / al) * s,
                            -al * sh + rho * ch,
                            0.0,
                            flip * be * c,
                        ]
                    }
                }
            }
        }
    }

    /// `e^ω`, failing at metric zeros.
    pub fn exp_omega(&self, u: f64, v: f64) -> Result<f64> {
        let e = self.closed_form_exp_omega(u, v);
        if !(e >= DEGENERATE_TOL) {
            return Err(Error::DegenerateMetric { u, v, factor: e });
        }
        Ok(e)
    }

    /// Analytic partials of `ω`, from the closed form of `e^ω`.
    pub fn omega_jet(&self, u: f64, v: f64) -> Result<OmegaJet> {
        let [e, eu, ev, euu, euv, evv] = self.exp_omega_derivatives(u, v);
        if !(e >= DEGENERATE_TOL) {
            return Err(Error::DegenerateMetric { u, v, factor: e });
        }
        let (wu, wv) = (eu / e, ev / e);
        Ok(OmegaJet {
            w_u: wu,
            w_v: wv,
            w_uu: euu / e - wu * wu,
            w_uv: euv / e - wu * wv,
            w_vv: evv / e - wv * wv,
        })
    }

    /// Partials of `ω` from `log|f² + g²| - log|f_u + g_v|`.
    ///
    /// Undefined where `f = g = 0` even if `e^ω` is not zero there.
    pub fn omega_jet_from_fg(&self, u: f64, v: f64) -> Result<OmegaJet> {
        self.exp_omega(u, v)?;
        if self.case == Case::Case2 {
            return Ok(OmegaJet::default());
        }
        let (f, g) = (self.f_jet(u), self.g_jet(v));
        let p = f.val * f.val + g.val * g.val;
        let d = f.d1 + g.d1;
        if p == 0.0 || d == 0.0 {
            return Err(Error::Degenerate(format!("f = g = 0 or f_u + g_v = 0 at ({u}, {v})")));
        }
        let (p2, d2) = (p * p, d * d);
        Ok(OmegaJet {
            w_u: 2.0 * f.val * f.d1 / p - f.d2 / d,
            w_v: 2.0 * g.val * g.d1 / p - g.d2 / d,
            w_uu: 2.0 * (f.d1 * f.d1 + f.val * f.d2) / p - 4.0 * f.val * f.val * f.d1 * f.d1 / p2 - f.d3 / d
                + f.d2 * f.d2 / d2,
            w_vv: 2.0 * (g.d1 * g.d1 + g.val * g.d2) / p - 4.0 * g.val * g.val * g.d1 * g.d1 / p2 - g.d3 / d
                + g.d2 * g.d2 / d2,
            w_uv: -4.0 * f.val * f.d1 * g.val * g.d1 / p2 + f.d2 * g.d2 / d2,
        })
    }

    pub fn ode_residuals(&self, u: f64, v: f64) -> [f64; 4] {
        ode_residuals_of(&self.f_jet(u), &self.g_jet(v), self.a(), self.b())
    }

    pub fn pde_residuals(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        Ok(pde_residuals_from_jet(&self.omega_jet(u, v)?))
    }
}

/// Explicit parametrizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedFormSurface {
    /// `X₀ = -((u² - v²)/2, u, v)`.
    TrivialEnneperX0,
    /// Antiderivative of the canonical catenoid data `(e^{αz}, -(1/α) e^{-αz} dz)`.
    CatenoidXR { alpha: f64 },
    /// Surface of the tanh path, normalized so that `X_α(0, 0) = 0`.
    DeformXAlpha { alpha: f64 },
}

impl ClosedFormSurface {
    pub fn eval(&self, u: f64, v: f64) -> IsoPoint3 {
        match *self {
            ClosedFormSurface::TrivialEnneperX0 => IsoPoint3::new(-0.5 * (u * u - v * v), -u, -v),
            ClosedFormSurface::CatenoidXR { alpha } => {
                let e = (-alpha * u).exp() / (alpha * alpha);
                let (s, c) = (alpha * v).sin_cos();
                IsoPoint3::new(-u / alpha, e * c, -e * s)
            }
            ClosedFormSurface::DeformXAlpha { alpha } => {
                let k = -1.0 / (2.0 * alpha * alpha);
                let (ch, sh) = ((alpha * u).cosh(), (alpha * u).sinh());
                let (s, c) = (alpha * v).sin_cos();
                IsoPoint3::new(
                    k * 2.0 * (ch * c - 1.0),
                    k * alpha * (sh * c + alpha * u),
                    k * alpha * (ch * s + alpha * v),
                )
            }
        }
    }
}

/// The two deformation paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeformationPath {
    /// `β = α²/2`, ends at the trivial Enneper surface as `α -> 0`.
    Tanh { alpha: f64 },
    /// `α = r cos θ, β = r sin θ`; catenoid as `θ -> 0`, Enneper-type as `θ -> π/2`.
    Polar { r: f64, theta: f64 },
}

pub fn deformation_data(path: DeformationPath) -> Result<Family> {
    match path {
        DeformationPath::Tanh { alpha } => Family::deform_tanh(alpha),
        DeformationPath::Polar { r, theta } => Family::deform_polar(r, theta),
    }
}

/// A one-parameter approach to a limiting surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitPath {
    /// Bonnet-type `(α, β)` to Enneper-type `(0, β)` as `α -> 0`.
    BonnetAlphaToZero { beta: f64 },
    /// Tanh path to the trivial Enneper surface as `α -> 0`.
    TanhAlphaToZero,
    /// Polar family to the catenoid `(e^{rz}, -(1/r) e^{-rz})` as `θ -> 0`.
    PolarThetaToZero { r: f64 },
    /// Polar family to `(2/(rz - 1), (rz - 1)²/(2r))` as `θ -> π/2`; the
    /// parameter is `ε = π/2 - θ`.
    PolarThetaToHalfPi { r: f64 },
}

impl LimitPath {
    /// Family at parameter value `t` (the quantity tending to zero).
    pub fn family_at(&self, t: f64) -> Result<Family> {
        match *self {
            LimitPath::BonnetAlphaToZero { beta } => Family::bonnet_type(t, beta),
            LimitPath::TanhAlphaToZero => Family::deform_tanh(t),
            LimitPath::PolarThetaToZero { r } => Family::deform_polar(r, t),
            LimitPath::PolarThetaToHalfPi { r } => Family::deform_polar(r, FRAC_PI_2 - t),
        }
    }

    /// `(h, η)` of the limit surface.
    pub fn limit_data(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        match *self {
            LimitPath::BonnetAlphaToZero { beta } => {
                let f = Family::enneper_type(beta)?;
                Ok((f.h(z)?, f.eta(z)))
            }
            LimitPath::TanhAlphaToZero => {
                let f = Family::trivial_enneper(0.0)?;
                Ok((f.h(z)?, f.eta(z)))
            }
            LimitPath::PolarThetaToZero { r } => {
                let f = Family::catenoid(r)?;
                Ok((f.h(z)?, f.eta(z)))
            }
            LimitPath::PolarThetaToHalfPi { r } => {
                let f = Family::enneper_type(r)?;
                let w = z - 1.0 / r;
                Ok((f.h(w)?, f.eta(w)))
            }
        }
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub param: f64,
    pub h_deviation: f64,
    pub eta_deviation: f64,
}

/// Max deviation of `(h, η)` from the limit over the grid, per parameter value.
pub fn limit_convergence_rate(path: LimitPath, grid: &[Complex64], params: &[f64]) -> Result<Vec<LimitRow>> {
    params
        .iter()
        .map(|&t| {
            let fam = path.family_at(t)?;
            let mut row = LimitRow {
                param: t,
                h_deviation: 0.0,
                eta_deviation: 0.0,
            };
            for &z in grid {
                let (h0, e0) = path.limit_data(z)?;
                row.h_deviation = row.h_deviation.max((fam.h(z)? - h0).norm());
                row.eta_deviation = row.eta_deviation.max((fam.eta(z) - e0).norm());
            }
            Ok(row)
        })
        .collect()
}

/// Consecutive ratios `x[k+1] / x[k]`.
pub fn successive_ratios(xs: &[f64]) -> Vec<f64> {
    xs.windows(2).map(|w| w[1] / w[0]).collect()
}
