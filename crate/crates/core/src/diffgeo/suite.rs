//! Runs every applicable identity on a grid and collects max residuals.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Case, ConformalFactorModel};
use crate::error::{Error, Result};
use crate::quadrature::{CompositeRule, QuadratureConfig};
use crate::weierstrass::{integrate_polyline, integrate_with_rule, recover_eta_from_modulus, Family};

use super::affine::{affine_determinants, affine_shape, affine_shape_closed_form, AFFINE_STEP};
use super::axial::{axial_from_jet, plane_carrier_checks, AxialResult, Axis};
use super::jet::{
    analytic_jet_with_rule, expected_second_form, fd_jet, fundamental_forms, gauss_weingarten_residuals,
    hopf_from_jet, FD_STEP,
};
use super::lines::{extract_coordinate_polyline, plane_fit_residual, LineDirection};
use super::GridSpec;

/// Upper bounds for every named check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub mean_curvature: f64,
    pub mean_curvature_fd: f64,
    pub hopf: f64,
    pub hopf_constancy: f64,
    pub conformality: f64,
    /// `None` means `step²`.
    pub fd_jet: Option<f64>,
    pub metric_model: f64,
    pub gauss_weingarten: f64,
    pub planarity: f64,
    pub ode: f64,
    pub pde: f64,
    pub axial: f64,
    pub affine_determinant: f64,
    pub affine_mean: f64,
    pub affine_tangential: f64,
    pub path_independence: f64,
    pub shaw: f64,
    pub conjugate_pair: f64,
    pub degenerate_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mean_curvature: 1e-8,
            mean_curvature_fd: 1e-5,
            hopf: 1e-8,
            hopf_constancy: 1e-10,
            conformality: 1e-8,
            fd_jet: None,
            metric_model: 1e-10,
            gauss_weingarten: 1e-6,
            planarity: 1e-8,
            ode: 1e-10,
            pde: 1e-8,
            axial: 1e-6,
            affine_determinant: 1e-8,
            affine_mean: 1e-4,
            affine_tangential: 1e-5,
            path_independence: 1e-10,
            shaw: 1e-8,
            conjugate_pair: 1e-10,
            degenerate_fraction: 0.02,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.mean_curvature,
            self.mean_curvature_fd,
            self.hopf,
            self.hopf_constancy,
            self.conformality,
            self.fd_jet.unwrap_or(1.0),
            self.metric_model,
            self.gauss_weingarten,
            self.planarity,
            self.ode,
            self.pde,
            self.axial,
            self.affine_determinant,
            self.affine_mean,
            self.affine_tangential,
            self.path_independence,
            self.shaw,
            self.conjugate_pair,
            self.degenerate_fraction,
        ];
        if all.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::Domain("tolerances must be positive and finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub grid: GridSpec,
    pub tol: Tolerances,
    pub fd_step: f64,
    pub affine_step: f64,
    /// Contour integrals start at `quadrature.base_point`.
    pub quadrature: QuadratureConfig,
    pub line_samples: usize,
    pub lines_per_direction: usize,
    pub path_samples: usize,
    pub seed: u64,
}

impl SuiteConfig {
    /// Defaults on the family's standard `n × n` grid, integrating from the grid center.
    pub fn for_family(f: &Family, n: usize) -> Self {
        let grid = GridSpec::default_for_family(f, n);
        Self::on_grid(grid)
    }

    pub fn on_grid(grid: GridSpec) -> Self {
        Self {
            grid,
            tol: Tolerances::default(),
            fd_step: FD_STEP,
            affine_step: AFFINE_STEP,
            quadrature: QuadratureConfig::default().with_base_point(grid.center()),
            line_samples: 64,
            lines_per_direction: 21,
            path_samples: 16,
            seed: 0x5eed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.tol.validate()?;
        self.quadrature.validate()?;
        for (name, s) in [("fd_step", self.fd_step), ("affine_step", self.affine_step)] {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {s}")));
            }
        }
        if self.line_samples < 4 || self.lines_per_direction < 1 {
            return Err(Error::Domain("need >= 4 samples per line and >= 1 line".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub excluded_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub grid_points: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    /// Grid points skipped as metric zeros or poles, as `[u, v]`.
    pub excluded: Vec<[f64; 2]>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

/// Max that lets `NaN` win so broken inputs cannot pass.
fn nanmax(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PointResult {
    h: f64,
    h_fd: f64,
    q: Complex64,
    hopf: f64,
    hopf_jet: f64,
    conformal: f64,
    fd_jet: f64,
    conj_pair: f64,
    shaw: Complex64,
    eta: Complex64,
    metric_model: Option<f64>,
    gw: Option<f64>,
    ode: Option<f64>,
    pde: Option<f64>,
    axial: Option<AxialResult>,
    affine_det: Option<f64>,
    affine_metric: Option<f64>,
    affine_mean: Option<f64>,
    affine_direct: Option<f64>,
    affine_tangential: Option<f64>,
    affine_closed: Option<f64>,
}

fn is_degeneracy(e: &Error) -> bool {
    matches!(e, Error::DegenerateMetric { .. } | Error::Pole { .. })
}

fn evaluate_point(
    f: &Family,
    model: Option<&ConformalFactorModel>,
    cfg: &SuiteConfig,
    rule: &CompositeRule,
    shaw_base: Complex64,
    z: Complex64,
) -> Result<PointResult> {
    let z0 = cfg.quadrature.base_point;
    let (u, v) = (z.re, z.im);
    let jet = analytic_jet_with_rule(f, z, rule, z0)?;
    let ff = fundamental_forms(&jet)?;
    let q = f.hopf_coefficient(z)?;
    let q_expected = f.expected_hopf();
    // short integrals from z keep the stencil differences free of the large common part
    let sampler = |a: f64, b: f64| Ok(jet.x + integrate_with_rule(f, rule, z, Complex64::new(a, b))?);
    let fd = fd_jet(sampler, u, v, cfg.fd_step)?;
    let ff_fd = fundamental_forms(&fd)?;

    let conj = f.conjugate();
    let conj_pair = (conj.metric_factor(z) - f.metric_factor(z))
        .abs()
        .max((conj.hopf_coefficient(z)? - Complex64::i() * q).norm());

    let mut r = PointResult {
        h: 0.5 * (ff.l + ff.n) / ff.e,
        h_fd: 0.5 * (ff_fd.l + ff_fd.n) / ff_fd.e,
        q,
        hopf: (q - q_expected).norm(),
        hopf_jet: (hopf_from_jet(&jet)? - q_expected).norm(),
        conformal: ff.conformality_defect(),
        fd_jet: fd.max_derivative_diff(&jet),
        conj_pair,
        shaw: recover_eta_from_modulus(f, shaw_base, z)?,
        eta: f.eta(z),
        ..Default::default()
    };

    if let Some(m) = model {
        let e = m.exp_omega(u, v)?;
        let o = m.omega_jet(u, v)?;
        r.metric_model = Some((e - f.metric_factor(z)).abs() / e);
        let gw = gauss_weingarten_residuals(&jet, &o, e, expected_second_form(f));
        r.gw = Some(gw.into_iter().fold(0.0, nanmax));
        r.ode = Some(m.ode_residuals(u, v).into_iter().map(f64::abs).fold(0.0, nanmax));
        let (p1, p2) = m.pde_residuals(u, v)?;
        r.pde = Some(p1.abs().max(p2.abs()));
        if f.eta_factor() == Complex64::new(1.0, 0.0) && m.case != Case::Case2 {
            let w1 = axial_from_jet(&jet, &o, e, Axis::First);
            let w2 = axial_from_jet(&jet, &o, e, Axis::Second);
            r.axial = Some(AxialResult {
                w1,
                w2,
                cross: w1.w.dot(&w2.w),
            });
        }
    }

    if affine_applies(f) {
        let [lt, mt, nt] = affine_determinants(&jet);
        r.affine_det = Some(lt.abs().max(nt.abs()));
        r.affine_metric = Some((mt.max(0.0).sqrt() - f.metric_factor(z)).abs());
        let s = affine_shape(f, z, cfg.affine_step)?;
        r.affine_mean = Some(s.mean.abs());
        r.affine_direct = Some(s.mean_direct.abs());
        r.affine_tangential = Some(s.tangential_residual);
        if let Some(m) = model {
            let cf = affine_shape_closed_form(&m.omega_jet(u, v)?, m.exp_omega(u, v)?);
            let d = (0..2)
                .flat_map(|i| (0..2).map(move |k| (i, k)))
                .map(|(i, k)| (s.s[i][k] - cf[i][k]).abs())
                .fold(0.0, nanmax);
            r.affine_closed = Some(d);
        }
    }
    Ok(r)
}

/// Asymptotic-coordinate patches with `X_uv` carrying `+p`.
fn affine_applies(f: &Family) -> bool {
    f.conjugated && expected_second_form(f)[1] > 0.0
}

struct Collector {
    records: Vec<CheckRecord>,
    excluded: usize,
    fail_all: bool,
}

impl Collector {
    fn push(&mut self, name: &str, max_residual: f64, tolerance: f64) {
        let pass = !self.fail_all && max_residual.is_finite() && max_residual <= tolerance;
        self.records.push(CheckRecord {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass,
            excluded_points: self.excluded,
        });
    }

    fn push_opt<I: IntoIterator<Item = Option<f64>>>(&mut self, name: &str, vals: I, tolerance: f64) {
        let mut any = false;
        let mut acc = 0.0;
        for x in vals.into_iter().flatten() {
            any = true;
            acc = nanmax(acc, x);
        }
        if any {
            self.push(name, acc, tolerance);
        }
    }
}

/// Runs every identity that applies to `f` (and `model`, when given) on the
/// configured grid.
///
/// Metric zeros and poles are excluded and listed; every check fails when
/// more than `tol.degenerate_fraction` of the grid had to be excluded.
pub fn run_invariant_suite(f: &Family, model: Option<&ConformalFactorModel>, cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let rule = CompositeRule::new(&cfg.quadrature)?;
    let points = cfg.grid.points();
    // Shaw recovery needs η ≠ 0 at its base point, which the quadrature base may violate
    let z0 = cfg.quadrature.base_point;
    let shaw_base = std::iter::once(z0)
        .chain(points.iter().copied())
        .find(|&z| f.metric_factor(z) > 1e-6)
        .ok_or_else(|| Error::Degenerate("no grid point with nonvanishing metric".into()))?;
    let evaluated: Vec<(Complex64, Result<PointResult>)> = points
        .par_iter()
        .map(|&z| (z, evaluate_point(f, model, cfg, &rule, shaw_base, z)))
        .collect();

    let mut good = Vec::with_capacity(evaluated.len());
    let mut excluded = Vec::new();
    for (z, r) in evaluated {
        match r {
            Ok(p) => good.push((z, p)),
            Err(e) if is_degeneracy(&e) => excluded.push([z.re, z.im]),
            Err(e) => return Err(e),
        }
    }
    let tol = &cfg.tol;
    let fraction = excluded.len() as f64 / points.len() as f64;
    let mut c = Collector {
        records: Vec::new(),
        excluded: excluded.len(),
        fail_all: fraction > tol.degenerate_fraction || good.is_empty(),
    };
    c.push("degenerate_fraction", fraction, tol.degenerate_fraction);

    let col = |g: fn(&PointResult) -> f64| good.iter().map(move |(_, p)| g(p)).fold(0.0, nanmax);
    c.push("mean_curvature", col(|p| p.h.abs()), tol.mean_curvature);
    c.push("mean_curvature_fd", col(|p| p.h_fd.abs()), tol.mean_curvature_fd);
    c.push("hopf_coefficient", col(|p| p.hopf), tol.hopf);
    c.push("hopf_from_jet", col(|p| p.hopf_jet), tol.hopf);
    let q0 = good.first().map(|(_, p)| p.q).unwrap_or_default();
    let qc = good.iter().map(|(_, p)| (p.q - q0).norm()).fold(0.0, nanmax);
    c.push("hopf_constancy", qc, tol.hopf_constancy);
    c.push("conformality", col(|p| p.conformal), tol.conformality);
    let fd_tol = tol.fd_jet.unwrap_or(cfg.fd_step * cfg.fd_step);
    c.push("fd_vs_analytic_jet", col(|p| p.fd_jet), fd_tol);
    c.push("conjugate_pair", col(|p| p.conj_pair), tol.conjugate_pair);

    // one global unit constant relates recovered and catalog η
    if let Some((_, p0)) = good.first() {
        let k = p0.shaw / p0.eta;
        let dev = good.iter().map(|(_, p)| (p.shaw - k * p.eta).norm()).fold((k.norm() - 1.0).abs(), nanmax);
        c.push("shaw_recovery", dev, tol.shaw);
    }

    c.push_opt("metric_vs_model", good.iter().map(|(_, p)| p.metric_model), tol.metric_model);
    c.push_opt("gauss_weingarten", good.iter().map(|(_, p)| p.gw), tol.gauss_weingarten);
    c.push_opt("ode_residuals", good.iter().map(|(_, p)| p.ode), tol.ode);
    c.push_opt("pde_residuals", good.iter().map(|(_, p)| p.pde), tol.pde);

    let axial: Vec<AxialResult> = good.iter().filter_map(|(_, p)| p.axial).collect();
    if let (Some(m), false) = (model, axial.is_empty()) {
        let b = m.b();
        let first_only = m.case == Case::Case1a;
        let n1 = axial.iter().map(|a| (a.w1.norm - b).abs()).fold(0.0, nanmax);
        let carriers = plane_carrier_checks(&axial);
        c.push("axial_norm_w1", n1, tol.axial);
        c.push("axial_constancy_w1", carriers.w1_constancy, tol.axial);
        if !first_only {
            let n2 = axial.iter().map(|a| (a.w2.norm - b).abs()).fold(0.0, nanmax);
            let cross = axial.iter().map(|a| a.cross.abs()).fold(0.0, nanmax);
            c.push("axial_norm_w2", n2, tol.axial);
            c.push("axial_constancy_w2", carriers.w2_constancy, tol.axial);
            c.push("axial_orthogonality", cross, tol.axial);
            c.push("carrier_orthogonality", carriers.m1_w1.max(carriers.m2_w2), tol.axial);
        }
    }

    c.push_opt("affine_determinants", good.iter().map(|(_, p)| p.affine_det), tol.affine_determinant);
    c.push_opt("affine_metric", good.iter().map(|(_, p)| p.affine_metric), tol.affine_determinant);
    c.push_opt("affine_mean_curvature", good.iter().map(|(_, p)| p.affine_mean), tol.affine_mean);
    c.push_opt("affine_mean_curvature_direct", good.iter().map(|(_, p)| p.affine_direct), tol.affine_mean);
    c.push_opt("affine_tangential", good.iter().map(|(_, p)| p.affine_tangential), tol.affine_tangential);
    c.push_opt("affine_shape_closed_form", good.iter().map(|(_, p)| p.affine_closed), tol.affine_mean);

    if !f.conjugated {
        let (u_res, v_res) = planarity(f, cfg, &rule)?;
        c.push("planarity_u_lines", u_res, tol.planarity);
        c.push("planarity_v_lines", v_res, tol.planarity);
    }

    c.push("path_independence", path_independence(f, cfg)?, tol.path_independence);

    let pass = c.records.iter().all(|r| r.pass);
    Ok(VerificationReport {
        family: f.name(),
        grid_points: points.len(),
        seed: cfg.seed,
        checks: c.records,
        excluded,
        pass,
    })
}

/// Worst plane-fit residual over the u-lines and over the v-lines.
fn planarity(f: &Family, cfg: &SuiteConfig, rule: &CompositeRule) -> Result<(f64, f64)> {
    let g = &cfg.grid;
    let z0 = cfg.quadrature.base_point;
    let n = cfg.lines_per_direction;
    let at = |lo: f64, hi: f64, k: usize| if n == 1 { 0.5 * (lo + hi) } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    let jobs: Vec<(LineDirection, f64)> = (0..n)
        .map(|k| (LineDirection::ULine, at(g.v_min, g.v_max, k)))
        .chain((0..n).map(|k| (LineDirection::VLine, at(g.u_min, g.u_max, k))))
        .collect();
    let fits: Vec<(LineDirection, Result<f64>)> = jobs
        .par_iter()
        .map(|&(dir, fixed)| {
            let range = match dir {
                LineDirection::ULine => (g.u_min, g.u_max),
                LineDirection::VLine => (g.v_min, g.v_max),
            };
            let pts = extract_coordinate_polyline(
                |u, v| integrate_with_rule(f, rule, z0, Complex64::new(u, v)),
                dir,
                fixed,
                range,
                cfg.line_samples,
            );
            (dir, pts.and_then(|p| plane_fit_residual(&p)).map(|fit| fit.residual))
        })
        .collect();
    let (mut ur, mut vr) = (0.0, 0.0);
    for (dir, r) in fits {
        let r = r?;
        match dir {
            LineDirection::ULine => ur = nanmax(ur, r),
            LineDirection::VLine => vr = nanmax(vr, r),
        }
    }
    Ok((ur, vr))
}

/// Straight segment versus a two-leg path to seeded random points of the grid.
fn path_independence(f: &Family, cfg: &SuiteConfig) -> Result<f64> {
    let g = &cfg.grid;
    let z0 = cfg.quadrature.base_point;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.path_samples {
        let z = Complex64::new(rng.random_range(g.u_min..=g.u_max), rng.random_range(g.v_min..=g.v_max));
        let corner = Complex64::new(z.re, z0.im);
        let a = integrate_polyline(f, &[z0, z], &cfg.quadrature);
        let b = integrate_polyline(f, &[z0, corner, z], &cfg.quadrature);
        match (a, b) {
            (Ok(a), Ok(b)) => worst = nanmax(worst, a.max_abs_diff(&b)),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(worst)
}
