use std::f64::consts::{FRAC_PI_4, PI};

use iso_zmc::catalog::{ClosedFormSurface, ConformalFactorModel, InitialCondition};
use iso_zmc::diffgeo::{
    affine_determinants, affine_shape, analytic_jet, axial_directions, extract_coordinate_polyline, plane_carrier_checks,
    plane_fit_residual, run_invariant_suite, AxialResult, GridSpec, LineDirection, SuiteConfig,
};
use iso_zmc::isotropic::{parabolic_action, parabolic_rotation_e1, parabolic_rotation_e2};
use iso_zmc::quadrature::CompositeRule;
use iso_zmc::weierstrass::integrate_surface;
use iso_zmc::{Complex64, Error, Family, IsoPoint3, QuadratureConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn double_rotation_generates_x0() {
    let o = IsoPoint3::new(0.0, 0.0, 0.0);
    let x0 = ClosedFormSurface::TrivialEnneperX0;
    let mut worst = 0.0_f64;
    for i in 0..21 {
        for j in 0..21 {
            let (u, v) = (-2.0 + 0.2 * i as f64, -2.0 + 0.2 * j as f64);
            let inner = parabolic_action(&parabolic_rotation_e1(v), -1.0, &o).unwrap();
            let p = parabolic_action(&parabolic_rotation_e2(u), 1.0, &inner).unwrap();
            worst = worst.max(p.max_abs_diff(&x0.eval(u, v)));
        }
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn single_rotation_orbits() {
    let o = IsoPoint3::new(0.0, 0.0, 0.0);
    for r in [-2.0, 0.5, 3.0] {
        for v in [-1.0, 0.5, 2.0] {
            let p = parabolic_action(&parabolic_rotation_e1(v), r, &o).unwrap();
            assert!(p.max_abs_diff(&IsoPoint3::new(-0.5 * r * v * v, 0.0, r * v)) <= 1e-12);
        }
    }
    let q = IsoPoint3::new(1.0, 2.0, 3.0);
    // at v = 0 the printed matrix is diag(1, 1, -1, 1)
    let flipped = parabolic_action(&parabolic_rotation_e1(0.0), 0.0, &q).unwrap();
    assert_eq!(flipped, IsoPoint3::new(1.0, 2.0, -3.0));
}

fn line_residuals(f: &Family, grid: &GridSpec, lines: usize) -> f64 {
    let cfg = QuadratureConfig::default().with_base_point(grid.center());
    let sampler = |u: f64, v: f64| integrate_surface(f, c(u, v), &cfg);
    let mut worst = 0.0_f64;
    for k in 0..lines {
        let t = k as f64 / (lines - 1) as f64;
        let (fu, fv) = (grid.u_min + t * (grid.u_max - grid.u_min), grid.v_min + t * (grid.v_max - grid.v_min));
        for (dir, fixed, range) in [
            (LineDirection::ULine, fv, (grid.u_min, grid.u_max)),
            (LineDirection::VLine, fu, (grid.v_min, grid.v_max)),
        ] {
            let pts = extract_coordinate_polyline(sampler, dir, fixed, range, 64).unwrap();
            worst = worst.max(plane_fit_residual(&pts).unwrap().residual);
        }
    }
    worst
}

#[test]
fn curvature_lines_are_planar() {
    for f in [
        Family::trivial_enneper(0.0).unwrap(),
        Family::catenoid(1.0).unwrap(),
        Family::enneper_type(2.0).unwrap(),
        Family::bonnet_type(1.0, 1.0).unwrap(),
        Family::deform_tanh(1.0).unwrap(),
        Family::deform_polar(1.0, FRAC_PI_4).unwrap(),
    ] {
        let g = GridSpec::default_for_family(&f, 21);
        let r = line_residuals(&f, &g, 21);
        assert!(r <= 1e-8, "{}: {r:e}", f.name());
    }
}

#[test]
fn helix_is_not_planar() {
    let hel = Family::catenoid(1.0).unwrap().conjugate();
    let cfg = QuadratureConfig::default();
    let pts = extract_coordinate_polyline(|u, v| integrate_surface(&hel, c(u, v), &cfg), LineDirection::VLine, 0.0, (0.0, 2.0 * PI), 64)
        .unwrap();
    assert!(plane_fit_residual(&pts).unwrap().residual >= 1e-2);
}

#[test]
fn special_curvature_lines() {
    let x0 = ClosedFormSurface::TrivialEnneperX0;
    let par = extract_coordinate_polyline(|u, v| Ok(x0.eval(u, v)), LineDirection::ULine, 1.0, (-2.0, 2.0), 16).unwrap();
    // l = -(x² - 1)/2 on the plane y = -1
    for p in &par {
        assert_eq!(p.y, -1.0);
        assert!((p.l + 0.5 * (p.x * p.x - 1.0)).abs() < 1e-15);
    }
    assert!(plane_fit_residual(&par).unwrap().residual < 1e-14);

    let cat = Family::catenoid(1.0).unwrap().with_display(true);
    let cfg = QuadratureConfig::default();
    let circle =
        extract_coordinate_polyline(|u, v| integrate_surface(&cat, c(u, v), &cfg), LineDirection::VLine, 0.0, (0.0, 6.0), 32).unwrap();
    assert!(circle.iter().all(|p| p.l.abs() < 1e-13));
}

#[test]
fn rank_deficient_fit_is_flagged() {
    let pts: Vec<_> = (0..5).map(|k| IsoPoint3::new(k as f64, 2.0 * k as f64, 0.0)).collect();
    let fit = plane_fit_residual(&pts).unwrap();
    assert!(fit.rank_deficient && fit.residual == 0.0);
    assert!(plane_fit_residual(&pts[..3]).is_err());
}

fn axial_grid(model: &ConformalFactorModel, f: &Family, g: &GridSpec) -> Vec<AxialResult> {
    let cfg = QuadratureConfig::default().with_base_point(g.center());
    let rule = CompositeRule::new(&cfg).unwrap();
    g.points()
        .into_iter()
        .filter_map(|z| match axial_directions(model, f, z, &rule, cfg.base_point) {
            Ok(a) => Some(a),
            Err(Error::DegenerateMetric { .. } | Error::Pole { .. }) => None,
            Err(e) => panic!("{e}"),
        })
        .collect()
}

#[test]
fn axial_directions_case_1b_and_1c() {
    let cases = [
        (ConformalFactorModel::new(1.0, 1.0, InitialCondition::ZeroAtOrigin).unwrap(), Family::bonnet_type(1.0, 1.0).unwrap(), 1.0),
        (ConformalFactorModel::new(0.0, 2.0, InitialCondition::ZeroAtOrigin).unwrap(), Family::enneper_type(2.0).unwrap(), 4.0),
    ];
    for (m, f, b) in cases {
        let g = GridSpec::default_for_family(&f, 21);
        let res = axial_grid(&m, &f, &g);
        assert!(res.len() >= 400);
        let cr = plane_carrier_checks(&res);
        assert!(cr.w1_constancy <= 1e-7 && cr.w2_constancy <= 1e-7, "{cr:?}");
        assert!(cr.m1_w1 <= 1e-7 && cr.m2_w2 <= 1e-7, "{cr:?}");
        for a in &res {
            assert!((a.w1.norm - b).abs() <= 1e-8 && (a.w2.norm - b).abs() <= 1e-8);
            assert!(a.cross.abs() <= 1e-8);
        }
    }
}

#[test]
fn axial_example_point_and_case_1a() {
    let m = ConformalFactorModel::new(1.0, 1.0, InitialCondition::ZeroAtOrigin).unwrap();
    let f = Family::bonnet_type(1.0, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    let rule = CompositeRule::new(&cfg).unwrap();
    let a = axial_directions(&m, &f, c(1.0, 0.7), &rule, c(1.0, 1.0)).unwrap();
    assert!((a.w1.norm - 1.0).abs() < 1e-8 && a.cross.abs() < 1e-8);

    let m1a = ConformalFactorModel::new(1.0, 0.0, InitialCondition::ZeroAtOrigin).unwrap();
    let cat = Family::catenoid(1.0).unwrap();
    let err = axial_directions(&m1a, &cat, c(0.3, 0.2), &rule, c(0.0, 0.0)).unwrap_err();
    assert_eq!(err, Error::IdenticallyZero("g"));
}

#[test]
fn perturbed_surface_loses_constant_axis() {
    // w₁ from jets of X + 0.01 (u³, 0, 0) drifts across the grid
    let m = ConformalFactorModel::new(1.0, 1.0, InitialCondition::ZeroAtOrigin).unwrap();
    let f = Family::bonnet_type(1.0, 1.0).unwrap();
    let g = GridSpec::default_for_family(&f, 11);
    let cfg = QuadratureConfig::default().with_base_point(g.center());
    let res: Vec<_> = g
        .points()
        .into_iter()
        .map(|z| {
            let mut j = analytic_jet(&f, z, &cfg).unwrap();
            let u = z.re;
            j.xu.l += 0.03 * u * u;
            j.xuu.l += 0.06 * u;
            let o = m.omega_jet(z.re, z.im).unwrap();
            let e = m.exp_omega(z.re, z.im).unwrap();
            let w1 = iso_zmc::diffgeo::axial_from_jet(&j, &o, e, iso_zmc::diffgeo::Axis::First);
            let w2 = iso_zmc::diffgeo::axial_from_jet(&j, &o, e, iso_zmc::diffgeo::Axis::Second);
            AxialResult { w1, w2, cross: w1.w.dot(&w2.w) }
        })
        .collect();
    assert!(plane_carrier_checks(&res).w1_constancy > 1e-3);
}

#[test]
fn conjugated_families_are_affine_minimal() {
    for f in [
        Family::catenoid(1.0).unwrap(),
        Family::trivial_enneper(0.0).unwrap(),
        Family::enneper_type(2.0).unwrap(),
        Family::bonnet_type(1.0, 1.0).unwrap(),
    ] {
        let g = f.conjugate();
        let grid = GridSpec::default_for_family(&g, 9);
        let cfg = QuadratureConfig::default().with_base_point(grid.center());
        for z in grid.points() {
            let j = analytic_jet(&g, z, &cfg).unwrap();
            let [l, m, n] = affine_determinants(&j);
            let e = g.metric_factor(z);
            assert!(l.abs() <= 1e-8 && n.abs() <= 1e-8, "{}", g.name());
            assert!((m.sqrt() - e).abs() <= 1e-8);
            let s = affine_shape(&g, z, 1e-2).unwrap();
            assert!(s.mean.abs() <= 1e-4 && s.mean_direct.abs() <= 1e-4, "{} at {z}: {s:?}", g.name());
            assert!(s.tangential_residual <= 1e-5);
        }
    }
}

#[test]
fn catenoid_fails_affine_identity() {
    let cat = Family::catenoid(1.0).unwrap();
    let grid = GridSpec::default_for_family(&cat, 9);
    let cfg = QuadratureConfig::default();
    let worst = grid
        .points()
        .into_iter()
        .map(|z| affine_determinants(&analytic_jet(&cat, z, &cfg).unwrap())[0].abs())
        .fold(0.0, f64::max);
    assert!(worst > 0.1);
}

fn families() -> Vec<(Family, Option<ConformalFactorModel>)> {
    [
        Family::plane(),
        Family::trivial_enneper(0.0).unwrap(),
        Family::catenoid(1.0).unwrap(),
        Family::enneper_type(2.0).unwrap(),
        Family::bonnet_type(1.0, 1.0).unwrap(),
        Family::deform_tanh(1.0).unwrap(),
        Family::deform_polar(1.0, FRAC_PI_4).unwrap(),
    ]
    .into_iter()
    .flat_map(|f| [f, f.conjugate()])
    .map(|f| (f, ConformalFactorModel::for_family(&f)))
    .collect()
}

#[test]
fn invariant_suite_passes_for_every_family() {
    for (f, m) in families() {
        let cfg = SuiteConfig::for_family(&f, 17);
        let r = run_invariant_suite(&f, m.as_ref(), &cfg).unwrap();
        assert!(r.pass, "{}: {:?}", f.name(), r.failures());
        if f.kind != iso_zmc::FamilyKind::Plane {
            assert!(r.check("mean_curvature").is_some());
        }
    }
}

#[test]
fn bonnet_suite_reports_metric_zero() {
    let f = Family::bonnet_type(1.0, 1.0).unwrap();
    let m = ConformalFactorModel::for_family(&f).unwrap();
    let cfg = SuiteConfig::on_grid(GridSpec::new((-1.0, 1.0), (-1.0, 1.0), 11, 11).unwrap());
    let r = run_invariant_suite(&f, Some(&m), &cfg).unwrap();
    assert_eq!(r.excluded, vec![[0.0, 0.0]]);
}

#[test]
fn mismatched_model_is_flagged() {
    let f = Family::bonnet_type(1.0, 1.0).unwrap();
    let wrong = ConformalFactorModel::new(1.0, 2.0, InitialCondition::ZeroAtOrigin).unwrap();
    let r = run_invariant_suite(&f, Some(&wrong), &SuiteConfig::for_family(&f, 11)).unwrap();
    assert!(!r.pass);
    assert!(r.failures().contains(&"metric_vs_model"));
}

#[test]
fn impossible_tolerance_fails_fd_check() {
    let f = Family::catenoid(1.0).unwrap();
    let mut cfg = SuiteConfig::for_family(&f, 9);
    cfg.tol.mean_curvature_fd = 1e-15;
    cfg.tol.fd_jet = Some(1e-15);
    let r = run_invariant_suite(&f, ConformalFactorModel::for_family(&f).as_ref(), &cfg).unwrap();
    assert!(!r.pass);
    let fails = r.failures();
    assert!(fails.contains(&"fd_vs_analytic_jet"), "{fails:?}");
}
