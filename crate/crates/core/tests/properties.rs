use std::f64::consts::PI;

use iso_zmc::catalog::{ConformalFactorModel, InitialCondition, Jet1, OmegaJet, pde_residuals_from_jet};
use iso_zmc::diffgeo::jet::gauss_map_from_tangents;
use iso_zmc::diffgeo::{analytic_jet, fd_jet, fundamental_forms, hopf_from_jet, mean_curvature, plane_fit_residual};
use iso_zmc::isotropic::{minkowski_form, parabolic_action, parabolic_rotation_e1, parabolic_rotation_e2, P};
use iso_zmc::weierstrass::gauss_map_from_h;
use iso_zmc::{Complex64, Family, IsoPoint3, QuadratureConfig, Vec4};
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(Vec4)
}

fn iso_point() -> impl Strategy<Value = IsoPoint3> {
    prop::array::uniform3(-10.0..10.0f64).prop_map(IsoPoint3::from_array)
}

/// A catalog family with parameters drawn from moderate ranges, plus a point
/// inside its regular region.
fn family_and_point() -> impl Strategy<Value = (Family, Complex64)> {
    let pick = (0usize..7, 0.3..2.0f64, 0.3..2.0f64, 0.1..1.4f64, -1.0..1.0f64, -1.0..1.0f64, any::<bool>());
    pick.prop_map(|(k, a, b, th, s, t, conj)| {
        let (f, z) = match k {
            0 => (Family::plane(), Complex64::new(s, t)),
            1 => (Family::trivial_enneper(s).unwrap(), Complex64::new(s, t)),
            2 => (Family::catenoid(a).unwrap(), Complex64::new(s, 3.0 * t)),
            3 => (Family::enneper_type(b).unwrap(), Complex64::new(1.25 + 0.75 * s, t)),
            4 => (Family::bonnet_type(a, b).unwrap(), Complex64::new((1.1 + 0.9 * s) / a, (PI + 2.8 * t) / a)),
            5 => (Family::deform_tanh(a).unwrap(), Complex64::new(s / a.max(1.0), t / a.max(1.0))),
            _ => (Family::deform_polar(a, th).unwrap(), Complex64::new(-0.5 + 0.4 * s, t)),
        };
        (if conj { f.conjugate() } else { f }, z)
    })
}

fn model() -> impl Strategy<Value = ConformalFactorModel> {
    (0usize..4, 0.2..2.5f64, 0.2..2.5f64, any::<bool>(), -2.0..2.0f64).prop_map(|(k, a, b, one, c)| {
        let ic = if one { InitialCondition::OneAtOrigin } else { InitialCondition::ZeroAtOrigin };
        match k {
            0 => ConformalFactorModel::new(a, 0.0, ic).unwrap(),
            1 => ConformalFactorModel::new(0.0, b, ic).unwrap(),
            2 => ConformalFactorModel::new(a, b, ic).unwrap(),
            _ => ConformalFactorModel::constant(c).unwrap(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parabolic_rotations_preserve_the_form(u in -5.0..5.0f64, v in -5.0..5.0f64, x in vec4(), y in vec4()) {
        for a in [parabolic_rotation_e1(v), parabolic_rotation_e2(u), parabolic_rotation_e1(v).compose(&parabolic_rotation_e2(u))] {
            let before = minkowski_form(&x, &y);
            let after = minkowski_form(&a.apply(&x), &a.apply(&y));
            prop_assert!((after - before).abs() <= 1e-12 * (1.0 + before.abs()).max(1.0) * (1.0 + u * u + v * v).powi(2));
            prop_assert!(a.apply(&P).max_abs_diff(&P) <= 1e-12);
        }
    }

    #[test]
    fn parabolic_action_stays_isotropic(v in -3.0..3.0f64, r in -3.0..3.0f64, x in iso_point()) {
        let y = parabolic_action(&parabolic_rotation_e1(v), r, &x).unwrap();
        prop_assert!(minkowski_form(&y.embed(), &P).abs() <= 1e-12);
    }

    #[test]
    fn parabolic_orbit_lies_on_vertical_parabola(v in -4.0..4.0f64, r in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64]) {
        let o = IsoPoint3::new(0.0, 0.0, 0.0);
        let y = parabolic_action(&parabolic_rotation_e1(v), r, &o).unwrap();
        prop_assert_eq!(y.x, 0.0);
        prop_assert!((y.l + y.y * y.y / (2.0 * r)).abs() <= 1e-12 * (1.0 + y.l.abs()));
    }

    #[test]
    fn gauss_map_is_lightlike(re in -7.0..7.0f64, im in -7.0..7.0f64) {
        let n = gauss_map_from_h(Complex64::new(re, im));
        let scale = 1.0 + re * re + im * im;
        prop_assert!(n.dot(&n).abs() <= 1e-12 * scale * scale);
        prop_assert!((n.dot(&P) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ode_and_pde_hold_for_every_model(m in model(), u in -2.0..2.0f64, v in -3.0..3.0f64) {
        let scale = 1.0 + m.f_jet(u).val.powi(2) + m.g_jet(v).val.powi(2) + m.a() + m.b();
        for r in m.ode_residuals(u, v) {
            prop_assert!(r.abs() <= 1e-12 * scale * scale);
        }
        if let Ok((p1, p2)) = m.pde_residuals(u, v) {
            let e = m.exp_omega(u, v).unwrap();
            let k = 1.0 + 1.0 / (e * e);
            prop_assert!(p1.abs() <= 1e-10 * k && p2.abs() <= 1e-10 * k, "{p1:e} {p2:e}");
        }
    }

    #[test]
    fn exp_omega_is_positive_and_matches_quotient(m in model(), u in -2.0..2.0f64, v in -3.0..3.0f64) {
        let e = m.closed_form_exp_omega(u, v);
        prop_assert!(e >= 0.0);
        if let Some(q) = m.signed_quotient(u, v) {
            prop_assert!((q.abs() - e).abs() <= 1e-10 * (1.0 + e));
        }
    }

    #[test]
    fn scaling_f_breaks_the_first_order_ode(a in 0.2..2.0f64, b in 0.2..2.0f64, u in -1.0..1.0f64, v in -1.0..1.0f64, k in 0.5..1.5f64) {
        let m = ConformalFactorModel::new(a, b, InitialCondition::ZeroAtOrigin).unwrap();
        let f: Jet1 = m.f_jet(u).scaled(k);
        let g = m.g_jet(v);
        let r = iso_zmc::catalog::ode_residuals_of(&f, &g, m.a(), m.b());
        prop_assert!(r[0].abs() <= 1e-10 * (1.0 + f.val.abs()));
        prop_assert!((r[1] - (k * k - 1.0) * m.b()).abs() <= 1e-10 * (1.0 + f.d1 * f.d1));
    }

    #[test]
    fn jets_are_conformal_and_minimal((f, z) in family_and_point()) {
        let j = analytic_jet(&f, z, &QuadratureConfig::default()).unwrap();
        let ff = fundamental_forms(&j).unwrap();
        prop_assert!(ff.conformality_defect() <= 1e-10);
        prop_assert!((ff.e.sqrt() - f.metric_factor(z)).abs() <= 1e-10 * (1.0 + f.metric_factor(z)));
        let n = f.h(z).unwrap().norm_sqr();
        prop_assert!(mean_curvature(&j).unwrap().abs() <= 1e-10 * (1.0 + n));
        let q = hopf_from_jet(&j).unwrap();
        prop_assert!((q - f.expected_hopf()).norm() <= 1e-9 * (1.0 + n));
        prop_assert!((f.hopf_coefficient(z).unwrap() - f.expected_hopf()).norm() <= 1e-12 * (1.0 + n));
    }

    #[test]
    fn conjugation_keeps_metric_and_rotates_hopf((f, z) in family_and_point()) {
        let g = f.conjugate();
        prop_assert_eq!(f.metric_factor(z), g.metric_factor(z));
        let (qf, qg) = (f.hopf_coefficient(z).unwrap(), g.hopf_coefficient(z).unwrap());
        prop_assert!((qg - Complex64::i() * qf).norm() <= 1e-12 * (1.0 + qf.norm()));
        prop_assert_eq!(g.conjugate().metric_factor(z), f.metric_factor(z));
    }

    #[test]
    fn h_prime_matches_central_difference((f, z) in family_and_point()) {
        let eps = 1e-6;
        let d = (f.h(z + eps).unwrap() - f.h(z - eps).unwrap()) / (2.0 * eps);
        let hp = f.h_prime(z).unwrap();
        prop_assert!((d - hp).norm() <= 1e-7 * (1.0 + hp.norm()), "{d} vs {hp}");
    }

    #[test]
    fn fd_gauss_map_matches_analytic((f, z) in family_and_point()) {
        let cfg = QuadratureConfig::default().with_base_point(z);
        let an = analytic_jet(&f, z, &cfg).unwrap();
        let fd = fd_jet(|u, v| iso_zmc::weierstrass::integrate_surface(&f, Complex64::new(u, v), &cfg), z.re, z.im, 1e-3).unwrap();
        let n = 1.0 + an.n.0.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        prop_assert!(fd.n.max_abs_diff(&an.n) <= 1e-6 * n * n);
        let direct = gauss_map_from_tangents(&an.xu, &an.xv).unwrap();
        prop_assert!(direct.max_abs_diff(&an.n) <= 1e-9 * n);
    }

    #[test]
    fn plane_fit_is_similarity_invariant(k in 0.1..10.0f64, shift in iso_point(), seed in 0u64..1000) {
        let pts: Vec<_> = (0..16)
            .map(|i| {
                let t = i as f64 + seed as f64 * 0.01;
                IsoPoint3::new(t.sin(), t.cos(), (2.0 * t).sin())
            })
            .collect();
        let moved: Vec<_> = pts.iter().map(|p| k * *p + shift).collect();
        let a = plane_fit_residual(&pts).unwrap().residual;
        let b = plane_fit_residual(&moved).unwrap().residual;
        prop_assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn control_omega_uv_has_planarity_residual() {
    // ω = uv at (1, 1): ω_u = v, ω_v = u, ω_uv = 1
    let o = OmegaJet {
        w_u: 1.0,
        w_v: 1.0,
        w_uu: 0.0,
        w_uv: 1.0,
        w_vv: 0.0,
    };
    assert_eq!(pde_residuals_from_jet(&o), (0.0, 2.0));
}
