use iso_zmc::catalog::{limit_convergence_rate, successive_ratios, ClosedFormSurface, LimitPath};
use iso_zmc::Complex64;

fn grid(u: (f64, f64), v: (f64, f64), n: usize) -> Vec<Complex64> {
    let t = |a: (f64, f64), k: usize| a.0 + (a.1 - a.0) * k as f64 / (n - 1) as f64;
    (0..n).flat_map(|i| (0..n).map(move |j| Complex64::new(t(u, i), t(v, j)))).collect()
}

fn in_quarter_band(rs: &[f64]) -> bool {
    rs.iter().all(|r| (0.2..=0.3).contains(r))
}

#[test]
fn bonnet_to_enneper_is_second_order() {
    let g = grid((0.5, 2.0), (-1.0, 1.0), 11);
    let rows = limit_convergence_rate(LimitPath::BonnetAlphaToZero { beta: 1.0 }, &g, &[0.2, 0.1, 0.05, 0.025]).unwrap();
    let h: Vec<_> = rows.iter().map(|r| r.h_deviation).collect();
    let e: Vec<_> = rows.iter().map(|r| r.eta_deviation).collect();
    assert!(in_quarter_band(&successive_ratios(&h)), "{h:?}");
    assert!(in_quarter_band(&successive_ratios(&e)), "{e:?}");
}

#[test]
fn bonnet_h_matches_laurent_oracle() {
    // coth w = 1/w + w/3 + O(w³), so h - 2/(βz) ≈ α² z / (6β)
    let (beta, alpha, z) = (1.0, 0.01, Complex64::new(1.0, 0.5));
    let f = iso_zmc::Family::bonnet_type(alpha, beta).unwrap();
    let e = iso_zmc::Family::enneper_type(beta).unwrap();
    let dev = f.h(z).unwrap() - e.h(z).unwrap();
    let want = alpha * alpha * z / (6.0 * beta);
    assert!((dev - want).norm() < 1e-3 * want.norm());
}

#[test]
fn tanh_path_reaches_trivial_enneper() {
    let g = grid((-1.0, 1.0), (-1.0, 1.0), 11);
    let rows = limit_convergence_rate(LimitPath::TanhAlphaToZero, &g, &[0.4, 0.2, 0.1, 0.05]).unwrap();
    let h: Vec<_> = rows.iter().map(|r| r.h_deviation).collect();
    let e: Vec<_> = rows.iter().map(|r| r.eta_deviation).collect();
    assert!(in_quarter_band(&successive_ratios(&h)), "{h:?}");
    assert!(in_quarter_band(&successive_ratios(&e)), "{e:?}");

    let one = [Complex64::new(1.0, 0.0)];
    let rows = limit_convergence_rate(LimitPath::TanhAlphaToZero, &one, &[0.1, 0.01, 0.001]).unwrap();
    assert!(rows.windows(2).all(|w| w[1].h_deviation < w[0].h_deviation));
    assert!(rows[2].h_deviation < 1e-6);
}

#[test]
fn x_alpha_tends_to_x0() {
    let g = grid((-1.0, 1.0), (-1.0, 1.0), 21);
    let x0 = ClosedFormSurface::TrivialEnneperX0;
    let dev = |alpha: f64| {
        let xa = ClosedFormSurface::DeformXAlpha { alpha };
        g.iter().map(|z| xa.eval(z.re, z.im).max_abs_diff(&x0.eval(z.re, z.im))).fold(0.0, f64::max)
    };
    let d: Vec<_> = [0.4, 0.2, 0.1, 0.05].into_iter().map(dev).collect();
    assert!(in_quarter_band(&successive_ratios(&d)), "{d:?}");
}

#[test]
fn polar_endpoints_converge_monotonically() {
    let g = grid((-1.0, 0.5), (-1.0, 1.0), 9);
    let ts = [0.2, 0.1, 0.05, 0.025, 0.0125];
    for path in [LimitPath::PolarThetaToZero { r: 1.0 }, LimitPath::PolarThetaToHalfPi { r: 1.0 }] {
        let rows = limit_convergence_rate(path, &g, &ts).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].h_deviation < w[0].h_deviation, "{path:?}: {rows:?}");
            assert!(w[1].eta_deviation < w[0].eta_deviation, "{path:?}: {rows:?}");
        }
        // first order in the parameter at both ends
        let h: Vec<_> = rows.iter().map(|r| r.h_deviation).collect();
        let last = *successive_ratios(&h).last().unwrap();
        assert!((0.45..=0.55).contains(&last), "{path:?}: {rows:?}");
    }
    let e = [Complex64::new(1.0, 0.0)];
    let rows = limit_convergence_rate(LimitPath::PolarThetaToZero { r: 1.0 }, &e, &[1e-2, 1e-4, 1e-6]).unwrap();
    assert!(rows[2].h_deviation < 1e-4 * std::f64::consts::E, "{rows:?}");
}
