mod common;

use common::{c, decaying, laplace, two_rate_survival};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruin_core::*;

fn example1(theta: f64) -> ModelSpec {
    ModelSpec::classical(1.5, 1.0, 1.0, theta).unwrap()
}

fn coef_at(sol: &ClassicalSolution, rate: f64) -> (f64, f64) {
    let t = sol.phi.coef_near(c(rate)).unwrap();
    (t.coef.re, t.rate.re)
}

#[test]
fn phi0_values() {
    assert!((solve_phi0(&example1(-0.5)).unwrap() - 0.3147).abs() < 5e-4);
    assert!((solve_phi0(&example1(0.0)).unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert!((solve_phi0(&example1(0.5)).unwrap() - 0.3548).abs() < 5e-4);
}

#[test]
fn printed_survival_functions() {
    let s0 = survival_classical(&example1(0.0)).unwrap();
    assert_eq!(s0.phi.terms().len(), 1);
    let (a, r) = coef_at(&s0, -0.3333);
    assert!((a + 0.6667).abs() < 1e-4 && (r + 0.3333).abs() < 1e-4);

    let sm = survival_classical(&example1(-0.5)).unwrap();
    let (a1, r1) = coef_at(&sm, -0.2976);
    let (a2, r2) = coef_at(&sm, -2.1148);
    assert!((a1 + 0.6958).abs() < 2e-3 && (r1 + 0.2976).abs() < 2e-4);
    assert!((a2 - 0.0105).abs() < 2e-3 && (r2 + 2.1148).abs() < 2e-4);

    let sp = survival_classical(&example1(0.5)).unwrap();
    let (a1, r1) = coef_at(&sp, -0.3788);
    let (a2, r2) = coef_at(&sp, -1.8736);
    assert!((a1 + 0.6311).abs() < 2e-3 && (r1 + 0.3788).abs() < 2e-4);
    assert!((a2 + 0.0140).abs() < 2e-3 && (r2 + 1.8736).abs() < 2e-4);
}

#[test]
fn residues_are_affine_in_phi0() {
    // φ(u) = 1 - (0.5747 + 0.3848 φ0) e^{-R1 u} + (0.0042 + 0.0200 φ0) e^{-R2 u}
    //          - (0.4295 - 1.3649 φ0) e^{-R3 u}
    let sol = survival_classical(&example1(-0.5)).unwrap();
    let res = sol
        .transform
        .residues(&poly_roots(&sol.transform.den).unwrap())
        .unwrap();
    let near = |z: f64| res.iter().find(|r| (r.pole - c(z)).norm() < 1e-3).unwrap();
    let expect = [
        (-0.2976, -0.5747, -0.3848),
        (-2.1148, 0.0042, 0.0200),
        (1.4123, -0.4295, 1.3649),
    ];
    for (pole, base, slope) in expect {
        let r = near(pole);
        assert!((r.base.re - base).abs() < 2e-3, "{pole}: {}", r.base);
        assert!((r.slope.re - slope).abs() < 2e-3, "{pole}: {}", r.slope);
    }
}

#[test]
fn decaying_rates_for_positive_theta() {
    let t = classical_lt(&example1(0.5)).unwrap();
    let d = decaying(&poly_roots(&t.den).unwrap().values());
    assert!((d[0] + 0.3788).abs() < 2e-4 && (d[1] + 1.8736).abs() < 2e-4);
}

/// Direct evaluation of the uncleared transform.
fn raw_transform(model: &ModelSpec, s: Complex64, phi0: f64) -> Complex64 {
    let (c, l) = (model.premium(), model.arrival().rate());
    let m1 = model.claim().mean();
    let f = f_tilde(s, model.claim()).unwrap();
    let h = h_tilde(s, model.claim()).unwrap();
    let num = c * c * s * phi0 - 2.0 * l * c + 2.0 * l * l * m1;
    let den = c * c * s * s - 3.0 * l * c * s
        + 2.0 * l * l * (1.0 - f)
        + l * c * s * (f + model.theta() * h);
    num / den
}

#[test]
fn cleared_transform_matches_raw_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for theta in [-0.5, 0.0, 0.5] {
        let m = example1(theta);
        let t = classical_lt(&m).unwrap();
        for _ in 0..20 {
            let s = Complex64::new(rng.random_range(0.1..4.0), rng.random_range(-3.0..3.0));
            let x = rng.random_range(0.0..1.0);
            let want = raw_transform(&m, s, x);
            assert!((t.eval(s, x) - want).norm() <= 1e-10 * want.norm().max(1.0));
        }
    }
}

#[test]
fn independent_cancellation_leaves_two_poles() {
    let sol = survival_classical(&example1(0.0)).unwrap();
    let f = sol
        .transform
        .at(sol.phi0)
        .unwrap()
        .cancel_common_roots(1e-7)
        .unwrap();
    let poles = poly_roots(f.den()).unwrap().values();
    assert_eq!(poles.len(), 2);
    assert!(poles.iter().any(|z| z.norm() < 1e-9));
    assert!(poles.iter().any(|z| (z - c(-1.0 / 3.0)).norm() < 1e-9));
}

#[test]
fn independence_closed_form() {
    let (c_, a, l) = (1.5, 1.0, 1.0);
    let sol = survival_classical(&example1(0.0)).unwrap();
    for k in 0..=200 {
        let u = 0.1 * k as f64;
        let want = 1.0 - (l / (c_ * a)) * (-(a - l / c_) * u).exp();
        assert!((sol.survival(u) - want).abs() < 1e-9);
    }
}

#[test]
fn matches_two_rate_oracle() {
    for theta in [-1.0, -0.5, 0.5, 1.0] {
        let sol = survival_classical(&example1(theta)).unwrap();
        let d = decaying(&sol.lundberg_roots.values());
        let (_, phi) = two_rate_survival(1.0, [-d[0], -d[1]]);
        for u in [0.0, 0.5, 2.0, 10.0] {
            assert!((sol.survival(u) - phi(u)).abs() < 1e-9, "θ={theta} u={u}");
        }
    }
}

#[test]
fn monotone_and_bounded() {
    for theta in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let sol = survival_classical(&example1(theta)).unwrap();
        let mut prev = sol.survival(0.0);
        for k in 0..=200 {
            let v = sol.survival(0.1 * k as f64);
            assert!((0.0..=1.0).contains(&v));
            assert!(v - prev >= -1e-10);
            prev = v;
        }
    }
}

#[test]
fn transform_consistency() {
    for theta in [-0.5, 0.5] {
        let sol = survival_classical(&example1(theta)).unwrap();
        for s in [0.5, 1.0, 2.0] {
            let numeric = laplace(|u| sol.survival(u), s);
            let exact = sol.transform.eval(c(s), sol.phi0).re;
            assert!(
                (numeric - exact).abs() < 1e-7,
                "θ={theta} s={s}: {numeric} vs {exact}"
            );
        }
    }
}

#[test]
fn agrees_with_simulation() {
    for (i, theta) in [-0.5, 0.5].into_iter().enumerate() {
        let m = example1(theta);
        let sol = survival_classical(&m).unwrap();
        for (j, u) in [0.0, 1.0, 5.0].into_iter().enumerate() {
            let est = estimate_survival(&m, u, 200_000, 1000 + 10 * i as u64 + j as u64, None)
                .unwrap()
                .estimate;
            let z = est.z_score(sol.survival(u));
            assert!(
                z <= 3.0,
                "θ={theta} u={u}: {} vs {} (z {z:.2})",
                est.value,
                sol.survival(u)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn bounded_for_any_dependence(theta in -1.0..=1.0f64, c_ in 1.2..3.0f64) {
        let m = ModelSpec::classical(c_, 1.0, 1.0, theta).unwrap();
        let sol = survival_classical(&m).unwrap();
        prop_assert!(sol.phi0 > 0.0 && sol.phi0 < 1.0);
        for u in [0.0, 1.0, 3.0, 10.0, 30.0] {
            let v = sol.survival(u);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
        }
    }
}
