mod common;

use common::{c, decaying, laplace, two_rate_survival};
use num_complex::Complex64;
use ruin_core::*;

fn example2(theta: f64) -> ModelSpec {
    ModelSpec::erlang2(1.5, 1.0, 2.0, theta).unwrap()
}

fn collective(theta: f64) -> ErlangSolution {
    survival_erlang2_with(
        &example2(theta),
        SignVariant::Minus,
        EliminationRule::Collective,
    )
    .unwrap()
}

#[test]
fn collective_delta0_values() {
    for (theta, want) in [(-1.0, 0.3713), (-0.5, 0.3963), (0.5, 0.4579), (1.0, 0.4957)] {
        let (d, _) = solve_delta0(
            &example2(theta),
            SignVariant::Minus,
            EliminationRule::Collective,
        )
        .unwrap();
        assert!((d - want).abs() < 1e-3, "θ={theta}: {d}");
    }
}

#[test]
fn collective_single_root_estimates_disagree() {
    let (_, spread) = solve_delta0(
        &example2(-1.0),
        SignVariant::Minus,
        EliminationRule::Collective,
    )
    .unwrap();
    assert!(spread > 1e-2);
}

#[test]
fn lundberg_roots_negative_dependence() {
    let roots = erlang_lt(&example2(-1.0), SignVariant::Minus).unwrap().den;
    let found = poly_roots(&roots).unwrap();
    let want = [
        c(0.0),
        c(-0.3488),
        c(-2.1517),
        c(3.6476),
        c(1.8011),
        Complex64::new(2.3592, 1.1277),
        Complex64::new(2.3592, -1.1277),
    ];
    assert_eq!(found.total_multiplicity(), 7);
    for z in want {
        let got = found.nearest(z).unwrap().value;
        assert!((got - z).norm() < 2e-3, "{z} vs {got}");
    }
}

#[test]
fn root_structure_at_all_dependence_levels() {
    for theta in [-1.0, -0.5, 0.5, 1.0] {
        let r = poly_roots(&erlang_lt(&example2(theta), SignVariant::Minus).unwrap().den).unwrap();
        assert_eq!(r.count(RootClass::Zero), 1);
        assert_eq!(r.count(RootClass::Growing) + r.count(RootClass::Zero), 5);
        assert_eq!(r.count(RootClass::Decaying), 2);
    }
}

#[test]
fn printed_residue_expressions() {
    // δ(u) = 1 - (0.5637 + 0.2211 δ0) e^{-0.3488u} + (0.0090 + 0.0219 δ0) e^{-2.1517u}
    //          + (-0.0481 + 0.1975 δ0) e^{3.6476u} + (-0.1372 + 0.2779 δ0) e^{1.8011u}
    //          + ((-0.1300 ∓ 0.0133i) + (0.3620 ∓ 0.1295i) δ0) e^{(2.3592 ∓ 1.1277i)u}
    let t = erlang_lt(&example2(-1.0), SignVariant::Minus).unwrap();
    let res = t.residues(&poly_roots(&t.den).unwrap()).unwrap();
    let expect = [
        (c(-0.3488), c(-0.5637), c(-0.2211)),
        (c(-2.1517), c(0.0090), c(0.0219)),
        (c(3.6476), c(-0.0481), c(0.1975)),
        (c(1.8011), c(-0.1372), c(0.2779)),
        (
            Complex64::new(2.3592, -1.1277),
            Complex64::new(-0.1300, -0.0133),
            Complex64::new(0.3620, -0.1295),
        ),
    ];
    for (pole, base, slope) in expect {
        let r = res.iter().find(|r| (r.pole - pole).norm() < 1e-3).unwrap();
        assert!((r.base - base).norm() < 2e-3, "{pole}: {}", r.base);
        assert!((r.slope - slope).norm() < 2e-3, "{pole}: {}", r.slope);
    }
}

#[test]
fn collective_printed_survival_functions() {
    let cases = [
        (-1.0, [(-0.6458, -0.3488), (0.0171, -2.1517)]),
        (-0.5, [(-0.6134, -0.3833), (0.0098, -2.0792)]),
        (0.5, [(-0.5289, -0.4762), (-0.0132, -1.9119)]),
        (1.0, [(-0.4723, -0.5410), (-0.0320, -1.8116)]),
    ];
    for (theta, terms) in cases {
        let sol = collective(theta);
        assert!((sol.delta.constant() - 1.0).abs() < 1e-9);
        assert_eq!(sol.delta.terms().len(), 2);
        for (coef, rate) in terms {
            let t = sol.delta.coef_near(c(rate)).unwrap();
            assert!(
                (t.coef.re - coef).abs() < 2e-3,
                "θ={theta}: {} vs {coef}",
                t.coef
            );
            assert!((t.rate.re - rate).abs() < 2e-3);
        }
    }
}

#[test]
fn independent_case_matches_adjustment_coefficient() {
    // ψ(u) = (1 - R/α) e^{-Ru}, R > 0 solving α/(α-R) · (β/(β+cR))² = 1
    let (a, b, c_) = (1.0, 2.0, 1.5);
    let g = |r: f64| a / (a - r) * (b / (b + c_ * r)).powi(2) - 1.0;
    let (mut lo, mut hi) = (1e-6, a - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let sol = survival_erlang2(&example2(0.0)).unwrap();
    for u in [0.0, 0.5, 3.0, 12.0] {
        let want = 1.0 - (1.0 - r / a) * (-r * u).exp();
        assert!((sol.survival(u) - want).abs() < 1e-9, "u={u}");
    }
    // θ-terms vanish: both sign variants give the same denominator
    assert_eq!(
        erlang_lt(&example2(0.0), SignVariant::Minus).unwrap(),
        erlang_lt(&example2(0.0), SignVariant::Plus).unwrap()
    );
}

#[test]
fn exact_rule_matches_two_rate_oracle() {
    for theta in [-1.0, -0.5, 0.5, 1.0] {
        let sol = survival_erlang2(&example2(theta)).unwrap();
        assert!(sol.consistency_residual < 1e-5);
        let d = decaying(&sol.lundberg_roots.values());
        let (_, delta) = two_rate_survival(1.0, [-d[0], -d[1]]);
        for u in [0.0, 1.0, 5.0, 20.0] {
            assert!((sol.survival(u) - delta(u)).abs() < 1e-9, "θ={theta} u={u}");
        }
    }
}

#[test]
fn monotone_and_bounded() {
    for theta in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let sol = survival_erlang2(&example2(theta)).unwrap();
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
    for theta in [-1.0, 1.0] {
        let sol = survival_erlang2(&example2(theta)).unwrap();
        for s in [0.5, 1.0, 2.0] {
            let numeric = laplace(|u| sol.survival(u), s);
            let exact = sol.transform.eval_real(s);
            assert!((numeric - exact).abs() < 1e-7, "θ={theta} s={s}");
        }
    }
}

#[test]
fn final_value() {
    for theta in [-1.0, 0.5] {
        for rule in [EliminationRule::Exact, EliminationRule::Collective] {
            let sol = survival_erlang2_with(&example2(theta), SignVariant::Minus, rule).unwrap();
            let v = |s: f64| s * sol.transform.eval_real(s);
            // linear extrapolation to s = 0 from s = 1e-4 and 1e-5
            let extrapolated = v(1e-5) - (v(1e-4) - v(1e-5)) / 9.0;
            assert!((extrapolated - 1.0).abs() < 1e-3, "{rule}: {extrapolated}");
        }
    }
}

#[test]
fn agrees_with_simulation() {
    for (i, theta) in [-1.0, 1.0].into_iter().enumerate() {
        let m = example2(theta);
        let sol = survival_erlang2(&m).unwrap();
        for (j, u) in [0.0, 1.0, 5.0].into_iter().enumerate() {
            let est = estimate_survival(&m, u, 200_000, 2000 + 10 * i as u64 + j as u64, None)
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

#[test]
fn plus_variant_is_rejected_by_simulation() {
    let m = example2(0.5);
    let report = compare_sign_variants(&m, 100_000, 77).unwrap();
    assert_eq!(report.selected, Some(SignVariant::Minus));
    let plus = report.outcome(SignVariant::Plus).unwrap();
    assert!(!plus.consistent);
    assert!(plus.exact_delta0.unwrap() > report.ci_high);
}

#[test]
fn selection_short_circuits_without_dependence() {
    let report = compare_sign_variants(&example2(0.0), 10, 1).unwrap();
    assert_eq!(report.mc.n, 0);
    assert_eq!(report.selected, Some(SignVariant::Minus));
}
