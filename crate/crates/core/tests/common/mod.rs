//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 20-point Gauss–Legendre rule on [a, b] with `panels` panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            rule.iter()
                .map(|&(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// Two-dimensional tensor version of [`integrate`].
pub fn integrate2(f: impl Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64), panels: usize) -> f64 {
    integrate(
        |a| integrate(|b| f(a, b), y.0, y.1, panels),
        x.0,
        x.1,
        panels,
    )
}

/// `∫₀^∞ e^{-su} f(u) du`, truncated where the exponential factor is negligible.
pub fn laplace(f: impl Fn(f64) -> f64, s: f64) -> f64 {
    let upper = 60.0 / s.min(1.0);
    integrate(|u| (-s * u).exp() * f(u), 0.0, upper, 400)
}

/// Kolmogorov–Smirnov statistic of `sample` against `cdf`.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic Kolmogorov p-value of statistic `d` for sample size `n`.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let t = (sn + 0.12 + 0.11 / sn) * d;
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        sum += 2.0 * (-1.0_f64).powf(k - 1.0) * (-2.0 * k * k * t * t).exp();
    }
    sum.clamp(0.0, 1.0)
}

/// Survival probability from the two decaying Lundberg rates alone:
/// `1 - Σ Aⱼ e^{-Rⱼ u}`, with `A` fixed by requiring the ruin probability
/// to integrate correctly against both claim exponentials, i.e.
/// `Σ Aⱼ α/(α - Rⱼ) = 1` and `Σ Aⱼ 2α/(2α - Rⱼ) = 1`.
pub fn two_rate_survival(alpha: f64, r: [f64; 2]) -> ([f64; 2], impl Fn(f64) -> f64) {
    let m = [
        [alpha / (alpha - r[0]), alpha / (alpha - r[1])],
        [
            2.0 * alpha / (2.0 * alpha - r[0]),
            2.0 * alpha / (2.0 * alpha - r[1]),
        ],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let a = [(m[1][1] - m[0][1]) / det, (m[0][0] - m[1][0]) / det];
    (a, move |u: f64| {
        1.0 - a[0] * (-r[0] * u).exp() - a[1] * (-r[1] * u).exp()
    })
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Real parts of the decaying (Re < 0) values, sorted by magnitude.
pub fn decaying(values: &[Complex64]) -> Vec<f64> {
    let mut v: Vec<f64> = values
        .iter()
        .filter(|z| z.re < -1e-9)
        .map(|z| z.re)
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
