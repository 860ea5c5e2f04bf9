//! Survival probability for exponential claims and Erlang(2) inter-arrival
//! times with FGM dependence.
//!
//! With `y = 2β - cs` the transform of `δ` reads
//!
//! ```text
//!                       c² s δ(0) - 2βc + β² m1
//! δ̃(s) = -----------------------------------------------------------------
//!         c² s² - 2βcs + β²(1 - f̃(s)) - θ h̃(s) (β² + 4β⁵/y³ ± 6β⁴/y²)
//! ```
//!
//! and is cleared by `y³ (α+s)(2α+s)` to a degree 7 denominator. The sign in
//! front of the `6β⁴` term is selected by [`SignVariant`]; [`SignVariant::Minus`]
//! is the one consistent with simulation.
//!
//! Two rules fix `δ(0)`:
//!
//! * [`EliminationRule::Collective`] keeps the numerator above and sets the
//!   sum of the residues at the growing roots to zero. The single-root
//!   estimates disagree, so the result is only approximate.
//! * [`EliminationRule::Exact`] lets the numerator carry the extra free
//!   quadratic that comes from the operator boundary terms, writing it as
//!   `(α+s)(2α+s) Q(s)` with `Q = y³(c² s δ(0) + K) + q0 + q1 s + q2 s²`.
//!   `Q` must vanish at every growing root and the final-value theorem fixes
//!   `Q(0)`; the solve is a least-squares problem with a residual gate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dependence::{InterArrival, ModelSpec};
use crate::error::{Result, RuinError};
use crate::inversion::{invert_bounded, single_root_estimates, spread};
use crate::mc::{estimate_survival, SimEstimate};
use crate::poly::{poly_roots, AffineRational, ExpSum, Polynomial, RationalFn, RootClass, RootSet};

const CANCEL_TOL: f64 = 1e-9;
/// Gate on the relative least-squares residual of the exact rule.
pub const CONSISTENCY_TOL: f64 = 1e-5;
/// Maximum relative residue left at a growing pole after the exact rule.
const GROWING_RESIDUE_TOL: f64 = 1e-7;
/// Replications used by [`select_sign_variant`].
pub const SELECTION_REPLICATIONS: usize = 500_000;

/// Sign of the `6β⁴ h̃ / (2β - cs)²` term in the Lundberg denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignVariant {
    /// `-θ h̃ (β² + 4β⁵/y³ - 6β⁴/y²)`
    Minus,
    /// `-θ h̃ (β² + 4β⁵/y³ + 6β⁴/y²)`
    Plus,
}

impl SignVariant {
    pub const ALL: [SignVariant; 2] = [SignVariant::Minus, SignVariant::Plus];

    fn sign(self) -> f64 {
        match self {
            SignVariant::Minus => -1.0,
            SignVariant::Plus => 1.0,
        }
    }
}

impl std::fmt::Display for SignVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignVariant::Minus => "minus",
            SignVariant::Plus => "plus",
        })
    }
}

/// How `δ(0)` is pinned down by the growing roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EliminationRule {
    Collective,
    Exact,
}

impl std::fmt::Display for EliminationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EliminationRule::Collective => "collective",
            EliminationRule::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErlangSolution {
    pub delta0: f64,
    pub delta: ExpSum,
    /// Roots of the cleared denominator.
    pub lundberg_roots: RootSet,
    pub sign_variant: SignVariant,
    pub rule: EliminationRule,
    /// Collective rule: spread of the single-root `δ(0)` estimates.
    /// Exact rule: relative least-squares residual.
    pub consistency_residual: f64,
    /// Transform of `δ` with `δ(0)` substituted.
    pub transform: RationalFn,
    /// Largest residue dropped at a growing pole, relative to the largest
    /// residue overall.
    pub growing_residual: f64,
}

impl ErlangSolution {
    pub fn survival(&self, u: f64) -> f64 {
        self.delta.eval(u)
    }

    pub fn ruin(&self, u: f64) -> f64 {
        1.0 - self.delta.eval(u)
    }
}

struct Params {
    c: f64,
    alpha: f64,
    beta: f64,
    m1: f64,
    theta: f64,
}

fn params(model: &ModelSpec) -> Result<Params> {
    match *model.arrival() {
        InterArrival::Erlang2 { beta } => Ok(Params {
            c: model.premium(),
            alpha: model.claim().alpha(),
            beta,
            m1: model.claim().mean(),
            theta: model.theta(),
        }),
        InterArrival::Poisson { .. } => Err(RuinError::Input(
            "the Erlang solver needs Erlang(2) inter-arrival times".into(),
        )),
    }
}

struct Factors {
    /// `y = 2β - cs`
    y: Polynomial,
    y3: Polynomial,
    /// `(α+s)(2α+s)`
    clear: Polynomial,
}

fn factors(p: &Params) -> Factors {
    let y = Polynomial::linear(2.0 * p.beta, -p.c);
    let y3 = y.pow(3);
    let clear = Polynomial::linear(p.alpha, 1.0).mul(&Polynomial::linear(2.0 * p.alpha, 1.0));
    Factors { y, y3, clear }
}

/// Cleared transform of `δ` with `δ(0)` symbolic, before any cancellation.
pub fn erlang_lt(model: &ModelSpec, variant: SignVariant) -> Result<AffineRational> {
    let p = params(model)?;
    let Factors { y, y3, clear } = factors(&p);
    let s = Polynomial::x();
    let (a, b, c) = (p.alpha, p.beta, p.c);
    // (1 - f̃)·(α+s)(2α+s) = s(2α+s); h̃·(α+s)(2α+s) = αs
    let one_minus_f_cl = s.mul(&Polynomial::linear(2.0 * a, 1.0));
    let h_cl = s.scaled(a);
    let bracket = &(&y3.scaled(b * b) + &Polynomial::constant(4.0 * b.powi(5)))
        + &y.scaled(variant.sign() * 6.0 * b.powi(4));

    let quad = Polynomial::new(vec![0.0, -2.0 * b * c, c * c]);
    let den = &(&quad.mul(&y3).mul(&clear) + &one_minus_f_cl.mul(&y3).scaled(b * b))
        - &h_cl.mul(&bracket).scaled(p.theta);
    let y3_clear = y3.mul(&clear);
    Ok(AffineRational {
        base: y3_clear.scaled(-2.0 * b * c + b * b * p.m1),
        slope: s.scaled(c * c).mul(&y3_clear),
        den,
    })
}

fn cancellation_candidates(p: &Params) -> Vec<Complex64> {
    vec![
        Complex64::new(-p.alpha, 0.0),
        Complex64::new(-2.0 * p.alpha, 0.0),
        Complex64::new(2.0 * p.beta / p.c, 0.0),
    ]
}

struct Delta0 {
    delta0: f64,
    residual: f64,
    transform: RationalFn,
}

/// `δ(0)` together with the consistency residual of the chosen rule.
pub fn solve_delta0(
    model: &ModelSpec,
    variant: SignVariant,
    rule: EliminationRule,
) -> Result<(f64, f64)> {
    let d = delta0_with(model, variant, rule)?;
    Ok((d.delta0, d.residual))
}

fn delta0_with(model: &ModelSpec, variant: SignVariant, rule: EliminationRule) -> Result<Delta0> {
    let p = params(model)?;
    let raw = erlang_lt(model, variant)?;
    // Without dependence the transform is exact as written and a single
    // growing root remains after cancellation.
    if rule == EliminationRule::Collective || p.theta == 0.0 {
        collective(&raw.cancel_candidates(&cancellation_candidates(&p), CANCEL_TOL))
    } else {
        exact(&p, &raw.den)
    }
}

fn collective(t: &AffineRational) -> Result<Delta0> {
    let roots = poly_roots(&t.den)?;
    let growing: Vec<_> = t
        .residues(&roots)?
        .into_iter()
        .filter(|r| RootClass::of(r.pole) == RootClass::Growing)
        .collect();
    if growing.is_empty() {
        return Err(RuinError::Structure(
            "transform denominator has no growing root to eliminate".into(),
        ));
    }
    let base: Complex64 = growing.iter().map(|r| r.base).sum();
    let slope: Complex64 = growing.iter().map(|r| r.slope).sum();
    let delta0 = -base.re / slope.re;
    Ok(Delta0 {
        delta0,
        residual: spread(&single_root_estimates(&growing)),
        transform: t.at(delta0)?,
    })
}

fn exact(p: &Params, den: &Polynomial) -> Result<Delta0> {
    let Factors { y3, clear, .. } = factors(p);
    let roots = poly_roots(den)?;
    let growing: Vec<Complex64> = roots
        .of_class(RootClass::Growing)
        .map(|r| r.value)
        .filter(|z| z.im >= 0.0)
        .collect();
    let c2 = p.c * p.c;
    // unknowns: δ(0), K, q0, q1, q2
    let mut rows: Vec<[f64; 5]> = Vec::new();
    let mut rhs = Vec::new();
    for &z in &growing {
        let yz = y3.eval_complex(z);
        let row = [yz * c2 * z, yz, Complex64::new(1.0, 0.0), z, z * z];
        let scale = row.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        rows.push(row.map(|v| v.re / scale));
        rhs.push(0.0);
        if z.im > 0.0 {
            rows.push(row.map(|v| v.im / scale));
            rhs.push(0.0);
        }
    }
    // residue 1 at the origin: (α+s)(2α+s) Q(s) / den'(s) at s = 0
    let q0_target = den.derivative().eval(0.0) / clear.eval(0.0);
    let y0 = y3.eval(0.0);
    let scale = (y0 * y0 + 1.0).sqrt();
    rows.push([0.0, y0 / scale, 1.0 / scale, 0.0, 0.0]);
    rhs.push(q0_target / scale);

    if rows.len() < 5 {
        return Err(RuinError::Structure(format!(
            "{} growing roots cannot fix the numerator (need 4)",
            rows.len() - 1
        )));
    }
    let m = DMatrix::from_fn(rows.len(), 5, |i, j| rows[i][j]);
    let b = DVector::from_vec(rhs);
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax {
        return Err(RuinError::Conditioning(format!(
            "numerator system is rank deficient (singular values {:?})",
            svd.singular_values.as_slice()
        )));
    }
    let x = svd
        .solve(&b, 1e-14 * smax)
        .map_err(|e| RuinError::Conditioning(e.to_string()))?;
    let residual = (&m * &x - &b).norm() / b.norm();
    if residual > CONSISTENCY_TOL {
        return Err(RuinError::Conditioning(format!(
            "growing roots over-determine the numerator: residual {residual:.3e} at δ(0) = {}",
            x[0]
        )));
    }
    let q = &(&y3.mul(&Polynomial::linear(x[1], c2 * x[0]))
        + &Polynomial::new(vec![x[2], x[3], x[4]]))
        .mul(&clear);
    Ok(Delta0 {
        delta0: x[0],
        residual,
        transform: RationalFn::new(q.clone(), den.clone())?,
    })
}

/// Survival probability with the minus sign variant and the exact rule.
pub fn survival_erlang2(model: &ModelSpec) -> Result<ErlangSolution> {
    survival_erlang2_with(model, SignVariant::Minus, EliminationRule::Exact)
}

pub fn survival_erlang2_with(
    model: &ModelSpec,
    variant: SignVariant,
    rule: EliminationRule,
) -> Result<ErlangSolution> {
    let lundberg_roots = poly_roots(&erlang_lt(model, variant)?.den)?;
    let d = delta0_with(model, variant, rule)?;
    let inv = invert_bounded(&d.transform)?;
    let exact_rule = rule == EliminationRule::Exact || model.copula().is_independent();
    if exact_rule && inv.growing_residual > GROWING_RESIDUE_TOL {
        return Err(RuinError::Conditioning(format!(
            "growing residue {:.3e} remains after elimination",
            inv.growing_residual
        )));
    }
    Ok(ErlangSolution {
        delta0: d.delta0,
        delta: inv.expsum,
        lundberg_roots,
        sign_variant: variant,
        rule,
        consistency_residual: d.residual,
        transform: d.transform,
        growing_residual: inv.growing_residual,
    })
}

/// `δ(0)` under both rules for one sign variant, and whether the exact value
/// agrees with simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantOutcome {
    pub variant: SignVariant,
    pub collective_delta0: Option<f64>,
    pub exact_delta0: Option<f64>,
    /// Solver error for the exact rule, if any.
    pub error: Option<String>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignVariantReport {
    pub theta: f64,
    pub outcomes: Vec<VariantOutcome>,
    pub mc: SimEstimate,
    pub ci_low: f64,
    pub ci_high: f64,
    pub selected: Option<SignVariant>,
}

impl SignVariantReport {
    pub fn outcome(&self, variant: SignVariant) -> Option<&VariantOutcome> {
        self.outcomes.iter().find(|o| o.variant == variant)
    }
}

/// Solves `δ(0)` for both sign variants and checks each exact value against
/// a simulated `δ(0)` with a 3 standard error band.
///
/// Without dependence both variants coincide; no simulation is run and the
/// minus variant is returned.
pub fn compare_sign_variants(model: &ModelSpec, n: usize, seed: u64) -> Result<SignVariantReport> {
    params(model)?;
    if model.copula().is_independent() {
        let (d0, _) = solve_delta0(model, SignVariant::Minus, EliminationRule::Exact)?;
        let outcomes = SignVariant::ALL
            .iter()
            .map(|&variant| VariantOutcome {
                variant,
                collective_delta0: Some(d0),
                exact_delta0: Some(d0),
                error: None,
                consistent: true,
            })
            .collect();
        return Ok(SignVariantReport {
            theta: 0.0,
            outcomes,
            mc: SimEstimate {
                value: d0,
                stderr: 0.0,
                n: 0,
                seed,
            },
            ci_low: d0,
            ci_high: d0,
            selected: Some(SignVariant::Minus),
        });
    }
    let mc = estimate_survival(model, 0.0, n, seed, None)?.estimate;
    let (ci_low, ci_high) = (mc.value - 3.0 * mc.stderr, mc.value + 3.0 * mc.stderr);
    let outcomes: Vec<VariantOutcome> = SignVariant::ALL
        .iter()
        .map(|&variant| {
            let collective_delta0 = solve_delta0(model, variant, EliminationRule::Collective)
                .ok()
                .map(|d| d.0);
            let (exact_delta0, error) =
                match survival_erlang2_with(model, variant, EliminationRule::Exact) {
                    Ok(sol) => (Some(sol.delta0), None),
                    Err(e) => (None, Some(e.to_string())),
                };
            let consistent = exact_delta0.is_some_and(|d| d >= ci_low && d <= ci_high);
            VariantOutcome {
                variant,
                collective_delta0,
                exact_delta0,
                error,
                consistent,
            }
        })
        .collect();
    let mut hits = outcomes.iter().filter(|o| o.consistent).map(|o| o.variant);
    let selected = match (hits.next(), hits.next()) {
        (Some(v), None) => Some(v),
        _ => None,
    };
    Ok(SignVariantReport {
        theta: model.theta(),
        outcomes,
        mc,
        ci_low,
        ci_high,
        selected,
    })
}

/// The sign variant whose `δ(0)` agrees with simulation
/// ([`SELECTION_REPLICATIONS`] paths).
pub fn select_sign_variant(model: &ModelSpec, seed: u64) -> Result<SignVariant> {
    let report = compare_sign_variants(model, SELECTION_REPLICATIONS, seed)?;
    report.selected.ok_or_else(|| {
        RuinError::Structure(format!(
            "no unique sign variant agrees with simulation: {:?}, simulated δ(0) {} in [{}, {}]",
            report.outcomes, report.mc.value, report.ci_low, report.ci_high
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2(theta: f64) -> ModelSpec {
        ModelSpec::erlang2(1.5, 1.0, 2.0, theta).unwrap()
    }

    #[test]
    fn rejects_poisson_arrivals() {
        let m = ModelSpec::classical(1.5, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            erlang_lt(&m, SignVariant::Minus),
            Err(RuinError::Input(_))
        ));
    }

    #[test]
    fn denominator_degree_and_zero_root() {
        for v in SignVariant::ALL {
            let t = erlang_lt(&example2(-1.0), v).unwrap();
            assert_eq!(t.den.degree(), 7);
            assert!(t.den.coeffs()[0].abs() < 1e-12);
        }
    }

    #[test]
    fn variants_coincide_without_dependence() {
        let a = erlang_lt(&example2(0.0), SignVariant::Minus).unwrap();
        let b = erlang_lt(&example2(0.0), SignVariant::Plus).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rules_agree_without_dependence() {
        let m = example2(0.0);
        let (c, _) = solve_delta0(&m, SignVariant::Minus, EliminationRule::Collective).unwrap();
        let (e, _) = solve_delta0(&m, SignVariant::Minus, EliminationRule::Exact).unwrap();
        assert_eq!(c, e);
    }

    #[test]
    fn exact_rule_leaves_no_growing_residue() {
        for theta in [-1.0, -0.5, 0.5, 1.0] {
            let sol = survival_erlang2(&example2(theta)).unwrap();
            assert!(
                sol.growing_residual < 1e-7,
                "θ={theta}: {}",
                sol.growing_residual
            );
            assert!(sol.consistency_residual < CONSISTENCY_TOL);
            assert!((sol.delta.constant() - 1.0).abs() < 1e-9);
            assert!((sol.survival(0.0) - sol.delta0).abs() < 1e-8);
        }
    }

    #[test]
    fn plus_variant_fails_to_bound_the_solution() {
        // two of four θ values leave a single decaying root
        let err = survival_erlang2_with(&example2(-1.0), SignVariant::Plus, EliminationRule::Exact);
        assert!(err.is_err());
    }
}
