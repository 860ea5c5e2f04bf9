//! Survival probability for exponential claims and Poisson arrivals with FGM
//! dependence.
//!
//! The Laplace transform of the survival probability is
//!
//! ```text
//!            c² s φ(0) - 2λc + 2λ² m1
//! φ̃(s) = ---------------------------------------------------------
//!         c² s² - 3λcs + 2λ²(1 - f̃(s)) + λcs (f̃(s) + θ h̃(s))
//! ```
//!
//! Multiplying through by `(α + s)(2α + s)` turns both sides into
//! polynomials. `φ(0)` stays a free parameter of the numerator until the
//! residue at the growing root of the denominator is forced to zero, which
//! is what keeps `φ` bounded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dependence::{InterArrival, ModelSpec};
use crate::error::{Result, RuinError};
use crate::inversion::{invert_bounded, single_root_estimates, spread};
use crate::poly::{poly_roots, AffineRational, ExpSum, Polynomial, RootClass, RootSet};

/// Relative tolerance for cancelling the clearing factor `(α+s)(2α+s)`.
pub(crate) const CANCEL_TOL: f64 = 1e-9;
/// Maximum spread between `φ(0)` estimates from different growing roots.
const ESTIMATE_SPREAD_TOL: f64 = 1e-6;
/// Maximum relative residue left at a growing pole after elimination.
const GROWING_RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalSolution {
    /// Survival probability at zero initial surplus.
    pub phi0: f64,
    /// Survival probability `φ(u)` as `1 + Σ aᵢ e^{rᵢ u}`.
    pub phi: ExpSum,
    /// Roots of the cleared denominator, before any cancellation.
    pub lundberg_roots: RootSet,
    /// The cleared transform after cancelling common factors, with `φ(0)`
    /// still symbolic.
    pub transform: AffineRational,
    /// Residue left at growing poles after substituting `φ(0)`, relative to
    /// the largest residue.
    pub growing_residual: f64,
}

impl ClassicalSolution {
    pub fn survival(&self, u: f64) -> f64 {
        self.phi.eval(u)
    }

    pub fn ruin(&self, u: f64) -> f64 {
        1.0 - self.phi.eval(u)
    }
}

fn require_poisson(model: &ModelSpec) -> Result<f64> {
    match *model.arrival() {
        InterArrival::Poisson { lambda } => Ok(lambda),
        InterArrival::Erlang2 { .. } => Err(RuinError::Input(
            "the classical solver needs exponential inter-arrival times".into(),
        )),
    }
}

/// Cleared transform of the survival probability.
///
/// The denominator has degree 4; `base` holds the part of the numerator that
/// does not depend on `φ(0)` (the constant `-2λc + 2λ²m1` fixed by the
/// final-value limit) and `slope` the part multiplying `φ(0)`.
pub fn classical_lt(model: &ModelSpec) -> Result<AffineRational> {
    let lambda = require_poisson(model)?;
    let c = model.premium();
    let a = model.claim().alpha();
    let m1 = model.claim().mean();
    let theta = model.theta();

    let s = Polynomial::x();
    let pa = Polynomial::linear(a, 1.0);
    let p2a = Polynomial::linear(2.0 * a, 1.0);
    let clear = pa.mul(&p2a);
    // f̃·(α+s)(2α+s) = α(2α+s); h̃·(α+s)(2α+s) = αs; (1 - f̃)·(α+s)(2α+s) = s(2α+s)
    let f_cl = p2a.scaled(a);
    let h_cl = s.scaled(a);
    let one_minus_f_cl = s.mul(&p2a);

    let quad = Polynomial::new(vec![0.0, -3.0 * lambda * c, c * c]);
    let den = &(&quad.mul(&clear) + &one_minus_f_cl.scaled(2.0 * lambda * lambda))
        + &s.scaled(lambda * c).mul(&(&f_cl + &h_cl.scaled(theta)));

    Ok(AffineRational {
        base: clear.scaled(-2.0 * lambda * c + 2.0 * lambda * lambda * m1),
        slope: s.scaled(c * c).mul(&clear),
        den,
    })
}

pub(crate) fn cleared_factor_roots(model: &ModelSpec) -> Vec<Complex64> {
    let a = model.claim().alpha();
    vec![Complex64::new(-a, 0.0), Complex64::new(-2.0 * a, 0.0)]
}

/// `φ(0)` from forcing the residue at every growing root to zero.
pub fn solve_phi0(model: &ModelSpec) -> Result<f64> {
    let lambda = require_poisson(model)?;
    let t = classical_lt(model)?.cancel_candidates(&cleared_factor_roots(model), CANCEL_TOL);
    phi0_from(model, lambda, &t)
}

fn phi0_from(model: &ModelSpec, lambda: f64, t: &AffineRational) -> Result<f64> {
    let roots = poly_roots(&t.den)?;
    let growing: Vec<_> = t
        .residues(&roots)?
        .into_iter()
        .filter(|r| RootClass::of(r.pole) == RootClass::Growing)
        .collect();
    if growing.is_empty() {
        if model.copula().is_independent() {
            return Ok(1.0 - lambda * model.claim().mean() / model.premium());
        }
        return Err(RuinError::Structure(
            "transform denominator has no growing root to eliminate".into(),
        ));
    }
    let estimates = single_root_estimates(&growing);
    let worst = spread(&estimates);
    if worst > ESTIMATE_SPREAD_TOL {
        return Err(RuinError::Conditioning(format!(
            "growing roots give inconsistent φ(0) estimates {estimates:?} (spread {worst:.3e})"
        )));
    }
    let mean = estimates.iter().sum::<Complex64>() / estimates.len() as f64;
    if mean.im.abs() > ESTIMATE_SPREAD_TOL {
        return Err(RuinError::Conditioning(format!(
            "φ(0) estimate {mean} is not real"
        )));
    }
    Ok(mean.re)
}

/// Survival probability `φ(u)` as a closed-form exponential sum.
pub fn survival_classical(model: &ModelSpec) -> Result<ClassicalSolution> {
    let lambda = require_poisson(model)?;
    let cleared = classical_lt(model)?;
    let lundberg_roots = poly_roots(&cleared.den)?;
    let transform = cleared.cancel_candidates(&cleared_factor_roots(model), CANCEL_TOL);
    let phi0 = phi0_from(model, lambda, &transform)?;
    let inv = invert_bounded(&transform.at(phi0)?)?;
    if inv.growing_residual > GROWING_RESIDUE_TOL {
        return Err(RuinError::Conditioning(format!(
            "growing residue {:.3e} remains after elimination",
            inv.growing_residual
        )));
    }
    Ok(ClassicalSolution {
        phi0,
        phi: inv.expsum,
        lundberg_roots,
        transform,
        growing_residual: inv.growing_residual,
    })
}
