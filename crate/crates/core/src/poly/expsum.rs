use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rational::PoleResidue;
use super::roots::{RootClass, ZERO_TOL};
use crate::error::{Result, RuinError};

/// Tolerance for matching conjugate terms.
pub const PAIR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coef: Complex64,
    pub rate: Complex64,
}

/// `constant + Σ coef · exp(rate · u)`, real-valued because every non-real
/// term is accompanied by its conjugate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSum {
    constant: f64,
    terms: Vec<ExpTerm>,
}

impl ExpSum {
    pub fn new(constant: f64, terms: Vec<ExpTerm>) -> Result<Self> {
        check_pairing(&terms)?;
        Ok(Self { constant, terms })
    }

    pub fn constant_only(constant: f64) -> Self {
        Self {
            constant,
            terms: Vec::new(),
        }
    }

    /// Inverse Laplace transform of `Σ residue / (s - pole)`, restricted to
    /// poles whose class passes `keep`. The pole at zero (if kept) becomes the
    /// constant term.
    pub fn from_residues(
        residues: &[PoleResidue],
        mut keep: impl FnMut(RootClass) -> bool,
    ) -> Result<Self> {
        let mut constant = 0.0;
        let mut terms = Vec::new();
        for pr in residues {
            let class = RootClass::of(pr.pole);
            if !keep(class) {
                continue;
            }
            if class == RootClass::Zero {
                constant += pr.residue.re;
            } else {
                terms.push(ExpTerm {
                    coef: pr.residue,
                    rate: pr.pole,
                });
            }
        }
        Self::new(constant, terms)
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    /// Evaluates at `u`. The imaginary rounding left by conjugate pairs is
    /// discarded.
    pub fn eval(&self, u: f64) -> f64 {
        let z: Complex64 = self.terms.iter().map(|t| t.coef * (t.rate * u).exp()).sum();
        self.constant + z.re
    }

    /// Imaginary part left after summing all terms at `u`; zero up to rounding.
    pub fn imaginary_residue(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * (t.rate * u).exp())
            .sum::<Complex64>()
            .im
    }

    /// Derivative with respect to `u`.
    pub fn derivative(&self) -> Self {
        Self {
            constant: 0.0,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coef: t.coef * t.rate,
                    rate: t.rate,
                })
                .collect(),
        }
    }

    /// Laplace transform `constant / s + Σ coef / (s - rate)`.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        self.constant / s
            + self
                .terms
                .iter()
                .map(|t| t.coef / (s - t.rate))
                .sum::<Complex64>()
    }

    /// Coefficient of the term whose rate is nearest to `rate`.
    pub fn coef_near(&self, rate: Complex64) -> Option<ExpTerm> {
        self.terms
            .iter()
            .min_by(|a, b| (a.rate - rate).norm().total_cmp(&(b.rate - rate).norm()))
            .copied()
    }
}

fn check_pairing(terms: &[ExpTerm]) -> Result<()> {
    for t in terms {
        let tol = PAIR_TOL * t.rate.norm().max(1.0);
        if t.rate.im.abs() <= ZERO_TOL && t.coef.im.abs() <= tol * t.coef.norm().max(1.0) {
            continue;
        }
        let partner = terms.iter().any(|o| {
            (o.rate - t.rate.conj()).norm() <= tol
                && (o.coef - t.coef.conj()).norm() <= PAIR_TOL * t.coef.norm().max(1.0)
        });
        if !partner {
            return Err(RuinError::Structure(format!(
                "term {} e^({} u) has no conjugate partner",
                t.coef, t.rate
            )));
        }
    }
    Ok(())
}

/// Evaluates an exponential sum at `u`.
pub fn expsum_eval(e: &ExpSum, u: f64) -> f64 {
    e.eval(u)
}
