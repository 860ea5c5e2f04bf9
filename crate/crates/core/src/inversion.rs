//! Shared Laplace-inversion step for the survival solvers: partial fractions
//! of a cleared transform, keeping only the bounded part of the inverse.

use num_complex::Complex64;

use crate::error::Result;
use crate::poly::{partial_fractions, poly_roots, AffineResidue, ExpSum, RationalFn, RootClass};

/// Result of inverting a transform whose growing poles should carry zero
/// residue.
#[derive(Debug, Clone)]
pub(crate) struct Inversion {
    pub expsum: ExpSum,
    /// Largest growing-pole residue relative to the largest residue overall.
    pub growing_residual: f64,
}

/// Inverts `f`, dropping growing poles. Their residues are measured, not
/// assumed to vanish.
pub(crate) fn invert_bounded(f: &RationalFn) -> Result<Inversion> {
    let roots = poly_roots(f.den())?;
    let residues = partial_fractions(f, &roots)?;
    let largest = residues
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.residue.norm()));
    let growing = residues
        .iter()
        .filter(|r| RootClass::of(r.pole) == RootClass::Growing)
        .fold(0.0_f64, |m, r| m.max(r.residue.norm()));
    let expsum = ExpSum::from_residues(&residues, |class| {
        matches!(class, RootClass::Zero | RootClass::Decaying)
    })?;
    Ok(Inversion {
        expsum,
        growing_residual: if largest > 0.0 {
            growing / largest
        } else {
            0.0
        },
    })
}

/// The value of `x` zeroing each residue individually. For a non-real pole the
/// complex root of `base + x slope` is returned as is.
pub(crate) fn single_root_estimates(residues: &[AffineResidue]) -> Vec<Complex64> {
    residues.iter().map(AffineResidue::root).collect()
}

/// Largest pairwise distance within a set of estimates.
pub(crate) fn spread(values: &[Complex64]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max((a - b).norm());
        }
    }
    worst
}
