//! Real polynomial and rational-function algebra used to invert rational
//! Laplace transforms: roots, partial fractions and exponential sums.

mod expsum;
mod polynomial;
mod rational;
mod roots;

pub use expsum::{expsum_eval, ExpSum, ExpTerm, PAIR_TOL};
pub use polynomial::Polynomial;
pub use rational::{partial_fractions, AffineRational, AffineResidue, PoleResidue, RationalFn};
pub use roots::{poly_roots, Root, RootClass, RootSet, MULTIPLICITY_TOL, ZERO_TOL};

/// Product of two polynomials.
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.mul(b)
}
