use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::{poly_roots, RootSet};
use super::Polynomial;
use crate::error::{Result, RuinError};

/// Ratio of two real polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFn {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(RuinError::Input("denominator is identically zero".into()));
        }
        Ok(Self { num, den })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval_complex(s) / self.den.eval_complex(s)
    }

    pub fn eval_real(&self, s: f64) -> f64 {
        self.num.eval(s) / self.den.eval(s)
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// Removes roots shared by numerator and denominator, matched within
    /// `tol` (relative to `max(1, |root|)`).
    pub fn cancel_common_roots(&self, tol: f64) -> Result<Self> {
        if self.num.is_zero() || self.num.degree() == 0 || self.den.degree() == 0 {
            return Ok(self.clone());
        }
        let num_roots = poly_roots(&self.num)?.values();
        let mut den_roots = poly_roots(&self.den)?.values();
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for z in num_roots.into_iter().filter(|z| z.im >= 0.0) {
            let hit = den_roots
                .iter()
                .position(|w| (*w - z).norm() <= tol * z.norm().max(1.0));
            if let Some(i) = hit {
                let w = den_roots.swap_remove(i);
                if z.im != 0.0 {
                    if let Some(j) = den_roots.iter().position(|v| *v == w.conj()) {
                        den_roots.swap_remove(j);
                    }
                }
                let shared = if z.im == 0.0 {
                    Complex64::new(0.5 * (z.re + w.re), 0.0)
                } else {
                    0.5 * (z + w)
                };
                num = num.deflate(shared);
                den = den.deflate(shared);
            }
        }
        Self::new(num, den)
    }
}

/// A simple pole and its residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleResidue {
    pub pole: Complex64,
    pub residue: Complex64,
}

/// Decomposes a proper rational function with simple poles into
/// `Σ residue / (s - pole)`. `roots` must be the root set of the denominator.
pub fn partial_fractions(f: &RationalFn, roots: &RootSet) -> Result<Vec<PoleResidue>> {
    if !f.is_proper() {
        return Err(RuinError::Input(format!(
            "partial fractions need deg(num) < deg(den), got {} >= {}",
            f.num().degree(),
            f.den().degree()
        )));
    }
    if roots.total_multiplicity() != f.den().degree() {
        return Err(RuinError::Input(format!(
            "root set has {} roots for a denominator of degree {}",
            roots.total_multiplicity(),
            f.den().degree()
        )));
    }
    let dden = f.den().derivative();
    roots
        .roots()
        .iter()
        .map(|r| {
            if r.multiplicity > 1 {
                return Err(RuinError::Structure(format!(
                    "repeated pole at {} (multiplicity {})",
                    r.value, r.multiplicity
                )));
            }
            Ok(PoleResidue {
                pole: r.value,
                residue: f.num().eval_complex(r.value) / dden.eval_complex(r.value),
            })
        })
        .collect()
}

/// A rational function whose numerator is affine in one unknown scalar `x`:
/// `(base(s) + x · slope(s)) / den(s)`.
///
/// Residues at simple poles are affine in `x` too, which lets a boundary value
/// such as the survival probability at zero surplus be solved for by
/// elimination instead of nested root finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineRational {
    pub base: Polynomial,
    pub slope: Polynomial,
    pub den: Polynomial,
}

/// Residue `base + x · slope` of an [`AffineRational`] at a simple pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineResidue {
    pub pole: Complex64,
    pub base: Complex64,
    pub slope: Complex64,
}

impl AffineResidue {
    pub fn at(&self, x: f64) -> Complex64 {
        self.base + self.slope * x
    }

    /// The value of `x` that makes this residue vanish.
    pub fn root(&self) -> Complex64 {
        -self.base / self.slope
    }
}

impl AffineRational {
    pub fn at(&self, x: f64) -> Result<RationalFn> {
        RationalFn::new(&self.base + &self.slope.scaled(x), self.den.clone())
    }

    pub fn eval(&self, s: Complex64, x: f64) -> Complex64 {
        (self.base.eval_complex(s) + self.slope.eval_complex(s) * x) / self.den.eval_complex(s)
    }

    /// Cancels every candidate root that is a zero of both numerator parts and
    /// of the denominator, as many times as it divides all three. A value
    /// counts as zero when `|p(z)| <= tol · Σ|c_k||z|^k`. Candidates are
    /// typically the roots of a factor used to clear fractions.
    pub fn cancel_candidates(&self, candidates: &[Complex64], tol: f64) -> Self {
        let vanishes =
            |p: &Polynomial, z: Complex64| p.eval_complex(z).norm() <= tol * p.magnitude_at(z);
        let mut out = self.clone();
        for &z in candidates {
            while out.den.degree() > 0
                && vanishes(&out.den, z)
                && vanishes(&out.base, z)
                && vanishes(&out.slope, z)
            {
                out.den = out.den.deflate(z);
                if !out.base.is_zero() {
                    out.base = out.base.deflate(z);
                }
                if !out.slope.is_zero() {
                    out.slope = out.slope.deflate(z);
                }
            }
        }
        out
    }

    /// Affine residues at every pole; poles must be simple.
    pub fn residues(&self, roots: &RootSet) -> Result<Vec<AffineResidue>> {
        let dden = self.den.derivative();
        roots
            .roots()
            .iter()
            .map(|r| {
                if r.multiplicity > 1 {
                    return Err(RuinError::Structure(format!(
                        "repeated pole at {} (multiplicity {})",
                        r.value, r.multiplicity
                    )));
                }
                let d = dden.eval_complex(r.value);
                Ok(AffineResidue {
                    pole: r.value,
                    base: self.base.eval_complex(r.value) / d,
                    slope: self.slope.eval_complex(r.value) / d,
                })
            })
            .collect()
    }
}
