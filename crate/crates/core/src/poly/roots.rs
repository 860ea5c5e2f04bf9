//! Polynomial root extraction via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Result, RuinError};

/// Magnitude below which a root counts as zero; also the band around the
/// imaginary axis separating decaying from growing roots.
pub const ZERO_TOL: f64 = 1e-9;

/// Relative distance under which eigenvalues are merged into one root of
/// higher multiplicity.
pub const MULTIPLICITY_TOL: f64 = 1e-7;

/// Relative imaginary part below which a root is snapped to the real axis.
const REAL_SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootClass {
    Zero,
    /// `Re < 0`: the root yields a decaying exponential.
    Decaying,
    /// `Re > 0`: the root yields a growing exponential.
    Growing,
    /// Nonzero root on the imaginary axis.
    Imaginary,
}

impl RootClass {
    pub fn of(value: Complex64) -> Self {
        if value.norm() < ZERO_TOL {
            Self::Zero
        } else if value.re < -ZERO_TOL {
            Self::Decaying
        } else if value.re > ZERO_TOL {
            Self::Growing
        } else {
            Self::Imaginary
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    pub class: RootClass,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }
}

/// All complex roots of a real polynomial, grouped by multiplicity and
/// classified by the sign of their real part.
///
/// Roots are sorted by real part, then by imaginary part. Non-real roots come
/// in exact conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Sum of multiplicities, equal to the degree of the source polynomial.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn of_class(&self, class: RootClass) -> impl Iterator<Item = &Root> + '_ {
        self.roots.iter().filter(move |r| r.class == class)
    }

    pub fn count(&self, class: RootClass) -> usize {
        self.of_class(class).map(|r| r.multiplicity).sum()
    }

    /// Root values repeated according to multiplicity.
    pub fn values(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    /// The root closest to `target`, if any.
    pub fn nearest(&self, target: Complex64) -> Option<&Root> {
        self.roots.iter().min_by(|a, b| {
            (a.value - target)
                .norm()
                .total_cmp(&(b.value - target).norm())
        })
    }
}

fn companion_eigenvalues(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree();
    let lead = p.leading();
    let c = p.coeffs();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Newton steps on `p`, keeping an iterate only while it reduces `|p|`.
fn polish(p: &Polynomial, dp: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut fz = p.eval_complex(z).norm();
    for _ in 0..3 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - p.eval_complex(z) / d;
        let fc = p.eval_complex(cand).norm();
        if fc.is_finite() && fc <= fz {
            let done = fc == fz;
            z = cand;
            fz = fc;
            if done {
                break;
            }
        } else {
            break;
        }
    }
    z
}

/// Finds all roots of `p`, polished by Newton's method and grouped into
/// clusters of coincident roots.
pub fn poly_roots(p: &Polynomial) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(RuinError::Input(
            "root finding requires a polynomial of degree >= 1".into(),
        ));
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(RuinError::Input(
            "polynomial has non-finite coefficients".into(),
        ));
    }

    // exact zero roots are factored out first; they break the companion matrix
    // scaling of the remaining roots otherwise
    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let reduced = Polynomial::new(p.coeffs()[zeros..].to_vec());

    let mut raw = Vec::with_capacity(p.degree());
    raw.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    if reduced.degree() > 0 {
        let dp = reduced.derivative();
        for z in companion_eigenvalues(&reduced) {
            raw.push(polish(&reduced, &dp, z));
        }
    }

    Ok(RootSet {
        roots: cluster(symmetrize(raw)),
    })
}

/// Snaps nearly-real roots to the real axis and makes complex roots exact
/// conjugates of each other.
fn symmetrize(raw: Vec<Complex64>) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in raw {
        if z.im.abs() <= REAL_SNAP_TOL * z.norm().max(1.0) {
            out.push(Complex64::new(z.re, 0.0));
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    // pair each upper-half root with the closest conjugate from the lower half
    for z in upper {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (a.conj() - z).norm().total_cmp(&(b.conj() - z).norm()))
            .map(|(i, _)| i);
        let w = match best {
            Some(i) => lower.swap_remove(i).conj(),
            None => z,
        };
        let mid = Complex64::new(0.5 * (z.re + w.re), 0.5 * (z.im + w.im));
        out.push(mid);
        out.push(mid.conj());
    }
    // unmatched lower roots can only appear with an uneven split, which a
    // real polynomial never produces beyond rounding
    for z in lower {
        out.push(z);
        out.push(z.conj());
    }
    out
}

fn cluster(mut values: Vec<Complex64>) -> Vec<Root> {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for z in values {
        match groups
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= MULTIPLICITY_TOL * c.norm().max(z.norm()).max(1.0))
        {
            Some((c, m)) => {
                *c = (*c * (*m as f64) + z) / ((*m + 1) as f64);
                *m += 1;
            }
            None => groups.push((z, 1)),
        }
    }
    let mut roots: Vec<Root> = groups
        .into_iter()
        .map(|(mut value, multiplicity)| {
            if value.norm() < ZERO_TOL {
                value = Complex64::new(0.0, 0.0);
            }
            Root {
                value,
                multiplicity,
                class: RootClass::of(value),
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    roots
}
