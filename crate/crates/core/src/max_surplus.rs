//! Probability `χ(u, b)` of reaching level `b` before ruin in the classical
//! model with exponential claims, and its complement `ξ(u, b)`.
//!
//! `χ` solves a fourth-order linear ODE on `[0, b]`, so
//! `χ(u, b) = a0 + Σ aᵢ e^{sᵢ u}` with `sᵢ` the nonzero roots of the
//! characteristic quartic. Substituting this form into the first-order
//! integro-differential equation
//!
//! ```text
//! χ' - (λ/c) χ + (λ/c) ∫₀ᵘ χ(u-x) f(x) dx + (θλ/c) B(u) - (2θλ²/c²) ∫ᵤᵇ e^{-2λ(t-u)/c} B(t) dt = 0,
//! B(u) = ∫₀ᵘ χ(u-x) h(x) dx
//! ```
//!
//! leaves terms in `e^{-αu}`, `e^{-2αu}` and `e^{-2λ(b-u)/c}` whose
//! coefficients must vanish. Together with `χ(b, b) = 1` this is a 4×4
//! linear system for the coefficients.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dependence::{InterArrival, ModelSpec};
use crate::error::{Result, RuinError};
use crate::poly::{poly_roots, Polynomial, RootClass, RootSet, ZERO_TOL};

/// Largest acceptable condition number of the (row-scaled) system.
pub const MAX_CONDITION: f64 = 1e12;
/// Distance below which a root resonates with one of the kernel rates.
const RESONANCE_TOL: f64 = 1e-7;
/// Largest coefficient a characteristic root may leave on its own exponential.
const OWN_TOL: f64 = 1e-8;

struct Params {
    c: f64,
    alpha: f64,
    lambda: f64,
    theta: f64,
}

impl Params {
    fn mu(&self) -> f64 {
        2.0 * self.lambda / self.c
    }
}

fn params(model: &ModelSpec) -> Result<Params> {
    match *model.arrival() {
        InterArrival::Poisson { lambda } => Ok(Params {
            c: model.premium(),
            alpha: model.claim().alpha(),
            lambda,
            theta: model.theta(),
        }),
        InterArrival::Erlang2 { .. } => Err(RuinError::Input(
            "maximum surplus is only available for exponential inter-arrival times".into(),
        )),
    }
}

/// The monic characteristic quartic.
pub fn chi_characteristic_poly(model: &ModelSpec) -> Result<Polynomial> {
    let Params {
        c,
        alpha: a,
        lambda: l,
        theta,
    } = params(model)?;
    Ok(Polynomial::new(vec![
        0.0,
        -(4.0 * a * a * l / c - 4.0 * a * l * l / (c * c)),
        -(8.0 * a * l / c - 2.0 * a * a - 2.0 * l * l / (c * c) - a * l * theta / c),
        -(3.0 * l / c - 3.0 * a),
        1.0,
    ]))
}

/// Roots of the characteristic quartic: zero and the three solution rates.
pub fn chi_characteristic(model: &ModelSpec) -> Result<RootSet> {
    let roots = poly_roots(&chi_characteristic_poly(model)?)?;
    if let Some(r) = roots.roots().iter().find(|r| {
        r.multiplicity > 1 || (r.class == RootClass::Zero && roots.count(RootClass::Zero) != 1)
    }) {
        return Err(RuinError::Structure(format!(
            "characteristic root {} has multiplicity {}",
            r.value, r.multiplicity
        )));
    }
    Ok(roots)
}

/// One function of the general solution: the constant, `e^{s u}` for a real
/// rate, or the real and imaginary parts of `L e^{s u}` for a complex pair.
/// Growing rates are anchored at `b`, i.e. written as `e^{s (u - b)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Unknown {
    Constant,
    Real { rate: f64, anchor: f64 },
    PairRe { rate: Complex64, anchor: f64 },
    PairIm { rate: Complex64, anchor: f64 },
}

/// The linear system for the coefficients of `χ(·, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub unknowns: Vec<Unknown>,
    /// Row labels, in order.
    pub rows: Vec<&'static str>,
}

/// Coefficient rows produced by the basis function `e^{r u}` (before
/// anchoring): boundary value at `b` and the `e^{-αu}`, `e^{-2αu}` and
/// `e^{-μ(b-u)}` elimination rows.
fn column(p: &Params, r: Complex64, b: f64) -> [Complex64; 4] {
    let a = p.alpha;
    let lc = p.lambda / p.c;
    let tl = p.theta * lc;
    let k = 2.0 * p.theta * lc * lc;
    let mu = p.mu();
    let fa = a / (a + r);
    let f2a = 2.0 * a / (2.0 * a + r);
    // B = (f2a - fa) e^{ru} - f2a e^{-2αu} + fa e^{-αu}
    let g_own = f2a - fa;
    let g_2a = -f2a;
    let g_a = fa;

    let row_a = -lc * fa + tl * g_a + k * g_a / (-a - mu);
    let row_2a = tl * g_2a + k * g_2a / (-2.0 * a - mu);
    let row_tau = -k
        * (g_own * (r * b).exp() / (r - mu)
            + g_2a * (-2.0 * a * b).exp() / (-2.0 * a - mu)
            + g_a * (-a * b).exp() / (-a - mu));
    [(r * b).exp(), row_a, row_2a, row_tau]
}

/// Left-over coefficient of `e^{r u}` itself; zero when `r` solves the
/// characteristic equation.
fn own_coefficient(p: &Params, r: Complex64) -> Complex64 {
    let a = p.alpha;
    let lc = p.lambda / p.c;
    let fa = a / (a + r);
    let g_own = 2.0 * a / (2.0 * a + r) - fa;
    let k = 2.0 * p.theta * lc * lc;
    (r - lc) + lc * fa + p.theta * lc * g_own + k * g_own / (r - p.mu())
}

fn check_resonance(p: &Params, r: Complex64) -> Result<()> {
    for (name, q) in [("-α", -p.alpha), ("-2α", -2.0 * p.alpha), ("2λ/c", p.mu())] {
        if (r - q).norm() < RESONANCE_TOL * q.abs().max(1.0) {
            return Err(RuinError::Structure(format!(
                "characteristic root {r} coincides with the kernel rate {name}"
            )));
        }
    }
    Ok(())
}

/// Builds the linear system for `χ(·, b)`.
///
/// Without dependence the characteristic roots `-2α` and `2λ/c` are spurious
/// (their kernel rows vanish identically), so the system reduces to the
/// boundary row and the `e^{-αu}` row in the unknowns `a0` and the
/// coefficient of `e^{(λ/c - α) u}`.
pub fn chi_linear_system(model: &ModelSpec, b: f64) -> Result<ChiSystem> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(RuinError::Input(format!(
            "level b must be positive, got {b}"
        )));
    }
    let p = params(model)?;
    let roots = chi_characteristic(model)?;
    let independent = model.copula().is_independent();

    let mut unknowns = vec![Unknown::Constant];
    let mut cols: Vec<[f64; 4]> = vec![column(&p, Complex64::new(0.0, 0.0), b).map(|z| z.re)];
    for root in roots.roots() {
        let r = root.value;
        if root.class == RootClass::Zero {
            continue;
        }
        if independent {
            let spurious = [-2.0 * p.alpha, p.mu()];
            if spurious
                .iter()
                .any(|q| (r - q).norm() < RESONANCE_TOL * q.abs().max(1.0))
            {
                continue;
            }
        }
        check_resonance(&p, r)?;
        let leftover = own_coefficient(&p, r).norm();
        if leftover > OWN_TOL * r.norm().max(1.0) {
            return Err(RuinError::Conditioning(format!(
                "root {r} leaves a coefficient {leftover:.3e} on its own exponential"
            )));
        }
        let anchor = if root.class == RootClass::Growing {
            b
        } else {
            0.0
        };
        let shift = (-r * anchor).exp();
        let col = column(&p, r, b).map(|z| z * shift);
        if r.im.abs() <= ZERO_TOL {
            unknowns.push(Unknown::Real { rate: r.re, anchor });
            cols.push(col.map(|z| z.re));
        } else if r.im > 0.0 {
            unknowns.push(Unknown::PairRe { rate: r, anchor });
            cols.push(col.map(|z| 2.0 * z.re));
            unknowns.push(Unknown::PairIm { rate: r, anchor });
            cols.push(col.map(|z| -2.0 * z.im));
        }
    }
    let row_names = [
        "boundary",
        "exp(-alpha u)",
        "exp(-2 alpha u)",
        "exp(-2 lambda (b-u)/c)",
    ];
    let rows: Vec<usize> = if independent {
        vec![0, 1]
    } else {
        vec![0, 1, 2, 3]
    };
    if cols.len() != rows.len() {
        return Err(RuinError::Structure(format!(
            "{} unknowns for {} equations",
            cols.len(),
            rows.len()
        )));
    }
    let matrix = DMatrix::from_fn(rows.len(), cols.len(), |i, j| cols[j][rows[i]]);
    let mut rhs = DVector::zeros(rows.len());
    rhs[0] = 1.0;
    Ok(ChiSystem {
        matrix,
        rhs,
        unknowns,
        rows: rows.iter().map(|&i| row_names[i]).collect(),
    })
}

/// One exponential term `coef · e^{rate (u - anchor)}` of `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiTerm {
    pub coef: Complex64,
    pub rate: Complex64,
    pub anchor: f64,
}

impl ChiTerm {
    /// Coefficient in the unanchored form `a e^{rate u}`.
    pub fn unanchored_coef(&self) -> Complex64 {
        self.coef * (-self.rate * self.anchor).exp()
    }
}

/// `χ(u, b) = a0 + Σ coef e^{rate (u - anchor)}`; non-real terms come in
/// conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSolution {
    pub b: f64,
    pub a0: f64,
    pub terms: Vec<ChiTerm>,
    /// Condition number of the row-scaled system.
    pub condition: f64,
}

impl ChiSolution {
    pub fn eval(&self, u: f64) -> f64 {
        let z: Complex64 = self
            .terms
            .iter()
            .map(|t| t.coef * (t.rate * (u - t.anchor)).exp())
            .sum();
        self.a0 + z.re
    }

    pub fn chi(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok(self.eval(u))
    }

    pub fn xi(&self, u: f64) -> Result<f64> {
        Ok(1.0 - self.chi(u)?)
    }

    /// Term whose rate is nearest to `rate`.
    pub fn term_near(&self, rate: Complex64) -> Option<&ChiTerm> {
        self.terms
            .iter()
            .min_by(|a, b| (a.rate - rate).norm().total_cmp(&(b.rate - rate).norm()))
    }

    fn check(&self, u: f64) -> Result<()> {
        if !(0.0..=self.b).contains(&u) {
            return Err(RuinError::Input(format!(
                "surplus u = {u} must lie in [0, b = {}]",
                self.b
            )));
        }
        Ok(())
    }
}

/// Solves for `χ(·, b)`.
pub fn solve_chi(model: &ModelSpec, b: f64) -> Result<ChiSolution> {
    let sys = chi_linear_system(model, b)?;
    let mut m = sys.matrix.clone();
    let mut rhs = sys.rhs.clone();
    for i in 0..m.nrows() {
        let norm = m.row(i).norm();
        if norm > 0.0 {
            m.row_mut(i).unscale_mut(norm);
            rhs[i] /= norm;
        }
    }
    let sv = m.clone().singular_values();
    let condition = sv.max() / sv.min();
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(RuinError::Conditioning(format!(
            "linear system for b = {b} has condition number {condition:.3e}"
        )));
    }
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| RuinError::Conditioning(format!("linear system for b = {b} is singular")))?;

    let mut a0 = 0.0;
    let mut terms = Vec::new();
    for (j, unknown) in sys.unknowns.iter().enumerate() {
        match *unknown {
            Unknown::Constant => a0 = x[j],
            Unknown::Real { rate, anchor } => terms.push(ChiTerm {
                coef: Complex64::new(x[j], 0.0),
                rate: Complex64::new(rate, 0.0),
                anchor,
            }),
            Unknown::PairRe { rate, anchor } => {
                let coef = Complex64::new(x[j], x[j + 1]);
                terms.push(ChiTerm { coef, rate, anchor });
                terms.push(ChiTerm {
                    coef: coef.conj(),
                    rate: rate.conj(),
                    anchor,
                });
            }
            Unknown::PairIm { .. } => {}
        }
    }
    Ok(ChiSolution {
        b,
        a0,
        terms,
        condition,
    })
}

/// Probability of reaching `b` before ruin from surplus `u`.
pub fn chi(model: &ModelSpec, u: f64, b: f64) -> Result<f64> {
    if u > b {
        return Err(RuinError::Input(format!(
            "surplus u = {u} exceeds level b = {b}"
        )));
    }
    if u == b {
        return Ok(1.0);
    }
    solve_chi(model, b)?.chi(u)
}

/// Probability of ruin before reaching `b` from surplus `u`.
pub fn xi(model: &ModelSpec, u: f64, b: f64) -> Result<f64> {
    Ok(1.0 - chi(model, u, b)?)
}
