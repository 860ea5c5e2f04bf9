//! Risk model definition and the FGM dependence between claim sizes and
//! inter-claim times.
//!
//! The joint density of a (claim, waiting time) pair is
//!
//! ```text
//! f(x, t) = f_X(x) f_W(t) [1 + θ (1 - 2 F_X(x)) (1 - 2 F_W(t))]
//!         = f_X(x) f_W(t) + θ h_X(x) k_W(t)
//! ```
//!
//! with `h_X = f_X (1 - 2 F_X)` and `k_W = f_W (1 - 2 F_W)`. Both auxiliary
//! functions integrate to zero, so the marginals are unchanged by θ.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RuinError};
use crate::poly::{Polynomial, RationalFn};

/// Parameter of the FGM copula, restricted to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgmParam(f64);

impl FgmParam {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(RuinError::Input(format!(
                "FGM parameter must lie in [-1, 1], got {theta}"
            )));
        }
        Ok(Self(theta))
    }

    pub fn independence() -> Self {
        Self(0.0)
    }

    #[inline]
    pub fn theta(self) -> f64 {
        self.0
    }

    pub fn is_independent(self) -> bool {
        self.0 == 0.0
    }

    /// Inverse of the conditional copula `u -> ∂C/∂v (u, v)` at probability `p`.
    ///
    /// The conditional CDF is `u + a u (1 - u)` with `a = θ (1 - 2v)`; the root in
    /// `[0, 1]` is taken from the cancellation-free form of the quadratic formula.
    pub fn conditional_quantile(self, v: f64, p: f64) -> f64 {
        let a = self.0 * (1.0 - 2.0 * v);
        if a.abs() < 1e-12 || p <= 0.0 {
            return p.max(0.0);
        }
        let b = 1.0 + a;
        let disc = (b * b - 4.0 * a * p).max(0.0);
        (2.0 * p / (b + disc.sqrt())).clamp(0.0, 1.0)
    }
}

/// Exponentially distributed claim amounts with rate `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpClaim {
    alpha: f64,
}

impl ExpClaim {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(RuinError::Input(format!(
                "claim rate must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Mean claim amount `m1 = 1 / alpha`.
    #[inline]
    pub fn mean(&self) -> f64 {
        1.0 / self.alpha
    }

    pub fn density(&self, x: f64) -> f64 {
        self.alpha * (-self.alpha * x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        -(-self.alpha * x).exp_m1()
    }

    pub fn quantile(&self, u: f64) -> f64 {
        -(-u).ln_1p() / self.alpha
    }

    /// `f̃(s) = α / (α + s)` as an exact rational function.
    pub fn laplace_rational(&self) -> RationalFn {
        RationalFn::new(
            Polynomial::new(vec![self.alpha]),
            Polynomial::new(vec![self.alpha, 1.0]),
        )
        .expect("nonzero denominator")
    }

    /// `h̃(s) = 2α/(2α + s) - α/(α + s) = α s / ((α + s)(2α + s))`.
    pub fn h_laplace_rational(&self) -> RationalFn {
        let a = self.alpha;
        RationalFn::new(
            Polynomial::new(vec![0.0, a]),
            Polynomial::new(vec![a, 1.0]).mul(&Polynomial::new(vec![2.0 * a, 1.0])),
        )
        .expect("nonzero denominator")
    }
}

/// Distribution of the waiting time between claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InterArrival {
    /// Exponential with rate `lambda` (Poisson claim arrivals).
    Poisson { lambda: f64 },
    /// Erlang with shape 2 and rate `beta`, density `β² t e^{-βt}`.
    Erlang2 { beta: f64 },
}

impl InterArrival {
    pub fn poisson(lambda: f64) -> Result<Self> {
        check_rate("Poisson rate", lambda)?;
        Ok(Self::Poisson { lambda })
    }

    pub fn erlang2(beta: f64) -> Result<Self> {
        check_rate("Erlang rate", beta)?;
        Ok(Self::Erlang2 { beta })
    }

    pub fn rate(&self) -> f64 {
        match *self {
            Self::Poisson { lambda } => lambda,
            Self::Erlang2 { beta } => beta,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Poisson { lambda } => 1.0 / lambda,
            Self::Erlang2 { beta } => 2.0 / beta,
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        match *self {
            Self::Poisson { lambda } => lambda * (-lambda * t).exp(),
            Self::Erlang2 { beta } => beta * beta * t * (-beta * t).exp(),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Self::Poisson { lambda } => -(-lambda * t).exp_m1(),
            Self::Erlang2 { beta } => {
                let z = beta * t;
                // 1 - e^{-z}(1 + z), written to keep precision for small z
                -(-z).exp_m1() - z * (-z).exp()
            }
        }
    }

    /// Inverse CDF. Closed form for the exponential; Newton iteration with a
    /// bisection fallback for the Erlang case.
    pub fn quantile(&self, v: f64) -> f64 {
        match *self {
            Self::Poisson { lambda } => -(-v).ln_1p() / lambda,
            Self::Erlang2 { beta } => erlang2_unit_quantile(v) / beta,
        }
    }
}

fn check_rate(what: &str, rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(RuinError::Input(format!(
            "{what} must be positive and finite, got {rate}"
        )))
    }
}

const QUANTILE_TOL: f64 = 1e-12;
const QUANTILE_MAX_ITER: usize = 100;

/// `z - ln(1 + z)`, with a series near zero where the difference cancels.
fn z_minus_log1p(z: f64) -> f64 {
    if z < 1e-2 {
        let mut term = -z;
        let mut sum = 0.0;
        for k in 2..=9 {
            term *= -z;
            sum += term / k as f64;
        }
        sum
    } else {
        z - z.ln_1p()
    }
}

/// Solves `1 - e^{-z}(1 + z) = v` for `z ≥ 0` (Erlang(2) with unit rate).
///
/// Newton iteration on `z - ln(1+z) = -ln(1-v)`, which is convex and
/// increasing in `z`, so iterates settle above the root after one step and
/// then converge quadratically.
/// Steps leaving the current bracket fall back to bisection.
fn erlang2_unit_quantile(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return f64::INFINITY;
    }
    let target = -(-v).ln_1p();
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    let mut z = if v < 0.1 {
        (2.0 * target).sqrt()
    } else {
        target + target.ln_1p()
    };
    for _ in 0..QUANTILE_MAX_ITER {
        let g = z_minus_log1p(z) - target;
        if g == 0.0 {
            break;
        }
        if g > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let next = z - g * (1.0 + z) / z;
        let next = if next >= lo && next <= hi {
            next
        } else if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            2.0 * z
        };
        let step = (next - z).abs();
        z = next;
        // Newton error after this step is about step² / (2 z² (1 + z)) relative
        if step * step <= QUANTILE_TOL * z * z {
            break;
        }
    }
    z
}

/// Full risk-process definition: premium rate, marginals and copula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    premium: f64,
    claim: ExpClaim,
    arrival: InterArrival,
    copula: FgmParam,
}

impl ModelSpec {
    /// Builds a model, rejecting non-positive premiums and models without a
    /// positive safety loading.
    pub fn new(
        premium: f64,
        claim: ExpClaim,
        arrival: InterArrival,
        copula: FgmParam,
    ) -> Result<Self> {
        if !(premium > 0.0 && premium.is_finite()) {
            return Err(RuinError::Input(format!(
                "premium rate must be positive and finite, got {premium}"
            )));
        }
        let premium_per_claim = premium * arrival.mean();
        let mean_claim = claim.mean();
        if premium_per_claim <= mean_claim {
            return Err(RuinError::Loading {
                premium_per_claim,
                mean_claim,
            });
        }
        Ok(Self {
            premium,
            claim,
            arrival,
            copula,
        })
    }

    /// Exponential claims with Poisson arrivals.
    pub fn classical(premium: f64, alpha: f64, lambda: f64, theta: f64) -> Result<Self> {
        Self::new(
            premium,
            ExpClaim::new(alpha)?,
            InterArrival::poisson(lambda)?,
            FgmParam::new(theta)?,
        )
    }

    /// Exponential claims with Erlang(2, beta) arrivals.
    pub fn erlang2(premium: f64, alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        Self::new(
            premium,
            ExpClaim::new(alpha)?,
            InterArrival::erlang2(beta)?,
            FgmParam::new(theta)?,
        )
    }

    #[inline]
    pub fn premium(&self) -> f64 {
        self.premium
    }

    #[inline]
    pub fn claim(&self) -> &ExpClaim {
        &self.claim
    }

    #[inline]
    pub fn arrival(&self) -> &InterArrival {
        &self.arrival
    }

    #[inline]
    pub fn copula(&self) -> FgmParam {
        self.copula
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.copula.theta()
    }

    /// Same marginals and premium, different dependence parameter.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(
            self.premium,
            self.claim,
            self.arrival,
            FgmParam::new(theta)?,
        )
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(RuinError::Input(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

fn check_nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(RuinError::Input(format!(
            "{name} must be nonnegative and finite, got {x}"
        )))
    }
}

/// FGM copula `C(u, v) = uv + θ uv (1-u)(1-v)`.
pub fn fgm_cdf(u: f64, v: f64, theta: FgmParam) -> Result<f64> {
    check_unit("u", u)?;
    check_unit("v", v)?;
    let uv = u * v;
    Ok(uv + theta.theta() * uv * (1.0 - u) * (1.0 - v))
}

/// FGM copula density `1 + θ (1-2u)(1-2v)`.
pub fn fgm_density(u: f64, v: f64, theta: FgmParam) -> Result<f64> {
    check_unit("u", u)?;
    check_unit("v", v)?;
    Ok(1.0 + theta.theta() * (1.0 - 2.0 * u) * (1.0 - 2.0 * v))
}

/// Joint density of a claim amount `x` and the waiting time `t` preceding it.
pub fn joint_density(x: f64, t: f64, model: &ModelSpec) -> Result<f64> {
    check_nonnegative("claim amount", x)?;
    check_nonnegative("waiting time", t)?;
    let claim = model.claim();
    let arrival = model.arrival();
    let copula = 1.0 + model.theta() * (1.0 - 2.0 * claim.cdf(x)) * (1.0 - 2.0 * arrival.cdf(t));
    Ok(claim.density(x) * arrival.density(t) * copula)
}

/// `h_X(x) = f_X(x)(1 - 2F_X(x)) = 2α e^{-2αx} - α e^{-αx}`.
pub fn h_aux(x: f64, claim: &ExpClaim) -> Result<f64> {
    check_nonnegative("claim amount", x)?;
    let a = claim.alpha();
    let e = (-a * x).exp();
    Ok(a * e * (2.0 * e - 1.0))
}

/// `k_W(t) = f_W(t)(1 - 2F_W(t))`.
pub fn k_aux(t: f64, arrival: &InterArrival) -> Result<f64> {
    check_nonnegative("waiting time", t)?;
    Ok(arrival.density(t) * (1.0 - 2.0 * arrival.cdf(t)))
}

fn check_pole(s: Complex64, pole: f64) -> Result<()> {
    if (s - pole).norm() < 1e-14 * pole.abs().max(1.0) {
        Err(RuinError::Pole { re: s.re, im: s.im })
    } else {
        Ok(())
    }
}

/// Laplace transform of the claim density, `α/(α + s)`.
pub fn f_tilde(s: Complex64, claim: &ExpClaim) -> Result<Complex64> {
    let a = claim.alpha();
    check_pole(s, -a)?;
    Ok(a / (s + a))
}

/// Laplace transform of `h_X`, `2α/(2α + s) - α/(α + s)`.
pub fn h_tilde(s: Complex64, claim: &ExpClaim) -> Result<Complex64> {
    let a = claim.alpha();
    check_pole(s, -a)?;
    check_pole(s, -2.0 * a)?;
    Ok(2.0 * a / (s + 2.0 * a) - a / (s + a))
}

/// Draws one dependent `(w, x)` pair by conditional inversion: the waiting
/// time from its own quantile, then the claim from the conditional copula.
pub fn sample_pair<R: Rng + ?Sized>(model: &ModelSpec, rng: &mut R) -> (f64, f64) {
    let v: f64 = rng.random();
    let w = model.arrival().quantile(v);
    let p: f64 = rng.random();
    let u = model.copula().conditional_quantile(v, p);
    (w, model.claim().quantile(u))
}
