//! Survival and maximum-surplus probabilities for risk processes whose claim
//! sizes and inter-claim times are coupled by an FGM copula.
//!
//! The analytic solvers invert rational Laplace transforms for exponential
//! claims with Poisson ([`survival_classical`]) or Erlang(2)
//! ([`survival_erlang2`]) arrivals, and solve the boundary-value problem for
//! the probability of reaching a level before ruin ([`solve_chi`]). The
//! [`mc`] module simulates the same processes.
//!
//! ```
//! use ruin_core::{survival_classical, ModelSpec};
//!
//! let model = ModelSpec::classical(1.5, 1.0, 1.0, 0.5)?;
//! let sol = survival_classical(&model)?;
//! assert!((sol.phi0 - 0.3548).abs() < 5e-4);
//! # Ok::<(), ruin_core::RuinError>(())
//! ```

pub mod classical;
pub mod dependence;
pub mod erlang;
pub mod error;
mod inversion;
pub mod max_surplus;
pub mod mc;
pub mod poly;

pub use classical::{classical_lt, solve_phi0, survival_classical, ClassicalSolution};
pub use dependence::{
    f_tilde, fgm_cdf, fgm_density, h_aux, h_tilde, joint_density, k_aux, sample_pair, ExpClaim,
    FgmParam, InterArrival, ModelSpec,
};
pub use erlang::{
    compare_sign_variants, erlang_lt, select_sign_variant, solve_delta0, survival_erlang2,
    survival_erlang2_with, EliminationRule, ErlangSolution, SignVariant, SignVariantReport,
    VariantOutcome,
};
pub use error::{Result, RuinError};
pub use max_surplus::{
    chi, chi_characteristic, chi_linear_system, solve_chi, xi, ChiSolution, ChiSystem, ChiTerm,
};
pub use mc::{
    estimate_reach_prob, estimate_survival, simulate_path, OutcomeKind, PathOutcome, SimEstimate,
    StopRule, SurvivalEstimate,
};
pub use poly::{
    expsum_eval, partial_fractions, poly_mul, poly_roots, ExpSum, ExpTerm, Polynomial, RationalFn,
    RootClass, RootSet,
};
