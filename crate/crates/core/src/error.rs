use thiserror::Error;

/// Errors produced by model construction, the analytic solvers and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuinError {
    /// An argument lies outside the domain of the operation.
    #[error("invalid input: {0}")]
    Input(String),

    /// The model violates the positive loading condition `c E[W] > E[X]`.
    #[error("positive loading violated: c*E[W] = {premium_per_claim} <= E[X] = {mean_claim}")]
    Loading {
        premium_per_claim: f64,
        mean_claim: f64,
    },

    /// The problem has a structure the solvers do not handle (repeated poles,
    /// missing roots, unpaired complex terms, ...).
    #[error("unsupported structure: {0}")]
    Structure(String),

    /// A linear system or an elimination step is numerically unreliable.
    #[error("numerical conditioning: {0}")]
    Conditioning(String),

    /// A transform was evaluated at one of its poles.
    #[error("pole at s = {re}{im:+}i")]
    Pole { re: f64, im: f64 },
}

pub type Result<T> = std::result::Result<T, RuinError>;
