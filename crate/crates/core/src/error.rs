//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Tunnel coupling and detuning both vanish; the mixing angle is
    /// undefined.
    #[error("zero splitting: tunnel coupling and detuning are both zero")]
    ZeroSplitting,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular steady-state system: {0}")]
    SingularSystem(String),

    #[error("step size underflow at t = {time:.6e} s")]
    StepSizeUnderflow { time: f64 },

    #[error("step budget exhausted after {steps} steps at t = {time:.6e} s")]
    StepBudgetExhausted { steps: usize, time: f64 },

    #[error("state invariant violated at t = {time:.6e} s: {what}")]
    InvariantViolated { time: f64, what: String },

    #[error("state invariant violated: {0}")]
    StateInvariant(String),

    /// Truncated Hilbert space would exceed the hard 512-dimension cap.
    #[error("Hilbert space too large: 3 * {n_fock} = {dim} exceeds 512")]
    DimensionOverflow { n_fock: usize, dim: usize },

    /// The Liouvillian null space is not one-dimensional at the working
    /// precision; `ratio` is the second-smallest singular value over the
    /// largest.
    #[error("steady state not unique: second-smallest singular value is {ratio:.3e} of scale")]
    NonUniqueSteadyState { ratio: f64 },

    /// Steady state puts too much weight on the top Fock level.
    #[error("Fock truncation limited at n_fock = {n_fock}: top-state population {population:.3e}")]
    TruncationLimited { n_fock: usize, population: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergent(String),

    /// The dispersive Raman model needs a nonzero detuning.
    #[error("zero detuning: the dispersive model requires epsilon != 0")]
    ZeroDetuning,

    /// Optimal detuning diverges when the metastable states do not decohere.
    #[error("optimal detuning diverges: metastable decoherence rate is zero")]
    OptimumDiverges,

    #[error("effective coupling is zero; transfer time diverges")]
    ZeroCoupling,

    #[error("non-finite data: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
