//! Error type shared by all modules of the crate.
//!
//! Every fallible operation returns [`Result`]. Variants carry enough
//! context (byte offsets, abscissae, magnitudes) for a caller to report
//! the failure without re-deriving it.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by parsing, validation and the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Syntax error while parsing a coefficient expression.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier that is neither `x` nor a known function name.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Evaluation left the domain of a real-valued expression.
    #[error("domain error at x = {x}: {message}")]
    Domain { x: f64, message: String },

    /// A problem definition failed validation.
    #[error("invalid problem: {message}")]
    InvalidProblem { message: String },

    /// A config file could not be understood.
    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },

    /// The step-count limit of the integrator was exhausted.
    #[error("integrator exceeded {max_steps} steps at x = {x}")]
    StepLimit { x: f64, max_steps: u64 },

    /// The error control forced the step size below machine resolution,
    /// which indicates stiffness or a singularity at the reported point.
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },

    /// An argument violated a documented precondition.
    #[error("invalid argument: {message}")]
    InvalidArgument { message: String },

    /// The rational transform from Psi back to M was evaluated too close
    /// to a pole of M; the denominator magnitude is reported.
    #[error(
        "M-transform denominator too small ({denominator_magnitude:.3e}); \
         lambda is too close to a pole"
    )]
    PoleProximity { denominator_magnitude: f64 },

    /// Interpolation nodes were not strictly ascending and distinct.
    #[error("interpolation nodes must be strictly ascending and distinct")]
    NodesNotAscending,

    /// The polynomial degree requested from the interpolation stage is
    /// beyond the supported cap.
    #[error("interpolation degree {m} exceeds the supported cap of {cap}")]
    DegreeTooLarge { m: usize, cap: usize },

    /// A Psi sample at offset index `j` failed; the cause is attached.
    #[error("Psi sample {j} failed: {source}")]
    Sample {
        j: usize,
        #[source]
        source: Box<Error>,
    },

    /// No pole was found in the requested bracket; the best grid point
    /// and the denominator magnitude reached there are reported.
    #[error(
        "no pole found in bracket: denominator minimum {denominator_magnitude:.3e} \
         at lambda = {lambda} stayed above the pole tolerance"
    )]
    PoleNotFound {
        lambda: f64,
        denominator_magnitude: f64,
    },

    /// Both leading denominator coefficients vanished, so the Laurent
    /// recovery has no valid branch.
    #[error("numerical breakdown: {message}")]
    NumericalBreakdown { message: String },

    /// The Taylor stage produced fewer coefficients than a downstream
    /// formula requires.
    #[error("need at least {needed} Taylor coefficients, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },

    /// Reading a config file from disk failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
