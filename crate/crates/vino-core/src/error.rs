//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulation, dataset, and training layers.
#[derive(Debug, Error)]
pub enum VinoError {
    /// Rayleigh coefficients require 0 < f1 < f2.
    #[error("degenerate frequencies: require 0 < f1 < f2, got f1={f1} Hz, f2={f2} Hz")]
    DegenerateFrequencies { f1: f64, f2: f64 },

    /// A damage value fell outside [0, delta_max].
    #[error("invalid damage field: {0}")]
    InvalidDamage(String),

    /// The iterative eigensolver did not reach its tolerance.
    #[error("eigensolver did not converge within {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A physical parameter that must be non-negative was negative.
    #[error("negative input: {0}")]
    NegativeInput(String),

    /// Denominator of a ratio was zero or negative.
    #[error("non-positive denominator: {0}")]
    NonPositiveDenominator(String),

    /// PSD evaluation requires a positive spatial frequency.
    #[error("non-positive spatial frequency: n={0}")]
    NonPositiveFrequency(f64),

    /// No spectral component fell inside [n_min, n_max].
    #[error("empty frequency band: n_min={n_min}, n_max={n_max}, delta_n={delta_n}")]
    EmptyBand { n_min: f64, n_max: f64, delta_n: f64 },

    /// The Newmark effective matrix could not be factorized.
    #[error("singular effective matrix at step {step}: {detail}")]
    SingularEffectiveMatrix { step: usize, detail: String },

    /// The time integration diverged.
    #[error("non-finite state at step {step} (t={time:.6} s)")]
    NonFiniteState { step: usize, time: f64 },

    /// A sensor position fell outside the span.
    #[error("sensor position {position} m outside span [0, {span}] m")]
    OutOfSpan { position: f64, span: f64 },

    /// Covariance matrix was not positive definite even after jitter.
    #[error("Cholesky factorization failed at pivot {pivot} (value {value:.3e})")]
    CholeskyFailure { pivot: usize, value: f64 },

    /// Bump peak outside the admissible damage range.
    #[error("bump peak {peak} outside [0, {delta_max}]")]
    PeakOutOfRange { peak: f64, delta_max: f64 },

    /// A normalization channel had zero standard deviation.
    #[error("zero standard deviation in channel {0}; substituted std = 1")]
    ZeroStd(usize),

    /// Tensor or parameter dimensions do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Backward pass invoked with a cache from a different forward pass.
    #[error("missing forward state: {0}")]
    MissingForwardState(String),

    /// Relative L2 loss is undefined for a zero-norm target.
    #[error("zero target norm in sample {0}")]
    ZeroTargetNorm(usize),

    /// Freezing left no trainable parameters.
    #[error("freeze specification leaves no trainable parameter group")]
    EmptyTrainable,

    /// Training loss became non-finite.
    #[error("non-finite loss at epoch {epoch}, batch {batch}: {loss}")]
    NaNLoss { epoch: usize, batch: usize, loss: f64 },

    /// Configuration document rejected.
    #[error("config error: {0}")]
    Config(String),

    /// Dataset or checkpoint file problem.
    #[error("format error in {path}: {detail}")]
    Format { path: String, detail: String },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Failure while generating one dataset sample.
    #[error("sample {index} failed: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<VinoError>,
    },
}

pub type Result<T> = std::result::Result<T, VinoError>;
