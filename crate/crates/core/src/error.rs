use thiserror::Error;

/// Errors produced by construction checks and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { got: usize, min: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be square with d = {expected_dim}, got {rows} rows of width {cols}")]
    NotSquare {
        expected_dim: usize,
        rows: usize,
        cols: usize,
    },

    #[error("entries must be finite (no NaN or infinity)")]
    NonFiniteEntries,

    #[error(
        "matrix is not unitary: max entry of |U†U - I| is {max_deviation:.3e}, tolerance {tol:.1e}"
    )]
    NotUnitary { max_deviation: f64, tol: f64 },

    #[error("norm exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("Rényi order must be positive, got {0}")]
    InvalidOrder(f64),

    #[error("Hölder exponent must lie in the open interval (1, 2), got {0}")]
    InvalidHolderExponent(f64),

    #[error(
        "s = {s} is too close to 2: the prefactor 2s/(2-s) = {prefactor:.1} amplifies \
         norm error by ~4/(2-s); pass a smaller s (at most {s_max})"
    )]
    PrefactorBlowup { s: f64, prefactor: f64, s_max: f64 },

    #[error("angle {got} must lie in (0, {max}]; canonicalize the matrix first")]
    AngleOutOfRange { got: f64, max: f64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("invalid probability vector: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("state is not normalized: | ||a||_2 - 1 | = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("non-finite value produced during {context}")]
    NonFinite { context: String },

    #[error(
        "no power-iteration seed converged: {n_seeds} seeds, {max_iterations} iterations each, \
         epsilon {epsilon:.1e}; best norm reached {best_norm}"
    )]
    NonConvergence {
        n_seeds: usize,
        max_iterations: usize,
        epsilon: f64,
        best_norm: f64,
    },

    #[error(
        "overlap magnitudes are inconsistent with a 2x2 unitary: {reason} (deviation {deviation:.3e})"
    )]
    OverlapPatternInconsistent { reason: String, deviation: f64 },

    #[error("qubit canonical form requires a 2x2 matrix, got {got}x{got}")]
    NotQubit { got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix file rejected: {0}")]
    MatrixFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
