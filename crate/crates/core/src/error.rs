use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (defect {defect:.3e} exceeds tolerance {tol:.1e})")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("matrix is not hermitian (defect {defect:.3e} exceeds tolerance {tol:.1e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is singular to working precision (smallest singular value {sigma_min:.3e})")]
    SingularMatrix { sigma_min: f64 },

    #[error("winding invariant undefined: commutator norm {delta} is not below 2")]
    InvariantUndefined { delta: f64 },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("determinant path mesh too coarse after {steps} steps")]
    MeshTooCoarse { steps: usize },

    #[error("indices agree; no distance bound is claimed")]
    NoObstruction,

    #[error("series truncated at K = {series_k}; tail bound {tail_bound:.3e} does not certify six digits")]
    AccuracyNotCertified { series_k: usize, tail_bound: f64 },

    #[error("commutator norm {delta:.6} exceeds the certified threshold {threshold}")]
    ThresholdExceeded { delta: f64, threshold: f64 },

    #[error("spectral gap closed: eigenvalue {eigenvalue:.3e} inside tolerance {gap_tol:.1e}")]
    GapClosed { eigenvalue: f64, gap_tol: f64 },

    #[error("odd dimension {0}; the Pfaffian needs an even dimension")]
    OddDimension(usize),

    #[error("matrix is not skew-symmetric (defect {defect:.3e})")]
    NotSkewSymmetric { defect: f64 },

    #[error("matrix is not anti-self-dual under the doubled dual (defect {defect:.3e})")]
    NotAntiSelfDual { defect: f64 },

    #[error("matrix is not self-dual (defect {defect:.3e})")]
    NotSelfDual { defect: f64 },

    #[error("self-duality lost in the logarithm (drift {drift:.3e}); a Kramers pair straddles the branch cut")]
    SelfDualityLost { drift: f64 },

    #[error("commutator norm {delta:.6} is above 1/8; the log method is not certified")]
    LogMethodUncertified { delta: f64 },

    #[error("invalid trigonometric polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("table row {row} drifted: stored {stored}, recomputed {computed}")]
    TableDrift { row: String, stored: f64, computed: f64 },

    #[error("no gap guarantee at delta = {delta:.6}: beta = {beta:.6} >= 1")]
    NoGuarantee { delta: f64, beta: f64 },

    #[error("mesh step between t = {t0:.6} and t = {t1:.6} is {step:.6}, above the allowed 0.2236")]
    MeshViolation { t0: f64, t1: f64, step: f64 },

    #[error("certification failed: bound {value:.6} >= 0.95 at stage {stage}, t = {t:.6}")]
    CertificationFailed { stage: u8, t: f64, value: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that still come with a usable (but uncertified) result when the
    /// caller opts in.
    pub fn is_soft(&self) -> bool {
        matches!(
            self,
            Error::ThresholdExceeded { .. } | Error::LogMethodUncertified { .. }
        )
    }
}
