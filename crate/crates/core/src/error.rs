use thiserror::Error;

use crate::sdp::SolveStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("state is not normalized (norm or trace deviation {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("map is not CPTP: {0}")]
    NotCptp(String),

    #[error("POVM effects do not sum to identity (deviation {deviation:.3e})")]
    IncompletePovm { deviation: f64 },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("conic solver did not reach optimality: {status:?} (gap {gap:.3e}, after {iterations} iterations)")]
    Solver {
        status: SolveStatus,
        gap: f64,
        iterations: usize,
    },

    #[error("game is outside the classical-normalized set: {0}")]
    GameOutsideClassicalSet(String),

    #[error("descriptor error: {0}")]
    Descriptor(String),
}
