//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bidegree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("operation requires bidegree k >= 1")]
    DegenerateDegree,
    #[error("dimension n must be >= 1")]
    InvalidDimension,
    #[error("polynomial spaces differ: (n={n_left}, k={k_left}) vs (n={n_right}, k={k_right})")]
    SpaceMismatch {
        n_left: usize,
        k_left: usize,
        n_right: usize,
        k_right: usize,
    },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("frame is not orthonormal (deviation {deviation:.3e})")]
    InvalidFrame { deviation: f64 },
    #[error("invalid embedding terms: {0}")]
    InvalidSpec(String),
    #[error("finite-difference step {0:.3e} is below the underflow floor 1e-12")]
    StepUnderflow(f64),
    #[error("direction is not horizontal at the base point (|<u,d>| = {0:.3e})")]
    NotHorizontal(f64),
    #[error("the symmetry operator admits only eigenvalues +1 and -1")]
    InvalidEigenvalue,
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported derivative order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(u8),
}
