//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QesError {
    #[error("sector stride q={sector_q} does not match Hamiltonian stride q={spec_q}")]
    StrideMismatch { spec_q: u32, sector_q: u32 },

    #[error("basis index {index} outside sector range 0..={top}")]
    IndexOutOfRange { index: u32, top: u32 },

    #[error("hop k={k} outside 1..={k0}")]
    HopOutOfRange { k: u32, k0: u32 },

    /// The sector is not closed under the Hamiltonian: some coupling out of
    /// the top of the basis is nonzero. `alpha` carries the exact rational
    /// value of the first offending coefficient.
    #[error("invariant subspace violated: alpha_{index} = {alpha} (hop k={k})")]
    InvariantSubspaceViolated { index: u32, k: u32, alpha: String },

    #[error("matrix dimension {dim} exceeds cap {cap} (set QES_BOSE_MAX_DIM to raise)")]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (dim {dim}); matrix dump:\n{dump}"
    )]
    NoConvergence {
        sweeps: usize,
        dim: usize,
        dump: String,
    },

    /// 2x2 closed form hit a negative discriminant: the input pair is not
    /// consistent with a Hermitian block and the levels form a complex pair.
    #[error("negative discriminant {disc}: eigenvalue pair is complex (non-Hermitian input)")]
    ComplexPair { disc: f64 },

    #[error("not a stride-2 single-hop quadratic family: {0}")]
    NotH1Family(String),

    #[error("truncation cap n_max={n_max} too small; need at least {needed}")]
    TruncationTooSmall { n_max: usize, needed: usize },

    #[error("two-level index L must be >= 1")]
    TwoLevelIndexZero,

    #[error(
        "shape (s0={s0}, k0={k0}) cannot be quasi-exactly solvable: \
         n2={n2} unknowns <= n1={n1} conditions"
    )]
    InfeasibleShape {
        s0: u32,
        k0: u32,
        n1: usize,
        n2: usize,
    },

    #[error("non-finite matrix entry at ({row}, {col}): coefficients overflow the double range")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid sector: {0}")]
    SectorInvalid(String),

    #[error("invalid Hamiltonian: {0}")]
    SpecInvalid(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QesError>;
