//! Quasi-exactly solvable sectors of anharmonic Bose Hamiltonians.
//!
//! Hamiltonians that are polynomial in the number operator plus stride-`q`
//! raising/lowering couplings preserve particle-number residue classes.
//! When linear cutoff conditions on the coupling coefficients hold, one
//! residue sector closes into a finite invariant subspace, and that part
//! of the spectrum becomes exactly computable from a small matrix while
//! the rest of the spectrum stays out of reach. This crate
//!
//! * solves the cutoff conditions exactly (arbitrary-precision rational
//!   linear algebra — an invariant subspace either exists or it does not,
//!   so there are no epsilon comparisons on that path),
//! * assembles the invariant-subspace matrix, maps it to the orthonormal
//!   number basis by a factorial similarity, and diagonalizes it (with
//!   closed forms for the small stride-2 cases),
//! * certifies every algebraic level against a brute-force truncated
//!   number-basis diagonalization that shares no construction code with
//!   the subspace route,
//! * extends the construction to two-mode products `Σ_i H_i ⊗ h_i`.
//!
//! Entry points: [`model::HamiltonianSpec`], [`model::SectorBasis`],
//! [`conditions`], [`spectra`], [`oracle`], [`multimode`]. The `examples/`
//! directory walks through each capability; a thin `qes-bose` binary
//! exposes the same operations on config files.

pub mod cli;
pub mod conditions;
pub mod config;
pub mod dense;
pub mod emit;
pub mod error;
pub mod model;
pub mod multimode;
pub mod oracle;
pub mod rational;
pub mod spectra;

pub use error::{QesError, Result};
pub use model::{HamiltonianSpec, SectorBasis, Validity, ValidityStatus};
pub use rational::Rational;
