//! A 2D Stokes solver built on an interior-penalty discontinuous Galerkin
//! discretization, with an optional embedded Trefftz reduction that condenses
//! the global system onto the elementwise kernel of the strong PDE operator.
//!
//! The crate is organized bottom-up:
//!
//! * [`mesh`] — structured triangulations of the unit square,
//! * [`polybasis`] — scaled monomial bases and Gauss quadrature on triangles
//!   and segments,
//! * [`stokes_dg`] — the DG function space and assembly of the saddle-point
//!   system,
//! * [`trefftz`] — per-element constraint matrices, kernel embeddings, and
//!   condensation,
//! * [`solver`] — a direct banded solver for the bordered global system,
//! * [`analysis`] — manufactured problems, mesh-dependent norms, error
//!   reports, and convergence rates,
//! * [`cli`] — the command implementations behind the `stokes-trefftz`
//!   binary.

pub mod analysis;
pub mod cli;
pub mod mesh;
pub mod polybasis;
pub mod solver;
pub mod stokes_dg;
pub mod trefftz;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A factorization or triangular solve could not be completed.
    #[error("solver failure: {0}")]
    SolverFailure(String),
    /// A numerical rank decision had no clear singular-value gap.
    #[error("ambiguous numerical rank: {0}")]
    AmbiguousRank(String),
    /// A computed dimension disagrees with its closed-form value.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Underlying I/O failure (CSV or matrix dumps).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
