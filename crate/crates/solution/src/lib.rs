//! Construction of exact solution data for the lattice hierarchy.
//!
//! A solution is specified by two spectral matrices in block-diagonal
//! canonical form (diagonal eigenvalue runs and Jordan chains), a constant
//! coupling matrix, and per-block plane-wave amplitudes. From these the
//! builder assembles, at every lattice point, the wave vectors `r` and `s`
//! and the closed-form coefficient matrix `M = F·G·H`, where `F` and `H`
//! carry the plane-wave jets of the two spectra and `G` is a constant
//! coupling factor determined by the eigenvalues alone.
//!
//! Every `M` handed out is certified on the spot against the defining
//! linear relation `Γ·M + M·Λ = r·s`; an independent brute-force solver for
//! that relation (`sylvester_oracle`) exists so tests never have to trust
//! the closed form. Similarity transformations of the whole data set are
//! provided to exercise invariance of derived quantities.

mod builder;
mod oracle;
pub mod presets;
mod source;
mod spectral;
mod transform;
mod waves;

pub use builder::{build_r_s, SolutionBuilder, SolutionState};
pub use oracle::sylvester_oracle;
pub use source::{PointData, SystemSource};
pub use spectral::{build_gamma_lambda, constant_factor, BlockSpec, SpectralConfig};
pub use transform::{similarity_transform, Transformed};
pub use waves::{plane_wave, WaveSide};

use lattice::{LatticeError, LatticePoint};
use numkit::NumError;
use thiserror::Error;

pub type Scalar = numkit::Scalar;

/// Relative bound on `‖Γ·M + M·Λ − r·s‖` accepted when building `M`;
/// violations indicate an implementation bug, not a user error.
pub const SYLVESTER_RESIDUAL_BOUND: f64 = 1e-11;

#[derive(Debug, Clone, Error)]
pub enum SolutionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("invalid spectral configuration: {0}")]
    InvalidSpectralConfig(String),
    #[error(
        "defining relation residual {residual:.3e} exceeds bound {bound:.3e} at point {point}"
    )]
    SylvesterResidualTooLarge {
        residual: f64,
        bound: f64,
        point: LatticePoint,
    },
}
