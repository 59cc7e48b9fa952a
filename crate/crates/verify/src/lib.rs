//! Residual checks: every lattice equation, recurrence, Miura map, Lax
//! system, deformation, and autonomous specialization evaluated against a
//! constructed solution, plus the similarity-invariance probe.
//!
//! All checks report a [`Residual`] carrying both the raw magnitude of the
//! sum-to-zero expression and a scale-free normalized value
//! `|sum| / (1 + max |term|)`. Ratio-form identities are cross-multiplied
//! into polynomial form first; the discarded denominators are guarded
//! against degeneracy instead of silently dividing.

mod ids;
mod invariance;
mod residuals;
mod runner;

pub use ids::{standard_catalog, CheckId, EquationId, LaxFamily, MiuraId, RecurrenceId};
pub use invariance::{invariance_check, invariance_deviation, InvarianceOutcome};
pub use residuals::{
    check_residual, equation_residual, lax_residual, lpkp_residual_on_grid, miura_residual,
    phi_sum_residual, recurrence_residual, LpkpForm,
};
pub use runner::{
    interior_points, run_check, CheckOutcome, PointRecord, PointStatus, PoleFilter,
};

use fields::FieldError;
use lattice::LatticeError;
use thiserror::Error;

pub type Scalar = numkit::Scalar;

/// Default pass tolerance on normalized residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Magnitudes at or below this are treated as degenerate denominators.
pub const DENOMINATOR_FLOOR: f64 = 1e-13;
/// τ values below this fraction of the window median flag a pole.
pub const POLE_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("degenerate denominator in {what}: magnitude {magnitude:.3e}")]
    DegenerateDenominator { what: &'static str, magnitude: f64 },
    #[error("{check} requires constant parameter sequences in all directions")]
    NonConstantSequences { check: String },
    #[error("no invertible transform pair found after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("unknown check name: {0:?}")]
    UnknownCheck(String),
    #[error("bad argument list for {name}: {detail}")]
    BadCheckArguments { name: String, detail: String },
}

/// A sum-to-zero residual: the raw magnitude of the sum and the magnitude
/// normalized by `1 + max |term|`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residual {
    pub raw: f64,
    pub normalized: f64,
}

impl Residual {
    /// Keeps whichever of the two has the larger normalized value.
    pub fn max(self, other: Residual) -> Residual {
        if other.normalized > self.normalized {
            other
        } else {
            self
        }
    }
}

/// Residual of a list of scalar terms that should sum to zero.
pub fn norm_terms(terms: &[Scalar]) -> Residual {
    let sum: Scalar = terms.iter().sum();
    let mx = terms.iter().map(|t| t.norm()).fold(0.0_f64, f64::max);
    Residual {
        raw: sum.norm(),
        normalized: sum.norm() / (1.0 + mx),
    }
}

/// Residual of a list of matrix (or vector) terms that should sum to zero,
/// measured entrywise in the max norm.
pub fn norm_matrix_terms(terms: &[&numkit::CMatrix]) -> Residual {
    let mut sum = terms[0].clone();
    for t in &terms[1..] {
        sum = sum.add(t);
    }
    let mx = terms.iter().map(|t| t.max_abs()).fold(0.0_f64, f64::max);
    Residual {
        raw: sum.max_abs(),
        normalized: sum.max_abs() / (1.0 + mx),
    }
}
