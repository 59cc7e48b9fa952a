//! Dense complex linear algebra and truncated-Taylor (jet) arithmetic.
//!
//! Everything here targets small systems (a dozen rows at most): LU with
//! partial pivoting, determinants, and jet (truncated Taylor series)
//! arithmetic in one spectral parameter. All operations are pure functions
//! of immutable inputs and are safe to share across threads.

pub mod jet;
pub mod lu;
pub mod matrix;

pub use jet::{lift_affine, Jet};
pub use lu::{determinant, lu_factor, lu_solve, LuFactors};
pub use matrix::CMatrix;

use num_complex::Complex64;
use thiserror::Error;

/// Scalar type used throughout: double-precision complex.
pub type Scalar = Complex64;

/// Relative pivot floor for LU factorization: a pivot whose magnitude falls
/// below this multiple of the largest max-norm row of the input matrix is
/// treated as singular.
pub const PIVOT_RELATIVE_THRESHOLD: f64 = 1e-14;

/// Minimum magnitude of a jet's leading coefficient for the truncated series
/// reciprocal to be well-defined.
pub const RECIP_MIN_LEADING: f64 = 1e-14;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum NumError {
    /// A pivot fell below `PIVOT_RELATIVE_THRESHOLD` times the row scale.
    #[error("singular matrix: pivot {pivot:.3e} below threshold {threshold:.3e} at elimination step {step}")]
    SingularMatrix {
        pivot: f64,
        threshold: f64,
        step: usize,
    },
    /// Jet reciprocal requested for a series whose constant term is (nearly) zero.
    #[error("jet reciprocal at (near-)zero leading coefficient: |c0| = {magnitude:.3e}")]
    ReciprocalAtZero { magnitude: f64 },
}

/// Convenience constructor for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

/// Convenience constructor for a real-valued complex scalar.
#[inline]
pub fn cr(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}
