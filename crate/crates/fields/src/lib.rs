//! Scalar fields derived from a solution system: the two-index master
//! contraction, the named lattice variables built from it, the τ-function,
//! and the deformed variables whose products absorb the lattice parameters.
//!
//! Every master-function value is computed along two independent routes
//! (through `(I+MC)^{-1}` on the column side and `(I+CM)^{-1}` on the row
//! side) and cross-checked on the spot, so a single evaluation already
//! certifies the underlying algebra.

mod deform;
mod evaluator;

pub use deform::DeformedId;
pub use evaluator::Evaluator;

use lattice::{LatticeError, LatticePoint, ParamSelector};
use numkit::NumError;
use solution::SolutionError;
use thiserror::Error;

pub type Scalar = numkit::Scalar;

/// Relative bound on the disagreement of the two master-function routes.
pub const ROUTE_AGREEMENT_BOUND: f64 = 1e-11;
/// Relative bound on the two determinant forms of τ.
pub const TAU_IDENTITY_BOUND: f64 = 1e-11;

#[derive(Debug, Clone, Error)]
pub enum FieldError {
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("tau vanishes at {point}: the solution has a pole there")]
    TauZero { point: LatticePoint },
    #[error("shift matrix with offset {value} on the {side} side is singular")]
    SingularShift { value: Scalar, side: &'static str },
    #[error(
        "master function routes disagree at {point} for (i, j) = ({i}, {j}): \
         {route1} vs {route2}"
    )]
    InternalMismatch {
        point: LatticePoint,
        i: i64,
        j: i64,
        route1: Scalar,
        route2: Scalar,
    },
    #[error("zero transformation factor: {0}")]
    ZeroTransformFactor(String),
    #[error("invalid deformation constants: {0}")]
    InvalidConstants(String),
}

/// Constants of the deformation maps and the z-offset. All divisor
/// constants must be nonzero; the additive offsets are unconstrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformConstants {
    pub x0: Scalar,
    pub y0: Scalar,
    pub yp0: Scalar,
    pub xi0: Scalar,
    pub eta0: Scalar,
    pub zp0: Scalar,
    pub sigma0: Scalar,
    pub z0: Scalar,
}

impl DeformConstants {
    /// The values used across tests and demo configs.
    pub fn reference() -> Self {
        DeformConstants {
            x0: Scalar::new(0.3, 0.0),
            y0: Scalar::new(1.2, 0.0),
            yp0: Scalar::new(0.8, 0.0),
            xi0: Scalar::new(1.1, 0.0),
            eta0: Scalar::new(0.9, 0.0),
            zp0: Scalar::new(1.4, 0.0),
            sigma0: Scalar::new(0.7, 0.0),
            z0: Scalar::new(0.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        let divisors = [
            ("y0", self.y0),
            ("yp0", self.yp0),
            ("xi0", self.xi0),
            ("eta0", self.eta0),
            ("zp0", self.zp0),
            ("sigma0", self.sigma0),
        ];
        for (name, value) in divisors {
            if value.norm() == 0.0 {
                return Err(FieldError::InvalidConstants(format!("{name} must be nonzero")));
            }
        }
        Ok(())
    }
}

impl Default for DeformConstants {
    fn default() -> Self {
        Self::reference()
    }
}

/// Arguments of the master contraction: integer powers on both sides and
/// shift offsets picked by selectors (resolved at the evaluation point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterArgs {
    pub i: i64,
    pub j: i64,
    pub a: ParamSelector,
    pub b: ParamSelector,
}

/// Named scalar fields. Selector-carrying variants resolve their selectors
/// at the point being evaluated, so a point-dependent selector makes the
/// field a genuine composite of the underlying two-parameter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldId {
    /// The raw master contraction.
    S {
        i: i64,
        j: i64,
        a: ParamSelector,
        b: ParamSelector,
    },
    U,
    V,
    W,
    Va(ParamSelector),
    Wb(ParamSelector),
    Sab(ParamSelector, ParamSelector),
    Sa(ParamSelector),
    Tb(ParamSelector),
    Z,
    Tau,
    /// First component of the auxiliary column vector.
    UVec0 { i: i64, a: ParamSelector },
    /// First component of the auxiliary row vector.
    TUVec0 { j: i64, b: ParamSelector },
}

/// A field value at a point, as exported by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub point: LatticePoint,
    pub value: Scalar,
}
