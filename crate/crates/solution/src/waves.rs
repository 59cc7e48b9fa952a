//! Plane-wave factors: per-direction products of affine factors in the
//! spectral parameter, carried as jets so Jordan chains get derivative
//! stacks for free.

use crate::{Scalar, SolutionError};
use lattice::{Direction, LatticeError, LatticeParams, LatticePoint};
use numkit::{cr, lift_affine, Jet, RECIP_MIN_LEADING};

/// Which side of the coupling a wave belongs to: `Column` waves multiply
/// factors `1 + k/p_i`, `Row` waves multiply reciprocal factors
/// `(1 − κ/p_i)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveSide {
    Column,
    Row,
}

/// Evaluates the plane wave for one eigenvalue at a lattice point: the
/// product over all three directions of the per-step factors from the base
/// to the point, scaled by the amplitude. The jet's order-0 coefficient is
/// the scalar wave; higher coefficients are Taylor coefficients in the
/// eigenvalue.
pub fn plane_wave(
    params: &LatticeParams,
    point: LatticePoint,
    eigenvalue: Scalar,
    amplitude: Scalar,
    side: WaveSide,
    order: usize,
) -> Result<Jet, SolutionError> {
    let a = direction_jet(params, Direction::N, point.n, eigenvalue, side, order)?;
    let b = direction_jet(params, Direction::M, point.m, eigenvalue, side, order)?;
    let c = direction_jet(params, Direction::H, point.h, eigenvalue, side, order)?;
    Ok(a.mul(&b).mul(&c).scale(amplitude))
}

/// Product of the per-step factors of one direction from the base
/// coordinate to `to`. Ranges below the base are handled by multiplying the
/// ascending forward product and inverting it.
pub(crate) fn direction_jet(
    params: &LatticeParams,
    dir: Direction,
    to: i64,
    eigenvalue: Scalar,
    side: WaveSide,
    order: usize,
) -> Result<Jet, SolutionError> {
    let from = params.base().coord(dir);
    let factor = |value: Scalar| -> Result<Jet, SolutionError> {
        match side {
            WaveSide::Column => Ok(lift_affine(cr(1.0), cr(1.0) / value, eigenvalue, order)),
            WaveSide::Row => {
                let affine = lift_affine(cr(1.0), -cr(1.0) / value, eigenvalue, order);
                Ok(affine.recip()?)
            }
        }
    };
    if to >= from {
        let mut acc = Jet::constant(cr(1.0), order);
        for i in from..to {
            acc = acc.mul(&factor(params.value(dir, i)?)?);
        }
        Ok(acc)
    } else {
        let mut acc = Jet::constant(cr(1.0), order);
        for i in to..from {
            let f = factor(params.value(dir, i)?)?;
            if f.coeff(0).norm() <= RECIP_MIN_LEADING {
                return Err(LatticeError::ZeroFactorInInverseRange { index: i }.into());
            }
            acc = acc.mul(&f);
        }
        Ok(acc.recip()?)
    }
}
