//! Lattice geometry and the direction-dependent parameter sequences that
//! drive the non-autonomous shift maps.
//!
//! A run fixes a finite inclusive window in each of the three lattice
//! directions, a base point inside it, and one complex parameter value per
//! window index and direction. All products and sums over index ranges are
//! evaluated in ascending-index order so results are bit-reproducible, with
//! a backward extension (inverted factors / negated terms) below the base.

mod params;
mod point;
mod ranges;

pub use params::{
    resolve_selector, validate_params, LatticeParams, ParamSelector, SpectralValues,
};
pub use point::{Direction, LatticePoint, Window};
pub use ranges::{range_product, range_sum};

use thiserror::Error;

pub type Scalar = num_complex::Complex64;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LatticeError {
    #[error("index {index} outside {direction} window [{lo}, {hi}]")]
    IndexOutOfWindow {
        direction: Direction,
        index: i64,
        lo: i64,
        hi: i64,
    },
    #[error("zero factor at index {index} inside an inverted range product")]
    ZeroFactorInInverseRange { index: i64 },
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}
