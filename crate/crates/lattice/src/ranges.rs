//! Products and sums of per-index values over half-open index ranges, with a
//! backward extension below the range start.
//!
//! Forward semantics cover `from <= to`: the product (sum) runs over indices
//! `from..to`, empty when equal. For `to < from` the range is traversed as
//! `to..from` and the result inverted (negated), which extends the familiar
//! exponent laws to ranges that end below where they start. Factors and terms
//! are always combined in ascending-index order.

use crate::{LatticeError, Scalar};

/// ∏_{i=from}^{to-1} factor(i), with the inverse product for `to < from`.
pub fn range_product<F>(factor: F, from: i64, to: i64) -> Result<Scalar, LatticeError>
where
    F: Fn(i64) -> Result<Scalar, LatticeError>,
{
    if to >= from {
        let mut acc = Scalar::new(1.0, 0.0);
        for i in from..to {
            acc *= factor(i)?;
        }
        Ok(acc)
    } else {
        let mut acc = Scalar::new(1.0, 0.0);
        for i in to..from {
            let f = factor(i)?;
            if f.norm() == 0.0 {
                return Err(LatticeError::ZeroFactorInInverseRange { index: i });
            }
            acc *= f;
        }
        Ok(Scalar::new(1.0, 0.0) / acc)
    }
}

/// ∑_{i=from}^{to-1} term(i), with the negated sum for `to < from`.
pub fn range_sum<F>(term: F, from: i64, to: i64) -> Result<Scalar, LatticeError>
where
    F: Fn(i64) -> Result<Scalar, LatticeError>,
{
    if to >= from {
        let mut acc = Scalar::new(0.0, 0.0);
        for i in from..to {
            acc += term(i)?;
        }
        Ok(acc)
    } else {
        let mut acc = Scalar::new(0.0, 0.0);
        for i in to..from {
            acc += term(i)?;
        }
        Ok(-acc)
    }
}
