//! Truncated Taylor ("jet") arithmetic used to carry derivative stacks of
//! plane-wave factors through products and reciprocals.
//!
//! A jet of order `D` stores coefficients `(c_0, ..., c_D)` of a truncated
//! series in one formal variable. All binary operations require matching
//! orders; mixing orders is a programming error and panics.

use crate::{NumError, Scalar, RECIP_MIN_LEADING};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<Scalar>,
}

impl Jet {
    /// Jet with given coefficients `(c_0, ..., c_D)`. Must be nonempty.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the order-0 coefficient");
        Jet { coeffs }
    }

    /// Constant jet `(value, 0, ..., 0)` of the given order.
    pub fn constant(value: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// Highest retained derivative index.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Jet) -> Jet {
        assert_eq!(
            self.order(),
            other.order(),
            "jet order mismatch: {} vs {}",
            self.order(),
            other.order()
        );
        let n = self.coeffs.len();
        let mut out = vec![Scalar::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..(n - i) {
                out[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Jet { coeffs: out }
    }

    /// Multiplicative inverse via the standard series recursion.
    ///
    /// Requires the leading coefficient to sit above `RECIP_MIN_LEADING`
    /// in magnitude; otherwise the inversion is meaningless.
    pub fn recip(&self) -> Result<Jet, NumError> {
        let c0 = self.coeffs[0];
        if c0.norm() <= RECIP_MIN_LEADING {
            return Err(NumError::ReciprocalAtZero { magnitude: c0.norm() });
        }
        let n = self.coeffs.len();
        let mut out = vec![Scalar::new(0.0, 0.0); n];
        out[0] = Scalar::new(1.0, 0.0) / c0;
        for k in 1..n {
            let mut acc = Scalar::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc / c0;
        }
        Ok(Jet { coeffs: out })
    }

    pub fn scale(&self, factor: Scalar) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

/// Jet of `x -> alpha + beta * x` evaluated at `k0`, truncated at `order`:
/// coefficients `(alpha + beta * k0, beta, 0, ..., 0)`.
pub fn lift_affine(alpha: Scalar, beta: Scalar, k0: Scalar, order: usize) -> Jet {
    let mut coeffs = vec![Scalar::new(0.0, 0.0); order + 1];
    coeffs[0] = alpha + beta * k0;
    if order >= 1 {
        coeffs[1] = beta;
    }
    Jet { coeffs }
}
