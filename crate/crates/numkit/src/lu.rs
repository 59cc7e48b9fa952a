//! LU factorization with partial pivoting, linear solves, and determinants.

use crate::{CMatrix, NumError, Scalar, PIVOT_RELATIVE_THRESHOLD};

/// LU factorization of a square matrix with row pivoting.
///
/// The factors are stored compactly (unit lower triangle below the diagonal,
/// upper triangle on and above it) together with the row permutation.
#[derive(Clone, Debug)]
pub struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

/// Factors `a`, rejecting pivots below `PIVOT_RELATIVE_THRESHOLD` times the
/// largest max-norm row of the input.
pub fn lu_factor(a: &CMatrix) -> Result<LuFactors, NumError> {
    assert!(a.is_square(), "lu_factor requires a square matrix, got {}x{}", a.rows(), a.cols());
    let n = a.rows();
    let row_scale = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let threshold = PIVOT_RELATIVE_THRESHOLD * row_scale;

    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;

    for col in 0..n {
        // Select the largest remaining pivot in this column.
        let mut best = col;
        let mut best_mag = lu.get(col, col).norm();
        for row in (col + 1)..n {
            let mag = lu.get(row, col).norm();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if best_mag <= threshold {
            return Err(NumError::SingularMatrix {
                pivot: best_mag,
                threshold,
                step: col,
            });
        }
        if best != col {
            for j in 0..n {
                let tmp = lu.get(col, j);
                lu.set(col, j, lu.get(best, j));
                lu.set(best, j, tmp);
            }
            perm.swap(col, best);
            swaps += 1;
        }
        let pivot = lu.get(col, col);
        for row in (col + 1)..n {
            let factor = lu.get(row, col) / pivot;
            lu.set(row, col, factor);
            for j in (col + 1)..n {
                let cur = lu.get(row, j);
                lu.set(row, j, cur - factor * lu.get(col, j));
            }
        }
    }

    Ok(LuFactors { lu, perm, swaps })
}

impl LuFactors {
    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A X = B` for a multi-column right-hand side.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.order();
        assert_eq!(b.rows(), n, "solve: rhs has {} rows, expected {n}", b.rows());
        let k = b.cols();
        let mut x = CMatrix::zeros(n, k);
        // Apply the row permutation to B.
        for i in 0..n {
            for j in 0..k {
                x.set(i, j, b.get(self.perm[i], j));
            }
        }
        // Forward substitution with the unit lower factor.
        for col in 0..k {
            for i in 1..n {
                let mut acc = x.get(i, col);
                for j in 0..i {
                    acc -= self.lu.get(i, j) * x.get(j, col);
                }
                x.set(i, col, acc);
            }
            // Back substitution with the upper factor.
            for i in (0..n).rev() {
                let mut acc = x.get(i, col);
                for j in (i + 1)..n {
                    acc -= self.lu.get(i, j) * x.get(j, col);
                }
                x.set(i, col, acc / self.lu.get(i, i));
            }
        }
        x
    }

    /// Determinant of the factored matrix: pivot product with permutation sign.
    pub fn det(&self) -> Scalar {
        let mut d = if self.swaps.is_multiple_of(2) {
            Scalar::new(1.0, 0.0)
        } else {
            Scalar::new(-1.0, 0.0)
        };
        for i in 0..self.order() {
            d *= self.lu.get(i, i);
        }
        d
    }
}

/// One-shot solve of `A X = B` with row pivoting.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, NumError> {
    Ok(lu_factor(a)?.solve(b))
}

/// Determinant via Gaussian elimination with partial pivoting.
///
/// Unlike [`lu_factor`] this never fails: a vanishing pivot simply
/// contributes a zero factor (the remaining column is already null), so
/// singular input yields a zero-magnitude determinant.
pub fn determinant(a: &CMatrix) -> Scalar {
    assert!(a.is_square(), "determinant requires a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut det = Scalar::new(1.0, 0.0);
    for col in 0..n {
        let mut best = col;
        let mut best_mag = m.get(col, col).norm();
        for row in (col + 1)..n {
            let mag = m.get(row, col).norm();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if best != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(best, j));
                m.set(best, j, tmp);
            }
            det = -det;
        }
        let pivot = m.get(col, col);
        det *= pivot;
        if pivot.norm() == 0.0 {
            // The whole remaining column is zero; the determinant is zero
            // regardless of later columns, but keep eliminating so the loop
            // structure stays uniform.
            continue;
        }
        for row in (col + 1)..n {
            let factor = m.get(row, col) / pivot;
            for j in (col + 1)..n {
                let cur = m.get(row, j);
                m.set(row, j, cur - factor * m.get(col, j));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, cr};
    use proptest::prelude::*;

    /// Round-trip solve tolerance for well-conditioned random systems.
    const SOLVE_ROUND_TRIP_TOL: f64 = 1e-11;
    /// Relative tolerance for determinant multiplicativity on random pairs.
    const DET_MULTIPLICATIVITY_TOL: f64 = 1e-10;

    // === frozen examples ===

    #[test]
    fn solve_identity_returns_rhs() {
        let b = CMatrix::from_rows(&[vec![cr(1.0), cr(2.0)], vec![cr(3.0), cr(4.0)]]);
        let x = lu_solve(&CMatrix::identity(2), &b).expect("identity is nonsingular");
        assert_eq!(x, b, "I X = B must return X = B");
    }

    #[test]
    fn solve_diagonal_system() {
        let a = CMatrix::from_rows(&[vec![cr(2.0), cr(0.0)], vec![cr(0.0), cr(4.0)]]);
        let b = CMatrix::from_rows(&[vec![cr(2.0)], vec![cr(8.0)]]);
        let x = lu_solve(&a, &b).expect("diagonal with nonzero entries");
        assert_eq!(x.get(0, 0), cr(1.0));
        assert_eq!(x.get(1, 0), cr(2.0));
    }

    #[test]
    fn determinant_identity_and_permutation() {
        assert_eq!(determinant(&CMatrix::identity(3)), cr(1.0), "det I3 = 1");
        let swap = CMatrix::from_rows(&[vec![cr(0.0), cr(1.0)], vec![cr(1.0), cr(0.0)]]);
        assert_eq!(determinant(&swap), cr(-1.0), "row swap has determinant -1");
    }

    #[test]
    fn determinant_of_singular_matrix_is_zero_without_error() {
        let a = CMatrix::from_rows(&[vec![cr(1.0), cr(2.0)], vec![cr(2.0), cr(4.0)]]);
        let d = determinant(&a);
        assert!(d.norm() < 1e-15, "rank-1 matrix determinant should vanish, got {d}");
    }

    #[test]
    fn factor_rejects_singular_input() {
        let a = CMatrix::from_rows(&[vec![cr(1.0), cr(1.0)], vec![cr(1.0), cr(1.0)]]);
        match lu_factor(&a) {
            Err(NumError::SingularMatrix { .. }) => {}
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn complex_solve_known_inverse() {
        // (1+i) x = 2i has solution x = i(1-i) = 1 + i.
        let a = CMatrix::from_rows(&[vec![c(1.0, 1.0)]]);
        let b = CMatrix::from_rows(&[vec![c(0.0, 2.0)]]);
        let x = lu_solve(&a, &b).expect("nonzero scalar");
        let expect = c(1.0, 1.0);
        assert!(
            (x.get(0, 0) - expect).norm() < 1e-15,
            "expected {expect}, got {}",
            x.get(0, 0)
        );
    }

    // === properties ===

    /// Entries kept away from huge magnitudes so random matrices stay
    /// comfortably conditioned for the round-trip bounds.
    fn scalar_strategy() -> impl Strategy<Value = Scalar> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Scalar::new(re, im))
    }

    fn matrix_strategy(n: usize) -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec(scalar_strategy(), n * n).prop_map(move |v| {
            // Diagonal boost keeps the sample well-conditioned.
            CMatrix::from_fn(n, n, |i, j| {
                let base = v[i * n + j];
                if i == j {
                    base + Scalar::new(8.0, 0.0)
                } else {
                    base
                }
            })
        })
    }

    proptest! {
        #[test]
        fn multiply_then_solve_round_trip(a in matrix_strategy(5), xv in proptest::collection::vec(scalar_strategy(), 5)) {
            let x0 = CMatrix::col_vector(&xv);
            let b = a.matmul(&x0);
            let x = lu_solve(&a, &b).expect("diagonally boosted matrix is nonsingular");
            let err = x.sub(&x0).max_abs();
            let scale = x0.max_abs().max(1.0);
            prop_assert!(
                err <= SOLVE_ROUND_TRIP_TOL * scale,
                "round trip error {err:.3e} exceeds {SOLVE_ROUND_TRIP_TOL:.1e} * {scale:.3e}"
            );
        }

        #[test]
        fn determinant_is_multiplicative(a in matrix_strategy(4), b in matrix_strategy(4)) {
            let lhs = determinant(&a.matmul(&b));
            let rhs = determinant(&a) * determinant(&b);
            let err = (lhs - rhs).norm();
            prop_assert!(
                err <= DET_MULTIPLICATIVITY_TOL * rhs.norm().max(1.0),
                "det(AB) = {lhs}, det(A)det(B) = {rhs}, err {err:.3e}"
            );
        }

        #[test]
        fn solve_satisfies_equation(a in matrix_strategy(6), bv in proptest::collection::vec(scalar_strategy(), 12)) {
            let b = CMatrix::from_fn(6, 2, |i, j| bv[i * 2 + j]);
            let x = lu_solve(&a, &b).expect("nonsingular sample");
            let resid = a.matmul(&x).sub(&b).max_abs();
            let scale = b.max_abs().max(1.0);
            prop_assert!(
                resid <= SOLVE_ROUND_TRIP_TOL * scale,
                "residual {resid:.3e} exceeds bound"
            );
        }
    }
}
