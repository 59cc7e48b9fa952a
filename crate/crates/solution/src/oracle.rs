//! Brute-force solver for the defining linear relation, used by tests as an
//! independent route to the coefficient matrix.

use crate::SolutionError;
use numkit::{lu_solve, CMatrix};

/// Solves `Γ·M + M·Λ = r·s` for `M` by vectorizing the unknown column-major
/// and solving the `(N·N') × (N·N')` system with plain LU. Exists purely as
/// an oracle: production evaluation always uses the closed form.
pub fn sylvester_oracle(
    gamma: &CMatrix,
    lambda: &CMatrix,
    r: &CMatrix,
    s: &CMatrix,
) -> Result<CMatrix, SolutionError> {
    let n = gamma.rows();
    let n_prime = lambda.rows();
    assert!(gamma.is_square() && lambda.is_square(), "spectral matrices must be square");
    assert_eq!(r.rows(), n, "r must have {n} rows");
    assert_eq!(s.cols(), n_prime, "s must have {n_prime} columns");

    let size = n * n_prime;
    let mut a = CMatrix::zeros(size, size);
    for jc in 0..n_prime {
        for ir in 0..n {
            let row = jc * n + ir;
            // Left action of gamma on column jc.
            for ir2 in 0..n {
                let cur = a.get(row, jc * n + ir2);
                a.set(row, jc * n + ir2, cur + gamma.get(ir, ir2));
            }
            // Right action of lambda on row ir.
            for jc2 in 0..n_prime {
                let cur = a.get(row, jc2 * n + ir);
                a.set(row, jc2 * n + ir, cur + lambda.get(jc2, jc));
            }
        }
    }
    let mut rhs = CMatrix::zeros(size, 1);
    for jc in 0..n_prime {
        for ir in 0..n {
            rhs.set(jc * n + ir, 0, r.get(ir, 0) * s.get(0, jc));
        }
    }
    let x = lu_solve(&a, &rhs)?;
    let mut m = CMatrix::zeros(n, n_prime);
    for jc in 0..n_prime {
        for ir in 0..n {
            m.set(ir, jc, x.get(jc * n + ir, 0));
        }
    }
    Ok(m)
}
