//! Row-major dense complex matrices sized for small spectral systems.

use crate::Scalar;

/// Dense complex matrix, row-major storage.
///
/// Shape errors are programming errors, not data errors, so mismatched
/// dimensions panic rather than returning a result.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl CMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive, got {rows}x{cols}");
        CMatrix {
            rows,
            cols,
            data: vec![Scalar::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.set(i, i, Scalar::new(1.0, 0.0));
        }
        out
    }

    /// Builds a matrix from a row-of-rows literal.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        assert!(!rows.is_empty(), "from_rows requires at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "from_rows requires at least one column");
        let mut out = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}: {} entries, expected {cols}", row.len());
            for (j, &v) in row.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Builds a matrix by evaluating `f(i, j)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    /// Column vector from a slice.
    pub fn col_vector(entries: &[Scalar]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| entries[i])
    }

    /// Row vector from a slice.
    pub fn row_vector(entries: &[Scalar]) -> Self {
        Self::from_fn(1, entries.len(), |_, j| entries[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    /// Raw row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * other.get(k, j));
                }
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let mut out = self.clone();
        for (d, &o) in out.data.iter_mut().zip(other.data.iter()) {
            *d += o;
        }
        out
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape mismatch");
        let mut out = self.clone();
        for (d, &o) in out.data.iter_mut().zip(other.data.iter()) {
            *d -= o;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Scalar) -> CMatrix {
        let mut out = self.clone();
        for d in out.data.iter_mut() {
            *d *= s;
        }
        out
    }

    /// Transpose (no conjugation).
    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Outer product of a column vector and a row vector.
    pub fn outer(col: &CMatrix, row: &CMatrix) -> CMatrix {
        assert_eq!(col.cols, 1, "outer: first operand must be a column vector");
        assert_eq!(row.rows, 1, "outer: second operand must be a row vector");
        CMatrix::from_fn(col.rows, row.cols, |i, j| col.get(i, 0) * row.get(0, j))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True when every component of every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Copies a block of `src` into `self` with its top-left corner at (`at_row`, `at_col`).
    pub fn set_block(&mut self, at_row: usize, at_col: usize, src: &CMatrix) {
        assert!(
            at_row + src.rows <= self.rows && at_col + src.cols <= self.cols,
            "block {}x{} at ({at_row},{at_col}) exceeds {}x{}",
            src.rows,
            src.cols,
            self.rows,
            self.cols
        );
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(at_row + i, at_col + j, src.get(i, j));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr;

    #[test]
    fn matmul_identity_is_noop() {
        let a = CMatrix::from_rows(&[vec![cr(1.0), cr(2.0)], vec![cr(3.0), cr(4.0)]]);
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.matmul(&a), a, "I * A must equal A");
        assert_eq!(a.matmul(&i2), a, "A * I must equal A");
    }

    #[test]
    fn outer_product_shapes_and_values() {
        let col = CMatrix::col_vector(&[cr(1.0), cr(2.0)]);
        let row = CMatrix::row_vector(&[cr(3.0), cr(4.0), cr(5.0)]);
        let o = CMatrix::outer(&col, &row);
        assert_eq!((o.rows(), o.cols()), (2, 3));
        assert_eq!(o.get(1, 2), cr(10.0), "outer entry (1,2) = 2*5");
    }

    #[test]
    fn transpose_round_trip() {
        let a = CMatrix::from_fn(2, 3, |i, j| cr((3 * i + j) as f64));
        assert_eq!(a.transpose().transpose(), a);
    }
}
