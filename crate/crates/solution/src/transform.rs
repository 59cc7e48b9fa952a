//! Similarity transformations of a whole system: conjugate the spectral
//! matrices, dress the wave vectors and coefficient matrix accordingly, and
//! counter-rotate the coupling so all contracted quantities are preserved.

use crate::{PointData, SolutionError, SystemSource};
use lattice::{LatticeParams, LatticePoint};
use numkit::{lu_factor, CMatrix};

/// A system seen through an invertible change of basis on each side.
#[derive(Debug, Clone)]
pub struct Transformed<S> {
    inner: S,
    t1: CMatrix,
    t2_inv: CMatrix,
    gamma: CMatrix,
    lambda: CMatrix,
    coupling: CMatrix,
}

/// Conjugates the system by `t1` (size `N`) and `t2` (size `N'`):
/// the spectral matrices become `T1·Γ·T1⁻¹` and `T2·Λ·T2⁻¹`, the coupling
/// `T2·C·T1⁻¹`, and point data transforms as `M → T1·M·T2⁻¹`, `r → T1·r`,
/// `s → s·T2⁻¹`.
pub fn similarity_transform<S: SystemSource>(
    inner: S,
    t1: CMatrix,
    t2: CMatrix,
) -> Result<Transformed<S>, SolutionError> {
    let (n, n_prime) = inner.dims();
    assert_eq!((t1.rows(), t1.cols()), (n, n), "t1 must be {n}x{n}");
    assert_eq!(
        (t2.rows(), t2.cols()),
        (n_prime, n_prime),
        "t2 must be {n_prime}x{n_prime}"
    );
    let t1_inv = lu_factor(&t1)?.solve(&CMatrix::identity(n));
    let t2_inv = lu_factor(&t2)?.solve(&CMatrix::identity(n_prime));
    let gamma = t1.matmul(inner.gamma()).matmul(&t1_inv);
    let lambda = t2.matmul(inner.lambda()).matmul(&t2_inv);
    let coupling = t2.matmul(inner.coupling()).matmul(&t1_inv);
    Ok(Transformed {
        inner,
        t1,
        t2_inv,
        gamma,
        lambda,
        coupling,
    })
}

impl<S: SystemSource> SystemSource for Transformed<S> {
    fn dims(&self) -> (usize, usize) {
        self.inner.dims()
    }

    fn params(&self) -> &LatticeParams {
        self.inner.params()
    }

    fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    fn lambda(&self) -> &CMatrix {
        &self.lambda
    }

    fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    fn data_at(&self, point: LatticePoint) -> Result<PointData, SolutionError> {
        let data = self.inner.data_at(point)?;
        Ok(PointData {
            m: self.t1.matmul(&data.m).matmul(&self.t2_inv),
            r: self.t1.matmul(&data.r),
            s: data.s.matmul(&self.t2_inv),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{presets, Scalar, SolutionBuilder};
    use numkit::{c, cr};

    #[test]
    fn identity_transform_changes_nothing() {
        let builder =
            SolutionBuilder::new(presets::constant_params(0, 4), presets::one_soliton()).unwrap();
        let base = builder.data_at(LatticePoint::new(1, 1, 0)).unwrap();
        let wrapped =
            similarity_transform(builder.clone(), CMatrix::identity(1), CMatrix::identity(1))
                .unwrap();
        let seen = wrapped.data_at(LatticePoint::new(1, 1, 0)).unwrap();
        assert_eq!(base.m, seen.m, "identity conjugation must leave M untouched");
        assert_eq!(base.r, seen.r);
        assert_eq!(base.s, seen.s);
        assert_eq!(builder.gamma(), wrapped.gamma());
    }

    #[test]
    fn scalar_transform_rescales_m_and_counter_rescales_coupling() {
        let builder =
            SolutionBuilder::new(presets::constant_params(0, 4), presets::one_soliton()).unwrap();
        let point = LatticePoint::new(1, 0, 0);
        let base = builder.data_at(point).unwrap();
        let t1 = CMatrix::from_rows(&[vec![cr(2.0)]]);
        let t2 = CMatrix::from_rows(&[vec![cr(3.0)]]);
        let wrapped = similarity_transform(builder.clone(), t1, t2).unwrap();
        let seen = wrapped.data_at(point).unwrap();
        let want_m = base.m.get(0, 0) * cr(2.0 / 3.0);
        assert!(
            (seen.m.get(0, 0) - want_m).norm() < 1e-15,
            "M should scale by 2/3, got {}",
            seen.m.get(0, 0)
        );
        let want_c = builder.coupling().get(0, 0) * cr(1.5);
        assert!(
            (wrapped.coupling().get(0, 0) - want_c).norm() < 1e-15,
            "coupling should scale by 3/2"
        );
        // The product M·C that enters every contraction is unchanged.
        let before = base.m.get(0, 0) * builder.coupling().get(0, 0);
        let after = seen.m.get(0, 0) * wrapped.coupling().get(0, 0);
        assert!((before - after).norm() < 1e-15, "M C must be invariant");
    }

    #[test]
    fn transformed_data_satisfies_the_conjugated_defining_relation() {
        let builder = SolutionBuilder::new(
            presets::acceptance_params(),
            presets::two_soliton(),
        )
        .unwrap();
        let t1 = CMatrix::from_rows(&[
            vec![cr(1.0), c(0.2, 0.1)],
            vec![cr(0.3), cr(1.2)],
        ]);
        let t2 = CMatrix::from_rows(&[
            vec![cr(0.9), cr(-0.2)],
            vec![c(0.1, -0.3), cr(1.1)],
        ]);
        let wrapped = similarity_transform(builder, t1, t2).unwrap();
        let point = LatticePoint::new(2, 1, 1);
        let data = wrapped.data_at(point).unwrap();
        let rs = data.r.matmul(&data.s);
        let residual = wrapped
            .gamma()
            .matmul(&data.m)
            .add(&data.m.matmul(wrapped.lambda()))
            .sub(&rs)
            .max_abs();
        assert!(
            residual <= 1e-12 * rs.max_abs().max(1.0),
            "conjugated defining relation residual {residual:.3e}"
        );
    }

    #[test]
    fn singular_transform_is_rejected() {
        let builder =
            SolutionBuilder::new(presets::constant_params(0, 4), presets::one_soliton()).unwrap();
        let res = similarity_transform(
            builder,
            CMatrix::from_rows(&[vec![Scalar::new(0.0, 0.0)]]),
            CMatrix::identity(1),
        );
        assert!(res.is_err(), "zero t1 must fail the pivot check");
    }
}
