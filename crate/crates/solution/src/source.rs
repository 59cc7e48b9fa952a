//! The read interface shared by every producer of solution data: the
//! canonical builder and similarity-transformed wrappers alike.

use crate::SolutionError;
use lattice::{LatticeParams, LatticePoint};
use numkit::CMatrix;

/// Everything point-dependent a field evaluation needs.
#[derive(Debug, Clone)]
pub struct PointData {
    /// Coefficient matrix, `N × N'`.
    pub m: CMatrix,
    /// Column wave vector, `N × 1`.
    pub r: CMatrix,
    /// Row wave vector, `1 × N'`.
    pub s: CMatrix,
}

/// A system that can produce solution data at lattice points. The constant
/// parts (spectral matrices, coupling, lattice parameters) are fixed per
/// system; only `data_at` varies with the point.
pub trait SystemSource {
    /// `(N, N')`: sizes of the two spectral matrices.
    fn dims(&self) -> (usize, usize);

    fn params(&self) -> &LatticeParams;

    /// First spectral matrix, `N × N`.
    fn gamma(&self) -> &CMatrix;

    /// Second spectral matrix, `N' × N'`.
    fn lambda(&self) -> &CMatrix;

    /// Coupling matrix, `N' × N`.
    fn coupling(&self) -> &CMatrix;

    fn data_at(&self, point: LatticePoint) -> Result<PointData, SolutionError>;
}

impl<S: SystemSource + ?Sized> SystemSource for &S {
    fn dims(&self) -> (usize, usize) {
        (**self).dims()
    }

    fn params(&self) -> &LatticeParams {
        (**self).params()
    }

    fn gamma(&self) -> &CMatrix {
        (**self).gamma()
    }

    fn lambda(&self) -> &CMatrix {
        (**self).lambda()
    }

    fn coupling(&self) -> &CMatrix {
        (**self).coupling()
    }

    fn data_at(&self, point: LatticePoint) -> Result<PointData, SolutionError> {
        (**self).data_at(point)
    }
}
