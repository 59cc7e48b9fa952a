//! Spectral block data, the block-diagonal spectral matrices, and the
//! constant middle factor of the closed-form coefficient matrix.

use crate::{Scalar, SolutionError};
use lattice::SpectralValues;
use numkit::{cr, CMatrix};

/// One block of a spectral matrix: either a run of distinct simple
/// eigenvalues or a single Jordan chain.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSpec {
    Diagonal {
        values: Vec<Scalar>,
        amplitudes: Vec<Scalar>,
    },
    Jordan {
        value: Scalar,
        size: usize,
        amplitude: Scalar,
    },
}

impl BlockSpec {
    pub fn size(&self) -> usize {
        match self {
            BlockSpec::Diagonal { values, .. } => values.len(),
            BlockSpec::Jordan { size, .. } => *size,
        }
    }

    /// Distinct eigenvalues contributed by this block.
    pub fn eigenvalues(&self) -> Vec<Scalar> {
        match self {
            BlockSpec::Diagonal { values, .. } => values.clone(),
            BlockSpec::Jordan { value, .. } => vec![*value],
        }
    }

    fn validate(&self, side: &str) -> Result<(), SolutionError> {
        match self {
            BlockSpec::Diagonal { values, amplitudes } => {
                if values.is_empty() {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "{side} diagonal block has no eigenvalues"
                    )));
                }
                if values.len() != amplitudes.len() {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "{side} diagonal block has {} eigenvalues but {} amplitudes",
                        values.len(),
                        amplitudes.len()
                    )));
                }
                for (i, v) in values.iter().enumerate() {
                    if v.norm() == 0.0 {
                        return Err(SolutionError::InvalidSpectralConfig(format!(
                            "{side} eigenvalue {i} is zero; inverse spectral powers are undefined"
                        )));
                    }
                    for (j, w) in values.iter().enumerate().skip(i + 1) {
                        if v == w {
                            return Err(SolutionError::InvalidSpectralConfig(format!(
                                "{side} diagonal eigenvalues {i} and {j} coincide ({v})"
                            )));
                        }
                    }
                }
                Ok(())
            }
            BlockSpec::Jordan { value, size, .. } => {
                if *size < 1 {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "{side} Jordan block has size 0"
                    )));
                }
                if value.norm() == 0.0 {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "{side} Jordan eigenvalue is zero; inverse spectral powers are undefined"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Full spectral data for one solution: the blocks of both spectral
/// matrices and the constant coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    k_blocks: Vec<BlockSpec>,
    kappa_blocks: Vec<BlockSpec>,
    coupling: CMatrix,
}

impl SpectralConfig {
    /// Validates the blocks and resolves the coupling matrix. Passing `None`
    /// selects the identity coupling, which requires both spectral matrices
    /// to have the same size.
    pub fn new(
        k_blocks: Vec<BlockSpec>,
        kappa_blocks: Vec<BlockSpec>,
        coupling: Option<CMatrix>,
    ) -> Result<Self, SolutionError> {
        if k_blocks.is_empty() || kappa_blocks.is_empty() {
            return Err(SolutionError::InvalidSpectralConfig(
                "both spectral matrices need at least one block".into(),
            ));
        }
        for b in &k_blocks {
            b.validate("k")?;
        }
        for b in &kappa_blocks {
            b.validate("kappa")?;
        }
        let n: usize = k_blocks.iter().map(BlockSpec::size).sum();
        let n_prime: usize = kappa_blocks.iter().map(BlockSpec::size).sum();
        for (i, k) in k_blocks.iter().flat_map(|b| b.eigenvalues()).enumerate() {
            for (j, kappa) in kappa_blocks.iter().flat_map(|b| b.eigenvalues()).enumerate() {
                if k + kappa == Scalar::new(0.0, 0.0) {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "k eigenvalue {i} and kappa eigenvalue {j} sum to zero; \
                         the defining relation has no unique solution"
                    )));
                }
            }
        }
        let coupling = match coupling {
            Some(c) => {
                if c.rows() != n_prime || c.cols() != n {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "coupling matrix is {}x{}, expected {n_prime}x{n}",
                        c.rows(),
                        c.cols()
                    )));
                }
                c
            }
            None => {
                if n != n_prime {
                    return Err(SolutionError::InvalidSpectralConfig(format!(
                        "identity coupling needs equal sizes, got {n} and {n_prime}"
                    )));
                }
                CMatrix::identity(n)
            }
        };
        Ok(SpectralConfig {
            k_blocks,
            kappa_blocks,
            coupling,
        })
    }

    pub fn k_blocks(&self) -> &[BlockSpec] {
        &self.k_blocks
    }

    pub fn kappa_blocks(&self) -> &[BlockSpec] {
        &self.kappa_blocks
    }

    pub fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    /// Size of the first spectral matrix.
    pub fn n(&self) -> usize {
        self.k_blocks.iter().map(BlockSpec::size).sum()
    }

    /// Size of the second spectral matrix.
    pub fn n_prime(&self) -> usize {
        self.kappa_blocks.iter().map(BlockSpec::size).sum()
    }

    /// Jet truncation order used throughout a run: one less than the larger
    /// spectral size, enough for the longest Jordan chain.
    pub fn order(&self) -> usize {
        self.n().max(self.n_prime()) - 1
    }

    /// Eigenvalue lists for parameter validation.
    pub fn spectral_values(&self) -> SpectralValues {
        SpectralValues {
            k: self.k_blocks.iter().flat_map(|b| b.eigenvalues()).collect(),
            kappa: self
                .kappa_blocks
                .iter()
                .flat_map(|b| b.eigenvalues())
                .collect(),
        }
    }
}

/// Assembles the two block-diagonal spectral matrices. Jordan blocks carry
/// the eigenvalue on the diagonal and 1 on the first subdiagonal.
pub fn build_gamma_lambda(spec: &SpectralConfig) -> (CMatrix, CMatrix) {
    (
        assemble_block_diagonal(spec.k_blocks()),
        assemble_block_diagonal(spec.kappa_blocks()),
    )
}

fn assemble_block_diagonal(blocks: &[BlockSpec]) -> CMatrix {
    let n: usize = blocks.iter().map(BlockSpec::size).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for block in blocks {
        match block {
            BlockSpec::Diagonal { values, .. } => {
                for v in values {
                    out.set(at, at, *v);
                    at += 1;
                }
            }
            BlockSpec::Jordan { value, size, .. } => {
                for i in 0..*size {
                    out.set(at + i, at + i, *value);
                    if i > 0 {
                        out.set(at + i, at + i - 1, cr(1.0));
                    }
                }
                at += size;
            }
        }
    }
    out
}

/// The constant middle factor `G` of `M = F·G·H`, assembled cell by cell
/// from the eigenvalues of the two spectra. With 1-based indices inside a
/// cell the four cases are
///
/// * diagonal × diagonal: `1/(k_i + κ_j)`
/// * diagonal × Jordan:   `−(−1/(k + d))^j`
/// * Jordan × diagonal:   `−(−1/(c + κ))^i`
/// * Jordan × Jordan:     `binom(i+j−2, i−1) · (−1)^{i+j} / (c+d)^{i+j−1}`
pub fn constant_factor(spec: &SpectralConfig) -> CMatrix {
    let mut g = CMatrix::zeros(spec.n(), spec.n_prime());
    let mut row = 0;
    for kb in spec.k_blocks() {
        let mut col = 0;
        for pb in spec.kappa_blocks() {
            write_cell(&mut g, row, col, kb, pb);
            col += pb.size();
        }
        row += kb.size();
    }
    g
}

fn write_cell(g: &mut CMatrix, row: usize, col: usize, kb: &BlockSpec, pb: &BlockSpec) {
    let one = cr(1.0);
    match (kb, pb) {
        (BlockSpec::Diagonal { values: ks, .. }, BlockSpec::Diagonal { values: kappas, .. }) => {
            for (i, k) in ks.iter().enumerate() {
                for (j, kappa) in kappas.iter().enumerate() {
                    g.set(row + i, col + j, one / (k + kappa));
                }
            }
        }
        (BlockSpec::Diagonal { values: ks, .. }, BlockSpec::Jordan { value: d, size, .. }) => {
            for (i, k) in ks.iter().enumerate() {
                for j in 0..*size {
                    let base = -one / (k + d);
                    g.set(row + i, col + j, -base.powu(j as u32 + 1));
                }
            }
        }
        (BlockSpec::Jordan { value: c0, size, .. }, BlockSpec::Diagonal { values: kappas, .. }) => {
            for i in 0..*size {
                for (j, kappa) in kappas.iter().enumerate() {
                    let base = -one / (c0 + kappa);
                    g.set(row + i, col + j, -base.powu(i as u32 + 1));
                }
            }
        }
        (
            BlockSpec::Jordan { value: c0, size: szc, .. },
            BlockSpec::Jordan { value: d, size: szd, .. },
        ) => {
            for i in 0..*szc {
                for j in 0..*szd {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    let denom = (c0 + d).powu((i + j) as u32 + 1);
                    let coeff = cr(binomial(i + j, i) * sign);
                    g.set(row + i, col + j, coeff / denom);
                }
            }
        }
    }
}

/// Binomial coefficient by additive Pascal recursion; exact in floating
/// point for the small sizes that occur here.
fn binomial(n: usize, k: usize) -> f64 {
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k]
}
