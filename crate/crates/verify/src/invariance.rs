//! Similarity-invariance probe: conjugating the spectral matrices by random
//! invertible pairs and rescaling the wave vectors accordingly must leave
//! every master quantity and τ unchanged.

use crate::{Scalar, VerifyError};
use fields::{DeformConstants, Evaluator};
use lattice::LatticePoint;
use numkit::{cr, CMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use solution::{similarity_transform, SystemSource};

/// Spread of the random perturbation around the identity.
const TRANSFORM_SPREAD: f64 = 0.3;
/// How many transform pairs to try before giving up on invertibility.
const MAX_ATTEMPTS: usize = 8;

/// Worst relative deviation seen across all sampled comparisons.
#[derive(Debug, Clone, Copy)]
pub struct InvarianceOutcome {
    pub max_deviation: f64,
    pub samples: usize,
}

fn random_transform(rng: &mut ChaCha8Rng, size: usize) -> CMatrix {
    CMatrix::from_fn(size, size, |i, j| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let base = if i == j { cr(1.0) } else { cr(0.0) };
        base + Scalar::new(re, im) * TRANSFORM_SPREAD
    })
}

/// Compares master values and τ between two evaluators over explicit
/// `(point, i, j)` triples at offsets `(a, b)`.
pub fn invariance_deviation<S1, S2>(
    base: &Evaluator<S1>,
    transformed: &Evaluator<S2>,
    triples: &[(LatticePoint, i64, i64)],
    a: Scalar,
    b: Scalar,
) -> Result<f64, VerifyError>
where
    S1: SystemSource,
    S2: SystemSource,
{
    let mut worst = 0.0_f64;
    for &(point, i, j) in triples {
        let s_base = base.master_s(point, i, j, a, b)?;
        let s_trans = transformed.master_s(point, i, j, a, b)?;
        worst = worst.max((s_base - s_trans).norm() / s_base.norm().max(1.0));
        let t_base = base.tau(point)?;
        let t_trans = transformed.tau(point)?;
        worst = worst.max((t_base - t_trans).norm() / t_base.norm().max(1.0));
    }
    Ok(worst)
}

/// Draws one random transform pair and `samples` random `(point, i, j)`
/// triples with `i, j` in `{-1, 0, 1}`, then measures the worst deviation.
pub fn invariance_check<S>(
    source: S,
    seed: u64,
    sample_points: &[LatticePoint],
    samples: usize,
    a: Scalar,
    b: Scalar,
) -> Result<InvarianceOutcome, VerifyError>
where
    S: SystemSource + Clone,
{
    assert!(
        !sample_points.is_empty(),
        "invariance sampling needs at least one point"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = source.dims();
    let mut transformed = None;
    for _ in 0..MAX_ATTEMPTS {
        let t1 = random_transform(&mut rng, rows);
        let t2 = random_transform(&mut rng, cols);
        if let Ok(sys) = similarity_transform(source.clone(), t1, t2) {
            transformed = Some(sys);
            break;
        }
    }
    let transformed = transformed.ok_or(VerifyError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })?;

    let constants = DeformConstants::reference();
    let base_ev = Evaluator::new(source, constants)?;
    let trans_ev = Evaluator::new(transformed, constants)?;

    let mut triples = Vec::with_capacity(samples);
    for _ in 0..samples {
        let point = sample_points[rng.gen_range(0..sample_points.len())];
        let i = rng.gen_range(-1..=1_i64);
        let j = rng.gen_range(-1..=1_i64);
        triples.push((point, i, j));
    }
    let max_deviation = invariance_deviation(&base_ev, &trans_ev, &triples, a, b)?;
    Ok(InvarianceOutcome {
        max_deviation,
        samples,
    })
}
