//! Ready-made configurations used by tests, examples, and the demo configs:
//! a collision-free set of non-constant parameter sequences and the five
//! reference solution classes (one- and two-soliton, two Jordan chains, and
//! a mixed spectrum).
//!
//! The sequences are chosen so that no parameter value collides with any
//! other sequence's values or with the reference spectra; cross-direction
//! value collisions would zero the deformation scale factors, and values on
//! a spectrum would make shift matrices singular.

use crate::{BlockSpec, Scalar, SpectralConfig};
use lattice::{LatticeParams, LatticePoint, Window};

fn crs(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}

/// The five-value non-constant sequences: p over {2, 5/2, 3, 7/2, 9/2},
/// q over thirds, r over halves from 5 to 7.
pub fn acceptance_sequences() -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
    (
        vec![crs(2.0), crs(2.5), crs(3.0), crs(3.5), crs(4.5)],
        vec![
            crs(10.0 / 3.0),
            crs(11.0 / 3.0),
            crs(13.0 / 3.0),
            crs(14.0 / 3.0),
            crs(16.0 / 3.0),
        ],
        vec![crs(5.0), crs(5.5), crs(6.0), crs(6.5), crs(7.0)],
    )
}

/// Non-constant sequences over the window `[0,4]^3` with base `(0,0,0)`.
pub fn acceptance_params() -> LatticeParams {
    let (p, q, r) = acceptance_sequences();
    LatticeParams::new(
        LatticePoint::new(0, 0, 0),
        Window::new((0, 4), (0, 4), (0, 4)),
        p,
        q,
        r,
    )
    .expect("reference sequences are valid")
}

/// The four-value prefixes of the sequences over the window `[0,3]^3`.
pub fn equation_params() -> LatticeParams {
    let (mut p, mut q, mut r) = acceptance_sequences();
    p.truncate(4);
    q.truncate(4);
    r.truncate(4);
    LatticeParams::new(
        LatticePoint::new(0, 0, 0),
        Window::new((0, 3), (0, 3), (0, 3)),
        p,
        q,
        r,
    )
    .expect("truncated reference sequences are valid")
}

/// Constant sequences p ≡ 2, q ≡ 3, r ≡ 5 over `[lo, hi]^3`, base `(0,0,0)`.
pub fn constant_params(lo: i64, hi: i64) -> LatticeParams {
    let len = (hi - lo + 1) as usize;
    LatticeParams::new(
        LatticePoint::new(0, 0, 0),
        Window::new((lo, hi), (lo, hi), (lo, hi)),
        vec![crs(2.0); len],
        vec![crs(3.0); len],
        vec![crs(5.0); len],
    )
    .expect("constant sequences are valid")
}

/// One simple eigenvalue per side: k = 1, κ = 4, unit amplitude and coupling.
pub fn one_soliton() -> SpectralConfig {
    SpectralConfig::new(
        vec![BlockSpec::Diagonal {
            values: vec![crs(1.0)],
            amplitudes: vec![crs(1.0)],
        }],
        vec![BlockSpec::Diagonal {
            values: vec![crs(4.0)],
            amplitudes: vec![crs(1.0)],
        }],
        None,
    )
    .expect("one-soliton spectrum is valid")
}

/// Two simple eigenvalues per side: k ∈ {1, 0.7}, κ ∈ {0.5, 1.2}.
pub fn two_soliton() -> SpectralConfig {
    SpectralConfig::new(
        vec![BlockSpec::Diagonal {
            values: vec![crs(1.0), crs(0.7)],
            amplitudes: vec![crs(1.0), crs(1.0)],
        }],
        vec![BlockSpec::Diagonal {
            values: vec![crs(0.5), crs(1.2)],
            amplitudes: vec![crs(1.0), crs(1.0)],
        }],
        None,
    )
    .expect("two-soliton spectrum is valid")
}

/// One Jordan chain per side, eigenvalues 1 and 0.5, of the given size.
pub fn jordan_chain(size: usize) -> SpectralConfig {
    SpectralConfig::new(
        vec![BlockSpec::Jordan {
            value: crs(1.0),
            size,
            amplitude: crs(1.0),
        }],
        vec![BlockSpec::Jordan {
            value: crs(0.5),
            size,
            amplitude: crs(1.0),
        }],
        None,
    )
    .expect("Jordan-chain spectrum is valid")
}

/// A simple eigenvalue plus a 2-chain on each side (total size 3).
pub fn mixed_spectrum() -> SpectralConfig {
    SpectralConfig::new(
        vec![
            BlockSpec::Diagonal {
                values: vec![crs(1.0)],
                amplitudes: vec![crs(1.0)],
            },
            BlockSpec::Jordan {
                value: crs(0.6),
                size: 2,
                amplitude: crs(1.0),
            },
        ],
        vec![
            BlockSpec::Diagonal {
                values: vec![crs(0.5)],
                amplitudes: vec![crs(1.0)],
            },
            BlockSpec::Jordan {
                value: crs(1.2),
                size: 2,
                amplitude: crs(1.0),
            },
        ],
        None,
    )
    .expect("mixed spectrum is valid")
}

/// All five reference classes with stable display names.
pub fn reference_classes() -> Vec<(&'static str, SpectralConfig)> {
    vec![
        ("one-soliton", one_soliton()),
        ("two-soliton", two_soliton()),
        ("jordan-2", jordan_chain(2)),
        ("jordan-3", jordan_chain(3)),
        ("mixed", mixed_spectrum()),
    ]
}
