//! Parameter sequences attached to the lattice window, selector resolution,
//! and validation against a spectral configuration.

use crate::{Direction, LatticeError, LatticePoint, Scalar, Window};

/// One complex parameter value per window index in each direction, plus the
/// base point from which all running products and sums start.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    base: LatticePoint,
    window: Window,
    p: Vec<Scalar>,
    q: Vec<Scalar>,
    r: Vec<Scalar>,
}

impl LatticeParams {
    /// Builds the parameter table, rejecting inverted windows, bases outside
    /// the window, length mismatches, and zero parameter values.
    pub fn new(
        base: LatticePoint,
        window: Window,
        p: Vec<Scalar>,
        q: Vec<Scalar>,
        r: Vec<Scalar>,
    ) -> Result<Self, LatticeError> {
        for dir in Direction::ALL {
            let (lo, hi) = window.range(dir);
            if hi < lo {
                return Err(LatticeError::InvalidWindow(format!(
                    "{dir} range [{lo}, {hi}] is inverted"
                )));
            }
        }
        if !window.contains(&base) {
            return Err(LatticeError::InvalidWindow(format!(
                "base point {base} lies outside the window"
            )));
        }
        let params = LatticeParams { base, window, p, q, r };
        for dir in Direction::ALL {
            let seq = params.seq(dir);
            let expected = window.len(dir);
            if seq.len() != expected {
                return Err(LatticeError::InvalidWindow(format!(
                    "{dir} sequence has {} values but the window needs {expected}",
                    seq.len()
                )));
            }
            for (offset, value) in seq.iter().enumerate() {
                if value.norm() == 0.0 {
                    let index = window.range(dir).0 + offset as i64;
                    return Err(LatticeError::SingularConfiguration(format!(
                        "{dir} parameter at index {index} is zero"
                    )));
                }
            }
        }
        Ok(params)
    }

    pub fn base(&self) -> LatticePoint {
        self.base
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn seq(&self, dir: Direction) -> &[Scalar] {
        match dir {
            Direction::N => &self.p,
            Direction::M => &self.q,
            Direction::H => &self.r,
        }
    }

    /// Parameter value at `index` along `dir`.
    pub fn value(&self, dir: Direction, index: i64) -> Result<Scalar, LatticeError> {
        let (lo, hi) = self.window.range(dir);
        if index < lo || index > hi {
            return Err(LatticeError::IndexOutOfWindow {
                direction: dir,
                index,
                lo,
                hi,
            });
        }
        Ok(self.seq(dir)[(index - lo) as usize])
    }

    pub fn p(&self, n: i64) -> Result<Scalar, LatticeError> {
        self.value(Direction::N, n)
    }

    pub fn q(&self, m: i64) -> Result<Scalar, LatticeError> {
        self.value(Direction::M, m)
    }

    pub fn r(&self, h: i64) -> Result<Scalar, LatticeError> {
        self.value(Direction::H, h)
    }

    /// True when every value along `dir` is exactly the same.
    pub fn is_constant(&self, dir: Direction) -> bool {
        let seq = self.seq(dir);
        seq.iter().all(|v| *v == seq[0])
    }
}

/// Picks a scalar from the configuration, possibly depending on the lattice
/// point at which it is resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSelector {
    /// A fixed value, independent of the point.
    Constant(Scalar),
    /// The parameter one step behind the point in the given direction.
    PrevP,
    PrevQ,
    PrevR,
    /// The negated parameter at the point itself.
    NegP,
    NegQ,
    NegR,
}

/// Resolves `sel` at `point` against the parameter table.
pub fn resolve_selector(
    sel: ParamSelector,
    point: LatticePoint,
    params: &LatticeParams,
) -> Result<Scalar, LatticeError> {
    match sel {
        ParamSelector::Constant(c) => Ok(c),
        ParamSelector::PrevP => params.p(point.n - 1),
        ParamSelector::PrevQ => params.q(point.m - 1),
        ParamSelector::PrevR => params.r(point.h - 1),
        ParamSelector::NegP => params.p(point.n).map(|v| -v),
        ParamSelector::NegQ => params.q(point.m).map(|v| -v),
        ParamSelector::NegR => params.r(point.h).map(|v| -v),
    }
}

/// Spectral eigenvalues needed to validate a parameter table: the values on
/// the two sides of the coupling, with Jordan blocks contributing their
/// single eigenvalue once.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralValues {
    pub k: Vec<Scalar>,
    pub kappa: Vec<Scalar>,
}

/// Checks every invertibility condition the field formulas rely on:
/// shift matrices along all three directions, the spectra themselves, the
/// coupling denominators, and the extra shift arguments `a` (against the
/// first spectrum) and `b` (against the second).
///
/// All comparisons are exact; values merely close to a forbidden one pass
/// here and surface later as conditioning loss in the residuals.
pub fn validate_params(
    params: &LatticeParams,
    spectral: &SpectralValues,
    extras_a: &[Scalar],
    extras_b: &[Scalar],
) -> Result<(), LatticeError> {
    for (i, k) in spectral.k.iter().enumerate() {
        if k.norm() == 0.0 {
            return Err(LatticeError::SingularConfiguration(format!(
                "k[{i}] = 0: the first spectral matrix is singular and inverse powers are undefined"
            )));
        }
    }
    for (j, kappa) in spectral.kappa.iter().enumerate() {
        if kappa.norm() == 0.0 {
            return Err(LatticeError::SingularConfiguration(format!(
                "kappa[{j}] = 0: the second spectral matrix is singular and inverse powers are undefined"
            )));
        }
    }
    for (i, k) in spectral.k.iter().enumerate() {
        for (j, kappa) in spectral.kappa.iter().enumerate() {
            if *k + *kappa == Scalar::new(0.0, 0.0) {
                return Err(LatticeError::SingularConfiguration(format!(
                    "k[{i}] + kappa[{j}] = 0: coupling denominators vanish"
                )));
            }
        }
    }
    for dir in Direction::ALL {
        let (lo, _) = params.window().range(dir);
        for (offset, value) in params.seq(dir).iter().enumerate() {
            let index = lo + offset as i64;
            for (i, k) in spectral.k.iter().enumerate() {
                if *value == -*k {
                    return Err(LatticeError::SingularConfiguration(format!(
                        "{dir} parameter at index {index} equals -k[{i}] = {value}: forward shift matrix singular"
                    )));
                }
            }
            for (j, kappa) in spectral.kappa.iter().enumerate() {
                if *value == *kappa {
                    return Err(LatticeError::SingularConfiguration(format!(
                        "{dir} parameter at index {index} equals kappa[{j}] = {value}: dual shift matrix singular"
                    )));
                }
            }
        }
    }
    for (t, a) in extras_a.iter().enumerate() {
        for (i, k) in spectral.k.iter().enumerate() {
            if *a == -*k {
                return Err(LatticeError::SingularConfiguration(format!(
                    "extra shift a[{t}] equals -k[{i}] = {a}: shifted matrix on the first spectrum singular"
                )));
            }
        }
    }
    for (t, b) in extras_b.iter().enumerate() {
        for (j, kappa) in spectral.kappa.iter().enumerate() {
            if *b == -*kappa {
                return Err(LatticeError::SingularConfiguration(format!(
                    "extra shift b[{t}] equals -kappa[{j}] = {b}: shifted matrix on the second spectrum singular"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cr(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn constant_params(p: f64, q: f64, r: f64) -> LatticeParams {
        LatticeParams::new(
            LatticePoint::new(0, 0, 0),
            Window::new((0, 4), (0, 4), (0, 4)),
            vec![cr(p); 5],
            vec![cr(q); 5],
            vec![cr(r); 5],
        )
        .expect("constant nonzero sequences are valid")
    }

    // === construction and lookup ===

    #[test]
    fn lookup_returns_window_values_and_flags_outside_indices() {
        let params = constant_params(2.0, 3.0, 5.0);
        assert_eq!(params.p(0).unwrap(), cr(2.0));
        assert_eq!(params.r(4).unwrap(), cr(5.0));
        match params.q(5) {
            Err(LatticeError::IndexOutOfWindow { direction, index, lo, hi }) => {
                assert_eq!(direction, Direction::M);
                assert_eq!((index, lo, hi), (5, 0, 4));
            }
            other => panic!("expected IndexOutOfWindow, got {other:?}"),
        }
    }

    #[test]
    fn construction_rejects_zero_parameter_value() {
        let res = LatticeParams::new(
            LatticePoint::new(0, 0, 0),
            Window::new((0, 1), (0, 1), (0, 1)),
            vec![cr(2.0), cr(0.0)],
            vec![cr(3.0), cr(3.0)],
            vec![cr(5.0), cr(5.0)],
        );
        assert!(
            matches!(res, Err(LatticeError::SingularConfiguration(_))),
            "zero parameter must be rejected, got {res:?}"
        );
    }

    #[test]
    fn construction_rejects_base_outside_window() {
        let res = LatticeParams::new(
            LatticePoint::new(-1, 0, 0),
            Window::new((0, 1), (0, 1), (0, 1)),
            vec![cr(2.0), cr(2.0)],
            vec![cr(3.0), cr(3.0)],
            vec![cr(5.0), cr(5.0)],
        );
        assert!(matches!(res, Err(LatticeError::InvalidWindow(_))), "got {res:?}");
    }

    #[test]
    fn construction_rejects_length_mismatch() {
        let res = LatticeParams::new(
            LatticePoint::new(0, 0, 0),
            Window::new((0, 2), (0, 1), (0, 1)),
            vec![cr(2.0), cr(2.0)],
            vec![cr(3.0), cr(3.0)],
            vec![cr(5.0), cr(5.0)],
        );
        assert!(matches!(res, Err(LatticeError::InvalidWindow(_))), "got {res:?}");
    }

    // === selector resolution ===

    #[test]
    fn selector_prev_p_reads_one_step_back() {
        let params = constant_params(2.0, 3.0, 5.0);
        let at = LatticePoint::new(1, 0, 0);
        assert_eq!(
            resolve_selector(ParamSelector::PrevP, at, &params).unwrap(),
            cr(2.0)
        );
    }

    #[test]
    fn selector_neg_q_negates_the_value_at_the_point() {
        let params = constant_params(2.0, 3.0, 5.0);
        let at = LatticePoint::new(0, 0, 0);
        assert_eq!(
            resolve_selector(ParamSelector::NegQ, at, &params).unwrap(),
            cr(-3.0)
        );
    }

    #[test]
    fn selector_prev_r_below_base_uses_the_extended_window() {
        // Window starts one step below the base so the backward neighbour exists.
        let params = LatticeParams::new(
            LatticePoint::new(0, 0, 0),
            Window::new((0, 1), (0, 1), (-1, 1)),
            vec![cr(2.0), cr(2.0)],
            vec![cr(3.0), cr(3.0)],
            vec![cr(7.0), cr(5.0), cr(5.0)],
        )
        .unwrap();
        let at = LatticePoint::new(0, 0, 0);
        assert_eq!(
            resolve_selector(ParamSelector::PrevR, at, &params).unwrap(),
            cr(7.0),
            "PrevR at the base must read the value stored below it"
        );
    }

    #[test]
    fn selector_outside_window_errors() {
        let params = constant_params(2.0, 3.0, 5.0);
        let at = LatticePoint::new(0, 0, 0);
        let res = resolve_selector(ParamSelector::PrevP, at, &params);
        assert!(
            matches!(res, Err(LatticeError::IndexOutOfWindow { index: -1, .. })),
            "n-1 = -1 is outside the window, got {res:?}"
        );
    }

    // === validation ===

    fn one_soliton_spectrum() -> SpectralValues {
        SpectralValues {
            k: vec![cr(1.0)],
            kappa: vec![cr(4.0)],
        }
    }

    #[test]
    fn validate_accepts_the_reference_configuration() {
        let params = constant_params(2.0, 3.0, 5.0);
        validate_params(&params, &one_soliton_spectrum(), &[cr(1.0 / 3.0)], &[cr(1.0 / 7.0)])
            .expect("reference configuration must validate");
    }

    #[test]
    fn validate_rejects_parameter_equal_to_dual_eigenvalue() {
        let params = constant_params(2.0, 3.0, 5.0);
        let spectral = SpectralValues {
            k: vec![cr(1.0)],
            kappa: vec![cr(4.0), cr(2.0)],
        };
        match validate_params(&params, &spectral, &[], &[]) {
            Err(LatticeError::SingularConfiguration(detail)) => {
                assert!(
                    detail.contains("kappa[1]"),
                    "detail should name the colliding eigenvalue: {detail}"
                );
            }
            other => panic!("expected SingularConfiguration, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_zero_eigenvalue() {
        let params = constant_params(2.0, 3.0, 5.0);
        let spectral = SpectralValues {
            k: vec![cr(1.0), cr(0.0)],
            kappa: vec![cr(4.0)],
        };
        match validate_params(&params, &spectral, &[], &[]) {
            Err(LatticeError::SingularConfiguration(detail)) => {
                assert!(detail.contains("k[1]"), "detail should name the zero eigenvalue: {detail}");
            }
            other => panic!("expected SingularConfiguration, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_opposite_spectra_and_bad_extras() {
        let params = constant_params(2.0, 3.0, 5.0);
        let opposite = SpectralValues {
            k: vec![cr(1.0)],
            kappa: vec![cr(-1.0)],
        };
        assert!(
            matches!(validate_params(&params, &opposite, &[], &[]), Err(LatticeError::SingularConfiguration(_))),
            "k + kappa = 0 must be rejected"
        );
        let spectral = one_soliton_spectrum();
        assert!(
            matches!(
                validate_params(&params, &spectral, &[cr(-1.0)], &[]),
                Err(LatticeError::SingularConfiguration(_))
            ),
            "a = -k must be rejected"
        );
        assert!(
            matches!(
                validate_params(&params, &spectral, &[], &[cr(-4.0)]),
                Err(LatticeError::SingularConfiguration(_))
            ),
            "b = -kappa must be rejected"
        );
        // a = 0 is fine: the first spectrum is already nonzero.
        validate_params(&params, &spectral, &[cr(0.0)], &[cr(0.0)])
            .expect("zero extras are allowed when the spectra are invertible");
    }

    // === properties ===

    /// Values drawn from a small pool that avoids zero.
    fn pool_value() -> impl Strategy<Value = Scalar> {
        prop_oneof![
            Just(cr(2.0)),
            Just(cr(3.0)),
            Just(cr(5.0)),
            Just(cr(-2.0)),
            Just(Scalar::new(1.0, 1.0)),
            Just(cr(0.5)),
        ]
    }

    proptest! {
        #[test]
        fn validation_is_monotone_under_window_shrinking(
            p in proptest::collection::vec(pool_value(), 4),
            q in proptest::collection::vec(pool_value(), 4),
            r in proptest::collection::vec(pool_value(), 4),
            k in proptest::collection::vec(pool_value(), 1..3),
            kappa in proptest::collection::vec(pool_value(), 1..3),
        ) {
            let full = LatticeParams::new(
                LatticePoint::new(0, 0, 0),
                Window::new((0, 3), (0, 3), (0, 3)),
                p.clone(), q.clone(), r.clone(),
            ).unwrap();
            let spectral = SpectralValues { k, kappa };
            if validate_params(&full, &spectral, &[], &[]).is_ok() {
                // Dropping the top index in every direction must stay valid.
                let shrunk = LatticeParams::new(
                    LatticePoint::new(0, 0, 0),
                    Window::new((0, 2), (0, 2), (0, 2)),
                    p[..3].to_vec(), q[..3].to_vec(), r[..3].to_vec(),
                ).unwrap();
                prop_assert!(
                    validate_params(&shrunk, &spectral, &[], &[]).is_ok(),
                    "shrinking the window must never invalidate an accepted configuration"
                );
            }
        }
    }
}
