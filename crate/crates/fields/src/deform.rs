//! Deformed variables: rescalings of the named fields by products of the
//! lattice parameters. The products absorb the explicit parameter
//! dependence, so the deformed variables satisfy parameter-free relations.

use crate::{DeformConstants, Evaluator, FieldError, FieldId, Scalar};
use lattice::{range_product, range_sum, Direction, LatticeParams, LatticePoint, ParamSelector};
use numkit::cr;
use solution::SystemSource;

/// The deformed variables. `Zp` carries its two shift offsets explicitly;
/// the others derive every parameter from the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeformedId {
    X,
    Y,
    Yp,
    Xi,
    Eta,
    Zp { a: Scalar, b: Scalar },
    Sigma,
}

fn ordered(from: i64, to: i64) -> (std::ops::Range<i64>, bool) {
    if to >= from {
        (from..to, false)
    } else {
        (to..from, true)
    }
}

/// Product of pairwise differences `first[i] - second[j]` over two index
/// ranges, each extended below its start by inversion (mirroring the
/// single-range product convention).
fn pair_difference_product(
    params: &LatticeParams,
    first: Direction,
    first_range: (i64, i64),
    second: Direction,
    second_range: (i64, i64),
) -> Result<Scalar, FieldError> {
    let (r1, inverted1) = ordered(first_range.0, first_range.1);
    let (r2, inverted2) = ordered(second_range.0, second_range.1);
    let mut acc = cr(1.0);
    for i in r1 {
        for j in r2.clone() {
            acc *= params.value(first, i)? - params.value(second, j)?;
        }
    }
    if inverted1 == inverted2 {
        // Either both forward or a doubly-inverted range: the two
        // inversions cancel.
        Ok(acc)
    } else {
        if acc.norm() == 0.0 {
            return Err(FieldError::ZeroTransformFactor(format!(
                "difference product {first}/{second} vanishes on an inverted range"
            )));
        }
        Ok(cr(1.0) / acc)
    }
}

/// Product of `value` over one direction's occupied range.
fn dir_value_product(
    params: &LatticeParams,
    dir: Direction,
    from: i64,
    to: i64,
) -> Result<Scalar, FieldError> {
    Ok(range_product(|t| params.value(dir, t), from, to)?)
}

fn nonzero_divisor(value: Scalar, what: &str) -> Result<Scalar, FieldError> {
    if value.norm() == 0.0 {
        return Err(FieldError::ZeroTransformFactor(format!(
            "{what} is an exact zero divisor"
        )));
    }
    Ok(value)
}

impl<S: SystemSource> Evaluator<S> {
    /// Evaluates a deformed variable at `point`. Point-dependent parameters
    /// (the `p` offsets of `Xi`/`Eta`) resolve at `point` itself.
    pub fn deformed(&self, point: LatticePoint, id: &DeformedId) -> Result<Scalar, FieldError> {
        let params = self.params();
        let base = params.base();
        let k: &DeformConstants = self.constants();
        match *id {
            DeformedId::X => {
                let u = self.field(point, &FieldId::U)?;
                let sums = range_sum(|t| params.value(Direction::N, t), base.n, point.n)?
                    + range_sum(|t| params.value(Direction::M, t), base.m, point.m)?
                    + range_sum(|t| params.value(Direction::H, t), base.h, point.h)?;
                Ok(u - (sums + k.x0))
            }
            DeformedId::Y => {
                let v = self.field(point, &FieldId::V)?;
                let prod = dir_value_product(params, Direction::N, base.n, point.n)?
                    * dir_value_product(params, Direction::M, base.m, point.m)?
                    * dir_value_product(params, Direction::H, base.h, point.h)?;
                Ok(v / nonzero_divisor(prod * k.y0, "parameter product for y")?)
            }
            DeformedId::Yp => {
                let w = self.field(point, &FieldId::W)?;
                let prod = dir_value_product(params, Direction::N, base.n, point.n)?
                    * dir_value_product(params, Direction::M, base.m, point.m)?
                    * dir_value_product(params, Direction::H, base.h, point.h)?;
                Ok(w * prod / k.yp0)
            }
            DeformedId::Xi => {
                let a = params.value(Direction::N, point.n - 1)?;
                let va = self.field(point, &FieldId::Va(ParamSelector::Constant(a)))?;
                let div_m = range_product(
                    |t| params.value(Direction::M, t).map(|q| a - q),
                    base.m,
                    point.m,
                )?;
                let div_h = range_product(
                    |t| params.value(Direction::H, t).map(|r| r - a),
                    base.h,
                    point.h,
                )?;
                Ok(va / nonzero_divisor(div_m * div_h * k.xi0, "difference product for xi")?)
            }
            DeformedId::Eta => {
                let b = params.value(Direction::N, point.n)?;
                let wb = self.field(point, &FieldId::Wb(ParamSelector::Constant(-b)))?;
                let mul_m = range_product(
                    |t| params.value(Direction::M, t).map(|q| q - b),
                    base.m,
                    point.m,
                )?;
                let mul_h = range_product(
                    |t| params.value(Direction::H, t).map(|r| r - b),
                    base.h,
                    point.h,
                )?;
                Ok(wb * mul_m * mul_h / k.eta0)
            }
            DeformedId::Zp { a, b } => {
                let sab = self.field(
                    point,
                    &FieldId::Sab(ParamSelector::Constant(a), ParamSelector::Constant(b)),
                )?;
                let offset_sum = nonzero_divisor(a + b, "offset sum a + b")?;
                let mut numerator = cr(1.0);
                let mut denominator = cr(1.0);
                let spans = [
                    (Direction::N, base.n, point.n),
                    (Direction::M, base.m, point.m),
                    (Direction::H, base.h, point.h),
                ];
                for (dir, from, to) in spans {
                    numerator *= range_product(|t| params.value(dir, t).map(|p| p - a), from, to)?;
                    denominator *=
                        range_product(|t| params.value(dir, t).map(|p| p + b), from, to)?;
                }
                let pr = numerator / nonzero_divisor(denominator, "shifted parameter product")?;
                Ok((sab - cr(1.0) / offset_sum)
                    / nonzero_divisor(pr * k.zp0, "ratio product for z'")?)
            }
            DeformedId::Sigma => {
                let tau = self.tau(point)?;
                let a1 = pair_difference_product(
                    params,
                    Direction::N,
                    (base.n, point.n),
                    Direction::M,
                    (base.m, point.m),
                )?;
                let a2 = pair_difference_product(
                    params,
                    Direction::M,
                    (base.m, point.m),
                    Direction::H,
                    (base.h, point.h),
                )?;
                let a3 = pair_difference_product(
                    params,
                    Direction::H,
                    (base.h, point.h),
                    Direction::N,
                    (base.n, point.n),
                )?;
                Ok(tau * a1 * a2 * a3 * k.sigma0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice::Window;
    use solution::{presets, SolutionBuilder};

    fn crs(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn e1() -> Evaluator<SolutionBuilder> {
        let builder =
            SolutionBuilder::new(presets::constant_params(-1, 5), presets::one_soliton()).unwrap();
        Evaluator::new(builder, DeformConstants::reference()).unwrap()
    }

    fn base() -> LatticePoint {
        LatticePoint::new(0, 0, 0)
    }

    // === frozen reference values ===

    #[test]
    fn x_subtracts_the_parameter_sums() {
        let mut constants = DeformConstants::reference();
        constants.x0 = crs(0.0);
        let ev = Evaluator::new(
            SolutionBuilder::new(presets::constant_params(-1, 5), presets::one_soliton()).unwrap(),
            constants,
        )
        .unwrap();
        let x = ev.deformed(LatticePoint::new(1, 0, 0), &DeformedId::X).unwrap();
        assert!(
            (x - crs(-29.0 / 7.0)).norm() < 1e-14,
            "u(1,0,0) = -15/7 minus one p-step of 2: got {x}"
        );
    }

    #[test]
    fn deformed_values_at_the_base_point() {
        let ev = e1();
        // At the base every parameter product is empty, so each value is the
        // underlying field scaled by its constant alone.
        let cases = [
            (DeformedId::Y, (1.0 / 6.0) / 1.2, "v / y0"),
            (DeformedId::Yp, (19.0 / 24.0) / 0.8, "w / yp0"),
            (DeformedId::Xi, (13.0 / 18.0) / 1.1, "va(p(-1)) / xi0"),
            (DeformedId::Eta, (7.0 / 12.0) / 0.9, "wb(-2) / eta0"),
            (
                DeformedId::Zp {
                    a: crs(1.0 / 3.0),
                    b: crs(1.0 / 7.0),
                },
                -2261.0 / 1624.0,
                "(sab - 21/10) / zp0",
            ),
            (DeformedId::Sigma, 1.2 * 0.7, "tau * sigma0"),
        ];
        for (id, want, label) in cases {
            let got = ev.deformed(base(), &id).unwrap();
            assert!(
                (got - crs(want)).norm() < 1e-14,
                "{label}: expected {want}, got {got}"
            );
        }
    }

    #[test]
    fn sigma_accumulates_pairwise_differences() {
        let builder =
            SolutionBuilder::new(presets::acceptance_params(), presets::two_soliton()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let point = LatticePoint::new(2, 1, 1);
        let got = ev.deformed(point, &DeformedId::Sigma).unwrap();
        // Recompute the triple product with explicit loops.
        let params = ev.params();
        let mut expected = ev.tau(point).unwrap() * crs(0.7);
        for i in 0..2 {
            expected *= params.p(i).unwrap() - params.q(0).unwrap();
        }
        expected *= params.q(0).unwrap() - params.r(0).unwrap();
        for i in 0..2 {
            expected *= params.r(0).unwrap() - params.p(i).unwrap();
        }
        assert!(
            (got - expected).norm() < 1e-13 * expected.norm(),
            "sigma at {point}: got {got}, expected {expected}"
        );
    }

    #[test]
    fn sigma_inverts_products_below_the_base() {
        let ev = e1();
        let point = LatticePoint::new(-1, 1, 0);
        let got = ev.deformed(point, &DeformedId::Sigma).unwrap();
        // The n-range is inverted, the m-range is forward: the pair product
        // over (p, q) becomes 1/(p(-1) - q(0)) = 1/(2 - 3) = -1; all other
        // pair products are empty.
        let expected = ev.tau(point).unwrap() * crs(-1.0) * crs(0.7);
        assert!(
            (got - expected).norm() < 1e-14,
            "inverted-range sigma: got {got}, expected {expected}"
        );
    }

    #[test]
    fn xi_resolves_its_offset_at_the_evaluated_point() {
        let builder =
            SolutionBuilder::new(presets::acceptance_params(), presets::mixed_spectrum()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let point = LatticePoint::new(2, 2, 1);
        let got = ev.deformed(point, &DeformedId::Xi).unwrap();
        let params = ev.params();
        let a = params.p(1).unwrap();
        let va = ev
            .field(point, &FieldId::Va(ParamSelector::Constant(a)))
            .unwrap();
        let mut div = crs(1.1);
        for j in 0..2 {
            div *= a - params.q(j).unwrap();
        }
        div *= params.r(0).unwrap() - a;
        let expected = va / div;
        assert!(
            (got - expected).norm() < 1e-13 * expected.norm().max(1.0),
            "xi at {point} uses p(1): got {got}, expected {expected}"
        );
    }

    // === degenerate configurations ===

    #[test]
    fn xi_rejects_an_exact_zero_difference() {
        // q ≡ p makes the (a - q) factor vanish as soon as m moves.
        let params = LatticeParams::new(
            base(),
            Window::new((0, 4), (0, 4), (0, 4)),
            vec![crs(2.0); 5],
            vec![crs(2.0); 5],
            vec![crs(5.0); 5],
        )
        .unwrap();
        let ev = Evaluator::new(
            SolutionBuilder::new(params, presets::one_soliton()).unwrap(),
            DeformConstants::reference(),
        )
        .unwrap();
        let err = ev
            .deformed(LatticePoint::new(1, 1, 0), &DeformedId::Xi)
            .unwrap_err();
        assert!(
            matches!(err, FieldError::ZeroTransformFactor(_)),
            "expected a zero-factor rejection, got {err:?}"
        );
    }

    #[test]
    fn zp_rejects_a_vanishing_shifted_parameter() {
        let ev = e1();
        let err = ev
            .deformed(
                LatticePoint::new(0, 0, 1),
                &DeformedId::Zp {
                    a: crs(1.0 / 3.0),
                    b: crs(-5.0),
                },
            )
            .unwrap_err();
        assert!(
            matches!(err, FieldError::ZeroTransformFactor(_)),
            "r(0) + b = 0 must be rejected, got {err:?}"
        );
    }

    #[test]
    fn zp_rejects_opposite_offsets() {
        let ev = e1();
        let err = ev
            .deformed(
                base(),
                &DeformedId::Zp {
                    a: crs(0.25),
                    b: crs(-0.25),
                },
            )
            .unwrap_err();
        assert!(
            matches!(err, FieldError::ZeroTransformFactor(_)),
            "a + b = 0 has no reference term, got {err:?}"
        );
    }
}
