//! Executes checks over point grids with pole screening.
//!
//! τ vanishes on codimension-one sets (solitons have genuine poles there);
//! residuals at stencils touching such a point are meaningless, so the
//! runner flags every window point whose |τ| collapses relative to the
//! window median and skips any evaluation point within one step of a flag.

use crate::{check_residual, CheckId, VerifyError, POLE_FRACTION};
use fields::Evaluator;
use lattice::{Direction, LatticePoint, Window};
use solution::SystemSource;
use std::collections::HashSet;

/// All points of `window` that keep the full unit stencil inside it.
pub fn interior_points(window: Window) -> Vec<LatticePoint> {
    let (nlo, nhi) = window.range(Direction::N);
    let (mlo, mhi) = window.range(Direction::M);
    let (hlo, hhi) = window.range(Direction::H);
    let mut points = Vec::new();
    for n in nlo + 1..nhi {
        for m in mlo + 1..mhi {
            for h in hlo + 1..hhi {
                points.push(LatticePoint::new(n, m, h));
            }
        }
    }
    points
}

/// Window-wide pole screen built from the τ profile of one solution.
#[derive(Debug, Clone)]
pub struct PoleFilter {
    threshold: f64,
    flagged: HashSet<LatticePoint>,
}

impl PoleFilter {
    /// Scans every window point of the evaluator's lattice.
    pub fn new<S: SystemSource>(ev: &Evaluator<S>) -> Result<PoleFilter, VerifyError> {
        let window = ev.params().window();
        let mut magnitudes = Vec::new();
        for point in window.points() {
            magnitudes.push((point, ev.tau(point)?.norm()));
        }
        let mut sorted: Vec<f64> = magnitudes.iter().map(|(_, t)| *t).collect();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let threshold = POLE_FRACTION * median;
        let flagged = magnitudes
            .into_iter()
            .filter(|(_, t)| *t < threshold)
            .map(|(p, _)| p)
            .collect();
        Ok(PoleFilter { threshold, flagged })
    }

    /// A screen that never excludes anything (for grids known pole-free).
    pub fn disabled() -> PoleFilter {
        PoleFilter {
            threshold: 0.0,
            flagged: HashSet::new(),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.len()
    }

    /// True when any point of the unit cube around `point` is flagged, so
    /// that no evaluated stencil can touch a pole.
    pub fn excludes(&self, point: LatticePoint) -> bool {
        if self.flagged.is_empty() {
            return false;
        }
        for dn in -1..=1 {
            for dm in -1..=1 {
                for dh in -1..=1 {
                    let probe = LatticePoint::new(point.n + dn, point.m + dm, point.h + dh);
                    if self.flagged.contains(&probe) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Pass,
    Fail,
    Pole,
}

/// Result of one check at one point.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub point: LatticePoint,
    pub raw: f64,
    pub normalized: f64,
    pub status: PointStatus,
}

/// Result of one check over a point grid.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: CheckId,
    pub tolerance: f64,
    pub max_normalized: f64,
    pub worst_point: Option<LatticePoint>,
    pub pole_excluded: usize,
    pub error: Option<String>,
    pub points: Vec<PointRecord>,
    pub pass: bool,
}

/// Runs one check at every non-excluded point. The first evaluation error
/// fails the whole check; pole-excluded points are recorded but carry no
/// residual.
pub fn run_check<S: SystemSource>(
    ev: &Evaluator<S>,
    id: &CheckId,
    points: &[LatticePoint],
    tolerance: f64,
    filter: &PoleFilter,
) -> CheckOutcome {
    let mut outcome = CheckOutcome {
        check: *id,
        tolerance,
        max_normalized: 0.0,
        worst_point: None,
        pole_excluded: 0,
        error: None,
        points: Vec::with_capacity(points.len()),
        pass: true,
    };
    for &point in points {
        if filter.excludes(point) {
            outcome.pole_excluded += 1;
            outcome.points.push(PointRecord {
                point,
                raw: 0.0,
                normalized: 0.0,
                status: PointStatus::Pole,
            });
            continue;
        }
        match check_residual(ev, id, point) {
            Ok(res) => {
                let status = if res.normalized <= tolerance {
                    PointStatus::Pass
                } else {
                    outcome.pass = false;
                    PointStatus::Fail
                };
                if outcome.worst_point.is_none() || res.normalized > outcome.max_normalized {
                    outcome.max_normalized = res.normalized;
                    outcome.worst_point = Some(point);
                }
                outcome.points.push(PointRecord {
                    point,
                    raw: res.raw,
                    normalized: res.normalized,
                    status,
                });
            }
            Err(err) => {
                outcome.error = Some(err.to_string());
                outcome.pass = false;
                break;
            }
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::{standard_catalog, EquationId};
    use fields::DeformConstants;
    use lattice::Window;
    use numkit::cr;
    use solution::{presets, BlockSpec, SolutionBuilder, SpectralConfig};

    // === grid enumeration ===

    #[test]
    fn interior_points_trim_one_layer_on_every_side() {
        let pts = interior_points(Window::new((0, 3), (0, 3), (0, 3)));
        assert_eq!(pts.len(), 8, "4x4x4 window has a 2x2x2 interior");
        assert_eq!(pts[0], LatticePoint::new(1, 1, 1));
        assert_eq!(pts[7], LatticePoint::new(2, 2, 2));
    }

    // === pole screening ===

    #[test]
    fn pole_filter_flags_a_genuine_tau_zero_and_checks_still_pass() {
        // Amplitude -5 makes 1 + M C vanish exactly at the base point.
        let spec = SpectralConfig::new(
            vec![BlockSpec::Diagonal {
                values: vec![cr(1.0)],
                amplitudes: vec![cr(-5.0)],
            }],
            vec![BlockSpec::Diagonal {
                values: vec![cr(4.0)],
                amplitudes: vec![cr(1.0)],
            }],
            None,
        )
        .unwrap();
        let builder = SolutionBuilder::new(presets::acceptance_params(), spec).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        assert!(ev.tau(LatticePoint::new(0, 0, 0)).unwrap().norm() < 1e-14);

        let filter = PoleFilter::new(&ev).unwrap();
        assert_eq!(filter.flagged_count(), 1, "only the base point collapses");
        assert!(filter.excludes(LatticePoint::new(1, 1, 1)));
        assert!(!filter.excludes(LatticePoint::new(2, 2, 2)));

        let points = interior_points(ev.params().window());
        let outcome = run_check(
            &ev,
            &CheckId::Equation(EquationId::Lpkp),
            &points,
            1e-10,
            &filter,
        );
        assert!(outcome.pass, "error: {:?}", outcome.error);
        assert_eq!(outcome.pole_excluded, 1);
        assert!(
            outcome.max_normalized <= 1e-10,
            "worst kept point {:.3e}",
            outcome.max_normalized
        );
    }

    #[test]
    fn clean_solution_excludes_nothing() {
        let builder =
            SolutionBuilder::new(presets::acceptance_params(), presets::two_soliton()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let filter = PoleFilter::new(&ev).unwrap();
        assert_eq!(filter.flagged_count(), 0);
        assert!(!filter.excludes(LatticePoint::new(1, 1, 1)));
    }

    // === outcome bookkeeping ===

    #[test]
    fn failing_points_are_recorded_with_the_worst_location() {
        let builder =
            SolutionBuilder::new(presets::acceptance_params(), presets::one_soliton()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let points = interior_points(ev.params().window());
        // An impossible tolerance forces every point to fail.
        let outcome = run_check(
            &ev,
            &CheckId::Equation(EquationId::Lpkp),
            &points,
            0.0,
            &PoleFilter::disabled(),
        );
        assert!(!outcome.pass);
        assert!(outcome.worst_point.is_some());
        assert_eq!(outcome.points.len(), points.len());
        assert!(outcome
            .points
            .iter()
            .any(|rec| rec.status == PointStatus::Fail));
    }

    #[test]
    fn evaluation_errors_fail_the_check_with_a_message() {
        let builder =
            SolutionBuilder::new(presets::acceptance_params(), presets::two_soliton()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let outcome = run_check(
            &ev,
            &CheckId::Equation(EquationId::AutLpkp),
            &[LatticePoint::new(1, 1, 1)],
            1e-10,
            &PoleFilter::disabled(),
        );
        assert!(!outcome.pass);
        let message = outcome.error.expect("error should be captured");
        assert!(
            message.contains("constant parameter sequences"),
            "got {message:?}"
        );
    }

    #[test]
    fn the_full_catalog_passes_on_the_equation_grid() {
        let builder =
            SolutionBuilder::new(presets::equation_params(), presets::two_soliton()).unwrap();
        let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
        let filter = PoleFilter::new(&ev).unwrap();
        let points = interior_points(ev.params().window());
        for id in standard_catalog(false) {
            let outcome = run_check(&ev, &id, &points, 1e-10, &filter);
            assert!(
                outcome.pass,
                "{id}: worst {:.3e} at {:?}, error {:?}",
                outcome.max_normalized, outcome.worst_point, outcome.error
            );
        }
    }
}
