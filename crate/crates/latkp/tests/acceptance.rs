//! Acceptance gate: nine standalone end-to-end checks, one per guarantee the
//! toolkit makes. Each test prints a single `[PASS]`/`[FAIL]` summary line
//! (visible with `cargo test --test acceptance -- --nocapture`) and asserts
//! the stated bound.
//!
//! Coverage: defining-relation certification for every reference solution
//! class, the full equation suite on non-constant sequences, the shift
//! dynamics of the master function and its contractions, the Miura and
//! tau-function links, the eight linear (Lax) systems with the vacuum and
//! phi-sum specializations, similarity invariance, the deformation map with
//! its autonomous closure, a negative control proving the harness can fail,
//! and byte-level report determinism.

use fields::{DeformConstants, Evaluator, FieldId};
use lattice::{LatticeParams, LatticePoint, ParamSelector};
use latkp::RunConfig;
use numkit::Scalar;
use solution::{presets, sylvester_oracle, BlockSpec, SolutionBuilder, SpectralConfig, SystemSource};
use std::collections::HashMap;
use verify::{
    interior_points, invariance_check, lpkp_residual_on_grid, run_check, CheckId, LpkpForm,
    PoleFilter,
};

// ===================== bounds =====================

/// Residual bound for the equation, dynamics, Miura, Lax, and deformation
/// suites on constructed solutions.
const SUITE_TOL: f64 = 1e-10;
/// Bound on the defining-relation defect of every constructed coefficient
/// matrix.
const SYLVESTER_TOL: f64 = 1e-11;
/// Bound for identities that are exact up to rounding: the scalar
/// tau-ratio fixture, the eigenfunction component sum, and the vacuum.
const EXACT_TOL: f64 = 1e-13;
/// Bound for the autonomous specializations on constant sequences.
const AUTONOMOUS_TOL: f64 = 1e-12;

fn cr(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}

fn report(label: &str, ok: bool, detail: &str) {
    println!("[{}] {label}: {detail}", if ok { "PASS" } else { "FAIL" });
}

/// Worst normalized residual of the named checks over the interior points of
/// `params`, across every reference solution class. Returns the maximum and
/// the class/check where it occurred.
fn suite_worst(params: &LatticeParams, names: &[String], tolerance: f64) -> (f64, String) {
    let points = interior_points(params.window());
    let filter = PoleFilter::disabled();
    let mut worst = 0.0_f64;
    let mut location = String::from("nowhere");
    for (class, spec) in presets::reference_classes() {
        let builder = SolutionBuilder::new(params.clone(), spec).expect("class builds");
        let ev = Evaluator::new(builder, DeformConstants::reference()).expect("constants valid");
        for name in names {
            let id = CheckId::parse(name).expect("catalog name parses");
            let outcome = run_check(&ev, &id, &points, tolerance, &filter);
            assert!(
                outcome.error.is_none(),
                "{class}/{name} errored: {:?}",
                outcome.error
            );
            if outcome.max_normalized > worst {
                worst = outcome.max_normalized;
                location = format!("{class}/{name}");
            }
        }
    }
    (worst, location)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// One eigenvalue per side with a zero column amplitude: the plane-wave
/// factor vanishes identically, so u = 0, v = w = tau = 1 everywhere.
fn vacuum_spectrum() -> SpectralConfig {
    SpectralConfig::new(
        vec![BlockSpec::Diagonal {
            values: vec![cr(1.0)],
            amplitudes: vec![cr(0.0)],
        }],
        vec![BlockSpec::Diagonal {
            values: vec![cr(4.0)],
            amplitudes: vec![cr(1.0)],
        }],
        None,
    )
    .expect("vacuum spectrum is valid")
}

// ===================== 1: defining-relation certification =====================

#[test]
fn sylvester_certification_holds_for_every_reference_class() {
    let params = presets::acceptance_params();
    let mut worst_defect = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    for (class, spec) in presets::reference_classes() {
        let builder = SolutionBuilder::new(params.clone(), spec).expect("class builds");
        for point in params.window().points() {
            let state = builder
                .build_m(point)
                .unwrap_or_else(|err| panic!("{class} at {point}: {err}"));
            let rs = state.r.matmul(&state.s);
            let defect = builder
                .gamma()
                .matmul(&state.m)
                .add(&state.m.matmul(builder.lambda()))
                .sub(&rs)
                .max_abs()
                / rs.max_abs().max(1.0);
            let reference =
                sylvester_oracle(builder.gamma(), builder.lambda(), &state.r, &state.s)
                    .unwrap_or_else(|err| panic!("{class} oracle at {point}: {err}"));
            let deviation =
                state.m.sub(&reference).max_abs() / reference.max_abs().max(1.0);
            worst_defect = worst_defect.max(defect);
            worst_oracle = worst_oracle.max(deviation);
        }
    }
    let ok = worst_defect <= SYLVESTER_TOL && worst_oracle <= SUITE_TOL;
    report(
        "sylvester certification",
        ok,
        &format!(
            "5 classes x 125 points: max defining-relation defect {worst_defect:.3e} \
             (bound {SYLVESTER_TOL:.0e}), max closed-form vs oracle deviation \
             {worst_oracle:.3e} (bound {SUITE_TOL:.0e})"
        ),
    );
    assert!(ok, "defect {worst_defect:.3e}, oracle deviation {worst_oracle:.3e}");
}

// ===================== 2: equation suite =====================

#[test]
fn equation_suite_passes_on_non_constant_sequences() {
    let list = names(&[
        "LPKP",
        "LPKP_ALT",
        "LPKP_RATIO",
        "LPMKP_V",
        "LPMKP_W",
        "ASYM_V_P",
        "ASYM_V_Q",
        "ASYM_V_R",
        "ASYM_W_P",
        "ASYM_W_Q",
        "ASYM_W_R",
        "NQC(1/3,1/7)",
        "LSKP",
        "BLKP",
    ]);
    let (worst, location) = suite_worst(&presets::equation_params(), &list, SUITE_TOL);
    let ok = worst <= SUITE_TOL;
    report(
        "equation suite",
        ok,
        &format!(
            "{} equations x 5 classes x 8 interior points: max normalized residual \
             {worst:.3e} at {location} (bound {SUITE_TOL:.0e})",
            list.len()
        ),
    );
    assert!(ok, "worst residual {worst:.3e} at {location}");
}

// ===================== 3: dynamics suite =====================

#[test]
fn dynamics_suite_passes_on_non_constant_sequences() {
    let mut list = names(&["M_DYNA", "VA_DYNA(1/3)", "WB_DYNA(1/7)", "SAB_DYNA(1/3,1/7)"]);
    for i in [-1, 0, 1] {
        for a in ["0", "1/3"] {
            list.push(format!("U_DYNA({i},{a})"));
        }
        for b in ["0", "1/7"] {
            list.push(format!("TU_DYNA({i},{b})"));
        }
        for j in [-1, 0, 1] {
            list.push(format!("S_DYNA({i},{j},1/3,1/7)"));
        }
    }
    let (worst, location) = suite_worst(&presets::equation_params(), &list, SUITE_TOL);
    let ok = worst <= SUITE_TOL;
    report(
        "dynamics suite",
        ok,
        &format!(
            "{} recurrences x 5 classes x 8 interior points: max normalized residual \
             {worst:.3e} at {location} (bound {SUITE_TOL:.0e})",
            list.len()
        ),
    );
    assert!(ok, "worst residual {worst:.3e} at {location}");
}

// ===================== 4: Miura and tau links =====================

#[test]
fn miura_and_tau_links_pass_with_the_scalar_ratio_fixture() {
    let list = names(&["MU1(0)", "MU1(1/3)", "MU2(0)", "MU2(1/7)", "U_TAU", "TAU_VW"]);
    let (worst, location) = suite_worst(&presets::equation_params(), &list, SUITE_TOL);

    // Scalar fixture: with p = 2, q = 3, r = 5, k = 1, kappa = 4 the shifted
    // tau over tau between (0,0,0) and (1,0,0) equals w at offset -2, and
    // both equal 7/12 exactly.
    let builder =
        SolutionBuilder::new(presets::constant_params(0, 2), presets::one_soliton()).unwrap();
    let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
    let base = LatticePoint::new(0, 0, 0);
    let shifted = LatticePoint::new(1, 0, 0);
    let ratio = ev.tau(shifted).unwrap() / ev.tau(base).unwrap();
    let wb = ev
        .field(base, &FieldId::Wb(ParamSelector::Constant(cr(-2.0))))
        .unwrap();
    let expected = cr(7.0 / 12.0);
    let ratio_err = (ratio - expected).norm();
    let wb_err = (wb - expected).norm();

    let ok = worst <= SUITE_TOL && ratio_err <= EXACT_TOL && wb_err <= EXACT_TOL;
    report(
        "miura/tau links",
        ok,
        &format!(
            "6 relations x 5 classes x 8 interior points: max normalized residual \
             {worst:.3e} at {location} (bound {SUITE_TOL:.0e}); tau-ratio fixture \
             |ratio - 7/12| = {ratio_err:.3e}, |w(-2) - 7/12| = {wb_err:.3e} \
             (bound {EXACT_TOL:.0e})"
        ),
    );
    assert!(
        ok,
        "worst {worst:.3e} at {location}, ratio err {ratio_err:.3e}, wb err {wb_err:.3e}"
    );
}

// ===================== 5: linear (Lax) systems =====================

#[test]
fn lax_systems_pass_with_exact_component_sum_and_vacuum() {
    let families = names(&[
        "LAX_U",
        "LAX_TU",
        "LAX_BLKP_U",
        "LAX_BLKP_TU",
        "LAX_V",
        "LAX_V_ASYM",
        "LAX_W",
        "LAX_W_ASYM",
    ]);
    let (worst, location) = suite_worst(&presets::equation_params(), &families, SUITE_TOL);
    let (phi_worst, phi_loc) =
        suite_worst(&presets::equation_params(), &names(&["PHI_SUM"]), EXACT_TOL);

    // Vacuum: a zero plane-wave amplitude forces u = 0, v = w = tau = 1
    // everywhere; the linear systems then hold to rounding.
    let builder =
        SolutionBuilder::new(presets::acceptance_params(), vacuum_spectrum()).unwrap();
    let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
    let mut vacuum_fields = 0.0_f64;
    for point in ev.params().window().points() {
        let u = ev.field(point, &FieldId::U).unwrap().norm();
        let v = (ev.field(point, &FieldId::V).unwrap() - cr(1.0)).norm();
        let w = (ev.field(point, &FieldId::W).unwrap() - cr(1.0)).norm();
        let tau = (ev.tau(point).unwrap() - cr(1.0)).norm();
        vacuum_fields = vacuum_fields.max(u).max(v).max(w).max(tau);
    }
    let points = interior_points(ev.params().window());
    let filter = PoleFilter::disabled();
    let mut vacuum_lax = 0.0_f64;
    for name in &families {
        let id = CheckId::parse(name).unwrap();
        let outcome = run_check(&ev, &id, &points, EXACT_TOL, &filter);
        assert!(outcome.error.is_none(), "vacuum {name}: {:?}", outcome.error);
        vacuum_lax = vacuum_lax.max(outcome.max_normalized);
    }

    let ok = worst <= SUITE_TOL
        && phi_worst <= EXACT_TOL
        && vacuum_fields <= EXACT_TOL
        && vacuum_lax <= EXACT_TOL;
    report(
        "lax systems",
        ok,
        &format!(
            "8 families x 5 classes x 8 interior points: max normalized residual \
             {worst:.3e} at {location} (bound {SUITE_TOL:.0e}); component sum \
             {phi_worst:.3e} at {phi_loc} and vacuum fields {vacuum_fields:.3e} / \
             systems {vacuum_lax:.3e} (bound {EXACT_TOL:.0e})"
        ),
    );
    assert!(
        ok,
        "families {worst:.3e} at {location}, phi {phi_worst:.3e}, vacuum fields \
         {vacuum_fields:.3e}, vacuum systems {vacuum_lax:.3e}"
    );
}

// ===================== 6: similarity invariance =====================

#[test]
fn similarity_transforms_leave_master_values_invariant() {
    let params = presets::acceptance_params();
    let sample_pool: Vec<LatticePoint> = params.window().points().collect();
    let mut worst = 0.0_f64;
    let mut location = String::from("nowhere");
    for (class, spec) in presets::reference_classes() {
        let builder = SolutionBuilder::new(params.clone(), spec).expect("class builds");
        let outcome = invariance_check(
            builder,
            42,
            &sample_pool,
            20,
            cr(1.0 / 3.0),
            cr(1.0 / 7.0),
        )
        .unwrap_or_else(|err| panic!("{class}: {err}"));
        if outcome.max_deviation > worst {
            worst = outcome.max_deviation;
            location = class.to_string();
        }
    }
    let ok = worst <= SUITE_TOL;
    report(
        "similarity invariance",
        ok,
        &format!(
            "5 classes x 20 sampled (point, i, j) triples: max relative change of the \
             master function and tau {worst:.3e} on {location} (bound {SUITE_TOL:.0e})"
        ),
    );
    assert!(ok, "worst deviation {worst:.3e} on {location}");
}

// ===================== 7: deformation map and autonomous closure =====================

#[test]
fn deformations_pass_and_autonomous_forms_close_on_constant_sequences() {
    let deform = names(&[
        "DEF_X",
        "DEF_Y",
        "DEF_YP",
        "DEF_XI",
        "DEF_ETA",
        "DEF_ZP(1/3,1/7)",
        "DEF_SIGMA",
    ]);
    let (def_worst, def_loc) = suite_worst(&presets::equation_params(), &deform, SUITE_TOL);

    let autonomous = names(&[
        "AUT_LPKP",
        "AUT_LPMKP_I",
        "AUT_LPMKP_II",
        "AUT_ASYM_I",
        "AUT_ASYM_II",
        "AUT_NQC(1/3,1/7)",
        "AUT_BLKP",
    ]);
    let (aut_worst, aut_loc) =
        suite_worst(&presets::constant_params(0, 3), &autonomous, AUTONOMOUS_TOL);

    let ok = def_worst <= SUITE_TOL && aut_worst <= AUTONOMOUS_TOL;
    report(
        "deformation & autonomous closure",
        ok,
        &format!(
            "7 deformed equations: max residual {def_worst:.3e} at {def_loc} (bound \
             {SUITE_TOL:.0e}); 7 autonomous forms on constant sequences: max residual \
             {aut_worst:.3e} at {aut_loc} (bound {AUTONOMOUS_TOL:.0e})"
        ),
    );
    assert!(ok, "deformed {def_worst:.3e} at {def_loc}, autonomous {aut_worst:.3e} at {aut_loc}");
}

// ===================== 8: negative control =====================

#[test]
fn perturbing_one_field_value_is_detected_at_every_touching_stencil() {
    let builder =
        SolutionBuilder::new(presets::acceptance_params(), presets::one_soliton()).unwrap();
    let ev = Evaluator::new(builder, DeformConstants::reference()).unwrap();
    let mut grid: HashMap<LatticePoint, Scalar> = HashMap::new();
    for point in ev.params().window().points() {
        grid.insert(point, ev.field(point, &FieldId::U).unwrap());
    }
    let bump = LatticePoint::new(2, 2, 2);
    *grid.get_mut(&bump).unwrap() += cr(1e-3);
    let lookup = |x: LatticePoint| Ok(grid[&x]);

    // The flagship form reads u at the six single- and double-shift corners
    // of the unit cube, so exactly six stencils see the bump; every one of
    // them must blow up while stencils that never read it stay clean.
    let residual_at = |point: LatticePoint| -> f64 {
        lpkp_residual_on_grid(LpkpForm::Standard, ev.params(), point, lookup)
            .unwrap()
            .normalized
    };
    let affected_offsets = [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 0),
        (1, 0, 1),
        (0, 1, 1),
    ];
    let mut affected_min = f64::INFINITY;
    for (dn, dm, dh) in affected_offsets {
        let stencil = LatticePoint::new(bump.n - dn, bump.m - dm, bump.h - dh);
        affected_min = affected_min.min(residual_at(stencil));
    }
    let mut clean_max = 0.0_f64;
    for untouched in [
        LatticePoint::new(0, 0, 0),
        LatticePoint::new(1, 1, 1),
        LatticePoint::new(2, 2, 2),
    ] {
        clean_max = clean_max.max(residual_at(untouched));
    }

    let ok = affected_min > 1e-5 && clean_max <= SUITE_TOL;
    report(
        "negative control",
        ok,
        &format!(
            "u bumped by 1e-3 at one interior point: all 6 reading stencils exceed \
             1e-5 (min {affected_min:.3e}) while non-reading stencils stay at \
             {clean_max:.3e}"
        ),
    );
    assert!(ok, "affected min {affected_min:.3e}, clean max {clean_max:.3e}");
}

// ===================== 9: report determinism =====================

#[test]
fn identical_configs_yield_byte_identical_reports() {
    let config_text = r#"{
        "lattice": {
            "base": [0, 0, 0],
            "window": {"n": [0, 3], "m": [0, 3], "h": [0, 3]},
            "p": [2, 2.5, 3, 3.5],
            "q": ["10/3", "11/3", "13/3", "14/3"],
            "r": [5, 5.5, 6, 6.5]
        },
        "solution": {
            "k_blocks": [{"type": "diagonal", "values": [1, 0.7], "amplitudes": [1, 1]}],
            "kappa_blocks": [{"type": "diagonal", "values": [0.5, 1.2], "amplitudes": [1, 1]}]
        }
    }"#;
    let config_a = RunConfig::from_json(config_text).unwrap();
    let config_b = RunConfig::from_json(config_text).unwrap();
    let report_a = latkp::run_verify(&config_a, None, None).unwrap();
    let report_b = latkp::run_verify(&config_b, None, None).unwrap();
    let bytes_a = report_a.to_json();
    let bytes_b = report_b.to_json();
    let ok = report_a.all_pass && bytes_a == bytes_b;
    report(
        "determinism",
        ok,
        &format!(
            "two runs of one config: {} checks, all_pass = {}, reports byte-identical = {}",
            report_a.checks.len(),
            report_a.all_pass,
            bytes_a == bytes_b
        ),
    );
    assert!(ok, "all_pass {}, identical {}", report_a.all_pass, bytes_a == bytes_b);
}
