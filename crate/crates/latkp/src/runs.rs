//! Run orchestration: resolving configured checks, executing them across
//! worker threads, exporting field grids, and the closed-form-vs-oracle
//! comparison. Threads split the check list; every write happens after the
//! parallel phase, in input order, so output is deterministic.

use crate::config::{ChecksSection, ConfigError, RunConfig};
use crate::report::{CheckSummary, PointEntry, ReportDocument, SCHEMA_VERSION};
use anyhow::{bail, Context, Result};
use fields::{DeformConstants, DeformedId, Evaluator, FieldId};
use lattice::{Direction, LatticePoint, ParamSelector};
use numkit::Scalar;
use serde::Serialize;
use solution::{sylvester_oracle, SolutionBuilder, SystemSource};
use std::fmt;
use verify::{invariance_check, run_check, standard_catalog, CheckId, PoleFilter};

/// Samples drawn by the invariance probe within a verify run.
const INVARIANCE_SAMPLES: usize = 20;
/// Master-function offsets used by the invariance probe.
const INVARIANCE_A: f64 = 1.0 / 3.0;
const INVARIANCE_B: f64 = 1.0 / 7.0;
/// Size cap on the vectorized oracle comparison.
const ORACLE_SIZE_LIMIT: usize = 144;

/// One runnable entry of a verify run: a catalog check or the seeded
/// similarity-invariance probe.
#[derive(Debug, Clone, Copy)]
pub enum RunCheck {
    Standard(CheckId),
    Invariance,
}

impl fmt::Display for RunCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunCheck::Standard(id) => id.fmt(f),
            RunCheck::Invariance => write!(f, "INVARIANCE"),
        }
    }
}

/// Every runnable check name, including the autonomous specializations and
/// the invariance probe.
pub fn all_check_names() -> Vec<String> {
    let mut names: Vec<String> = standard_catalog(true)
        .into_iter()
        .map(|id| id.to_string())
        .collect();
    names.push("INVARIANCE".to_string());
    names
}

/// Resolves the `checks` section. `"all"` expands to the full catalog —
/// including the autonomous forms only when every parameter sequence is
/// constant, since they are undefined otherwise — plus the invariance probe.
pub fn resolve_checks(
    config: &RunConfig,
    builder: &SolutionBuilder,
) -> Result<Vec<RunCheck>, ConfigError> {
    match &config.checks {
        ChecksSection::Mode(mode) if mode == "all" => {
            let constant = Direction::ALL
                .iter()
                .all(|dir| builder.params().is_constant(*dir));
            let mut checks: Vec<RunCheck> = standard_catalog(constant)
                .into_iter()
                .map(RunCheck::Standard)
                .collect();
            checks.push(RunCheck::Invariance);
            Ok(checks)
        }
        ChecksSection::Mode(other) => Err(ConfigError::BadChecksMode(other.clone())),
        ChecksSection::List(names) => names
            .iter()
            .map(|name| {
                if name == "INVARIANCE" {
                    return Ok(RunCheck::Invariance);
                }
                CheckId::parse(name)
                    .map(RunCheck::Standard)
                    .map_err(|err| ConfigError::UnknownCheck(format!("{name} ({err})")))
            })
            .collect(),
    }
}

fn invariance_summary(
    builder: &SolutionBuilder,
    seed: u64,
    points: &[LatticePoint],
    tolerance: f64,
) -> CheckSummary {
    let result = invariance_check(
        builder.clone(),
        seed,
        points,
        INVARIANCE_SAMPLES,
        Scalar::new(INVARIANCE_A, 0.0),
        Scalar::new(INVARIANCE_B, 0.0),
    );
    match result {
        Ok(outcome) => CheckSummary {
            name: "INVARIANCE".to_string(),
            status: if outcome.max_deviation <= tolerance {
                "pass"
            } else {
                "fail"
            },
            tolerance,
            max_normalized: outcome.max_deviation,
            worst_point: None,
            pole_excluded: 0,
            error: None,
            points: Vec::new(),
        },
        Err(err) => CheckSummary {
            name: "INVARIANCE".to_string(),
            status: "error",
            tolerance,
            max_normalized: 0.0,
            worst_point: None,
            pole_excluded: 0,
            error: Some(err.to_string()),
            points: Vec::new(),
        },
    }
}

/// Executes the checks across worker threads, each with its own evaluator
/// over the shared solution, and reassembles summaries in input order.
fn run_checks_parallel(
    builder: &SolutionBuilder,
    constants: DeformConstants,
    checks: &[RunCheck],
    points: &[LatticePoint],
    tolerance: f64,
    filter: &PoleFilter,
    seed: u64,
) -> Result<Vec<CheckSummary>> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(checks.len())
        .max(1);
    let mut merged: Vec<Option<CheckSummary>> = vec![None; checks.len()];
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::with_capacity(workers);
        for worker in 0..workers {
            handles.push(scope.spawn(move || -> Result<Vec<(usize, CheckSummary)>> {
                let ev = Evaluator::new(builder, constants)?;
                let mut batch = Vec::new();
                for (index, check) in checks.iter().enumerate().skip(worker).step_by(workers) {
                    let summary = match check {
                        RunCheck::Standard(id) => CheckSummary::from_outcome(&run_check(
                            &ev, id, points, tolerance, filter,
                        )),
                        RunCheck::Invariance => {
                            invariance_summary(builder, seed, points, tolerance)
                        }
                    };
                    batch.push((index, summary));
                }
                Ok(batch)
            }));
        }
        for handle in handles {
            let batch = handle.join().expect("check worker panicked")?;
            for (index, summary) in batch {
                merged[index] = Some(summary);
            }
        }
        Ok(())
    })?;
    Ok(merged
        .into_iter()
        .map(|slot| slot.expect("every check index is covered"))
        .collect())
}

/// Runs every configured check and assembles the report. Evaluation errors
/// inside a check mark that check `error` and the run continues; only
/// configuration-level problems abort.
pub fn run_verify(
    config: &RunConfig,
    tolerance_override: Option<f64>,
    seed_override: Option<u64>,
) -> Result<ReportDocument> {
    let tolerance = tolerance_override.unwrap_or(config.tolerance);
    let seed = seed_override.unwrap_or(config.seed);
    let params = config.lattice_params()?;
    let spec = config.spectral_config()?;
    let constants = config.deform_constants();
    let builder = SolutionBuilder::new(params, spec)?;
    let checks = resolve_checks(config, &builder)?;
    let points = config.point_list(builder.params())?;

    let filter = {
        let screen = Evaluator::new(&builder, constants)?;
        PoleFilter::new(&screen)?
    };
    let summaries = run_checks_parallel(
        &builder, constants, &checks, &points, tolerance, &filter, seed,
    )?;
    let all_pass = summaries.iter().all(CheckSummary::passed);
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        kind: "verify",
        config: config.clone(),
        tolerance,
        seed,
        points: points.iter().map(|p| [p.n, p.m, p.h]).collect(),
        pole_threshold: filter.threshold(),
        pole_flagged: filter.flagged_count(),
        checks: summaries,
        all_pass,
    })
}

/// Compares the closed-form coefficient matrix against the vectorized
/// linear-system oracle at every window point, and reports the defining
/// relation's residual alongside.
pub fn run_oracle(config: &RunConfig) -> Result<ReportDocument> {
    let params = config.lattice_params()?;
    let spec = config.spectral_config()?;
    let builder = SolutionBuilder::new(params, spec)?;
    let (n, n_prime) = builder.dims();
    if n * n_prime > ORACLE_SIZE_LIMIT {
        bail!(
            "oracle comparison is limited to N*N' <= {ORACLE_SIZE_LIMIT}, got {n}x{n_prime}"
        );
    }
    let points: Vec<LatticePoint> = builder.params().window().points().collect();

    let mut oracle_points = Vec::with_capacity(points.len());
    let mut residual_points = Vec::with_capacity(points.len());
    let mut oracle_error = None;
    let oracle_tol = 1e-10;
    let residual_tol = solution::SYLVESTER_RESIDUAL_BOUND;
    for &point in &points {
        let step = (|| -> Result<(PointEntry, PointEntry), solution::SolutionError> {
            let state = builder.build_m(point)?;
            let reference =
                sylvester_oracle(builder.gamma(), builder.lambda(), &state.r, &state.s)?;
            let deviation = state.m.sub(&reference).max_abs();
            let relative = deviation / reference.max_abs().max(1.0);
            let rs = state.r.matmul(&state.s);
            let defect = builder
                .gamma()
                .matmul(&state.m)
                .add(&state.m.matmul(builder.lambda()))
                .sub(&rs)
                .max_abs();
            let defect_relative = defect / rs.max_abs().max(1.0);
            let triple = [point.n, point.m, point.h];
            Ok((
                PointEntry {
                    point: triple,
                    raw: deviation,
                    normalized: relative,
                    status: if relative <= oracle_tol { "pass" } else { "fail" },
                },
                PointEntry {
                    point: triple,
                    raw: defect,
                    normalized: defect_relative,
                    status: if defect_relative <= residual_tol {
                        "pass"
                    } else {
                        "fail"
                    },
                },
            ))
        })();
        match step {
            Ok((o, r)) => {
                oracle_points.push(o);
                residual_points.push(r);
            }
            Err(err) => {
                oracle_error = Some(format!("at {point}: {err}"));
                break;
            }
        }
    }

    let summarize = |name: &str,
                     tolerance: f64,
                     entries: Vec<PointEntry>,
                     error: Option<String>|
     -> CheckSummary {
        let worst = entries
            .iter()
            .max_by(|a, b| a.normalized.total_cmp(&b.normalized));
        let (max_normalized, worst_point) = match worst {
            Some(entry) => (entry.normalized, Some(entry.point)),
            None => (0.0, None),
        };
        let failed = entries.iter().any(|e| e.status == "fail");
        CheckSummary {
            name: name.to_string(),
            status: if error.is_some() {
                "error"
            } else if failed {
                "fail"
            } else {
                "pass"
            },
            tolerance,
            max_normalized,
            worst_point,
            pole_excluded: 0,
            error,
            points: entries,
        }
    };

    let checks = vec![
        summarize(
            "SYLVESTER_ORACLE",
            oracle_tol,
            oracle_points,
            oracle_error.clone(),
        ),
        summarize(
            "SYLVESTER_RESIDUAL",
            residual_tol,
            residual_points,
            oracle_error,
        ),
    ];
    let all_pass = checks.iter().all(CheckSummary::passed);
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        kind: "oracle",
        config: config.clone(),
        tolerance: oracle_tol,
        seed: config.seed,
        points: points.iter().map(|p| [p.n, p.m, p.h]).collect(),
        pole_threshold: 0.0,
        pole_flagged: 0,
        checks,
        all_pass,
    })
}

// ===================== field export =====================

/// A named exportable quantity: a plain field or a deformed one.
#[derive(Debug, Clone)]
pub enum FieldSpec {
    Plain(FieldId),
    Deformed(DeformedId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// Parses an exportable field name such as `U`, `TAU`, `S(0,0,1/3,1/7)`,
/// `VA(1/3)`, or `ZP(1/3,1/7)`.
pub fn parse_field(text: &str) -> Result<FieldSpec, ConfigError> {
    let text = text.trim();
    let (head, args) = match text.split_once('(') {
        Some((head, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| ConfigError::UnknownField(text.to_string()))?;
            let args: Vec<&str> = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            (head.trim(), args)
        }
        None => (text, Vec::new()),
    };
    let bad_args = |detail: &str| ConfigError::BadFieldArguments {
        name: head.to_string(),
        detail: detail.to_string(),
    };
    let real = |arg: &str| -> Result<Scalar, ConfigError> {
        crate::config::parse_real(arg)
            .map(|v| Scalar::new(v, 0.0))
            .ok_or_else(|| bad_args(&format!("cannot parse scalar {arg:?}")))
    };
    let int = |arg: &str| -> Result<i64, ConfigError> {
        arg.parse()
            .map_err(|_| bad_args(&format!("cannot parse integer {arg:?}")))
    };
    let sel = |arg: &str| -> Result<ParamSelector, ConfigError> {
        Ok(ParamSelector::Constant(real(arg)?))
    };
    let expect = |count: usize| -> Result<(), ConfigError> {
        if args.len() == count {
            Ok(())
        } else {
            Err(bad_args(&format!(
                "expected {count} argument(s), got {}",
                args.len()
            )))
        }
    };
    let field = match head.to_ascii_uppercase().as_str() {
        "U" => {
            expect(0)?;
            FieldSpec::Plain(FieldId::U)
        }
        "V" => {
            expect(0)?;
            FieldSpec::Plain(FieldId::V)
        }
        "W" => {
            expect(0)?;
            FieldSpec::Plain(FieldId::W)
        }
        "Z" => {
            expect(0)?;
            FieldSpec::Plain(FieldId::Z)
        }
        "TAU" => {
            expect(0)?;
            FieldSpec::Plain(FieldId::Tau)
        }
        "S" => {
            expect(4)?;
            FieldSpec::Plain(FieldId::S {
                i: int(args[0])?,
                j: int(args[1])?,
                a: sel(args[2])?,
                b: sel(args[3])?,
            })
        }
        "VA" => {
            expect(1)?;
            FieldSpec::Plain(FieldId::Va(sel(args[0])?))
        }
        "WB" => {
            expect(1)?;
            FieldSpec::Plain(FieldId::Wb(sel(args[0])?))
        }
        "SA" => {
            expect(1)?;
            FieldSpec::Plain(FieldId::Sa(sel(args[0])?))
        }
        "TB" => {
            expect(1)?;
            FieldSpec::Plain(FieldId::Tb(sel(args[0])?))
        }
        "SAB" => {
            expect(2)?;
            FieldSpec::Plain(FieldId::Sab(sel(args[0])?, sel(args[1])?))
        }
        "UVEC0" => {
            expect(2)?;
            FieldSpec::Plain(FieldId::UVec0 {
                i: int(args[0])?,
                a: sel(args[1])?,
            })
        }
        "TUVEC0" => {
            expect(2)?;
            FieldSpec::Plain(FieldId::TUVec0 {
                j: int(args[0])?,
                b: sel(args[1])?,
            })
        }
        "X" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::X)
        }
        "Y" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::Y)
        }
        "YP" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::Yp)
        }
        "XI" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::Xi)
        }
        "ETA" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::Eta)
        }
        "ZP" => {
            expect(2)?;
            FieldSpec::Deformed(DeformedId::Zp {
                a: real(args[0])?,
                b: real(args[1])?,
            })
        }
        "SIGMA" => {
            expect(0)?;
            FieldSpec::Deformed(DeformedId::Sigma)
        }
        _ => return Err(ConfigError::UnknownField(text.to_string())),
    };
    Ok(field)
}

#[derive(Debug, Clone, Serialize)]
struct FieldRow {
    n: i64,
    m: i64,
    h: i64,
    re: f64,
    im: f64,
}

/// Evaluates `field` at every window point in lexicographic order and
/// renders CSV (`n,m,h,re,im`, LF endings, 17 significant digits) or JSON.
pub fn export_fields(
    config: &RunConfig,
    field: &FieldSpec,
    format: ExportFormat,
) -> Result<String> {
    let params = config.lattice_params()?;
    let spec = config.spectral_config()?;
    let constants = config.deform_constants();
    let builder = SolutionBuilder::new(params, spec)?;
    let ev = Evaluator::new(&builder, constants)?;
    let mut rows = Vec::new();
    for point in builder.params().window().points() {
        let value = match field {
            FieldSpec::Plain(id) => ev.field(point, id),
            FieldSpec::Deformed(id) => ev.deformed(point, id),
        }
        .with_context(|| format!("field evaluation failed at {point}"))?;
        rows.push(FieldRow {
            n: point.n,
            m: point.m,
            h: point.h,
            re: value.re,
            im: value.im,
        });
    }
    Ok(match format {
        ExportFormat::Csv => {
            let mut text = String::from("n,m,h,re,im\n");
            for row in rows {
                text.push_str(&format!(
                    "{},{},{},{:.16e},{:.16e}\n",
                    row.n, row.m, row.h, row.re, row.im
                ));
            }
            text
        }
        ExportFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(&rows).expect("row serialization cannot fail");
            text.push('\n');
            text
        }
    })
}
