//! Machine-readable run reports with a stable layout: fixed field order,
//! fixed check order, no timestamps — two runs of the same configuration
//! produce byte-identical bytes.

use crate::config::RunConfig;
use lattice::LatticePoint;
use serde::Serialize;
use verify::{CheckOutcome, PointStatus};

pub const SCHEMA_VERSION: u32 = 1;

fn triple(point: LatticePoint) -> [i64; 3] {
    [point.n, point.m, point.h]
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: &'static str,
    /// `"verify"` or `"oracle"`.
    pub kind: &'static str,
    /// Full resolved configuration, echoed so the report is self-describing.
    pub config: RunConfig,
    pub tolerance: f64,
    pub seed: u64,
    pub points: Vec<[i64; 3]>,
    pub pole_threshold: f64,
    pub pole_flagged: usize,
    pub checks: Vec<CheckSummary>,
    pub all_pass: bool,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    /// `"pass"`, `"fail"`, or `"error"`.
    pub status: &'static str,
    pub tolerance: f64,
    pub max_normalized: f64,
    pub worst_point: Option<[i64; 3]>,
    pub pole_excluded: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEntry {
    pub point: [i64; 3],
    pub raw: f64,
    pub normalized: f64,
    /// `"pass"`, `"fail"`, or `"pole"`.
    pub status: &'static str,
}

impl CheckSummary {
    pub fn from_outcome(outcome: &CheckOutcome) -> CheckSummary {
        let status = if outcome.error.is_some() {
            "error"
        } else if outcome.pass {
            "pass"
        } else {
            "fail"
        };
        CheckSummary {
            name: outcome.check.to_string(),
            status,
            tolerance: outcome.tolerance,
            max_normalized: outcome.max_normalized,
            worst_point: outcome.worst_point.map(triple),
            pole_excluded: outcome.pole_excluded,
            error: outcome.error.clone(),
            points: outcome
                .points
                .iter()
                .map(|rec| PointEntry {
                    point: triple(rec.point),
                    raw: rec.raw,
                    normalized: rec.normalized,
                    status: match rec.status {
                        PointStatus::Pass => "pass",
                        PointStatus::Fail => "fail",
                        PointStatus::Pole => "pole",
                    },
                })
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}
