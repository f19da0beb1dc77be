use serde::Serialize;

use crate::config::RunConfig;
use crate::suites::{run_jobs, Record, Verdict};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub exhausted: usize,
    pub checks: usize,
    pub trivial_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub verdict: Verdict,
}

impl Report {
    /// 0 pass, 1 identity failure, 3 sampling exhaustion.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Exhausted => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the configured suites. Wall times are left out unless `timings` is
/// set, since they would break byte-identical reports.
pub fn run_suite(cfg: &RunConfig, timings: bool) -> Report {
    let records = run_jobs(cfg, timings);
    let count = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
    let summary = Summary {
        records: records.len(),
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        exhausted: count(Verdict::Exhausted),
        checks: records.iter().map(|r| r.checks).sum(),
        trivial_checks: records.iter().map(|r| r.trivial).sum(),
    };
    let verdict = if summary.failed > 0 {
        Verdict::Fail
    } else if summary.exhausted > 0 {
        Verdict::Exhausted
    } else {
        Verdict::Pass
    };
    Report {
        schema: REPORT_SCHEMA,
        tool: "offshell",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        records,
        summary,
        verdict,
    }
}
