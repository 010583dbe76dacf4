//! Claim-by-claim verification and figure data.
//!
//! Each claim runs to a [`VerificationReport`] holding exact witnesses.
//! A claim that would exceed the configured [`Caps`] is reported as skipped
//! with the reason rather than silently truncated.

mod claims;
mod figures;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::caps::Caps;
use crate::error::{Error, Result};

pub use claims::{
    verify_beta_limits, verify_beta_pinning, verify_c5_min, verify_density_example, verify_ex4,
    verify_ex5_vertices, verify_labeling_partition, verify_lower_rule, verify_monotone_containment,
    verify_multinomial_limit, verify_multinomial_pinning, verify_pattern_oracle,
};
pub use figures::{beta_grid, emit_figure_data, simplex_grid, Figure, FigureSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claim: String,
    pub status: Status,
    /// Named exact values, in the order they were recorded.
    pub witnesses: Vec<(String, String)>,
    /// One message per failed sub-assertion.
    pub failures: Vec<String>,
    /// Why the claim was skipped.
    pub reason: Option<String>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn witness(&self, key: &str) -> Option<&str> {
        self.witnesses
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// JSON object; elapsed time is included only when `timing` is set so that
    /// the default rendering is reproducible byte for byte.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut witnesses = Map::new();
        for (k, v) in &self.witnesses {
            witnesses.insert(k.clone(), Value::String(v.clone()));
        }
        let mut out = json!({
            "claim": self.claim,
            "status": self.status.to_string(),
            "witnesses": witnesses,
            "failures": self.failures,
        });
        if let Some(reason) = &self.reason {
            out["reason"] = json!(reason);
        }
        if timing {
            out["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        out
    }
}

/// Accumulates witnesses and sub-assertions for one claim.
pub(crate) struct Check {
    witnesses: Vec<(String, String)>,
    failures: Vec<String>,
}

impl Check {
    pub(crate) fn witness(&mut self, key: impl Into<String>, value: impl ToString) {
        self.witnesses.push((key.into(), value.to_string()));
    }

    pub(crate) fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(message());
        }
    }
}

pub(crate) fn run_claim(
    claim: &str,
    body: impl FnOnce(&mut Check) -> Result<()>,
) -> VerificationReport {
    let start = Instant::now();
    let mut check = Check {
        witnesses: Vec::new(),
        failures: Vec::new(),
    };
    let outcome = body(&mut check);
    let (status, reason) = match outcome {
        Err(e @ Error::CapExceeded { .. }) => (Status::Skipped, Some(e.to_string())),
        Err(e) => {
            check.failures.push(e.to_string());
            (Status::Fail, None)
        }
        Ok(()) if check.failures.is_empty() => (Status::Pass, None),
        Ok(()) => (Status::Fail, None),
    };
    VerificationReport {
        claim: claim.to_string(),
        status,
        witnesses: check.witnesses,
        failures: check.failures,
        reason,
        elapsed: start.elapsed(),
    }
}

type ClaimFn = fn(&Caps) -> VerificationReport;

/// Every registered claim id with its default-configuration runner.
pub fn claims() -> Vec<(&'static str, ClaimFn)> {
    let mut list: Vec<(&'static str, ClaimFn)> = vec![
        ("beta-infinity-limit", |c| verify_beta_limits(c)),
        ("beta-pinning", |_| verify_beta_pinning()),
        ("c5-minimizer", |c| verify_c5_min(7..=11, c)),
        ("density-example", |c| verify_density_example(c)),
        ("ex4-vertices", |c| verify_ex4(12, c)),
        ("ex5-vertex-families", |c| verify_ex5_vertices(5..=10, c)),
        ("labeling-partition", |_| verify_labeling_partition(2..=10)),
        ("lower-rule-consistency", |_| verify_lower_rule(4..=8)),
        ("monotone-containment", |c| verify_monotone_containment(5..=10, c)),
        ("multinomial-limit-n4", |c| verify_multinomial_limit(4, &[8, 12, 16, 20], c)),
        ("multinomial-limit-n5", |c| verify_multinomial_limit(5, &[8, 12, 16, 20], c)),
        ("multinomial-pinning", |_| verify_multinomial_pinning()),
        ("pattern-oracle", |_| verify_pattern_oracle(500, 14, 5, 0x5eed)),
    ];
    list.sort_by_key(|(id, _)| *id);
    list
}

pub fn claim_ids() -> Vec<&'static str> {
    claims().into_iter().map(|(id, _)| id).collect()
}

pub fn run_claim_by_id(id: &str, caps: &Caps) -> Result<VerificationReport> {
    claims()
        .into_iter()
        .find(|(c, _)| *c == id)
        .map(|(_, f)| f(caps))
        .ok_or_else(|| {
            Error::domain(format!(
                "unknown claim {id:?}; known claims: {}",
                claim_ids().join(", ")
            ))
        })
}

/// Runs every claim concurrently; reports come back sorted by claim id.
pub fn run_all(caps: &Caps) -> Vec<VerificationReport> {
    let mut reports: Vec<VerificationReport> =
        claims().par_iter().map(|(_, f)| f(caps)).collect();
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runner_classifies_outcomes() {
        let pass = run_claim("p", |c| {
            c.witness("x", 1);
            Ok(())
        });
        assert!(pass.passed());
        assert_eq!(pass.witness("x"), Some("1"));
        let fail = run_claim("f", |c| {
            c.require(false, || "nope".into());
            Ok(())
        });
        assert_eq!(fail.status, Status::Fail);
        assert_eq!(fail.failures, ["nope"]);
        let skipped = run_claim("s", |_| {
            Err(Error::CapExceeded {
                what: "shape count",
                value: 10,
                limit: 1,
            })
        });
        assert_eq!(skipped.status, Status::Skipped);
        assert!(skipped.reason.is_some());
        let errored = run_claim("e", |_| Err(Error::domain("bad")));
        assert_eq!(errored.status, Status::Fail);
    }

    #[test]
    fn json_omits_timing_by_default() {
        let r = run_claim("p", |_| Ok(()));
        assert!(r.to_json(false).get("elapsed_ms").is_none());
        assert!(r.to_json(true).get("elapsed_ms").is_some());
    }

    #[test]
    fn registry_is_sorted_and_unique() {
        let ids = claim_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert!(run_claim_by_id("no-such-claim", &Caps::default()).is_err());
    }
}
