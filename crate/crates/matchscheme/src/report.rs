//! Structured pass/fail records for theorem and conjecture checks.
//!
//! A failed check always carries at least one witness. Values travel as
//! decimal strings so downstream consumers never need 64-bit-safe parsing.
//! Reports serialize deterministically; wall-clock timings live in a
//! separate envelope section so two runs with the same flags produce
//! byte-identical report arrays.

use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerificationReport {
    /// Stable claim id, e.g. "table1.n4" or "conj.least-eig.n6".
    pub claim: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn pass(claim: impl Into<String>) -> Self {
        VerificationReport {
            claim: claim.into(),
            status: Status::Pass,
            expected: None,
            actual: None,
            witnesses: Vec::new(),
            detail: None,
        }
    }

    /// A failure must name a concrete witness.
    pub fn fail(claim: impl Into<String>, witness: impl Into<String>) -> Self {
        VerificationReport {
            claim: claim.into(),
            status: Status::Fail,
            expected: None,
            actual: None,
            witnesses: vec![witness.into()],
            detail: None,
        }
    }

    pub fn inconclusive(claim: impl Into<String>, detail: impl Into<String>) -> Self {
        VerificationReport {
            claim: claim.into(),
            status: Status::Inconclusive,
            expected: None,
            actual: None,
            witnesses: Vec::new(),
            detail: Some(detail.into()),
        }
    }

    pub fn with_expected(mut self, expected: impl ToString) -> Self {
        self.expected = Some(expected.to_string());
        self
    }

    pub fn with_actual(mut self, actual: impl ToString) -> Self {
        self.actual = Some(actual.to_string());
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witnesses.push(witness.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

/// An ordered collection of reports plus their (envelope-only) timings.
#[derive(Debug, Default, Clone)]
pub struct ReportSet {
    reports: Vec<VerificationReport>,
    timings: Vec<(String, Duration)>,
}

impl ReportSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, report: VerificationReport, elapsed: Duration) {
        self.timings.push((report.claim.clone(), elapsed));
        self.reports.push(report);
    }

    pub fn extend(&mut self, other: ReportSet) {
        self.reports.extend(other.reports);
        self.timings.extend(other.timings);
    }

    pub fn reports(&self) -> &[VerificationReport] {
        &self.reports
    }

    /// Exit-code contract: 0 all pass, 1 any fail, 2 inconclusive only.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(VerificationReport::is_fail) {
            1
        } else if self
            .reports
            .iter()
            .any(|r| r.status == Status::Inconclusive)
        {
            2
        } else {
            0
        }
    }

    /// JSON envelope: deterministic `reports` array, timings under `meta`.
    pub fn to_json(&self) -> serde_json::Value {
        let timings: serde_json::Map<String, serde_json::Value> = self
            .timings
            .iter()
            .map(|(claim, d)| (claim.clone(), serde_json::json!(d.as_millis() as u64)))
            .collect();
        serde_json::json!({
            "meta": { "timings_ms": timings },
            "reports": self.reports,
        })
    }
}
