//! Report types shared by all verification suites.
//!
//! A suite run produces a [`CheckReport`]: one [`CheckCase`] per checked
//! statement instance, each carrying a verdict and, where meaningful, an
//! exactly rendered margin. Both renderings are deterministic functions of
//! the report contents, so repeated runs with identical parameters produce
//! byte-identical output regardless of how many worker threads computed the
//! cases.

use serde::Serialize;

/// Outcome of a single checked case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The claim held, with any required strictness certified.
    Pass,
    /// The claim failed, or its margin could not be certified.
    Fail,
    /// The case lies outside the claim's hypotheses, or is informational.
    Skipped {
        /// Why the case was not judged.
        reason: String,
    },
}

/// One statement instance together with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCase {
    /// Canonical parameter rendering, e.g. `g=2 n=1 d=[3, 0]`.
    pub params: String,
    /// The claim being checked, in words.
    pub claim: String,
    /// What happened.
    pub verdict: Verdict,
    /// Exact margin or value backing the verdict, canonically rendered.
    /// `None` when no meaningful quantity exists (e.g. hypothesis skips).
    pub margin: Option<String>,
}

/// Complete result of one suite run.
///
/// # Invariants
/// * `passed + failed + skipped == cases.len()`.
/// * `cases` are in the suite's canonical enumeration order, independent of
///   evaluation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    /// Suite name, e.g. `monotonicity`.
    pub suite: String,
    /// Rendered suite parameters, e.g. `max_complexity=6`.
    pub params: String,
    /// All cases, in canonical order.
    pub cases: Vec<CheckCase>,
    /// Number of `Pass` verdicts.
    pub passed: usize,
    /// Number of `Fail` verdicts.
    pub failed: usize,
    /// Number of `Skipped` verdicts.
    pub skipped: usize,
}

impl CheckReport {
    /// Builds a report from finished cases, tallying the verdict counts.
    pub fn assemble(
        suite: impl Into<String>,
        params: impl Into<String>,
        cases: Vec<CheckCase>,
    ) -> Self {
        let mut passed = 0;
        let mut failed = 0;
        let mut skipped = 0;
        for case in &cases {
            match case.verdict {
                Verdict::Pass => passed += 1,
                Verdict::Fail => failed += 1,
                Verdict::Skipped { .. } => skipped += 1,
            }
        }
        CheckReport {
            suite: suite.into(),
            params: params.into(),
            cases,
            passed,
            failed,
            skipped,
        }
    }

    /// A suite passes exactly when no case failed; skips do not block.
    pub fn passes(&self) -> bool {
        self.failed == 0
    }

    /// Plain-text rendering: a header, one line per case, and a summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("suite: ");
        out.push_str(&self.suite);
        out.push_str("\nparams: ");
        out.push_str(&self.params);
        out.push('\n');
        for case in &self.cases {
            match &case.verdict {
                Verdict::Pass => out.push_str("pass"),
                Verdict::Fail => out.push_str("FAIL"),
                Verdict::Skipped { reason } => {
                    out.push_str("skip[");
                    out.push_str(reason);
                    out.push(']');
                }
            }
            out.push_str(" | ");
            out.push_str(&case.params);
            out.push_str(" | ");
            out.push_str(&case.claim);
            if let Some(margin) = &case.margin {
                out.push_str(" | ");
                out.push_str(margin);
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed, {} skipped\nresult: {}\n",
            self.passed,
            self.failed,
            self.skipped,
            if self.passes() { "PASS" } else { "FAIL" }
        ));
        out
    }

    /// Pretty-printed JSON rendering with stable field order.
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
