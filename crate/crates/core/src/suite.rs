//! Batch verification over seeded instances.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generate::{generate_instance, InstanceKind};
use crate::minimax::{verify_theorem, Status, Theorem, VerificationReport};
use crate::schema::{verification_report_json, Limits};

pub fn kind_for(theorem: Theorem) -> InstanceKind {
    match theorem {
        Theorem::ThGen => InstanceKind::ThGen,
        Theorem::L1Prop => InstanceKind::L1Prop,
        Theorem::LinInd => InstanceKind::LinInd,
        Theorem::Prop1 => InstanceKind::Prop1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub caps: Limits,
    pub input: Option<String>,
    pub output: Option<String>,
    pub tool_version: String,
    pub wall_time_ms: u128,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, seed: u64, trials: usize, max_dim: usize) -> Self {
        Self {
            command: command.into(),
            seed,
            trials,
            max_dim,
            caps: Limits::default(),
            input: None,
            output: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_ms: 0,
        }
    }
}

/// One trial: either a report or the reason no instance could be drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Report(VerificationReport),
    Unsatisfied { seed: u64, reason: String },
}

impl TrialOutcome {
    pub fn status(&self) -> Status {
        match self {
            TrialOutcome::Report(r) => r.status,
            TrialOutcome::Unsatisfied { .. } => Status::HypothesisNotMet,
        }
    }

    pub fn to_json(&self, theorem: Theorem) -> Value {
        match self {
            TrialOutcome::Report(r) => verification_report_json(r),
            TrialOutcome::Unsatisfied { seed, reason } => json!({
                "theorem": theorem.name(),
                "provenance": {"seed": seed, "kind": kind_for(theorem).name()},
                "status": Status::HypothesisNotMet.name(),
                "hypothesis_checks": [{"name": "instance_generated", "passed": false, "detail": reason}],
                "conclusion_checks": [],
                "witnesses": null,
                "notes": ["could not satisfy hypotheses"],
            }),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub verified: usize,
    pub hypothesis_not_met: usize,
    pub degenerate: usize,
    #[serde(rename = "VIOLATION")]
    pub violation: usize,
}

impl Summary {
    fn add(&mut self, status: Status) {
        match status {
            Status::Verified => self.verified += 1,
            Status::HypothesisNotMet => self.hypothesis_not_met += 1,
            Status::Degenerate => self.degenerate += 1,
            Status::Violation => self.violation += 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub theorem: Theorem,
    pub manifest: RunManifest,
    /// In seed order.
    pub trials: Vec<TrialOutcome>,
    pub summary: Summary,
}

impl SuiteRun {
    /// 0 when nothing was violated, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.violation > 0)
    }

    /// Manifest line followed by one report per trial.
    pub fn write_jsonl(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut *out, &self.manifest)?;
        writeln!(out)?;
        for t in &self.trials {
            serde_json::to_writer(&mut *out, &t.to_json(self.theorem))?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Trial `i` uses seed `seed + i`. Trials run in parallel; results are kept
/// in seed order. Solver failures abort the run.
pub fn run_verification_suite(
    theorem: Theorem,
    trials: usize,
    seed: u64,
    max_dim: usize,
) -> Result<SuiteRun> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let kind = kind_for(theorem);
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            match generate_instance(kind, s, max_dim) {
                Ok(inst) => verify_theorem(&inst, theorem).map(TrialOutcome::Report),
                Err(e @ Error::BudgetExhausted { .. }) => Ok(TrialOutcome::Unsatisfied {
                    seed: s,
                    reason: e.to_string(),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut summary = Summary::default();
    for t in &outcomes {
        summary.add(t.status());
    }
    let mut manifest = RunManifest::new(format!("verify {}", theorem.name()), seed, trials, max_dim);
    manifest.wall_time_ms = start.elapsed().as_millis();
    Ok(SuiteRun {
        theorem,
        manifest,
        trials: outcomes,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite() {
        let run = run_verification_suite(Theorem::L1Prop, 1, 7, 2).unwrap();
        assert_eq!(run.summary.verified, 1);
        assert_eq!(run.exit_code(), 0);
        let mut buf = Vec::new();
        run.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().contains("\"status\":\"verified\""));
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_verification_suite(Theorem::ThGen, 4, 3, 3).unwrap();
        let b = run_verification_suite(Theorem::ThGen, 4, 3, 3).unwrap();
        assert_eq!(a.trials, b.trials);
        assert!(run_verification_suite(Theorem::ThGen, 0, 3, 3).is_err());
    }
}
