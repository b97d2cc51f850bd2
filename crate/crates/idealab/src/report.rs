//! Check records, reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use idealab_core::Verdict;
use serde::{Serialize, Serializer};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    #[serde(serialize_with = "verdict_str")]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

fn verdict_str<S: Serializer>(v: &Verdict, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(v.as_str())
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: &str, verdict: Verdict) -> Self {
        CheckRecord { id: id.into(), anchor: anchor.to_string(), verdict, witness: None }
    }

    pub fn with(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }
}

/// Exit status: 0 all pass, 1 any fail, 3 only undecided findings besides passes.
pub fn exit_code(checks: &[CheckRecord]) -> i32 {
    if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        1
    } else if checks.iter().any(|c| c.verdict == Verdict::Undecided) {
        3
    } else {
        0
    }
}

pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<CheckRecord>,
    pub budgets: BTreeMap<String, u64>,
    /// `None` unless timing was requested, so default reports are reproducible.
    pub elapsed_ms: Option<u64>,
    pub exit: i32,
}

impl Report {
    pub fn new(
        command: String,
        checks: Vec<CheckRecord>,
        budgets: BTreeMap<String, u64>,
        elapsed_ms: Option<u64>,
    ) -> Self {
        let exit = exit_code(&checks);
        Report { command, checks, budgets, elapsed_ms, exit }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0).max(5);
        let _ = writeln!(out, "{:<10} {:<width$}  anchor", "verdict", "check");
        for c in &self.checks {
            let _ = writeln!(out, "{:<10} {:<width$}  {}", c.verdict.as_str(), c.id, c.anchor);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:<10} {}", "", serde_json::to_string(w).expect("witness serializes"));
            }
        }
        let budgets: Vec<String> = self.budgets.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "budgets: {}", budgets.join(" "));
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms} ms");
        }
        let pass = self.checks.iter().filter(|c| c.verdict == Verdict::Pass).count();
        let _ = writeln!(out, "{pass}/{} checks pass; exit {}", self.checks.len(), self.exit);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_worst_verdict() {
        let rec = |v| CheckRecord::new("c", "a", v);
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[rec(Verdict::Pass)]), 0);
        assert_eq!(exit_code(&[rec(Verdict::Pass), rec(Verdict::Undecided)]), 3);
        assert_eq!(exit_code(&[rec(Verdict::Undecided), rec(Verdict::Fail)]), 1);
    }

    #[test]
    fn json_schema_keys() {
        let r = Report::new(
            "ideal member".into(),
            vec![CheckRecord::new("member", "Def ideal", Verdict::Pass)],
            BTreeMap::new(),
            None,
        );
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["budgets", "checks", "command", "elapsed_ms", "exit"]);
        assert_eq!(v["checks"][0]["verdict"], "pass");
        assert!(v["checks"][0].get("witness").is_none());
        assert!(r.to_text().contains("1/1 checks pass; exit 0"));
    }
}
