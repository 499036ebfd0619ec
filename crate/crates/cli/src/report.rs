use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Outcome of one verifier run.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// JSON record of one invocation. Wall-clock timings are printed to stderr
/// instead so that reports are byte-identical across runs.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<RunReport>,
    pub status: Status,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    #[default]
    Verified,
    Failed,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), ..Default::default() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Records a verifier run; `Err` carries the violation message.
    pub fn check<E: std::fmt::Display>(&mut self, check: &str, result: Result<(), E>) -> bool {
        let passed = result.is_ok();
        self.verdicts.push(Verdict {
            check: check.to_string(),
            passed,
            detail: result.err().map(|e| e.to_string()),
        });
        if !passed {
            self.status = Status::Failed;
        }
        passed
    }

    pub fn push_instance(&mut self, instance: RunReport) {
        if instance.status == Status::Failed {
            self.status = Status::Failed;
        }
        self.instances.push(instance);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_marks_report() {
        let mut r = RunReport::new("verify");
        assert!(r.check::<String>("ok", Ok(())));
        assert!(r.passed());
        assert!(!r.check("bad", Err("edge {0,1}")));
        assert!(!r.passed());
        let json = r.to_json();
        assert!(json.contains("\"status\": \"failed\""));
        assert!(json.contains("edge {0,1}"));
    }

    #[test]
    fn failed_instance_propagates() {
        let mut batch = RunReport::new("trees");
        let mut one = RunReport::new("trees");
        one.check("x", Err("no"));
        batch.push_instance(one);
        assert!(!batch.passed());
    }
}
