//! Verification reports: ordered check results plus named findings.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub micros: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub key: String,
    pub value: serde_json::Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    pub summary: Summary,
}

/// Outcome of a single check: `Err` carries the witness.
pub type Outcome = std::result::Result<(), String>;

impl Report {
    pub fn new(instance: impl Into<String>) -> Self {
        Report {
            instance: instance.into(),
            ..Default::default()
        }
    }

    pub fn record(&mut self, id: impl Into<String>, outcome: Outcome) {
        let (status, witness) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        match status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
        }
        self.checks.push(Check {
            id: id.into(),
            status,
            witness,
            micros: None,
        });
    }

    pub fn record_timed(&mut self, id: impl Into<String>, outcome: Outcome, elapsed: Option<Duration>) {
        self.record(id, outcome);
        if let Some(e) = elapsed {
            self.checks.last_mut().expect("just pushed").micros = Some(e.as_micros() as u64);
        }
    }

    pub fn finding(&mut self, key: impl Into<String>, value: impl Into<serde_json::Value>) {
        self.findings.push(Finding {
            key: key.into(),
            value: value.into(),
        });
    }

    /// Appends the checks and findings of `other`, prefixing check ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.id = format!("{prefix}.{}", c.id);
            }
            match c.status {
                Status::Pass => self.summary.passed += 1,
                Status::Fail => self.summary.failed += 1,
            }
            self.checks.push(c);
        }
        self.findings.extend(other.findings);
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn get_finding(&self, key: &str) -> Option<&serde_json::Value> {
        self.findings.iter().find(|f| f.key == key).map(|f| &f.value)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "instance: {}", self.instance).unwrap();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            write!(s, "{}: {}", c.id, status).unwrap();
            if let Some(w) = &c.witness {
                write!(s, " [{w}]").unwrap();
            }
            if let Some(us) = c.micros {
                write!(s, " ({us} us)").unwrap();
            }
            s.push('\n');
        }
        for f in &self.findings {
            let v = match &f.value {
                serde_json::Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            writeln!(s, "{}: {}", f.key, v).unwrap();
        }
        writeln!(
            s,
            "summary: {} passed, {} failed",
            self.summary.passed, self.summary.failed
        )
        .unwrap();
        s
    }
}

/// Turns a boolean into an [`Outcome`] with a lazily built witness.
pub fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_text() {
        let mut r = Report::new("X");
        r.record("a", Ok(()));
        r.record("b", Err("(0,1)".into()));
        r.finding("dimension", 0);
        assert!(!r.passed());
        assert_eq!(r.summary, Summary { passed: 1, failed: 1 });
        let t = r.to_text();
        assert!(t.contains("a: pass\n"));
        assert!(t.contains("b: FAIL [(0,1)]"));
        assert!(t.contains("dimension: 0"));
    }

    #[test]
    fn absorb_prefixes() {
        let mut inner = Report::new("X");
        inner.record("unit", Ok(()));
        let mut outer = Report::new("X");
        outer.absorb("hopf", inner);
        assert_eq!(outer.checks[0].id, "hopf.unit");
        assert_eq!(outer.summary.passed, 1);
    }
}
