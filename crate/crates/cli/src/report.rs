//! Reports printed by every verb: a header, named facts, and an ordered
//! list of checks. Text by default, JSON with `--json`.

use peirce_coord::suite::{Check, Status};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

pub const SCHEMA: &str = "peirce-coord-report/1";

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitClass {
    Ok = 0,
    Io = 1,
    Precondition = 2,
    MathFailure = 3,
    InternalAlarm = 4,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub facts: Vec<Fact>,
    pub checks: Vec<ReportCheck>,
    pub exit: ExitClass,
    pub exit_code: i32,
    #[serde(skip)]
    timed: bool,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl Report {
    /// `timed = false` drops the timestamp and wall times, making the
    /// output a function of the input alone.
    pub fn new(command: &str, input: &[u8], timed: bool) -> Self {
        let timestamp = timed.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        Self {
            schema: SCHEMA,
            tool: "peirce-coord",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_digest: digest(input),
            timestamp,
            facts: Vec::new(),
            checks: Vec::new(),
            exit: ExitClass::Ok,
            exit_code: 0,
            timed,
        }
    }

    pub fn fact(&mut self, name: &str, value: impl ToString) {
        self.facts.push(Fact {
            name: name.to_string(),
            value: value.to_string(),
        });
    }

    fn raise(&mut self, class: ExitClass) {
        if class > self.exit {
            self.exit = class;
            self.exit_code = class.code();
        }
    }

    /// Adds a check; a failure raises the exit class to `on_fail`.
    pub fn check(&mut self, c: Check, on_fail: ExitClass) {
        if c.status == Status::Fail {
            self.raise(on_fail);
        }
        let wall_ms = self.timed.then(|| millis(c.elapsed));
        self.checks.push(ReportCheck {
            name: c.name.to_string(),
            status: c.status.name(),
            detail: c.detail,
            witness: c.witness,
            wall_ms,
        });
    }

    pub fn pass(&mut self, name: &'static str, detail: impl Into<String>, elapsed: Duration) {
        self.check(
            Check {
                name,
                status: Status::Pass,
                detail: detail.into(),
                witness: None,
                elapsed,
            },
            ExitClass::Ok,
        );
    }

    pub fn fail(&mut self, name: &'static str, detail: impl Into<String>, witness: impl Into<String>, class: ExitClass, elapsed: Duration) {
        self.check(
            Check {
                name,
                status: Status::Fail,
                detail: detail.into(),
                witness: Some(witness.into()),
                elapsed,
            },
            class,
        );
    }

    pub fn failed(&self) -> bool {
        self.exit != ExitClass::Ok
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.tool, self.version, self.command);
        let _ = writeln!(s, "schema: {}", self.schema);
        let _ = writeln!(s, "input: {}", self.input_digest);
        if let Some(t) = self.timestamp {
            let _ = writeln!(s, "timestamp: {t}");
        }
        for f in &self.facts {
            let _ = writeln!(s, "{}: {}", f.name, f.value);
        }
        for c in &self.checks {
            let _ = write!(s, "[{}] {}: {}", c.status, c.name, c.detail);
            if let Some(ms) = c.wall_ms {
                let _ = write!(s, " ({ms:.1} ms)");
            }
            s.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "    witness: {w}");
            }
        }
        let _ = writeln!(s, "exit: {}", self.exit_code);
        s
    }
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e4).round() / 10.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untimed_reports_are_stable() {
        let mut a = Report::new("check", b"x", false);
        a.pass("k-linear", "ok", Duration::from_millis(3));
        let mut b = Report::new("check", b"x", false);
        b.pass("k-linear", "ok", Duration::from_millis(9));
        assert_eq!(a.render(true), b.render(true));
        assert_eq!(a.render(false), b.render(false));
        assert!(!a.render(false).contains("timestamp"));
    }

    #[test]
    fn worst_failure_sets_the_exit_code() {
        let mut r = Report::new("roundtrip", b"", false);
        r.fail("a", "d", "w", ExitClass::MathFailure, Duration::ZERO);
        r.fail("b", "d", "w", ExitClass::Precondition, Duration::ZERO);
        assert_eq!(r.exit_code, 3);
        let v: serde_json::Value = serde_json::from_str(&r.render(true)).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["checks"][0]["witness"], "w");
        assert_eq!(v["exit"], "math-failure");
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
