//! Reports and their json/text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::tower::subfield::Subfield;
use crate::tower::ExtensionTower;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Passed, but some automorphism search was only heuristically complete.
    HeuristicPass,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HeuristicPass => "heuristic-pass",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Witnesses {
    pub dims: BTreeMap<String, usize>,
    pub group_order: Option<usize>,
    pub flags: BTreeMap<String, bool>,
    /// Echelon bases, one row of rendered coordinates per basis vector.
    pub subfields: BTreeMap<String, Vec<Vec<String>>>,
    /// What disagreed, when the check failed.
    pub mismatch: Vec<String>,
}

impl Witnesses {
    pub fn dim(&mut self, k: &str, v: usize) {
        self.dims.insert(k.to_string(), v);
    }

    pub fn flag(&mut self, k: &str, v: bool) {
        self.flags.insert(k.to_string(), v);
    }

    pub fn subfield(&mut self, t: &ExtensionTower, k: &str, m: &Subfield) {
        let rows = m.space().basis().iter().map(|r| r.iter().map(|c| t.base().render(c)).collect()).collect();
        self.subfields.insert(k.to_string(), rows);
    }

    /// Record `what` as a mismatch unless `ok`; returns `ok`.
    pub fn expect(&mut self, ok: bool, what: impl Into<String>) -> bool {
        if !ok {
            self.mismatch.push(what.into());
        }
        ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub reason: Option<String>,
    pub witnesses: Witnesses,
    pub seed: u64,
    /// Always null so that reports are byte-reproducible.
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub degree: usize,
    pub steps: Vec<String>,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s}")),
        }
    }
}

pub fn emit_report(r: &Report, format: Format) -> String {
    emit_reports(std::slice::from_ref(r), format)
}

/// Several reports: a json array, or the text tables one after another.
pub fn emit_reports(rs: &[Report], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = if rs.len() == 1 {
                serde_json::to_string_pretty(&rs[0])
            } else {
                serde_json::to_string_pretty(rs)
            }
            .expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => rs.iter().map(text).collect(),
    }
}

fn text(r: &Report) -> String {
    let mut out = format!("{} [L:K]={} steps: {}\n", r.scenario, r.degree, r.steps.join(", "));
    for c in &r.checks {
        let mut detail: Vec<String> = c.witnesses.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if let Some(g) = c.witnesses.group_order {
            detail.push(format!("|G|={g}"));
        }
        if let Some(reason) = &c.reason {
            detail.push(reason.clone());
        }
        detail.extend(c.witnesses.mismatch.iter().map(|m| format!("MISMATCH {m}")));
        let _ = writeln!(out, "  {:<22} {:<15} {}", c.name, c.status.as_str(), detail.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(status: Status) -> Report {
        let mut w = Witnesses::default();
        w.dim("d", 8);
        w.dim("a", 2);
        w.flag("is_D", true);
        if status == Status::Fail {
            w.expect(false, "dim 4 != 8");
        }
        Report {
            scenario: "X".into(),
            degree: 2,
            steps: vec!["u: u^2 + t".into()],
            checks: vec![CheckResult {
                name: "classify".into(),
                status,
                reason: None,
                witnesses: w,
                seed: 0,
                millis: None,
            }],
        }
    }

    #[test]
    fn json_is_stable_and_ordered() {
        let j = emit_report(&sample(Status::Pass), Format::Json);
        assert!(j.contains("\"is_D\": true"));
        assert!(j.contains("\"millis\": null"));
        assert!(j.find("\"a\"").unwrap() < j.find("\"d\"").unwrap());
        assert_eq!(j, emit_report(&sample(Status::Pass), Format::Json));
    }

    #[test]
    fn failing_report_carries_mismatch() {
        let j = emit_report(&sample(Status::Fail), Format::Json);
        assert!(j.contains("dim 4 != 8"));
        assert!(j.contains("\"status\": \"fail\""));
    }

    #[test]
    fn text_has_one_line_per_check() {
        let s = emit_report(&sample(Status::HeuristicPass), Format::Text);
        assert_eq!(s.lines().count(), 2);
        assert!(s.lines().nth(1).unwrap().contains("heuristic-pass"));
    }
}
