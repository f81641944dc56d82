//! The line-oriented scenario format.
//!
//! ```text
//! # comment
//! name EX3
//! base p=2 vars=t
//! step u: u^2 + t
//! step s: s^2 + s + t
//! auto s -> s + 1; u -> u
//! check classify correspondence
//! budget seed=7 samples=20
//! expect degree=4 d=8 group=2 dskew=16
//! ```
//!
//! An `ambient p=2 vars=x,y,z k=x^2,y^2,z^4` line replaces `base`; its steps
//! name elements of the ambient field instead of minimal polynomials, as in
//! `step a = z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::basefield::expr;
use crate::basefield::BaseField;
use crate::tower::ambient::{from_ambient, AmbientError, AmbientPresentation};
use crate::tower::{ExtensionTower, TowerError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Classify,
    TripleAgreement,
    FiltrationOracle,
    Dct,
    Skew,
    Correspondence,
    NormalCorrespondence,
    PiCorrespondence,
    Conormal,
    Tensor,
    Disjoint,
    DeltaEq,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Classify,
        Suite::TripleAgreement,
        Suite::FiltrationOracle,
        Suite::Dct,
        Suite::Skew,
        Suite::Correspondence,
        Suite::NormalCorrespondence,
        Suite::PiCorrespondence,
        Suite::Conormal,
        Suite::Tensor,
        Suite::Disjoint,
        Suite::DeltaEq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Classify => "classify",
            Suite::TripleAgreement => "triple_agreement",
            Suite::FiltrationOracle => "filtration_oracle",
            Suite::Dct => "dct",
            Suite::Skew => "skew",
            Suite::Correspondence => "correspondence",
            Suite::NormalCorrespondence => "normal_correspondence",
            Suite::PiCorrespondence => "pi_correspondence",
            Suite::Conormal => "conormal",
            Suite::Tensor => "tensor",
            Suite::Disjoint => "disjoint",
            Suite::DeltaEq => "delta_eq",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseSpec {
    Explicit { p: u32, vars: Vec<String> },
    Ambient { p: u32, vars: Vec<String>, k_gens: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSpec {
    pub name: String,
    /// Minimal polynomial, or for ambient scenarios the generator's value.
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub seed: u64,
    /// Random algebras per tower in the double centralizer suite.
    pub samples: usize,
    /// Order bound for the filtration oracle.
    pub max_order: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { seed: 0, samples: 20, max_order: 32 }
    }
}

pub const EXPECT_KEYS: [&str; 9] = ["degree", "d", "group", "lskew", "dskew", "exponent", "sep", "pi", "dif"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub base: BaseSpec,
    pub steps: Vec<StepSpec>,
    /// Declared automorphisms as generator images.
    pub autos: Vec<Vec<(String, String)>>,
    pub checks: Vec<Suite>,
    pub budget: Budget,
    pub expect: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown check {name}")]
    UnknownCheck { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("step {step}: {err}")]
    Tower { step: String, err: TowerError },
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    #[error("{0}")]
    Base(String),
}

/// A built scenario tower.
#[derive(Clone, Debug)]
pub struct Built {
    pub tower: ExtensionTower,
    pub ambient: Option<AmbientPresentation>,
}

/// Words of a line with their 1-based starting columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (b, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((i, b)),
            (true, Some((c, s))) => {
                out.push((c + 1, &line[s..b]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c + 1, &line[s..]));
    }
    out
}

fn col_of(line: &str, sub: &str) -> usize {
    let off = sub.as_ptr() as usize - line.as_ptr() as usize;
    line[..off].chars().count() + 1
}

struct LineParser<'a> {
    line_no: usize,
    line: &'a str,
}

impl<'a> LineParser<'a> {
    fn err<T>(&self, at: &str, msg: impl Into<String>) -> Result<T, ScenarioError> {
        Err(ScenarioError::Parse { line: self.line_no, col: col_of(self.line, at), msg: msg.into() })
    }

    fn expr(&self, text: &'a str) -> Result<&'a str, ScenarioError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return self.err(text, "expected an expression");
        }
        if let Err(e) = expr::parse(trimmed) {
            let col = col_of(self.line, trimmed) + e.column().unwrap_or(1) - 1;
            return Err(ScenarioError::Parse { line: self.line_no, col, msg: e.to_string() });
        }
        Ok(trimmed)
    }

    fn ident(&self, text: &'a str) -> Result<&'a str, ScenarioError> {
        let trimmed = text.trim();
        if !expr::is_identifier(trimmed) {
            return self.err(if trimmed.is_empty() { text } else { trimmed }, "expected an identifier");
        }
        Ok(trimmed)
    }

    /// `key=value` pairs, each key from `allowed`.
    fn pairs(&self, args: &[(usize, &'a str)], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>, ScenarioError> {
        let mut out: Vec<(&str, &str)> = Vec::new();
        for &(_, w) in args {
            let Some((k, v)) = w.split_once('=') else {
                return self.err(w, "expected key=value");
            };
            if !allowed.contains(&k) {
                return self.err(w, format!("unknown key {k}"));
            }
            if out.iter().any(|(x, _)| *x == k) {
                return self.err(w, format!("duplicate key {k}"));
            }
            out.push((k, v));
        }
        Ok(out)
    }

    fn number<T: FromStr>(&self, v: &str) -> Result<T, ScenarioError> {
        match v.parse() {
            Ok(x) => Ok(x),
            Err(_) => self.err(v, "expected a non-negative integer"),
        }
    }

    fn list(&self, v: &'a str) -> Vec<&'a str> {
        if v.is_empty() {
            Vec::new()
        } else {
            v.split(',').collect()
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut name = None;
    let mut base = None;
    let mut steps: Vec<StepSpec> = Vec::new();
    let mut autos = Vec::new();
    let mut checks = Vec::new();
    let mut budget = Budget::default();
    let mut expect = BTreeMap::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let lp = LineParser { line_no: i + 1, line };
        last_line = i + 1;
        let ws = words(line);
        let Some(&(_, key)) = ws.first() else { continue };
        let rest = &line[col_byte(line, key) + key.len()..];
        match key {
            "name" => {
                if ws.len() != 2 {
                    return lp.err(key, "expected: name NAME");
                }
                name = Some(ws[1].1.to_string());
            }
            "base" | "ambient" => {
                if base.is_some() {
                    return lp.err(key, "base field given twice");
                }
                let allowed: &[&str] = if key == "base" { &["p", "vars"] } else { &["p", "vars", "k"] };
                let kv = lp.pairs(&ws[1..], allowed)?;
                let Some(&(_, p)) = kv.iter().find(|(k, _)| *k == "p") else {
                    return lp.err(key, "missing p=");
                };
                let p: u32 = lp.number(p)?;
                let mut vars = Vec::new();
                if let Some(&(_, v)) = kv.iter().find(|(k, _)| *k == "vars") {
                    for x in lp.list(v) {
                        vars.push(lp.ident(x)?.to_string());
                    }
                }
                base = Some(if key == "base" {
                    BaseSpec::Explicit { p, vars }
                } else {
                    let mut k_gens = Vec::new();
                    if let Some(&(_, v)) = kv.iter().find(|(k, _)| *k == "k") {
                        for x in lp.list(v) {
                            k_gens.push(lp.expr(x)?.to_string());
                        }
                    }
                    BaseSpec::Ambient { p, vars, k_gens }
                });
            }
            "step" => {
                let ambient = match &base {
                    None => return lp.err(key, "step before base or ambient"),
                    Some(b) => matches!(b, BaseSpec::Ambient { .. }),
                };
                let sep = if ambient { '=' } else { ':' };
                let Some((g, e)) = rest.split_once(sep) else {
                    return lp.err(key, format!("expected: step NAME {sep} EXPR"));
                };
                let g = lp.ident(g)?;
                if steps.iter().any(|s| s.name == g) {
                    return lp.err(g, format!("duplicate generator {g}"));
                }
                steps.push(StepSpec { name: g.to_string(), expr: lp.expr(e)?.to_string() });
            }
            "auto" => {
                let mut map = Vec::new();
                for part in rest.split(';') {
                    let Some((g, e)) = part.split_once("->") else {
                        return lp.err(part, "expected GEN -> EXPR");
                    };
                    let g = lp.ident(g)?;
                    if !steps.iter().any(|s| s.name == g) {
                        return lp.err(g, format!("unknown generator {g}"));
                    }
                    map.push((g.to_string(), lp.expr(e)?.to_string()));
                }
                autos.push(map);
            }
            "check" => {
                for &(col, w) in &ws[1..] {
                    if w == "all" {
                        checks.extend(Suite::ALL);
                        continue;
                    }
                    match w.parse::<Suite>() {
                        Ok(s) => checks.push(s),
                        Err(name) => return Err(ScenarioError::UnknownCheck { line: i + 1, col, name }),
                    }
                }
            }
            "budget" => {
                for (k, v) in lp.pairs(&ws[1..], &["seed", "samples", "max_order"])? {
                    match k {
                        "seed" => budget.seed = lp.number(v)?,
                        "samples" => budget.samples = lp.number(v)?,
                        _ => budget.max_order = lp.number(v)?,
                    }
                }
            }
            "expect" => {
                for (k, v) in lp.pairs(&ws[1..], &EXPECT_KEYS)? {
                    expect.insert(k.to_string(), lp.number(v)?);
                }
            }
            _ => return lp.err(key, format!("unknown section {key}")),
        }
    }
    let Some(base) = base else {
        return Err(ScenarioError::Parse { line: last_line, col: 1, msg: "missing base or ambient line".into() });
    };
    let mut seen = std::collections::BTreeSet::new();
    checks.retain(|c| seen.insert(*c));
    Ok(Scenario { name: name.unwrap_or_else(|| "scenario".into()), base, steps, autos, checks, budget, expect })
}

fn col_byte(line: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - line.as_ptr() as usize
}

impl Scenario {
    pub fn build(&self) -> Result<Built, BuildError> {
        match &self.base {
            BaseSpec::Explicit { p, vars } => {
                let k = BaseField::from_names(*p, vars.clone()).map_err(|e| BuildError::Base(e.to_string()))?;
                let mut t = ExtensionTower::new(k);
                for s in &self.steps {
                    t = t
                        .extend_parsed(&s.name, &s.expr)
                        .map_err(|err| BuildError::Tower { step: s.name.clone(), err })?;
                }
                Ok(Built { tower: t, ambient: None })
            }
            BaseSpec::Ambient { p, vars, k_gens } => {
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                let k: Vec<&str> = k_gens.iter().map(String::as_str).collect();
                let l: Vec<(&str, &str)> = self.steps.iter().map(|s| (s.name.as_str(), s.expr.as_str())).collect();
                let pres = from_ambient(*p, &vars, &k, &l)?;
                Ok(Built { tower: pres.tower.clone(), ambient: Some(pres) })
            }
        }
    }

    /// The scenario in its own text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("name {}\n", self.name);
        match &self.base {
            BaseSpec::Explicit { p, vars } => {
                out += &format!("base p={p}");
                if !vars.is_empty() {
                    out += &format!(" vars={}", vars.join(","));
                }
                out.push('\n');
                for s in &self.steps {
                    out += &format!("step {}: {}\n", s.name, s.expr);
                }
            }
            BaseSpec::Ambient { p, vars, k_gens } => {
                out += &format!("ambient p={p} vars={} k={}\n", vars.join(","), k_gens.join(","));
                for s in &self.steps {
                    out += &format!("step {} = {}\n", s.name, s.expr);
                }
            }
        }
        for a in &self.autos {
            let parts: Vec<String> = a.iter().map(|(g, e)| format!("{g} -> {e}")).collect();
            out += &format!("auto {}\n", parts.join("; "));
        }
        if !self.checks.is_empty() {
            let names: Vec<&str> = self.checks.iter().map(|c| c.name()).collect();
            out += &format!("check {}\n", names.join(" "));
        }
        let b = &self.budget;
        out += &format!("budget seed={} samples={} max_order={}\n", b.seed, b.samples, b.max_order);
        if !self.expect.is_empty() {
            let kv: Vec<String> = self.expect.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out += &format!("expect {}\n", kv.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX3: &str = "name EX3\nbase p=2 vars=t\nstep u: u^2 + t\nstep s: s^2 + s + t\ncheck classify correspondence\n";

    #[test]
    fn parses_ex3() {
        let s = parse_scenario(EX3).unwrap();
        assert_eq!(s.steps.len(), 2);
        assert_eq!(s.checks, vec![Suite::Classify, Suite::Correspondence]);
        assert_eq!(s.build().unwrap().tower.degree(), 4);
    }

    #[test]
    fn empty_checks() {
        let s = parse_scenario("base p=2 vars=t\nstep u: u^2 + t\n").unwrap();
        assert!(s.checks.is_empty());
        assert_eq!(s.name, "scenario");
    }

    #[test]
    fn caret_error_column() {
        let err = parse_scenario("base p=2 vars=x\nstep u: u^^2 + x\n").unwrap_err();
        // "step u: " is 8 columns; the second caret is the third character of "u^^2"
        assert_eq!(err, ScenarioError::Parse { line: 2, col: 11, msg: err_msg(&err) });
    }

    fn err_msg(e: &ScenarioError) -> String {
        match e {
            ScenarioError::Parse { msg, .. } => msg.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn unknown_check_and_key() {
        let err = parse_scenario("base p=2\ncheck classify galois\n").unwrap_err();
        assert_eq!(err, ScenarioError::UnknownCheck { line: 2, col: 16, name: "galois".into() });
        let err = parse_scenario("base p=2 q=3\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse { line: 1, col: 10, .. }));
        assert!(parse_scenario("base p=2\nfrob x\n").is_err());
        assert!(parse_scenario("check all\n").is_err());
    }

    #[test]
    fn duplicate_generators_rejected() {
        assert!(parse_scenario("base p=2 vars=t\nstep u: u^2+t\nstep u: u^2+u+t\n").is_err());
    }

    #[test]
    fn ambient_and_round_trip() {
        let text = "name EX5\nambient p=2 vars=x,y,z k=x^2,y^2,z^4\nstep a = z\nstep b = x*z + y\n\
                    auto a -> a\ncheck all\nbudget seed=3\nexpect degree=8 exponent=2\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.checks.len(), 12);
        assert_eq!(parse_scenario(&s.to_text()).unwrap(), s);
        let b = s.build().unwrap();
        assert_eq!(b.tower.degree(), 8);
        assert!(b.ambient.is_some());
    }
}
