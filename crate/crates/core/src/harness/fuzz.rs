//! Random towers over `F_p(t)` run through the core suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::report::Report;
use super::scenario::{Budget, Suite};
use super::run_tower;
use crate::basefield::BaseField;
use crate::tower::roots::{prime_power_root, split_low_degree_step, RootConfig};
use crate::tower::ExtensionTower;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// Suites run on every fuzzed tower.
pub const FUZZ_SUITES: [Suite; 5] =
    [Suite::Classify, Suite::TripleAgreement, Suite::FiltrationOracle, Suite::Dct, Suite::Skew];

#[derive(Clone, Copy, Debug)]
pub struct FuzzBounds {
    pub max_degree: usize,
    pub max_steps: usize,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds { max_degree: 16, max_steps: 3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    /// Samples that turned out not to be fields, or that the root finder could not decide.
    pub discarded: usize,
    /// One report per tested tower, in generation order.
    pub reports: Vec<Report>,
}

impl FuzzReport {
    pub fn tested(&self) -> usize {
        self.passed + self.failed
    }

    pub fn failures(&self) -> impl Iterator<Item = &Report> {
        self.reports.iter().filter(|r| r.failed() || r.checks.is_empty())
    }
}

#[derive(Clone, Copy)]
enum Template {
    /// `x^p - c`, `c` possibly involving earlier generators.
    Radical,
    /// `x^p - x - c`.
    ArtinSchreier,
    /// `x^3 + x + c` for `p = 2`, `x^2 - c` for `p = 3`.
    Small,
}

fn small_degree(p: u32) -> usize {
    if p == 2 {
        3
    } else {
        2
    }
}

fn random_base(k: &BaseField, rng: &mut ChaCha8Rng) -> String {
    loop {
        let deg = rng.gen_range(1..=3);
        let c = k.poly(k.random_poly(rng, deg));
        if c.as_constant().is_none() {
            return k.render(&c);
        }
    }
}

fn step_text(t: &ExtensionTower, x: &str, tmpl: Template, rng: &mut ChaCha8Rng) -> (String, Option<String>) {
    let k = t.base();
    let p = t.p();
    let c = random_base(k, rng);
    match tmpl {
        Template::Radical => {
            let c = match t.gen_names().choose(rng) {
                Some(g) if rng.gen_bool(0.5) => format!("({c}) + {}*{g}", rng.gen_range(1..p)),
                _ => c,
            };
            (format!("{x}^{p} - ({c})"), Some(c))
        }
        Template::ArtinSchreier => (format!("{x}^{p} - {x} - ({c})"), None),
        Template::Small if p == 2 => (format!("{x}^3 + {x} + {c}"), None),
        Template::Small => (format!("{x}^2 - ({c})"), None),
    }
}

/// A random tower, or `None` when the sample was reducible or undecidable.
fn random_tower(rng: &mut ChaCha8Rng, bounds: FuzzBounds) -> Option<ExtensionTower> {
    let p = if rng.gen_bool(0.6) { 2 } else { 3 };
    let mut t = ExtensionTower::new(BaseField::new(p, &["t"]).expect("valid base"));
    let nsteps = *[1, 1, 2, 2, 2, 3].choose(rng).expect("nonempty");
    for x in NAMES.iter().take(nsteps.min(bounds.max_steps)) {
        let room = bounds.max_degree / t.degree();
        let mut options = Vec::new();
        if room >= p as usize {
            options.extend([Template::Radical, Template::ArtinSchreier]);
        }
        if room >= small_degree(p) {
            options.push(Template::Small);
        }
        let Some(&tmpl) = options.choose(rng) else { break };
        let (text, radicand) = step_text(&t, x, tmpl, rng);
        if let Some(c) = radicand {
            let c = t.parse_element(&c).ok()?;
            if prime_power_root(&t, &c, 1).ok()?.is_some() {
                return None;
            }
        }
        t = t.extend_parsed(x, &text).ok()?;
    }
    split_low_degree_step(&t, &RootConfig::default()).ok()?.is_none().then_some(t)
}

/// `count` random towers from `seed`, each run through [`FUZZ_SUITES`].
pub fn fuzz_towers(seed: u64, count: usize, bounds: FuzzBounds) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FuzzReport { seed, passed: 0, failed: 0, discarded: 0, reports: Vec::new() };
    let budget = Budget { seed, samples: 3, max_order: 32 };
    while rep.tested() < count {
        let Some(t) = random_tower(&mut rng, bounds) else {
            rep.discarded += 1;
            continue;
        };
        let name = format!("fuzz-{}", rep.tested() + rep.discarded);
        match run_tower(&name, &t, &FUZZ_SUITES, &budget, None) {
            Err(e) if e.is_reducible_modulus() => rep.discarded += 1,
            Err(e) => {
                rep.failed += 1;
                let mut steps = super::step_lines(&t);
                steps.push(format!("analysis failed: {e}"));
                rep.reports.push(Report { scenario: name, degree: t.degree(), steps, checks: Vec::new() });
            }
            Ok(r) => {
                if r.failed() {
                    rep.failed += 1;
                } else {
                    rep.passed += 1;
                }
                rep.reports.push(r);
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuzz_run_is_deterministic() {
        let b = FuzzBounds { max_degree: 6, max_steps: 2 };
        let r1 = fuzz_towers(7, 4, b);
        let r2 = fuzz_towers(7, 4, b);
        assert_eq!(r1.failed, 0, "{:?}", r1.failures().collect::<Vec<_>>());
        assert_eq!(r1.reports, r2.reports);
        assert_eq!(r1.discarded, r2.discarded);
        assert!(r1.reports.iter().all(|r| r.degree <= 6));
    }

    #[test]
    fn degenerate_bounds() {
        let r = fuzz_towers(1, 0, FuzzBounds::default());
        assert_eq!((r.passed, r.failed, r.discarded), (0, 0, 0));
        let r = fuzz_towers(1, 3, FuzzBounds { max_degree: 1, max_steps: 3 });
        assert_eq!(r.passed, 3);
        assert!(r.reports.iter().all(|r| r.degree == 1));
    }
}
