//! Scenarios, the built-in catalog, suite execution, fuzzing and reports.

pub mod catalog;
pub mod fuzz;
pub mod report;
pub mod scenario;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::basefield::UniPoly;
use crate::differential::{self, derivation_algebra, derivations, diff_ops_by_filtration};
use crate::field::Ring;
use crate::galois::{self, Analysis, GaloisError};
use crate::matalg::{self, endomorphisms_over, generate_over_l, MatAlgebra};
use crate::tower::relative::{present_subfield, Extension};
use crate::tower::subfield::Subfield;
use crate::tower::ExtensionTower;

pub use catalog::{builtin, builtin_catalog};
pub use fuzz::{fuzz_towers, FuzzBounds, FuzzReport};
pub use report::{emit_report, emit_reports, CheckResult, Format, Report, Status, Witnesses};
pub use scenario::{parse_scenario, BuildError, Budget, Scenario, ScenarioError, Suite};

#[derive(Debug, Clone, Error)]
pub enum HarnessError {
    #[error("{scenario}: {err}")]
    Build { scenario: String, err: BuildError },
    #[error("{scenario}: {err}")]
    Analysis { scenario: String, err: GaloisError },
}

/// Run the scenario's checks, or `suites` instead when given.
pub fn run_checks(s: &Scenario, suites: Option<&[Suite]>, seed: Option<u64>) -> Result<Report, HarnessError> {
    let built = s.build().map_err(|err| HarnessError::Build { scenario: s.name.clone(), err })?;
    let mut budget = s.budget.clone();
    if let Some(seed) = seed {
        budget.seed = seed;
    }
    let suites = suites.unwrap_or(&s.checks);
    run_tower(&s.name, &built.tower, suites, &budget, Some(s))
        .map_err(|err| HarnessError::Analysis { scenario: s.name.clone(), err })
}

pub(crate) fn step_lines(t: &ExtensionTower) -> Vec<String> {
    (0..t.nsteps())
        .map(|i| {
            let name = t.steps()[i].name();
            format!("{name}: {}", t.render_poly(&t.step_minpoly(i), name))
        })
        .collect()
}

/// Run `suites` on a tower; `meta` adds the scenario's declared expectations.
pub fn run_tower(
    name: &str,
    t: &ExtensionTower,
    suites: &[Suite],
    budget: &Budget,
    meta: Option<&Scenario>,
) -> Result<Report, GaloisError> {
    let mut report = Report { scenario: name.to_string(), degree: t.degree(), steps: step_lines(t), checks: Vec::new() };
    let has_meta = meta.is_some_and(|s| !s.expect.is_empty() || !s.autos.is_empty());
    if suites.is_empty() && !has_meta {
        return Ok(report);
    }
    let an = Analysis::new(t)?;
    if let Some(s) = meta {
        if !s.expect.is_empty() {
            report.checks.push(finish("expect", budget.seed, &an, expectations(&an, s)));
        }
        if !s.autos.is_empty() {
            report.checks.push(finish("auto", budget.seed, &an, declared_autos(&an, s)));
        }
    }
    for &suite in suites {
        let outcome = run_suite(&an, suite, budget);
        report.checks.push(finish(suite.name(), budget.seed, &an, outcome));
    }
    Ok(report)
}

/// Result of one suite before it becomes a [`CheckResult`].
enum Outcome {
    Done { ok: bool, group_sensitive: bool, w: Witnesses },
    Skipped(String),
    Error(String),
}

fn finish(name: &str, seed: u64, an: &Analysis, o: Outcome) -> CheckResult {
    let (status, reason, witnesses) = match o {
        Outcome::Done { ok: false, w, .. } => (Status::Fail, None, w),
        Outcome::Done { ok: true, group_sensitive, w } => {
            let heuristic = group_sensitive && !an.group.is_complete();
            (if heuristic { Status::HeuristicPass } else { Status::Pass }, None, w)
        }
        Outcome::Skipped(r) => (Status::Skipped, Some(r), Witnesses::default()),
        Outcome::Error(r) => (Status::Fail, Some(r), Witnesses::default()),
    };
    CheckResult { name: name.to_string(), status, reason, witnesses, seed, millis: None }
}

fn suite_seed(seed: u64, suite: Suite) -> u64 {
    let k = Suite::ALL.iter().position(|&s| s == suite).unwrap_or(0) as u64;
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k)
}

fn run_suite(an: &Analysis, suite: Suite, budget: &Budget) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(budget.seed, suite));
    let res = match suite {
        Suite::Classify => classify(an),
        Suite::TripleAgreement => triple_agreement(an),
        Suite::FiltrationOracle => filtration_oracle(an, budget.max_order),
        Suite::Dct => dct(an, budget.samples, &mut rng),
        Suite::Skew => skew(an),
        Suite::Correspondence => correspondence(an),
        Suite::NormalCorrespondence => normal_correspondence(an),
        Suite::PiCorrespondence => pi_correspondence(an),
        Suite::Conormal => conormal(an),
        Suite::Tensor => tensor(an),
        Suite::Disjoint => disjoint(an),
        Suite::DeltaEq => delta_eq(an),
    };
    res.unwrap_or_else(|e| Outcome::Error(e.to_string()))
}

type SuiteResult = Result<Outcome, GaloisError>;

fn done(ok: bool, group_sensitive: bool, w: Witnesses) -> SuiteResult {
    Ok(Outcome::Done { ok, group_sensitive, w })
}

/// Smallest `e` with `L^(p^e) ⊆ L^sep`.
fn exponent(an: &Analysis) -> usize {
    let t = an.tower();
    let p = t.p() as u64;
    t.gens()
        .iter()
        .map(|g| {
            let (mut e, mut c) = (0, g.clone());
            while !an.sep.contains(t, &c) {
                e += 1;
                c = t.pow(&c, p);
            }
            e
        })
        .max()
        .unwrap_or(0)
}

fn expectations(an: &Analysis, s: &Scenario) -> Outcome {
    let t = an.tower();
    let g = &an.group;
    let mut w = Witnesses::default();
    let mut ok = true;
    for (k, &want) in &s.expect {
        let got = match k.as_str() {
            "degree" => t.degree(),
            "d" => an.d.dim(),
            "group" => g.order(),
            "lskew" | "dskew" => {
                let a0 = if k == "lskew" { MatAlgebra::image_of_l(t) } else { an.d.algebra.clone() };
                match galois::skew_group_algebra(t, &a0, g, &g.all()) {
                    Ok(r) => r.dim(),
                    Err(e) => return Outcome::Error(e.to_string()),
                }
            }
            "exponent" => exponent(an),
            "sep" => an.sep.dim(),
            "pi" => an.pi.dim(),
            "dif" => an.dif.dim(),
            _ => unreachable!("keys validated by the parser"),
        };
        w.dim(k, got);
        ok &= w.expect(got == want, format!("{k}: expected {want}, got {got}"));
    }
    w.group_order = Some(g.order());
    Outcome::Done { ok, group_sensitive: true, w }
}

fn declared_autos(an: &Analysis, s: &Scenario) -> Outcome {
    let t = an.tower();
    let mut w = Witnesses::default();
    let mut ok = true;
    for map in &s.autos {
        let mut images = t.gens();
        for (gname, text) in map {
            let i = t.gen_index(gname).expect("validated generator");
            match t.parse_element(text) {
                Ok(x) => images[i] = x,
                Err(e) => return Outcome::Error(e.to_string()),
            }
        }
        let found = an.group.elements.iter().any(|a| a.images == images);
        let shown: Vec<String> = map.iter().map(|(g, e)| format!("{g} -> {e}")).collect();
        ok &= w.expect(found, format!("declared automorphism {} not in G", shown.join("; ")));
    }
    w.group_order = Some(an.group.order());
    Outcome::Done { ok, group_sensitive: false, w }
}

fn classify(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let (rec, mut w) = match galois::classify_analysis(an) {
        Ok(rec) => (rec, Witnesses::default()),
        Err(GaloisError::InconsistentTheorems(rec)) => {
            let w = Witnesses { mismatch: rec.inconsistencies.clone(), ..Witnesses::default() };
            (*rec, w)
        }
        Err(e) => return Err(e),
    };
    for (k, v) in [
        ("is_separable", rec.is_separable),
        ("is_purely_inseparable", rec.is_purely_inseparable),
        ("is_normal", rec.is_normal),
        ("is_B", rec.is_b),
        ("is_G", rec.is_g),
        ("is_D", rec.is_d),
    ] {
        w.flag(k, v);
    }
    for (i, c) in rec.criteria.iter().enumerate() {
        w.flag(&format!("criterion_{}", i + 1), *c);
    }
    w.dim("E", rec.dims.e);
    w.dim("D", rec.dims.d);
    w.dim("L_skew_G", rec.dims.l_skew);
    w.dim("D_skew_G", rec.dims.d_skew);
    for (k, m) in [("L^sep", &rec.sep), ("L^pi", &rec.pi), ("L_dif", &rec.dif), ("L^G", &rec.fixed), ("L^G_dif", &rec.fixed_dif)]
    {
        w.subfield(t, k, m);
    }
    if let Some(gal) = &rec.gal {
        w.subfield(t, "L^gal", gal);
    }
    w.group_order = Some(rec.group_order);
    let ok = w.mismatch.is_empty();
    Ok(Outcome::Done { ok, group_sensitive: !rec.complete, w })
}

fn triple_agreement(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let plus = differential::dplus_constants(t, &an.d)?;
    let mut w = Witnesses::default();
    w.dim("L^sep", an.sep.dim());
    w.dim("L_dif", an.dif.dim());
    w.dim("L^D+", plus.dim());
    let mut ok = w.expect(an.sep == an.dif, "L^sep != L_dif");
    ok &= w.expect(an.sep == plus, "L^sep != L^D+");
    if !ok {
        w.subfield(t, "L^sep", &an.sep);
        w.subfield(t, "L_dif", &an.dif);
        w.subfield(t, "L^D+", &plus);
    }
    done(ok, false, w)
}

fn filtration_oracle(an: &Analysis, max_order: usize) -> SuiteResult {
    let t = an.tower();
    let f = diff_ops_by_filtration(&Extension::absolute(t), max_order)?;
    let mut w = Witnesses::default();
    w.dim("D", an.d.dim());
    w.dim("filtration", f.dim());
    for (i, d) in f.filtration.iter().flatten().enumerate() {
        w.dim(&format!("D_{i}"), *d);
    }
    let ok = w.expect(f.algebra == an.d.algebra, "filtration limit != E(L/L^sep)");
    done(ok, false, w)
}

/// Subfields exercised by the correspondence suites, with labels.
fn subfield_pool(an: &Analysis) -> Vec<(String, Subfield)> {
    let t = an.tower();
    let mut pool = vec![("K".to_string(), Subfield::base(t)), ("L".to_string(), Subfield::whole(t))];
    for (i, g) in t.gens().iter().enumerate() {
        let name = t.steps()[i].name();
        pool.push((format!("K({name})"), Subfield::generated(t, std::slice::from_ref(g))));
        pool.push((format!("K({name}^{})", t.p()), Subfield::generated(t, &[t.frobenius(g, 1)])));
    }
    for (k, m) in [("L^sep", &an.sep), ("L^pi", &an.pi), ("L^G", &an.fixed), ("L^G_dif", &an.fixed_dif)] {
        pool.push((k.to_string(), m.clone()));
    }
    let mut out: Vec<(String, Subfield)> = Vec::new();
    for (k, m) in pool {
        if !out.iter().any(|(_, x)| *x == m) {
            out.push((k, m));
        }
    }
    out
}

fn dct(an: &Analysis, samples: usize, rng: &mut ChaCha8Rng) -> SuiteResult {
    let t = an.tower();
    let k = t.base();
    let n = t.degree();
    let pool = subfield_pool(an);
    let mut w = Witnesses::default();
    let mut ok = true;
    let mut dims = std::collections::BTreeSet::new();
    for i in 0..samples {
        let (label, m) = &pool[rng.gen_range(0..pool.len())];
        let e = endomorphisms_over(t, m)?;
        let rows = e.l_basis().expect("E(L/M) contains L");
        let mut op = vec![t.zero(); n];
        for _ in 0..2 {
            let r = &rows[rng.gen_range(0..rows.len())];
            let c = t.scale(&t.basis_element(rng.gen_range(0..n)), &k.from_int(rng.gen_range(1..t.p() as i64 + 1)));
            op = matalg::op_combine(t, &[k.one(), k.one()], &[op, matalg::left_mul(t, &c, r)]);
        }
        let b = generate_over_l(t, &[op])?;
        let simple = matalg::is_simple(t, &b)?;
        let dc = matalg::double_centralizer_roundtrip(t, &b)?;
        let field = matalg::algebra_to_subfield(t, &dc.cc)?;
        dims.insert(b.dim());
        ok &= w.expect(simple, format!("sample {i} ({label}): not simple"));
        ok &= w.expect(dc.ok, format!("sample {i} ({label}): CC(B) != B or dim B dim C(B) != n^2"));
        ok &= w.expect(
            endomorphisms_over(t, &field)? == b,
            format!("sample {i} ({label}): B != E(L/M) for M = C(B)"),
        );
    }
    w.dim("samples", samples);
    w.dim("distinct_dims", dims.len());
    done(ok, false, w)
}

fn skew(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let g = &an.group;
    let all = g.all();
    let l = galois::skew_group_algebra(t, &MatAlgebra::image_of_l(t), g, &all)?;
    let d = galois::skew_group_algebra(t, &an.d.algebra, g, &all)?;
    let mut w = Witnesses::default();
    w.dim("L_skew_G", l.dim());
    w.dim("D_skew_G", d.dim());
    w.dim("D", an.d.dim());
    w.dim("L^G", an.fixed.dim());
    w.dim("L^G_dif", an.fixed_dif.dim());
    w.group_order = Some(g.order());
    let mut ok = w.expect(l.direct, "L⋊G not direct");
    ok &= w.expect(d.direct, "D⋊G not direct");
    ok &= w.expect(l.algebra == endomorphisms_over(t, &an.fixed)?, "L⋊G != E(L/L^G)");
    ok &= w.expect(d.algebra == endomorphisms_over(t, &an.fixed_dif)?, "D⋊G != E(L/L^G_dif)");
    ok &= w.expect(matalg::algebra_to_subfield(t, &d.algebra)? == an.fixed_dif, "C_E(D⋊G) != L^G_dif");
    let f = an.fixed_dif.dim();
    let q = t.degree() / f;
    ok &= w.expect(d.dim() == q * q * f, "dim D⋊G != (n/f)^2 f");
    done(ok, true, w)
}

fn correspondence(an: &Analysis) -> SuiteResult {
    if !an.is_normal() {
        return Ok(Outcome::Skipped("requires a normal extension".into()));
    }
    let t = an.tower();
    let pool = subfield_pool(an);
    let mut w = Witnesses::default();
    let mut ok = true;
    let mut algebras = Vec::new();
    for (label, m) in &pool {
        let r = galois::correspondence_roundtrip(an, m)?;
        w.dim(&format!("C_E({label})"), r.a_dim);
        ok &= w.expect(r.ok, format!("{label}: round trip failed ({r:?})"));
        algebras.push(endomorphisms_over(t, m)?);
    }
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            if i != j {
                ok &= w.expect(algebras[i] != algebras[j], format!("C_E not injective on {}, {}", pool[i].0, pool[j].0));
            }
            if pool[i].1.is_subfield_of(t, &pool[j].1) {
                ok &= w.expect(
                    algebras[j].is_subalgebra_of(t, &algebras[i]),
                    format!("C_E not order reversing on {} ⊆ {}", pool[i].0, pool[j].0),
                );
            }
        }
    }
    if an.group.order() <= galois::MAX_LATTICE_ORDER {
        let lat = galois::galois_lattice(an)?;
        w.dim("subgroups", lat.subgroups);
        ok &= w.expect(lat.ok(), format!("subgroup lattice: {lat:?}"));
    }
    w.group_order = Some(an.group.order());
    done(ok, true, w)
}

fn normal_correspondence(an: &Analysis) -> SuiteResult {
    if !an.is_normal() {
        return Ok(Outcome::Skipped("requires a normal extension".into()));
    }
    let mut w = Witnesses::default();
    let mut ok = true;
    let mut tested = 0;
    for (label, m) in subfield_pool(an) {
        match galois::normal_subfield_correspondence(an, &m) {
            Ok(r) => {
                tested += 1;
                w.dim(&format!("C_E({label})"), r.a_dim);
                ok &= w.expect(r.ok, format!("{label}: {r:?}"));
            }
            Err(GaloisError::NotNormalSubfield) => {}
            Err(e) => return Err(e),
        }
    }
    w.dim("normal_subfields", tested);
    done(ok, true, w)
}

fn pi_correspondence(an: &Analysis) -> SuiteResult {
    if !an.pi.is_whole() {
        return Ok(Outcome::Skipped("requires a purely inseparable extension".into()));
    }
    let mut w = Witnesses::default();
    let mut ok = true;
    for (label, m) in subfield_pool(an) {
        let r = galois::pi_correspondence(an, &m)?;
        w.dim(&format!("C_D({label})"), r.d_dim);
        ok &= w.expect(r.ok, format!("{label}: {r:?}"));
    }
    done(ok, false, w)
}

fn conormal(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let r = galois::least_conormal(an)?;
    let mut w = Witnesses::default();
    w.subfield(t, "least_conormal", &r.field);
    w.dim("least_conormal", r.field.dim());
    w.dim("conormal_samples", r.sampled);
    let mut ok = w.expect(r.normal_over, "L is not normal over L^G_dif");
    ok &= w.expect(r.d_unchanged, "D changes over L^G_dif");
    ok &= w.expect(r.g_unchanged, "G changes over L^G_dif");
    ok &= w.expect(r.minimal_ok, "a sampled co-normal subfield misses L^G_dif");
    done(ok, true, w)
}

/// `t = prefix ⊗ rest` at the first step from which all minimal polynomials
/// have coefficients in `K`.
fn tensor_split(t: &ExtensionTower, i: usize) -> Option<(ExtensionTower, ExtensionTower)> {
    let mut rest = ExtensionTower::new(t.base().clone());
    for j in i..t.nsteps() {
        let f = t.step_minpoly(j);
        let coeffs: Option<Vec<_>> = f.coeffs().iter().map(|c| c.as_base().cloned()).collect();
        let coeffs: Vec<_> = coeffs?.into_iter().map(|c| rest.from_base(c)).collect();
        rest = rest.extend(t.steps()[j].name(), &UniPoly::new(coeffs, &rest)).ok()?;
    }
    let head = t.prefix(i);
    (head.tensor(&rest).ok()? == *t).then_some((head, rest))
}

fn tensor(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    for i in 1..t.nsteps() {
        let Some((a, b)) = tensor_split(t, i) else { continue };
        let r = match galois::tensor_extension_checks(&a, &b) {
            Ok(r) => r,
            Err(GaloisError::NotNormal) => continue,
            Err(e) => return Err(e),
        };
        let mut w = Witnesses::default();
        for (k, v) in [("G", r.orders), ("D", r.d_dims), ("D_skew_G", r.dg_dims)] {
            for (side, x) in ["left", "right", "product"].iter().zip(v) {
                w.dim(&format!("{k}_{side}"), x);
            }
        }
        let mut ok = w.expect(r.orders[0] * r.orders[1] == r.orders[2], "|G| not multiplicative");
        ok &= w.expect(r.d_dims[0] * r.d_dims[1] == r.d_dims[2], "dim D not multiplicative");
        ok &= w.expect(r.dg_dims[0] * r.dg_dims[1] == r.dg_dims[2], "dim D⋊G not multiplicative");
        ok &= w.expect(r.parts_ok, "L^pi or L^sep does not factor");
        let heuristic = !r.complete;
        return Ok(Outcome::Done { ok, group_sensitive: heuristic || !an.group.is_complete(), w });
    }
    Ok(Outcome::Skipped("no decomposition into normal tensor factors over K".into()))
}

fn disjoint(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let pool = subfield_pool(an);
    let mut galois_fields = Vec::new();
    for (label, n) in &pool {
        if n.is_base() || !n.is_subfield_of(t, &an.sep) {
            continue;
        }
        let g = galois::automorphism_group(&present_subfield(t, n)?.tower)?;
        if g.is_complete() && g.order() == n.dim() {
            galois_fields.push((label, n));
        }
    }
    if galois_fields.is_empty() {
        return Ok(Outcome::Skipped("no proper Galois subfield in the sample".into()));
    }
    let mut w = Witnesses::default();
    let mut ok = true;
    let mut pairs = 0;
    for (nl, n) in &galois_fields {
        for (ml, m) in &pool {
            let mn = m.compositum(t, n);
            let c2 = mn.dim() == m.dim() * n.dim();
            let c5 = m.meet(t, n).is_base();
            let pres = present_subfield(t, &mn)?;
            let gm = galois::automorphism_group(&pres.tower)?;
            let m_in = Subfield::generated(&pres.tower, &m.generators(t).iter().map(|x| pres.pull_back(x)).collect::<Vec<_>>());
            let c4 = gm.fixing(&pres.tower, &m_in).len() == n.dim();
            pairs += 1;
            ok &= w.expect(c2 == c5 && c5 == c4, format!("M={ml}, N={nl}: [MN]=[M][N] {c2}, M∩N=K {c5}, res iso {c4}"));
        }
    }
    w.dim("pairs", pairs);
    w.dim("galois_subfields", galois_fields.len());
    done(ok, true, w)
}

fn delta_eq(an: &Analysis) -> SuiteResult {
    let t = an.tower();
    let der = derivations(t, &Subfield::base(t))?;
    let delta = derivation_algebra(t, &der)?;
    let eq = delta == an.d.algebra;
    let e = exponent(an);
    let mut w = Witnesses::default();
    w.dim("Delta", delta.dim());
    w.dim("D", an.d.dim());
    w.dim("exponent", e);
    w.flag("Delta_eq_D", eq);
    let ok = w.expect(eq == (e <= 1), format!("Delta = D is {eq} but exponent of L/L^sep is {e}"));
    done(ok, false, w)
}

/// Degrees and witness dimensions only.
pub fn describe(s: &Scenario) -> Result<String, HarnessError> {
    let built = s.build().map_err(|err| HarnessError::Build { scenario: s.name.clone(), err })?;
    let t = &built.tower;
    let an = Analysis::new(t).map_err(|err| HarnessError::Analysis { scenario: s.name.clone(), err })?;
    let mut out = format!("{}: [L:K] = {}\n", s.name, t.degree());
    for line in step_lines(t) {
        out += &format!("  step {line}\n");
    }
    for (k, v) in [
        ("L^sep", an.sep.dim()),
        ("L^pi", an.pi.dim()),
        ("L_dif", an.dif.dim()),
        ("L^G", an.fixed.dim()),
        ("L^G_dif", an.fixed_dif.dim()),
        ("dim D", an.d.dim()),
        ("|G|", an.group.order()),
    ] {
        out += &format!("  {k:<8} {v}\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
