//! One pass/fail line per acceptance criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use bext::differential::{derivation_algebra, derivations, diff_ops, diff_ops_by_filtration};
use bext::galois::{self, Analysis};
use bext::harness::{builtin, builtin_catalog, fuzz_towers, run_checks, FuzzBounds, Report, Status, Suite};
use bext::matalg::{endomorphisms_over, MatAlgebra};
use bext::tower::{Extension, ExtensionTower, Subfield};

type Outcome = Result<String, String>;

fn tower(name: &str) -> ExtensionTower {
    builtin(name).expect("built-in").build().expect("builds").tower
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn gen_field(t: &ExtensionTower, name: &str) -> Subfield {
    Subfield::generated(t, &[t.gen(t.gen_index(name).expect("generator"))])
}

fn dim_of(r: &Report, check: &str, key: &str) -> Option<usize> {
    r.checks.iter().find(|c| c.name == check)?.witnesses.dims.get(key).copied()
}

fn passed(r: &Report, check: &str) -> bool {
    matches!(r.status_of(check), Some(Status::Pass | Status::HeuristicPass))
}

fn run_suite_on_catalog(suite: Suite) -> Result<Vec<Report>, String> {
    builtin_catalog().iter().map(|s| run_checks(s, Some(&[suite]), None).map_err(|e| e.to_string())).collect()
}

struct Fuzzed {
    reports: Vec<Report>,
    elapsed: Duration,
}

fn fuzzed() -> Fuzzed {
    let start = Instant::now();
    let r = fuzz_towers(1, 50, FuzzBounds { max_degree: 16, max_steps: 3 });
    Fuzzed { reports: r.reports, elapsed: start.elapsed() }
}

fn c1_triple_agreement(fz: &Fuzzed) -> Outcome {
    let start = Instant::now();
    for r in run_suite_on_catalog(Suite::TripleAgreement)? {
        ensure(passed(&r, "triple_agreement"), format!("{}: {:?}", r.scenario, r.checks))?;
    }
    ensure(fz.reports.len() >= 50, format!("only {} fuzzed towers", fz.reports.len()))?;
    for r in &fz.reports {
        ensure(r.degree <= 16, format!("{} has degree {}", r.scenario, r.degree))?;
        ensure(passed(r, "triple_agreement"), format!("{}: {:?}", r.scenario, r.steps))?;
        let dims = (dim_of(r, "triple_agreement", "L^sep"), dim_of(r, "triple_agreement", "L_dif"));
        ensure(dims.0.is_some() && dims.0 == dims.1, format!("{}: {dims:?}", r.scenario))?;
    }
    let total = start.elapsed() + fz.elapsed;
    ensure(total < Duration::from_secs(60), format!("took {total:?}"))?;
    Ok(format!("{} catalog + {} fuzzed towers in {:.1?}", builtin_catalog().len(), fz.reports.len(), total))
}

fn c2_filtration(fz: &Fuzzed) -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for s in builtin_catalog() {
        let t = s.build().map_err(|e| e.to_string())?.tower;
        let abs = Extension::absolute(&t);
        let a = diff_ops(&abs).map_err(|e| e.to_string())?;
        let b = diff_ops_by_filtration(&abs, 32).map_err(|e| e.to_string())?;
        ensure(a.algebra == b.algebra, format!("{}: {} vs {}", s.name, a.dim(), b.dim()))?;
        n += 1;
    }
    for r in &fz.reports {
        ensure(passed(r, "filtration_oracle"), format!("{}: {:?}", r.scenario, r.steps))?;
        n += 1;
    }
    let total = start.elapsed() + fz.elapsed;
    ensure(total < Duration::from_secs(120), format!("took {total:?}"))?;
    Ok(format!("{n} towers"))
}

fn c3_purely_inseparable() -> Outcome {
    let mut dims = Vec::new();
    for (name, n, d) in [("EX1", 2, 4), ("EX5", 8, 64), ("P3-CUBE", 3, 9)] {
        let t = tower(name);
        ensure(t.degree() == n, format!("{name}: [L:K] = {}", t.degree()))?;
        let dd = diff_ops(&Extension::absolute(&t)).map_err(|e| e.to_string())?;
        ensure(dd.dim() == d, format!("{name}: dim D = {}", dd.dim()))?;
        ensure(dd.algebra == MatAlgebra::full(&t), format!("{name}: D != E"))?;
        dims.push(dd.dim());
    }
    Ok(format!("dims {dims:?}"))
}

fn c4_dimension_law(fz: &Fuzzed) -> Outcome {
    let an = Analysis::new(&tower("EX3")).map_err(|e| e.to_string())?;
    ensure(an.d.dim() == 8 && an.dif.dim() == 2, format!("EX3: dim D = {}, [L_dif:K] = {}", an.d.dim(), an.dif.dim()))?;
    let law = |n: usize, dif: usize| (n / dif) * (n / dif) * dif;
    ensure(law(4, 2) == 8, "EX3 law")?;
    for r in &fz.reports {
        let (d, dif) = (dim_of(r, "classify", "D"), dim_of(r, "triple_agreement", "L_dif"));
        let (Some(d), Some(dif)) = (d, dif) else { return Err(format!("{}: missing witnesses", r.scenario)) };
        ensure(d == law(r.degree, dif), format!("{}: dim D = {d}, n = {}, [L_dif:K] = {dif}", r.scenario, r.degree))?;
    }
    Ok(format!("EX3 8 = 4*2; {} fuzzed towers", fz.reports.len()))
}

fn c5_skew() -> Outcome {
    let skew = |t: &ExtensionTower, a0: &MatAlgebra| -> Result<galois::SkewAlgebra, String> {
        let g = galois::automorphism_group(t).map_err(|e| e.to_string())?;
        galois::skew_group_algebra(t, a0, &g, &g.all()).map_err(|e| e.to_string())
    };
    let t2 = tower("EX2");
    let l2 = skew(&t2, &MatAlgebra::image_of_l(&t2))?;
    ensure(l2.dim() == 4 && l2.algebra == MatAlgebra::full(&t2), format!("EX2 L⋊G dim {}", l2.dim()))?;

    let t3 = tower("EX3");
    let l3 = skew(&t3, &MatAlgebra::image_of_l(&t3))?;
    let e_ku = endomorphisms_over(&t3, &gen_field(&t3, "u")).map_err(|e| e.to_string())?;
    ensure(l3.dim() == 8 && l3.algebra == e_ku, format!("EX3 L⋊G dim {}", l3.dim()))?;
    let an3 = Analysis::new(&t3).map_err(|e| e.to_string())?;
    let d3 = skew(&t3, &an3.d.algebra)?;
    ensure(d3.dim() == 16 && d3.algebra == MatAlgebra::full(&t3), format!("EX3 D⋊G dim {}", d3.dim()))?;

    let t4 = tower("EX4");
    let an4 = Analysis::new(&t4).map_err(|e| e.to_string())?;
    let d4 = skew(&t4, &an4.d.algebra)?;
    let e4 = endomorphisms_over(&t4, &an4.fixed_dif).map_err(|e| e.to_string())?;
    ensure(an4.fixed_dif.is_whole(), "EX4: L^G_dif != L")?;
    ensure(d4.dim() == 3 && d4.algebra == MatAlgebra::image_of_l(&t4) && d4.algebra == e4, format!("EX4 D⋊G dim {}", d4.dim()))?;
    Ok("EX2 4, EX3 8 and 16, EX4 3".into())
}

fn c6_b_iff_normal(fz: &Fuzzed) -> Outcome {
    let flags_agree = |r: &Report| -> bool {
        let Some(c) = r.checks.iter().find(|c| c.name == "classify") else { return false };
        let f = &c.witnesses.flags;
        let first = f.get("criterion_1");
        first.is_some()
            && (2..=7).all(|i| f.get(&format!("criterion_{i}")) == first)
            && f.get("is_B") == first
            && f.get("is_normal") == first
    };
    for r in run_suite_on_catalog(Suite::Classify)?.iter().chain(&fz.reports) {
        ensure(passed(r, "classify") && flags_agree(r), format!("{}: {:?}", r.scenario, r.checks))?;
    }
    let r3 = galois::classify(&tower("EX3")).map_err(|e| e.to_string())?;
    ensure(r3.is_b && !r3.is_g && !r3.is_d, "EX3 flags")?;
    let r4 = galois::classify(&tower("EX4")).map_err(|e| e.to_string())?;
    ensure(!r4.is_b && !r4.is_g && !r4.is_d && r4.criteria == [false; 7], "EX4 flags")?;
    Ok(format!("{} catalog + {} fuzzed towers agree", builtin_catalog().len(), fz.reports.len()))
}

fn c7_correspondence() -> Outcome {
    let start = Instant::now();
    let t = tower("EX3");
    let an = Analysis::new(&t).map_err(|e| e.to_string())?;
    for (label, m) in
        [("K", Subfield::base(&t)), ("K(u)", gen_field(&t, "u")), ("K(s)", gen_field(&t, "s")), ("L", Subfield::whole(&t))]
    {
        let r = galois::correspondence_roundtrip(&an, &m).map_err(|e| e.to_string())?;
        ensure(r.ok && r.via_centralizer == m && r.via_fixed == m, format!("EX3 {label}: {r:?}"))?;
        ensure(r.a_dim == (4 / m.dim()) * (4 / m.dim()) * m.dim(), format!("EX3 {label}: dim {}", r.a_dim))?;
    }
    let an0 = Analysis::new(&tower("EX0")).map_err(|e| e.to_string())?;
    let lat = galois::galois_lattice(&an0).map_err(|e| e.to_string())?;
    ensure(lat.subgroups == 3, format!("EX0: {} subgroups", lat.subgroups))?;
    ensure(lat.roundtrip_ok && lat.order_reversing && lat.skew_ok, format!("EX0: {lat:?}"))?;
    ensure(start.elapsed() < Duration::from_secs(10), format!("took {:?}", start.elapsed()))?;
    Ok("EX3 four subfields, EX0 lattice of 3".into())
}

fn c8_pi_correspondence() -> Outcome {
    let t = tower("EX5");
    let an = Analysis::new(&t).map_err(|e| e.to_string())?;
    let a = t.gen(t.gen_index("a").expect("a"));
    let a2 = t.frobenius(&a, 1);
    let ms = [
        ("K(z^2)", Subfield::generated(&t, std::slice::from_ref(&a2))),
        ("K(z)", gen_field(&t, "a")),
        ("K(xz+y)", gen_field(&t, "b")),
        ("K(z^2, xz+y)", Subfield::generated(&t, &[a2, t.gen(t.gen_index("b").expect("b"))])),
    ];
    let mut dims = Vec::new();
    for (label, m) in &ms {
        let r = galois::pi_correspondence(&an, m).map_err(|e| e.to_string())?;
        let k = m.dim();
        ensure(r.ok && r.recovered == *m, format!("{label}: {r:?}"))?;
        ensure(r.d_dim == (8 / k) * (8 / k) * k, format!("{label}: dim C_D(M) = {}", r.d_dim))?;
        dims.push(r.d_dim);
    }
    Ok(format!("dims {dims:?}"))
}

fn c9_conormal() -> Outcome {
    for (name, want_base) in [("EX3", true), ("EX4", false), ("EX2", true)] {
        let t = tower(name);
        let r = galois::least_conormal(&Analysis::new(&t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let right = if want_base { r.field.is_base() } else { r.field.is_whole() };
        ensure(right && r.normal_over && r.d_unchanged && r.g_unchanged, format!("{name}: {r:?}"))?;
    }
    Ok("EX3 K, EX4 L, EX2 K".into())
}

fn c10_tensor() -> Outcome {
    let r = galois::tensor_extension_checks(&tower("EX1"), &tower("EX2")).map_err(|e| e.to_string())?;
    ensure(r.d_dims == [4, 2, 8], format!("D {:?}", r.d_dims))?;
    ensure(r.orders == [1, 2, 2], format!("G {:?}", r.orders))?;
    ensure(r.dg_dims == [4, 4, 16], format!("D⋊G {:?}", r.dg_dims))?;
    ensure(r.ok(), format!("{r:?}"))?;
    Ok("8 = 4*2, 2 = 1*2, 16 = 4*4".into())
}

fn c11_double_centralizer() -> Outcome {
    let mut n = 0;
    for r in run_suite_on_catalog(Suite::Dct)? {
        let samples = dim_of(&r, "dct", "samples").unwrap_or(0);
        ensure(samples >= 20 && passed(&r, "dct"), format!("{}: {:?}", r.scenario, r.checks))?;
        n += 1;
    }
    Ok(format!("{n} towers x 20 samples"))
}

fn c12_delta() -> Outcome {
    let delta = |t: &ExtensionTower| -> Result<(MatAlgebra, MatAlgebra), String> {
        let der = derivations(t, &Subfield::base(t)).map_err(|e| e.to_string())?;
        let delta = derivation_algebra(t, &der).map_err(|e| e.to_string())?;
        let d = diff_ops(&Extension::absolute(t)).map_err(|e| e.to_string())?.algebra;
        Ok((delta, d))
    };
    let t1 = tower("EX1");
    let (a1, d1) = delta(&t1)?;
    ensure(a1 == d1, "EX1: Δ != D")?;
    let t5 = tower("EX5");
    let (a5, d5) = delta(&t5)?;
    ensure(a5.is_subalgebra_of(&t5, &d5) && a5.dim() < d5.dim(), format!("EX5: dim Δ = {}, dim D = {}", a5.dim(), d5.dim()))?;
    Ok(format!("EX1 {} = {}, EX5 {} < {}", a1.dim(), d1.dim(), a5.dim(), d5.dim()))
}

fn c13_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_bext"))
            .args(["verify", "EX3", "--seed", "7", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), "verify failed")?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance() {
    let fz = fuzzed();
    let results: Vec<(&str, Outcome)> = vec![
        ("triple agreement", c1_triple_agreement(&fz)),
        ("filtration oracle", c2_filtration(&fz)),
        ("purely inseparable D = E", c3_purely_inseparable()),
        ("dimension law for D", c4_dimension_law(&fz)),
        ("skew group algebra identities", c5_skew()),
        ("B iff normal", c6_b_iff_normal(&fz)),
        ("Galois correspondence round trips", c7_correspondence()),
        ("purely inseparable correspondence", c8_pi_correspondence()),
        ("least co-normal subfield", c9_conormal()),
        ("tensor laws", c10_tensor()),
        ("double centralizer", c11_double_centralizer()),
        ("derivation algebra vs D", c12_delta()),
        ("determinism", c13_determinism()),
    ];
    let mut failed = Vec::new();
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
