//! Built-in scenarios with their expected invariants.

use super::scenario::{parse_scenario, Scenario};

const CATALOG: &[&str] = &[
    "name EX0
     base p=2
     step a: a^4 + a + 1
     auto a -> a^2
     check all
     expect degree=4 d=4 group=4 lskew=16 dskew=16 sep=4 pi=1 dif=4 exponent=0",
    "name EX1
     base p=2 vars=t
     step u: u^2 + t
     check all
     expect degree=2 d=4 group=1 lskew=2 dskew=4 sep=1 pi=2 dif=1 exponent=1",
    "name EX2
     base p=2 vars=t
     step s: s^2 + s + t
     auto s -> s + 1
     check all
     expect degree=2 d=2 group=2 lskew=4 dskew=4 sep=2 pi=1 dif=2 exponent=0",
    "name EX3
     base p=2 vars=t
     step u: u^2 + t
     step s: s^2 + s + t
     auto u -> u; s -> s + 1
     check all
     expect degree=4 d=8 group=2 lskew=8 dskew=16 sep=2 pi=2 dif=2 exponent=1",
    "name EX4
     base p=2 vars=t
     step y: y^3 + y + t
     check all
     expect degree=3 d=3 group=1 lskew=3 dskew=3 sep=3 pi=1 dif=3 exponent=0",
    "name EX5
     ambient p=2 vars=x,y,z k=x^2,y^2,z^4
     step a = z
     step b = x*z + y
     check all
     expect degree=8 d=64 group=1 lskew=8 dskew=64 sep=1 pi=8 dif=1 exponent=2",
    "name P3-CUBE
     base p=3 vars=t
     step c: c^3 - t
     check all
     expect degree=3 d=9 group=1 lskew=3 dskew=9 sep=1 pi=3 dif=1 exponent=1",
    "name P3-AS
     base p=3 vars=t
     step w: w^3 - w - t
     auto w -> w + 1
     check all
     expect degree=3 d=3 group=3 lskew=9 dskew=9 sep=3 pi=1 dif=3 exponent=0",
    "name MIXED
     base p=2 vars=t
     step u: u^2 + t
     step y: y^3 + y + t
     check all
     expect degree=6 d=12 group=1 lskew=6 dskew=12 sep=3 pi=2 dif=3 exponent=1",
];

/// The built-in scenarios, in catalog order.
pub fn builtin_catalog() -> Vec<Scenario> {
    CATALOG
        .iter()
        .map(|text| {
            let text: String = text.lines().map(|l| format!("{}\n", l.trim())).collect();
            parse_scenario(&text).expect("catalog scenarios parse")
        })
        .collect()
}

pub fn builtin(name: &str) -> Option<Scenario> {
    builtin_catalog().into_iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds() {
        let cat = builtin_catalog();
        assert!(cat.len() >= 8);
        for s in &cat {
            let b = s.build().unwrap();
            assert_eq!(b.tower.degree(), s.expect["degree"], "{}", s.name);
        }
        assert_eq!(builtin("ex5").unwrap().expect["exponent"], 2);
        assert!(builtin("nope").is_none());
    }
}
