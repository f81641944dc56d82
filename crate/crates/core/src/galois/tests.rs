use super::*;
use crate::tower::ambient::from_ambient;
use crate::tower::fixtures::*;

fn ex5() -> ExtensionTower {
    from_ambient(2, &["x", "y", "z"], &["x^2", "y^2", "z^4"], &[("a", "z"), ("b", "x*z + y")]).unwrap().tower
}

fn gen_field(t: &ExtensionTower, i: usize) -> Subfield {
    Subfield::generated(t, &[t.gen(i)])
}

fn el(t: &ExtensionTower, s: &str) -> TowerElement {
    t.parse_element(s).unwrap()
}

#[test]
fn groups_of_small_towers() {
    let t1 = ex1();
    let g1 = automorphism_group(&t1).unwrap();
    assert_eq!(g1.order(), 1);
    assert!(g1.is_complete());

    let t2 = ex2();
    let g2 = automorphism_group(&t2).unwrap();
    assert_eq!(g2.order(), 2);
    let sigma = 1 - g2.identity;
    assert_eq!(g2.elements[sigma].images, vec![el(&t2, "s + 1")]);
    assert_eq!(g2.table[sigma][sigma], g2.identity);
    // sigma is a ring map: check on a product
    let (a, b) = (el(&t2, "t*s + 1"), el(&t2, "s + t^2"));
    assert_eq!(g2.apply(&t2, sigma, &t2.mul(&a, &b)), t2.mul(&g2.apply(&t2, sigma, &a), &g2.apply(&t2, sigma, &b)));

    let t0 = ex0();
    let g0 = automorphism_group(&t0).unwrap();
    assert_eq!(g0.order(), 4);
    let a = t0.gen(0);
    let frob = (0..4).find(|&i| g0.elements[i].images[0] == t0.mul(&a, &a)).expect("Frobenius present");
    let mut x = g0.identity;
    let mut orbit = Vec::new();
    for _ in 0..4 {
        orbit.push(x);
        x = g0.table[frob][x];
    }
    assert_eq!(x, g0.identity);
    orbit.sort_unstable();
    assert_eq!(orbit, vec![0, 1, 2, 3]);
}

#[test]
fn ex3_and_ex4_groups() {
    let t3 = ex3();
    let g3 = automorphism_group(&t3).unwrap();
    assert_eq!(g3.order(), 2);
    assert!(g3.sep_is_galois());
    let t4 = ex4();
    let g4 = automorphism_group(&t4).unwrap();
    assert_eq!(g4.order(), 1);
    assert_eq!(g4.sep_order, 1);
    assert!(!g4.sep_is_galois());
    let g5 = automorphism_group(&ex5()).unwrap();
    assert_eq!(g5.order(), 1);
}

#[test]
fn fixed_fields() {
    let t2 = ex2();
    let g2 = automorphism_group(&t2).unwrap();
    assert!(fixed_field(&t2, &g2, &g2.all()).unwrap().is_base());
    assert!(fixed_field(&t2, &g2, &[g2.identity]).unwrap().is_whole());
    let t3 = ex3();
    let g3 = automorphism_group(&t3).unwrap();
    assert_eq!(fixed_field(&t3, &g3, &g3.all()).unwrap(), gen_field(&t3, 0));
}

#[test]
fn skew_algebras() {
    let t2 = ex2();
    let g2 = automorphism_group(&t2).unwrap();
    let r = skew_group_algebra(&t2, &MatAlgebra::image_of_l(&t2), &g2, &g2.all()).unwrap();
    assert_eq!(r.dim(), 4);
    assert!(r.direct);
    assert_eq!(r.algebra, MatAlgebra::full(&t2));

    let t3 = ex3();
    let an = Analysis::new(&t3).unwrap();
    let g = &an.group;
    let ds = skew_group_algebra(&t3, &an.d.algebra, g, &g.all()).unwrap();
    assert_eq!(ds.dim(), 16);
    assert!(ds.direct);
    let ls = skew_group_algebra(&t3, &MatAlgebra::image_of_l(&t3), g, &g.all()).unwrap();
    assert_eq!(ls.dim(), 8);
    assert_eq!(ls.algebra, endomorphisms_over(&t3, &gen_field(&t3, 0)).unwrap());
}

#[test]
fn skew_requires_normalizing() {
    let t2 = ex2();
    let g2 = automorphism_group(&t2).unwrap();
    // K(s)-scalars inside E as a K-span without L: {1, E_00}-style algebra
    let mut e00 = vec![t2.zero(); 2];
    e00[0] = t2.one();
    let a0 = generate_ops(&t2, &[e00]).unwrap();
    assert!(matches!(skew_group_algebra(&t2, &a0, &g2, &g2.all()), Err(GaloisError::NotNormalized)));
}

#[test]
fn normality() {
    assert!(is_normal(&ex3()).unwrap());
    assert!(is_normal(&ex1()).unwrap());
    assert!(!is_normal(&ex4()).unwrap());
    let t3 = ex3();
    let rep = super::normality(&Extension::absolute(&t3), &automorphism_group(&t3).unwrap()).unwrap();
    assert!(rep.tensor_split);
    assert_eq!(rep.fixed, rep.pi);
}

#[test]
fn classification_flags() {
    let r1 = classify(&ex1()).unwrap();
    assert!(r1.is_d && !r1.is_g && r1.is_b && r1.is_normal);
    let r2 = classify(&ex2()).unwrap();
    assert!(r2.is_g && !r2.is_d && r2.is_b);
    let r3 = classify(&ex3()).unwrap();
    assert!(!r3.is_g && !r3.is_d && r3.is_b);
    assert_eq!(r3.dims, ClassificationDims { l_skew: 8, d: 8, d_skew: 16, e: 16 });
    let t4 = ex4();
    let r4 = classify(&t4).unwrap();
    assert!(!r4.is_b && !r4.is_g && !r4.is_d && !r4.is_normal);
    assert_eq!(r4.criteria, [false; 7]);
    assert!(r4.fixed_dif.is_whole());
    let r0 = classify(&ex0()).unwrap();
    assert!(r0.is_g && r0.criteria.iter().all(|&c| c));
}

#[test]
fn pi_towers_classify() {
    let r = classify(&ex5()).unwrap();
    assert!(r.is_d && r.is_b);
    assert_eq!(r.dims.d, 64);
}

#[test]
fn lattices() {
    let t0 = ex0();
    let g0 = automorphism_group(&t0).unwrap();
    let l = subgroup_lattice(&g0).unwrap();
    assert_eq!(l.len(), 3);
    assert!(l.iter().all(|h| h.normal));
    assert_eq!(l.iter().map(|h| h.elements.len()).collect::<Vec<_>>(), vec![1, 2, 4]);
    assert_eq!(subgroup_lattice(&automorphism_group(&ex1()).unwrap()).unwrap().len(), 1);
    assert_eq!(subgroup_lattice(&automorphism_group(&ex2()).unwrap()).unwrap().len(), 2);

    let rep = galois_lattice(&Analysis::new(&t0).unwrap()).unwrap();
    assert!(rep.ok());
    assert_eq!(rep.fixed_dims, vec![4, 2, 1]);
}

#[test]
fn correspondence_on_ex3() {
    let t = ex3();
    let an = Analysis::new(&t).unwrap();
    for (m, dim) in [
        (Subfield::base(&t), 16),
        (gen_field(&t, 0), 8),
        (gen_field(&t, 1), 8),
        (Subfield::whole(&t), 4),
    ] {
        let r = correspondence_roundtrip(&an, &m).unwrap();
        assert_eq!(r.a_dim, dim);
        assert!(r.ok, "{r:?}");
    }
    let d = endomorphisms_over(&t, &gen_field(&t, 1)).unwrap();
    assert_eq!(d, an.d.algebra);
    assert!(matches!(
        correspondence_roundtrip(&Analysis::new(&ex4()).unwrap(), &Subfield::base(&ex4())),
        Err(GaloisError::NotNormal)
    ));
}

#[test]
fn normal_subfields_of_ex3() {
    let t = ex3();
    let an = Analysis::new(&t).unwrap();
    let u = normal_subfield_correspondence(&an, &gen_field(&t, 0)).unwrap();
    assert!(u.ok);
    assert_eq!((u.m_pi.dim(), u.m_gal.dim(), u.a_dim), (2, 1, 8));
    let s = normal_subfield_correspondence(&an, &gen_field(&t, 1)).unwrap();
    assert!(s.ok);
    assert_eq!((s.m_pi.dim(), s.m_gal.dim(), s.a_dim), (1, 2, 8));
    let k = normal_subfield_correspondence(&an, &Subfield::base(&t)).unwrap();
    assert!(k.ok && k.m_pi.is_base() && k.m_gal.is_base());
}

#[test]
fn pi_correspondence_on_ex5() {
    let t = ex5();
    let an = Analysis::new(&t).unwrap();
    let z = t.gen(0);
    let m = Subfield::generated(&t, &[t.mul(&z, &z)]);
    let r = pi_correspondence(&an, &m).unwrap();
    assert_eq!((r.d_dim, r.expected_dim), (32, 32));
    assert!(r.ok);
    assert_eq!(pi_correspondence(&an, &Subfield::base(&t)).unwrap().d_dim, 64);
    let whole = pi_correspondence(&an, &Subfield::whole(&t)).unwrap();
    assert_eq!(whole.d_dim, 8);
    assert!(whole.ok);
    assert!(matches!(
        pi_correspondence(&Analysis::new(&ex2()).unwrap(), &Subfield::base(&ex2())),
        Err(GaloisError::NotPurelyInseparable)
    ));
}

#[test]
fn least_conormal_fields() {
    let r3 = least_conormal(&Analysis::new(&ex3()).unwrap()).unwrap();
    assert!(r3.field.is_base() && r3.ok);
    let r4 = least_conormal(&Analysis::new(&ex4()).unwrap()).unwrap();
    assert!(r4.field.is_whole() && r4.ok);
    let r2 = least_conormal(&Analysis::new(&ex2()).unwrap()).unwrap();
    assert!(r2.field.is_base() && r2.ok);
}

#[test]
fn tensor_checks() {
    let r = tensor_extension_checks(&ex1(), &ex2()).unwrap();
    assert_eq!(r.orders, [1, 2, 2]);
    assert_eq!(r.d_dims, [4, 2, 8]);
    assert_eq!(r.dg_dims, [4, 4, 16]);
    assert!(r.ok());
    let trivial = ExtensionTower::new(f2t());
    let r = tensor_extension_checks(&ex2(), &trivial).unwrap();
    assert_eq!(r.orders, [2, 1, 2]);
    assert!(r.ok());
    let bad = ExtensionTower::new(f2t()).extend_parsed("v", "v^2 + t").unwrap();
    assert!(matches!(tensor_extension_checks(&ex1(), &bad), Err(GaloisError::NotAField(_))));
}
