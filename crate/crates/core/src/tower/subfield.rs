//! Intermediate fields `K ⊆ M ⊆ L` as multiplicatively closed `K`-subspaces.

use super::{ExtensionTower, TowerElement, TowerError};
use crate::basefield::{RatFunc, UniPoly};
use crate::exlinalg::{self, Echelon, Matrix, Subspace};
use crate::field::Ring;

/// A subfield of a tower, stored as the reduced echelon basis of its
/// coordinate space.  Row 0 of the basis is always `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subfield {
    tower: u64,
    space: Subspace<RatFunc>,
}

impl Subfield {
    /// `K` itself.
    pub fn base(t: &ExtensionTower) -> Self {
        let one = t.one().into_coords();
        Subfield { tower: t.id(), space: Subspace::from_vectors(t.base(), t.degree(), vec![one]).unwrap() }
    }

    /// All of `L`.
    pub fn whole(t: &ExtensionTower) -> Self {
        Subfield { tower: t.id(), space: Subspace::full(t.base(), t.degree()) }
    }

    /// Smallest subfield containing `gens`.
    pub fn generated(t: &ExtensionTower, gens: &[TowerElement]) -> Self {
        Self::base(t).adjoin(t, gens)
    }

    /// `self(gens)`.
    pub fn adjoin(&self, t: &ExtensionTower, gens: &[TowerElement]) -> Self {
        let k = t.base();
        let n = t.degree();
        let gens: Vec<&TowerElement> = gens.iter().filter(|g| !self.contains(t, g)).collect();
        if gens.is_empty() {
            return self.clone();
        }
        let mut ech = Echelon::from_subspace(&self.space);
        let mut frontier = self.basis_elements(t);
        while let Some(v) = frontier.pop() {
            if ech.rank() == n {
                break;
            }
            for g in &gens {
                let w = t.mul(&v, g);
                if ech.insert(k, w.coords().to_vec()).expect("K is a field") {
                    frontier.push(w);
                }
            }
        }
        Subfield { tower: t.id(), space: ech.into_subspace() }
    }

    /// Promote a subspace to a subfield after checking it contains `1` and
    /// is closed under products of basis pairs.
    pub fn from_subspace(t: &ExtensionTower, space: Subspace<RatFunc>) -> Result<Self, TowerError> {
        if space.ambient_dim() != t.degree() {
            return Err(TowerError::Linalg(exlinalg::LinalgError::DimensionMismatch(space.ambient_dim(), t.degree())));
        }
        let k = t.base();
        if !space.contains(k, t.one().coords())? {
            return Err(TowerError::NotClosed);
        }
        let ech = Echelon::from_subspace(&space);
        let elems: Vec<TowerElement> = space.basis().iter().map(|v| t.from_coords(v.clone())).collect();
        for i in 1..elems.len() {
            for j in i..elems.len() {
                if !ech.contains(k, t.mul(&elems[i], &elems[j]).coords()) {
                    return Err(TowerError::NotClosed);
                }
            }
        }
        Ok(Subfield { tower: t.id(), space })
    }

    pub fn tower_id(&self) -> u64 {
        self.tower
    }

    /// `[M:K]`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `[L:M]`.
    pub fn codim(&self) -> usize {
        self.space.ambient_dim() / self.space.dim()
    }

    pub fn space(&self) -> &Subspace<RatFunc> {
        &self.space
    }

    pub fn is_base(&self) -> bool {
        self.dim() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.space.is_full()
    }

    pub fn basis_elements(&self, t: &ExtensionTower) -> Vec<TowerElement> {
        self.space.basis().iter().map(|v| t.from_coords(v.clone())).collect()
    }

    pub fn contains(&self, t: &ExtensionTower, a: &TowerElement) -> bool {
        self.is_whole() || Echelon::from_subspace(&self.space).contains(t.base(), a.coords())
    }

    pub fn is_subfield_of(&self, t: &ExtensionTower, other: &Self) -> bool {
        self.space.is_subspace_of(t.base(), &other.space).unwrap_or(false)
    }

    pub fn compositum(&self, t: &ExtensionTower, other: &Self) -> Self {
        if self.dim() >= other.dim() {
            self.adjoin(t, &other.basis_elements(t))
        } else {
            other.adjoin(t, &self.basis_elements(t))
        }
    }

    pub fn meet(&self, t: &ExtensionTower, other: &Self) -> Self {
        Subfield { tower: t.id(), space: self.space.meet(t.base(), &other.space).expect("same tower") }
    }

    /// `[MN:K] = [M:K][N:K]`.
    pub fn is_linearly_disjoint(&self, t: &ExtensionTower, other: &Self) -> bool {
        self.compositum(t, other).dim() == self.dim() * other.dim()
    }

    /// A short list of elements generating the subfield over `K`, taken
    /// greedily from the echelon basis.
    pub fn generators(&self, t: &ExtensionTower) -> Vec<TowerElement> {
        let mut cur = Subfield::base(t);
        let mut gens = Vec::new();
        for b in self.basis_elements(t) {
            if cur.dim() == self.dim() {
                break;
            }
            if !cur.contains(t, &b) {
                cur = cur.adjoin(t, std::slice::from_ref(&b));
                gens.push(b);
            }
        }
        gens
    }

    /// Coordinates of `a` on the echelon basis, when `a` lies in the subfield.
    pub fn coordinates(&self, t: &ExtensionTower, a: &TowerElement) -> Option<Vec<RatFunc>> {
        self.space.coordinates(t.base(), a.coords())
    }
}

/// Minimal polynomial of `a` over the subfield `over`, monic with
/// coefficients in `over`.
pub fn minimal_polynomial(t: &ExtensionTower, a: &TowerElement, over: &Subfield) -> UniPoly<TowerElement> {
    let k = t.base();
    let n = t.degree();
    let mb = over.basis_elements(t);
    let codim = over.codim();
    let mut powers = vec![t.one()];
    for d in 1..=codim {
        powers.push(t.mul(&powers[d - 1], a));
        if codim % d != 0 {
            continue;
        }
        let mut cols = Vec::with_capacity(d * mb.len());
        for pw in &powers[..d] {
            for m in &mb {
                cols.push(t.mul(m, pw).into_coords());
            }
        }
        let target: Vec<RatFunc> = powers[d].coords().iter().map(|x| k.neg(x)).collect();
        let sol = exlinalg::solve(k, &Matrix::from_columns(&cols, n), &target).expect("K is a field");
        if let Some(x) = sol {
            let mut coeffs: Vec<TowerElement> = x.chunks(mb.len()).map(|c| t.combine(c, &mb)).collect();
            coeffs.push(t.one());
            return UniPoly::new(coeffs, t);
        }
    }
    unreachable!("every element satisfies a polynomial of degree [L:M] over M")
}

/// Minimal polynomial over `K` with coefficients in `K`.
pub fn minimal_polynomial_over_base(t: &ExtensionTower, a: &TowerElement) -> UniPoly<RatFunc> {
    let g = minimal_polynomial(t, a, &Subfield::base(t));
    UniPoly::new(g.coeffs().iter().map(|c| c.as_base().expect("coefficient in K").clone()).collect(), t.base())
}

/// Whether the minimal polynomial over `K` has the form `x^(p^e) - c`.
pub fn is_pi_element(t: &ExtensionTower, a: &TowerElement) -> bool {
    let (fsep, _) = minimal_polynomial_over_base(t, a).separable_presentation(t.base());
    fsep.degree() == Some(1)
}

/// Whether the minimal polynomial over `K` is separable.
pub fn is_sep_element(t: &ExtensionTower, a: &TowerElement) -> bool {
    minimal_polynomial_over_base(t, a).separable_presentation(t.base()).1 == 0
}

/// Characteristic polynomial of the regular representation of `a`.
pub fn characteristic_polynomial(t: &ExtensionTower, a: &TowerElement) -> UniPoly<RatFunc> {
    UniPoly::new(exlinalg::charpoly(t.base(), &t.regular_rep(a)), t.base())
}

/// `g(a)` for a polynomial with coefficients in `K`.
pub fn eval_base_poly(t: &ExtensionTower, g: &UniPoly<RatFunc>, a: &TowerElement) -> TowerElement {
    let mut acc = t.zero();
    for c in g.coeffs().iter().rev() {
        acc = t.add(&t.mul(&acc, a), &t.from_base(c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::field::Field;

    #[test]
    fn minimal_polynomial_examples() {
        let t = ex1();
        let k = t.base().clone();
        let u = t.gen(0);
        let g = minimal_polynomial_over_base(&t, &u);
        assert_eq!(g, UniPoly::new(vec![k.parse("t").unwrap(), k.zero(), k.one()], &k));
        let one = minimal_polynomial_over_base(&t, &t.one());
        assert_eq!(one, UniPoly::new(vec![k.one(), k.one()], &k));
    }

    #[test]
    fn minimal_polynomial_of_u_plus_s_matches_power_kernel() {
        let t = ex3();
        let k = t.base().clone();
        let a = t.parse_element("u+s").unwrap();
        let g = minimal_polynomial_over_base(&t, &a);
        assert_eq!(g.degree(), Some(4));
        assert!(eval_base_poly(&t, &g, &a).is_zero());
        // oracle: kernel of the 5 power vectors is one-dimensional
        let mut pw = vec![t.one()];
        for i in 1..5 {
            pw.push(t.mul(&pw[i - 1], &a));
        }
        let cols: Vec<Vec<RatFunc>> = pw.iter().map(|x| x.coords().to_vec()).collect();
        let ker = exlinalg::column_kernel(&k, &cols, 4).unwrap();
        assert_eq!(ker.dim(), 1);
        let v = &ker.basis()[0];
        let lc = v[4].clone();
        let scaled: Vec<RatFunc> = v.iter().map(|x| k.div(x, &lc).unwrap()).collect();
        assert_eq!(g.coeffs(), &scaled[..]);
        let chi = characteristic_polynomial(&t, &a);
        assert!(chi.rem(&g, &k).unwrap().is_zero());
    }

    #[test]
    fn pi_and_sep_elements() {
        let t = ex3();
        let u = t.parse_element("u").unwrap();
        let s = t.parse_element("s").unwrap();
        let us = t.parse_element("u*s").unwrap();
        assert!(is_pi_element(&t, &u) && !is_sep_element(&t, &u));
        assert!(is_sep_element(&t, &s));
        assert!(!is_pi_element(&t, &us) && !is_sep_element(&t, &us));
        let (_, e) = minimal_polynomial_over_base(&t, &us).separable_presentation(t.base());
        assert_eq!(e, 1);
    }

    #[test]
    fn generated_subfields() {
        let t = ex3();
        assert_eq!(Subfield::generated(&t, &[]).dim(), 1);
        let ks = Subfield::generated(&t, &[t.parse_element("s").unwrap()]);
        assert_eq!(ks.dim(), 2);
        assert!(ks.contains(&t, &t.parse_element("s^2").unwrap()));
        let all = Subfield::generated(&t, &t.gens());
        assert!(all.is_whole());
        assert_eq!(Subfield::from_subspace(&t, ks.space().clone()).unwrap(), ks);
        assert_eq!(ks.space().basis()[0], t.one().into_coords());
    }

    #[test]
    fn compositum_and_disjointness() {
        let t = ex3();
        let ku = Subfield::generated(&t, &[t.parse_element("u").unwrap()]);
        let ks = Subfield::generated(&t, &[t.parse_element("s").unwrap()]);
        assert!(ku.compositum(&t, &ks).is_whole());
        assert!(ku.is_linearly_disjoint(&t, &ks));
        assert_eq!(ku.compositum(&t, &ku), ku);
        assert!(!ku.is_linearly_disjoint(&t, &ku));
        assert!(Subfield::base(&t).is_linearly_disjoint(&t, &ks));
        assert!(ku.meet(&t, &ks).is_base());
        let kus = Subfield::generated(&t, &[t.parse_element("u*s").unwrap()]);
        assert_eq!(kus.dim(), 4);
    }

    #[test]
    fn minimal_polynomial_over_subfield() {
        let t = ex3();
        let ks = Subfield::generated(&t, &[t.parse_element("s").unwrap()]);
        let g = minimal_polynomial(&t, &t.gen(0), &ks);
        assert_eq!(g.degree(), Some(2));
        assert_eq!(g.coeffs()[0], t.parse_element("t").unwrap());
    }
}
