//! Changing the base field.
//!
//! [`rebase`] views `L` over an intermediate field `M` without building a new
//! tower: every computation keeps working in the original coordinates, and
//! the relative steps are recorded for reporting and for translating
//! elements to and from `M`-coordinates.  [`present_subfield`] goes the
//! other way and builds an independent tower over `K` for `M` itself.

use super::subfield::{minimal_polynomial, Subfield};
use super::{ExtensionTower, TowerElement, TowerError};
use crate::basefield::{RatFunc, UniPoly};
use crate::exlinalg::{self, Matrix};
use crate::field::Ring;

/// `L` over an intermediate field `M` of a tower `L/K`.
#[derive(Clone, Debug)]
pub struct Extension {
    tower: ExtensionTower,
    base: Subfield,
}

impl Extension {
    pub fn absolute(t: &ExtensionTower) -> Self {
        Extension { tower: t.clone(), base: Subfield::base(t) }
    }

    pub fn over(t: &ExtensionTower, base: Subfield) -> Self {
        assert_eq!(base.tower_id(), t.id(), "base subfield of another tower");
        Extension { tower: t.clone(), base }
    }

    pub fn tower(&self) -> &ExtensionTower {
        &self.tower
    }

    /// The base field `M`.
    pub fn base(&self) -> &Subfield {
        &self.base
    }

    /// `[L:M]`.
    pub fn degree(&self) -> usize {
        self.base.codim()
    }

    pub fn is_absolute(&self) -> bool {
        self.base.is_base()
    }

    /// The whole field `L`.
    pub fn top(&self) -> Subfield {
        Subfield::whole(&self.tower)
    }
}

/// The relative steps produced by [`rebase`].
#[derive(Clone, Debug)]
pub struct RelativePresentation {
    /// Adjoined original generators with their minimal polynomials over the
    /// field generated so far.
    pub steps: Vec<(String, UniPoly<TowerElement>)>,
    /// Relative monomial basis of `L` over `M`, first step fastest.
    pub basis: Vec<TowerElement>,
    /// Inverse of the `K`-matrix whose columns are `m_j * basis_b`.
    change: Matrix<RatFunc>,
    base_dim: usize,
}

impl RelativePresentation {
    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    /// `a = sum_b c_b basis_b` with `c_b in M`.
    pub fn coords(&self, t: &ExtensionTower, m: &Subfield, a: &TowerElement) -> Vec<TowerElement> {
        let x = self.change.mul_vec(t.base(), a.coords());
        let mb = m.basis_elements(t);
        x.chunks(self.base_dim).map(|c| t.combine(c, &mb)).collect()
    }

    pub fn from_coords(&self, t: &ExtensionTower, c: &[TowerElement]) -> TowerElement {
        let mut acc = t.zero();
        for (ci, b) in c.iter().zip(&self.basis) {
            acc = t.add(&acc, &t.mul(ci, b));
        }
        acc
    }
}

/// Present `L` over `M` by adjoining the original generators one at a time.
pub fn rebase(t: &ExtensionTower, m: &Subfield) -> (Extension, RelativePresentation) {
    let mut cur = m.clone();
    let mut steps = Vec::new();
    let mut basis = vec![t.one()];
    for (i, g) in t.gens().into_iter().enumerate() {
        if cur.contains(t, &g) {
            continue;
        }
        let f = minimal_polynomial(t, &g, &cur);
        let d = f.degree().unwrap();
        let mut next = Vec::with_capacity(basis.len() * d);
        let mut pw = t.one();
        for _ in 0..d {
            next.extend(basis.iter().map(|b| t.mul(b, &pw)));
            pw = t.mul(&pw, &g);
        }
        basis = next;
        cur = cur.adjoin(t, std::slice::from_ref(&g));
        steps.push((t.steps()[i].name().to_string(), f));
    }
    debug_assert!(cur.is_whole());
    let mb = m.basis_elements(t);
    let cols: Vec<Vec<RatFunc>> =
        basis.iter().flat_map(|b| mb.iter().map(move |x| t.mul(x, b).into_coords())).collect();
    let change = Matrix::from_columns(&cols, t.degree())
        .inverse(t.base())
        .expect("K is a field")
        .expect("relative monomials form a basis");
    let pres = RelativePresentation { steps, basis, change, base_dim: m.dim() };
    (Extension::over(t, m.clone()), pres)
}

/// An independent tower over `K` for a subfield `M`, with its embedding into `L`.
#[derive(Clone, Debug)]
pub struct SubfieldPresentation {
    pub tower: ExtensionTower,
    /// Images in `L` of the monomial basis of `tower`.
    pub images: Vec<TowerElement>,
    inverse: Matrix<RatFunc>,
    /// Pivot coordinates used by `inverse`.
    rows: Vec<usize>,
}

impl SubfieldPresentation {
    pub fn embed(&self, l: &ExtensionTower, a: &TowerElement) -> TowerElement {
        l.combine(a.coords(), &self.images)
    }

    /// Preimage of an element of `M`.
    pub fn pull_back(&self, a: &TowerElement) -> TowerElement {
        let x: Vec<RatFunc> = self.rows.iter().map(|&r| a.coords()[r].clone()).collect();
        self.tower.from_coords(self.inverse.mul_vec(self.tower.base(), &x))
    }
}

fn fresh_name(t: &ExtensionTower, i: usize) -> String {
    let mut name = format!("m{}", i + 1);
    while t.base().var_index(&name).is_some() || t.gen_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Build a tower over `K` whose top field is isomorphic to `M`.
pub fn present_subfield(l: &ExtensionTower, m: &Subfield) -> Result<SubfieldPresentation, TowerError> {
    let k = l.base();
    let mut t = ExtensionTower::new(k.clone());
    let mut images = vec![l.one()];
    let mut cur = Subfield::base(l);
    for (i, g) in m.generators(l).into_iter().enumerate() {
        let f = minimal_polynomial(l, &g, &cur);
        // coefficients of f lie in cur = image of t
        let cols: Vec<Vec<RatFunc>> = images.iter().map(|x| x.coords().to_vec()).collect();
        let img = Matrix::from_columns(&cols, l.degree());
        let mut coeffs = Vec::new();
        for c in f.coeffs() {
            let x = exlinalg::solve(k, &img, c.coords())?.ok_or(TowerError::NotClosed)?;
            coeffs.push(t.from_coords(x));
        }
        let d = f.degree().unwrap();
        t = t.extend(&fresh_name(l, i), &UniPoly::new(coeffs, &t))?;
        let mut next = Vec::with_capacity(images.len() * d);
        let mut pw = l.one();
        for _ in 0..d {
            next.extend(images.iter().map(|b| l.mul(b, &pw)));
            pw = l.mul(&pw, &g);
        }
        images = next;
        cur = cur.adjoin(l, std::slice::from_ref(&g));
    }
    // invert the embedding on a set of independent coordinates
    let cols: Vec<Vec<RatFunc>> = images.iter().map(|x| x.coords().to_vec()).collect();
    let emb = Matrix::from_columns(&cols, l.degree());
    let (r, _) = exlinalg::rref(k, &emb.transpose())?;
    let mut rows = Vec::new();
    for i in 0..r.rows() {
        let piv = (0..r.cols()).find(|&j| !k.is_zero(r.get(i, j))).unwrap();
        rows.push(piv);
    }
    let square = Matrix::from_rows(rows.iter().map(|&j| emb.row(j).to_vec()).collect(), images.len());
    let inverse = square.inverse(k)?.expect("embedding is injective");
    Ok(SubfieldPresentation { tower: t, images, inverse, rows })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn rebase_over_ks() {
        let t = ex3();
        let ks = Subfield::generated(&t, &[t.parse_element("s").unwrap()]);
        let (ext, pres) = rebase(&t, &ks);
        assert_eq!(ext.degree(), 2);
        assert_eq!(pres.steps.len(), 1);
        assert_eq!(pres.steps[0].0, "u");
        assert_eq!(t.render_poly(&pres.steps[0].1, "x"), "x^2 + t");
        let a = t.parse_element("u*s + t*u + s").unwrap();
        let c = pres.coords(&t, &ks, &a);
        assert!(c.iter().all(|x| ks.contains(&t, x)));
        assert_eq!(pres.from_coords(&t, &c), a);
    }

    #[test]
    fn rebase_trivial_cases() {
        let t = ex3();
        let (e, p) = rebase(&t, &Subfield::base(&t));
        assert_eq!(e.degree(), 4);
        assert_eq!(p.steps.len(), 2);
        let (e, p) = rebase(&t, &Subfield::whole(&t));
        assert_eq!(e.degree(), 1);
        assert!(p.steps.is_empty());
    }

    #[test]
    fn subfield_presentation_round_trip() {
        let t = ex3();
        let kus = Subfield::generated(&t, &[t.parse_element("u*s + s").unwrap()]);
        let pres = present_subfield(&t, &kus).unwrap();
        assert_eq!(pres.tower.degree(), kus.dim());
        let x = pres.tower.gen(0);
        let y = pres.tower.mul(&x, &pres.tower.add(&x, &pres.tower.one()));
        let img = pres.embed(&t, &y);
        assert_eq!(img, t.mul(&pres.embed(&t, &x), &pres.embed(&t, &pres.tower.add(&x, &pres.tower.one()))));
        assert_eq!(pres.pull_back(&img), y);
    }
}
