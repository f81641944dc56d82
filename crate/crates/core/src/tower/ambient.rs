//! Towers for subfields of a rational function field `F = F_p(x_1..x_m)`.
//!
//! `K` must be generated by powers `x_i^(q_i)` with `q_i` a power of `p`.
//! Then `F` is free over `K` on the monomials `x^a`, `0 <= a_i < q_i`, and
//! every element of `F` splits along that basis after clearing the
//! denominator with a `q`-th power.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{ExtensionTower, TowerElement, TowerError};
use crate::basefield::{BaseField, BaseFieldError, Monomial, MultiPoly, RatFunc, UniPoly};
use crate::exlinalg::{self, Matrix};
use crate::field::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmbientError {
    #[error("unsupported ambient base generator {0}: expected a power x^(p^e) of a variable")]
    UnsupportedAmbient(String),
    #[error("F/K is not finite: variable {0} has no power among the base generators")]
    NotFinite(String),
    #[error(transparent)]
    BaseField(#[from] BaseFieldError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// A tower for `L/K` together with the embedding of `L` into `F`.
#[derive(Clone, Debug)]
pub struct AmbientPresentation {
    pub tower: ExtensionTower,
    pub ambient: BaseField,
    /// `q_i` with `K = F_p(x_i^(q_i))`.
    pub exponents: Vec<u32>,
    /// Images in `F` of the monomial basis of `tower`.
    pub images: Vec<RatFunc>,
    /// `F`-coordinates over `K` of `images`, one column each.
    coords: Matrix<RatFunc>,
}

/// `K`-coordinates of `f` on the monomials `x^a`, `0 <= a_i < q_i`, first variable fastest.
fn decompose(f: &BaseField, k: &BaseField, qs: &[u32], a: &RatFunc) -> Vec<RatFunc> {
    let p = f.p();
    let m = qs.len();
    let dim: usize = qs.iter().map(|&q| q as usize).product();
    let mut out = vec![k.zero(); dim];
    if a.is_zero() {
        return out;
    }
    let q = *qs.iter().max().unwrap_or(&1);
    let den = a.den();
    let num = if den.is_one() { a.num().clone() } else { a.num().mul(&den.pow(q as u64 - 1, p), p) };
    let den_q = deflate(&den.pow(q as u64, p), qs, p);
    let mut parts: BTreeMap<usize, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (mono, c) in num.terms() {
        let (mut idx, mut stride) = (0, 1);
        let mut base = Monomial::one();
        for i in 0..m {
            idx += (mono.0[i] % qs[i]) as usize * stride;
            stride *= qs[i] as usize;
            base.0[i] = mono.0[i] / qs[i];
        }
        parts.entry(idx).or_default().push((base, *c));
    }
    for (idx, terms) in parts {
        let poly = MultiPoly::from_terms(m, terms, p);
        out[idx] = RatFunc::normalize(poly, den_q.clone(), p).expect("nonzero denominator");
    }
    out
}

/// `x_i^(q_i e_i) -> X_i^(e_i)`; exponents must be divisible.
fn deflate(a: &MultiPoly, qs: &[u32], p: u32) -> MultiPoly {
    let terms = a.terms().iter().map(|(mono, c)| {
        let mut x = mono.0;
        for (v, q) in x.iter_mut().zip(qs) {
            debug_assert_eq!(*v % q, 0);
            *v /= q;
        }
        (Monomial(x), *c)
    });
    MultiPoly::from_terms(a.nvars(), terms, p)
}

fn inflate(a: &MultiPoly, qs: &[u32], p: u32) -> MultiPoly {
    let terms = a.terms().iter().map(|(mono, c)| {
        let mut x = mono.0;
        for (v, q) in x.iter_mut().zip(qs) {
            *v *= q;
        }
        (Monomial(x), *c)
    });
    MultiPoly::from_terms(a.nvars(), terms, p)
}

/// The element `c in K` as an element of `F`.
fn lift_scalar(qs: &[u32], p: u32, c: &RatFunc) -> RatFunc {
    RatFunc::normalize(inflate(c.num(), qs, p), inflate(c.den(), qs, p), p).expect("nonzero denominator")
}

/// Read `x^q` off a base generator.
fn power_of_variable(f: &BaseField, g: &RatFunc) -> Option<(usize, u32)> {
    if !g.den().is_one() || g.num().terms().len() != 1 {
        return None;
    }
    let (mono, c) = g.num().terms()[0];
    if c != 1 {
        return None;
    }
    let vars: Vec<usize> = (0..f.nvars()).filter(|&i| mono.0[i] > 0).collect();
    let [i] = vars[..] else { return None };
    let mut q = mono.0[i];
    while q % f.p() == 0 {
        q /= f.p();
    }
    (q == 1).then_some((i, mono.0[i]))
}

fn base_name(f: &BaseField, i: usize, q: u32) -> String {
    if q == 1 {
        f.vars()[i].clone()
    } else {
        format!("{}{}", f.vars()[i], q)
    }
}

/// Present `L = K(l_gens)` over `K = F_p(k_gens)` inside `F = F_p(vars)`.
///
/// Base variables of the tower are named `x4` for `x^4` (or `x` for `x`);
/// generators get the names supplied with `l_gens`.
pub fn from_ambient(
    p: u32,
    vars: &[&str],
    k_gens: &[&str],
    l_gens: &[(&str, &str)],
) -> Result<AmbientPresentation, AmbientError> {
    let f = BaseField::new(p, vars)?;
    let mut qs = vec![0u32; f.nvars()];
    for text in k_gens {
        let g = f.parse(text).map_err(TowerError::from)?;
        let (i, q) = power_of_variable(&f, &g).ok_or_else(|| AmbientError::UnsupportedAmbient(text.to_string()))?;
        if qs[i] != 0 {
            return Err(AmbientError::UnsupportedAmbient(text.to_string()));
        }
        qs[i] = q;
    }
    if let Some(i) = qs.iter().position(|&q| q == 0) {
        return Err(AmbientError::NotFinite(f.vars()[i].clone()));
    }
    let k = BaseField::from_names(p, (0..f.nvars()).map(|i| base_name(&f, i, qs[i])).collect())?;
    let dim: usize = qs.iter().map(|&q| q as usize).product();

    let mut tower = ExtensionTower::new(k.clone());
    let mut images = vec![f.one()];
    for (name, text) in l_gens {
        let gamma = f.parse(text).map_err(TowerError::from)?;
        // smallest d with gamma^d in the M-span of 1, .., gamma^(d-1)
        let mut cols: Vec<Vec<RatFunc>> = images.iter().map(|b| decompose(&f, &k, &qs, b)).collect();
        let mut pw = f.one();
        let (d, sol) = loop {
            pw = f.mul(&pw, &gamma);
            let cur = cols.len() / images.len();
            let target: Vec<RatFunc> = decompose(&f, &k, &qs, &f.mul(&images[0], &pw));
            if let Some(x) = exlinalg::solve(&k, &Matrix::from_columns(&cols, dim), &target).map_err(TowerError::from)? {
                break (cur, x);
            }
            cols.extend(images.iter().map(|b| decompose(&f, &k, &qs, &f.mul(b, &pw))));
        };
        let m = images.len();
        let mut coeffs: Vec<TowerElement> = (0..d)
            .map(|kk| {
                let c: Vec<RatFunc> = sol[kk * m..(kk + 1) * m].iter().map(|x| k.neg(x)).collect();
                tower.from_level(&c)
            })
            .collect();
        coeffs.push(tower.one());
        tower = tower.extend(name, &UniPoly::new(coeffs, &tower))?;
        let mut next = Vec::with_capacity(m * d);
        let mut g = f.one();
        for _ in 0..d {
            next.extend(images.iter().map(|b| f.mul(b, &g)));
            g = f.mul(&g, &gamma);
        }
        images = next;
    }
    let cols: Vec<Vec<RatFunc>> = images.iter().map(|b| decompose(&f, &k, &qs, b)).collect();
    let coords = Matrix::from_columns(&cols, dim);
    Ok(AmbientPresentation { tower, ambient: f, exponents: qs, images, coords })
}

impl AmbientPresentation {
    /// `[F:K]`.
    pub fn ambient_degree(&self) -> usize {
        self.exponents.iter().map(|&q| q as usize).product()
    }

    pub fn to_ambient(&self, a: &TowerElement) -> RatFunc {
        let f = &self.ambient;
        let mut acc = f.zero();
        for (c, b) in a.coords().iter().zip(&self.images) {
            if !c.is_zero() {
                let c = lift_scalar(&self.exponents, f.p(), c);
                acc = f.add(&acc, &f.mul(&c, b));
            }
        }
        acc
    }

    /// The element of `L` with image `a`, if `a` lies in `L`.
    pub fn from_ambient(&self, a: &RatFunc) -> Option<TowerElement> {
        let k = self.tower.base();
        let v = decompose(&self.ambient, k, &self.exponents, a);
        let x = exlinalg::solve(k, &self.coords, &v).ok()??;
        Some(self.tower.from_coords(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::subfield::minimal_polynomial_over_base;

    #[test]
    fn weisfeld_example() {
        let a = from_ambient(2, &["x", "y", "z"], &["x^2", "y^2", "z^4"], &[("a", "z"), ("b", "x*z + y")]).unwrap();
        let t = &a.tower;
        assert_eq!(a.ambient_degree(), 16);
        assert_eq!(t.degree(), 8);
        assert_eq!(t.steps()[0].degree(), 4);
        assert_eq!(t.steps()[1].degree(), 2);
        let k = t.base();
        assert_eq!(k.vars(), ["x2", "y2", "z4"]);
        let f = minimal_polynomial_over_base(t, &t.gen(0));
        assert_eq!(f.render("x", |c| k.render(c), k), "x^4 + z4");
        for (i, text) in ["z", "x*z + y"].iter().enumerate() {
            let img = a.to_ambient(&t.gen(i));
            assert_eq!(img, a.ambient.parse(text).unwrap());
            assert_eq!(a.from_ambient(&img).unwrap(), t.gen(i));
        }
        assert!(a.from_ambient(&a.ambient.parse("x").unwrap()).is_none());
    }

    #[test]
    fn square_root_of_t() {
        let a = from_ambient(2, &["t"], &["t^2"], &[("u", "t")]).unwrap();
        let t = &a.tower;
        assert_eq!(t.degree(), 2);
        assert_eq!(t.render_poly(&t.step_minpoly(0), "x"), "x^2 + t2");
        let e = t.parse_element("u/t2 + 1").unwrap();
        assert_eq!(a.from_ambient(&a.to_ambient(&e)).unwrap(), e);
        assert_eq!(a.to_ambient(&e), a.ambient.parse("1/t + 1").unwrap());
    }

    #[test]
    fn trivial_and_rejected_inputs() {
        let a = from_ambient(3, &["x", "y"], &["x", "y"], &[("g", "x + y")]).unwrap();
        assert_eq!(a.tower.degree(), 1);
        assert!(matches!(
            from_ambient(2, &["x", "y"], &["x^2"], &[]),
            Err(AmbientError::NotFinite(v)) if v == "y"
        ));
        assert!(matches!(
            from_ambient(2, &["x"], &["x^2 + x"], &[]),
            Err(AmbientError::UnsupportedAmbient(_))
        ));
        assert!(matches!(from_ambient(2, &["x"], &["x^3"], &[]), Err(AmbientError::UnsupportedAmbient(_))));
    }
}
