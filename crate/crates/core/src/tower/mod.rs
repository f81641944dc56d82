//! Finite extensions `L/K` presented as towers of simple quotient steps
//! `K = L_0 ⊂ L_1 = L_0[g_1]/(f_1) ⊂ ... ⊂ L_s = L`.
//!
//! An element is stored by its coordinates on the monomial basis
//! `g_1^a_1 ... g_s^a_s` (`a_i < deg f_i`), indexed by
//! `a_1 + d_1 a_2 + d_1 d_2 a_3 + ...`, so the first generator varies fastest
//! and every intermediate level `L_i` is the prefix of length `d_1 ... d_i`.
//!
//! Irreducibility of the `f_i` is never checked up front.  Inversion runs the
//! extended Euclidean algorithm against each modulus and reports a proper
//! factor as [`ArithError::ReducibleModulus`] when it meets one.

pub mod ambient;
pub mod finite;
pub mod gf;
pub mod relative;
pub mod roots;
pub mod series;
pub mod subfield;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub use relative::{Extension, RelativePresentation, SubfieldPresentation};
pub use subfield::Subfield;

use crate::basefield::expr::{self, Expr, ExprError};
use crate::basefield::{BaseField, RatFunc, UniPoly};
use crate::exlinalg::{LinalgError, Matrix};
use crate::field::{ArithError, Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("generator name {0} is already in use")]
    DuplicateName(String),
    #[error("invalid generator name {0}")]
    InvalidName(String),
    #[error("minimal polynomial must be monic of degree at least 1: {0}")]
    BadMinpoly(String),
    #[error("subspace is not closed under multiplication")]
    NotClosed,
    #[error("element belongs to a different tower")]
    ForeignElement,
    #[error("{0}")]
    Unsupported(String),
}

/// One quotient step `L_{i+1} = L_i[g]/(f)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Step {
    name: String,
    degree: usize,
    /// Coefficients `f_0 .. f_d` as coordinate vectors of level `i`; `f_d = 1`.
    minpoly: Vec<Vec<RatFunc>>,
}

impl Step {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionTower {
    id: u64,
    base: BaseField,
    steps: Vec<Step>,
    sizes: Vec<usize>,
}

/// An element of a tower, in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TowerElement {
    tower: u64,
    coords: Vec<RatFunc>,
}

impl TowerElement {
    pub fn tower_id(&self) -> u64 {
        self.tower
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<RatFunc> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The value when the element lies in `K`.
    pub fn as_base(&self) -> Option<&RatFunc> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }
}

fn zero_slice(a: &[RatFunc]) -> bool {
    a.iter().all(|c| c.is_zero())
}

fn scalar_slice(a: &[RatFunc]) -> bool {
    a[1..].iter().all(|c| c.is_zero())
}

impl ExtensionTower {
    /// The trivial tower `L = K`.
    pub fn new(base: BaseField) -> Self {
        let mut t = ExtensionTower { id: 0, base, steps: Vec::new(), sizes: vec![1] };
        t.id = t.content_hash();
        t
    }

    fn content_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.base.hash(&mut h);
        self.steps.hash(&mut h);
        h.finish()
    }

    /// Adjoin a root `name` of the monic polynomial `f` over the current top field.
    pub fn extend(&self, name: &str, f: &UniPoly<TowerElement>) -> Result<Self, TowerError> {
        if !expr::is_identifier(name) {
            return Err(TowerError::InvalidName(name.into()));
        }
        if self.base.var_index(name).is_some() || self.gen_index(name).is_some() {
            return Err(TowerError::DuplicateName(name.into()));
        }
        let d = f.degree().unwrap_or(0);
        if d == 0 || !self.is_one(f.lc().unwrap()) {
            return Err(TowerError::BadMinpoly(self.render_poly(f, "x")));
        }
        for c in f.coeffs() {
            self.check(c)?;
        }
        let minpoly = f.coeffs().iter().map(|c| c.coords.clone()).collect();
        let mut steps = self.steps.clone();
        steps.push(Step { name: name.into(), degree: d, minpoly });
        let mut sizes = self.sizes.clone();
        sizes.push(self.degree() * d);
        let mut t = ExtensionTower { id: 0, base: self.base.clone(), steps, sizes };
        t.id = t.content_hash();
        Ok(t)
    }

    /// Adjoin `name` subject to the polynomial `text` written in `name`,
    /// with coefficients built from the base variables and earlier generators.
    pub fn extend_parsed(&self, name: &str, text: &str) -> Result<Self, TowerError> {
        let e = expr::parse(text)?;
        let f = self.eval_poly(&e, name)?;
        let f = match f.lc() {
            Some(lc) if !self.is_one(lc) => f.monic(self)?,
            _ => f,
        };
        self.extend(name, &f)
    }

    /// The steps of `other` (over the same base) adjoined on top of `self`.
    ///
    /// The result is `self (x)_K other` presented as a tower; it is a field
    /// only when the adjoined minimal polynomials stay irreducible, which
    /// later inversions check.
    pub fn tensor(&self, other: &ExtensionTower) -> Result<Self, TowerError> {
        if self.base != other.base {
            return Err(TowerError::Unsupported("tensor factors over different base fields".into()));
        }
        let n1 = self.degree();
        let mut t = self.clone();
        for step in &other.steps {
            let coeffs: Vec<TowerElement> = step
                .minpoly
                .iter()
                .map(|c| {
                    let mut coords = vec![self.base.zero(); t.degree()];
                    for (j, x) in c.iter().enumerate() {
                        coords[n1 * j] = x.clone();
                    }
                    t.from_coords(coords)
                })
                .collect();
            t = t.extend(&step.name, &UniPoly::new(coeffs, &t))?;
        }
        Ok(t)
    }

    /// The tower of the first `i` steps.
    pub fn prefix(&self, i: usize) -> Self {
        let mut t = ExtensionTower {
            id: 0,
            base: self.base.clone(),
            steps: self.steps[..i].to_vec(),
            sizes: self.sizes[..=i].to_vec(),
        };
        t.id = t.content_hash();
        t
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn nsteps(&self) -> usize {
        self.steps.len()
    }

    /// `n = [L:K]`.
    pub fn degree(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// `[L_i : K]`.
    pub fn level_dim(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn gen_names(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.name.clone()).collect()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.name == name)
    }

    pub fn check(&self, a: &TowerElement) -> Result<(), TowerError> {
        if a.tower != self.id || a.coords.len() != self.degree() {
            return Err(TowerError::ForeignElement);
        }
        Ok(())
    }

    pub fn from_coords(&self, coords: Vec<RatFunc>) -> TowerElement {
        assert_eq!(coords.len(), self.degree(), "coordinate vector length");
        TowerElement { tower: self.id, coords }
    }

    pub fn from_base(&self, c: RatFunc) -> TowerElement {
        let mut coords = vec![self.base.zero(); self.degree()];
        coords[0] = c;
        self.from_coords(coords)
    }

    /// Element of level `i` (length `level_dim(i)`) padded into `L`.
    pub fn from_level(&self, coords: &[RatFunc]) -> TowerElement {
        let mut v = coords.to_vec();
        v.resize(self.degree(), self.base.zero());
        self.from_coords(v)
    }

    /// The `j`-th monomial basis element.
    pub fn basis_element(&self, j: usize) -> TowerElement {
        let mut coords = vec![self.base.zero(); self.degree()];
        coords[j] = self.base.one();
        self.from_coords(coords)
    }

    /// Exponent vector of the `j`-th basis monomial.
    pub fn basis_exponents(&self, mut j: usize) -> Vec<usize> {
        self.steps
            .iter()
            .map(|s| {
                let a = j % s.degree;
                j /= s.degree;
                a
            })
            .collect()
    }

    /// The generator of step `i`.
    pub fn gen(&self, i: usize) -> TowerElement {
        if self.steps[i].degree == 1 {
            // g = -f_0, which lies in the previous level
            return self.from_level(&self.steps[i].minpoly[0].iter().map(|c| self.base.neg(c)).collect::<Vec<_>>());
        }
        self.basis_element(self.sizes[i])
    }

    pub fn gens(&self) -> Vec<TowerElement> {
        (0..self.nsteps()).map(|i| self.gen(i)).collect()
    }

    /// Minimal polynomial of step `i` with coefficients embedded in `L`.
    pub fn step_minpoly(&self, i: usize) -> UniPoly<TowerElement> {
        UniPoly::new(self.steps[i].minpoly.iter().map(|c| self.from_level(c)).collect(), self)
    }

    pub fn parse_element(&self, text: &str) -> Result<TowerElement, TowerError> {
        let e = expr::parse(text)?;
        Ok(self.eval(&e)?)
    }

    pub fn eval(&self, e: &Expr) -> Result<TowerElement, ExprError> {
        expr::eval_with(e, self, &|name| self.lookup(name))
    }

    fn lookup(&self, name: &str) -> Option<TowerElement> {
        if let Some(i) = self.base.var_index(name) {
            return Some(self.from_base(self.base.var(i)));
        }
        self.gen_index(name).map(|i| self.gen(i))
    }

    /// Evaluate `e` as a polynomial in the fresh variable `var`.
    pub fn eval_poly(&self, e: &Expr, var: &str) -> Result<UniPoly<TowerElement>, ExprError> {
        let c = |x: TowerElement| UniPoly::constant(x, self);
        Ok(match e {
            Expr::Int(v) => c(self.from_int((*v % self.p() as u64) as i64)),
            Expr::Var(s) if s == var => UniPoly::x(self),
            Expr::Var(s) => c(self.lookup(s).ok_or_else(|| ExprError::UnknownIdentifier(s.clone()))?),
            Expr::Neg(a) => self.eval_poly(a, var)?.neg(self),
            Expr::Add(a, b) => self.eval_poly(a, var)?.add(&self.eval_poly(b, var)?, self),
            Expr::Sub(a, b) => self.eval_poly(a, var)?.sub(&self.eval_poly(b, var)?, self),
            Expr::Mul(a, b) => self.eval_poly(a, var)?.mul(&self.eval_poly(b, var)?, self),
            Expr::Div(a, b) => {
                let den = self.eval_poly(b, var)?;
                match den.degree() {
                    Some(0) => self.eval_poly(a, var)?.scale(&self.inv(&den.coeffs()[0])?, self),
                    None => return Err(ArithError::DivisionByZero.into()),
                    _ => return Err(ExprError::NotPolynomial(var.into())),
                }
            }
            Expr::Pow(a, k) => {
                let base = self.eval_poly(a, var)?;
                let mut acc = UniPoly::constant(self.one(), self);
                for _ in 0..*k {
                    acc = acc.mul(&base, self);
                }
                acc
            }
        })
    }

    // ---- level arithmetic ----

    fn level_mul(&self, i: usize, a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
        let k = &self.base;
        if i == 0 {
            return vec![k.mul(&a[0], &b[0])];
        }
        if scalar_slice(a) {
            return b.iter().map(|x| k.mul(x, &a[0])).collect();
        }
        if scalar_slice(b) {
            return a.iter().map(|x| k.mul(x, &b[0])).collect();
        }
        let lower = self.sizes[i - 1];
        let d = self.steps[i - 1].degree;
        let mut c: Vec<Vec<RatFunc>> = vec![vec![k.zero(); lower]; 2 * d - 1];
        let ac: Vec<&[RatFunc]> = a.chunks(lower).collect();
        let bc: Vec<&[RatFunc]> = b.chunks(lower).collect();
        let anz: Vec<bool> = ac.iter().map(|x| !zero_slice(x)).collect();
        let bnz: Vec<bool> = bc.iter().map(|x| !zero_slice(x)).collect();
        for (al, x) in ac.iter().enumerate() {
            if !anz[al] {
                continue;
            }
            for (be, y) in bc.iter().enumerate() {
                if !bnz[be] {
                    continue;
                }
                let prod = self.level_mul(i - 1, x, y);
                add_into(k, &mut c[al + be], &prod);
            }
        }
        let f = &self.steps[i - 1].minpoly;
        for g in (d..2 * d - 1).rev() {
            if zero_slice(&c[g]) {
                continue;
            }
            let top = std::mem::replace(&mut c[g], vec![k.zero(); lower]);
            for (kk, fk) in f.iter().enumerate().take(d) {
                if zero_slice(fk) {
                    continue;
                }
                let prod = self.level_mul(i - 1, &top, fk);
                sub_into(k, &mut c[g - d + kk], &prod);
            }
        }
        c.truncate(d);
        c.concat()
    }

    fn level_inv(&self, i: usize, a: &[RatFunc]) -> Result<Vec<RatFunc>, ArithError> {
        let k = &self.base;
        if zero_slice(a) {
            return Err(ArithError::DivisionByZero);
        }
        if scalar_slice(a) {
            let mut v = vec![k.zero(); a.len()];
            v[0] = k.inv(&a[0])?;
            return Ok(v);
        }
        let lv = Level { t: self, i: i - 1 };
        let lower = self.sizes[i - 1];
        let d = self.steps[i - 1].degree;
        let ap = UniPoly::new(a.chunks(lower).map(|c| c.to_vec()).collect(), &lv);
        let fp = UniPoly::new(self.steps[i - 1].minpoly.clone(), &lv);
        let (g, s, _) = ap.ext_gcd(&fp, &lv)?;
        if g.degree() != Some(0) {
            let factor = g.render(&self.steps[i - 1].name, |c| self.render_level(c), &lv);
            return Err(ArithError::ReducibleModulus { step: i - 1, factor });
        }
        let mut out = s.into_coeffs();
        out.resize(d, vec![k.zero(); lower]);
        Ok(out.concat())
    }

    fn render_level(&self, c: &[RatFunc]) -> String {
        let mut v = c.to_vec();
        v.resize(self.degree(), self.base.zero());
        self.render(&self.from_coords(v))
    }

    /// Human-readable form, e.g. `t*u + (t+1)*s`.
    pub fn render(&self, a: &TowerElement) -> String {
        let mut parts = Vec::new();
        for (j, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = self
                .basis_exponents(j)
                .iter()
                .zip(&self.steps)
                .filter(|(e, _)| **e > 0)
                .map(|(e, s)| if *e == 1 { s.name.clone() } else { format!("{}^{}", s.name, e) })
                .collect();
            let cs = self.base.render(c);
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono.join("*")
            } else if cs.chars().any(|ch| "+-/ ".contains(ch)) {
                format!("({cs})*{}", mono.join("*"))
            } else {
                format!("{cs}*{}", mono.join("*"))
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn render_poly(&self, f: &UniPoly<TowerElement>, var: &str) -> String {
        f.render(var, |c| self.render(c), self)
    }

    /// Matrix of multiplication by `a`; column `j` holds the coordinates of `a * b_j`.
    pub fn regular_rep(&self, a: &TowerElement) -> Matrix<RatFunc> {
        let n = self.degree();
        let cols: Vec<Vec<RatFunc>> = (0..n).map(|j| self.mul_basis(a, j).coords).collect();
        Matrix::from_columns(&cols, n)
    }

    /// `a * b_j`.
    pub fn mul_basis(&self, a: &TowerElement, j: usize) -> TowerElement {
        if j == 0 {
            return a.clone();
        }
        self.mul(a, &self.basis_element(j))
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: &TowerElement, e: u32) -> TowerElement {
        let mut x = a.clone();
        for _ in 0..e {
            x = self.pow(&x, self.p() as u64);
        }
        x
    }

    /// K-linear combination `sum_j c_j b_j` of basis elements given as coordinates.
    pub fn combine(&self, coeffs: &[RatFunc], elems: &[TowerElement]) -> TowerElement {
        let k = &self.base;
        let mut out = vec![k.zero(); self.degree()];
        for (c, e) in coeffs.iter().zip(elems) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&e.coords) {
                if !x.is_zero() {
                    let prod = k.mul(c, x);
                    k.add_assign(o, &prod);
                }
            }
        }
        self.from_coords(out)
    }

    /// `c * a` for `c in K`.
    pub fn scale(&self, a: &TowerElement, c: &RatFunc) -> TowerElement {
        TowerElement { tower: self.id, coords: a.coords.iter().map(|x| self.base.mul(x, c)).collect() }
    }
}

fn add_into(k: &BaseField, acc: &mut [RatFunc], b: &[RatFunc]) {
    for (a, x) in acc.iter_mut().zip(b) {
        k.add_assign(a, x);
    }
}

fn sub_into(k: &BaseField, acc: &mut [RatFunc], b: &[RatFunc]) {
    for (a, x) in acc.iter_mut().zip(b) {
        if !x.is_zero() {
            *a = k.sub(a, x);
        }
    }
}

/// Arithmetic context of an intermediate level `L_i` on coordinate vectors.
pub(crate) struct Level<'a> {
    t: &'a ExtensionTower,
    i: usize,
}

impl Ring for Level<'_> {
    type Elem = Vec<RatFunc>;

    fn zero(&self) -> Vec<RatFunc> {
        vec![self.t.base.zero(); self.t.sizes[self.i]]
    }

    fn one(&self) -> Vec<RatFunc> {
        let mut v = self.zero();
        v[0] = self.t.base.one();
        v
    }

    fn is_zero(&self, a: &Vec<RatFunc>) -> bool {
        zero_slice(a)
    }

    fn is_one(&self, a: &Vec<RatFunc>) -> bool {
        a[0].is_one() && scalar_slice(a)
    }

    fn add(&self, a: &Vec<RatFunc>, b: &Vec<RatFunc>) -> Vec<RatFunc> {
        a.iter().zip(b).map(|(x, y)| self.t.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<RatFunc>, b: &Vec<RatFunc>) -> Vec<RatFunc> {
        a.iter().zip(b).map(|(x, y)| self.t.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<RatFunc>) -> Vec<RatFunc> {
        a.iter().map(|x| self.t.base.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<RatFunc>, b: &Vec<RatFunc>) -> Vec<RatFunc> {
        self.t.level_mul(self.i, a, b)
    }

    fn from_int(&self, n: i64) -> Vec<RatFunc> {
        let mut v = self.zero();
        v[0] = self.t.base.constant(n);
        v
    }

    fn characteristic(&self) -> u32 {
        self.t.p()
    }
}

impl Field for Level<'_> {
    fn inv(&self, a: &Vec<RatFunc>) -> Result<Vec<RatFunc>, ArithError> {
        self.t.level_inv(self.i, a)
    }
}

impl Ring for ExtensionTower {
    type Elem = TowerElement;

    fn zero(&self) -> TowerElement {
        self.from_coords(vec![self.base.zero(); self.degree()])
    }

    fn one(&self) -> TowerElement {
        self.from_base(self.base.one())
    }

    fn is_zero(&self, a: &TowerElement) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &TowerElement) -> bool {
        a.coords[0].is_one() && scalar_slice(&a.coords)
    }

    fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.tower, b.tower);
        let k = &self.base;
        TowerElement { tower: self.id, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| k.add(x, y)).collect() }
    }

    fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.tower, b.tower);
        let k = &self.base;
        TowerElement { tower: self.id, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| k.sub(x, y)).collect() }
    }

    fn neg(&self, a: &TowerElement) -> TowerElement {
        TowerElement { tower: self.id, coords: a.coords.iter().map(|x| self.base.neg(x)).collect() }
    }

    fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.tower, b.tower);
        TowerElement { tower: self.id, coords: self.level_mul(self.nsteps(), &a.coords, &b.coords) }
    }

    fn from_int(&self, n: i64) -> TowerElement {
        self.from_base(self.base.constant(n))
    }

    fn characteristic(&self) -> u32 {
        self.p()
    }
}

impl Field for ExtensionTower {
    fn inv(&self, a: &TowerElement) -> Result<TowerElement, ArithError> {
        Ok(TowerElement { tower: self.id, coords: self.level_inv(self.nsteps(), &a.coords)? })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn f2t() -> BaseField {
        BaseField::new(2, &["t"]).unwrap()
    }

    /// `F_2(t)(u)`, `u^2 = t`.
    pub fn ex1() -> ExtensionTower {
        ExtensionTower::new(f2t()).extend_parsed("u", "u^2 + t").unwrap()
    }

    /// `F_2(t)(s)`, `s^2 + s = t`.
    pub fn ex2() -> ExtensionTower {
        ExtensionTower::new(f2t()).extend_parsed("s", "s^2 + s + t").unwrap()
    }

    pub fn ex3() -> ExtensionTower {
        ex1().extend_parsed("s", "s^2 + s + t").unwrap()
    }

    pub fn ex0() -> ExtensionTower {
        ExtensionTower::new(BaseField::new(2, &[]).unwrap()).extend_parsed("a", "a^4 + a + 1").unwrap()
    }

    pub fn ex4() -> ExtensionTower {
        ExtensionTower::new(f2t()).extend_parsed("y", "y^3 + y + t").unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn tensor_concatenates_steps() {
        assert_eq!(ex1().tensor(&ex2()).unwrap(), ex3());
        let trivial = ExtensionTower::new(f2t());
        assert_eq!(ex4().tensor(&trivial).unwrap(), ex4());
        assert!(matches!(ex1().tensor(&ex1()), Err(TowerError::DuplicateName(_))));
        assert!(ex1().tensor(&ex0()).is_err());
    }

    #[test]
    fn extend_multiplies_degrees() {
        assert_eq!(ex1().degree(), 2);
        assert_eq!(ex3().degree(), 4);
        assert_eq!(ex0().degree(), 4);
        let t = ex3();
        assert_eq!(t.basis_exponents(3), vec![1, 1]);
        assert_eq!(t.render(&t.basis_element(3)), "u*s");
    }

    #[test]
    fn inverses_multiply_back() {
        let t = ex1();
        let u = t.parse_element("u").unwrap();
        let ui = t.inv(&u).unwrap();
        assert_eq!(ui, t.parse_element("u/t").unwrap());
        assert!(t.is_one(&t.mul(&u, &ui)));
        assert_eq!(t.inv(&t.one()).unwrap(), t.one());
        let t3 = ex3();
        let s = t3.parse_element("s").unwrap();
        let si = t3.inv(&s).unwrap();
        assert_eq!(si, t3.parse_element("(s+1)/t").unwrap());
        let x = t3.parse_element("u*s + t*u + s + 1").unwrap();
        assert!(t3.is_one(&t3.mul(&x, &t3.inv(&x).unwrap())));
        assert_eq!(t3.inv(&t3.zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn reducible_modulus_is_reported() {
        let t = ExtensionTower::new(f2t()).extend_parsed("v", "v^2 + t^2").unwrap();
        let v = t.parse_element("v + t").unwrap();
        match t.inv(&v) {
            Err(ArithError::ReducibleModulus { step: 0, .. }) => {}
            other => panic!("expected reducible modulus, got {other:?}"),
        }
    }

    #[test]
    fn regular_rep_of_u() {
        let t = ex1();
        let k = t.base().clone();
        let m = t.regular_rep(&t.parse_element("u").unwrap());
        let want = Matrix::from_rows(vec![vec![k.zero(), k.parse("t").unwrap()], vec![k.one(), k.zero()]], 2);
        assert_eq!(m, want);
        assert_eq!(t.regular_rep(&t.one()), Matrix::identity(&k, 2));
    }

    #[test]
    fn regular_rep_is_multiplicative() {
        let t = ex3();
        let k = t.base().clone();
        let a = t.parse_element("u + t*s").unwrap();
        let b = t.parse_element("u*s + 1/t").unwrap();
        let lhs = t.regular_rep(&t.mul(&a, &b));
        let rhs = t.regular_rep(&a).mul(&k, &t.regular_rep(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_field_frobenius_orbit() {
        let t = ex0();
        let a = t.gen(0);
        let a16 = t.pow(&a, 16);
        assert_eq!(a16, a);
        assert_ne!(t.pow(&a, 4), a);
    }
}
