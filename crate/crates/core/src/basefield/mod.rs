//! The base field `K = F_p(t_1, .., t_m)`.
//!
//! [`BaseField`] is the arithmetic context for [`RatFunc`] values; with no
//! variables it is the prime field `F_p` itself.

pub mod expr;
pub mod fp;
pub mod multipoly;
pub mod ratfunc;
pub mod unipoly;

use thiserror::Error;

pub use multipoly::{Monomial, MultiPoly, MAX_VARS};
pub use ratfunc::RatFunc;
pub use unipoly::UniPoly;

use crate::field::{ArithError, Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseFieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("invalid variable name {0}")]
    InvalidVariable(String),
    #[error("at most {MAX_VARS} variables are supported")]
    TooManyVariables,
}

/// Description and arithmetic context of `F_p(vars)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BaseField {
    p: u32,
    vars: Vec<String>,
}

impl BaseField {
    pub fn new(p: u32, vars: &[&str]) -> Result<Self, BaseFieldError> {
        Self::from_names(p, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(p: u32, vars: Vec<String>) -> Result<Self, BaseFieldError> {
        if !fp::is_prime(p as u64) || p >= 1 << 30 {
            return Err(BaseFieldError::NotPrime(p as u64));
        }
        if vars.len() > MAX_VARS {
            return Err(BaseFieldError::TooManyVariables);
        }
        for (i, v) in vars.iter().enumerate() {
            if !expr::is_identifier(v) {
                return Err(BaseFieldError::InvalidVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(BaseFieldError::DuplicateVariable(v.clone()));
            }
        }
        Ok(BaseField { p, vars })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The indeterminate `vars[i]` as an element.
    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::from_poly(MultiPoly::var(i, self.nvars()))
    }

    pub fn constant(&self, c: i64) -> RatFunc {
        RatFunc::constant(fp::from_i64(c, self.p), self.nvars(), self.p)
    }

    pub fn poly(&self, m: MultiPoly) -> RatFunc {
        RatFunc::from_poly(m)
    }

    /// Univariate polynomial in the first variable from dense `F_p` coefficients.
    pub fn dense_poly(&self, coeffs: &[i64]) -> RatFunc {
        let c: Vec<u32> = coeffs.iter().map(|&c| fp::from_i64(c, self.p)).collect();
        let mut c = c;
        multipoly::dense::trim(&mut c);
        RatFunc::from_poly(MultiPoly::from_dense(&c, self.nvars()))
    }

    pub fn ratfunc_normalize(&self, num: MultiPoly, den: MultiPoly) -> Result<RatFunc, ArithError> {
        RatFunc::normalize(num, den, self.p)
    }

    pub fn frobenius_power(&self, a: &RatFunc, e: u32) -> RatFunc {
        a.frobenius(e, self.p)
    }

    pub fn pe_root(&self, a: &RatFunc, e: u32) -> Option<RatFunc> {
        a.pe_root(e, self.p)
    }

    /// Random polynomial with every exponent at most `deg` per variable.
    pub fn random_poly<R: rand::Rng>(&self, rng: &mut R, deg: u32) -> MultiPoly {
        let n = self.nvars();
        let count = (deg as usize + 1).pow(n as u32);
        let terms = (0..count).filter_map(|mut idx| {
            let mut m = Monomial::one();
            for v in 0..n {
                m.0[v] = (idx % (deg as usize + 1)) as u32;
                idx /= deg as usize + 1;
            }
            let c = rng.gen_range(0..self.p);
            (c != 0).then_some((m, c))
        });
        MultiPoly::from_terms(n, terms.collect::<Vec<_>>(), self.p)
    }

    /// Random element with numerator and denominator of degree at most `deg`
    /// in each variable.
    pub fn random<R: rand::Rng>(&self, rng: &mut R, deg: u32) -> RatFunc {
        let num = self.random_poly(rng, deg);
        let mut den = self.random_poly(rng, deg);
        if den.is_zero() {
            den = MultiPoly::one(self.nvars());
        }
        RatFunc::normalize(num, den, self.p).expect("nonzero denominator")
    }

    pub fn render(&self, a: &RatFunc) -> String {
        a.render(&self.vars)
    }

    pub fn parse(&self, text: &str) -> Result<RatFunc, expr::ExprError> {
        let e = expr::parse(text)?;
        expr::eval_with(&e, self, &|name| self.var_index(name).map(|i| self.var(i)))
    }
}

impl Ring for BaseField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero(self.nvars())
    }

    fn one(&self) -> RatFunc {
        RatFunc::one(self.nvars())
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &RatFunc) -> bool {
        a.is_one()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b, self.p)
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b, self.p)
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg(self.p)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b, self.p)
    }

    fn from_int(&self, n: i64) -> RatFunc {
        self.constant(n)
    }

    fn characteristic(&self) -> u32 {
        self.p
    }
}

impl Field for BaseField {
    fn inv(&self, a: &RatFunc) -> Result<RatFunc, ArithError> {
        a.inv(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_examples() {
        let k = BaseField::new(2, &["t"]).unwrap();
        let a = k.parse("t+1").unwrap();
        assert_eq!(k.frobenius_power(&a, 1), k.parse("t^2+1").unwrap());
        assert_eq!(k.frobenius_power(&a, 0), a);
        let k3 = BaseField::new(3, &["t"]).unwrap();
        let b = k3.parse("1/t").unwrap();
        assert_eq!(k3.frobenius_power(&b, 1), k3.parse("1/t^3").unwrap());
    }

    #[test]
    fn pe_root_examples() {
        let k = BaseField::new(2, &["t"]).unwrap();
        assert_eq!(k.pe_root(&k.parse("t^2").unwrap(), 1), Some(k.parse("t").unwrap()));
        assert_eq!(k.pe_root(&k.parse("t").unwrap(), 1), None);
        let a = k.parse("t^4+t^2").unwrap();
        let r = k.pe_root(&a, 1).unwrap();
        assert_eq!(r, k.parse("t^2+t").unwrap());
        assert_eq!(k.mul(&r, &r), a);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert_eq!(BaseField::new(4, &[]), Err(BaseFieldError::NotPrime(4)));
        assert!(matches!(BaseField::new(2, &["t", "t"]), Err(BaseFieldError::DuplicateVariable(_))));
        assert!(matches!(BaseField::new(2, &["T"]), Err(BaseFieldError::InvalidVariable(_))));
    }
}
