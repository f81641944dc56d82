//! Reduced rational functions `num / den` over `F_p`.

use super::fp;
use super::multipoly::MultiPoly;
use crate::field::ArithError;

/// A fraction in lowest terms whose denominator has leading coefficient 1.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc { num: MultiPoly::zero(nvars), den: MultiPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RatFunc { num: MultiPoly::one(nvars), den: MultiPoly::one(nvars) }
    }

    pub fn constant(c: u32, nvars: usize, p: u32) -> Self {
        RatFunc { num: MultiPoly::constant(c, nvars, p), den: MultiPoly::one(nvars) }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let nvars = num.nvars();
        RatFunc { num, den: MultiPoly::one(nvars) }
    }

    /// The unique reduced, denominator-monic fraction equal to `num / den`.
    pub fn normalize(num: MultiPoly, den: MultiPoly, p: u32) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let nvars = num.nvars().max(den.nvars());
        if num.is_zero() {
            return Ok(Self::zero(nvars));
        }
        let g = num.gcd(&den, p);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g, p).expect("gcd divides"), den.div_exact(&g, p).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc != 1 {
            let inv = fp::inv(lc, p);
            num = num.scale(inv, p);
            den = den.scale(inv, p);
        }
        Ok(RatFunc { num, den })
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(c)` when the value is the constant `c in F_p`.
    pub fn as_constant(&self) -> Option<u32> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.constant_coeff())
        } else {
            None
        }
    }

    pub fn neg(&self, p: u32) -> Self {
        RatFunc { num: self.num.neg(p), den: self.den.clone() }
    }

    pub fn scale(&self, c: u32, p: u32) -> Self {
        if c % p == 0 {
            return Self::zero(self.nvars());
        }
        RatFunc { num: self.num.scale(c, p), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        self.add_signed(other, p, false)
    }

    pub fn sub(&self, other: &Self, p: u32) -> Self {
        self.add_signed(other, p, true)
    }

    fn add_signed(&self, other: &Self, p: u32, negate: bool) -> Self {
        let on = if negate { other.num.neg(p) } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return RatFunc { num: on, den: other.den.clone() };
        }
        if self.den == other.den {
            let num = self.num.add(&on, p);
            if self.den.is_one() {
                return RatFunc { num, den: self.den.clone() };
            }
            return Self::normalize(num, self.den.clone(), p).expect("nonzero denominator");
        }
        if self.den.is_one() {
            // a + c/d is already reduced
            return RatFunc { num: self.num.mul(&other.den, p).add(&on, p), den: other.den.clone() };
        }
        if other.den.is_one() {
            return RatFunc { num: self.num.add(&on.mul(&self.den, p), p), den: self.den.clone() };
        }
        let g = self.den.gcd(&other.den, p);
        if g.is_one() {
            let num = self.num.mul(&other.den, p).add(&on.mul(&self.den, p), p);
            let den = self.den.mul(&other.den, p);
            return RatFunc { num, den };
        }
        let b1 = self.den.div_exact(&g, p).expect("gcd divides");
        let d1 = other.den.div_exact(&g, p).expect("gcd divides");
        let num = self.num.mul(&d1, p).add(&on.mul(&b1, p), p);
        let den = b1.mul(&other.den, p);
        Self::normalize(num, den, p).expect("nonzero denominator")
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c, p);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c, p);
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num, p), den: self.den.clone() };
        }
        let g1 = self.num.gcd(&other.den, p);
        let g2 = other.num.gcd(&self.den, p);
        let a = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1, p).unwrap() };
        let d = if g1.is_one() { other.den.clone() } else { other.den.div_exact(&g1, p).unwrap() };
        let c = if g2.is_one() { other.num.clone() } else { other.num.div_exact(&g2, p).unwrap() };
        let b = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2, p).unwrap() };
        let num = a.mul(&c, p);
        let den = b.mul(&d, p);
        let lc = den.leading_coeff();
        if lc == 1 {
            RatFunc { num, den }
        } else {
            let inv = fp::inv(lc, p);
            RatFunc { num: num.scale(inv, p), den: den.scale(inv, p) }
        }
    }

    pub fn inv(&self, p: u32) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let lc = self.num.leading_coeff();
        let inv = fp::inv(lc, p);
        Ok(RatFunc { num: self.den.scale(inv, p), den: self.num.scale(inv, p) })
    }

    pub fn div(&self, other: &Self, p: u32) -> Result<Self, ArithError> {
        Ok(self.mul(&other.inv(p)?, p))
    }

    /// `self^(p^e)`.
    pub fn frobenius(&self, e: u32, p: u32) -> Self {
        RatFunc { num: self.num.frobenius(e, p), den: self.den.frobenius(e, p) }
    }

    /// The unique `b` with `b^(p^e) = self`, when it exists in `F_p(t..)`.
    pub fn pe_root(&self, e: u32, p: u32) -> Option<Self> {
        Some(RatFunc { num: self.num.pe_root(e, p)?, den: self.den.pe_root(e, p)? })
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.render(names);
        }
        format!("({})/({})", self.num.render(names), self.den.render(names))
    }
}
