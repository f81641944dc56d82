//! Dense univariate polynomials over an arbitrary ring context.

use std::fmt::Debug;

use crate::field::{ArithError, Field, Ring};

/// `coeffs[i]` is the coefficient of `x^i`; the leading coefficient is
/// nonzero unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + Debug> UniPoly<E> {
    pub fn new<R: Ring<Elem = E>>(mut coeffs: Vec<E>, r: &R) -> Self {
        while coeffs.last().is_some_and(|c| r.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant<R: Ring<Elem = E>>(c: E, r: &R) -> Self {
        Self::new(vec![c], r)
    }

    /// `x`.
    pub fn x<R: Ring<Elem = E>>(r: &R) -> Self {
        UniPoly { coeffs: vec![r.zero(), r.one()] }
    }

    /// `x - a`.
    pub fn linear<R: Ring<Elem = E>>(a: &E, r: &R) -> Self {
        UniPoly { coeffs: vec![r.neg(a), r.one()] }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, i: usize, r: &R) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| r.zero())
    }

    pub fn map<F2: Ring>(&self, r2: &F2, f: impl Fn(&E) -> F2::Elem) -> UniPoly<F2::Elem> {
        UniPoly::new(self.coeffs.iter().map(f).collect(), r2)
    }

    pub fn add<R: Ring<Elem = E>>(&self, o: &Self, r: &R) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| r.add(&self.coeff(i, r), &o.coeff(i, r))).collect();
        Self::new(v, r)
    }

    pub fn sub<R: Ring<Elem = E>>(&self, o: &Self, r: &R) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| r.sub(&self.coeff(i, r), &o.coeff(i, r))).collect();
        Self::new(v, r)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| r.neg(c)).collect() }
    }

    pub fn scale<R: Ring<Elem = E>>(&self, c: &E, r: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| r.mul(a, c)).collect(), r)
    }

    pub fn mul<R: Ring<Elem = E>>(&self, o: &Self, r: &R) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![r.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                let prod = r.mul(a, b);
                r.add_assign(&mut v[i + j], &prod);
            }
        }
        Self::new(v, r)
    }

    /// Horner evaluation at `x`.
    pub fn eval<R: Ring<Elem = E>>(&self, x: &E, r: &R) -> E {
        let mut acc = r.zero();
        for c in self.coeffs.iter().rev() {
            acc = r.add(&r.mul(&acc, x), c);
        }
        acc
    }

    /// Formal derivative; `i * c_i` is reduced mod the characteristic.
    pub fn derivative<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| r.mul(&r.from_int(i as i64), c))
            .collect();
        Self::new(v, r)
    }

    /// `f(x^k)`.
    pub fn inflate<R: Ring<Elem = E>>(&self, k: usize, r: &R) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![r.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        UniPoly { coeffs: v }
    }

    /// `g` with `g(x^k) = f(x)`, when only exponents divisible by `k` occur.
    pub fn deflate<R: Ring<Elem = E>>(&self, k: usize, r: &R) -> Option<Self> {
        if self.coeffs.iter().enumerate().any(|(i, c)| i % k != 0 && !r.is_zero(c)) {
            return None;
        }
        Some(UniPoly { coeffs: self.coeffs.iter().step_by(k).cloned().collect() })
    }

    pub fn render(&self, var: &str, coeff: impl Fn(&E) -> String, r: &impl Ring<Elem = E>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if r.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = coeff(c);
            parts.push(match (i, r.is_one(c)) {
                (0, _) => cs,
                (_, true) => mono,
                _ if cs.chars().any(|ch| "+-/ ".contains(ch)) => format!("({cs})*{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl<E: Clone + PartialEq + Debug> UniPoly<E> {
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, ArithError> {
        match self.lc() {
            None => Ok(Self::zero()),
            Some(lc) if f.is_one(lc) => Ok(self.clone()),
            Some(lc) => Ok(self.scale(&f.inv(lc)?, f)),
        }
    }

    pub fn divrem<F: Field<Elem = E>>(&self, d: &Self, f: &F) -> Result<(Self, Self), ArithError> {
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = f.inv(d.lc().unwrap())?;
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); self.coeffs.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dd], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                f.sub_mul_assign(&mut r[k + j], &c, dj);
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q, f), Self::new(r, f)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, d: &Self, f: &F) -> Result<Self, ArithError> {
        Ok(self.divrem(d, f)?.1)
    }

    /// Monic gcd by the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(&self, o: &Self, f: &F) -> Result<Self, ArithError> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f)?;
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn ext_gcd<F: Field<Elem = E>>(&self, o: &Self, f: &F) -> Result<(Self, Self, Self), ArithError> {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::constant(f.one(), f), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(f.one(), f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f)?;
            let s = s0.sub(&q.mul(&s1, f), f);
            let t = t0.sub(&q.mul(&t1, f), f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => Ok((r0, s0, t0)),
            Some(lc) => {
                let inv = f.inv(lc)?;
                Ok((r0.scale(&inv, f), s0.scale(&inv, f), t0.scale(&inv, f)))
            }
        }
    }

    /// `self^e mod m`.
    pub fn pow_mod<F: Field<Elem = E>>(&self, mut e: u64, m: &Self, f: &F) -> Result<Self, ArithError> {
        let mut base = self.rem(m, f)?;
        let mut acc = Self::constant(f.one(), f).rem(m, f)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f).rem(m, f)?;
            }
        }
        Ok(acc)
    }

    /// Separable presentation `f(x) = fsep(x^(p^n))` with `fsep' != 0`.
    ///
    /// Requires a non-constant polynomial; for irreducible input the
    /// result is the inseparability decomposition.
    pub fn separable_presentation<F: Field<Elem = E>>(&self, f: &F) -> (Self, u32) {
        assert!(self.degree().unwrap_or(0) >= 1, "separable presentation needs a non-constant polynomial");
        let p = f.characteristic() as usize;
        let mut g = self.clone();
        let mut n = 0;
        while g.derivative(f).is_zero() {
            g = g.deflate(p, f).expect("zero derivative means exponents divisible by p");
            n += 1;
        }
        (g, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::BaseField;

    fn poly(k: &BaseField, cs: &[&str]) -> UniPoly<crate::basefield::RatFunc> {
        UniPoly::new(cs.iter().map(|c| k.parse(c).unwrap()).collect(), k)
    }

    #[test]
    fn gcd_examples() {
        let k = BaseField::new(2, &["t"]).unwrap();
        let f = poly(&k, &["t", "0", "1"]);
        assert_eq!(f.gcd(&f, &k).unwrap(), f);
        let d = f.derivative(&k);
        assert!(d.is_zero());
        assert_eq!(f.gcd(&d, &k).unwrap(), f);
        let g = poly(&k, &["t", "1", "0", "1"]);
        assert_eq!(g.derivative(&k), poly(&k, &["1", "0", "1"]));
        assert_eq!(g.gcd(&g.derivative(&k), &k).unwrap(), poly(&k, &["1"]));
    }

    #[test]
    fn separable_presentation_examples() {
        let k = BaseField::new(2, &["t"]).unwrap();
        let f = poly(&k, &["t", "0", "1"]);
        assert_eq!(f.separable_presentation(&k), (poly(&k, &["t", "1"]), 1));
        let g = poly(&k, &["t", "1", "0", "1"]);
        assert_eq!(g.separable_presentation(&k), (g.clone(), 0));
        let h = poly(&k, &["t^2", "0", "0", "0", "1"]);
        assert_eq!(h.separable_presentation(&k), (poly(&k, &["t^2", "1"]), 2));
    }

    #[test]
    fn ext_gcd_bezout() {
        let k = BaseField::new(3, &["t"]).unwrap();
        let a = poly(&k, &["t", "1", "1"]);
        let b = poly(&k, &["1", "t"]);
        let (g, s, t) = a.ext_gcd(&b, &k).unwrap();
        assert_eq!(s.mul(&a, &k).add(&t.mul(&b, &k), &k), g);
    }
}
