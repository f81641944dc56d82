//! Sparse multivariate polynomials over `F_p` in graded-lexicographic order.
//!
//! Terms are stored in strictly decreasing grlex order with nonzero
//! coefficients, which makes the representation of a polynomial unique and
//! derived equality bit-exact.  Univariate products, divisions and gcds are
//! routed through dense coefficient vectors.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write;

use super::fp;

/// Maximum number of indeterminates of a base field.
pub const MAX_VARS: usize = 6;

/// An exponent vector. Unused slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut m = [0; MAX_VARS];
        m[i] = e;
        Monomial(m)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(m)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        let mut m = other.0;
        for (a, b) in m.iter_mut().zip(self.0.iter()) {
            *a -= b;
        }
        Monomial(m)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, u32)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(c: u32, nvars: usize, p: u32) -> Self {
        let c = c % p;
        let mut z = Self::zero(nvars);
        if c != 0 {
            z.terms.push((Monomial::one(), c));
        }
        z
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly { nvars, terms: vec![(Monomial::one(), 1)] }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars);
        MultiPoly { nvars, terms: vec![(Monomial::var(i, 1), 1)] }
    }

    pub fn monomial(m: Monomial, c: u32, nvars: usize) -> Self {
        let mut z = Self::zero(nvars);
        if c != 0 {
            z.terms.push((m, c));
        }
        z
    }

    /// Build from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, u32)>, p: u32) -> Self {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            let c = c % p;
            if c == 0 {
                continue;
            }
            let e = acc.entry(m).or_insert(0);
            *e = fp::add(*e, c, p);
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, u32>) -> Self {
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in decreasing grlex order.
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The constant term.
    pub fn constant_coeff(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn leading_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.first().map(|t| t.0.total_degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0 .0[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.0 .0[v] > 0)
    }

    pub fn neg(&self, p: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(m, c)| (m, fp::neg(c, p))).collect(),
        }
    }

    pub fn scale(&self, c: u32, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero(self.nvars);
        }
        if c == 1 {
            return self.clone();
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(m, a)| (m, fp::mul(a, c, p))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32, p: u32) -> Self {
        if c % p == 0 {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(t, a)| (t.mul(m), fp::mul(a, c, p))).collect(),
        }
    }

    /// Monic normalization: divide by the leading coefficient.
    pub fn monic(&self, p: u32) -> Self {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        self.scale(fp::inv(lc, p), p)
    }

    fn merge(&self, other: &Self, p: u32, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { fp::neg(b[j].1, p) } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        fp::sub(a[i].1, b[j].1, p)
                    } else {
                        fp::add(a[i].1, b[j].1, p)
                    };
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { nvars: self.nvars.max(other.nvars), terms: out }
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        self.merge(other, p, false)
    }

    pub fn sub(&self, other: &Self, p: u32) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, p, true)
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars.max(other.nvars));
        }
        if self.is_constant() {
            return other.scale(self.terms[0].1, p);
        }
        if other.is_constant() {
            return self.scale(other.terms[0].1, p);
        }
        if self.nvars <= 1 && other.nvars <= 1 {
            let a = self.to_dense();
            let b = other.to_dense();
            return Self::from_dense(&dense::mul(&a, &b, p), self.nvars.max(other.nvars));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return other.mul_monomial(&m, c, p);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_monomial(&m, c, p);
        }
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(&mb)).or_insert(0);
                *e = fp::add(*e, fp::mul(ca, cb, p), p);
            }
        }
        Self::from_map(self.nvars.max(other.nvars), acc)
    }

    pub fn pow(&self, e: u64, p: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self, p: u32) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if d.is_constant() {
            return Some(self.scale(fp::inv(d.terms[0].1, p), p));
        }
        if self.nvars <= 1 && d.nvars <= 1 {
            let (q, r) = dense::divrem(&self.to_dense(), &d.to_dense(), p);
            return if r.is_empty() { Some(Self::from_dense(&q, self.nvars)) } else { None };
        }
        let (dm, dc) = d.terms[0];
        let dinv = fp::inv(dc, p);
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some(&(rm, rc)) = r.terms.first() {
            if !dm.divides(&rm) {
                return None;
            }
            let m = dm.quotient_of(&rm);
            let c = fp::mul(rc, dinv, p);
            q.push((m, c));
            r = r.sub(&d.mul_monomial(&m, c, p), p);
        }
        Some(MultiPoly { nvars: self.nvars, terms: q })
    }

    /// `self(x)^(p^e)`: multiplies every exponent by `p^e`.
    pub fn frobenius(&self, e: u32, p: u32) -> Self {
        let q = (p as u64).pow(e) as u32;
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| {
                    let mut x = m.0;
                    for v in x.iter_mut() {
                        *v *= q;
                    }
                    (Monomial(x), c)
                })
                .collect(),
        }
    }

    /// Inverse of [`MultiPoly::frobenius`] when every exponent is divisible by `p^e`.
    pub fn pe_root(&self, e: u32, p: u32) -> Option<Self> {
        let q = (p as u64).pow(e) as u32;
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            let mut x = m.0;
            for v in x.iter_mut() {
                if *v % q != 0 {
                    return None;
                }
                *v /= q;
            }
            terms.push((Monomial(x), c));
        }
        Some(MultiPoly { nvars: self.nvars, terms })
    }

    /// Dense coefficients (index = degree) of a polynomial in at most one variable.
    pub fn to_dense(&self) -> Vec<u32> {
        debug_assert!(self.nvars <= 1);
        let deg = self.total_degree() as usize;
        let mut v = vec![0; if self.is_zero() { 0 } else { deg + 1 }];
        for &(m, c) in &self.terms {
            v[m.0[0] as usize] = c;
        }
        v
    }

    pub fn from_dense(coeffs: &[u32], nvars: usize) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (Monomial::var(0, i as u32), c))
            .collect();
        MultiPoly { nvars, terms }
    }

    /// Coefficients with respect to variable `v`: `self = sum_k out[k] * x_v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); deg + 1];
        for &(m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut x = m.0;
            x[v] = 0;
            buckets[k].push((Monomial(x), c));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MultiPoly { nvars: self.nvars, terms: t }
            })
            .collect()
    }

    pub fn from_coeffs_in(coeffs: &[MultiPoly], v: usize, nvars: usize, p: u32) -> Self {
        let mut acc = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul_monomial(&Monomial::var(v, k as u32), 1, p), p);
            }
        }
        acc
    }

    /// Monic greatest common divisor (the gcd of `0` and `0` is `0`).
    pub fn gcd(&self, other: &Self, p: u32) -> Self {
        let nvars = self.nvars.max(other.nvars);
        if self.is_zero() {
            return other.monic(p);
        }
        if other.is_zero() {
            return self.monic(p);
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(nvars);
        }
        if nvars <= 1 {
            return Self::from_dense(&dense::gcd(&self.to_dense(), &other.to_dense(), p), nvars);
        }
        if self.is_monomial() || other.is_monomial() {
            let (mono, poly) = if self.is_monomial() { (self, other) } else { (other, self) };
            let mut g = mono.terms[0].0;
            for &(m, _) in &poly.terms {
                g = g.gcd(&m);
            }
            return Self::monomial(g, 1, nvars);
        }
        if self == other {
            return self.monic(p);
        }
        for v in 0..nvars {
            let (ua, ub) = (self.uses_var(v), other.uses_var(v));
            if ua && !ub {
                return self.content_in(v, p).gcd(other, p);
            }
            if ub && !ua {
                return self.gcd(&other.content_in(v, p), p);
            }
        }
        let v = (0..nvars).find(|&v| self.uses_var(v)).expect("non-constant polynomial");
        let ca = self.content_in(v, p);
        let cb = other.content_in(v, p);
        let c = ca.gcd(&cb, p);
        let mut a = self.div_exact(&ca, p).expect("content divides");
        let mut b = other.div_exact(&cb, p).expect("content divides");
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.prem_in(&b, v, p);
            if r.is_zero() {
                break;
            }
            if !r.uses_var(v) {
                return c.monic(p);
            }
            a = b;
            b = r.primitive_in(v, p);
        }
        c.mul(&b.primitive_in(v, p), p).monic(p)
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: usize, p: u32) -> Self {
        let mut g = Self::zero(self.nvars);
        for c in self.coeffs_in(v).iter().rev() {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(c, p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize, p: u32) -> Self {
        let c = self.content_in(v, p);
        self.div_exact(&c, p).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `d` as polynomials in `v`.
    fn prem_in(&self, d: &Self, v: usize, p: u32) -> Self {
        let dd = d.degree_in(v);
        let dc = d.coeffs_in(v);
        let lc = dc.last().expect("nonzero divisor").clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let rd = r.degree_in(v);
            let rc = r.coeffs_in(v).pop().expect("nonzero");
            let shift = Monomial::var(v, rd - dd);
            r = r.mul(&lc, p).sub(&d.mul(&rc, p).mul_monomial(&shift, 1, p), p);
        }
        r
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate().take(self.nvars) {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() {
                let _ = write!(s, "{c}");
            } else {
                if c != 1 {
                    let _ = write!(s, "{c}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

/// Dense univariate helpers over `F_p`; vectors are trimmed (no trailing zeros).
pub mod dense {
    use super::fp;

    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        let pp = p as u64;
        let limit = u64::MAX - pp * pp;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let o = &mut out[i + j];
                *o += x as u64 * y as u64;
                if *o >= limit {
                    *o %= pp;
                }
            }
        }
        let mut r: Vec<u32> = out.into_iter().map(|x| (x % pp) as u32).collect();
        trim(&mut r);
        r
    }

    pub fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        assert!(!b.is_empty(), "division by zero polynomial");
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = fp::inv(b[db], p);
        let mut q = vec![0; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = fp::mul(r[k + db], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = fp::sub(r[k + j], fp::mul(c, bj, p), p);
            }
        }
        r.truncate(db);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    pub fn monic(a: &[u32], p: u32) -> Vec<u32> {
        match a.last() {
            None => Vec::new(),
            Some(&1) => a.to_vec(),
            Some(&lc) => {
                let inv = fp::inv(lc, p);
                a.iter().map(|&c| fp::mul(c, inv, p)).collect()
            }
        }
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y, p);
            x = y;
            y = r;
        }
        monic(&x, p)
    }
}
