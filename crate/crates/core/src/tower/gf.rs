//! Small finite fields `F_q`, `q = p^k <= 2^16`, by Zech logarithms.
//!
//! An element is encoded as `0` for zero and `i + 1` for `α^i`, where `α` is a
//! root of a primitive polynomial found by search.

use crate::field::{ArithError, Field, Ring};

pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    p: u32,
    k: u32,
    q: u32,
    /// `zech[i] = log(1 + α^i)` encoded like an element (0 when `1 + α^i = 0`).
    zech: Vec<u32>,
    /// Digits of `α^i` in the polynomial basis, packed base `p`.
    exp: Vec<u32>,
    /// Inverse of `exp`.
    log: Vec<u32>,
}

impl Gf {
    /// `F_(p^k)`; `None` when `p^k` exceeds [`MAX_ORDER`].
    pub fn new(p: u32, k: u32) -> Option<Self> {
        let q = (p as u64).checked_pow(k)?;
        if q > MAX_ORDER as u64 || k == 0 {
            return None;
        }
        let q = q as u32;
        let m = q - 1;
        // search monic f of degree k with x of order q - 1 modulo f
        for tail in 0..q {
            let f: Vec<u32> = (0..k).map(|i| (tail / p.pow(i)) % p).collect();
            if f[0] == 0 && k > 1 {
                continue;
            }
            if let Some(exp) = power_table(p, &f, m) {
                let mut log = vec![u32::MAX; q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                let one_digits = 1u32;
                let zech = (0..m)
                    .map(|i| {
                        let s = add_packed(p, k, one_digits, exp[i as usize]);
                        if s == 0 {
                            0
                        } else {
                            log[s as usize] + 1
                        }
                    })
                    .collect();
                return Some(Gf { p, k, q, zech, exp, log });
            }
        }
        None
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// `α`.
    pub fn primitive(&self) -> u32 {
        2.min(self.q - 1) // log 1 for q > 2, and 1 = α^0 for F_2
    }

    /// The image of `c in F_p`.
    pub fn from_prime(&self, c: u32) -> u32 {
        let c = c % self.p;
        if c == 0 {
            0
        } else {
            self.log[c as usize] + 1
        }
    }

    /// `Some(c)` when `a` lies in the prime field.
    pub fn to_prime(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let packed = self.exp[(a - 1) as usize];
        if packed < self.p {
            Some(packed)
        } else {
            None
        }
    }
}

fn add_packed(p: u32, k: u32, a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Packed powers `x^0 .. x^(m-1)` modulo `x^k + f`, if `x` has order exactly `m`.
fn power_table(p: u32, f: &[u32], m: u32) -> Option<Vec<u32>> {
    let k = f.len();
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    let pack = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        let packed = pack(&cur);
        if i > 0 && packed == 1 {
            return None;
        }
        out.push(packed);
        // multiply by x: shift, reduce x^k = -f
        let top = cur[k - 1];
        for j in (1..k).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..k {
                cur[j] = (cur[j] + (p - top) * f[j]) % p;
            }
        }
        if cur.iter().all(|&c| c == 0) {
            return None;
        }
    }
    if pack(&cur) == 1 {
        Some(out)
    } else {
        None
    }
}

impl Ring for Gf {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let (a, b) = (*a, *b);
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let m = self.q - 1;
        let (la, lb) = (a - 1, b - 1);
        let diff = (lb + m - la) % m;
        let z = self.zech[diff as usize];
        if z == 0 {
            0
        } else {
            (la + z - 1) % m + 1
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 || self.p == 2 {
            return *a;
        }
        let m = self.q - 1;
        (*a - 1 + m / 2) % m + 1
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let m = self.q - 1;
        (*a - 1 + *b - 1) % m + 1
    }

    fn from_int(&self, n: i64) -> u32 {
        self.from_prime(n.rem_euclid(self.p as i64) as u32)
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let m = (self.q - 1) as u64;
        (((*a - 1) as u64 * (e % m)) % m) as u32 + 1
    }
}

impl Field for Gf {
    fn inv(&self, a: &u32) -> Result<u32, ArithError> {
        if *a == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let m = self.q - 1;
        Ok((m - (*a - 1)) % m + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1)] {
            let f = Gf::new(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(&a, &b), f.add(&b, &a));
                    let c = f.primitive();
                    assert_eq!(f.mul(&c, &f.add(&a, &b)), f.add(&f.mul(&c, &a), &f.mul(&c, &b)));
                }
            }
            let prime: Vec<u32> = f.elements().filter(|a| f.pow(a, p as u64) == *a).collect();
            assert_eq!(prime.len(), p as usize);
            assert!(prime.iter().all(|a| f.to_prime(*a).is_some()));
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(Gf::new(2, 16).unwrap().order(), 65536);
        assert!(Gf::new(2, 17).is_none());
        let f = Gf::new(3, 1).unwrap();
        assert_eq!(f.from_int(-1), f.from_prime(2));
    }
}
