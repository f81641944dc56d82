//! Truncated power series `F_q[s]/(s^d)` and rational reconstruction.

use super::gf::Gf;
use crate::field::{Field, Ring};

/// The ring `F_q[s]/(s^d)`; elements are coefficient vectors of length `d`.
pub struct Series<'a> {
    pub gf: &'a Gf,
    pub d: usize,
}

impl<'a> Series<'a> {
    pub fn new(gf: &'a Gf, d: usize) -> Self {
        Series { gf, d }
    }

    pub fn constant(&self, c: u32) -> Vec<u32> {
        let mut v = vec![0; self.d];
        v[0] = c;
        v
    }

    /// `a(τ + s)` for a dense polynomial `a` over `F_q`.
    pub fn shift_poly(&self, a: &[u32], tau: u32) -> Vec<u32> {
        let mut acc = vec![0; self.d];
        let mut lin = vec![0; self.d];
        lin[0] = tau;
        if self.d > 1 {
            lin[1] = 1;
        }
        for c in a.iter().rev() {
            acc = self.mul(&acc, &lin);
            acc[0] = self.gf.add(&acc[0], c);
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn inv_unit(&self, a: &[u32]) -> Option<Vec<u32>> {
        let f = self.gf;
        let c0 = f.inv(&a[0]).ok()?;
        let mut out = vec![0; self.d];
        out[0] = c0;
        for i in 1..self.d {
            let mut acc = 0;
            for j in 1..=i {
                if a[j] != 0 && out[i - j] != 0 {
                    acc = f.add(&acc, &f.mul(&a[j], &out[i - j]));
                }
            }
            out[i] = f.neg(&f.mul(&acc, &c0));
        }
        Some(out)
    }
}

impl Ring for Series<'_> {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.d]
    }

    fn one(&self) -> Vec<u32> {
        self.constant(1)
    }

    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| self.gf.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| self.gf.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        a.iter().map(|x| self.gf.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let f = self.gf;
        let mut out = vec![0; self.d];
        let bl = b.iter().rposition(|&c| c != 0);
        let Some(bl) = bl else { return out };
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate().take((self.d - i).min(bl + 1)) {
                if *y != 0 {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
        }
        out
    }

    fn from_int(&self, n: i64) -> Vec<u32> {
        self.constant(self.gf.from_int(n))
    }

    fn characteristic(&self) -> u32 {
        self.gf.p()
    }
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if *y != 0 {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> =
        (0..n).map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0))).collect();
    trim(&mut out);
    out
}

fn poly_divrem(f: &Gf, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = f.inv(b.last().unwrap()).unwrap();
    let mut q = vec![0; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + b.len() - 1], &inv);
        if c == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
    }
    trim(&mut q);
    r.truncate(b.len() - 1);
    trim(&mut r);
    (q, r)
}

/// `(num, den)` with `den(0) != 0`, `deg num, deg den <= bound` and
/// `num = den * a mod s^d`, when such a pair exists.
pub fn rational_reconstruction(f: &Gf, a: &[u32], bound: usize) -> Option<(Vec<u32>, Vec<u32>)> {
    let d = a.len();
    let mut r0 = vec![0; d + 1];
    r0[d] = 1;
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return Some((Vec::new(), vec![1]));
    }
    let (mut t0, mut t1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
    while r1.len() > bound + 1 {
        let (q, r) = poly_divrem(f, &r0, &r1);
        let t = poly_sub(f, &t0, &poly_mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
        if r1.is_empty() {
            break;
        }
    }
    if t1.is_empty() || t1.len() > bound + 1 || t1[0] == 0 {
        return None;
    }
    Some((r1, t1))
}

/// `a(t - τ)` as a dense polynomial in `t`.
pub fn unshift(f: &Gf, a: &[u32], tau: u32) -> Vec<u32> {
    // Horner in t with the linear factor (t - τ)
    let lin = vec![f.neg(&tau), 1];
    let mut acc: Vec<u32> = Vec::new();
    for c in a.iter().rev() {
        acc = poly_mul(f, &acc, &lin);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = f.add(&acc[0], c);
        trim(&mut acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruct_simple_fraction() {
        let f = Gf::new(3, 2).unwrap();
        let s = Series::new(&f, 12);
        let tau = f.from_int(1);
        // (t + 1) / (t^2 + t + 2) around t = τ
        let num = s.shift_poly(&[1, 1], tau);
        let den = s.shift_poly(&[f.from_int(2), 1, 1], tau);
        let a = s.mul(&num, &s.inv_unit(&den).unwrap());
        let (n, d) = rational_reconstruction(&f, &a, 3).unwrap();
        let (n, d) = (unshift(&f, &n, tau), unshift(&f, &d, tau));
        let lc = f.inv(d.last().unwrap()).unwrap();
        let n: Vec<u32> = n.iter().map(|c| f.mul(c, &lc)).collect();
        let d: Vec<u32> = d.iter().map(|c| f.mul(c, &lc)).collect();
        assert_eq!(n, vec![1, 1]);
        assert_eq!(d, vec![f.from_int(2), 1, 1]);
    }
}
