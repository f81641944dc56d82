//! A tower presentation with coefficients in an arbitrary commutative ring,
//! used for the specializations `t -> τ` of a tower over `F_p(t)`.

use crate::field::Ring;

/// `R[g_1..g_s]/(f_1, .., f_s)` with monic `f_i`; coordinates follow the
/// same monomial order as [`super::ExtensionTower`].
pub struct TowerAlgebra<R: Ring> {
    pub ring: R,
    degrees: Vec<usize>,
    sizes: Vec<usize>,
    /// `minpolys[i][k]` is coefficient `k` of `f_i` as a level-`i` vector.
    minpolys: Vec<Vec<Vec<R::Elem>>>,
}

impl<R: Ring> TowerAlgebra<R> {
    pub fn new(ring: R, minpolys: Vec<Vec<Vec<R::Elem>>>) -> Self {
        let degrees: Vec<usize> = minpolys.iter().map(|f| f.len() - 1).collect();
        let mut sizes = vec![1];
        for d in &degrees {
            sizes.push(sizes.last().unwrap() * d);
        }
        TowerAlgebra { ring, degrees, sizes, minpolys }
    }

    pub fn dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn basis_element(&self, j: usize) -> Vec<R::Elem> {
        let mut v = vec![self.ring.zero(); self.dim()];
        v[j] = self.ring.one();
        v
    }

    pub fn scale(&self, a: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
        a.iter().map(|x| self.ring.mul(x, c)).collect()
    }

    fn zero_slice(&self, a: &[R::Elem]) -> bool {
        a.iter().all(|x| self.ring.is_zero(x))
    }

    fn level_mul(&self, i: usize, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let r = &self.ring;
        if i == 0 {
            return vec![r.mul(&a[0], &b[0])];
        }
        if self.zero_slice(&a[1..]) {
            return b.iter().map(|x| r.mul(x, &a[0])).collect();
        }
        if self.zero_slice(&b[1..]) {
            return a.iter().map(|x| r.mul(x, &b[0])).collect();
        }
        let lower = self.sizes[i - 1];
        let d = self.degrees[i - 1];
        let mut c: Vec<Vec<R::Elem>> = vec![vec![r.zero(); lower]; 2 * d - 1];
        let bc: Vec<&[R::Elem]> = b.chunks(lower).collect();
        let bnz: Vec<bool> = bc.iter().map(|x| !self.zero_slice(x)).collect();
        for (al, x) in a.chunks(lower).enumerate() {
            if self.zero_slice(x) {
                continue;
            }
            for (be, y) in bc.iter().enumerate() {
                if bnz[be] {
                    let prod = self.level_mul(i - 1, x, y);
                    for (acc, v) in c[al + be].iter_mut().zip(&prod) {
                        r.add_assign(acc, v);
                    }
                }
            }
        }
        let f = &self.minpolys[i - 1];
        for g in (d..2 * d - 1).rev() {
            if self.zero_slice(&c[g]) {
                continue;
            }
            let top = std::mem::replace(&mut c[g], vec![r.zero(); lower]);
            for (kk, fk) in f.iter().enumerate().take(d) {
                if self.zero_slice(fk) {
                    continue;
                }
                let prod = self.level_mul(i - 1, &top, fk);
                for (acc, v) in c[g - d + kk].iter_mut().zip(&prod) {
                    *acc = r.sub(acc, v);
                }
            }
        }
        c.truncate(d);
        c.concat()
    }
}

impl<R: Ring> Ring for TowerAlgebra<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.ring.zero(); self.dim()]
    }

    fn one(&self) -> Vec<R::Elem> {
        self.basis_element(0)
    }

    fn is_zero(&self, a: &Vec<R::Elem>) -> bool {
        self.zero_slice(a)
    }

    fn add(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().map(|x| self.ring.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        self.level_mul(self.degrees.len(), a, b)
    }

    fn from_int(&self, n: i64) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[0] = self.ring.from_int(n);
        v
    }

    fn characteristic(&self) -> u32 {
        self.ring.characteristic()
    }
}
