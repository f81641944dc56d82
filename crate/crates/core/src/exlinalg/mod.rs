//! Exact linear algebra over any [`Field`] context.
//!
//! Pivoting always takes the first nonzero entry in column order, so every
//! echelon form produced here is the unique reduced row echelon form and
//! equality of subspaces is equality of their [`Subspace`] values.

mod semilinear;

use thiserror::Error;

pub use semilinear::{residue_decomposition, semilinear_kernel, semilinear_solve, DEFAULT_SEMILINEAR_LIMIT};

use crate::field::{ArithError, Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("semilinear system needs {needed} unknowns, limit is {limit}")]
    TooLarge { needed: usize, limit: usize },
    #[error("base field has no computable p^e-th roots")]
    UnsupportedBase,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows*cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(columns: &[Vec<E>], rows: usize) -> Self {
        let c = columns.len();
        let mut data = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in columns {
                data.push(col[i].clone());
            }
        }
        Matrix { rows, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let prod = f.mul(a, b);
                    f.add_assign(&mut out.data[i * o.cols + j], &prod);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        let prod = f.mul(a, b);
                        f.add_assign(&mut acc, &prod);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Option<Self>, ArithError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = self.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            aug.push(row);
        }
        let (r, pivots) = rref_rows(f, aug, 2 * n)?;
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(Matrix::from_rows(r.into_iter().map(|row| row[n..].to_vec()).collect(), n)))
    }
}

/// Reduced row echelon form of a list of rows; returns the nonzero rows and their pivots.
pub fn rref_rows<F: Field>(f: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<(Vec<Vec<F::Elem>>, Vec<usize>), ArithError> {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(f, r)?;
    }
    let sub = ech.into_subspace();
    Ok((sub.basis, sub.pivots))
}

/// Reduced row echelon form and rank.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<(Matrix<F::Elem>, usize), ArithError> {
    let (rows, pivots) = rref_rows(f, m.row_vecs(), m.cols)?;
    let rank = pivots.len();
    Ok((Matrix::from_rows(rows, m.cols), rank))
}

/// `{v : m v = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Subspace<F::Elem>, ArithError> {
    let (rows, pivots) = rref_rows(f, m.row_vecs(), m.cols)?;
    kernel_from_rref(f, &rows, &pivots, m.cols)
}

fn kernel_from_rref<F: Field>(
    f: &F,
    rows: &[Vec<F::Elem>],
    pivots: &[usize],
    cols: usize,
) -> Result<Subspace<F::Elem>, ArithError> {
    let mut vecs = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &p) in rows.iter().zip(pivots) {
            if !f.is_zero(&row[free]) {
                v[p] = f.neg(&row[free]);
            }
        }
        vecs.push(v);
    }
    Subspace::from_vectors(f, cols, vecs)
}

/// Kernel of the linear map whose columns are the given vectors:
/// all `a` with `sum_i a_i * columns[i] = 0`.
pub fn column_kernel<F: Field>(f: &F, columns: &[Vec<F::Elem>], rows: usize) -> Result<Subspace<F::Elem>, ArithError> {
    kernel(f, &Matrix::from_columns(columns, rows))
}

/// One solution of `m x = b`, or `None`.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, ArithError> {
    assert_eq!(m.rows, b.len());
    let n = m.cols;
    let rows: Vec<Vec<F::Elem>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (r, pivots) = rref_rows(f, rows, n + 1)?;
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); n];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Ok(Some(x))
}

/// Incremental reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    dim: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Echelon<E> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_subspace(s: &Subspace<E>) -> Self {
        Echelon { dim: s.ambient_dim, rows: s.basis.clone(), pivots: s.pivots.clone() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    /// `v` minus its projection on the span along the pivot coordinates;
    /// zero exactly when `v` lies in the span.
    pub fn residual<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (k, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    f.sub_mul_assign(&mut v[k], &c, x);
                }
            }
        }
        v
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        self.residual(f, v).iter().all(|x| f.is_zero(x))
    }

    /// Insert a vector; returns whether the rank grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: Vec<E>) -> Result<bool, ArithError> {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut v = self.residual(f, &v);
        let Some(c) = v.iter().position(|x| !f.is_zero(x)) else {
            return Ok(false);
        };
        if !f.is_one(&v[c]) {
            let inv = f.inv(&v[c])?;
            for x in v.iter_mut().skip(c) {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[c]) {
                continue;
            }
            let a = row[c].clone();
            for (k, x) in v.iter().enumerate().skip(c) {
                if !f.is_zero(x) {
                    f.sub_mul_assign(&mut row[k], &a, x);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        Ok(true)
    }

    pub fn into_subspace(self) -> Subspace<E> {
        Subspace { ambient_dim: self.dim, basis: self.rows, pivots: self.pivots }
    }
}

/// A subspace of `F^n` in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<E> {
    ambient_dim: usize,
    basis: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subspace<E> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        Subspace { ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    pub fn from_vectors<F: Field<Elem = E>>(f: &F, ambient_dim: usize, vecs: impl IntoIterator<Item = Vec<E>>) -> Result<Self, ArithError> {
        let mut e = Echelon::new(ambient_dim);
        for v in vecs {
            e.insert(f, v)?;
            if e.rank() == ambient_dim {
                break;
            }
        }
        Ok(e.into_subspace())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch(v.len(), self.ambient_dim));
        }
        Ok(Echelon::from_subspace(self).contains(f, v))
    }

    /// Coordinates of `v` in the echelon basis, `None` when `v` is outside.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        let coords: Vec<E> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (row, c) in self.basis.iter().zip(&coords) {
            if f.is_zero(c) {
                continue;
            }
            for (k, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    f.sub_mul_assign(&mut w[k], c, x);
                }
            }
        }
        if w.iter().all(|x| f.is_zero(x)) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn residual<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        Echelon::from_subspace(self).residual(f, v)
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<bool, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.dim() > other.dim() {
            return Ok(false);
        }
        let e = Echelon::from_subspace(other);
        Ok(self.basis.iter().all(|v| e.contains(f, v)))
    }

    pub fn join<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        let mut e = Echelon::from_subspace(self);
        for v in &other.basis {
            e.insert(f, v.clone())?;
        }
        Ok(e.into_subspace())
    }

    pub fn meet<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        let e = Echelon::from_subspace(other);
        let residuals: Vec<Vec<E>> = self.basis.iter().map(|v| e.residual(f, v)).collect();
        let ker = column_kernel(f, &residuals, self.ambient_dim)?;
        let vecs = ker.basis.iter().map(|alpha| combine(f, alpha, &self.basis, self.ambient_dim));
        Ok(Subspace::from_vectors(f, self.ambient_dim, vecs)?)
    }
}

/// `sum_i coeffs[i] * vecs[i]`.
pub fn combine<F: Field>(f: &F, coeffs: &[F::Elem], vecs: &[Vec<F::Elem>], dim: usize) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); dim];
    for (c, v) in coeffs.iter().zip(vecs) {
        if f.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !f.is_zero(x) {
                let prod = f.mul(c, x);
                f.add_assign(o, &prod);
            }
        }
    }
    out
}

/// Coefficients (lowest degree first) of `det(x I - m)`, by Berkowitz's
/// division-free algorithm.
pub fn charpoly<R: Ring>(r: &R, m: &Matrix<R::Elem>) -> Vec<R::Elem> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    // highest degree first
    let mut v = vec![r.one()];
    for k in 0..n {
        let a = m.get(k, k).clone();
        let mut col: Vec<R::Elem> = (0..k).map(|i| m.get(i, k).clone()).collect();
        let mut toeplitz = vec![r.one(), r.neg(&a)];
        for _ in 0..k {
            let mut rc = r.zero();
            for (j, c) in col.iter().enumerate() {
                r.sub_mul_assign(&mut rc, m.get(k, j), c);
            }
            toeplitz.push(rc);
            col = (0..k)
                .map(|i| {
                    let mut acc = r.zero();
                    for (j, c) in col.iter().enumerate() {
                        if !r.is_zero(c) {
                            let prod = r.mul(m.get(i, j), c);
                            r.add_assign(&mut acc, &prod);
                        }
                    }
                    acc
                })
                .collect();
        }
        let mut next = vec![r.zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                if !r.is_zero(vj) && !r.is_zero(&toeplitz[i - j]) {
                    let prod = r.mul(&toeplitz[i - j], vj);
                    r.add_assign(slot, &prod);
                }
            }
        }
        v = next;
    }
    v.reverse();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::BaseField;

    fn k2() -> BaseField {
        BaseField::new(2, &["t"]).unwrap()
    }

    fn m(k: &BaseField, rows: &[&[&str]]) -> Matrix<crate::basefield::RatFunc> {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| k.parse(s).unwrap()).collect()).collect(), cols)
    }

    #[test]
    fn rref_examples() {
        let k = k2();
        let id = Matrix::identity(&k, 3);
        assert_eq!(rref(&k, &id).unwrap(), (id.clone(), 3));
        let z = Matrix::zeros(&k, 2, 4);
        let (r, rank) = rref(&k, &z).unwrap();
        assert_eq!(rank, 0);
        assert_eq!(r.rows(), 0);
        let a = m(&k, &[&["t", "1"], &["t^2", "t"]]);
        let (r, rank) = rref(&k, &a).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(r, m(&k, &[&["1", "1/t"]]));
    }

    #[test]
    fn kernel_examples() {
        let k = k2();
        assert_eq!(kernel(&k, &Matrix::identity(&k, 3)).unwrap().dim(), 0);
        assert_eq!(kernel(&k, &Matrix::zeros(&k, 3, 3)).unwrap().dim(), 3);
        let a = m(&k, &[&["t", "1"]]);
        let ker = kernel(&k, &a).unwrap();
        assert_eq!(ker.dim(), 1);
        let v = &ker.basis()[0];
        assert!(a.mul_vec(&k, v).iter().all(|x| k.is_zero(x)));
        // (1, t) up to scaling: echelon form is (1, t)
        assert_eq!(v, &vec![k.one(), k.parse("t").unwrap()]);
    }

    #[test]
    fn meet_and_join_of_coordinate_subspaces() {
        let k = k2();
        let e = |i: usize| -> Vec<_> { (0..3).map(|j| if i == j { k.one() } else { k.zero() }).collect() };
        let a = Subspace::from_vectors(&k, 3, vec![e(0), e(1)]).unwrap();
        let b = Subspace::from_vectors(&k, 3, vec![e(1), e(2)]).unwrap();
        let meet = a.meet(&k, &b).unwrap();
        assert_eq!(meet, Subspace::from_vectors(&k, 3, vec![e(1)]).unwrap());
        assert_eq!(a.join(&k, &b).unwrap().dim(), 3);
        assert_eq!(a.meet(&k, &a).unwrap(), a);
        assert_eq!(a.join(&k, &a).unwrap(), a);
    }

    #[test]
    fn charpoly_of_companion() {
        let k = k2();
        // companion matrix of x^2 + t x + 1
        let c = m(&k, &[&["0", "1"], &["1", "t"]]);
        let chi = charpoly(&k, &c);
        assert_eq!(chi, vec![k.one(), k.parse("t").unwrap(), k.one()]);
        let d = m(&k, &[&["t", "0", "0"], &["1", "t", "0"], &["0", "0", "1"]]);
        assert_eq!(charpoly(&k, &d), vec![k.parse("t^2").unwrap(), k.parse("t^2").unwrap(), k.one(), k.one()]);
    }

    #[test]
    fn solve_and_inverse() {
        let k = k2();
        let a = m(&k, &[&["t", "1"], &["1", "t"]]);
        let inv = a.inverse(&k).unwrap().unwrap();
        assert_eq!(a.mul(&k, &inv), Matrix::identity(&k, 2));
        let b = vec![k.one(), k.zero()];
        let x = solve(&k, &a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&k, &x), b);
        let s = m(&k, &[&["t", "1"], &["t^2", "t"]]);
        assert!(s.inverse(&k).unwrap().is_none());
        assert!(solve(&k, &s, &b).unwrap().is_none());
    }
}
