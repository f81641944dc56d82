//! Subalgebras of `E(L/K) = End_K(L)`.
//!
//! An operator `phi` is handled either as its `K`-matrix on the monomial
//! basis `b_0, .., b_{n-1}` of `L` or as the vector
//! `(phi(b_0), .., phi(b_{n-1}))` in `L^n` (an [`Op`]).  Left multiplication
//! by `l in L` acts coordinatewise on the vector form, so an algebra that
//! contains `L` is a left `L`-subspace of `L^n` and is stored that way.
//! Algebras not containing `L` are stored as `K`-subspaces of the `n^2`
//! matrix entries.  Both forms are reduced echelon, so equal algebras are
//! equal values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::basefield::{BaseField, RatFunc};
use crate::exlinalg::{self, Echelon, LinalgError, Matrix, Subspace};
use crate::field::{ArithError, Ring};
use crate::tower::subfield::Subfield;
use crate::tower::{ExtensionTower, TowerElement, TowerError};

pub type Mat = Matrix<RatFunc>;

/// `(phi(b_0), .., phi(b_{n-1}))`.
pub type Op = Vec<TowerElement>;

/// Trials spent by [`conjugating_unit`] before giving up.
pub const UNIT_SEARCH_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatalgError {
    #[error("elements do not form a basis over the subfield")]
    NotABasis,
    #[error("algebra does not contain L")]
    NotContainingL,
    #[error("no invertible solution found after {0} trials")]
    NoUnitFound(usize),
    #[error("not an algebra homomorphism: {0}")]
    NotAHom(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

pub fn op_of(t: &ExtensionTower, x: &Mat) -> Op {
    (0..t.degree()).map(|j| t.from_coords(x.column(j))).collect()
}

pub fn matrix_of(t: &ExtensionTower, op: &[TowerElement]) -> Mat {
    let cols: Vec<Vec<RatFunc>> = op.iter().map(|x| x.coords().to_vec()).collect();
    Matrix::from_columns(&cols, t.degree())
}

pub fn identity_op(t: &ExtensionTower) -> Op {
    (0..t.degree()).map(|j| t.basis_element(j)).collect()
}

/// Multiplication by `l`.
pub fn mult_op(t: &ExtensionTower, l: &TowerElement) -> Op {
    (0..t.degree()).map(|j| t.mul_basis(l, j)).collect()
}

/// `l` when `op` is multiplication by `l`.
pub fn field_element(t: &ExtensionTower, op: &[TowerElement]) -> Option<TowerElement> {
    let l = op[0].clone();
    (mult_op(t, &l) == op).then_some(l)
}

pub fn apply(t: &ExtensionTower, op: &[TowerElement], a: &TowerElement) -> TowerElement {
    t.combine(a.coords(), op)
}

/// `a o b`.
pub fn compose(t: &ExtensionTower, a: &[TowerElement], b: &[TowerElement]) -> Op {
    b.iter().map(|x| apply(t, a, x)).collect()
}

/// `l * op`.
pub fn left_mul(t: &ExtensionTower, l: &TowerElement, op: &[TowerElement]) -> Op {
    op.iter().map(|x| t.mul(l, x)).collect()
}

pub fn op_sub(t: &ExtensionTower, a: &[TowerElement], b: &[TowerElement]) -> Op {
    a.iter().zip(b).map(|(x, y)| t.sub(x, y)).collect()
}

/// `sum_i c_i ops_i` with `c_i in K`.
pub fn op_combine(t: &ExtensionTower, coeffs: &[RatFunc], ops: &[Op]) -> Op {
    (0..t.degree())
        .map(|j| {
            let col: Vec<TowerElement> = ops.iter().map(|o| o[j].clone()).collect();
            t.combine(coeffs, &col)
        })
        .collect()
}

/// `phi (x) id` on `L = L1 (x) L2` presented by [`ExtensionTower::tensor`],
/// for `phi` acting on `L1` of degree `n1`.
pub fn tensor_left(t: &ExtensionTower, n1: usize, op: &[TowerElement]) -> Op {
    let k = t.base();
    (0..t.degree())
        .map(|j| {
            let (i1, i2) = (j % n1, j / n1);
            let mut coords = vec![k.zero(); t.degree()];
            for (i, c) in op[i1].coords().iter().enumerate() {
                coords[i + n1 * i2] = c.clone();
            }
            t.from_coords(coords)
        })
        .collect()
}

/// `id (x) psi` on `L = L1 (x) L2`, for `psi` acting on `L2`.
pub fn tensor_right(t: &ExtensionTower, n1: usize, op: &[TowerElement]) -> Op {
    let k = t.base();
    (0..t.degree())
        .map(|j| {
            let (i1, i2) = (j % n1, j / n1);
            let mut coords = vec![k.zero(); t.degree()];
            for (i, c) in op[i2].coords().iter().enumerate() {
                coords[i1 + n1 * i] = c.clone();
            }
            t.from_coords(coords)
        })
        .collect()
}

/// Row-major matrix entries.
fn flatten(t: &ExtensionTower, op: &[TowerElement]) -> Vec<RatFunc> {
    let n = t.degree();
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        out.extend(op.iter().map(|x| x.coords()[r].clone()));
    }
    out
}

fn unflatten(t: &ExtensionTower, v: &[RatFunc]) -> Op {
    let n = t.degree();
    (0..n).map(|c| t.from_coords((0..n).map(|r| v[r * n + c].clone()).collect())).collect()
}

/// A unital subalgebra of `E(L/K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatAlgebra {
    tower: u64,
    n: usize,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    /// Left `L`-subspace of `L^n`; the algebra contains `L`.
    LMod(Subspace<TowerElement>),
    /// `K`-subspace of flattened matrices; the algebra does not contain `L`.
    KSpan(Subspace<RatFunc>),
}

impl MatAlgebra {
    /// `E(L/K)`.
    pub fn full(t: &ExtensionTower) -> Self {
        MatAlgebra { tower: t.id(), n: t.degree(), repr: Repr::LMod(Subspace::full(t, t.degree())) }
    }

    /// The image of a subfield under the regular representation.
    pub fn field_image(t: &ExtensionTower, m: &Subfield) -> Self {
        let n = t.degree();
        let repr = if m.is_whole() {
            Repr::LMod(Subspace::from_vectors(t, n, [identity_op(t)]).expect("1 is invertible"))
        } else {
            let vecs = m.basis_elements(t).into_iter().map(|x| flatten(t, &mult_op(t, &x)));
            Repr::KSpan(Subspace::from_vectors(t.base(), n * n, vecs).expect("K is a field"))
        };
        MatAlgebra { tower: t.id(), n, repr }
    }

    pub fn image_of_l(t: &ExtensionTower) -> Self {
        Self::field_image(t, &Subfield::whole(t))
    }

    /// `K * I`.
    pub fn scalars(t: &ExtensionTower) -> Self {
        Self::field_image(t, &Subfield::base(t))
    }

    /// The left `L`-span of `ops`; the caller guarantees it is an algebra containing `L`.
    pub fn from_l_span(t: &ExtensionTower, ops: impl IntoIterator<Item = Op>) -> Result<Self, ArithError> {
        let s = Subspace::from_vectors(t, t.degree(), ops)?;
        Ok(MatAlgebra { tower: t.id(), n: t.degree(), repr: Repr::LMod(s) })
    }

    /// The `K`-span of `ops`; the caller guarantees it is an algebra.
    pub fn from_k_span(t: &ExtensionTower, ops: impl IntoIterator<Item = Op>) -> Result<Self, ArithError> {
        let n = t.degree();
        let k = t.base();
        let s = Subspace::from_vectors(k, n * n, ops.into_iter().map(|o| flatten(t, &o)))?;
        let has_l = s.dim() % n == 0 && {
            let e = Echelon::from_subspace(&s);
            t.gens().iter().all(|g| e.contains(k, &flatten(t, &mult_op(t, g))))
        };
        if has_l {
            let ops = s.basis().iter().map(|v| unflatten(t, v));
            return Self::from_l_span(t, ops);
        }
        Ok(MatAlgebra { tower: t.id(), n, repr: Repr::KSpan(s) })
    }

    pub fn tower_id(&self) -> u64 {
        self.tower
    }

    /// `n = [L:K]`.
    pub fn degree(&self) -> usize {
        self.n
    }

    /// `K`-dimension.
    pub fn dim(&self) -> usize {
        match &self.repr {
            Repr::LMod(s) => s.dim() * self.n,
            Repr::KSpan(s) => s.dim(),
        }
    }

    pub fn contains_l(&self) -> bool {
        matches!(self.repr, Repr::LMod(_))
    }

    /// Left `L`-basis, for algebras containing `L`.
    pub fn l_basis(&self) -> Option<&[Op]> {
        match &self.repr {
            Repr::LMod(s) => Some(s.basis()),
            Repr::KSpan(_) => None,
        }
    }

    /// `L`-subspace of `L^n`, for algebras containing `L`.
    pub fn l_space(&self) -> Option<&Subspace<TowerElement>> {
        match &self.repr {
            Repr::LMod(s) => Some(s),
            Repr::KSpan(_) => None,
        }
    }

    pub fn k_basis(&self, t: &ExtensionTower) -> Vec<Op> {
        match &self.repr {
            Repr::LMod(s) => {
                let bs: Vec<TowerElement> = (0..self.n).map(|m| t.basis_element(m)).collect();
                s.basis().iter().flat_map(|r| bs.iter().map(move |b| left_mul(t, b, r))).collect()
            }
            Repr::KSpan(s) => s.basis().iter().map(|v| unflatten(t, v)).collect(),
        }
    }

    pub fn k_matrices(&self, t: &ExtensionTower) -> Vec<Mat> {
        self.k_basis(t).iter().map(|o| matrix_of(t, o)).collect()
    }

    /// The algebra as a `K`-subspace of the `n^2` matrix entries.
    pub fn k_space(&self, t: &ExtensionTower) -> Subspace<RatFunc> {
        match &self.repr {
            Repr::LMod(_) => {
                let vecs = self.k_basis(t).into_iter().map(|o| flatten(t, &o));
                Subspace::from_vectors(t.base(), self.n * self.n, vecs).expect("K is a field")
            }
            Repr::KSpan(s) => s.clone(),
        }
    }

    pub fn contains_op(&self, t: &ExtensionTower, op: &[TowerElement]) -> bool {
        match &self.repr {
            Repr::LMod(s) => s.is_full() || Echelon::from_subspace(s).contains(t, op),
            Repr::KSpan(s) => Echelon::from_subspace(s).contains(t.base(), &flatten(t, op)),
        }
    }

    pub fn contains(&self, t: &ExtensionTower, x: &Mat) -> bool {
        self.contains_op(t, &op_of(t, x))
    }

    pub fn is_subalgebra_of(&self, t: &ExtensionTower, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::LMod(a), Repr::LMod(b)) => a.is_subspace_of(t, b).unwrap_or(false),
            (Repr::LMod(_), Repr::KSpan(_)) => false,
            _ => self.dim() <= other.dim() && self.k_basis(t).iter().all(|o| other.contains_op(t, o)),
        }
    }

    pub fn meet(&self, t: &ExtensionTower, other: &Self) -> Result<Self, MatalgError> {
        match (&self.repr, &other.repr) {
            (Repr::LMod(a), Repr::LMod(b)) => {
                Ok(MatAlgebra { tower: self.tower, n: self.n, repr: Repr::LMod(a.meet(t, b)?) })
            }
            _ => {
                let s = self.k_space(t).meet(t.base(), &other.k_space(t))?;
                Ok(Self::from_k_span(t, s.basis().iter().map(|v| unflatten(t, v)))?)
            }
        }
    }

    /// Check closure under products of a generating set.
    pub fn is_closed(&self, t: &ExtensionTower) -> bool {
        match &self.repr {
            Repr::LMod(s) => {
                let e = Echelon::from_subspace(s);
                let mut right: Vec<Op> = t.gens().iter().map(|g| mult_op(t, g)).collect();
                right.extend(s.basis().iter().cloned());
                let left: Vec<Op> = self.k_basis(t);
                self.contains_op(t, &identity_op(t))
                    && s.basis().iter().all(|r| right.iter().all(|x| e.contains(t, &compose(t, r, x))))
                    && s.basis().iter().all(|r| left.iter().all(|y| e.contains(t, &compose(t, r, y))))
            }
            Repr::KSpan(_) => {
                let b = self.k_basis(t);
                self.contains_op(t, &identity_op(t))
                    && b.iter().all(|x| b.iter().all(|y| self.contains_op(t, &compose(t, x, y))))
            }
        }
    }
}

/// Smallest unital subalgebra containing `gens`.
pub fn generate_algebra(t: &ExtensionTower, gens: &[Mat]) -> Result<MatAlgebra, MatalgError> {
    let ops: Vec<Op> = gens.iter().map(|x| op_of(t, x)).collect();
    generate_ops(t, &ops)
}

pub fn generate_ops(t: &ExtensionTower, ops: &[Op]) -> Result<MatAlgebra, MatalgError> {
    let n = t.degree();
    let k = t.base();
    let id = identity_op(t);
    let span = Echelon::from_subspace(&Subspace::from_vectors(
        k,
        n * n,
        ops.iter().chain(std::iter::once(&id)).map(|o| flatten(t, o)),
    )?);
    if t.gens().iter().all(|g| span.contains(k, &flatten(t, &mult_op(t, g)))) {
        return Ok(generate_over_l(t, ops)?);
    }
    let mut ech = Echelon::new(n * n);
    ech.insert(k, flatten(t, &id))?;
    let mut frontier = vec![id];
    while let Some(v) = frontier.pop() {
        for x in ops {
            let w = compose(t, &v, x);
            if ech.insert(k, flatten(t, &w))? {
                frontier.push(w);
            }
        }
    }
    Ok(MatAlgebra::from_k_span(t, ech.into_subspace().basis().iter().map(|v| unflatten(t, v)))?)
}

/// The algebra generated by `L` and `extra`.
pub fn generate_over_l(t: &ExtensionTower, extra: &[Op]) -> Result<MatAlgebra, ArithError> {
    let n = t.degree();
    let mut mults: Vec<Op> = extra.to_vec();
    mults.extend(t.gens().iter().map(|g| mult_op(t, g)));
    let id = identity_op(t);
    let mut ech = Echelon::new(n);
    ech.insert(t, id.clone())?;
    let mut frontier = vec![id];
    while let Some(v) = frontier.pop() {
        if ech.rank() == n {
            break;
        }
        for x in &mults {
            let w = compose(t, &v, x);
            if ech.insert(t, w.clone())? {
                frontier.push(w);
            }
        }
    }
    Ok(MatAlgebra { tower: t.id(), n, repr: Repr::LMod(ech.into_subspace()) })
}

/// `C_within(S)`.
pub fn centralizer(t: &ExtensionTower, s: &[Mat], within: &MatAlgebra) -> Result<MatAlgebra, MatalgError> {
    let ops: Vec<Op> = s.iter().map(|x| op_of(t, x)).collect();
    centralizer_ops(t, &ops, within)
}

pub fn centralizer_ops(t: &ExtensionTower, s: &[Op], within: &MatAlgebra) -> Result<MatAlgebra, MatalgError> {
    if within.contains_l() {
        let elems: Option<Vec<TowerElement>> = s.iter().map(|o| field_element(t, o)).collect();
        if let Some(elems) = elems {
            return l_centralizer(t, &elems, within);
        }
    }
    k_centralizer(t, s, &within.k_basis(t))
}

/// `C_within(a)` for a whole algebra `a`.
pub fn centralizer_of(t: &ExtensionTower, a: &MatAlgebra, within: &MatAlgebra) -> Result<MatAlgebra, MatalgError> {
    if let Some(rows) = a.l_basis() {
        let f = MatAlgebra::field_image(t, &commutant_in_l(t, rows)?);
        return if within.contains_l() { Ok(f) } else { f.meet(t, within) };
    }
    centralizer_ops(t, &a.k_basis(t), within)
}

/// `E(L/M) = C_E(M)`.
pub fn endomorphisms_over(t: &ExtensionTower, m: &Subfield) -> Result<MatAlgebra, MatalgError> {
    l_centralizer(t, &m.basis_elements(t), &MatAlgebra::full(t))
}

/// `{phi in within : phi l = l phi}` for `l in elems`, all in `L`.
fn l_centralizer(t: &ExtensionTower, elems: &[TowerElement], within: &MatAlgebra) -> Result<MatAlgebra, MatalgError> {
    let rows = within.l_basis().expect("within contains L");
    let elems: Vec<&TowerElement> = elems.iter().filter(|e| e.as_base().is_none()).collect();
    if elems.is_empty() {
        return Ok(within.clone());
    }
    let n = t.degree();
    let prods: Vec<Vec<TowerElement>> = elems.iter().map(|s| (0..n).map(|j| t.mul_basis(s, j)).collect()).collect();
    let cols: Vec<Vec<TowerElement>> = rows
        .iter()
        .map(|w| {
            let mut col = Vec::with_capacity(elems.len() * n);
            for (s, sb) in elems.iter().zip(&prods) {
                for j in 0..n {
                    col.push(t.sub(&apply(t, w, &sb[j]), &t.mul(s, &w[j])));
                }
            }
            col
        })
        .collect();
    let ker = exlinalg::column_kernel(t, &cols, elems.len() * n)?;
    let ops = ker.basis().iter().map(|lambda| exlinalg::combine(t, lambda, rows, n));
    Ok(MatAlgebra::from_l_span(t, ops)?)
}

fn k_centralizer(t: &ExtensionTower, s: &[Op], basis: &[Op]) -> Result<MatAlgebra, MatalgError> {
    let n = t.degree();
    let cols: Vec<Vec<RatFunc>> = basis
        .iter()
        .map(|w| s.iter().flat_map(|x| flatten(t, &op_sub(t, &compose(t, w, x), &compose(t, x, w)))).collect())
        .collect();
    let ker = exlinalg::column_kernel(t.base(), &cols, s.len() * n * n)?;
    let ops = ker.basis().iter().map(|lambda| op_combine(t, lambda, basis));
    Ok(MatAlgebra::from_k_span(t, ops.collect::<Vec<_>>())?)
}

/// `{l in L : l r = r l for all r in ops}`.
pub fn commutant_in_l(t: &ExtensionTower, ops: &[Op]) -> Result<Subfield, MatalgError> {
    let n = t.degree();
    if ops.is_empty() {
        return Ok(Subfield::whole(t));
    }
    let cols: Vec<Vec<RatFunc>> = (0..n)
        .map(|m| {
            let bm = t.basis_element(m);
            let mut col = Vec::with_capacity(ops.len() * n * n);
            for r in ops {
                for j in 0..n {
                    let v = t.sub(&t.mul(&bm, &r[j]), &apply(t, r, &t.mul_basis(&bm, j)));
                    col.extend(v.into_coords());
                }
            }
            col
        })
        .collect();
    let ker = exlinalg::column_kernel(t.base(), &cols, ops.len() * n * n)?;
    Ok(Subfield::from_subspace(t, ker)?)
}

#[derive(Clone, Debug)]
pub struct DoubleCentralizer {
    pub c: MatAlgebra,
    pub cc: MatAlgebra,
    pub ok: bool,
}

/// `C = C_E(B)`, `CC = C_E(C)`; `ok` when `CC = B` and `dim B dim C = n^2`.
pub fn double_centralizer_roundtrip(t: &ExtensionTower, b: &MatAlgebra) -> Result<DoubleCentralizer, MatalgError> {
    let e = MatAlgebra::full(t);
    let c = centralizer_of(t, b, &e)?;
    let cc = centralizer_of(t, &c, &e)?;
    let n = t.degree();
    let ok = cc == *b && b.dim() * c.dim() == n * n;
    Ok(DoubleCentralizer { c, cc, ok })
}

/// Every nonzero two-sided ideal is the whole algebra.
pub fn is_simple(t: &ExtensionTower, a: &MatAlgebra) -> Result<bool, MatalgError> {
    let n = t.degree();
    match a.l_basis() {
        Some(rows) => {
            let mut right: Vec<Op> = t.gens().iter().map(|g| mult_op(t, g)).collect();
            right.extend(rows.iter().cloned());
            let bs: Vec<TowerElement> = (0..n).map(|m| t.basis_element(m)).collect();
            for r in rows {
                let mut ech = Echelon::new(n);
                ech.insert(t, r.clone())?;
                let mut frontier = vec![r.clone()];
                while let Some(v) = frontier.pop() {
                    if ech.rank() == rows.len() {
                        break;
                    }
                    let mut cands: Vec<Op> = right.iter().map(|x| compose(t, &v, x)).collect();
                    for b in &bs {
                        let bv = left_mul(t, b, &v);
                        cands.extend(rows.iter().map(|y| compose(t, y, &bv)));
                    }
                    for w in cands {
                        if ech.insert(t, w.clone())? {
                            frontier.push(w);
                        }
                    }
                }
                if ech.rank() < rows.len() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        None => {
            let k = t.base();
            let basis = a.k_basis(t);
            for b in &basis {
                let mut ech = Echelon::new(n * n);
                ech.insert(k, flatten(t, b))?;
                let mut frontier = vec![b.clone()];
                while let Some(v) = frontier.pop() {
                    if ech.rank() == basis.len() {
                        break;
                    }
                    for x in &basis {
                        for w in [compose(t, &v, x), compose(t, x, &v)] {
                            if ech.insert(k, flatten(t, &w))? {
                                frontier.push(w);
                            }
                        }
                    }
                }
                if ech.rank() < basis.len() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `C_a(a)`.
pub fn center(t: &ExtensionTower, a: &MatAlgebra) -> Result<MatAlgebra, MatalgError> {
    match a.l_basis() {
        Some(rows) => Ok(MatAlgebra::field_image(t, &commutant_in_l(t, rows)?)),
        None => {
            let b = a.k_basis(t);
            k_centralizer(t, &b, &b)
        }
    }
}

/// `C_E(A)` as a subfield of `L`, for `A` containing `L`.
pub fn algebra_to_subfield(t: &ExtensionTower, a: &MatAlgebra) -> Result<Subfield, MatalgError> {
    let rows = a.l_basis().ok_or(MatalgError::NotContainingL)?;
    commutant_in_l(t, rows)
}

/// A `K`-algebra map given on a basis of its source.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraHom {
    pub source: Vec<Mat>,
    pub images: Vec<Mat>,
}

impl AlgebraHom {
    fn source_coords(&self, k: &BaseField, x: &Mat) -> Result<Option<Vec<RatFunc>>, MatalgError> {
        let cols: Vec<Vec<RatFunc>> = self.source.iter().map(|s| s.data().to_vec()).collect();
        let m = Matrix::from_columns(&cols, x.data().len());
        Ok(exlinalg::solve(k, &m, x.data())?)
    }

    /// Image of `x`, or `None` outside the source span.
    pub fn apply(&self, k: &BaseField, x: &Mat) -> Result<Option<Mat>, MatalgError> {
        let Some(c) = self.source_coords(k, x)? else { return Ok(None) };
        let (r, cc) = (self.images[0].rows(), self.images[0].cols());
        let mut acc = Matrix::zeros(k, r, cc);
        for (ci, img) in c.iter().zip(&self.images) {
            if !ci.is_zero() {
                acc = acc.add(k, &img.scale(k, ci));
            }
        }
        Ok(Some(acc))
    }

    /// Unital and multiplicative on all basis pairs.
    pub fn verify(&self, k: &BaseField) -> Result<(), MatalgError> {
        if self.source.len() != self.images.len() || self.source.is_empty() {
            return Err(MatalgError::NotAHom("basis and images differ in length".into()));
        }
        let d = self.source[0].rows();
        let n = self.images[0].rows();
        let one = self.apply(k, &Matrix::identity(k, d))?;
        if one != Some(Matrix::identity(k, n)) {
            return Err(MatalgError::NotAHom("not unital".into()));
        }
        for (i, (a, fa)) in self.source.iter().zip(&self.images).enumerate() {
            for (j, (b, fb)) in self.source.iter().zip(&self.images).enumerate() {
                match self.apply(k, &a.mul(k, b))? {
                    Some(img) if img == fa.mul(k, fb) => {}
                    Some(_) => return Err(MatalgError::NotAHom(format!("product of basis elements {i}, {j}"))),
                    None => return Err(MatalgError::NotAHom("source is not closed".into())),
                }
            }
        }
        Ok(())
    }

    pub fn image_algebra(&self, t: &ExtensionTower) -> Result<MatAlgebra, MatalgError> {
        Ok(MatAlgebra::from_k_span(t, self.images.iter().map(|x| op_of(t, x)).collect::<Vec<_>>())?)
    }
}

fn unit_matrix(k: &BaseField, d: usize, a: usize, b: usize) -> Mat {
    let mut m = Matrix::zeros(k, d, d);
    m.set(a, b, k.one());
    m
}

/// Change of basis `C` with columns `m_a e_i` (index `i d + a`) and its inverse.
fn relative_basis(t: &ExtensionTower, e: &[TowerElement], m: &Subfield) -> Result<(Mat, Mat), MatalgError> {
    let n = t.degree();
    if m.dim() * e.len() != n {
        return Err(MatalgError::NotABasis);
    }
    let mb = m.basis_elements(t);
    let cols: Vec<Vec<RatFunc>> = e.iter().flat_map(|ei| mb.iter().map(move |x| t.mul(x, ei).into_coords())).collect();
    let c = Matrix::from_columns(&cols, n);
    let inv = c.inverse(t.base())?.ok_or(MatalgError::NotABasis)?;
    Ok((c, inv))
}

fn kron(k: &BaseField, a: &Mat, b: &Mat) -> Mat {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(k, ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            if a.get(i, j).is_zero() {
                continue;
            }
            for r in 0..rb {
                for c in 0..cb {
                    if !b.get(r, c).is_zero() {
                        out.set(i * rb + r, j * cb + c, k.mul(a.get(i, j), b.get(r, c)));
                    }
                }
            }
        }
    }
    out
}

fn embedding(t: &ExtensionTower, e: &[TowerElement], m: &Subfield, on_m: bool) -> Result<AlgebraHom, MatalgError> {
    let k = t.base();
    let (c, inv) = relative_basis(t, e, m)?;
    let (d, r) = (m.dim(), e.len());
    let size = if on_m { d } else { r };
    let mut source = Vec::with_capacity(size * size);
    let mut images = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            let u = unit_matrix(k, size, a, b);
            let big = if on_m { kron(k, &Matrix::identity(k, r), &u) } else { kron(k, &u, &Matrix::identity(k, d)) };
            images.push(c.mul(k, &big).mul(k, &inv));
            source.push(u);
        }
    }
    let hom = AlgebraHom { source, images };
    hom.verify(k)?;
    Ok(hom)
}

/// `theta_e: E(M/K) -> E(L/K)`, acting on the `M`-coordinates of the basis `e`.
///
/// The source is `M_d(K)` on the echelon basis of `M`, with the unit
/// matrices `E_ab` (row-major) as its basis.
pub fn diagonal_embedding(t: &ExtensionTower, e: &[TowerElement], m: &Subfield) -> Result<AlgebraHom, MatalgError> {
    embedding(t, e, m, true)
}

/// The complementary factor `E(N/K)`, `N = span_K(e)`, acting `M`-linearly on `L = M (x) N`.
pub fn complementary_embedding(t: &ExtensionTower, e: &[TowerElement], m: &Subfield) -> Result<AlgebraHom, MatalgError> {
    embedding(t, e, m, false)
}

/// An invertible `u` with `u a u^-1 = iso(a)` on the source basis of `iso`.
///
/// Candidates are sums of at most three solution vectors with `F_p`
/// coefficients, then random combinations with low-degree coefficients,
/// within [`UNIT_SEARCH_BUDGET`] trials.
pub fn conjugating_unit(
    t: &ExtensionTower,
    a: &MatAlgebra,
    b: &MatAlgebra,
    iso: &AlgebraHom,
) -> Result<Mat, MatalgError> {
    let k = t.base();
    let n = t.degree();
    if !iso.source.iter().all(|x| a.contains(t, x)) || !iso.images.iter().all(|y| b.contains(t, y)) {
        return Err(MatalgError::NotAHom("basis or images outside the given algebras".into()));
    }
    // u x - y u = 0, one column per entry u_rc
    let mut cols = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut col = Vec::with_capacity(n * n * iso.source.len());
            for (x, y) in iso.source.iter().zip(&iso.images) {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = if i == r { x.get(c, j).clone() } else { k.zero() };
                        if j == c {
                            v = k.sub(&v, y.get(i, r));
                        }
                        col.push(v);
                    }
                }
            }
            cols.push(col);
        }
    }
    let sols = exlinalg::column_kernel(k, &cols, n * n * iso.source.len())?;
    let basis = sols.basis();
    if basis.is_empty() {
        return Err(MatalgError::NoUnitFound(0));
    }
    let mut trials = 0;
    let try_unit = |coeffs: &[RatFunc]| -> Result<Option<Mat>, MatalgError> {
        let u = Matrix::new(n, n, exlinalg::combine(k, coeffs, basis, n * n));
        let Some(ui) = u.inverse(k)? else { return Ok(None) };
        let good = iso.source.iter().zip(&iso.images).all(|(x, y)| u.mul(k, x).mul(k, &ui) == *y);
        Ok(good.then_some(u))
    };
    let p = t.p();
    let m = basis.len();
    for size in 1..=3.min(m) {
        for idx in index_subsets(m, size) {
            let mut digits = vec![1u32; size];
            loop {
                let mut coeffs = vec![k.zero(); m];
                for (&i, &c) in idx.iter().zip(&digits) {
                    coeffs[i] = k.constant(c as i64);
                }
                trials += 1;
                if let Some(u) = try_unit(&coeffs)? {
                    return Ok(u);
                }
                if trials >= UNIT_SEARCH_BUDGET {
                    return Err(MatalgError::NoUnitFound(trials));
                }
                if !next_digits(&mut digits, p) {
                    break;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f6574686572);
    while trials < UNIT_SEARCH_BUDGET {
        let coeffs: Vec<RatFunc> = (0..m).map(|_| k.random(&mut rng, 2)).collect();
        trials += 1;
        if let Some(u) = try_unit(&coeffs)? {
            return Ok(u);
        }
    }
    Err(MatalgError::NoUnitFound(trials))
}

fn index_subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    rec(0, m, size, &mut cur, &mut out);
    out
}

/// Next tuple in `{1..p-1}^size`, or `false` after the last.
fn next_digits(d: &mut [u32], p: u32) -> bool {
    for x in d.iter_mut() {
        if *x + 1 < p {
            *x += 1;
            return true;
        }
        *x = 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::fixtures::*;

    fn del_u(t: &ExtensionTower) -> Mat {
        // d/du on the basis (1, u)
        let k = t.base();
        Matrix::from_rows(vec![vec![k.zero(), k.one()], vec![k.zero(), k.zero()]], 2)
    }

    fn ks(t: &ExtensionTower) -> Subfield {
        Subfield::generated(t, &[t.gen(1)])
    }

    #[test]
    fn generation() {
        let t = ex1();
        let k = t.base();
        assert_eq!(generate_algebra(&t, &[]).unwrap(), MatAlgebra::scalars(&t));
        assert_eq!(generate_algebra(&t, &[]).unwrap().dim(), 1);
        let reps: Vec<Mat> = (0..2).map(|j| t.regular_rep(&t.basis_element(j))).collect();
        let l = generate_algebra(&t, &reps).unwrap();
        assert_eq!(l, MatAlgebra::image_of_l(&t));
        assert_eq!(l.dim(), 2);
        let e = generate_algebra(&t, &[t.regular_rep(&t.gen(0)), del_u(&t)]).unwrap();
        assert_eq!(e, MatAlgebra::full(&t));
        assert!(e.is_closed(&t) && l.is_closed(&t));
        // the derivation alone generates a commutative 2-dimensional algebra
        let d = generate_algebra(&t, &[del_u(&t)]).unwrap();
        assert_eq!(d.dim(), 2);
        assert!(!d.contains_l() && d.contains(&t, &Matrix::identity(k, 2)));
    }

    #[test]
    fn centralizers() {
        let t = ex3();
        let k = t.base();
        let e = MatAlgebra::full(&t);
        assert_eq!(centralizer(&t, &[Matrix::identity(k, 4)], &e).unwrap(), e);
        let reps: Vec<Mat> = (0..4).map(|j| t.regular_rep(&t.basis_element(j))).collect();
        assert_eq!(centralizer(&t, &reps, &e).unwrap(), MatAlgebra::image_of_l(&t));
        let d = centralizer(&t, &[t.regular_rep(&t.gen(1))], &e).unwrap();
        assert_eq!(d.dim(), 8);
        assert_eq!(d, endomorphisms_over(&t, &ks(&t)).unwrap());
        // the general path agrees with the L-module path
        let generic = k_centralizer(&t, &[mult_op(&t, &t.gen(1))], &e.k_basis(&t)).unwrap();
        assert_eq!(generic, d);
    }

    #[test]
    fn double_centralizer() {
        let t = ex3();
        let l = MatAlgebra::image_of_l(&t);
        let r = double_centralizer_roundtrip(&t, &l).unwrap();
        assert!(r.ok);
        assert_eq!(r.c, l);
        let r = double_centralizer_roundtrip(&t, &MatAlgebra::scalars(&t)).unwrap();
        assert!(r.ok);
        assert_eq!(r.c, MatAlgebra::full(&t));
        let d = endomorphisms_over(&t, &ks(&t)).unwrap();
        let r = double_centralizer_roundtrip(&t, &d).unwrap();
        assert!(r.ok);
        assert_eq!(r.c, MatAlgebra::field_image(&t, &ks(&t)));
        assert_eq!(r.c.dim(), 2);
    }

    #[test]
    fn simplicity_and_center() {
        let t = ex3();
        let k = t.base();
        let e = MatAlgebra::full(&t);
        assert!(is_simple(&t, &e).unwrap());
        assert!(is_simple(&t, &MatAlgebra::image_of_l(&t)).unwrap());
        let mut idem = Matrix::zeros(k, 4, 4);
        idem.set(0, 0, k.one());
        let split = generate_algebra(&t, &[idem]).unwrap();
        assert_eq!(split.dim(), 2);
        assert!(!is_simple(&t, &split).unwrap());
        assert_eq!(center(&t, &e).unwrap(), MatAlgebra::scalars(&t));
        let d = endomorphisms_over(&t, &ks(&t)).unwrap();
        assert_eq!(center(&t, &d).unwrap(), MatAlgebra::field_image(&t, &ks(&t)));
        assert_eq!(center(&t, &MatAlgebra::image_of_l(&t)).unwrap(), MatAlgebra::image_of_l(&t));
        assert_eq!(center(&t, &split).unwrap(), split);
    }

    #[test]
    fn subfields_from_algebras() {
        let t = ex3();
        assert!(algebra_to_subfield(&t, &MatAlgebra::full(&t)).unwrap().is_base());
        assert!(algebra_to_subfield(&t, &MatAlgebra::image_of_l(&t)).unwrap().is_whole());
        let d = endomorphisms_over(&t, &ks(&t)).unwrap();
        assert_eq!(algebra_to_subfield(&t, &d).unwrap(), ks(&t));
        assert_eq!(
            algebra_to_subfield(&t, &MatAlgebra::scalars(&t)).unwrap_err(),
            MatalgError::NotContainingL
        );
    }

    #[test]
    fn embeddings() {
        let t = ex3();
        let k = t.base();
        let whole = Subfield::whole(&t);
        let id = diagonal_embedding(&t, &[t.one()], &whole).unwrap();
        assert_eq!(id.source, id.images);
        let ku = Subfield::generated(&t, &[t.gen(0)]);
        let e = [t.one(), t.gen(1)];
        let theta = diagonal_embedding(&t, &e, &ku).unwrap();
        let img = theta.image_algebra(&t).unwrap();
        assert_eq!(img.dim(), 4);
        let other = complementary_embedding(&t, &e, &ku).unwrap();
        for x in &theta.images {
            for y in &other.images {
                assert_eq!(x.mul(k, y), y.mul(k, x));
            }
        }
        let mut gens = theta.images.clone();
        gens.extend(endomorphisms_over(&t, &ku).unwrap().k_matrices(&t));
        assert_eq!(generate_algebra(&t, &gens).unwrap(), MatAlgebra::full(&t));
        assert_eq!(diagonal_embedding(&t, &[t.one(), t.gen(0)], &ku).unwrap_err(), MatalgError::NotABasis);
    }

    #[test]
    fn noether_skolem() {
        let t = ex3();
        let k = t.base();
        let ku = Subfield::generated(&t, &[t.gen(0)]);
        let a = MatAlgebra::field_image(&t, &ku);
        let id = AlgebraHom { source: a.k_matrices(&t), images: a.k_matrices(&t) };
        let u = conjugating_unit(&t, &a, &a, &id).unwrap();
        assert!(u.inverse(k).unwrap().is_some());

        // conjugate by a fixed invertible v
        let mut v = Matrix::identity(k, 4);
        v.set(0, 3, k.parse("t").unwrap());
        v.set(2, 1, k.one());
        let vi = v.inverse(k).unwrap().unwrap();
        let images: Vec<Mat> = id.source.iter().map(|x| v.mul(k, x).mul(k, &vi)).collect();
        let iso = AlgebraHom { source: id.source.clone(), images };
        iso.verify(k).unwrap();
        let b = iso.image_algebra(&t).unwrap();
        let u = conjugating_unit(&t, &a, &b, &iso).unwrap();
        let ui = u.inverse(k).unwrap().unwrap();
        for (x, y) in iso.source.iter().zip(&iso.images) {
            assert_eq!(&u.mul(k, x).mul(k, &ui), y);
        }

        // two diagonal embeddings are conjugate
        let th1 = diagonal_embedding(&t, &[t.one(), t.gen(1)], &ku).unwrap();
        let th2 = diagonal_embedding(&t, &[t.one(), t.add(&t.gen(1), &t.gen(0))], &ku).unwrap();
        let iso = AlgebraHom { source: th1.images.clone(), images: th2.images.clone() };
        let a1 = th1.image_algebra(&t).unwrap();
        let a2 = th2.image_algebra(&t).unwrap();
        let u = conjugating_unit(&t, &a1, &a2, &iso).unwrap();
        let ui = u.inverse(k).unwrap().unwrap();
        for (x, y) in th1.images.iter().zip(&th2.images) {
            assert_eq!(&u.mul(k, x).mul(k, &ui), y);
        }
    }
}
