//! Derivations, differential operators and the subfields they cut out.
//!
//! Everything is relative to an [`Extension`] `L/M`.  Operators are
//! [`Op`]s, i.e. vectors `(phi(b_0), .., phi(b_{n-1}))` in `L^n`; the
//! derivation space and `D(L/M)_+` are left `L`-subspaces of `L^n`.

use thiserror::Error;

use crate::basefield::RatFunc;
use crate::exlinalg::{self, Echelon, LinalgError, Matrix, Subspace, DEFAULT_SEMILINEAR_LIMIT};
use crate::field::{ArithError, Ring};
use crate::matalg::{
    self, apply, compose, endomorphisms_over, left_mul, mult_op, op_sub, MatAlgebra, MatalgError, Op,
};
use crate::tower::relative::{present_subfield, Extension};
use crate::tower::roots::{split_low_degree_step, RootConfig, RootError};
use crate::tower::subfield::Subfield;
use crate::tower::{ExtensionTower, TowerElement, TowerError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Matalg(#[from] MatalgError),
    #[error("order filtration did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error("tensor product is not a field: {0}")]
    NotAField(String),
}

impl DiffError {
    /// The proper factor found by dynamic evaluation, if that is what failed.
    pub fn reducible_modulus(&self) -> Option<&ArithError> {
        let a = match self {
            DiffError::Arith(a) => a,
            DiffError::Linalg(LinalgError::Arith(a)) => a,
            DiffError::Tower(TowerError::Arith(a)) => a,
            DiffError::Tower(TowerError::Linalg(LinalgError::Arith(a))) => a,
            DiffError::Matalg(MatalgError::Arith(a)) => a,
            DiffError::Matalg(MatalgError::Linalg(LinalgError::Arith(a))) => a,
            DiffError::Matalg(MatalgError::Tower(TowerError::Arith(a))) => a,
            _ => return None,
        };
        matches!(a, ArithError::ReducibleModulus { .. }).then_some(a)
    }
}

/// `Der_M(L)` as a left `L`-subspace of `L^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpace {
    tower: u64,
    n: usize,
    space: Subspace<TowerElement>,
}

impl DerivationSpace {
    pub fn l_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn k_dim(&self) -> usize {
        self.space.dim() * self.n
    }

    pub fn l_basis(&self) -> &[Op] {
        self.space.basis()
    }

    pub fn space(&self) -> &Subspace<TowerElement> {
        &self.space
    }

    /// `K`-basis as matrices.
    pub fn matrices(&self, t: &ExtensionTower) -> Vec<matalg::Mat> {
        let bs: Vec<TowerElement> = (0..self.n).map(|m| t.basis_element(m)).collect();
        self.space
            .basis()
            .iter()
            .flat_map(|d| bs.iter().map(move |b| matalg::matrix_of(t, &left_mul(t, b, d))))
            .collect()
    }

    /// Leibniz on all basis pairs, `d(1) = 0` and `d(over) = 0`.
    pub fn is_certified(&self, t: &ExtensionTower, over: &Subfield) -> bool {
        let n = self.n;
        let bs: Vec<TowerElement> = (0..n).map(|m| t.basis_element(m)).collect();
        let mb = over.basis_elements(t);
        self.space.basis().iter().all(|d| {
            d[0].is_zero()
                && mb.iter().all(|m| apply(t, d, m).is_zero())
                && (0..n).all(|i| {
                    (i..n).all(|j| {
                        let lhs = apply(t, d, &t.mul(&bs[i], &bs[j]));
                        let rhs = t.add(&t.mul(&bs[i], &d[j]), &t.mul(&bs[j], &d[i]));
                        lhs == rhs
                    })
                })
        })
    }
}

fn unit_vector(t: &ExtensionTower, j: usize) -> Op {
    (0..t.degree()).map(|i| if i == j { t.one() } else { t.zero() }).collect()
}

/// `M`-linear derivations of `L`.
///
/// Unknowns are the values `d(b_j)`; the constraints are `d(m) = 0` on a
/// basis of `M` and Leibniz for every tower generator against every basis
/// element, which forces Leibniz on all products.
pub fn derivations(t: &ExtensionTower, over: &Subfield) -> Result<DerivationSpace, DiffError> {
    let n = t.degree();
    let lift = |c: &RatFunc| t.from_base(c.clone());
    let mut rows: Vec<Vec<TowerElement>> = Vec::new();
    rows.push(unit_vector(t, 0));
    for m in over.basis_elements(t) {
        rows.push(m.coords().iter().map(lift).collect());
    }
    for g in t.gens() {
        if over.contains(t, &g) {
            continue;
        }
        let dg: Vec<TowerElement> = g.coords().iter().map(lift).collect();
        for j in 0..n {
            // d(g b_j) - g d(b_j) - b_j d(g)
            let gb = t.mul_basis(&g, j);
            let bj = t.basis_element(j);
            let mut row: Vec<TowerElement> = gb.coords().iter().map(lift).collect();
            row[j] = t.sub(&row[j], &g);
            for (r, c) in row.iter_mut().zip(&dg) {
                if !c.is_zero() {
                    *r = t.sub(r, &t.mul(&bj, c));
                }
            }
            rows.push(row);
        }
    }
    let space = exlinalg::kernel(t, &Matrix::from_rows(rows, n))?;
    Ok(DerivationSpace { tower: t.id(), n, space })
}

/// `{l in L : op(l) = 0 for all ops}`.
pub fn common_kernel(t: &ExtensionTower, ops: &[Op]) -> Result<Subfield, DiffError> {
    let n = t.degree();
    if ops.is_empty() {
        return Ok(Subfield::whole(t));
    }
    let cols: Vec<Vec<RatFunc>> =
        (0..n).map(|j| ops.iter().flat_map(|o| o[j].coords().iter().cloned()).collect()).collect();
    let ker = exlinalg::column_kernel(t.base(), &cols, ops.len() * n)?;
    Ok(Subfield::from_subspace(t, ker)?)
}

/// `L^Der`.
pub fn constants_field(t: &ExtensionTower, d: &DerivationSpace) -> Result<Subfield, DiffError> {
    common_kernel(t, d.l_basis())
}

/// Constants of `Der(M_k / base)` on `M_k` presented as its own tower.
fn constants_step(ext: &Extension, m: &Subfield) -> Result<Option<Subfield>, DiffError> {
    let t = ext.tower();
    if m.is_whole() {
        let d = derivations(t, ext.base())?;
        return if d.l_dim() == 0 { Ok(None) } else { Ok(Some(constants_field(t, &d)?)) };
    }
    let pres = present_subfield(t, m)?;
    let over_gens: Vec<TowerElement> = ext.base().generators(t).iter().map(|x| pres.pull_back(x)).collect();
    let over = Subfield::generated(&pres.tower, &over_gens);
    let d = derivations(&pres.tower, &over)?;
    if d.l_dim() == 0 {
        return Ok(None);
    }
    let c = constants_field(&pres.tower, &d)?;
    let vecs = c.basis_elements(&pres.tower).iter().map(|x| pres.embed(t, x).into_coords()).collect::<Vec<_>>();
    Ok(Some(Subfield::from_subspace(t, Subspace::from_vectors(t.base(), t.degree(), vecs)?)?))
}

/// `L^sep`, with the number of constant-field steps taken.
pub fn separable_closure_steps(ext: &Extension) -> Result<(Subfield, usize), DiffError> {
    let mut m = Subfield::whole(ext.tower());
    let mut steps = 0;
    while let Some(next) = constants_step(ext, &m)? {
        m = next;
        steps += 1;
    }
    Ok((m, steps))
}

/// `L^sep`: iterate `M <- M^Der(M/base)` from `M = L` until `M` has no derivations.
pub fn separable_closure(ext: &Extension) -> Result<Subfield, DiffError> {
    Ok(separable_closure_steps(ext)?.0)
}

/// `D(L/M)` with its split `D = L (+) D_+`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOpAlgebra {
    pub algebra: MatAlgebra,
    plus: Subspace<TowerElement>,
    /// `K`-dimensions of `D_0 ⊆ D_1 ⊆ ..` when built by the order filtration.
    pub filtration: Option<Vec<usize>>,
}

impl DiffOpAlgebra {
    fn new(t: &ExtensionTower, algebra: MatAlgebra, filtration: Option<Vec<usize>>) -> Result<Self, DiffError> {
        let n = t.degree();
        let hyper = Subspace::from_vectors(t, n, (1..n).map(|j| unit_vector(t, j)))?;
        let plus = algebra.l_space().expect("D contains L").meet(t, &hyper)?;
        Ok(DiffOpAlgebra { algebra, plus, filtration })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Left `L`-basis of `D_+ = {d in D : d(1) = 0}`.
    pub fn plus_basis(&self) -> &[Op] {
        self.plus.basis()
    }

    pub fn plus_dim(&self) -> usize {
        self.plus.dim() * self.algebra.degree()
    }

    /// `d = d(1) + d_+`.
    pub fn split(&self, t: &ExtensionTower, d: &[TowerElement]) -> (TowerElement, Op) {
        let c = d[0].clone();
        (c.clone(), op_sub(t, d, &mult_op(t, &c)))
    }

    /// `D = L (+) D_+` and `D D_+ ⊆ D_+`.
    pub fn is_certified(&self, t: &ExtensionTower) -> bool {
        let n = t.degree();
        let rows = self.algebra.l_basis().expect("D contains L");
        let e = Echelon::from_subspace(&self.plus);
        let bs: Vec<TowerElement> = (0..n).map(|m| t.basis_element(m)).collect();
        self.dim() == n + self.plus_dim()
            && self.algebra.contains_op(t, &matalg::identity_op(t))
            && self.plus.basis().iter().all(|q| self.algebra.contains_op(t, q))
            && rows.iter().all(|r| {
                bs.iter().all(|b| self.plus.basis().iter().all(|q| e.contains(t, &compose(t, r, &left_mul(t, b, q)))))
            })
    }
}

/// `D(L/M) = E(L/L^sep)`.
pub fn diff_ops(ext: &Extension) -> Result<DiffOpAlgebra, DiffError> {
    let t = ext.tower();
    let sep = separable_closure(ext)?;
    DiffOpAlgebra::new(t, endomorphisms_over(t, &sep)?, None)
}

/// `D(L/M)` as the union of `D_0 = L`, `D_i = {phi in E(L/M) : [phi, g] in D_{i-1}}`.
///
/// `g` runs over the tower generators outside `M`; since each `D_i` is an
/// `L`-bimodule this gives the same `D_i` as running over all of `L`.
pub fn diff_ops_by_filtration(ext: &Extension, max_order: usize) -> Result<DiffOpAlgebra, DiffError> {
    let t = ext.tower();
    let n = t.degree();
    let gens: Vec<TowerElement> = t.gens().into_iter().filter(|g| !ext.base().contains(t, g)).collect();
    let within = endomorphisms_over(t, ext.base())?;
    let w = within.l_basis().expect("E(L/M) contains L").to_vec();
    let mut prev = MatAlgebra::image_of_l(t).l_space().expect("L contains L").clone();
    let mut dims = vec![prev.dim() * n];
    if gens.is_empty() {
        return DiffOpAlgebra::new(t, MatAlgebra::from_l_span(t, prev.basis().to_vec())?, Some(dims));
    }
    let ad: Vec<Vec<Op>> = w
        .iter()
        .map(|wi| gens.iter().map(|g| op_sub(t, &compose(t, wi, &mult_op(t, g)), &left_mul(t, g, wi))).collect())
        .collect();
    for _ in 0..=max_order {
        let ech = Echelon::from_subspace(&prev);
        let cols: Vec<Vec<TowerElement>> =
            ad.iter().map(|row| row.iter().flat_map(|c| ech.residual(t, c)).collect()).collect();
        let ker = exlinalg::column_kernel(t, &cols, gens.len() * n)?;
        let next = Subspace::from_vectors(t, n, ker.basis().iter().map(|l| exlinalg::combine(t, l, &w, n)))?;
        if next == prev {
            let a = MatAlgebra::from_l_span(t, prev.basis().to_vec())?;
            return DiffOpAlgebra::new(t, a, Some(dims));
        }
        dims.push(next.dim() * n);
        prev = next;
    }
    Err(DiffError::NotStabilized(max_order))
}

/// `L^{D_+}`.
pub fn dplus_constants(t: &ExtensionTower, d: &DiffOpAlgebra) -> Result<Subfield, DiffError> {
    common_kernel(t, d.plus_basis())
}

/// `L_dif = C_L(D)`.
pub fn l_dif(t: &ExtensionTower, d: &DiffOpAlgebra) -> Result<Subfield, DiffError> {
    Ok(matalg::algebra_to_subfield(t, &d.algebra)?)
}

/// `L^pi = {a : a^(p^m) in M}`, `m = ceil(log_p [L:M])`.
pub fn purely_inseparable_part(ext: &Extension) -> Result<Subfield, DiffError> {
    let t = ext.tower();
    let n = t.degree();
    let p = t.p() as usize;
    let mut e = 0u32;
    while p.pow(e) < ext.degree() {
        e += 1;
    }
    let w: Vec<Vec<RatFunc>> = (0..n).map(|i| t.frobenius(&t.basis_element(i), e).into_coords()).collect();
    let ker = exlinalg::semilinear_kernel(t.base(), &w, n, e, ext.base().space(), DEFAULT_SEMILINEAR_LIMIT)?;
    Ok(Subfield::from_subspace(t, ker)?)
}

/// `Delta(L) = L<Der>`.
pub fn derivation_algebra(t: &ExtensionTower, d: &DerivationSpace) -> Result<MatAlgebra, DiffError> {
    Ok(matalg::generate_over_l(t, d.l_basis())?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDiffReport {
    /// `dim D(L1)`, `dim D(L2)`, `dim D(L1 (x) L2)`.
    pub dims: [usize; 3],
    pub product_ok: bool,
    /// `D(L)` is generated by the two embedded factors.
    pub generated_ok: bool,
}

impl TensorDiffReport {
    pub fn ok(&self) -> bool {
        self.product_ok && self.generated_ok
    }
}

fn as_field_error(e: DiffError) -> DiffError {
    match e.reducible_modulus() {
        Some(a) => DiffError::NotAField(a.to_string()),
        None => e,
    }
}

/// `D(L1 (x) L2) = D(L1) (x) D(L2)`.
pub fn tensor_diffops_check(t1: &ExtensionTower, t2: &ExtensionTower) -> Result<TensorDiffReport, DiffError> {
    let t = t1.tensor(t2)?;
    match split_low_degree_step(&t, &RootConfig::default()) {
        Ok(Some(i)) => {
            let name = t.steps()[i].name().to_string();
            return Err(DiffError::NotAField(format!("minimal polynomial of {name} has a root below it")));
        }
        Ok(None) => {}
        Err(RootError::Tower(TowerError::Arith(a))) => return Err(DiffError::NotAField(a.to_string())),
        Err(_) => {}
    }
    let d1 = diff_ops(&Extension::absolute(t1))?;
    let d2 = diff_ops(&Extension::absolute(t2))?;
    let d = diff_ops(&Extension::absolute(&t)).map_err(as_field_error)?;
    let n1 = t1.degree();
    let mut gens: Vec<Op> = d1.algebra.k_basis(t1).iter().map(|o| matalg::tensor_left(&t, n1, o)).collect();
    gens.extend(d2.algebra.k_basis(t2).iter().map(|o| matalg::tensor_right(&t, n1, o)));
    let g = matalg::generate_ops(&t, &gens).map_err(|e| as_field_error(e.into()))?;
    let dims = [d1.dim(), d2.dim(), d.dim()];
    Ok(TensorDiffReport { dims, product_ok: dims[2] == dims[0] * dims[1], generated_ok: g == d.algebra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::ambient::from_ambient;
    use crate::tower::fixtures::*;

    fn ex5() -> ExtensionTower {
        from_ambient(2, &["x", "y", "z"], &["x^2", "y^2", "z^4"], &[("a", "z"), ("b", "x*z + y")]).unwrap().tower
    }

    fn gen_field(t: &ExtensionTower, i: usize) -> Subfield {
        Subfield::generated(t, &[t.gen(i)])
    }

    #[test]
    fn derivation_spaces() {
        let t = ex1();
        let d = derivations(&t, &Subfield::base(&t)).unwrap();
        assert_eq!((d.l_dim(), d.k_dim()), (1, 2));
        let du = &d.l_basis()[0];
        assert!(apply(&t, du, &t.gen(0)).as_base().is_some());
        assert!(d.is_certified(&t, &Subfield::base(&t)));
        let t = ex2();
        assert_eq!(derivations(&t, &Subfield::base(&t)).unwrap().l_dim(), 0);
        let t = ex3();
        let d = derivations(&t, &Subfield::base(&t)).unwrap();
        assert_eq!((d.l_dim(), d.k_dim()), (1, 4));
        assert!(d.is_certified(&t, &Subfield::base(&t)));
        // the unique extension of d/du kills s
        assert!(apply(&t, &d.l_basis()[0], &t.gen(1)).is_zero());
    }

    #[test]
    fn constants_and_closure() {
        let t = ex1();
        let d = derivations(&t, &Subfield::base(&t)).unwrap();
        assert!(constants_field(&t, &d).unwrap().is_base());
        let t = ex2();
        let d = derivations(&t, &Subfield::base(&t)).unwrap();
        assert!(constants_field(&t, &d).unwrap().is_whole());
        let t = ex3();
        let d = derivations(&t, &Subfield::base(&t)).unwrap();
        assert_eq!(constants_field(&t, &d).unwrap(), gen_field(&t, 1));

        assert!(separable_closure(&Extension::absolute(&ex1())).unwrap().is_base());
        let t = ex3();
        assert_eq!(separable_closure_steps(&Extension::absolute(&t)).unwrap(), (gen_field(&t, 1), 1));
        assert!(separable_closure(&Extension::absolute(&ex4())).unwrap().is_whole());
        let t5 = ex5();
        let (s, steps) = separable_closure_steps(&Extension::absolute(&t5)).unwrap();
        assert!(s.is_base());
        assert_eq!(steps, 2);
    }

    #[test]
    fn differential_operators() {
        for (t, dim) in [(ex1(), 4), (ex2(), 2), (ex3(), 8), (ex4(), 3)] {
            let ext = Extension::absolute(&t);
            let d = diff_ops(&ext).unwrap();
            assert_eq!(d.dim(), dim);
            assert!(d.is_certified(&t));
            let f = diff_ops_by_filtration(&ext, t.degree()).unwrap();
            assert_eq!(f.algebra, d.algebra);
            assert_eq!(f.plus_basis(), d.plus_basis());
        }
        let t = ex1();
        let f = diff_ops_by_filtration(&Extension::absolute(&t), 2).unwrap();
        assert_eq!(f.filtration, Some(vec![2, 4]));
        let t = ex2();
        let f = diff_ops_by_filtration(&Extension::absolute(&t), 2).unwrap();
        assert_eq!(f.filtration, Some(vec![2]));
    }

    #[test]
    fn distinguished_subfields() {
        let cases = [(ex1(), "K", "L"), (ex2(), "L", "K"), (ex3(), "s", "u")];
        for (t, sep, pi) in cases {
            let ext = Extension::absolute(&t);
            let want = |name: &str| match name {
                "K" => Subfield::base(&t),
                "L" => Subfield::whole(&t),
                g => gen_field(&t, t.gen_index(g).unwrap()),
            };
            let d = diff_ops(&ext).unwrap();
            assert_eq!(dplus_constants(&t, &d).unwrap(), want(sep));
            assert_eq!(l_dif(&t, &d).unwrap(), want(sep));
            assert_eq!(purely_inseparable_part(&ext).unwrap(), want(pi));
        }
        let t5 = ex5();
        assert!(purely_inseparable_part(&Extension::absolute(&t5)).unwrap().is_whole());
        assert!(purely_inseparable_part(&Extension::absolute(&ex4())).unwrap().is_base());
    }

    #[test]
    fn derivation_algebras() {
        let t = ex1();
        let der = derivations(&t, &Subfield::base(&t)).unwrap();
        let delta = derivation_algebra(&t, &der).unwrap();
        assert_eq!(delta, diff_ops(&Extension::absolute(&t)).unwrap().algebra);
        let t = ex2();
        let der = derivations(&t, &Subfield::base(&t)).unwrap();
        assert_eq!(derivation_algebra(&t, &der).unwrap(), MatAlgebra::image_of_l(&t));
        let t5 = ex5();
        let der = derivations(&t5, &Subfield::base(&t5)).unwrap();
        assert_eq!(der.l_dim(), 2);
        let delta = derivation_algebra(&t5, &der).unwrap();
        let d = diff_ops(&Extension::absolute(&t5)).unwrap();
        assert_eq!(d.dim(), 64);
        assert!(delta.dim() < 64 && delta.is_subalgebra_of(&t5, &d.algebra));
    }

    #[test]
    fn relative_operators() {
        let t = ex3();
        let ku = gen_field(&t, 0);
        let ext = Extension::over(&t, ku.clone());
        assert!(separable_closure(&ext).unwrap().is_whole());
        assert_eq!(diff_ops(&ext).unwrap().dim(), 4);
        assert_eq!(diff_ops_by_filtration(&ext, 4).unwrap().dim(), 4);
        let ks = gen_field(&t, 1);
        let ext = Extension::over(&t, ks.clone());
        let d = diff_ops(&ext).unwrap();
        assert_eq!(d.algebra, diff_ops(&Extension::absolute(&t)).unwrap().algebra);
        assert_eq!(l_dif(&t, &d).unwrap(), ks);
        assert_eq!(purely_inseparable_part(&ext).unwrap(), Subfield::whole(&t));
    }

    #[test]
    fn tensor_of_operator_algebras() {
        let r = tensor_diffops_check(&ex1(), &ex2()).unwrap();
        assert_eq!(r.dims, [4, 2, 8]);
        assert!(r.ok());
        let trivial = ExtensionTower::new(f2t());
        let r = tensor_diffops_check(&ex4(), &trivial).unwrap();
        assert_eq!(r.dims, [3, 1, 3]);
        assert!(r.ok());
        // u^2 = t twice: the second factor is no longer a field
        let v = ExtensionTower::new(f2t()).extend_parsed("v", "v^2 + t").unwrap();
        assert!(matches!(tensor_diffops_check(&ex1(), &v), Err(DiffError::NotAField(_))));
    }
}
