//! Kernels of `p^e`-semilinear maps over `K = F_p(t..)`.
//!
//! `K` is free over `K^q` (`q = p^e`) on the monomials `t^r`, `0 <= r_j < q`.
//! Splitting every coefficient along that basis turns the condition
//! "`d` has entries in `K^q`" into a `K`-linear system.

use std::collections::BTreeMap;

use super::{column_kernel, LinalgError, Subspace};
use crate::basefield::{BaseField, Monomial, MultiPoly, RatFunc};
use crate::field::{Field, Ring};

/// Largest `n * q^|vars|` accepted by [`semilinear_kernel`].
pub const DEFAULT_SEMILINEAR_LIMIT: usize = 4096;

/// Write `a = sum_r c_r^q t^r` with `0 <= r_j < q`; returns the nonzero `(r, c_r)`.
pub fn residue_decomposition(k: &BaseField, a: &RatFunc, e: u32) -> Vec<(Monomial, RatFunc)> {
    let p = k.p();
    let n = k.nvars();
    if a.is_zero() {
        return Vec::new();
    }
    let q = (p as u64).pow(e) as u32;
    // a = N D^(q-1) / D^q
    let d = a.den();
    let num = if d.is_one() { a.num().clone() } else { a.num().mul(&d.pow(q as u64 - 1, p), p) };
    let mut parts: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (m, c) in num.terms() {
        let mut r = Monomial::one();
        let mut base = Monomial::one();
        for j in 0..n {
            r.0[j] = m.0[j] % q;
            base.0[j] = m.0[j] / q;
        }
        parts.entry(r).or_default().push((base, *c));
    }
    parts
        .into_iter()
        .map(|(r, terms)| {
            // the coefficient of a term is its own q-th root in F_p
            let poly = MultiPoly::from_terms(n, terms, p);
            let c = RatFunc::normalize(poly, d.clone(), p).expect("nonzero denominator");
            (r, c)
        })
        .collect()
}

/// `{v in K^n : sum_i v_i^(p^e) w_i in keep}` for vectors `w_i in K^m`.
///
/// Fails with [`LinalgError::TooLarge`] when `n * p^(e |vars|)` exceeds `limit`.
pub fn semilinear_kernel(
    k: &BaseField,
    w: &[Vec<RatFunc>],
    m: usize,
    e: u32,
    keep: &Subspace<RatFunc>,
    limit: usize,
) -> Result<Subspace<RatFunc>, LinalgError> {
    let n = w.len();
    if keep.ambient_dim() != m {
        return Err(LinalgError::DimensionMismatch(keep.ambient_dim(), m));
    }
    let q = (k.p() as usize).checked_pow(e).ok_or(LinalgError::TooLarge { needed: usize::MAX, limit })?;
    let needed = q
        .checked_pow(k.nvars() as u32)
        .and_then(|x| x.checked_mul(n))
        .ok_or(LinalgError::TooLarge { needed: usize::MAX, limit })?;
    if needed > limit {
        return Err(LinalgError::TooLarge { needed, limit });
    }
    if e == 0 {
        let residuals: Vec<_> = w.iter().map(|v| keep.residual(k, v)).collect();
        return Ok(column_kernel(k, &residuals, m)?);
    }
    // d with sum d_i w_i in keep
    let residuals: Vec<_> = w.iter().map(|v| keep.residual(k, v)).collect();
    let s = column_kernel(k, &residuals, m)?;
    // d = sum_k d_{p_k} s_k, so every d_{p_k} must itself be a q-th power nu_k^q
    let dim = s.dim();
    let mut equations: BTreeMap<(usize, Monomial), Vec<RatFunc>> = BTreeMap::new();
    let mut value: Vec<Vec<RatFunc>> = vec![vec![k.zero(); dim]; n];
    for (kk, sk) in s.basis().iter().enumerate() {
        for (i, x) in sk.iter().enumerate() {
            for (r, c) in residue_decomposition(k, x, e) {
                if r.is_one() {
                    value[i][kk] = c;
                } else {
                    equations.entry((i, r)).or_insert_with(|| vec![k.zero(); dim])[kk] = c;
                }
            }
        }
    }
    let rows: Vec<Vec<RatFunc>> = equations.into_values().collect();
    let nu = if rows.is_empty() {
        Subspace::full(k, dim)
    } else {
        super::kernel(k, &super::Matrix::from_rows(rows, dim))?
    };
    let vecs = nu.basis().iter().map(|coeffs| {
        value
            .iter()
            .map(|vi| {
                let mut acc = k.zero();
                for (a, b) in coeffs.iter().zip(vi) {
                    if !a.is_zero() && !b.is_zero() {
                        let prod = k.mul(a, b);
                        k.add_assign(&mut acc, &prod);
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
    });
    Ok(Subspace::from_vectors(k, n, vecs)?)
}

/// One `v` with `sum_i v_i^(p^e) w_i - target in keep`, or `None`.
pub fn semilinear_solve(
    k: &BaseField,
    w: &[Vec<RatFunc>],
    target: &[RatFunc],
    e: u32,
    keep: &Subspace<RatFunc>,
    limit: usize,
) -> Result<Option<Vec<RatFunc>>, LinalgError> {
    let m = target.len();
    let mut cols = w.to_vec();
    cols.push(target.iter().map(|x| k.neg(x)).collect());
    let ker = semilinear_kernel(k, &cols, m, e, keep, limit)?;
    let n = w.len();
    for v in ker.basis() {
        if !v[n].is_zero() {
            let inv = k.inv(&v[n])?;
            return Ok(Some(v[..n].iter().map(|x| k.mul(x, &inv)).collect()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_recombines() {
        let k = BaseField::new(2, &["t", "u"]).unwrap();
        let a = k.parse("(t^3*u + t + u^2 + 1)/(t^2 + u)").unwrap();
        let parts = residue_decomposition(&k, &a, 1);
        let mut acc = k.zero();
        for (r, c) in &parts {
            let tr = k.poly(MultiPoly::monomial(*r, 1, 2));
            acc = k.add(&acc, &k.mul(&k.frobenius_power(c, 1), &tr));
        }
        assert_eq!(acc, a);
    }

    #[test]
    fn square_roots_over_f2t() {
        // v^2 * t + w^2 * 1 in keep = 0  (one equation, K^1)
        let k = BaseField::new(2, &["t"]).unwrap();
        let w = vec![vec![k.parse("t").unwrap()], vec![k.one()]];
        let ker = semilinear_kernel(&k, &w, 1, 1, &Subspace::zero(1), DEFAULT_SEMILINEAR_LIMIT).unwrap();
        assert_eq!(ker.dim(), 0);
        // sqrt(t^2 + t^4) solved affinely
        let target = vec![k.parse("t^2+t^4").unwrap()];
        let v = semilinear_solve(&k, &w[1..], &target, 1, &Subspace::zero(1), 4096).unwrap().unwrap();
        assert_eq!(v, vec![k.parse("t+t^2").unwrap()]);
        assert!(semilinear_solve(&k, &w[..1], &[k.parse("t^2").unwrap()], 1, &Subspace::zero(1), 4096)
            .unwrap()
            .is_none());
    }

    #[test]
    fn guardrail() {
        let k = BaseField::new(2, &["a", "b", "c"]).unwrap();
        let w = vec![vec![k.one()]; 9];
        let err = semilinear_kernel(&k, &w, 1, 3, &Subspace::zero(1), 4096).unwrap_err();
        assert_eq!(err, LinalgError::TooLarge { needed: 9 * 512, limit: 4096 });
    }
}
