//! Roots in `L` of polynomials with coefficients in `K`.
//!
//! A polynomial is first written as `fsep(x^(p^e))` with `fsep` separable.
//! Roots of `fsep` over `F_p(t)` are found by specializing `t -> τ` in a
//! finite field, splitting the specialized algebra into local components,
//! solving in the Teichmüller field of each component and lifting
//! `t`-adically.  Candidates come back by Padé approximation and every
//! reported root is verified exactly in `L`.  The `p^e`-th roots are then
//! taken by semilinear algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::finite::TowerAlgebra;
use super::gf::Gf;
use super::series::{rational_reconstruction, unshift, Series};
use super::subfield::eval_base_poly;
use super::{ExtensionTower, TowerElement, TowerError};
use crate::basefield::{MultiPoly, RatFunc, UniPoly};
use crate::exlinalg::{self, semilinear_solve, Echelon, Matrix, Subspace, DEFAULT_SEMILINEAR_LIMIT};
use crate::field::{ArithError, Field, Ring};

/// Search limits for [`roots_in_field`].
#[derive(Clone, Debug)]
pub struct RootConfig {
    /// Degree bound for numerators and denominators of root coordinates;
    /// derived from the input when `None`.
    pub degree_bound: Option<usize>,
    /// Largest `k` for specialization points in `F_(p^k)`.
    pub max_extension: u32,
    /// Largest number of root combinations tried per specialization.
    pub combo_budget: usize,
    /// Extra specialization points lifted from when a search is not yet complete.
    pub extra_points: usize,
    /// Largest number of specialization points examined.
    pub max_points: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig { degree_bound: None, max_extension: 8, combo_budget: 4096, extra_points: 1, max_points: 24 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// Every root in `L` is listed.
    Complete,
    /// Roots whose coordinates have degree above `bound` may be missing.
    Heuristic { bound: usize },
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<TowerElement>,
    pub completeness: Completeness,
}

impl RootSet {
    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Complete
    }

    fn complete(roots: Vec<TowerElement>) -> Self {
        RootSet { roots, completeness: Completeness::Complete }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("no admissible specialization point in F_(p^k) for k <= {0}")]
    NoGoodSpecialization(u32),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("{0}")]
    Unsupported(String),
}

impl From<ArithError> for RootError {
    fn from(e: ArithError) -> Self {
        RootError::Tower(e.into())
    }
}

impl From<exlinalg::LinalgError> for RootError {
    fn from(e: exlinalg::LinalgError) -> Self {
        RootError::Tower(e.into())
    }
}

/// All roots of `f` in `L`.
pub fn roots_in_field(t: &ExtensionTower, f: &UniPoly<RatFunc>, cfg: &RootConfig) -> Result<RootSet, RootError> {
    let k = t.base();
    match f.degree() {
        None => return Err(RootError::Unsupported("roots of the zero polynomial".into())),
        Some(0) => return Ok(RootSet::complete(Vec::new())),
        _ => {}
    }
    let f = f.monic(k)?;
    let (g, e) = f.separable_presentation(k);
    let sep = separable_roots(t, &g, cfg)?;
    let mut roots = Vec::new();
    for rho in &sep.roots {
        if let Some(r) = prime_power_root(t, rho, e)? {
            debug_assert!(eval_base_poly(t, &f, &r).is_zero());
            roots.push(r);
        }
    }
    Ok(RootSet { roots, completeness: sep.completeness })
}

/// First step of degree at most 3 with minimal polynomial over `K` that has
/// a root in the field below it; such a tower is not a field.
pub fn split_low_degree_step(t: &ExtensionTower, cfg: &RootConfig) -> Result<Option<usize>, RootError> {
    for i in 0..t.nsteps() {
        let f = t.step_minpoly(i);
        if f.degree().unwrap_or(0) > 3 {
            continue;
        }
        let Some(coeffs) = f.coeffs().iter().map(|c| c.as_base().cloned()).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let below = t.prefix(i);
        if !roots_in_field(&below, &UniPoly::new(coeffs, t.base()), cfg)?.roots.is_empty() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The unique `r` with `r^(p^e) = a`, if it lies in `L`.
pub fn prime_power_root(t: &ExtensionTower, a: &TowerElement, e: u32) -> Result<Option<TowerElement>, RootError> {
    if e == 0 {
        return Ok(Some(a.clone()));
    }
    let n = t.degree();
    let w: Vec<Vec<RatFunc>> = (0..n).map(|i| t.frobenius(&t.basis_element(i), e).into_coords()).collect();
    let v = semilinear_solve(t.base(), &w, a.coords(), e, &Subspace::zero(n), DEFAULT_SEMILINEAR_LIMIT)?;
    Ok(v.map(|c| t.from_coords(c)))
}

fn separable_roots(t: &ExtensionTower, g: &UniPoly<RatFunc>, cfg: &RootConfig) -> Result<RootSet, RootError> {
    let k = t.base();
    if g.degree() == Some(1) {
        return Ok(RootSet::complete(vec![t.from_base(k.neg(&g.coeffs()[0]))]));
    }
    match k.nvars() {
        0 => finite_roots(t, g),
        1 => {
            if g.gcd(&g.derivative(k), k)?.degree() != Some(0) {
                return Err(RootError::Unsupported("separable part is not squarefree".into()));
            }
            lifted_roots(t, g, cfg)
        }
        _ => Err(RootError::Unsupported(
            "roots of separable polynomials of degree above 1 need at most one base variable".into(),
        )),
    }
}

/// Minimal polynomials of the steps and the polynomial, as rational functions.
struct Raw {
    p: u32,
    minpolys: Vec<Vec<Vec<RatFunc>>>,
    g: Vec<RatFunc>,
}

impl Raw {
    fn new(t: &ExtensionTower, g: &UniPoly<RatFunc>) -> Self {
        Raw { p: t.p(), minpolys: t.steps.iter().map(|s| s.minpoly.clone()).collect(), g: g.coeffs().to_vec() }
    }

    fn all(&self) -> impl Iterator<Item = &RatFunc> {
        self.minpolys.iter().flatten().flatten().chain(&self.g)
    }

    fn degree_bound(&self) -> usize {
        let d: u64 = self.all().map(|r| r.num().total_degree() + r.den().total_degree()).sum();
        4 * (d as usize + 1)
    }

    fn at_point(&self, gf: &Gf, tau: u32) -> Option<(Vec<Vec<Vec<u32>>>, Vec<u32>)> {
        let ev = |r: &RatFunc| eval_ratfunc(gf, r, tau);
        let mut mp = Vec::new();
        for f in &self.minpolys {
            let mut cs = Vec::new();
            for c in f {
                cs.push(c.iter().map(ev).collect::<Option<Vec<u32>>>()?);
            }
            mp.push(cs);
        }
        let g = self.g.iter().map(ev).collect::<Option<Vec<u32>>>()?;
        Some((mp, g))
    }

    fn as_series(&self, s: &Series, tau: u32) -> (Vec<Vec<Vec<Vec<u32>>>>, Vec<Vec<u32>>) {
        let ev = |r: &RatFunc| series_of(s, r, tau);
        let mp = self.minpolys.iter().map(|f| f.iter().map(|c| c.iter().map(ev).collect()).collect()).collect();
        (mp, self.g.iter().map(ev).collect())
    }
}

fn dense_in_gf(gf: &Gf, m: &MultiPoly) -> Vec<u32> {
    m.to_dense().into_iter().map(|c| gf.from_prime(c)).collect()
}

fn horner(gf: &Gf, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, c| gf.add(&gf.mul(&acc, &x), c))
}

fn eval_ratfunc(gf: &Gf, r: &RatFunc, tau: u32) -> Option<u32> {
    let den = horner(gf, &dense_in_gf(gf, r.den()), tau);
    if den == 0 {
        return None;
    }
    Some(gf.div(&horner(gf, &dense_in_gf(gf, r.num()), tau), &den).expect("nonzero"))
}

fn series_of(s: &Series, r: &RatFunc, tau: u32) -> Vec<u32> {
    let num = s.shift_poly(&dense_in_gf(s.gf, r.num()), tau);
    let den = s.shift_poly(&dense_in_gf(s.gf, r.den()), tau);
    s.mul(&num, &s.inv_unit(&den).expect("admissible point"))
}

type Alg<'a> = TowerAlgebra<&'a Gf>;

/// A local factor `e * A` of a finite algebra with the roots of `g` in its
/// Teichmüller field.
struct Component {
    idem: Vec<u32>,
    /// Degree of the Teichmüller field over `F_q`.
    dim: usize,
    roots: Vec<Vec<u32>>,
}

/// The Teichmüller field of `e * A`, a subfield of `A` with identity `e`.
struct Teich<'a, 'g> {
    alg: &'a Alg<'g>,
    e: Vec<u32>,
}

impl Ring for Teich<'_, '_> {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        self.alg.zero()
    }
    fn one(&self) -> Vec<u32> {
        self.e.clone()
    }
    fn is_zero(&self, a: &Vec<u32>) -> bool {
        self.alg.is_zero(a)
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.alg.add(a, b)
    }
    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.alg.sub(a, b)
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        self.alg.neg(a)
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        self.alg.mul(a, b)
    }
    fn from_int(&self, n: i64) -> Vec<u32> {
        self.alg.scale(&self.e, &self.alg.ring.from_int(n))
    }
    fn characteristic(&self) -> u32 {
        self.alg.characteristic()
    }
}

impl Field for Teich<'_, '_> {
    fn inv(&self, a: &Vec<u32>) -> Result<Vec<u32>, ArithError> {
        let y = solve_in(self.alg, a, &self.e).ok_or(ArithError::DivisionByZero)?;
        Ok(self.alg.mul(&y, &self.e))
    }
}

/// Some `y` with `a * y = b`.
fn solve_in(alg: &Alg, a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let n = alg.dim();
    let a = a.to_vec();
    let cols: Vec<Vec<u32>> = (0..n).map(|j| alg.mul(&a, &alg.basis_element(j))).collect();
    exlinalg::solve(alg.ring, &Matrix::from_columns(&cols, n), b).ok().flatten()
}

/// Roots in `F_q` of the minimal polynomial of `x` over `F_q`.
fn eigenvalues(alg: &Alg, x: &[u32]) -> Vec<u32> {
    let gf = alg.ring;
    let mut ech = Echelon::new(alg.dim());
    let mut powers = vec![alg.one()];
    loop {
        let next = alg.mul(powers.last().unwrap(), &x.to_vec());
        if !ech.insert(gf, powers.last().unwrap().clone()).expect("field") {
            break;
        }
        powers.push(next);
    }
    let m = powers.len() - 1;
    let c = exlinalg::solve(gf, &Matrix::from_columns(&powers[..m], alg.dim()), &powers[m])
        .expect("field")
        .expect("dependent");
    let mut poly: Vec<u32> = c.iter().map(|v| gf.neg(v)).collect();
    poly.push(1);
    gf.elements().filter(|&l| horner(gf, &poly, l) == 0).collect()
}

fn primitive_idempotents(alg: &Alg) -> Vec<Vec<u32>> {
    let gf = alg.ring;
    let n = alg.dim();
    let q = gf.order() as u64;
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let b = alg.basis_element(i);
            alg.sub(&alg.pow(&b, q), &b)
        })
        .collect();
    let fixed = exlinalg::column_kernel(gf, &cols, n).expect("field");
    let mut idems = vec![alg.one()];
    for b in fixed.basis() {
        let mut next = Vec::new();
        for e in &idems {
            let x = alg.mul(b, e);
            let eig = eigenvalues(alg, &x);
            for &l in &eig {
                let mut acc = e.clone();
                for &mu in eig.iter().filter(|&&mu| mu != l) {
                    let lin = alg.sub(&x, &alg.scale(e, &mu));
                    let c = gf.inv(&gf.sub(&l, &mu)).expect("distinct");
                    acc = alg.scale(&alg.mul(&acc, &lin), &c);
                }
                if !alg.is_zero(&acc) {
                    next.push(acc);
                }
            }
        }
        idems = next;
    }
    idems
}

/// Split `A` and find the roots of `g` in each Teichmüller field.
fn components(alg: &Alg, g: &[u32], rng: &mut ChaCha8Rng) -> Vec<Component> {
    let gf = alg.ring;
    let n = alg.dim();
    let q = gf.order() as u64;
    let mut m = 0;
    while (q as u128).pow(m) < n as u128 {
        m += 1;
    }
    primitive_idempotents(alg)
        .into_iter()
        .map(|e| {
            let image = (0..n).map(|i| {
                let mut a = alg.mul(&e, &alg.basis_element(i));
                for _ in 0..m {
                    a = alg.pow(&a, q);
                }
                a
            });
            let s = Subspace::from_vectors(gf, n, image).expect("field");
            let field = Teich { alg, e: e.clone() };
            let roots = teich_roots(&field, s.basis(), g, rng);
            Component { idem: e, dim: s.dim(), roots }
        })
        .collect()
}

fn teich_roots(s: &Teich, basis: &[Vec<u32>], g: &[u32], rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let gf = s.alg.ring;
    let q = gf.order() as u64;
    let d = basis.len() as u32;
    let gs = UniPoly::new(g.iter().map(|c| s.alg.scale(&s.e, c)).collect(), s);
    let total = q.checked_pow(d);
    if total.is_some_and(|x| x <= 256) {
        // enumerate the whole field
        let mut out = Vec::new();
        for idx in 0..total.unwrap() {
            let mut a = s.zero();
            let mut j = idx;
            for b in basis {
                let c = (j % q) as u32;
                j /= q;
                a = s.add(&a, &s.alg.scale(b, &c));
            }
            if s.is_zero(&gs.eval(&a, s)) {
                out.push(a);
            }
        }
        return out;
    }
    // gcd with x^Q - x, then equal-degree splitting
    let x = UniPoly::x(s);
    let mut xq = x.clone();
    for _ in 0..d {
        xq = xq.pow_mod(q, &gs, s).expect("field");
    }
    let h = gs.gcd(&xq.sub(&x, s), s).expect("field");
    let mut out = Vec::new();
    let mut stack = vec![h];
    while let Some(h) = stack.pop() {
        match h.degree() {
            None | Some(0) => {}
            Some(1) => out.push(s.neg(&h.coeffs()[0])),
            Some(_) => {
                for _ in 0..256 {
                    let delta = basis.iter().fold(s.zero(), |acc, b| {
                        s.add(&acc, &s.alg.scale(b, &rng.gen_range(0..q as u32)))
                    });
                    let w = splitter(s, &h, &delta, d);
                    let f1 = h.gcd(&w, s).expect("field");
                    let d1 = f1.degree().unwrap_or(0);
                    if d1 > 0 && Some(d1) < h.degree() {
                        let (f2, _) = h.divrem(&f1, s).expect("field");
                        stack.push(f1);
                        stack.push(f2);
                        break;
                    }
                }
            }
        }
    }
    out
}

/// `(x + δ)^((Q-1)/2) - 1` for odd `Q`, the absolute trace of `δx` for even `Q`, modulo `h`.
fn splitter(s: &Teich, h: &UniPoly<Vec<u32>>, delta: &Vec<u32>, d: u32) -> UniPoly<Vec<u32>> {
    let gf = s.alg.ring;
    let q = gf.order() as u64;
    if gf.p() == 2 {
        let y = UniPoly::new(vec![s.zero(), delta.clone()], s);
        let mut cur = y.rem(h, s).expect("field");
        let mut acc = cur.clone();
        for _ in 1..(gf.k() * d) {
            cur = cur.mul(&cur, s).rem(h, s).expect("field");
            acc = acc.add(&cur, s);
        }
        return acc;
    }
    let base = UniPoly::new(vec![delta.clone(), s.one()], s);
    let y = base.pow_mod((q - 1) / 2, h, s).expect("field");
    let mut cur = y.clone();
    let mut acc = y;
    for _ in 1..d {
        cur = cur.pow_mod(q, h, s).expect("field");
        acc = acc.mul(&cur, s).rem(h, s).expect("field");
    }
    acc.sub(&UniPoly::constant(s.one(), s), s)
}

fn finite_roots(t: &ExtensionTower, g: &UniPoly<RatFunc>) -> Result<RootSet, RootError> {
    let gf = Gf::new(t.p(), 1).expect("prime field");
    let raw = Raw::new(t, g);
    let (mp, gt) = raw.at_point(&gf, 0).expect("constants");
    let alg = TowerAlgebra::new(&gf, mp);
    let mut rng = ChaCha8Rng::seed_from_u64(0x626578);
    let comps = components(&alg, &gt, &mut rng);
    let mut roots = Vec::new();
    let sizes: Vec<usize> = comps.iter().map(|c| c.roots.len()).collect();
    for combo in combos(&sizes, usize::MAX) {
        let r = combo.iter().enumerate().fold(alg.zero(), |acc, (j, &i)| alg.add(&acc, &comps[j].roots[i]));
        let coords = r
            .iter()
            .map(|c| RatFunc::constant(gf.to_prime(*c).expect("prime field"), 0, t.p()))
            .collect();
        let r = t.from_coords(coords);
        if eval_base_poly(t, g, &r).is_zero() {
            roots.push(r);
        }
    }
    Ok(RootSet::complete(roots))
}

/// Index vectors choosing one root per component, at most `budget` of them.
fn combos(sizes: &[usize], budget: usize) -> Vec<Vec<usize>> {
    if sizes.contains(&0) {
        return Vec::new();
    }
    let mut out = vec![vec![0; sizes.len()]];
    while out.len() < budget {
        let mut next = out.last().unwrap().clone();
        let mut j = 0;
        while j < sizes.len() {
            next[j] += 1;
            if next[j] < sizes[j] {
                break;
            }
            next[j] = 0;
            j += 1;
        }
        if j == sizes.len() {
            break;
        }
        out.push(next);
    }
    out
}

fn admissible_points(raw: &Raw, max_k: u32) -> impl Iterator<Item = (Gf, u32)> + '_ {
    (1..=max_k).filter_map(move |k| Gf::new(raw.p, k)).flat_map(move |gf| {
        let pts: Vec<u32> = gf
            .elements()
            .filter(|&tau| gf.k() == 1 || gf.to_prime(tau).is_none())
            .filter(|&tau| {
                let Some((_, g)) = raw.at_point(&gf, tau) else { return false };
                let gp = UniPoly::new(g, &gf);
                gp.gcd(&gp.derivative(&gf), &gf).expect("field").degree() == Some(0)
            })
            .collect();
        pts.into_iter().map(move |tau| (gf.clone(), tau))
    })
}

/// Upper bound on the number of roots in `L` from a point whose specialized
/// algebra is reduced.
///
/// The order generated by the tower is then étale at `τ`, so every root in
/// `L` reduces to a root in the specialized algebra and distinct roots stay
/// distinct.  Besides the `m` known roots, each further root is a root of
/// `g / prod (x - r_i)`, which in component `j` has `counts[j] - m` roots.
fn root_bound(counts: &[usize], m: usize) -> usize {
    m + counts.iter().map(|c| c.saturating_sub(m)).product::<usize>()
}

fn lifted_roots(t: &ExtensionTower, g: &UniPoly<RatFunc>, cfg: &RootConfig) -> Result<RootSet, RootError> {
    let raw = Raw::new(t, g);
    let n = g.degree().unwrap();
    let base_bound = cfg.degree_bound.unwrap_or_else(|| raw.degree_bound());
    let bounds = if cfg.degree_bound.is_some() { vec![base_bound] } else { vec![base_bound, 3 * base_bound] };
    let mut found: Vec<TowerElement> = Vec::new();
    let (mut visited, mut lifted) = (0, 0);
    for (gf, tau) in admissible_points(&raw, cfg.max_extension) {
        if visited == cfg.max_points {
            break;
        }
        visited += 1;
        let (mp, gt) = raw.at_point(&gf, tau).expect("admissible");
        let alg = TowerAlgebra::new(&gf, mp);
        let mut rng = ChaCha8Rng::seed_from_u64(0x626578 ^ tau as u64);
        let comps = components(&alg, &gt, &mut rng);
        let reduced = comps.iter().map(|c| c.dim).sum::<usize>() == alg.dim();
        let counts: Vec<usize> = comps.iter().map(|c| c.roots.len()).collect();
        let certified = |m: usize| m == n || (reduced && root_bound(&counts, m) == m);
        if lifted <= cfg.extra_points && comps.iter().all(|c| !c.roots.is_empty()) {
            lifted += 1;
            for &bound in &bounds {
                for r in lift_roots(t, g, &raw, &alg, &comps, tau, bound, cfg.combo_budget) {
                    if !found.contains(&r) {
                        found.push(r);
                    }
                }
                if certified(found.len()) {
                    return Ok(RootSet::complete(found));
                }
            }
        }
        if certified(found.len()) {
            return Ok(RootSet::complete(found));
        }
    }
    if visited == 0 {
        return Err(RootError::NoGoodSpecialization(cfg.max_extension));
    }
    Ok(RootSet { roots: found, completeness: Completeness::Heuristic { bound: *bounds.last().unwrap() } })
}

fn steps_for(d: usize) -> usize {
    (usize::BITS - d.leading_zeros()) as usize + 1
}

/// Verified roots lifted `t`-adically from the roots in each component.
#[allow(clippy::too_many_arguments)]
fn lift_roots(
    t: &ExtensionTower,
    g: &UniPoly<RatFunc>,
    raw: &Raw,
    alg: &Alg,
    comps: &[Component],
    tau: u32,
    bound: usize,
    budget: usize,
) -> Vec<TowerElement> {
    let gf = alg.ring;
    let d = 2 * bound + 10;
    let series = Series::new(gf, d);
    let (smp, sg) = raw.as_series(&series, tau);
    let lalg = TowerAlgebra::new(&series, smp);
    let glift = UniPoly::new(sg.iter().map(|c| lalg.scale(&lalg.one(), c)).collect(), &lalg);
    let dg = glift.derivative(&lalg);
    let embed = |a: &[u32]| -> Vec<Vec<u32>> { a.iter().map(|&c| series.constant(c)).collect() };
    let iters = steps_for(d);

    let idems: Vec<Vec<Vec<u32>>> = comps
        .iter()
        .map(|c| {
            let mut e = embed(&c.idem);
            for _ in 0..iters {
                let e2 = lalg.mul(&e, &e);
                let e3 = lalg.mul(&e2, &e);
                e = lalg.sub(&lalg.scale(&e2, &series.from_int(3)), &lalg.scale(&e3, &series.from_int(2)));
            }
            e
        })
        .collect();
    // The algebra is a product of its components, so one Newton run lifts
    // the k-th root of every component at once.
    let runs = comps.iter().map(|c| c.roots.len()).max().unwrap_or(0);
    let mut lifts: Vec<Vec<Vec<Vec<u32>>>> = vec![Vec::new(); comps.len()];
    for k in 0..runs {
        let start = comps.iter().fold(alg.zero(), |acc, c| alg.add(&acc, &c.roots[k.min(c.roots.len() - 1)]));
        let Some(rho) = newton(alg, &lalg, &glift, &dg, embed(&start), iters) else { continue };
        for (j, c) in comps.iter().enumerate() {
            if k < c.roots.len() {
                lifts[j].push(lalg.mul(&idems[j], &rho));
            }
        }
    }
    let sizes: Vec<usize> = lifts.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    for combo in combos(&sizes, budget) {
        let r = combo.iter().enumerate().fold(lalg.zero(), |acc, (j, &i)| lalg.add(&acc, &lifts[j][i]));
        if let Some(cand) = reconstruct(t, gf, tau, &r, bound) {
            if eval_base_poly(t, g, &cand).is_zero() {
                out.push(cand);
                if out.len() == g.degree().unwrap() {
                    break;
                }
            }
        }
    }
    out
}

/// Newton iteration for a root of `g` starting at `x`, carrying an
/// approximate inverse of `g'(x)` along; `None` if `g'(x)` is not a unit.
fn newton(
    alg: &Alg,
    lalg: &TowerAlgebra<&Series>,
    g: &UniPoly<Vec<Vec<u32>>>,
    dg: &UniPoly<Vec<Vec<u32>>>,
    mut x: Vec<Vec<u32>>,
    iters: usize,
) -> Option<Vec<Vec<u32>>> {
    let series = lalg.ring;
    let u0: Vec<u32> = dg.eval(&x, lalg).iter().map(|c| c[0]).collect();
    let y0 = solve_in(alg, &u0, &alg.one())?;
    let mut y: Vec<Vec<u32>> = y0.iter().map(|&c| series.constant(c)).collect();
    let two = lalg.from_int(2);
    for _ in 0..iters + 2 {
        let v = g.eval(&x, lalg);
        if lalg.is_zero(&v) {
            break;
        }
        x = lalg.sub(&x, &lalg.mul(&v, &y));
        let u = dg.eval(&x, lalg);
        y = lalg.mul(&y, &lalg.sub(&two, &lalg.mul(&u, &y)));
    }
    Some(x)
}

/// Coordinates with `F_p` coefficients recovered from their expansions at `τ`.
fn reconstruct(t: &ExtensionTower, gf: &Gf, tau: u32, r: &[Vec<u32>], bound: usize) -> Option<TowerElement> {
    let p = t.p();
    let mut coords = Vec::with_capacity(r.len());
    for c in r {
        let (num, den) = rational_reconstruction(gf, c, bound)?;
        let (num, den) = (unshift(gf, &num, tau), unshift(gf, &den, tau));
        let lc = gf.inv(den.last()?).ok()?;
        let to_fp = |v: &[u32]| -> Option<Vec<u32>> { v.iter().map(|x| gf.to_prime(gf.mul(x, &lc))).collect() };
        let (num, den) = (to_fp(&num)?, to_fp(&den)?);
        coords.push(RatFunc::normalize(MultiPoly::from_dense(&num, 1), MultiPoly::from_dense(&den, 1), p).ok()?);
    }
    Some(t.from_coords(coords))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn poly(t: &ExtensionTower, cs: &[&str]) -> UniPoly<RatFunc> {
        let k = t.base();
        UniPoly::new(cs.iter().map(|c| k.parse(c).unwrap()).collect(), k)
    }

    fn rendered(t: &ExtensionTower, rs: &RootSet) -> Vec<String> {
        let mut v: Vec<String> = rs.roots.iter().map(|r| t.render(r)).collect();
        v.sort();
        v
    }

    #[test]
    fn artin_schreier_roots() {
        let t = ex2();
        let rs = roots_in_field(&t, &poly(&t, &["t", "1", "1"]), &RootConfig::default()).unwrap();
        assert_eq!(rendered(&t, &rs), vec!["1 + s", "s"]);
        assert!(rs.is_complete());
    }

    #[test]
    fn finite_field_roots() {
        let t = ex0();
        let rs = roots_in_field(&t, &poly(&t, &["1", "1", "0", "0", "1"]), &RootConfig::default()).unwrap();
        assert_eq!(rs.roots.len(), 4);
        assert!(rs.is_complete());
        let a = t.gen(0);
        for e in [1, 2, 4, 8] {
            assert!(rs.roots.contains(&t.pow(&a, e)));
        }
    }

    #[test]
    fn cubic_with_one_root() {
        let t = ex4();
        let rs = roots_in_field(&t, &poly(&t, &["t", "1", "0", "1"]), &RootConfig::default()).unwrap();
        assert_eq!(rendered(&t, &rs), vec!["y"]);
        assert!(rs.is_complete());
    }

    #[test]
    fn root_bound_from_reduced_point() {
        // F_q x F_(q^2) with one known root: the quadratic factor has no root in F_q
        assert_eq!(root_bound(&[1, 3], 1), 1);
        assert_eq!(root_bound(&[3], 1), 3);
        assert_eq!(root_bound(&[0, 2], 0), 0);
    }

    #[test]
    fn purely_inseparable_root() {
        let t = ex3();
        let rs = roots_in_field(&t, &poly(&t, &["t", "0", "1"]), &RootConfig::default()).unwrap();
        assert_eq!(rendered(&t, &rs), vec!["u"]);
        assert!(rs.is_complete());
        let rs = roots_in_field(&t, &poly(&t, &["t", "1", "1"]), &RootConfig::default()).unwrap();
        assert_eq!(rendered(&t, &rs), vec!["1 + s", "s"]);
    }

    #[test]
    fn no_roots_when_irreducible() {
        let t = ex1();
        let rs = roots_in_field(&t, &poly(&t, &["t", "1", "1"]), &RootConfig::default()).unwrap();
        assert!(rs.roots.is_empty());
    }

    #[test]
    fn prime_power_roots() {
        let t = ex1();
        let r = prime_power_root(&t, &t.from_base(t.base().parse("t").unwrap()), 1).unwrap().unwrap();
        assert_eq!(t.render(&r), "u");
        assert!(prime_power_root(&t, &t.gen(0), 1).unwrap().is_none());
    }
}
