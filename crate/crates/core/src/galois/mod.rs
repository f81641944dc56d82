//! Automorphism groups, fixed fields and skew group algebras, together with
//! the classification of `L/K` and the correspondence checks built on them.
//!
//! Automorphisms are found on `L^sep`: every automorphism of `L` restricts
//! to one of `L^sep`, and since `L/L^sep` is purely inseparable the
//! extension back to `L` is unique when it exists.

use thiserror::Error;

use crate::basefield::UniPoly;
use crate::differential::{self, diff_ops, purely_inseparable_part, separable_closure, DiffError, DiffOpAlgebra};
use crate::exlinalg::LinalgError;
use crate::field::{ArithError, Ring};
use crate::matalg::{
    self, compose, endomorphisms_over, generate_ops, generate_over_l, identity_op, op_sub, MatAlgebra, MatalgError, Op,
};
use crate::tower::relative::{present_subfield, Extension, SubfieldPresentation};
use crate::tower::roots::{prime_power_root, roots_in_field, split_low_degree_step, Completeness, RootConfig, RootError};
use crate::tower::subfield::{minimal_polynomial_over_base, Subfield};
use crate::tower::{ExtensionTower, TowerElement, TowerError};

/// Largest group handed to [`subgroup_lattice`].
pub const MAX_LATTICE_ORDER: usize = 24;

#[derive(Debug, Clone, Error)]
pub enum GaloisError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Matalg(#[from] MatalgError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("a group element does not normalize the coefficient algebra")]
    NotNormalized,
    #[error("group of order {0} is too large for subgroup enumeration")]
    GroupTooLarge(usize),
    #[error("the extension is not normal")]
    NotNormal,
    #[error("the subfield is not normal over the base")]
    NotNormalSubfield,
    #[error("the extension is not purely inseparable")]
    NotPurelyInseparable,
    #[error("tensor product is not a field: {0}")]
    NotAField(String),
    #[error("invalid automorphism data: {0}")]
    BadGroup(String),
    #[error("equivalent criteria disagree: {}", .0.inconsistencies.join("; "))]
    InconsistentTheorems(Box<ClassificationRecord>),
}

impl GaloisError {
    /// Whether arithmetic found a proper factor of some step's minimal polynomial.
    pub fn is_reducible_modulus(&self) -> bool {
        fn arith(a: &ArithError) -> bool {
            matches!(a, ArithError::ReducibleModulus { .. })
        }
        fn linalg(l: &LinalgError) -> bool {
            matches!(l, LinalgError::Arith(a) if arith(a))
        }
        fn tower(t: &TowerError) -> bool {
            match t {
                TowerError::Arith(a) => arith(a),
                TowerError::Linalg(l) => linalg(l),
                _ => false,
            }
        }
        match self {
            GaloisError::Arith(a) => arith(a),
            GaloisError::Linalg(l) => linalg(l),
            GaloisError::Tower(t) => tower(t),
            GaloisError::Diff(d) => d.reducible_modulus().is_some(),
            GaloisError::Root(RootError::Tower(t)) => tower(t),
            GaloisError::Matalg(MatalgError::Arith(a)) => arith(a),
            GaloisError::Matalg(MatalgError::Linalg(l)) => linalg(l),
            GaloisError::Matalg(MatalgError::Tower(t)) => tower(t),
            _ => false,
        }
    }
}

/// A field automorphism of `L` over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    /// Images of the tower generators.
    pub images: Vec<TowerElement>,
    /// Images of the monomial basis.
    pub op: Op,
}

/// `G(L/K)` with its composition table.
#[derive(Clone, Debug)]
pub struct AutGroup {
    tower: u64,
    pub elements: Vec<Automorphism>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub completeness: Completeness,
    /// `[L^sep : K]`.
    pub sep_degree: usize,
    /// `|Aut(L^sep/K)|`, counting automorphisms that do not extend to `L`.
    pub sep_order: usize,
}

impl AutGroup {
    pub fn tower_id(&self) -> u64 {
        self.tower
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Complete
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == self.identity).expect("table is a group")
    }

    pub fn op(&self, i: usize) -> &Op {
        &self.elements[i].op
    }

    pub fn apply(&self, t: &ExtensionTower, i: usize, a: &TowerElement) -> TowerElement {
        matalg::apply(t, &self.elements[i].op, a)
    }

    /// Indices of the elements fixing `m` pointwise, i.e. `G(L/M)`.
    pub fn fixing(&self, t: &ExtensionTower, m: &Subfield) -> Vec<usize> {
        let gens = m.generators(t);
        (0..self.order()).filter(|&i| gens.iter().all(|g| self.apply(t, i, g) == *g)).collect()
    }

    /// `L^sep/K` is Galois.
    pub fn sep_is_galois(&self) -> bool {
        self.sep_order == self.sep_degree
    }
}

/// `L^sep` as its own tower over `K`.
struct SepView {
    sep: Subfield,
    tower: ExtensionTower,
    pres: Option<SubfieldPresentation>,
}

impl SepView {
    fn new(t: &ExtensionTower, sep: Subfield) -> Result<Self, GaloisError> {
        if sep.is_whole() {
            return Ok(SepView { sep, tower: t.clone(), pres: None });
        }
        let pres = present_subfield(t, &sep)?;
        Ok(SepView { sep, tower: pres.tower.clone(), pres: Some(pres) })
    }

    fn embed(&self, l: &ExtensionTower, a: &TowerElement) -> TowerElement {
        match &self.pres {
            Some(p) => p.embed(l, a),
            None => a.clone(),
        }
    }

    fn pull_back(&self, a: &TowerElement) -> TowerElement {
        match &self.pres {
            Some(p) => p.pull_back(a),
            None => a.clone(),
        }
    }
}

fn worse(a: Completeness, b: Completeness) -> Completeness {
    match (a, b) {
        (Completeness::Complete, x) | (x, Completeness::Complete) => x,
        (Completeness::Heuristic { bound: x }, Completeness::Heuristic { bound: y }) => {
            Completeness::Heuristic { bound: x.min(y) }
        }
    }
}

/// `sum sigma(c_k) r^k`, with `sigma` given by images of the level basis.
fn eval_mapped(t: &ExtensionTower, f: &UniPoly<TowerElement>, imgs: &[TowerElement], r: &TowerElement) -> TowerElement {
    let mut acc = t.zero();
    for c in f.coeffs().iter().rev() {
        let c = t.combine(&c.coords()[..imgs.len()], imgs);
        acc = t.add(&t.mul(&acc, r), &c);
    }
    acc
}

/// Images of the next level basis once the newest generator maps to `r`.
fn next_level(t: &ExtensionTower, imgs: &[TowerElement], r: &TowerElement, d: usize) -> Vec<TowerElement> {
    let mut next = Vec::with_capacity(imgs.len() * d);
    let mut pw = t.one();
    for _ in 0..d {
        next.extend(imgs.iter().map(|b| t.mul(b, &pw)));
        pw = t.mul(&pw, r);
    }
    next
}

/// Basis images of every automorphism of the tower `s` over `K`.
fn tower_automorphisms(s: &ExtensionTower, cfg: &RootConfig) -> Result<(Vec<Op>, Completeness), GaloisError> {
    let mut cands = Vec::with_capacity(s.nsteps());
    let mut completeness = Completeness::Complete;
    for i in 0..s.nsteps() {
        let rs = roots_in_field(s, &minimal_polynomial_over_base(s, &s.gen(i)), cfg)?;
        completeness = worse(completeness, rs.completeness);
        cands.push(rs.roots);
    }
    let mut out = Vec::new();
    backtrack(s, 0, &cands, vec![s.one()], &mut out);
    Ok((out, completeness))
}

fn backtrack(s: &ExtensionTower, i: usize, cands: &[Vec<TowerElement>], imgs: Vec<TowerElement>, out: &mut Vec<Op>) {
    if i == s.nsteps() {
        out.push(imgs);
        return;
    }
    let f = s.step_minpoly(i);
    let d = f.degree().expect("step minpoly");
    for r in &cands[i] {
        if eval_mapped(s, &f, &imgs, r).is_zero() {
            backtrack(s, i + 1, cands, next_level(s, &imgs, r, d), out);
        }
    }
}

/// `G(L/K)` with the default root-finding limits.
pub fn automorphism_group(t: &ExtensionTower) -> Result<AutGroup, GaloisError> {
    automorphism_group_with(t, &RootConfig::default())
}

pub fn automorphism_group_with(t: &ExtensionTower, cfg: &RootConfig) -> Result<AutGroup, GaloisError> {
    let n = t.degree();
    let view = SepView::new(t, separable_closure(&Extension::absolute(t))?)?;
    let (sep_ops, completeness) = tower_automorphisms(&view.tower, cfg)?;
    let sep_order = sep_ops.len();

    // g_j^(p^e_j) in L^sep, minimal e_j
    let p = t.p() as u64;
    let mut lifts = Vec::with_capacity(t.nsteps());
    for g in t.gens() {
        let mut e = 0u32;
        let mut c = g.clone();
        while !view.sep.contains(t, &c) {
            e += 1;
            c = t.pow(&c, p);
        }
        lifts.push((e, view.pull_back(&c)));
    }

    let mut elements = Vec::new();
    'outer: for sop in &sep_ops {
        let mut images = Vec::with_capacity(t.nsteps());
        let mut imgs = vec![t.one()];
        for (i, (e, c)) in lifts.iter().enumerate() {
            let sc = view.embed(t, &matalg::apply(&view.tower, sop, c));
            let Some(r) = prime_power_root(t, &sc, *e)? else { continue 'outer };
            let f = t.step_minpoly(i);
            if !eval_mapped(t, &f, &imgs, &r).is_zero() {
                continue 'outer;
            }
            imgs = next_level(t, &imgs, &r, f.degree().expect("step minpoly"));
            images.push(r);
        }
        debug_assert_eq!(imgs.len(), n);
        elements.push(Automorphism { images, op: imgs });
    }
    close_group(t, elements, completeness, view.sep.dim(), sep_order)
}

fn close_group(
    t: &ExtensionTower,
    mut elements: Vec<Automorphism>,
    completeness: Completeness,
    sep_degree: usize,
    sep_order: usize,
) -> Result<AutGroup, GaloisError> {
    let id = identity_op(t);
    if !elements.iter().any(|a| a.op == id) {
        return Err(GaloisError::BadGroup("identity not found".into()));
    }
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(elements.len());
        let mut j = 0;
        while j < elements.len() {
            let op = compose(t, &elements[i].op, &elements[j].op);
            let k = match elements.iter().position(|a| a.op == op) {
                Some(k) => k,
                None => {
                    let images = elements[j].images.iter().map(|g| matalg::apply(t, &elements[i].op, g)).collect();
                    elements.push(Automorphism { images, op });
                    elements.len() - 1
                }
            };
            row.push(k);
            j += 1;
        }
        table.push(row);
        i += 1;
    }
    // rows computed before later elements were appended
    let m = elements.len();
    for (i, row) in table.iter_mut().enumerate() {
        for j in row.len()..m {
            let op = compose(t, &elements[i].op, &elements[j].op);
            let k = elements.iter().position(|a| a.op == op);
            row.push(k.ok_or_else(|| GaloisError::BadGroup("not closed under composition".into()))?);
        }
    }
    if m > t.degree() {
        return Err(GaloisError::BadGroup(format!("{m} automorphisms of a degree {} extension", t.degree())));
    }
    let identity = elements.iter().position(|a| a.op == id).expect("checked above");
    Ok(AutGroup { tower: t.id(), elements, table, identity, completeness, sep_degree, sep_order })
}

/// `L^H` for the elements `h` of `g`.
pub fn fixed_field(t: &ExtensionTower, g: &AutGroup, h: &[usize]) -> Result<Subfield, GaloisError> {
    let id = identity_op(t);
    let ops: Vec<Op> = h.iter().filter(|&&i| i != g.identity).map(|&i| op_sub(t, g.op(i), &id)).collect();
    Ok(differential::common_kernel(t, &ops)?)
}

/// `A_0 ⋊ H` inside `E(L/K)`.
#[derive(Clone, Debug)]
pub struct SkewAlgebra {
    pub algebra: MatAlgebra,
    pub coefficients: MatAlgebra,
    pub group: Vec<usize>,
    /// `dim R = dim A_0 * |H|`.
    pub direct: bool,
}

impl SkewAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

pub fn skew_group_algebra(
    t: &ExtensionTower,
    a0: &MatAlgebra,
    g: &AutGroup,
    h: &[usize],
) -> Result<SkewAlgebra, GaloisError> {
    let basis = match a0.l_basis() {
        Some(rows) => rows.to_vec(),
        None => a0.k_basis(t),
    };
    for &i in h {
        let (s, si) = (g.op(i), g.op(g.inverse(i)));
        if !basis.iter().all(|r| a0.contains_op(t, &compose(t, s, &compose(t, r, si)))) {
            return Err(GaloisError::NotNormalized);
        }
    }
    let mut gens = basis;
    gens.extend(h.iter().map(|&i| g.op(i).clone()));
    let algebra = if a0.contains_l() { generate_over_l(t, &gens)? } else { generate_ops(t, &gens)? };
    let direct = algebra.dim() == a0.dim() * h.len();
    Ok(SkewAlgebra { algebra, coefficients: a0.clone(), group: h.to_vec(), direct })
}

/// `G`-stability of an algebra containing `L`, tested on an `L`-basis.
pub fn is_g_stable(t: &ExtensionTower, a: &MatAlgebra, g: &AutGroup) -> bool {
    let rows = match a.l_basis() {
        Some(r) => r.to_vec(),
        None => a.k_basis(t),
    };
    (0..g.order()).all(|i| {
        let (s, si) = (g.op(i), g.op(g.inverse(i)));
        rows.iter().all(|r| a.contains_op(t, &compose(t, s, &compose(t, r, si))))
    })
}

/// Normality of `L/M` from `L^G(L/M) = L^pi(L/M)`.
#[derive(Clone, Debug)]
pub struct NormalityReport {
    pub normal: bool,
    pub fixed: Subfield,
    pub pi: Subfield,
    /// `L = L^pi ⊗_M L^sep` with `L^sep/M` Galois.
    pub tensor_split: bool,
    pub complete: bool,
}

pub fn normality(ext: &Extension, g: &AutGroup) -> Result<NormalityReport, GaloisError> {
    let t = ext.tower();
    let m = ext.base();
    let h = g.fixing(t, m);
    let fixed = fixed_field(t, g, &h)?;
    let pi = purely_inseparable_part(ext)?;
    let sep = separable_closure(ext)?;
    let md = m.dim();
    let tensor_split = (pi.dim() / md) * (sep.dim() / md) == ext.degree()
        && pi.compositum(t, &sep).is_whole()
        && h.len() * md == sep.dim();
    Ok(NormalityReport { normal: fixed == pi, fixed, pi, tensor_split, complete: g.is_complete() })
}

pub fn is_normal(t: &ExtensionTower) -> Result<bool, GaloisError> {
    Ok(normality(&Extension::absolute(t), &automorphism_group(t)?)?.normal)
}

/// Whether the minimal polynomial over `K` of every tower generator splits
/// in `L`, with the completeness of the underlying root searches.
pub fn generators_split(t: &ExtensionTower, cfg: &RootConfig) -> Result<(bool, Completeness), GaloisError> {
    let view = SepView::new(t, separable_closure(&Extension::absolute(t))?)?;
    let k = t.base();
    for g in t.gens() {
        let f = minimal_polynomial_over_base(t, &g);
        let (s, e) = f.separable_presentation(k);
        // roots of the separable part are separable, so they lie in L^sep
        let rs = roots_in_field(&view.tower, &s, cfg)?;
        let mut count = 0;
        for r in &rs.roots {
            if prime_power_root(t, &view.embed(t, r), e)?.is_some() {
                count += 1;
            }
        }
        if count < s.degree().unwrap_or(0) {
            return Ok((false, rs.completeness));
        }
    }
    Ok((true, Completeness::Complete))
}

/// Everything the checks below share for one tower.
#[derive(Clone, Debug)]
pub struct Analysis {
    tower: ExtensionTower,
    pub group: AutGroup,
    pub d: DiffOpAlgebra,
    pub sep: Subfield,
    pub pi: Subfield,
    pub dif: Subfield,
    pub fixed: Subfield,
    /// `L^G_dif`.
    pub fixed_dif: Subfield,
}

impl Analysis {
    pub fn new(t: &ExtensionTower) -> Result<Self, GaloisError> {
        let abs = Extension::absolute(t);
        let group = automorphism_group(t)?;
        let d = diff_ops(&abs)?;
        let sep = separable_closure(&abs)?;
        let pi = purely_inseparable_part(&abs)?;
        let dif = differential::l_dif(t, &d)?;
        let fixed = fixed_field(t, &group, &group.all())?;
        let fixed_dif = fixed.meet(t, &dif);
        Ok(Analysis { tower: t.clone(), group, d, sep, pi, dif, fixed, fixed_dif })
    }

    pub fn tower(&self) -> &ExtensionTower {
        &self.tower
    }

    pub fn is_normal(&self) -> bool {
        self.fixed == self.pi
    }

    /// `L^gal`, known only when `L^sep/K` is Galois.
    pub fn gal(&self) -> Option<&Subfield> {
        self.group.sep_is_galois().then_some(&self.sep)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationDims {
    pub l_skew: usize,
    pub d: usize,
    pub d_skew: usize,
    pub e: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationRecord {
    pub degree: usize,
    pub is_separable: bool,
    pub is_purely_inseparable: bool,
    pub is_normal: bool,
    pub is_b: bool,
    pub is_g: bool,
    pub is_d: bool,
    /// The seven equivalent characterizations of normality, in order: B,
    /// `L = L^G ⊗ L_dif`, `L^G_dif = K`, `L = L^G ⊗ L^gal` with `L^G/K`
    /// normal, `L^G = L^pi`, `L = L^pi ⊗ L^gal`, generator minpolys split.
    pub criteria: [bool; 7],
    pub sep: Subfield,
    pub pi: Subfield,
    pub dif: Subfield,
    pub fixed: Subfield,
    pub fixed_dif: Subfield,
    pub gal: Option<Subfield>,
    pub group_order: usize,
    pub complete: bool,
    pub dims: ClassificationDims,
    pub inconsistencies: Vec<String>,
}

fn is_tensor(t: &ExtensionTower, a: &Subfield, b: &Subfield) -> bool {
    a.dim() * b.dim() == t.degree() && a.compositum(t, b).is_whole()
}

pub fn classify(t: &ExtensionTower) -> Result<ClassificationRecord, GaloisError> {
    classify_analysis(&Analysis::new(t)?)
}

pub fn classify_analysis(an: &Analysis) -> Result<ClassificationRecord, GaloisError> {
    let t = an.tower();
    let n = t.degree();
    let cfg = RootConfig::default();
    let g = &an.group;
    let all = g.all();
    let l_skew = skew_group_algebra(t, &MatAlgebra::image_of_l(t), g, &all)?;
    let d_skew = skew_group_algebra(t, &an.d.algebra, g, &all)?;
    let dims = ClassificationDims { l_skew: l_skew.dim(), d: an.d.dim(), d_skew: d_skew.dim(), e: n * n };
    let gal = an.gal().cloned();

    let (split, split_completeness) = generators_split(t, &cfg)?;
    let fixed_normal = {
        let pres = present_subfield(t, &an.fixed)?;
        generators_split(&pres.tower, &cfg)?.0
    };
    // without L^sep Galois neither tensor split can hold: see the ledger
    let criteria = [
        dims.d_skew == dims.e,
        is_tensor(t, &an.fixed, &an.dif),
        an.fixed_dif.is_base(),
        gal.as_ref().is_some_and(|x| is_tensor(t, &an.fixed, x)) && fixed_normal,
        an.fixed == an.pi,
        gal.as_ref().is_some_and(|x| is_tensor(t, &an.pi, x)),
        split,
    ];
    let mut rec = ClassificationRecord {
        degree: n,
        is_separable: an.sep.is_whole(),
        is_purely_inseparable: an.pi.is_whole(),
        is_normal: criteria[4],
        is_b: criteria[0],
        is_g: an.fixed.is_base(),
        is_d: an.pi.is_whole(),
        criteria,
        sep: an.sep.clone(),
        pi: an.pi.clone(),
        dif: an.dif.clone(),
        fixed: an.fixed.clone(),
        fixed_dif: an.fixed_dif.clone(),
        gal,
        group_order: g.order(),
        complete: g.is_complete() && split_completeness == Completeness::Complete,
        dims,
        inconsistencies: Vec::new(),
    };
    rec.inconsistencies = record_inconsistencies(&rec, an, &l_skew, &d_skew);
    if rec.inconsistencies.is_empty() {
        Ok(rec)
    } else {
        Err(GaloisError::InconsistentTheorems(Box::new(rec)))
    }
}

fn record_inconsistencies(
    rec: &ClassificationRecord,
    an: &Analysis,
    l_skew: &SkewAlgebra,
    d_skew: &SkewAlgebra,
) -> Vec<String> {
    let n = rec.degree;
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    for (i, &c) in rec.criteria.iter().enumerate() {
        check(c == rec.criteria[0], &format!("criterion {} differs from criterion 1", i + 1));
    }
    check(rec.is_b == rec.is_normal, "B-extension vs normal");
    check(!rec.is_g || rec.is_b, "Galois but not B");
    check(!rec.is_d || rec.is_b, "purely inseparable but not B");
    check(rec.is_g == (rec.dims.l_skew == rec.dims.e), "Galois vs dim L⋊G = n^2");
    check(rec.is_d == (rec.dims.d == rec.dims.e), "dim D = n^2 vs L^pi = L");
    check(l_skew.direct && d_skew.direct, "skew group algebra not direct");
    let q = n / rec.dif.dim();
    check(rec.dims.d == q * q * rec.dif.dim(), "dim D vs [L:L_dif]^2 [L_dif:K]");
    let f = rec.fixed_dif.dim();
    check(rec.dims.d_skew == (n / f) * (n / f) * f, "dim D⋊G vs L^G_dif");
    check(rec.dif.dim() / f == n / rec.fixed.dim(), "[L_dif:L^G_dif] vs [L:L^G]");
    check(rec.fixed.dim() / f == n / rec.dif.dim(), "[L^G:L^G_dif] vs [L:L_dif]");
    check(n * f == rec.fixed.dim() * rec.dif.dim(), "dimension tensor law");
    check(an.fixed.compositum(an.tower(), &an.dif).is_whole(), "L^G L_dif != L");
    check(rec.dif == rec.sep || !rec.is_normal, "normal but L_dif != L^sep");
    check(rec.gal.as_ref() == Some(&rec.sep) || !rec.is_normal, "normal but L^sep not Galois");
    bad
}

/// A subgroup given by sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub normal: bool,
}

fn closure(g: &AutGroup, gens: &[usize]) -> Vec<usize> {
    let mut set = vec![g.identity];
    let mut frontier = vec![g.identity];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.table[x][s];
            if !set.contains(&y) {
                set.push(y);
                frontier.push(y);
            }
        }
    }
    set.sort_unstable();
    set
}

pub fn subgroup_lattice(g: &AutGroup) -> Result<Vec<Subgroup>, GaloisError> {
    if g.order() > MAX_LATTICE_ORDER {
        return Err(GaloisError::GroupTooLarge(g.order()));
    }
    let mut found: Vec<Vec<usize>> = vec![vec![g.identity]];
    let mut i = 0;
    while i < found.len() {
        let h = found[i].clone();
        for x in 0..g.order() {
            if h.contains(&x) {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let c = closure(g, &gens);
            if !found.contains(&c) {
                found.push(c);
            }
        }
        i += 1;
    }
    let mut out: Vec<Subgroup> = found
        .into_iter()
        .map(|h| {
            let normal = (0..g.order()).all(|x| {
                let xi = g.inverse(x);
                h.iter().all(|&y| h.contains(&g.table[g.table[x][y]][xi]))
            });
            Subgroup { elements: h, normal }
        })
        .collect();
    out.sort_by(|a, b| (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements)));
    Ok(out)
}

/// The classical correspondence on a normal tower.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    pub subgroups: usize,
    pub fixed_dims: Vec<usize>,
    /// `[L:L^H] = |H|` and `L⋊H = E(L/L^H)` for every `H`.
    pub skew_ok: bool,
    /// `H -> L^H` is injective and `G(L/L^H) = H`.
    pub roundtrip_ok: bool,
    pub order_reversing: bool,
}

impl LatticeReport {
    pub fn ok(&self) -> bool {
        self.skew_ok && self.roundtrip_ok && self.order_reversing
    }
}

pub fn galois_lattice(an: &Analysis) -> Result<LatticeReport, GaloisError> {
    let t = an.tower();
    let g = &an.group;
    let lattice = subgroup_lattice(g)?;
    let l = MatAlgebra::image_of_l(t);
    let mut fields = Vec::with_capacity(lattice.len());
    let mut skew_ok = true;
    let mut roundtrip_ok = true;
    for h in &lattice {
        let f = fixed_field(t, g, &h.elements)?;
        skew_ok &= f.codim() == h.elements.len()
            && skew_group_algebra(t, &l, g, &h.elements)?.algebra == endomorphisms_over(t, &f)?;
        roundtrip_ok &= g.fixing(t, &f) == h.elements;
        fields.push(f);
    }
    for i in 0..fields.len() {
        for j in 0..i {
            roundtrip_ok &= fields[i] != fields[j];
        }
    }
    let mut order_reversing = true;
    for (a, fa) in lattice.iter().zip(&fields) {
        for (b, fb) in lattice.iter().zip(&fields) {
            if a.elements.iter().all(|x| b.elements.contains(x)) {
                order_reversing &= fb.is_subfield_of(t, fa);
            }
        }
    }
    Ok(LatticeReport {
        subgroups: lattice.len(),
        fixed_dims: fields.iter().map(Subfield::dim).collect(),
        skew_ok,
        roundtrip_ok,
        order_reversing,
    })
}

/// `M -> C_E(M)` and back on a normal tower.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub a_dim: usize,
    /// `[L:M]^2 [M:K]`.
    pub expected_dim: usize,
    /// `C_E(M)` is generated by `D(L/M)` and `G(L/M)`.
    pub decomposition_ok: bool,
    /// `D(L/M) = C_E(M) ∩ D(L/K)`.
    pub d_meet_ok: bool,
    pub via_centralizer: Subfield,
    pub via_fixed: Subfield,
    pub ok: bool,
}

pub fn correspondence_roundtrip(an: &Analysis, m: &Subfield) -> Result<CorrespondenceReport, GaloisError> {
    if !an.is_normal() {
        return Err(GaloisError::NotNormal);
    }
    let t = an.tower();
    let g = &an.group;
    let a = endomorphisms_over(t, m)?;
    let expected_dim = m.codim() * m.codim() * m.dim();
    let dm = diff_ops(&Extension::over(t, m.clone()))?;
    let gm = g.fixing(t, m);
    let mut gens = dm.algebra.l_basis().expect("D contains L").to_vec();
    gens.extend(gm.iter().map(|&i| g.op(i).clone()));
    let decomposition_ok = generate_over_l(t, &gens)? == a;
    let d_meet_ok = a.meet(t, &an.d.algebra)? == dm.algebra;

    let via_centralizer = matalg::algebra_to_subfield(t, &a)?;
    let a_space = a.l_space().expect("C_E(M) contains L");
    let plus = crate::exlinalg::Subspace::from_vectors(t, t.degree(), an.d.plus_basis().iter().cloned())?;
    let a_plus = a_space.meet(t, &plus)?;
    let from_d = differential::common_kernel(t, a_plus.basis())?;
    let in_a: Vec<usize> = (0..g.order()).filter(|&i| a.contains_op(t, g.op(i))).collect();
    let from_g = fixed_field(t, g, &in_a)?;
    let via_fixed = from_d.meet(t, &from_g);
    let ok = a.dim() == expected_dim
        && decomposition_ok
        && d_meet_ok
        && via_centralizer == *m
        && via_fixed == *m;
    Ok(CorrespondenceReport {
        a_dim: a.dim(),
        expected_dim,
        decomposition_ok,
        d_meet_ok,
        via_centralizer,
        via_fixed,
        ok,
    })
}

/// `M = M^pi ⊗ M^gal` and the matching factorization of `C_E(M)`.
#[derive(Clone, Debug)]
pub struct NormalSubfieldReport {
    pub m_pi: Subfield,
    pub m_gal: Subfield,
    pub split_ok: bool,
    pub a_dim: usize,
    /// `C_E(M)` is generated by `C_E(M^pi L^gal)` and `C_E(L^pi M^gal)`.
    pub factor_ok: bool,
    pub g_stable: bool,
    pub ok: bool,
}

pub fn normal_subfield_correspondence(an: &Analysis, m: &Subfield) -> Result<NormalSubfieldReport, GaloisError> {
    if !an.is_normal() {
        return Err(GaloisError::NotNormal);
    }
    let t = an.tower();
    let pres = present_subfield(t, m)?;
    if !Analysis::new(&pres.tower)?.is_normal() {
        return Err(GaloisError::NotNormalSubfield);
    }
    let gal = an.gal().ok_or(GaloisError::NotNormal)?;
    let m_pi = m.meet(t, &an.pi);
    let m_gal = m.meet(t, gal);
    let split_ok = m_pi.dim() * m_gal.dim() == m.dim() && m_pi.compositum(t, &m_gal) == *m;
    let a = endomorphisms_over(t, m)?;
    let left = endomorphisms_over(t, &m_pi.compositum(t, gal))?;
    let right = endomorphisms_over(t, &an.pi.compositum(t, &m_gal))?;
    let mut gens = left.l_basis().expect("contains L").to_vec();
    gens.extend(right.l_basis().expect("contains L").iter().cloned());
    let factor_ok = generate_over_l(t, &gens)? == a;
    let g_stable = is_g_stable(t, &a, &an.group);
    Ok(NormalSubfieldReport {
        ok: split_ok && factor_ok && g_stable,
        m_pi,
        m_gal,
        split_ok,
        a_dim: a.dim(),
        factor_ok,
        g_stable,
    })
}

/// `M -> C_D(M) = D(L/M)` for purely inseparable `L/K`.
#[derive(Clone, Debug)]
pub struct PiReport {
    pub d_dim: usize,
    pub expected_dim: usize,
    pub recovered: Subfield,
    /// `C_D(M) = D(L/M)`.
    pub equals_diff_ops: bool,
    /// `Z(D(L/M)) = M`.
    pub center_ok: bool,
    pub ok: bool,
}

pub fn pi_correspondence(an: &Analysis, m: &Subfield) -> Result<PiReport, GaloisError> {
    if !an.pi.is_whole() {
        return Err(GaloisError::NotPurelyInseparable);
    }
    let t = an.tower();
    let dm = endomorphisms_over(t, m)?;
    let expected_dim = m.codim() * m.codim() * m.dim();
    let recovered = matalg::algebra_to_subfield(t, &dm)?;
    let equals_diff_ops = diff_ops(&Extension::over(t, m.clone()))?.algebra == dm;
    let center_ok = matalg::center(t, &dm)? == MatAlgebra::field_image(t, m);
    Ok(PiReport {
        d_dim: dm.dim(),
        expected_dim,
        ok: dm.dim() == expected_dim && recovered == *m && equals_diff_ops && center_ok,
        recovered,
        equals_diff_ops,
        center_ok,
    })
}

/// `L^G_dif` and the checks that it is the least co-normal subfield.
#[derive(Clone, Debug)]
pub struct ConormalReport {
    pub field: Subfield,
    /// `L / L^G_dif` is normal.
    pub normal_over: bool,
    pub d_unchanged: bool,
    pub g_unchanged: bool,
    /// Co-normal subfields among the samples, all containing `L^G_dif`.
    pub sampled: usize,
    pub minimal_ok: bool,
    pub ok: bool,
}

pub fn least_conormal(an: &Analysis) -> Result<ConormalReport, GaloisError> {
    let t = an.tower();
    let field = an.fixed_dif.clone();
    let over = Extension::over(t, field.clone());
    let normal_over = normality(&over, &an.group)?.normal;
    let d_unchanged = diff_ops(&over)?.algebra == an.d.algebra;
    let g_unchanged = an.group.fixing(t, &field).len() == an.group.order();

    let mut samples = vec![
        Subfield::base(t),
        Subfield::whole(t),
        an.fixed.clone(),
        an.dif.clone(),
        an.sep.clone(),
        an.pi.clone(),
    ];
    for g in t.gens() {
        samples.push(Subfield::generated(t, &[g]));
    }
    samples.sort_by_key(Subfield::dim);
    samples.dedup();
    let mut sampled = 0;
    let mut minimal_ok = true;
    for m in &samples {
        if normality(&Extension::over(t, m.clone()), &an.group)?.normal {
            sampled += 1;
            minimal_ok &= field.is_subfield_of(t, m);
        }
    }
    Ok(ConormalReport {
        ok: normal_over && d_unchanged && g_unchanged && minimal_ok,
        field,
        normal_over,
        d_unchanged,
        g_unchanged,
        sampled,
        minimal_ok,
    })
}

/// Group orders and algebra dimensions for `L_1`, `L_2` and `L_1 ⊗ L_2`.
#[derive(Clone, Debug)]
pub struct TensorExtReport {
    pub orders: [usize; 3],
    pub d_dims: [usize; 3],
    pub dg_dims: [usize; 3],
    /// `L^pi` and `L^sep` are the composita of the factors' parts.
    pub parts_ok: bool,
    pub complete: bool,
}

impl TensorExtReport {
    pub fn ok(&self) -> bool {
        let prod = |x: &[usize; 3]| x[0] * x[1] == x[2];
        prod(&self.orders) && prod(&self.d_dims) && prod(&self.dg_dims) && self.parts_ok
    }
}

fn embed_first(t: &ExtensionTower, a: &TowerElement) -> TowerElement {
    let mut c = a.coords().to_vec();
    c.resize(t.degree(), t.base().zero());
    t.from_coords(c)
}

fn embed_second(t: &ExtensionTower, n1: usize, a: &TowerElement) -> TowerElement {
    let mut c = vec![t.base().zero(); t.degree()];
    for (j, x) in a.coords().iter().enumerate() {
        c[n1 * j] = x.clone();
    }
    t.from_coords(c)
}

pub fn tensor_extension_checks(t1: &ExtensionTower, t2: &ExtensionTower) -> Result<TensorExtReport, GaloisError> {
    let t = t1.tensor(t2)?;
    if let Some(i) = split_low_degree_step(&t, &RootConfig::default())? {
        return Err(GaloisError::NotAField(format!("step {} has a root below it", t.steps()[i].name())));
    }
    let analyze = |x: &ExtensionTower| -> Result<(Analysis, usize), GaloisError> {
        let an = Analysis::new(x).map_err(not_a_field)?;
        if !an.is_normal() {
            return Err(GaloisError::NotNormal);
        }
        let ds = skew_group_algebra(x, &an.d.algebra, &an.group, &an.group.all())?.dim();
        Ok((an, ds))
    };
    let (a1, s1) = analyze(t1)?;
    let (a2, s2) = analyze(t2)?;
    let (a, s) = analyze(&t)?;
    let n1 = t1.degree();
    let lift = |f1: &Subfield, f2: &Subfield| {
        let mut gens: Vec<TowerElement> = f1.generators(t1).iter().map(|x| embed_first(&t, x)).collect();
        gens.extend(f2.generators(t2).iter().map(|x| embed_second(&t, n1, x)));
        Subfield::generated(&t, &gens)
    };
    let parts_ok = lift(&a1.pi, &a2.pi) == a.pi && lift(&a1.sep, &a2.sep) == a.sep;
    Ok(TensorExtReport {
        orders: [a1.group.order(), a2.group.order(), a.group.order()],
        d_dims: [a1.d.dim(), a2.d.dim(), a.d.dim()],
        dg_dims: [s1, s2, s],
        parts_ok,
        complete: a1.group.is_complete() && a2.group.is_complete() && a.group.is_complete(),
    })
}

fn not_a_field(e: GaloisError) -> GaloisError {
    let reducible = match &e {
        GaloisError::Diff(d) => d.reducible_modulus().is_some(),
        GaloisError::Arith(ArithError::ReducibleModulus { .. }) => true,
        _ => false,
    };
    if reducible {
        GaloisError::NotAField(e.to_string())
    } else {
        e
    }
}

#[cfg(test)]
mod tests;
