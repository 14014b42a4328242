//! Explicit models of free distributions: the flat model, its modified frames,
//! the curvature of the flat Weyl structure, normality and infinitesimal holonomy.

pub mod model;
pub mod vf;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

pub use model::{build_model, coordinate_names, FrameModel, Modification, ModelSpec};
pub use vf::{vf_bracket, PolyVF};

use crate::exactalg::matrix::{span_basis, span_dim};
use crate::exactalg::scalar::{fmt_scalar, half};
use crate::exactalg::{GradedBasis, Scalar};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::{Error, Result};

/// Section of the adjoint bundle in the flat trivialization: g-basis index → coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASection {
    pub nvars: usize,
    pub terms: BTreeMap<usize, Poly>,
}

impl ASection {
    pub fn zero(nvars: usize) -> Self {
        ASection { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, coords: &BTreeMap<usize, Scalar>) -> Self {
        let mut s = Self::zero(nvars);
        for (&i, c) in coords {
            s.add_term(i, Poly::constant(nvars, c.clone()));
        }
        s
    }

    pub fn add_term(&mut self, idx: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(idx).or_insert_with(|| Poly::zero(p.nvars));
        *e = e.add(&p);
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &ASection) -> ASection {
        let mut s = self.clone();
        for (&i, p) in &o.terms {
            s.add_term(i, p.clone());
        }
        s
    }

    pub fn scale(&self, c: &Scalar) -> ASection {
        let mut s = ASection::zero(self.nvars);
        for (&i, p) in &self.terms {
            s.add_term(i, p.scale(c));
        }
        s
    }

    pub fn sub(&self, o: &ASection) -> ASection {
        self.add(&o.scale(&-Scalar::one()))
    }

    /// Dense g-coordinates at a point.
    pub fn eval(&self, dim: usize, point: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        for (&i, p) in &self.terms {
            v[i] = p.eval(point);
        }
        v
    }

    pub fn grades(&self, basis: &GradedBasis) -> Vec<i32> {
        let mut g: Vec<i32> = self.terms.keys().map(|&i| basis.grade_of(i)).collect();
        g.dedup();
        g
    }

    pub fn display(&self, basis: &GradedBasis, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&i, p)| {
                if p.is_constant() && p.constant_term().is_one() {
                    basis.label(i).to_string()
                } else {
                    format!("({})*{}", p.display(names), basis.label(i))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Algebraic bracket {c, s} of a constant element with a section.
pub fn bracket_const(basis: &GradedBasis, c: &BTreeMap<usize, Scalar>, s: &ASection) -> ASection {
    let mut out = ASection::zero(s.nvars);
    for (&i, ci) in c {
        for (&j, p) in &s.terms {
            for (k, sk) in basis.bracket_basis(i, j) {
                out.add_term(*k, p.scale(&(ci * sk)));
            }
        }
    }
    out
}

/// Pointwise bracket of two sections.
pub fn bracket_sections(basis: &GradedBasis, a: &ASection, b: &ASection) -> ASection {
    let mut out = ASection::zero(a.nvars);
    for (&i, p) in &a.terms {
        for (&j, q) in &b.terms {
            let pq = p.mul(q);
            for (k, sk) in basis.bracket_basis(i, j) {
                out.add_term(*k, pq.scale(sk));
            }
        }
    }
    out
}

/// Frame element a ↦ g-basis index: X_i to the i-th element of g_-1, Y_{j|k} to g_-2.
pub fn frame_to_g(basis: &GradedBasis, model: &FrameModel, a: usize) -> usize {
    let n = model.n;
    if a < n {
        basis.index_of_x(a)
    } else {
        basis.grade_range(-2).start + (a - n)
    }
}

/// Inverse of `frame_to_g` on g_-.
pub fn g_to_frame(basis: &GradedBasis, model: &FrameModel, g: usize) -> Option<usize> {
    match basis.grade_of(g) {
        -1 => Some(g - basis.grade_range(-1).start),
        -2 => Some(model.n + g - basis.grade_range(-2).start),
        _ => None,
    }
}

/// Curvature of the flat Weyl structure on frame pairs.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub dim: usize,
    pub nvars: usize,
    /// values[(a,b)] for a < b.
    pub values: BTreeMap<(usize, usize), ASection>,
}

impl Curvature {
    pub fn get(&self, a: usize, b: usize) -> ASection {
        if a == b {
            return ASection::zero(self.nvars);
        }
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        match self.values.get(&(lo, hi)) {
            None => ASection::zero(self.nvars),
            Some(s) if sign > 0 => s.clone(),
            Some(s) => s.scale(&-Scalar::one()),
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize), &ASection)> {
        self.values.iter().filter(|(_, s)| !s.is_zero())
    }
}

/// κ(U,V) = ι([U,V]) − {ιU, ιV} with ∇ annihilating the frame and 𝖯 = 0.
/// With this orientation κ(Y_{1|2}, X_1') = +Y_{3|4} in the single_y34 model.
pub fn curvature(model: &FrameModel, basis: &GradedBasis) -> Curvature {
    let d = model.dim();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    let values: BTreeMap<(usize, usize), ASection> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let br = vf_bracket(&model.frame[a], &model.frame[b]);
            let coeffs = model.expand(&br);
            let mut s = ASection::zero(model.nvars);
            for (m, p) in coeffs.into_iter().enumerate() {
                s.add_term(frame_to_g(basis, model, m), p);
            }
            for (k, c) in basis.bracket_basis(frame_to_g(basis, model, a), frame_to_g(basis, model, b)) {
                s.add_term(*k, Poly::constant(model.nvars, -c.clone()));
            }
            ((a, b), s)
        })
        .collect();
    Curvature { dim: basis.dim(), nvars: model.nvars, values }
}

fn dual_map(basis: &GradedBasis) -> BTreeMap<usize, BTreeMap<usize, Scalar>> {
    basis
        .dual_of_negative()
        .into_iter()
        .map(|(l, c)| (l, c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()))
        .collect()
}

/// Residual (∂*κ)(X_a) = Σ_l {Z^l, κ(Z_l, X_a)} − ½ κ({Z^l, X_a}_−, Z_l), split into its two sums.
pub fn codifferential_terms(model: &FrameModel, basis: &GradedBasis, kappa: &Curvature, a: usize) -> (ASection, ASection) {
    let duals = dual_map(basis);
    let ga = frame_to_g(basis, model, a);
    let mut first = ASection::zero(model.nvars);
    let mut second = ASection::zero(model.nvars);
    for l in 0..model.dim() {
        let zl = &duals[&frame_to_g(basis, model, l)];
        first = first.add(&bracket_const(basis, zl, &kappa.get(l, a)));
        let mut xa = BTreeMap::new();
        xa.insert(ga, Scalar::one());
        let br = basis.bracket_sparse(zl, &xa);
        for (g, c) in br {
            if let Some(m) = g_to_frame(basis, model, g) {
                second = second.add(&kappa.get(m, l).scale(&(c * half())));
            }
        }
    }
    (first, second)
}

pub fn normality_check(model: &FrameModel) -> CheckReport {
    let basis = GradedBasis::new(model.n);
    let kappa = curvature(model, &basis);
    let names = coordinate_names(model.n);
    let mut rows = Vec::new();
    let mut ok = true;
    for a in 0..model.dim() {
        let (t1, t2) = codifferential_terms(model, &basis, &kappa, a);
        let res = t1.sub(&t2);
        ok &= res.is_zero();
        if !(t1.is_zero() && t2.is_zero()) || !res.is_zero() {
            rows.push(json!({
                "frame": model.labels[a],
                "bracket_sum": t1.display(&basis, &names),
                "kappa_sum": t2.display(&basis, &names),
                "residual": res.display(&basis, &names),
            }));
        }
    }
    CheckReport::new(
        format!("flatmodels.normality.n{}.{}", model.n, model.modification.name()),
        "the curvature of the flat Weyl structure is normal",
        ok,
        json!({ "n": model.n, "modification": model.modification.name(), "nonzero_terms": rows }),
    )
}

/// ∇→_U s = U(s) + {ι(U), s} for a frame direction U (𝖯 = 0).
pub fn tractor_derivative(model: &FrameModel, basis: &GradedBasis, direction: usize, s: &ASection) -> ASection {
    let u = &model.frame[direction];
    let mut out = ASection::zero(model.nvars);
    for (&i, p) in &s.terms {
        out.add_term(i, u.apply(p));
    }
    let mut c = BTreeMap::new();
    c.insert(frame_to_g(basis, model, direction), Scalar::one());
    out.add(&bracket_const(basis, &c, s))
}

pub fn tractor_derivative_by_label(model: &FrameModel, label: &str, s: &ASection) -> Result<ASection> {
    let basis = GradedBasis::new(model.n);
    let a = model
        .labels
        .iter()
        .position(|l| l == label || l.trim_end_matches('\'') == label)
        .ok_or_else(|| Error::BadFrame(format!("no frame element {label}")))?;
    Ok(tractor_derivative(model, &basis, a, s))
}

type Key = (usize, Vec<u32>);

/// Incremental echelon basis of sparse vectors; each row's pivot is its smallest key.
struct SparseSpan {
    rows: BTreeMap<Key, BTreeMap<Key, Scalar>>,
}

impl SparseSpan {
    fn new() -> Self {
        SparseSpan { rows: BTreeMap::new() }
    }

    /// Reduces v; if something survives it becomes a new row and is returned.
    fn insert(&mut self, mut v: BTreeMap<Key, Scalar>) -> Option<BTreeMap<Key, Scalar>> {
        let mut cursor: Option<Key> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(k) => v.range((std::ops::Bound::Excluded(k.clone()), std::ops::Bound::Unbounded)).next().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some(row) = self.rows.get(&k) {
                let c = v[&k].clone();
                for (rk, rc) in row {
                    let e = v.entry(rk.clone()).or_insert_with(Scalar::zero);
                    *e -= &c * rc;
                    if e.is_zero() {
                        v.remove(rk);
                    }
                }
            }
            cursor = Some(k);
        }
        let (pk, pc) = v.iter().next().map(|(k, c)| (k.clone(), c.clone()))?;
        let inv = Scalar::one() / pc;
        for c in v.values_mut() {
            *c *= &inv;
        }
        self.rows.insert(pk, v.clone());
        Some(v)
    }
}

fn to_sparse(s: &ASection) -> BTreeMap<Key, Scalar> {
    let mut v = BTreeMap::new();
    for (&i, p) in &s.terms {
        for (e, c) in &p.terms {
            v.insert((i, e.clone()), c.clone());
        }
    }
    v
}

fn from_sparse(nvars: usize, v: &BTreeMap<Key, Scalar>) -> ASection {
    let mut s = ASection::zero(nvars);
    for ((i, e), c) in v {
        let mut p = Poly::zero(nvars);
        p.add_term(e.clone(), c.clone());
        s.add_term(*i, p);
    }
    s
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HolonomyReport {
    pub n: usize,
    pub modification: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    /// Highest derivative order taken.
    pub orders_used: usize,
    /// Pointwise span dimension at the origin after each order.
    pub dims_by_order: Vec<usize>,
    pub random_point_dims: Vec<usize>,
    pub abelian: bool,
    pub closed_under_bracket: bool,
    pub summands: usize,
    /// Orientation of κ used for the report.
    pub convention: String,
}

fn format_vector(basis: &GradedBasis, v: &[Scalar]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if c.is_one() {
                basis.label(i).to_string()
            } else if (-c).is_one() {
                format!("-{}", basis.label(i))
            } else {
                format!("{}*{}", fmt_scalar(c), basis.label(i))
            }
        })
        .collect();
    parts.join(" + ").replace("+ -", "- ")
}

/// Span of the values of κ and all its iterated tractor derivatives at the origin,
/// closed under the algebraic bracket.
pub fn infinitesimal_holonomy(model: &FrameModel) -> Result<HolonomyReport> {
    infinitesimal_holonomy_seeded(model, 0)
}

pub fn infinitesimal_holonomy_seeded(model: &FrameModel, seed: u64) -> Result<HolonomyReport> {
    let basis = GradedBasis::new(model.n);
    let dim = basis.dim();
    let kappa = curvature(model, &basis);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = model.sample_points(&mut rng, 3);
    let max = model.modification.max_exponent() as usize;
    let min_order = max + 1;
    let cap = 2 * max + 4;

    let mut span = SparseSpan::new();
    let mut all: Vec<ASection> = Vec::new();
    let mut fresh: Vec<ASection> = Vec::new();
    for (_, s) in kappa.nonzero() {
        if let Some(r) = span.insert(to_sparse(s)) {
            let sec = from_sparse(model.nvars, &r);
            all.push(sec.clone());
            fresh.push(sec);
        }
    }
    let pointwise = |secs: &[ASection], p: &[Scalar]| -> Vec<Vec<Scalar>> { secs.iter().map(|s| s.eval(dim, p)).collect() };
    let mut dims = vec![span_dim(&pointwise(&all, &points[0]), dim)];
    let mut order = 0;
    loop {
        let k = dims.len();
        let stable = k >= 3 && dims[k - 1] == dims[k - 2] && dims[k - 2] == dims[k - 3];
        if stable && order >= min_order {
            break;
        }
        if order >= cap {
            return Err(Error::NoStabilization(cap));
        }
        order += 1;
        let derived: Vec<ASection> = fresh
            .par_iter()
            .flat_map_iter(|s| (0..model.dim()).map(move |u| (u, s)))
            .map(|(u, s)| tractor_derivative(model, &basis, u, s))
            .collect();
        fresh.clear();
        for t in derived {
            if t.is_zero() {
                continue;
            }
            if let Some(r) = span.insert(to_sparse(&t)) {
                let sec = from_sparse(model.nvars, &r);
                all.push(sec.clone());
                fresh.push(sec);
            }
        }
        dims.push(span_dim(&pointwise(&all, &points[0]), dim));
    }

    // close the pointwise span under the bracket
    let mut vecs = span_basis(&pointwise(&all, &points[0]), dim);
    let before = vecs.len();
    loop {
        let mut cand = vecs.clone();
        for i in 0..vecs.len() {
            for j in i + 1..vecs.len() {
                cand.push(basis.bracket_coords(&vecs[i], &vecs[j]));
            }
        }
        let next = span_basis(&cand, dim);
        if next.len() == vecs.len() {
            break;
        }
        vecs = next;
    }
    let abelian = (0..vecs.len()).all(|i| (0..vecs.len()).all(|j| basis.bracket_coords(&vecs[i], &vecs[j]).iter().all(Zero::is_zero)));
    let labels: Vec<String> = vecs
        .iter().filter(|r| r.iter().any(|c| !c.is_zero())).map(|r| format_vector(&basis, r)).collect();
    let random_point_dims = points[1..].iter().map(|p| span_dim(&pointwise(&all, p), dim)).collect();
    Ok(HolonomyReport {
        n: model.n,
        modification: model.modification.name().into(),
        dimension: vecs.len(),
        basis: labels,
        orders_used: order,
        dims_by_order: dims,
        random_point_dims,
        abelian,
        closed_under_bracket: before == vecs.len(),
        summands: model.modification.summands(),
        convention: "kappa(U,V) = iota([U,V]) - {iota U, iota V}; kappa(Y_{1|2}, X_1') = +Y_{3|4}".into(),
    })
}

pub fn holonomy_check(model: &FrameModel, expected: Option<usize>) -> CheckReport {
    match infinitesimal_holonomy(model) {
        Ok(rep) => {
            let expected = expected.unwrap_or(rep.summands);
            let ok = rep.dimension == expected
                && rep.abelian
                && rep.random_point_dims.iter().all(|&d| d == rep.dimension)
                && !rep.basis.iter().any(|b| ["Y_{1|2}", "Y_{1|3}", "Y_{2|3}"].iter().any(|y| b.contains(y)));
            CheckReport::new(
                format!("flatmodels.holonomy.n{}.{}", model.n, model.modification.name()),
                "infinitesimal holonomy is abelian of dimension equal to the number of summands",
                ok,
                json!({ "expected": expected, "report": rep }),
            )
        }
        Err(e) => CheckReport::new(
            format!("flatmodels.holonomy.n{}.{}", model.n, model.modification.name()),
            "infinitesimal holonomy is abelian of dimension equal to the number of summands",
            false,
            json!({ "error": e.to_string() }),
        ),
    }
}

/// Value at the origin of (∇→_{dir})^{k} applied to s.
fn iterate_at_origin(model: &FrameModel, basis: &GradedBasis, dir: usize, s: &ASection, k: u32) -> Vec<Scalar> {
    let mut t = s.clone();
    for _ in 0..k {
        t = tractor_derivative(model, basis, dir, &t);
    }
    t.eval(basis.dim(), &vec![Scalar::zero(); model.nvars])
}

/// For a General model, checks (∇→_{Y_{1|2}})^{β−1} κ(Y_{1|2}, X_1') = Y_{j|k},
/// (∇→_{Y_{1|3}})^{γ−1} κ(Y_{1|3}, X_1') = Y_{2|j} and (∇→_{Y_{2|3}})^{δ−1} κ(Y_{2|3}, X_2') = Y_{1|j}
/// at the origin. The opposite argument order gives the negatives.
pub fn iterated_derivative_leading_terms(model: &FrameModel) -> Result<CheckReport> {
    let Modification::General { beta, gamma, delta } = &model.modification else {
        return Err(Error::BadFrame("leading terms need a general model".into()));
    };
    let basis = GradedBasis::new(model.n);
    let kappa = curvature(model, &basis);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut check = |label: String, y: (usize, usize), x: usize, target: (usize, usize), k: u32| {
        let yf = model.y_frame(y.0, y.1);
        let val = iterate_at_origin(model, &basis, yf, &kappa.get(yf, x), k - 1);
        let rev = iterate_at_origin(model, &basis, yf, &kappa.get(x, yf), k - 1);
        let t = basis.index_of_y(target.0, target.1);
        let lowest: Vec<Scalar> = val.iter().enumerate().map(|(i, c)| if basis.grade_of(i) == -2 { c.clone() } else { Scalar::zero() }).collect();
        let mut want = vec![Scalar::zero(); basis.dim()];
        want[t] = Scalar::one();
        let good = lowest == want;
        ok &= good;
        rows.push(json!({
            "identity": label,
            "value_at_origin": format_vector(&basis, &val),
            "reversed_order": format_vector(&basis, &rev),
            "ok": good,
        }));
    };
    for (&(j, k), &b) in beta {
        check(format!("beta({},{})={b}", j + 1, k + 1), (0, 1), 0, (j, k), b);
    }
    for (&j, &g) in gamma {
        check(format!("gamma({})={g}", j + 1), (0, 2), 0, (1, j), g);
    }
    for (&j, &d) in delta {
        check(format!("delta({})={d}", j + 1), (1, 2), 1, (0, j), d);
    }
    Ok(CheckReport::new(
        format!("flatmodels.leading_terms.n{}", model.n),
        "iterated derivatives of the curvature along Y_{1|2}, Y_{1|3}, Y_{2|3} reach every added Y_{j|k}",
        ok,
        json!({ "identities": rows }),
    ))
}

/// κ is antisymmetric by construction; checks it takes values in g_-2 only, is nonzero
/// only on Y ∧ X pairs, and that each value Y_{a|b} on (Y_{j|k}, X_l) has {a,b} disjoint from {j,k,l}.
pub fn curvature_shape_check(model: &FrameModel) -> CheckReport {
    let basis = GradedBasis::new(model.n);
    let kappa = curvature(model, &basis);
    let n = model.n;
    let pair_of = |f: usize| crate::exactalg::pairs(n)[f - n];
    let mut ok = true;
    let mut entries = Vec::new();
    for (&(a, b), s) in kappa.nonzero() {
        let (y, x) = if a >= n && b < n { (a, b) } else if b >= n && a < n { (b, a) } else { (usize::MAX, usize::MAX) };
        let mut good = y != usize::MAX && s.grades(&basis) == vec![-2];
        if good {
            let (j, k) = pair_of(y);
            for &g in s.terms.keys() {
                let (p, q) = pair_of(g_to_frame(&basis, model, g).unwrap());
                if [j, k, x].contains(&p) || [j, k, x].contains(&q) {
                    good = false;
                }
            }
        }
        ok &= good;
        entries.push(json!({
            "pair": [model.labels[a], model.labels[b]],
            "value": s.display(&basis, &coordinate_names(n)),
        }));
    }
    CheckReport::new(
        format!("flatmodels.curvature_shape.n{}.{}", n, model.modification.name()),
        "curvature only has components Y*_{j|k} ∧ X*_l ⊗ Y_{a|b} with a, b outside {j, k, l}",
        ok,
        json!({ "nonzero": entries }),
    )
}

/// Frame determinant ±1 at the origin and bracket generation at the origin and 10 random points.
pub fn frame_check(model: &FrameModel, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = model.sample_points(&mut rng, 10);
    let det = model.frame_matrix_at(&points[0]).det();
    let ranks: Vec<usize> = points.iter().map(|p| model.bracket_generating_rank_at(p)).collect();
    let dets: Vec<String> = points.iter().map(|p| fmt_scalar(&model.frame_matrix_at(p).det())).collect();
    let ok = (det.is_one() || (-det.clone()).is_one()) && ranks.iter().all(|&r| r == model.nvars);
    CheckReport::new(
        format!("flatmodels.frame.n{}.{}", model.n, model.modification.name()),
        "the frame is a pointwise basis and the distribution is free",
        ok,
        json!({ "det_origin": fmt_scalar(&det), "dets": dets, "bracket_ranks": ranks, "dim": model.nvars }),
    )
}

/// Drops the listed summands (indices into the saturated β, γ, δ tables, in that order)
/// from the saturated model of rank n.
pub fn saturated_without(n: usize, drop: &[usize]) -> Modification {
    let Modification::General { beta, gamma, delta } = Modification::saturated(n) else { unreachable!() };
    let nb = beta.len();
    let ng = gamma.len();
    let beta = beta.into_iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, kv)| kv).collect();
    let gamma = gamma.into_iter().enumerate().filter(|(i, _)| !drop.contains(&(nb + i))).map(|(_, kv)| kv).collect();
    let delta = delta.into_iter().enumerate().filter(|(i, _)| !drop.contains(&(nb + ng + i))).map(|(_, kv)| kv).collect();
    Modification::General { beta, gamma, delta }
}

/// Removing k summands from the saturated model lowers the holonomy dimension by k.
pub fn removal_check(n: usize, drops: &[Vec<usize>]) -> CheckReport {
    let full = Modification::saturated(n).summands();
    let mut rows = Vec::new();
    let mut ok = true;
    for d in drops {
        let res = build_model(n, saturated_without(n, d)).and_then(|m| {
            let normal = normality_check(&m).passed();
            infinitesimal_holonomy(&m).map(|h| (h, normal))
        });
        match res {
            Ok((h, normal)) => {
                let good = normal && h.dimension == full - d.len();
                ok &= good;
                rows.push(json!({ "removed": d, "dimension": h.dimension, "expected": full - d.len(), "normal": normal }));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({ "removed": d, "error": e.to_string() }));
            }
        }
    }
    CheckReport::new(
        format!("flatmodels.removal.n{n}"),
        "removing k summands from X_1', X_2' lowers the holonomy dimension by k",
        ok,
        json!({ "saturated_dimension": full, "cases": rows }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_brackets() {
        let m = build_model(4, Modification::None).unwrap();
        let n = 4;
        for j in 0..n {
            for k in j + 1..n {
                assert_eq!(vf_bracket(&m.frame[j], &m.frame[k]), m.frame[m.y_frame(j, k)]);
            }
        }
        let basis = GradedBasis::new(4);
        assert_eq!(curvature(&m, &basis).nonzero().count(), 0);
    }

    #[test]
    fn single_y34() {
        let m = build_model(4, Modification::SingleY34).unwrap();
        let basis = GradedBasis::new(4);
        let y12 = m.y_frame(0, 1);
        assert_eq!(vf_bracket(&m.frame[y12], &m.frame[0]), m.frame[m.y_frame(2, 3)]);
        let k = curvature(&m, &basis);
        assert_eq!(k.nonzero().count(), 1);
        let mut want = ASection::zero(m.nvars);
        want.add_term(basis.index_of_y(2, 3), Poly::one(m.nvars));
        assert_eq!(k.get(y12, 0), want);
        // ∇→κ = 0
        for u in 0..m.dim() {
            assert!(tractor_derivative(&m, &basis, u, &k.get(y12, 0)).is_zero());
        }
        assert!(normality_check(&m).passed());
        let h = infinitesimal_holonomy(&m).unwrap();
        assert_eq!(h.dimension, 1);
        assert_eq!(h.basis, vec!["Y_{3|4}".to_string()]);
    }

    #[test]
    fn saturated_models() {
        for (n, want) in [(4, 3), (5, 7)] {
            let m = build_model(n, Modification::saturated(n)).unwrap();
            assert!(frame_check(&m, 1).passed());
            assert!(normality_check(&m).passed(), "{n}");
            assert!(curvature_shape_check(&m).passed());
            assert!(iterated_derivative_leading_terms(&m).unwrap().passed());
            let h = holonomy_check(&m, Some(want));
            assert!(h.passed(), "{}", h.payload);
        }
    }

    #[test]
    fn injectivity_enforced() {
        let mut beta = BTreeMap::new();
        beta.insert((2, 3), 1);
        beta.insert((2, 4), 1);
        let m = build_model(5, Modification::General { beta, gamma: BTreeMap::new(), delta: BTreeMap::new() });
        assert!(matches!(m, Err(Error::NotInjective("beta"))));
    }

    #[test]
    fn constant_g2_section() {
        let m = build_model(3, Modification::None).unwrap();
        let basis = GradedBasis::new(3);
        let mut c = BTreeMap::new();
        c.insert(basis.index_of_b(0, 1), Scalar::one());
        let nu = ASection::constant(m.nvars, &c);
        let d = tractor_derivative(&m, &basis, 0, &nu);
        assert_eq!(d.grades(&basis), vec![1]);
        assert!(tractor_derivative(&m, &basis, 0, &ASection::zero(m.nvars)).is_zero());
    }
}

#[cfg(test)]
mod removal_tests {
    use super::*;

    #[test]
    fn removing_summands_lowers_dimension() {
        let drops = vec![vec![0], vec![1, 4], vec![2, 3, 6], vec![3, 4, 5], vec![1, 2, 3, 4, 5, 6]];
        let r = removal_check(5, &drops);
        assert!(r.passed(), "{}", r.payload);
    }
}
