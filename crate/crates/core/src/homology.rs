//! Chains in Λᶜp⊥ ⊗ g, the codifferential, and H₂(p⊥, g) by exact ranks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::matrix::{span_dim, Matrix};
use crate::exactalg::{GradedBasis, Scalar};
use crate::report::CheckReport;

/// A basis chain: sorted positions into the p⊥ ordering, and a position
/// into the g ordering.
pub type ChainKey = (Vec<usize>, usize);

/// Orderings of p⊥ and g used to name chain coordinates. The default is the
/// graded basis order; permuted orderings exist to test basis independence.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub g: GradedBasis,
    /// p⊥ position -> global basis index
    pp: Vec<usize>,
    pp_pos: HashMap<usize, usize>,
    /// g position -> global basis index
    gord: Vec<usize>,
    g_pos: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub c: usize,
    pub terms: BTreeMap<ChainKey, Scalar>,
}

impl Chain {
    pub fn zero(c: usize) -> Self {
        Chain { c, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: ChainKey, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += coef;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

/// Slot grades and value grade of a basis chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HomogeneityIndex {
    pub slots: Vec<i32>,
    pub value: i32,
}

impl HomogeneityIndex {
    pub fn total(&self) -> i32 {
        self.slots.iter().sum::<i32>() + self.value
    }
}

/// Position of `m` when inserted into sorted `rest`; None if already present.
fn insert_sorted(rest: &[usize], m: usize) -> Option<(Vec<usize>, usize)> {
    let pos = rest.partition_point(|&x| x < m);
    if rest.get(pos) == Some(&m) {
        return None;
    }
    let mut v = rest.to_vec();
    v.insert(pos, m);
    Some((v, pos))
}

fn combinations(m: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, c, cur, out);
            cur.pop();
        }
    }
    rec(0, m, c, &mut cur, &mut out);
    out
}

impl ChainComplex {
    pub fn new(n: usize) -> Self {
        let g = GradedBasis::new(n);
        let pp = g.p_perp_indices();
        let gord: Vec<usize> = (0..g.dim()).collect();
        Self::with_orders(g, pp, gord)
    }

    /// Use the given orderings of p⊥ (global indices) and of g.
    pub fn with_orders(g: GradedBasis, pp: Vec<usize>, gord: Vec<usize>) -> Self {
        let pp_pos = pp.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut g_pos = vec![0; gord.len()];
        for (i, &x) in gord.iter().enumerate() {
            g_pos[x] = i;
        }
        ChainComplex { g, pp, pp_pos, gord, g_pos }
    }

    pub fn n(&self) -> usize {
        self.g.n
    }

    pub fn pp_dim(&self) -> usize {
        self.pp.len()
    }

    pub fn g_dim(&self) -> usize {
        self.gord.len()
    }

    pub fn pp_global(&self, pos: usize) -> usize {
        self.pp[pos]
    }

    pub fn g_global(&self, pos: usize) -> usize {
        self.gord[pos]
    }

    pub fn g_position(&self, global: usize) -> usize {
        self.g_pos[global]
    }

    pub fn pp_position(&self, global: usize) -> Option<usize> {
        self.pp_pos.get(&global).copied()
    }

    pub fn homogeneity(&self, key: &ChainKey) -> HomogeneityIndex {
        HomogeneityIndex {
            slots: key.0.iter().map(|&p| self.g.grade_of(self.pp[p])).collect(),
            value: self.g.grade_of(self.gord[key.1]),
        }
    }

    /// Weight under the diagonal torus of g0; the codifferential preserves it.
    pub fn weight(&self, key: &ChainKey) -> Vec<i32> {
        let n = self.n();
        let mut w = vec![0; n];
        let el = &self.g.elements;
        for &p in &key.0 {
            for i in 0..n {
                w[i] += el[self.pp[p]].weight[i];
            }
        }
        for i in 0..n {
            w[i] += el[self.gord[key.1]].weight[i];
        }
        w
    }

    pub fn basis_keys(&self, c: usize) -> Vec<ChainKey> {
        let mut out = Vec::new();
        for t in combinations(self.pp_dim(), c) {
            for v in 0..self.g_dim() {
                out.push((t.clone(), v));
            }
        }
        out
    }

    /// ∂* on a basis chain u_1∧…∧u_c ⊗ v:
    ///
    /// Σ_{j<k} (-1)^{j+k+1} {u_j,u_k}∧u_1…û_j…û_k…u_c ⊗ v
    ///   + Σ_j (-1)^{j+1} u_1…û_j…u_c ⊗ {u_j, v}
    pub fn codiff_basis(&self, key: &ChainKey) -> Chain {
        let (tuple, v) = key;
        let c = tuple.len();
        let mut out = Chain::zero(c - 1);
        let vg = self.gord[*v];
        for a in 0..c {
            for b in a + 1..c {
                let ua = self.pp[tuple[a]];
                let ub = self.pp[tuple[b]];
                let rest: Vec<usize> = tuple.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, &x)| x).collect();
                // 1-based j = a+1, k = b+1
                let s = if (a + b + 1) % 2 == 0 { 1 } else { -1 };
                for (m, coef) in self.g.bracket_basis(ua, ub) {
                    let mp = self.pp_pos[m];
                    if let Some((t, pos)) = insert_sorted(&rest, mp) {
                        let sign = if (s * if pos % 2 == 0 { 1 } else { -1 }) > 0 { coef.clone() } else { -coef.clone() };
                        out.add_term((t, *v), sign);
                    }
                }
            }
        }
        for a in 0..c {
            let ua = self.pp[tuple[a]];
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|&(i, _)| i != a).map(|(_, &x)| x).collect();
            let s = a % 2 == 0;
            for (k, coef) in self.g.bracket_basis(ua, vg) {
                let val = if s { coef.clone() } else { -coef.clone() };
                out.add_term((rest.clone(), self.g_pos[*k]), val);
            }
        }
        out
    }

    pub fn codifferential(&self, chain: &Chain) -> Result<Chain> {
        if chain.c == 0 {
            return Err(Error::DegreeZero);
        }
        let mut out = Chain::zero(chain.c - 1);
        for (key, coef) in &chain.terms {
            for (k2, c2) in self.codiff_basis(key).terms {
                out.add_term(k2, c2 * coef);
            }
        }
        Ok(out)
    }

    pub fn minimal_homogeneity(&self, chain: &Chain) -> Result<i32> {
        chain.terms.keys().map(|k| self.homogeneity(k).total()).min().ok_or(Error::ZeroChain)
    }

    /// Chain of the single term u_1∧…∧u_c ⊗ v named by global basis indices.
    pub fn basis_chain(&self, us: &[usize], v: usize) -> Result<Chain> {
        let mut pos: Vec<usize> = us
            .iter()
            .map(|u| self.pp_position(*u).ok_or_else(|| Error::NotInAlgebra(format!("{} is not in p-perp", self.g.label(*u)))))
            .collect::<Result<_>>()?;
        let mut sign = 1;
        for i in 0..pos.len() {
            for j in 0..pos.len() - 1 - i {
                if pos[j] > pos[j + 1] {
                    pos.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        let mut ch = Chain::zero(us.len());
        if pos.windows(2).any(|w| w[0] == w[1]) {
            return Ok(ch);
        }
        ch.add_term((pos, self.g_pos[v]), crate::exactalg::scalar::int(sign));
        Ok(ch)
    }
}

type BlockKey = (i32, Vec<i32>);

fn block_key(cx: &ChainComplex, k: &ChainKey) -> BlockKey {
    (cx.homogeneity(k).total(), cx.weight(k))
}

/// Sparse matrix of ∂* restricted to the given domain keys, with rows indexed
/// by `codomain`.
fn codiff_matrix(cx: &ChainComplex, domain: &[ChainKey], codomain: &HashMap<ChainKey, usize>) -> Matrix {
    let mut m = Matrix::zeros(codomain.len(), domain.len());
    for (j, k) in domain.iter().enumerate() {
        for (k2, c) in cx.codiff_basis(k).terms {
            let i = codomain[&k2];
            m[(i, j)] = c;
        }
    }
    m
}

/// Block types of Λ²p⊥ ⊗ g: slot grades (j1 ≤ j2) and value grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockType {
    pub slots: (i32, i32),
    pub value: i32,
}

impl BlockType {
    pub fn of(h: &HomogeneityIndex) -> Self {
        let (a, b) = (h.slots[0], h.slots[1]);
        BlockType { slots: (a.min(b), a.max(b)), value: h.value }
    }

    pub fn homogeneity(&self) -> i32 {
        self.slots.0 + self.slots.1 + self.value
    }

    pub fn name(&self) -> String {
        format!("(g{}∧g{})⊗g{}", self.slots.0, self.slots.1, self.value)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub n: usize,
    /// homogeneity -> dim H₂
    pub dims: BTreeMap<i32, usize>,
    /// homogeneity -> block types that alone carry all of H₂ in that homogeneity
    pub located_in: BTreeMap<i32, Vec<String>>,
    /// whether all of H₂ is carried by blocks with value grade ≥ 0
    pub curvature_type_suffices: bool,
    pub verdict: String,
}

struct WeightBlock {
    key: BlockKey,
    c2: Vec<ChainKey>,
    c3: Vec<ChainKey>,
    c1: Vec<ChainKey>,
}

/// Per-block outcome: H₂ dimension and, for each candidate set of block
/// types, whether ker = im + (ker ∩ span of the set).
struct BlockResult {
    h: i32,
    dim: usize,
    single: BTreeMap<BlockType, bool>,
    curvature: bool,
}

fn analyse_block(cx: &ChainComplex, b: &WeightBlock, types: &[BlockType]) -> BlockResult {
    let idx1: HashMap<ChainKey, usize> = b.c1.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let idx2: HashMap<ChainKey, usize> = b.c2.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let d2 = codiff_matrix(cx, &b.c2, &idx1);
    let rank2 = d2.rank();
    let ker = b.c2.len() - rank2;
    let d3 = codiff_matrix(cx, &b.c3, &idx2);
    let im_vecs: Vec<Vec<Scalar>> = d3.transpose().to_rows().into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let rank3 = span_dim(&im_vecs, b.c2.len());
    let dim = ker - rank3;
    let mut res = BlockResult { h: b.key.0, dim, single: BTreeMap::new(), curvature: true };
    if dim == 0 {
        return res;
    }
    let carries = |pred: &dyn Fn(&BlockType) -> bool| -> bool {
        let cols: Vec<usize> = (0..b.c2.len()).filter(|&j| pred(&BlockType::of(&cx.homogeneity(&b.c2[j])))).collect();
        if cols.is_empty() {
            return false;
        }
        let sub = Matrix::from_fn(d2.rows(), cols.len(), |i, j| d2[(i, cols[j])].clone());
        let mut vecs = im_vecs.clone();
        for kv in sub.kernel() {
            let mut v = vec![Scalar::zero(); b.c2.len()];
            for (j, x) in kv.into_iter().enumerate() {
                v[cols[j]] = x;
            }
            vecs.push(v);
        }
        span_dim(&vecs, b.c2.len()) == ker
    };
    for t in types.iter().filter(|t| t.homogeneity() == b.key.0) {
        res.single.insert(*t, carries(&|x| x == t));
    }
    res.curvature = carries(&|x| x.value >= 0);
    res
}

/// H₂(p⊥, g) = ker(∂* on Λ²) / im(∂* from Λ³), per homogeneity.
pub fn homology_report(cx: &ChainComplex) -> HomologyReport {
    let mut blocks: BTreeMap<BlockKey, WeightBlock> = BTreeMap::new();
    for c in 1..=3 {
        for k in cx.basis_keys(c) {
            let key = block_key(cx, &k);
            let b = blocks.entry(key.clone()).or_insert_with(|| WeightBlock { key, c1: vec![], c2: vec![], c3: vec![] });
            match c {
                1 => b.c1.push(k),
                2 => b.c2.push(k),
                _ => b.c3.push(k),
            }
        }
    }
    let mut types: BTreeSet<BlockType> = BTreeSet::new();
    for k in cx.basis_keys(2) {
        types.insert(BlockType::of(&cx.homogeneity(&k)));
    }
    let types: Vec<BlockType> = types.into_iter().collect();
    let blocks: Vec<WeightBlock> = blocks.into_values().filter(|b| !b.c2.is_empty()).collect();
    let results: Vec<BlockResult> = blocks.par_iter().map(|b| analyse_block(cx, b, &types)).collect();

    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut single: BTreeMap<i32, BTreeMap<BlockType, bool>> = BTreeMap::new();
    let mut curvature = true;
    for r in &results {
        *dims.entry(r.h).or_insert(0) += r.dim;
        if r.dim == 0 {
            continue;
        }
        curvature &= r.curvature;
        let e = single.entry(r.h).or_insert_with(|| {
            types.iter().filter(|t| t.homogeneity() == r.h).map(|t| (*t, true)).collect()
        });
        for (t, ok) in e.iter_mut() {
            *ok &= r.single.get(t).copied().unwrap_or(false);
        }
    }
    dims.retain(|_, d| *d > 0);
    let located_in = single
        .into_iter()
        .map(|(h, m)| (h, m.into_iter().filter(|(_, ok)| *ok).map(|(t, _)| t.name()).collect()))
        .collect();
    let verdict = if curvature { "torsion-free class" } else { "torsion class" }.to_string();
    HomologyReport { n: cx.n(), dims, located_in, curvature_type_suffices: curvature, verdict }
}

pub fn homology_dims(n: usize) -> BTreeMap<i32, usize> {
    homology_report(&ChainComplex::new(n)).dims
}

/// Expected location: homogeneity 3 in (g1∧g2)⊗g0 for n ≤ 3, homogeneity 1
/// in (g1∧g2)⊗g-2 for n ≥ 4.
pub fn expected_location(n: usize) -> (i32, BlockType) {
    if n <= 3 {
        (3, BlockType { slots: (1, 2), value: 0 })
    } else {
        (1, BlockType { slots: (1, 2), value: -2 })
    }
}

pub fn homology_check(n: usize) -> CheckReport {
    let rep = homology_report(&ChainComplex::new(n));
    let (h, block) = expected_location(n);
    let concentrated = rep.dims.keys().all(|&k| k == h) && !rep.dims.is_empty();
    let located = rep.located_in.get(&h).map_or(false, |v| v.contains(&block.name()));
    CheckReport::new(
        format!("homology.location.n{n}"),
        format!("H2(p-perp, g) lies in {} at homogeneity {h}", block.name()),
        concentrated && located,
        serde_json::to_value(&rep).unwrap(),
    )
}

pub fn torsion_dichotomy_report(n: usize) -> CheckReport {
    let rep = homology_report(&ChainComplex::new(n));
    let expected = if n <= 3 { "torsion-free class" } else { "torsion class" };
    CheckReport::new(
        format!("homology.dichotomy.n{n}"),
        "geometries are torsion-free for n = 2, 3 and never torsion-free for n ≥ 4",
        rep.verdict == expected,
        json!({ "n": n, "verdict": rep.verdict, "expected": expected, "dims": rep.dims }),
    )
}

/// Every basis chain of degree c: ∂*∂* vanishes and ∂* preserves homogeneity.
pub fn codiff_square_check(n: usize, c: usize) -> CheckReport {
    let cx = ChainComplex::new(n);
    let keys = cx.basis_keys(c);
    let bad_square = keys
        .par_iter()
        .filter(|k| {
            let d = cx.codiff_basis(k);
            !cx.codifferential(&d).map(|x| x.is_zero()).unwrap_or(true)
        })
        .count();
    let bad_block = keys
        .par_iter()
        .filter(|k| {
            let h = cx.homogeneity(k).total();
            cx.codiff_basis(k).terms.keys().any(|k2| cx.homogeneity(k2).total() != h)
        })
        .count();
    CheckReport::new(
        format!("homology.codiff_square.n{n}.c{c}"),
        "the codifferential squares to zero and preserves homogeneity",
        bad_square == 0 && bad_block == 0,
        json!({ "n": n, "c": c, "basis_chains": keys.len(), "nonzero_squares": bad_square, "homogeneity_violations": bad_block }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{int, random_scalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_term_codiff_is_bracket() {
        let cx = ChainComplex::new(3);
        let g = &cx.g;
        let u = g.index_of_v(0);
        let v = g.index_of_x(1);
        let ch = cx.basis_chain(&[u], v).unwrap();
        let d = cx.codifferential(&ch).unwrap();
        let expected: Vec<(usize, Scalar)> = g.bracket_basis(u, v).to_vec();
        assert_eq!(d.terms.len(), expected.len());
        for (k, c) in expected {
            assert_eq!(d.terms[&(vec![], cx.g_position(k))], c);
        }
        assert_eq!(cx.codifferential(&Chain::zero(0)), Err(Error::DegreeZero));
    }

    #[test]
    fn minimal_homogeneity_examples() {
        let cx = ChainComplex::new(3);
        let g = &cx.g;
        let a = cx.basis_chain(&[g.index_of_v(0), g.index_of_b(0, 1)], g.index_of_a(0, 0)).unwrap();
        let b = cx.basis_chain(&[g.index_of_v(0), g.index_of_b(0, 1)], g.index_of_y(1, 2)).unwrap();
        assert_eq!(cx.minimal_homogeneity(&a).unwrap(), 3);
        assert_eq!(cx.minimal_homogeneity(&b).unwrap(), 1);
        assert_eq!(cx.minimal_homogeneity(&a.add(&b)).unwrap(), 1);
        assert_eq!(cx.minimal_homogeneity(&Chain::zero(2)), Err(Error::ZeroChain));
    }

    #[test]
    fn random_chains_square_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            let cx = ChainComplex::new(n);
            for c in 2..=3 {
                let keys = cx.basis_keys(c);
                for _ in 0..20 {
                    let mut ch = Chain::zero(c);
                    for _ in 0..4 {
                        let k = keys[rng.gen_range(0..keys.len())].clone();
                        ch.add_term(k, random_scalar(&mut rng, 9, 4));
                    }
                    let d = cx.codifferential(&ch).unwrap();
                    assert!(cx.codifferential(&d).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn rank_nullity_small() {
        let cx = ChainComplex::new(2);
        let k2 = cx.basis_keys(2);
        let k1: HashMap<ChainKey, usize> = cx.basis_keys(1).into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let m = codiff_matrix(&cx, &k2, &k1);
        assert_eq!(m.rank() + m.kernel().len(), k2.len());
    }

    #[test]
    fn location_n2_n3() {
        for n in 2..=3 {
            let r = homology_check(n);
            assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
            assert!(torsion_dichotomy_report(n).passed());
        }
    }

    #[test]
    fn permuted_orders_agree() {
        let g = GradedBasis::new(3);
        let mut pp = g.p_perp_indices();
        pp.reverse();
        let mut gord: Vec<usize> = (0..g.dim()).collect();
        gord.rotate_left(5);
        let a = homology_report(&ChainComplex::new(3));
        let b = homology_report(&ChainComplex::with_orders(g, pp, gord));
        assert_eq!(a.dims, b.dims);
        assert_eq!(a.located_in, b.located_in);
        let _ = int(0);
    }
}
