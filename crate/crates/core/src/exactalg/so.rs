use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Metric on R^(2n+1) in the block form [[0,0,I],[0,1,0],[I,0,0]].
pub fn metric_j(n: usize) -> Matrix {
    let m = 2 * n + 1;
    let mut j = Matrix::zeros(m, m);
    for i in 0..n {
        j[(i, n + 1 + i)] = Scalar::one();
        j[(n + 1 + i, i)] = Scalar::one();
    }
    j[(n, n)] = Scalar::one();
    j
}

/// Element of so(n+1,n) in the block form
///
/// ```text
/// [ A   v   B  ]
/// [ w   0  -vᵗ ]
/// [ C  -wᵗ -Aᵗ ]
/// ```
///
/// with B and C skew. Grades: C = -2, w = -1, A = 0, v = 1, B = 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieElement {
    pub n: usize,
    pub a: Matrix,
    pub v: Vec<Scalar>,
    pub b: Matrix,
    pub w: Vec<Scalar>,
    pub c: Matrix,
}

fn is_skew(m: &Matrix) -> bool {
    m.add(&m.transpose()).is_zero()
}

impl LieElement {
    pub fn new(a: Matrix, v: Vec<Scalar>, b: Matrix, w: Vec<Scalar>, c: Matrix) -> Result<Self> {
        let n = a.rows();
        let shapes = [a.cols(), v.len(), b.rows(), b.cols(), w.len(), c.rows(), c.cols()];
        if let Some(&bad) = shapes.iter().find(|&&s| s != n) {
            return Err(Error::RankMismatch(n, bad));
        }
        if !is_skew(&b) {
            return Err(Error::NotInAlgebra("B block is not skew".into()));
        }
        if !is_skew(&c) {
            return Err(Error::NotInAlgebra("C block is not skew".into()));
        }
        Ok(LieElement { n, a, v, b, w, c })
    }

    pub fn zero(n: usize) -> Self {
        LieElement {
            n,
            a: Matrix::zeros(n, n),
            v: vec![Scalar::zero(); n],
            b: Matrix::zeros(n, n),
            w: vec![Scalar::zero(); n],
            c: Matrix::zeros(n, n),
        }
    }

    /// The grading element: A = identity.
    pub fn grading_element(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.a = Matrix::identity(n);
        e
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.n;
        let mid = n;
        let mut m = Matrix::zeros(2 * n + 1, 2 * n + 1);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.a[(i, j)].clone();
                m[(n + 1 + i, n + 1 + j)] = -self.a[(j, i)].clone();
                m[(i, n + 1 + j)] = self.b[(i, j)].clone();
                m[(n + 1 + i, j)] = self.c[(i, j)].clone();
            }
            m[(i, mid)] = self.v[i].clone();
            m[(mid, n + 1 + i)] = -self.v[i].clone();
            m[(mid, i)] = self.w[i].clone();
            m[(n + 1 + i, mid)] = -self.w[i].clone();
        }
        m
    }

    /// Read blocks off an embedded matrix, checking XᵗJ + JX = 0.
    pub fn from_matrix(n: usize, m: &Matrix) -> Result<Self> {
        if m.rows() != 2 * n + 1 || m.cols() != 2 * n + 1 {
            return Err(Error::RankMismatch(2 * n + 1, m.rows()));
        }
        let j = metric_j(n);
        if !m.transpose().mul(&j).add(&j.mul(m)).is_zero() {
            return Err(Error::NotInAlgebra("XᵗJ + JX ≠ 0".into()));
        }
        Ok(Self::from_matrix_unchecked(n, m))
    }

    fn from_matrix_unchecked(n: usize, m: &Matrix) -> Self {
        let blk = |r0: usize, c0: usize| Matrix::from_fn(n, n, |i, j| m[(r0 + i, c0 + j)].clone());
        LieElement {
            n,
            a: blk(0, 0),
            v: (0..n).map(|i| m[(i, n)].clone()).collect(),
            b: blk(0, n + 1),
            w: (0..n).map(|i| m[(n, i)].clone()).collect(),
            c: blk(n + 1, 0),
        }
    }

    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let m = self.to_matrix().commutator(&other.to_matrix());
        Ok(Self::from_matrix_unchecked(self.n, &m))
    }

    /// Trace form tr(xy), a nonzero multiple of the Killing form.
    pub fn form(&self, other: &LieElement) -> Result<Scalar> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(self.to_matrix().trace_product(&other.to_matrix()))
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        LieElement {
            n: self.n,
            a: self.a.add(&other.a),
            v: self.v.iter().zip(&other.v).map(|(x, y)| x + y).collect(),
            b: self.b.add(&other.b),
            w: self.w.iter().zip(&other.w).map(|(x, y)| x + y).collect(),
            c: self.c.add(&other.c),
        }
    }

    pub fn scale(&self, s: &Scalar) -> LieElement {
        LieElement {
            n: self.n,
            a: self.a.scale(s),
            v: self.v.iter().map(|x| x * s).collect(),
            b: self.b.scale(s),
            w: self.w.iter().map(|x| x * s).collect(),
            c: self.c.scale(s),
        }
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero()
            && self.b.is_zero()
            && self.c.is_zero()
            && self.v.iter().all(|x| x.is_zero())
            && self.w.iter().all(|x| x.is_zero())
    }

    /// Component of grade `j`; zero outside -2..=2.
    pub fn grade_part(&self, j: i32) -> LieElement {
        let mut out = LieElement::zero(self.n);
        match j {
            -2 => out.c = self.c.clone(),
            -1 => out.w = self.w.clone(),
            0 => out.a = self.a.clone(),
            1 => out.v = self.v.clone(),
            2 => out.b = self.b.clone(),
            _ => {}
        }
        out
    }

    /// Grades carrying a nonzero component.
    pub fn grades(&self) -> Vec<i32> {
        (-2..=2).filter(|&j| !self.grade_part(j).is_zero()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisElement {
    pub grade: i32,
    pub label: String,
    /// Weight for the diagonal torus of g0, as integer coefficients of e_1..e_n.
    pub weight: Vec<i32>,
}

/// Index of the pair (j,k), j<k, in lexicographic order.
pub fn pair_index(n: usize, j: usize, k: usize) -> usize {
    assert!(j < k && k < n);
    j * n - j * (j + 1) / 2 + (k - j - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            v.push((j, k));
        }
    }
    v
}

/// Basis of so(n+1,n) adapted to the grading, ordered by grade -2, -1, 0, 1, 2.
///
/// * grade -2: Y_{j|k} = [X_j, X_k] (C_jk = -1, C_kj = 1)
/// * grade -1: X_i (w = e_i)
/// * grade 0: A_{i,j} (A = E_ij)
/// * grade 1: V_i (v = e_i)
/// * grade 2: B_{j|k} (B = E_jk - E_kj)
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub n: usize,
    pub elements: Vec<BasisElement>,
    offsets: [usize; 6],
    /// structure[i][j] = sparse coordinates of [e_i, e_j].
    structure: Vec<Vec<Vec<(usize, Scalar)>>>,
    form: Matrix,
}

impl GradedBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let np = n * (n - 1) / 2;
        let offsets = [0, np, np + n, np + n + n * n, np + 2 * n + n * n, 2 * np + 2 * n + n * n];
        let mut elements = Vec::new();
        let unit = |i: usize| -> Vec<i32> {
            let mut w = vec![0; n];
            w[i] = 1;
            w
        };
        let addw = |a: &[i32], b: &[i32], s: i32| -> Vec<i32> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
        for (j, k) in pairs(n) {
            elements.push(BasisElement {
                grade: -2,
                label: format!("Y_{{{}|{}}}", j + 1, k + 1),
                weight: addw(&addw(&vec![0; n], &unit(j), -1), &unit(k), -1),
            });
        }
        for i in 0..n {
            elements.push(BasisElement { grade: -1, label: format!("X_{}", i + 1), weight: addw(&vec![0; n], &unit(i), -1) });
        }
        for i in 0..n {
            for j in 0..n {
                elements.push(BasisElement {
                    grade: 0,
                    label: format!("A_{{{},{}}}", i + 1, j + 1),
                    weight: addw(&unit(i), &unit(j), -1),
                });
            }
        }
        for i in 0..n {
            elements.push(BasisElement { grade: 1, label: format!("V_{}", i + 1), weight: unit(i) });
        }
        for (j, k) in pairs(n) {
            elements.push(BasisElement { grade: 2, label: format!("B_{{{}|{}}}", j + 1, k + 1), weight: addw(&unit(j), &unit(k), 1) });
        }
        let mut gb = GradedBasis { n, elements, offsets, structure: Vec::new(), form: Matrix::zeros(0, 0) };
        let mats: Vec<Matrix> = (0..gb.dim()).map(|i| gb.element(i).to_matrix()).collect();
        let dim = gb.dim();
        let mut structure = vec![vec![Vec::new(); dim]; dim];
        let mut form = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                form[(i, j)] = mats[i].trace_product(&mats[j]);
                if j <= i {
                    continue;
                }
                let br = LieElement::from_matrix_unchecked(n, &mats[i].commutator(&mats[j]));
                let coords = gb.coords(&br);
                let sparse: Vec<(usize, Scalar)> =
                    coords.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
                structure[j][i] = sparse.iter().map(|(k, x)| (*k, -x.clone())).collect();
                structure[i][j] = sparse;
            }
        }
        gb.structure = structure;
        gb.form = form;
        gb
    }

    pub fn dim(&self) -> usize {
        self.offsets[5]
    }

    /// Index range of grade j.
    pub fn grade_range(&self, j: i32) -> std::ops::Range<usize> {
        assert!((-2..=2).contains(&j));
        let k = (j + 2) as usize;
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn grade_dim(&self, j: i32) -> usize {
        self.grade_range(j).len()
    }

    pub fn grade_of(&self, i: usize) -> i32 {
        self.elements[i].grade
    }

    pub fn index_of_y(&self, j: usize, k: usize) -> usize {
        self.offsets[0] + pair_index(self.n, j, k)
    }

    pub fn index_of_x(&self, i: usize) -> usize {
        self.offsets[1] + i
    }

    pub fn index_of_a(&self, i: usize, j: usize) -> usize {
        self.offsets[2] + i * self.n + j
    }

    pub fn index_of_v(&self, i: usize) -> usize {
        self.offsets[3] + i
    }

    pub fn index_of_b(&self, j: usize, k: usize) -> usize {
        self.offsets[4] + pair_index(self.n, j, k)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i].label
    }

    pub fn element(&self, idx: usize) -> LieElement {
        let n = self.n;
        let mut e = LieElement::zero(n);
        let o = &self.offsets;
        if idx < o[1] {
            let (j, k) = pairs(n)[idx];
            e.c[(j, k)] = -Scalar::one();
            e.c[(k, j)] = Scalar::one();
        } else if idx < o[2] {
            e.w[idx - o[1]] = Scalar::one();
        } else if idx < o[3] {
            let r = idx - o[2];
            e.a[(r / n, r % n)] = Scalar::one();
        } else if idx < o[4] {
            e.v[idx - o[3]] = Scalar::one();
        } else {
            let (j, k) = pairs(n)[idx - o[4]];
            e.b[(j, k)] = Scalar::one();
            e.b[(k, j)] = -Scalar::one();
        }
        e
    }

    pub fn coords(&self, x: &LieElement) -> Vec<Scalar> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.dim());
        for (j, k) in pairs(n) {
            out.push(-x.c[(j, k)].clone());
        }
        out.extend(x.w.iter().cloned());
        for i in 0..n {
            for j in 0..n {
                out.push(x.a[(i, j)].clone());
            }
        }
        out.extend(x.v.iter().cloned());
        for (j, k) in pairs(n) {
            out.push(x.b[(j, k)].clone());
        }
        out
    }

    pub fn from_coords(&self, c: &[Scalar]) -> LieElement {
        let mut e = LieElement::zero(self.n);
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                e = e.add(&self.element(i).scale(x));
            }
        }
        e
    }

    /// Structure constants: sparse coordinates of [e_i, e_j].
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.structure[i][j]
    }

    /// Bracket of coordinate vectors.
    pub fn bracket_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.structure[i][j] {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    /// Sparse bracket on coordinate maps.
    pub fn bracket_sparse(&self, x: &BTreeMap<usize, Scalar>, y: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, xi) in x {
            for (j, yj) in y {
                let f = xi * yj;
                for (k, c) in &self.structure[*i][*j] {
                    *out.entry(*k).or_insert_with(Scalar::zero) += &f * c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Gram matrix of the trace form on the basis.
    pub fn form_matrix(&self) -> &Matrix {
        &self.form
    }

    pub fn grading_element(&self) -> LieElement {
        LieElement::grading_element(self.n)
    }

    /// Dual basis of g_- inside g_+ under the trace form: for each basis index
    /// l of grade -1 or -2, the coordinates of Z^l with form(Z^l, e_m) = δ_lm.
    pub fn dual_of_negative(&self) -> Vec<(usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        for g in [-2, -1] {
            let neg = self.grade_range(g);
            let pos = self.grade_range(-g);
            let pairing = Matrix::from_fn(pos.len(), neg.len(), |a, b| self.form[(pos.start + a, neg.start + b)].clone());
            // Z^l = sum_a c_a e_{pos a} with sum_a c_a pairing[a][m] = δ_lm
            let inv = pairing.inverse().expect("trace form pairs g_j with g_-j");
            for (l, idx) in neg.clone().enumerate() {
                let mut c = vec![Scalar::zero(); self.dim()];
                for a in 0..pos.len() {
                    c[pos.start + a] = inv[(l, a)].clone();
                }
                out.push((idx, c));
            }
        }
        out
    }

    pub fn p_indices(&self) -> Vec<usize> {
        (self.grade_range(0).start..self.dim()).collect()
    }

    pub fn p_perp_indices(&self) -> Vec<usize> {
        (self.grade_range(1).start..self.dim()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::int;

    #[test]
    fn dims() {
        let g = GradedBasis::new(3);
        assert_eq!(g.dim(), 21);
        let d: Vec<usize> = (-2..=2).map(|j| g.grade_dim(j)).collect();
        assert_eq!(d, vec![3, 3, 9, 3, 3]);
        assert_eq!(g.p_indices().len(), 15);
        let g4 = GradedBasis::new(4);
        assert_eq!((g4.dim(), g4.grade_dim(-2)), (36, 6));
    }

    #[test]
    fn x_bracket_gives_y() {
        let g = GradedBasis::new(4);
        for (j, k) in pairs(4) {
            let br = g.element(g.index_of_x(j)).bracket(&g.element(g.index_of_x(k))).unwrap();
            assert_eq!(br, g.element(g.index_of_y(j, k)));
        }
    }

    #[test]
    fn embedding_is_skew() {
        let g = GradedBasis::new(3);
        let j = metric_j(3);
        for i in 0..g.dim() {
            let m = g.element(i).to_matrix();
            assert!(m.transpose().mul(&j).add(&j.mul(&m)).is_zero(), "{}", g.label(i));
            assert_eq!(g.coords(&g.element(i))[i], int(1));
        }
    }
}
