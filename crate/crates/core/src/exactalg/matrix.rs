use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{fmt_scalar, Scalar};

/// Dense rectangular matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Scalar>], len: usize) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..len {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_integer(BigInt::from(x))).collect())
            .collect();
        Self::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Entries in row-major order.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self[(i, j)].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// Trace of `self * other` without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> Scalar {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut s = Scalar::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if !a.is_zero() {
                    let b = &other[(k, i)];
                    if !b.is_zero() {
                        s += a * b;
                    }
                }
            }
        }
        s
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(&self.to_rows(), self.cols).1.len()
    }

    /// Reduced row echelon form: nonzero rows only, with pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        rref_rows(&self.to_rows(), self.cols)
    }

    /// Basis of the right kernel `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (rref, pivots) = self.rref();
        kernel_from_rref(&rref, &pivots, self.cols)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let (ints, scale) = integer_rows(&self.to_rows());
        let mut m = ints;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = match (k..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => p,
                None => return Scalar::zero(),
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = Scalar::from_integer(m[n - 1][n - 1].clone()) / scale;
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
                r
            })
            .collect();
        gauss_jordan(&mut aug, n);
        for (i, row) in aug.iter().enumerate() {
            if !row[i].is_one() {
                return None;
            }
        }
        Some(Matrix::from_rows(&aug.iter().map(|r| r[n..].to_vec()).collect::<Vec<_>>()))
    }

    /// Some solution of `self x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.push(b[i].clone());
                r
            })
            .collect();
        let (rref, pivots) = rref_rows(&aug, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in rref.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, by exact
    /// congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "signature of non-symmetric matrix");
        let mut a = self.clone();
        let n = a.rows;
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            if a[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    a.swap_sym(k, i);
                } else if let Some(i) = (k + 1..n).find(|&i| !a[(k, i)].is_zero()) {
                    // a_kk becomes 2 a_ki after adding row/col i to k
                    a.add_sym(k, i);
                } else if let Some((i, j)) = (k + 1..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero())
                {
                    a.add_sym(i, j);
                    a.swap_sym(k, i);
                } else {
                    break;
                }
            }
            let p = a[(k, k)].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<Scalar> = (0..n).map(|i| a[(i, k)].clone()).collect();
            for i in k + 1..n {
                if col[i].is_zero() {
                    continue;
                }
                let f = &col[i] / &p;
                for j in k + 1..n {
                    if !col[j].is_zero() {
                        let v = &f * &col[j];
                        a[(i, j)] -= v;
                    }
                }
            }
            for i in k + 1..n {
                a[(i, k)] = Scalar::zero();
                a[(k, i)] = Scalar::zero();
            }
            k += 1;
        }
        (pos, neg, n - pos - neg)
    }

    fn swap_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    // row_i += row_j, col_i += col_j
    fn add_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self[(j, c)].clone();
            self[(i, c)] += v;
        }
        for r in 0..self.rows {
            let v = self[(r, j)].clone();
            self[(r, i)] += v;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(fmt_scalar).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Clear denominators row by row. Returns the integer rows and the product
/// of the row multipliers (needed to recover determinants).
fn integer_rows(rows: &[Vec<Scalar>]) -> (Vec<Vec<BigInt>>, Scalar) {
    let mut total = Scalar::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            total *= Scalar::from_integer(l.clone());
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    (out, total)
}

/// Fraction-free (Bareiss) forward elimination. Returns the echelon rows
/// (integer, only the pivot rows) and the pivot columns.
pub fn bareiss_echelon(rows: &[Vec<Scalar>], cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let (mut m, _) = integer_rows(rows);
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let p = match (r..nrows).find(|&i| !m[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(p, r);
        let (top, bottom) = m.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                for j in c + 1..cols {
                    if !row[j].is_zero() {
                        row[j] = (&prow[c] * &row[j]) / &prev;
                    }
                }
            } else {
                for j in c + 1..cols {
                    let v = &prow[c] * &row[j] - &row[c] * &prow[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Reduced row echelon form via Bareiss elimination followed by exact
/// back substitution.
pub fn rref_rows(rows: &[Vec<Scalar>], cols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let (ech, pivots) = bareiss_echelon(rows, cols);
    let mut out: Vec<Vec<Scalar>> = ech
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let lead = Scalar::from_integer(row[p].clone());
            row.into_iter().map(|x| Scalar::from_integer(x) / &lead).collect()
        })
        .collect();
    for k in (0..out.len()).rev() {
        let p = pivots[k];
        let (above, rest) = out.split_at_mut(k);
        let prow = &rest[0];
        for row in above.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for j in p..cols {
                if !prow[j].is_zero() {
                    let v = &f * &prow[j];
                    row[j] -= v;
                }
            }
        }
    }
    (out, pivots)
}

pub fn kernel_from_rref(rref: &[Vec<Scalar>], pivots: &[usize], cols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (row, &p) in rref.iter().zip(pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

fn gauss_jordan(m: &mut [Vec<Scalar>], ncols: usize) {
    let nrows = m.len();
    let mut r = 0;
    for c in 0..ncols {
        let p = match (r..nrows).find(|&i| !m[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(p, r);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let prow = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
}

/// Dimension of the span of a list of vectors of length `len`.
pub fn span_dim(vectors: &[Vec<Scalar>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    bareiss_echelon(vectors, len).1.len()
}

/// RREF basis of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Scalar>], len: usize) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    rref_rows(vectors, len).0
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Scalar>], v: &[Scalar], len: usize) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_dim(&all, len) == span_dim(basis, len)
}

/// Whether span(a) = span(b).
pub fn same_span(a: &[Vec<Scalar>], b: &[Vec<Scalar>], len: usize) -> bool {
    let da = span_dim(a, len);
    let db = span_dim(b, len);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    da == db && span_dim(&all, len) == da
}

/// Basis of span(a) ∩ span(b).
pub fn intersection(a: &[Vec<Scalar>], b: &[Vec<Scalar>], len: usize) -> Vec<Vec<Scalar>> {
    let a = span_basis(a, len);
    let b = span_basis(b, len);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum x_i a_i - sum y_j b_j = 0.
    let mut cols: Vec<Vec<Scalar>> = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = Matrix::from_cols(&cols, len);
    let ker = m.kernel();
    let vecs: Vec<Vec<Scalar>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![Scalar::zero(); len];
            for (i, ai) in a.iter().enumerate() {
                if !k[i].is_zero() {
                    for t in 0..len {
                        v[t] += &k[i] * &ai[t];
                    }
                }
            }
            v
        })
        .collect();
    span_basis(&vecs, len)
}

/// Coordinates of `v` in terms of the (independent) vectors `basis`.
pub fn coordinates(basis: &[Vec<Scalar>], v: &[Scalar], len: usize) -> Option<Vec<Scalar>> {
    Matrix::from_cols(basis, len).solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{frac, int};

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let s = Matrix::from_i64(&[&[0, 1], &[0, 2]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.det(), int(0));
        let p = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.det(), int(-1));
    }

    #[test]
    fn det_with_fractions() {
        let m = Matrix::from_rows(&[vec![frac(1, 2), frac(1, 3)], vec![frac(1, 4), frac(1, 5)]]);
        assert_eq!(m.det(), frac(1, 10) - frac(1, 12));
    }

    #[test]
    fn signature_split() {
        let m = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.signature(), (1, 1, 0));
        let m = Matrix::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert_eq!(m.signature(), (2, 1, 0));
        let m = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.signature(), (1, 0, 1));
        let m = Matrix::from_i64(&[&[0, 0, 0], &[0, 0, 2], &[0, 2, 0]]);
        assert_eq!(m.signature(), (1, 1, 1));
    }

    #[test]
    fn solve_and_intersection() {
        let m = Matrix::from_i64(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let a = vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]];
        let b = vec![vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]];
        let i = intersection(&a, &b, 3);
        assert_eq!(i, vec![vec![int(0), int(1), int(0)]]);
    }
}
