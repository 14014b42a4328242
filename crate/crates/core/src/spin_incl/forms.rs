use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactalg::{Matrix, Scalar};

/// Sort indices, returning the sign of the permutation, or None on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Alternating k-form on R^d, Σ_I c_I e^I over increasing multi-indices I.
/// The value on (e_{i_1}, …, e_{i_k}) with i increasing is c_I.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltForm {
    pub dim: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl AltForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        AltForm { dim, degree, coeffs: BTreeMap::new() }
    }

    /// e^{i_1} ∧ … ∧ e^{i_k} (indices in any order).
    pub fn basic(dim: usize, idx: &[usize], coef: Scalar) -> Self {
        let mut f = Self::zero(dim, idx.len());
        f.add_term(idx, coef);
        f
    }

    pub fn add_term(&mut self, idx: &[usize], coef: Scalar) {
        assert_eq!(idx.len(), self.degree);
        if let Some((s, sign)) = sort_with_sign(idx) {
            let c = if sign > 0 { coef } else { -coef };
            let e = self.coeffs.entry(s.clone()).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                self.coeffs.remove(&s);
            }
        }
    }

    pub fn add(&self, o: &AltForm) -> AltForm {
        let mut out = self.clone();
        for (k, v) in &o.coeffs {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.add_term(k, v * s);
        }
        out
    }

    pub fn wedge(&self, o: &AltForm) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree + o.degree);
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                let mut idx = a.clone();
                idx.extend(b.iter().cloned());
                out.add_term(&idx, x * y);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value on basis vectors e_{idx[0]}, …
    pub fn eval_basis(&self, idx: &[usize]) -> Scalar {
        match sort_with_sign(idx) {
            None => Scalar::zero(),
            Some((s, sign)) => {
                let c = self.coeffs.get(&s).cloned().unwrap_or_else(Scalar::zero);
                if sign > 0 {
                    c
                } else {
                    -c
                }
            }
        }
    }

    /// Infinitesimal action (X·λ)(u_1,…,u_k) = -Σ_m λ(u_1,…,X u_m,…,u_k).
    pub fn act(&self, x: &Matrix) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree);
        for idx in increasing_tuples(self.dim, self.degree) {
            let mut s = Scalar::zero();
            for m in 0..self.degree {
                for r in 0..self.dim {
                    let xr = &x[(r, idx[m])];
                    if xr.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[m] = r;
                    let v = self.eval_basis(&j);
                    if !v.is_zero() {
                        s -= xr * v;
                    }
                }
            }
            out.add_term(&idx, s);
        }
        out
    }

    /// Coefficient vector over increasing tuples.
    pub fn to_vec(&self) -> Vec<Scalar> {
        increasing_tuples(self.dim, self.degree)
            .iter()
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero))
            .collect()
    }
}

pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut out);
    out
}
