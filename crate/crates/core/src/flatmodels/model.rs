//! Frames of the flat model and its modifications.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::vf::{vf_bracket, PolyVF};
use crate::exactalg::matrix::span_dim;
use crate::exactalg::scalar::{int, random_scalar};
use crate::exactalg::{pair_index, pairs, Matrix, Scalar};
use crate::poly::Poly;
use crate::{Error, Result};

/// Extra terms added to the X-fields. All indices are 0-based internally.
#[derive(Clone, Debug, PartialEq)]
pub enum Modification {
    None,
    /// X1' = X1 + y12 Y34
    SingleY34,
    /// X1' = X1 + Σ y12^β/β! Y_jk + Σ y13^γ/γ! Y_2j, X2' = X2 + Σ y23^δ/δ! Y_1j
    General {
        beta: BTreeMap<(usize, usize), u32>,
        gamma: BTreeMap<usize, u32>,
        delta: BTreeMap<usize, u32>,
    },
    /// X_i' = X_i + Σ p · Y_jk for arbitrary polynomials p.
    Custom(Vec<(usize, (usize, usize), Poly)>),
}

impl Modification {
    pub fn name(&self) -> &'static str {
        match self {
            Modification::None => "none",
            Modification::SingleY34 => "single_y34",
            Modification::General { .. } => "general",
            Modification::Custom(_) => "custom",
        }
    }

    /// General model using every admissible summand, with exponents 1, 2, ...
    /// assigned in order within each of β, γ, δ.
    pub fn saturated(n: usize) -> Self {
        let mut beta = BTreeMap::new();
        for (j, k) in pairs(n) {
            if j >= 2 {
                beta.insert((j, k), beta.len() as u32 + 1);
            }
        }
        let gamma: BTreeMap<usize, u32> = (3..n).enumerate().map(|(t, j)| (j, t as u32 + 1)).collect();
        let delta: BTreeMap<usize, u32> = (3..n).enumerate().map(|(t, j)| (j, t as u32 + 2)).collect();
        Modification::General { beta, gamma, delta }
    }

    /// Number of summands added to the frame.
    pub fn summands(&self) -> usize {
        match self {
            Modification::None => 0,
            Modification::SingleY34 => 1,
            Modification::General { beta, gamma, delta } => beta.len() + gamma.len() + delta.len(),
            Modification::Custom(t) => t.len(),
        }
    }

    /// Largest exponent appearing in the added coefficients.
    pub fn max_exponent(&self) -> u32 {
        match self {
            Modification::None => 0,
            Modification::SingleY34 => 1,
            Modification::General { beta, gamma, delta } => {
                beta.values().chain(gamma.values()).chain(delta.values()).copied().max().unwrap_or(0)
            }
            Modification::Custom(t) => t.iter().map(|(_, _, p)| p.degree()).max().unwrap_or(0),
        }
    }
}

/// On-disk model description with 1-based indices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: usize,
    pub modification: String,
    #[serde(default)]
    pub beta: Vec<(usize, usize, u32)>,
    #[serde(default)]
    pub gamma: Vec<(usize, u32)>,
    #[serde(default)]
    pub delta: Vec<(usize, u32)>,
}

impl ModelSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Degenerate(format!("model spec: {e}")))
    }

    pub fn to_modification(&self) -> Result<Modification> {
        let n = self.n;
        let idx = |i: usize, what: &'static str| -> Result<usize> {
            if i == 0 || i > n {
                Err(Error::IndexOutOfRange { n, what: what.into() })
            } else {
                Ok(i - 1)
            }
        };
        match self.modification.as_str() {
            "none" | "single_y34" => {
                if !(self.beta.is_empty() && self.gamma.is_empty() && self.delta.is_empty()) {
                    return Err(Error::Degenerate(format!("{} takes no tables", self.modification)));
                }
                Ok(if self.modification == "none" { Modification::None } else { Modification::SingleY34 })
            }
            "general" => {
                let mut beta = BTreeMap::new();
                for &(j, k, v) in &self.beta {
                    if beta.insert((idx(j, "beta")?, idx(k, "beta")?), v).is_some() {
                        return Err(Error::Degenerate(format!("beta({j},{k}) given twice")));
                    }
                }
                let mut gamma = BTreeMap::new();
                for &(j, v) in &self.gamma {
                    if gamma.insert(idx(j, "gamma")?, v).is_some() {
                        return Err(Error::Degenerate(format!("gamma({j}) given twice")));
                    }
                }
                let mut delta = BTreeMap::new();
                for &(j, v) in &self.delta {
                    if delta.insert(idx(j, "delta")?, v).is_some() {
                        return Err(Error::Degenerate(format!("delta({j}) given twice")));
                    }
                }
                Ok(Modification::General { beta, gamma, delta })
            }
            other => Err(Error::Degenerate(format!("unknown modification '{other}'"))),
        }
    }
}

fn check_injective<K>(m: &BTreeMap<K, u32>, what: &'static str) -> Result<()> {
    let vals: BTreeSet<u32> = m.values().copied().collect();
    if vals.len() != m.len() {
        return Err(Error::NotInjective(what));
    }
    if m.values().any(|&v| v == 0) {
        return Err(Error::Degenerate(format!("{what} must take positive values")));
    }
    Ok(())
}

/// Frame X_1..X_n, Y_{j|k} on R^{n(n+1)/2} with coordinates x_i (index i)
/// and y_{j|k} (index n + pair index).
#[derive(Clone, Debug)]
pub struct FrameModel {
    pub n: usize,
    pub nvars: usize,
    pub frame: Vec<PolyVF>,
    pub labels: Vec<String>,
    pub modification: Modification,
}

fn factorial(k: u32) -> Scalar {
    (1..=k as i64).fold(Scalar::one(), |acc, i| acc * int(i))
}

pub fn coordinate_names(n: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    v.extend(pairs(n).into_iter().map(|(j, k)| format!("y{}{}", j + 1, k + 1)));
    v
}

impl FrameModel {
    pub fn y_var(&self, j: usize, k: usize) -> usize {
        self.n + pair_index(self.n, j, k)
    }

    /// Frame index of Y_{j|k}.
    pub fn y_frame(&self, j: usize, k: usize) -> usize {
        self.n + pair_index(self.n, j, k)
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Expansion of a vector field in the frame. X'-coefficients are read off
    /// the x-components since every X_i' is ∂/∂x_i plus y-directions.
    pub fn expand(&self, v: &PolyVF) -> Vec<Poly> {
        let n = self.n;
        let mut c: Vec<Poly> = v.coeffs.clone();
        for i in 0..n {
            let ci = v.coeffs[i].clone();
            if ci.is_zero() {
                continue;
            }
            for (m, fx) in self.frame[i].coeffs.iter().enumerate().skip(n) {
                if !fx.is_zero() {
                    c[m] = c[m].sub(&ci.mul(fx));
                }
            }
        }
        c
    }

    /// Coefficient matrix of the frame at a point (row a = frame element a).
    pub fn frame_matrix_at(&self, point: &[Scalar]) -> Matrix {
        Matrix::from_rows(&self.frame.iter().map(|f| f.eval(point)).collect::<Vec<_>>())
    }

    /// Rank of span{X_i', [X_i', X_j']} at a point.
    pub fn bracket_generating_rank_at(&self, point: &[Scalar]) -> usize {
        let mut rows: Vec<Vec<Scalar>> = self.frame[..self.n].iter().map(|f| f.eval(point)).collect();
        for i in 0..self.n {
            for j in i + 1..self.n {
                rows.push(vf_bracket(&self.frame[i], &self.frame[j]).eval(point));
            }
        }
        span_dim(&rows, self.nvars)
    }

    pub fn sample_points<R: rand::Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<Scalar>> {
        let mut pts = vec![vec![Scalar::from_integer(0.into()); self.nvars]];
        for _ in 0..count {
            pts.push((0..self.nvars).map(|_| random_scalar(rng, 5, 3)).collect());
        }
        pts
    }
}

pub fn build_model(n: usize, modification: Modification) -> Result<FrameModel> {
    if n < 3 {
        return Err(Error::ModelTooSmall { n, what: "frame model".into() });
    }
    let nvars = n + n * (n - 1) / 2;
    let pidx = |j: usize, k: usize| n + pair_index(n, j, k);
    let ycoord = |j: usize, k: usize| PolyVF::coordinate(nvars, pidx(j, k));

    let mut frame = Vec::new();
    for i in 0..n {
        let mut x = PolyVF::coordinate(nvars, i);
        for p in i + 1..n {
            x.coeffs[pidx(i, p)] = Poly::var(nvars, p).neg();
        }
        frame.push(x);
    }
    let mut add = |i: usize, j: usize, k: usize, p: Poly| {
        let t = pidx(j, k);
        frame[i].coeffs[t] = frame[i].coeffs[t].add(&p);
    };
    match &modification {
        Modification::None => {}
        Modification::SingleY34 => {
            if n < 4 {
                return Err(Error::ModelTooSmall { n, what: "single_y34 needs n >= 4".into() });
            }
            add(0, 2, 3, Poly::var(nvars, pidx(0, 1)));
        }
        Modification::General { beta, gamma, delta } => {
            check_injective(beta, "beta")?;
            check_injective(gamma, "gamma")?;
            check_injective(delta, "delta")?;
            for (&(j, k), &b) in beta {
                if !(2 <= j && j < k && k < n) {
                    return Err(Error::IndexOutOfRange { n, what: "beta(j,k) needs 3 <= j < k <= n".into() });
                }
                add(0, j, k, Poly::monomial(nvars, pidx(0, 1), b, Scalar::one() / factorial(b)));
            }
            for (&j, &g) in gamma {
                if !(3..n).contains(&j) {
                    return Err(Error::IndexOutOfRange { n, what: "gamma(j) needs 4 <= j <= n".into() });
                }
                add(0, 1, j, Poly::monomial(nvars, pidx(0, 2), g, Scalar::one() / factorial(g)));
            }
            for (&j, &d) in delta {
                if !(3..n).contains(&j) {
                    return Err(Error::IndexOutOfRange { n, what: "delta(j) needs 4 <= j <= n".into() });
                }
                add(1, 0, j, Poly::monomial(nvars, pidx(1, 2), d, Scalar::one() / factorial(d)));
            }
        }
        Modification::Custom(terms) => {
            for (i, (j, k), p) in terms {
                if *i >= n || !(j < k && *k < n) || p.nvars != nvars {
                    return Err(Error::IndexOutOfRange { n, what: "custom term".into() });
                }
                add(*i, *j, *k, p.clone());
            }
        }
    }
    for (j, k) in pairs(n) {
        frame.push(ycoord(j, k));
    }

    let mut labels: Vec<String> = (0..n)
        .map(|i| if modified_index(&modification, i) { format!("X_{}'", i + 1) } else { format!("X_{}", i + 1) })
        .collect();
    labels.extend(pairs(n).into_iter().map(|(j, k)| format!("Y_{{{}|{}}}", j + 1, k + 1)));

    let model = FrameModel { n, nvars, frame, labels, modification };
    let origin = vec![Scalar::from_integer(0.into()); nvars];
    let det = model.frame_matrix_at(&origin).det();
    if det != Scalar::one() && det != -Scalar::one() {
        return Err(Error::BadFrame(format!("determinant at origin is {det}")));
    }
    Ok(model)
}

fn modified_index(m: &Modification, i: usize) -> bool {
    match m {
        Modification::None => false,
        Modification::SingleY34 => i == 0,
        Modification::General { beta, gamma, delta } => (i == 0 && !(beta.is_empty() && gamma.is_empty())) || (i == 1 && !delta.is_empty()),
        Modification::Custom(t) => t.iter().any(|(k, _, _)| *k == i),
    }
}
