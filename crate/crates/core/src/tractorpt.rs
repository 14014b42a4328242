//! Pointwise algebra of the standard tractor bundle T = H* ⊕ R ⊕ H in a splitting.
//!
//! The top slot is H*-typed and the bottom slot H-typed, matching the blocks of the
//! standard representation R^{2n+1}: top (grade 1), middle (grade 0), bottom (grade −1).
//! Braces are the algebraic bracket of so(n+1,n) with H ↔ g₋₁ (w-block),
//! H* ↔ g₁ (v-block), Λ²H ↔ g₋₂ (Y basis) and Λ²H* ↔ g₂ (B-block).

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;

use crate::exactalg::scalar::{frac, half, random_scalar};
use crate::exactalg::{metric_j, LieElement, Matrix, Scalar};
use crate::report::CheckReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TractorVec {
    /// H*-component.
    pub v: Vec<Scalar>,
    pub tau: Scalar,
    /// H-component.
    pub x: Vec<Scalar>,
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn axpy(y: &[Scalar], a: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    y.iter().zip(x).map(|(p, q)| p + a * q).collect()
}

fn vadd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(p, q)| p + q).collect()
}

fn vsub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng, 5, 4)).collect()
}

fn random_skew<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = random_scalar(rng, 5, 4);
            m[(j, i)] = -c.clone();
            m[(i, j)] = c;
        }
    }
    m
}

impl TractorVec {
    pub fn new(v: Vec<Scalar>, tau: Scalar, x: Vec<Scalar>) -> Self {
        assert_eq!(v.len(), x.len(), "H and H* slots of different rank");
        TractorVec { v, tau, x }
    }

    pub fn zero(n: usize) -> Self {
        TractorVec { v: vec![Scalar::zero(); n], tau: Scalar::zero(), x: vec![Scalar::zero(); n] }
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn add(&self, o: &TractorVec) -> TractorVec {
        TractorVec { v: vadd(&self.v, &o.v), tau: &self.tau + &o.tau, x: vadd(&self.x, &o.x) }
    }

    pub fn scale(&self, s: &Scalar) -> TractorVec {
        TractorVec { v: self.v.iter().map(|c| c * s).collect(), tau: &self.tau * s, x: self.x.iter().map(|c| c * s).collect() }
    }

    /// Column (v, τ, X) in R^{2n+1}.
    pub fn to_column(&self) -> Vec<Scalar> {
        let mut c = self.v.clone();
        c.push(self.tau.clone());
        c.extend(self.x.iter().cloned());
        c
    }

    pub fn from_column(n: usize, c: &[Scalar]) -> Self {
        TractorVec { v: c[..n].to_vec(), tau: c[n].clone(), x: c[n + 1..].to_vec() }
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        TractorVec { v: random_vec(rng, n), tau: random_scalar(rng, 5, 4), x: random_vec(rng, n) }
    }
}

/// h((v,τ,X),(w,ν,Y)) = ½(w(X) + v(Y) + τν).
pub fn tractor_metric(t1: &TractorVec, t2: &TractorVec) -> Scalar {
    half() * (dot(&t2.v, &t1.x) + dot(&t1.v, &t2.x) + &t1.tau * &t2.tau)
}

/// Gram matrix of h on the basis (e¹..eⁿ, 1, e₁..eₙ).
pub fn gram(n: usize) -> Matrix {
    let basis: Vec<TractorVec> = (0..2 * n + 1)
        .map(|i| {
            let mut c = vec![Scalar::zero(); 2 * n + 1];
            c[i] = Scalar::one();
            TractorVec::from_column(n, &c)
        })
        .collect();
    Matrix::from_fn(2 * n + 1, 2 * n + 1, |i, j| tractor_metric(&basis[i], &basis[j]))
}

/// Components of a one-form Υ: Υ₁ on H and Υ₂ on T₋₂, the latter as a skew n×n array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonData {
    pub u1: Vec<Scalar>,
    pub u2: Matrix,
}

impl UpsilonData {
    pub fn zero(n: usize) -> Self {
        UpsilonData { u1: vec![Scalar::zero(); n], u2: Matrix::zeros(n, n) }
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        UpsilonData { u1: random_vec(rng, n), u2: random_skew(rng, n) }
    }

    /// The element Υ₁ + Υ₂ of g₁ ⊕ g₂.
    pub fn to_lie(&self) -> LieElement {
        let n = self.u1.len();
        let mut e = LieElement::zero(n);
        e.v = self.u1.clone();
        e.b = self.u2.clone();
        e
    }
}

fn g_minus1(x: &[Scalar]) -> LieElement {
    let mut e = LieElement::zero(x.len());
    e.w = x.to_vec();
    e
}

fn g_one(v: &[Scalar]) -> LieElement {
    let mut e = LieElement::zero(v.len());
    e.v = v.to_vec();
    e
}

fn g_two(b: &Matrix) -> LieElement {
    let mut e = LieElement::zero(b.rows());
    e.b = b.clone();
    e
}

/// Λ²H element with z[j][k] the Y_{j|k} coefficient; Y_{j|k} has C-block −1 at (j,k).
fn g_minus2(z: &Matrix) -> LieElement {
    let mut e = LieElement::zero(z.rows());
    e.c = z.scale(&-Scalar::one());
    e
}

fn bracket(a: &LieElement, b: &LieElement) -> LieElement {
    a.bracket(b).expect("same rank")
}

/// {Υ₂, X} ∈ H*.
pub fn brace_u2_x(u2: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    bracket(&g_two(u2), &g_minus1(x)).v
}

/// {Z₋₂, v} ∈ H.
pub fn brace_z2_v(z2: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    bracket(&g_minus2(z2), &g_one(v)).w
}

/// {Υ₁, Υ₁'} ∈ g₂ as a skew array.
pub fn brace_u1_u1(a: &[Scalar], b: &[Scalar]) -> Matrix {
    bracket(&g_one(a), &g_one(b)).b
}

/// (v + τΥ₁ − {Υ₂, X} − ½Υ₁(X)Υ₁, τ − Υ₁(X), X)
pub fn change_splitting(t: &TractorVec, u: &UpsilonData) -> TractorVec {
    let ux = dot(&u.u1, &t.x);
    let mut v = axpy(&t.v, &t.tau, &u.u1);
    v = vsub(&v, &brace_u2_x(&u.u2, &t.x));
    v = axpy(&v, &(-half() * &ux), &u.u1);
    TractorVec { v, tau: &t.tau - &ux, x: t.x.clone() }
}

/// exp(Υ₁ + Υ₂) acting on the column in the standard representation.
pub fn change_splitting_matrix(t: &TractorVec, u: &UpsilonData) -> TractorVec {
    let n = t.rank();
    let z = u.to_lie().to_matrix();
    let e = Matrix::identity(2 * n + 1).add(&z).add(&z.mul(&z).scale(&half()));
    TractorVec::from_column(n, &e.mul_vec(&t.to_column()))
}

/// Constant c in Υ₂'' = Υ₂ + Υ₂' + c{Υ₁, Υ₁'} for the composite of two splitting changes.
pub const COMPOSE_C: (i64, i64) = (-1, 2);

/// The single Υ'' equivalent to applying Υ and then Υ'.
pub fn compose(u: &UpsilonData, u2: &UpsilonData) -> UpsilonData {
    let c = frac(COMPOSE_C.0, COMPOSE_C.1);
    UpsilonData { u1: vadd(&u.u1, &u2.u1), u2: u.u2.add(&u2.u2).add(&brace_u1_u1(&u.u1, &u2.u1).scale(&c)) }
}

/// (H ⊕ R value, H value) of the projections T → H ⊕ R → H.
pub fn projection_chain(t: &TractorVec) -> ((Scalar, Vec<Scalar>), Vec<Scalar>) {
    ((t.tau.clone(), t.x.clone()), t.x.clone())
}

/// Inputs for the tractor derivative along Z at a point.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub nabla_v: Vec<Scalar>,
    pub nabla_tau: Scalar,
    pub nabla_x: Vec<Scalar>,
    pub z1: Vec<Scalar>,
    /// Z₋₂ as a skew array of Y_{j|k} coefficients.
    pub z2: Matrix,
    pub p1: Vec<Scalar>,
    pub p2: Matrix,
}

impl ConnectionData {
    pub fn flat(n: usize) -> Self {
        ConnectionData {
            nabla_v: vec![Scalar::zero(); n],
            nabla_tau: Scalar::zero(),
            nabla_x: vec![Scalar::zero(); n],
            z1: vec![Scalar::zero(); n],
            z2: Matrix::zeros(n, n),
            p1: vec![Scalar::zero(); n],
            p2: Matrix::zeros(n, n),
        }
    }

    pub fn with_nabla(&self, t: &TractorVec) -> Self {
        ConnectionData { nabla_v: t.v.clone(), nabla_tau: t.tau.clone(), nabla_x: t.x.clone(), ..self.clone() }
    }

    pub fn nabla(&self) -> TractorVec {
        TractorVec { v: self.nabla_v.clone(), tau: self.nabla_tau.clone(), x: self.nabla_x.clone() }
    }
}

/// (∇v + τ𝖯₁ − {𝖯₂, X}, ∇τ − v(Z₋₁) − 𝖯₁(X), ∇X + τZ₋₁ + {Z₋₂, v})
pub fn tractor_deriv(t: &TractorVec, d: &ConnectionData) -> TractorVec {
    let v = vsub(&axpy(&d.nabla_v, &t.tau, &d.p1), &brace_u2_x(&d.p2, &t.x));
    let tau = &d.nabla_tau - dot(&t.v, &d.z1) - dot(&d.p1, &t.x);
    let x = vadd(&axpy(&d.nabla_x, &t.tau, &d.z1), &brace_z2_v(&d.z2, &t.v));
    TractorVec { v, tau, x }
}

/// The algebraic part of the derivative as the action of −Z₋₁ − Z₋₂ + 𝖯(Z) on the column.
pub fn tractor_deriv_matrix(t: &TractorVec, d: &ConnectionData) -> TractorVec {
    let n = t.rank();
    let el = g_minus1(&d.z1).add(&g_minus2(&d.z2)).scale(&-Scalar::one()).add(&g_one(&d.p1)).add(&g_two(&d.p2));
    let alg = TractorVec::from_column(n, &el.to_matrix().mul_vec(&t.to_column()));
    alg.add(&d.nabla())
}

fn random_data<R: Rng>(rng: &mut R, n: usize) -> ConnectionData {
    ConnectionData {
        nabla_v: random_vec(rng, n),
        nabla_tau: random_scalar(rng, 5, 4),
        nabla_x: random_vec(rng, n),
        z1: random_vec(rng, n),
        z2: random_skew(rng, n),
        p1: random_vec(rng, n),
        p2: random_skew(rng, n),
    }
}

/// All pointwise tractor checks for rank n on `trials` random instances.
pub fn tractor_checks<R: Rng>(rng: &mut R, n: usize, trials: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let g = gram(n);
    let (p, m, z) = g.signature();
    let j_half = metric_j(n).scale(&half());
    out.push(CheckReport::new(
        format!("tractorpt.signature.n{n}"),
        "the tractor metric h has signature (n+1, n)",
        (p, m, z) == (n + 1, n, 0) && g == j_half,
        json!({
            "signature": [p, m],
            "degenerate": z,
            "equals_half_J": g == j_half,
            "printed_signature_discrepancy": "a signature (n+1, 1) is sometimes stated for h; on R^(2n+1) the form has n negative directions, so (n+1, n) is correct",
        }),
    ));

    let e1 = |k: usize| -> Vec<Scalar> { (0..n).map(|i| if i == k { Scalar::one() } else { Scalar::zero() }).collect() };
    let zero = vec![Scalar::zero(); n];
    let t_tau = TractorVec::new(zero.clone(), Scalar::one(), zero.clone());
    let t_v = TractorVec::new(e1(0), Scalar::zero(), zero.clone());
    let t_x = TractorVec::new(zero.clone(), Scalar::zero(), e1(0));
    let t_null = TractorVec::new(e1(0), Scalar::zero(), e1(0).iter().map(|c| -c).collect());
    let vals = [tractor_metric(&t_tau, &t_tau), tractor_metric(&t_v, &t_x), tractor_metric(&t_null, &t_null)];
    let want = [half(), half(), -Scalar::one()];
    out.push(CheckReport::new(
        "tractorpt.metric_values",
        "h((0,1,0),(0,1,0)) = 1/2, h((e¹,0,0),(0,0,e₁)) = 1/2, h((e¹,0,−e₁),(e¹,0,−e₁)) = −1",
        vals == want,
        json!({ "values": vals.iter().map(crate::exactalg::scalar::fmt_scalar).collect::<Vec<_>>() }),
    ));

    let mut bad = [0usize; 8];
    for _ in 0..trials {
        let t1 = TractorVec::random(rng, n);
        let t2 = TractorVec::random(rng, n);
        let u = UpsilonData::random(rng, n);
        let u2 = UpsilonData::random(rng, n);
        let c1 = change_splitting(&t1, &u);
        let c2 = change_splitting(&t2, &u);
        // 0: h preserved
        if tractor_metric(&c1, &c2) != tractor_metric(&t1, &t2) {
            bad[0] += 1;
        }
        // 1: formula agrees with exp(Υ) in the standard representation
        if c1 != change_splitting_matrix(&t1, &u) {
            bad[1] += 1;
        }
        // 2: composition
        let twice = change_splitting(&c1, &u2);
        let once = change_splitting(&t1, &compose(&u, &u2));
        if twice != once {
            bad[2] += 1;
        }
        // 3: π² and the inclusion H* ⊂ T are Υ-invariant
        let hstar = TractorVec::new(t1.v.clone(), Scalar::zero(), zero.clone());
        if projection_chain(&c1).1 != projection_chain(&t1).1 || change_splitting(&hstar, &u) != hstar {
            bad[3] += 1;
        }
        // 4: derivative formula agrees with the action of −Z₋ + 𝖯(Z)
        let d = random_data(rng, n);
        if tractor_deriv(&t1, &d) != tractor_deriv_matrix(&t1, &d) {
            bad[4] += 1;
        }
        // 5: metric compatibility against the Leibniz contract for ∇
        let d1 = d.clone();
        let d2 = d.with_nabla(&TractorVec::random(rng, n));
        let lhs = tractor_metric(&tractor_deriv(&t1, &d1), &t2) + tractor_metric(&t1, &tractor_deriv(&t2, &d2));
        let rhs = tractor_metric(&d1.nabla(), &t2) + tractor_metric(&t1, &d2.nabla());
        if lhs != rhs {
            bad[5] += 1;
        }
        // 6: additivity in t (∇ data additive too)
        let s = t1.add(&t2);
        let ds = d1.with_nabla(&d1.nabla().add(&d2.nabla()));
        if tractor_deriv(&s, &ds) != tractor_deriv(&t1, &d1).add(&tractor_deriv(&t2, &d2)) {
            bad[6] += 1;
        }
        // 7: quotient image in H ⊕ R is well defined modulo H*
        let shifted = t1.add(&hstar.scale(&Scalar::from_integer(2.into())));
        if projection_chain(&shifted) != projection_chain(&t1) {
            bad[7] += 1;
        }
    }
    let names = [
        ("tractorpt.change_preserves_h", "changing the splitting preserves h"),
        ("tractorpt.change_is_exp", "the change of splitting is the action of exp(Υ) on the standard representation"),
        ("tractorpt.change_composes", "two splitting changes compose to one with Υ₂'' = Υ₂ + Υ₂' − ½{Υ₁, Υ₁'}"),
        ("tractorpt.filtration_invariant", "π² and the inclusion H* ⊂ T do not depend on the splitting"),
        ("tractorpt.deriv_is_action", "the tractor derivative formula is ∇ plus the action of −Z₋ + 𝖯(Z)"),
        ("tractorpt.deriv_metric", "the tractor derivative is compatible with h"),
        ("tractorpt.deriv_additive", "the tractor derivative is additive"),
        ("tractorpt.projection_chain", "the projections T → H ⊕ R → H kill H*"),
    ];
    for (k, (id, anchor)) in names.iter().enumerate() {
        out.push(CheckReport::new(format!("{id}.n{n}"), *anchor, bad[k] == 0, json!({ "trials": trials, "failures": bad[k] })));
    }

    let flat = ConnectionData::flat(n);
    let zc = ConnectionData { z1: e1(0), ..flat.clone() };
    let a = tractor_deriv(&t_tau, &zc);
    let b = tractor_deriv(&t_v, &ConnectionData { nabla_v: e1(1 % n), ..zc.clone() });
    let ok = a == TractorVec::new(zero.clone(), Scalar::zero(), e1(0)) && b == TractorVec::new(e1(1 % n), -Scalar::one(), zero.clone());
    out.push(CheckReport::new(
        format!("tractorpt.deriv_examples.n{n}"),
        "with 𝖯 = 0: ∇→_Z(0,1,0) = (0,0,Z₋₁) and ∇→_Z(v,0,0) = (∇_Z v, −v(Z₋₁), 0)",
        ok,
        json!({}),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn gram_signature() {
        assert_eq!(gram(3).signature(), (4, 3, 0));
    }

    #[test]
    fn brace_is_minus_b_times_x() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let b = random_skew(&mut rng, 3);
        let x = random_vec(&mut rng, 3);
        let bx = b.mul_vec(&x);
        assert_eq!(brace_u2_x(&b, &x), bx.iter().map(|c| -c).collect::<Vec<_>>());
    }

    #[test]
    fn composition_constant() {
        // {c{Υ₁,Υ₁'}, X} must equal ½(Υ₁(X)Υ₁' − Υ₁'(X)Υ₁)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let (a, b, x) = (random_vec(&mut rng, 3), random_vec(&mut rng, 3), random_vec(&mut rng, 3));
        let c = frac(COMPOSE_C.0, COMPOSE_C.1);
        let lhs = brace_u2_x(&brace_u1_u1(&a, &b).scale(&c), &x);
        let rhs: Vec<Scalar> = axpy(&b.iter().map(|t| t * dot(&a, &x)).collect::<Vec<_>>(), &-dot(&b, &x), &a).iter().map(|t| t * half()).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn all_checks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for r in tractor_checks(&mut rng, 3, 200) {
            assert!(r.passed(), "{} {}", r.id, r.payload);
        }
    }
}
