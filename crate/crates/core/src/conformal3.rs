//! The conformal structure of a free 3-distribution, built directly from a
//! volume section σ of Λ³H*: a partial connection from the Levi-Civita-like
//! formula, the induced transverse distribution T₋₂ and the metric gσ⁻¹.
//!
//! Everything is exact. Connection coefficients are rational functions since the
//! Levi bracket Λ²H → T/H may have a non-constant inverse on perturbed frames.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::exactalg::scalar::{fmt_scalar, int};
use crate::exactalg::{Matrix, Scalar};
use crate::flatmodels::{build_model, coordinate_names, vf_bracket, FrameModel, Modification, PolyVF};
use crate::poly::{Poly, RatFunc};
use crate::report::CheckReport;
use crate::{Error, Result};

type RF = RatFunc;
/// Components on the H-frame X̃_1, X̃_2, X̃_3.
pub type HVec = [RF; 3];
/// Components on the T/H basis q(Y_{1|2}), q(Y_{1|3}), q(Y_{2|3}).
pub type QVec = [RF; 3];

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn eps(a: usize, b: usize, c: usize) -> i64 {
    if a == b || b == c || a == c {
        return 0;
    }
    let inv = (a > b) as i64 + (a > c) as i64 + (b > c) as i64;
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A never-zero section σ of Λ³H*, σ(X̃_1, X̃_2, X̃_3) = coeff, with the prescription
/// ∇_{X̃_a} σ = phi[a] σ along H.
#[derive(Clone, Debug)]
pub struct SigmaSection {
    pub coeff: Poly,
    pub phi: [Poly; 3],
}

impl SigmaSection {
    pub fn new(coeff: Poly) -> Self {
        let nv = coeff.nvars;
        SigmaSection { coeff, phi: [Poly::zero(nv), Poly::zero(nv), Poly::zero(nv)] }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        SigmaSection { coeff: self.coeff.scale(c), phi: self.phi.clone() }
    }

    /// Multiplies σ by a function f; the parallel prescription is kept (∇(fσ) = 0 is a new gauge).
    pub fn times(&self, f: &Poly) -> Self {
        SigmaSection { coeff: self.coeff.mul(f), phi: self.phi.clone() }
    }
}

/// A rank-3 model with H-frame X̃ = P·X' for a constant invertible P.
#[derive(Clone, Debug)]
pub struct Setup {
    pub model: FrameModel,
    pub p: Matrix,
    p_inv_t: Matrix,
    /// X̃_1..X̃_3, Y_{1|2}, Y_{1|3}, Y_{2|3}.
    pub frame: Vec<PolyVF>,
    /// levi[a][b] = q([X̃_a, X̃_b]).
    levi: Vec<Vec<[Poly; 3]>>,
    /// linv[p][e]: Λ²H-coefficients of q(Y_e).
    linv: [[RF; 3]; 3],
    pub levi_det: Poly,
}

fn rf(p: &Poly) -> RF {
    RF::from_poly(p.clone())
}

fn rf_zero(nv: usize) -> RF {
    RF::zero(nv)
}

fn zero3(nv: usize) -> [RF; 3] {
    [rf_zero(nv), rf_zero(nv), rf_zero(nv)]
}

fn det3(m: &[[Poly; 3]; 3]) -> Poly {
    let t = |a: usize, b: usize, c: usize| m[0][a].mul(&m[1][b]).mul(&m[2][c]);
    t(0, 1, 2).add(&t(1, 2, 0)).add(&t(2, 0, 1)).sub(&t(0, 2, 1)).sub(&t(1, 0, 2)).sub(&t(2, 1, 0))
}

impl Setup {
    pub fn new(model: FrameModel, p: Matrix) -> Result<Self> {
        if model.n != 3 {
            return Err(Error::WrongDimension { expected: 3, got: model.n });
        }
        if p.rows() != 3 || p.cols() != 3 || p.det().is_zero() {
            return Err(Error::BadFrame("frame change must be an invertible 3x3 matrix".into()));
        }
        let nv = model.nvars;
        let p_inv_t = p.inverse().expect("checked").transpose();
        let mut frame = Vec::new();
        for a in 0..3 {
            let mut f = PolyVF::zero(nv);
            for b in 0..3 {
                f = f.add(&model.frame[b].mul_poly(&Poly::constant(nv, p[(a, b)].clone())));
            }
            frame.push(f);
        }
        frame.extend(model.frame[3..].iter().cloned());
        let mut s = Setup {
            model,
            p,
            p_inv_t,
            frame,
            levi: Vec::new(),
            linv: [zero3(nv), zero3(nv), zero3(nv)],
            levi_det: Poly::zero(nv),
        };
        let mut levi = vec![vec![[Poly::zero(nv), Poly::zero(nv), Poly::zero(nv)]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let c = s.coords(&vf_bracket(&s.frame[a], &s.frame[b]));
                levi[a][b] = [c[3].clone(), c[4].clone(), c[5].clone()];
            }
        }
        // lmat[e][p] = e-component of L(pair p)
        let lmat: [[Poly; 3]; 3] = std::array::from_fn(|e| std::array::from_fn(|p| levi[PAIRS[p].0][PAIRS[p].1][e].clone()));
        let det = det3(&lmat);
        if det.is_zero() {
            return Err(Error::Degenerate("Levi bracket is not an isomorphism".into()));
        }
        // adjugate: inv[p][e] = cofactor(e,p) / det
        let minor = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
            lmat[rs[0]][cs[0]].mul(&lmat[rs[1]][cs[1]]).sub(&lmat[rs[0]][cs[1]].mul(&lmat[rs[1]][cs[0]]))
        };
        let linv: [[RF; 3]; 3] = std::array::from_fn(|p| {
            std::array::from_fn(|e| {
                let m = minor(e, p);
                let m = if (e + p) % 2 == 0 { m } else { m.neg() };
                RF::new(m, det.clone())
            })
        });
        s.levi = levi;
        s.linv = linv;
        s.levi_det = det;
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.model.nvars
    }

    /// Components of a vector field on (X̃_1, X̃_2, X̃_3, Y_{1|2}, Y_{1|3}, Y_{2|3}).
    pub fn coords(&self, z: &PolyVF) -> Vec<Poly> {
        let e = self.model.expand(z);
        let nv = self.nvars();
        let mut out: Vec<Poly> = (0..3)
            .map(|a| (0..3).fold(Poly::zero(nv), |acc, b| acc.add(&e[b].scale(&self.p_inv_t[(a, b)]))))
            .collect();
        out.extend(e[3..].iter().cloned());
        out
    }

    fn q_of(&self, z: &PolyVF) -> QVec {
        let c = self.coords(z);
        [rf(&c[3]), rf(&c[4]), rf(&c[5])]
    }

    /// Levi bracket {V, W} = q([V, W]) extended bilinearly to H-valued components.
    pub fn levi(&self, v: &HVec, w: &HVec) -> QVec {
        let nv = self.nvars();
        let mut out = zero3(nv);
        for a in 0..3 {
            for b in 0..3 {
                if a == b || v[a].is_zero() || w[b].is_zero() {
                    continue;
                }
                let c = v[a].mul(&w[b]);
                for e in 0..3 {
                    if !self.levi[a][b][e].is_zero() {
                        out[e] = out[e].add(&c.mul_poly(&self.levi[a][b][e]));
                    }
                }
            }
        }
        out
    }

    fn levi_basis(&self, a: usize, b: usize) -> QVec {
        std::array::from_fn(|e| rf(&self.levi[a][b][e]))
    }

    /// Λ²H-coefficients (on X̃_a ∧ X̃_b, a<b) of an element of T/H.
    pub fn levi_inverse(&self, q: &QVec) -> [RF; 3] {
        let nv = self.nvars();
        std::array::from_fn(|p| {
            let mut acc = rf_zero(nv);
            for e in 0..3 {
                if !q[e].is_zero() {
                    acc = acc.add(&self.linv[p][e].mul(&q[e]));
                }
            }
            acc
        })
    }

    /// Directional derivative along X̃_a.
    pub fn deriv(&self, a: usize, f: &RF) -> RF {
        let mut out = rf_zero(self.nvars());
        for (i, c) in self.frame[a].coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                out = out.add(&d.mul_poly(c));
            }
        }
        out
    }
}

/// σ(X̃_a, X̃_b, X̃_c)
fn sigma3(sig: &SigmaSection, a: usize, b: usize, c: usize) -> RF {
    rf(&sig.coeff.scale(&int(eps(a, b, c))))
}

/// σ(X̃_a, Q) = σ(X̃_a, L⁻¹Q).
fn sigma_hq(setup: &Setup, sig: &SigmaSection, a: usize, q: &QVec) -> RF {
    let d = setup.levi_inverse(q);
    let mut acc = rf_zero(setup.nvars());
    for (p, &(x, y)) in PAIRS.iter().enumerate() {
        let e = eps(a, x, y);
        if e != 0 && !d[p].is_zero() {
            acc = acc.add(&d[p].mul_poly(&sig.coeff.scale(&int(e))));
        }
    }
    acc
}

/// (∇_{X̃_a} σ)(X̃_b, X̃_c, X̃_d)
fn dsigma(sig: &SigmaSection, a: usize, b: usize, c: usize, d: usize) -> RF {
    rf(&sig.phi[a].mul(&sig.coeff).scale(&int(eps(b, c, d))))
}

/// Partial connection on H along H: gamma[a][b] = ∇_{X̃_a} X̃_b on the H-frame.
#[derive(Clone, Debug)]
pub struct PartialConnection {
    pub gamma: Vec<Vec<HVec>>,
}

impl PartialConnection {
    pub fn get(&self, a: usize, b: usize) -> &HVec {
        &self.gamma[a][b]
    }
}

/// Right-hand side of the Levi-Civita-like formula, equal to 3σ(∇_A B, C, D).
pub fn levi_civita_rhs(setup: &Setup, sig: &SigmaSection, a: usize, b: usize, c: usize, d: usize) -> RF {
    let f = &setup.frame;
    let q2 = |x: usize, y: usize, z: usize| setup.q_of(&vf_bracket(&f[x], &vf_bracket(&f[y], &f[z])));
    let two = int(2);
    let mut r = setup.deriv(a, &sigma3(sig, b, c, d));
    r = r.add(&setup.deriv(b, &sigma3(sig, a, c, d)).scale(&two));
    r = r.add(&setup.deriv(c, &sigma3(sig, a, b, d)));
    r = r.sub(&setup.deriv(d, &sigma3(sig, a, b, c)));
    r = r.sub(&dsigma(sig, a, b, c, d));
    r = r.sub(&dsigma(sig, b, a, c, d).scale(&two));
    r = r.sub(&dsigma(sig, c, a, b, d));
    r = r.add(&dsigma(sig, d, a, b, c));
    r = r.add(&sigma_hq(setup, sig, b, &q2(a, d, c)));
    r = r.sub(&sigma_hq(setup, sig, a, &q2(b, c, d)).scale(&two));
    r = r.add(&sigma_hq(setup, sig, d, &q2(c, b, a)));
    r = r.sub(&sigma_hq(setup, sig, c, &q2(d, b, a)));
    r
}

/// Solves the Levi-Civita-like formula for ∇_{X̃_a} X̃_b using the pairing
/// σ(X̃_m, X̃_c, X̃_d) = ε_{mcd} s.
pub fn levi_civita_like(setup: &Setup, sig: &SigmaSection) -> Result<PartialConnection> {
    if sig.coeff.is_zero() {
        return Err(Error::DegenerateSigma("σ vanishes identically".into()));
    }
    let s3 = rf(&sig.coeff.scale(&int(3)));
    let gamma = (0..3)
        .map(|a| {
            (0..3)
                .map(|b| {
                    std::array::from_fn(|m| {
                        let (c, d) = PAIRS[2 - m];
                        levi_civita_rhs(setup, sig, a, b, c, d).div(&s3.scale(&int(eps(m, c, d))))
                    })
                })
                .collect()
        })
        .collect();
    Ok(PartialConnection { gamma })
}

/// 3σ(∇_A B, C, D) recomputed from the solved connection minus the formula, for all C, D.
pub fn formula_consistency(setup: &Setup, sig: &SigmaSection, pc: &PartialConnection) -> usize {
    let mut bad = 0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut lhs = rf_zero(setup.nvars());
                    for m in 0..3 {
                        lhs = lhs.add(&pc.gamma[a][b][m].mul(&sigma3(sig, m, c, d)).scale(&int(3)));
                    }
                    if !lhs.sub(&levi_civita_rhs(setup, sig, a, b, c, d)).is_identically_zero() {
                        bad += 1;
                    }
                }
            }
        }
    }
    bad
}

fn unit_h(nv: usize, a: usize) -> HVec {
    std::array::from_fn(|m| if m == a { RF::constant(nv, Scalar::one()) } else { rf_zero(nv) })
}

fn sub3(x: &[RF; 3], y: &[RF; 3]) -> [RF; 3] {
    std::array::from_fn(|i| x[i].sub(&y[i]))
}

fn add3(x: &[RF; 3], y: &[RF; 3]) -> [RF; 3] {
    std::array::from_fn(|i| x[i].add(&y[i]))
}

fn is_zero3(x: &[RF; 3]) -> bool {
    x.iter().all(RF::is_identically_zero)
}

/// Residual of {∇_A B, C} + {B, ∇_A C} − q([A,[B,C]]) + {A, ∇_B C − ∇_C B}.
pub fn pcon_residual(setup: &Setup, pc: &PartialConnection, a: usize, b: usize, c: usize) -> QVec {
    let nv = setup.nvars();
    let (hb, hc, ha) = (unit_h(nv, b), unit_h(nv, c), unit_h(nv, a));
    let f = &setup.frame;
    let t1 = setup.levi(pc.get(a, b), &hc);
    let t2 = setup.levi(&hb, pc.get(a, c));
    let t3 = setup.q_of(&vf_bracket(&f[a], &vf_bracket(&f[b], &f[c])));
    let t4 = setup.levi(&ha, &sub3(pc.get(b, c), pc.get(c, b)));
    add3(&sub3(&add3(&t1, &t2), &t3), &t4)
}

/// Transverse distribution T₋₂: U_{jk} = [X̃_j, X̃_k] − ∇_j X̃_k + ∇_k X̃_j, on the six-frame.
#[derive(Clone, Debug)]
pub struct TransverseFrame {
    /// u[p] = components of U_p on (X̃, Y).
    pub u: Vec<[RF; 6]>,
}

pub fn transverse_distribution(setup: &Setup, pc: &PartialConnection) -> TransverseFrame {
    let u = PAIRS
        .iter()
        .map(|&(j, k)| {
            let br = setup.coords(&vf_bracket(&setup.frame[j], &setup.frame[k]));
            let h = sub3(&sub3(&[rf(&br[0]), rf(&br[1]), rf(&br[2])], pc.get(j, k)), &pc.get(k, j).iter().map(|x| x.neg()).collect::<Vec<_>>().try_into().unwrap());
            [h[0].clone(), h[1].clone(), h[2].clone(), rf(&br[3]), rf(&br[4]), rf(&br[5])]
        })
        .collect();
    TransverseFrame { u }
}

/// Π(Z) for Z given on the six-frame: remove the T₋₂ part found through L⁻¹.
pub fn projection_pi(setup: &Setup, t: &TransverseFrame, z: &[RF; 6]) -> HVec {
    let q: QVec = [z[3].clone(), z[4].clone(), z[5].clone()];
    let b = setup.levi_inverse(&q);
    let mut h: HVec = [z[0].clone(), z[1].clone(), z[2].clone()];
    for p in 0..3 {
        if b[p].is_zero() {
            continue;
        }
        for m in 0..3 {
            h[m] = h[m].sub(&b[p].mul(&t.u[p][m]));
        }
    }
    h
}

fn six_of(setup: &Setup, z: &PolyVF) -> [RF; 6] {
    let c = setup.coords(z);
    std::array::from_fn(|i| rf(&c[i]))
}

/// ∇_A q(Z) with ∇ extended to T/H through the bracket: q(Z) = Σ d_p {X̃_j, X̃_k}.
pub fn nabla_q(setup: &Setup, pc: &PartialConnection, a: usize, q: &QVec) -> QVec {
    let nv = setup.nvars();
    let d = setup.levi_inverse(q);
    let mut out = zero3(nv);
    for (p, &(j, k)) in PAIRS.iter().enumerate() {
        if d[p].is_zero() {
            continue;
        }
        let l = setup.levi_basis(j, k);
        let da = setup.deriv(a, &d[p]);
        let cov = add3(&setup.levi(pc.get(a, j), &unit_h(nv, k)), &setup.levi(&unit_h(nv, j), pc.get(a, k)));
        for e in 0..3 {
            out[e] = out[e].add(&da.mul(&l[e])).add(&d[p].mul(&cov[e]));
        }
    }
    out
}

/// Residual of ∇_A B − ∇_B A − Π([A,B]).
pub fn conformal_one_residual(setup: &Setup, pc: &PartialConnection, t: &TransverseFrame, a: usize, b: usize) -> HVec {
    let z = six_of(setup, &vf_bracket(&setup.frame[a], &setup.frame[b]));
    sub3(&sub3(pc.get(a, b), pc.get(b, a)), &projection_pi(setup, t, &z))
}

/// Residual of ∇_A q(Z) − q([A,Z]) + {A, Π(Z)} for Z a six-frame element.
pub fn conformal_two_residual(setup: &Setup, pc: &PartialConnection, t: &TransverseFrame, a: usize, z: usize) -> QVec {
    let nv = setup.nvars();
    let zc = six_of(setup, &setup.frame[z]);
    let qz: QVec = [zc[3].clone(), zc[4].clone(), zc[5].clone()];
    let t1 = nabla_q(setup, pc, a, &qz);
    let t2 = setup.q_of(&vf_bracket(&setup.frame[a], &setup.frame[z]));
    let t3 = setup.levi(&unit_h(nv, a), &projection_pi(setup, t, &zc));
    add3(&sub3(&t1, &t2), &t3)
}

/// The same residual on U_p ∈ T₋₂, by tensoriality in Z.
pub fn conformal_two_on_transverse(setup: &Setup, pc: &PartialConnection, t: &TransverseFrame, a: usize, p: usize) -> QVec {
    let nv = setup.nvars();
    let mut out = zero3(nv);
    for m in 0..6 {
        if t.u[p][m].is_zero() {
            continue;
        }
        let r = conformal_two_residual(setup, pc, t, a, m);
        for e in 0..3 {
            out[e] = out[e].add(&t.u[p][m].mul(&r[e]));
        }
    }
    out
}

/// gσ⁻¹ on the frame (X̃_1, X̃_2, X̃_3, U_{1|2}, U_{1|3}, U_{2|3}):
/// g(U_{jk}, X̃_i) = ε_{jki} / s, zero on H ⊗ H and T₋₂ ⊗ T₋₂.
pub fn conformal_metric(setup: &Setup, sig: &SigmaSection) -> Vec<Vec<RF>> {
    let nv = setup.nvars();
    let mut g = vec![vec![rf_zero(nv); 6]; 6];
    for i in 0..3 {
        for (p, &(j, k)) in PAIRS.iter().enumerate() {
            let e = eps(j, k, i);
            if e != 0 {
                let v = RF::new(Poly::constant(nv, int(e)), sig.coeff.clone());
                g[i][3 + p] = v.clone();
                g[3 + p][i] = v;
            }
        }
    }
    g
}

fn eval_matrix(m: &[Vec<RF>], pt: &[Scalar]) -> Option<Matrix> {
    let rows: Option<Vec<Vec<Scalar>>> = m.iter().map(|r| r.iter().map(|x| x.eval(pt)).collect()).collect();
    rows.map(|r| Matrix::from_rows(&r))
}

/// Rows: X̃_a and U_p on the six-frame, evaluated at a point.
fn split_matrix(t: &TransverseFrame, pt: &[Scalar]) -> Option<Matrix> {
    let mut rows = Vec::new();
    for a in 0..3 {
        rows.push((0..6).map(|m| if m == a { Scalar::one() } else { Scalar::zero() }).collect());
    }
    for u in &t.u {
        rows.push(u.iter().map(|x| x.eval(pt)).collect::<Option<Vec<_>>>()?);
    }
    Some(Matrix::from_rows(&rows))
}

/// Metric on the six-frame (X̃, Y) at a point: G_XY = B⁻¹ G B⁻ᵀ with B the split matrix.
pub fn metric_on_coordinate_frame(setup: &Setup, sig: &SigmaSection, t: &TransverseFrame, pt: &[Scalar]) -> Option<Matrix> {
    let g = eval_matrix(&conformal_metric(setup, sig), pt)?;
    let b = split_matrix(t, pt)?;
    let bi = b.inverse()?;
    Some(bi.mul(&g).mul(&bi.transpose()))
}

/// Rows of the six vector fields X̃_a, U_p in coordinates at a point.
fn coordinate_rows(setup: &Setup, t: &TransverseFrame, pt: &[Scalar]) -> Option<Matrix> {
    let fr: Vec<Vec<Scalar>> = setup.frame.iter().map(|f| f.eval(pt)).collect();
    let mut rows: Vec<Vec<Scalar>> = fr[..3].to_vec();
    for u in &t.u {
        let c: Vec<Scalar> = u.iter().map(|x| x.eval(pt)).collect::<Option<_>>()?;
        let mut r = vec![Scalar::zero(); setup.nvars()];
        for m in 0..6 {
            for i in 0..r.len() {
                r[i] += &c[m] * &fr[m][i];
            }
        }
        rows.push(r);
    }
    Some(Matrix::from_rows(&rows))
}

/// Fixed sample points: the origin and ten seeded rational points.
pub fn sample_points(setup: &Setup) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    setup.model.sample_points(&mut rng, 10)
}

fn fmt_rf(x: &RF) -> String {
    x.display(&coordinate_names(3))
}

/// Component-wise exact zero test on every residual.
fn count_nonzero<const N: usize>(items: impl Iterator<Item = [RF; N]>) -> usize {
    items.filter(|x| !x.iter().all(RF::is_identically_zero)).count()
}

/// Outcome of the full construction on one (model, σ) fixture.
#[derive(Clone, Debug)]
pub struct Construction {
    pub setup: Setup,
    pub sigma: SigmaSection,
    pub pc: PartialConnection,
    pub t: TransverseFrame,
}

pub fn construct(setup: Setup, sigma: SigmaSection) -> Result<Construction> {
    let pc = levi_civita_like(&setup, &sigma)?;
    let t = transverse_distribution(&setup, &pc);
    Ok(Construction { setup, sigma, pc, t })
}

/// Checks both torsion conditions, (p:con)-type skewness and the formula's consistency.
pub fn torsion_conditions_check(c: &Construction) -> CheckReport {
    let (s, pc, t) = (&c.setup, &c.pc, &c.t);
    let idx3 = || (0..3).flat_map(|a| (0..3).map(move |b| (a, b)));
    let one = count_nonzero(idx3().map(|(a, b)| conformal_one_residual(s, pc, t, a, b)));
    let two_112 = count_nonzero(idx3().map(|(a, b)| conformal_two_residual(s, pc, t, a, b)));
    let two_122 = count_nonzero(idx3().map(|(a, p)| conformal_two_on_transverse(s, pc, t, a, p)));
    let two_y = count_nonzero((0..3).flat_map(|a| (3..6).map(move |z| (a, z))).map(|(a, z)| conformal_two_residual(s, pc, t, a, z)));
    let pcon = count_nonzero((0..27).map(|i| pcon_residual(s, pc, i / 9, (i / 3) % 3, i % 3)));
    let formula = formula_consistency(s, &c.sigma, pc);
    let ok = one + two_112 + two_122 + two_y + pcon + formula == 0;
    CheckReport::new(
        format!("conformal3.torsion.{}", s.model.modification.name()),
        "the solved partial connection is torsion-free in both senses and satisfies the skewness identity",
        ok,
        json!({
            "conformal_one_nonzero": one,
            "conformal_two_nonzero": { "(1,1,-2)": two_112, "(1,2,-2)": two_122, "on Y frame": two_y },
            "pcon_nonzero": pcon,
            "formula_inconsistent": formula,
        }),
    )
}

/// Signature (3,3) of the metric and transversality of T₋₂ at all sample points.
pub fn metric_check(c: &Construction) -> CheckReport {
    let (s, t) = (&c.setup, &c.t);
    let g = conformal_metric(s, &c.sigma);
    let symmetric = (0..6).all(|i| (0..6).all(|j| g[i][j] == g[j][i]));
    let mut sigs = Vec::new();
    let mut dets = Vec::new();
    let mut skipped = 0;
    let mut ok = symmetric;
    for pt in sample_points(s) {
        let (Some(gm), Some(cr)) = (eval_matrix(&g, &pt), coordinate_rows(s, t, &pt)) else {
            skipped += 1;
            continue;
        };
        let sig = gm.signature();
        let det = cr.det();
        ok &= sig == (3, 3, 0) && !det.is_zero();
        sigs.push(format!("{:?}", (sig.0, sig.1)));
        dets.push(fmt_scalar(&det));
    }
    let origin = vec![Scalar::zero(); s.nvars()];
    let g0 = eval_matrix(&g, &origin).map(|m| m.to_rows().iter().map(|r| r.iter().map(fmt_scalar).collect::<Vec<_>>()).collect::<Vec<_>>());
    CheckReport::new(
        format!("conformal3.metric.{}", s.model.modification.name()),
        "the metric gσ⁻¹ is symmetric of split signature (3,3) and T₋₂ is transverse to H",
        ok && skipped == 0,
        json!({
            "metric_at_origin": g0,
            "signatures": sigs,
            "transversality_dets": dets,
            "skipped_points": skipped,
        }),
    )
}

/// g(U + Y, X) = g(U, X) for Y ∈ H, with the metric written on the (X̃, Y) frame.
pub fn upsilon_invariance_check(c: &Construction, trials: usize, seed: u64) -> CheckReport {
    use crate::exactalg::scalar::random_scalar;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = conformal_metric(&c.setup, &c.sigma);
    let pts = sample_points(&c.setup);
    let mut bad = 0;
    for i in 0..trials {
        let pt = &pts[i % pts.len()];
        let Some(gm) = eval_matrix(&g, pt) else { continue };
        let u: Vec<Scalar> = (0..6).map(|m| if m < 3 { Scalar::zero() } else { random_scalar(&mut rng, 5, 3) }).collect();
        let y: Vec<Scalar> = (0..6).map(|m| if m < 3 { random_scalar(&mut rng, 5, 3) } else { Scalar::zero() }).collect();
        let x = y.iter().map(|_| random_scalar(&mut rng, 5, 3)).take(3).chain(std::iter::repeat(Scalar::zero()).take(3)).collect::<Vec<_>>();
        let uy: Vec<Scalar> = u.iter().zip(&y).map(|(a, b)| a + b).collect();
        let form = |a: &[Scalar], b: &[Scalar]| -> Scalar { gm.mul_vec(b).iter().zip(a).map(|(p, q)| p * q).sum() };
        if form(&uy, &x) != form(&u, &x) {
            bad += 1;
        }
    }
    CheckReport::new(
        "conformal3.upsilon_invariance",
        "g(U + Y, X) = g(U, X) for Y and X in H",
        bad == 0,
        json!({ "trials": trials, "failures": bad }),
    )
}

/// Conformal-class invariance: σ and fσ (each parallel in its own gauge) give metrics
/// on the fixed (X̃, Y) frame differing by the factor 1/f at every sample point,
/// although the two transverse distributions differ.
pub fn conformal_class_check(setup: &Setup, sig: &SigmaSection, f: &Poly) -> Result<CheckReport> {
    let c1 = construct(setup.clone(), sig.clone())?;
    let c2 = construct(setup.clone(), sig.times(f))?;
    let mut bad = 0;
    let mut compared = 0;
    let mut t_differs = false;
    for pt in sample_points(setup) {
        let fv = f.eval(&pt);
        let (Some(g1), Some(g2)) = (metric_on_coordinate_frame(setup, &c1.sigma, &c1.t, &pt), metric_on_coordinate_frame(setup, &c2.sigma, &c2.t, &pt)) else {
            continue;
        };
        if fv.is_zero() {
            continue;
        }
        compared += 1;
        if g2.scale(&fv) != g1 {
            bad += 1;
        }
        let (Some(b1), Some(b2)) = (split_matrix(&c1.t, &pt), split_matrix(&c2.t, &pt)) else { continue };
        t_differs |= b1 != b2;
    }
    Ok(CheckReport::new(
        format!("conformal3.conformal_class.{}", setup.model.modification.name()),
        "changing σ to fσ rescales the metric by 1/f",
        bad == 0 && compared > 0,
        json!({ "factor": f.display(&coordinate_names(3)), "points": compared, "failures": bad, "transverse_distribution_changed": t_differs }),
    ))
}

/// Re-solving with the frame P·X̃ reproduces the original connection after relabeling.
pub fn frame_change_check(model: &FrameModel, sig: &SigmaSection, p: &Matrix, tag: &str) -> Result<CheckReport> {
    let nv = model.nvars;
    let base = construct(Setup::new(model.clone(), Matrix::identity(3))?, sig.clone())?;
    let detp = p.det();
    let moved = construct(Setup::new(model.clone(), p.clone())?, sig.scaled(&detp))?;
    let pinv = p.inverse().expect("checked invertible");
    let mut bad = 0;
    for a in 0..3 {
        for b in 0..3 {
            // ∇_{X̃a} X̃b = Σ P_ac P_bd Γ^m_cd X_m, X_m = Σ (P⁻¹)_me X̃_e
            let mut want = zero3(nv);
            for c in 0..3 {
                for d in 0..3 {
                    let w = &p[(a, c)] * &p[(b, d)];
                    if w.is_zero() {
                        continue;
                    }
                    for m in 0..3 {
                        for e in 0..3 {
                            let k = &w * &pinv[(m, e)];
                            if !k.is_zero() {
                                want[e] = want[e].add(&base.pc.gamma[c][d][m].scale(&k));
                            }
                        }
                    }
                }
            }
            if !is_zero3(&sub3(&want, &moved.pc.gamma[a][b])) {
                bad += 1;
            }
        }
    }
    Ok(CheckReport::new(
        format!("conformal3.frame_change.{}.{tag}", model.modification.name()),
        "the connection is determined by σ: re-solving in another frame gives the same ∇",
        bad == 0,
        json!({ "frame_change": p.to_rows().iter().map(|r| r.iter().map(fmt_scalar).collect::<Vec<_>>()).collect::<Vec<_>>(), "mismatches": bad }),
    ))
}

/// A deliberately wrong connection must break the skewness identity.
pub fn negative_control(c: &Construction) -> CheckReport {
    let mut bad = c.pc.clone();
    let nv = c.setup.nvars();
    bad.gamma[0][1][2] = bad.gamma[0][1][2].add(&RF::constant(nv, Scalar::one()));
    let detected = (0..27).any(|i| !is_zero3(&pcon_residual(&c.setup, &bad, i / 9, (i / 3) % 3, i % 3)));
    CheckReport::new(
        "conformal3.negative_control",
        "a perturbed connection violates the torsion conditions",
        detected,
        json!({ "perturbation": "Γ^3_{12} += 1", "detected": detected }),
    )
}

/// Report of the connection coefficients and T₋₂ frame.
pub fn describe(c: &Construction) -> serde_json::Value {
    let mut conn = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let g = c.pc.get(a, b);
            if !is_zero3(g) {
                conn.push(json!({ "A": a + 1, "B": b + 1, "nabla_A_B": g.iter().map(fmt_rf).collect::<Vec<_>>() }));
            }
        }
    }
    let t: Vec<_> = PAIRS
        .iter()
        .zip(&c.t.u)
        .map(|(&(j, k), u)| json!({ "U": format!("U_{{{}|{}}}", j + 1, k + 1), "components": u.iter().map(fmt_rf).collect::<Vec<_>>() }))
        .collect();
    json!({
        "modification": c.setup.model.modification.name(),
        "sigma": c.sigma.coeff.display(&coordinate_names(3)),
        "frame_order": ["X~1", "X~2", "X~3", "Y_{1|2}", "Y_{1|3}", "Y_{2|3}"],
        "nonzero_connection_coefficients": conn,
        "transverse_frame": t,
    })
}

/// The nonflat fixture X_1' = X_1 + y_{2|3} Y_{1|2}.
pub fn perturbed_model() -> FrameModel {
    let nv = 6;
    let y23 = 3 + crate::exactalg::pair_index(3, 1, 2);
    build_model(3, Modification::Custom(vec![(0, (0, 1), Poly::var(nv, y23))])).expect("valid fixture")
}

/// Every check on the flat model and the perturbed fixture.
pub fn conformal3_checks(trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let flat = build_model(3, Modification::None)?;
    let nv = flat.nvars;
    let one = SigmaSection::new(Poly::one(nv));
    let c = construct(Setup::new(flat.clone(), Matrix::identity(3))?, one.clone())?;
    let zero_conn = c.pc.gamma.iter().flatten().all(is_zero3);
    let t_is_y = (0..3).all(|p| (0..6).all(|m| c.t.u[p][m].is_identically_zero() == (m != 3 + p)) && c.t.u[p][3 + p] == RF::constant(nv, Scalar::one()));
    out.push(CheckReport::new(
        "conformal3.flat_connection",
        "on the flat model with parallel constant σ the connection vanishes and T₋₂ is spanned by the Y-fields",
        zero_conn && t_is_y,
        describe(&c),
    ));
    let c2 = construct(Setup::new(flat.clone(), Matrix::identity(3))?, one.scaled(&int(2)))?;
    let same = (0..3).all(|a| (0..3).all(|b| is_zero3(&sub3(c.pc.get(a, b), c2.pc.get(a, b)))));
    out.push(CheckReport::new("conformal3.sigma_scaling", "scaling σ by a constant leaves ∇ unchanged", same, json!({ "factor": 2 })));
    out.push(torsion_conditions_check(&c));
    out.push(metric_check(&c));
    out.push(upsilon_invariance_check(&c, trials, seed));
    out.push(negative_control(&c));

    let pert = perturbed_model();
    let x1 = Poly::var(nv, 0);
    let sig = SigmaSection::new(Poly::one(nv).add(&x1.mul(&x1)));
    let cp = construct(Setup::new(pert.clone(), Matrix::identity(3))?, sig.clone())?;
    let mut rep = torsion_conditions_check(&cp);
    if let serde_json::Value::Object(m) = &mut rep.payload {
        m.insert("construction".into(), describe(&cp));
    }
    out.push(rep);
    out.push(metric_check(&cp));
    let f = Poly::constant(nv, int(3)).add(&Poly::var(nv, 1).mul(&Poly::var(nv, 1)));
    out.push(conformal_class_check(&Setup::new(pert.clone(), Matrix::identity(3))?, &sig, &f)?);
    let mut third = SigmaSection::new(sig.coeff.clone());
    third = third.scaled(&int(3));
    let cs = construct(Setup::new(pert.clone(), Matrix::identity(3))?, third)?;
    let pts = sample_points(&cp.setup);
    let scaled_ok = pts.iter().all(|pt| match (eval_matrix(&conformal_metric(&cp.setup, &cp.sigma), pt), eval_matrix(&conformal_metric(&cs.setup, &cs.sigma), pt)) {
        (Some(a), Some(b)) => b.scale(&int(3)) == a,
        _ => true,
    });
    out.push(CheckReport::new("conformal3.triple_sigma", "replacing σ by 3σ scales the metric by 1/3", scaled_ok, json!({ "points": pts.len() })));
    let p = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[1, 0, 1]]);
    out.push(frame_change_check(&pert, &sig, &p, "general")?);
    let perm = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
    out.push(frame_change_check(&pert, &sig, &perm, "permutation")?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_signs() {
        assert_eq!(eps(0, 1, 2), 1);
        assert_eq!(eps(1, 0, 2), -1);
        assert_eq!(eps(2, 0, 1), 1);
        assert_eq!(eps(0, 0, 1), 0);
    }

    #[test]
    fn all_checks_pass() {
        for r in conformal3_checks(50, 0).unwrap() {
            assert!(r.passed(), "{} {}", r.id, r.payload);
        }
    }
}
