//! The exceptional isomorphisms sl(4) ≅ so(3,3) and su(2,2) ≅ so(4,2),
//! form stabilizers in orthogonal algebras, and the intersection dimension
//! data behind the Fefferman-type inclusions.

pub mod complex;
pub mod fefferman;
pub mod forms;

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::matrix::{same_span, span_basis, span_dim, Matrix};
use crate::exactalg::scalar::{frac, int};
use crate::exactalg::Scalar;
use crate::octonion::{derivation_algebra, im_gram, restrict_to_im, theta, ZornOct};
use crate::report::CheckReport;

pub use complex::CMatrix;
pub use fefferman::{fefferman_dims, FeffermanCase, FeffermanReport};
pub use forms::AltForm;

/// Basis of so(G) = {X : XᵗG + GX = 0} as X = G⁻¹S, S running over E_ij - E_ji.
pub fn so_basis(g: &Matrix) -> Vec<Matrix> {
    let n = g.rows();
    let ginv = g.inverse().expect("nondegenerate metric");
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut s = Matrix::zeros(n, n);
            s[(i, j)] = Scalar::one();
            s[(j, i)] = -Scalar::one();
            out.push(ginv.mul(&s));
        }
    }
    out
}

pub fn is_skew_for(x: &Matrix, g: &Matrix) -> bool {
    x.transpose().mul(g).add(&g.mul(x)).is_zero()
}

fn combine(basis: &[Matrix], c: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(basis[0].rows(), basis[0].cols());
    for (ci, b) in c.iter().zip(basis) {
        if !ci.is_zero() {
            m = m.add(&b.scale(ci));
        }
    }
    m
}

/// Elements of span(alg) annihilating the form.
pub fn form_stabilizer(form: &AltForm, alg: &[Matrix]) -> Vec<Matrix> {
    if alg.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Scalar>> = alg.iter().map(|x| form.act(x).to_vec()).collect();
    let len = cols[0].len();
    let ker = Matrix::from_cols(&cols, len).kernel();
    ker.iter().map(|c| combine(alg, c)).collect()
}

/// Elements of span(alg) mapping span(sub) into itself.
pub fn subspace_stabilizer(alg: &[Matrix], sub: &[Vec<Scalar>]) -> Vec<Matrix> {
    let dim = alg[0].rows();
    let ann = Matrix::from_rows(sub).kernel();
    let mut rows = Vec::new();
    for b in sub {
        let images: Vec<Vec<Scalar>> = alg.iter().map(|x| x.mul_vec(b)).collect();
        for phi in &ann {
            rows.push(images.iter().map(|y| phi.iter().zip(y).map(|(p, q)| p * q).sum::<Scalar>()).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        return alg.to_vec();
    }
    let ker = Matrix::from_rows(&rows).kernel();
    let _ = dim;
    ker.iter().map(|c| combine(alg, c)).collect()
}

/// Elements of span(alg) annihilating the vector u.
pub fn vector_stabilizer(alg: &[Matrix], u: &[Scalar]) -> Vec<Matrix> {
    let cols: Vec<Vec<Scalar>> = alg.iter().map(|x| x.mul_vec(u)).collect();
    let ker = Matrix::from_cols(&cols, u.len()).kernel();
    ker.iter().map(|c| combine(alg, c)).collect()
}

pub fn flat(ms: &[Matrix]) -> Vec<Vec<Scalar>> {
    ms.iter().map(|m| m.flatten()).collect()
}

pub fn algebra_dim(ms: &[Matrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    span_dim(&flat(ms), ms[0].rows() * ms[0].cols())
}

/// Representation of a matrix Lie algebra on a space with an invariant form.
#[derive(Clone, Debug)]
pub struct RepMap {
    pub source: Vec<CMatrix>,
    pub form: Matrix,
    pub images: Vec<Matrix>,
    pub brackets_preserved: bool,
}

impl RepMap {
    pub fn skew(&self) -> bool {
        self.images.iter().all(|x| is_skew_for(x, &self.form))
    }

    pub fn image_dim(&self) -> usize {
        algebra_dim(&self.images)
    }

    pub fn injective(&self) -> bool {
        self.image_dim() == self.source.len()
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        self.form.signature()
    }
}

pub fn pairs4() -> Vec<(usize, usize)> {
    crate::exactalg::pairs(4)
}

/// Induced action of a 4×4 matrix on Λ²: A(e_i∧e_j) = Ae_i∧e_j + e_i∧Ae_j.
pub fn lambda2(a: &Matrix) -> Matrix {
    let ps = pairs4();
    let idx = |i: usize, j: usize| -> Option<(usize, Scalar)> {
        if i == j {
            None
        } else if i < j {
            Some((ps.iter().position(|&p| p == (i, j)).unwrap(), Scalar::one()))
        } else {
            Some((ps.iter().position(|&p| p == (j, i)).unwrap(), -Scalar::one()))
        }
    };
    let mut m = Matrix::zeros(6, 6);
    for (col, &(i, j)) in ps.iter().enumerate() {
        for r in 0..4 {
            if let Some((row, s)) = idx(r, j) {
                m[(row, col)] += &a[(r, i)] * &s;
            }
            if let Some((row, s)) = idx(i, r) {
                m[(row, col)] += &a[(r, j)] * &s;
            }
        }
    }
    m
}

/// e_I ∧ e_J = W_IJ e_1∧e_2∧e_3∧e_4.
pub fn wedge_pairing() -> Matrix {
    let ps = pairs4();
    Matrix::from_fn(6, 6, |a, b| {
        let (i, j) = ps[a];
        let (k, l) = ps[b];
        match forms::sort_with_sign(&[i, j, k, l]) {
            Some((_, s)) => int(s as i64),
            None => Scalar::zero(),
        }
    })
}

fn e44(i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    m[(i, j)] = Scalar::one();
    m
}

pub fn sl4_basis() -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out.push(e44(i, j));
            }
        }
    }
    for i in 0..3 {
        out.push(e44(i, i).sub(&e44(i + 1, i + 1)));
    }
    out
}

pub fn sl4_to_so33() -> RepMap {
    let src = sl4_basis();
    let images: Vec<Matrix> = src.iter().map(lambda2).collect();
    let brackets_preserved = src.iter().all(|x| src.iter().all(|y| lambda2(&x.commutator(y)) == lambda2(x).commutator(&lambda2(y))));
    RepMap { source: src.into_iter().map(CMatrix::real).collect(), form: wedge_pairing(), images, brackets_preserved }
}

/// Hermitian form of signature (2,2) on C^4.
pub fn hermitian_22() -> Matrix {
    Matrix::from_fn(4, 4, |i, j| if i != j { Scalar::zero() } else if i < 2 { Scalar::one() } else { -Scalar::one() })
}

/// Basis of su(2,2) = {X : X†H + HX = 0, tr X = 0}, solved over the reals.
pub fn su22_basis() -> Vec<CMatrix> {
    let h = hermitian_22();
    // unknowns: P entries (16) then Q entries (16)
    let mut rows = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            // real part: (PᵗH + HP)[r][c] ; imaginary part: (-QᵗH + HQ)[r][c]
            let mut re = vec![Scalar::zero(); 32];
            let mut im = vec![Scalar::zero(); 32];
            for k in 0..4 {
                re[4 * k + r] += &h[(k, c)];
                re[4 * k + c] += &h[(r, k)];
                im[16 + 4 * k + r] -= &h[(k, c)];
                im[16 + 4 * k + c] += &h[(r, k)];
            }
            rows.push(re);
            rows.push(im);
        }
    }
    let mut tr_re = vec![Scalar::zero(); 32];
    let mut tr_im = vec![Scalar::zero(); 32];
    for i in 0..4 {
        tr_re[5 * i] = Scalar::one();
        tr_im[16 + 5 * i] = Scalar::one();
    }
    rows.push(tr_re);
    rows.push(tr_im);
    Matrix::from_rows(&rows)
        .kernel()
        .into_iter()
        .map(|v| CMatrix::new(Matrix::from_flat(4, 4, v[..16].to_vec()), Matrix::from_flat(4, 4, v[16..].to_vec())))
        .collect()
}

fn lambda2_c(x: &CMatrix) -> CMatrix {
    CMatrix::new(lambda2(&x.re), lambda2(&x.im))
}

/// The induced Hermitian form on Λ²: h(e_I, e_J) = det of the 2×2 minor of H.
pub fn hermitian_lambda2(h: &Matrix) -> Matrix {
    let ps = pairs4();
    Matrix::from_fn(6, 6, |a, b| {
        let (i, j) = ps[a];
        let (k, l) = ps[b];
        &h[(i, k)] * &h[(j, l)] - &h[(i, l)] * &h[(j, k)]
    })
}

/// Real structure ρ(α) = R·ᾱ on Λ²C^4 with β∧ρ(α) = s·h_Λ(α, β)·vol,
/// i.e. R = s·W⁻¹h_Λ (h_Λ is real here).
pub fn real_structure(sign: i64) -> Matrix {
    let w = wedge_pairing();
    let hl = hermitian_lambda2(&hermitian_22());
    w.inverse().unwrap().mul(&hl).scale(&int(sign))
}

fn realify_vec(re: &[Scalar], im: &[Scalar]) -> Vec<Scalar> {
    re.iter().chain(im.iter()).cloned().collect()
}

/// su(2,2) acting on the real points of Λ²C^4 for the real structure with
/// the given sign. Returns the map and the real basis (as realified vectors).
pub fn su22_on_real_points(sign: i64) -> Result<(RepMap, Vec<Vec<Scalar>>)> {
    let r = real_structure(sign);
    if r.mul(&r) != Matrix::identity(6) {
        return Err(Error::RealStructure);
    }
    // candidates b + ρ(b) and i(b - ρ(b)) for basis vectors b
    let mut cands = Vec::new();
    for k in 0..6 {
        let mut b = vec![Scalar::zero(); 6];
        b[k] = Scalar::one();
        let rb = r.mul_vec(&b);
        let zero = vec![Scalar::zero(); 6];
        cands.push(realify_vec(&b.iter().zip(&rb).map(|(x, y)| x + y).collect::<Vec<_>>(), &zero));
        cands.push(realify_vec(&zero, &b.iter().zip(&rb).map(|(x, y)| x - y).collect::<Vec<_>>()));
    }
    let basis = span_basis(&cands, 12);
    if basis.len() != 6 {
        return Err(Error::Degenerate(format!("real points of dimension {}", basis.len())));
    }
    let u = Matrix::from_cols(&basis, 12);
    let w = wedge_pairing();
    // complex bilinear pairing restricted to real points
    let form = Matrix::from_fn(6, 6, |a, b| {
        let (ar, ai) = basis[a].split_at(6);
        let (br, bi) = basis[b].split_at(6);
        let wr = w.mul_vec(br);
        let wi = w.mul_vec(bi);
        let re: Scalar = ar.iter().zip(&wr).map(|(x, y)| x * y).sum::<Scalar>() - ai.iter().zip(&wi).map(|(x, y)| x * y).sum::<Scalar>();
        re
    });
    let imag_ok = (0..6).all(|a| {
        (0..6).all(|b| {
            let (ar, ai) = basis[a].split_at(6);
            let (br, bi) = basis[b].split_at(6);
            let s: Scalar = ar.iter().zip(&w.mul_vec(bi)).map(|(x, y)| x * y).sum::<Scalar>()
                + ai.iter().zip(&w.mul_vec(br)).map(|(x, y)| x * y).sum::<Scalar>();
            s.is_zero()
        })
    });
    if !imag_ok {
        return Err(Error::Degenerate("wedge pairing is not real on the real points".into()));
    }
    let act = |x: &CMatrix| -> Result<Matrix> {
        let m = lambda2_c(x);
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|b| {
                let (re, im) = m.mul_vec(&b[..6], &b[6..]);
                u.solve(&realify_vec(&re, &im)).ok_or(Error::Degenerate("action does not preserve the real points".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_cols(&cols, 6))
    };
    let src = su22_basis();
    let images: Vec<Matrix> = src.iter().map(&act).collect::<Result<_>>()?;
    let mut brackets_preserved = true;
    for (i, x) in src.iter().enumerate() {
        for (j, y) in src.iter().enumerate() {
            let lhs = act(&x.commutator(y))?;
            brackets_preserved &= lhs == images[i].commutator(&images[j]);
        }
    }
    Ok((RepMap { source: src, form, images, brackets_preserved }, basis))
}

pub fn su22_to_so42() -> Result<RepMap> {
    su22_on_real_points(-1).map(|x| x.0)
}

fn rep_report(id: &str, anchor: &str, rep: &RepMap, sig: (usize, usize)) -> CheckReport {
    let s = rep.signature();
    let ok = rep.skew() && rep.injective() && rep.image_dim() == 15 && rep.brackets_preserved && (s.0, s.1, s.2) == (sig.0, sig.1, 0);
    CheckReport::new(
        id,
        anchor,
        ok,
        json!({
            "source_dim": rep.source.len(),
            "image_dim": rep.image_dim(),
            "skew": rep.skew(),
            "injective": rep.injective(),
            "brackets_preserved": rep.brackets_preserved,
            "signature": [s.0, s.1],
        }),
    )
}

pub fn sl4_check() -> CheckReport {
    rep_report("spin_incl.sl4_so33", "sl(4,R) acts on Λ²R⁴ preserving a split metric, onto so(3,3)", &sl4_to_so33(), (3, 3))
}

pub fn su22_check() -> CheckReport {
    match su22_to_so42() {
        Ok(rep) => rep_report("spin_incl.su22_so42", "su(2,2) acts on the real points of Λ²C⁴ preserving a (4,2) metric, onto so(4,2)", &rep, (4, 2)),
        Err(e) => CheckReport::new("spin_incl.su22_so42", "su(2,2) ≅ so(4,2)", false, json!({ "error": e.to_string() })),
    }
}

/// Coordinates x_1..x_4, y_1..y_4 on C^4 = R^8, with z_k = x_k + i y_k.
/// Metric Re h for h = diag(1,1,-1,-1).
pub fn metric_44() -> Matrix {
    Matrix::from_fn(8, 8, |i, j| if i != j { Scalar::zero() } else if i % 4 < 2 { Scalar::one() } else { -Scalar::one() })
}

/// μ = Σ ε_k dx_k ∧ dy_k, the Kähler form of h.
pub fn kahler_form() -> AltForm {
    let mut mu = AltForm::zero(8, 2);
    for k in 0..4 {
        mu.add_term(&[k, 4 + k], if k < 2 { Scalar::one() } else { -Scalar::one() });
    }
    mu
}

/// Re(dz_1 ∧ dz_2 ∧ dz_3 ∧ dz_4).
pub fn re_volume() -> AltForm {
    let mut f = AltForm::zero(8, 4);
    for mask in 0..16u32 {
        let ys = mask.count_ones();
        if ys % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..4).map(|k| if mask >> k & 1 == 1 { 4 + k } else { k }).collect();
        f.add_term(&idx, if ys % 4 == 0 { Scalar::one() } else { -Scalar::one() });
    }
    f
}

/// λ = Re(v) - μ², with μ² the divided square ½ μ∧μ.
pub fn su_four_form() -> AltForm {
    let mu = kahler_form();
    re_volume().add(&mu.wedge(&mu).scale(&frac(-1, 2)))
}

#[derive(Clone, Debug)]
pub struct FormStabilizer {
    pub ambient_dim: usize,
    pub form: AltForm,
    pub basis: Vec<Matrix>,
}

impl FormStabilizer {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn four_form_stabilizer(lambda: &AltForm, ambient: &[Matrix]) -> FormStabilizer {
    FormStabilizer { ambient_dim: ambient.len(), form: lambda.clone(), basis: form_stabilizer(lambda, ambient) }
}

/// su(2,2) inside so(4,4) through its action on C^4 = R^8.
pub fn su22_in_so44() -> Vec<Matrix> {
    su22_basis().iter().map(|x| x.realify()).collect()
}

/// sl(4) inside so(4,4) acting on R⁴ ⊕ R⁴* with the duality pairing.
pub fn sl4_in_so44() -> (Vec<Matrix>, Matrix) {
    let g = Matrix::from_fn(8, 8, |i, j| if (i + 4 == j) || (j + 4 == i) { Scalar::one() } else { Scalar::zero() });
    let imgs = sl4_basis()
        .iter()
        .map(|a| {
            let at = a.transpose().neg();
            Matrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
                (true, true) => a[(i, j)].clone(),
                (false, false) => at[(i - 4, j - 4)].clone(),
                _ => Scalar::zero(),
            })
        })
        .collect();
    (imgs, g)
}

pub fn four_form_check() -> CheckReport {
    let g = metric_44();
    let so44 = so_basis(&g);
    let lam = su_four_form();
    let stab = four_form_stabilizer(&lam, &so44);
    let zero = four_form_stabilizer(&AltForm::zero(8, 4), &so44);
    let re_only = four_form_stabilizer(&re_volume(), &so44).dim();
    let mu = kahler_form();
    let mu2 = four_form_stabilizer(&mu.wedge(&mu), &so44).dim();
    let su = su22_in_so44();
    let su_in = su.iter().all(|x| lam.act(x).is_zero() && is_skew_for(x, &g));
    let j = CMatrix::new(Matrix::zeros(4, 4), Matrix::identity(4)).realify();
    let su_complex = su.iter().all(|x| x.commutator(&j).is_zero());
    let (sl, gs) = sl4_in_so44();
    let sl_split = sl.iter().all(|x| {
        is_skew_for(x, &gs) && (0..4).all(|i| (4..8).all(|j| x[(i, j)].is_zero() && x[(j, i)].is_zero()))
    }) && algebra_dim(&sl) == 15;
    let ok = stab.dim() == 21 && zero.dim() == 28 && su_in && su_complex && sl_split;
    CheckReport::new(
        "spin_incl.four_form",
        "the stabilizer in so(4,4) of Re(v) - μ² is spin(4,3), of dimension 21, and contains su(2,2)",
        ok,
        json!({
            "dim_stabilizer": stab.dim(),
            "dim_zero_form_stabilizer": zero.dim(),
            "dim_re_v_stabilizer": re_only,
            "dim_mu_wedge_mu_stabilizer": mu2,
            "su22_in_stabilizer": su_in,
            "su22_preserves_complex_structure": su_complex,
            "sl4_preserves_splitting": sl_split,
        }),
    )
}

/// θ as a 3-form on Im O' in the basis `ZornOct::im_basis`.
pub fn theta_form() -> AltForm {
    let b = ZornOct::im_basis();
    let mut f = AltForm::zero(7, 3);
    for idx in forms::increasing_tuples(7, 3) {
        let t = theta(&b[idx[0]], &b[idx[1]], &b[idx[2]]).unwrap();
        f.add_term(&idx, t);
    }
    f
}

pub fn theta_stabilizer() -> FormStabilizer {
    let so34 = so_basis(&im_gram());
    FormStabilizer { ambient_dim: so34.len(), form: theta_form(), basis: form_stabilizer(&theta_form(), &so34) }
}

pub fn theta_stabilizer_check() -> CheckReport {
    let st = theta_stabilizer();
    let der: Vec<Matrix> = derivation_algebra().iter().map(restrict_to_im).collect();
    let equal = same_span(&flat(&st.basis), &flat(&der), 49);
    let g = im_gram();
    let in_so = st.basis.iter().all(|x| is_skew_for(x, &g));
    let sig = g.signature();
    CheckReport::new(
        "spin_incl.theta_stabilizer",
        "the stabilizer of θ in so(3,4) is g2', equal to the derivations of O'",
        st.dim() == 14 && equal && in_so && der.len() == 14,
        json!({ "dim": st.dim(), "ambient_dim": st.ambient_dim, "equals_derivations": equal, "in_so34": in_so, "im_signature": [sig.0, sig.1] }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl4() {
        let r = sl4_check();
        assert!(r.passed(), "{:?}", r.payload);
    }

    #[test]
    fn su22() {
        assert_eq!(su22_basis().len(), 15);
        let r = su22_check();
        assert!(r.passed(), "{:?}", r.payload);
        let (other, _) = su22_on_real_points(1).unwrap();
        let s = other.signature();
        assert_eq!((s.0, s.1), (2, 4));
    }

    #[test]
    fn four_form() {
        let r = four_form_check();
        assert!(r.passed(), "{:?}", r.payload);
    }

    #[test]
    fn theta_stab() {
        let r = theta_stabilizer_check();
        assert!(r.passed(), "{:?}", r.payload);
    }

    #[test]
    fn permuted_so_basis_same_stabilizer() {
        let g = metric_44();
        let mut so = so_basis(&g);
        let a = form_stabilizer(&su_four_form(), &so);
        so.reverse();
        let b = form_stabilizer(&su_four_form(), &so);
        assert!(same_span(&flat(&a), &flat(&b), 64));
    }
}
