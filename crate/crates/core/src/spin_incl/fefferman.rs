use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::{algebra_dim, flat, so_basis, subspace_stabilizer, vector_stabilizer};
use crate::error::{Error, Result};
use crate::exactalg::matrix::{intersection, same_span, span_dim, Matrix};
use crate::exactalg::{metric_j, GradedBasis, Scalar};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FeffermanCase {
    /// so(n+1,n) ⊂ so(n+1,n+1)
    Spinorial(usize),
    /// so(4,2) ⊂ so(4,3)
    Cr,
    /// so(3,3) ⊂ so(4,3), plane transverse to R^(3,3)
    LagrangianTransverse,
    /// so(3,3) ⊂ so(4,3), plane inside the complement of the fixed vector
    LagrangianNonTransverse,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeffermanReport {
    pub case: FeffermanCase,
    pub dim_g_hat: usize,
    pub dim_p_hat: usize,
    pub dim_g: usize,
    pub dim_p: usize,
    pub dim_intersection: usize,
    pub dim_sum: usize,
    /// g ∩ p̂ = p (spinorial) or g ∩ p̂ ⊂ p (other cases)
    pub intersection_matches_p: bool,
    pub transverse: bool,
}

fn unit(len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); len];
    v[i] = Scalar::one();
    v
}

fn dims(case: FeffermanCase, g_hat: &[Matrix], p_hat: &[Matrix], g: &[Matrix], p: &[Matrix], equal: bool) -> Result<FeffermanReport> {
    let len = g_hat[0].rows() * g_hat[0].cols();
    let gi = intersection(&flat(g), &flat(p_hat), len);
    let mut sum = flat(g);
    sum.extend(flat(p_hat));
    let dim_sum = span_dim(&sum, len);
    let dim_g = algebra_dim(g);
    let dim_p_hat = algebra_dim(p_hat);
    if gi.len() + dim_sum != dim_g + dim_p_hat {
        return Err(Error::Degenerate("rank arithmetic".into()));
    }
    let pf = flat(p);
    let matches = if equal {
        same_span(&gi, &pf, len)
    } else {
        let mut all = pf.clone();
        all.extend(gi.iter().cloned());
        span_dim(&all, len) == span_dim(&pf, len)
    };
    let dim_g_hat = algebra_dim(g_hat);
    Ok(FeffermanReport {
        case,
        dim_g_hat,
        dim_p_hat,
        dim_g,
        dim_p: algebra_dim(p),
        dim_intersection: gi.len(),
        dim_sum,
        intersection_matches_p: matches,
        transverse: dim_sum == dim_g_hat,
    })
}

pub fn fefferman_dims(case: FeffermanCase) -> Result<FeffermanReport> {
    match case {
        FeffermanCase::Spinorial(n) => {
            // R^(2n+2) = R^(n+1,n) ⊕ R·u with <u,u> = -1
            let m = 2 * n + 2;
            let j = metric_j(n);
            let jh = Matrix::from_fn(m, m, |a, b| {
                if a < m - 1 && b < m - 1 {
                    j[(a, b)].clone()
                } else if a == b {
                    -Scalar::one()
                } else {
                    Scalar::zero()
                }
            });
            let g_hat = so_basis(&jh);
            let gb = GradedBasis::new(n);
            let embed = |x: &Matrix| Matrix::from_fn(m, m, |a, b| if a < m - 1 && b < m - 1 { x[(a, b)].clone() } else { Scalar::zero() });
            let g: Vec<Matrix> = (0..gb.dim()).map(|i| embed(&gb.element(i).to_matrix())).collect();
            let p: Vec<Matrix> = gb.p_indices().iter().map(|&i| embed(&gb.element(i).to_matrix())).collect();
            let mut w: Vec<Vec<Scalar>> = (0..n).map(|i| unit(m, i)).collect();
            let mut e0u = unit(m, n);
            e0u[m - 1] = Scalar::one();
            w.push(e0u);
            let p_hat = subspace_stabilizer(&g_hat, &w);
            dims(case, &g_hat, &p_hat, &g, &p, true)
        }
        _ => {
            // R^(4,3) with the metric J (n = 3): e1 e2 e3 e0 f1 f2 f3
            let jm = metric_j(3);
            let g_hat = so_basis(&jm);
            let b: Vec<Vec<Scalar>> = (0..3).map(|i| unit(7, i)).collect();
            let p_hat = subspace_stabilizer(&g_hat, &b);
            let u = match case {
                FeffermanCase::Cr => {
                    let mut u = unit(7, 0);
                    u[4] = -Scalar::one();
                    u
                }
                FeffermanCase::LagrangianTransverse => {
                    let mut u = unit(7, 0);
                    u[4] = Scalar::one();
                    u
                }
                _ => unit(7, 3),
            };
            let ju = jm.mul_vec(&u);
            let norm: Scalar = u.iter().zip(&ju).map(|(a, b)| a * b).sum();
            if norm.is_zero() {
                return Err(Error::Degenerate("null fixed vector".into()));
            }
            let g = vector_stabilizer(&g_hat, &u);
            // C = B ∩ u⊥
            let uperp = Matrix::from_rows(&[ju]).kernel();
            let c = intersection(&b, &uperp, 7);
            let p = subspace_stabilizer(&g, &c);
            dims(case, &g_hat, &p_hat, &g, &p, false)
        }
    }
}

pub fn fefferman_check(case: FeffermanCase) -> CheckReport {
    let (id, anchor) = match case {
        FeffermanCase::Spinorial(n) => (format!("spin_incl.fefferman.spinorial.n{n}"), "so(n+1,n) meets the stabilizer of an isotropic (n+1)-plane exactly in p and is transverse to it".to_string()),
        FeffermanCase::Cr => ("spin_incl.fefferman.cr".into(), "dimensions 21, 15, 15, 10, 9 for so(4,3), its plane stabilizer, so(4,2), its parabolic and the intersection".to_string()),
        FeffermanCase::LagrangianTransverse => ("spin_incl.fefferman.lagrangian_transverse".into(), "so(3,3) is transverse to the stabilizer of a generic isotropic 3-plane".to_string()),
        FeffermanCase::LagrangianNonTransverse => ("spin_incl.fefferman.lagrangian_nontransverse".into(), "R^(3,3) need not be transverse to a given isotropic 3-plane".to_string()),
    };
    match fefferman_dims(case) {
        Err(e) => CheckReport::new(id, anchor, false, json!({ "error": e.to_string() })),
        Ok(r) => {
            let ok = match case {
                FeffermanCase::Spinorial(_) => r.intersection_matches_p && r.transverse,
                FeffermanCase::Cr => {
                    (r.dim_g_hat, r.dim_p_hat, r.dim_g, r.dim_p, r.dim_intersection) == (21, 15, 15, 10, 9) && r.transverse && r.intersection_matches_p
                }
                FeffermanCase::LagrangianTransverse => r.transverse && r.dim_intersection == 9,
                FeffermanCase::LagrangianNonTransverse => r.dim_intersection > 9 && !r.transverse,
            };
            CheckReport::new(id, anchor, ok, serde_json::to_value(&r).unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cr_chain() {
        let r = fefferman_dims(FeffermanCase::Cr).unwrap();
        assert_eq!((r.dim_g_hat, r.dim_p_hat, r.dim_g, r.dim_p, r.dim_intersection), (21, 15, 15, 10, 9));
        assert!(r.transverse);
    }

    #[test]
    fn spinorial() {
        for n in 2..=4 {
            assert!(fefferman_check(FeffermanCase::Spinorial(n)).passed(), "n = {n}");
        }
    }

    #[test]
    fn lagrangian() {
        let t = fefferman_dims(FeffermanCase::LagrangianTransverse).unwrap();
        assert_eq!(t.dim_g, 15);
        assert!(fefferman_check(FeffermanCase::LagrangianTransverse).passed(), "{t:?}");
        let nt = fefferman_dims(FeffermanCase::LagrangianNonTransverse).unwrap();
        assert_eq!(nt.dim_intersection, 12);
    }
}
