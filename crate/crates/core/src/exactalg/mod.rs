//! Exact rational linear algebra and the graded Lie algebra so(n+1,n).

pub mod matrix;
pub mod scalar;
pub mod so;

use num_traits::Zero;
use serde_json::json;

pub use matrix::Matrix;
pub use scalar::Scalar;
pub use so::{metric_j, pair_index, pairs, GradedBasis, LieElement};

use crate::report::CheckReport;
use matrix::{in_span, same_span, span_dim};

pub fn bracket(x: &LieElement, y: &LieElement) -> crate::Result<LieElement> {
    x.bracket(y)
}

pub fn invariant_form(x: &LieElement, y: &LieElement) -> crate::Result<Scalar> {
    x.form(y)
}

pub fn graded_basis(n: usize) -> GradedBasis {
    GradedBasis::new(n)
}

fn unit(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = scalar::one();
    v
}

/// p⊥ = g1 ⊕ g2 is an ideal of p, is 2-step nilpotent, and is the trace-form
/// orthocomplement of p.
pub fn nilradical_check(n: usize) -> CheckReport {
    let g = GradedBasis::new(n);
    let dim = g.dim();
    let p = g.p_indices();
    let pp = g.p_perp_indices();
    let pp_vecs: Vec<Vec<Scalar>> = pp.iter().map(|&i| unit(dim, i)).collect();

    let ideal = p.iter().all(|&i| {
        pp.iter().all(|&j| {
            let br = g.bracket_coords(&unit(dim, i), &unit(dim, j));
            in_span(&pp_vecs, &br, dim)
        })
    });

    // lower central series of p⊥
    let mut series = vec![pp_vecs.clone()];
    let mut step = 0;
    loop {
        let last = series.last().unwrap();
        let mut next = Vec::new();
        for x in &pp_vecs {
            for y in last {
                let br = g.bracket_coords(x, y);
                if br.iter().any(|c| !c.is_zero()) {
                    next.push(br);
                }
            }
        }
        step += 1;
        if span_dim(&next, dim) == 0 || step > 4 {
            break;
        }
        series.push(next);
    }
    let nilpotent = step <= 4;

    // orthocomplement of p under the trace form
    let form = g.form_matrix();
    let rows: Vec<Vec<Scalar>> = p.iter().map(|&i| form.row(i)).collect();
    let perp = Matrix::from_rows(&rows).kernel();
    let ortho = same_span(&perp, &pp_vecs, dim);

    CheckReport::new(
        format!("exactalg.nilradical.n{n}"),
        "p-perp is the nilradical of p and the orthocomplement of p",
        ideal && nilpotent && ortho && step == 2,
        json!({ "n": n, "dim_p_perp": pp.len(), "ideal": ideal, "nilpotency_step": step, "orthocomplement": ortho }),
    )
}

/// Within sl(3): H = span{E12, E23, E31}, t² the diagonal traceless matrices.
pub fn sl3_distribution_check() -> CheckReport {
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zeros(3, 3);
        m[(i, j)] = scalar::one();
        m
    };
    let h = [e(0, 1), e(1, 2), e(2, 0)];
    let ht: Vec<Matrix> = h.iter().map(|m| m.transpose()).collect();
    let torus = [e(0, 0).sub(&e(1, 1)), e(1, 1).sub(&e(2, 2))];
    let flat = |ms: &[Matrix]| -> Vec<Vec<Scalar>> { ms.iter().map(|m| m.flatten()).collect() };
    let brackets = |a: &[Matrix], b: &[Matrix]| -> Vec<Matrix> {
        a.iter().flat_map(|x| b.iter().map(move |y| x.commutator(y))).collect()
    };
    let hv = flat(&h);
    let htv = flat(&ht);
    let ht_brackets = brackets(&h, &torus);
    let torus_ok = ht_brackets.iter().all(|m| in_span(&hv, &m.flatten(), 9));
    let hh = flat(&brackets(&h, &h));
    let hh_ok = same_span(&hh, &htv, 9);
    let tt = flat(&brackets(&ht, &ht));
    let tt_ok = same_span(&tt, &hv, 9);
    CheckReport::new(
        "exactalg.sl3_distribution",
        "[H, t2] ⊂ H, [H,H] = H^t and [H^t,H^t] = H inside sl(3)",
        torus_ok && hh_ok && tt_ok,
        json!({ "torus_preserves_H": torus_ok, "HH_eq_Ht": hh_ok, "dim_HH": span_dim(&hh, 9), "HtHt_eq_H": tt_ok }),
    )
}

/// Random element with coordinates in [-5, 5] / 1..3.
pub fn random_element<R: rand::Rng + ?Sized>(g: &GradedBasis, rng: &mut R) -> LieElement {
    let c: Vec<Scalar> = (0..g.dim()).map(|_| scalar::random_scalar(rng, 5, 3)).collect();
    g.from_coords(&c)
}

/// Jacobi identity for random triples, through the structure constants, which must
/// also agree with the matrix commutator.
pub fn jacobi_check<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, trials: usize) -> CheckReport {
    let g = GradedBasis::new(n);
    let mut jacobi_bad = 0;
    let mut route_bad = 0;
    for _ in 0..trials {
        let xs: Vec<Vec<Scalar>> = (0..3).map(|_| g.coords(&random_element(&g, rng))).collect();
        let br = |a: &[Scalar], b: &[Scalar]| g.bracket_coords(a, b);
        let t1 = br(&xs[0], &br(&xs[1], &xs[2]));
        let t2 = br(&xs[1], &br(&xs[2], &xs[0]));
        let t3 = br(&xs[2], &br(&xs[0], &xs[1]));
        if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(a + b + c).is_zero()) {
            jacobi_bad += 1;
        }
        let m = g.from_coords(&xs[0]).bracket(&g.from_coords(&xs[1])).expect("same rank");
        if g.coords(&m) != br(&xs[0], &xs[1]) {
            route_bad += 1;
        }
    }
    CheckReport::new(
        format!("exactalg.jacobi.n{n}"),
        "the bracket of so(n+1,n) satisfies the Jacobi identity",
        jacobi_bad == 0 && route_bad == 0,
        json!({ "trials": trials, "jacobi_failures": jacobi_bad, "matrix_route_mismatches": route_bad }),
    )
}

/// [g_a, g_b] ⊂ g_{a+b} for random homogeneous elements, and ad(ε0) acts by the grade.
pub fn grade_additivity_check<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, trials: usize) -> CheckReport {
    let g = GradedBasis::new(n);
    let e0 = g.grading_element();
    let homogeneous = |rng: &mut R, j: i32| -> LieElement {
        let mut c = vec![Scalar::zero(); g.dim()];
        for i in g.grade_range(j) {
            c[i] = scalar::random_scalar(rng, 5, 3);
        }
        g.from_coords(&c)
    };
    let mut bad = 0;
    for _ in 0..trials {
        let a = rng.gen_range(-2..=2);
        let b = rng.gen_range(-2..=2);
        let (x, y) = (homogeneous(rng, a), homogeneous(rng, b));
        let z = x.bracket(&y).expect("same rank");
        let in_grade = if (-2..=2).contains(&(a + b)) { z.grades().iter().all(|&k| k == a + b) } else { z.is_zero() };
        let eig = e0.bracket(&z).expect("same rank") == z.scale(&scalar::int((a + b) as i64));
        if !(in_grade && eig) {
            bad += 1;
        }
    }
    CheckReport::new(
        format!("exactalg.grade_additivity.n{n}"),
        "the grading is additive: [g_a, g_b] lies in g_(a+b)",
        bad == 0,
        json!({ "trials": trials, "failures": bad }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grading_element_eigenvalues() {
        for n in 2..=5 {
            let g = GradedBasis::new(n);
            let e0 = g.grading_element();
            for i in 0..g.dim() {
                let x = g.element(i);
                let br = e0.bracket(&x).unwrap();
                assert_eq!(br, x.scale(&scalar::int(g.grade_of(i) as i64)));
            }
        }
    }

    #[test]
    fn structure_constants_match_matrices() {
        let g = GradedBasis::new(3);
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let br = g.element(i).bracket(&g.element(j)).unwrap();
                let mut c = vec![Scalar::zero(); g.dim()];
                for (k, x) in g.bracket_basis(i, j) {
                    c[*k] = x.clone();
                }
                assert_eq!(g.from_coords(&c), br);
            }
        }
    }

    #[test]
    fn form_invariance_and_pairing() {
        let g = GradedBasis::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (x, y, z) = (random_element(&g, &mut rng), random_element(&g, &mut rng), random_element(&g, &mut rng));
            let lhs = invariant_form(&z.bracket(&x).unwrap(), &y).unwrap() + invariant_form(&x, &z.bracket(&y).unwrap()).unwrap();
            assert!(lhs.is_zero());
        }
        let x = g.element(g.index_of_v(0));
        assert!(invariant_form(&x, &x).unwrap().is_zero());
        assert!(!g.form_matrix().det().is_zero());
    }

    #[test]
    fn nilradical_and_sl3() {
        for n in 2..=4 {
            let r = nilradical_check(n);
            assert!(r.passed(), "{:?}", r);
        }
        assert_eq!(nilradical_check(2).payload["dim_p_perp"], 3);
        assert!(sl3_distribution_check().passed());
    }

    #[test]
    fn rank_mismatch() {
        assert!(LieElement::zero(2).bracket(&LieElement::zero(3)).is_err());
    }
}
