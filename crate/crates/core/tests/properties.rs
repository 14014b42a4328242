use cartankit::exactalg::scalar::{frac, int};
use cartankit::exactalg::GradedBasis;
use cartankit::poly::Poly;
use proptest::prelude::*;

const NV: usize = 3;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, NV), -4i64..=4, 1i64..=3), 0..5).prop_map(|terms| {
        let mut p = Poly::zero(NV);
        for (exp, n, d) in terms {
            p.add_term(exp, frac(n, d));
        }
        p
    })
}

fn point() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, NV)
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_distributive(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn derivative_obeys_leibniz(a in poly(), b in poly(), i in 0..NV) {
        let lhs = a.mul(&b).derivative(i);
        let rhs = a.derivative(i).mul(&b).add(&a.mul(&b.derivative(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), pt in point()) {
        let x: Vec<_> = pt.into_iter().map(int).collect();
        prop_assert_eq!(a.mul(&b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!(a.sub(&b).eval(&x), a.eval(&x) - b.eval(&x));
    }

    #[test]
    fn bracket_is_antisymmetric(n in 2usize..=4, seed in prop::collection::vec(-3i64..=3, 80)) {
        let g = GradedBasis::new(n);
        let x: Vec<_> = (0..g.dim()).map(|i| int(seed[i % 40])).collect();
        let y: Vec<_> = (0..g.dim()).map(|i| int(seed[40 + i % 40])).collect();
        let xy = g.bracket_coords(&x, &y);
        let yx = g.bracket_coords(&y, &x);
        prop_assert!(xy.iter().zip(&yx).all(|(a, b)| (a + b) == int(0)));
    }
}
