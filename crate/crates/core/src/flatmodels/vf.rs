//! Polynomial vector fields on R^N.

use crate::poly::Poly;

/// Vector field Σ coeffs[i] ∂/∂t_i with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVF {
    pub coeffs: Vec<Poly>,
}

impl PolyVF {
    pub fn zero(nvars: usize) -> Self {
        PolyVF { coeffs: vec![Poly::zero(nvars); nvars] }
    }

    /// The coordinate field ∂/∂t_i.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars);
        v.coeffs[i] = Poly::one(nvars);
        v
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn add(&self, o: &PolyVF) -> PolyVF {
        PolyVF { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &PolyVF) -> PolyVF {
        PolyVF { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> PolyVF {
        PolyVF { coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect() }
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(f.nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                out = out.add(&c.mul(&d));
            }
        }
        out
    }

    pub fn eval(&self, point: &[crate::exactalg::Scalar]) -> Vec<crate::exactalg::Scalar> {
        self.coeffs.iter().map(|c| c.eval(point)).collect()
    }
}

/// Lie bracket [X,Y]^k = Σ_j (X^j ∂_j Y^k − Y^j ∂_j X^k).
pub fn vf_bracket(x: &PolyVF, y: &PolyVF) -> PolyVF {
    assert_eq!(x.nvars(), y.nvars(), "vector fields on different spaces");
    PolyVF { coeffs: (0..x.nvars()).map(|k| x.apply(&y.coeffs[k]).sub(&y.apply(&x.coeffs[k]))).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_coordinate_fields() {
        // [∂_0, t_0 ∂_1] = ∂_1
        let d0 = PolyVF::coordinate(2, 0);
        let x = PolyVF::coordinate(2, 1).mul_poly(&Poly::var(2, 0));
        assert_eq!(vf_bracket(&d0, &x), PolyVF::coordinate(2, 1));
        assert_eq!(vf_bracket(&x, &d0), PolyVF::coordinate(2, 1).mul_poly(&Poly::constant(2, -crate::exactalg::scalar::one())));
    }
}
