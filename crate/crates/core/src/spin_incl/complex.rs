use crate::exactalg::{Matrix, Scalar};

/// Matrix over Q(i), stored as real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    pub re: Matrix,
    pub im: Matrix,
}

impl CMatrix {
    pub fn new(re: Matrix, im: Matrix) -> Self {
        assert_eq!((re.rows(), re.cols()), (im.rows(), im.cols()));
        CMatrix { re, im }
    }

    pub fn real(re: Matrix) -> Self {
        let im = Matrix::zeros(re.rows(), re.cols());
        CMatrix { re, im }
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        CMatrix {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        CMatrix { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn commutator(&self, o: &CMatrix) -> CMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix { re: self.re.transpose(), im: self.im.transpose().neg() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Action on C^n ≅ R^2n (real parts first): [[P, -Q], [Q, P]].
    pub fn realify(&self) -> Matrix {
        let n = self.rows();
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            match (bi, bj) {
                (0, 0) | (1, 1) => self.re[(ri, rj)].clone(),
                (0, 1) => -self.im[(ri, rj)].clone(),
                _ => self.im[(ri, rj)].clone(),
            }
        })
    }

    pub fn mul_vec(&self, re: &[Scalar], im: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let a = self.re.mul_vec(re);
        let b = self.im.mul_vec(im);
        let c = self.re.mul_vec(im);
        let d = self.im.mul_vec(re);
        (a.iter().zip(&b).map(|(x, y)| x - y).collect(), c.iter().zip(&d).map(|(x, y)| x + y).collect())
    }
}
