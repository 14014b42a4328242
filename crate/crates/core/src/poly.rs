//! Sparse multivariate polynomials and rational functions over Q.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exactalg::scalar::{fmt_scalar, int};
use crate::exactalg::Scalar;

/// Polynomial in `nvars` variables, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Scalar::one());
        p
    }

    /// c · x_i^k
    pub fn monomial(nvars: usize, i: usize, k: u32, c: Scalar) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * int(e[i] as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let s = if mon.is_empty() {
                fmt_scalar(c)
            } else if c.is_one() {
                mon.join("*")
            } else if *c == -Scalar::one() {
                format!("-{}", mon.join("*"))
            } else {
                format!("{}*{}", fmt_scalar(c), mon.join("*"))
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("t{}", i + 1)).collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Quotient of polynomials, kept unreduced except for trivial cases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars;
        RatFunc { num: p, den: Poly::one(n) }
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.tidy();
        r
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Poly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    fn tidy(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.nvars);
            return;
        }
        if self.num == self.den {
            self.num = Poly::one(self.num.nvars);
            self.den = Poly::one(self.num.nvars);
            return;
        }
        if self.den.is_constant() {
            let c = self.den.constant_term();
            self.num = self.num.scale(&(Scalar::one() / c));
            self.den = Poly::one(self.num.nvars);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.num.nvars);
        }
        if self.den == o.num {
            return RatFunc::new(self.num.clone(), o.den.clone());
        }
        if o.den == self.num {
            return RatFunc::new(o.num.clone(), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn scale(&self, s: &Scalar) -> RatFunc {
        RatFunc::new(self.num.scale(s), self.den.clone())
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }

    /// ∂/∂x_i by the quotient rule.
    pub fn derivative(&self, i: usize) -> RatFunc {
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        RatFunc::new(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    /// Value at a point, or None where the denominator vanishes.
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Exact zero test: the numerator vanishes identically.
    pub fn is_identically_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.den.is_constant() {
            self.num.display(names)
        } else {
            format!("({})/({})", self.num.display(names), self.den.display(names))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::frac;

    #[test]
    fn ring_ops() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.derivative(0), x.scale(&int(2)).add(&y.scale(&int(2))));
        assert_eq!(p.eval(&[int(1), int(2)]), int(9));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn ratfunc_ops() {
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        let r = RatFunc::new(one.clone(), one.add(&x));
        // d/dx 1/(1+x) = -1/(1+x)^2
        let d = r.derivative(0);
        assert_eq!(d.eval(&[int(1)]), Some(frac(-1, 4)));
        assert!(r.mul(&RatFunc::from_poly(one.add(&x))).sub(&RatFunc::constant(1, int(1))).is_identically_zero());
        assert_eq!(r.eval(&[int(-1)]), None);
    }
}
