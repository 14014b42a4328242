use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Ground field for every computation in the crate.
///
/// `BigRational` keeps the denominator positive and the fraction reduced
/// after every operation, so equality is structural.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn half() -> Scalar {
    frac(1, 2)
}

/// Small random rational: numerator in [-range, range], denominator in [1, den].
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, range: i64, den: i64) -> Scalar {
    let n = rng.gen_range(-range..=range);
    let d = rng.gen_range(1..=den);
    frac(n, d)
}

/// Random nonzero rational.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, range: i64, den: i64) -> Scalar {
    loop {
        let s = random_scalar(rng, range, den);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn sign_of(s: &Scalar) -> i32 {
    if s.is_zero() {
        0
    } else if s.is_positive() {
        1
    } else {
        -1
    }
}

/// Compact text form: integers print bare, fractions as `p/q`.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized() {
        let s = frac(6, -4);
        assert_eq!(s.numer(), &BigInt::from(-3));
        assert_eq!(s.denom(), &BigInt::from(2));
        assert_eq!(fmt_scalar(&s), "-3/2");
        assert_eq!(fmt_scalar(&int(5)), "5");
    }
}
