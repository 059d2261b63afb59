use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Zero};

/// Coefficient ring used by the jet algebra.
///
/// Exact computations use [`BigRational`] or [`ComplexRational`]; the
/// floating types work too but lose the exactness guarantees.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

/// Gaussian rationals `a + b i` with `a, b` in `Q`.
pub type ComplexRational = Complex<BigRational>;

/// The image of a nonnegative integer in the ring `T`.
pub fn from_u64<T: Scalar>(mut n: u64) -> T {
    // double-and-add so large factorials stay cheap
    let mut acc = T::zero();
    let mut pow = T::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + pow.clone();
        }
        pow = pow.clone() + pow;
        n >>= 1;
    }
    acc
}

pub fn factorial<T: Scalar>(n: u64) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * from_u64::<T>(i))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn crational(re: BigRational, im: BigRational) -> ComplexRational {
    Complex::new(re, im)
}

/// Squared modulus of a Gaussian rational.
pub fn norm_sqr(z: &ComplexRational) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: fall back to a scaled division
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub(crate) fn is_zero<T: Scalar>(x: &T) -> bool {
    x.is_zero()
}

pub(crate) fn pow<T: Scalar>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// Parses `"a"`, `"-a/b"` (integers) into an exact rational.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let t = s.trim();
    let bad = || crate::Error::Parse(format!("malformed rational {:?}", s));
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(crate::Error::Parse(format!("zero denominator in {:?}", s)));
    }
    Ok(BigRational::new(num, den))
}
