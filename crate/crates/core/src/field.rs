//! Scalar fields the algebra is generic over.
//!
//! Everything in this crate only needs exact field arithmetic on a field that
//! contains the Gaussian rationals `Q(i)`. The default instance is
//! [`Complex<BigRational>`](crate::Scalar); a fixed-width instance backed by
//! `i128` ratios is provided for small, fast runs where overflow is not a concern.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, Zero};

/// An exact field containing `Q(i)`.
pub trait Field: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    /// The imaginary unit.
    fn imag_unit() -> Self;

    /// The rational number `num / den` embedded in the field.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Real and imaginary parts as arbitrary precision rationals.
    fn re_im(&self) -> (BigRational, BigRational);

    /// Inverse of [`Field::re_im`]; `None` when the value does not fit.
    fn try_from_re_im(re: &BigRational, im: &BigRational) -> Option<Self>;

    fn mul_i(&self) -> Self {
        self.clone() * Self::imag_unit()
    }
}

impl<I> Field for Complex<Ratio<I>>
where
    I: Integer + Signed + Clone + Debug + Send + Sync + 'static + From<i64> + TryFrom<BigInt>,
    BigInt: From<I>,
{
    fn imag_unit() -> Self {
        Complex::new(Ratio::zero(), Ratio::one())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(Ratio::new(I::from(num), I::from(den)), Ratio::zero())
    }

    fn re_im(&self) -> (BigRational, BigRational) {
        (to_big(&self.re), to_big(&self.im))
    }

    fn try_from_re_im(re: &BigRational, im: &BigRational) -> Option<Self> {
        Some(Complex::new(from_big(re)?, from_big(im)?))
    }
}

fn to_big<I>(r: &Ratio<I>) -> BigRational
where
    I: Integer + Clone,
    BigInt: From<I>,
{
    BigRational::new(BigInt::from(r.numer().clone()), BigInt::from(r.denom().clone()))
}

fn from_big<I>(r: &BigRational) -> Option<Ratio<I>>
where
    I: Integer + Clone + TryFrom<BigInt>,
{
    let n = I::try_from(r.numer().clone()).ok()?;
    let d = I::try_from(r.denom().clone()).ok()?;
    Some(Ratio::new(n, d))
}

/// Formats a rational as `p/q` with `q > 0` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Human readable rendering such as `1/2`, `-i`, `3/4 - 1/2 i`.
pub fn display_scalar<T: Field>(x: &T) -> String {
    let (re, im) = x.re_im();
    let fmt = |r: &BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format_rational(r)
        }
    };
    match (re.is_zero(), im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => fmt(&re),
        (true, false) => imag_part(&im, fmt),
        (false, false) => {
            let sign = if im.is_negative() { "-" } else { "+" };
            format!("{} {} {}", fmt(&re), sign, imag_part(&im.abs(), fmt))
        }
    }
}

fn imag_part(im: &BigRational, fmt: impl Fn(&BigRational) -> String) -> String {
    if im.is_one() {
        "i".into()
    } else if (-im).is_one() {
        "-i".into()
    } else {
        format!("{} i", fmt(im))
    }
}
