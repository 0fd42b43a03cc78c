//! Arbitrary-precision binary floats and complex numbers.
//!
//! Thin layer over `dashu_float::FBig` in base 2 with round-half-to-even.
//! Every value we construct carries an explicit precision: dashu treats
//! precision 0 as "unlimited" and its division then rounds to the length of
//! the significand, which is never what we want.  All constructors here take
//! the target precision in bits.

use dashu_base::Sign;
use dashu_float::ops::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Binary float with explicit precision, round-half-even.
pub type F = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;

pub fn ibig_from_bigint(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = UBig::from_le_bytes(&bytes);
    let s = if sign == num_bigint::Sign::Minus {
        Sign::Negative
    } else {
        Sign::Positive
    };
    IBig::from_parts(s, mag)
}

pub fn bigint_from_ibig(n: &IBig) -> BigInt {
    let (sign, mag) = n.clone().into_parts();
    let bytes = mag.to_le_bytes();
    let s = if sign == Sign::Negative {
        num_bigint::Sign::Minus
    } else {
        num_bigint::Sign::Plus
    };
    BigInt::from_bytes_le(s, &bytes)
}

pub fn f_from_bigint(n: &BigInt, prec: u32) -> F {
    F::from(ibig_from_bigint(n)).with_precision(prec as usize).value()
}

pub fn f_from_i64(n: i64, prec: u32) -> F {
    F::from(n).with_precision(prec as usize).value()
}

pub fn f_from_rat(q: &BigRational, prec: u32) -> F {
    f_from_bigint(q.numer(), prec) / f_from_bigint(q.denom(), prec)
}

/// Exact rational value of a dyadic float (significand · 2^exponent).
pub fn rat_from_f(x: &F) -> BigRational {
    let repr = x.repr();
    let m = bigint_from_ibig(repr.significand());
    let e = repr.exponent();
    if e >= 0 {
        BigRational::from(m << (e as usize))
    } else {
        BigRational::new(m, BigInt::from(1) << ((-e) as usize))
    }
}

/// 2^k as an exact dyadic float carrying precision `prec`.
pub fn pow2(k: i64, prec: u32) -> F {
    F::from_parts(IBig::from(1), k as isize)
        .with_precision(prec as usize)
        .value()
}

/// Round to the nearest integer (half away from zero).
pub fn round_f(x: &F) -> BigInt {
    let half = F::from_parts(IBig::from(1), -1);
    let shifted = if x.repr().sign() == Sign::Negative {
        x.clone() - half
    } else {
        x.clone() + half
    };
    let t = shifted.trunc();
    bigint_from_ibig(&t.to_int().value())
}

/// Complex number with dyadic float parts.
#[derive(Clone, PartialEq)]
pub struct CF {
    pub re: F,
    pub im: F,
}

impl std::fmt::Debug for CF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} + {:?}i", self.re.to_f64().value(), self.im.to_f64().value())
    }
}

impl CF {
    pub fn new(re: F, im: F) -> Self {
        CF { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        CF::new(f_from_i64(0, prec), f_from_i64(0, prec))
    }

    pub fn one(prec: u32) -> Self {
        CF::new(f_from_i64(1, prec), f_from_i64(0, prec))
    }

    pub fn from_f64s(re: f64, im: f64, prec: u32) -> Self {
        CF::new(
            F::try_from(re).expect("finite").with_precision(prec as usize).value(),
            F::try_from(im).expect("finite").with_precision(prec as usize).value(),
        )
    }

    pub fn from_rats(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        CF::new(f_from_rat(re, prec), f_from_rat(im, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision()) as u32
    }

    /// Re-round both parts to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        CF::new(
            self.re.clone().with_precision(prec as usize).value(),
            self.im.clone().with_precision(prec as usize).value(),
        )
    }

    pub fn conj(&self) -> Self {
        CF::new(self.re.clone(), -self.im.clone())
    }

    pub fn abs2(&self) -> F {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> F {
        self.abs2().sqrt()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.repr().significand().is_zero() && self.im.repr().significand().is_zero()
    }

    pub fn recip(&self) -> Self {
        let d = self.abs2();
        CF::new(self.re.clone() / d.clone(), -self.im.clone() / d)
    }

    pub fn mul_f(&self, s: &F) -> Self {
        CF::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    /// Max-norm distance to another complex number.
    pub fn dist(&self, other: &CF) -> F {
        let dr = (self.re.clone() - other.re.clone()).abs();
        let di = (self.im.clone() - other.im.clone()).abs();
        if dr >= di {
            dr
        } else {
            di
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let prec = self.precision().max(64);
        let mut acc = CF::one(prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }
}

impl std::ops::Add for &CF {
    type Output = CF;
    fn add(self, rhs: &CF) -> CF {
        CF::new(self.re.clone() + rhs.re.clone(), self.im.clone() + rhs.im.clone())
    }
}

impl std::ops::Sub for &CF {
    type Output = CF;
    fn sub(self, rhs: &CF) -> CF {
        CF::new(self.re.clone() - rhs.re.clone(), self.im.clone() - rhs.im.clone())
    }
}

impl std::ops::Mul for &CF {
    type Output = CF;
    fn mul(self, rhs: &CF) -> CF {
        CF::new(
            self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone(),
        )
    }
}

impl std::ops::Div for &CF {
    type Output = CF;
    fn div(self, rhs: &CF) -> CF {
        let d = rhs.abs2();
        let num = self * &rhs.conj();
        CF::new(num.re / d.clone(), num.im / d)
    }
}

impl std::ops::Neg for &CF {
    type Output = CF;
    fn neg(self) -> CF {
        CF::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for CF {
            type Output = CF;
            fn $method(self, rhs: CF) -> CF {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::ops::Neg for CF {
    type Output = CF;
    fn neg(self) -> CF {
        -&self
    }
}

impl num_traits::Zero for CF {
    fn zero() -> Self {
        // Exact zero; dashu propagates the other operand's precision.
        CF::new(F::ZERO, F::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

impl num_traits::One for CF {
    fn one() -> Self {
        CF::new(F::ONE, F::ZERO)
    }
}

/// Parse a decimal string (optionally signed, with fractional part and
/// exponent) into a binary float at `prec` bits.
pub fn f_parse_decimal(s: &str, prec: u32) -> Option<F> {
    let s = s.trim();
    type D = FBig<HalfEven, 10>;
    // parse with enough decimal digits to cover the binary precision
    let dec_digits = (prec as f64 / 3.32).ceil() as usize + 8;
    let d: D = s.parse().ok()?;
    let d = d.with_precision(dec_digits).value();
    Some(d.with_base::<2>().value().with_precision(prec as usize).value())
}

/// Render a float as a decimal string with enough digits to round-trip at its
/// own precision.
pub fn f_to_decimal_string(x: &F) -> String {
    let digits = ((x.precision().max(64) as f64) / 3.32).ceil() as usize + 2;
    let d = x.clone().with_base_and_precision::<10>(digits).value();
    d.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn rational_roundtrip_through_float_is_exact_for_dyadics() {
        let q = BigRational::new(BigInt::from(-13), BigInt::from(32));
        let f = f_from_rat(&q, 128);
        assert_eq!(rat_from_f(&f), q);
    }

    #[test]
    fn sqrt2_matches_interval_bisection_oracle() {
        // Oracle: bisection on x^2 - 2 over exact rationals.
        let mut lo = BigRational::from(BigInt::from(1));
        let mut hi = BigRational::from(BigInt::from(2));
        for _ in 0..200 {
            let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
            if &mid * &mid > BigRational::from(BigInt::from(2)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let s = f_from_i64(2, 256).sqrt();
        let v = rat_from_f(&s);
        assert!(&v >= &lo && &v <= &hi, "sqrt(2) outside bisection interval");
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let a = CF::from_f64s(1.25, -0.5, 128);
        let b = CF::from_f64s(-3.0, 7.5, 128);
        let q = &(&a * &b) / &b;
        assert!(q.dist(&a) < pow2(-100, 128));
    }

    #[test]
    fn decimal_parse_of_half_is_exact() {
        let f = f_parse_decimal("0.5", 128).unwrap();
        assert_eq!(rat_from_f(&f), BigRational::from_str("1/2").unwrap());
    }

    #[test]
    fn round_to_nearest_integer() {
        assert_eq!(round_f(&f_parse_decimal("2.5", 64).unwrap()), BigInt::from(3));
        assert_eq!(round_f(&f_parse_decimal("-2.5", 64).unwrap()), BigInt::from(-3));
        assert_eq!(round_f(&f_parse_decimal("1.49", 64).unwrap()), BigInt::from(1));
        assert_eq!(round_f(&f_parse_decimal("-0.51", 64).unwrap()), BigInt::from(-1));
    }
}
