//! Exact integer and rational arithmetic.
//!
//! [`Rational`] is always kept in lowest terms with a positive denominator,
//! so structural equality coincides with numeric equality. Floating point
//! conversion exists only for the numeric single-sum evaluator.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

pub use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Self> {
        Rational::one().checked_div(self)
    }

    /// `self^exp` for any integer exponent; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = i32::try_from(exp)
            .map_err(|_| Error::OutOfRange(format!("exponent {exp} too large")))?;
        Ok(Rational(num_traits::Pow::pow(&self.0, e)))
    }

    /// Nearest binary64 value. Magnitudes that round to infinity are errors.
    pub fn to_f64(&self) -> Result<f64> {
        let v = self.0.to_f64().unwrap_or(f64::NAN);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::FloatOverflow(self.to_string()))
        }
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

/// Shorthand for small literals in tests and formulas. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<&BigInt> for Rational {
    fn from(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `p` or `p/q` with optional leading sign on `p`. Decimal and
/// exponent notation are rejected.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(s.to_string());
        let parse_int = |t: &str, allow_sign: bool| -> Result<BigInt> {
            let digits = match t.strip_prefix('-').or_else(|| t.strip_prefix('+')) {
                Some(rest) if allow_sign => rest,
                Some(_) => return Err(bad()),
                None => t,
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let s_trim = s.trim();
        match s_trim.split_once('/') {
            None => Ok(Rational::from_integer(parse_int(s_trim, true)?)),
            Some((p, q)) => {
                let num = parse_int(p.trim(), true)?;
                let den = parse_int(q.trim(), false)?;
                Rational::new(num, den)
            }
        }
    }
}

macro_rules! forward_binop {
    ($Tr:ident, $method:ident, $AssignTr:ident, $assign:ident) => {
        impl $Tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $Tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $Tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $Tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $AssignTr<&Rational> for Rational {
            fn $assign(&mut self, rhs: &Rational) {
                self.0.$assign(&rhs.0);
            }
        }
        impl $AssignTr<Rational> for Rational {
            fn $assign(&mut self, rhs: Rational) {
                self.0.$assign(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_normalizes() {
        let r = Rational::new(6, 4).unwrap();
        assert_eq!(
            (r.numer().clone(), r.denom().clone()),
            (BigInt::from(3), BigInt::from(2))
        );
        let r = Rational::new(-2, -4).unwrap();
        assert_eq!(r, rat(1, 2));
        assert!(!r.is_negative());
        let z = Rational::new(0, 7).unwrap();
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(z, Rational::zero());
        let neg = Rational::new(3, -9).unwrap();
        assert_eq!(neg.numer(), &BigInt::from(-1));
        assert_eq!(neg.denom(), &BigInt::from(3));
    }

    #[test]
    fn make_rejects_zero_denominator() {
        let err = Rational::new(1, 0).unwrap_err();
        assert_eq!(err.to_string(), "division by zero");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
        assert_eq!(rat(3, 2) * rat(2, 3), rat(1, 1));
        assert_eq!(rat(1, 2) - rat(1, 3), rat(1, 6));
        assert_eq!(rat(1, 2).checked_div(&rat(1, 4)).unwrap(), rat(2, 1));
        assert_eq!(
            rat(1, 3).checked_div(&Rational::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn powers() {
        assert_eq!(rat(2, 1).pow(-3).unwrap(), rat(1, 8));
        assert_eq!(rat(-2, 3).pow(3).unwrap(), rat(-8, 27));
        assert_eq!(rat(5, 7).pow(0).unwrap(), Rational::one());
        assert!(Rational::zero().pow(-1).is_err());
    }

    #[test]
    fn float_conversion() {
        assert_eq!(rat(1, 2).to_f64().unwrap(), 0.5);
        assert_eq!(rat(1, 3).to_f64().unwrap(), 1.0 / 3.0);
        let huge = Rational::from_integer(num_traits::pow(BigInt::from(10), 400));
        assert!(matches!(huge.to_f64(), Err(Error::FloatOverflow(_))));
        assert!((-huge).to_f64().is_err());
    }

    #[test]
    fn parse_strict() {
        assert_eq!("1/4".parse::<Rational>().unwrap(), rat(1, 4));
        assert_eq!("-1/2".parse::<Rational>().unwrap(), rat(-1, 2));
        assert_eq!("7".parse::<Rational>().unwrap(), rat(7, 1));
        assert_eq!("6/-4".parse::<Rational>().ok(), None);
        for bad in ["0.5", "1e3", "", "1/", "/2", "a/b", "1/0", "--1", "1/2/3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn display() {
        assert_eq!(rat(-3, 6).to_string(), "-1/2");
        assert_eq!(rat(4, 2).to_string(), "2");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip().unwrap(), Rational::one());
            }
        }

        #[test]
        fn scaling_invariance(p in -500i64..500, q in 1i64..500, k in -50i64..50) {
            prop_assume!(k != 0);
            prop_assert_eq!(Rational::new(k * p, k * q).unwrap(), Rational::new(p, q).unwrap());
        }

        #[test]
        fn canonical_form(p in -500i64..500, q in -500i64..500) {
            prop_assume!(q != 0);
            let r = Rational::new(p, q).unwrap();
            prop_assert!(r.denom() > &BigInt::from(0));
            prop_assert!(num_integer::Integer::gcd(r.numer(), r.denom()) == BigInt::from(1) || r.is_zero());
        }
    }
}
