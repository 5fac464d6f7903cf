//! Exact rationals over arbitrary-precision integers.
//!
//! `Rat` wraps `num_rational::BigRational`, which keeps every value in lowest
//! terms with a positive denominator, so structural equality is numeric
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num.into(), den))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    /// The value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp_zero()
    }

    pub fn recip(&self) -> Option<Rat> {
        (!self.is_zero()).then(|| Rat(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Rat {
        Rat(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Rat> {
        BigRational::from_float(x).map(Rat)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n)
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

impl From<&BigInt> for Rat {
    fn from(n: &BigInt) -> Self {
        Rat::from_int(n.clone())
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $Trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $Trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $Trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `n`, `-n` and `n/d`, surrounding whitespace ignored.
    fn from_str(s: &str) -> Result<Rat> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg}: {s:?}"),
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(Rat::new(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `floor(n^(1/d))` for `n >= 0`.
pub fn nth_root_floor(n: &BigInt, d: u32) -> BigInt {
    assert!(!n.is_negative(), "root of a negative number");
    assert!(d >= 1);
    n.nth_root(d)
}

/// `ceil(n^(1/d))` for `n >= 0`.
pub fn nth_root_ceil(n: &BigInt, d: u32) -> BigInt {
    let r = nth_root_floor(n, d);
    if &num_traits::pow(r.clone(), d as usize) == n {
        r
    } else {
        r + 1
    }
}

/// Exact `d`-th root of `n` when `n` is a perfect `d`-th power.
pub fn exact_nth_root(n: &BigInt, d: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = nth_root_floor(n, d);
    (&num_traits::pow(r.clone(), d as usize) == n).then_some(r)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_nth_root(n, 2).is_some()
}

/// Rational enclosure bound of `x^(1/d)` for `x >= 0`, rounded to a grid of
/// `2^-bits / den(x)`. Exact whenever the root is rational at that grid.
fn root_rounded(x: &Rat, d: u32, bits: u32, up: bool) -> Rat {
    assert!(!x.is_negative(), "root of a negative rational");
    let scale = BigInt::one() << bits;
    let num = x.numer();
    let den = x.denom();
    // (N/D)^(1/d) = (N * D^(d-1) * S^d)^(1/d) / (D * S)
    let radicand =
        num * num_traits::pow(den.clone(), (d - 1) as usize) * num_traits::pow(scale.clone(), d as usize);
    let r = if up {
        nth_root_ceil(&radicand, d)
    } else {
        nth_root_floor(&radicand, d)
    };
    Rat::new(r, den * scale)
}

/// Smallest grid rational `>= x^(1/d)`.
pub fn root_upper(x: &Rat, d: u32, bits: u32) -> Rat {
    root_rounded(x, d, bits, true)
}

/// Largest grid rational `<= x^(1/d)`.
pub fn root_lower(x: &Rat, d: u32, bits: u32) -> Rat {
    root_rounded(x, d, bits, false)
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_reduction() {
        let x = Rat::new(4, -6);
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(x, r("-2/3"));
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r(" -10 / 5 ").to_string(), "-2");
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(r("-7/2").floor(), BigInt::from(-4));
        assert_eq!(r("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(r("7/2").floor(), BigInt::from(3));
    }

    #[test]
    fn integer_roots() {
        assert_eq!(nth_root_floor(&BigInt::from(63), 3), BigInt::from(3));
        assert_eq!(nth_root_ceil(&BigInt::from(63), 3), BigInt::from(4));
        assert_eq!(nth_root_ceil(&BigInt::from(64), 3), BigInt::from(4));
        assert_eq!(exact_nth_root(&BigInt::from(243), 5), Some(BigInt::from(3)));
        assert_eq!(exact_nth_root(&BigInt::from(242), 5), None);
        assert!(is_perfect_square(&BigInt::from(0)));
        assert!(!is_perfect_square(&BigInt::from(8)));
    }

    #[test]
    fn rational_root_enclosure() {
        // exact cases collapse to the exact value
        assert_eq!(root_upper(&r("100"), 2, 20), r("10"));
        assert_eq!(root_lower(&r("64"), 3, 20), r("4"));
        assert_eq!(root_upper(&r("9/4"), 2, 20), r("3/2"));
        let two = r("2");
        let hi = root_upper(&two, 2, 30);
        let lo = root_lower(&two, 2, 30);
        assert!(&hi * &hi > two && &lo * &lo < two);
        assert!(&hi - &lo <= Rat::new(1, 1u64 << 30));
    }

    #[test]
    fn serde_as_string() {
        let x = r("-3/7");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"-3/7\"");
        let back: Rat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
