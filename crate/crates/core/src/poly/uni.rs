use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::{format_terms, parse_terms};
use super::rat::{gcd_all, lcm_all, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals; `coeffs[i]` multiplies `t^i`.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

/// `p(t) = (1/b) * sum a_i t^i` with integer `a_i`, `b > 0` and
/// `gcd(a_0, ..., a_d, b) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveForm {
    pub numerator_coeffs: Vec<BigInt>,
    pub denom: BigInt,
}

impl PrimitiveForm {
    pub fn degree(&self) -> usize {
        self.numerator_coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.numerator_coeffs.last().expect("primitive form is never empty")
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.numerator_coeffs
                .iter()
                .map(|a| Rat::new(a.clone(), self.denom.clone()))
                .collect(),
        )
    }
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn var() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn monomial(c: Rat, deg: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division over Q. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (UniPoly::zero(), UniPoly::zero());
        };
        if sd < dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let sub = &c * dc;
                rem[k + j] -= &sub;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.recip().unwrap()),
        }
    }

    /// Monic gcd over Q; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, monic; zero maps to zero.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        self.exact_div(&g).monic()
    }

    pub fn primitive_form(&self) -> Result<PrimitiveForm> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let l = lcm_all(self.coeffs.iter().map(Rat::denom));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = gcd_all(ints.iter().chain(std::iter::once(&l)));
        Ok(PrimitiveForm {
            numerator_coeffs: ints.iter().map(|a| a / &g).collect(),
            denom: &l / &g,
        })
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }

    /// Integer multiple with coprime integer coefficients and positive
    /// leading coefficient (the primitive part over Z).
    pub fn integer_primitive(&self) -> Vec<BigInt> {
        let Ok(pf) = self.primitive_form() else {
            return Vec::new();
        };
        let content = gcd_all(&pf.numerator_coeffs);
        let sign = if pf.leading().is_negative() { -BigInt::one() } else { BigInt::one() };
        pf.numerator_coeffs
            .iter()
            .map(|a| a.div_floor(&content) * &sign)
            .collect()
    }

    /// Renders with a caller-chosen variable name.
    pub fn to_string_in(&self, var: &str) -> String {
        format_terms(
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (vec![i as u32], c.clone())),
            &[var],
        )
    }

    pub fn parse_in(src: &str, var: &str) -> Result<UniPoly> {
        let terms = parse_terms(src, &[var])?;
        let deg = terms.keys().map(|e| e[0] as usize).max();
        let mut coeffs = vec![Rat::zero(); deg.map_or(0, |d| d + 1)];
        for (e, c) in terms {
            coeffs[e[0] as usize] = c;
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl FromStr for UniPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<UniPoly> {
        UniPoly::parse_in(s, "t")
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<UniPoly, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
