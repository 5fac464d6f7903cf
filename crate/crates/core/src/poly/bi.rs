use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::{format_terms, parse_terms};
use super::rat::Rat;
use super::uni::UniPoly;
use crate::error::{Error, Result};

/// Sparse bivariate polynomial: `(i, j)` ↦ coefficient of `x^i y^j`.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn term(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> Self {
        Self::term(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(Rat::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut out = BiPoly::zero();
        for (e, c) in it {
            out.add_term(e, &c);
        }
        out
    }

    /// `p(x)` viewed as a bivariate polynomial.
    pub fn from_uni_x(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
    }

    /// `p(y)` viewed as a bivariate polynomial.
    pub fn from_uni_y(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| ((0, j as u32), c.clone())))
    }

    fn add_term(&mut self, e: (u32, u32), c: &Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_in_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().unwrap_or(0) == 0
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
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

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x.pow(i) * y.pow(j))
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// `P(u(x, y), v(x, y))`, expanded.
    pub fn substitute(&self, u: &BiPoly, v: &BiPoly) -> BiPoly {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let u_pows = powers(u, max_i);
        let v_pows = powers(v, max_j);
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let prod = &u_pows[i as usize] * &v_pows[j as usize];
            for (e, pc) in prod.terms {
                out.add_term(e, &(c * pc));
            }
        }
        out
    }

    /// `P(p(t), q(t))` as a univariate polynomial in `t`.
    pub fn eval_param(&self, p: &UniPoly, q: &UniPoly) -> UniPoly {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let p_pows = uni_powers(p, max_i);
        let q_pows = uni_powers(q, max_j);
        let mut acc = UniPoly::zero();
        for (&(i, j), c) in &self.terms {
            let prod = &p_pows[i as usize] * &q_pows[j as usize];
            acc = &acc + &prod.scale(c);
        }
        acc
    }

    /// The univariate polynomial `y ↦ P(x0, y)`.
    pub fn restrict_x(&self, x0: &Rat) -> UniPoly {
        let deg = self.degree_in_y().unwrap_or(0) as usize;
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] += &(c * x0.pow(i));
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// `s(inner)` for a univariate `s`, by Horner's rule.
    pub fn compose_uni(s: &UniPoly, inner: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for c in s.coeffs().iter().rev() {
            acc = &(&acc * inner) + &BiPoly::constant(c.clone());
        }
        acc
    }

    /// `Some((a, b))` when the polynomial is exactly `a*x + b` with `a != 0`.
    pub fn as_affine_in_x(&self) -> Option<(Rat, Rat)> {
        let a = self.coeff(1, 0);
        if a.is_zero() {
            return None;
        }
        let b = self.coeff(0, 0);
        let expected = usize::from(!b.is_zero()) + 1;
        (self.terms.len() == expected).then_some((a, b))
    }

    /// Coordinate exchange `P(y, x)`.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    pub fn to_string_in(&self, vars: [&str; 2]) -> String {
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(e, _)| std::cmp::Reverse((e.0 + e.1, e.0)));
        format_terms(ordered.into_iter().map(|(&(i, j), c)| (vec![i, j], c.clone())), &vars)
    }

    pub fn parse_in(src: &str, vars: [&str; 2]) -> Result<BiPoly> {
        let terms = parse_terms(src, &vars)?;
        Ok(Self::from_terms(terms.into_iter().map(|(e, c)| ((e[0], e[1]), c))))
    }
}

fn powers(base: &BiPoly, n: u32) -> Vec<BiPoly> {
    let mut out = vec![BiPoly::one()];
    for k in 1..=n as usize {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

fn uni_powers(base: &UniPoly, n: u32) -> Vec<UniPoly> {
    let mut out = vec![UniPoly::one()];
    for k in 1..=n as usize {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

/// Free-function form of [`BiPoly::substitute`].
pub fn substitute_bi(p: &BiPoly, u: &BiPoly, v: &BiPoly) -> BiPoly {
    p.substitute(u, v)
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in(["x", "y"]))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl FromStr for BiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<BiPoly> {
        BiPoly::parse_in(s, ["x", "y"])
    }
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<BiPoly, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-Rat::one())
    }
}
