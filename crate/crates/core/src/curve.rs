//! Integral points on plane curves `P(x, y) = k`.
//!
//! [`bruteforce_points`] scans the implicit equation column by column and is
//! the reference. [`param_points`] walks the rational parameters of a
//! polynomial parametrisation that can give integral points, using the
//! certified windows from [`crate::count`] for both coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::count::{bound_m, find_b0, lattice_range, par_scan, window};
use crate::error::{Error, Result};
use crate::lattice::LatticeEval;
use crate::poly::{integer_roots, BiPoly, PrimitiveForm, Rat, UniPoly};
use crate::reduce::PolyParam;

pub use crate::reduce::implicitize_check;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(rename = "P")]
    pub p: BiPoly,
    pub k: Rat,
}

impl CurveSpec {
    pub fn new(p: BiPoly, k: Rat) -> Result<Self> {
        if p.is_constant() {
            return Err(Error::InvalidInput("curve polynomial must be non-constant".into()));
        }
        Ok(CurveSpec { p, k })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NReport {
    #[serde(rename = "B")]
    pub b: u64,
    pub points: Vec<(i64, i64)>,
    pub count: usize,
    /// Theorem bound for the dominant coordinate; absent for the oracle.
    pub bound_value: Option<Rat>,
    pub singular_budget: Option<u64>,
    pub walkowiak_value: Option<f64>,
    /// `count ≤ bound_value + singular_budget`.
    pub bound_holds: Option<bool>,
    /// Columns `x = c` contained in the curve; their points are clipped to
    /// the box.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertical_components: Vec<i64>,
}

fn check_b(b: u64) -> Result<()> {
    if b == 0 || b > i64::MAX as u64 / 4 {
        return Err(Error::InvalidInput(format!("B = {b} is out of range")));
    }
    Ok(())
}

/// Reference enumeration: integer roots of `P(x, ·) − k` for every column.
pub fn bruteforce_points(spec: &CurveSpec, b: u64) -> Result<NReport> {
    check_b(b)?;
    if spec.p.is_constant() {
        return Err(Error::InvalidInput("curve polynomial must be non-constant".into()));
    }
    let bi = b as i64;
    let k = UniPoly::constant(spec.k.clone());
    let columns: Vec<(i64, Option<Vec<i64>>)> = (-bi..=bi)
        .into_par_iter()
        .map(|x| {
            let f = &spec.p.restrict_x(&Rat::from(x)) - &k;
            if f.is_zero() {
                (x, None)
            } else {
                (x, Some(integer_roots(&f, -bi, bi)))
            }
        })
        .collect();
    let mut points = Vec::new();
    let mut vertical = Vec::new();
    for (x, ys) in columns {
        match ys {
            Some(ys) => points.extend(ys.into_iter().map(|y| (x, y))),
            None => {
                vertical.push(x);
                points.extend((-bi..=bi).map(|y| (x, y)));
            }
        }
    }
    Ok(NReport {
        b,
        count: points.len(),
        points,
        bound_value: None,
        singular_budget: None,
        walkowiak_value: None,
        bound_holds: None,
        vertical_components: vertical,
    })
}

pub fn singular_budget(d: u64) -> u64 {
    if d < 2 {
        0
    } else {
        (d - 1) * (d - 2) / 2
    }
}

/// `2^48 d^8 ln(B)^5 B^(1/d)`, evaluated in floating point and rounded up
/// by a relative `10^-12`.
pub fn walkowiak_bound(d: u64, b: u64) -> Result<Rat> {
    if d == 0 || b < 2 {
        return Err(Error::InvalidInput("walkowiak bound needs d ≥ 1 and B ≥ 2".into()));
    }
    let v = walkowiak_f64(d, b) * (1.0 + 1e-12);
    Rat::from_f64(v).ok_or_else(|| Error::InvalidInput("walkowiak bound overflows".into()))
}

fn walkowiak_f64(d: u64, b: u64) -> f64 {
    let bf = b as f64;
    2f64.powi(48) * (d as f64).powi(8) * bf.ln().powi(5) * bf.powf(1.0 / d as f64)
}

/// The higher-degree coordinate (`p` on ties) and its degree.
fn dominant(param: &PolyParam) -> (&UniPoly, usize) {
    let dp = param.p.degree().unwrap_or(0);
    let dq = param.q.degree().unwrap_or(0);
    if dp >= dq {
        (&param.p, dp)
    } else {
        (&param.q, dq)
    }
}

/// Bound on the number of integral points: the `M(p, B)` bound of the
/// dominant coordinate, plus the singular-point budget when asked for.
pub fn theorem_bound(param: &PolyParam, b: u64, epsilon: &Rat, with_singular: bool) -> Result<Rat> {
    let (dom, d) = dominant(param);
    if d == 0 {
        return Err(Error::BothConstant);
    }
    let mut bound = bound_m(dom, b, epsilon)?;
    if with_singular {
        bound = bound + Rat::from(singular_budget(d as u64));
    }
    Ok(bound)
}

/// Threshold above which every window used by [`param_points`] and the
/// theorem bound are certified.
pub fn param_threshold(param: &PolyParam, epsilon: &Rat) -> Result<u64> {
    let mut b0 = 1;
    for f in [&param.p, &param.q] {
        if !f.is_constant() {
            b0 = b0.max(find_b0(f, epsilon)?);
        }
    }
    let (dom, _) = dominant(param);
    Ok(b0.max(crate::count::bound_threshold(dom, epsilon)?))
}

/// `gcd` of the leading numerators of the non-constant coordinates: every
/// parameter with integral image lies in `(1/g)·Z`.
pub fn param_lattice(param: &PolyParam) -> Result<BigInt> {
    let mut g = BigInt::zero();
    for f in [&param.p, &param.q] {
        if !f.is_constant() {
            g = g.gcd(&f.primitive_form()?.leading().abs());
        }
    }
    if g.is_zero() {
        return Err(Error::BothConstant);
    }
    Ok(g)
}

/// Primitive form, with the zero polynomial written as `0/1`.
fn lattice_form(f: &UniPoly) -> Result<PrimitiveForm> {
    if f.is_zero() {
        return Ok(PrimitiveForm {
            numerator_coeffs: vec![BigInt::zero()],
            denom: BigInt::from(1),
        });
    }
    f.primitive_form()
}

/// Lattice indices `m` (parameter `m/g`) inside every coordinate window;
/// `None` when no parameter can be admissible.
fn scan_range(param: &PolyParam, b: u64, epsilon: &Rat, g: &BigInt) -> Result<Option<(i64, i64)>> {
    check_b(b)?;
    if param.p.is_constant() && param.q.is_constant() {
        return Err(Error::BothConstant);
    }
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for f in [&param.p, &param.q] {
        if f.is_constant() {
            let c = f.coeff(0);
            if !c.is_integer() || c.abs() > Rat::from(b) {
                return Ok(None);
            }
            continue;
        }
        let w = window(f, b, epsilon)?;
        lo = Some(lo.map_or(w.t_minus.clone(), |x| x.max(w.t_minus)));
        hi = Some(hi.map_or(w.t_plus.clone(), |x| x.min(w.t_plus)));
    }
    let (lo, hi) = (lo.unwrap(), hi.unwrap());
    if lo > hi {
        return Ok(None);
    }
    lattice_range(&lo, &hi, g).map(Some)
}

/// Number of lattice parameters [`param_points`] evaluates at bound `B`.
pub fn param_candidates(param: &PolyParam, b: u64, epsilon: &Rat) -> Result<u64> {
    let g = param_lattice(param)?;
    Ok(match scan_range(param, b, epsilon, &g)? {
        Some((lo, hi)) if lo <= hi => (hi - lo) as u64 + 1,
        _ => 0,
    })
}

/// Admissible parameters and their images on a given lattice `(1/g)·Z`.
fn admissible(param: &PolyParam, b: u64, epsilon: &Rat, g: &BigInt) -> Result<Vec<(i64, i64)>> {
    let Some((m_lo, m_hi)) = scan_range(param, b, epsilon, g)? else {
        return Ok(Vec::new());
    };
    let ev_p = LatticeEval::new(&lattice_form(&param.p)?, g);
    let ev_q = LatticeEval::new(&lattice_form(&param.q)?, g);
    Ok(par_scan(m_lo, m_hi, |m| {
        let x = ev_p.bounded_value(m, b)?;
        let y = ev_q.bounded_value(m, b)?;
        Some((x, y))
    }))
}

fn param_report(param: &PolyParam, b: u64, epsilon: &Rat, points: Vec<(i64, i64)>) -> Result<NReport> {
    let (_, d) = dominant(param);
    let bound = theorem_bound(param, b, epsilon, false)?;
    let budget = singular_budget(d as u64);
    let count = points.len();
    Ok(NReport {
        b,
        bound_holds: Some(Rat::from(count as u64) <= &bound + &Rat::from(budget)),
        bound_value: Some(bound),
        singular_budget: Some(budget),
        walkowiak_value: (b >= 2).then(|| walkowiak_f64(d as u64, b)),
        points,
        count,
        vertical_components: Vec::new(),
    })
}

/// Integral points reachable from rational parameters, using the lattice
/// `(1/g)·Z` with `g` from [`param_lattice`].
pub fn param_points(param: &PolyParam, b: u64, epsilon: &Rat) -> Result<NReport> {
    let g = param_lattice(param)?;
    param_points_on_lattice(param, b, epsilon, &g)
}

/// As [`param_points`] with a caller-chosen lattice scale `g`.
pub fn param_points_on_lattice(param: &PolyParam, b: u64, epsilon: &Rat, g: &BigInt) -> Result<NReport> {
    let pts: BTreeSet<(i64, i64)> = admissible(param, b, epsilon, g)?.into_iter().collect();
    param_report(param, b, epsilon, pts.into_iter().collect())
}

/// Integers `n` in `[lo, hi]` with `n ≡ r (mod m)`, `m > 0`.
fn progression_count(lo: &BigInt, hi: &BigInt, r: &BigInt, m: &BigInt) -> BigInt {
    if lo > hi {
        return BigInt::zero();
    }
    // first n ≥ lo in the class, then count steps up to hi
    let first = lo + (r - lo).mod_floor(m);
    if &first > hi {
        BigInt::zero()
    } else {
        (hi - &first).div_floor(m) + 1
    }
}

/// Number of integral points in the box on a line given by two affine
/// coordinates, `p` of degree one.
fn line_count(p: &UniPoly, q: &UniPoly, b: u64) -> BigInt {
    // reparametrise by the integer value n = p(t): t = (n − p0)/p1
    let (p0, p1) = (p.coeff(0), p.coeff(1));
    let t_of_n = UniPoly::from_coeffs(vec![-(&p0 / &p1), p1.recip().unwrap()]);
    let r = q.compose(&t_of_n);
    let bound = BigInt::from(b);
    let (lo, hi) = (-bound.clone(), bound.clone());
    if r.is_constant() {
        let c = r.coeff(0);
        let ok = c.is_integer() && c.abs() <= Rat::from(b);
        return if ok { &hi - &lo + 1 } else { BigInt::zero() };
    }
    // r(n) = (U n + V)/W must be an integer of size at most B
    let w = r.coeff(0).denom().lcm(r.coeff(1).denom());
    let u = (r.coeff(1) * Rat::from_int(w.clone())).to_integer().unwrap();
    let v = (r.coeff(0) * Rat::from_int(w.clone())).to_integer().unwrap();
    // U n ≡ −V (mod W)
    let gcd = u.gcd(&w);
    if !(-&v).mod_floor(&gcd).is_zero() {
        return BigInt::zero();
    }
    let modulus = &w / &gcd;
    let residue = if modulus == BigInt::from(1) {
        BigInt::zero()
    } else {
        let ug = (&u / &gcd).mod_floor(&modulus);
        let inv = mod_inverse(&ug, &modulus);
        ((-&v / &gcd) * inv).mod_floor(&modulus)
    };
    // |U n + V| ≤ B W
    let bw = Rat::from_int(&bound * &w);
    let ur = Rat::from_int(u.clone());
    let vr = Rat::from_int(v);
    let a = &(-&bw - vr.clone()) / &ur;
    let c = &(&bw - &vr) / &ur;
    let (a, c) = if a <= c { (a, c) } else { (c, a) };
    let n_lo = a.ceil().max(lo);
    let n_hi = c.floor().min(hi);
    progression_count(&n_lo, &n_hi, &residue, &modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

/// Number of integral points reachable from parameters, without listing
/// them when the map is injective and one coordinate is affine.
pub fn param_count(param: &PolyParam, b: u64, epsilon: &Rat) -> Result<(BigInt, Rat)> {
    check_b(b)?;
    let dp = param.p.degree().unwrap_or(0);
    let dq = param.q.degree().unwrap_or(0);
    let bound = theorem_bound(param, b, epsilon, false)?;
    let count = match (dp, dq) {
        (0, 0) => return Err(Error::BothConstant),
        (1, 0 | 1) => line_count(&param.p, &param.q, b),
        (0, 1) => line_count(&param.q, &param.p, b),
        (1, _) | (_, 1) => {
            // injective: one point per admissible parameter
            BigInt::from(admissible(param, b, epsilon, &param_lattice(param)?)?.len())
        }
        _ => BigInt::from(param_points(param, b, epsilon)?.count),
    };
    Ok((count, bound))
}

/// Homogeneous integer binary form `Σ c_i t^i s^(d−i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::InvalidInput("binary form needs degree + 1 coefficients".into()));
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `t^i s^(d−i)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `f(t, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| Rat::from_int(c.clone())).collect())
    }

    /// Integer `f` of degree at most `degree`, homogenised with `s`.
    fn from_uni(f: &UniPoly, degree: usize) -> Result<Self> {
        let coeffs = (0..=degree)
            .map(|i| f.coeff(i).to_integer())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidInput("binary form needs integer coefficients".into()))?;
        BinaryForm::new(degree, coeffs)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let terms = crate::poly::parse_homogeneous(src)?;
        let degree = terms
            .keys()
            .map(|e| (e[0] + e[1]) as usize)
            .next()
            .ok_or_else(|| Error::InvalidInput("the zero form has no degree".into()))?;
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        for (e, c) in terms {
            if (e[0] + e[1]) as usize != degree {
                return Err(Error::InvalidInput(format!("{src:?} is not homogeneous")));
            }
            coeffs[e[0] as usize] = c
                .to_integer()
                .ok_or_else(|| Error::InvalidInput(format!("{src:?} has non-integer coefficients")))?;
        }
        BinaryForm::new(degree, coeffs)
    }

    /// Distinct zeros in the complex projective line.
    pub fn projective_root_count(&self) -> usize {
        let f = self.dehomogenize();
        if f.is_zero() {
            return 0;
        }
        let finite = f.squarefree_part().degree().unwrap_or(0);
        let at_infinity = usize::from(f.degree().unwrap_or(0) < self.degree);
        finite + at_infinity
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree as u32;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32, d - i as u32], Rat::from_int(c.clone())));
        f.write_str(&crate::poly::format_binary(terms))
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}

impl FromStr for BinaryForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BinaryForm::parse(s)
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `φ(t, s) = (p̄, q̄, r̄)`, the projective closure of a parametrisation;
/// `r̄` cuts out the points at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveParam {
    pub p_bar: BinaryForm,
    pub q_bar: BinaryForm,
    pub r_bar: BinaryForm,
}

impl ProjectiveParam {
    pub fn new(p_bar: BinaryForm, q_bar: BinaryForm, r_bar: BinaryForm) -> Result<Self> {
        let d = p_bar.degree;
        if q_bar.degree != d || r_bar.degree != d {
            return Err(Error::InvalidInput("components must have equal degree".into()));
        }
        let forms = [&p_bar, &q_bar, &r_bar];
        if forms.iter().all(|f| f.is_zero()) {
            return Err(Error::InvalidInput("all components vanish".into()));
        }
        // a common factor s shows up as a vanishing t^d coefficient
        if d > 0 && forms.iter().all(|f| f.coeffs[d].is_zero()) {
            return Err(Error::InvalidInput("components share the factor s".into()));
        }
        let g = forms
            .iter()
            .fold(UniPoly::zero(), |g, f| UniPoly::gcd(&g, &f.dehomogenize()));
        if !g.is_constant() {
            return Err(Error::InvalidInput(format!("components share the factor {g}")));
        }
        Ok(ProjectiveParam { p_bar, q_bar, r_bar })
    }

    pub fn parse(p: &str, q: &str, r: &str) -> Result<Self> {
        Self::new(p.parse()?, q.parse()?, r.parse()?)
    }

    /// Homogenisation `(L s^d p(t/s), L s^d q(t/s), L s^d)` of an affine
    /// parametrisation, `L` clearing denominators, made primitive.
    pub fn from_affine(param: &PolyParam) -> Result<Self> {
        let (_, d) = dominant(param);
        if d == 0 {
            return Err(Error::BothConstant);
        }
        let l = param
            .p
            .coeffs()
            .iter()
            .chain(param.q.coeffs())
            .fold(BigInt::from(1), |l, c| l.lcm(c.denom()));
        let lr = Rat::from_int(l.clone());
        let p = param.p.scale(&lr);
        let q = param.q.scale(&lr);
        let r = UniPoly::monomial(lr, 0);
        let mut content = BigInt::zero();
        for f in [&p, &q, &r] {
            for c in f.coeffs() {
                content = content.gcd(&c.to_integer().unwrap());
            }
        }
        let scale = Rat::from_int(content).recip().unwrap();
        // s^d f(t/s) has the same coefficient list, read as t^i s^(d−i)
        Self::new(
            BinaryForm::from_uni(&p.scale(&scale), d)?,
            BinaryForm::from_uni(&q.scale(&scale), d)?,
            BinaryForm::from_uni(&r.scale(&scale), d)?,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberClass {
    /// `r̄ = a·t^d` (or `a·s^d`): one point at infinity.
    LineLike,
    /// `r̄ = a·Q^(d/2)` with `Q` a real-split quadratic form: two points at
    /// infinity.
    PellLike,
    Other,
}

pub fn classify_maillet_form(param: &ProjectiveParam) -> FiberClass {
    let r = &param.r_bar;
    let d = r.degree;
    if r.is_zero() || d == 0 {
        return FiberClass::Other;
    }
    let nonzero: Vec<usize> = (0..=d).filter(|&i| !r.coeffs[i].is_zero()).collect();
    if nonzero == [d] || nonzero == [0] {
        return FiberClass::LineLike;
    }
    if d % 2 == 1 {
        return FiberClass::Other;
    }
    let f = r.dehomogenize();
    let rad = f.squarefree_part();
    let finite = rad.degree().unwrap_or(0);
    let infinite = f.degree().unwrap_or(0) < d;
    if finite + usize::from(infinite) != 2 {
        return FiberClass::Other;
    }
    // quadratic form α t² + β ts + γ s² with the same roots
    let (alpha, beta, gamma) = if infinite {
        // Q = rad(t)·s with rad linear
        (Rat::zero(), rad.coeff(1), rad.coeff(0))
    } else {
        (rad.coeff(2), rad.coeff(1), rad.coeff(0))
    };
    let disc = &(&beta * &beta) - &(Rat::from(4) * &alpha * &gamma);
    if !disc.is_positive() {
        return FiberClass::Other;
    }
    // r̄ = a·Q^(d/2) exactly: compare dehomogenisations, and at infinity the
    // order of vanishing in s must also be d/2
    let q_aff = UniPoly::from_coeffs(vec![gamma, beta, alpha]);
    let power = q_aff.pow((d / 2) as u32);
    let a = f.leading().unwrap() / power.leading().unwrap();
    let matches = power.scale(&a) == f;
    let inf_order_ok = !infinite || d - f.degree().unwrap() == d / 2;
    if matches && inf_order_ok {
        FiberClass::PellLike
    } else {
        FiberClass::Other
    }
}
