//! Rational parameters with bounded integral values: `M(p, B)`.
//!
//! `M(p, B)` is the set of rational `t` with `p(t) ∈ Z` and `|p(t)| ≤ B`.
//! Outside a certified window `[t₋, t₊]` around `σ = −a_{d−1}/(d a_d)` we
//! have `|p(t)| > B`, and inside it every admissible `t` lies on the lattice
//! `(1/a_d)·Z`, so the set is enumerated exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeEval;
use crate::poly::{count_roots, root_lower, root_upper, PrimitiveForm, Rat, UniPoly};

/// Bits of binary precision for the rational enclosure of `(B/a_d)^(1/d)`.
const WINDOW_BITS: u32 = 20;
/// Bits of precision for the bound; `2^-24` keeps the overshoot below `10^-6`.
const BOUND_BITS: u32 = 24;
/// The doubling search gives up past this threshold.
const MAX_B0: u64 = 1 << 62;
/// Candidates handed to one worker at a time.
const CHUNK: i64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountWindow {
    pub sigma: Rat,
    pub epsilon: Rat,
    pub t_minus: Rat,
    pub t_plus: Rat,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "B0")]
    pub b0: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MReport {
    #[serde(rename = "B")]
    pub b: u64,
    pub parameters: Vec<Rat>,
    pub count: usize,
    pub bound_value: Rat,
    pub bound_holds: bool,
}

impl MReport {
    fn new(p: &UniPoly, b: u64, epsilon: &Rat, parameters: Vec<Rat>) -> Result<Self> {
        let bound_value = bound_m(p, b, epsilon)?;
        let count = parameters.len();
        Ok(MReport {
            b,
            bound_holds: Rat::from(count as u64) <= bound_value,
            parameters,
            count,
            bound_value,
        })
    }
}

/// `p` or `-p`, whichever has a positive leading coefficient. Both have the
/// same `M(p, B)`.
fn positive_leading(p: &UniPoly) -> Result<UniPoly> {
    match p.leading() {
        None => Err(Error::ConstantPolynomial),
        Some(_) if p.is_constant() => Err(Error::ConstantPolynomial),
        Some(c) if c.is_negative() => Ok(-p),
        Some(_) => Ok(p.clone()),
    }
}

fn check_epsilon(epsilon: &Rat) -> Result<()> {
    if epsilon.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")))
    }
}

pub fn sigma(p: &UniPoly) -> Result<Rat> {
    let d = p.degree().filter(|&d| d >= 1).ok_or(Error::ConstantPolynomial)?;
    let lead = p.leading().unwrap();
    Ok(-(p.coeff(d - 1) / (lead * Rat::from(d as u64))))
}

/// No root of `f` in `[x0, ∞)`.
fn no_roots_from(f: &UniPoly, x0: &Rat) -> bool {
    f.is_zero() || (!f.eval(x0).is_zero() && count_roots(f, Some(x0), None) == 0)
}

/// No root of `f` in `(-∞, x0]`.
fn no_roots_until(f: &UniPoly, x0: &Rat) -> bool {
    f.is_zero() || (!f.eval(x0).is_zero() && count_roots(f, None, Some(x0)) == 0)
}

/// `f > 0` on `[x0, ∞)`.
fn positive_from(f: &UniPoly, x0: &Rat) -> bool {
    f.eval(x0).is_positive() && (f.is_constant() || count_roots(f, Some(x0), None) == 0)
}

/// Checks the window certificate for every `B' ≥ B` at once. With
/// `s_lo ≤ (B/lc)^(1/d)` and `c± = σ ± ε`:
/// `p` is monotone on `[s_lo + c₊, ∞)` and on `(-∞, -s_lo + c₋]`, and
/// `p(s + c₊) > lc·s^d`, `(-1)^d p(-s + c₋) > lc·s^d` for all `s ≥ s_lo`.
/// The last two give `|p(t)| > B'` beyond the window for `B'`, whose
/// radius is at least `s_lo`.
fn certified(p: &UniPoly, sigma: &Rat, epsilon: &Rat, b: u64) -> bool {
    let d = p.degree().unwrap();
    let lc = p.leading().unwrap().clone();
    let s_lo = root_lower(&(Rat::from(b) / &lc), d as u32, WINDOW_BITS);
    let c_plus = sigma + epsilon;
    let c_minus = sigma - epsilon;
    let dp = p.derivative();
    if !no_roots_from(&dp, &(&s_lo + &c_plus)) || !no_roots_until(&dp, &(&c_minus - &s_lo)) {
        return false;
    }
    let lead_term = UniPoly::monomial(lc, d);
    let s = UniPoly::var();
    let right = &p.compose(&(&s + &UniPoly::constant(c_plus))) - &lead_term;
    let mut left = p.compose(&(&UniPoly::constant(c_minus) - &s));
    if d % 2 == 1 {
        left = -&left;
    }
    let left = &left - &lead_term;
    positive_from(&right, &s_lo) && positive_from(&left, &s_lo)
}

/// Smallest `B` in `1, 2, 4, …` for which the window is certified for all
/// `B' ≥ B`.
pub fn find_b0(p: &UniPoly, epsilon: &Rat) -> Result<u64> {
    check_epsilon(epsilon)?;
    let p = positive_leading(p)?;
    let sigma = sigma(&p)?;
    let mut b = 1u64;
    while b <= MAX_B0 {
        if certified(&p, &sigma, epsilon, b) {
            return Ok(b);
        }
        b *= 2;
    }
    Err(Error::ThresholdNotFound)
}

fn window_unchecked(p: &UniPoly, b: u64, epsilon: &Rat, b0: u64) -> CountWindow {
    let d = p.degree().unwrap();
    let sigma = sigma(p).unwrap();
    let radius = root_upper(&(Rat::from(b) / p.leading().unwrap()), d as u32, WINDOW_BITS);
    CountWindow {
        t_plus: &(&radius + &sigma) + epsilon,
        t_minus: &(&sigma - &radius) - epsilon,
        sigma,
        epsilon: epsilon.clone(),
        b,
        b0,
    }
}

/// Certified window: `|p(t)| > B` for all `t` outside `[t₋, t₊]`.
pub fn window(p: &UniPoly, b: u64, epsilon: &Rat) -> Result<CountWindow> {
    let b0 = find_b0(p, epsilon)?;
    window_with_threshold(p, b, epsilon, b0)
}

fn window_with_threshold(p: &UniPoly, b: u64, epsilon: &Rat, b0: u64) -> Result<CountWindow> {
    if b < b0 {
        return Err(Error::BelowThreshold { b, b0 });
    }
    let p = positive_leading(p)?;
    let w = window_unchecked(&p, b, epsilon, b0);
    let bound = Rat::from(b);
    let ok = p.eval(&w.t_plus).abs() > bound && p.eval(&w.t_minus).abs() > bound;
    if !ok {
        return Err(Error::NotReduced("window endpoints failed re-verification".into()));
    }
    Ok(w)
}

/// Lattice indices `m` with `m / g` in `[lo, hi]`, as an `i64` range.
pub(crate) fn lattice_range(lo: &Rat, hi: &Rat, g: &BigInt) -> Result<(i64, i64)> {
    let g = Rat::from_int(g.clone());
    let m_lo = (lo * &g).ceil();
    let m_hi = (hi * &g).floor();
    match (m_lo.to_i64(), m_hi.to_i64()) {
        (Some(a), Some(b)) if b.checked_sub(a).is_some() => Ok((a, b)),
        _ => Err(Error::InvalidInput("candidate range exceeds 64-bit indices".into())),
    }
}

/// Runs `f` over `lo..=hi` in ordered chunks across the rayon pool.
pub(crate) fn par_scan<T: Send>(lo: i64, hi: i64, f: impl Fn(i64) -> Option<T> + Sync) -> Vec<T> {
    if lo > hi {
        return Vec::new();
    }
    let chunks = (hi - lo) / CHUNK + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * CHUNK;
            let end = (start + CHUNK - 1).min(hi);
            (start..=end).filter_map(&f).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn lattice_scale(pf: &PrimitiveForm) -> BigInt {
    pf.leading().abs()
}

/// Exact `M(p, B)` via the certified window and the lattice `(1/a_d)·Z`.
pub fn enumerate_m(p: &UniPoly, b: u64, epsilon: &Rat) -> Result<MReport> {
    let w = window(p, b, epsilon)?;
    let pf = p.primitive_form()?;
    let g = lattice_scale(&pf);
    let (lo, hi) = lattice_range(&w.t_minus, &w.t_plus, &g)?;
    let ev = LatticeEval::new(&pf, &g);
    let params = par_scan(lo, hi, |m| {
        ev.bounded_value(m, b).map(|_| Rat::new(m, g.clone()))
    });
    MReport::new(p, b, epsilon, params)
}

/// Rational upper bound, within `10^-6`, of
/// `2 a_d^(1-1/d) b^(1/d) B^(1/d) + 1 + ε` for the primitive form
/// `(1/b) Σ a_i t^i`. Accepts `ε = 0`.
pub fn bound_m(p: &UniPoly, b: u64, epsilon: &Rat) -> Result<Rat> {
    let d = p.degree().filter(|&d| d >= 1).ok_or(Error::ConstantPolynomial)?;
    if epsilon.is_negative() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    let pf = p.primitive_form()?;
    let ad = pf.leading().abs();
    let radicand = num_traits::pow(ad, d - 1) * &pf.denom * BigInt::from(b);
    let root = root_upper(&Rat::from_int(radicand), d as u32, BOUND_BITS);
    Ok(&(root * Rat::from(2) + Rat::one()) + epsilon)
}

/// Threshold beyond which `M(p, B) ≤ bound_m(p, B, ε)` is guaranteed: the
/// window for `ε / (2 a_d)` has at most `2 a_d (B b / a_d)^(1/d) + ε + 1`
/// lattice points.
pub fn bound_threshold(p: &UniPoly, epsilon: &Rat) -> Result<u64> {
    let pf = p.primitive_form()?;
    let ad = Rat::from_int(lattice_scale(&pf));
    find_b0(p, &(epsilon / &(ad * Rat::from(2))))
}

/// Smallest-prime-factor table for `0..=n`.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn divisors_with(n: u64, spf: &[u32]) -> Vec<u64> {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let push = |p: u64, factors: &mut Vec<(u64, u32)>| match factors.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => factors.push((p, 1)),
    };
    if (m as usize) < spf.len() {
        while m > 1 {
            let p = spf[m as usize] as u64;
            push(p, &mut factors);
            m /= p;
        }
    } else {
        let mut p = 2u64;
        while p * p <= m {
            while m.is_multiple_of(p) {
                push(p, &mut factors);
                m /= p;
            }
            p += 1;
        }
        if m > 1 {
            push(m, &mut factors);
        }
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Whether `Σ c_i α^i β^(d-i) = 0`, i.e. `α/β` is a root. Horner from the
/// top: `acc_k = acc_{k-1}·α + c_{d-k}·β^k`.
fn homogeneous_is_zero(coeffs: &[i128], alpha: i128, beta: i128) -> bool {
    let small = (|| {
        let mut acc: i128 = 0;
        let mut beta_pow: i128 = 1;
        for c in coeffs.iter().rev() {
            acc = acc.checked_mul(alpha)?.checked_add(c.checked_mul(beta_pow)?)?;
            beta_pow = beta_pow.checked_mul(beta)?;
        }
        Some(acc)
    })();
    match small {
        Some(v) => v == 0,
        None => {
            let (a, b) = (BigInt::from(alpha), BigInt::from(beta));
            let mut acc = BigInt::zero();
            let mut bp = BigInt::from(1);
            for c in coeffs.iter().rev() {
                acc = acc * &a + BigInt::from(*c) * &bp;
                bp *= &b;
            }
            acc.is_zero()
        }
    }
}

/// Rational roots of an integer polynomial (coefficients low to high, leading
/// nonzero) by the rational root theorem.
fn rational_roots(coeffs: &[i128], spf: &[u32], lead_divs: &[u64]) -> Vec<Rat> {
    let mut roots = Vec::new();
    let mut c = coeffs;
    if c[0] == 0 {
        roots.push(Rat::zero());
        while c[0] == 0 {
            c = &c[1..];
        }
    }
    if c.len() == 1 {
        return roots;
    }
    let lead = *c.last().unwrap();
    // Cauchy bound on root magnitude
    let max_ratio = c[..c.len() - 1]
        .iter()
        .map(|x| Rat::new(x.unsigned_abs(), lead.unsigned_abs()))
        .max()
        .unwrap();
    let cauchy = max_ratio + Rat::one();
    let const_divs = divisors_with(c[0].unsigned_abs() as u64, spf);
    for &beta in lead_divs {
        let beta = beta as i128;
        let cap = (&cauchy * Rat::from(beta as u64)).floor();
        for &alpha in &const_divs {
            if BigInt::from(alpha) > cap {
                break;
            }
            let alpha = alpha as i128;
            if alpha.gcd(&beta) != 1 {
                continue;
            }
            for a in [alpha, -alpha] {
                if homogeneous_is_zero(c, a, beta) {
                    roots.push(Rat::new(a, beta));
                }
            }
        }
    }
    roots
}

/// Independent oracle for `M(p, B)`: for each integer `k` with `|k| ≤ B`,
/// collect the rational roots of `p(t) = k`.
pub fn oracle_m(p: &UniPoly, b: u64) -> Result<MReport> {
    let pf = positive_leading(p)?.primitive_form()?;
    let ints: Vec<i128> = pf
        .numerator_coeffs
        .iter()
        .map(|a| a.to_i128())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("coefficients too large for the oracle".into()))?;
    let denom = pf
        .denom
        .to_i128()
        .ok_or_else(|| Error::InvalidInput("denominator too large for the oracle".into()))?;
    let max_const = (ints[0].unsigned_abs() + denom.unsigned_abs() * b as u128) as usize;
    let lead_divs = divisors_with(ints.last().unwrap().unsigned_abs() as u64, &[]);
    // the sieve covers every constant term up to a modest size; larger ones
    // fall back to trial division
    let spf = spf_sieve(max_const.min(1 << 24));
    let b_i = b as i64;
    let per_k = par_scan(-b_i, b_i, |k| {
        let mut c = ints.clone();
        c[0] -= denom * k as i128;
        Some(rational_roots(&c, &spf, &lead_divs))
    });
    let set: BTreeSet<Rat> = per_k.into_iter().flatten().collect();
    MReport::new(p, b, &Rat::new(1, 2), set.into_iter().collect())
}

/// Oracle with the report's bound computed for a caller-chosen `ε`.
pub fn oracle_m_with_epsilon(p: &UniPoly, b: u64, epsilon: &Rat) -> Result<MReport> {
    let r = oracle_m(p, b)?;
    MReport::new(p, b, epsilon, r.parameters)
}
