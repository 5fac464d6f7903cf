//! Integer points on Pell conics `x² − d·y² = N`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_perfect_square, Rat};

/// Continued fraction of `√d`: `[a0; period, period, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFExpansion {
    pub a0: u64,
    pub period: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "bigint_string")]
    pub x: BigInt,
    #[serde(with = "bigint_string")]
    pub y: BigInt,
}

impl PellSolution {
    /// Panics unless `x² − d·y² = 1`.
    fn checked(x: BigInt, y: BigInt, d: u64) -> Self {
        assert!(
            &x * &x - BigInt::from(d) * &y * &y == BigInt::one(),
            "({x}, {y}) does not solve the Pell equation for d = {d}"
        );
        PellSolution { x, y }
    }
}

/// `α(x² − d·y²) + β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellForm {
    pub alpha: Rat,
    pub d: u64,
    pub beta: Rat,
}

impl PellForm {
    pub fn new(alpha: Rat, d: u64, beta: Rat) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidInput("alpha must be nonzero".into()));
        }
        check_d(d)?;
        Ok(PellForm { alpha, d, beta })
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn check_d(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    if is_perfect_square(&BigInt::from(d)) {
        return Err(Error::PerfectSquare(d));
    }
    Ok(())
}

pub fn cf_sqrt(d: u64) -> Result<CFExpansion> {
    check_d(d)?;
    let a0 = d.sqrt();
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    // the period ends exactly when a = 2·a0
    loop {
        m = a * q - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        period.push(a);
        if a == 2 * a0 {
            break;
        }
    }
    Ok(CFExpansion { a0, period })
}

/// Minimal positive solution of `x² − d·y² = 1`: the convergent at the end of
/// the first period, or of the second one when the period is odd (the first
/// then solves the negative equation).
pub fn fundamental_solution(d: u64) -> Result<PellSolution> {
    let cf = cf_sqrt(d)?;
    let len = cf.period.len();
    let terms = if len % 2 == 0 { len } else { 2 * len };
    // convergents h/k of [a0; a1, ..., a_{terms-1}]
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(cf.a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    for i in 0..terms - 1 {
        let a = BigInt::from(cf.period[i % len]);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    Ok(PellSolution::checked(h, k, d))
}

/// All `(x, y)` with `x² − d·y² = 1` and `|x|, |y| ≤ B`, sorted.
pub fn solutions_up_to(d: u64, b: u64) -> Result<Vec<PellSolution>> {
    let fund = fundamental_solution(d)?;
    let bound = BigInt::from(b);
    let dd = BigInt::from(d);
    let mut out = Vec::new();
    let (mut x, mut y) = (BigInt::one(), BigInt::zero());
    // x grows fastest, so it decides when to stop
    while x <= bound {
        if y <= bound {
            for sx in [1, -1] {
                for sy in [1, -1] {
                    if sy == -1 && y.is_zero() {
                        continue;
                    }
                    out.push(PellSolution::checked(&x * sx, &y * sy, d));
                }
            }
        }
        let nx = &x * &fund.x + &dd * &y * &fund.y;
        let ny = &x * &fund.y + &y * &fund.x;
        x = nx;
        y = ny;
    }
    out.sort();
    Ok(out)
}

/// Oracle: scan `|y| ≤ B` and test `N + d·y²` for a square `x²` with `|x| ≤ B`.
pub fn grid_scan(d: u64, n: i64, b: u64) -> Vec<(BigInt, BigInt)> {
    let dd = BigInt::from(d);
    let nn = BigInt::from(n);
    let bound = BigInt::from(b);
    let b = b as i64;
    let mut pts: Vec<(BigInt, BigInt)> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|y| {
            let y = BigInt::from(y);
            let rhs = &nn + &dd * &y * &y;
            let mut found = Vec::new();
            if !rhs.is_negative() {
                let x = rhs.sqrt();
                if &x * &x == rhs && x <= bound {
                    found.push((x.clone(), y.clone()));
                    if !x.is_zero() {
                        found.push((-x, y));
                    }
                }
            }
            found
        })
        .collect();
    pts.sort();
    pts
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthPoint {
    #[serde(rename = "B")]
    pub b: u64,
    pub count: usize,
    pub fitted: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    pub d: u64,
    pub points: Vec<GrowthPoint>,
    /// `count ≈ c1·ln(B) + c2`.
    pub c1: f64,
    pub c2: f64,
    pub max_residual: f64,
}

/// Least-squares fit of `count ≈ c1·ln B + c2` over a grid of bounds.
pub fn count_growth_check(d: u64, grid: &[u64]) -> Result<GrowthReport> {
    let counts = grid
        .iter()
        .map(|&b| solutions_up_to(d, b).map(|s| s.len()))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = grid.iter().map(|&b| (b as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let n = xs.len() as f64;
    let (c1, c2) = if xs.len() < 2 {
        (0.0, ys.first().copied().unwrap_or(0.0))
    } else {
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let c1 = if sxx == 0.0 { 0.0 } else { sxy / sxx };
        (c1, my - c1 * mx)
    };
    let points: Vec<GrowthPoint> = grid
        .iter()
        .zip(&xs)
        .zip(&counts)
        .map(|((&b, x), &count)| GrowthPoint {
            b,
            count,
            fitted: c1 * x + c2,
        })
        .collect();
    let max_residual = points
        .iter()
        .map(|p| (p.count as f64 - p.fitted).abs())
        .fold(0.0, f64::max);
    Ok(GrowthReport {
        d,
        points,
        c1,
        c2,
        max_residual,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PellPoints {
    pub points: Vec<(i64, i64)>,
    /// Set when `(k − β)/α` is not an integer, so no integral point exists.
    pub non_integer_target: bool,
}

/// Integer points with `|x|, |y| ≤ B` on `α(x² − d·y²) + β = k`.
pub fn integral_points_pell_form(form: &PellForm, k: &Rat, b: u64) -> Result<PellPoints> {
    check_d(form.d)?;
    let target = &(k - &form.beta) / &form.alpha;
    let Some(n) = target.to_integer() else {
        return Ok(PellPoints {
            points: Vec::new(),
            non_integer_target: true,
        });
    };
    let pairs: Vec<(BigInt, BigInt)> = if n.is_one() {
        solutions_up_to(form.d, b)?.into_iter().map(|s| (s.x, s.y)).collect()
    } else {
        let n = n
            .to_i64()
            .ok_or_else(|| Error::InvalidInput("target too large".into()))?;
        grid_scan(form.d, n, b)
    };
    let points = pairs
        .into_iter()
        .map(|(x, y)| (x.to_i64().unwrap(), y.to_i64().unwrap()))
        .collect();
    Ok(PellPoints {
        points,
        non_integer_target: false,
    })
}
