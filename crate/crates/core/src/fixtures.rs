//! Frozen regression fixtures: worked examples with known answers.
//!
//! [`FixtureTweaks`] lets a caller deliberately break one ingredient (the
//! constant in the ε-free bound, or the parameter lattice) to confirm that
//! the matching fixture notices.

use num_bigint::BigInt;
use serde::Serialize;

use crate::count::{enumerate_m, oracle_m};
use crate::curve::{bruteforce_points, param_lattice, param_points_on_lattice, CurveSpec};
use crate::pell::{fundamental_solution, grid_scan, solutions_up_to};
use crate::poly::{Rat, UniPoly};
use crate::reduce::PolyParam;

#[derive(Clone, Debug)]
pub struct FixtureTweaks {
    /// `c` in the ε-free bound `c·B^(1/d) + 1`.
    pub bound_constant: Rat,
    /// Replaces the parameter lattice scale when set.
    pub lattice_override: Option<BigInt>,
}

impl Default for FixtureTweaks {
    fn default() -> Self {
        FixtureTweaks {
            bound_constant: Rat::from(2),
            lattice_override: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureSummary {
    pub results: Vec<FixtureResult>,
    pub passed: usize,
    pub failed: usize,
}

impl FixtureSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn get(&self, name: &str) -> Option<&FixtureResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

type Check = std::result::Result<String, String>;
type Fixture = (&'static str, fn(&FixtureTweaks) -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn half() -> Rat {
    Rat::new(1, 2)
}

/// `count > c·B^(1/d) + 1`, decided exactly as `((count − 1)/c)^d > B`.
fn exceeds_epsilon_free(count: usize, b: u64, d: u32, c: &Rat) -> bool {
    let lhs = (Rat::from(count as u64 - 1) / c).pow(d);
    lhs > Rat::from(b)
}

fn power_family(_: &FixtureTweaks) -> Check {
    let mut checked = 0;
    for d in [2u32, 3, 5] {
        let param = PolyParam::new(UniPoly::monomial(Rat::one(), d as usize), UniPoly::var());
        for m in 2u64..=6 {
            let b = m.pow(d);
            let g = param_lattice(&param).map_err(|e| e.to_string())?;
            let rep = param_points_on_lattice(&param, b, &half(), &g).map_err(|e| e.to_string())?;
            ensure(rep.count as u64 == 2 * m + 1, || {
                format!("(t^{d}, t) at B = {b}: {} points, expected {}", rep.count, 2 * m + 1)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} bounds, all 2m + 1"))
}

fn epsilon_necessity(tw: &FixtureTweaks) -> Check {
    for d in [2u32, 4] {
        let p: UniPoly = format!("t^{d} - 1").parse().unwrap();
        for k in 2u64..=10 {
            let b = k.pow(d) - 1;
            let rep = enumerate_m(&p, b, &half()).map_err(|e| e.to_string())?;
            ensure(rep.count as u64 == 2 * k + 1, || {
                format!("M(t^{d} - 1, {b}) = {}, expected {}", rep.count, 2 * k + 1)
            })?;
            ensure(exceeds_epsilon_free(rep.count, b, d, &tw.bound_constant), || {
                format!(
                    "M(t^{d} - 1, {b}) = {} does not exceed {}·B^(1/{d}) + 1",
                    rep.count, tw.bound_constant
                )
            })?;
        }
    }
    Ok("ε-free bound exceeded for d = 2, 4 and k = 2..10".into())
}

fn integer_values(_: &FixtureTweaks) -> Check {
    // (t − 1)(t − 2)/2 is integral at every integer t
    let p: UniPoly = "1/2*(t - 1)*(t - 2)".parse().unwrap();
    let rep = enumerate_m(&p, 36, &half()).map_err(|e| e.to_string())?;
    let expect: Vec<Rat> = (-7..=10).map(Rat::from).collect();
    ensure(rep.parameters == expect, || format!("parameters {:?}", rep.parameters))?;
    let oracle = oracle_m(&p, 36).map_err(|e| e.to_string())?;
    ensure(oracle.parameters == expect, || "oracle disagrees".into())?;
    Ok("18 parameters, -7..=10".into())
}

fn pell_two(_: &FixtureTweaks) -> Check {
    let f = fundamental_solution(2).map_err(|e| e.to_string())?;
    ensure(f.x == BigInt::from(3) && f.y == BigInt::from(2), || format!("fundamental ({}, {})", f.x, f.y))?;
    let sols: Vec<_> = solutions_up_to(2, 100)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|s| (s.x, s.y))
        .collect();
    ensure(sols.len() == 14, || format!("{} solutions up to 100", sols.len()))?;
    ensure(sols == grid_scan(2, 1, 100), || "grid scan disagrees".into())?;
    Ok("(3, 2); 14 points with |x|, |y| ≤ 100".into())
}

fn oracle_equivalence(tw: &FixtureTweaks) -> Check {
    for (poly, b) in [("t^2 - 1", 99u64), ("1/6*t^3 + 5/6*t", 200), ("4*t^2 - 3", 150)] {
        let p: UniPoly = poly.parse().unwrap();
        let fast = enumerate_m(&p, b, &half()).map_err(|e| e.to_string())?;
        let slow = oracle_m(&p, b).map_err(|e| e.to_string())?;
        ensure(fast.parameters == slow.parameters, || format!("M({poly}, {b}) disagrees"))?;
    }
    // the admissible parameters of (4t², 2t + 1) live on (1/2)·Z
    let param = PolyParam::parse("4*t^2", "2*t + 1").unwrap();
    let spec = CurveSpec::new("x - y^2 + 2*y - 1".parse().unwrap(), Rat::zero()).unwrap();
    let g = match &tw.lattice_override {
        Some(g) => g.clone(),
        None => param_lattice(&param).map_err(|e| e.to_string())?,
    };
    let b = 100;
    let fast = param_points_on_lattice(&param, b, &half(), &g).map_err(|e| e.to_string())?;
    let slow = bruteforce_points(&spec, b).map_err(|e| e.to_string())?;
    ensure(fast.points == slow.points, || {
        format!("{} points from parameters, {} from the oracle", fast.count, slow.count)
    })?;
    Ok(format!("counting and curve oracles agree ({} points)", fast.count))
}

/// Runs every fixture; failures are reported, never panicked on.
pub fn run_fixtures(tweaks: &FixtureTweaks) -> FixtureSummary {
    let fixtures: [Fixture; 5] = [
        ("power-family", power_family),
        ("epsilon-necessity", epsilon_necessity),
        ("integer-values", integer_values),
        ("pell-d2", pell_two),
        ("oracle-equivalence", oracle_equivalence),
    ];
    let results: Vec<FixtureResult> = fixtures
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f(tweaks) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            FixtureResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    let passed = results.iter().filter(|r| r.passed).count();
    FixtureSummary {
        failed: results.len() - passed,
        passed,
        results,
    }
}
