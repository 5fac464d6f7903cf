//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fibertool_core::corpus::builtin_corpus;
use fibertool_core::count::{bound_m, enumerate_m, find_b0, oracle_m};
use fibertool_core::curve::{
    bruteforce_points, classify_maillet_form, param_count, param_points, param_threshold, theorem_bound,
    walkowiak_bound, FiberClass, ProjectiveParam,
};
use fibertool_core::pell::{count_growth_check, fundamental_solution, grid_scan, solutions_up_to};
use fibertool_core::reduce::normalize_curve;
use fibertool_core::{BiPoly, ElementaryMap, PlaneAutomorphism, PolyParam, Rat, UniPoly};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn half() -> Rat {
    Rat::new(1, 2)
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    match (res, limit) {
        (Ok(msg), Some(lim)) if elapsed > lim => {
            Err(format!("{msg}; took {elapsed:.2?}, limit {lim:?}"))
        }
        (Ok(msg), _) => Ok(format!("{msg}; {elapsed:.2?}")),
        (Err(msg), _) => Err(msg),
    }
}

/// `(t^d, t)` at `B = m^d` has exactly `2m + 1` points, matching the bound
/// with `ε = 0`.
fn sharp_family() -> Outcome {
    let mut n = 0;
    for d in [2u32, 3, 5] {
        let param = PolyParam::new(UniPoly::monomial(Rat::one(), d as usize), UniPoly::var());
        for m in 2u64..=50 {
            let b = m.pow(d);
            let rep = param_points(&param, b, &half()).map_err(|e| format!("d = {d}, m = {m}: {e}"))?;
            if rep.count as u64 != 2 * m + 1 {
                return Err(format!("d = {d}, m = {m}: {} points", rep.count));
            }
            let sharp = bound_m(&param.p, b, &Rat::zero()).unwrap();
            if sharp != Rat::from(2 * m + 1) {
                return Err(format!("d = {d}, m = {m}: ε-free bound {sharp}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} cases, count = 2m + 1 = bound"))
}

fn epsilon_necessity() -> Outcome {
    let mut n = 0;
    for d in [2u32, 4] {
        let p: UniPoly = format!("t^{d} - 1").parse().unwrap();
        for k in 2u64..=20 {
            let b = k.pow(d) - 1;
            let rep = enumerate_m(&p, b, &half()).map_err(|e| e.to_string())?;
            if rep.count as u64 != 2 * k + 1 {
                return Err(format!("d = {d}, k = {k}: M = {}", rep.count));
            }
            // 2k + 1 > 2·B^(1/d) + 1  ⟺  k^d > B
            let exceeds = Rat::from(k).pow(d) > Rat::from(b);
            if !exceeds {
                return Err(format!("d = {d}, k = {k}: ε-free bound not exceeded"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} cases, M = 2k + 1 > 2·B^(1/d) + 1"))
}

/// Seeded random polynomials: degree 1..=5, integer numerators in
/// `[-9, 9]`, denominators in `{1, 2, 6, d!}`.
fn polynomial_corpus(n: usize) -> Vec<UniPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut out = Vec::new();
    while out.len() < n {
        let d = 1 + out.len() % 5;
        let fact: i64 = (1..=d as i64).product();
        let denom = [1, 2, 6, fact][rng.gen_range(0..4)];
        let mut coeffs: Vec<Rat> = (0..=d).map(|_| Rat::new(rng.gen_range(-9i64..=9), denom)).collect();
        if coeffs[d].is_zero() {
            coeffs[d] = Rat::new(if rng.gen_bool(0.5) { 1 } else { -1 }, denom);
        }
        out.push(UniPoly::from_coeffs(coeffs));
    }
    out
}

fn counting_oracle() -> Outcome {
    let polys = polynomial_corpus(36);
    let mut tested_polys = 0;
    let mut runs = 0;
    for p in &polys {
        let b0 = find_b0(p, &half()).map_err(|e| format!("{p}: {e}"))?;
        let mut b = b0;
        let mut any = false;
        while b <= 10_000 {
            let fast = enumerate_m(p, b, &half()).map_err(|e| format!("{p} at {b}: {e}"))?;
            let slow = oracle_m(p, b).map_err(|e| format!("{p} at {b}: {e}"))?;
            if fast.parameters != slow.parameters {
                return Err(format!("{p} at B = {b}: {} vs {} parameters", fast.count, slow.count));
            }
            runs += 1;
            any = true;
            b *= 2;
        }
        tested_polys += usize::from(any);
    }
    if tested_polys < 30 {
        return Err(format!("only {tested_polys} polynomials had B0 ≤ 10^4"));
    }
    Ok(format!("{tested_polys} polynomials, {runs} (p, B) pairs agree"))
}

fn curve_oracle() -> Outcome {
    let corpus = builtin_corpus();
    let b = 500;
    for e in &corpus {
        let fast = param_points(&e.param(), b, &half()).map_err(|err| format!("{}: {err}", e.name))?;
        let slow = bruteforce_points(&e.spec(), b).map_err(|err| format!("{}: {err}", e.name))?;
        if fast.points != slow.points {
            return Err(format!("{}: {} vs {} points", e.name, fast.count, slow.count));
        }
    }
    Ok(format!("{} curves agree at B = {b}", corpus.len()))
}

/// Geometric grid from the certified threshold up to `10^8`.
fn bound_grid(param: &PolyParam) -> Result<Vec<u64>, String> {
    let b0 = param_threshold(param, &half()).map_err(|e| e.to_string())?;
    let mut grid = Vec::new();
    let mut b = b0.max(2);
    while b < 100_000_000 {
        grid.push(b);
        b *= 4;
    }
    grid.push(100_000_000);
    Ok(grid)
}

fn bound_suite() -> Outcome {
    let corpus = builtin_corpus();
    let mut checks = 0;
    for e in &corpus {
        let param = e.param();
        for b in bound_grid(&param)? {
            let (count, bound) = param_count(&param, b, &half()).map_err(|err| format!("{}: {err}", e.name))?;
            if Rat::from_int(count.clone()) > bound {
                return Err(format!("{} at B = {b}: {count} > {bound}", e.name));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (curve, B) pairs within the bound"))
}

fn pell_suite() -> Outcome {
    let mut fundamentals = 0;
    for d in 2u64..=50 {
        let r = (d as f64).sqrt() as u64;
        if r * r == d || (r + 1) * (r + 1) == d {
            continue;
        }
        let f = fundamental_solution(d).map_err(|e| e.to_string())?;
        // smallest y ≥ 1 with d·y² + 1 a square
        let mut y = 1u64;
        let x = loop {
            let v: BigInt = BigInt::from(d) * y * y + 1;
            let s = v.sqrt();
            if &s * &s == v {
                break s;
            }
            y += 1;
        };
        if (f.x.clone(), f.y.clone()) != (x.clone(), BigInt::from(y)) {
            return Err(format!("d = {d}: got ({}, {}), oracle ({x}, {y})", f.x, f.y));
        }
        fundamentals += 1;
    }
    for d in [2u64, 3, 5, 6, 7, 8, 10] {
        let sols = solutions_up_to(d, 10_000).map_err(|e| e.to_string())?;
        for s in &sols {
            if &s.x * &s.x - BigInt::from(d) * &s.y * &s.y != BigInt::from(1) {
                return Err(format!("d = {d}: ({}, {}) is not a solution", s.x, s.y));
            }
        }
        let pairs: Vec<_> = sols.into_iter().map(|s| (s.x, s.y)).collect();
        if pairs != grid_scan(d, 1, 10_000) {
            return Err(format!("d = {d}: recurrence and grid scan disagree"));
        }
    }
    let grid: Vec<u64> = (1..=6).map(|e| 10u64.pow(e)).collect();
    let growth = count_growth_check(2, &grid).map_err(|e| e.to_string())?;
    if growth.max_residual > 4.0 {
        return Err(format!("growth residual {:.3} > 4", growth.max_residual));
    }
    Ok(format!(
        "{fundamentals} fundamentals, 7 grid scans, d = 2 growth residual {:.3}",
        growth.max_residual
    ))
}

fn random_step(rng: &mut ChaCha8Rng) -> ElementaryMap {
    match rng.gen_range(0..4) {
        0 => ElementaryMap::Swap,
        1 => ElementaryMap::shift(Rat::from(rng.gen_range(-5i64..=5)), Rat::from(rng.gen_range(-5i64..=5))),
        _ => {
            let deg = rng.gen_range(1..=3);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let unit = |rng: &mut ChaCha8Rng| Rat::from(if rng.gen_bool(0.5) { 1 } else { -1 });
            ElementaryMap::triangular(unit(rng), unit(rng), UniPoly::from_ints(&coeffs)).unwrap()
        }
    }
}

fn reduction_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut done = 0;
    let mut rejected = 0;
    let mut total_steps = 0;
    while done < 100 {
        let n = rng.gen_range(1..=6);
        let phi0 = PlaneAutomorphism::from_steps((0..n).map(|_| random_step(&mut rng)).collect());
        let (u, v) = phi0.apply(&UniPoly::zero(), &UniPoly::var());
        let p = phi0.invert().coordinate_polys().0;
        let too_big = u.degree().unwrap_or(0).max(v.degree().unwrap_or(0)) > 12
            || p.total_degree().unwrap_or(0) > 12;
        if too_big {
            rejected += 1;
            continue;
        }
        if !phi0.has_integral_inverse() {
            return Err(format!("generator produced a map without integral inverse: {phi0:?}"));
        }
        let param = PolyParam::new(u, v);
        let res = normalize_curve(&p, &Rat::zero(), &param).map_err(|e| format!("P = {p}: {e}"))?;
        let (a, b) = res.normal_form.clone().ok_or("missing normal form")?;
        let expected = &BiPoly::term(a.clone(), 1, 0) + &BiPoly::constant(b);
        if res.phi.apply_poly(&p) != expected || a.is_zero() {
            return Err(format!("P = {p}: normal form does not verify"));
        }
        if !res.phi.has_integral_inverse() {
            return Err(format!("P = {p}: returned map lacks an integral inverse"));
        }
        total_steps += n;
        done += 1;
    }
    Ok(format!("100 automorphisms ({total_steps} steps, {rejected} oversized draws skipped)"))
}

fn classification() -> Outcome {
    use FiberClass::*;
    let cases = [
        ("t^3", "t*s^2", "s^3", LineLike),
        ("s^2", "t*s", "t^2", LineLike),
        ("t^4 + s^4", "t*s^3", "t^4", LineLike),
        ("t^2 + 2*s^2", "2*t*s", "t^2 - 2*s^2", PellLike),
        ("t^2 + 3*s^2", "2*t*s", "t^2 - 3*s^2", PellLike),
        ("t^2", "s^2", "t*s", PellLike),
        ("t^4", "s^4", "t^4 - 4*t^2*s^2 + 4*s^4", PellLike),
        ("t^2 - s^2", "2*t*s", "t^2 + s^2", Other),
        ("t^3", "s^3", "t^3 + s^3", Other),
        ("t^2", "s^2", "t^2 + 2*t*s + s^2", Other),
    ];
    for (p, q, r, want) in cases {
        let param = ProjectiveParam::parse(p, q, r).map_err(|e| format!("({p}, {q}, {r}): {e}"))?;
        let got = classify_maillet_form(&param);
        if got != want {
            return Err(format!("({p}, {q}, {r}): {got:?}, expected {want:?}"));
        }
        let roots = param.r_bar.projective_root_count();
        let expected_roots = match want {
            LineLike => Some(1),
            PellLike => Some(2),
            Other => None,
        };
        if expected_roots.is_some_and(|n| n != roots) {
            return Err(format!("({p}, {q}, {r}): {roots} points at infinity"));
        }
    }
    Ok(format!("{} parametrisations classified", cases.len()))
}

fn baseline() -> Outcome {
    let corpus = builtin_corpus();
    let mut checks = 0;
    for e in &corpus {
        let param = e.param();
        let d = param.p.degree().unwrap_or(0).max(param.q.degree().unwrap_or(0)) as u64;
        let mut grid = bound_grid(&param)?;
        grid.push(500);
        for b in grid {
            let ours = theorem_bound(&param, b, &half(), true).map_err(|err| err.to_string())?;
            let theirs = walkowiak_bound(d, b).map_err(|err| err.to_string())?;
            if theirs <= ours {
                return Err(format!("{} at B = {b}: baseline {theirs} ≤ {ours}", e.name));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (curve, B) pairs, baseline always larger"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 9] = [
        ("sharp-family equality", Some(Duration::from_secs(1)), sharp_family),
        ("epsilon necessity", None, epsilon_necessity),
        ("counting oracle equivalence", Some(Duration::from_secs(30)), counting_oracle),
        ("curve oracle equivalence", Some(Duration::from_secs(60)), curve_oracle),
        ("bound suite", None, bound_suite),
        ("pell", None, pell_suite),
        ("reduction round trip", None, reduction_round_trip),
        ("classification", None, classification),
        ("baseline comparison", None, baseline),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        match timed(*limit, f) {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
