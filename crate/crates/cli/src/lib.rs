//! `fibertool` command-line front end.
//!
//! [`run`] parses arguments, dispatches to `fibertool-core`, and writes one
//! JSON document to standard output or `--out`. Exit codes: 0 on success,
//! 1 on a verification failure (oracle disagreement or violated bound), 2 on
//! bad input or an unmet precondition.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fibertool_core::corpus::{builtin_corpus, load_corpus, CorpusEntry};
use fibertool_core::count::{bound_threshold, enumerate_m, find_b0, oracle_m_with_epsilon};
use fibertool_core::curve::{
    bruteforce_points, classify_maillet_form, param_candidates, param_count, param_points, param_threshold,
};
use fibertool_core::fixtures::{run_fixtures, FixtureTweaks};
use fibertool_core::pell::{cf_sqrt, count_growth_check, fundamental_solution, grid_scan, solutions_up_to};
use fibertool_core::reduce::{normalize_curve, reduce_param};
use fibertool_core::{BiPoly, Error, PolyParam, ProjectiveParam, Rat, UniPoly};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "fibertool", version, about = "Integral points on polynomial curves")]
pub struct Cli {
    /// Size of the worker pool.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a polynomial parametrisation to a coordinate line.
    Reduce(ReduceArgs),
    /// Count rational t with p(t) integral and |p(t)| ≤ B.
    CountM(CountMArgs),
    /// Count integral points on parametrised corpus curves.
    CountN(CountNArgs),
    /// Solve x² − d·y² = 1.
    Pell(PellArgs),
    /// Classify a projective parametrisation by its points at infinity.
    Classify(ClassifyArgs),
    /// Time column scanning against parameter enumeration.
    Bench(BenchArgs),
    /// Run the built-in regression fixtures.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Curve polynomial P(x, y); with it the fiber P = k is normalised.
    #[arg(long)]
    pub curve: Option<BiPoly>,
    #[arg(long, default_value = "0")]
    pub k: Rat,
    #[arg(long)]
    pub param_p: UniPoly,
    #[arg(long)]
    pub param_q: UniPoly,
}

#[derive(Debug, Args)]
pub struct Bounds {
    #[arg(long = "B")]
    pub b: Option<u64>,
    /// `start:end:xF` (geometric) or `start:end:+S` (arithmetic).
    #[arg(long = "B-grid", conflicts_with = "b")]
    pub b_grid: Option<String>,
}

impl Bounds {
    fn resolve(&self, default: Option<u64>) -> Result<Grid, CliError> {
        match (&self.b, &self.b_grid) {
            (Some(b), _) => Ok(Grid::Single(check_positive(*b)?)),
            (None, Some(g)) => Ok(Grid::Many(parse_grid(g)?)),
            (None, None) => match default {
                Some(b) => Ok(Grid::Single(b)),
                None => Err(CliError::Input("one of --B or --B-grid is required".into())),
            },
        }
    }
}

enum Grid {
    Single(u64),
    Many(Vec<u64>),
}

#[derive(Debug, Args)]
pub struct CountMArgs {
    #[arg(long)]
    pub poly: UniPoly,
    #[command(flatten)]
    pub bounds: Bounds,
    #[arg(long, default_value = "1/2")]
    pub epsilon: Rat,
    /// Also run the rational-root oracle and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct CountNArgs {
    /// JSON-lines corpus; the built-in corpus when omitted.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub bounds: Bounds,
    #[arg(long, default_value = "1/2")]
    pub epsilon: Rat,
    /// Also scan columns and compare point sets.
    #[arg(long)]
    pub oracle: bool,
    /// Report counts only, without listing points.
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Args)]
pub struct PellArgs {
    #[arg(long)]
    pub d: u64,
    #[command(flatten)]
    pub bounds: Bounds,
    /// Compare against a grid scan for bounds up to this value.
    #[arg(long)]
    pub oracle_limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, requires_all = ["q_bar", "r_bar"], conflicts_with_all = ["param_p", "param_q"])]
    pub p_bar: Option<String>,
    #[arg(long)]
    pub q_bar: Option<String>,
    #[arg(long)]
    pub r_bar: Option<String>,
    /// Affine parametrisation, homogenised before classifying.
    #[arg(long, requires = "param_q")]
    pub param_p: Option<UniPoly>,
    #[arg(long)]
    pub param_q: Option<UniPoly>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long = "B", default_value_t = 500)]
    pub b: u64,
    #[arg(long, default_value = "1/2")]
    pub epsilon: Rat,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Override the constant in the ε-free bound (sensitivity check).
    #[arg(long)]
    pub bound_constant: Option<Rat>,
    /// Override the parameter lattice scale (sensitivity check).
    #[arg(long)]
    pub lattice_override: Option<BigInt>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or unmet precondition.
    Input(String),
    /// A report was produced but a check failed.
    Verification(Value),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotReduced(_) => CliError::Verification(json!({ "error": e.to_string() })),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

fn check_positive(b: u64) -> Result<u64, CliError> {
    if b == 0 {
        return Err(CliError::Input("B must be at least 1".into()));
    }
    Ok(b)
}

fn parse_bound(s: &str) -> Result<u64, CliError> {
    let bad = || CliError::Input(format!("bad bound {s:?}"));
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    // scientific notation such as 1e6
    let (m, e) = s.split_once(['e', 'E']).ok_or_else(bad)?;
    let m: u64 = m.parse().map_err(|_| bad())?;
    let e: u32 = e.parse().map_err(|_| bad())?;
    10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)
}

/// Parses `start:end:xF` or `start:end:+S` into an increasing list of bounds.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = |msg: &str| CliError::Input(format!("bad grid {spec:?}: {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, step] = parts[..] else {
        return Err(bad("expected start:end:step"));
    };
    let start = check_positive(parse_bound(start)?)?;
    let end = parse_bound(end)?;
    if end < start {
        return Err(bad("end is below start"));
    }
    let next: Box<dyn Fn(u64) -> Option<u64>> = if let Some(f) = step.strip_prefix('x') {
        let f = parse_bound(f)?;
        if f < 2 {
            return Err(bad("factor must be at least 2"));
        }
        Box::new(move |b| b.checked_mul(f))
    } else if let Some(s) = step.strip_prefix('+') {
        let s = parse_bound(s)?;
        if s == 0 {
            return Err(bad("step must be positive"));
        }
        Box::new(move |b| b.checked_add(s))
    } else {
        return Err(bad("step must start with 'x' or '+'"));
    };
    let mut grid = vec![start];
    while let Some(b) = next(*grid.last().unwrap()).filter(|&b| b <= end) {
        grid.push(b);
    }
    Ok(grid)
}

fn corpus(path: &Option<PathBuf>) -> Result<Vec<CorpusEntry>, CliError> {
    match path {
        Some(p) => load_corpus(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(builtin_corpus()),
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn finish(report: Value, ok: bool) -> Result<Value, CliError> {
    if ok {
        Ok(report)
    } else {
        Err(CliError::Verification(report))
    }
}

fn reduce(a: &ReduceArgs) -> Result<Value, CliError> {
    let param = PolyParam::new(a.param_p.clone(), a.param_q.clone());
    let res = match &a.curve {
        Some(p) => normalize_curve(p, &a.k, &param)?,
        None => reduce_param(&param)?,
    };
    Ok(to_value(&res))
}

fn count_m_at(a: &CountMArgs, b: u64, threshold: u64) -> Result<(Value, bool), CliError> {
    let rep = enumerate_m(&a.poly, b, &a.epsilon)?;
    let mut ok = b < threshold || rep.bound_holds;
    let mut v = to_value(&rep);
    if a.oracle {
        let slow = oracle_m_with_epsilon(&a.poly, b, &a.epsilon)?;
        let matched = slow.parameters == rep.parameters;
        ok &= matched;
        v["oracle_count"] = json!(slow.count);
        v["match"] = json!(matched);
    }
    Ok((v, ok))
}

fn count_m(a: &CountMArgs) -> Result<Value, CliError> {
    let b0 = find_b0(&a.poly, &a.epsilon)?;
    let threshold = bound_threshold(&a.poly, &a.epsilon)?;
    let head = json!({
        "poly": a.poly.to_string(),
        "epsilon": a.epsilon,
        "B0": b0,
        "bound_threshold": threshold,
    });
    match a.bounds.resolve(None)? {
        Grid::Single(b) => {
            let (mut v, ok) = count_m_at(a, b, threshold)?;
            merge(&mut v, head);
            finish(v, ok)
        }
        Grid::Many(grid) => {
            let (mut runs, mut skipped, mut ok) = (Vec::new(), Vec::new(), true);
            for b in grid {
                if b < b0 {
                    skipped.push(b);
                    continue;
                }
                let (v, run_ok) = count_m_at(a, b, threshold)?;
                ok &= run_ok;
                runs.push(v);
            }
            let mut v = json!({ "runs": runs, "skipped": skipped });
            merge(&mut v, head);
            finish(v, ok)
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(dst), Value::Object(src)) = (into, from) {
        for (k, v) in src {
            dst.insert(k, v);
        }
    }
}

fn count_n(a: &CountNArgs) -> Result<Value, CliError> {
    let grid = match a.bounds.resolve(None)? {
        Grid::Single(b) => vec![b],
        Grid::Many(g) => g,
    };
    let mut curves = Vec::new();
    let mut ok = true;
    for e in corpus(&a.corpus)? {
        let param = e.param();
        let threshold = param_threshold(&param, &a.epsilon)?;
        let mut runs = Vec::new();
        for &b in grid.iter().filter(|&&b| b >= threshold) {
            let mut v = if a.count_only {
                let (count, bound) = param_count(&param, b, &a.epsilon)?;
                let holds = Rat::from_int(count.clone()) <= bound;
                ok &= holds;
                json!({ "B": b, "count": count.to_string(), "bound_value": bound, "bound_holds": holds })
            } else {
                let rep = param_points(&param, b, &a.epsilon)?;
                ok &= rep.bound_holds != Some(false);
                to_value(&rep)
            };
            if a.oracle {
                let fast = param_points(&param, b, &a.epsilon)?;
                let slow = bruteforce_points(&e.spec(), b)?;
                let matched = fast.points == slow.points;
                ok &= matched;
                let only: Vec<_> = slow.points.iter().filter(|p| !fast.points.contains(p)).collect();
                v["oracle_count"] = json!(slow.count);
                v["oracle_only"] = json!(only);
                v["match"] = json!(matched);
            }
            runs.push(v);
        }
        let skipped: Vec<u64> = grid.iter().copied().filter(|&b| b < threshold).collect();
        curves.push(json!({
            "name": e.name,
            "threshold": threshold,
            "runs": runs,
            "skipped": skipped,
        }));
    }
    finish(json!({ "epsilon": a.epsilon, "curves": curves }), ok)
}

fn pell(a: &PellArgs) -> Result<Value, CliError> {
    let cf = cf_sqrt(a.d)?;
    let fundamental = fundamental_solution(a.d)?;
    let mut v = json!({ "d": a.d, "continued_fraction": cf, "fundamental": fundamental });
    let mut ok = true;
    match a.bounds.resolve(Some(100))? {
        Grid::Single(b) => {
            let sols = solutions_up_to(a.d, b)?;
            v["B"] = json!(b);
            v["count"] = json!(sols.len());
            if a.oracle_limit.is_some_and(|l| b <= l) {
                let pairs: Vec<_> = sols.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
                let matched = pairs == grid_scan(a.d, 1, b);
                ok &= matched;
                v["match"] = json!(matched);
            }
            v["solutions"] = json!(sols);
        }
        Grid::Many(grid) => {
            if let Some(limit) = a.oracle_limit {
                let mut matched = true;
                for &b in grid.iter().filter(|&&b| b <= limit) {
                    let pairs: Vec<_> = solutions_up_to(a.d, b)?.into_iter().map(|s| (s.x, s.y)).collect();
                    matched &= pairs == grid_scan(a.d, 1, b);
                }
                ok &= matched;
                v["match"] = json!(matched);
            }
            v["growth"] = to_value(&count_growth_check(a.d, &grid)?);
        }
    }
    finish(v, ok)
}

fn classify(a: &ClassifyArgs) -> Result<Value, CliError> {
    let pp = match (&a.p_bar, &a.q_bar, &a.r_bar, &a.param_p, &a.param_q) {
        (Some(p), Some(q), Some(r), _, _) => ProjectiveParam::parse(p, q, r)?,
        (_, _, _, Some(p), Some(q)) => ProjectiveParam::from_affine(&PolyParam::new(p.clone(), q.clone()))?,
        _ => {
            return Err(CliError::Input(
                "give --p-bar/--q-bar/--r-bar or --param-p/--param-q".into(),
            ))
        }
    };
    Ok(json!({
        "class": classify_maillet_form(&pp),
        "points_at_infinity": pp.r_bar.projective_root_count(),
        "p_bar": pp.p_bar,
        "q_bar": pp.q_bar,
        "r_bar": pp.r_bar,
    }))
}

#[derive(Debug, Serialize)]
pub struct BenchEntry {
    pub name: String,
    pub points: usize,
    pub oracle_candidates: u64,
    pub param_candidates: u64,
    pub oracle_ms: f64,
    pub param_ms: f64,
    pub speedup: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    #[serde(rename = "B")]
    pub b: u64,
    pub epsilon: Rat,
    pub curves: Vec<BenchEntry>,
    pub skipped: Vec<String>,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn bench(a: &BenchArgs) -> Result<Value, CliError> {
    let b = check_positive(a.b)?;
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    let mut mismatched = Vec::new();
    for e in corpus(&a.corpus)? {
        let param = e.param();
        if b < param_threshold(&param, &a.epsilon)? {
            skipped.push(e.name);
            continue;
        }
        let t = Instant::now();
        let slow = bruteforce_points(&e.spec(), b)?;
        let oracle_ms = ms(t);
        let t = Instant::now();
        let fast = param_points(&param, b, &a.epsilon)?;
        let param_ms = ms(t);
        if fast.points != slow.points {
            mismatched.push(json!({ "name": e.name, "param_count": fast.count, "oracle_count": slow.count }));
            continue;
        }
        runs.push(BenchEntry {
            name: e.name,
            points: fast.count,
            oracle_candidates: 2 * b + 1,
            param_candidates: param_candidates(&param, b, &a.epsilon)?,
            oracle_ms,
            param_ms,
            speedup: oracle_ms / param_ms.max(1e-6),
        });
    }
    // timings are only published once every curve agreed
    if !mismatched.is_empty() {
        return Err(CliError::Verification(json!({ "B": b, "mismatched": mismatched })));
    }
    Ok(to_value(&BenchReport {
        b,
        epsilon: a.epsilon.clone(),
        curves: runs,
        skipped,
    }))
}

fn fixtures(a: &FixturesArgs) -> Result<Value, CliError> {
    let mut tweaks = FixtureTweaks::default();
    if let Some(c) = &a.bound_constant {
        tweaks.bound_constant = c.clone();
    }
    tweaks.lattice_override = a.lattice_override.clone();
    let summary = run_fixtures(&tweaks);
    finish(to_value(&summary), summary.all_passed())
}

/// Runs a parsed command on a pool of `cli.workers` threads.
pub fn execute(cli: &Cli) -> Result<Value, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let epsilon = match &cli.command {
        Command::CountM(a) => Some(&a.epsilon),
        Command::CountN(a) => Some(&a.epsilon),
        Command::Bench(a) => Some(&a.epsilon),
        _ => None,
    };
    if epsilon.is_some_and(|e| !e.is_positive()) {
        return Err(CliError::Input("epsilon must be positive".into()));
    }
    pool.install(|| match &cli.command {
        Command::Reduce(a) => reduce(a),
        Command::CountM(a) => count_m(a),
        Command::CountN(a) => count_n(a),
        Command::Pell(a) => pell(a),
        Command::Classify(a) => classify(a),
        Command::Bench(a) => bench(a),
        Command::Fixtures(a) => fixtures(a),
    })
}

fn emit(v: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (report, code) = match execute(&cli) {
        Ok(v) => (Some(v), 0),
        Err(e) => {
            let code = e.exit_code();
            match e {
                CliError::Input(msg) => {
                    eprintln!("error: {msg}");
                    (None, code)
                }
                CliError::Verification(v) => {
                    eprintln!("verification failed");
                    (Some(v), code)
                }
            }
        }
    };
    if let Some(v) = report {
        if let Err(e) = emit(&v, cli.out.as_deref()) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    code
}
