//! Degree reduction of a polynomial parametrisation to a coordinate line.
//!
//! Given a proper, non-singular `t ↦ (p(t), q(t))`, repeatedly subtract from
//! the higher-degree coordinate the scalar multiple of a power of the other
//! that kills its leading term, until one coordinate is constant. Every
//! subtraction is realised by an elementary plane map with integral inverse,
//! and the composition `Φ` satisfies `Φ⁻¹(p, q) = (e, a·t + c)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::automorph::{ElementaryMap, PlaneAutomorphism};
use crate::error::{Error, Result};
use crate::poly::{BiPoly, Rat, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyParam {
    pub p: UniPoly,
    pub q: UniPoly,
}

impl PolyParam {
    pub fn new(p: UniPoly, q: UniPoly) -> Self {
        PolyParam { p, q }
    }

    pub fn parse(p: &str, q: &str) -> Result<Self> {
        Ok(PolyParam {
            p: p.parse()?,
            q: q.parse()?,
        })
    }

    pub fn eval(&self, t: &Rat) -> (Rat, Rat) {
        (self.p.eval(t), self.q.eval(t))
    }

    pub fn swapped(&self) -> Self {
        PolyParam {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    fn degrees(&self) -> (usize, usize) {
        (self.p.degree().unwrap_or(0), self.q.degree().unwrap_or(0))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionResult {
    pub phi: PlaneAutomorphism,
    /// `Φ⁻¹` applied to the input parametrisation: constant first
    /// coordinate, degree-one second coordinate.
    pub final_param: PolyParam,
    /// `(a, b)` with `(P - k) ∘ Φ = a·x + b`; only set by [`normalize_curve`].
    pub normal_form: Option<(Rat, Rat)>,
    pub integral_inverse: bool,
    /// Same property for the composition before the trailing shift.
    pub integral_inverse_pre_shift: bool,
    /// `(deg p, deg q)` at the start of every loop iteration.
    pub degree_trace: Vec<(usize, usize)>,
}

/// True iff `p'` and `q'` have no common complex zero.
pub fn check_nonsingular_param(param: &PolyParam) -> bool {
    let dp = param.p.derivative();
    let dq = param.q.derivative();
    if dp.is_zero() && dq.is_zero() {
        return false;
    }
    UniPoly::gcd(&dp, &dq).is_constant()
}

/// Polynomial in `s` with coefficients in `Q[t]`, lowest power first.
type SPoly = Vec<UniPoly>;

fn trim(mut a: SPoly) -> SPoly {
    while a.last().is_some_and(UniPoly::is_zero) {
        a.pop();
    }
    a
}

/// `(f(t) - f(s)) / (t - s)`.
fn difference_quotient(f: &UniPoly) -> SPoly {
    let d = f.degree().unwrap_or(0);
    let mut out = vec![Vec::new(); d.max(1)];
    // coefficient of t^j s^k collects a_i for i = j + k + 1
    for (i, a) in f.coeffs().iter().enumerate().skip(1) {
        for j in 0..i {
            let k = i - 1 - j;
            let row: &mut Vec<Rat> = &mut out[k];
            if row.len() <= j {
                row.resize(j + 1, Rat::zero());
            }
            row[j] += a;
        }
    }
    trim(out.into_iter().map(UniPoly::from_coeffs).collect())
}

fn content(a: &SPoly) -> UniPoly {
    a.iter().fold(UniPoly::zero(), |g, c| UniPoly::gcd(&g, c))
}

fn primitive_part(a: &SPoly) -> SPoly {
    let c = content(a);
    a.iter().map(|x| x.exact_div(&c)).collect()
}

fn pseudo_rem(a: &SPoly, b: &SPoly) -> SPoly {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.last().unwrap().clone();
        let mut next: SPoly = r.iter().map(|c| c * &lb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&lr * bc);
        }
        r = trim(next);
    }
    r
}

/// Greatest common divisor in `Q[t, s]` of two nonzero `s`-polynomials,
/// up to a rational constant.
fn bivariate_gcd(a: &SPoly, b: &SPoly) -> SPoly {
    let g_content = UniPoly::gcd(&content(a), &content(b));
    let (mut x, mut y) = (primitive_part(a), primitive_part(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive_part(&r) };
    }
    x.iter().map(|c| c * &g_content).collect()
}

/// The gcd of the two difference quotients `(p(t) - p(s))/(t - s)` and
/// `(q(t) - q(s))/(t - s)`, written with `x = t` and `y = s`.
pub fn difference_quotient_gcd(param: &PolyParam) -> Result<BiPoly> {
    if param.p.is_constant() && param.q.is_constant() {
        return Err(Error::BothConstant);
    }
    let dp = difference_quotient(&param.p);
    let dq = difference_quotient(&param.q);
    let g = match (dp.is_empty(), dq.is_empty()) {
        (true, _) => dq,
        (_, true) => dp,
        _ => bivariate_gcd(&dp, &dq),
    };
    let mut out = BiPoly::zero();
    for (k, c) in g.iter().enumerate() {
        for (j, a) in c.coeffs().iter().enumerate() {
            out = &out + &BiPoly::term(a.clone(), j as u32, k as u32);
        }
    }
    Ok(out)
}

/// Injectivity over the algebraic closure, decided by the difference
/// quotient gcd alone.
pub fn proper_by_gcd(param: &PolyParam) -> Result<bool> {
    Ok(difference_quotient_gcd(param)?.is_constant())
}

/// Injectivity over the algebraic closure (generic injectivity: at most
/// finitely many pairs of parameters collide).
pub fn check_proper(param: &PolyParam) -> Result<bool> {
    let (dp, dq) = param.degrees();
    match (dp, dq) {
        (0, 0) => Err(Error::BothConstant),
        (0, d) | (d, 0) => Ok(d == 1),
        // a non-injective map factors through a common inner polynomial,
        // whose degree divides both
        (a, b) if a.gcd(&b) == 1 => Ok(true),
        _ => proper_by_gcd(param),
    }
}

/// One step killing the leading term of `q` by `r·p^ℓ`, `r = lc(q)/lc(p)^ℓ`.
/// Returns the step and the new second coordinate `D·q − N·p^ℓ`.
fn reduction_step(p: &UniPoly, q: &UniPoly, ell: usize) -> (ElementaryMap, UniPoly) {
    let r = q.leading().unwrap() / &p.leading().unwrap().pow(ell as u32);
    let n = Rat::from_int(r.numer().clone());
    let d = Rat::from_int(r.denom().clone());
    let step = ElementaryMap::Triangular {
        lambda: Rat::one(),
        mu: d.recip().unwrap(),
        s: UniPoly::monomial(r, ell),
    };
    let new_q = &q.scale(&d) - &p.pow(ell as u32).scale(&n);
    (step, new_q)
}

pub fn reduce_param(param: &PolyParam) -> Result<ReductionResult> {
    if param.p.is_constant() && param.q.is_constant() {
        return Err(Error::BothConstant);
    }
    if !check_nonsingular_param(param) {
        return Err(Error::SingularParam);
    }
    if !check_proper(param)? {
        return Err(Error::NotProper);
    }

    let (dp0, dq0) = param.degrees();
    let mut phi = PlaneAutomorphism::identity();
    let mut cur = param.clone();
    let mut trace = Vec::new();
    loop {
        let (dp, dq) = cur.degrees();
        if dp == 0 || dq == 0 {
            break;
        }
        trace.push((dp, dq));
        if trace.len() > dp0 + dq0 {
            return Err(Error::NotReduced("loop did not terminate".into()));
        }
        if dp > dq {
            if dp % dq != 0 {
                return Err(Error::DegreeObstruction { deg_p: dp, deg_q: dq });
            }
            phi.push(ElementaryMap::Swap);
            cur = cur.swapped();
        } else if dq % dp != 0 {
            return Err(Error::DegreeObstruction { deg_p: dp, deg_q: dq });
        }
        let (dp, dq) = cur.degrees();
        let (step, new_q) = reduction_step(&cur.p, &cur.q, dq / dp);
        phi.push(step);
        cur.q = new_q;
    }

    if cur.p.degree() == Some(1) {
        phi.push(ElementaryMap::Swap);
        cur = cur.swapped();
    }
    if cur.q.degree() != Some(1) {
        return Err(Error::NotReduced(format!(
            "stopped at ({}, {}) instead of a line",
            cur.p, cur.q
        )));
    }
    let integral_inverse_pre_shift = phi.has_integral_inverse();
    let e = cur.p.coeff(0);
    if !e.is_zero() && e.is_integer() {
        phi.push(ElementaryMap::shift(e.clone(), Rat::zero()));
        cur.p = UniPoly::zero();
    }

    let (u, v) = phi.invert().apply(&param.p, &param.q);
    if (u, v) != (cur.p.clone(), cur.q.clone()) {
        return Err(Error::NotReduced("Φ⁻¹ does not map the parametrisation to the line".into()));
    }
    Ok(ReductionResult {
        integral_inverse: phi.has_integral_inverse(),
        integral_inverse_pre_shift,
        phi,
        final_param: cur,
        normal_form: None,
        degree_trace: trace,
    })
}

/// True iff `P(p(t), q(t)) = k` identically.
pub fn implicitize_check(p: &BiPoly, k: &Rat, param: &PolyParam) -> bool {
    (&p.eval_param(&param.p, &param.q) - &UniPoly::constant(k.clone())).is_zero()
}

pub fn normalize_curve(p: &BiPoly, k: &Rat, param: &PolyParam) -> Result<ReductionResult> {
    if !implicitize_check(p, k, param) {
        return Err(Error::ParamMismatch);
    }
    let mut res = reduce_param(param)?;
    let shifted = p - &BiPoly::constant(k.clone());
    let pulled = res.phi.apply_poly(&shifted);
    match pulled.as_affine_in_x() {
        Some(ab) => {
            res.normal_form = Some(ab);
            Ok(res)
        }
        None => Err(Error::NotReduced(format!("(P - k)∘Φ = {pulled} is not affine in x"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn param(p: &str, q: &str) -> PolyParam {
        PolyParam::parse(p, q).unwrap()
    }

    fn b(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn nonsingular_examples() {
        assert!(check_nonsingular_param(&param("t^3", "t")));
        assert!(!check_nonsingular_param(&param("t^2", "t^3")));
        assert!(check_nonsingular_param(&param("t", "5")));
        assert!(!check_nonsingular_param(&param("t^2", "4")));
    }

    #[test]
    fn proper_examples() {
        assert!(check_proper(&param("t^2", "t^3")).unwrap());
        assert!(proper_by_gcd(&param("t^2", "t^3")).unwrap());
        assert!(!check_proper(&param("t^2", "t^4")).unwrap());
        let g = difference_quotient_gcd(&param("t^2", "t^4")).unwrap();
        assert_eq!(g, b("x + y"));
        assert!(check_proper(&param("t", "t^7 - 3*t")).unwrap());
        assert!(!check_proper(&param("t^2 + 1", "7")).unwrap());
        assert_eq!(check_proper(&param("1", "2")), Err(Error::BothConstant));
        // a composite pair sharing the inner polynomial t^2 + t
        assert!(!check_proper(&param("(t^2 + t)^2", "(t^2 + t)^3 - 1")).unwrap());
        // degrees share a factor but the map is injective
        assert!(check_proper(&param("t^2", "t^4 + t")).unwrap());
    }

    #[test]
    fn reduce_cubic() {
        let res = normalize_curve(&b("x - y^3"), &Rat::zero(), &param("t^3", "t")).unwrap();
        assert_eq!(res.normal_form, Some((Rat::one(), Rat::zero())));
        assert_eq!(res.final_param, param("0", "t"));
        assert!(res.integral_inverse);
        assert_eq!(res.degree_trace, vec![(3, 1)]);
    }

    #[test]
    fn reduce_line() {
        let res = normalize_curve(&b("x"), &Rat::zero(), &param("0", "t")).unwrap();
        assert!(res.phi.is_identity());
        assert_eq!(res.normal_form, Some((Rat::one(), Rat::zero())));

        let res = reduce_param(&param("t", "3")).unwrap();
        assert_eq!(res.phi.steps(), &[ElementaryMap::Swap, ElementaryMap::shift(Rat::from(3), Rat::zero())]);
        assert_eq!(res.final_param, param("0", "t"));
    }

    #[test]
    fn reduce_two_steps() {
        let res = reduce_param(&param("t^2 + t", "t")).unwrap();
        assert_eq!(res.final_param, param("0", "t"));
        let (u, v) = res.phi.apply(&res.final_param.p, &res.final_param.q);
        assert_eq!(PolyParam::new(u, v), param("t^2 + t", "t"));
        assert!(res.integral_inverse);
    }

    #[test]
    fn reduce_rational_leading() {
        let p = b("2*x - y^2 + 3");
        let res = normalize_curve(&p, &Rat::from(3), &param("1/2*t^2", "t")).unwrap();
        assert_eq!(res.normal_form, Some((Rat::one(), Rat::zero())));
        assert!(res.integral_inverse);
        let (u, v) = res.phi.coordinate_polys();
        assert_eq!((u, v), (b("1/2*x + 1/2*y^2"), b("y")));
    }

    #[test]
    fn keeps_rational_constant() {
        // final constant coordinate 1/2 cannot be shifted away integrally
        let res = reduce_param(&param("1/2", "t")).unwrap();
        assert_eq!(res.final_param, param("1/2", "t"));
        assert!(res.integral_inverse);
        let res = normalize_curve(&b("x"), &Rat::new(1, 2), &param("1/2", "t")).unwrap();
        assert_eq!(res.normal_form, Some((Rat::one(), Rat::new(-1, 2))));
    }

    #[test]
    fn errors() {
        assert_eq!(reduce_param(&param("t^2", "t^3")).unwrap_err(), Error::SingularParam);
        assert_eq!(reduce_param(&param("t^2", "t^4 + t^2")).unwrap_err(), Error::SingularParam);
        // a non-injective map factors through a common inner polynomial,
        // so it is always caught as singular first
        assert_eq!(reduce_param(&param("t^2 + t", "(t^2 + t)^3")).unwrap_err(), Error::SingularParam);
        assert!(matches!(
            reduce_param(&param("t^2 + t", "t^4")),
            Err(Error::DegreeObstruction { deg_p: 2, deg_q: 3 })
        ));
        assert!(matches!(
            reduce_param(&param("t^2", "t^3 + t")),
            Err(Error::DegreeObstruction { deg_p: 2, deg_q: 3 })
        ));
        assert_eq!(
            normalize_curve(&b("x - y^3"), &Rat::zero(), &param("t", "t")).unwrap_err(),
            Error::ParamMismatch
        );
    }
}
