//! Elementary invertible polynomial maps of the plane and their compositions.
//!
//! A [`PlaneAutomorphism`] with steps `[s1, s2, ..., sn]` is the map
//! `s1 ∘ s2 ∘ ... ∘ sn`. Pulling a polynomial back through it
//! (`P ∘ Φ`) substitutes `s1` first; pushing a point forward applies `sn`
//! first. Steps are never expanded eagerly, and inversion is per step.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Rat, UniPoly};

/// Anything a plane map can act on coordinate-wise: rational points,
/// polynomial parametrisations, or polynomial coordinate functions.
pub trait PlaneCoord: Clone {
    fn scale(&self, c: &Rat) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn plus_const(&self, c: &Rat) -> Self;
    /// `s(self)` for a univariate `s`.
    fn substitute_into(&self, s: &UniPoly) -> Self;
}

impl PlaneCoord for Rat {
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn plus_const(&self, c: &Rat) -> Self {
        self + c
    }
    fn substitute_into(&self, s: &UniPoly) -> Self {
        s.eval(self)
    }
}

impl PlaneCoord for UniPoly {
    fn scale(&self, c: &Rat) -> Self {
        UniPoly::scale(self, c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn plus_const(&self, c: &Rat) -> Self {
        self + &UniPoly::constant(c.clone())
    }
    fn substitute_into(&self, s: &UniPoly) -> Self {
        s.compose(self)
    }
}

impl PlaneCoord for BiPoly {
    fn scale(&self, c: &Rat) -> Self {
        BiPoly::scale(self, c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn plus_const(&self, c: &Rat) -> Self {
        self + &BiPoly::constant(c.clone())
    }
    fn substitute_into(&self, s: &UniPoly) -> Self {
        BiPoly::compose_uni(s, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryMap {
    /// `(x, y) ↦ (λx, μy + s(x))`, with `λ, μ` nonzero.
    Triangular { lambda: Rat, mu: Rat, s: UniPoly },
    /// `(x, y) ↦ (y, x)`.
    Swap,
    /// `(x, y) ↦ (x + c, y + e)`.
    Shift { c: Rat, e: Rat },
}

impl ElementaryMap {
    pub fn triangular(lambda: Rat, mu: Rat, s: UniPoly) -> Result<Self> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(Error::InvalidInput("triangular map needs nonzero λ and μ".into()));
        }
        Ok(ElementaryMap::Triangular { lambda, mu, s })
    }

    /// The shear `(x, y) ↦ (x, y + s(x))`.
    pub fn shear(s: UniPoly) -> Self {
        ElementaryMap::Triangular {
            lambda: Rat::one(),
            mu: Rat::one(),
            s,
        }
    }

    pub fn shift(c: Rat, e: Rat) -> Self {
        ElementaryMap::Shift { c, e }
    }

    pub fn inverse(&self) -> ElementaryMap {
        match self {
            ElementaryMap::Triangular { lambda, mu, s } => {
                // (x, y) ↦ (x/λ, y/μ - s(x/λ)/μ)
                let li = lambda.recip().expect("λ != 0");
                let mi = mu.recip().expect("μ != 0");
                let s_inv = s.compose(&UniPoly::monomial(li.clone(), 1)).scale(&-&mi);
                ElementaryMap::Triangular {
                    lambda: li,
                    mu: mi,
                    s: s_inv,
                }
            }
            ElementaryMap::Swap => ElementaryMap::Swap,
            ElementaryMap::Shift { c, e } => ElementaryMap::Shift { c: -c, e: -e },
        }
    }

    pub fn apply<C: PlaneCoord>(&self, x: &C, y: &C) -> (C, C) {
        match self {
            ElementaryMap::Triangular { lambda, mu, s } => {
                (x.scale(lambda), y.scale(mu).plus(&x.substitute_into(s)))
            }
            ElementaryMap::Swap => (y.clone(), x.clone()),
            ElementaryMap::Shift { c, e } => (x.plus_const(c), y.plus_const(e)),
        }
    }

    /// Constant Jacobian determinant.
    pub fn jacobian(&self) -> Rat {
        match self {
            ElementaryMap::Triangular { lambda, mu, .. } => lambda * mu,
            ElementaryMap::Swap => -Rat::one(),
            ElementaryMap::Shift { .. } => Rat::one(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlaneAutomorphism {
    steps: Vec<ElementaryMap>,
}

impl PlaneAutomorphism {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<ElementaryMap>) -> Self {
        PlaneAutomorphism { steps }
    }

    pub fn steps(&self) -> &[ElementaryMap] {
        &self.steps
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self ∘ step`.
    pub fn push(&mut self, step: ElementaryMap) {
        self.steps.push(step);
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &PlaneAutomorphism) -> PlaneAutomorphism {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        PlaneAutomorphism { steps }
    }

    /// Image of `(x, y)` under the composed map.
    pub fn apply<C: PlaneCoord>(&self, x: &C, y: &C) -> (C, C) {
        let mut cur = (x.clone(), y.clone());
        for step in self.steps.iter().rev() {
            cur = step.apply(&cur.0, &cur.1);
        }
        cur
    }

    pub fn apply_point(&self, pt: &(Rat, Rat)) -> (Rat, Rat) {
        self.apply(&pt.0, &pt.1)
    }

    /// `P ∘ Φ`, substituting one step at a time.
    pub fn apply_poly(&self, p: &BiPoly) -> BiPoly {
        let (x, y) = (BiPoly::x(), BiPoly::y());
        self.steps.iter().fold(p.clone(), |acc, step| {
            let (u, v) = step.apply(&x, &y);
            acc.substitute(&u, &v)
        })
    }

    pub fn invert(&self) -> PlaneAutomorphism {
        PlaneAutomorphism {
            steps: self.steps.iter().rev().map(ElementaryMap::inverse).collect(),
        }
    }

    /// The two coordinate polynomials of the fully composed map.
    pub fn coordinate_polys(&self) -> (BiPoly, BiPoly) {
        self.apply(&BiPoly::x(), &BiPoly::y())
    }

    pub fn has_integral_inverse(&self) -> bool {
        let (u, v) = self.invert().coordinate_polys();
        u.has_integer_coeffs() && v.has_integer_coeffs()
    }

    pub fn jacobian_det(&self) -> Rat {
        self.steps.iter().map(ElementaryMap::jacobian).fold(Rat::one(), |a, b| a * b)
    }
}

/// Free-function form of [`PlaneAutomorphism::apply_poly`].
pub fn apply_poly(p: &BiPoly, phi: &PlaneAutomorphism) -> BiPoly {
    phi.apply_poly(p)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum StepRepr {
    Triangular { lambda: Rat, mu: Rat, s: String },
    Swap,
    Shift { c: Rat, e: Rat },
}

impl Serialize for ElementaryMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ElementaryMap::Triangular { lambda, mu, s } => StepRepr::Triangular {
                lambda: lambda.clone(),
                mu: mu.clone(),
                s: s.to_string_in("x"),
            },
            ElementaryMap::Swap => StepRepr::Swap,
            ElementaryMap::Shift { c, e } => StepRepr::Shift {
                c: c.clone(),
                e: e.clone(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ElementaryMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match StepRepr::deserialize(deserializer)? {
            StepRepr::Triangular { lambda, mu, s } => {
                let s = UniPoly::parse_in(&s, "x").map_err(D::Error::custom)?;
                ElementaryMap::triangular(lambda, mu, s).map_err(D::Error::custom)
            }
            StepRepr::Swap => Ok(ElementaryMap::Swap),
            StepRepr::Shift { c, e } => Ok(ElementaryMap::Shift { c, e }),
        }
    }
}

impl Serialize for PlaneAutomorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PlaneAutomorphism", 1)?;
        st.serialize_field("steps", &self.steps)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PlaneAutomorphism {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            steps: Vec<ElementaryMap>,
        }
        Ok(PlaneAutomorphism {
            steps: Repr::deserialize(deserializer)?.steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn b(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    fn ux(s: &str) -> UniPoly {
        UniPoly::parse_in(s, "x").unwrap()
    }

    #[test]
    fn apply_point_examples() {
        let id = PlaneAutomorphism::identity();
        assert_eq!(id.apply_point(&(r("5"), r("7"))), (r("5"), r("7")));

        let phi = PlaneAutomorphism::from_steps(vec![ElementaryMap::shear(ux("x^3"))]);
        assert_eq!(phi.apply_point(&(r("2"), r("1"))), (r("2"), r("9")));

        let pt = (r("3/2"), r("-4"));
        let image = phi.apply_point(&pt);
        assert_eq!(phi.invert().apply_point(&image), pt);
    }

    #[test]
    fn apply_poly_examples() {
        let phi = PlaneAutomorphism::from_steps(vec![ElementaryMap::shear(ux("x^3"))]);
        // x - y^3 pulled back along (x, y) ↦ (x + y^3, y) is x; expressed
        // with a swap around the shear
        let along_y = PlaneAutomorphism::from_steps(vec![
            ElementaryMap::Swap,
            ElementaryMap::shear(ux("x^3")),
            ElementaryMap::Swap,
        ]);
        assert_eq!(along_y.coordinate_polys(), (b("x + y^3"), b("y")));
        assert_eq!(along_y.apply_poly(&b("x - y^3")), b("x"));

        let p = b("x^2*y - 3");
        assert_eq!(PlaneAutomorphism::identity().apply_poly(&p), p);
        let swap = PlaneAutomorphism::from_steps(vec![ElementaryMap::Swap]);
        assert_eq!(swap.apply_poly(&b("x")), b("y"));

        // pullback agrees with pushing points forward
        let q = b("x^2 - y + 1/3*x*y");
        let pt = (r("2/5"), r("-3"));
        let (u, v) = phi.apply_point(&pt);
        assert_eq!(phi.apply_poly(&q).eval(&pt.0, &pt.1), q.eval(&u, &v));
    }

    #[test]
    fn inversion_examples() {
        assert!(PlaneAutomorphism::identity().invert().is_identity());
        let ss = PlaneAutomorphism::from_steps(vec![ElementaryMap::Swap, ElementaryMap::Swap]);
        assert_eq!(ss.coordinate_polys(), (BiPoly::x(), BiPoly::y()));
        assert_eq!(ss.invert().coordinate_polys(), (BiPoly::x(), BiPoly::y()));
    }

    /// A step whose inverse is `(αβ'x, α'y + α'β'^(ℓ-1)β^ℓ x^ℓ)` with integer
    /// α, β, α', β' has an integral inverse.
    #[test]
    fn displayed_inverse_is_integral() {
        let (alpha, beta, alpha2, beta2, ell) = (3i64, 2i64, -5i64, 7i64, 2u32);
        let c = alpha2 * beta2.pow(ell - 1) * beta.pow(ell);
        let inverse_step = ElementaryMap::triangular(
            Rat::from(alpha * beta2),
            Rat::from(alpha2),
            UniPoly::monomial(Rat::from(c), ell as usize),
        )
        .unwrap();
        let phi1 = PlaneAutomorphism::from_steps(vec![inverse_step.inverse()]);
        assert!(phi1.has_integral_inverse());
        let (u, v) = phi1.invert().coordinate_polys();
        assert_eq!(u, b("21*x"));
        assert_eq!(v, b("-5*y - 140*x^2"));
        assert_eq!(phi1.then(&phi1.invert()).coordinate_polys(), (BiPoly::x(), BiPoly::y()));
    }

    #[test]
    fn integral_inverse_examples() {
        let shear = PlaneAutomorphism::from_steps(vec![ElementaryMap::shear(ux("-x^2"))]);
        assert!(shear.has_integral_inverse());
        assert_eq!(shear.invert().coordinate_polys().1, b("y + x^2"));
        let scale = PlaneAutomorphism::from_steps(vec![
            ElementaryMap::triangular(r("2"), r("1"), UniPoly::zero()).unwrap(),
        ]);
        assert!(!scale.has_integral_inverse());
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(PlaneAutomorphism::identity().jacobian_det(), Rat::one());
        let t = PlaneAutomorphism::from_steps(vec![
            ElementaryMap::triangular(r("3"), r("1/2"), ux("x^4 - x")).unwrap(),
        ]);
        assert_eq!(t.jacobian_det(), r("3/2"));
        let s = PlaneAutomorphism::from_steps(vec![ElementaryMap::Swap]);
        assert_eq!(s.jacobian_det(), r("-1"));
    }

    #[test]
    fn rejects_degenerate_triangular() {
        assert!(ElementaryMap::triangular(Rat::zero(), Rat::one(), UniPoly::zero()).is_err());
    }

    #[test]
    fn json_shape() {
        let phi = PlaneAutomorphism::from_steps(vec![
            ElementaryMap::shear(ux("-x^2")),
            ElementaryMap::Swap,
            ElementaryMap::shift(r("1/2"), r("-3")),
        ]);
        let js = serde_json::to_string(&phi).unwrap();
        assert_eq!(
            js,
            r#"{"steps":[{"kind":"triangular","lambda":"1","mu":"1","s":"-x^2"},{"kind":"swap"},{"kind":"shift","c":"1/2","e":"-3"}]}"#
        );
        let back: PlaneAutomorphism = serde_json::from_str(&js).unwrap();
        assert_eq!(back, phi);
        let spec_form: PlaneAutomorphism = serde_json::from_str(
            r#"{"steps":[{"kind":"triangular","lambda":"1","mu":"1","s":"-1*x^2"},{"kind":"swap"}]}"#,
        )
        .unwrap();
        assert_eq!(spec_form.steps()[0], ElementaryMap::shear(ux("-x^2")));
    }
}
