//! Exact rational arithmetic and univariate / bivariate polynomial algebra.

mod bi;
mod parse;
mod rat;
mod sturm;
mod uni;

pub use bi::{substitute_bi, BiPoly};
pub use rat::{
    exact_nth_root, gcd_all, is_perfect_square, lcm_all, nth_root_ceil, nth_root_floor, root_lower,
    root_upper, Rat,
};
pub use sturm::{count_roots, integer_roots, SturmChain};
pub use uni::{PrimitiveForm, UniPoly};

/// Horner evaluation of `p` at `t`.
pub fn eval_uni(p: &UniPoly, t: &Rat) -> Rat {
    p.eval(t)
}

/// `outer(inner(t))`.
pub fn compose_uni(outer: &UniPoly, inner: &UniPoly) -> UniPoly {
    outer.compose(inner)
}

pub fn primitive_form(p: &UniPoly) -> crate::Result<PrimitiveForm> {
    p.primitive_form()
}

/// Terms of a polynomial in `t` and `s`, keyed by `[deg_t, deg_s]`.
pub(crate) fn parse_homogeneous(src: &str) -> crate::Result<std::collections::BTreeMap<Vec<u32>, Rat>> {
    parse::parse_terms(src, &["t", "s"])
}

pub(crate) fn format_binary(terms: impl Iterator<Item = (Vec<u32>, Rat)>) -> String {
    parse::format_terms(terms, &["t", "s"])
}
