//! Sturm-sequence real root counting and integer root isolation.

use std::cmp::Ordering;

use super::rat::Rat;
use super::uni::UniPoly;

/// Sturm chain of the squarefree part of a polynomial. Working with the
/// squarefree part makes `V(a) - V(b)` the number of distinct real roots in
/// `(a, b]` for every `a < b`, roots at the endpoints included.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

fn sign(r: &Rat) -> Ordering {
    r.signum()
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl SturmChain {
    /// Panics on the zero polynomial, which has no finite root count.
    pub fn new(p: &UniPoly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = p.squarefree_part();
        let mut chain = vec![p0.clone()];
        if p0.is_constant() {
            return SturmChain { chain };
        }
        chain.push(p0.derivative().monic());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            // -rem, rescaled by a positive constant
            let lead = r.leading().unwrap().abs();
            chain.push((-&r).scale(&lead.recip().unwrap()));
        }
        SturmChain { chain }
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        variations(self.chain.iter().map(|q| sign(&q.eval(x))))
    }

    fn variations_at_pos_inf(&self) -> usize {
        variations(self.chain.iter().map(|q| sign(q.leading().unwrap())))
    }

    fn variations_at_neg_inf(&self) -> usize {
        variations(self.chain.iter().map(|q| {
            let s = sign(q.leading().unwrap());
            if q.degree().unwrap() % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in `(lo, hi]`; `None` bounds are infinite.
    pub fn count_in(&self, lo: Option<&Rat>, hi: Option<&Rat>) -> usize {
        let vl = lo.map_or_else(|| self.variations_at_neg_inf(), |x| self.variations_at(x));
        let vh = hi.map_or_else(|| self.variations_at_pos_inf(), |x| self.variations_at(x));
        vl.saturating_sub(vh)
    }

    pub fn count_real_roots(&self) -> usize {
        self.count_in(None, None)
    }
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn count_roots(p: &UniPoly, lo: Option<&Rat>, hi: Option<&Rat>) -> usize {
    SturmChain::new(p).count_in(lo, hi)
}

/// Integer roots of a nonzero `p` in `[lo, hi]`, ascending. Bisects integer
/// intervals with Sturm counts and confirms each candidate by exact
/// evaluation.
pub fn integer_roots(p: &UniPoly, lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    if lo > hi || p.is_constant() {
        return out;
    }
    let chain = SturmChain::new(p);
    let f = &chain.chain[0];
    if f.eval(&Rat::from(lo)).is_zero() {
        out.push(lo);
    }
    let vl = chain.variations_at(&Rat::from(lo));
    let vh = chain.variations_at(&Rat::from(hi));
    bisect(&chain, lo, vl, hi, vh, &mut out);
    out
}

fn bisect(chain: &SturmChain, lo: i64, vl: usize, hi: i64, vh: usize, out: &mut Vec<i64>) {
    if vl <= vh {
        return;
    }
    if hi - lo == 1 {
        if chain.chain[0].eval(&Rat::from(hi)).is_zero() {
            out.push(hi);
        }
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let vm = chain.variations_at(&Rat::from(mid));
    bisect(chain, lo, vl, mid, vm, out);
    bisect(chain, mid, vm, hi, vh, out);
}
