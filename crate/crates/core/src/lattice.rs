//! Exact evaluation of a polynomial at lattice points `m / g`.
//!
//! With `p(t) = (1/b) Σ a_i t^i` we have
//! `p(m/g) = (Σ a_i g^(d-i) m^i) / (b g^d)`, so integrality of `p(m/g)` is a
//! divisibility test on an integer polynomial in `m`. The common case runs in
//! checked `i128` arithmetic and falls back to big integers on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::poly::PrimitiveForm;

#[derive(Clone, Debug)]
pub struct LatticeEval {
    coeffs: Vec<BigInt>,
    divisor: BigInt,
    small: Option<(Vec<i128>, i128)>,
}

impl LatticeEval {
    /// Evaluator for `p(m / g)`, `g > 0`.
    pub fn new(pf: &PrimitiveForm, g: &BigInt) -> Self {
        assert!(g > &BigInt::zero(), "lattice scale must be positive");
        let d = pf.degree();
        let coeffs: Vec<BigInt> = pf
            .numerator_coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * num_traits::pow(g.clone(), d - i))
            .collect();
        let divisor = &pf.denom * num_traits::pow(g.clone(), d);
        let small = coeffs
            .iter()
            .map(ToPrimitive::to_i128)
            .collect::<Option<Vec<_>>>()
            .zip(divisor.to_i128());
        LatticeEval {
            coeffs,
            divisor,
            small,
        }
    }

    fn numerator_i128(coeffs: &[i128], m: i64) -> Option<i128> {
        let m = m as i128;
        let mut acc: i128 = 0;
        for c in coeffs.iter().rev() {
            acc = acc.checked_mul(m)?.checked_add(*c)?;
        }
        Some(acc)
    }

    fn value_big(&self, m: i64) -> Option<BigInt> {
        let m = BigInt::from(m);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &m + c;
        }
        let (q, r) = acc.div_rem(&self.divisor);
        r.is_zero().then_some(q)
    }

    /// `p(m/g)` when it is an integer.
    pub fn integer_value(&self, m: i64) -> Option<BigInt> {
        if let Some((coeffs, div)) = &self.small {
            if let Some(num) = Self::numerator_i128(coeffs, m) {
                return (num % div == 0).then(|| BigInt::from(num / div));
            }
        }
        self.value_big(m)
    }

    /// `p(m/g)` when it is an integer of absolute value at most `bound`.
    pub fn bounded_value(&self, m: i64, bound: u64) -> Option<i64> {
        if let Some((coeffs, div)) = &self.small {
            if let Some(num) = Self::numerator_i128(coeffs, m) {
                if num % div != 0 {
                    return None;
                }
                let v = num / div;
                return (v.unsigned_abs() <= bound as u128).then_some(v as i64);
            }
        }
        let v = self.value_big(m)?;
        let v = v.to_i64()?;
        (v.unsigned_abs() <= bound).then_some(v)
    }
}
