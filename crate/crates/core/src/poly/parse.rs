//! Text form of polynomials.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' uint)?
//! atom   := uint | var | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, so `1/2*t^2` and `t/2`
//! both parse. The printer emits `c*x^i*y^j` terms in descending order and
//! its output parses back to the same polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::rat::Rat;
use crate::error::{Error, Result};

pub(crate) type Terms = BTreeMap<Vec<u32>, Rat>;

fn add_into(acc: &mut Terms, rhs: &Terms, negate: bool) {
    for (e, c) in rhs {
        let entry = acc.entry(e.clone()).or_default();
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn constant_term(n: usize, c: Rat) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(vec![0; n], c);
    }
    t
}

fn as_constant(t: &Terms) -> Option<Rat> {
    match t.len() {
        0 => Some(Rat::zero()),
        1 => {
            let (e, c) = t.iter().next().unwrap();
            e.iter().all(|&x| x == 0).then(|| c.clone())
        }
        _ => None,
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                add_into(&mut acc, &rhs, false);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                add_into(&mut acc, &rhs, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = mul_terms(&acc, &rhs);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                match as_constant(&rhs) {
                    Some(c) if !c.is_zero() => {
                        let inv = constant_term(self.vars.len(), c.recip().unwrap());
                        acc = mul_terms(&acc, &inv);
                    }
                    Some(_) => return self.err("division by zero"),
                    None => return self.err("division by a non-constant"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Terms> {
        if self.eat(b'-') {
            let mut t = self.unary()?;
            for c in t.values_mut() {
                *c = -&*c;
            }
            Ok(t)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.uint()?;
        let e: u32 = match u32::try_from(e) {
            Ok(e) if e <= 4096 => e,
            _ => return self.err("exponent too large"),
        };
        let mut acc = constant_term(self.vars.len(), Rat::one());
        for _ in 0..e {
            acc = mul_terms(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Terms> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                Ok(constant_term(n, Rat::from_int(v)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => {
                        let mut e = vec![0; n];
                        e[i] = 1;
                        Ok(BTreeMap::from([(e, Rat::one())]))
                    }
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable {name:?}, expected one of {:?}", self.vars))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `src` into exponent-vector → coefficient form over `vars`.
pub(crate) fn parse_terms(src: &str, vars: &[&str]) -> Result<Terms> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
    };
    let t = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// Prints terms in the order given. The zero polynomial prints as `0`.
pub(crate) fn format_terms(terms: impl Iterator<Item = (Vec<u32>, Rat)>, vars: &[&str]) -> String {
    let mut out = String::new();
    for (exps, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let monomial: Vec<String> = exps
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        if monomial.is_empty() || !mag.is_one() {
            factors.push(mag.to_string());
        }
        factors.extend(monomial);
        out.push_str(&factors.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_examples() {
        let t = parse_terms("x^2 - 2*y^2", &["x", "y"]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![0, 2]], Rat::from(-2));
        let t = parse_terms("1/2*t^2 - 3/2*t + 1", &["t"]).unwrap();
        assert_eq!(t[&vec![2]], Rat::new(1, 2));
        assert_eq!(t[&vec![1]], Rat::new(-3, 2));
        assert_eq!(t[&vec![0]], Rat::one());
    }

    #[test]
    fn precedence_and_parens() {
        let t = parse_terms("-t^2", &["t"]).unwrap();
        assert_eq!(t[&vec![2]], Rat::from(-1));
        let t = parse_terms("(t - 1)*(t - 2)/2", &["t"]).unwrap();
        assert_eq!(t[&vec![0]], Rat::one());
        let t = parse_terms("t - t", &["t"]).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("x + z", &["x", "y"]).is_err());
        assert!(parse_terms("1/x", &["x", "y"]).is_err());
        assert!(parse_terms("x +", &["x", "y"]).is_err());
        assert!(parse_terms("x y", &["x", "y"]).is_err());
        assert!(parse_terms("1/0", &["t"]).is_err());
    }
}
