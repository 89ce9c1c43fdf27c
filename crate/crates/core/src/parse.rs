//! Text syntax for rational polynomials: `+ - * ^`, parentheses, integer
//! and fraction literals such as `3/2`, and named variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::homotopy::MPoly;

type P = MPoly<BigRational>;

/// Parses `text` as a polynomial in the variables `names`, indexed in order.
pub fn parse_polynomial(text: &str, names: &[&str]) -> Result<P> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, names };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(Error::Parse(format!("unexpected input at byte {} in {text:?}", p.pos)));
    }
    Ok(out)
}

/// Parses a list separated by commas, semicolons or newlines.
pub fn parse_polynomials(text: &str, names: &[&str]) -> Result<Vec<P>> {
    text.split([',', ';', '\n']).filter(|t| !t.trim().is_empty()).map(|t| parse_polynomial(t, names)).collect()
}

/// Polynomial text with variables named by `names`.
pub fn format_polynomial(p: &P, names: &[&str]) -> String {
    let mut out = String::new();
    // BTreeMap order puts the lowest exponent vectors first; print the highest first
    let terms: Vec<_> = p.terms().collect();
    for (exps, c) in terms.into_iter().rev() {
        let mono: Vec<String> = exps
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        let negative = *c < BigRational::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match (mono.is_empty(), mag.is_one()) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&mono.join("*")),
            (false, false) => out.push_str(&format!("{mag}*{}", mono.join("*"))),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<P> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<P> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<P> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }

    fn atom(&mut self) -> Result<P> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(P::constant(self.n(), BigRational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(P::var(self.n(), i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable {name:?}, expected one of {:?}", self.names)))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn named_variables_round_trip() {
        let names = ["x", "y", "z", "t"];
        let p = parse_polynomial("x^4 - 3/2*y*z^2*t + (z + t)^2", &names).unwrap();
        assert_eq!(p.eval(&[rat(1), rat(1), rat(1), rat(1)]), rat(1) - ratio(3, 2) + rat(4));
        assert_eq!(parse_polynomial(&format_polynomial(&p, &names), &names).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_names() {
        assert!(parse_polynomial("x + w", &["x", "y"]).is_err());
        assert!(parse_polynomial("xy", &["x", "y"]).is_err());
        assert_eq!(parse_polynomials("x, y; x*y\n", &["x", "y"]).unwrap().len(), 3);
    }
}
