//! Sparse bivariate polynomials in `x, y` over the rationals, plus a small
//! text parser (`"3/2*x^2*y - y^3"`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;

/// Exponent pair `(i, j)` for `x^i y^j`.
pub type Exp2 = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exp2, BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::term(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(BigRational::one(), 0, 1)
    }

    /// `c · x^i y^j`.
    pub fn term(c: BigRational, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exp2, BigRational)>) -> Self {
        let mut p = BiPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exp2, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp2, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// Lowest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0, 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    /// Multiplies by the monomial `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        BiPoly { terms: self.terms.iter().map(|(&(a, b), c)| ((a + i, b + j), c.clone())).collect() }
    }

    /// Drops every term of total degree `>= deg`.
    pub fn truncate(&self, deg: u32) -> Self {
        BiPoly {
            terms: self.terms.iter().filter(|((i, j), _)| i + j < deg).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * BigRational::from_integer(BigInt::from(i)))),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * BigRational::from_integer(BigInt::from(j)))),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(BigRational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&(i, j), c)| {
            acc + c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize)
        })
    }

    /// Translates the origin: returns `f(x + a, y + b)`.
    pub fn translate(&self, a: &BigRational, b: &BigRational) -> Self {
        let xa = &BiPoly::x() + &BiPoly::constant(a.clone());
        let yb = &BiPoly::y() + &BiPoly::constant(b.clone());
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out = &out + &(&xa.pow(i) * &yb.pow(j)).scale(c);
        }
        out
    }

    /// Parses a polynomial in `x`, `y` with rational coefficients.
    pub fn parse(s: &str) -> Result<Self> {
        let p = crate::parse::parse_polynomial(s, &["x", "y"])?;
        Ok(BiPoly::from_terms(p.terms().map(|(e, c)| ((e[0], e[1]), c.clone()))))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(i, j), d) in &rhs.terms {
                out.add_term((a + i, b + j), c * d);
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // lowest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(i, j), _)| (i + j, std::cmp::Reverse(i)));
        for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Splits a comma-separated generator list such as `"x*y, x^3, y^2"`.
pub fn parse_list(s: &str) -> Result<Vec<BiPoly>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(BiPoly::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn parse_and_print() {
        let p = BiPoly::parse("3/2*x^2*y - y^3 + 1/4").unwrap();
        assert_eq!(p.coeff(2, 1), ratio(3, 2));
        assert_eq!(p.coeff(0, 3), rat(-1));
        assert_eq!(p.constant_term(), ratio(1, 4));
        assert_eq!(BiPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parse_parentheses_and_powers() {
        let p = BiPoly::parse("(x + y)^2 - x^2 - y^2").unwrap();
        assert_eq!(p, BiPoly::term(rat(2), 1, 1));
        assert_eq!(parse_list("x*y, x^3, y^2").unwrap().len(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(BiPoly::parse("x +").is_err());
        assert!(BiPoly::parse("z").is_err());
        assert!(BiPoly::parse("1/0").is_err());
        assert!(BiPoly::parse("(x").is_err());
    }

    #[test]
    fn derivatives_and_translation() {
        let f = BiPoly::parse("y^2 - x^3").unwrap();
        assert_eq!(f.dx(), BiPoly::parse("-3*x^2").unwrap());
        assert_eq!(f.dy(), BiPoly::parse("2*y").unwrap());
        let g = f.translate(&rat(1), &rat(2));
        assert_eq!(g.eval(&rat(-1), &rat(-2)), rat(0));
        assert_eq!(g.eval(&rat(0), &rat(0)), f.eval(&rat(1), &rat(2)));
    }
}
