//! Truncated integer power series, the Yau–Zaslow numbers and Beauville
//! multiplicities of `x^p - y^q` singularities.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Power series in `q` with exact integer coefficients, valid for exponents
/// `0..=order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// Zero series at the given truncation order.
    pub fn zero(order: usize) -> Self {
        IntSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `q^k` truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    /// Series from explicit coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    /// Truncated Cauchy product. Both factors must share the same order.
    pub fn try_mul(&self, other: &IntSeries) -> Result<IntSeries> {
        if self.order() != other.order() {
            return Err(Error::Usage(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// Multiplies in place by `(1 - q^n)`.
    fn mul_one_minus(&mut self, n: usize) {
        for k in (n..self.coeffs.len()).rev() {
            let t = self.coeffs[k - n].clone();
            self.coeffs[k] -= t;
        }
    }

    /// Multiplies in place by `1 / (1 - q^n) = 1 + q^n + q^{2n} + …`.
    fn div_one_minus(&mut self, n: usize) {
        for k in n..self.coeffs.len() {
            let t = self.coeffs[k - n].clone();
            self.coeffs[k] += t;
        }
    }
}

impl Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, rhs: &IntSeries) -> IntSeries {
        self.try_mul(rhs).expect("series order mismatch")
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Expansion of `∏_{n≥1} (1 - q^n)^exponent` to order `n_max`.
pub fn euler_factor_power(n_max: usize, exponent: i64) -> IntSeries {
    let mut s = IntSeries::one(n_max);
    for n in 1..=n_max {
        for _ in 0..exponent.unsigned_abs() {
            if exponent > 0 {
                s.mul_one_minus(n);
            } else {
                s.div_one_minus(n);
            }
        }
    }
    s
}

/// The modular discriminant `Δ(q) = q ∏ (1 - q^n)^24` to order `order`.
pub fn discriminant(order: usize) -> IntSeries {
    let eta = euler_factor_power(order, 24);
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for k in 1..=order {
        coeffs[k] = eta.coeff(k - 1).clone();
    }
    IntSeries::from_coeffs(coeffs)
}

/// `[n_0, …, n_{g_max}]`, the coefficients of `q / Δ(q)`.
pub fn yau_zaslow_counts(g_max: usize) -> Vec<BigInt> {
    euler_factor_power(g_max, -24).coeffs
}

/// Singularity type `x^p - y^q` with coprime positive exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CuspType {
    p: u32,
    q: u32,
}

impl CuspType {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Domain(format!("exponents must be positive, got ({p}, {q})")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::Domain(format!("exponents ({p}, {q}) are not coprime")));
        }
        Ok(CuspType { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Beauville's multiplicity `binom(p+q, q) / (p+q)`.
pub fn beauville_multiplicity(c: CuspType) -> BigInt {
    let n = u64::from(c.p + c.q);
    let (quot, rem) = binomial(n, u64::from(c.q)).div_rem(&BigInt::from(n));
    assert!(rem.is_zero(), "binom({n}, {}) not divisible by {n}", c.q);
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let a = IntSeries::from_i64(&[1, 1, 0]);
        let b = IntSeries::from_i64(&[1, -1, 0]);
        assert_eq!(&a * &b, IntSeries::from_i64(&[1, 0, -1]));
    }

    #[test]
    fn multiply_by_one() {
        let a = IntSeries::from_i64(&[3, -1, 4, 1, -5]);
        assert_eq!(&a * &IntSeries::one(4), a);
    }

    #[test]
    fn order_mismatch_is_usage_error() {
        let err = IntSeries::one(2).try_mul(&IntSeries::one(3)).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn zero_exponent_is_one() {
        assert_eq!(euler_factor_power(7, 0), IntSeries::one(7));
    }

    #[test]
    fn first_counts() {
        let expected: Vec<BigInt> =
            [1, 24, 324, 3200, 25650].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(euler_factor_power(4, -24).coeffs(), &expected[..]);
        assert_eq!(yau_zaslow_counts(4), expected);
        assert_eq!(yau_zaslow_counts(0), vec![BigInt::one()]);
    }

    #[test]
    fn delta_starts_with_ramanujan_tau() {
        // τ(1..5) = 1, -24, 252, -1472, 4830
        assert_eq!(discriminant(5), IntSeries::from_i64(&[0, 1, -24, 252, -1472, 4830]));
    }

    #[test]
    fn multiplicities() {
        let eps = |p, q| beauville_multiplicity(CuspType::new(p, q).unwrap());
        assert_eq!(eps(2, 3), BigInt::from(2));
        assert_eq!(eps(1, 2), BigInt::from(1));
        assert_eq!(eps(2, 5), BigInt::from(3));
        assert_eq!(eps(3, 4), BigInt::from(5));
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(matches!(CuspType::new(2, 4), Err(Error::Domain(_))));
        assert!(CuspType::new(0, 3).is_err());
    }
}
