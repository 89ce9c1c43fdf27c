//! Scalar abstraction shared by the exact and floating-point parts of the crate.
//!
//! Exact code (local rings, incidence systems, surface gluing) runs over
//! [`BigRational`]; the numerical solver runs over `Complex<F>` for a real
//! float `F`. Elimination routines are written once against [`Scalar`] and
//! differ only in how a pivot is judged to be zero.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// A field element usable by the generic polynomial and matrix code.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// `true` when arithmetic is exact and zero tests need no tolerance.
    const EXACT: bool;

    /// Size used to pick pivots. Exact types only need "nonzero".
    fn magnitude(&self) -> f64;

    /// Zero test at the given absolute tolerance (ignored by exact types).
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn from_i64(n: i64) -> Self;
}

/// Real floating-point types that can back the numerical solver.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }
            fn from_i64(n: i64) -> Self {
                n as $t
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl<F: Real> Scalar for Complex<F> {
    const EXACT: bool = false;
    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(F::from_i64(n).unwrap(), F::zero())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.abs().to_f64().unwrap_or(f64::INFINITY)
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `num / den` as a rational; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` to a rational.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale through the decimal exponent.
        let n = q.numer().to_string();
        let d = q.denom().to_string();
        let (nl, dl) = (n.trim_start_matches('-').len() as i32, d.len() as i32);
        let mant = |s: &str| -> f64 {
            let digits: String = s.trim_start_matches('-').chars().take(17).collect();
            digits.parse::<f64>().unwrap() / 10f64.powi(digits.len() as i32 - 1)
        };
        let sign = if q.is_negative() { -1.0 } else { 1.0 };
        sign * mant(&n) / mant(&d) * 10f64.powi(nl - dl)
    })
}

/// Embed a rational into the complex numbers.
pub fn rat_to_complex<F: Real>(q: &BigRational) -> Complex<F> {
    Complex::new(F::from_f64(rat_to_f64(q)).unwrap(), F::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negligible_respects_exactness() {
        assert!(!ratio(1, 1_000_000_000).is_negligible(1.0));
        assert!(1e-13f64.is_negligible(1e-12));
        assert!(!Complex::new(0.0f64, 1e-3).is_negligible(1e-12));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(10).pow(400u32) * 3, BigInt::from(10).pow(399u32));
        assert!((rat_to_f64(&big) - 30.0).abs() < 1e-9);
    }
}
