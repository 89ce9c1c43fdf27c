//! Dense univariate polynomials and complex root isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;

use crate::linalg::Matrix;
use crate::scalar::{rat_to_f64, Scalar};

/// Coefficients stored from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c · t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `∏ (t - r)` over the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |acc, r| {
            acc * Poly::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.leading();
        self.scale(&inv)
    }

    /// Euclidean division `self = q · d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = T::one() / d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let v = r[k - dd + j].clone() - c.clone() * dc.clone();
                r[k - dd + j] = v;
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd. Meaningful for exact scalars only.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Sylvester resultant; both polynomials are taken at their actual degree.
    pub fn resultant(&self, other: &Self) -> T {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return T::zero();
        };
        if m + n == 0 {
            return T::one();
        }
        let size = m + n;
        let mut s = Matrix::zeros(size, size);
        for i in 0..n {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s[(i, i + k)] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                s[(n + i, i + k)] = c.clone();
            }
        }
        s.det()
    }

    /// Squarefree part `self / gcd(self, self')`, monic. Exact scalars only.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Interpolating polynomial through `(xs[i], ys[i])` by divided differences.
    pub fn interpolate(xs: &[T], ys: &[T]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i].clone() - dd[i - 1].clone();
                dd[i] = num / (xs[i].clone() - xs[i - level].clone());
            }
        }
        let mut p = Self::zero();
        for i in (0..n).rev() {
            p = p * Self::new(vec![-xs[i].clone(), T::one()]) + Self::constant(dd[i].clone());
        }
        p
    }

    /// Composition `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * g.clone() + Self::constant(c.clone()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Poly<BigRational> {
    pub fn to_complex(&self) -> Poly<Complex<f64>> {
        self.map(|c| Complex::new(rat_to_f64(c), 0.0))
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = v;
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Sylvester resultant of two coefficient vectors (constant term first) taken
/// at their formal degrees `a.len() - 1` and `b.len() - 1`, so that it
/// commutes with specialising parameters inside the coefficients.
pub fn formal_resultant<T: Scalar>(a: &[T], b: &[T]) -> T {
    let (m, n) = (a.len().saturating_sub(1), b.len().saturating_sub(1));
    let size = m + n;
    if size == 0 {
        return T::one();
    }
    let mut s = Matrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s[(n + i, i + k)] = c.clone();
        }
    }
    s.det()
}

/// All complex roots of a polynomial (with multiplicity) by Aberth–Ehrlich
/// iteration followed by Newton polishing.
pub fn complex_roots(p: &Poly<Complex<f64>>) -> Vec<Complex<f64>> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let p = p.monic();
    let dp = p.derivative();
    // Cauchy bound for the initial circle.
    let radius = 1.0 + p.coeffs()[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r0 = radius.min(1e6).max(1e-3) * 0.5;
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| Complex::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = p.eval(&z[i]);
            let dv = dp.eval(&z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let sum: Complex<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dv = dp.eval(zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = p.eval(zi) / dv;
            if !step.is_finite() || step.norm() > 1e-6 * (1.0 + zi.norm()) {
                break;
            }
            *zi -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn q(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = q(&[3, -1, 0, 2]);
        let xs: Vec<_> = (0..4).map(rat).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn squarefree_part() {
        let p = Poly::from_roots(&[rat(1), rat(1), rat(2), rat(-3), rat(-3), rat(-3)]);
        assert_eq!(p.squarefree(), Poly::from_roots(&[rat(1), rat(2), rat(-3)]));
    }

    #[test]
    fn formal_resultant_with_vanishing_leading_terms() {
        use num_traits::Signed;
        let a = [rat(-1), rat(0), rat(1)];
        // one formal leading zero: lead(a) times the actual resultant, up to sign
        let b = [rat(-2), rat(1), rat(0)];
        assert_eq!(formal_resultant(&a, &b).abs(), q(&[-1, 0, 1]).resultant(&q(&[-2, 1])).abs());
        // both leading terms zero: a common root at infinity
        let a = [rat(-1), rat(1), rat(0)];
        assert_eq!(formal_resultant(&a, &b), rat(0));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(&[rat(1), rat(2), rat(3)]);
        let b = Poly::from_roots(&[rat(2), rat(5)]);
        assert_eq!(a.gcd(&b), q(&[-2, 1]));
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq * b + r, a);
    }

    #[test]
    fn resultant_detects_common_roots() {
        let a = Poly::from_roots(&[rat(1), ratio(1, 2)]);
        let b = Poly::from_roots(&[ratio(1, 2), rat(7)]);
        assert_eq!(a.resultant(&b), rat(0));
        // Res(t - a, t - b) = b - a up to sign conventions: here (a - b).
        let r = q(&[-3, 1]).resultant(&q(&[-5, 1]));
        assert_eq!(r, rat(-2));
    }

    #[test]
    fn roots_of_cyclotomic() {
        let p = Poly::new(vec![
            Complex::new(-1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        ]);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 5);
        for r in roots {
            assert!((r.powu(5) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn roots_of_wilkinson_like() {
        let p = Poly::from_roots(&(1..=8).map(rat).collect::<Vec<_>>()).to_complex();
        let mut roots: Vec<f64> = complex_roots(&p).iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-8, "{roots:?}");
        }
    }
}
