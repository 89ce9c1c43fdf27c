//! Sparse multivariate polynomials and square polynomial systems.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat_to_complex, Real, Scalar};

/// Polynomial in `nvars` variables; exponent vectors map to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::term(nvars, c, vec![0; nvars])
    }

    /// The `i`-th coordinate function.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, T::one(), e)
    }

    pub fn term(nvars: usize, c: T, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: T) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, T::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.nvars);
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(x).fold(T::one(), |m, (&k, xi)| m * ipow(xi, k));
            acc + c.clone() * mono
        })
    }

    pub fn partial(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut d = e.clone();
                d[i] -= 1;
                (d, c.clone() * T::from_i64(i64::from(e[i])))
            }),
        )
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MPoly<U> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Largest coefficient magnitude.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

impl MPoly<BigRational> {
    pub fn to_complex<F: Real>(&self) -> MPoly<Complex<F>> {
        self.map(rat_to_complex)
    }
}

pub(crate) fn ipow<T: Scalar>(x: &T, k: u32) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

impl<T: Scalar> Add for &MPoly<T> {
    type Output = MPoly<T>;
    fn add(self, rhs: &MPoly<T>) -> MPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &MPoly<T> {
    type Output = MPoly<T>;
    fn sub(self, rhs: &MPoly<T>) -> MPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &MPoly<T> {
    type Output = MPoly<T>;
    fn neg(self) -> MPoly<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Mul for &MPoly<T> {
    type Output = MPoly<T>;
    fn mul(self, rhs: &MPoly<T>) -> MPoly<T> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, c.clone() * d.clone());
            }
        }
        out
    }
}

/// Equations sharing one set of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem<T> {
    nvars: usize,
    eqs: Vec<MPoly<T>>,
}

impl<T: Scalar> PolySystem<T> {
    pub fn new(eqs: Vec<MPoly<T>>) -> Result<Self> {
        let nvars = eqs.first().map_or(0, MPoly::nvars);
        if eqs.iter().any(|e| e.nvars() != nvars) {
            return Err(Error::Usage("equations use different variable counts".into()));
        }
        Ok(PolySystem { nvars, eqs })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[MPoly<T>] {
        &self.eqs
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.eqs.len() == self.nvars
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.eqs.iter().map(MPoly::total_degree).collect()
    }

    pub fn evaluate(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x)?;
        Ok(self.eqs.iter().map(|e| e.eval(x)).collect())
    }

    pub fn jacobian(&self, x: &[T]) -> Result<Matrix<T>> {
        self.check_dim(x)?;
        Ok(Matrix::from_rows(
            self.eqs.iter().map(|e| (0..self.nvars).map(|i| e.partial(i).eval(x)).collect()).collect(),
        ))
    }

    fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() != self.nvars {
            return Err(Error::Usage(format!("point has {} coordinates, system has {} variables", x.len(), self.nvars)));
        }
        Ok(())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> PolySystem<U> {
        PolySystem { nvars: self.nvars, eqs: self.eqs.iter().map(|e| e.map(f)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn square_minus_one() {
        let x = MPoly::<C>::var(1, 0);
        let sys = PolySystem::new(vec![&x.pow(2) - &MPoly::constant(1, c(1.0))]).unwrap();
        assert_eq!(sys.evaluate(&[c(1.0)]).unwrap(), vec![c(0.0)]);
        assert_eq!(sys.jacobian(&[c(1.0)]).unwrap()[(0, 0)], c(2.0));
        assert!(sys.evaluate(&[c(1.0), c(2.0)]).is_err());
    }

    #[test]
    fn linear_jacobian_is_constant() {
        let (x, y) = (MPoly::<f64>::var(2, 0), MPoly::<f64>::var(2, 1));
        let sys = PolySystem::new(vec![&x.scale(&2.0) + &y, &x - &y.scale(&3.0)]).unwrap();
        let j1 = sys.jacobian(&[0.5, -1.0]).unwrap();
        let j2 = sys.jacobian(&[7.0, 3.0]).unwrap();
        assert_eq!(j1, j2);
    }

    #[test]
    fn products_and_degrees() {
        let (x, y) = (MPoly::<f64>::var(2, 0), MPoly::<f64>::var(2, 1));
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert_eq!(p.total_degree(), 2);
        assert_eq!(p.partial(1), y.scale(&-2.0));
    }
}
