//! Curve counts on K3 surfaces, local singularity computations, incidence
//! systems for rational curves, and the monodromy of plane-curve bitangents.
//!
//! Exact parts work over [`Rational`]. The numerical parts are generic over a
//! [`scalar::Real`] type; the aliases below fix it to `f64`.

pub mod bipoly;
pub mod error;
pub mod glue;
pub mod homotopy;
pub mod incidence;
pub mod linalg;
pub mod local;
pub mod monodromy;
pub mod parse;
pub mod permgroup;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Complex64 = num_complex::Complex<f64>;

pub type RationalPoly = poly::Poly<Rational>;
pub type RationalMatrix = linalg::Matrix<Rational>;
pub type RationalMPoly = homotopy::MPoly<Rational>;
pub type ComplexMPoly = homotopy::MPoly<Complex64>;
pub type ComplexSystem = homotopy::PolySystem<Complex64>;
pub type SolutionSet = homotopy::SolutionSet<f64>;
pub type PlaneCurve = monodromy::PlaneCurve<f64>;
pub type BitangentFibre = monodromy::BitangentFibre<f64>;
pub type LoopSpec = monodromy::LoopSpec<f64>;
