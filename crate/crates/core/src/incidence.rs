//! Linear incidence systems for rational curves through prescribed points.
//!
//! Parametrizations are binary forms in `(a, b)`. A form of degree `d` is
//! stored as its coefficient vector `c` with `c[i]` the coefficient of
//! `a^(d-i) b^i`, so that setting `a = 1` gives the polynomial `Σ c[i] u^i`
//! in the affine parameter `u = b / a`. The parameter `[0:1]` is `u = ∞`.
//!
//! Constraint solving is exact over the rationals. Floating point only
//! enters when isolating the complex roots of exactly computed univariate
//! polynomials.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::homotopy::MPoly;
use crate::linalg::Matrix;
use crate::local::{milnor_number, Length};
use crate::parse::format_polynomial;
use crate::poly::{complex_roots, formal_resultant, Poly};
use crate::rng::{random_rational, random_rational_avoiding, SeedTree};
use crate::scalar::{rat, rat_to_f64};

type Q = BigRational;
type C64 = Complex<f64>;

mod rational_rows {
    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.iter()
            .map(|r| r.iter().map(|q| q.trim().parse::<BigRational>().map_err(D::Error::custom)).collect())
            .collect()
    }
}

fn distinct_avoiding_01(values: &[Q], name: &str) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() || v.is_one() {
            return Err(Error::Domain(format!("{name}{} = {v} must differ from 0 and 1", i + 1)));
        }
        if values[..i].contains(v) {
            return Err(Error::Domain(format!("{name} values must be pairwise distinct, {v} repeats")));
        }
    }
    Ok(())
}

/// Four points on the line `z = 0` of the plane: `[0:1:0]`, `[1:0:0]`,
/// `[1:1:0]` are implicit and `mu` lists the remaining `[1:μ:0]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointConfigP2 {
    #[serde(serialize_with = "serialize_rationals")]
    pub mu: Vec<Q>,
}

impl PointConfigP2 {
    /// A quartic meets the line in four points and three are already fixed,
    /// so exactly one `μ` is accepted.
    pub fn new(mu: Vec<Q>) -> Result<Self> {
        if mu.len() != 1 {
            return Err(Error::Domain(format!("a plane quartic meets z = 0 in one point beyond the three base points; got {} values of mu", mu.len())));
        }
        distinct_avoiding_01(&mu, "mu")?;
        Ok(PointConfigP2 { mu })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        PointConfigP2 { mu: vec![random_rational_avoiding(rng, &[Q::zero(), Q::one()])] }
    }
}

/// Six points on the diagonal of `P¹ × P¹`: `[0:1] ↦ ([0:1],[0:1])`,
/// `[1:0] ↦ ([1:0],[1:0])`, `[1:1] ↦ ([1:1],[1:1])` and
/// `[1:λᵢ] ↦ ([1:μᵢ],[1:μᵢ])` for `i = 1, 2, 3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointConfigQuadric {
    #[serde(serialize_with = "serialize_rationals")]
    pub mu: [Q; 3],
    #[serde(serialize_with = "serialize_rationals")]
    pub lambda: [Q; 3],
}

impl PointConfigQuadric {
    pub fn new(mu: [Q; 3], lambda: [Q; 3]) -> Result<Self> {
        distinct_avoiding_01(&mu, "mu")?;
        distinct_avoiding_01(&lambda, "lambda")?;
        Ok(PointConfigQuadric { mu, lambda })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        PointConfigQuadric { mu: random_triple(rng), lambda: random_triple(rng) }
    }
}

fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> [Q; 3] {
    let mut out: Vec<Q> = Vec::with_capacity(3);
    while out.len() < 3 {
        let mut forbidden = vec![Q::zero(), Q::one()];
        forbidden.extend(out.iter().cloned());
        out.push(random_rational_avoiding(rng, &forbidden));
    }
    [out[0].clone(), out[1].clone(), out[2].clone()]
}

fn serialize_rationals<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// `[a:b] ↦ [p:q:r]` into the plane.
    P2,
    /// `[a:b] ↦ ([p:q], [r:s])` into `P¹ × P¹`.
    Quadric,
}

impl Target {
    fn components(self) -> usize {
        match self {
            Target::P2 => 3,
            Target::Quadric => 4,
        }
    }

    /// Pairs of components whose 2×2 minors cut out coincidences.
    fn minor_pairs(self) -> &'static [(usize, usize)] {
        match self {
            Target::P2 => &[(0, 1), (0, 2), (1, 2)],
            Target::Quadric => &[(0, 1), (2, 3)],
        }
    }

    /// Groups of components that must have no common zero.
    fn blocks(self) -> &'static [&'static [usize]] {
        match self {
            Target::P2 => &[&[0, 1, 2]],
            Target::Quadric => &[&[0, 1], &[2, 3]],
        }
    }
}

/// A rational curve given by binary forms of a common degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamCurve {
    pub target: Target,
    pub degree: u32,
    #[serde(with = "rational_rows")]
    pub polys: Vec<Vec<Q>>,
}

/// A point of the parameter line, as the affine coordinate `u = b / a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Finite([f64; 2]),
    Infinity,
}

impl Param {
    fn from_homogeneous(a: C64, b: C64) -> Self {
        if a.norm() <= 1e-12 * b.norm() {
            Param::Infinity
        } else {
            let u = b / a;
            let im = if u.im.abs() <= 1e-12 * u.norm() { 0.0 } else { u.im };
            Param::Finite([u.re, im])
        }
    }

    fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            Param::Finite([re, im]) => (0, *re, *im),
            Param::Infinity => (1, 0.0, 0.0),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Param::Infinity)
    }
}

fn param_order(a: &Param, b: &Param) -> std::cmp::Ordering {
    let (ka, kb) = (a.sort_key(), b.sort_key());
    ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.total_cmp(&kb.2))
}

impl ParamCurve {
    pub fn new(target: Target, degree: u32, polys: Vec<Vec<Q>>) -> Result<Self> {
        let c = ParamCurve { target, degree, polys };
        c.validate()?;
        Ok(c)
    }

    /// Checks the shape and that each block of components has no common zero
    /// on the parameter line.
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::Domain("parametrizations need positive degree".into()));
        }
        if self.polys.len() != self.target.components() {
            return Err(Error::Domain(format!("{:?} curves need {} forms, got {}", self.target, self.target.components(), self.polys.len())));
        }
        let d = self.degree as usize;
        if let Some(bad) = self.polys.iter().position(|p| p.len() != d + 1) {
            return Err(Error::Domain(format!("form {bad} has {} coefficients, degree {d} needs {}", self.polys[bad].len(), d + 1)));
        }
        for block in self.target.blocks() {
            let at_infinity = block.iter().all(|&k| self.polys[k][d].is_zero());
            let g = block.iter().fold(Poly::zero(), |g, &k| g.gcd(&self.affine(k)));
            if at_infinity || g.degree() != Some(0) {
                return Err(Error::Domain(format!("forms {block:?} share a zero on the parameter line")));
            }
        }
        Ok(())
    }

    /// Component `k` with `a = 1`.
    pub fn affine(&self, k: usize) -> Poly<Q> {
        Poly::new(self.polys[k].clone())
    }

    fn padded(&self, k: usize) -> Vec<Q> {
        self.polys[k].clone()
    }

    /// Exact value of every component at `[a:b]`.
    pub fn eval(&self, a: &Q, b: &Q) -> Vec<Q> {
        let d = self.degree as usize;
        self.polys
            .iter()
            .map(|c| (0..=d).fold(Q::zero(), |acc, i| acc + c[i].clone() * pow(a, d - i) * pow(b, i)))
            .collect()
    }

    /// Does `[a:b]` map to the given point? Points are homogeneous triples in
    /// the plane and pairs of homogeneous pairs on the quadric.
    pub fn maps_to(&self, a: &Q, b: &Q, point: &[Q]) -> bool {
        let v = self.eval(a, b);
        self.target.blocks().iter().all(|block| {
            let w: Vec<Q> = block.iter().map(|&k| v[k].clone()).collect();
            let z: Vec<Q> = block.iter().map(|&k| point[k].clone()).collect();
            proportional(&w, &z)
        })
    }

    /// The curve precomposed with `[a:b] ↦ [m00 a + m01 b : m10 a + m11 b]`.
    pub fn reparametrize(&self, m: &[[Q; 2]; 2]) -> ParamCurve {
        let d = self.degree as usize;
        let a = Poly::new(vec![m[0][0].clone(), m[0][1].clone()]);
        let b = Poly::new(vec![m[1][0].clone(), m[1][1].clone()]);
        let apow: Vec<Poly<Q>> = (0..=d).map(|k| poly_pow(&a, k)).collect();
        let bpow: Vec<Poly<Q>> = (0..=d).map(|k| poly_pow(&b, k)).collect();
        let polys = self
            .polys
            .iter()
            .map(|c| {
                let p = (0..=d).fold(Poly::zero(), |acc, i| acc + (apow[d - i].clone() * bpow[i].clone()).scale(&c[i]));
                pad(p.coeffs(), d + 1)
            })
            .collect();
        ParamCurve { target: self.target, degree: self.degree, polys }
    }
}

fn pow(x: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x.clone())
}

fn poly_pow(p: &Poly<Q>, k: usize) -> Poly<Q> {
    (0..k).fold(Poly::constant(Q::one()), |acc, _| acc * p.clone())
}

fn pad(c: &[Q], len: usize) -> Vec<Q> {
    let mut v = c.to_vec();
    v.resize(len, Q::zero());
    v
}

fn proportional(v: &[Q], w: &[Q]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return false;
    }
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i].clone() * w[j].clone() == v[j].clone() * w[i].clone()))
}

/// A rational matrix with row labels (point conditions) and column labels
/// (coefficient unknowns).
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceMatrix {
    pub entries: Matrix<Q>,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

impl IncidenceMatrix {
    pub fn rank(&self) -> usize {
        self.entries.rank(0.0)
    }

    pub fn kernel(&self) -> Vec<Vec<Q>> {
        self.entries.kernel(0.0)
    }

    pub fn columns(&self, cols: &[usize]) -> IncidenceMatrix {
        let rows: Vec<usize> = (0..self.entries.nrows()).collect();
        IncidenceMatrix {
            entries: self.entries.select(&rows, cols),
            rows: self.rows.clone(),
            cols: cols.iter().map(|&c| self.cols[c].clone()).collect(),
        }
    }
}

impl Serialize for IncidenceMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<Vec<String>> =
            (0..self.entries.nrows()).map(|i| self.entries.row(i).iter().map(|q| q.to_string()).collect()).collect();
        let mut st = s.serialize_struct("IncidenceMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn a_matrix(mu: &[Q; 3], lambda: &[Q; 3]) -> Matrix<Q> {
    let mut rows = vec![vec![rat(1), rat(1), rat(1), rat(-1), rat(-1), rat(-1)]];
    for (m, l) in mu.iter().zip(lambda) {
        rows.push(vec![
            m.clone(),
            m.clone() * l.clone(),
            m.clone() * pow(l, 2),
            -l.clone(),
            -pow(l, 2),
            -pow(l, 3),
        ]);
    }
    Matrix::from_rows(rows)
}

/// The 4×6 system on `(p₀, p₁, p₂, q₁, q₂, q₃)` left after `p₃ = q₀ = 0`:
/// the `[1:1]` condition followed by the three `[1:λᵢ]` conditions.
#[allow(non_snake_case)]
pub fn build_A(cfg: &PointConfigQuadric) -> IncidenceMatrix {
    IncidenceMatrix {
        entries: a_matrix(&cfg.mu, &cfg.lambda),
        rows: std::iter::once("[1:1]".to_string()).chain(cfg.lambda.iter().map(|l| format!("[1:{l}]"))).collect(),
        cols: ["p0", "p1", "p2", "q1", "q2", "q3"].iter().map(|s| s.to_string()).collect(),
    }
}

/// Minors of the 4×3 block `A′` (last three columns of `A`) and the
/// μ-coefficient determinant of the rank-drop equations.
///
/// `Mᵢ` is the determinant of `A′` with row `i` removed, with no cofactor sign. The
/// `i`-th rank-drop equation is `det [colᵢ(A) | A′]`, which is affine-linear
/// in `μ`; expanding along the first column gives
/// `M₁ − μ₁λ₁^(i−1)M₂ + μ₂λ₂^(i−1)M₃ − μ₃λ₃^(i−1)M₄`. Its μ-coefficient
/// matrix therefore has determinant `M₂M₃M₄·V(λ)`, and `M₁ = −λ₁λ₂λ₃·V(λ)`
/// with `V` the Vandermonde determinant, so
/// `det_check = −M₁M₂M₃M₄ / (λ₁λ₂λ₃)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaMinors {
    pub minors: [Q; 4],
    /// Row `i`, column `k`: coefficient of `μ_k` in equation `i`.
    pub coefficients: [[Q; 3]; 3],
    /// Constant terms of the three equations.
    pub constants: [Q; 3],
    pub det_check: Q,
}

impl Serialize for GammaMinors {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let text = |v: &[Q]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("GammaMinors", 4)?;
        st.serialize_field("minors", &text(&self.minors))?;
        st.serialize_field("coefficients", &self.coefficients.iter().map(|r| text(r)).collect::<Vec<_>>())?;
        st.serialize_field("constants", &text(&self.constants))?;
        st.serialize_field("det_check", &self.det_check.to_string())?;
        st.end()
    }
}

fn gamma_values(a: &Matrix<Q>) -> [Q; 3] {
    std::array::from_fn(|i| a.select(&[0, 1, 2, 3], &[i, 3, 4, 5]).det())
}

pub fn gamma_minors(lambda: &[Q; 3]) -> Result<GammaMinors> {
    distinct_avoiding_01(lambda, "lambda")?;
    let zero = [Q::zero(), Q::zero(), Q::zero()];
    let a = a_matrix(&zero, lambda);
    let minors: [Q; 4] = std::array::from_fn(|i| {
        let rows: Vec<usize> = (0..4).filter(|&r| r != i).collect();
        a.select(&rows, &[3, 4, 5]).det()
    });
    let constants = gamma_values(&a);
    let mut coefficients: [[Q; 3]; 3] = std::array::from_fn(|_| zero.clone());
    for k in 0..3 {
        let mut mu = zero.clone();
        mu[k] = Q::one();
        let v = gamma_values(&a_matrix(&mu, lambda));
        for i in 0..3 {
            coefficients[i][k] = v[i].clone() - constants[i].clone();
        }
    }
    let det_check = Matrix::from_rows(coefficients.iter().map(|r| r.to_vec()).collect()).det();
    let product = minors.iter().fold(Q::one(), |acc, m| acc * m.clone());
    let lambdas = lambda.iter().fold(Q::one(), |acc, l| acc * l.clone());
    let expected = -product / lambdas;
    if det_check != expected || det_check.is_zero() {
        return Err(Error::Internal(format!("μ-coefficient determinant {det_check} differs from −M1M2M3M4/(λ1λ2λ3) = {expected}")));
    }
    Ok(GammaMinors { minors, coefficients, constants, det_check })
}

/// The configuration with the given `λ` whose `μ` solve the three rank-drop
/// equations, so that `build_A` has rank 3.
pub fn gamma_configuration(lambda: &[Q; 3]) -> Result<PointConfigQuadric> {
    let g = gamma_minors(lambda)?;
    let m = Matrix::from_rows(g.coefficients.iter().map(|r| r.to_vec()).collect());
    let rhs: Vec<Q> = g.constants.iter().map(|c| -c.clone()).collect();
    let mu = m.solve(&rhs, 0.0).ok_or_else(|| Error::Internal("rank-drop equations are singular".into()))?;
    PointConfigQuadric::new([mu[0].clone(), mu[1].clone(), mu[2].clone()], lambda.clone())
}

/// Variable order of [`build_f`].
pub const F_VARIABLES: [&str; 9] = ["r1", "r3", "p1", "p2", "p3", "q1", "q2", "q3", "q4"];
const R1: usize = 0;
const R3: usize = 1;
const LINEAR_VARS: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];

/// Outcome of the structural checks behind the irreducibility of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FCertificate {
    /// Every `pᵢ, qⱼ` occurs, only linearly, and no term holds two of them.
    pub multilinear: bool,
    /// The coefficient of `p₁` is `μ·r₃³·(r₁ − r₃)`.
    pub p1_coefficient: bool,
    pub not_divisible_by_r3: bool,
    pub not_divisible_by_r1_minus_r3: bool,
}

impl FCertificate {
    pub fn passed(&self) -> bool {
        self.multilinear && self.p1_coefficient && self.not_divisible_by_r3 && self.not_divisible_by_r1_minus_r3
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FPolynomial {
    pub mu: Q,
    pub poly: MPoly<Q>,
    pub certificate: FCertificate,
}

impl Serialize for FPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FPolynomial", 4)?;
        st.serialize_field("mu", &self.mu.to_string())?;
        st.serialize_field("variables", &F_VARIABLES)?;
        st.serialize_field("polynomial", &format_polynomial(&self.poly, &F_VARIABLES))?;
        st.serialize_field("certificate", &self.certificate)?;
        st.end()
    }
}

fn monomial(c: Q, r1: u32, r3: u32, linear: Option<usize>) -> MPoly<Q> {
    let mut e = vec![0; 9];
    e[R1] = r1;
    e[R3] = r3;
    if let Some(k) = linear {
        e[k] = 1;
    }
    MPoly::term(9, c, e)
}

/// Sets variable `var` to zero.
fn restrict_zero(p: &MPoly<Q>, var: usize) -> MPoly<Q> {
    MPoly::from_terms(p.nvars(), p.terms().filter(|(e, _)| e[var] == 0).map(|(e, c)| (e.clone(), c.clone())))
}

/// Replaces variable `from` by variable `to`.
fn identify(p: &MPoly<Q>, from: usize, to: usize) -> MPoly<Q> {
    MPoly::from_terms(
        p.nvars(),
        p.terms().map(|(e, c)| {
            let mut e = e.clone();
            e[to] += e[from];
            e[from] = 0;
            (e, c.clone())
        }),
    )
}

/// Coefficient of the linear variable `var`.
fn linear_coefficient(p: &MPoly<Q>, var: usize) -> MPoly<Q> {
    MPoly::from_terms(
        p.nvars(),
        p.terms().filter(|(e, _)| e[var] == 1).map(|(e, c)| {
            let mut e = e.clone();
            e[var] = 0;
            (e, c.clone())
        }),
    )
}

/// The hypersurface `F` in `P[r₁:r₃:p₁:p₂:p₃:q₁:q₂:q₃:q₄]` cut out by the
/// condition `[1:λ] ↦ [1:μ:0]` once `λ = r₁/r₃` and
/// `p₀ = q₁+q₂+q₃+q₄ − p₁ − p₂ − p₃` are substituted and denominators cleared:
///
/// `F = μ(r₃⁴(q₁+q₂+q₃+q₄ − p₁−p₂−p₃) + p₁r₁r₃³ + p₂r₁²r₃² + p₃r₁³r₃)
///      − q₁r₁r₃³ − q₂r₁²r₃² − q₃r₁³r₃ − q₄r₁⁴`.
pub fn build_f(mu: &Q) -> Result<FPolynomial> {
    if mu.is_zero() || mu.is_one() {
        return Err(Error::Domain(format!("mu = {mu} must differ from 0 and 1")));
    }
    let (p1, p2, p3, q1, q2, q3, q4) = (2, 3, 4, 5, 6, 7, 8);
    let m = mu.clone();
    let mut f = MPoly::zero(9);
    for q in [q1, q2, q3, q4] {
        f = &f + &monomial(m.clone(), 0, 4, Some(q));
    }
    for (p, r1) in [(p1, 1), (p2, 2), (p3, 3)] {
        f = &f + &monomial(-m.clone(), 0, 4, Some(p));
        f = &f + &monomial(m.clone(), r1, 4 - r1, Some(p));
    }
    for (q, r1) in [(q1, 1), (q2, 2), (q3, 3), (q4, 4)] {
        f = &f + &monomial(rat(-1), r1, 4 - r1, Some(q));
    }
    let certificate = certify_f(&f, mu);
    if !certificate.passed() {
        return Err(Error::Internal(format!("F failed its structural certification: {certificate:?}")));
    }
    Ok(FPolynomial { mu: mu.clone(), poly: f, certificate })
}

/// Runs the checks of the irreducibility argument on a candidate `F`.
pub fn certify_f(f: &MPoly<Q>, mu: &Q) -> FCertificate {
    let multilinear = f.terms().all(|(e, _)| LINEAR_VARS.iter().map(|&k| e[k]).sum::<u32>() <= 1)
        && LINEAR_VARS.iter().all(|&k| f.terms().any(|(e, _)| e[k] == 1));
    let expected_p1 = &monomial(mu.clone(), 1, 3, None) - &monomial(mu.clone(), 0, 4, None);
    let p1_coefficient = linear_coefficient(f, 2) == expected_p1;
    let not_divisible_by_r3 = !restrict_zero(f, R3).is_zero();
    let not_divisible_by_r1_minus_r3 = !identify(f, R1, R3).is_zero();
    FCertificate { multilinear, p1_coefficient, not_divisible_by_r3, not_divisible_by_r1_minus_r3 }
}

/// `F` with `r₃ = 0`.
pub fn f_mod_r3(f: &FPolynomial) -> MPoly<Q> {
    restrict_zero(&f.poly, R3)
}

/// `F` with `r₁ = r₃`.
pub fn f_at_r1_eq_r3(f: &FPolynomial) -> MPoly<Q> {
    identify(&f.poly, R1, R3)
}

/// Labels `x0 … x{d}` for the coefficients of a form named `x`.
fn coefficient_labels(names: &[&str], degree: usize) -> Vec<String> {
    names.iter().flat_map(|n| (0..=degree).map(move |i| format!("{n}{i}"))).collect()
}

/// Row enforcing that coefficient `index` of a form vanishes.
fn unit_row(len: usize, index: usize) -> Vec<Q> {
    let mut r = vec![Q::zero(); len];
    r[index] = Q::one();
    r
}

/// The 8×15 system of the plane case on `(p₀…p₄, q₀…q₄, r₀…r₄)`.
pub fn p2_conditions(mu: &Q, lambda: &Q) -> IncidenceMatrix {
    let powers: Vec<Q> = (0..5).map(|i| pow(lambda, i)).collect();
    let mut rows = vec![unit_row(15, 4), unit_row(15, 5), unit_row(15, 10), unit_row(15, 14)];
    let mut sums = vec![Q::zero(); 15];
    for i in 0..5 {
        sums[i] = Q::one();
        sums[5 + i] = rat(-1);
    }
    rows.push(sums);
    let mut rsum = vec![Q::zero(); 15];
    let mut rlam = vec![Q::zero(); 15];
    let mut pq = vec![Q::zero(); 15];
    for i in 0..5 {
        rsum[10 + i] = Q::one();
        rlam[10 + i] = powers[i].clone();
        pq[i] = mu.clone() * powers[i].clone();
        pq[5 + i] = -powers[i].clone();
    }
    rows.push(rsum);
    rows.push(pq);
    rows.push(rlam);
    IncidenceMatrix {
        entries: Matrix::from_rows(rows),
        rows: ["p4", "q0", "r0", "r4", "[1:1] x=y", "[1:1] z", "[1:lambda] y=mu*x", "[1:lambda] z"].iter().map(|s| s.to_string()).collect(),
        cols: coefficient_labels(&["p", "q", "r"], 4),
    }
}

/// The system of one quadric block on `(p₀…p₃, q₀…q₃)`: `p₃ = 0`, `q₀ = 0`,
/// the `[1:1]` condition and one row per `(μ, λ)` pair.
pub fn quadric_block_conditions(mu: &[Q], lambda: &[Q]) -> IncidenceMatrix {
    let mut rows = vec![unit_row(8, 3), unit_row(8, 4)];
    let mut sums = vec![Q::zero(); 8];
    for i in 0..4 {
        sums[i] = Q::one();
        sums[4 + i] = rat(-1);
    }
    rows.push(sums);
    let mut labels = vec!["p3".to_string(), "q0".to_string(), "[1:1]".to_string()];
    for (m, l) in mu.iter().zip(lambda) {
        let mut r = vec![Q::zero(); 8];
        for i in 0..4 {
            r[i] = m.clone() * pow(l, i);
            r[4 + i] = -pow(l, i);
        }
        rows.push(r);
        labels.push(format!("[1:{l}]"));
    }
    IncidenceMatrix { entries: Matrix::from_rows(rows), rows: labels, cols: coefficient_labels(&["p", "q"], 3) }
}

/// Scales a rational vector to coprime integers with a positive first
/// nonzero entry.
fn primitive(v: Vec<Q>) -> Vec<Q> {
    use num_integer::Integer;
    let denom = v.iter().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|q| (q * Q::from_integer(denom.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return v;
    }
    let sign = if ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative()) { -1 } else { 1 };
    ints.into_iter().map(|n| Q::from_integer(n * sign / &g)).collect()
}

fn random_kernel_element<R: Rng + ?Sized>(kernel: &[Vec<Q>], rng: &mut R) -> Vec<Q> {
    let n = kernel.first().map_or(0, |v| v.len());
    let mut out = vec![Q::zero(); n];
    for v in kernel {
        let c = random_rational(rng);
        for (o, x) in out.iter_mut().zip(v) {
            *o += c.clone() * x.clone();
        }
    }
    primitive(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCurve {
    pub curve: ParamCurve,
    #[serde(serialize_with = "serialize_rationals")]
    pub lambda: Vec<Q>,
}

/// What to sample: a plane quartic through four collinear points, or a
/// `(3,3)` curve through six diagonal points of the quadric.
#[derive(Clone, Debug, PartialEq)]
pub enum IncidenceConfig {
    P2(PointConfigP2),
    Quadric(PointConfigQuadric),
}

pub const SAMPLE_ATTEMPTS: usize = 32;

pub fn sample_curve<R: Rng + ?Sized>(cfg: &IncidenceConfig, rng: &mut R) -> Result<SampledCurve> {
    match cfg {
        IncidenceConfig::P2(c) => sample_p2(c, rng),
        IncidenceConfig::Quadric(c) => sample_quadric(c, rng).map(|curve| SampledCurve { curve, lambda: c.lambda.to_vec() }),
    }
}

/// Draws `λ`, solves the plane system exactly and returns a random member
/// of its 7-dimensional solution space.
pub fn sample_p2<R: Rng + ?Sized>(cfg: &PointConfigP2, rng: &mut R) -> Result<SampledCurve> {
    let mu = &cfg.mu[0];
    let mut tried = Vec::new();
    for _ in 0..SAMPLE_ATTEMPTS {
        let lambda = random_rational_avoiding(rng, &[Q::zero(), Q::one()]);
        let system = p2_conditions(mu, &lambda);
        let kernel = system.kernel();
        if system.rank() != 8 || kernel.len() != 7 {
            tried.push(lambda.to_string());
            continue;
        }
        let v = random_kernel_element(&kernel, rng);
        let polys = vec![v[0..5].to_vec(), v[5..10].to_vec(), v[10..15].to_vec()];
        let Ok(curve) = ParamCurve::new(Target::P2, 4, polys) else {
            tried.push(lambda.to_string());
            continue;
        };
        let points = [
            (rat(0), rat(1), [rat(0), rat(1), rat(0)]),
            (rat(1), rat(0), [rat(1), rat(0), rat(0)]),
            (rat(1), rat(1), [rat(1), rat(1), rat(0)]),
            (rat(1), lambda.clone(), [rat(1), mu.clone(), rat(0)]),
        ];
        if !points.iter().all(|(a, b, p)| curve.maps_to(a, b, p)) {
            return Err(Error::Internal(format!("sampled quartic misses a prescribed point (lambda = {lambda})")));
        }
        return Ok(SampledCurve { curve, lambda: vec![lambda] });
    }
    Err(Error::Numerical(format!("no valid plane quartic after {SAMPLE_ATTEMPTS} draws of lambda: {}", tried.join(", "))))
}

fn diagonal_points(mu: &[Q], lambda: &[Q]) -> Vec<(Q, Q, [Q; 4])> {
    let mut pts = vec![
        (rat(0), rat(1), [rat(0), rat(1), rat(0), rat(1)]),
        (rat(1), rat(0), [rat(1), rat(0), rat(1), rat(0)]),
        (rat(1), rat(1), [rat(1), rat(1), rat(1), rat(1)]),
    ];
    for (m, l) in mu.iter().zip(lambda) {
        pts.push((rat(1), l.clone(), [rat(1), m.clone(), rat(1), m.clone()]));
    }
    pts
}

fn sample_blocks<R: Rng + ?Sized>(system: &IncidenceMatrix, rng: &mut R) -> Result<Vec<Vec<Q>>> {
    let kernel = system.kernel();
    if kernel.len() != 2 {
        return Err(Error::Domain(format!("block system has a {}-dimensional kernel instead of 2", kernel.len())));
    }
    let first = random_kernel_element(&kernel, rng);
    let second = random_kernel_element(&kernel, rng);
    Ok(vec![first[0..4].to_vec(), first[4..8].to_vec(), second[0..4].to_vec(), second[4..8].to_vec()])
}

/// Samples a `(3,3)` curve through the six diagonal points of `cfg`; the
/// matrix `build_A(cfg)` must have full rank.
pub fn sample_quadric<R: Rng + ?Sized>(cfg: &PointConfigQuadric, rng: &mut R) -> Result<ParamCurve> {
    let a = build_A(cfg);
    if a.rank() != 4 {
        return Err(Error::Domain(format!("A has rank {} for lambda = {:?}", a.rank(), cfg.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>())));
    }
    let system = quadric_block_conditions(&cfg.mu, &cfg.lambda);
    for _ in 0..SAMPLE_ATTEMPTS {
        let polys = sample_blocks(&system, rng)?;
        let Ok(curve) = ParamCurve::new(Target::Quadric, 3, polys) else { continue };
        if !diagonal_points(&cfg.mu, &cfg.lambda).iter().all(|(a, b, p)| curve.maps_to(a, b, p)) {
            return Err(Error::Internal("sampled (3,3) curve misses a diagonal point".into()));
        }
        return Ok(curve);
    }
    Err(Error::Numerical(format!("no valid (3,3) curve after {SAMPLE_ATTEMPTS} kernel draws")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublePointKind {
    /// Two branches with distinct tangent directions.
    Node,
    /// Two branches sharing a tangent direction.
    CuspAdjacent,
}

/// An unordered pair of parameters with the same image.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublePoint {
    pub params: [Param; 2],
    pub kind: DoublePointKind,
    /// Set when root isolation could not separate this pair from another.
    pub unresolved: bool,
}

/// `h_k(s, t)` as a polynomial in `x = s + t`, `y = st`.
fn complete_symmetric(k: usize) -> Vec<BiPoly> {
    let mut h = vec![BiPoly::constant(Q::one()), BiPoly::x()];
    for i in 2..=k {
        let next = &(&BiPoly::x() * &h[i - 1]) - &(&BiPoly::y() * &h[i - 2]);
        h.push(next);
    }
    h.truncate(k + 1);
    h
}

/// `(u(s)v(t) − u(t)v(s)) / (s − t)` written in `x = s + t`, `y = st`.
fn symmetric_minor(u: &[Q], v: &[Q]) -> BiPoly {
    let n = u.len();
    let h = complete_symmetric(n);
    let mut g = BiPoly::zero();
    for i in 0..n {
        for j in 0..i {
            let c = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            if c.is_zero() {
                continue;
            }
            let term = &BiPoly::term(c, 0, j as u32) * &h[i - j - 1];
            g = &g + &term;
        }
    }
    g
}

fn degrees(p: &BiPoly) -> (usize, usize) {
    p.terms().fold((0, 0), |(dx, dy), ((i, j), _)| (dx.max(*i as usize), dy.max(*j as usize)))
}

/// Coefficients in `y` of `p(x0, y)`.
fn specialize_x(p: &BiPoly, x0: &Q, dy: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dy + 1];
    for ((i, j), c) in p.terms() {
        out[*j as usize] += c.clone() * pow(x0, *i as usize);
    }
    out
}

/// `Res_y(g1, g2)` as a polynomial in `x`, by evaluation at integers and
/// exact interpolation, checked at one extra point.
fn eliminate_y(g1: &BiPoly, g2: &BiPoly) -> Result<Poly<Q>> {
    let (d1, n1) = degrees(g1);
    let (d2, n2) = degrees(g2);
    let bound = n2 * d1 + n1 * d2;
    let at = |x: &Q| formal_resultant(&specialize_x(g1, x, n1), &specialize_x(g2, x, n2));
    let xs: Vec<Q> = (0..=bound as i64).map(rat).collect();
    let ys: Vec<Q> = xs.iter().map(at).collect();
    let r = Poly::interpolate(&xs, &ys);
    let check = rat(bound as i64 + 7);
    if r.eval(&check) != at(&check) {
        return Err(Error::Internal("resultant interpolation failed its check point".into()));
    }
    Ok(r)
}

/// Value of `p` at complex `(x, y)` and the sum of the term magnitudes.
fn eval_c(p: &BiPoly, x: C64, y: C64) -> (C64, f64) {
    p.terms().fold((C64::new(0.0, 0.0), 0.0), |(v, m), ((i, j), c)| {
        let t = x.powu(*i) * y.powu(*j) * rat_to_f64(c);
        (v + t, m + t.norm())
    })
}

fn relative_residual(gens: &[BiPoly], x: C64, y: C64) -> f64 {
    gens.iter()
        .map(|g| {
            let (v, m) = eval_c(g, x, y);
            if m == 0.0 {
                0.0
            } else {
                v.norm() / m
            }
        })
        .fold(0.0, f64::max)
}

fn complex_poly(coeffs: &[Q]) -> Poly<C64> {
    let c: Vec<C64> = coeffs.iter().map(|q| C64::new(rat_to_f64(q), 0.0)).collect();
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut c: Vec<C64> = if scale > 0.0 { c.iter().map(|z| z / scale).collect() } else { c };
    while c.last().is_some_and(|z| z.norm() < 1e-14) {
        c.pop();
    }
    Poly::new(c)
}

fn complex_coeffs(p: &[Q]) -> Vec<C64> {
    p.iter().map(|q| C64::new(rat_to_f64(q), 0.0)).collect()
}

fn horner(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, x| acc * t + x)
}

fn horner_derivative(c: &[C64], t: C64) -> C64 {
    c.iter().enumerate().skip(1).rev().fold(C64::new(0.0, 0.0), |acc, (i, x)| acc * t + x * i as f64)
}

const DOUBLE_POINT_SEED: u64 = 0x646f_7562_6c65;
const MOBIUS_ATTEMPTS: u64 = 8;
/// Relative residual below which a numerical common root is accepted.
const COMMON_ROOT_TOL: f64 = 1e-8;
/// Relative gap below which the two parameters of a pair are identified.
const SAME_PARAMETER_TOL: f64 = 1e-5;
const TANGENT_TOL: f64 = 1e-6;
const CLUSTER_TOL: f64 = 1e-7;

fn random_mobius<R: Rng + ?Sized>(rng: &mut R) -> [[Q; 2]; 2] {
    loop {
        let m: [[Q; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| rat(rng.gen_range(-6..=6))));
        if m[0][0].clone() * m[1][1].clone() != m[0][1].clone() * m[1][0].clone() {
            return m;
        }
    }
}

/// Does the parameter `[0:1]` share its image with a finite parameter?
fn infinity_is_special(c: &ParamCurve) -> bool {
    let d = c.degree as usize;
    let g = c.target.minor_pairs().iter().fold(Poly::zero(), |g, &(i, j)| {
        g.gcd(&(c.affine(i).scale(&c.polys[j][d]) - c.affine(j).scale(&c.polys[i][d])))
    });
    g.is_zero() || g.degree() != Some(0)
}

/// All unordered pairs `{s, t}`, `s ≠ t`, with `φ(s) = φ(t)`.
///
/// The curve is first moved by a fixed-seed random Möbius transformation so
/// that `[0:1]` is not special. Each coincidence minor, divided by `s − t`,
/// is a symmetric polynomial and is rewritten in `e₁ = s + t`, `e₂ = st`;
/// `e₂` is eliminated by resultants, exactly. In the plane the minors
/// `(p,q), (p,r)` also vanish on pairs of zeros of `p`; taking the gcd with
/// the resultant of `(p,q), (q,r)` removes them. Pairs with `s = t` are the
/// non-immersion points and are not listed.
pub fn double_points(c: &ParamCurve) -> Result<Vec<DoublePoint>> {
    c.validate()?;
    let mut rng = SeedTree::new(DOUBLE_POINT_SEED).stream("mobius");
    for _ in 0..MOBIUS_ATTEMPTS {
        let m = random_mobius(&mut rng);
        let moved = c.reparametrize(&m);
        if infinity_is_special(&moved) {
            continue;
        }
        let gens: Vec<BiPoly> =
            c.target.minor_pairs().iter().map(|&(i, j)| symmetric_minor(&moved.padded(i), &moved.padded(j))).collect();
        let e1 = match c.target {
            Target::P2 => eliminate_y(&gens[0], &gens[1])?.gcd(&eliminate_y(&gens[0], &gens[2])?),
            Target::Quadric => eliminate_y(&gens[0], &gens[1])?,
        };
        if e1.is_zero() {
            return Err(Error::Domain("coincidence minors share a component; the map is not birational".into()));
        }
        let (pairs, unmatched) = collect_pairs(&moved, &m, &gens, &e1.squarefree());
        if unmatched == 0 {
            return Ok(pairs);
        }
    }
    Err(Error::Numerical(format!("no Möbius chart in {MOBIUS_ATTEMPTS} attempts gave well-conditioned double points")))
}

/// Gauss-Newton on all generators from a numerical common root.
fn polish(gens: &[BiPoly], grads: &[(BiPoly, BiPoly)], mut x: C64, mut y: C64) -> (C64, C64) {
    for _ in 0..8 {
        let (mut a11, mut a12, mut a22) = (0.0, C64::new(0.0, 0.0), 0.0);
        let (mut b1, mut b2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (g, (gx, gy)) in gens.iter().zip(grads) {
            let (v, mag) = eval_c(g, x, y);
            let w = if mag > 0.0 { 1.0 / mag } else { 1.0 };
            let (jx, jy) = (eval_c(gx, x, y).0 * w, eval_c(gy, x, y).0 * w);
            let v = v * w;
            a11 += jx.norm_sqr();
            a22 += jy.norm_sqr();
            a12 += jx.conj() * jy;
            b1 += jx.conj() * v;
            b2 += jy.conj() * v;
        }
        let det = a11 * a22 - a12.norm_sqr();
        if det.abs() <= f64::EPSILON * a11 * a22 {
            break;
        }
        let dx = (b1 * a22 - a12 * b2) / det;
        let dy = (b2 * a11 - a12.conj() * b1) / det;
        x -= dx;
        y -= dy;
        if dx.norm() + dy.norm() <= 1e-15 * (x.norm() + y.norm()) {
            break;
        }
    }
    (x, y)
}

/// Double points found from the roots of `e1`, and how many roots had no
/// matching `e2`.
fn collect_pairs(moved: &ParamCurve, m: &[[Q; 2]; 2], gens: &[BiPoly], e1: &Poly<Q>) -> (Vec<DoublePoint>, usize) {
    let grads: Vec<(BiPoly, BiPoly)> = gens.iter().map(|g| (g.dx(), g.dy())).collect();
    let mut unmatched = 0;
    let roots = if e1.degree().unwrap_or(0) == 0 { Vec::new() } else { complex_roots(&complex_poly(e1.coeffs())) };
    let clustered = |k: usize| roots.iter().enumerate().any(|(j, r)| j != k && (r - roots[k]).norm() < CLUSTER_TOL * (1.0 + r.norm()));
    let (_, dy) = degrees(&gens[0]);
    let mut out = Vec::new();
    for (k, &x) in roots.iter().enumerate() {
        let coeffs: Vec<C64> = (0..=dy)
            .map(|j| gens[0].terms().filter(|((_, jj), _)| *jj as usize == j).fold(C64::new(0.0, 0.0), |acc, ((i, _), c)| acc + x.powu(*i) * rat_to_f64(c)))
            .collect();
        let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut trimmed = coeffs.clone();
        while trimmed.last().is_some_and(|z| z.norm() <= 1e-12 * scale) {
            trimmed.pop();
        }
        let mut accepted: Vec<(C64, C64)> = Vec::new();
        for y in complex_roots(&Poly::new(trimmed)) {
            let (px, py) = polish(gens, &grads, x, y);
            if relative_residual(gens, px, py) < COMMON_ROOT_TOL
                && (px - x).norm() < CLUSTER_TOL * (1.0 + x.norm())
                && !accepted.iter().any(|(_, a)| (a - py).norm() < 1e-6 * (1.0 + py.norm()))
            {
                accepted.push((px, py));
            }
        }
        if accepted.is_empty() {
            unmatched += 1;
        }
        for (x, y) in accepted {
            let root = (x * x - y * 4.0).sqrt();
            let (s, t) = ((x + root) / 2.0, (x - root) / 2.0);
            if (s - t).norm() <= SAME_PARAMETER_TOL * (1.0 + s.norm() + t.norm()) {
                continue;
            }
            let kind = if same_tangent(moved, s, t) { DoublePointKind::CuspAdjacent } else { DoublePointKind::Node };
            let mut params = [original_param(m, s), original_param(m, t)];
            params.sort_by(param_order);
            out.push(DoublePoint { params, kind, unresolved: clustered(k) });
        }
    }
    out.sort_by(|a, b| param_order(&a.params[0], &b.params[0]).then(param_order(&a.params[1], &b.params[1])));
    (out, unmatched)
}

fn original_param(m: &[[Q; 2]; 2], t: C64) -> Param {
    let f = |q: &Q| rat_to_f64(q);
    Param::from_homogeneous(t * f(&m[0][1]) + f(&m[0][0]), t * f(&m[1][1]) + f(&m[1][0]))
}

fn parallel(v: &[C64], w: &[C64]) -> bool {
    let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut cross = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            cross = cross.max((v[i] * w[j] - v[j] * w[i]).norm());
        }
    }
    cross <= TANGENT_TOL * norm(v) * norm(w)
}

/// Do the branches through `φ(s) = φ(t)` share a tangent direction?
fn same_tangent(c: &ParamCurve, s: C64, t: C64) -> bool {
    let polys: Vec<Vec<C64>> = (0..c.polys.len()).map(|k| complex_coeffs(&c.padded(k))).collect();
    match c.target {
        Target::P2 => {
            let line = |x: C64| -> Vec<C64> {
                let v: Vec<C64> = polys.iter().map(|p| horner(p, x)).collect();
                let dv: Vec<C64> = polys.iter().map(|p| horner_derivative(p, x)).collect();
                vec![v[1] * dv[2] - v[2] * dv[1], v[2] * dv[0] - v[0] * dv[2], v[0] * dv[1] - v[1] * dv[0]]
            };
            parallel(&line(s), &line(t))
        }
        Target::Quadric => {
            // chart coordinate per factor, chosen at s and reused at t
            let dirs = |x: C64, charts: &[bool; 2]| -> Vec<C64> {
                (0..2)
                    .map(|f| {
                        let (u, v) = (&polys[2 * f], &polys[2 * f + 1]);
                        let w = horner_derivative(u, x) * horner(v, x) - horner(u, x) * horner_derivative(v, x);
                        let den = if charts[f] { horner(v, x) } else { horner(u, x) };
                        w / (den * den)
                    })
                    .collect()
            };
            let charts = [0, 1].map(|f| horner(&polys[2 * f + 1], s).norm() >= horner(&polys[2 * f], s).norm());
            parallel(&dirs(s, &charts), &dirs(t, &charts))
        }
    }
}

/// Parameters where the map fails to be an immersion: common zeros of the
/// Wronskians `u′v − uv′` of every coincidence pair, from their exact gcd.
pub fn non_immersion_points(c: &ParamCurve) -> Result<Vec<Param>> {
    c.validate()?;
    let d = c.degree as usize;
    let mut g = Poly::zero();
    for &(i, j) in c.target.minor_pairs() {
        let (u, v) = (c.affine(i), c.affine(j));
        g = g.gcd(&(u.derivative() * v.clone() - u * v.derivative()));
    }
    if g.is_zero() {
        return Err(Error::Domain("all Wronskians vanish identically; the map is constant on a factor".into()));
    }
    let mut out: Vec<Param> = if g.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        complex_roots(&complex_poly(g.squarefree().coeffs())).into_iter().map(|z| Param::Finite([z.re, z.im])).collect()
    };
    let at_infinity = c.target.minor_pairs().iter().all(|&(i, j)| {
        let (u, v) = (&c.polys[i], &c.polys[j]);
        u[d - 1].clone() * v[d].clone() == u[d].clone() * v[d - 1].clone()
    });
    if at_infinity {
        out.push(Param::Infinity);
    }
    out.sort_by(param_order);
    Ok(out)
}

/// A `(3,3)` curve with a forced cusp and its certification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspSample {
    pub curve: ParamCurve,
    #[serde(serialize_with = "serialize_rationals")]
    pub lambda: Vec<Q>,
    pub cusp: Param,
    /// Equation of the image near the cusp, in the chart `(p/q, r/s)`.
    #[serde(serialize_with = "serialize_display")]
    pub local_equation: BiPoly,
    pub milnor: Length,
}

fn serialize_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Rows forcing `[0:1]` to be a double zero of the first form of a block:
/// with `p₃ = 0` already imposed, `p₂ = 0` kills the derivative.
fn cusp_block_conditions(mu: &[Q], lambda: &[Q]) -> IncidenceMatrix {
    let base = quadric_block_conditions(mu, lambda);
    let mut rows: Vec<Vec<Q>> = (0..base.entries.nrows()).map(|i| base.entries.row(i).to_vec()).collect();
    rows.insert(1, unit_row(8, 2));
    let mut labels = base.rows.clone();
    labels.insert(1, "p2".into());
    IncidenceMatrix { entries: Matrix::from_rows(rows), rows: labels, cols: base.cols }
}

/// Samples a `(3,3)` curve that is not an immersion at `[0:1]`.
///
/// `[0:1]` still maps to the diagonal point `([0:1],[0:1])`, now as a cusp,
/// which meets the diagonal with multiplicity two. Together with the images
/// of `[1:0]`, `[1:1]`, `[1:λ₁]`, `[1:λ₂]` that accounts for all six
/// intersections with the diagonal, so only `(μ₁, λ₁)` and `(μ₂, λ₂)` of the
/// configuration are used. Each block then satisfies six conditions on eight
/// unknowns. The cusp is certified by the Milnor number of the image
/// equation `Res_t(X·q − p, Y·s − r)` at the origin.
pub fn cusp_sample<R: Rng + ?Sized>(cfg: &PointConfigQuadric, rng: &mut R) -> Result<CuspSample> {
    let mut lambda = cfg.lambda[..2].to_vec();
    let mu = &cfg.mu[..2];
    let mut tried = Vec::new();
    for _ in 0..SAMPLE_ATTEMPTS {
        let system = cusp_block_conditions(mu, &lambda);
        if let Ok(sample) = sample_blocks(&system, rng).and_then(|polys| finish_cusp_sample(polys, mu, &lambda)) {
            return Ok(sample);
        }
        tried.push(format!("({}, {})", lambda[0], lambda[1]));
        let l0 = random_rational_avoiding(rng, &[Q::zero(), Q::one()]);
        let l1 = random_rational_avoiding(rng, &[Q::zero(), Q::one(), l0.clone()]);
        lambda = vec![l0, l1];
    }
    Err(Error::Numerical(format!("no cuspidal curve for lambda in {}", tried.join(", "))))
}

fn finish_cusp_sample(polys: Vec<Vec<Q>>, mu: &[Q], lambda: &[Q]) -> Result<CuspSample> {
    let curve = ParamCurve::new(Target::Quadric, 3, polys)?;
    if !diagonal_points(mu, lambda).iter().all(|(a, b, p)| curve.maps_to(a, b, p)) {
        return Err(Error::Internal("cuspidal curve misses a diagonal point".into()));
    }
    let bad = non_immersion_points(&curve)?;
    if bad != [Param::Infinity] {
        return Err(Error::Domain(format!("expected a single non-immersion point at [0:1], found {bad:?}")));
    }
    let local_equation = local_image_equation(&curve)?;
    let milnor = milnor_number(&local_equation)?;
    if milnor != Length::Finite(2) {
        return Err(Error::Domain(format!("image singularity at the cusp has Milnor number {milnor}")));
    }
    Ok(CuspSample { curve, lambda: lambda.to_vec(), cusp: Param::Infinity, local_equation, milnor })
}

/// `Res_t(X·q(t,1) − p(t,1), Y·s(t,1) − r(t,1))`, the image equation in the
/// chart around `([0:1],[0:1])`, by interpolation on a grid.
pub fn local_image_equation(c: &ParamCurve) -> Result<BiPoly> {
    if c.target != Target::Quadric {
        return Err(Error::Usage("local image equations are implemented for the quadric".into()));
    }
    // with b = 1 and t = a, the coefficient of t^k is entry d - k
    let local = |k: usize| -> Vec<Q> { c.polys[k].iter().rev().cloned().collect() };
    let (p, q, r, s) = (local(0), local(1), local(2), local(3));
    let d = c.degree as usize;
    let at = |x: &Q, y: &Q| -> Q {
        let f: Vec<Q> = (0..=d).map(|k| x.clone() * q[k].clone() - p[k].clone()).collect();
        let g: Vec<Q> = (0..=d).map(|k| y.clone() * s[k].clone() - r[k].clone()).collect();
        formal_resultant(&f, &g)
    };
    let grid: Vec<Q> = (0..=d as i64).map(rat).collect();
    // interpolate in y for each grid x, then in x for each y-coefficient
    let rows: Vec<Poly<Q>> = grid.iter().map(|x| Poly::interpolate(&grid, &grid.iter().map(|y| at(x, y)).collect::<Vec<_>>())).collect();
    let mut f = BiPoly::zero();
    for j in 0..=d {
        let column: Vec<Q> = rows.iter().map(|row| row.coeff(j)).collect();
        let px = Poly::interpolate(&grid, &column);
        for (i, cx) in px.coeffs().iter().enumerate() {
            f.add_term((i as u32, j as u32), cx.clone());
        }
    }
    let (x, y) = (rat(d as i64 + 2), rat(d as i64 + 5));
    if f.eval(&x, &y) != at(&x, &y) {
        return Err(Error::Internal("image equation interpolation failed its check point".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn rng(seed: u64) -> crate::rng::CrateRng {
        SeedTree::new(seed).stream("incidence")
    }

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&n| rat(n)).collect()
    }

    #[test]
    fn a_has_full_rank_and_a_prime_rank_three() {
        let mut r = rng(1);
        for _ in 0..20 {
            let a = build_A(&PointConfigQuadric::random(&mut r));
            assert_eq!(a.rank(), 4);
            assert_eq!(a.columns(&[3, 4, 5]).rank(), 3);
        }
    }

    #[test]
    fn gamma_configuration_drops_rank() {
        let lambda = [rat(2), rat(3), rat(5)];
        let g = gamma_minors(&lambda).unwrap();
        assert!(!g.det_check.is_zero());
        let cfg = gamma_configuration(&lambda).unwrap();
        assert_eq!(build_A(&cfg).rank(), 3);
        assert!(gamma_minors(&[rat(2), rat(2), rat(5)]).is_err());
        assert!(gamma_minors(&[rat(1), rat(2), rat(5)]).is_err());
    }

    #[test]
    fn f_structure() {
        let mu = ratio(7, 3);
        let f = build_f(&mu).unwrap();
        let mut e = vec![0; 9];
        e[R1] = 4;
        e[8] = 1;
        assert_eq!(f.poly.terms().find(|(x, _)| **x == e).map(|(_, c)| c.clone()), Some(rat(-1)));
        assert_eq!(f_mod_r3(&f), MPoly::term(9, rat(-1), e));
        let mut expected = MPoly::zero(9);
        for q in 5..9 {
            expected = &expected + &monomial(mu.clone() - rat(1), 0, 4, Some(q));
        }
        assert_eq!(f_at_r1_eq_r3(&f), expected);
        assert!(build_f(&rat(1)).is_err());
    }

    #[test]
    fn certificate_catches_a_non_multilinear_polynomial() {
        let mu = rat(3);
        let f = build_f(&mu).unwrap();
        let mut e = vec![0; 9];
        e[2] = 1;
        e[5] = 1;
        e[R1] = 3;
        let broken = &f.poly + &MPoly::term(9, rat(1), e);
        assert!(!certify_f(&broken, &mu).multilinear);
    }

    #[test]
    fn plane_samples_meet_the_line_as_prescribed() {
        let mut r = rng(2);
        let cfg = PointConfigP2::new(vec![ratio(-2, 5)]).unwrap();
        let s = sample_p2(&cfg, &mut r).unwrap();
        assert!(s.curve.polys[0][4].is_zero() && s.curve.polys[1][0].is_zero());
        assert!(s.curve.maps_to(&rat(1), &s.lambda[0], &[rat(1), ratio(-2, 5), rat(0)]));
        assert_eq!(p2_conditions(&cfg.mu[0], &s.lambda[0]).kernel().len(), 7);
        assert!(PointConfigP2::new(qs(&[2, 3])).is_err());
    }

    #[test]
    fn double_point_counts_match_the_genus() {
        let mut r = rng(3);
        for _ in 0..3 {
            let c = sample_p2(&PointConfigP2::random(&mut r), &mut r).unwrap().curve;
            let dp = double_points(&c).unwrap();
            assert_eq!(dp.len(), 3);
            assert!(dp.iter().all(|d| d.kind == DoublePointKind::Node && !d.unresolved));
            assert!(non_immersion_points(&c).unwrap().is_empty());
            let q = sample_quadric(&PointConfigQuadric::random(&mut r), &mut r).unwrap();
            assert_eq!(double_points(&q).unwrap().len(), 4);
        }
    }

    #[test]
    fn double_points_do_not_depend_on_the_parametrization() {
        let mut r = rng(4);
        let c = sample_quadric(&PointConfigQuadric::random(&mut r), &mut r).unwrap();
        let identity = [[rat(1), rat(0)], [rat(0), rat(1)]];
        assert_eq!(c.reparametrize(&identity), c);
        assert_eq!(non_immersion_points(&c.reparametrize(&identity)).unwrap(), non_immersion_points(&c).unwrap());
        // u -> u + 1 shifts every finite parameter by one
        let shift = [[rat(1), rat(0)], [rat(1), rat(1)]];
        let shifted = double_points(&c.reparametrize(&shift)).unwrap();
        let original = double_points(&c).unwrap();
        for d in &original {
            let moved: Vec<[f64; 2]> = d
                .params
                .iter()
                .map(|p| match p {
                    Param::Finite([re, im]) => [re - 1.0, *im],
                    Param::Infinity => unreachable!(),
                })
                .collect();
            let found = shifted.iter().any(|e| {
                let close = |p: &Param, q: &[f64; 2]| match p {
                    Param::Finite([re, im]) => (re - q[0]).abs() + (im - q[1]).abs() < 1e-6 * (1.0 + q[0].abs() + q[1].abs()),
                    Param::Infinity => false,
                };
                (close(&e.params[0], &moved[0]) && close(&e.params[1], &moved[1]))
                    || (close(&e.params[0], &moved[1]) && close(&e.params[1], &moved[0]))
            });
            assert!(found, "{d:?} has no shifted partner in {shifted:?}");
        }
    }

    #[test]
    fn vanishing_leading_coefficients_give_a_non_immersion_at_infinity() {
        // p and r lose their two top coefficients, so both vanish to order two at [0:1]
        let polys = vec![qs(&[1, 2, 0, 0]), qs(&[3, 1, 1, 1]), qs(&[1, -1, 0, 0]), qs(&[2, 1, -1, 5])];
        let c = ParamCurve::new(Target::Quadric, 3, polys).unwrap();
        assert!(non_immersion_points(&c).unwrap().contains(&Param::Infinity));
    }

    #[test]
    fn cusp_samples_have_one_cusp_and_three_nodes() {
        let mut r = rng(5);
        let s = cusp_sample(&PointConfigQuadric::random(&mut r), &mut r).unwrap();
        assert_eq!(s.milnor, Length::Finite(2));
        assert_eq!(non_immersion_points(&s.curve).unwrap(), vec![Param::Infinity]);
        let dp = double_points(&s.curve).unwrap();
        assert_eq!(dp.len(), 3);
        assert!(dp.iter().all(|d| d.kind == DoublePointKind::Node));
    }

    #[test]
    fn invalid_curves_are_rejected() {
        let common_root = vec![qs(&[0, 1, 1, 0]), qs(&[0, 1, 0, 1]), qs(&[1, 0, 0, 1]), qs(&[1, 1, 0, 1])];
        assert!(ParamCurve::new(Target::Quadric, 3, common_root).is_err());
        assert!(ParamCurve::new(Target::P2, 4, vec![qs(&[1, 0, 0, 0, 1])]).is_err());
    }
}
