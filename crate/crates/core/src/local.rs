//! Computations in the formal power-series ring `Q[[x, y]]`.
//!
//! Colengths are computed by exact linear algebra in `Q[x,y]/m^T`: the ideal
//! `I + m^T` is spanned by the monomial multiples of the generators truncated
//! below degree `T`. Once every monomial of degree `T - 1` lies in that span,
//! Nakayama gives `m^{T-1} ⊆ I`, so the truncated dimension is the true one.
//! Otherwise `T` is doubled up to a cap.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rng::random_rational;

pub const DEFAULT_TRUNCATION: u32 = 8;
pub const TRUNCATION_CAP: u32 = 64;

/// Length of a quotient ring; `Unbounded` when no certificate was found up to
/// the truncation cap (non-isolated / positive-dimensional quotient).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Length {
    Finite(u64),
    Unbounded,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Unbounded => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Ideal of `Q[[x, y]]` contained in the maximal ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalIdeal {
    gens: Vec<BiPoly>,
    trunc: u32,
}

impl LocalIdeal {
    /// Zero generators are dropped. A generator with a constant term would
    /// make the ideal the unit ideal, which is rejected here.
    pub fn new(gens: Vec<BiPoly>) -> Result<Self> {
        Self::with_truncation(gens, DEFAULT_TRUNCATION)
    }

    pub fn with_truncation(gens: Vec<BiPoly>, trunc: u32) -> Result<Self> {
        if trunc < 2 {
            return Err(Error::Usage(format!("truncation must be at least 2, got {trunc}")));
        }
        let gens: Vec<BiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if let Some(g) = gens.iter().find(|g| !g.constant_term().is_zero()) {
            return Err(Error::Domain(format!("generator {g} is a unit in the local ring")));
        }
        Ok(LocalIdeal { gens, trunc })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(crate::bipoly::parse_list(s)?)
    }

    pub fn gens(&self) -> &[BiPoly] {
        &self.gens
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn with_generator(&self, g: BiPoly) -> Result<Self> {
        let mut gens = self.gens.clone();
        gens.push(g);
        Self::with_truncation(gens, self.trunc)
    }

    /// Whether `f` lies in `I + m^t` at the given truncation.
    fn contains_mod(&self, f: &BiPoly, t: u32) -> bool {
        let mut span = TruncatedSpan::new(t);
        span.add_ideal(&self.gens);
        span.reduce(f).is_empty()
    }

    /// Exact ideal membership, valid once the quotient has a certified finite
    /// length (then `m^T ⊆ I` for the certifying `T`).
    pub fn contains(&self, f: &BiPoly) -> Result<bool> {
        let (len, t) = self.certified_colength();
        match len {
            Length::Finite(_) => Ok(self.contains_mod(f, t)),
            Length::Unbounded => Err(Error::Unsupported(
                "membership in an ideal of infinite colength".into(),
            )),
        }
    }

    /// Returns the colength together with the truncation that certified it.
    fn certified_colength(&self) -> (Length, u32) {
        if self.gens.is_empty() {
            return (Length::Unbounded, self.trunc);
        }
        let mut t = self.trunc;
        loop {
            let mut span = TruncatedSpan::new(t);
            span.add_ideal(&self.gens);
            let total = u64::from(t) * u64::from(t + 1) / 2;
            let dim = total - span.rank() as u64;
            let slab_in_ideal = (0..t).all(|i| span.reduce(&BiPoly::term(BigRational::one(), i, t - 1 - i)).is_empty());
            if slab_in_ideal {
                return (Length::Finite(dim), t);
            }
            if t >= TRUNCATION_CAP {
                return (Length::Unbounded, t);
            }
            t = (t * 2).min(TRUNCATION_CAP);
        }
    }
}

/// Column index of `x^i y^j` when monomials are listed by degree, then by
/// decreasing power of `x`.
fn monomial_index(i: u32, j: u32) -> usize {
    let d = (i + j) as usize;
    d * (d + 1) / 2 + j as usize
}

/// Incremental echelon basis of a subspace of `Q[x,y]/m^t`, pivoting on the
/// lowest-degree monomial of each vector.
struct TruncatedSpan {
    t: u32,
    pivots: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl TruncatedSpan {
    fn new(t: u32) -> Self {
        TruncatedSpan { t, pivots: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn to_sparse(&self, f: &BiPoly) -> BTreeMap<usize, BigRational> {
        f.terms()
            .filter(|((i, j), _)| i + j < self.t)
            .map(|(&(i, j), c)| (monomial_index(i, j), c.clone()))
            .collect()
    }

    fn reduce_sparse(&self, mut v: BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        let mut floor = 0usize;
        loop {
            let Some((&lead, _)) = v.range(floor..).next() else { return v };
            match self.pivots.get(&lead) {
                Some(row) => {
                    let c = v.remove(&lead).unwrap();
                    for (&k, a) in row.iter().skip(1) {
                        let e = v.entry(k).or_insert_with(BigRational::zero);
                        *e -= &c * a;
                        if e.is_zero() {
                            v.remove(&k);
                        }
                    }
                }
                None => floor = lead + 1,
            }
        }
    }

    fn reduce(&self, f: &BiPoly) -> BTreeMap<usize, BigRational> {
        self.reduce_sparse(self.to_sparse(f))
    }

    fn insert(&mut self, f: &BiPoly) {
        let mut v = self.to_sparse(f);
        // Fully reduce, then normalise at the first surviving column.
        loop {
            v = self.reduce_sparse(v);
            let Some((&lead, c)) = v.iter().find(|(k, _)| !self.pivots.contains_key(k)) else { return };
            let inv = BigRational::one() / c.clone();
            let mut row: BTreeMap<usize, BigRational> = v.into_iter().map(|(k, a)| (k, a * &inv)).collect();
            // Entries left of `lead` were already eliminated by reduce_sparse.
            row.retain(|&k, _| k >= lead);
            self.pivots.insert(lead, row);
            return;
        }
    }

    fn add_ideal(&mut self, gens: &[BiPoly]) {
        // Insert multiples in order of increasing degree of the multiplier.
        for d in 0..self.t {
            for g in gens {
                let ord = g.order().unwrap_or(0);
                if ord + d >= self.t {
                    continue;
                }
                for i in 0..=d {
                    self.insert(&g.shift(i, d - i));
                }
            }
        }
    }
}

/// `dim_Q Q[[x,y]] / I`, or `Unbounded` if not certified by the cap.
pub fn colength(ideal: &LocalIdeal) -> Length {
    ideal.certified_colength().0
}

/// Colength of the Jacobian ideal: 0 at a smooth point, 1 at a node, 2 at a
/// simple cusp, `Unbounded` for non-isolated singularities.
pub fn milnor_number(f: &BiPoly) -> Result<Length> {
    if !f.constant_term().is_zero() {
        return Err(Error::Domain(format!("{f} does not vanish at the origin")));
    }
    let (fx, fy) = (f.dx(), f.dy());
    if !fx.constant_term().is_zero() || !fy.constant_term().is_zero() {
        return Ok(Length::Finite(0));
    }
    Ok(colength(&LocalIdeal::new(vec![fx, fy])?))
}

/// Formal branch `t ↦ (x(t), y(t))` through the origin. Coefficients are known
/// exactly up to `t^precision`; `None` means the polynomials are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    x: Poly<BigRational>,
    y: Poly<BigRational>,
    precision: Option<usize>,
}

impl Branch {
    pub fn polynomial(x: Poly<BigRational>, y: Poly<BigRational>) -> Result<Self> {
        Self::build(x, y, None)
    }

    pub fn truncated(x: Poly<BigRational>, y: Poly<BigRational>, precision: usize) -> Result<Self> {
        Self::build(x, y, Some(precision))
    }

    fn build(x: Poly<BigRational>, y: Poly<BigRational>, precision: Option<usize>) -> Result<Self> {
        if !x.coeff(0).is_zero() || !y.coeff(0).is_zero() {
            return Err(Error::Domain("branch does not pass through the origin".into()));
        }
        if x.is_zero() && y.is_zero() {
            return Err(Error::Domain("branch is identically zero".into()));
        }
        Ok(Branch { x, y, precision })
    }

    /// The branch `(t^a, t^b)`.
    pub fn monomial(a: usize, b: usize) -> Self {
        let one = BigRational::one();
        Self::polynomial(Poly::monomial(one.clone(), a), Poly::monomial(one, b)).unwrap()
    }
}

/// Intersection multiplicity of a branch with the line `a·x + b·y = 0`.
pub fn branch_hyperplane_multiplicity(branch: &Branch, a: &BigRational, b: &BigRational) -> Result<Length> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("the zero linear form does not define a line".into()));
    }
    let restricted = branch.x.scale(a) + branch.y.scale(b);
    let limit = branch.precision;
    match restricted.valuation() {
        Some(v) if limit.map_or(true, |p| v <= p) => Ok(Length::Finite(v as u64)),
        _ => match limit {
            None => Ok(Length::Unbounded),
            Some(p) => Err(Error::Numerical(format!("inconclusive at order {p}"))),
        },
    }
}

/// Local models of the two singularities of interest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Singularity {
    Smooth,
    Node,
    Cusp,
}

impl Singularity {
    /// Plane model through the origin: `y`, `xy`, `y² - x³`.
    pub fn model(self) -> BiPoly {
        match self {
            Singularity::Smooth => BiPoly::y(),
            Singularity::Node => BiPoly::parse("x*y").unwrap(),
            Singularity::Cusp => BiPoly::parse("y^2 - x^3").unwrap(),
        }
    }
}

impl std::str::FromStr for Singularity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(Singularity::Smooth),
            "node" => Ok(Singularity::Node),
            "cusp" => Ok(Singularity::Cusp),
            _ => Err(Error::Usage(format!("unknown singularity {s:?}"))),
        }
    }
}

/// Length of the section of a node or cusp by the line `a·x + b·y`.
pub fn section_length(sing: Singularity, a: &BigRational, b: &BigRational) -> Result<Length> {
    let form = &BiPoly::x().scale(a) + &BiPoly::y().scale(b);
    Ok(colength(&LocalIdeal::new(vec![sing.model(), form])?))
}

const SECTION_RETRIES: usize = 16;

/// Length of the section by a random line with both coefficients nonzero;
/// always 2 for a node or a cusp.
pub fn generic_section_length<R: Rng + ?Sized>(sing: Singularity, rng: &mut R) -> Result<u64> {
    if sing == Singularity::Smooth {
        return Err(Error::Usage("generic sections are defined for node and cusp only".into()));
    }
    for _ in 0..SECTION_RETRIES {
        let (a, b) = (random_rational(rng), random_rational(rng));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if let Length::Finite(n) = section_length(sing, &a, &b)? {
            return Ok(n);
        }
    }
    Err(Error::Numerical(format!("no nondegenerate section found in {SECTION_RETRIES} draws")))
}

/// Dimension of the family of curvilinear length-`n` subschemes of a curve
/// germ supported at the singular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingDim {
    NoEmbedding,
    Dim(u32),
}

/// Tabulated values for smooth points, nodes and simple cusps.
pub fn embedding_table(sing: Singularity, n: u32) -> EmbeddingDim {
    use EmbeddingDim::*;
    match (sing, n) {
        (Singularity::Smooth, _) => Dim(0),
        (Singularity::Node, 1) => Dim(0),
        (Singularity::Node, _) => Dim(1),
        (Singularity::Cusp, 1) | (Singularity::Cusp, 3) => Dim(0),
        (Singularity::Cusp, 2) => Dim(1),
        (Singularity::Cusp, _) => NoEmbedding,
    }
}

/// Model used by the membership checks. The cusp is `x² - y³` here so that the
/// normal forms `(x + c·y^{n-1}, y^n)` follow the tangent direction `x = 0`.
fn membership_model(sing: Singularity) -> BiPoly {
    match sing {
        Singularity::Cusp => BiPoly::parse("x^2 - y^3").unwrap(),
        s => s.model(),
    }
}

/// Curvilinear normal form `(u + c·v^{n-1} + e·v^{n-2}, v^n)` where `(u, v)`
/// is `(x, y)` or `(y, x)`.
fn normal_form(swap: bool, n: u32, c: &BigRational, e: &BigRational) -> Result<LocalIdeal> {
    let (u, v) = if swap { (BiPoly::y(), BiPoly::x()) } else { (BiPoly::x(), BiPoly::y()) };
    let mut f = &u + &v.pow(n - 1).scale(c);
    if n >= 3 {
        f = &f + &v.pow(n - 2).scale(e);
    }
    let ideal = LocalIdeal::new(vec![f, v.pow(n)])?;
    if colength(&ideal) != Length::Finite(u64::from(n)) {
        return Err(Error::Internal(format!("normal form of length {n} has the wrong colength")));
    }
    Ok(ideal)
}

/// Dimension of the embedding family computed from membership tests on the
/// normal forms, using `samples` random values of the free coefficient.
pub fn verified_embedding_dimension<R: Rng + ?Sized>(
    sing: Singularity,
    n: u32,
    samples: usize,
    rng: &mut R,
) -> Result<EmbeddingDim> {
    if n == 0 {
        return Err(Error::Usage("length must be at least 1".into()));
    }
    let model = membership_model(sing);
    if n == 1 {
        // The reduced point (x, y) is the only length-1 subscheme.
        let m = LocalIdeal::new(vec![BiPoly::x(), BiPoly::y()])?;
        return Ok(if m.contains(&model)? { EmbeddingDim::Dim(0) } else { EmbeddingDim::NoEmbedding });
    }
    let zero = BigRational::zero();
    let mut special = false;
    let mut generic = false;
    for swap in [false, true] {
        special |= normal_form(swap, n, &zero, &zero)?.contains(&model)?;
        let mut hits = 0;
        for _ in 0..samples {
            let c = random_rational(rng);
            if normal_form(swap, n, &c, &zero)?.contains(&model)? {
                hits += 1;
            }
        }
        if hits != 0 && hits != samples {
            return Err(Error::Internal(format!(
                "membership of the {sing:?} model depends on the random coefficient (n = {n})"
            )));
        }
        generic |= hits == samples;
        if n >= 3 && hits == samples {
            // A second free coefficient must destroy membership, else dim > 1.
            let c = random_rational(rng);
            let e = random_rational(rng);
            if normal_form(swap, n, &c, &e)?.contains(&model)? {
                return Err(Error::Internal(format!("{sing:?}: family of dimension > 1 at n = {n}")));
            }
        }
    }
    Ok(match (generic, special) {
        (true, _) => EmbeddingDim::Dim(1),
        (false, true) => EmbeddingDim::Dim(0),
        (false, false) => EmbeddingDim::NoEmbedding,
    })
}

/// Tabulated embedding dimension, verified for `n ≤ 5` against the normal-form
/// membership tests with three random coefficients.
pub fn embedding_dimension<R: Rng + ?Sized>(sing: Singularity, n: u32, rng: &mut R) -> Result<EmbeddingDim> {
    if n == 0 {
        return Err(Error::Usage("length must be at least 1".into()));
    }
    let table = embedding_table(sing, n);
    if n <= 5 {
        let computed = verified_embedding_dimension(sing, n, 3, rng)?;
        if computed != table {
            return Err(Error::Internal(format!(
                "embedding table gives {table:?} for {sing:?}, n = {n}, but membership tests give {computed:?}"
            )));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedTree;
    use crate::scalar::rat;

    fn ideal(s: &str) -> LocalIdeal {
        LocalIdeal::parse(s).unwrap()
    }

    #[test]
    fn basic_colengths() {
        assert_eq!(colength(&ideal("x + y, x*y")), Length::Finite(2));
        assert_eq!(colength(&ideal("x, y")), Length::Finite(1));
        assert_eq!(colength(&ideal("x*y, x^3, y^2")), Length::Finite(4));
        assert_eq!(colength(&ideal("x^3, y^4")), Length::Finite(12));
    }

    #[test]
    fn unbounded_cases() {
        assert_eq!(colength(&ideal("x*y, x")), Length::Unbounded);
        assert_eq!(colength(&LocalIdeal::new(vec![]).unwrap()), Length::Unbounded);
        assert_eq!(colength(&ideal("x^2")), Length::Unbounded);
    }

    #[test]
    fn units_rejected() {
        assert!(matches!(LocalIdeal::parse("1 + x, y"), Err(Error::Domain(_))));
        assert!(LocalIdeal::with_truncation(vec![BiPoly::x()], 1).is_err());
    }

    #[test]
    fn milnor_numbers() {
        let mu = |s: &str| milnor_number(&BiPoly::parse(s).unwrap()).unwrap();
        assert_eq!(mu("x*y"), Length::Finite(1));
        assert_eq!(mu("y^2 - x^3"), Length::Finite(2));
        assert_eq!(mu("y^2 - x^5"), Length::Finite(4));
        assert_eq!(mu("x + y^2"), Length::Finite(0));
        assert_eq!(mu("x^2"), Length::Unbounded);
        assert!(milnor_number(&BiPoly::parse("1 + x").unwrap()).is_err());
    }

    #[test]
    fn high_truncation_needed() {
        // (x^10, y^10) needs T = 19 to certify: forces one doubling past 16.
        assert_eq!(colength(&ideal("x^10, y^10")), Length::Finite(100));
    }

    #[test]
    fn branch_multiplicities() {
        let one = rat(1);
        let zero = rat(0);
        let b = Branch::monomial(1, 2);
        assert_eq!(branch_hyperplane_multiplicity(&b, &zero, &one).unwrap(), Length::Finite(2));
        let cusp = Branch::monomial(2, 3);
        assert_eq!(branch_hyperplane_multiplicity(&cusp, &rat(5), &rat(-3)).unwrap(), Length::Finite(2));
        assert_eq!(branch_hyperplane_multiplicity(&cusp, &zero, &one).unwrap(), Length::Finite(3));
        assert!(branch_hyperplane_multiplicity(&cusp, &zero, &zero).is_err());
    }

    #[test]
    fn branch_inside_line() {
        let line = Branch::polynomial(Poly::monomial(rat(1), 1), Poly::zero()).unwrap();
        assert_eq!(branch_hyperplane_multiplicity(&line, &rat(0), &rat(1)).unwrap(), Length::Unbounded);
        let trunc = Branch::truncated(Poly::monomial(rat(1), 1), Poly::zero(), 6).unwrap();
        let err = branch_hyperplane_multiplicity(&trunc, &rat(0), &rat(1)).unwrap_err();
        assert!(err.to_string().contains("inconclusive at order 6"));
    }

    #[test]
    fn sections() {
        assert_eq!(section_length(Singularity::Node, &rat(1), &rat(1)).unwrap(), Length::Finite(2));
        assert_eq!(section_length(Singularity::Cusp, &rat(1), &rat(2)).unwrap(), Length::Finite(2));
        assert_eq!(section_length(Singularity::Node, &rat(1), &rat(0)).unwrap(), Length::Unbounded);
        // Tangent line of the cusp meets it with length 3.
        assert_eq!(section_length(Singularity::Cusp, &rat(0), &rat(1)).unwrap(), Length::Finite(3));
        let mut rng = SeedTree::new(3).stream("sections");
        assert_eq!(generic_section_length(Singularity::Cusp, &mut rng).unwrap(), 2);
    }

    #[test]
    fn embedding_table_entries() {
        let mut rng = SeedTree::new(11).stream("embed");
        assert_eq!(embedding_dimension(Singularity::Node, 3, &mut rng).unwrap(), EmbeddingDim::Dim(1));
        assert_eq!(embedding_dimension(Singularity::Cusp, 4, &mut rng).unwrap(), EmbeddingDim::NoEmbedding);
        assert_eq!(embedding_dimension(Singularity::Smooth, 7, &mut rng).unwrap(), EmbeddingDim::Dim(0));
        assert_eq!(embedding_dimension(Singularity::Cusp, 2, &mut rng).unwrap(), EmbeddingDim::Dim(1));
    }

    #[test]
    fn cusp_length_three_family_is_one_dimensional() {
        // (x + c y^2, y^3) contains x^2 - y^3 for every c.
        let mut rng = SeedTree::new(5).stream("embed3");
        let computed = verified_embedding_dimension(Singularity::Cusp, 3, 3, &mut rng).unwrap();
        assert_eq!(computed, EmbeddingDim::Dim(1));
        let err = embedding_dimension(Singularity::Cusp, 3, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }
}
