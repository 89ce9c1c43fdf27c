//! Quartic surfaces in `P³[x:y:z:t]` through two prescribed plane quartics.
//!
//! `C = V(g)` lies in the plane `x = 0` with coordinates `(y, z, t)` and
//! `C′ = V(h)` in the plane `t = 0` with coordinates `(x, y, z)`. When
//! `g(y,z,0) = λ·h(0,y,z)` the surface
//!
//! `f = h(x,y,z) + (g(y,z,t) − g(y,z,0))/λ + x·t·R(x,y,z,t)`
//!
//! restricts to `h` on `t = 0` and to `g/λ` on `x = 0` for every quadratic form `R`.
//! At a singular point of `C` off the line `x = t = 0` only `f_x` can be
//! nonzero, and it is affine in the coefficient `a` of `x·t³` with slope
//! `t³ ≠ 0`. Symmetrically `f_t` at a singular point of `C′` off that line is
//! affine in the coefficient `b` of `x³·t`. The surface is therefore smooth at
//! every point of `C ∪ C′` that is singular on one of the curves; smoothness
//! elsewhere is the generic behaviour and is not certified.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homotopy::MPoly;
use crate::linalg::Matrix;
use crate::parse::format_polynomial;
use crate::rng::random_rational_bounded;

type Q = BigRational;
type P = MPoly<Q>;

pub const SURFACE_VARIABLES: [&str; 4] = ["x", "y", "z", "t"];
pub const G_VARIABLES: [&str; 3] = ["y", "z", "t"];
pub const H_VARIABLES: [&str; 3] = ["x", "y", "z"];

const X: usize = 0;
const T: usize = 3;
/// Bound on numerators and denominators of the free coefficients of `R`.
const SMALL: i64 = 9;
/// Upper end of the search for `a` and `b` over `1, 2, 3, …`.
const SEARCH_LIMIT: i64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GlueInput {
    /// Quartic in `(y, z, t)`.
    pub g: P,
    /// Quartic in `(x, y, z)`.
    pub h: P,
    pub lambda: Q,
    /// Singular points of `C`, as `[y:z:t]`.
    pub sing_c: Vec<[Q; 3]>,
    /// Singular points of `C′`, as `[x:y:z]`.
    pub sing_c_prime: Vec<[Q; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Partial {
    X,
    Y,
    Z,
    T,
}

impl Partial {
    const ALL: [Partial; 4] = [Partial::X, Partial::Y, Partial::Z, Partial::T];

    fn index(self) -> usize {
        self as usize
    }
}

/// A point of `P³` with a nonzero partial derivative of `f` there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateEntry {
    #[serde(serialize_with = "as_strings")]
    pub point: [Q; 4],
    pub partial: Partial,
    #[serde(serialize_with = "as_string")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlueOutput {
    #[serde(serialize_with = "as_surface")]
    pub f: P,
    /// Coefficient of `x·t³`.
    #[serde(serialize_with = "as_string")]
    pub a: Q,
    /// Coefficient of `x³·t`.
    #[serde(serialize_with = "as_string")]
    pub b: Q,
    /// `f(x,y,z,0) = lambda1·h`.
    #[serde(serialize_with = "as_string")]
    pub lambda1: Q,
    /// `f(0,y,z,t) = lambda2·g`.
    #[serde(serialize_with = "as_string")]
    pub lambda2: Q,
    pub certificate: Vec<CertificateEntry>,
}

fn as_string<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn as_strings<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
}

fn as_surface<S: serde::Serializer>(p: &P, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_polynomial(p, &SURFACE_VARIABLES))
}

fn is_form(p: &P, nvars: usize, degree: u32) -> bool {
    p.nvars() == nvars && !p.is_zero() && p.terms().all(|(e, _)| e.iter().sum::<u32>() == degree)
}

/// Embeds a polynomial in three of the four surface variables.
fn embed(p: &P, slots: [usize; 3]) -> P {
    P::from_terms(
        4,
        p.terms().map(|(e, c)| {
            let mut f = vec![0; 4];
            for (k, &slot) in slots.iter().enumerate() {
                f[slot] = e[k];
            }
            (f, c.clone())
        }),
    )
}

/// `p` with variable `var` set to zero.
pub fn restrict(p: &P, var: usize) -> P {
    P::from_terms(p.nvars(), p.terms().filter(|(e, _)| e[var] == 0).map(|(e, c)| (e.clone(), c.clone())))
}

fn is_origin(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn same_point(v: &[Q], w: &[Q]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i].clone() * w[j].clone() == v[j].clone() * w[i].clone()))
}

fn check_singular(p: &P, point: &[Q; 3], curve: &str) -> Result<()> {
    if is_origin(point) {
        return Err(Error::Domain(format!("the zero vector listed as a singular point of {curve}")));
    }
    let vanishes = |q: &P| q.eval(point).is_zero();
    if !vanishes(p) || !(0..3).all(|i| vanishes(&p.partial(i))) {
        let text: Vec<String> = point.iter().map(|q| q.to_string()).collect();
        return Err(Error::Domain(format!("[{}] is not a singular point of {curve}", text.join(":"))));
    }
    Ok(())
}

impl GlueInput {
    /// Checks degrees, the compatibility identity, that every listed point is
    /// singular on its curve, and that no point is singular on both curves.
    pub fn validate(&self) -> Result<()> {
        if !is_form(&self.g, 3, 4) || !is_form(&self.h, 3, 4) {
            return Err(Error::Domain("g and h must be nonzero quartic forms in three variables".into()));
        }
        if self.lambda.is_zero() {
            return Err(Error::Domain("lambda must be nonzero".into()));
        }
        let g_line = restrict(&embed(&self.g, [1, 2, 3]), T);
        let h_line = restrict(&embed(&self.h, [0, 1, 2]), X);
        if g_line != h_line.scale(&self.lambda) {
            return Err(Error::Domain("g(y,z,0) differs from lambda·h(0,y,z)".into()));
        }
        for p in &self.sing_c {
            check_singular(&self.g, p, "C")?;
        }
        for p in &self.sing_c_prime {
            check_singular(&self.h, p, "C'")?;
        }
        for p in &self.sing_c {
            let on_line = p[2].is_zero();
            if on_line && self.sing_c_prime.iter().any(|q| q[0].is_zero() && same_point(&p[..2], &q[1..])) {
                return Err(Error::Domain(format!("[0:{}:{}:0] is singular on both curves", p[0], p[1])));
            }
        }
        Ok(())
    }
}

/// Exponent vectors of the quadratic monomials in four variables.
fn quadratic_monomials() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..=2u32 {
        for j in 0..=2 - i {
            for k in 0..=2 - i - j {
                out.push(vec![i, j, k, 2 - i - j - k]);
            }
        }
    }
    out
}

fn xt_times(c: Q, quadratic: &[u32]) -> P {
    let mut e = quadratic.to_vec();
    e[X] += 1;
    e[T] += 1;
    P::term(4, c, e)
}

fn a_exponent() -> Vec<u32> {
    vec![0, 0, 0, 2]
}

fn b_exponent() -> Vec<u32> {
    vec![2, 0, 0, 0]
}

/// Smallest `c ∈ {1, 2, …}` with `value(c) ≠ 0` at every point, for values
/// affine in `c`.
fn search(points: &[(Q, Q)]) -> Result<Q> {
    (1..=SEARCH_LIMIT)
        .map(|c| Q::from_integer(c.into()))
        .find(|c| points.iter().all(|(base, slope)| !(base.clone() + slope.clone() * c.clone()).is_zero()))
        .ok_or_else(|| Error::Internal(format!("no admissible coefficient in 1..={SEARCH_LIMIT}")))
}

/// Builds the surface and its certificate.
pub fn glue<R: Rng + ?Sized>(inp: &GlueInput, rng: &mut R) -> Result<GlueOutput> {
    inp.validate()?;
    let h4 = embed(&inp.h, [0, 1, 2]);
    let g4 = embed(&inp.g, [1, 2, 3]);
    let base = &h4 + &(&g4 - &restrict(&g4, T)).scale(&(Q::one() / inp.lambda.clone()));
    let mut free = P::zero(4);
    for m in quadratic_monomials() {
        if m != a_exponent() && m != b_exponent() {
            free = &free + &xt_times(random_rational_bounded(rng, SMALL), &m);
        }
    }
    let partial_free = &base + &free;

    let sing_c: Vec<[Q; 4]> =
        inp.sing_c.iter().map(|p| [Q::zero(), p[0].clone(), p[1].clone(), p[2].clone()]).collect();
    let sing_c_prime: Vec<[Q; 4]> =
        inp.sing_c_prime.iter().map(|p| [p[0].clone(), p[1].clone(), p[2].clone(), Q::zero()]).collect();

    let fx = partial_free.partial(X);
    let a_points: Vec<(Q, Q)> = sing_c.iter().filter(|p| !p[T].is_zero()).map(|p| (fx.eval(p), cube(&p[T]))).collect();
    let a = search(&a_points)?;
    let ft = partial_free.partial(T);
    let b_points: Vec<(Q, Q)> =
        sing_c_prime.iter().filter(|p| !p[X].is_zero()).map(|p| (ft.eval(p), cube(&p[X]))).collect();
    let b = search(&b_points)?;

    let f = &(&partial_free + &xt_times(a.clone(), &a_exponent())) + &xt_times(b.clone(), &b_exponent());
    let mut certificate = Vec::new();
    for p in &sing_c {
        certificate.push(entry(&f, p, if p[T].is_zero() { None } else { Some(Partial::X) })?);
    }
    for p in &sing_c_prime {
        let on_line = p[X].is_zero();
        let duplicate = on_line && sing_c.iter().any(|q| same_point(q, p));
        if !duplicate {
            certificate.push(entry(&f, p, if on_line { None } else { Some(Partial::T) })?);
        }
    }
    let out = GlueOutput { f, a, b, lambda1: Q::one(), lambda2: Q::one() / inp.lambda.clone(), certificate };
    verify(inp, &out)?;
    Ok(out)
}

fn cube(q: &Q) -> Q {
    q.clone() * q.clone() * q.clone()
}

/// The chosen partial at `p`, or on the line `x = t = 0` the first nonzero one.
fn entry(f: &P, p: &[Q; 4], partial: Option<Partial>) -> Result<CertificateEntry> {
    let candidates: Vec<Partial> = match partial {
        Some(d) => vec![d],
        None => Partial::ALL.to_vec(),
    };
    for d in candidates {
        let value = f.partial(d.index()).eval(p);
        if !value.is_zero() {
            return Ok(CertificateEntry { point: p.clone(), partial: d, value });
        }
    }
    Err(Error::Internal(format!("surface is singular at {:?}", p.iter().map(|q| q.to_string()).collect::<Vec<_>>())))
}

/// Re-checks the restriction identities and recomputes every certificate
/// value from `f`.
pub fn verify(inp: &GlueInput, out: &GlueOutput) -> Result<()> {
    if !is_form(&out.f, 4, 4) {
        return Err(Error::Internal("f is not a quartic form".into()));
    }
    if restrict(&out.f, T) != embed(&inp.h, [0, 1, 2]).scale(&out.lambda1) {
        return Err(Error::Internal("f(x,y,z,0) differs from lambda1·h".into()));
    }
    if restrict(&out.f, X) != embed(&inp.g, [1, 2, 3]).scale(&out.lambda2) {
        return Err(Error::Internal("f(0,y,z,t) differs from lambda2·g".into()));
    }
    for e in &out.certificate {
        let value = out.f.partial(e.partial.index()).eval(&e.point);
        if value.is_zero() || value != e.value {
            return Err(Error::Internal(format!("certificate entry at {:?} does not reproduce", e.point)));
        }
    }
    Ok(())
}

fn quartic_monomials() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..=4u32 {
        for j in 0..=4 - i {
            out.push(vec![i, j, 4 - i - j]);
        }
    }
    out
}

/// Rows asking a ternary quartic with unknown coefficients to be singular at
/// `point`: the three partials vanish there, which forces the value to vanish.
fn singular_rows(monomials: &[Vec<u32>], point: &[Q; 3]) -> Vec<Vec<Q>> {
    (0..3)
        .map(|i| {
            monomials
                .iter()
                .map(|e| {
                    if e[i] == 0 {
                        return Q::zero();
                    }
                    let mut d = e.clone();
                    d[i] -= 1;
                    let value = (0..3).fold(Q::one(), |acc, k| acc * pow(&point[k], d[k]));
                    value * Q::from_integer(e[i].into())
                })
                .collect()
        })
        .collect()
}

fn pow(q: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * q.clone())
}

fn small_point<R: Rng + ?Sized>(rng: &mut R, nonzero: usize) -> [Q; 3] {
    let mut p: [Q; 3] = std::array::from_fn(|_| Q::from_integer(rng.gen_range(-5i64..=5).into()));
    if p[nonzero].is_zero() {
        p[nonzero] = Q::one();
    }
    p
}

/// A random element of the affine space `{v : M v = 0, v[last] = 1}`
/// projected to the first coordinates, or `None` if that space is empty.
fn random_affine_solution<R: Rng + ?Sized>(rows: Vec<Vec<Q>>, rng: &mut R) -> Option<Vec<Q>> {
    let kernel = Matrix::from_rows(rows).kernel(0.0);
    let mut v = vec![Q::zero(); kernel.first()?.len()];
    for k in &kernel {
        let c = random_rational_bounded(rng, SMALL);
        for (x, y) in v.iter_mut().zip(k) {
            *x += c.clone() * y.clone();
        }
    }
    let last = v.pop()?;
    if last.is_zero() {
        return None;
    }
    Some(v.into_iter().map(|x| x / last.clone()).collect())
}

/// A compatible pair of quartics singular at `nodes_c` random points of
/// `C \ C′` and `nodes_c_prime` random points of `C′ \ C`.
pub fn random_input<R: Rng + ?Sized>(rng: &mut R, nodes_c: usize, nodes_c_prime: usize) -> Result<GlueInput> {
    let monomials = quartic_monomials();
    let width = monomials.len() + 1;
    for _ in 0..64 {
        let sing_c: Vec<[Q; 3]> = (0..nodes_c).map(|_| small_point(rng, 2)).collect();
        let sing_c_prime: Vec<[Q; 3]> = (0..nodes_c_prime).map(|_| small_point(rng, 0)).collect();
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); width]];
        for p in &sing_c {
            for mut r in singular_rows(&monomials, p) {
                r.push(Q::zero());
                rows.push(r);
            }
        }
        let Some(gc) = random_affine_solution(rows, rng) else { continue };
        let g = P::from_terms(3, monomials.iter().cloned().zip(gc));
        let lambda = random_rational_bounded(rng, SMALL);
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (k, e) in monomials.iter().enumerate().filter(|(_, e)| e[0] == 0) {
            let mut r = vec![Q::zero(); width];
            r[k] = lambda.clone();
            r[width - 1] = -g.terms().find(|(ge, _)| ge[..] == [e[1], e[2], 0]).map_or(Q::zero(), |(_, c)| c.clone());
            rows.push(r);
        }
        for p in &sing_c_prime {
            for mut r in singular_rows(&monomials, p) {
                r.push(Q::zero());
                rows.push(r);
            }
        }
        let Some(hc) = random_affine_solution(rows, rng) else { continue };
        let h = P::from_terms(3, monomials.iter().cloned().zip(hc));
        let inp = GlueInput { g, h, lambda, sing_c, sing_c_prime };
        if inp.validate().is_ok() {
            return Ok(inp);
        }
    }
    Err(Error::Numerical("no compatible random pair of quartics in 64 draws".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::rng::SeedTree;
    use crate::scalar::rat;

    fn g(text: &str) -> P {
        parse_polynomial(text, &G_VARIABLES).unwrap()
    }

    fn h(text: &str) -> P {
        parse_polynomial(text, &H_VARIABLES).unwrap()
    }

    fn fermat() -> GlueInput {
        GlueInput { g: g("y^4 + z^4 + t^4"), h: h("x^4 + y^4 + z^4"), lambda: rat(1), sing_c: vec![], sing_c_prime: vec![] }
    }

    #[test]
    fn smooth_sections_need_no_certificate() {
        let out = glue(&fermat(), &mut SeedTree::new(1).stream("glue")).unwrap();
        assert!(out.certificate.is_empty());
        assert_eq!((out.a.clone(), out.b.clone()), (rat(1), rat(1)));
    }

    #[test]
    fn singular_points_off_the_common_line() {
        // two conics tangent at [1:0:1] and [-1:0:1]
        let inp = GlueInput {
            g: g("(y^2 + z^2 - t^2) * (y^2 + 2*z^2 - t^2)"),
            h: h("(y^2 + z^2 - x^2) * (y^2 + 3*z^2 - x^2)"),
            lambda: rat(1),
            sing_c: vec![[rat(1), rat(0), rat(1)], [rat(-1), rat(0), rat(1)]],
            sing_c_prime: vec![],
        };
        assert!(inp.validate().is_err(), "h(0,y,z) must match g(y,z,0)");
        let inp = GlueInput {
            h: h("(y^2 + z^2 - x^2) * (y^2 + 2*z^2 - x^2)"),
            sing_c_prime: vec![[rat(1), rat(1), rat(0)], [rat(1), rat(-1), rat(0)]],
            ..inp
        };
        let out = glue(&inp, &mut SeedTree::new(2).stream("glue")).unwrap();
        assert_eq!(out.certificate.len(), 4);
        assert!(out.certificate.iter().all(|e| !e.value.is_zero()));
    }

    #[test]
    fn common_singular_point_is_rejected() {
        let inp = GlueInput {
            g: g("y^2 * z^2 + t^4"),
            h: h("y^2 * z^2 + x^4"),
            lambda: rat(1),
            sing_c: vec![],
            sing_c_prime: vec![],
        };
        inp.validate().unwrap();
        let bad = GlueInput { sing_c: vec![[rat(1), rat(0), rat(0)]], sing_c_prime: vec![[rat(0), rat(1), rat(0)]], ..inp };
        assert!(matches!(bad.validate(), Err(Error::Domain(_))));
    }

    #[test]
    fn random_inputs_with_singular_points_on_both_curves() {
        let mut rng = SeedTree::new(3).stream("glue");
        for _ in 0..3 {
            let inp = random_input(&mut rng, 3, 2).unwrap();
            let out = glue(&inp, &mut rng).unwrap();
            assert_eq!(out.certificate.len(), 5);
            verify(&inp, &out).unwrap();
        }
    }

    #[test]
    fn listed_points_must_be_singular() {
        let bad = GlueInput { sing_c: vec![[rat(1), rat(0), rat(0)]], ..fermat() };
        assert!(matches!(bad.validate(), Err(Error::Domain(_))));
    }
}
