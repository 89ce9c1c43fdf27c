//! Bitangents of plane curves and the monodromy of the bitangent cover.
//!
//! A line `y = m·x + c` meets `f = 0` along `g(x) = f(x, m·x + c, 1)`. The line
//! is bitangent exactly when `(x² − e₁x + e₂)²` divides `g`, where `e₁, e₂` are
//! the elementary symmetric functions of the two tangency abscissae. The
//! remainder of `g` modulo that quartic has four coefficients, each a
//! polynomial in `(e₁, e₂, m, c)`; their common zeros are the bitangents, with
//! no ordering of the tangency points to break.

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homotopy::solve::{collect_solutions, distance, track_projective};
use crate::homotopy::{
    match_points, track, track_path, LinearHomotopy, MPoly, PathStatus, PolySystem, Solution, SolutionSet, TrackerConfig,
};
use crate::permgroup::{
    certify_symmetric, schreier_sims_order, GroupReport, Permutation, DEFAULT_WORD_BUDGET, SCHREIER_SIMS_MAX_DEGREE,
};
use crate::poly::{complex_roots, Poly};
use crate::rng::SeedTree;
use crate::scalar::Real;

/// `½·d(d−2)(d−3)(d+3)`, the number of bitangents of a smooth plane curve.
pub fn plucker_count(d: u32) -> usize {
    if d < 3 {
        return 0;
    }
    let d = d as usize;
    d * (d - 2) * (d - 3) * (d + 3) / 2
}

/// Exponents `(i, j, k)` of `xⁱ yʲ zᵏ` with `i + j + k = d`, in a fixed order.
pub fn plane_monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Homogeneous polynomial of degree `d` in `(x, y, z)`, stored densely in
/// the order of [`plane_monomials`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve<F> {
    degree: u32,
    coeffs: Vec<Complex<F>>,
}

fn cpx<F: Real>(re: f64, im: f64) -> Complex<F> {
    Complex::new(F::from_f64(re).unwrap(), F::from_f64(im).unwrap())
}

fn random_complex<F: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<F> {
    cpx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

impl<F: Real> PlaneCurve<F> {
    pub fn new(degree: u32, coeffs: Vec<Complex<F>>) -> Result<Self> {
        let expected = plane_monomials(degree).len();
        if coeffs.len() != expected {
            return Err(Error::Usage(format!("degree {degree} curve needs {expected} coefficients, got {}", coeffs.len())));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Domain("curve polynomial is identically zero".into()));
        }
        Ok(PlaneCurve { degree, coeffs })
    }

    /// Builds a curve from `(exponents, coefficient)` pairs; omitted
    /// monomials get coefficient zero.
    pub fn from_terms(degree: u32, terms: &[([u32; 3], Complex<F>)]) -> Result<Self> {
        let monos = plane_monomials(degree);
        let mut coeffs = vec![Complex::zero(); monos.len()];
        for (e, c) in terms {
            let idx = monos
                .iter()
                .position(|m| m == e)
                .ok_or_else(|| Error::Usage(format!("monomial {e:?} is not of degree {degree}")))?;
            coeffs[idx] = coeffs[idx] + *c;
        }
        Self::new(degree, coeffs)
    }

    /// Curve with independent coefficients, real and imaginary parts uniform
    /// in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(degree: u32, rng: &mut R) -> Self {
        let n = plane_monomials(degree).len();
        PlaneCurve { degree, coeffs: (0..n).map(|_| random_complex(rng)).collect() }
    }

    /// `xᵈ + yᵈ + zᵈ`.
    pub fn fermat(degree: u32) -> Self {
        let one = cpx(1.0, 0.0);
        Self::from_terms(degree, &[([degree, 0, 0], one), ([0, degree, 0], one), ([0, 0, degree], one)]).unwrap()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex<F>] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr().to_f64().unwrap()).sum::<f64>().sqrt()
    }

    /// `self + t·(other − self)`.
    pub fn lerp(&self, other: &Self, t: Complex<F>) -> Self {
        assert_eq!(self.degree, other.degree);
        PlaneCurve {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + (*b - *a) * t).collect(),
        }
    }

    pub fn to_mpoly(&self) -> MPoly<Complex<F>> {
        MPoly::from_terms(3, plane_monomials(self.degree).into_iter().zip(&self.coeffs).map(|(e, c)| (e.to_vec(), *c)))
    }

    pub fn eval(&self, p: [Complex<F>; 3]) -> Complex<F> {
        self.to_mpoly().eval(&p)
    }

    pub fn gradient(&self, p: [Complex<F>; 3]) -> [Complex<F>; 3] {
        let f = self.to_mpoly();
        [f.partial(0).eval(&p), f.partial(1).eval(&p), f.partial(2).eval(&p)]
    }

    /// `f ∘ M`, i.e. the curve in coordinates `X = M·X'`.
    pub fn transform(&self, m: &[[Complex<F>; 3]; 3]) -> Self {
        let lin: Vec<MPoly<Complex<F>>> = (0..3)
            .map(|r| MPoly::from_terms(3, (0..3).map(|c| (unit(c), m[r][c]))))
            .collect();
        let mut out = MPoly::zero(3);
        for (e, c) in plane_monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = &(&lin[0].pow(e[0]) * &lin[1].pow(e[1])) * &lin[2].pow(e[2]);
            out = &out + &t.scale(c);
        }
        let monos = plane_monomials(self.degree);
        let coeffs = monos
            .iter()
            .map(|e| out.terms().find(|(k, _)| k.as_slice() == e).map_or(Complex::zero(), |(_, v)| *v))
            .collect();
        PlaneCurve { degree: self.degree, coeffs }
    }
}

fn unit(i: usize) -> Vec<u32> {
    let mut e = vec![0; 3];
    e[i] = 1;
    e
}

impl PlaneCurve<f64> {
    /// Samples `samples` points of the curve on random lines and checks that
    /// the gradient does not vanish there relative to the coefficient scale.
    pub fn spot_check_smooth<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> bool {
        let f = self.to_mpoly();
        let scale = self.norm();
        for _ in 0..samples {
            let p: [Complex<f64>; 3] = [random_complex(rng), random_complex(rng), random_complex(rng)];
            let q: [Complex<f64>; 3] = [random_complex(rng), random_complex(rng), random_complex(rng)];
            // Restrict to the line p + t·q.
            let t = MPoly::<Complex<f64>>::var(1, 0);
            let one = MPoly::constant(1, cpx(1.0, 0.0));
            let line: Vec<MPoly<Complex<f64>>> =
                (0..3).map(|i| &one.scale(&p[i]) + &t.scale(&q[i])).collect();
            let mut g = MPoly::zero(1);
            for (e, c) in f.terms() {
                let term = &(&line[0].pow(e[0]) * &line[1].pow(e[1])) * &line[2].pow(e[2]);
                g = &g + &term.scale(c);
            }
            let mut coeffs = vec![Complex::zero(); self.degree as usize + 1];
            for (e, c) in g.terms() {
                coeffs[e[0] as usize] = *c;
            }
            for root in complex_roots(&Poly::new(coeffs)) {
                let x = [p[0] + q[0] * root, p[1] + q[1] * root, p[2] + q[2] * root];
                let xn = x.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
                let gn = self.gradient(x).iter().map(|v| v.norm()).fold(0.0, f64::max);
                if gn < 1e-8 * scale * xn.powi(self.degree as i32 - 1) {
                    return false;
                }
            }
        }
        true
    }
}

/// The four bitangent equations in the unknowns `(e₁, e₂, m, c)`.
pub fn bitangent_system<F: Real>(curve: &PlaneCurve<F>) -> Result<PolySystem<Complex<F>>> {
    let d = curve.degree;
    if d < 3 {
        return Err(Error::Domain("bitangent systems need degree at least 3".into()));
    }
    // Variables: e1, e2, m, c, x.
    let v = |i| MPoly::<Complex<F>>::var(5, i);
    let (m, c, x) = (v(2), v(3), v(4));
    let y = &(&m * &x) + &c;
    let ypow: Vec<MPoly<Complex<F>>> = (0..=d).map(|k| y.pow(k)).collect();
    let xpow: Vec<MPoly<Complex<F>>> = (0..=d).map(|k| x.pow(k)).collect();
    let mut g = MPoly::zero(5);
    for (e, a) in plane_monomials(d).into_iter().zip(&curve.coeffs) {
        if a.is_zero() {
            continue;
        }
        g = &g + &(&xpow[e[0] as usize] * &ypow[e[1] as usize]).scale(a);
    }
    // Coefficients of g as a polynomial in x.
    let mut by_x: Vec<MPoly<Complex<F>>> = vec![MPoly::zero(4); d as usize + 1];
    for (e, a) in g.terms() {
        by_x[e[4] as usize].add_term(e[..4].to_vec(), *a);
    }
    // x⁴ ≡ 2e₁x³ − (e₁² + 2e₂)x² + 2e₁e₂x − e₂² modulo (x² − e₁x + e₂)².
    let w = |i| MPoly::<Complex<F>>::var(4, i);
    let (f1, f2) = (w(0), w(1));
    let two = cpx::<F>(2.0, 0.0);
    let reduction = [
        -&f2.pow(2),
        (&f1 * &f2).scale(&two),
        -&(&f1.pow(2) + &f2.scale(&two)),
        f1.scale(&two),
    ];
    for k in (4..=d as usize).rev() {
        let top = std::mem::replace(&mut by_x[k], MPoly::zero(4));
        for (i, r) in reduction.iter().enumerate() {
            by_x[k - 4 + i] = &by_x[k - 4 + i] + &(&top * r);
        }
    }
    by_x.truncate(4);
    PolySystem::new(by_x)
}

/// Random unitary 3×3 matrix (Gram–Schmidt on random complex rows).
pub fn random_chart<F: Real, R: Rng + ?Sized>(rng: &mut R) -> [[Complex<F>; 3]; 3] {
    loop {
        let mut m = [[Complex::zero(); 3]; 3];
        let mut ok = true;
        for r in 0..3 {
            let mut v: [Complex<F>; 3] = [random_complex(rng), random_complex(rng), random_complex(rng)];
            for q in m.iter().take(r) {
                let dot = (0..3).fold(Complex::zero(), |acc: Complex<F>, k| acc + q[k].conj() * v[k]);
                for k in 0..3 {
                    v[k] = v[k] - q[k] * dot;
                }
            }
            let len = v.iter().fold(F::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
            if len < F::from_f64(1e-3).unwrap() {
                ok = false;
                break;
            }
            m[r] = [v[0] / len, v[1] / len, v[2] / len];
        }
        if ok {
            return m;
        }
    }
}

/// The base curve (already in its chart) and its labelled bitangent fibre.
#[derive(Clone, Debug)]
pub struct BitangentFibre<F: Real> {
    pub curve: PlaneCurve<F>,
    pub chart: [[Complex<F>; 3]; 3],
    pub solutions: SolutionSet<F>,
    /// Solutions added by monodromy completion after the start homotopy.
    pub completed: usize,
}

impl<F: Real> BitangentFibre<F> {
    pub fn labels(&self) -> Vec<Vec<Complex<F>>> {
        self.solutions.points()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Consecutive loops without a new solution before completion stops.
pub const COMPLETION_STABLE_LOOPS: usize = 3;
const COMPLETION_MAX_LOOPS: usize = 60;

/// Solves the bitangent system of `curve` in a random chart.
///
/// The total-degree homotopy supplies a first set of regular solutions; the
/// set is then closed under random monodromy loops until
/// [`COMPLETION_STABLE_LOOPS`] consecutive loops add nothing. Points reached
/// by several paths are discarded as possible multiple solutions. When the
/// final count differs from the Plücker number the chart is redrawn, three
/// attempts in total.
pub fn solve_bitangents<F: Real, R: Rng + ?Sized>(
    curve: &PlaneCurve<F>,
    cfg: &TrackerConfig,
    rng: &mut R,
) -> Result<BitangentFibre<F>> {
    cfg.validate()?;
    let expected = plucker_count(curve.degree);
    let mut report = Vec::new();
    for attempt in 0..3 {
        let chart = random_chart(rng);
        let moved = curve.transform(&chart);
        let sys = bitangent_system(&moved)?;
        let results = track_projective(&sys, cfg, rng)?;
        let mut set = collect_solutions(4, &results, cfg);
        set.solutions.retain(|s| !s.multiplicity_suspect);
        let found = set.len();
        let added = complete_fibre(&moved, &mut set, cfg, rng)?;
        set.sort_lex();
        if set.len() == expected && distinct(&set.points(), cfg.dedup_tol) {
            return Ok(BitangentFibre { curve: moved, chart, solutions: set, completed: added });
        }
        report.push(format!(
            "attempt {attempt}: {found} regular solutions from {} paths ({} at infinity, {} failed), {added} added by loops",
            results.len(),
            set.at_infinity,
            set.failed.len(),
        ));
    }
    Err(Error::Numerical(format!("expected {expected} bitangents, found otherwise:\n{}", report.join("\n"))))
}

/// Closes `set` under monodromy loops based at `curve`; returns the number of
/// solutions added.
fn complete_fibre<F: Real, R: Rng + ?Sized>(
    curve: &PlaneCurve<F>,
    set: &mut SolutionSet<F>,
    cfg: &TrackerConfig,
    rng: &mut R,
) -> Result<usize> {
    if set.is_empty() {
        return Ok(0);
    }
    let system = LinearHomotopy::constant(&bitangent_system(curve)?)?;
    let mut added = 0;
    let mut quiet = 0;
    for _ in 0..COMPLETION_MAX_LOOPS {
        if quiet >= COMPLETION_STABLE_LOOPS {
            break;
        }
        let spec = LoopSpec::polygon(curve, rng.gen_range(4..=8), DEFAULT_LOOP_RADIUS, rng.gen());
        let Ok(ends) = track_loop(&spec, &set.points(), cfg) else {
            continue;
        };
        let mut grew = false;
        for p in ends {
            if set.solutions.iter().all(|s| distance(&s.point, &p) >= cfg.dedup_tol) {
                let sharp = track_path(&system, usize::MAX, &p, cfg);
                let fresh = set.solutions.iter().all(|s| distance(&s.point, &sharp.point) >= cfg.dedup_tol);
                if sharp.status != PathStatus::Success || sharp.residual >= cfg.success_residual || !fresh {
                    continue;
                }
                set.solutions.push(Solution {
                    point: sharp.point,
                    residual: sharp.residual,
                    condition: sharp.condition,
                    multiplicity_suspect: false,
                    start_index: usize::MAX,
                });
                added += 1;
                grew = true;
            }
        }
        quiet = if grew { 0 } else { quiet + 1 };
    }
    Ok(added)
}

fn distinct<F: Real>(points: &[Vec<Complex<F>>], tol: f64) -> bool {
    min_pair(points).map_or(true, |(_, _, d)| d >= tol)
}

/// Closest pair of points and their distance.
fn min_pair<F: Real>(points: &[Vec<Complex<F>>]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = distance(&points[i], &points[j]);
            if best.map_or(true, |b| d < b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Relative size of polygon loops around the base coefficients.
pub const DEFAULT_LOOP_RADIUS: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LoopKind {
    Constant,
    Polygon { vertices: usize, radius: f64 },
    /// Circle of `radius` around `center` in the pencil parameter, reached
    /// along the scan path of the pencil.
    Circle { center: [f64; 2], radius: f64, segments: usize },
}

/// A closed piecewise-linear path in coefficient space: base curve, then
/// each waypoint in turn, then back to the base curve.
#[derive(Clone, Debug)]
pub struct LoopSpec<F> {
    pub kind: LoopKind,
    pub seed: u64,
    pub base: PlaneCurve<F>,
    pub waypoints: Vec<PlaneCurve<F>>,
}

impl<F: Real> LoopSpec<F> {
    pub fn constant(base: &PlaneCurve<F>) -> Self {
        LoopSpec { kind: LoopKind::Constant, seed: 0, base: base.clone(), waypoints: Vec::new() }
    }

    /// Polygon whose vertices are `base + radius·‖base‖·u` for random unit
    /// coefficient directions `u`.
    pub fn polygon(base: &PlaneCurve<F>, vertices: usize, radius: f64, seed: u64) -> Self {
        let mut rng = SeedTree::new(seed).stream("polygon");
        let scale = radius * base.norm();
        let waypoints = (0..vertices)
            .map(|_| {
                let u = PlaneCurve::<F>::random(base.degree, &mut rng);
                let k = F::from_f64(scale / u.norm()).unwrap();
                PlaneCurve {
                    degree: base.degree,
                    coeffs: base.coeffs.iter().zip(&u.coeffs).map(|(a, b)| *a + *b * k).collect(),
                }
            })
            .collect();
        LoopSpec { kind: LoopKind::Polygon { vertices, radius }, seed, base: base.clone(), waypoints }
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.waypoints.reverse();
        out
    }

    /// Every curve along the path, base first and last.
    pub fn vertices(&self) -> Vec<&PlaneCurve<F>> {
        std::iter::once(&self.base).chain(&self.waypoints).chain(std::iter::once(&self.base)).collect()
    }
}

/// Tracks `points` along the straight segment from curve `a` to curve `b`.
///
/// A bitangent that turns nearly vertical makes its two tangency points share
/// an `x`-coordinate, and the system degenerates in that chart; a tangency
/// point crossing the line at infinity does the same. Paths that fail in the
/// standard chart are re-expressed one by one in fresh unitary charts (the
/// same lines, different coordinates) and tracked there. Within a chart,
/// failing paths are re-tracked over the two halves of the segment. The
/// endpoints must come out distinct.
pub fn track_segment<F: Real>(
    a: &PlaneCurve<F>,
    b: &PlaneCurve<F>,
    points: &[Vec<Complex<F>>],
    cfg: &TrackerConfig,
) -> Result<Vec<Vec<Complex<F>>>> {
    if a == b {
        return Ok(points.to_vec());
    }
    let mut ends: Vec<Option<Vec<Complex<F>>>> = bisecting(a, b, points, cfg, SEGMENT_SPLIT_DEPTH)?;
    for attempt in 1..=SEGMENT_CHARTS {
        let pending: Vec<usize> = (0..ends.len()).filter(|&i| ends[i].is_none()).collect();
        if pending.is_empty() {
            break;
        }
        let cfg = if attempt < SEGMENT_CHARTS { cfg.clone() } else { cfg.tightened() };
        let chart = segment_chart::<F>(attempt);
        let starts: Vec<Vec<Complex<F>>> = pending.iter().map(|&i| points[i].clone()).collect();
        for (i, end) in pending.into_iter().zip(in_chart(a, b, &starts, &chart, &cfg)?) {
            ends[i] = end;
        }
    }
    let failed = ends.iter().filter(|e| e.is_none()).count();
    if failed > 0 {
        return Err(Error::Numerical(format!("{failed} paths failed on a segment in every chart")));
    }
    let ends: Vec<Vec<Complex<F>>> = ends.into_iter().flatten().collect();
    if !distinct(&ends, cfg.dedup_tol) {
        return Err(Error::Numerical("two paths reached the same endpoint".into()));
    }
    Ok(ends)
}

const SEGMENT_CHARTS: u64 = 8;
const SEGMENT_SPLIT_DEPTH: u32 = 2;

fn segment_chart<F: Real>(attempt: u64) -> [[Complex<F>; 3]; 3] {
    random_chart(&mut SeedTree::new(0x6368_6172_7473).child("segment", attempt).stream("chart"))
}

/// Tracks each point in the coordinates given by `chart`; points that cannot
/// be expressed there, or whose paths fail, come back as `None`.
fn in_chart<F: Real>(
    a: &PlaneCurve<F>,
    b: &PlaneCurve<F>,
    points: &[Vec<Complex<F>>],
    chart: &[[Complex<F>; 3]; 3],
    cfg: &TrackerConfig,
) -> Result<Vec<Option<Vec<Complex<F>>>>> {
    let inverse = conjugate_transpose(chart);
    let starts: Vec<Option<Vec<Complex<F>>>> = points.iter().map(|p| reexpress(p, &inverse)).collect();
    let usable: Vec<usize> = (0..starts.len()).filter(|&i| starts[i].is_some()).collect();
    let mut out = vec![None; points.len()];
    let tracked: Vec<Vec<Complex<F>>> = usable.iter().map(|&i| starts[i].clone().unwrap_or_default()).collect();
    let ends = bisecting(&a.transform(chart), &b.transform(chart), &tracked, cfg, SEGMENT_SPLIT_DEPTH)?;
    for (i, end) in usable.into_iter().zip(ends) {
        out[i] = end.and_then(|p| reexpress(&p, chart));
    }
    Ok(out)
}

fn conjugate_transpose<F: Real>(m: &[[Complex<F>; 3]; 3]) -> [[Complex<F>; 3]; 3] {
    let mut t = [[Complex::zero(); 3]; 3];
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            t[c][r] = v.conj();
        }
    }
    t
}

/// Rewrites a solution `(e₁, e₂, m, c)` after the coordinate change
/// `P ↦ A·P` of the plane, with `A` unitary.
fn reexpress<F: Real>(sol: &[Complex<F>], a: &[[Complex<F>; 3]; 3]) -> Option<Vec<Complex<F>>> {
    let (e1, e2, m, c) = (sol[0], sol[1], sol[2], sol[3]);
    let one = Complex::new(F::one(), F::zero());
    let two = one + one;
    let root = (e1 * e1 - e2 * two * two).sqrt();
    let apply = |v: [Complex<F>; 3]| -> [Complex<F>; 3] {
        let mut out = [Complex::zero(); 3];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..3).fold(Complex::zero(), |acc, k| acc + a[r][k] * v[k]);
        }
        out
    };
    // Lines transform by the inverse transpose, which for unitary `A` is its
    // entrywise conjugate.
    let line = [m, -one, c];
    let line = {
        let mut out: [Complex<F>; 3] = [Complex::zero(); 3];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..3).fold(Complex::zero(), |acc, k| acc + a[r][k].conj() * line[k]);
        }
        out
    };
    if line[1].norm() == F::zero() {
        return None;
    }
    let mut xs = [Complex::zero(); 2];
    for (i, x) in [(e1 + root) / two, (e1 - root) / two].into_iter().enumerate() {
        let p = apply([x, m * x + c, one]);
        if p[2].norm() == F::zero() {
            return None;
        }
        xs[i] = p[0] / p[2];
    }
    Some(vec![xs[0] + xs[1], xs[0] * xs[1], -line[0] / line[1], -line[2] / line[1]])
}

fn bisecting<F: Real>(
    a: &PlaneCurve<F>,
    b: &PlaneCurve<F>,
    points: &[Vec<Complex<F>>],
    cfg: &TrackerConfig,
    depth: u32,
) -> Result<Vec<Option<Vec<Complex<F>>>>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let h = LinearHomotopy::new(&bitangent_system(a)?, &bitangent_system(b)?, cpx(1.0, 0.0))?;
    let mut ends: Vec<Option<Vec<Complex<F>>>> = track(&h, points, cfg)
        .into_iter()
        .map(|r| (r.status == PathStatus::Success).then_some(r.point))
        .collect();
    let failed: Vec<usize> = (0..ends.len()).filter(|&i| ends[i].is_none()).collect();
    if failed.is_empty() || depth == 0 {
        return Ok(ends);
    }
    let mid = a.lerp(b, cpx(0.5, 0.0));
    let starts: Vec<Vec<Complex<F>>> = failed.iter().map(|&i| points[i].clone()).collect();
    let halfway = bisecting(a, &mid, &starts, cfg, depth - 1)?;
    let reached: Vec<usize> = (0..failed.len()).filter(|&k| halfway[k].is_some()).collect();
    let restarts: Vec<Vec<Complex<F>>> = reached.iter().filter_map(|&k| halfway[k].clone()).collect();
    let done = bisecting(&mid, b, &restarts, cfg, depth - 1)?;
    for (k, p) in reached.into_iter().zip(done) {
        ends[failed[k]] = p;
    }
    Ok(ends)
}

fn track_loop<F: Real>(spec: &LoopSpec<F>, points: &[Vec<Complex<F>>], cfg: &TrackerConfig) -> Result<Vec<Vec<Complex<F>>>> {
    let verts = spec.vertices();
    let mut pts = points.to_vec();
    for w in verts.windows(2) {
        pts = track_segment(w[0], w[1], &pts, cfg)?;
    }
    Ok(pts)
}

/// Permutation of the fibre labels induced by the loop: label `i` is carried
/// to label `perm[i]`.
pub fn monodromy_loop<F: Real>(spec: &LoopSpec<F>, fibre: &BitangentFibre<F>, cfg: &TrackerConfig) -> Result<Permutation> {
    if spec.base != fibre.curve {
        return Err(Error::Usage("loop is not based at the fibre's curve".into()));
    }
    let labels = fibre.labels();
    let mut cfg = cfg.clone();
    let mut last = String::new();
    for _ in 0..3 {
        match track_loop(spec, &labels, &cfg) {
            Ok(ends) => match match_points(&labels, &ends, MATCH_TOL) {
                Some(perm) => return Permutation::new(perm),
                None => last = "endpoints do not match the base fibre bijectively".into(),
            },
            Err(e) => last = e.to_string(),
        }
        cfg = cfg.tightened();
    }
    Err(Error::Numerical(format!("loop rejected: {last}")))
}

/// Distance below which a tracked endpoint is identified with a label.
pub const MATCH_TOL: f64 = 1e-6;

/// Result of a transposition hunt.
#[derive(Clone, Debug)]
pub struct Hunt<F> {
    pub spec: LoopSpec<F>,
    pub permutation: Permutation,
    /// Labels of the two fibre points that collide at `s_star`.
    pub pair: (usize, usize),
    pub s_star: Complex<F>,
    pub radius: f64,
    /// Whether halving the radius reproduced the same permutation.
    pub stable: bool,
    pub attempts: usize,
}

const HUNT_SCAN_STEPS: usize = 16;
const HUNT_RETRIES: usize = 6;
const HUNT_RADIUS: f64 = 1e-3;
const HUNT_CIRCLE_SEGMENTS: usize = 16;
/// Secant refinement stops once successive estimates of `s*` agree to this.
pub const HUNT_S_TOL: f64 = 1e-8;

/// Finds a simple branch point of the bitangent cover on a random pencil
/// through the base curve and returns a loop around it.
///
/// The fibre is carried along the real segment `s ∈ [0, 1]` of the pencil
/// `C + s·(C′ − C)`; the closest pair of fibre points marks a nearby
/// collision. Its parameter `s*` is refined by the secant method on
/// `D(s) = Σₖ (zᵢₖ − zⱼₖ)²`, which vanishes to first order there. The loop
/// follows the scan out to a small circle around `s*` and comes back the same
/// way, so the labels it swaps are exactly the colliding pair. A result is
/// accepted only when the permutation is the transposition of that pair and
/// halving the radius gives the same permutation.
pub fn transposition_hunt<F: Real, R: Rng + ?Sized>(
    fibre: &BitangentFibre<F>,
    cfg: &TrackerConfig,
    rng: &mut R,
) -> Result<Hunt<F>> {
    let base = &fibre.curve;
    let labels = fibre.labels();
    let n = labels.len();
    if n < 2 {
        return Err(Error::Domain("fibre has fewer than two points".into()));
    }
    let mut log = Vec::new();
    for attempt in 1..=HUNT_RETRIES {
        let other = {
            let u = PlaneCurve::<F>::random(base.degree, rng);
            let k = F::from_f64(base.norm() / u.norm()).unwrap();
            PlaneCurve { degree: base.degree, coeffs: u.coeffs.iter().map(|c| *c * k).collect() }
        };
        let pencil = |s: Complex<F>| base.lerp(&other, s);
        // Scan the real segment.
        let mut scan: Vec<(PlaneCurve<F>, Vec<Vec<Complex<F>>>)> = vec![(base.clone(), labels.clone())];
        let mut best: Option<(usize, usize, usize, f64)> = None;
        let mut scan_ok = true;
        for k in 1..=HUNT_SCAN_STEPS {
            let s = cpx::<F>(k as f64 / HUNT_SCAN_STEPS as f64, 0.0);
            let curve = pencil(s);
            let pts = match track_segment(&scan[k - 1].0, &curve, &scan[k - 1].1, cfg) {
                Ok(p) => p,
                Err(_) => {
                    scan_ok = false;
                    break;
                }
            };
            if let Some((i, j, d)) = min_pair(&pts) {
                if best.map_or(true, |b| d < b.3) {
                    best = Some((k, i, j, d));
                }
            }
            scan.push((curve, pts));
        }
        let Some((k, i, j, _)) = best.filter(|_| scan_ok) else {
            log.push(format!("attempt {attempt}: scan failed"));
            continue;
        };
        let s_k = cpx::<F>(k as f64 / HUNT_SCAN_STEPS as f64, 0.0);
        let Some(s_star) = refine_collision(&pencil, s_k, [&scan[k].1[i], &scan[k].1[j]], cfg) else {
            log.push(format!("attempt {attempt}: secant refinement did not converge"));
            continue;
        };
        let route: Vec<PlaneCurve<F>> = scan[1..=k].iter().map(|(c, _)| c.clone()).collect();
        let make = |radius: f64| circle_loop(base, &route, &pencil, s_k, s_star, radius);
        let spec = make(HUNT_RADIUS);
        let perm = match monodromy_loop(&spec, fibre, cfg) {
            Ok(p) => p,
            Err(e) => {
                log.push(format!("attempt {attempt}: {e}"));
                continue;
            }
        };
        let expected = Permutation::transposition(n, i, j);
        if perm != expected {
            log.push(format!("attempt {attempt}: loop gave cycle type {:?}", perm.cycle_type()));
            continue;
        }
        let stable = monodromy_loop(&make(HUNT_RADIUS / 2.0), fibre, cfg).map_or(false, |p| p == perm);
        if !stable {
            log.push(format!("attempt {attempt}: halving the radius changed the permutation"));
            continue;
        }
        return Ok(Hunt { spec, permutation: perm, pair: (i, j), s_star, radius: HUNT_RADIUS, stable, attempts: attempt });
    }
    Err(Error::Numerical(format!("no simple transposition found:\n{}", log.join("\n"))))
}

/// Secant iteration for the zero of `D(s)`; the two points are carried
/// along from `s0` by continuation.
fn refine_collision<F: Real>(
    pencil: &dyn Fn(Complex<F>) -> PlaneCurve<F>,
    s0: Complex<F>,
    pair: [&Vec<Complex<F>>; 2],
    cfg: &TrackerConfig,
) -> Option<Complex<F>> {
    let d_of = |p: &[Vec<Complex<F>>]| -> Complex<F> {
        p[0].iter().zip(&p[1]).fold(Complex::zero(), |acc, (a, b)| acc + (*a - *b) * (*a - *b))
    };
    let mut pts = vec![pair[0].clone(), pair[1].clone()];
    let mut curve = pencil(s0);
    let (mut sa, mut da) = (s0, d_of(&pts));
    let mut sb = s0 + cpx(1e-3, 1e-3);
    let step = |from: &PlaneCurve<F>, s: Complex<F>, pts: &[Vec<Complex<F>>]| {
        let to = pencil(s);
        track_segment(from, &to, pts, cfg).ok().map(|p| (to, p))
    };
    let (c, p) = step(&curve, sb, &pts)?;
    curve = c;
    pts = p;
    let mut db = d_of(&pts);
    for _ in 0..60 {
        let denom = db - da;
        if denom.norm() == F::zero() {
            return None;
        }
        let next = sb - db * (sb - sa) / denom;
        if (next - s0).norm().to_f64().unwrap() > 0.5 {
            return None;
        }
        if (next - sb).norm().to_f64().unwrap() < HUNT_S_TOL {
            return Some(next);
        }
        match step(&curve, next, &pts) {
            Some((c, p)) => {
                curve = c;
                pts = p;
            }
            // Close to the collision the pair can no longer be separated.
            None => return ((next - sb).norm().to_f64().unwrap() < 1e-5).then_some(next),
        }
        sa = sb;
        da = db;
        sb = next;
        db = d_of(&pts);
    }
    None
}

fn circle_loop<F: Real>(
    base: &PlaneCurve<F>,
    route: &[PlaneCurve<F>],
    pencil: &dyn Fn(Complex<F>) -> PlaneCurve<F>,
    s_k: Complex<F>,
    s_star: Complex<F>,
    radius: f64,
) -> LoopSpec<F> {
    let r = F::from_f64(radius).unwrap();
    let toward = s_k - s_star;
    let dir = if toward.norm() > F::zero() { toward / toward.norm() } else { cpx(1.0, 0.0) };
    let mut waypoints: Vec<PlaneCurve<F>> = route.to_vec();
    for m in 0..=HUNT_CIRCLE_SEGMENTS {
        let th = std::f64::consts::TAU * m as f64 / HUNT_CIRCLE_SEGMENTS as f64;
        waypoints.push(pencil(s_star + dir * cpx::<F>(th.cos(), th.sin()) * r));
    }
    waypoints.extend(route.iter().rev().cloned());
    LoopSpec {
        kind: LoopKind::Circle {
            center: [s_star.re.to_f64().unwrap(), s_star.im.to_f64().unwrap()],
            radius,
            segments: HUNT_CIRCLE_SEGMENTS,
        },
        seed: 0,
        base: base.clone(),
        waypoints,
    }
}

/// One monodromy loop in a cover report.
#[derive(Clone, Debug, Serialize)]
pub struct LoopRecord {
    pub kind: LoopKind,
    pub seed: u64,
    pub permutation: Permutation,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntRecord {
    pub pair: (usize, usize),
    pub s_star: [f64; 2],
    pub radius: f64,
    pub stable: bool,
    pub attempts: usize,
    pub permutation: Permutation,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub degree: u32,
    pub seed: u64,
    pub fibre_size: usize,
    pub plucker: usize,
    pub completed_by_loops: usize,
    pub max_residual: f64,
    #[serde(flatten)]
    pub group: GroupReport,
    pub loops: Vec<LoopRecord>,
    pub rejected_loops: usize,
    /// Group order after each accepted loop, when the degree allows it.
    #[serde(serialize_with = "serialize_orders")]
    pub order_history: Vec<BigUint>,
    pub hunt: Option<HuntRecord>,
    pub seconds: f64,
}

fn serialize_orders<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        if x.bits() <= 53 {
            seq.serialize_element(&u64::try_from(x).unwrap())?;
        } else {
            seq.serialize_element(&x.to_string())?;
        }
    }
    seq.end()
}

impl CoverReport {
    /// True when the order stayed the same over the last `window` loops.
    pub fn order_stabilized(&self, window: usize) -> bool {
        let h = &self.order_history;
        h.len() >= window && h[h.len() - window..].windows(2).all(|w| w[0] == w[1])
    }
}

/// Random smooth base curve of degree `d`, its bitangent fibre, `loops`
/// random polygon loops, a transposition hunt for `d ≥ 5`, and the
/// certification chain on the resulting permutations.
pub fn certify_cover(d: u32, loops: usize, seed: u64, cfg: &TrackerConfig) -> Result<CoverReport> {
    if !(4..=6).contains(&d) {
        return Err(Error::Unsupported(format!("cover certification is supported for degrees 4 to 6, not {d}")));
    }
    let clock = std::time::Instant::now();
    let tree = SeedTree::new(seed);
    let mut rng = tree.stream("curve");
    let curve = loop {
        let c = PlaneCurve::<f64>::random(d, &mut rng);
        if c.spot_check_smooth(4, &mut rng) {
            break c;
        }
    };
    let fibre = solve_bitangents(&curve, cfg, &mut tree.stream("solve"))?;
    let n = fibre.len();
    let mut gens = Vec::new();
    let mut records = Vec::new();
    let mut order_history = Vec::new();
    let mut rejected = 0;
    let mut index = 0u64;
    let mut loop_rng = tree.stream("loops");
    while records.len() < loops {
        if rejected > loops + 5 {
            return Err(Error::Numerical(format!("{rejected} loops rejected")));
        }
        let loop_seed = tree.child("loop", index).seed();
        index += 1;
        let spec = LoopSpec::polygon(&fibre.curve, loop_rng.gen_range(4..=8), DEFAULT_LOOP_RADIUS, loop_seed);
        match monodromy_loop(&spec, &fibre, cfg) {
            Ok(perm) => {
                gens.push(perm.clone());
                if n <= SCHREIER_SIMS_MAX_DEGREE {
                    order_history.push(schreier_sims_order(n, &gens)?);
                }
                records.push(LoopRecord { kind: spec.kind, seed: loop_seed, cycle_type: perm.cycle_type(), permutation: perm });
            }
            Err(_) => rejected += 1,
        }
    }
    let hunt = if d >= 5 && loops > 0 {
        let h = transposition_hunt(&fibre, cfg, &mut tree.stream("hunt"))?;
        gens.push(h.permutation.clone());
        Some(HuntRecord {
            pair: h.pair,
            s_star: [h.s_star.re, h.s_star.im],
            radius: h.radius,
            stable: h.stable,
            attempts: h.attempts,
            permutation: h.permutation,
        })
    } else {
        None
    };
    let group = certify_symmetric(n, &gens, DEFAULT_WORD_BUDGET, &mut tree.stream("words"))?;
    Ok(CoverReport {
        degree: d,
        seed,
        fibre_size: n,
        plucker: plucker_count(d),
        completed_by_loops: fibre.completed,
        max_residual: fibre.solutions.max_residual(),
        group,
        loops: records,
        rejected_loops: rejected,
        order_history,
        hunt,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic_fibre(seed: u64) -> (BitangentFibre<f64>, TrackerConfig) {
        let cfg = TrackerConfig::default();
        let mut rng = SeedTree::new(seed).stream("quartic");
        let curve = PlaneCurve::<f64>::random(4, &mut rng);
        (solve_bitangents(&curve, &cfg, &mut rng).unwrap(), cfg)
    }

    #[test]
    fn plucker_numbers() {
        assert_eq!([3, 4, 5, 6].map(plucker_count), [0, 28, 120, 324]);
    }

    #[test]
    fn constant_loop_is_identity() {
        let (fibre, cfg) = quartic_fibre(11);
        let perm = monodromy_loop(&LoopSpec::constant(&fibre.curve), &fibre, &cfg).unwrap();
        assert!(perm.is_identity());
    }

    #[test]
    fn reversed_loop_gives_inverse() {
        let (fibre, cfg) = quartic_fibre(12);
        let spec = LoopSpec::polygon(&fibre.curve, 5, DEFAULT_LOOP_RADIUS, 3);
        let forward = monodromy_loop(&spec, &fibre, &cfg).unwrap();
        let backward = monodromy_loop(&spec.reversed(), &fibre, &cfg).unwrap();
        assert_eq!(backward, forward.inverse());
        assert!(forward.then(&backward).is_identity());
    }
}
