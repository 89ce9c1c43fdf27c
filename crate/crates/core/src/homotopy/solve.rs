//! Total-degree start systems, the `solve` driver and fibre matching.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use super::mpoly::{MPoly, PolySystem};
use super::tracker::{track, LinearHomotopy, PathResult, PathStatus, TrackerConfig};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One accepted endpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution<F: Real> {
    #[serde(serialize_with = "serialize_point")]
    pub point: Vec<Complex<F>>,
    pub residual: f64,
    /// Pivot-ratio estimate of the Jacobian condition number.
    pub condition: f64,
    /// More than one path converged here.
    pub multiplicity_suspect: bool,
    pub start_index: usize,
}

fn serialize_point<F: Real, S: serde::Serializer>(p: &[Complex<F>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for z in p {
        seq.serialize_element(&[z.re.to_f64().unwrap(), z.im.to_f64().unwrap()])?;
    }
    seq.end()
}

/// Per-path record kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathLog {
    pub start_index: usize,
    #[serde(flatten)]
    pub status: PathStatus,
    pub residual: f64,
    pub steps: usize,
}

impl<F: Real> From<&PathResult<F>> for PathLog {
    fn from(r: &PathResult<F>) -> Self {
        PathLog { start_index: r.start_index, status: r.status, residual: r.residual, steps: r.steps }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSet<F: Real> {
    pub nvars: usize,
    pub solutions: Vec<Solution<F>>,
    pub at_infinity: usize,
    pub failed: Vec<PathLog>,
    pub paths: usize,
    /// Successful paths whose endpoint duplicated an earlier one.
    pub merged: usize,
}

impl<F: Real> SolutionSet<F> {
    pub fn from_points(nvars: usize, points: Vec<Vec<Complex<F>>>) -> Self {
        let n = points.len();
        SolutionSet {
            nvars,
            solutions: points
                .into_iter()
                .enumerate()
                .map(|(i, p)| Solution { point: p, residual: 0.0, condition: 1.0, multiplicity_suspect: false, start_index: i })
                .collect(),
            at_infinity: 0,
            failed: Vec::new(),
            paths: n,
            merged: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<Complex<F>>> {
        self.solutions.iter().map(|s| s.point.clone()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.solutions.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    /// Sorts solutions lexicographically by (re, im) of each coordinate.
    pub fn sort_lex(&mut self) {
        self.solutions.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    }
}

pub(crate) fn lex_cmp<F: Real>(a: &[Complex<F>], b: &[Complex<F>]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
        let o = x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

pub fn distance<F: Real>(a: &[Complex<F>], b: &[Complex<F>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm().to_f64().unwrap()).fold(0.0, f64::max)
}

/// Start system `xᵢ^{dᵢ} − 1` and all of its roots.
pub fn total_degree_start<F: Real>(sys: &PolySystem<Complex<F>>) -> Result<(PolySystem<Complex<F>>, Vec<Vec<Complex<F>>>)> {
    if !sys.is_square() {
        return Err(Error::Usage("total-degree start needs a square system".into()));
    }
    let n = sys.nvars();
    let degs = sys.degrees();
    if degs.iter().any(|&d| d == 0) {
        return Err(Error::Domain("system contains an equation of degree 0".into()));
    }
    let one = Complex::new(F::one(), F::zero());
    let eqs = degs
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n];
            e[i] = d;
            MPoly::from_terms(n, [(e, one), (vec![0; n], -one)])
        })
        .collect();
    let roots: Vec<Vec<Complex<F>>> = degs
        .iter()
        .map(|&d| {
            (0..d)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(d);
                    Complex::new(F::from_f64(th.cos()).unwrap(), F::from_f64(th.sin()).unwrap())
                })
                .collect()
        })
        .collect();
    let mut starts = vec![Vec::new()];
    for r in &roots {
        starts = starts
            .into_iter()
            .flat_map(|p: Vec<Complex<F>>| {
                r.iter().map(move |z| {
                    let mut q = p.clone();
                    q.push(*z);
                    q
                })
            })
            .collect();
    }
    Ok((PolySystem::new(eqs)?, starts))
}

/// Random point on the unit circle.
pub fn random_gamma<F: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<F> {
    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::new(F::from_f64(th.cos()).unwrap(), F::from_f64(th.sin()).unwrap())
}

/// Collects successful endpoints into a set, merging duplicates closer than
/// `cfg.dedup_tol`.
pub fn collect_solutions<F: Real>(nvars: usize, results: &[PathResult<F>], cfg: &TrackerConfig) -> SolutionSet<F> {
    let mut set = SolutionSet { nvars, solutions: Vec::new(), at_infinity: 0, failed: Vec::new(), paths: results.len(), merged: 0 };
    for r in results {
        match r.status {
            PathStatus::Success => {
                if let Some(prev) = set.solutions.iter_mut().find(|s| distance(&s.point, &r.point) < cfg.dedup_tol) {
                    set.merged += 1;
                    prev.multiplicity_suspect = true;
                    continue;
                }
                set.solutions.push(Solution {
                    point: r.point.clone(),
                    residual: r.residual,
                    condition: r.condition,
                    multiplicity_suspect: false,
                    start_index: r.start_index,
                });
            }
            PathStatus::AtInfinity => set.at_infinity += 1,
            PathStatus::Failed { .. } => set.failed.push(r.into()),
        }
    }
    set
}

/// `f(x₁, …, xₙ)` of degree `d` as `x₀ᵈ·f(x₁/x₀, …, xₙ/x₀)` in `n + 1` variables.
pub fn homogenize<F: Real>(f: &MPoly<Complex<F>>) -> MPoly<Complex<F>> {
    let d = f.total_degree();
    MPoly::from_terms(
        f.nvars() + 1,
        f.terms().map(|(e, c)| {
            let mut h = Vec::with_capacity(e.len() + 1);
            h.push(d - e.iter().sum::<u32>());
            h.extend_from_slice(e);
            (h, *c)
        }),
    )
}

/// All finite isolated solutions of a square system by a total-degree
/// homotopy with a random `γ`.
///
/// Tracking happens on a random affine patch of projective space: the system
/// is homogenized, the start system is `xᵢ^{dᵢ} − x₀^{dᵢ}`, and the patch
/// equation `a·x = 1` is shared by both ends. Paths heading to infinity
/// therefore stay bounded, and endpoints are classified by the size of
/// `x[1..] / x[0]`.
pub fn solve<F: Real, R: Rng + ?Sized>(
    sys: &PolySystem<Complex<F>>,
    cfg: &TrackerConfig,
    rng: &mut R,
) -> Result<SolutionSet<F>> {
    cfg.validate()?;
    let results = track_projective(sys, cfg, rng)?;
    let set = collect_solutions(sys.nvars(), &results, cfg);
    if set.failed.len() * 20 > results.len() {
        let log: Vec<String> = set
            .failed
            .iter()
            .map(|p| format!("path {}: {:?}, residual {:.3e}, {} steps", p.start_index, p.status, p.residual, p.steps))
            .collect();
        return Err(Error::Numerical(format!(
            "{} of {} paths failed:\n{}",
            set.failed.len(),
            results.len(),
            log.join("\n")
        )));
    }
    Ok(set)
}

/// Tracks every total-degree path on a random projective patch and returns
/// the per-path results with endpoints already dehomogenized.
pub fn track_projective<F: Real, R: Rng + ?Sized>(
    sys: &PolySystem<Complex<F>>,
    cfg: &TrackerConfig,
    rng: &mut R,
) -> Result<Vec<PathResult<F>>> {
    let p = ProjectiveStart::new(sys, rng)?;
    let mut results = track(&p.homotopy, &p.starts, cfg);
    for r in &mut results {
        r.point = p.dehomogenize(&r.point);
    }
    Ok(results)
}

/// Total-degree homotopy on a random affine patch `a·x = 1` of projective
/// space, with its start points.
#[derive(Clone, Debug)]
pub struct ProjectiveStart<F> {
    pub start: PolySystem<Complex<F>>,
    pub target: PolySystem<Complex<F>>,
    pub patch: Vec<Complex<F>>,
    pub gamma: Complex<F>,
    pub homotopy: LinearHomotopy<F>,
    pub starts: Vec<Vec<Complex<F>>>,
}

impl<F: Real> ProjectiveStart<F> {
    pub fn new<R: Rng + ?Sized>(sys: &PolySystem<Complex<F>>, rng: &mut R) -> Result<Self> {
        let n = sys.nvars();
        let (_, affine_starts) = total_degree_start(sys)?;
        let patch: Vec<Complex<F>> = (0..=n).map(|_| random_gamma::<F, R>(rng)).collect();
        let one = Complex::new(F::one(), F::zero());
        let target = on_patch_system(sys, &patch)?;
        let mut start: Vec<MPoly<Complex<F>>> = sys
            .degrees()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut e = vec![0; n + 1];
                e[i + 1] = d;
                let mut h = vec![0; n + 1];
                h[0] = d;
                MPoly::from_terms(n + 1, [(e, one), (h, -one)])
            })
            .collect();
        start.push(patch_equation(&patch));
        let starts: Vec<Vec<Complex<F>>> = affine_starts.iter().map(|p| lift_to_patch(&patch, p)).collect();
        let gamma = random_gamma(rng);
        let start = PolySystem::new(start)?;
        let homotopy = LinearHomotopy::new(&start, &target, gamma)?.homogenizing();
        Ok(ProjectiveStart { start, target, patch, gamma, homotopy, starts })
    }

    pub fn dehomogenize(&self, x: &[Complex<F>]) -> Vec<Complex<F>> {
        dehomogenize(x)
    }

    pub fn lift(&self, p: &[Complex<F>]) -> Vec<Complex<F>> {
        lift_to_patch(&self.patch, p)
    }
}

/// Affine point `x[1..] / x[0]`.
pub fn dehomogenize<F: Real>(x: &[Complex<F>]) -> Vec<Complex<F>> {
    x[1..].iter().map(|z| *z / x[0]).collect()
}

/// The patch equation `a·x − 1`.
pub fn patch_equation<F: Real>(patch: &[Complex<F>]) -> MPoly<Complex<F>> {
    let n = patch.len();
    let one = Complex::new(F::one(), F::zero());
    MPoly::from_terms(
        n,
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, patch[i])
            })
            .chain(std::iter::once((vec![0; n], -one))),
    )
}

/// The homogenized system together with the patch equation.
pub fn on_patch_system<F: Real>(sys: &PolySystem<Complex<F>>, patch: &[Complex<F>]) -> Result<PolySystem<Complex<F>>> {
    if patch.len() != sys.nvars() + 1 {
        return Err(Error::Usage("patch length must be one more than the variable count".into()));
    }
    let mut eqs: Vec<MPoly<Complex<F>>> = sys.equations().iter().map(homogenize).collect();
    eqs.push(patch_equation(patch));
    PolySystem::new(eqs)
}

/// `(1, p)` scaled onto the patch.
pub fn lift_to_patch<F: Real>(patch: &[Complex<F>], p: &[Complex<F>]) -> Vec<Complex<F>> {
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(Complex::new(F::one(), F::zero()));
    v.extend_from_slice(p);
    let w = v.iter().zip(patch).fold(Complex::new(F::zero(), F::zero()), |acc, (a, b)| acc + *a * *b);
    v.iter().map(|z| *z / w).collect()
}

/// Matches `endpoints` to `labels` by nearest neighbour. Returns `perm` with
/// `perm[i] = j` when endpoint `i` lands on label `j`, or `None` unless the
/// assignment is a bijection in which every match is mutual and closer than
/// `tol`.
pub fn match_points<F: Real>(labels: &[Vec<Complex<F>>], endpoints: &[Vec<Complex<F>>], tol: f64) -> Option<Vec<usize>> {
    if labels.len() != endpoints.len() {
        return None;
    }
    let nearest = |p: &[Complex<F>], set: &[Vec<Complex<F>>]| -> (usize, f64) {
        set.iter()
            .enumerate()
            .map(|(j, q)| (j, distance(p, q)))
            .fold((usize::MAX, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
    };
    let mut perm = Vec::with_capacity(endpoints.len());
    let mut used = vec![false; labels.len()];
    for e in endpoints {
        let (j, d) = nearest(e, labels);
        if j == usize::MAX || d > tol || used[j] {
            return None;
        }
        let (back, _) = nearest(&labels[j], endpoints);
        if distance(&endpoints[back], e) != 0.0 {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

/// True when both sets agree up to a bijection within `tol`.
pub fn same_set<F: Real>(a: &[Vec<Complex<F>>], b: &[Vec<Complex<F>>], tol: f64) -> bool {
    match_points(a, b, tol).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedTree;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn start_counts() {
        let x = MPoly::<C>::var(2, 0);
        let y = MPoly::<C>::var(2, 1);
        let sys = PolySystem::new(vec![x.pow(2), &y.pow(3) + &x]).unwrap();
        let (_, s) = total_degree_start(&sys).unwrap();
        assert_eq!(s.len(), 6);
        let bad = PolySystem::new(vec![x.clone(), MPoly::constant(2, c(1.0))]).unwrap();
        assert!(matches!(total_degree_start(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn two_squares() {
        let x = MPoly::<C>::var(2, 0);
        let y = MPoly::<C>::var(2, 1);
        let one = MPoly::constant(2, c(1.0));
        let sys = PolySystem::new(vec![&x.pow(2) - &one, &y.pow(2) - &one]).unwrap();
        let mut rng = SeedTree::new(3).stream("t");
        let set = solve(&sys, &TrackerConfig::default(), &mut rng).unwrap();
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn matching_requires_bijection() {
        let a = vec![vec![c(0.0)], vec![c(1.0)]];
        let b = vec![vec![c(1.0 + 1e-9)], vec![c(1e-9)]];
        assert_eq!(match_points(&a, &b, 1e-6), Some(vec![1, 0]));
        let collapsed = vec![vec![c(1.0)], vec![c(1.0 + 1e-9)]];
        assert_eq!(match_points(&a, &collapsed, 1e-6), None);
    }
}
