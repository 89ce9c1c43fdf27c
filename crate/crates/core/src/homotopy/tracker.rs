//! Predictor–corrector path tracking for linear homotopies
//! `H(x, s) = (1 - s)·G(x) + s·F(x)`, `s ∈ [0, 1]`.
//!
//! The predictor is classical RK4 on `dx/ds = -H_x⁻¹ H_s`; the corrector is
//! Newton's method at the new `s`. Step sizes adapt multiplicatively.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::mpoly::PolySystem;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackerConfig {
    /// Newton tolerance used when sharpening endpoints (relative step size).
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub step_grow: f64,
    pub step_shrink: f64,
    /// A path succeeds when its scaled residual at `s = 1` is below this.
    pub success_residual: f64,
    pub final_sharpen_iters: usize,
    /// Relative Newton step accepted by the corrector along the path.
    pub corrector_tol: f64,
    /// Newton iterations allowed per step along the path.
    pub corrector_iters: usize,
    /// Largest relative first Newton correction accepted along the path.
    pub max_correction: f64,
    /// Points beyond this norm are declared to be at infinity.
    pub infinity_norm: f64,
    /// Solutions closer than this are merged by `solve`.
    pub dedup_tol: f64,
    pub max_steps: usize,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            newton_tol: 1e-12,
            max_newton_iters: 6,
            initial_step: 0.05,
            max_step: 0.1,
            min_step: 1e-8,
            step_grow: 1.5,
            step_shrink: 0.5,
            success_residual: 1e-10,
            final_sharpen_iters: 3,
            corrector_tol: 1e-9,
            corrector_iters: 3,
            max_correction: 1e-3,
            infinity_norm: 1e8,
            dedup_tol: 1e-6,
            max_steps: 200_000,
            threads: 0,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.newton_tol,
            self.initial_step,
            self.max_step,
            self.min_step,
            self.step_grow,
            self.step_shrink,
            self.success_residual,
            self.corrector_tol,
            self.infinity_norm,
            self.dedup_tol,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) || self.max_newton_iters == 0 {
            return Err(Error::Usage("tracker settings must be positive".into()));
        }
        if self.min_step >= self.initial_step || self.initial_step > self.max_step {
            return Err(Error::Usage("min_step must be smaller than initial_step".into()));
        }
        if self.step_shrink >= 1.0 || self.step_grow <= 1.0 {
            return Err(Error::Usage("step_shrink must be < 1 and step_grow > 1".into()));
        }
        Ok(())
    }

    /// Same settings with halved step sizes, used for re-tracking.
    pub fn tightened(&self) -> Self {
        TrackerConfig {
            initial_step: self.initial_step * 0.5,
            min_step: self.min_step * 0.5,
            step_grow: 1.0 + (self.step_grow - 1.0) * 0.5,
            corrector_tol: self.corrector_tol * 0.1,
            ..self.clone()
        }
    }
}

/// Values needed at one `(x, s)`: `H`, `∂H/∂x` (row-major) and `∂H/∂s`.
pub struct Eval<F> {
    pub h: Vec<Complex<F>>,
    pub hx: Vec<Complex<F>>,
    pub hs: Vec<Complex<F>>,
}

impl<F: Real> Eval<F> {
    pub fn new(n: usize) -> Self {
        Eval { h: vec![Complex::zero(); n], hx: vec![Complex::zero(); n * n], hs: vec![Complex::zero(); n] }
    }
}

/// A square homotopy in `n` complex variables.
pub trait Homotopy<F: Real>: Sync {
    fn nvars(&self) -> usize;
    fn evaluate(&self, x: &[Complex<F>], s: F, out: &mut Eval<F>);
    /// Backward-error residual of the system at parameter `s`.
    fn residual(&self, x: &[Complex<F>], s: F) -> f64;
    /// Size of the point in the affine chart the caller cares about.
    fn affine_norm(&self, x: &[Complex<F>]) -> F {
        norm(x)
    }
}

#[derive(Clone, Debug)]
struct Term<F> {
    mono: usize,
    start: Complex<F>,
    target: Complex<F>,
}

/// `H = (1 - s)·γ·G + s·F`, with `G` and `F` sharing one monomial table.
#[derive(Clone, Debug)]
pub struct LinearHomotopy<F> {
    nvars: usize,
    monos: Vec<Vec<u32>>,
    max_exp: Vec<u32>,
    homogenizing: bool,
    eqs: Vec<Vec<Term<F>>>,
}

impl<F: Real> LinearHomotopy<F> {
    pub fn new(start: &PolySystem<Complex<F>>, target: &PolySystem<Complex<F>>, gamma: Complex<F>) -> Result<Self> {
        let n = target.nvars();
        if !target.is_square() || !start.is_square() || start.nvars() != n {
            return Err(Error::Usage("homotopy endpoints must be square systems of equal size".into()));
        }
        let mut index = std::collections::HashMap::new();
        let mut monos: Vec<Vec<u32>> = Vec::new();
        let mut eqs = Vec::with_capacity(n);
        for (g, f) in start.equations().iter().zip(target.equations()) {
            let mut terms: std::collections::BTreeMap<usize, Term<F>> = Default::default();
            for (which, poly) in [(0, g), (1, f)] {
                for (e, c) in poly.terms() {
                    let id = *index.entry(e.clone()).or_insert_with(|| {
                        monos.push(e.clone());
                        monos.len() - 1
                    });
                    let t = terms.entry(id).or_insert(Term { mono: id, start: Complex::zero(), target: Complex::zero() });
                    if which == 0 {
                        t.start = *c * gamma;
                    } else {
                        t.target = *c;
                    }
                }
            }
            eqs.push(terms.into_values().collect());
        }
        let max_exp = (0..n).map(|v| monos.iter().map(|e| e[v]).max().unwrap_or(0)).collect();
        Ok(LinearHomotopy { nvars: n, monos, max_exp, eqs, homogenizing: false })
    }

    /// Marks coordinate 0 as a homogenizing variable, so that the affine
    /// point is `x[1..] / x[0]`.
    pub fn homogenizing(mut self) -> Self {
        self.homogenizing = true;
        self
    }

    /// Constant homotopy `H(x, s) = F(x)`.
    pub fn constant(sys: &PolySystem<Complex<F>>) -> Result<Self> {
        Self::new(sys, sys, Complex::new(F::one(), F::zero()))
    }

    fn powers(&self, x: &[Complex<F>]) -> Vec<Vec<Complex<F>>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(xi, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(Complex::new(F::one(), F::zero()));
                for k in 1..=m as usize {
                    let prev = p[k - 1];
                    p.push(prev * xi);
                }
                p
            })
            .collect()
    }
}

impl<F: Real> Homotopy<F> for LinearHomotopy<F> {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn evaluate(&self, x: &[Complex<F>], s: F, out: &mut Eval<F>) {
        let n = self.nvars;
        let pw = self.powers(x);
        let mut vals = Vec::with_capacity(self.monos.len());
        let mut grads = Vec::with_capacity(self.monos.len() * n);
        for e in &self.monos {
            let mut v = Complex::new(F::one(), F::zero());
            for k in 0..n {
                v = v * pw[k][e[k] as usize];
            }
            vals.push(v);
            for k in 0..n {
                if e[k] == 0 {
                    grads.push(Complex::zero());
                    continue;
                }
                let mut d = pw[k][e[k] as usize - 1] * F::from_u32(e[k]).unwrap();
                for j in 0..n {
                    if j != k {
                        d = d * pw[j][e[j] as usize];
                    }
                }
                grads.push(d);
            }
        }
        let one_minus = F::one() - s;
        for (i, terms) in self.eqs.iter().enumerate() {
            let mut h = Complex::zero();
            let mut hs = Complex::zero();
            let row = &mut out.hx[i * n..(i + 1) * n];
            row.iter_mut().for_each(|r| *r = Complex::zero());
            for t in terms {
                let c = t.start * one_minus + t.target * s;
                let m = vals[t.mono];
                h = h + c * m;
                hs = hs + (t.target - t.start) * m;
                let g = &grads[t.mono * n..(t.mono + 1) * n];
                for k in 0..n {
                    row[k] = row[k] + c * g[k];
                }
            }
            out.h[i] = h;
            out.hs[i] = hs;
        }
    }

    fn affine_norm(&self, x: &[Complex<F>]) -> F {
        if !self.homogenizing {
            return norm(x);
        }
        let w = x[0].norm();
        if w == F::zero() {
            F::infinity()
        } else {
            norm(&x[1..]) / w
        }
    }

    fn residual(&self, x: &[Complex<F>], s: F) -> f64 {
        let pw = self.powers(x);
        let one_minus = F::one() - s;
        let mut worst = 0.0f64;
        for terms in &self.eqs {
            let mut h: Complex<F> = Complex::zero();
            let mut scale = F::zero();
            for t in terms {
                let e = &self.monos[t.mono];
                let mut m = Complex::new(F::one(), F::zero());
                for k in 0..self.nvars {
                    m = m * pw[k][e[k] as usize];
                }
                let c = t.start * one_minus + t.target * s;
                h = h + c * m;
                scale = scale + c.norm() * m.norm();
            }
            let r = if scale > F::zero() { (h.norm() / scale).to_f64().unwrap() } else { 0.0 };
            worst = worst.max(r);
        }
        worst
    }
}

/// Solves `a · x = b` in place (Gaussian elimination with partial pivoting).
/// Returns the ratio of the largest to the smallest pivot, or `None` when a
/// pivot vanishes.
pub(crate) fn lu_solve<F: Real>(a: &mut [Complex<F>], b: &mut [Complex<F>], n: usize) -> Option<f64> {
    let mut pmax = F::zero();
    let mut pmin = F::infinity();
    for c in 0..n {
        let (mut p, mut best) = (c, a[c * n + c].norm());
        for r in c + 1..n {
            let v = a[r * n + c].norm();
            if v > best {
                p = r;
                best = v;
            }
        }
        if !(best > F::zero()) || !best.is_finite() {
            return None;
        }
        pmax = pmax.max(best);
        pmin = pmin.min(best);
        if p != c {
            for j in 0..n {
                a.swap(c * n + j, p * n + j);
            }
            b.swap(c, p);
        }
        let inv = Complex::new(F::one(), F::zero()) / a[c * n + c];
        for r in c + 1..n {
            let f = a[r * n + c] * inv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a[c * n + j];
                a[r * n + j] = a[r * n + j] - f * v;
            }
            let bc = b[c];
            b[r] = b[r] - f * bc;
        }
    }
    for c in (0..n).rev() {
        let mut acc = b[c];
        for j in c + 1..n {
            acc = acc - a[c * n + j] * b[j];
        }
        b[c] = acc / a[c * n + c];
    }
    Some((pmax / pmin).to_f64().unwrap())
}

/// Largest relative Newton update accepted as rounding noise.
const CORRECTOR_NOISE_CAP: f64 = 1e-8;

pub(crate) fn norm<F: Real>(v: &[Complex<F>]) -> F {
    v.iter().fold(F::zero(), |acc, z| acc.max(z.norm()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PathStatus {
    Success,
    AtInfinity,
    /// Step size underflow or Newton failure; `last_s` is the last good parameter.
    Failed { last_s: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult<F> {
    pub start_index: usize,
    pub point: Vec<Complex<F>>,
    pub status: PathStatus,
    pub residual: f64,
    /// Pivot-ratio estimate of the Jacobian condition number at the endpoint.
    pub condition: f64,
    pub steps: usize,
}

struct Tracker<'a, F: Real, H: Homotopy<F>> {
    h: &'a H,
    cfg: &'a TrackerConfig,
    ev: Eval<F>,
    n: usize,
}

impl<F: Real, H: Homotopy<F>> Tracker<'_, F, H> {
    fn tangent(&mut self, x: &[Complex<F>], s: F) -> Option<Vec<Complex<F>>> {
        self.h.evaluate(x, s, &mut self.ev);
        let mut a = self.ev.hx.clone();
        let mut b: Vec<Complex<F>> = self.ev.hs.iter().map(|v| -*v).collect();
        lu_solve(&mut a, &mut b, self.n)?;
        Some(b)
    }

    fn rk4(&mut self, x: &[Complex<F>], s: F, h: F) -> Option<Vec<Complex<F>>> {
        let two = F::from_f64(2.0).unwrap();
        let half = h / two;
        let axpy = |x: &[Complex<F>], k: &[Complex<F>], t: F| -> Vec<Complex<F>> {
            x.iter().zip(k).map(|(a, b)| *a + *b * t).collect()
        };
        let k1 = self.tangent(x, s)?;
        let k2 = self.tangent(&axpy(x, &k1, half), s + half)?;
        let k3 = self.tangent(&axpy(x, &k2, half), s + half)?;
        let k4 = self.tangent(&axpy(x, &k3, h), s + h)?;
        let six = F::from_f64(6.0).unwrap();
        Some(
            (0..self.n)
                .map(|i| x[i] + (k1[i] + k2[i] * two + k3[i] * two + k4[i]) * (h / six))
                .collect(),
        )
    }

    /// One Newton step at `s`; returns the step norm and condition estimate.
    fn newton_step(&mut self, x: &mut [Complex<F>], s: F) -> Option<(F, f64)> {
        self.h.evaluate(x, s, &mut self.ev);
        let mut a = self.ev.hx.clone();
        let mut b = self.ev.h.clone();
        let cond = lu_solve(&mut a, &mut b, self.n)?;
        for (xi, d) in x.iter_mut().zip(&b) {
            *xi = *xi - *d;
        }
        let dn = norm(&b);
        if !dn.is_finite() {
            return None;
        }
        Some((dn, cond))
    }

    fn correct(&mut self, x: &mut [Complex<F>], s: F) -> bool {
        let tol = F::from_f64(self.cfg.corrector_tol).unwrap();
        let noise_cap = F::from_f64(CORRECTOR_NOISE_CAP).unwrap();
        let mut prev = F::infinity();
        for it in 0..self.cfg.corrector_iters.min(self.cfg.max_newton_iters) {
            let Some((dn, cond)) = self.newton_step(x, s) else { return false };
            let scale = F::one() + norm(x);
            // rounding level of the linear solve
            let floor = (F::from_f64(16.0 * cond).unwrap_or_else(F::infinity) * F::epsilon()).min(noise_cap);
            if dn <= tol.max(floor) * scale {
                return true;
            }
            if it == 0 && dn > F::from_f64(self.cfg.max_correction).unwrap() * scale {
                return false;
            }
            if it > 0 && dn > prev * F::from_f64(0.25).unwrap() {
                return false;
            }
            prev = dn;
        }
        false
    }

    fn run(&mut self, start_index: usize, start: &[Complex<F>]) -> PathResult<F> {
        let cfg = self.cfg;
        let mut x = start.to_vec();
        let mut s = F::zero();
        let mut h = F::from_f64(cfg.initial_step).unwrap();
        let min_step = F::from_f64(cfg.min_step).unwrap();
        let grow = F::from_f64(cfg.step_grow).unwrap();
        let max_step = F::from_f64(cfg.max_step).unwrap();
        let shrink = F::from_f64(cfg.step_shrink).unwrap();
        let inf_norm = F::from_f64(cfg.infinity_norm).unwrap();
        let mut streak = 0;
        // (log10(1 - s), log10 |x|) recorded when 1 - s first drops below 10⁻²
        let mut history: Vec<(f64, f64)> = Vec::new();
        let mut next_decade = 1e-2;
        let mut steps = 0;
        let fail = |x: Vec<Complex<F>>, s: F, steps| PathResult {
            start_index,
            point: x,
            status: PathStatus::Failed { last_s: s.to_f64().unwrap() },
            residual: f64::INFINITY,
            condition: f64::INFINITY,
            steps,
        };
        while s < F::one() {
            steps += 1;
            if steps > cfg.max_steps {
                return fail(x, s, steps);
            }
            let step = h.min(F::one() - s);
            let s_next = if step == F::one() - s { F::one() } else { s + step };
            let accepted = match self.rk4(&x, s, step) {
                Some(mut pred) => {
                    if self.correct(&mut pred, s_next) {
                        Some(pred)
                    } else {
                        None
                    }
                }
                None => None,
            };
            let at_infinity = |x: Vec<Complex<F>>, steps| PathResult {
                start_index,
                point: x,
                status: PathStatus::AtInfinity,
                residual: f64::INFINITY,
                condition: f64::INFINITY,
                steps,
            };
            match accepted {
                Some(next) => {
                    x = next;
                    s = s_next;
                    let size = self.h.affine_norm(&x);
                    if size > inf_norm {
                        return at_infinity(x, steps);
                    }
                    let rest = (F::one() - s).to_f64().unwrap();
                    if rest > 0.0 && rest <= next_decade {
                        history.push((rest.log10(), log_norm(size)));
                        next_decade = rest / 10.0;
                    }
                    streak += 1;
                    if streak >= 3 {
                        h = (h * grow).min(max_step);
                        streak = 0;
                    }
                }
                None => {
                    h = h * shrink;
                    streak = 0;
                    // minimum step relative to 1 - s
                    let floor = min_step * (F::one() - s).min(F::one());
                    if h < floor || s + h == s {
                        let size = self.h.affine_norm(&x);
                        if size > inf_norm.sqrt() || diverging(&history, s, size) {
                            return at_infinity(x, steps);
                        }
                        return fail(x, s, steps);
                    }
                }
            }
        }
        // Sharpen at s = 1.
        let one = F::one();
        let tol = F::from_f64(cfg.newton_tol).unwrap();
        let mut condition = f64::INFINITY;
        for _ in 0..cfg.final_sharpen_iters.max(1) * 2 {
            let mut trial = x.clone();
            match self.newton_step(&mut trial, one) {
                Some((dn, cond)) => {
                    condition = cond;
                    if !trial.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                        break;
                    }
                    x = trial;
                    if dn <= tol * (F::one() + norm(&x)) {
                        break;
                    }
                }
                None => break,
            }
        }
        let residual = self.h.residual(&x, one);
        let status = if self.h.affine_norm(&x) > inf_norm {
            PathStatus::AtInfinity
        } else if residual < cfg.success_residual {
            PathStatus::Success
        } else {
            PathStatus::Failed { last_s: 1.0 }
        };
        PathResult { start_index, point: x, status, residual, condition, steps }
    }
}

fn log_norm<F: Real>(size: F) -> f64 {
    size.to_f64().unwrap().max(1e-300).log10()
}

/// Growth test for a path that stalled close to `s = 1`. `history` holds
/// `(log₁₀(1 − s), log₁₀|x|)` at successive decades. A path converging to a
/// finite singular point has increments that decay geometrically; a path
/// heading to infinity keeps growing at a steady rate per decade.
fn diverging<F: Real>(history: &[(f64, f64)], s: F, size: F) -> bool {
    let rest = (F::one() - s).to_f64().unwrap();
    if rest <= 0.0 || rest > 1e-5 || history.is_empty() {
        return false;
    }
    let mut pts = history.to_vec();
    pts.push((rest.log10(), log_norm(size)));
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let span = first.0 - last.0;
    if span < 3.0 || last.1 - first.1 < 0.4 {
        return false;
    }
    let mid = first.0 - span / 2.0;
    let split = pts.iter().position(|p| p.0 <= mid).unwrap_or(pts.len() - 1);
    let rate = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (a.0 - b.0);
    let early = rate(first, pts[split]);
    let late = rate(pts[split], last);
    early > 0.08 && late > 0.08 && late >= 0.6 * early
}

/// Tracks a single path from `s = 0` to `s = 1`.
pub fn track_path<F: Real, H: Homotopy<F>>(
    h: &H,
    start_index: usize,
    start: &[Complex<F>],
    cfg: &TrackerConfig,
) -> PathResult<F> {
    let n = h.nvars();
    let mut t = Tracker { h, cfg, ev: Eval::new(n), n };
    t.run(start_index, start)
}

/// Tracks every start point; results come back in start order regardless of
/// how the work pool schedules paths.
pub fn track<F: Real, H: Homotopy<F>>(h: &H, starts: &[Vec<Complex<F>>], cfg: &TrackerConfig) -> Vec<PathResult<F>> {
    let run = || {
        starts
            .par_iter()
            .enumerate()
            .map(|(i, x0)| track_path(h, i, x0, cfg))
            .collect::<Vec<_>>()
    };
    if cfg.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::mpoly::MPoly;

    type C = Complex<f64>;

    fn quad(target: f64) -> PolySystem<C> {
        let x = MPoly::<C>::var(1, 0);
        PolySystem::new(vec![&x.pow(2) - &MPoly::constant(1, C::new(target, 0.0))]).unwrap()
    }

    #[test]
    fn constant_homotopy_is_identity() {
        let h = LinearHomotopy::constant(&quad(1.0)).unwrap();
        let cfg = TrackerConfig::default();
        let out = track(&h, &[vec![C::new(1.0, 0.0)], vec![C::new(-1.0, 0.0)]], &cfg);
        for (r, want) in out.iter().zip([1.0, -1.0]) {
            assert_eq!(r.status, PathStatus::Success);
            assert!((r.point[0] - C::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_deformation_moves_roots() {
        let h = LinearHomotopy::new(&quad(1.0), &quad(4.0), C::new(1.0, 0.0)).unwrap();
        let out = track(&h, &[vec![C::new(1.0, 0.0)], vec![C::new(-1.0, 0.0)]], &TrackerConfig::default());
        assert!((out[0].point[0] - C::new(2.0, 0.0)).norm() < 1e-12);
        assert!((out[1].point[0] - C::new(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn single_precision_tracking() {
        let x = MPoly::<Complex<f32>>::var(1, 0);
        let sys = |t: f32| PolySystem::new(vec![&x.pow(2) - &MPoly::constant(1, Complex::new(t, 0.0))]).unwrap();
        let h = LinearHomotopy::new(&sys(1.0), &sys(9.0), Complex::new(1.0, 0.0)).unwrap();
        let cfg = TrackerConfig { corrector_tol: 1e-5, newton_tol: 1e-6, success_residual: 1e-5, ..Default::default() };
        let r = track_path(&h, 0, &[Complex::new(1.0f32, 0.0)], &cfg);
        assert_eq!(r.status, PathStatus::Success);
        assert!((r.point[0].re - 3.0).abs() < 1e-4);
    }

    #[test]
    fn config_validation() {
        assert!(TrackerConfig::default().validate().is_ok());
        let bad = TrackerConfig { min_step: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
