//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion whose failure is a known, analysed discrepancy is listed in
//! `KNOWN_FAILURES` together with the exact failure it must reproduce. The
//! run exits non-zero when any other criterion fails, or when a known
//! failure changes character (including starting to pass).

use std::process::Command;
use std::time::{Duration, Instant};

use k3curves::homotopy::TrackerConfig;
use k3curves::incidence::{self, DoublePointKind, IncidenceConfig, PointConfigP2, PointConfigQuadric};
use k3curves::local::{self, Length, LocalIdeal, Singularity};
use k3curves::monodromy::{self, CoverReport, PlaneCurve};
use k3curves::rng::SeedTree;
use k3curves::series::{self, CuspType, IntSeries};
use k3curves::{glue, Error};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

/// Criterion number and the message its failure must contain.
const KNOWN_FAILURES: [(u32, &str); 1] = [(4, "cusp n = 3")];

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_k3curves")).args(["yz", "--gmax", "4"]).output().unwrap();
    let elapsed = t.elapsed();
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let ok = out.status.success() && value == serde_json::json!([1, 24, 324, 3200, 25650]);
    Outcome::new(ok && within(elapsed, 1.0), format!("yz --gmax 4 = {value} in {:.3}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let counts = IntSeries::from_coeffs(series::yau_zaslow_counts(64));
    let product = counts.try_mul(&series::discriminant(64)).unwrap();
    let ok = product == IntSeries::monomial(1, 64);
    let elapsed = t.elapsed();
    Outcome::new(ok && within(elapsed, 5.0), format!("order 64 product equal to q: {ok}, {:.3}s", elapsed.as_secs_f64()))
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_3() -> Outcome {
    let base = series::beauville_multiplicity(CuspType::new(2, 3).unwrap()).to_string() == "2";
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in 1..60u32 {
        for q in 1..=(60 - p) {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let n = u128::from(p + q);
            let b = binomial(n, u128::from(q));
            let expected = (b % n == 0).then(|| (b / n).to_string());
            let got = series::beauville_multiplicity(CuspType::new(p, q).unwrap()).to_string();
            if expected.as_deref() != Some(got.as_str()) {
                bad.push((p, q));
            }
            checked += 1;
        }
    }
    Outcome::new(base && bad.is_empty(), format!("eps(2,3) = 2: {base}; {checked} coprime pairs, mismatches {bad:?}"))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut failures = Vec::new();
    let colength = local::colength(&LocalIdeal::parse("x + y, x*y").unwrap());
    if colength != Length::Finite(2) {
        failures.push(format!("colength(x+y, xy) = {colength}"));
    }
    let mut rng = SeedTree::new(4).stream("section");
    match local::generic_section_length(Singularity::Cusp, &mut rng) {
        Ok(2) => {}
        other => failures.push(format!("generic cusp section = {other:?}")),
    }
    for (f, mu) in [("x*y", 1), ("y^2 - x^3", 2)] {
        let got = local::milnor_number(&k3curves::bipoly::BiPoly::parse(f).unwrap()).unwrap();
        if got != Length::Finite(mu) {
            failures.push(format!("milnor({f}) = {got}"));
        }
    }
    let mut rng = SeedTree::new(4).stream("embed");
    for sing in [Singularity::Smooth, Singularity::Node, Singularity::Cusp] {
        for n in 1..=5 {
            match local::embedding_dimension(sing, n, &mut rng) {
                Ok(d) if d == local::embedding_table(sing, n) => {}
                Ok(d) => failures.push(format!("{sing:?} n = {n}: {d:?}")),
                Err(Error::Internal(msg)) => {
                    failures.push(format!("{} n = {n}: {msg}", format!("{sing:?}").to_lowercase()))
                }
                Err(e) => failures.push(format!("{sing:?} n = {n}: {e}")),
            }
        }
    }
    let elapsed = t.elapsed();
    if !within(elapsed, 1.0) {
        failures.push(format!("took {:.3}s", elapsed.as_secs_f64()));
    }
    let detail = if failures.is_empty() { "all local checks and table entries verified".into() } else { failures.join("; ") };
    Outcome::new(failures.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let tree = SeedTree::new(5);
    let mut bad_rank = 0;
    for i in 0..100 {
        let cfg = PointConfigQuadric::random(&mut tree.child("config", i).stream("points"));
        let a = incidence::build_A(&cfg);
        if a.rank() != 4 || a.columns(&[3, 4, 5]).rank() != 3 {
            bad_rank += 1;
        }
    }
    let mut bad_f = 0;
    for i in 0..50 {
        let mu = PointConfigP2::random(&mut tree.child("mu", i).stream("points")).mu[0].clone();
        let c = incidence::build_f(&mu).unwrap().certificate;
        if !(c.multilinear && c.p1_coefficient && c.not_divisible_by_r3 && c.not_divisible_by_r1_minus_r3) {
            bad_f += 1;
        }
    }
    let elapsed = t.elapsed();
    Outcome::new(
        bad_rank == 0 && bad_f == 0 && within(elapsed, 10.0),
        format!("rank failures {bad_rank}/100, F certificate failures {bad_f}/50, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn nodes_only(c: &incidence::ParamCurve, expected: usize) -> bool {
    let dps = incidence::double_points(c).unwrap();
    dps.len() == expected
        && dps.iter().all(|d| d.kind == DoublePointKind::Node && !d.unresolved)
        && incidence::non_immersion_points(c).unwrap().is_empty()
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let tree = SeedTree::new(6);
    let mut quadric_ok = 0;
    let mut plane_ok = 0;
    let mut cusp_ok = 0;
    for i in 0..20 {
        let mut rng = tree.child("quadric", i).stream("sample");
        let cfg = IncidenceConfig::Quadric(PointConfigQuadric::random(&mut rng));
        if nodes_only(&incidence::sample_curve(&cfg, &mut rng).unwrap().curve, 4) {
            quadric_ok += 1;
        }
        let mut rng = tree.child("plane", i).stream("sample");
        let cfg = IncidenceConfig::P2(PointConfigP2::random(&mut rng));
        if nodes_only(&incidence::sample_curve(&cfg, &mut rng).unwrap().curve, 3) {
            plane_ok += 1;
        }
    }
    let cusp_runs = 5;
    for i in 0..cusp_runs {
        let mut rng = tree.child("cusp", i).stream("sample");
        let s = incidence::cusp_sample(&PointConfigQuadric::random(&mut rng), &mut rng).unwrap();
        let dps = incidence::double_points(&s.curve).unwrap();
        let nodes = dps.iter().filter(|d| d.kind == DoublePointKind::Node).count();
        if s.milnor == Length::Finite(2) && nodes == 3 && dps.len() == 3 {
            cusp_ok += 1;
        }
    }
    let elapsed = t.elapsed();
    Outcome::new(
        quadric_ok == 20 && plane_ok == 20 && cusp_ok == cusp_runs && within(elapsed, 60.0),
        format!(
            "(3,3) curves with 4 nodes {quadric_ok}/20, plane quartics with 3 nodes {plane_ok}/20, cusp samples {cusp_ok}/{cusp_runs}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn smooth_curve(degree: u32, seed: u64) -> PlaneCurve<f64> {
    let mut rng = SeedTree::new(seed).stream("curve");
    loop {
        let c = PlaneCurve::<f64>::random(degree, &mut rng);
        if c.spot_check_smooth(4, &mut rng) {
            return c;
        }
    }
}

/// Regular solutions with residual below 1e-10, and the tracking time.
fn bitangent_count(degree: u32, seed: u64) -> (usize, f64) {
    let t = Instant::now();
    let cfg = TrackerConfig::default();
    let fibre = monodromy::solve_bitangents(&smooth_curve(degree, seed), &cfg, &mut SeedTree::new(seed).stream("solve"))
        .unwrap();
    let regular =
        fibre.solutions.solutions.iter().filter(|s| !s.multiplicity_suspect && s.residual < 1e-10).count();
    (regular, t.elapsed().as_secs_f64())
}

fn criterion_7(sextic: &CoverReport) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for seed in [71, 72, 73] {
        let (n, secs) = bitangent_count(4, seed);
        ok &= n == 28 && secs < 30.0;
        parts.push(format!("quartic {n} ({secs:.1}s)"));
    }
    let (n, secs) = bitangent_count(5, 74);
    ok &= n == 120;
    parts.push(format!("quintic {n} ({secs:.1}s)"));
    ok &= sextic.fibre_size == 324 && sextic.max_residual < 1e-10;
    parts.push(format!("sextic {} with max residual {:.1e}", sextic.fibre_size, sextic.max_residual));
    Outcome::new(ok, parts.join(", "))
}

fn criterion_8() -> Outcome {
    let factorial_28: u128 = (1..=28u128).product();
    let cfg = TrackerConfig::default();
    let mut orders = Vec::new();
    let mut ok = true;
    for seed in [81, 82, 83] {
        let r = monodromy::certify_cover(4, 20, seed, &cfg).unwrap();
        ok &= r.loops.len() >= 20 && r.order_stabilized(11);
        let order = r.group.order.as_ref().map(|o| o.to_string());
        ok &= order.as_deref().and_then(|o| o.parse::<u128>().ok()).is_some_and(|o| o < factorial_28);
        orders.push(order.unwrap_or_else(|| "none".into()));
    }
    ok &= orders.windows(2).all(|w| w[0] == w[1]);
    Outcome::new(ok, format!("orders {orders:?}, stable over the last 10 loops, below 28!"))
}

fn criterion_9(first: &CoverReport, second_secs: f64, identical: bool) -> Outcome {
    let hunt = first.hunt.as_ref().is_some_and(|h| h.permutation.is_transposition());
    let g = &first.group;
    let ok = first.loops.len() <= 12 && g.transitive && g.two_transitive && hunt && g.certified_symmetric && identical;
    Outcome::new(
        ok,
        format!(
            "{} loops: transitive {}, two_transitive {}, hunt 2-cycle {hunt}, symmetric {}, rerun identical {identical}; {:.0}s and {:.0}s",
            first.loops.len(),
            g.transitive,
            g.two_transitive,
            g.certified_symmetric,
            first.seconds,
            second_secs
        ),
    )
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let tree = SeedTree::new(10);
    let mut ok = 0;
    for i in 0..10 {
        let mut rng = tree.child("glue", i).stream("input");
        let inp = glue::random_input(&mut rng, 1 + (i as usize % 3), 1 + (i as usize % 2)).unwrap();
        let out = glue::glue(&inp, &mut rng).unwrap();
        let nonzero = out.certificate.iter().all(|c| !num_traits::Zero::is_zero(&c.value));
        if nonzero && glue::verify(&inp, &out).is_ok() && out.certificate.len() == inp.sing_c.len() + inp.sing_c_prime.len()
        {
            ok += 1;
        }
    }
    let elapsed = t.elapsed();
    Outcome::new(ok == 10 && within(elapsed, 5.0), format!("{ok}/10 inputs certified, {:.2}s", elapsed.as_secs_f64()))
}

/// Comparable form of a report without its timing.
fn fingerprint(r: &CoverReport) -> serde_json::Value {
    let mut v = serde_json::to_value(r).unwrap();
    v.as_object_mut().unwrap().remove("seconds");
    v
}

fn main() {
    let cfg = TrackerConfig::default();
    let t = Instant::now();
    let sextic = monodromy::certify_cover(6, 12, 7, &cfg).unwrap();
    let rerun = monodromy::certify_cover(6, 12, 7, &cfg).unwrap();
    let identical = fingerprint(&sextic) == fingerprint(&rerun);
    let sextic_total = t.elapsed().as_secs_f64();

    let mut results: Vec<(u32, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7(&sextic)),
        (8, criterion_8()),
    ];
    let mut c9 = criterion_9(&sextic, rerun.seconds, identical);
    c9.pass &= sextic_total < 7200.0;
    results.push((9, c9));
    results.push((10, criterion_10()));

    let mut unexpected = 0;
    for (n, o) in &results {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| k == n);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = match known {
            Some((_, msg)) if !o.pass && o.detail.contains(msg) => " (known discrepancy)",
            Some(_) => {
                unexpected += 1;
                " (known failure changed)"
            }
            None if !o.pass => {
                unexpected += 1;
                ""
            }
            None => "",
        };
        println!("criterion {n:>2}: {status}{note}: {}", o.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
