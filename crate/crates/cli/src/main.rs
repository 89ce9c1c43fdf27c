use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use k3curves::glue::{self, GlueInput, G_VARIABLES, H_VARIABLES};
use k3curves::homotopy::{self, PolySystem, TrackerConfig};
use k3curves::incidence::{self, IncidenceConfig, ParamCurve, PointConfigP2, PointConfigQuadric, Target};
use k3curves::local::{self, LocalIdeal, Singularity};
use k3curves::monodromy::{self, PlaneCurve};
use k3curves::parse::{parse_polynomial, parse_polynomials};
use k3curves::permgroup::{self, Permutation};
use k3curves::rng::SeedTree;
use k3curves::series::{self, CuspType};
use k3curves::{bipoly::BiPoly, Error, Rational, Result};

mod config;

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "k3curves", version, about = "Curve counts, local rings, incidence systems and bitangent monodromy")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for path tracking (0 lets the pool decide).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Residual below which a tracked endpoint is accepted.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// `key = value` file with tracker settings and point configurations.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Yau-Zaslow numbers n_0, ..., n_gmax.
    Yz {
        #[arg(long)]
        gmax: usize,
    },
    /// Multiplicity of the singularity x^p - y^q.
    Eps {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Lengths in the local ring Q[[x, y]].
    Localring {
        #[command(subcommand)]
        op: LocalOp,
    },
    /// Incidence systems for rational curves through fixed points.
    Incidence {
        #[command(subcommand)]
        op: IncidenceOp,
    },
    /// Quartic surface through two plane quartics agreeing on a line.
    Glue(GlueArgs),
    /// Solve a square polynomial system by homotopy continuation.
    Solve {
        /// File with one polynomial per line (or separated by `;`).
        #[arg(long)]
        system: PathBuf,
        /// Variable order, comma separated; by default the order of first appearance.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Bitangents of plane curves and their monodromy.
    Monodromy {
        #[command(subcommand)]
        op: MonodromyOp,
    },
    /// Permutation group certification.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
}

#[derive(Subcommand, Debug)]
enum LocalOp {
    /// Colength of an ideal, e.g. --ideal "x*y, x^3, y^2".
    Colength {
        #[arg(long)]
        ideal: String,
    },
    /// Milnor number of a plane curve germ at the origin.
    Milnor {
        #[arg(long)]
        f: String,
    },
    /// Length of a line section a*x + b*y of a node or cusp; random line when a, b are omitted.
    Section {
        #[arg(long)]
        sing: SingArg,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Dimension of curvilinear length-n subschemes at a point, checked for n <= 5.
    Embed {
        #[arg(long)]
        sing: SingArg,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SingArg {
    Smooth,
    Node,
    Cusp,
}

impl From<SingArg> for Singularity {
    fn from(s: SingArg) -> Self {
        match s {
            SingArg::Smooth => Singularity::Smooth,
            SingArg::Node => Singularity::Node,
            SingArg::Cusp => Singularity::Cusp,
        }
    }
}

#[derive(Subcommand, Debug)]
enum IncidenceOp {
    /// Ranks of the point-condition matrices, the rank-drop minors and F.
    Rank,
    /// A random curve through the configured points.
    Sample {
        /// Force a cusp at [0:1] (quadric target only).
        #[arg(long)]
        cusp: bool,
    },
    /// Double points and non-immersion points of a curve.
    Singularities {
        /// JSON curve as printed by `incidence sample`; sampled when omitted.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        cusp: bool,
    },
}

#[derive(Args, Debug)]
struct GlueArgs {
    /// Quartic in y, z, t.
    #[arg(long, required_unless_present = "random_nodes")]
    g: Option<PathBuf>,
    /// Quartic in x, y, z.
    #[arg(long, required_unless_present = "random_nodes")]
    h: Option<PathBuf>,
    /// JSON {"c": [[y,z,t], ...], "c_prime": [[x,y,z], ...]} with rational strings.
    #[arg(long)]
    sing: Option<PathBuf>,
    /// Ratio g(y,z,0) / h(0,y,z); computed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Ignore the files and glue a random compatible pair with this many singular points on each curve.
    #[arg(long, conflicts_with_all = ["g", "h", "sing", "lambda"])]
    random_nodes: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum MonodromyOp {
    /// Monodromy group of the bitangents of a random plane curve.
    Certify {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        loops: usize,
    },
    /// All bitangents of a random plane curve.
    Bitangents {
        #[arg(long)]
        degree: u32,
    },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    /// Transitivity, 2-transitivity, transpositions and (small degree) order.
    Analyze {
        /// JSON list of permutations, each a list of 0-based images.
        #[arg(long)]
        perms: PathBuf,
    },
}

#[derive(Serialize)]
struct RunManifest<'a> {
    subcommand: &'a str,
    argv: &'a [String],
    seed: u64,
    wall_time_seconds: f64,
    version: &'static str,
    status: &'a str,
    output_digest: String,
}

/// Context shared by all subcommands.
struct Run {
    seed: u64,
    tracker: TrackerConfig,
    config: Config,
}

impl Run {
    fn tree(&self) -> SeedTree {
        SeedTree::new(self.seed)
    }
}

/// Integers fitting in 53 bits as JSON numbers, others as decimal strings.
fn int_value(v: &impl ToString) -> Value {
    let s = v.to_string();
    match s.parse::<i64>() {
        Ok(n) if n.unsigned_abs() <= 1 << 53 => json!(n),
        _ => json!(s),
    }
}

fn length_value(l: local::Length) -> Value {
    match l {
        local::Length::Finite(n) => int_value(&n),
        local::Length::Unbounded => json!("unbounded"),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn rational(text: &str) -> Result<Rational> {
    text.trim().parse().map_err(|_| Error::Usage(format!("{text:?} is not a rational number")))
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Yz { .. } => "yz",
        Command::Eps { .. } => "eps",
        Command::Localring { .. } => "localring",
        Command::Incidence { .. } => "incidence",
        Command::Glue(_) => "glue",
        Command::Solve { .. } => "solve",
        Command::Monodromy { .. } => "monodromy",
        Command::Group { .. } => "group",
    }
}

fn dispatch(cmd: &Command, run: &Run) -> Result<Value> {
    match cmd {
        Command::Yz { gmax } => Ok(Value::Array(series::yau_zaslow_counts(*gmax).iter().map(int_value).collect())),
        Command::Eps { p, q } => Ok(int_value(&series::beauville_multiplicity(CuspType::new(*p, *q)?))),
        Command::Localring { op } => localring(op, run),
        Command::Incidence { op } => incidence_cmd(op, run),
        Command::Glue(args) => glue_cmd(args, run),
        Command::Solve { system, vars } => solve_cmd(system, vars.as_deref(), run),
        Command::Monodromy { op } => monodromy_cmd(op, run),
        Command::Group { op: GroupOp::Analyze { perms } } => group_cmd(perms, run),
    }
}

fn localring(op: &LocalOp, run: &Run) -> Result<Value> {
    match op {
        LocalOp::Colength { ideal } => {
            let ideal = LocalIdeal::parse(ideal)?;
            Ok(json!({ "value": length_value(local::colength(&ideal)) }))
        }
        LocalOp::Milnor { f } => Ok(json!({ "value": length_value(local::milnor_number(&BiPoly::parse(f)?)?) })),
        LocalOp::Section { sing, a, b } => {
            let sing = Singularity::from(*sing);
            match (a, b) {
                (Some(a), Some(b)) => {
                    let (a, b) = (rational(a)?, rational(b)?);
                    let value = local::section_length(sing, &a, &b)?;
                    Ok(json!({ "a": a.to_string(), "b": b.to_string(), "value": length_value(value) }))
                }
                (None, None) => {
                    let value = local::generic_section_length(sing, &mut run.tree().stream("section"))?;
                    Ok(json!({ "value": value }))
                }
                _ => Err(Error::Usage("give both --a and --b, or neither".into())),
            }
        }
        LocalOp::Embed { sing, n } => {
            let value = local::embedding_dimension(Singularity::from(*sing), *n, &mut run.tree().stream("embed"))?;
            Ok(json!({ "value": match value {
                local::EmbeddingDim::NoEmbedding => json!("none"),
                local::EmbeddingDim::Dim(d) => json!(d),
            }}))
        }
    }
}

fn target(run: &Run) -> Result<Target> {
    match run.config.get("target").unwrap_or("quadric") {
        "p2" => Ok(Target::P2),
        "quadric" => Ok(Target::Quadric),
        other => Err(Error::Usage(format!("target must be p2 or quadric, not {other:?}"))),
    }
}

fn triple(v: Vec<Rational>, key: &str) -> Result<[Rational; 3]> {
    v.try_into().map_err(|v: Vec<Rational>| Error::Usage(format!("{key} needs three values, got {}", v.len())))
}

/// Point configuration from the config file, random where it is silent.
fn incidence_config(run: &Run) -> Result<IncidenceConfig> {
    let mut rng = run.tree().stream("config");
    match target(run)? {
        Target::P2 => match run.config.rationals("mu")? {
            Some(mu) => Ok(IncidenceConfig::P2(PointConfigP2::new(mu)?)),
            None => Ok(IncidenceConfig::P2(PointConfigP2::random(&mut rng))),
        },
        Target::Quadric => {
            let random = PointConfigQuadric::random(&mut rng);
            let mu = run.config.rationals("mu")?.map(|v| triple(v, "mu")).transpose()?.unwrap_or(random.mu);
            let lambda =
                run.config.rationals("lambda")?.map(|v| triple(v, "lambda")).transpose()?.unwrap_or(random.lambda);
            Ok(IncidenceConfig::Quadric(PointConfigQuadric::new(mu, lambda)?))
        }
    }
}

fn sample(run: &Run, cusp: bool) -> Result<(ParamCurve, Value)> {
    let cfg = incidence_config(run)?;
    let mut rng = run.tree().stream("sample");
    match (&cfg, cusp) {
        (IncidenceConfig::Quadric(c), true) => {
            let s = incidence::cusp_sample(c, &mut rng)?;
            Ok((s.curve.clone(), to_json(&s)?))
        }
        (IncidenceConfig::P2(_), true) => Err(Error::Usage("--cusp needs target = quadric".into())),
        _ => {
            let s = incidence::sample_curve(&cfg, &mut rng)?;
            Ok((s.curve.clone(), to_json(&s)?))
        }
    }
}

fn incidence_cmd(op: &IncidenceOp, run: &Run) -> Result<Value> {
    match op {
        IncidenceOp::Rank => match incidence_config(run)? {
            IncidenceConfig::Quadric(cfg) => {
                let a = incidence::build_A(&cfg);
                Ok(json!({
                    "config": to_json(&cfg)?,
                    "matrix": to_json(&a)?,
                    "rank": a.rank(),
                    "rank_last_three_columns": a.columns(&[3, 4, 5]).rank(),
                    "gamma_minors": to_json(&incidence::gamma_minors(&cfg.lambda)?)?,
                    "f": to_json(&incidence::build_f(&cfg.mu[0])?)?,
                }))
            }
            IncidenceConfig::P2(cfg) => {
                let lambda = match run.config.rationals("lambda")? {
                    Some(v) if v.len() == 1 => v[0].clone(),
                    Some(v) => return Err(Error::Usage(format!("the plane target takes one lambda, got {}", v.len()))),
                    None => k3curves::rng::random_rational(&mut run.tree().stream("lambda")),
                };
                let m = incidence::p2_conditions(&cfg.mu[0], &lambda);
                Ok(json!({
                    "config": to_json(&cfg)?,
                    "lambda": lambda.to_string(),
                    "matrix": to_json(&m)?,
                    "rank": m.rank(),
                    "kernel_dimension": m.kernel().len(),
                    "f": to_json(&incidence::build_f(&cfg.mu[0])?)?,
                }))
            }
        },
        IncidenceOp::Sample { cusp } => Ok(sample(run, *cusp)?.1),
        IncidenceOp::Singularities { curve, cusp } => {
            let curve = match curve {
                Some(path) => {
                    let c: ParamCurve = serde_json::from_str(&read(path)?)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    c.validate()?;
                    c
                }
                None => sample(run, *cusp)?.0,
            };
            let double_points = incidence::double_points(&curve)?;
            let non_immersion = incidence::non_immersion_points(&curve)?;
            Ok(json!({
                "curve": to_json(&curve)?,
                "double_points": to_json(&double_points)?,
                "non_immersion_points": to_json(&non_immersion)?,
                "delta": double_points.len() + non_immersion.len(),
            }))
        }
    }
}

#[derive(serde::Deserialize)]
struct SingFile {
    #[serde(default)]
    c: Vec<[String; 3]>,
    #[serde(default)]
    c_prime: Vec<[String; 3]>,
}

fn points(v: &[[String; 3]]) -> Result<Vec<[Rational; 3]>> {
    v.iter().map(|p| Ok([rational(&p[0])?, rational(&p[1])?, rational(&p[2])?])).collect()
}

/// The `λ` with `g(y,z,0) = λ·h(0,y,z)`, or 1 when both sides vanish.
fn compatibility_ratio(g: &k3curves::RationalMPoly, h: &k3curves::RationalMPoly) -> Result<Rational> {
    let g_line: Vec<_> = g.terms().filter(|(e, _)| e[2] == 0).map(|(e, c)| ([e[0], e[1]], c.clone())).collect();
    let h_line: Vec<_> = h.terms().filter(|(e, _)| e[0] == 0).map(|(e, c)| ([e[1], e[2]], c.clone())).collect();
    match (g_line.first(), h_line.iter().find(|(e, _)| g_line.first().is_some_and(|(f, _)| f == e))) {
        (None, _) => Ok(Rational::from_integer(1.into())),
        (Some((_, gc)), Some((_, hc))) => Ok(gc / hc),
        _ => Err(Error::Domain("g(y,z,0) is not a multiple of h(0,y,z)".into())),
    }
}

fn glue_cmd(args: &GlueArgs, run: &Run) -> Result<Value> {
    let mut rng = run.tree().stream("glue");
    let inp = match args.random_nodes {
        Some(n) => glue::random_input(&mut rng, n, n)?,
        None => {
            let (Some(g), Some(h)) = (&args.g, &args.h) else {
                return Err(Error::Usage("--g and --h are required".into()));
            };
            let g = parse_polynomial(&read(g)?, &G_VARIABLES)?;
            let h = parse_polynomial(&read(h)?, &H_VARIABLES)?;
            let sing = match &args.sing {
                Some(path) => serde_json::from_str::<SingFile>(&read(path)?)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => SingFile { c: vec![], c_prime: vec![] },
            };
            let lambda = match &args.lambda {
                Some(l) => rational(l)?,
                None => compatibility_ratio(&g, &h)?,
            };
            GlueInput { g, h, lambda, sing_c: points(&sing.c)?, sing_c_prime: points(&sing.c_prime)? }
        }
    };
    let out = glue::glue(&inp, &mut rng)?;
    Ok(json!({
        "g": k3curves::parse::format_polynomial(&inp.g, &G_VARIABLES),
        "h": k3curves::parse::format_polynomial(&inp.h, &H_VARIABLES),
        "lambda": inp.lambda.to_string(),
        "surface": to_json(&out)?,
    }))
}

/// Identifiers in order of first appearance.
fn variables_in(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c.is_ascii_alphabetic() {
            let mut end = start + c.len_utf8();
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let name = text[start..end].to_string();
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    out
}

fn solve_cmd(system: &PathBuf, vars: Option<&[String]>, run: &Run) -> Result<Value> {
    let text = read(system)?;
    let names: Vec<String> = vars.map(<[String]>::to_vec).unwrap_or_else(|| variables_in(&text));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let eqs = parse_polynomials(&text, &refs)?;
    let sys = PolySystem::new(eqs.iter().map(|p| p.to_complex::<f64>()).collect())?;
    if !sys.is_square() {
        return Err(Error::Usage(format!("{} equations in {} variables; the system must be square", sys.len(), sys.nvars())));
    }
    let set = homotopy::solve(&sys, &run.tracker, &mut run.tree().stream("solve"))?;
    Ok(json!({ "variables": names, "solutions": to_json(&set)? }))
}

fn monodromy_cmd(op: &MonodromyOp, run: &Run) -> Result<Value> {
    match op {
        MonodromyOp::Certify { degree, loops } => to_json(&monodromy::certify_cover(*degree, *loops, run.seed, &run.tracker)?),
        MonodromyOp::Bitangents { degree } => {
            if !(3..=6).contains(degree) {
                return Err(Error::Unsupported(format!("bitangents are computed for degrees 3 to 6, not {degree}")));
            }
            let mut rng = run.tree().stream("curve");
            let curve = loop {
                let c = PlaneCurve::<f64>::random(*degree, &mut rng);
                if c.spot_check_smooth(4, &mut rng) {
                    break c;
                }
            };
            let fibre = monodromy::solve_bitangents(&curve, &run.tracker, &mut run.tree().stream("solve"))?;
            Ok(json!({
                "degree": degree,
                "plucker": monodromy::plucker_count(*degree),
                "count": fibre.len(),
                "completed_by_loops": fibre.completed,
                "max_residual": fibre.solutions.max_residual(),
                "solutions": to_json(&fibre.solutions.solutions)?,
            }))
        }
    }
}

fn group_cmd(path: &PathBuf, run: &Run) -> Result<Value> {
    let images: Vec<Vec<usize>> =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let n = images.first().map(Vec::len).ok_or_else(|| Error::Usage("the permutation list is empty".into()))?;
    if images.iter().any(|p| p.len() != n) {
        return Err(Error::Usage("permutations act on different numbers of points".into()));
    }
    let gens = images.into_iter().map(Permutation::new).collect::<Result<Vec<_>>>()?;
    let report =
        permgroup::certify_symmetric(n, &gens, permgroup::DEFAULT_WORD_BUDGET, &mut run.tree().stream("words"))?;
    let orbits = permgroup::orbits(n, &gens)?;
    let mut v = to_json(&report)?;
    v["orbits"] = json!(orbits.len());
    Ok(v)
}

fn prepare(global: &Global) -> Result<Run> {
    let config = match &global.config {
        Some(path) => Config::load(&path.to_string_lossy())?,
        None => Config::default(),
    };
    let mut tracker = TrackerConfig::default();
    config.apply_tracker(&mut tracker)?;
    if let Some(t) = global.tolerance.or(config.number("tolerance")?) {
        tracker.success_residual = t;
    }
    if let Some(t) = global.threads {
        tracker.threads = t;
    }
    tracker.validate()?;
    let seed = match global.seed {
        Some(s) => s,
        None => config.number("seed")?.unwrap_or(0),
    };
    Ok(Run { seed, tracker, config })
}

fn execute(cli: &Cli) -> Result<(u64, String)> {
    let run = prepare(&cli.global)?;
    let value = dispatch(&cli.command, &run)?;
    let text = serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))? + "\n";
    Ok((run.seed, text))
}

fn emit_manifest(cli: &Cli, argv: &[String], seed: u64, started: Instant, status: &str, output: &str) {
    let manifest = RunManifest {
        subcommand: subcommand_name(&cli.command),
        argv,
        seed,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION"),
        status,
        output_digest: format!("sha256:{}", hex::encode(Sha256::digest(output.as_bytes()))),
    };
    let text = serde_json::to_string_pretty(&manifest).unwrap_or_default() + "\n";
    match &cli.global.out {
        Some(out) => {
            let mut path = out.clone().into_os_string();
            path.push(".manifest.json");
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("cannot write manifest {}: {e}", PathBuf::from(path).display());
            }
        }
        None => eprint!("{text}"),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok((seed, text)) => {
            let written = match &cli.global.out {
                Some(out) => std::fs::write(out, &text).map_err(|e| format!("cannot write {}: {e}", out.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            emit_manifest(&cli, &argv, seed, started, "ok", &text);
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("k3curves: {e}");
            let seed = cli.global.seed.unwrap_or(0);
            emit_manifest(&cli, &argv, seed, started, "error", "");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_switch_to_strings_above_53_bits() {
        assert_eq!(int_value(&(1u64 << 53)), json!(9007199254740992u64));
        assert_eq!(int_value(&((1u64 << 53) + 1)), json!("9007199254740993"));
        assert_eq!(int_value(&-24), json!(-24));
    }

    #[test]
    fn variables_follow_first_appearance() {
        assert_eq!(variables_in("y^2 - x1*y + 3/2\nx1 - z_0"), ["y", "x1", "z_0"]);
    }

    #[test]
    fn compatibility_ratio_from_leading_line_terms() {
        let g = parse_polynomial("2*y^4 + 4*z^4 + t^4", &G_VARIABLES).unwrap();
        let h = parse_polynomial("y^4 + 2*z^4 + x^4", &H_VARIABLES).unwrap();
        assert_eq!(compatibility_ratio(&g, &h).unwrap(), Rational::from_integer(2.into()));
    }
}
