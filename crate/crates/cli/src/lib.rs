//! Command-line front end: argument parsing, dispatch and JSON reports.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use hsikit::fieldtheory::{apply_cerf_move, compose_check, generalized_intersections, solve_intersections, CerfMove, CobordismChain};
use hsikit::grpres::{h1, pi1, Family, ManifoldDesc};
use hsikit::hsicalc::{
    brieskorn_bounds, certify_minimal, euler_check, hsi, plumbing_qualifies, triad_rank_bounds, Minimality, TAG_CASSON,
    TAG_CONDITIONAL, TAG_EULER,
};
use hsikit::linkdiag::{certify_quasi_alternating, determinant, PDDiagram};
use hsikit::repvar::{
    enumerate_brieskorn, enumerate_lens, histogram, lens_histogram, solve_numeric, SolverOptions, TwistedRepProblem,
};
use hsikit::Error;

pub const SEED_ENV: &str = "HSIKIT_SEED";

#[derive(Parser, Debug)]
#[command(name = "hsikit", version, about = "Invariants of closed 3-manifolds from SU(2) holonomy data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First homology in invariant-factor form
    H1(Common),
    /// |chi| of the HSI group against |H_1|
    Euler(Common),
    /// HSI group, rank and minimality
    Hsi(Common),
    /// Rank bounds from an exact triangle (--triad) or from the manifold
    RankBounds(Common),
    /// Casson invariant and irreducible count of a Brieskorn sphere
    Casson(Common),
    /// Twisted SU(2) representation variety, solved numerically
    Repvar(Common),
    /// Quasi-alternating certificate search for a PD diagram
    QaCheck(Common),
    /// Minimality certificate for plumbings, surgeries and double covers
    PlumbingCheck(Common),
    /// Compare the composites of two chains
    ComposeCheck(Common),
    /// Apply a Cerf move to a chain and compare
    CerfCheck(Common),
    /// Generalized intersection points of a closed chain
    Intersections(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
    lens: Option<Vec<i64>>,
    #[arg(long, num_args = 3, value_names = ["A1", "A2", "A3"])]
    brieskorn: Option<Vec<i64>>,
    #[arg(long)]
    s2xs1: bool,
    /// Manifold description, inline JSON or a file path
    #[arg(long)]
    manifold: Option<String>,
    /// PD code, inline JSON or a file path
    #[arg(long)]
    pd: Option<String>,
    /// Cobordism chain, inline JSON or a file path; repeat for compose-check
    #[arg(long)]
    chain: Vec<String>,
    /// Cerf move, inline JSON or a file path
    #[arg(long = "move")]
    cerf_move: Option<String>,
    /// Class bits, comma separated
    #[arg(long, value_delimiter = ',')]
    class: Option<Vec<u8>>,
    /// rank(beta) rank(gamma) |chi(alpha)|
    #[arg(long, num_args = 3, value_names = ["RB", "RG", "CHI"])]
    triad: Option<Vec<u64>>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Handled = Result<(Value, bool), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_json<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| usage(format!("cannot read {what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid {what}: {e}")))
}

impl Common {
    fn seed(&self) -> Result<u64, Failure> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| usage(format!("{SEED_ENV} is not an integer: {v}"))),
            Err(_) => Ok(SolverOptions::default().seed),
        }
    }

    fn solver(&self) -> Result<SolverOptions, Failure> {
        if !(self.tol > 0.0) || self.restarts == 0 {
            return Err(usage("--tol must be positive and --restarts at least 1"));
        }
        Ok(SolverOptions { restarts: self.restarts, tol: self.tol, seed: self.seed()?, ..SolverOptions::default() })
    }

    fn manifold(&self) -> Result<ManifoldDesc, Failure> {
        let given = [self.lens.is_some(), self.brieskorn.is_some(), self.s2xs1, self.manifold.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(usage("give exactly one of --lens, --brieskorn, --s2xs1, --manifold"));
        }
        let mut desc = if let Some(l) = &self.lens {
            ManifoldDesc::lens(l[0], l[1])
        } else if let Some(a) = &self.brieskorn {
            ManifoldDesc::brieskorn(a[0], a[1], a[2])
        } else if self.s2xs1 {
            ManifoldDesc::s2xs1()
        } else {
            let v: Value = read_json("manifold", self.manifold.as_deref().unwrap_or_default())?;
            let inner = match v.get("manifold") {
                Some(m) => m.clone(),
                None => v,
            };
            serde_json::from_value(inner).map_err(|e| usage(format!("invalid manifold: {e}")))?
        };
        if let Some(c) = &self.class {
            desc = desc.with_class(c.clone());
        }
        desc.validate()?;
        Ok(desc)
    }

    fn pd(&self) -> Result<PDDiagram, Failure> {
        let arg = self.pd.as_deref().ok_or_else(|| usage("--pd is required"))?;
        read_json("PD code", arg)
    }

    fn chains(&self, n: usize) -> Result<Vec<CobordismChain>, Failure> {
        if self.chain.len() != n {
            return Err(usage(format!("expected {n} --chain argument(s), got {}", self.chain.len())));
        }
        self.chain
            .iter()
            .map(|c| {
                let chain: CobordismChain = read_json("chain", c)?;
                chain.validate()?;
                Ok(chain)
            })
            .collect()
    }
}

fn cmd_h1(c: &Common) -> Handled {
    let desc = c.manifold()?;
    let h = h1(&desc)?;
    Ok((json!({ "manifold": desc, "torsion": h.torsion, "betti": h.betti, "h1_order": h.order() }), true))
}

fn cmd_euler(c: &Common) -> Handled {
    let desc = c.manifold()?;
    let e = euler_check(&desc)?;
    Ok((
        json!({
            "manifold": desc,
            "chi_abs": e.chi_abs,
            "h1_order": e.h1_order,
            "betti": e.betti,
            "from_group": e.from_group,
            "agrees": e.agrees,
            "provenance": [TAG_EULER],
        }),
        true,
    ))
}

fn cmd_hsi(c: &Common) -> Handled {
    let r = hsi(&c.manifold()?)?;
    let known = r.rank.is_some();
    Ok((
        json!({
            "manifold": r.manifold,
            "rank": r.rank,
            "minimal": r.minimal == Minimality::Certified,
            "minimality": r.minimal,
            "parity": r.parity(),
            "group": r.group.as_ref().map(|g| g.to_string()),
            "degrees": r.group,
            "bounds": r.bounds,
            "chi_abs": r.chi_abs,
            "h1_order": r.h1_order,
            "provenance": r.provenance,
        }),
        known,
    ))
}

fn cmd_rank_bounds(c: &Common) -> Handled {
    if let Some(t) = &c.triad {
        let (lo, hi) = triad_rank_bounds(t[0], t[1], t[2])?;
        return Ok((
            json!({
                "rank_beta": t[0],
                "rank_gamma": t[1],
                "chi_alpha": t[2],
                "lower": lo,
                "upper": hi,
                "provenance": ["surgery exact triangle", TAG_EULER],
            }),
            true,
        ));
    }
    let desc = c.manifold()?;
    if let Family::Brieskorn { a } = desc.family {
        let b = brieskorn_bounds(a)?;
        let chi = h1(&desc)?.order();
        return Ok((
            json!({
                "manifold": desc,
                "lambda": b.lambda,
                "rational": b.rational,
                "integral": b.integral,
                "mod2": b.mod2,
                "chi_abs": chi,
                "conditional": b.conditional,
                "provenance": [TAG_CONDITIONAL, TAG_CASSON, TAG_EULER],
            }),
            true,
        ));
    }
    let r = hsi(&desc)?;
    Ok((json!({ "manifold": desc, "bounds": r.bounds, "chi_abs": r.chi_abs, "provenance": r.provenance }), true))
}

fn cmd_casson(c: &Common) -> Handled {
    let desc = c.manifold()?;
    let Family::Brieskorn { a } = desc.family else {
        return Err(Failure::Core(Error::UnsupportedDescription("casson needs a Brieskorn sphere".into())));
    };
    let e = enumerate_brieskorn(a)?;
    Ok((
        json!({
            "manifold": desc,
            "lambda": e.irreducible.len() / 2,
            "irreducibles": e.irreducible.len(),
            "provenance": [TAG_CASSON],
        }),
        true,
    ))
}

fn rep_problem(desc: &ManifoldDesc) -> Result<TwistedRepProblem, Failure> {
    let bit = |k: usize| desc.class_c.get(k).copied().unwrap_or(0);
    match &desc.family {
        Family::Lens { p, q } => return Ok(TwistedRepProblem::lens(*p, *q, (bit(0), bit(1)))),
        Family::S2xS1 => return Ok(TwistedRepProblem::lens(0, 1, (bit(0), bit(1)))),
        _ => {}
    }
    let p = pi1(desc)?;
    if desc.class_is_zero()? {
        return Ok(TwistedRepProblem::untwisted(p));
    }
    let ones: Vec<usize> = desc.class_c.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).collect();
    let name = match (&desc.family, ones.as_slice()) {
        (Family::SurgeryOnTorusKnot { .. }, [0]) => "meridian".to_string(),
        (Family::PlumbingTree { .. }, [v]) => format!("meridian{v}"),
        _ => {
            return Err(Failure::Core(Error::UnsupportedDescription(
                "twisted problems are built for lens spaces, S2xS1 and single meridian classes".into(),
            )))
        }
    };
    Ok(TwistedRepProblem::with_meridian(&p, &name)?)
}

fn cmd_repvar(c: &Common) -> Handled {
    let desc = c.manifold()?;
    let opts = c.solver()?;
    let prob = rep_problem(&desc)?;
    let exact = match &desc.family {
        Family::Lens { p, q } => {
            let bit = |k: usize| desc.class_c.get(k).copied().unwrap_or(0);
            Some(lens_histogram(&enumerate_lens(*p, *q, (bit(0), bit(1)))?))
        }
        Family::Brieskorn { a } if desc.class_is_zero()? => Some(enumerate_brieskorn(*a)?.histogram()),
        _ => None,
    };
    let orbits = solve_numeric(&prob, &opts)?;
    let orbit_json: Vec<Value> = orbits
        .iter()
        .map(|o| json!({ "kind": o.kind, "orbit_type": o.orbit_type, "residual": o.residual, "signature": o.signature }))
        .collect();
    Ok((
        json!({
            "manifold": desc,
            "options": opts,
            "orbits": orbit_json,
            "histogram": histogram(&orbits),
            "exact_histogram": exact,
        }),
        true,
    ))
}

fn cmd_qa(c: &Common) -> Handled {
    let d = c.pd()?;
    let det = determinant(&d)?;
    match certify_quasi_alternating(&d, d.crossing_count() + 1) {
        Some(cert) => {
            cert.verify()?;
            Ok((
                json!({
                    "quasi_alternating": true,
                    "det": cert.det(),
                    "nodes": cert.root.size(),
                    "verified": true,
                    "certificate": cert,
                }),
                true,
            ))
        }
        None => Ok((json!({ "quasi_alternating": Value::Null, "det": det }), false)),
    }
}

fn cmd_plumbing(c: &Common) -> Handled {
    let desc = c.manifold()?;
    let qualifies = plumbing_qualifies(&desc);
    match certify_minimal(&desc) {
        Some(cert) => {
            cert.verify()?;
            Ok((
                json!({
                    "manifold": desc,
                    "certified": true,
                    "rank": cert.h1_order(),
                    "rules": cert.rules(),
                    "certificate": cert,
                }),
                true,
            ))
        }
        None => Ok((json!({ "manifold": desc, "certified": false, "qualifies": qualifies }), false)),
    }
}

fn cmd_compose(c: &Common) -> Handled {
    let ch = c.chains(2)?;
    let r = compose_check(&ch[0], &ch[1], c.samples, c.seed()?)?;
    Ok((serde_json::to_value(r).expect("report serializes"), true))
}

fn cmd_cerf(c: &Common) -> Handled {
    let chain = c.chains(1)?.remove(0);
    let mv: CerfMove = read_json("Cerf move", c.cerf_move.as_deref().ok_or_else(|| usage("--move is required"))?)?;
    let moved = apply_cerf_move(&chain, &mv)?;
    if chain.is_closed() {
        let opts = c.solver()?;
        let before = solve_intersections(&generalized_intersections(&chain)?, &opts)?;
        let after = solve_intersections(&generalized_intersections(&moved)?, &opts)?;
        let invariant = before.histogram == after.histogram;
        Ok((json!({ "move": mv, "moved": moved, "before": before, "after": after, "invariant": invariant }), true))
    } else {
        let r = compose_check(&chain, &moved, c.samples, c.seed()?)?;
        Ok((json!({ "move": mv, "moved": moved, "report": r, "invariant": r.equal }), true))
    }
}

fn cmd_intersections(c: &Common) -> Handled {
    let chain = c.chains(1)?.remove(0);
    let prob = generalized_intersections(&chain)?;
    let rep = solve_intersections(&prob, &c.solver()?)?;
    Ok((json!({ "problem": prob, "report": rep }), true))
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json renders") + "\n",
        Format::Text => match v.as_object() {
            Some(m) => m
                .iter()
                .map(|(k, x)| match x {
                    Value::String(s) => format!("{k}: {s}\n"),
                    other => format!("{k}: {other}\n"),
                })
                .collect(),
            None => format!("{v}\n"),
        },
    }
}

/// Runs one command; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let (common, result) = match &cli.command {
        Command::H1(c) => (c, cmd_h1(c)),
        Command::Euler(c) => (c, cmd_euler(c)),
        Command::Hsi(c) => (c, cmd_hsi(c)),
        Command::RankBounds(c) => (c, cmd_rank_bounds(c)),
        Command::Casson(c) => (c, cmd_casson(c)),
        Command::Repvar(c) => (c, cmd_repvar(c)),
        Command::QaCheck(c) => (c, cmd_qa(c)),
        Command::PlumbingCheck(c) => (c, cmd_plumbing(c)),
        Command::ComposeCheck(c) => (c, cmd_compose(c)),
        Command::CerfCheck(c) => (c, cmd_cerf(c)),
        Command::Intersections(c) => (c, cmd_intersections(c)),
    };
    match result {
        Ok((v, known)) => Outcome {
            code: if known { 0 } else { 3 },
            stdout: render(&v, common.format),
            stderr: if known { String::new() } else { "hsikit: result unknown\n".into() },
        },
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("hsikit: {m}\n") },
        Err(Failure::Core(e)) => {
            Outcome { code: if e.is_input_error() { 2 } else { 3 }, stdout: String::new(), stderr: format!("hsikit: {e}\n") }
        }
    }
}
