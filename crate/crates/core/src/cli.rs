//! Command-line front end. [`run`] is the whole program minus process I/O, so it
//! can be driven from tests.
//!
//! Exit codes: 0 on success, 1 when the computation ran and the answer is no
//! (or the mathematics failed, e.g. a degenerate descent), 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::curve::{Curve, Point};
use crate::error::Error;
use crate::family::{self, FamilyParams};
use crate::rational::Rat;
use crate::search::runner::{self, RunOptions};
use crate::search::{Range, SearchBounds};
use crate::triple_eq::TripleSystem;
use crate::tuple::{SquareTuple, Status};

pub const JOBS_ENV: &str = "EULERIAN_JOBS";

#[derive(Debug, Parser)]
#[command(name = "eulerian", version, about = "Eulerian tuples of rational squares")]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every pair of a tuple.
    Verify(VerifyArgs),
    /// Triples {4, y^2, z^2} from multiples of a point on the curve for m = p/q (JSONL).
    TripleFamily(FamilyArgs),
    /// Solve (s+1)x + s = square for three squares s.
    SolveTriple(SolveArgs),
    /// Search for quadruples (JSONL hits, resumable).
    SearchQuad(SearchArgs),
    /// Inspect a curve J^2 = K^3 + A K^2 + B K.
    Curve(CurveArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated fractions, e.g. 18,3/5,8/5,224/107.
    #[arg(allow_hyphen_values = true)]
    tuple: RatList,
    /// Treat the inputs as the squares rather than their roots.
    #[arg(long)]
    squares: bool,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// m as p/q.
    #[arg(long)]
    m: Rat,
    /// Generator as K,J.
    #[arg(long = "gen")]
    generator: Point,
    #[arg(long, default_value_t = 1)]
    count: i64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Three comma-separated squares, in order s1,s2,s3.
    #[arg(long, allow_hyphen_values = true)]
    squares: RatList,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    x_max: i64,
    #[arg(long, default_value_t = 1)]
    x_min: i64,
    #[arg(long)]
    m_max: i64,
    #[arg(long, default_value_t = 1)]
    m_min: i64,
    /// Integer K window as lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    k_range: Range,
    /// Integer U window (integral model) as lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    u_range: Range,
    #[arg(long)]
    out: PathBuf,
    /// Checkpoint file; resumed from when present.
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long, env = JOBS_ENV, default_value_t = 1)]
    jobs: usize,
    /// Stop after this many work units.
    #[arg(long)]
    max_units: Option<usize>,
    /// Stop at the first batch boundary after this many seconds.
    #[arg(long)]
    budget_secs: Option<u64>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "m")]
    a: Option<Rat>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "m")]
    b: Option<Rat>,
    /// Use the family curve for m = p/q instead of A, B.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    m: Option<Rat>,
    /// A point as K,J to check and take multiples of.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<Point>,
    /// Multiply the point by this integer.
    #[arg(long, allow_hyphen_values = true)]
    mul: Option<i64>,
    /// Scan integer K in lo:hi for points.
    #[arg(long, allow_hyphen_values = true)]
    scan: Option<Range>,
    /// List the two-torsion points.
    #[arg(long)]
    torsion: bool,
}

/// Comma-separated fractions.
#[derive(Clone, Debug)]
struct RatList(Vec<Rat>);

impl std::str::FromStr for RatList {
    type Err = Error;

    fn from_str(s: &str) -> Result<RatList, Error> {
        s.split(',').map(str::parse).collect::<Result<_, _>>().map(RatList)
    }
}

/// Result of one invocation.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
}

fn usage(msg: impl Into<String>) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: msg.into() }
}

fn failure(err: &Error) -> Outcome {
    let code = match err {
        Error::Parse { .. } | Error::Parameter(_) | Error::ConfigMismatch { .. } | Error::Arity { .. } => 2,
        _ => 1,
    };
    Outcome { code, stdout: String::new(), stderr: format!("error: {err}\n") }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => usage(text),
            };
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Verify(a) => verify(a, json),
        Command::TripleFamily(a) => triple_family(a),
        Command::SolveTriple(a) => solve_triple(a, json),
        Command::SearchQuad(a) => search_quad(a, json),
        Command::Curve(a) => curve(a, json),
    };
    result.unwrap_or_else(|e| failure(&e))
}

fn join(v: &[Rat]) -> String {
    v.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ")
}

fn verify(a: VerifyArgs, json: bool) -> Result<Outcome, Error> {
    let tuple = if a.squares {
        SquareTuple::from_squares(&a.tuple.0)?
    } else {
        SquareTuple::new(a.tuple.0)?
    };
    let verdict = tuple.verify();
    let mut out = String::new();
    if json {
        let doc = json!({
            "roots": tuple.roots(),
            "squares": tuple.squares(),
            "status": verdict.status,
            "degeneracy": tuple.degeneracy(),
            "pairs": verdict.pairs,
        });
        writeln!(out, "{doc}").unwrap();
    } else {
        writeln!(out, "roots:   {}", join(tuple.roots())).unwrap();
        writeln!(out, "squares: {}", join(&tuple.squares())).unwrap();
        writeln!(out, "{:>3} {:>3}  {:<8} {:<7} value", "i", "j", "root", "square").unwrap();
        for p in &verdict.pairs {
            let root = p.root.as_ref().map_or("-".to_string(), Rat::to_string);
            writeln!(out, "{:>3} {:>3}  {:<8} {:<7} {}", p.i, p.j, root, if p.square { "yes" } else { "no" }, p.value)
                .unwrap();
        }
        let status = match (&verdict.status, tuple.degeneracy()) {
            (Status::Degenerate, Some(why)) => format!("degenerate ({why})"),
            (Status::Eulerian, _) => "eulerian".to_string(),
            _ => format!("not eulerian ({} of {} pairs square)", verdict.square_count(), verdict.pairs.len()),
        };
        writeln!(out, "status: {status}").unwrap();
    }
    let mut outcome = Outcome::ok(out);
    if !verdict.is_eulerian() {
        outcome.code = 1;
    }
    Ok(outcome)
}

fn small(r: &Rat, what: &str) -> Result<i64, Error> {
    r.to_i128()
        .and_then(|v| i64::try_from(v).ok())
        .ok_or_else(|| Error::Parameter(format!("{what} = {r} out of range")))
}

fn triple_family(a: FamilyArgs) -> Result<Outcome, Error> {
    let p = small(&Rat::int(a.m.numer().clone()), "p")?;
    let q = small(&Rat::int(a.m.denom().clone()), "q")?;
    FamilyParams::new(p, q)?;
    if a.count < 1 {
        return Err(Error::Parameter("--count must be at least 1".into()));
    }
    let mut out = String::new();
    for member in family::family(p, q, &a.generator, a.count)? {
        writeln!(out, "{}", serde_json::to_string(&member)?).unwrap();
    }
    Ok(Outcome::ok(out))
}

fn solve_triple(a: SolveArgs, json: bool) -> Result<Outcome, Error> {
    let sys = TripleSystem::from_slice(&a.squares.0)?;
    let sol = sys.solve()?;
    let (nd, dd) = sol.x.digit_counts();
    let mut out = String::new();
    if json {
        let mut doc = serde_json::to_value(&sol)?;
        doc["digits"] = json!({ "numerator": nd, "denominator": dd });
        writeln!(out, "{doc}").unwrap();
    } else {
        writeln!(out, "squares: {}", join(&sol.squares)).unwrap();
        writeln!(out, "g: {}", sol.descent.g).unwrap();
        writeln!(out, "f: {}", sol.f).unwrap();
        writeln!(out, "x: {}", sol.x).unwrap();
        writeln!(out, "digits: {nd}/{dd}").unwrap();
        for (s, r) in sol.squares.iter().zip(&sol.roots) {
            writeln!(out, "({s} + 1)x + {s} = ({r})^2").unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

fn search_quad(a: SearchArgs, json: bool) -> Result<Outcome, Error> {
    let bounds = SearchBounds {
        x_height_min: a.x_min,
        x_height_max: a.x_max,
        m_height_min: a.m_min,
        m_height_max: a.m_max,
        k_range: a.k_range,
        u_range: a.u_range,
    }
    .validated()?;
    let opts = RunOptions {
        out: a.out,
        checkpoint: a.resume,
        jobs: a.jobs,
        max_units: a.max_units,
        budget: a.budget_secs.map(Duration::from_secs),
    };
    let s = runner::run(&bounds, &opts)?;
    let mut out = String::new();
    if json {
        writeln!(out, "{}", serde_json::to_string(&s)?).unwrap();
    } else {
        writeln!(
            out,
            "units {}/{}{}  full {}  near-miss {}",
            s.units_done,
            s.total_units,
            if s.complete { "" } else { " (incomplete)" },
            s.full,
            s.near_miss
        )
        .unwrap();
    }
    Ok(Outcome::ok(out))
}

fn curve(a: CurveArgs, json: bool) -> Result<Outcome, Error> {
    let c = match (a.m, a.a, a.b) {
        (Some(m), _, _) => {
            let p = small(&Rat::int(m.numer().clone()), "p")?;
            let q = small(&Rat::int(m.denom().clone()), "q")?;
            family::curve_for_m(p, q)?
        }
        (None, Some(ca), Some(cb)) => Curve::new(ca, cb)?,
        _ => return Err(Error::Parameter("need --a and --b, or --m".into())),
    };
    let mut doc = json!({ "a": c.a(), "b": c.b() });
    let mut text = format!("{c}\n");
    if a.torsion {
        let t = c.two_torsion();
        for p in &t {
            writeln!(text, "torsion {p}").unwrap();
        }
        doc["torsion"] = json!(t);
    }
    let mut on_curve = true;
    if let Some(p) = &a.point {
        on_curve = c.on_curve(p);
        writeln!(text, "point {p} on curve: {on_curve}").unwrap();
        doc["point"] = json!({ "point": p, "on_curve": on_curve });
        if let (true, Some(k)) = (on_curve, a.mul) {
            let r = c.scalar_mul(k, p);
            writeln!(text, "{k} * {p} = {r}").unwrap();
            doc["multiple"] = json!({ "k": k, "point": r });
        }
    }
    if let Some(r) = a.scan {
        let pts = c.integer_point_scan(r.lo, r.hi);
        for p in &pts {
            writeln!(text, "{p}").unwrap();
        }
        doc["scan"] = json!(pts);
    }
    let mut outcome = Outcome::ok(if json { format!("{doc}\n") } else { text });
    if !on_curve {
        outcome.code = 1;
    }
    Ok(outcome)
}
