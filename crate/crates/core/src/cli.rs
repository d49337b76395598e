//! Command-line surface. `run` is the whole program minus process exit, so
//! tests can drive it directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::catalog::resolve;
use crate::construction_b::{compute_r, decompose_all};
use crate::error::{Error, ErrorKind, Result};
use crate::lattice::enumerate::vectors_of_norm;
use crate::lattice::isometry::DEFAULT_RANK_BOUND;
use crate::lattice::{parse_rational, DualVector, Lattice};
use crate::orbit::orbit_q;
use crate::report::{analyze, odd_split, Config, SCHEMA_VERSION};
use crate::selftest::{run_selftest, Fault};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "voaplus", version, about = "Automorphism-group invariants of V_L^+ for positive definite even lattices")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest rank for which |O(L)| is computed.
    #[arg(long, env = "VOAPLUS_RANK_BOUND", default_value_t = DEFAULT_RANK_BOUND, global = true)]
    pub rank_bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for an even lattice.
    Analyze {
        /// Catalog name, expression, or lattice file.
        input: Option<String>,
        /// File with one input per line; entries are analyzed concurrently.
        #[arg(long, conflicts_with = "input")]
        batch: Option<PathBuf>,
    },
    /// Vectors of a given norm in a coset of the lattice.
    Shortvec {
        input: String,
        /// Target norm, an integer or p/q.
        #[arg(long, allow_hyphen_values = true)]
        norm: String,
        /// Comma-separated coordinates of a dual vector; defaults to 0.
        #[arg(long, allow_hyphen_values = true)]
        coset: Option<String>,
    },
    /// The set R_L of Construction-B cosets.
    Rl { input: String },
    /// One frame-and-code decomposition per coset of R_L.
    Decompose { input: String },
    /// The orbit Q_L of [0]^-.
    Orbit { input: String },
    /// Split of an odd lattice into its even part and the odd coset.
    Odd { input: String },
    /// Checks the built-in catalog against its expected invariants.
    Selftest {
        /// Corrupt results before checking: r-count, q-size or twisted-sign.
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

/// Exit status, standard output and standard error of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Precondition => 3,
        ErrorKind::Internal => 4,
    }
}

fn lattice_arg(input: &str) -> Result<Lattice> {
    resolve(input)?.into_lattice()
}

fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("report types serialize")
}

fn envelope(command: &str, input: Option<&str>, result: Json) -> Json {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": input,
        "result": result,
    })
}

fn scalar(v: &Json) -> Option<String> {
    match v {
        Json::Null => Some("none".into()),
        Json::Bool(b) => Some(b.to_string()),
        Json::Number(n) => Some(n.to_string()),
        Json::String(s) => Some(s.clone()),
        Json::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().map(|x| scalar(x).expect("scalar")).collect::<Vec<_>>().join(", ")
        )),
        Json::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(format!(
                "[{}]",
                a.iter().map(|x| scalar(x).expect("row")).collect::<Vec<_>>().join(", ")
            ))
        }
        _ => None,
    }
}

/// Indented key/value rendering of a JSON document, so that the text and
/// JSON forms carry the same values.
pub fn render_text(v: &Json) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn render(v: &Json, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Json::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None if x.as_array().is_some_and(|a| a.is_empty()) => {
                        let _ = writeln!(out, "{pad}{k}: []");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Json::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).expect("scalar"));
        }
    }
}

fn rational(s: &str) -> Result<num_rational::BigRational> {
    parse_rational(s).ok_or_else(|| Error::Input(format!("'{s}' is not a rational number")))
}

fn parse_coset(s: &str, rank: usize) -> Result<DualVector> {
    let coords = s
        .split(',')
        .map(|t| rational(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != rank {
        return Err(Error::DimensionMismatch { rank, got: coords.len() });
    }
    Ok(DualVector::new(coords))
}

fn batch_inputs(path: &PathBuf) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn execute(cli: &Cli) -> Result<(Json, i32)> {
    let cfg = Config { rank_bound: cli.rank_bound };
    let done = |cmd: &str, input: &str, r: Json| Ok((envelope(cmd, Some(input), r), 0));
    match &cli.command {
        Command::Analyze { input: Some(input), .. } => {
            done("analyze", input, to_json(&analyze(&lattice_arg(input)?, cfg)?))
        }
        Command::Analyze { input: None, batch: Some(path) } => {
            let inputs = batch_inputs(path)?;
            let results: Vec<(Json, Option<i32>)> = inputs
                .par_iter()
                .map(|inp| match lattice_arg(inp).and_then(|l| analyze(&l, cfg)) {
                    Ok(r) => (json!({"input": inp, "report": to_json(&r)}), None),
                    Err(e) => (
                        json!({"input": inp, "error": e.to_string()}),
                        Some(exit_code(e.kind())),
                    ),
                })
                .collect();
            let code = results.iter().find_map(|r| r.1).unwrap_or(0);
            let list = results.into_iter().map(|r| r.0).collect();
            Ok((envelope("analyze", None, Json::Array(list)), code))
        }
        Command::Analyze { input: None, batch: None } => {
            Err(Error::Input("analyze needs an input or --batch".into()))
        }
        Command::Shortvec { input, norm, coset } => {
            let l = lattice_arg(input)?;
            let m = rational(norm)?;
            let c = match coset {
                Some(s) => l.discriminant().coset_of(&parse_coset(s, l.rank())?)?,
                None => l.discriminant().trivial(),
            };
            let vs = vectors_of_norm(&l, &c, &m)?;
            done(
                "shortvec",
                input,
                json!({
                    "norm": crate::lattice::format_rational(&m),
                    "coset": to_json(&c),
                    "count": vs.len(),
                    "vectors": to_json(&vs),
                }),
            )
        }
        Command::Rl { input } => done("rl", input, to_json(&compute_r(&lattice_arg(input)?)?)),
        Command::Decompose { input } => {
            let l = lattice_arg(input)?;
            let r = compute_r(&l)?;
            done("decompose", input, to_json(&decompose_all(&l, &r)?))
        }
        Command::Orbit { input } => done("orbit", input, to_json(&orbit_q(&lattice_arg(input)?)?)),
        Command::Odd { input } => done("odd", input, to_json(&odd_split(&lattice_arg(input)?, cfg)?)),
        Command::Selftest { inject_fault } => {
            let fault = inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
            let report = run_selftest(cfg, fault);
            let code = if report.passed { 0 } else { 4 };
            Ok((envelope("selftest", None, to_json(&report)), code))
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((doc, code)) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&doc).expect("json");
                    s.push('\n');
                    s
                }
                Format::Text => render_text(&doc),
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome {
            code: exit_code(e.kind()),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

