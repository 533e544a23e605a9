//! The `bergman` command-line front end.
//!
//! Exit codes: 0 when everything checked out, 1 for a mathematical "no"
//! (violation, unbalanced weights, point outside the fan), 2 for usage or
//! input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::balancing::{balancing_lhs, verify_fan};
use crate::error::Error;
use crate::fan::{BergmanFan, DEFAULT_MAX_FLATS};
use crate::io::{self, MatroidDocument, WeightFile};
use crate::matroid::ExchangeCheck;
use crate::render;
use crate::vector::RationalVector;
use crate::weighted::{certified_weights, check_weighted, skeleton, solve_weights};

pub const MAX_FLATS_ENV: &str = "BERGMAN_MAX_FLATS";

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Bergman fans of matroids and their balancing relations")]
pub struct Cli {
    /// Refuse to build fans whose lattice of flats is larger than this
    /// (default: $BERGMAN_MAX_FLATS, else 65536).
    #[arg(long, global = true)]
    max_flats: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a matroid file and print its lattice of flats.
    Validate {
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the Bergman fan and list its cones by type.
    Fan {
        matroid: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check (i,k)-balancing at every cone, or one relation at one flag.
    Balance {
        matroid: PathBuf,
        #[arg(long, conflicts_with = "flag", required_unless_present = "flag")]
        all: bool,
        /// Intermediate flats separated by ',', elements of a flat by '+', e.g. `1,1+2`.
        #[arg(long, requires_all = ["i", "k"], allow_hyphen_values = true)]
        flag: Option<String>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Solve for all balanced weight functions on the K-skeleton.
    WeightsSolve {
        matroid: PathBuf,
        #[arg(long = "dim")]
        dim: usize,
        /// Only weights whose boundary relations are combinations of (i,k) relations.
        #[arg(long)]
        certified: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a weight file against the balancing condition.
    WeightsCheck {
        matroid: PathBuf,
        weights: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Find the cone containing a point in its relative interior.
    Classify {
        matroid: PathBuf,
        /// Comma-separated rationals, e.g. `2,1,0,0` or `1/2,0,0,0`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<bool, Failure>;

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<MatroidDocument, Failure> {
    Ok(io::parse_matroid(&read(path)?)?)
}

fn max_flats(cli: &Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = cli {
        return Ok(*n);
    }
    match std::env::var(MAX_FLATS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_FLATS_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_FLATS),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    emit(out, &text)
}

fn parse_flag_arg(text: &str) -> Vec<Vec<String>> {
    text.split(',')
        .filter(|f| !f.trim().is_empty())
        .map(|f| f.split('+').map(|l| l.trim().to_string()).collect())
        .collect()
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    let limit = max_flats(&cli.max_flats)?;
    let build = |doc: &MatroidDocument| BergmanFan::build_with_limit(&doc.matroid, limit);
    match cli.command {
        Command::Validate { matroid, json } => {
            let doc = load(&matroid)?;
            let m = &doc.matroid;
            let exchange = match m.exchange_check() {
                ExchangeCheck::Exhaustive => "exhaustive".to_string(),
                ExchangeCheck::Sampled { pairs } => format!("sampled ({pairs} pairs)"),
            };
            if json {
                let flats: Vec<Value> = m.flats().iter().map(|f| json!(m.ground().labels_of(f.set()))).collect();
                emit_json(
                    out,
                    &json!({
                        "matroid": doc.source,
                        "n": m.n(),
                        "rank": m.rank(),
                        "bases": m.bases().len(),
                        "exchange_check": exchange,
                        "flats": flats,
                    }),
                )?;
            } else {
                emit(
                    out,
                    &format!(
                        "valid matroid: {} elements, rank {}, {} bases (exchange axiom: {exchange}), {} flats\n",
                        m.n(),
                        m.rank(),
                        m.bases().len(),
                        m.flats().len()
                    ),
                )?;
                emit(out, &render::render_lattice(m))?;
            }
            Ok(true)
        }
        Command::Fan { matroid, json } => {
            let doc = load(&matroid)?;
            let fan = build(&doc)?;
            if json {
                emit_json(out, &io::fan_json(&fan, &doc.source))?;
            } else {
                emit(out, &render::render_fan(&fan))?;
            }
            Ok(true)
        }
        Command::Balance { matroid, flag, i, k, json, .. } => {
            let doc = load(&matroid)?;
            let m = &doc.matroid;
            match flag {
                None => {
                    let report = verify_fan(&build(&doc)?)?;
                    if json {
                        emit_json(out, &io::report_json(m, &report, &doc.source))?;
                    } else {
                        emit(out, &render::render_report(m, &report))?;
                    }
                    Ok(report.passed())
                }
                Some(text) => {
                    let flag = io::parse_flag(m, &parse_flag_arg(&text))?;
                    let (i, k) = (i.expect("clap requires --i"), k.expect("clap requires --k"));
                    let rel = balancing_lhs(m, &flag, i, k)?;
                    if json {
                        let mut v = io::relation_json(m, &rel);
                        v["matroid"] = doc.source.clone();
                        emit_json(out, &v)?;
                    } else {
                        emit(out, &render::render_relation(m, &rel))?;
                    }
                    Ok(rel.is_balanced())
                }
            }
        }
        Command::WeightsSolve { matroid, dim, certified, json } => {
            let doc = load(&matroid)?;
            let fan = build(&doc)?;
            let s = skeleton(&fan, dim)?;
            let basis = if certified { certified_weights(&s)? } else { solve_weights(&s) };
            let output = io::solver_output(&s, &basis);
            if json {
                emit_json(out, &serde_json::to_value(&output).expect("serializable"))?;
            } else {
                let mut text = format!(
                    "{}-skeleton: {} cells, {} boundary cones; solution space dimension {}\n",
                    dim,
                    s.cells().len(),
                    s.boundary().len(),
                    output.dim
                );
                for (j, w) in basis.iter().enumerate() {
                    text.push_str(&format!("basis vector {j}:\n"));
                    for (flag, q) in &w.weights {
                        text.push_str(&format!(
                            "  {} {}\n",
                            render::flag_text(&doc.matroid, flag),
                            crate::vector::format_rational(q)
                        ));
                    }
                }
                emit(out, &text)?;
            }
            Ok(true)
        }
        Command::WeightsCheck { matroid, weights, json } => {
            let doc = load(&matroid)?;
            let fan = build(&doc)?;
            let file = WeightFile::parse(&read(&weights)?)?;
            let w = file.to_weights(&doc.matroid)?;
            let s = skeleton(&fan, file.k)?;
            let check = check_weighted(&s, &w)?;
            if json {
                let checks: Vec<Value> = check
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "face": io::flag_json(&doc.matroid, &c.face),
                            "sum": io::vector_json(&c.sum),
                            "balanced": c.balanced,
                        })
                    })
                    .collect();
                emit_json(out, &json!({ "k": file.k, "balanced": check.all_balanced(), "checks": checks }))?;
            } else {
                emit(out, &render::render_weight_check(&doc.matroid, &check))?;
            }
            Ok(check.all_balanced())
        }
        Command::Classify { matroid, point, json } => {
            let doc = load(&matroid)?;
            let fan = build(&doc)?;
            let x = RationalVector::parse(&point)?;
            let flag = fan.classify_point(&x)?;
            if json {
                let v = match &flag {
                    Some(f) => json!({
                        "point": io::vector_json(&x),
                        "in_fan": true,
                        "flag": io::flag_json(&doc.matroid, f),
                        "type": f.cone_type().ranks(),
                    }),
                    None => json!({ "point": io::vector_json(&x), "in_fan": false }),
                };
                emit_json(out, &v)?;
            } else {
                match &flag {
                    Some(f) => emit(
                        out,
                        &format!(
                            "flag {} type {} dim {}\n",
                            render::flag_text(&doc.matroid, f),
                            f.cone_type(),
                            f.dim()
                        ),
                    )?,
                    None => emit(out, &format!("point {x} is not in the Bergman fan\n"))?,
                }
            }
            Ok(flag.is_some())
        }
    }
}
