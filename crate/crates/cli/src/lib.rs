//! Command-line front end for the `limbis` engine.
//!
//! Every command prints one JSON document on standard output. Exit codes:
//! 0 success, 1 the queried property is false, 2 usage or input error,
//! 3 a search or enumeration exceeded its capacity.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use limbis::fixedpoint::{greatest_alpha_bisimulation, limited_bisimilarity};
use limbis::limited::{bis, oracle_degree_with_limit, DEFAULT_ORACLE_LIMIT};
use limbis::logic::{degree_closure, distinguish_bounded, eval_state, parse_state_formula};
use limbis::subsystem::{induced, unfold, UnfoldedName};
use limbis::{parse_model_with, serialize_model, Algebra, Degree, Nfts, ParseOptions, StateId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Default number of candidate evaluations `distinguish` may spend.
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

#[derive(Parser, Debug)]
#[command(name = "limbis", version, about = "k-limited alpha-bisimilarity for fuzzy transition systems")]
pub struct Cli {
    /// Residuated algebra: godel, product or lukasiewicz.
    #[arg(long, global = true)]
    pub tnorm: Option<Algebra>,

    /// Accept state names of the form `base@depth`, as produced by `subsystem`.
    #[arg(long, global = true)]
    pub allow_relabeled: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a model and report its size.
    Validate { file: PathBuf },
    /// Greatest alpha with u and v k-limited alpha-bisimilar.
    Degree {
        file: PathBuf,
        #[command(flatten)]
        pair: KPair,
    },
    /// Whether u and v are k-limited alpha-bisimilar.
    Check {
        file: PathBuf,
        #[command(flatten)]
        pair: KPair,
        #[arg(long)]
        alpha: Degree,
    },
    /// Greatest alpha-bisimulation, or membership of one pair in it.
    Bisim {
        file: PathBuf,
        #[arg(long)]
        alpha: Degree,
        /// Relate the states of FILE to the states of this second model.
        #[arg(long)]
        right: Option<PathBuf>,
        u: Option<String>,
        v: Option<String>,
    },
    /// Depth-k unfolding of a state, or its induced neighbourhood.
    Subsystem {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        u: String,
        #[arg(long)]
        induced: bool,
        /// Write the model to this file and the state mapping to `<out>.json`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a state formula at a state.
    Eval {
        file: PathBuf,
        #[arg(short, long)]
        formula: String,
        u: String,
    },
    /// Search for a formula of bounded depth separating u and v below alpha.
    Distinguish {
        file: PathBuf,
        #[command(flatten)]
        pair: KPair,
        #[arg(long)]
        alpha: Degree,
        #[arg(long)]
        depth: usize,
        /// Candidate evaluations allowed before giving up.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Degree by brute-force enumeration of lifting values.
    OracleDegree {
        file: PathBuf,
        #[command(flatten)]
        pair: KPair,
        /// Lifting evaluations allowed before giving up.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: u128,
    },
}

#[derive(Args, Debug)]
pub struct KPair {
    #[arg(short)]
    pub k: usize,
    pub u: String,
    pub v: String,
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or(Value::Null)
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Report = Result<(i32, Value), Failure>;

/// Runs one command line; the first item is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                return Outcome {
                    code,
                    stdout: e.to_string(),
                };
            }
            return render(code, json!({ "error": e.kind().to_string(), "message": e.to_string().trim() }));
        }
    };
    match dispatch(&cli) {
        Ok((code, value)) => render(code, value),
        Err(f) => render(f.code, json!({ "error": f.message })),
    }
}

fn render(code: i32, value: Value) -> Outcome {
    let mut stdout = serde_json::to_string_pretty(&value).expect("values serialize");
    stdout.push('\n');
    Outcome { code, stdout }
}

fn dispatch(cli: &Cli) -> Report {
    let opts = ParseOptions {
        allow_relabeled: cli.allow_relabeled,
    };
    let tnorm = || cli.tnorm.ok_or_else(|| usage("--tnorm is required for this command"));
    match &cli.command {
        Command::Validate { file } => {
            let m = load(file, opts)?;
            let transitions: usize = m.states().map(|s| m.outgoing(s).count()).sum();
            Ok((
                EXIT_OK,
                json!({
                    "valid": true,
                    "states": m.num_states(),
                    "labels": m.num_labels(),
                    "transitions": transitions,
                }),
            ))
        }
        Command::Degree { file, pair } => {
            let alg = tnorm()?;
            let m = load(file, opts)?;
            let (u, v) = states(&m, pair)?;
            let mut out = header(alg, pair);
            put_degree(&mut out, "degree", &bis(&m, u, v, pair.k, alg));
            Ok((EXIT_OK, Value::Object(out)))
        }
        Command::Check { file, pair, alpha } => {
            let alg = tnorm()?;
            let m = load(file, opts)?;
            let (u, v) = states(&m, pair)?;
            let holds = limited_bisimilarity(&m, pair.k, alpha, alg).contains(u, v);
            let mut out = header(alg, pair);
            put_degree(&mut out, "alpha", alpha);
            out.insert("bisimilar".into(), json!(holds));
            Ok((verdict(holds), Value::Object(out)))
        }
        Command::Bisim {
            file,
            alpha,
            right,
            u,
            v,
        } => {
            let alg = tnorm()?;
            let left = load(file, opts)?;
            let other = right.as_ref().map(|p| load(p, opts)).transpose()?;
            let right = other.as_ref().unwrap_or(&left);
            let r = greatest_alpha_bisimulation(&left, right, alpha, alg);
            let mut out = Map::new();
            out.insert("tnorm".into(), json!(alg.name()));
            put_degree(&mut out, "alpha", alpha);
            match (u, v) {
                (Some(u), Some(v)) => {
                    let (a, b) = (state(&left, u)?, state(right, v)?);
                    let holds = r.contains(a, b);
                    out.insert("pair".into(), json!([u, v]));
                    out.insert("bisimilar".into(), json!(holds));
                    Ok((verdict(holds), Value::Object(out)))
                }
                (None, None) => {
                    out.insert("pairs".into(), json!(r.named_pairs(&left, right)));
                    Ok((EXIT_OK, Value::Object(out)))
                }
                _ => Err(usage("give both states of a pair or neither")),
            }
        }
        Command::Subsystem {
            file,
            k,
            u,
            induced: plain,
            out,
        } => {
            let m = load(file, opts)?;
            let root = state(&m, u)?;
            let (model, root_name, mapping) = if *plain {
                let s = induced(&m, root, *k);
                (s, u.clone(), Value::Null)
            } else {
                let t = unfold(&m, root, *k);
                let mapping: Vec<Value> = t
                    .origins()
                    .map(|(s, o)| {
                        json!({
                            "state": t.tree.state_name(s),
                            "base": m.state_name(o.base),
                            "depth": o.depth,
                        })
                    })
                    .collect();
                let name = UnfoldedName(&m, t.origin(t.root)).to_string();
                (t.tree, name, Value::Array(mapping))
            };
            let text = serialize_model(&model);
            let mut report = Map::new();
            report.insert("root".into(), json!(root_name));
            report.insert("k".into(), json!(k));
            report.insert("states".into(), json!(model.states().map(|s| model.state_name(s)).collect::<Vec<_>>()));
            report.insert("transitions".into(), json!(transition_lines(&model)));
            if !mapping.is_null() {
                report.insert("mapping".into(), mapping.clone());
            }
            report.insert("model".into(), json!(text));
            if let Some(path) = out {
                write(path, &text)?;
                if !mapping.is_null() {
                    let sidecar = sidecar_path(path);
                    let doc = serde_json::to_string_pretty(&json!({ "root": root_name, "states": mapping }))
                        .expect("values serialize");
                    write(&sidecar, &doc)?;
                    report.insert("sidecar".into(), json!(sidecar.display().to_string()));
                }
            }
            Ok((EXIT_OK, Value::Object(report)))
        }
        Command::Eval { file, formula, u } => {
            let alg = tnorm()?;
            let m = load(file, opts)?;
            let s = state(&m, u)?;
            let phi = parse_state_formula(formula).map_err(|e| usage(e.to_string()))?;
            let value = eval_state(&m, &phi, s, alg).map_err(|e| usage(e.to_string()))?;
            let mut out = Map::new();
            out.insert("tnorm".into(), json!(alg.name()));
            out.insert("formula".into(), json!(phi.to_string()));
            out.insert("state".into(), json!(u));
            put_degree(&mut out, "degree", &value);
            Ok((EXIT_OK, Value::Object(out)))
        }
        Command::Distinguish {
            file,
            pair,
            alpha,
            depth,
            budget,
        } => {
            let alg = tnorm()?;
            let m = load(file, opts)?;
            let (u, v) = states(&m, pair)?;
            let consts = degree_closure(&m, alg);
            let found = distinguish_bounded(&m, u, v, pair.k, alpha, *depth, alg, &consts, *budget).map_err(|e| {
                Failure {
                    code: EXIT_CAPACITY,
                    message: e.to_string(),
                }
            })?;
            let mut out = header(alg, pair);
            put_degree(&mut out, "alpha", alpha);
            out.insert("depth".into(), json!(depth));
            out.insert("found".into(), json!(found.is_some()));
            if let Some(w) = &found {
                out.insert("formula".into(), json!(w.formula.to_string()));
                put_degree(&mut out, "left", &w.left);
                put_degree(&mut out, "right", &w.right);
                put_degree(&mut out, "biresiduum", &alg.biresid(&w.left, &w.right));
            }
            Ok((verdict(found.is_some()), Value::Object(out)))
        }
        Command::OracleDegree { file, pair, limit } => {
            let alg = tnorm()?;
            let m = load(file, opts)?;
            let (u, v) = states(&m, pair)?;
            let d = oracle_degree_with_limit(&m, u, v, pair.k, alg, *limit).map_err(|e| Failure {
                code: EXIT_CAPACITY,
                message: e.to_string(),
            })?;
            let mut out = header(alg, pair);
            put_degree(&mut out, "degree", &d);
            Ok((EXIT_OK, Value::Object(out)))
        }
    }
}

fn verdict(holds: bool) -> i32 {
    if holds {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn load(path: &Path, opts: ParseOptions) -> Result<Nfts, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_model_with(&text, opts).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn state(m: &Nfts, name: &str) -> Result<StateId, Failure> {
    m.state(name).map_err(|e| usage(e.to_string()))
}

fn states(m: &Nfts, pair: &KPair) -> Result<(StateId, StateId), Failure> {
    Ok((state(m, &pair.u)?, state(m, &pair.v)?))
}

fn header(alg: Algebra, pair: &KPair) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("tnorm".into(), json!(alg.name()));
    out.insert("k".into(), json!(pair.k));
    out.insert("pair".into(), json!([pair.u, pair.v]));
    out
}

/// Stores the exact value under `key` and a float under `key_value`.
fn put_degree(out: &mut Map<String, Value>, key: &str, d: &Degree) {
    out.insert(key.into(), json!(d.to_rational_string()));
    out.insert(format!("{key}_value"), json!(d.to_f64()));
}

/// `src label { dst: degree, ... }`, sorted.
fn transition_lines(m: &Nfts) -> Vec<String> {
    let mut lines: Vec<String> = m
        .states()
        .flat_map(|s| {
            m.outgoing(s).map(move |(a, p)| {
                let body: Vec<String> = p
                    .entries()
                    .iter()
                    .map(|(t, d)| format!("{}: {d}", m.state_name(*t)))
                    .collect();
                format!("{} {} {{ {} }}", m.state_name(s), m.label_name(a), body.join(", "))
            })
        })
        .collect();
    lines.sort();
    lines
}
