//! `centerfocus`: focal quantities, pseudo-quantities, comitant checks,
//! Hilbert series and the reference suite from the command line.

use std::collections::HashMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use centerfocus::focal::{self, FocalError, FreeChoice, PseudoSystem};
use centerfocus::hilbert::{self, HilbertSeries, Specialization};
use centerfocus::lie::{self, ComitantVerdict, LieError};
use centerfocus::linalg::{Deadline, LinalgError};
use centerfocus::poly::{parse_rational, Rational, VarId};
use centerfocus::system::{Signature, SystemSpec};
use centerfocus::verify::{reference_suite, RunReport};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "centerfocus", version, about = "Exact center-focus computations for planar polynomial systems")]
struct Cli {
    /// Emit the machine-readable run report.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random point.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Wall-clock budget in seconds for symbolic eliminations.
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Include wall-clock timings; without it output is byte-identical across runs.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Focal quantities L_1..L_K of a system on the center-focus variety.
    Focal {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Free unknowns per even degree, e.g. `b2,d2`.
        #[arg(long)]
        free: Option<String>,
    },
    /// Generalized focal pseudo-quantity G_K.
    Pseudo {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Mode::Structure)]
        mode: Mode,
        #[arg(long)]
        free: Option<String>,
        /// JSON object of coefficient values for point mode; missing symbolic
        /// coefficients are drawn from the seeded generator.
        #[arg(long)]
        point: Option<String>,
    },
    /// Whether a polynomial is a center-affine comitant of the system.
    ComitantCheck {
        #[arg(long)]
        system: String,
        /// Polynomial text or a file containing it.
        #[arg(long)]
        poly: String,
    },
    /// Krull dimension, expansion, specialization of a Hilbert series.
    Hilbert {
        /// `builtin:S01`, `builtin:SI01`, `builtin:S01-gen`, `builtin:SI01-gen` or a JSON file.
        #[arg(long)]
        series: String,
        #[arg(long)]
        krull: bool,
        #[arg(long)]
        expand: Option<usize>,
        #[arg(long, value_enum)]
        specialize: Option<SpecMode>,
        /// Second series for a coefficient-wise comparison to the `--expand` order.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Krull bound for the comitant algebra of a signature.
    Rho {
        #[arg(long)]
        signature: String,
    },
    /// Runs the reference suite and prints a verdict table.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Reference)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symbolic,
    Point,
    Structure,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecMode {
    Invariants,
    Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    #[value(alias = "paper")]
    Reference,
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Input(String),
    Budget,
    Internal(String),
}

impl From<FocalError> for Failure {
    fn from(e: FocalError) -> Self {
        match e {
            FocalError::Linalg(LinalgError::BudgetExceeded) => Failure::Budget,
            FocalError::Linalg(_) | FocalError::Inconsistent { .. } => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn input<E: ToString>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Reads `arg` as a file when such a file exists, else as inline text.
fn inline_or_file(arg: &str) -> Result<String, Failure> {
    if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(input)
    } else {
        Ok(arg.to_string())
    }
}

fn parse_system(arg: &str) -> Result<SystemSpec, Failure> {
    let text = inline_or_file(arg)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        SystemSpec::from_json(trimmed).map_err(input)
    } else {
        SystemSpec::parse_shorthand(trimmed.trim()).map_err(input)
    }
}

fn deadline(budget: Option<f64>) -> Deadline {
    Deadline(budget.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))))
}

fn free_choice(text: Option<&str>, k: u32) -> Result<FreeChoice, Failure> {
    match text {
        Some(t) => FreeChoice::parse(t, k).map_err(input),
        None => Ok(FreeChoice::default_for(k)),
    }
}

/// Outcome of a command: the report and whether the mathematical answer is "no".
struct Outcome {
    report: RunReport,
    negative: bool,
}

impl Outcome {
    fn yes(report: RunReport) -> Outcome {
        Outcome { report, negative: false }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Focal { system, order, free } => {
            let spec = parse_system(system)?;
            let choice = free_choice(free.as_deref(), *order)?;
            let seq = focal::focal_quantities_with(&spec, *order, &choice)?;
            let mut report = RunReport::new("focal", json!({ "system": spec.describe(), "order": order, "free": choice.names() }));
            let items: Vec<Value> = seq
                .l
                .iter()
                .enumerate()
                .map(|(i, l)| json!({ "k": i + 1, "L_k": spec.render(l) }))
                .collect();
            report.results = json!({ "L": items, "convention": seq.convention_note });
            Ok(Outcome::yes(report))
        }
        Command::Pseudo { system, k, mode, free, point } => {
            let spec = parse_system(system)?;
            let inputs = json!({ "system": spec.describe(), "k": k, "free": free });
            let mut report = RunReport::new("pseudo", inputs);
            match mode {
                Mode::Structure => {
                    let s = focal::structure(spec.signature(), *k)?;
                    report.results = json!({
                        "k": s.k, "m": s.m, "n": s.n, "N": s.total_degree,
                        "types": s.types.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    });
                }
                Mode::Symbolic => {
                    if *k > 1 && cli.budget.is_none() {
                        return Err(Failure::Input("symbolic mode above k = 1 needs an explicit --budget".into()));
                    }
                    let choice = free_choice(free.as_deref(), *k)?;
                    let sys = PseudoSystem::build(&spec, *k)?;
                    let sol = sys.solve_symbolic(&choice, deadline(cli.budget))?;
                    report.results = json!({
                        "k": sol.k, "m": sol.m, "n": sol.n,
                        "numerator_core": spec.render(&sol.numerator_core),
                        "free_terms": sol.free_terms.iter().map(|(n, p)| json!({ "free": n, "poly": spec.render(p) })).collect::<Vec<_>>(),
                        "sigma": spec.render(&sol.sigma),
                        "chosen_free": sol.chosen_free,
                    });
                }
                Mode::Point => {
                    let choice = free_choice(free.as_deref(), *k)?;
                    let sys = PseudoSystem::build(&spec, *k)?;
                    let values = point_values(&spec, point.as_deref(), cli.seed)?;
                    let sol = sys.solve_point(&choice, &values)?;
                    let shown: serde_json::Map<String, Value> = values
                        .iter()
                        .map(|(v, r)| (spec.symbols().name(*v).to_string(), json!(r.to_string())))
                        .collect();
                    report.results = json!({
                        "k": sol.k,
                        "point": shown,
                        "G": sol.g.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "numerator_core": sol.numerator_core.to_string(),
                        "free_terms": sol.free_terms.iter().map(|(n, r)| json!({ "free": n, "value": r.to_string() })).collect::<Vec<_>>(),
                        "sigma": sol.sigma.to_string(),
                    });
                }
            }
            Ok(Outcome::yes(report))
        }
        Command::ComitantCheck { system, poly } => {
            let spec = parse_system(system)?;
            let text = inline_or_file(poly)?;
            let p = spec.parse_poly(text.trim()).map_err(input)?;
            let ops = lie::operators(&spec)?;
            let mut report = RunReport::new("comitant-check", json!({ "system": spec.describe(), "poly": spec.render(&p) }));
            let negative = match lie::is_comitant(&p, &spec, &ops) {
                Ok(ComitantVerdict::Comitant { ctype, weight }) => {
                    report.results = json!({ "type": ctype.to_string(), "weight": weight, "verdict": "comitant" });
                    false
                }
                Ok(ComitantVerdict::NotComitant { ctype, weight, operator, residual }) => {
                    report.results = json!({
                        "type": ctype.to_string(), "weight": weight, "verdict": "not a comitant",
                        "witness": { "operator": format!("X{}", operator), "residual": spec.render(&residual) },
                    });
                    true
                }
                Err(LieError::Inhomogeneous { group, first, second }) => {
                    report.results = json!({
                        "verdict": "not a comitant",
                        "witness": { "inhomogeneous_group": group, "first": first, "second": second },
                    });
                    true
                }
                Err(e) => return Err(input(e)),
            };
            Ok(Outcome { report, negative })
        }
        Command::Hilbert { series, krull, expand, specialize, compare } => {
            let h = load_series(series)?;
            let mut report = RunReport::new("hilbert", json!({ "series": series }));
            let h = match specialize {
                Some(SpecMode::Invariants) => h.specialize(Specialization::Invariants).map_err(input)?,
                Some(SpecMode::Common) => h.specialize(Specialization::Common).map_err(input)?,
                None => h,
            };
            let mut results = serde_json::Map::new();
            results.insert("series".into(), json!(h.to_text()));
            if *krull {
                results.insert("krull".into(), json!(h.krull_dimension().map_err(input)?.0));
            }
            if let Some(n) = expand {
                let c = h.expand(*n).map_err(input)?;
                results.insert("expansion".into(), json!(c.iter().map(ToString::to_string).collect::<Vec<_>>()));
            }
            if let Some(other) = compare {
                let o = load_series(other)?;
                let order = h.compare(&o, expand.unwrap_or(30)).map_err(input)?;
                results.insert("compare".into(), json!(format!("{order:?}")));
            }
            report.results = Value::Object(results);
            Ok(Outcome::yes(report))
        }
        Command::Rho { signature } => {
            let sig = Signature::parse(signature).map_err(input)?;
            let mut report = RunReport::new("rho", json!({ "signature": sig.to_string() }));
            report.results = json!({ "rho": hilbert::rho_bound(&sig), "coefficient_slots": sig.slot_count() });
            Ok(Outcome::yes(report))
        }
        Command::Verify { suite: Suite::Reference } => Ok(Outcome::yes(reference_suite(cli.seed))),
    }
}

fn load_series(arg: &str) -> Result<HilbertSeries, Failure> {
    match arg.strip_prefix("builtin:") {
        Some(name) => hilbert::builtin(name).map_err(input),
        None => HilbertSeries::from_json(&inline_or_file(arg)?).map_err(input),
    }
}

/// Coefficient values for point mode: fixed values of the spec, then the
/// JSON object, then seeded random values for whatever is still symbolic.
fn point_values(spec: &SystemSpec, point: Option<&str>, seed: u64) -> Result<HashMap<VarId, Rational>, Failure> {
    let mut given: HashMap<String, Rational> = HashMap::new();
    if let Some(p) = point {
        let text = inline_or_file(p)?;
        let doc: HashMap<String, Value> = serde_json::from_str(&text).map_err(input)?;
        for (name, v) in doc {
            let r = match v {
                Value::String(s) => parse_rational(&s).map_err(input)?,
                Value::Number(n) => parse_rational(&n.to_string()).map_err(input)?,
                other => return Err(Failure::Input(format!("value of `{name}` must be a number or string, got {other}"))),
            };
            given.insert(name, r);
        }
    }
    let fixed = spec.with_values(&given).map_err(input)?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    Ok(focal::random_point(&fixed, &mut rng))
}

/// Removes the run-dependent timing fields.
fn strip_timings(report: &mut RunReport) {
    report.elapsed_ms = 0;
    if let Value::Object(map) = &mut report.results {
        map.remove("criterion_ms");
    }
    for c in &mut report.checks {
        if c.name.ends_with(" runtime") {
            c.got = "within limit".to_string();
        }
    }
}

fn print_report(report: &RunReport, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
        return;
    }
    println!("{}", report.command);
    print_value(&report.results, 1);
    if !report.checks.is_empty() {
        print!("{}", report.table());
    }
}

fn print_value(v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_value(val, depth + 1);
                    }
                    Value::String(s) => println!("{pad}{k}: {s}"),
                    other => println!("{pad}{k}: {other}"),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::String(s) => println!("{pad}- {s}"),
                    Value::Object(_) => {
                        println!("{pad}-");
                        print_value(item, depth + 1);
                    }
                    other => println!("{pad}- {other}"),
                }
            }
        }
        Value::String(s) => println!("{pad}{s}"),
        other => println!("{pad}{other}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(mut outcome) => {
            if !cli.timing {
                strip_timings(&mut outcome.report);
            }
            print_report(&outcome.report, cli.json);
            if outcome.report.has_failures() {
                ExitCode::from(4)
            } else if outcome.negative {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget) => {
            eprintln!("error: budget exhausted");
            ExitCode::from(5)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
