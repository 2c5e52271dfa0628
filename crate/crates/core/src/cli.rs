//! Command-line front end. Every run produces one JSON [`RunReport`] with
//! sorted keys, or CSV for `compare`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::applications::{
    constrained_check, frugal_instance, ksat_instance, nonrepetitive_instance, ramsey_instance, star_instance,
    transversal_instance, ConstrainedMode, DEFAULT_CLIQUE_BUDGET, DEFAULT_PATH_BUDGET,
};
use crate::bounds::{
    check_key, closed_form_bound, compare_bounds, lll_bound, optimize_beta, parametric_profile, Application,
    CompareMode,
};
use crate::colouring::{
    count_good, find_good, verify_count_bound, verify_extension_lemma, ColouringError, Strategy, DEFAULT_BUDGET,
};
use crate::exact::{sig15, Beta};
use crate::hypergraph::{Hypergraph, ListAssignment};
use crate::instance::{Instance, WeightProfile};
use crate::io;

pub const BUDGET_ENV: &str = "GOODCOLOUR_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "goodcolour", version, about = "Good list colourings of hypergraphs: bounds, counts and applications")]
pub struct Cli {
    /// Emit the JSON report (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV rows (compare only).
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for enumeration; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AppKind {
    ProperHypergraph,
    ProperGraph,
    Star,
    #[value(alias = "nonrep")]
    Nonrepetitive,
    Frugal,
    Transversal,
    Ramsey,
    #[value(alias = "sat")]
    Ksat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareKind {
    Proper,
    Egl,
    Ramsey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstrainedKind {
    SharedColours,
    ColourDegree,
    VertexBeta,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ListArgs {
    /// Uniform lists {1..C}.
    #[arg(long, visible_alias = "colours")]
    colors: Option<usize>,
    /// JSON lists keyed by vertex id.
    #[arg(long)]
    lists: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AppArgs {
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    lists: ListArgs,
    /// Beta for the key condition and count bound; defaults to the optimum.
    #[arg(long)]
    beta: Option<String>,
    /// Largest product of list sizes enumerated.
    #[arg(long)]
    budget: Option<u128>,
    /// Skip exact counting.
    #[arg(long)]
    no_count: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form beta and colour count for an application.
    Bound {
        #[arg(long)]
        app: AppKind,
        #[arg(short = 'r', long)]
        r: Option<u64>,
        #[arg(short = 'd', long)]
        delta: Option<u64>,
        #[arg(short = 'k', long)]
        k: Option<u64>,
        #[arg(short = 't', long)]
        t: Option<u64>,
        #[arg(short = 'c', long)]
        c: Option<u64>,
        /// Clique degree for the Ramsey form.
        #[arg(long)]
        dk: Option<u64>,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Evaluate the key condition on an instance's exact weight profile.
    CheckKey {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        beta: String,
        #[arg(short = 'c', long, visible_alias = "colours")]
        colors: u64,
    },
    /// Minimise the largest per-vertex objective over beta >= 1.
    Optimize {
        #[arg(long, required_unless_present = "profile")]
        file: Option<PathBuf>,
        /// Parametric tallies `k:E_k,...`, e.g. `0:2,1:4`.
        #[arg(long, conflicts_with = "file")]
        profile: Option<String>,
    },
    /// Find one good list colouring.
    Color {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        lists: ListArgs,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 1000)]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count good list colourings exactly.
    Count {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        lists: ListArgs,
        /// Also compare the count against beta^|V|.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Check P(H) >= beta P(H - v) on every induced sub-hypergraph.
    VerifyLemma {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        lists: ListArgs,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Compare against the local-lemma style bounds.
    Compare {
        #[arg(long, value_enum)]
        mode: CompareKind,
        #[arg(short = 'r', long)]
        r: Option<u64>,
        #[arg(short = 'd', long)]
        delta: Option<u64>,
        #[arg(short = 'k', long)]
        k: Option<u64>,
        #[arg(short = 'c', long)]
        c: Option<u64>,
        /// Sweep delta (proper) or k (egl) up to this value.
        #[arg(long)]
        to: Option<u64>,
    },
    /// Proper colourings of a hypergraph.
    Proper(AppArgs),
    /// Star colourings of a graph.
    Star(AppArgs),
    /// Nonrepetitive colourings of a graph.
    Nonrep {
        #[command(flatten)]
        args: AppArgs,
        /// Longest even path order encoded.
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        path_budget: u64,
    },
    /// k-frugal colourings of a graph.
    Frugal {
        #[command(flatten)]
        args: AppArgs,
        #[arg(short = 'k', long)]
        k: u64,
    },
    /// Independent transversals of a partition.
    Transversal {
        #[arg(long)]
        file: PathBuf,
        /// JSON `{"parts": [[...], ...]}`.
        #[arg(long)]
        parts: PathBuf,
        /// Shrink parts to the smallest size by deleting maximum-degree vertices.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        no_count: bool,
    },
    /// Hypotheses for proper list colourings with constrained lists.
    Constrained {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[arg(long, value_enum)]
        mode: ConstrainedKind,
        #[arg(short = 't', long)]
        t: Option<usize>,
        #[arg(short = 'k', long)]
        k: Option<usize>,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        no_count: bool,
    },
    /// Edge colourings without a monochromatic k-clique.
    Ramsey {
        #[arg(long, required_unless_present = "complete")]
        file: Option<PathBuf>,
        /// Use the complete graph on N vertices.
        #[arg(long, conflicts_with = "file")]
        complete: Option<usize>,
        #[arg(short = 'k', long)]
        k: u64,
        #[arg(short = 'c', long)]
        c: u64,
        #[arg(long, default_value_t = DEFAULT_CLIQUE_BUDGET)]
        clique_budget: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        no_count: bool,
    },
    /// Satisfying assignments of a k-CNF formula (DIMACS).
    Sat {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        no_count: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Bound { .. } => "bound",
            Self::CheckKey { .. } => "check-key",
            Self::Optimize { .. } => "optimize",
            Self::Color { .. } => "color",
            Self::Count { .. } => "count",
            Self::VerifyLemma { .. } => "verify-lemma",
            Self::Compare { .. } => "compare",
            Self::Proper(_) => "proper",
            Self::Star(_) => "star",
            Self::Nonrep { .. } => "nonrep",
            Self::Frugal { .. } => "frugal",
            Self::Transversal { .. } => "transversal",
            Self::Constrained { .. } => "constrained",
            Self::Ramsey { .. } => "ramsey",
            Self::Sat { .. } => "sat",
        }
    }
}

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    /// SHA-256 over the input files, in argument order.
    pub input_digest: Option<String>,
    pub parameters: Value,
    pub result: Value,
    pub exit_status: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
struct InputError(String);

macro_rules! input_from {
    ($($t:ty),*) => {$(
        impl From<$t> for InputError {
            fn from(e: $t) -> Self {
                InputError(e.to_string())
            }
        }
    )*};
}

input_from!(
    io::IoError,
    crate::applications::AppError,
    crate::bounds::BoundError,
    crate::hypergraph::HypergraphError,
    crate::instance::InstanceError,
    ColouringError,
    String
);

type Res<T> = Result<T, InputError>;

/// Report body plus whether the checked condition held.
struct Body {
    result: Value,
    ok: bool,
    csv: Option<Vec<Value>>,
}

impl Body {
    fn new(result: Value, ok: bool) -> Self {
        Self { result, ok, csv: None }
    }
}

struct Inputs {
    hasher: Sha256,
    used: bool,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Res<String> {
        let text = io::read_file(path)?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        self.used = true;
        Ok(text)
    }
}

fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn parse_beta(s: &str) -> Res<Beta> {
    Beta::from_str(s).map_err(InputError)
}

fn need(value: Option<u64>, flag: &str, app: &str) -> Res<u64> {
    value.ok_or_else(|| InputError(format!("{app} needs {flag}")))
}

/// Rounds every non-integer number to 15 significant digits.
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *value = json!(sig15(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Parses and runs one invocation.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("cannot start worker threads: {e}\n"),
                code: EXIT_INPUT,
            }
        }
    };
    pool.install(|| execute(&cli))
}

fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut inputs = Inputs {
        hasher: Sha256::new(),
        used: false,
    };
    let outcome = dispatch(&cli.command, &mut inputs);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let digest = inputs
        .used
        .then(|| format!("{:x}", inputs.hasher.finalize()));
    let mut parameters = to_value(&cli.command);
    if let Value::Object(map) = &mut parameters {
        if let Some((_, inner)) = map.iter().next() {
            parameters = inner.clone();
        }
    }
    let (result, code, csv, stderr) = match outcome {
        Ok(body) if cli.csv && body.csv.is_none() => (
            json!({ "error": "--csv is only available for compare" }),
            EXIT_INPUT,
            None,
            "error: --csv is only available for compare\n".to_string(),
        ),
        Ok(body) => (body.result, if body.ok { EXIT_OK } else { EXIT_FAILED }, body.csv, String::new()),
        Err(InputError(msg)) => (json!({ "error": msg }), EXIT_INPUT, None, format!("error: {msg}\n")),
    };
    if cli.csv && code != EXIT_INPUT {
        if let Some(rows) = csv {
            return Outcome {
                stdout: rows_to_csv(&rows),
                stderr,
                code,
            };
        }
    }
    let report = RunReport {
        subcommand: cli.command.name().to_string(),
        input_digest: digest,
        parameters,
        result,
        exit_status: code,
        timing_ms: cli.timing.then_some(elapsed),
    };
    let mut value = to_value(&report);
    round_floats(&mut value);
    let mut stdout = serde_json::to_string_pretty(&value).expect("serializable");
    stdout.push('\n');
    Outcome { stdout, stderr, code }
}

fn rows_to_csv(rows: &[Value]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut rows = rows.to_vec();
    rows.iter_mut().for_each(round_floats);
    if let Some(Value::Object(first)) = rows.first() {
        let header: Vec<&String> = first.keys().collect();
        writer.write_record(&header).expect("in-memory write");
        for row in &rows {
            let fields: Vec<String> = header
                .iter()
                .map(|k| match row.get(k.as_str()) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            writer.write_record(&fields).expect("in-memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn dispatch(command: &Command, inputs: &mut Inputs) -> Res<Body> {
    match command {
        Command::Bound {
            app,
            r,
            delta,
            k,
            t,
            c,
            dk,
            beta,
        } => bound(*app, *r, *delta, *k, *t, *c, *dk, beta.as_deref()),
        Command::CheckKey { file, beta, colors } => {
            let instance = io::parse_instance(&inputs.read(file)?)?;
            let beta = parse_beta(beta)?;
            let report = check_key(&instance.weight_profile(), beta.value(), *colors)?;
            let ok = report.guarantee;
            Ok(Body::new(to_value(&report), ok))
        }
        Command::Optimize { file, profile } => {
            let profile = match (file, profile) {
                (Some(f), _) => io::parse_instance(&inputs.read(f)?)?.weight_profile(),
                (None, Some(p)) => parse_profile(p)?,
                (None, None) => return Err(InputError("optimize needs --file or --profile".into())),
            };
            let opt = optimize_beta(&profile);
            let key = check_key(&profile, opt.beta, opt.c)?;
            Ok(Body::new(
                json!({ "beta": opt.beta, "c": opt.c, "objective": opt.objective,
                        "binding_vertex": opt.binding_vertex, "key_satisfied": key.satisfied }),
                true,
            ))
        }
        Command::Color {
            file,
            lists,
            strategy,
            restarts,
            seed,
        } => {
            let instance = io::parse_instance(&inputs.read(file)?)?;
            let lists = resolve_lists(&instance, lists, inputs, None)?;
            let strategy = match strategy {
                StrategyKind::Exhaustive => Strategy::Exhaustive,
                StrategyKind::Random => Strategy::RandomGreedy {
                    restarts: *restarts,
                    seed: *seed,
                },
            };
            match find_good(&instance, &lists, strategy) {
                Ok(found) => Ok(Body::new(
                    json!({ "found": true, "colouring": found.colouring.to_map(instance.graph()),
                            "attempts": found.attempts }),
                    true,
                )),
                Err(ColouringError::NoneFound { certified, attempts }) => Ok(Body::new(
                    json!({ "found": false, "certified": certified, "attempts": attempts }),
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Count {
            file,
            lists,
            beta,
            budget,
        } => {
            let instance = io::parse_instance(&inputs.read(file)?)?;
            let lists = resolve_lists(&instance, lists, inputs, None)?;
            let budget = budget.unwrap_or_else(default_budget);
            match beta {
                None => {
                    let result = count_good(&instance, &lists, budget)?;
                    Ok(Body::new(to_value(&result), true))
                }
                Some(b) => {
                    let report = verify_count_bound(&instance, &lists, &parse_beta(b)?, budget)?;
                    let ok = report.satisfied;
                    Ok(Body::new(to_value(&report), ok))
                }
            }
        }
        Command::VerifyLemma {
            file,
            lists,
            beta,
            budget,
        } => {
            let instance = io::parse_instance(&inputs.read(file)?)?;
            let lists = resolve_lists(&instance, lists, inputs, None)?;
            let budget = budget.unwrap_or_else(default_budget);
            let report = verify_extension_lemma(&instance, &lists, &parse_beta(beta)?, budget)?;
            let ok = report.passed();
            Ok(Body::new(to_value(&report), ok))
        }
        Command::Compare { mode, r, delta, k, c, to } => compare(*mode, *r, *delta, *k, *c, *to),
        Command::Proper(args) => {
            let graph = io::parse_graph(&inputs.read(&args.file)?)?;
            let closed = graph
                .uniformity()
                .filter(|&r| r >= 3)
                .and_then(|r| closed_form_bound(&Application::ProperHypergraph { r: r as u64, delta: graph.max_degree() as u64 }).ok());
            analyse(Instance::proper(graph), args, inputs, closed.map(|c| to_value(&c)), None)
        }
        Command::Star(args) => {
            let graph = io::parse_graph(&inputs.read(&args.file)?)?;
            let closed = closed_form_bound(&Application::Star { delta: graph.max_degree() as u64 }).ok();
            analyse(star_instance(&graph)?, args, inputs, closed.map(|c| to_value(&c)), None)
        }
        Command::Nonrep {
            args,
            max_order,
            path_budget,
        } => {
            let graph = io::parse_graph(&inputs.read(&args.file)?)?;
            let built = nonrepetitive_instance(&graph, *max_order, *path_budget)?;
            let closed = closed_form_bound(&Application::Nonrepetitive { delta: graph.max_degree() as u64 }).ok();
            let extra = json!({
                "max_order": built.max_order,
                "truncated": built.truncated,
                "validity": built.validity_note(),
                "paths_by_order": built.paths_by_order.iter().map(|(o, n)| json!({"order": o, "paths": n})).collect::<Vec<_>>(),
            });
            analyse(built.instance, args, inputs, closed.map(|c| to_value(&c)), Some(extra))
        }
        Command::Frugal { args, k } => {
            let graph = io::parse_graph(&inputs.read(&args.file)?)?;
            let closed = closed_form_bound(&Application::Frugal { delta: graph.max_degree() as u64, k: *k }).ok();
            analyse(frugal_instance(&graph, *k)?, args, inputs, closed.map(|c| to_value(&c)), None)
        }
        Command::Transversal {
            file,
            parts,
            reduce,
            budget,
            no_count,
        } => {
            let graph = io::parse_graph(&inputs.read(file)?)?;
            let partition = io::parse_partition(&graph, &inputs.read(parts)?)?;
            let built = transversal_instance(&graph, &partition, *reduce)?;
            let c = built.lists.lists().iter().map(Vec::len).min().unwrap_or(0) as u64;
            let key = check_key(&built.instance.weight_profile(), built.beta.value(), c.max(1))?;
            let mut result = json!({ "report": to_value(&built.report), "key": key_summary(&key) });
            let mut ok = built.report.hypothesis_holds;
            if !no_count {
                let budget = budget.unwrap_or_else(default_budget);
                ok &= attach_count(&mut result, &built.instance, &built.lists, &built.beta, budget)?;
            }
            Ok(Body::new(result, ok))
        }
        Command::Constrained {
            file,
            lists,
            mode,
            t,
            k,
            budget,
            no_count,
        } => {
            let graph = io::parse_graph(&inputs.read(file)?)?;
            let lists = io::parse_lists(&graph, &inputs.read(lists)?)?;
            let mode = match mode {
                ConstrainedKind::SharedColours => ConstrainedMode::SharedColours {
                    t: t.or(lists.uniform_size()).ok_or_else(|| InputError("shared-colours needs -t".into()))?,
                },
                ConstrainedKind::ColourDegree => ConstrainedMode::ColourDegree {
                    k: k.ok_or_else(|| InputError("colour-degree needs -k".into()))?,
                },
                ConstrainedKind::VertexBeta => ConstrainedMode::VertexBeta,
            };
            let report = constrained_check(&graph, &lists, mode)?;
            let mut ok = report.holds;
            let mut result = json!({ "report": to_value(&report) });
            if !no_count {
                let budget = budget.unwrap_or_else(default_budget);
                let bound = BigRational::from_str(&report.count_bound)
                    .map_err(|e| InputError(format!("internal bound `{}`: {e}", report.count_bound)))?;
                match count_good(&Instance::proper(graph.clone()), &lists, budget) {
                    Ok(count) => {
                        let meets = BigRational::from_integer(BigInt::from(count.count.clone())) >= bound;
                        result["count"] = json!(count.count.to_string());
                        result["count_meets_bound"] = json!(meets);
                        ok &= meets || !report.holds;
                    }
                    Err(ColouringError::BudgetExceeded { .. }) => {
                        result["count"] = Value::Null;
                        result["count_skipped"] = json!("search space exceeds the budget");
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(Body::new(result, ok))
        }
        Command::Ramsey {
            file,
            complete,
            k,
            c,
            clique_budget,
            budget,
            no_count,
        } => {
            let graph = match (file, complete) {
                (Some(f), _) => io::parse_graph(&inputs.read(f)?)?,
                (None, Some(n)) => complete_graph(*n)?,
                (None, None) => return Err(InputError("ramsey needs --file or --complete".into())),
            };
            let built = ramsey_instance(&graph, *k, *c, *clique_budget)?;
            let mut result = json!({ "report": to_value(&built.report) });
            let mut ok = built.report.applicable;
            if !no_count {
                let budget = budget.unwrap_or_else(default_budget);
                match count_good(&built.instance, &built.lists, budget) {
                    Ok(count) => {
                        let meets = built.count_meets_bound(&count.count);
                        result["count"] = json!(count.count.to_string());
                        result["count_meets_bound"] = json!(meets);
                        ok &= meets;
                    }
                    Err(ColouringError::BudgetExceeded { .. }) => {
                        result["count"] = Value::Null;
                        result["count_skipped"] = json!("search space exceeds the budget");
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(Body::new(result, ok))
        }
        Command::Sat { file, budget, no_count } => {
            let formula = io::parse_dimacs(&inputs.read(file)?)?;
            let built = ksat_instance(&formula)?;
            let mut result = to_value(&built.report);
            result["bound"] = json!(built.report.count_bound_float);
            let mut ok = built.report.applicable;
            if !no_count {
                let budget = budget.unwrap_or_else(default_budget);
                ok &= attach_count(&mut result, &built.instance, &built.lists, &built.beta, budget)?;
            }
            Ok(Body::new(result, ok))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn bound(
    app: AppKind,
    r: Option<u64>,
    delta: Option<u64>,
    k: Option<u64>,
    t: Option<u64>,
    c: Option<u64>,
    dk: Option<u64>,
    beta: Option<&str>,
) -> Res<Body> {
    let name = to_value(&app);
    let name = name.as_str().unwrap_or("app");
    let application = match app {
        AppKind::ProperHypergraph => Application::ProperHypergraph {
            r: need(r, "-r", name)?,
            delta: need(delta, "-d", name)?,
        },
        AppKind::ProperGraph => Application::ProperGraph {
            delta: need(delta, "-d", name)?,
            beta: parse_beta(beta.ok_or_else(|| InputError(format!("{name} needs --beta")))?)?,
        },
        AppKind::Star => Application::Star {
            delta: need(delta, "-d", name)?,
        },
        AppKind::Nonrepetitive => Application::Nonrepetitive {
            delta: need(delta, "-d", name)?,
        },
        AppKind::Frugal => Application::Frugal {
            delta: need(delta, "-d", name)?,
            k: need(k, "-k", name)?,
        },
        AppKind::Transversal => Application::Transversal {
            r: need(r, "-r", name)?,
            t: need(t, "-t", name)?,
        },
        AppKind::Ramsey => Application::Ramsey {
            k: need(k, "-k", name)?,
            c: need(c, "-c", name)?,
            d_k: dk,
        },
        AppKind::Ksat => Application::KSat { k: need(k, "-k", name)? },
    };
    let closed = closed_form_bound(&application)?;
    let profile = parametric_profile(&application)?;
    let key = check_key(&profile, closed.beta, closed.c)?;
    let mut result = to_value(&closed);
    result["key_satisfied"] = json!(key.satisfied);
    if let Application::ProperHypergraph { r, delta } = application {
        result["lll_c"] = json!(lll_bound(r, delta)?.c);
    }
    Ok(Body::new(result, key.satisfied))
}

fn compare(mode: CompareKind, r: Option<u64>, delta: Option<u64>, k: Option<u64>, c: Option<u64>, to: Option<u64>) -> Res<Body> {
    let modes: Vec<CompareMode> = match mode {
        CompareKind::Proper => {
            let r = need(r, "-r", "compare proper")?;
            let d = need(delta, "-d", "compare proper")?;
            (d..=to.unwrap_or(d).max(d)).map(|delta| CompareMode::Proper { r, delta }).collect()
        }
        CompareKind::Egl => {
            let r = need(r, "-r", "compare egl")?;
            let k = need(k, "-k", "compare egl")?;
            (k..=to.unwrap_or(k).max(k)).map(|k| CompareMode::Egl { r, k }).collect()
        }
        CompareKind::Ramsey => vec![CompareMode::Ramsey {
            k: need(k, "-k", "compare ramsey")?,
            c: need(c, "-c", "compare ramsey")?,
        }],
    };
    if modes.len() > 1_000_000 {
        return Err(InputError("sweep longer than 10^6 rows".into()));
    }
    let rows = modes
        .into_iter()
        .map(|m| compare_bounds(m).map(|row| to_value(&row)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Body {
        result: json!({ "rows": rows.clone() }),
        ok: true,
        csv: Some(rows),
    })
}

fn parse_profile(text: &str) -> Res<WeightProfile> {
    let mut counts = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, n) = part
            .split_once(':')
            .ok_or_else(|| InputError(format!("profile entry `{part}` is not `k:count`")))?;
        let k: usize = k.trim().parse().map_err(|_| InputError(format!("bad weight `{k}`")))?;
        let n: u64 = n.trim().parse().map_err(|_| InputError(format!("bad count `{n}`")))?;
        *counts.entry(k).or_insert(0) += n;
    }
    Ok(WeightProfile::parametric("profile", counts))
}

fn complete_graph(n: usize) -> Res<Hypergraph> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push(vec![a, b]);
        }
    }
    Ok(Hypergraph::from_handles(names, edges)?)
}

/// `--lists` file, else `--colors`, else the instance's own lists, else
/// uniform lists of `default_c`.
fn resolve_lists(instance: &Instance, args: &ListArgs, inputs: &mut Inputs, default_c: Option<u64>) -> Res<ListAssignment> {
    let n = instance.graph().num_vertices();
    if let Some(path) = &args.lists {
        return Ok(io::parse_lists(instance.graph(), &inputs.read(path)?)?);
    }
    if let Some(c) = args.colors {
        if c == 0 {
            return Err(InputError("--colors must be at least 1".into()));
        }
        return Ok(ListAssignment::uniform(n, c));
    }
    if let Some(l) = instance.lists() {
        return Ok(l.clone());
    }
    match default_c {
        Some(c) => Ok(ListAssignment::uniform(n, c.max(1) as usize)),
        None => Err(InputError("no lists: pass --colors or --lists".into())),
    }
}

fn key_summary(key: &crate::bounds::KeyReport) -> Value {
    json!({
        "beta": key.beta,
        "c": key.c,
        "satisfied": key.satisfied,
        "guarantee": key.guarantee,
        "min_slack": key.min_slack,
        "binding_vertex": key.binding_vertex,
    })
}

/// Counts and compares against `beta^|V|`; a count over budget is skipped and
/// does not fail the run.
fn attach_count(result: &mut Value, instance: &Instance, lists: &ListAssignment, beta: &Beta, budget: u128) -> Res<bool> {
    match verify_count_bound(instance, lists, beta, budget) {
        Ok(report) => {
            result["count"] = json!(report.count.to_string());
            result["count_meets_bound"] = json!(report.satisfied);
            result["log_count"] = json!(report.log_count);
            result["log_bound"] = json!(report.log_bound);
            Ok(report.satisfied)
        }
        Err(ColouringError::BudgetExceeded { product, .. }) => {
            result["count"] = Value::Null;
            result["count_skipped"] = json!(format!("search space {product} exceeds the budget"));
            Ok(true)
        }
        Err(e) => Err(e.into()),
    }
}

/// Shared tail of the instance-building subcommands: profile, optimum, key
/// condition and (budget permitting) the exact count.
fn analyse(instance: Instance, args: &AppArgs, inputs: &mut Inputs, closed: Option<Value>, extra: Option<Value>) -> Res<Body> {
    let profile = instance.weight_profile();
    let opt = optimize_beta(&profile);
    let beta = match &args.beta {
        Some(b) => parse_beta(b)?,
        None => Beta::real(opt.beta),
    };
    let lists = resolve_lists(&instance, &args.lists, inputs, Some(opt.c))?;
    let c = lists.lists().iter().map(Vec::len).min().unwrap_or(1) as u64;
    let key = check_key(&profile, beta.value(), c.max(1))?;
    let mut max_tallies: BTreeMap<usize, u64> = BTreeMap::new();
    for entry in &profile.entries {
        for (&k, &n) in &entry.counts {
            let slot = max_tallies.entry(k).or_insert(0);
            *slot = (*slot).max(n);
        }
    }
    let graph = instance.graph();
    let mut result = json!({
        "vertices": graph.num_vertices(),
        "edges": graph.num_edges(),
        "instance_max_degree": graph.max_degree(),
        "max_tallies": max_tallies.iter().map(|(k, n)| (k.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
        "optimum": { "beta": opt.beta, "c": opt.c, "binding_vertex": opt.binding_vertex },
        "key": key_summary(&key),
    });
    if let Some(closed) = closed {
        result["closed_form"] = closed;
    }
    if let Some(extra) = extra {
        result["construction"] = extra;
    }
    let mut ok = key.guarantee;
    if !args.no_count {
        let budget = args.budget.unwrap_or_else(default_budget);
        ok &= attach_count(&mut result, &instance, &lists, &beta, budget)?;
    }
    Ok(Body::new(result, ok))
}

/// Used by the binary: prints the outcome and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = run(args);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}
