use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use comply_core::automaton::{load_automaton, AutomatonObject};
use comply_core::kernel::{
    silent_successors, step, Action, Configuration, NamelessConfiguration, NamelessObject,
};
use comply_core::logrel::{check_term, replay, CheckBudget, Verdict};
use comply_core::proclang::{parse_term, typecheck_closed, Term};
use comply_core::suites::{
    adequacy_suite, ftlr_closed_suite, ftlr_open_suite, lemma_suites, SuiteReport,
};
use comply_core::types::{parse_type, SessionType};

mod report;

use report::RunReport;

#[derive(Parser)]
#[command(name = "comply", version)]
#[command(about = "Check message-passing processes against session types")]
struct Cli {
    /// Print the full run report as JSON
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a closed term against a type
    Typecheck {
        /// File holding the term
        file: PathBuf,
        /// Session type, e.g. "1 (+) 1"
        ty: String,
    },
    /// Decide whether an automaton or term complies with a type
    Check {
        /// Automaton (.json) or term (any other extension)
        file: PathBuf,
        /// Session type, e.g. "(1 (+) 1) & (1 (+) 1)"
        ty: String,
        /// Check a term without typechecking it first
        #[arg(long)]
        untyped: bool,
        /// Report compliance resting on sampled -o peers as Unknown
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print one silent execution of a configuration
    Run {
        /// Configuration JSON
        file: PathBuf,
        /// Steps to take
        #[arg(long, default_value_t = 64)]
        fuel: usize,
        /// Print every successor, to depth `fuel`, instead of one execution
        #[arg(long)]
        all: bool,
    },
    /// Run a seeded property suite
    Fuzz {
        mode: FuzzMode,
        /// Cases per suite
        count: usize,
        /// Seed; falls back to COMPLY_SEED, then 0
        #[arg(env = "COMPLY_SEED")]
        seed: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzMode {
    Ftlr,
    Adequacy,
    Lemmas,
}

#[derive(Args)]
struct BudgetArgs {
    /// Silent steps per search
    #[arg(long, default_value_t = CheckBudget::default().silent_fuel)]
    fuel: usize,
    /// Peers tried per -o clause
    #[arg(long, default_value_t = CheckBudget::default().lolli_peers)]
    peers: usize,
    /// Providing names each external step is validated at
    #[arg(long, default_value_t = CheckBudget::default().name_samples)]
    names: usize,
    /// Largest residual split exhaustively at (*)
    #[arg(long, default_value_t = CheckBudget::default().partition_limit)]
    partition_limit: usize,
    /// Configurations one search may expand
    #[arg(long, default_value_t = CheckBudget::default().state_limit)]
    state_limit: usize,
}

impl BudgetArgs {
    fn budget(&self) -> CheckBudget {
        CheckBudget {
            silent_fuel: self.fuel,
            partition_limit: self.partition_limit,
            lolli_peers: self.peers,
            name_samples: self.names,
            state_limit: self.state_limit,
        }
        .sanitized()
    }
}

const EXIT_OK: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_LOAD: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

/// A failure that ends the command with exit status 2.
struct LoadError(String);

impl<E: std::fmt::Display> From<E> for LoadError {
    fn from(e: E) -> Self {
        LoadError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|e| LoadError(format!("{}: {e}", path.display())))
}

fn parse_ty(src: &str) -> Result<SessionType, LoadError> {
    parse_type(src).map_err(|e| LoadError(format!("type `{src}`: {e}")))
}

fn parse_term_file(path: &Path, src: &str) -> Result<Term, LoadError> {
    parse_term(src.trim()).map_err(|e| LoadError(format!("{}: {e}", path.display())))
}

/// What a command prints: plain text, plus the report for `--json`.
struct Output {
    text: String,
    report: RunReport,
    code: u8,
}

fn typecheck_cmd(argv: Vec<String>, file: &Path, ty: &str) -> Result<Output, LoadError> {
    let src = read(file)?;
    let a = parse_ty(ty)?;
    let m = parse_term_file(file, &src)?;
    let mut report = RunReport::new(argv, &[src.as_bytes(), ty.as_bytes()]);
    Ok(match typecheck_closed(&m, &a) {
        Ok(d) => {
            report.result = json!({ "derivation": d });
            Output {
                text: format!("well typed: {m} :: {a}\n{}", d.render()),
                report,
                code: EXIT_OK,
            }
        }
        Err(e) => {
            report.result = json!({ "type_error": e, "message": e.to_string() });
            Output {
                text: format!("type error {e}"),
                report,
                code: EXIT_REJECTED,
            }
        }
    })
}

fn load_object(
    file: &Path,
    src: &str,
    a: &SessionType,
    untyped: bool,
) -> Result<NamelessObject, LoadError> {
    if file.extension().is_some_and(|e| e == "json") {
        let spec =
            load_automaton(src).map_err(|e| LoadError(format!("{}: {e}", file.display())))?;
        return Ok(AutomatonObject::initial(Arc::new(spec)).into_object());
    }
    let m = parse_term_file(file, src)?;
    if !untyped {
        typecheck_closed(&m, a).map_err(|e| {
            LoadError(format!(
                "{}: term is ill-typed at {a} ({e}); pass --untyped to check it anyway",
                file.display()
            ))
        })?;
    }
    Ok(NamelessObject::term(m)?)
}

fn check_cmd(
    argv: Vec<String>,
    file: &Path,
    ty: &str,
    untyped: bool,
    strict: bool,
    budget: CheckBudget,
) -> Result<Output, LoadError> {
    let src = read(file)?;
    let a = parse_ty(ty)?;
    let omega = NamelessConfiguration::lone(load_object(file, &src, &a, untyped)?);
    let mut v = check_term(&omega, &a, &budget);
    if strict {
        v = v.strict();
    }
    let replayed = v
        .witness()
        .map(|w| replay(&omega, &a, w).map_err(|e| e.to_string()));
    let code = match &v {
        Verdict::Compliant { .. } => EXIT_OK,
        Verdict::NonCompliant { .. } => EXIT_REJECTED,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    let mut text = v.to_string();
    if let Some(Err(e)) = &replayed {
        text.push_str(&format!("\nwitness replay FAILED: {e}"));
    }
    let mut report = RunReport::new(argv, &[src.as_bytes(), ty.as_bytes()]);
    report.budget = Some(budget);
    report.result = json!({
        "verdict": v,
        "shape": v.witness().map(|w| w.shape()),
        "replay": replayed.map(|r| match r {
            Ok(()) => Value::from("ok"),
            Err(e) => Value::from(e),
        }),
    });
    Ok(Output { text, report, code })
}

fn run_cmd(argv: Vec<String>, file: &Path, fuel: usize, all: bool) -> Result<Output, LoadError> {
    let src = read(file)?;
    let cfg = Configuration::from_json_str(&src)
        .map_err(|e| LoadError(format!("{}: {e}", file.display())))?;
    let mut report = RunReport::new(argv, &[src.as_bytes()]);
    let mut text = format!("configuration: {cfg}");
    if all {
        let tree = successor_tree(&cfg, fuel, 1, &mut text);
        report.result = json!({ "initial": cfg, "tree": tree });
        return Ok(Output {
            text,
            report,
            code: EXIT_OK,
        });
    }
    let mut trace = Vec::new();
    let mut cur = cfg.clone();
    let mut stuck = false;
    for _ in 0..fuel {
        let Some(next) = silent_successors(&cur).into_iter().next() else {
            stuck = true;
            break;
        };
        let act = Action::Silent.to_string();
        text.push_str(&format!("\n{act} -> {next}"));
        trace.push(json!({ "action": act, "to": next }));
        cur = next;
    }
    if stuck {
        text.push_str("\nstuck");
    }
    report.result = json!({ "initial": cfg, "trace": trace, "stuck": stuck });
    Ok(Output {
        text,
        report,
        code: EXIT_OK,
    })
}

fn successor_tree(cfg: &Configuration, fuel: usize, indent: usize, text: &mut String) -> Value {
    if fuel == 0 {
        return json!([]);
    }
    let mut out = Vec::new();
    for (act, succ) in step(cfg) {
        text.push_str(&format!("\n{}{act} -> {succ}", "  ".repeat(indent)));
        let below = successor_tree(&succ, fuel - 1, indent + 1, text);
        out.push(json!({ "action": act.to_string(), "to": succ, "next": below }));
    }
    Value::Array(out)
}

fn fuzz_cmd(
    argv: Vec<String>,
    mode: FuzzMode,
    count: usize,
    seed: u64,
    budget: CheckBudget,
) -> Output {
    let reports: Vec<SuiteReport> = match mode {
        FuzzMode::Ftlr => vec![
            ftlr_closed_suite(count, seed, &budget),
            ftlr_open_suite(count, seed, &budget),
        ],
        FuzzMode::Adequacy => vec![adequacy_suite(count, seed)],
        FuzzMode::Lemmas => lemma_suites(count, seed, &budget),
    };
    for r in &reports {
        eprintln!("{}: {:.3}s", r.name, r.elapsed.as_secs_f64());
    }
    let passed = reports.iter().all(SuiteReport::passed);
    let text = reports
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n");
    let mut report = RunReport::new(argv, &[]);
    report.budget = Some(budget);
    report.seed = Some(seed);
    report.result = json!({ "suites": reports, "passed": passed });
    Output {
        text,
        report,
        code: if passed { EXIT_OK } else { EXIT_REJECTED },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let out = match cli.command {
        Command::Typecheck { file, ty } => typecheck_cmd(argv, &file, &ty),
        Command::Check {
            file,
            ty,
            untyped,
            strict,
            budget,
        } => check_cmd(argv, &file, &ty, untyped, strict, budget.budget()),
        Command::Run { file, fuel, all } => run_cmd(argv, &file, fuel, all),
        Command::Fuzz {
            mode,
            count,
            seed,
            budget,
        } => Ok(fuzz_cmd(
            argv,
            mode,
            count,
            seed.unwrap_or(0),
            budget.budget(),
        )),
    };
    let code = match out {
        Ok(out) => {
            if cli.json {
                println!("{}", out.report.to_json());
            } else {
                println!("{}", out.text);
            }
            out.code
        }
        Err(LoadError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_LOAD
        }
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
