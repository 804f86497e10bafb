//! The `domipack` command line.
//!
//! Exit codes: 0 success, 1 bad input, 2 infeasible or invalid set,
//! 3 budget exceeded, 4 a proven result reported violated, 5 a
//! counterexample to the open duality question was found and saved.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    audit_corpus, bounds_report, counterexample_search, duality_check, nordhaus_gaddum_check, BoundReport,
    DualityRecord, NordhausGaddumRecord, Problem, Status,
};
use crate::digraph::Digraph;
use crate::error::AnalysisError;
use crate::families::{
    construct_gamma_tree, construct_omega, construct_r_gadget, construct_theta, reduction_dd_instance,
    reduction_lp_instance, Family, FamilyInstance,
};
use crate::generators::GenSpec;
use crate::io::{read_instance, serialize_instance, sidecar_path, to_dot, write_instance, write_text, IoError};
use crate::report::{render, Format};
use crate::solvers::{solve_all, solve_with, validate, ParameterKind, SolveOptions, SolveResult, SolveStatus, Validation};
use crate::vertex_set::parse_set_literal;
use crate::DEFAULT_BUDGET;

/// Environment variable overriding the default per-solve budget.
pub const BUDGET_ENV: &str = "DOMIPACK_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PROVEN_VIOLATION: i32 = 4;
pub const EXIT_OPEN_FINDING: i32 = 5;

const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "domipack", version, about = "Exact domination and limited-packing parameters of digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one parameter or all of them exactly.
    Compute(ComputeArgs),
    /// Check a vertex set against a parameter's definition.
    Verify(VerifyArgs),
    /// Build a family instance and write it with a metadata sidecar.
    Construct(ConstructArgs),
    /// Audit the proven bounds on one file or a generated corpus.
    Audit(AuditArgs),
    /// Write one generated instance to a file.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Validity checks allowed per solve [default: $DOMIPACK_BUDGET or 2^24].
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    file: PathBuf,
    /// Parameter name, e.g. gamma, gamma-x2, gamma-t2, rho, l2, l2t, gamma-3, l-3.
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    param: Option<ParameterKind>,
    /// Compute every supported parameter.
    #[arg(long)]
    all: bool,
    /// Use the pruned search instead of plain enumeration.
    #[arg(long)]
    pruned: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Comma-separated vertex indices, e.g. "0,2,5".
    #[arg(long, allow_hyphen_values = true)]
    set: String,
    #[arg(long)]
    param: Option<ParameterKind>,
    #[arg(long, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// omega, theta, gamma-tree, r-gadget, reduction-dd or reduction-lp.
    family: Family,
    /// Seed digraph (all families except gamma-tree).
    #[arg(long)]
    input: Option<PathBuf>,
    /// r for omega/theta (default: smallest valid) and gamma-tree.
    #[arg(long)]
    r: Option<usize>,
    /// Star orders for gamma-tree, e.g. "4,3".
    #[arg(long, value_delimiter = ',')]
    stars: Vec<usize>,
    /// RNG seed for gamma-tree.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write a DOT export.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Instance file to audit.
    #[arg(required_unless_present = "gen", conflicts_with = "gen")]
    file: Option<PathBuf>,
    /// Generator spec, e.g. "trees:n=6:exhaustive" or "random:n=8:p=0.3:trials=500".
    #[arg(long)]
    gen: Option<GenSpec>,
    /// Samples for random generators [default: the spec's trials or 100].
    #[arg(long)]
    trials: Option<usize>,
    /// P1, P2, or a theorem id such as T3 or NG1.
    #[arg(long, requires = "gen")]
    problem: Option<Problem>,
    /// Where counterexamples are written.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    spec: GenSpec,
    /// Trial index; random kinds use seed + index.
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Construct(a) => construct(a, out),
        Command::Audit(a) => audit(a, out, err),
        Command::Generate(a) => generate(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

type CmdResult = Result<i32, Failure>;

fn resolve_budget(args: &BudgetArgs) -> Result<u64, Failure> {
    if let Some(b) = args.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("{BUDGET_ENV}=`{v}` is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Serialize)]
struct ComputeReport<'a> {
    source: String,
    n: usize,
    m: usize,
    results: &'a [SolveResult],
}

fn compute(a: ComputeArgs, out: &mut dyn Write) -> CmdResult {
    let d = read_instance(&a.file)?;
    let budget = resolve_budget(&a.budget)?;
    let options = if a.pruned { SolveOptions::pruned(budget) } else { SolveOptions::plain(budget) };
    let results: Vec<SolveResult> = match a.param {
        Some(kind) => vec![solve_with(&d, kind, options).map_err(Failure::input)?],
        None => solve_all(&d, options).into_values().collect(),
    };
    let report = ComputeReport { source: a.file.display().to_string(), n: d.order(), m: d.arc_count(), results: &results };
    out.write_all(render(&report, a.format).as_bytes())?;
    let statuses: Vec<SolveStatus> = results.iter().map(|r| r.status).collect();
    Ok(if statuses.contains(&SolveStatus::BudgetExceeded) {
        EXIT_BUDGET
    } else if a.param.is_some() && statuses.contains(&SolveStatus::Infeasible) {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let d = read_instance(&a.file)?;
    let set = parse_set_literal(d.order(), &a.set).map_err(|e| Failure::input(format!("malformed set `{}`: {e}", a.set)))?;
    let kind = a.param.ok_or_else(|| Failure::input("--param is required"))?;
    let validation = validate(&d, &set, kind).map_err(Failure::input)?;
    match a.format {
        Format::Json => out.write_all(render(&validation, Format::Json).as_bytes())?,
        Format::Text => match &validation {
            Validation::Valid => writeln!(out, "valid {} set {{{set}}}", kind.symbol())?,
            Validation::Violation(v) => writeln!(out, "invalid {} set {{{set}}}: {v}", kind.symbol())?,
        },
    }
    Ok(if validation.is_valid() { EXIT_OK } else { EXIT_INFEASIBLE })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    n: usize,
    m: usize,
    #[serde(flatten)]
    instance: &'a FamilyInstance,
    certificate_holds: bool,
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> CmdResult {
    let seed_digraph = || -> Result<Digraph, Failure> {
        let path = a.input.as_ref().ok_or_else(|| Failure::input(format!("{} needs --input", a.family)))?;
        Ok(read_instance(path)?)
    };
    let budget = resolve_budget(&a.budget)?;
    let built = match a.family {
        Family::Omega => construct_omega(&seed_digraph()?, a.r),
        Family::Theta => construct_theta(&seed_digraph()?, a.r),
        Family::GammaTree => {
            let r = a.r.ok_or_else(|| Failure::input("gamma-tree needs --r"))?;
            construct_gamma_tree(r, &a.stars, a.seed)
        }
        Family::RGadget => construct_r_gadget(&seed_digraph()?),
        Family::ReductionDd => reduction_dd_instance(&seed_digraph()?, budget),
        Family::ReductionLp => reduction_lp_instance(&seed_digraph()?, budget),
    };
    let instance = built.map_err(|e| Failure::input(format!("{}: {e}", a.family)))?;
    let d = &instance.digraph;
    write_instance(&a.output, d)?;
    let sidecar = Sidecar { n: d.order(), m: d.arc_count(), instance: &instance, certificate_holds: instance.certificate_holds() };
    let meta = sidecar_path(&a.output);
    write_text(&meta, &render(&sidecar, Format::Json))?;
    if let Some(dot) = &a.dot {
        write_text(dot, &to_dot(d, a.family.name().replace('-', "_").as_str()))?;
    }
    writeln!(
        out,
        "wrote {} (n={} m={}) and {}; extremal_set={}",
        a.output.display(),
        d.order(),
        d.arc_count(),
        meta.display(),
        instance.extremal_set
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FileAudit {
    source: String,
    #[serde(flatten)]
    bounds: BoundReport,
    /// Present for connected digraphs.
    nordhaus_gaddum: Option<NordhausGaddumRecord>,
    /// Present for directed trees with n ≥ 2.
    duality: Option<DualityRecord>,
    violated: Vec<String>,
}

fn audit(a: AuditArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let budget = resolve_budget(&a.budget)?;
    if let Some(path) = &a.file {
        return audit_file(path, budget, a.format, out, err);
    }
    let gen = a.gen.as_ref().expect("clap requires file or --gen");
    let trials = a.trials.or(gen.trials).unwrap_or(DEFAULT_TRIALS);
    let Some(problem) = a.problem else {
        let corpus = audit_corpus(gen, trials, budget).map_err(Failure::input)?;
        out.write_all(render(&corpus, a.format).as_bytes())?;
        return Ok(if corpus.violated() { EXIT_PROVEN_VIOLATION } else { EXIT_OK });
    };
    let report = counterexample_search(problem, gen, trials, budget).map_err(Failure::input)?;
    out.write_all(render(&report, a.format).as_bytes())?;
    if report.has_open_problem_finding() {
        std::fs::create_dir_all(&a.out_dir)?;
        for finding in &report.violations {
            let d = Digraph::new(finding.n, finding.arcs.iter().copied()).expect("found instance is valid");
            let path = a.out_dir.join(format!("p1-counterexample-{}.dg", finding.index));
            write_instance(&path, &d)?;
            writeln!(err, "counterexample written to {}", path.display())?;
        }
        return Ok(EXIT_OPEN_FINDING);
    }
    Ok(if report.has_proven_violation() { EXIT_PROVEN_VIOLATION } else { EXIT_OK })
}

fn audit_file(path: &Path, budget: u64, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let d = read_instance(path)?;
    let bounds = bounds_report(&d, budget);
    let mut violated: Vec<String> = bounds.violations().map(|r| r.theorem_id.to_string()).collect();
    let nordhaus_gaddum = nordhaus_gaddum_check(&d, budget).ok();
    if nordhaus_gaddum.as_ref().is_some_and(|r| r.status == Status::Violated) {
        violated.push("NordhausGaddum".into());
    }
    let duality = match duality_check(&d, budget) {
        Ok(record) => Some(record),
        Err(AnalysisError::ProvenBoundViolated(msg)) => {
            writeln!(err, "duality violated: {msg}")?;
            violated.push("DualityCheck".into());
            None
        }
        Err(_) => None,
    };
    let report = FileAudit { source: path.display().to_string(), bounds, nordhaus_gaddum, duality, violated };
    out.write_all(render(&report, format).as_bytes())?;
    Ok(if report.violated.is_empty() { EXIT_OK } else { EXIT_PROVEN_VIOLATION })
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> CmdResult {
    let d = a.spec.sample(a.index).map_err(Failure::input)?;
    match &a.output {
        Some(path) => {
            write_instance(path, &d)?;
            writeln!(out, "wrote {} (n={} m={})", path.display(), d.order(), d.arc_count())?;
        }
        None => out.write_all(serialize_instance(&d).as_bytes())?,
    }
    Ok(EXIT_OK)
}
