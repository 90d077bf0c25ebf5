//! Command-line front end: `.psat` files in, exact verdicts out.
//!
//! Exit codes: 0 feasible or true, 1 infeasible or false, 2 usage or parse
//! error, 3 size guard.

pub mod error;
pub mod format;
pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Zero;
use psat_core::matrices::{build_k, build_v, build_w, build_z, c_vector, c_vector_general};
use psat_core::oracle::{exhaustive_sat, hull_membership, support_enumeration_optimize};
use psat_core::problems::{coherence, entail, psat, sat_via_psat};
use psat_core::{
    AssignmentSpace, ClauseProbabilityTarget, Distribution, Error, ProbabilisticAssignment, Rational,
    DEFAULT_MAX_COLUMNS, DEFAULT_ORACLE_COLUMNS,
};

pub use error::CliError;
use format::PsatInstance;
use render::Format;

#[derive(Debug, Parser)]
#[command(name = "psat", version, about = "Exact probabilistic satisfiability")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Raise or lower the k^n guard for solver paths.
    #[arg(long, global = true, value_name = "N")]
    max_columns: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide PSAT for the bounds in a file and print a witness.
    Solve { file: PathBuf },
    /// Decide coherence of a point x in [0,1]^n, given inline ("1/2,1/3")
    /// or as a file of rationals.
    Coherence {
        x: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Exact range of a goal clause's expected value.
    Entail {
        file: PathBuf,
        /// Goal literals, e.g. "2" or "-1 3"; defaults to the file's goal line.
        #[arg(long, allow_hyphen_values = true)]
        goal: Option<String>,
    },
    /// Classical satisfiability via PSAT with every clause certain.
    Sat { file: PathBuf },
    /// Cross-check the solver against the brute-force oracles.
    Verify { file: PathBuf },
    /// Dump W, K, Z or c for the given dimensions.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "W", value_parser = ["W", "K", "Z", "c"])]
        which: String,
    },
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    let format = if cli.json { Format::Json } else { Format::Text };
    let limit = match cli.max_columns {
        Some(n) => {
            let _ = writeln!(err, "warning: size guard set to {n} columns (default {DEFAULT_MAX_COLUMNS})");
            n
        }
        None => DEFAULT_MAX_COLUMNS,
    };
    match dispatch(cli.command, format, limit) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            if matches!(e, CliError::Core(Error::Infeasible)) {
                let _ = out.write_all(render::decision(None, format).as_bytes());
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, format: Format, limit: usize) -> Result<(String, i32), CliError> {
    match command {
        Command::Solve { file } => {
            let inst = load(&file)?;
            let space = space_for(&inst, limit)?;
            let u = psat(&inst.form, &inst.target, &space)?;
            Ok(verdict(u.as_ref(), format))
        }
        Command::Sat { file } => {
            let inst = load(&file)?;
            let space = space_for(&inst, limit)?;
            let u = psat(&inst.form, &ClauseProbabilityTarget::certain(inst.form.m()), &space)?;
            Ok(verdict(u.as_ref(), format))
        }
        Command::Coherence { x, k } => {
            let values = read_point(&x)?;
            let space = AssignmentSpace::with_limit(values.len(), k, limit)?;
            let u = coherence(&ProbabilisticAssignment::new(values)?, &space)?;
            Ok(verdict(u.as_ref(), format))
        }
        Command::Entail { file, goal } => {
            let inst = load(&file)?;
            let goal = match goal {
                Some(text) => format::parse_goal(&text, inst.form.n())?,
                None => inst.goal.clone().ok_or_else(|| CliError::Usage("no goal: pass --goal or add a g line".into()))?,
            };
            let space = space_for(&inst, limit)?;
            let i = entail(&inst.form, &inst.target, &goal, &space)?;
            Ok((render::interval(&i, format), 0))
        }
        Command::Verify { file } => verify(&load(&file)?, format),
        Command::Matrix { n, k, which } => {
            let space = AssignmentSpace::with_limit(n, k, limit)?;
            let text = match which.as_str() {
                "W" => render::matrix(&build_w(&space), format),
                "K" => render::matrix(&build_k(&space), format),
                "Z" => render::matrix(&build_z(&space)?, format),
                _ if space.is_boolean() => render::vector(&c_vector(&space)?, format),
                _ => render::vector(&c_vector_general(&space), format),
            };
            Ok((text, 0))
        }
    }
}

fn verdict(u: Option<&Distribution>, format: Format) -> (String, i32) {
    (render::decision(u, format), if u.is_some() { 0 } else { 1 })
}

fn load(path: &Path) -> Result<PsatInstance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    format::parse(&text)
}

fn space_for(inst: &PsatInstance, limit: usize) -> Result<AssignmentSpace, CliError> {
    Ok(AssignmentSpace::with_limit(inst.form.n(), inst.k, limit)?)
}

/// A point is either a path to a file of rationals or an inline list
/// separated by commas or whitespace.
fn read_point(arg: &str) -> Result<Vec<Rational>, CliError> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?
    } else {
        arg.to_string()
    };
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('c') {
            continue;
        }
        for token in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            values.push(format::parse_rational(token).map_err(|m| CliError::parse(i + 1, m))?);
        }
    }
    if values.is_empty() {
        return Err(CliError::Usage("empty point".into()));
    }
    Ok(values)
}

/// Solver against oracle on everything the instance supports. Exit 0 only
/// when every check agrees.
fn verify(inst: &PsatInstance, format: Format) -> Result<(String, i32), CliError> {
    let space = AssignmentSpace::with_limit(inst.form.n(), inst.k, DEFAULT_ORACLE_COLUMNS)?;
    let v = build_v(&inst.form, &space)?;
    let mut checks: Vec<(&str, String, String)> = Vec::new();

    let sat_lp = sat_via_psat(&inst.form, &space)?;
    let sat_oracle = exhaustive_sat(&inst.form, inst.k)?;
    checks.push(("sat", sat_lp.to_string(), sat_oracle.to_string()));

    let witness = psat(&inst.form, &inst.target, &space)?;
    if let Some(u) = &witness {
        // A witness must actually meet the bounds, not merely exist.
        let y = v.mul_vec(u.weights())?;
        let ok = y.iter().zip(inst.target.bounds()).all(|(y, (lo, hi))| lo <= y && y <= hi);
        checks.push(("witness", ok.to_string(), "true".into()));
    }
    let (lower, upper) = (inst.target.lower(), inst.target.upper());
    let oracle_feasible = if inst.target.is_exact() {
        hull_membership(&v, &lower)?.is_some()
    } else {
        let zero = vec![Rational::zero(); space.len()];
        match support_enumeration_optimize(&v, &lower, &upper, &zero) {
            Ok(_) => true,
            Err(Error::Infeasible) => false,
            Err(e) => return Err(e.into()),
        }
    };
    checks.push(("psat", feasibility(witness.is_some()), feasibility(oracle_feasible)));

    if let (Some(goal), true) = (&inst.goal, witness.is_some()) {
        let lp = entail(&inst.form, &inst.target, goal, &space)?;
        let z = psat_core::matrices::clause_truth_vector(goal, &space)?;
        let oracle = support_enumeration_optimize(&v, &lower, &upper, &z)?;
        checks.push(("entail", lp.to_string(), oracle.to_string()));
    }

    let agree = checks.iter().all(|(_, a, b)| a == b);
    let text = match format {
        Format::Text => {
            let mut s: String = checks
                .iter()
                .map(|(name, a, b)| {
                    if a == b { format!("{name}: agree {a}\n") } else { format!("{name}: DISAGREE solver {a} oracle {b}\n") }
                })
                .collect();
            s.push_str(if agree { "verify: ok\n" } else { "verify: mismatch\n" });
            s
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = checks
                .iter()
                .map(|(name, a, b)| serde_json::json!({ "check": name, "solver": a, "oracle": b, "agree": a == b }))
                .collect();
            render::line(&serde_json::json!({ "agree": agree, "checks": items }))
        }
    };
    Ok((text, if agree { 0 } else { 1 }))
}

fn feasibility(b: bool) -> String {
    if b { "feasible" } else { "infeasible" }.to_string()
}
