//! The `.psat` instance format.
//!
//! A superset of DIMACS CNF. Variables are 1-based signed integers and every
//! clause sits on its own line, terminated by `0`:
//!
//! ```text
//! c comment lines start with "c"
//! p psat 2 2
//! 1 0 7/10 7/10
//! -1 2 0 4/5 4/5
//! g 2 0
//! ```
//!
//! Headers are `p cnf <n> <m>`, `p psat <n> <m>` and `p psatk <n> <m> <k>`.
//! In the probabilistic headers a clause line may carry zero, one or two
//! bounds after the `0`: none means certain (`[1, 1]`), one is an exact
//! target and two are `lo hi`. An optional `g <literals> 0` line names a goal
//! clause for entailment. Bounds are fractions, integers or terminating
//! decimals and are kept exact.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use psat_core::{Clause, ClauseProbabilityTarget, ConjunctiveForm, Literal, Rational};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Header {
    Cnf,
    Psat,
    PsatK,
}

/// A parsed instance: form, per-clause bounds, optional goal and the
/// comment lines it was read with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsatInstance {
    pub header: Header,
    pub k: u32,
    pub form: ConjunctiveForm,
    pub target: ClauseProbabilityTarget,
    pub goal: Option<Clause>,
    pub comments: Vec<String>,
}

pub fn parse(text: &str) -> Result<PsatInstance, CliError> {
    let mut comments = Vec::new();
    let mut header: Option<(Header, usize, usize, u32)> = None;
    let mut clauses = Vec::new();
    let mut bounds = Vec::new();
    let mut goal = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line == "%" {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("nonempty line");
        match first {
            "c" => {
                comments.push(raw.trim_end().to_string());
                continue;
            }
            "p" => {
                if header.is_some() {
                    return Err(CliError::parse(line_no, "duplicate problem line"));
                }
                header = Some(parse_header(line_no, tokens.collect())?);
                continue;
            }
            _ => {}
        }
        let Some((kind, n, _, _)) = header else {
            return Err(CliError::parse(line_no, "clause before the problem line"));
        };
        if first == "g" {
            if kind == Header::Cnf {
                return Err(CliError::parse(line_no, "goal lines need a psat or psatk header"));
            }
            if goal.is_some() {
                return Err(CliError::parse(line_no, "duplicate goal line"));
            }
            let all: Vec<&str> = tokens.collect();
            let (clause, rest) = parse_clause(line_no, &all, n)?;
            if !rest.is_empty() {
                return Err(CliError::parse(line_no, "unexpected tokens after the goal clause"));
            }
            goal = Some(clause);
            continue;
        }
        let all: Vec<&str> = line.split_whitespace().collect();
        let (clause, rest) = parse_clause(line_no, &all, n)?;
        let bound = match (kind, rest) {
            (Header::Cnf, []) | (_, []) => (Rational::one(), Rational::one()),
            (Header::Cnf, _) => return Err(CliError::parse(line_no, "cnf clauses take no probability bounds")),
            (_, [y]) => {
                let y = parse_rational(y).map_err(|m| CliError::parse(line_no, m))?;
                (y.clone(), y)
            }
            (_, [lo, hi]) => (
                parse_rational(lo).map_err(|m| CliError::parse(line_no, m))?,
                parse_rational(hi).map_err(|m| CliError::parse(line_no, m))?,
            ),
            _ => return Err(CliError::parse(line_no, "at most two bounds may follow a clause")),
        };
        if bound.0.is_negative() || bound.1 > Rational::one() {
            return Err(CliError::parse(line_no, format!("bounds [{}, {}] leave [0, 1]", bound.0, bound.1)));
        }
        if bound.0 > bound.1 {
            return Err(CliError::parse(line_no, format!("lower bound {} exceeds upper bound {}", bound.0, bound.1)));
        }
        clauses.push(clause);
        bounds.push(bound);
    }

    let last = text.lines().count().max(1);
    let Some((kind, n, m, k)) = header else {
        return Err(CliError::parse(last, "missing problem line"));
    };
    if clauses.len() != m {
        return Err(CliError::parse(last, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    let form = ConjunctiveForm::new(n, clauses).map_err(|e| CliError::parse(last, e.to_string()))?;
    let target = ClauseProbabilityTarget::new(bounds)?;
    Ok(PsatInstance { header: kind, k, form, target, goal, comments })
}

fn parse_header(line: usize, tokens: Vec<&str>) -> Result<(Header, usize, usize, u32), CliError> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| CliError::parse(line, format!("bad number {s:?} in problem line")));
    let parsed = match tokens.as_slice() {
        ["cnf", n, m] => (Header::Cnf, num(n)?, num(m)?, 2),
        ["psat", n, m] => (Header::Psat, num(n)?, num(m)?, 2),
        ["psatk", n, m, k] => {
            let k = num(k)?;
            if k < 2 || k > u32::MAX as usize {
                return Err(CliError::parse(line, format!("k must be at least 2, got {k}")));
            }
            (Header::PsatK, num(n)?, num(m)?, k as u32)
        }
        _ => {
            return Err(CliError::parse(
                line,
                "expected \"p cnf <n> <m>\", \"p psat <n> <m>\" or \"p psatk <n> <m> <k>\"",
            ))
        }
    };
    if parsed.1 == 0 || parsed.2 == 0 {
        return Err(CliError::parse(line, "n and m must be positive"));
    }
    Ok(parsed)
}

/// Literals up to the terminating `0`; returns the clause and what follows.
fn parse_clause<'a, 'b>(line: usize, tokens: &'b [&'a str], n: usize) -> Result<(Clause, &'b [&'a str]), CliError> {
    let Some(end) = tokens.iter().position(|t| *t == "0") else {
        return Err(CliError::parse(line, "clause is missing its terminating 0"));
    };
    let mut lits = Vec::with_capacity(end);
    for t in &tokens[..end] {
        let v: i64 = t.parse().map_err(|_| CliError::parse(line, format!("bad literal {t:?}")))?;
        if v.unsigned_abs() as usize > n {
            return Err(CliError::parse(line, format!("literal {v} out of range for n = {n}")));
        }
        lits.push(Literal::from_dimacs(v)?);
    }
    let clause = Clause::new(lits).map_err(|e| CliError::parse(line, e.to_string()))?;
    Ok((clause, &tokens[end + 1..]))
}

/// `p/q`, an integer, or a terminating decimal such as `0.7`.
pub fn parse_rational(token: &str) -> Result<Rational, String> {
    let bad = || format!("bad number {token:?} (use p/q, an integer or a terminating decimal)");
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_positive() {
            return Ok(Rational::new(num, den));
        }
        return Err(bad());
    }
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Canonical text: comments, problem line, one clause per line, goal.
pub fn render(instance: &PsatInstance) -> String {
    let mut out = String::new();
    for c in &instance.comments {
        out.push_str(c);
        out.push('\n');
    }
    let (n, m) = (instance.form.n(), instance.form.m());
    match instance.header {
        Header::Cnf => writeln!(out, "p cnf {n} {m}"),
        Header::Psat => writeln!(out, "p psat {n} {m}"),
        Header::PsatK => writeln!(out, "p psatk {n} {m} {}", instance.k),
    }
    .expect("writing to a String");
    for (clause, (lo, hi)) in instance.form.clauses().iter().zip(instance.target.bounds()) {
        out.push_str(&literals(clause));
        if instance.header != Header::Cnf {
            write!(out, " {lo} {hi}").expect("writing to a String");
        }
        out.push('\n');
    }
    if let Some(goal) = &instance.goal {
        writeln!(out, "g {}", literals(goal)).expect("writing to a String");
    }
    out
}

/// DIMACS literal list with the terminating `0`.
pub fn literals(clause: &Clause) -> String {
    let mut s = String::new();
    for lit in clause.literals() {
        write!(s, "{} ", lit.to_dimacs()).expect("writing to a String");
    }
    s.push('0');
    s
}

/// A goal given on the command line, e.g. `"-1 2"` (the trailing `0` is
/// optional).
pub fn parse_goal(text: &str, n: usize) -> Result<Clause, CliError> {
    let mut tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.last() != Some(&"0") {
        tokens.push("0");
    }
    let (clause, rest) = parse_clause(1, &tokens, n).map_err(|e| CliError::Usage(format!("goal: {e}")))?;
    if !rest.is_empty() {
        return Err(CliError::Usage("goal: unexpected tokens after 0".into()));
    }
    Ok(clause)
}
