//! Probabilistic satisfiability through linear maps over the probability
//! simplex.
//!
//! Distributions over the `k^n` assignments of `n` propositional variables
//! are vectors of exact rationals. Expected variable values, expected clause
//! values and every decision problem built on them (coherence, PSAT,
//! entailment intervals) are linear programs over those vectors, solved with
//! an exact two-phase simplex. The [`oracle`] module carries independent
//! brute-force verifiers for all of them.

pub mod error;
pub mod lp;
pub mod matrices;
pub mod model;
pub mod oracle;
pub mod problems;

pub use error::{Error, Result};
pub use lp::{lp_feasible, lp_feasible_dim, lp_optimize_both, lp_solve, Interval, LpOutcome, LpProblem};
pub use matrices::{RationalMatrix, WeightPermutation};
pub use model::{
    determinize, enumerate_assignments, eval_clause, eval_form, eval_literal, Assignment,
    AssignmentSpace, Clause, ConjunctiveForm, Distribution, Literal, TruthValue,
};
pub use problems::{ClauseProbabilityTarget, FiberVector, Objective, ProbabilisticAssignment};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Parses `"p/q"` or an integer into a [`Rational`]. Intended for tests and
/// literals; panics on malformed input.
pub fn q(text: &str) -> Rational {
    text.parse().unwrap_or_else(|_| panic!("bad rational literal {text:?}"))
}

/// Default cap on `k^n` for solver paths.
pub const DEFAULT_MAX_COLUMNS: usize = 1 << 16;

/// Default cap on `k^n` for the brute-force oracles.
pub const DEFAULT_ORACLE_COLUMNS: usize = 1 << 12;
