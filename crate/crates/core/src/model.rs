//! Propositional syntax, assignment enumeration and k-valued truth
//! evaluation.
//!
//! Truth values live in `B_k = {0, 1/(k-1), ..., 1}`. Assignments are
//! enumerated canonically: assignment `j` is the base-`k` expansion of `j`,
//! least significant digit first, so digit `i` is the value of `X_i`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{Rational, DEFAULT_MAX_COLUMNS};

/// A truth value `level / (k - 1)` of a `k`-valued logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruthValue {
    level: u32,
    k: u32,
}

impl TruthValue {
    pub fn new(level: u32, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        if level >= k {
            return Err(Error::invalid(format!("level {level} out of range for k = {k}")));
        }
        Ok(Self { level, k })
    }

    pub fn falsum(k: u32) -> Self {
        Self { level: 0, k }
    }

    pub fn verum(k: u32) -> Self {
        Self { level: k - 1, k }
    }

    /// Numerator over the common denominator `k - 1`.
    pub fn level(self) -> u32 {
        self.level
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn value(self) -> Rational {
        Rational::new(self.level.into(), (self.k - 1).into())
    }

    pub fn is_true(self) -> bool {
        self.level == self.k - 1
    }

    /// `κ ↦ 1 − κ`.
    pub fn negate(self) -> Self {
        Self { level: self.k - 1 - self.level, k: self.k }
    }

    pub fn or(self, other: Self) -> Self {
        debug_assert_eq!(self.k, other.k);
        if other.level > self.level {
            other
        } else {
            self
        }
    }

    pub fn and(self, other: Self) -> Self {
        debug_assert_eq!(self.k, other.k);
        if other.level < self.level {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The set `B_k^n` together with the size cap that governs how large a dense
/// `k^n`-column formulation may get.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AssignmentSpace {
    n: usize,
    k: u32,
    columns: usize,
}

impl AssignmentSpace {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        Self::with_limit(n, k, DEFAULT_MAX_COLUMNS)
    }

    pub fn with_limit(n: usize, k: u32, max_columns: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("at least one variable is required"));
        }
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        let columns = u32::try_from(n)
            .ok()
            .and_then(|n| u128::from(k).checked_pow(n))
            .unwrap_or(u128::MAX);
        if columns > max_columns as u128 {
            return Err(Error::SizeGuard {
                what: "k^n",
                actual: columns,
                limit: max_columns as u128,
            });
        }
        Ok(Self { n, k, columns: columns as usize })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `k^n`.
    pub fn len(&self) -> usize {
        self.columns
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_boolean(&self) -> bool {
        self.k == 2
    }

    pub fn assignment(&self, index: usize) -> Assignment {
        assert!(index < self.columns, "assignment index {index} out of range");
        let k = self.k as usize;
        let mut rest = index;
        let levels = (0..self.n)
            .map(|_| {
                let digit = rest % k;
                rest /= k;
                digit as u32
            })
            .collect();
        Assignment { k: self.k, index, levels }
    }

    pub fn iter(&self) -> impl Iterator<Item = Assignment> + '_ {
        (0..self.columns).map(move |j| self.assignment(j))
    }

    pub(crate) fn require_boolean(&self, what: &str) -> Result<()> {
        if self.k != 2 {
            return Err(Error::invalid(format!("{what} is defined only for k = 2, got k = {}", self.k)));
        }
        Ok(())
    }

    pub(crate) fn require_form(&self, form: &ConjunctiveForm) -> Result<()> {
        if form.n() != self.n {
            return Err(Error::dims(format!(
                "form has {} variables, assignment space has {}",
                form.n(),
                self.n
            )));
        }
        Ok(())
    }
}

/// A point of `B_k^n` with its canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    k: u32,
    index: usize,
    levels: Vec<u32>,
}

impl Assignment {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn digit(&self, variable: usize) -> TruthValue {
        TruthValue { level: self.levels[variable], k: self.k }
    }

    pub fn digits(&self) -> impl DoubleEndedIterator<Item = TruthValue> + ExactSizeIterator + '_ {
        self.levels.iter().map(move |&level| TruthValue { level, k: self.k })
    }

    /// Number of nonzero digits.
    pub fn weight(&self) -> usize {
        self.levels.iter().filter(|&&l| l != 0).count()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.digits().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// All `k^n` assignments in canonical index order.
pub fn enumerate_assignments(space: &AssignmentSpace) -> Vec<Assignment> {
    space.iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(variable: usize) -> Self {
        Self { variable, negated: false }
    }

    pub fn neg(variable: usize) -> Self {
        Self { variable, negated: true }
    }

    /// DIMACS-style signed, 1-based literal.
    pub fn from_dimacs(lit: i64) -> Result<Self> {
        if lit == 0 {
            return Err(Error::invalid("literal 0 is the clause terminator"));
        }
        let variable = usize::try_from(lit.unsigned_abs() - 1)
            .map_err(|_| Error::invalid(format!("literal {lit} out of range")))?;
        Ok(Self { variable, negated: lit < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.variable as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn complement(self) -> Self {
        Self { variable: self.variable, negated: !self.negated }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬X{}", self.variable)
        } else {
            write!(f, "X{}", self.variable)
        }
    }
}

/// A nonempty disjunction of literals. Exact duplicates are dropped;
/// complementary pairs are kept since `X ∨ ¬X` is not constantly true for
/// `k > 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut out: Vec<Literal> = Vec::new();
        for lit in literals {
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        if out.is_empty() {
            return Err(Error::invalid("empty clause"));
        }
        Ok(Self { literals: out })
    }

    pub fn from_dimacs(lits: &[i64]) -> Result<Self> {
        Self::new(lits.iter().map(|&l| Literal::from_dimacs(l)).collect::<Result<Vec<_>>>()?)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn max_variable(&self) -> usize {
        self.literals.iter().map(|l| l.variable).max().unwrap_or(0)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjunctiveForm {
    n: usize,
    clauses: Vec<Clause>,
}

impl ConjunctiveForm {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::invalid("a conjunctive form needs at least one clause"));
        }
        if let Some(c) = clauses.iter().find(|c| c.max_variable() >= n) {
            return Err(Error::invalid(format!(
                "clause ({c}) mentions variable X{} but n = {n}",
                c.max_variable()
            )));
        }
        Ok(Self { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// A copy with `clause` appended.
    pub fn with_clause(&self, clause: Clause) -> Result<Self> {
        let mut clauses = self.clauses.clone();
        clauses.push(clause);
        Self::new(self.n, clauses)
    }
}

impl fmt::Display for ConjunctiveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "({c})")?;
        }
        Ok(())
    }
}

pub fn eval_literal(lit: Literal, a: &Assignment) -> TruthValue {
    let v = a.digit(lit.variable);
    if lit.negated {
        v.negate()
    } else {
        v
    }
}

/// Max over the literal values.
pub fn eval_clause(c: &Clause, a: &Assignment) -> TruthValue {
    c.literals
        .iter()
        .map(|&lit| eval_literal(lit, a))
        .fold(TruthValue::falsum(a.k), TruthValue::or)
}

/// Column `v_σ` of the clause evaluation matrix.
pub fn eval_form(form: &ConjunctiveForm, a: &Assignment) -> Vec<TruthValue> {
    form.clauses.iter().map(|c| eval_clause(c, a)).collect()
}

/// Rounds a probabilistic assignment to classical values; `x_i >= 1/2` maps
/// to true.
pub fn determinize(x: &[Rational]) -> Result<Vec<bool>> {
    let half = Rational::new(1.into(), 2.into());
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            if v < &Rational::zero() || v > &Rational::one() {
                Err(Error::invalid(format!("component {i} = {v} is outside [0, 1]")))
            } else {
                Ok(*v >= half)
            }
        })
        .collect()
}

/// A probability distribution over `B_k^n`: `k^n` nonnegative weights
/// summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    space: AssignmentSpace,
    weights: Vec<Rational>,
}

impl Distribution {
    pub fn new(space: AssignmentSpace, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::dims(format!(
                "distribution has {} weights, expected {}",
                weights.len(),
                space.len()
            )));
        }
        if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::invalid(format!("weight {j} is negative ({w})")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { space, weights })
    }

    pub fn point_mass(space: AssignmentSpace, index: usize) -> Self {
        let mut weights = vec![Rational::zero(); space.len()];
        weights[index] = Rational::one();
        Self { space, weights }
    }

    pub fn uniform(space: AssignmentSpace) -> Self {
        let w = Rational::new(1.into(), space.len().into());
        Self { space, weights: vec![w; space.len()] }
    }

    pub fn space(&self) -> &AssignmentSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    /// Nonzero entries as `(index, weight)` in index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero())
    }
}
