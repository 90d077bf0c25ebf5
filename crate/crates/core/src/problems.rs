//! Coherence, PSAT, entailment and the related fiber and kernel questions,
//! each posed as an exact linear program over distributions on assignments.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, lp_feasible_dim, lp_optimize_both, lp_solve, Interval, LpOutcome, LpProblem};
use crate::matrices::{build_k, build_v, build_w, build_z, clause_truth_vector};
use crate::model::{AssignmentSpace, Clause, ConjunctiveForm, Distribution};
use crate::Rational;

/// A point of the unit cube `[0, 1]^n`: a candidate expected assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbabilisticAssignment {
    values: Vec<Rational>,
}

impl ProbabilisticAssignment {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a probabilistic assignment needs at least one variable"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative() || **v > Rational::one()) {
            return Err(Error::invalid(format!("x[{i}] = {v} is outside [0, 1]")));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Per-clause bounds `a_i ≤ (V u)_i ≤ b_i`; an exact target has `a_i = b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClauseProbabilityTarget {
    bounds: Vec<(Rational, Rational)>,
}

impl ClauseProbabilityTarget {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Result<Self> {
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if lo.is_negative() || hi > &Rational::one() || lo > hi {
                return Err(Error::invalid(format!("clause {i}: bounds [{lo}, {hi}] are not within 0 ≤ a ≤ b ≤ 1")));
            }
        }
        Ok(Self { bounds })
    }

    pub fn exact(values: Vec<Rational>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| (v.clone(), v)).collect())
    }

    /// Every clause certainly true.
    pub fn certain(m: usize) -> Self {
        Self { bounds: vec![(Rational::one(), Rational::one()); m] }
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn is_exact(&self) -> bool {
        self.bounds.iter().all(|(lo, hi)| lo == hi)
    }

    pub fn lower(&self) -> Vec<Rational> {
        self.bounds.iter().map(|(lo, _)| lo.clone()).collect()
    }

    pub fn upper(&self) -> Vec<Rational> {
        self.bounds.iter().map(|(_, hi)| hi.clone()).collect()
    }

    pub fn with_bound(&self, lo: Rational, hi: Rational) -> Result<Self> {
        let mut bounds = self.bounds.clone();
        bounds.push((lo, hi));
        Self::new(bounds)
    }
}

/// Coordinates of a kernel direction with respect to the columns of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberVector {
    pub w: Vec<Rational>,
}

impl FiberVector {
    pub fn new(w: Vec<Rational>) -> Self {
        Self { w }
    }

    pub fn zero(space: &AssignmentSpace) -> Self {
        Self { w: vec![Rational::zero(); space.len() - space.n()] }
    }
}

/// Objective of [`opt_psat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// Minimize the expected value of a clause.
    Clause(Clause),
    /// Minimize `z · u` for a raw per-assignment vector.
    Vector(Vec<Rational>),
}

fn to_distribution(space: &AssignmentSpace, outcome: LpOutcome) -> Option<Distribution> {
    match outcome {
        LpOutcome::Optimal { witness, .. } => {
            Some(Distribution::new(*space, witness).expect("LP witnesses lie on the simplex"))
        }
        LpOutcome::Infeasible => None,
    }
}

fn require_x(x: &ProbabilisticAssignment, space: &AssignmentSpace) -> Result<()> {
    if x.n() != space.n() {
        return Err(Error::dims(format!("x has {} components, space has n = {}", x.n(), space.n())));
    }
    Ok(())
}

fn require_target(form: &ConjunctiveForm, target: &ClauseProbabilityTarget) -> Result<()> {
    if target.len() != form.m() {
        return Err(Error::dims(format!("{} clauses but {} targets", form.m(), target.len())));
    }
    Ok(())
}

/// Is `x = W u` for some distribution `u`? Returns the witness if so.
pub fn coherence(x: &ProbabilisticAssignment, space: &AssignmentSpace) -> Result<Option<Distribution>> {
    require_x(x, space)?;
    let p = LpProblem::feasibility(build_w(space), x.values.clone(), x.values.clone())?;
    Ok(to_distribution(space, lp_feasible(&p)))
}

/// Coherence through the bias map: `2x − 1 = Z u`. Boolean case only.
pub fn coherence_via_bias(x: &ProbabilisticAssignment, space: &AssignmentSpace) -> Result<Option<Distribution>> {
    require_x(x, space)?;
    let z = build_z(space)?;
    let two = Rational::from_integer(2.into());
    let target: Vec<Rational> = x.values.iter().map(|v| &two * v - Rational::one()).collect();
    let p = LpProblem::feasibility(z, target.clone(), target)?;
    Ok(to_distribution(space, lp_feasible(&p)))
}

/// Product distribution with marginals `x`; always realizes `x` for `k = 2`.
pub fn coherence_product_witness(x: &ProbabilisticAssignment, space: &AssignmentSpace) -> Result<Distribution> {
    space.require_boolean("the product witness")?;
    require_x(x, space)?;
    let weights = space
        .iter()
        .map(|a| {
            a.digits()
                .zip(&x.values)
                .map(|(d, p)| if d.is_true() { p.clone() } else { Rational::one() - p })
                .product()
        })
        .collect();
    Distribution::new(*space, weights)
}

/// PSAT: a distribution whose expected clause values meet `target`.
pub fn psat(
    form: &ConjunctiveForm,
    target: &ClauseProbabilityTarget,
    space: &AssignmentSpace,
) -> Result<Option<Distribution>> {
    let p = psat_problem(form, target, space, None)?;
    Ok(to_distribution(space, lp_feasible(&p)))
}

/// PSAT with every clause certain, which holds exactly when some
/// assignment gives every clause the value 1.
pub fn sat_via_psat(form: &ConjunctiveForm, space: &AssignmentSpace) -> Result<bool> {
    Ok(psat(form, &ClauseProbabilityTarget::certain(form.m()), space)?.is_some())
}

/// Range of the expected value of `goal` over all distributions meeting
/// `target`.
pub fn entail(
    form: &ConjunctiveForm,
    target: &ClauseProbabilityTarget,
    goal: &Clause,
    space: &AssignmentSpace,
) -> Result<Interval> {
    let z = clause_truth_vector(goal, space)?;
    lp_optimize_both(&psat_problem(form, target, space, Some(z))?)
}

/// Minimizes `z · u` subject to `a ≤ V u ≤ b` on the simplex.
pub fn opt_psat(
    form: &ConjunctiveForm,
    target: &ClauseProbabilityTarget,
    objective: &Objective,
    space: &AssignmentSpace,
) -> Result<LpOutcome> {
    let z = match objective {
        Objective::Clause(c) => clause_truth_vector(c, space)?,
        Objective::Vector(z) => {
            if z.len() != space.len() {
                return Err(Error::dims(format!("objective has {} entries, expected {}", z.len(), space.len())));
            }
            z.clone()
        }
    };
    Ok(lp_solve(&psat_problem(form, target, space, Some(z))?))
}

/// Affine dimension of the set of distributions meeting `target`.
pub fn psat_feasible_set_dim(
    form: &ConjunctiveForm,
    target: &ClauseProbabilityTarget,
    space: &AssignmentSpace,
) -> Result<usize> {
    lp_feasible_dim(&psat_problem(form, target, space, None)?)
}

fn psat_problem(
    form: &ConjunctiveForm,
    target: &ClauseProbabilityTarget,
    space: &AssignmentSpace,
    objective: Option<Vec<Rational>>,
) -> Result<LpProblem> {
    require_target(form, target)?;
    let v = build_v(form, space)?;
    let objective = objective.unwrap_or_else(|| vec![Rational::zero(); space.len()]);
    LpProblem::new(objective, v, target.lower(), target.upper())
}

fn fiber_coordinates(u0: &Distribution, w: &FiberVector) -> Result<Vec<Rational>> {
    let space = u0.space();
    if w.w.len() != space.len() - space.n() {
        return Err(Error::dims(format!(
            "fiber vector has {} entries, expected {}",
            w.w.len(),
            space.len() - space.n()
        )));
    }
    let shift = build_k(space).mul_vec(&w.w)?;
    Ok(u0.weights().iter().zip(shift).map(|(a, b)| a + b).collect())
}

/// Membership of `w` in the fiber polyhedron of `u0`: orthogonal to the
/// column sums of `K` and keeping `u0 + K w` nonnegative.
pub fn fiber_contains(u0: &Distribution, w: &FiberVector) -> Result<bool> {
    let moved = fiber_coordinates(u0, w)?;
    let c = build_k(u0.space()).column_sums();
    let along_c: Rational = c.iter().zip(&w.w).map(|(a, b)| a * b).sum();
    Ok(along_c.is_zero() && moved.iter().all(|v| !v.is_negative()))
}

/// `u0 + K w`, a distribution with the same expected assignment as `u0`.
pub fn fiber_translate(u0: &Distribution, w: &FiberVector) -> Result<Distribution> {
    if !fiber_contains(u0, w)? {
        return Err(Error::Precondition("w lies outside the fiber of u0".into()));
    }
    Distribution::new(*u0.space(), fiber_coordinates(u0, w)?)
}

/// Whether `ker W_n ⊆ ker V`, i.e. whether clause expectations factor
/// linearly through expected assignments.
pub fn kernel_containment(form: &ConjunctiveForm, space: &AssignmentSpace) -> Result<bool> {
    space.require_boolean("kernel containment")?;
    Ok(build_v(form, space)?.mul(&build_k(space))?.is_zero())
}
