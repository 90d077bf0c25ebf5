//! Exact linear programming over the probability simplex.
//!
//! Every problem has the shape
//!
//! ```text
//! minimize    c · u
//! subject to  lower ≤ A u ≤ upper,   Σ u = 1,   u ≥ 0
//! ```
//!
//! The feasible set is compact, so a problem is either infeasible or has a
//! finite optimum attained at a vertex. Solving is a dense two-phase tableau
//! simplex over exact rationals with Bland's rule for anti-cycling.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrices::RationalMatrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    objective: Vec<Rational>,
    rows: RationalMatrix,
    row_lower: Vec<Rational>,
    row_upper: Vec<Rational>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<Rational>,
        rows: RationalMatrix,
        row_lower: Vec<Rational>,
        row_upper: Vec<Rational>,
    ) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(Error::invalid("an LP needs at least one variable"));
        }
        if rows.rows() > 0 && rows.cols() != n {
            return Err(Error::dims(format!("constraint matrix has {} columns, objective has {n}", rows.cols())));
        }
        if row_lower.len() != rows.rows() || row_upper.len() != rows.rows() {
            return Err(Error::dims(format!(
                "{} constraint rows but {} lower and {} upper bounds",
                rows.rows(),
                row_lower.len(),
                row_upper.len()
            )));
        }
        if let Some(i) = (0..rows.rows()).find(|&i| row_lower[i] > row_upper[i]) {
            return Err(Error::invalid(format!(
                "row {i}: lower bound {} exceeds upper bound {}",
                row_lower[i], row_upper[i]
            )));
        }
        let rows = if rows.rows() == 0 { RationalMatrix::zeros(0, n) } else { rows };
        Ok(Self { objective, rows, row_lower, row_upper })
    }

    /// Zero objective.
    pub fn feasibility(rows: RationalMatrix, row_lower: Vec<Rational>, row_upper: Vec<Rational>) -> Result<Self> {
        let n = rows.cols();
        Self::new(vec![Rational::zero(); n], rows, row_lower, row_upper)
    }

    pub fn with_objective(&self, objective: Vec<Rational>) -> Result<Self> {
        Self::new(objective, self.rows.clone(), self.row_lower.clone(), self.row_upper.clone())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn rows(&self) -> &RationalMatrix {
        &self.rows
    }

    pub fn row_lower(&self) -> &[Rational] {
        &self.row_lower
    }

    pub fn row_upper(&self) -> &[Rational] {
        &self.row_upper
    }

    /// Checks a candidate point against every constraint, exactly.
    pub fn is_feasible_point(&self, u: &[Rational]) -> bool {
        if u.len() != self.num_vars() || u.iter().any(Signed::is_negative) {
            return false;
        }
        if !u.iter().sum::<Rational>().is_one() {
            return false;
        }
        let au = self.rows.mul_vec(u).expect("dimensions checked");
        au.iter()
            .zip(self.row_lower.iter().zip(&self.row_upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A vertex optimum: `witness` satisfies every constraint exactly and
    /// `value = objective · witness`.
    Optimal { witness: Vec<Rational>, value: Rational },
    Infeasible,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { witness, .. } => Some(witness),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
        }
    }
}

/// A closed interval `[lo, hi]` of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Exact minimum of the objective, or infeasibility.
pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    let sf = StandardForm::from_problem(p);
    let mut cost = vec![Rational::zero(); sf.cols];
    cost[..p.num_vars()].clone_from_slice(&p.objective);
    match sf.minimize(&cost) {
        None => LpOutcome::Infeasible,
        Some(x) => {
            let witness = x[..p.num_vars()].to_vec();
            let value = dot(&p.objective, &witness);
            LpOutcome::Optimal { witness, value }
        }
    }
}

/// [`lp_solve`] with the objective ignored.
pub fn lp_feasible(p: &LpProblem) -> LpOutcome {
    let sf = StandardForm::from_problem(p);
    match sf.minimize(&vec![Rational::zero(); sf.cols]) {
        None => LpOutcome::Infeasible,
        Some(x) => LpOutcome::Optimal { witness: x[..p.num_vars()].to_vec(), value: Rational::zero() },
    }
}

/// Minimum and maximum of the objective over the feasible set.
pub fn lp_optimize_both(p: &LpProblem) -> Result<Interval> {
    let lo = match lp_solve(p) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Err(Error::Infeasible),
    };
    let negated = p.with_objective(p.objective.iter().map(|c| -c).collect())?;
    let hi = match lp_solve(&negated) {
        LpOutcome::Optimal { value, .. } => -value,
        LpOutcome::Infeasible => unreachable!("feasibility does not depend on the objective"),
    };
    Interval::new(lo, hi)
}

/// Affine dimension of the feasible set.
///
/// Works on the slack-expanded system `A' x = b', x ≥ 0`, which is affinely
/// isomorphic to the original polytope: the coordinates that are not
/// identically zero on the polytope are found by maximizing each one, and the
/// dimension is their count minus the rank of the matching columns of `A'`.
pub fn lp_feasible_dim(p: &LpProblem) -> Result<usize> {
    let sf = StandardForm::from_problem(p);
    let mut positive = vec![false; sf.cols];
    let mark = |x: &[Rational], positive: &mut Vec<bool>| {
        for (j, v) in x.iter().enumerate() {
            if v.is_positive() {
                positive[j] = true;
            }
        }
    };
    let first = sf.minimize(&vec![Rational::zero(); sf.cols]).ok_or(Error::Infeasible)?;
    mark(&first, &mut positive);
    for j in 0..sf.cols {
        if positive[j] {
            continue;
        }
        let mut cost = vec![Rational::zero(); sf.cols];
        cost[j] = -Rational::one();
        let x = sf.minimize(&cost).expect("feasible");
        mark(&x, &mut positive);
    }
    let support: Vec<usize> = (0..sf.cols).filter(|&j| positive[j]).collect();
    let a = RationalMatrix::from_fn(sf.a.len(), support.len(), |i, c| sf.a[i][support[c]].clone());
    Ok(support.len() - a.rank())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// `A x = b, x ≥ 0` with the original variables first, then one slack per
/// inequality side, and the simplex row `Σ u = 1` last.
struct StandardForm {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cols: usize,
}

impl StandardForm {
    fn from_problem(p: &LpProblem) -> Self {
        let n = p.num_vars();
        let slacks: usize = (0..p.rows.rows()).map(|i| if p.row_lower[i] == p.row_upper[i] { 0 } else { 2 }).sum();
        let cols = n + slacks;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut next_slack = n;
        for i in 0..p.rows.rows() {
            let mut base = vec![Rational::zero(); cols];
            base[..n].clone_from_slice(p.rows.row(i));
            if p.row_lower[i] == p.row_upper[i] {
                a.push(base);
                b.push(p.row_lower[i].clone());
            } else {
                let mut lower = base.clone();
                lower[next_slack] = -Rational::one();
                a.push(lower);
                b.push(p.row_lower[i].clone());
                let mut upper = base;
                upper[next_slack + 1] = Rational::one();
                a.push(upper);
                b.push(p.row_upper[i].clone());
                next_slack += 2;
            }
        }
        let mut simplex = vec![Rational::zero(); cols];
        for v in &mut simplex[..n] {
            *v = Rational::one();
        }
        a.push(simplex);
        b.push(Rational::one());
        Self { a, b, cols }
    }

    /// Minimizes `cost · x`; `None` if infeasible.
    fn minimize(&self, cost: &[Rational]) -> Option<Vec<Rational>> {
        let mut t = Tableau::phase_one(self);
        t.run(self.cols);
        if !t.value.is_zero() {
            return None;
        }
        t.expel_artificials(self.cols);
        t.set_cost(cost);
        t.run(self.cols);
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &j) in t.basis.iter().enumerate() {
            x[j] = t.rhs[r].clone();
        }
        Some(x)
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs.
    cost: Vec<Rational>,
    /// Objective value at the current basis.
    value: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    /// One artificial per row, rows sign-normalized so the right-hand side is
    /// nonnegative; the objective is the sum of artificials.
    fn phase_one(sf: &StandardForm) -> Self {
        let rows = sf.a.len();
        let width = sf.cols + rows;
        let mut a = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        for (i, (row, b)) in sf.a.iter().zip(&sf.b).enumerate() {
            let flip = b.is_negative();
            let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            r.resize(width, Rational::zero());
            r[sf.cols + i] = Rational::one();
            a.push(r);
            rhs.push(if flip { -b } else { b.clone() });
        }
        let mut cost = vec![Rational::zero(); width];
        for row in &a {
            for (c, v) in cost[..sf.cols].iter_mut().zip(row) {
                if !v.is_zero() {
                    *c -= v;
                }
            }
        }
        let value = rhs.iter().sum();
        let basis = (sf.cols..width).collect();
        Self { a, rhs, cost, value, basis }
    }

    /// Bland's rule over columns `0..allowed`.
    fn run(&mut self, allowed: usize) {
        while let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.a.len() {
                let coef = &self.a[r][c];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / coef;
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, _) = leave.expect("objective is bounded over the probability simplex");
            self.pivot(r, c);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row: Vec<(usize, Rational)> =
            self.a[r].iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (j, v) in &pivot_row {
                self.a[i][*j] -= &f * v;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (j, v) in &pivot_row {
                self.cost[*j] -= &f * v;
            }
            self.value += &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// After a successful phase one: pivot remaining (zero-valued) artificials
    /// out of the basis, drop rows that turn out redundant, then drop the
    /// artificial columns.
    fn expel_artificials(&mut self, structural: usize) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= structural {
                match (0..structural).find(|&j| !self.a[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.a.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut self.a {
            row.truncate(structural);
        }
        self.cost.truncate(structural);
    }

    fn set_cost(&mut self, cost: &[Rational]) {
        self.cost = cost.to_vec();
        self.value = Rational::zero();
        for (r, &j) in self.basis.iter().enumerate() {
            let cb = &cost[j];
            if cb.is_zero() {
                continue;
            }
            for (c, v) in self.cost.iter_mut().zip(&self.a[r]) {
                if !v.is_zero() {
                    *c -= cb * v;
                }
            }
            self.value += cb * &self.rhs[r];
        }
    }
}
