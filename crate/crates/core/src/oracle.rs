//! Brute-force verifiers, algorithmically disjoint from the simplex solver.
//!
//! Satisfiability is checked by walking every assignment; hull membership
//! and optimization by enumerating small column supports and solving the
//! resulting square systems exactly. These are exponential and guarded.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::Interval;
use crate::matrices::{binomial, RationalMatrix};
use crate::model::{eval_clause, AssignmentSpace, ConjunctiveForm};
use crate::{Rational, DEFAULT_ORACLE_COLUMNS};

/// Cap on the number of candidate supports an enumeration may visit.
pub const MAX_SUPPORTS: u128 = 4_000_000;

/// Rows accepted by [`support_enumeration_optimize`].
pub const MAX_OPTIMIZE_ROWS: usize = 4;

/// Does some assignment give every clause the value 1?
pub fn exhaustive_sat(form: &ConjunctiveForm, k: u32) -> Result<bool> {
    let space = AssignmentSpace::with_limit(form.n(), k, DEFAULT_ORACLE_COLUMNS)?;
    Ok((0..space.len()).any(|j| {
        let a = space.assignment(j);
        form.clauses().iter().all(|c| eval_clause(c, &a).is_true())
    }))
}

/// Is `y` a convex combination of the columns of `v`? Returns barycentric
/// weights over all columns when it is.
///
/// Subsets of at most `m + 1` distinct columns are visited by size, then
/// lexicographically; the first one with a unique nonnegative solution of
/// `[V_S; 1] λ = [y; 1]` is accepted.
pub fn hull_membership(v: &RationalMatrix, y: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if y.len() != v.rows() {
        return Err(Error::dims(format!("target has {} entries, matrix has {} rows", y.len(), v.rows())));
    }
    guard_columns(v.cols())?;
    let reps = distinct_columns(v, None);
    let max_size = (v.rows() + 1).min(reps.len());
    guard_work((1..=max_size).map(|s| binomial(reps.len(), s) as u128).sum())?;

    let mut rhs = y.to_vec();
    rhs.push(Rational::one());
    for size in 1..=max_size {
        for subset in reps.iter().copied().combinations(size) {
            let system: Vec<Vec<Rational>> = (0..=v.rows())
                .map(|i| {
                    subset
                        .iter()
                        .map(|&j| if i < v.rows() { v[(i, j)].clone() } else { Rational::one() })
                        .collect()
                })
                .collect();
            if let Some(lambda) = solve_unique(system, rhs.clone()) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    let mut weights = vec![Rational::zero(); v.cols()];
                    for (&j, l) in subset.iter().zip(lambda) {
                        weights[j] = l;
                    }
                    return Ok(Some(weights));
                }
            }
        }
    }
    Ok(None)
}

/// Exact `(min, max)` of `z · u` over `{u ≥ 0, Σu = 1, lower ≤ V u ≤ upper}`
/// by enumerating every basic feasible point.
///
/// Each row is either pinned at one of its bounds or left free; for each
/// choice, every support with at most one more column than the pinned rows
/// is solved. Every vertex of the polytope arises this way.
pub fn support_enumeration_optimize(
    v: &RationalMatrix,
    lower: &[Rational],
    upper: &[Rational],
    z: &[Rational],
) -> Result<Interval> {
    let m = v.rows();
    if lower.len() != m || upper.len() != m || z.len() != v.cols() {
        return Err(Error::dims("bounds or objective do not match the matrix"));
    }
    if let Some(i) = (0..m).find(|&i| lower[i] > upper[i]) {
        return Err(Error::invalid(format!("row {i}: lower bound exceeds upper bound")));
    }
    guard_columns(v.cols())?;
    if m > MAX_OPTIMIZE_ROWS {
        return Err(Error::SizeGuard { what: "oracle rows", actual: m as u128, limit: MAX_OPTIMIZE_ROWS as u128 });
    }
    let reps = distinct_columns(v, Some(z));

    // Per row: the bounds it may be pinned to, plus "free" for ranges.
    let choices: Vec<Vec<Option<Rational>>> = (0..m)
        .map(|i| {
            if lower[i] == upper[i] {
                vec![Some(lower[i].clone())]
            } else {
                vec![Some(lower[i].clone()), Some(upper[i].clone()), None]
            }
        })
        .collect();
    let pin_sets: Vec<Vec<&Option<Rational>>> =
        if m == 0 { vec![vec![]] } else { choices.iter().multi_cartesian_product().collect() };
    let work: u128 = pin_sets
        .iter()
        .map(|pins| {
            let active = pins.iter().filter(|p| p.is_some()).count();
            (1..=(active + 1).min(reps.len())).map(|s| binomial(reps.len(), s) as u128).sum::<u128>()
        })
        .sum();
    guard_work(work)?;

    let mut best: Option<(Rational, Rational)> = None;
    for pins in pin_sets {
        let active: Vec<(usize, &Rational)> =
            pins.iter().enumerate().filter_map(|(i, p)| p.as_ref().map(|b| (i, b))).collect();
        let mut rhs: Vec<Rational> = active.iter().map(|(_, b)| (*b).clone()).collect();
        rhs.push(Rational::one());
        for size in 1..=(active.len() + 1).min(reps.len()) {
            for subset in reps.iter().copied().combinations(size) {
                let system: Vec<Vec<Rational>> = active
                    .iter()
                    .map(|&(i, _)| subset.iter().map(|&j| v[(i, j)].clone()).collect())
                    .chain(std::iter::once(vec![Rational::one(); size]))
                    .collect();
                let Some(lambda) = solve_unique(system, rhs.clone()) else {
                    continue;
                };
                if lambda.iter().any(Signed::is_negative) {
                    continue;
                }
                let in_bounds = (0..m).all(|i| {
                    let row: Rational = subset.iter().zip(&lambda).map(|(&j, l)| &v[(i, j)] * l).sum();
                    lower[i] <= row && row <= upper[i]
                });
                if !in_bounds {
                    continue;
                }
                let value: Rational = subset.iter().zip(&lambda).map(|(&j, l)| &z[j] * l).sum();
                best = Some(match best {
                    None => (value.clone(), value),
                    Some((lo, hi)) => (lo.min(value.clone()), hi.max(value)),
                });
            }
        }
    }
    let (lo, hi) = best.ok_or(Error::Infeasible)?;
    Interval::new(lo, hi)
}

/// Kernel basis of `w` from its reduced row echelon form: one vector per
/// free column.
pub fn kernel_by_elimination(w: &RationalMatrix) -> Result<RationalMatrix> {
    guard_columns(w.cols())?;
    let (r, pivots) = w.rref();
    let free: Vec<usize> = (0..w.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = RationalMatrix::zeros(w.cols(), free.len());
    for (b, &f) in free.iter().enumerate() {
        basis[(f, b)] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, b)] = -r[(row, f)].clone();
        }
    }
    Ok(basis)
}

fn guard_columns(cols: usize) -> Result<()> {
    if cols > DEFAULT_ORACLE_COLUMNS {
        return Err(Error::SizeGuard {
            what: "oracle columns",
            actual: cols as u128,
            limit: DEFAULT_ORACLE_COLUMNS as u128,
        });
    }
    Ok(())
}

fn guard_work(work: u128) -> Result<()> {
    if work > MAX_SUPPORTS {
        return Err(Error::SizeGuard { what: "oracle supports", actual: work, limit: MAX_SUPPORTS });
    }
    Ok(())
}

/// First index of each distinct column (paired with its objective entry, if
/// any). Repeated columns never belong to an affinely independent support.
fn distinct_columns(v: &RationalMatrix, z: Option<&[Rational]>) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    (0..v.cols())
        .filter(|&j| seen.insert((v.column(j), z.map(|z| z[j].clone()))))
        .collect()
}

/// Unique solution of `a x = b` (`a` has at least as many rows as columns),
/// or `None` if the columns are dependent or the system is inconsistent.
fn solve_unique(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for c in 0..cols {
        let p = (c..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        b[c] *= &inv;
        let pivot = a[c].clone();
        for i in 0..rows {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for (x, p) in a[i][c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
            let d = &f * &b[c];
            b[i] -= d;
        }
    }
    if b[cols..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    b.truncate(cols);
    Some(b)
}
