//! Exact rational matrices for the linear maps between distributions,
//! expected assignments and expected clause values.
//!
//! All matrices are stored with columns in canonical assignment order. The
//! Hamming-weight ordering that exposes the `[0 | D | H]` block structure is
//! a separate [`WeightPermutation`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{eval_clause, AssignmentSpace, ConjunctiveForm, Distribution};
use crate::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::dims(format!("row {bad} has {} entries, expected {cols}", rows[bad].len())));
        }
        let n_rows = rows.len();
        Ok(Self { rows: n_rows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (l, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::dims(format!(
                "cannot apply {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `1ᵀ · self`.
    pub fn column_sums(&self) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.cols];
        for i in 0..self.rows {
            for (s, x) in sums.iter_mut().zip(self.row(i)) {
                *s += x;
            }
        }
        sums
    }

    /// Column `p` of the result is column `order[p]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        Self::from_fn(self.rows, order.len(), |i, p| self[(i, order[p])].clone())
    }

    /// Row `p` of the result is row `order[p]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        Self::from_fn(order.len(), self.cols, |p, j| self[(order[p], j)].clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::dims("hstack needs equal row counts"));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] *= &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let delta = &f * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reordering of the `k^n` assignments by Hamming weight.
///
/// `order()[p]` is the canonical index of the assignment at weight-order
/// position `p`. Ties are broken by canonical index, except that in the
/// weight-one class the `n` assignments whose single nonzero digit is
/// `1/(k-1)` come first; for `k = 2` that exception is vacuous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPermutation {
    n: usize,
    k: u32,
    order: Vec<usize>,
}

impl WeightPermutation {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Inverse map: canonical index to weight-order position.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &j) in self.order.iter().enumerate() {
            pos[j] = p;
        }
        pos
    }
}

pub fn weight_permutation(space: &AssignmentSpace) -> WeightPermutation {
    let mut keyed: Vec<(usize, u8, usize)> = space
        .iter()
        .map(|a| {
            let weight = a.weight();
            let late = weight == 1 && a.digits().any(|d| d.level() > 1);
            (weight, u8::from(late), a.index())
        })
        .collect();
    keyed.sort_unstable();
    WeightPermutation { n: space.n(), k: space.k(), order: keyed.into_iter().map(|(_, _, j)| j).collect() }
}

/// `W_nk`: column `j` is the digit vector of assignment `j`.
pub fn build_w(space: &AssignmentSpace) -> RationalMatrix {
    let mut w = RationalMatrix::zeros(space.n(), space.len());
    for a in space.iter() {
        for (i, d) in a.digits().enumerate() {
            if d.level() != 0 {
                w[(i, a.index())] = d.value();
            }
        }
    }
    w
}

/// `Z_n = 2 W_n − 1`, Boolean case only.
pub fn build_z(space: &AssignmentSpace) -> Result<RationalMatrix> {
    space.require_boolean("Z_n")?;
    let w = build_w(space);
    let two = Rational::from_integer(2.into());
    Ok(RationalMatrix::from_fn(w.rows(), w.cols(), |i, j| &two * &w[(i, j)] - Rational::one()))
}

/// Generator of `ker W_nk`, a `k^n × (k^n − n)` matrix.
///
/// In weight order the columns are `e_0` followed by `[−H; I]` stacked under
/// the zero row, all scaled by `1/(k−1)`; rows are returned in canonical
/// order.
pub fn build_k(space: &AssignmentSpace) -> RationalMatrix {
    let n = space.n();
    let total = space.len();
    let perm = weight_permutation(space);
    let order = perm.order();
    let scale = Rational::new(1.into(), (space.k() - 1).into());
    let mut k = RationalMatrix::zeros(total, total - n);
    k[(order[0], 0)] = scale.clone();
    for c in 1..total - n {
        let j = order[n + c];
        let a = space.assignment(j);
        k[(j, c)] = scale.clone();
        for (i, d) in a.digits().enumerate() {
            if d.level() != 0 {
                k[(order[1 + i], c)] = -Rational::from_integer(d.level().into()) * &scale;
            }
        }
    }
    k
}

/// Closed form of the column sums of `K_n`: `[1]` followed by `−i` repeated
/// `C(n, i+1)` times for `i = 1..n−1`.
pub fn c_vector(space: &AssignmentSpace) -> Result<Vec<Rational>> {
    space.require_boolean("the closed-form c_n")?;
    let n = space.n();
    let mut c = Vec::with_capacity(space.len() - n);
    c.push(Rational::one());
    for i in 1..n {
        let copies = binomial(n, i + 1);
        c.extend(std::iter::repeat_n(Rational::from_integer((-(i as i64)).into()), copies));
    }
    Ok(c)
}

/// `1ᵀ K_nk` for any `k`.
pub fn c_vector_general(space: &AssignmentSpace) -> Vec<Rational> {
    build_k(space).column_sums()
}

/// Clause evaluation matrix `V`: entry `(i, j)` is the value of clause `i`
/// under assignment `j`.
pub fn build_v(form: &ConjunctiveForm, space: &AssignmentSpace) -> Result<RationalMatrix> {
    space.require_form(form)?;
    let mut v = RationalMatrix::zeros(form.m(), space.len());
    for a in crate::model::enumerate_assignments(space) {
        for (i, c) in form.clauses().iter().enumerate() {
            let t = eval_clause(c, &a);
            if t.level() != 0 {
                v[(i, a.index())] = t.value();
            }
        }
    }
    Ok(v)
}

/// Truth vector of a single clause over all assignments.
pub fn clause_truth_vector(clause: &crate::model::Clause, space: &AssignmentSpace) -> Result<Vec<Rational>> {
    if clause.max_variable() >= space.n() {
        return Err(Error::dims(format!("clause ({clause}) exceeds n = {}", space.n())));
    }
    Ok(space.iter().map(|a| eval_clause(clause, &a).value()).collect())
}

/// `Z_n u`: per variable, probability of true minus probability of false.
pub fn expected_bias(u: &Distribution) -> Result<Vec<Rational>> {
    build_z(u.space())?.mul_vec(u.weights())
}

/// `W_nk u`.
pub fn expected_assignment(u: &Distribution) -> Vec<Rational> {
    build_w(u.space()).mul_vec(u.weights()).expect("distribution matches its space")
}

pub(crate) fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
