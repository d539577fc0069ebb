//! Exact rational linear and integer programming.
//!
//! Programs are in equality standard form: minimize `c·x` subject to `A x = b`,
//! `x >= 0`. Everything is solved over the rationals, so integrality of a
//! returned vertex is a fact rather than a tolerance judgement.

mod bnb;
mod simplex;
mod tu;

pub use bnb::{branch_and_bound, BnbConfig, DEFAULT_NODE_LIMIT};
pub use simplex::simplex_solve;
pub use tu::{is_totally_unimodular, determinant, TuConfig, TuReport, TuVerdict, TuWitness, DEFAULT_TU_BUDGET};

use crate::rational::Rational;

/// `min c·x` s.t. `A x = b`, `x >= 0`, with `A` stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        LinearProgram { objective, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends the constraint `Σ coef·x_var = rhs`.
    pub fn add_row(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) {
        debug_assert!(terms.iter().all(|(j, _)| *j < self.num_vars()));
        self.rows.push(terms);
        self.rhs.push(rhs);
    }

    /// `A x - b` for a candidate point.
    pub fn residual(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut s = -b;
                for (j, a) in row {
                    s.add_mul(a, &x[*j]);
                }
                s
            })
            .collect()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.residual(x).iter().all(Rational::is_zero)
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (c, v) in self.objective.iter().zip(x) {
            s.add_mul(c, v);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Branch and bound hit its node limit before proving optimality.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Basic columns at the returned vertex.
    pub basis: Vec<usize>,
    /// Simplex pivots (summed over nodes for branch and bound).
    pub pivots: usize,
    /// Branch-and-bound nodes solved; 1 for a plain simplex solve.
    pub nodes: usize,
}

impl LpSolution {
    pub(crate) fn without_point(status: LpStatus, pivots: usize) -> Self {
        LpSolution {
            status,
            values: Vec::new(),
            objective: Rational::zero(),
            basis: Vec::new(),
            pivots,
            nodes: 1,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Whether every listed variable takes an integer value.
    pub fn is_integral_on(&self, vars: impl IntoIterator<Item = usize>) -> bool {
        vars.into_iter().all(|j| self.values[j].is_integer())
    }
}
