//! Two-phase tableau simplex: largest-coefficient pricing, lexicographic
//! ratio test, Bland's rule as a fallback on long degenerate runs.

use log::trace;

use super::{LinearProgram, LpSolution, LpStatus};
use crate::rational::Rational;

struct Tableau {
    /// Constraint rows over all columns (structural then artificial).
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs per column.
    cost: Vec<Rational>,
    /// Current objective value.
    value: Rational,
    basis: Vec<usize>,
    /// Columns allowed to enter.
    enterable: usize,
    /// Starting basis columns, in row order, for the lexicographic ratio test.
    lex: Vec<usize>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        trace!("pivot row {r} col {j} (leaving {})", self.basis[r]);
        let inv = &Rational::one() / &self.rows[r][j];
        for x in self.rows[r].iter_mut().filter(|x| !x.is_zero()) {
            *x = &*x * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = -&self.rows[i][j];
            let row = &mut self.rows[i];
            for &k in &nz {
                row[k].add_mul(&f, &prow[k]);
            }
            self.rhs[i].add_mul(&f, &prhs);
        }
        if !self.cost[j].is_zero() {
            let f = -&self.cost[j];
            for &k in &nz {
                self.cost[k].add_mul(&f, &prow[k]);
            }
            // value tracks -z in the reduced-cost row convention
            self.value.add_mul(&f, &prhs);
        }
        self.rows[r] = prow;
        self.basis[r] = j;
        self.pivots += 1;
    }

    /// Is row `r` lexicographically smaller than row `s` once both are divided by column `j`?
    fn lex_less(&self, r: usize, s: usize, j: usize) -> bool {
        let (ar, as_) = (&self.rows[r][j], &self.rows[s][j]);
        for &k in &self.lex {
            let lhs = &self.rows[r][k] * as_;
            let rhs = &self.rows[s][k] * ar;
            if lhs != rhs {
                return lhs < rhs;
            }
        }
        self.basis[r] < self.basis[s]
    }

    /// Most negative reduced cost enters; ratio ties are broken lexicographically
    /// over the starting basis columns. A long run of degenerate pivots switches
    /// to Bland's rule until the objective moves.
    fn run(&mut self) -> Outcome {
        let limit = self.rows.len() + self.enterable;
        let mut stalled = 0;
        loop {
            let bland = stalled >= limit;
            let entering = if bland {
                (0..self.enterable).find(|&j| self.cost[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.enterable {
                    if self.cost[j].is_negative() && best.map_or(true, |b| self.cost[j] < self.cost[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv
                            || (ratio == *bv
                                && if bland { self.basis[r] < self.basis[*br] } else { self.lex_less(r, *br, j) })
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    stalled = if ratio.is_zero() { stalled + 1 } else { 0 };
                    self.pivot(r, j)
                }
                None => return Outcome::Unbounded,
            }
        }
    }

    fn set_costs(&mut self, c: &[Rational]) {
        let width = self.cost.len();
        let mut cost: Vec<Rational> = (0..width).map(|j| c.get(j).cloned().unwrap_or_default()).collect();
        let mut value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = c.get(b).cloned().unwrap_or_default();
            if cb.is_zero() {
                continue;
            }
            let f = -&cb;
            for (k, x) in self.rows[r].iter().enumerate() {
                if !x.is_zero() {
                    cost[k].add_mul(&f, x);
                }
            }
            value.add_mul(&f, &self.rhs[r]);
        }
        self.cost = cost;
        self.value = value;
    }
}

/// Exact optimum of `lp` at a basic feasible vertex.
pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    let m = lp.num_rows();

    // rows with negative right-hand side are negated
    let mut dense: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, b) in lp.rows.iter().zip(&lp.rhs) {
        let flip = b.is_negative();
        let mut d = vec![Rational::zero(); n];
        for (j, a) in row {
            d[*j] += a;
        }
        if flip {
            d.iter_mut().for_each(|x| *x = -&*x);
        }
        dense.push(d);
        rhs.push(if flip { -b } else { b.clone() });
    }

    // a column with a single positive entry can start in the basis
    let mut col_count = vec![0usize; n];
    for d in &dense {
        for (j, x) in d.iter().enumerate() {
            if !x.is_zero() {
                col_count[j] += 1;
            }
        }
    }
    let mut basis = vec![usize::MAX; m];
    let mut used = vec![false; n];
    for (r, d) in dense.iter_mut().enumerate() {
        if let Some(j) = (0..n).find(|&j| col_count[j] == 1 && !used[j] && d[j].is_positive()) {
            let inv = &Rational::one() / &d[j];
            d.iter_mut().filter(|x| !x.is_zero()).for_each(|x| *x = &*x * &inv);
            rhs[r] = &rhs[r] * &inv;
            basis[r] = j;
            used[j] = true;
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&r| basis[r] == usize::MAX).collect();
    let width = n + art_rows.len();
    for (k, &r) in art_rows.iter().enumerate() {
        basis[r] = n + k;
    }
    let rows: Vec<Vec<Rational>> = dense
        .into_iter()
        .enumerate()
        .map(|(r, mut d)| {
            d.resize(width, Rational::zero());
            if let Some(k) = art_rows.iter().position(|&x| x == r) {
                d[n + k] = Rational::one();
            }
            d
        })
        .collect();

    let mut t = Tableau {
        rows,
        rhs,
        cost: vec![Rational::zero(); width],
        value: Rational::zero(),
        lex: basis.clone(),
        basis,
        enterable: width,
        pivots: 0,
    };

    if !art_rows.is_empty() {
        let phase1: Vec<Rational> = (0..width).map(|j| if j >= n { Rational::one() } else { Rational::zero() }).collect();
        t.set_costs(&phase1);
        t.run();
        if !t.value.is_zero() {
            return LpSolution::without_point(LpStatus::Infeasible, t.pivots);
        }
        // drive zero-level artificials out, dropping redundant rows
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n {
                match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
    t.enterable = n;
    t.set_costs(&lp.objective);
    if let Outcome::Unbounded = t.run() {
        return LpSolution::without_point(LpStatus::Unbounded, t.pivots);
    }

    let mut values = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        values[b] = t.rhs[r].clone();
    }
    let mut basis = t.basis.clone();
    basis.sort_unstable();
    LpSolution {
        status: LpStatus::Optimal,
        objective: lp.evaluate(&values),
        values,
        basis,
        pivots: t.pivots,
        nodes: 1,
    }
}
