//! Best-first branch and bound over the exact simplex.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use log::debug;

use super::{simplex_solve, LinearProgram, LpSolution, LpStatus};
use crate::rational::Rational;

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct BnbConfig {
    pub node_limit: usize,
    /// Nodes whose LP bound exceeds this are discarded.
    pub cutoff: Option<Rational>,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig { node_limit: DEFAULT_NODE_LIMIT, cutoff: None }
    }
}

#[derive(Clone, Default)]
struct Bounds(BTreeMap<usize, (Rational, Option<Rational>)>);

impl Bounds {
    fn with_upper(&self, j: usize, u: Rational) -> Bounds {
        let mut b = self.clone();
        b.0.entry(j).or_insert((Rational::zero(), None)).1 = Some(u);
        b
    }

    fn with_lower(&self, j: usize, l: Rational) -> Bounds {
        let mut b = self.clone();
        b.0.entry(j).or_insert((Rational::zero(), None)).0 = l;
        b
    }

    fn empty_box(&self) -> bool {
        self.0.values().any(|(l, u)| u.as_ref().is_some_and(|u| u < l))
    }
}

struct Node {
    bound: Rational,
    path: Vec<u8>,
    bounds: Bounds,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        self.bound.cmp(&o.bound).then_with(|| self.path.cmp(&o.path))
    }
}

/// Lower bounds are shifted out (`x = l + x'`), upper bounds become rows with a fresh slack.
fn restricted(lp: &LinearProgram, bounds: &Bounds) -> LinearProgram {
    let n = lp.num_vars();
    let lower = |j: usize| bounds.0.get(&j).map(|b| b.0.clone()).unwrap_or_default();
    let uppers: Vec<(usize, Rational)> =
        bounds.0.iter().filter_map(|(&j, (l, u))| u.as_ref().map(|u| (j, u - l))).collect();
    let mut obj = lp.objective.clone();
    obj.extend(std::iter::repeat(Rational::zero()).take(uppers.len()));
    let mut out = LinearProgram::new(obj);
    for (row, b) in lp.rows.iter().zip(&lp.rhs) {
        let mut rhs = b.clone();
        for (j, a) in row {
            let l = lower(*j);
            if !l.is_zero() {
                rhs -= &(a * &l);
            }
        }
        out.add_row(row.clone(), rhs);
    }
    for (k, (j, u)) in uppers.into_iter().enumerate() {
        out.add_row(vec![(j, Rational::one()), (n + k, Rational::one())], u);
    }
    out
}

fn solve_node(lp: &LinearProgram, bounds: &Bounds) -> LpSolution {
    let n = lp.num_vars();
    let mut s = simplex_solve(&restricted(lp, bounds));
    if s.status == LpStatus::Optimal {
        s.values.truncate(n);
        for (&j, (l, _)) in &bounds.0 {
            s.values[j] += l;
        }
        s.basis.retain(|&j| j < n);
        s.objective = lp.evaluate(&s.values);
    }
    s
}

/// Minimizes `lp` with the listed variables restricted to integers.
///
/// Branches on the lowest-index fractional variable; nodes are explored in order
/// of their LP bound, ties broken by branching path (down before up).
/// With a cutoff, `Infeasible` means no integral point has objective at most the cutoff.
pub fn branch_and_bound(lp: &LinearProgram, integral: &[usize], cfg: BnbConfig) -> LpSolution {
    let over = |v: &Rational| cfg.cutoff.as_ref().is_some_and(|c| v > c);
    let mut heap = BinaryHeap::new();
    let mut incumbent: Option<LpSolution> = None;
    let mut nodes = 0usize;
    let mut pivots = 0usize;

    let root = solve_node(lp, &Bounds::default());
    nodes += 1;
    pivots += root.pivots;
    match root.status {
        LpStatus::Optimal if over(&root.objective) => {
            return LpSolution { nodes, ..LpSolution::without_point(LpStatus::Infeasible, pivots) };
        }
        LpStatus::Optimal => {}
        status => return LpSolution { nodes, ..LpSolution::without_point(status, pivots) },
    }
    let mut pending = Some((root, Vec::new(), Bounds::default()));

    loop {
        if let Some((sol, path, bounds)) = pending.take() {
            let frac = integral.iter().copied().find(|&j| !sol.values[j].is_integer());
            match frac {
                None => {
                    if incumbent.as_ref().map_or(true, |inc| sol.objective < inc.objective) {
                        debug!("incumbent {} after {nodes} nodes", sol.objective);
                        incumbent = Some(sol);
                    }
                }
                Some(j) => {
                    let v = &sol.values[j];
                    for (dir, child) in [
                        (0u8, bounds.with_upper(j, v.floor())),
                        (1u8, bounds.with_lower(j, v.ceil())),
                    ] {
                        if child.empty_box() {
                            continue;
                        }
                        let mut p = path.clone();
                        p.push(dir);
                        heap.push(Reverse(Node { bound: sol.objective.clone(), path: p, bounds: child }));
                    }
                }
            }
        }
        let Some(Reverse(node)) = heap.pop() else { break };
        if incumbent.as_ref().is_some_and(|inc| node.bound >= inc.objective) {
            break;
        }
        if nodes >= cfg.node_limit {
            let mut out = incumbent.unwrap_or_else(|| LpSolution::without_point(LpStatus::BudgetExhausted, 0));
            out.status = LpStatus::BudgetExhausted;
            out.nodes = nodes;
            out.pivots = pivots;
            return out;
        }
        let sol = solve_node(lp, &node.bounds);
        nodes += 1;
        pivots += sol.pivots;
        if sol.status == LpStatus::Optimal
            && !over(&sol.objective)
            && incumbent.as_ref().map_or(true, |inc| sol.objective < inc.objective)
        {
            pending = Some((sol, node.path, node.bounds));
        }
    }

    match incumbent {
        Some(mut s) => {
            s.nodes = nodes;
            s.pivots = pivots;
            s
        }
        None => LpSolution { nodes, ..LpSolution::without_point(LpStatus::Infeasible, pivots) },
    }
}
