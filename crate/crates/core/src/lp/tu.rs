//! Bounded total-unimodularity check with exact determinant witnesses.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complex::SparseIntMatrix;

pub const DEFAULT_TU_BUDGET: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct TuConfig {
    /// Largest square submatrix enumerated exhaustively.
    pub budget: usize,
    /// Cap on determinants computed by the exhaustive pass.
    pub max_determinants: u64,
    /// Cap on search steps of the cycle pass.
    pub max_cycle_steps: u64,
}

impl Default for TuConfig {
    fn default() -> Self {
        TuConfig { budget: DEFAULT_TU_BUDGET, max_determinants: 5_000_000, max_cycle_steps: 50_000_000 }
    }
}

impl TuConfig {
    pub fn with_budget(budget: usize) -> Self {
        TuConfig { budget, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TuVerdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuReport {
    pub verdict: TuVerdict,
    pub witness: Option<TuWitness>,
    /// Largest size for which every square submatrix was checked.
    pub checked_size: usize,
}

/// Fraction-free Gaussian elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn witness_if_bad(m: &SparseIntMatrix, rows: Vec<usize>, cols: Vec<usize>) -> Option<TuWitness> {
    let d = determinant(&m.submatrix(&rows, &cols));
    (d.abs() > BigInt::one()).then_some(TuWitness { rows, cols, determinant: d })
}

/// Chordless cycle of odd signature in the bipartite row/column graph.
///
/// A chordless cycle through `k` rows is a `k x k` submatrix with two entries
/// per line; its determinant is ±2 exactly when the number of negative entries
/// has parity opposite to `k`. Cycles are enumerated by induced-path search
/// from their least node, shortest lengths first.
fn unbalanced_cycle(m: &SparseIntMatrix, max_steps: u64) -> Option<TuWitness> {
    let r = m.rows();
    let nodes = r + m.cols();
    // adjacency with the sign of the entry
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nodes];
    for (i, j, v) in m.entries() {
        adj[i].push((r + j, v < 0));
        adj[r + j].push((i, v < 0));
    }
    let mut search = CycleSearch { adj: &adj, cnt: vec![0; nodes], path: Vec::new(), steps: 0, max_steps };
    let mut len = 4;
    while len <= 2 * r.min(m.cols()) {
        let mut truncated = false;
        for s in 0..nodes {
            match search.from(s, len) {
                Walk::Found(cycle) => {
                    let mut rows: Vec<usize> = cycle.iter().copied().filter(|&v| v < r).collect();
                    let mut cols: Vec<usize> = cycle.iter().filter(|&&v| v >= r).map(|&v| v - r).collect();
                    rows.sort_unstable();
                    cols.sort_unstable();
                    if let Some(w) = witness_if_bad(m, rows, cols) {
                        return Some(w);
                    }
                }
                Walk::Exhausted => {}
                Walk::Truncated => truncated = true,
                Walk::OutOfSteps => return None,
            }
        }
        if !truncated {
            // no induced path reached the length cap, so no longer cycles exist
            return None;
        }
        len += 2;
    }
    None
}

enum Walk {
    Found(Vec<usize>),
    Exhausted,
    Truncated,
    OutOfSteps,
}

struct CycleSearch<'a> {
    adj: &'a [Vec<(usize, bool)>],
    /// Number of path nodes adjacent to each node.
    cnt: Vec<u32>,
    path: Vec<usize>,
    steps: u64,
    max_steps: u64,
}

impl CycleSearch<'_> {
    fn push(&mut self, v: usize) {
        self.path.push(v);
        for &(u, _) in &self.adj[v] {
            self.cnt[u] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("nonempty path");
        for &(u, _) in &self.adj[v] {
            self.cnt[u] -= 1;
        }
    }

    /// Chordless cycles of exactly `len` nodes whose least node is `s`.
    fn from(&mut self, s: usize, len: usize) -> Walk {
        self.push(s);
        let res = self.extend(s, len, 0);
        self.pop();
        res
    }

    fn extend(&mut self, s: usize, len: usize, parity: u8) -> Walk {
        let last = *self.path.last().expect("nonempty path");
        let t = self.path.len();
        let mut truncated = false;
        for k in 0..self.adj[last].len() {
            let (u, neg) = self.adj[last][k];
            self.steps += 1;
            if self.steps > self.max_steps {
                return Walk::OutOfSteps;
            }
            if u <= s || self.path.contains(&u) {
                continue;
            }
            let to_s = self.adj[u].iter().find(|&&(x, _)| x == s).map(|&(_, n)| n);
            let expected = 1 + to_s.is_some() as u32;
            if t > 1 && self.cnt[u] != expected {
                continue;
            }
            let p = parity ^ neg as u8;
            if let Some(close_neg) = to_s {
                if t > 1 {
                    // rows in the cycle: half its length
                    if t + 1 == len && (p ^ close_neg as u8) as usize != (t + 1) / 2 % 2 {
                        let mut cycle = self.path.clone();
                        cycle.push(u);
                        return Walk::Found(cycle);
                    }
                    continue;
                }
            }
            if t + 1 >= len {
                truncated = true;
                continue;
            }
            self.push(u);
            let res = self.extend(s, len, p);
            self.pop();
            match res {
                Walk::Exhausted => {}
                Walk::Truncated => truncated = true,
                other => return other,
            }
        }
        if truncated {
            Walk::Truncated
        } else {
            Walk::Exhausted
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks subdeterminants of `m`, exhaustively up to `cfg.budget`.
pub fn is_totally_unimodular(m: &SparseIntMatrix, cfg: TuConfig) -> TuReport {
    for (i, j, v) in m.entries() {
        if v.abs() > 1 {
            return TuReport {
                verdict: TuVerdict::No,
                witness: Some(TuWitness { rows: vec![i], cols: vec![j], determinant: BigInt::from(v) }),
                checked_size: 0,
            };
        }
    }
    let full = m.rows().min(m.cols());
    if let Some(w) = unbalanced_cycle(m, cfg.max_cycle_steps) {
        return TuReport { verdict: TuVerdict::No, witness: Some(w), checked_size: 1 };
    }

    let dense = m.to_dense();
    let mut computed = 0u64;
    let mut checked = 1;
    'sizes: for t in 2..=cfg.budget.min(full) {
        let mut rows: Vec<usize> = (0..t).collect();
        loop {
            let mut cols: Vec<usize> = (0..t).collect();
            loop {
                // a zero row makes the determinant vanish
                let live = rows.iter().all(|&i| cols.iter().any(|&j| dense[i][j] != 0));
                if live {
                    computed += 1;
                    if computed > cfg.max_determinants {
                        break 'sizes;
                    }
                    let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| dense[i][j]).collect()).collect();
                    let d = determinant(&sub);
                    if d.abs() > BigInt::one() {
                        return TuReport {
                            verdict: TuVerdict::No,
                            witness: Some(TuWitness { rows, cols, determinant: d }),
                            checked_size: t - 1,
                        };
                    }
                }
                if !next_combination(&mut cols, m.cols()) {
                    break;
                }
            }
            if !next_combination(&mut rows, m.rows()) {
                break;
            }
        }
        checked = t;
    }
    let complete = checked >= full;
    TuReport {
        verdict: if complete { TuVerdict::Yes } else { TuVerdict::Unknown },
        witness: None,
        checked_size: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), BigInt::from(5));
        assert_eq!(determinant(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn two_by_two_witness() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 1], vec![-1, 1]]);
        let r = is_totally_unimodular(&m, TuConfig::default());
        assert_eq!(r.verdict, TuVerdict::No);
        let w = r.witness.unwrap();
        assert_eq!((w.rows, w.cols), (vec![0, 1], vec![0, 1]));
        assert_eq!(w.determinant.abs(), BigInt::from(2));
    }

    #[test]
    fn graph_incidence_is_tu() {
        // triangle plus pendant edge, oriented
        let m = SparseIntMatrix::from_dense(&[
            vec![-1, -1, 0, 0],
            vec![1, 0, -1, 0],
            vec![0, 1, 1, -1],
            vec![0, 0, 0, 1],
        ]);
        assert_eq!(is_totally_unimodular(&m, TuConfig::default()).verdict, TuVerdict::Yes);
    }

    #[test]
    fn small_budget_is_unknown() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(is_totally_unimodular(&m, TuConfig::with_budget(2)).verdict, TuVerdict::Unknown);
    }

    #[test]
    fn large_entry_is_immediate() {
        let m = SparseIntMatrix::from_dense(&[vec![0, 2]]);
        let r = is_totally_unimodular(&m, TuConfig::default());
        assert_eq!(r.verdict, TuVerdict::No);
        assert_eq!(r.witness.unwrap().cols, vec![1]);
    }

    #[test]
    fn long_odd_cycle_is_found_beyond_budget() {
        // 11x11 cycle matrix with all +1: sum 22 = 2 mod 4
        let n = 11;
        let mut d = vec![vec![0; n]; n];
        for i in 0..n {
            d[i][i] = 1;
            d[i][(i + 1) % n] = 1;
        }
        let m = SparseIntMatrix::from_dense(&d);
        let r = is_totally_unimodular(&m, TuConfig::with_budget(3));
        assert_eq!(r.verdict, TuVerdict::No);
        assert_eq!(r.witness.unwrap().determinant, BigInt::from(2));
    }

    fn oracle_tu(d: &[Vec<i64>]) -> bool {
        let (r, c) = (d.len(), d[0].len());
        for rm in 1u32..(1 << r) {
            for cm in 1u32..(1 << c) {
                if rm.count_ones() != cm.count_ones() {
                    continue;
                }
                let rows: Vec<usize> = (0..r).filter(|i| rm >> i & 1 == 1).collect();
                let cols: Vec<usize> = (0..c).filter(|j| cm >> j & 1 == 1).collect();
                let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| d[i][j]).collect()).collect();
                if determinant(&sub).abs() > BigInt::one() {
                    return false;
                }
            }
        }
        true
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-1i64..=1, c), r)
        })
    }

    proptest! {
        #[test]
        fn verdict_matches_exhaustive_oracle_and_is_stable(
            d in small_matrix(),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let m = SparseIntMatrix::from_dense(&d);
            let r = is_totally_unimodular(&m, TuConfig::default());
            let expect = if oracle_tu(&d) { TuVerdict::Yes } else { TuVerdict::No };
            prop_assert_eq!(r.verdict, expect);
            if let Some(w) = &r.witness {
                prop_assert!(determinant(&m.submatrix(&w.rows, &w.cols)).abs() > BigInt::one());
            }

            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..d.len()).collect();
            let mut cp: Vec<usize> = (0..d[0].len()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let shuffled: Vec<Vec<i64>> = rp
                .iter()
                .map(|&i| {
                    let s = if rng.gen_bool(0.5) { -1 } else { 1 };
                    cp.iter().map(|&j| s * d[i][j]).collect()
                })
                .collect();
            let r2 = is_totally_unimodular(&SparseIntMatrix::from_dense(&shuffled), TuConfig::default());
            prop_assert_eq!(r2.verdict, r.verdict);
        }
    }
}
