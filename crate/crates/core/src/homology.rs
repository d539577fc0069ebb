//! Integer linear algebra: Smith normal form, homology groups, integer linear
//! systems and the longitude of a knot exterior.
//!
//! Elimination first runs on `i64` with checked arithmetic and restarts on
//! `BigInt` if any intermediate overflows, so results are always exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{Chain, SimplicialComplex, SparseIntMatrix, Subcomplex};
use crate::error::{Error, Result};

type Dense<T> = Vec<Vec<T>>;

trait SnfInt: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn negated(&self) -> Option<Self>;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    /// Truncating quotient.
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, n: &Self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl SnfInt for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, n: &Self) -> bool {
        n % self == 0
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, n: &Self) -> bool {
        (n % self).is_zero()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// `D = U * M * V` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain. `u_inv` is the inverse of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: Dense<BigInt>,
    pub u_inv: Dense<BigInt>,
    pub v: Dense<BigInt>,
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// `D` as a dense matrix.
    pub fn d_matrix(&self) -> Dense<BigInt> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, x) in self.diagonal.iter().enumerate() {
            d[i][i] = x.clone();
        }
        d
    }
}

struct Work<T> {
    a: Dense<T>,
    u: Option<(Dense<T>, Dense<T>)>,
    v: Option<Dense<T>>,
}

impl<T: SnfInt> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap(i, j);
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Option<()> {
        sub_row(&mut self.a, i, t, q)?;
        if let Some((u, ui)) = &mut self.u {
            sub_row(u, i, t, q)?;
            // inverse: col_t += q * col_i
            for row in ui.iter_mut() {
                row[t] = row[t].sub_mul(&q.negated()?, &row[i])?;
            }
        }
        Some(())
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Option<()> {
        for row in self.a.iter_mut() {
            if !row[t].is_nil() {
                row[j] = row[j].sub_mul(q, &row[t])?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[t].is_nil() {
                    row[j] = row[j].sub_mul(q, &row[t])?;
                }
            }
        }
        Some(())
    }

    fn negate_row(&mut self, t: usize) -> Option<()> {
        for x in self.a[t].iter_mut() {
            *x = x.negated()?;
        }
        if let Some((u, ui)) = &mut self.u {
            for x in u[t].iter_mut() {
                *x = x.negated()?;
            }
            for row in ui.iter_mut() {
                row[t] = row[t].negated()?;
            }
        }
        Some(())
    }
}

fn sub_row<T: SnfInt>(a: &mut Dense<T>, i: usize, t: usize, q: &T) -> Option<()> {
    let (ri, rt) = if i < t {
        let (lo, hi) = a.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(i);
        (&mut hi[0], &lo[t])
    };
    for (x, y) in ri.iter_mut().zip(rt.iter()) {
        if !y.is_nil() {
            *x = x.sub_mul(q, y)?;
        }
    }
    Some(())
}

fn identity<T: SnfInt>(n: usize) -> Dense<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::unit() } else { T::nil() }).collect()).collect()
}

/// Smallest-magnitude nonzero entry in the block `[t.., t..]`; ties go to the
/// lowest row, then column.
fn min_pivot<T: SnfInt>(a: &Dense<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_nil() {
                continue;
            }
            match best {
                Some((bi, bj)) if x.cmp_abs(&a[bi][bj]) != Ordering::Less => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn run_snf<T: SnfInt>(m: &SparseIntMatrix, track: bool) -> Option<(Work<T>, Vec<T>)> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![vec![T::nil(); cols]; rows];
    for (i, j, v) in m.entries() {
        a[i][j] = T::from_i64(v);
    }
    let mut w = Work {
        a,
        u: track.then(|| (identity(rows), identity(rows))),
        v: track.then(|| identity(cols)),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        let Some((pi, pj)) = min_pivot(&w.a, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_nil() {
                    let q = w.a[i][t].quot(&w.a[t][t]);
                    w.row_sub(i, t, &q)?;
                    clean &= w.a[i][t].is_nil();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_nil() {
                    let q = w.a[t][j].quot(&w.a[t][t]);
                    w.col_sub(j, t, &q)?;
                    clean &= w.a[t][j].is_nil();
                }
            }
            if !clean {
                // a remainder smaller than the pivot is left in row or column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_nil() && w.a[i][t].cmp_abs(&w.a[best.0][best.1]) == Ordering::Less {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_nil() && w.a[t][j].cmp_abs(&w.a[best.0][best.1]) == Ordering::Less {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // divisibility: fold an offending row into row t and repeat
            let p = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !p.divides(&w.a[i][j])));
            match bad {
                Some(i) => {
                    let minus_one = T::unit().negated()?;
                    w.row_sub(t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if w.a[t][t].is_neg() {
            w.negate_row(t)?;
        }
    }
    let diag = (0..steps).map(|i| w.a[i][i].clone()).collect();
    Some((w, diag))
}

fn to_big_dense<T: SnfInt>(d: Dense<T>) -> Dense<BigInt> {
    d.into_iter().map(|r| r.iter().map(SnfInt::to_big).collect()).collect()
}

/// Full Smith decomposition with transforms.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithDecomposition {
    let pack = |u: Option<(Dense<BigInt>, Dense<BigInt>)>, v: Option<Dense<BigInt>>, d| {
        let (u, u_inv) = u.expect("tracked");
        SmithDecomposition { u, u_inv, v: v.expect("tracked"), diagonal: d, rows: m.rows(), cols: m.cols() }
    };
    if let Some((w, d)) = run_snf::<i64>(m, true) {
        let u = w.u.map(|(u, ui)| (to_big_dense(u), to_big_dense(ui)));
        return pack(u, w.v.map(to_big_dense), d.iter().map(SnfInt::to_big).collect());
    }
    let (w, d) = run_snf::<BigInt>(m, true).expect("bigint elimination cannot overflow");
    pack(w.u, w.v, d)
}

/// Diagonal of the Smith form only (no transforms), cheaper for large matrices.
pub fn invariant_factors(m: &SparseIntMatrix) -> Vec<BigInt> {
    if let Some((_, d)) = run_snf::<i64>(m, false) {
        return d.iter().map(SnfInt::to_big).collect();
    }
    run_snf::<BigInt>(m, false).expect("bigint elimination cannot overflow").1
}

/// Betti number plus torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 { "Z".into() } else { format!("Z^{}", self.betti) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn rank_of(x: &SimplicialComplex, n: usize) -> (usize, Vec<BigInt>) {
    if n == 0 || n > x.dim() || x.count(n) == 0 {
        return (0, Vec::new());
    }
    let d = invariant_factors(&x.boundary_matrix(n).expect("in range"));
    let nz: Vec<BigInt> = d.into_iter().filter(|v| !v.is_zero()).collect();
    (nz.len(), nz)
}

/// `H_n(X; Z)`.
pub fn homology(x: &SimplicialComplex, n: usize) -> Result<HomologyGroup> {
    if n > x.dim() {
        return Err(Error::DimensionOutOfRange { got: n, lo: 0, hi: x.dim() });
    }
    let (rank_n, _) = rank_of(x, n);
    let (rank_up, factors) = rank_of(x, n + 1);
    let betti = x.count(n) - rank_n - rank_up;
    let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
    Ok(HomologyGroup { betti, torsion })
}

/// Some integer `x` with `M x = b`, or `None` when no integer solution exists.
pub fn solve_integer(m: &SparseIntMatrix, b: &[i64]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let snf = smith_normal_form(m);
    solve_with(&snf, b)
}

fn solve_with(snf: &SmithDecomposition, b: &[i64]) -> Option<Vec<BigInt>> {
    let ub: Vec<BigInt> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(u, &bi)| u * bi).sum())
        .collect();
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); snf.cols];
    for (i, val) in ub.iter().enumerate() {
        if i < r {
            let (q, rem) = val.div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(snf.v.iter().map(|row| row.iter().zip(&y).map(|(v, yi)| v * yi).sum()).collect())
}

/// Converts a `BigInt` solution to `i64`s when every entry fits.
pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Basis of the integer kernel of `m`, as columns of `V` past the rank.
pub fn integer_kernel(m: &SparseIntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..snf.cols).map(|j| snf.v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Cycles representing a basis of the free part of `H_n(X)`.
pub fn free_generators(x: &SimplicialComplex, n: usize) -> Result<Vec<Chain>> {
    if n > x.dim() {
        return Err(Error::DimensionOutOfRange { got: n, lo: 0, hi: x.dim() });
    }
    let len = x.count(n);
    // basis of the cycle lattice Z_n
    let cycles: Vec<Vec<BigInt>> = if n == 0 {
        (0..len).map(|i| unit(len, i)).collect()
    } else {
        integer_kernel(&x.boundary_matrix(n)?)
    };
    let k = cycles.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    // express the boundaries B_n in the cycle basis, then diagonalize
    let cycle_mat = dense_to_sparse(&transpose(&cycles), len, k)?;
    let mut coeff_cols = Vec::new();
    if n < x.dim() {
        let up = x.boundary_matrix(n + 1)?;
        let snf_c = smith_normal_form(&cycle_mat);
        for j in 0..up.cols() {
            let mut col = vec![0i64; len];
            for &(i, v) in up.column(j) {
                col[i] = v;
            }
            let coeffs = solve_with(&snf_c, &col)
                .ok_or_else(|| Error::Internal("boundary outside cycle lattice".into()))?;
            coeff_cols.push(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.to_i64().map(|v| (i, v)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Internal("coefficient overflow".into()))?,
            );
        }
    }
    let rel = SparseIntMatrix::from_columns(k, coeff_cols);
    let snf = smith_normal_form(&rel);
    let r = snf.rank();
    // generators are the columns of (cycle basis) * U^{-1} beyond the rank
    let mut gens = Vec::new();
    for col in r..k {
        let mut chain = vec![BigInt::zero(); len];
        for (row, ui) in snf.u_inv.iter().enumerate() {
            if !ui[col].is_zero() {
                for (s, c) in cycles[row].iter().enumerate() {
                    chain[s] += c * &ui[col];
                }
            }
        }
        let dense = to_i64_vec(&chain).ok_or_else(|| Error::Internal("generator overflow".into()))?;
        gens.push(Chain::from_dense(n, &dense));
    }
    Ok(gens)
}

fn unit(len: usize, i: usize) -> Vec<BigInt> {
    (0..len).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

fn transpose(cols: &[Vec<BigInt>]) -> Dense<BigInt> {
    let rows = cols.first().map_or(0, Vec::len);
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn dense_to_sparse(d: &Dense<BigInt>, rows: usize, cols: usize) -> Result<SparseIntMatrix> {
    let mut entries = Vec::new();
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                let v = v.to_i64().ok_or_else(|| Error::Internal("entry overflow".into()))?;
                entries.push((i, j, v));
            }
        }
    }
    Ok(SparseIntMatrix::from_entries(rows, cols, &entries))
}

/// A 1-cycle on `boundary` generating the kernel of `H_1(boundary) -> H_1(M)`.
///
/// The cycle is the lift produced by the Smith decomposition; callers wanting
/// a short embedded representative post-process it.
pub fn longitude(m: &SimplicialComplex, boundary: &Subcomplex) -> Result<Chain> {
    let (b, maps) = boundary.to_complex(m)?;
    if b.dim() < 2 {
        return Err(Error::Longitude("boundary has no triangles".into()));
    }
    let h1 = homology(&b, 1)?;
    if h1.betti != 2 || !h1.torsion.is_empty() {
        return Err(Error::Longitude(format!("H_1 of the boundary is {h1}, expected Z^2")));
    }
    let gens = free_generators(&b, 1)?;
    let to_m = |c: &Chain| Chain::from_pairs(1, c.iter().map(|(&i, &v)| (maps[1][i], v)));
    let lifted: Vec<Chain> = gens.iter().map(to_m).collect();

    // kernel of [d2 | -g1 | -g2]; its last two coordinates span the kernel lattice
    let d2 = m.boundary_matrix(2)?;
    let t = d2.cols();
    let mut cols: Vec<Vec<(usize, i64)>> = (0..t).map(|j| d2.column(j).to_vec()).collect();
    for g in &lifted {
        cols.push(g.iter().map(|(&i, &v)| (i, -v)).collect());
    }
    let aug = SparseIntMatrix::from_columns(m.count(1), cols);
    let kernel = integer_kernel(&aug);
    let pairs: Vec<(BigInt, BigInt)> = kernel
        .iter()
        .map(|v| (v[t].clone(), v[t + 1].clone()))
        .filter(|(p, q)| !p.is_zero() || !q.is_zero())
        .collect();
    let Some((p0, q0)) = pairs.first().cloned() else {
        return Err(Error::Longitude("kernel of H_1(boundary) -> H_1(M) is trivial".into()));
    };
    let g = p0.gcd(&q0);
    let (dir_p, dir_q) = (&p0 / &g, &q0 / &g);
    let mut mult = BigInt::zero();
    for (p, q) in &pairs {
        // every kernel vector must be parallel to the first for rank one
        if p * &dir_q != q * &dir_p {
            return Err(Error::Longitude("kernel of H_1(boundary) -> H_1(M) has rank 2".into()));
        }
        let t = if !dir_p.is_zero() { p / &dir_p } else { q / &dir_q };
        mult = mult.gcd(&t);
    }
    let (mut p, mut q) = (&dir_p * &mult, &dir_q * &mult);
    if p.is_negative() || (p.is_zero() && q.is_negative()) {
        p = -p;
        q = -q;
    }
    let p = p.to_i64().ok_or_else(|| Error::Internal("longitude overflow".into()))?;
    let q = q.to_i64().ok_or_else(|| Error::Internal("longitude overflow".into()))?;
    let lambda = lifted[0].scaled(p).plus(&lifted[1].scaled(q));
    if lambda.is_zero() {
        return Err(Error::Longitude("longitude is null".into()));
    }
    Ok(lambda)
}
