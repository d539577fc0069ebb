//! Optimal homologous and bounding chains as exact linear programs.

use log::debug;

use crate::complex::{Chain, SimplicialComplex, SparseIntMatrix, Subcomplex, WeightAssignment};
use crate::error::{Error, Result};
use crate::homology::{homology, solve_integer, to_i64_vec};
use crate::lp::{branch_and_bound, simplex_solve, BnbConfig, LinearProgram, LpSolution, LpStatus};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Return the LP vertex even when it is fractional.
    LpOnly,
    /// Fall back to branch and bound when the LP vertex is not integral.
    LpThenIlp,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub mode: Mode,
    pub node_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { mode: Mode::LpThenIlp, node_limit: BnbConfig::default().node_limit }
    }
}

impl SolveOptions {
    pub fn lp_only() -> Self {
        SolveOptions { mode: Mode::LpOnly, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Lp,
    Ilp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `c = a + ∂x`.
    Homologous { x: Chain },
    /// `∂c = b`, checked exactly.
    Bounds,
    /// `c = c0 + ∂x` off the subcomplex, where `∂c0 = b`.
    Relative { c0: Chain, x: Chain },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalChain {
    /// Meaningful only when `integral`.
    pub chain: Chain,
    /// Nonzero coefficients of the returned vertex, by simplex id.
    pub values: Vec<(usize, Rational)>,
    pub norm: Rational,
    pub integral: bool,
    pub certificate: Option<Certificate>,
    pub method: Method,
    /// Optimum of the LP relaxation.
    pub relaxation: Rational,
    pub nodes: usize,
    pub pivots: usize,
}

impl OptimalChain {
    /// Decision form: is there a chain of norm at most `threshold`?
    pub fn meets(&self, threshold: &Rational) -> bool {
        self.integral && self.norm <= *threshold
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solved {
    Optimal(OptimalChain),
    Infeasible,
}

impl Solved {
    pub fn optimal(self) -> Option<OptimalChain> {
        match self {
            Solved::Optimal(c) => Some(c),
            Solved::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Solved::Infeasible)
    }
}

/// `min Σ w|c|` s.t. `E c + F x = r`, `x` free; `E = None` is the identity.
struct L1Problem<'a> {
    e: Option<&'a SparseIntMatrix>,
    f: Option<(&'a SparseIntMatrix, i64)>,
    r: &'a [i64],
    w: &'a [Rational],
}

struct Raw {
    c: Vec<Rational>,
    x: Vec<Rational>,
    method: Method,
    relaxation: Rational,
    nodes: usize,
    pivots: usize,
}

impl Raw {
    fn c_integral(&self) -> bool {
        self.c.iter().all(Rational::is_integer)
    }

    fn x_integral(&self) -> bool {
        self.x.iter().all(Rational::is_integer)
    }
}

fn int_vec(v: &[Rational]) -> Result<Vec<i64>> {
    v.iter()
        .map(|q| q.to_i64().ok_or_else(|| Error::Internal(format!("coefficient {q} exceeds i64"))))
        .collect()
}

impl L1Problem<'_> {
    fn program(&self) -> LinearProgram {
        let m = self.w.len();
        let k = self.f.map_or(0, |(f, _)| f.cols());
        let mut obj = Vec::with_capacity(2 * m + 2 * k);
        obj.extend(self.w.iter().cloned());
        obj.extend(self.w.iter().cloned());
        obj.extend(std::iter::repeat(Rational::zero()).take(2 * k));
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.r.len()];
        let mut put = |col: usize, entries: &[(usize, i64)], s: i64| {
            for &(i, v) in entries {
                rows[i].push((col, Rational::from_int(s * v)));
            }
        };
        for j in 0..m {
            match self.e {
                Some(e) => {
                    put(j, e.column(j), 1);
                    put(m + j, e.column(j), -1);
                }
                None => {
                    put(j, &[(j, 1)], 1);
                    put(m + j, &[(j, 1)], -1);
                }
            }
        }
        if let Some((f, s)) = self.f {
            for j in 0..k {
                put(2 * m + j, f.column(j), s);
                put(2 * m + k + j, f.column(j), -s);
            }
        }
        let mut lp = LinearProgram::new(obj);
        for (row, &b) in rows.into_iter().zip(self.r) {
            lp.add_row(row, Rational::from_int(b));
        }
        lp
    }

    fn unpack(&self, s: &LpSolution, method: Method, relaxation: Rational) -> Raw {
        let m = self.w.len();
        let k = self.f.map_or(0, |(f, _)| f.cols());
        let v = &s.values;
        Raw {
            c: (0..m).map(|j| &v[j] - &v[m + j]).collect(),
            x: (0..k).map(|j| &v[2 * m + j] - &v[2 * m + k + j]).collect(),
            method,
            relaxation,
            nodes: s.nodes,
            pivots: s.pivots,
        }
    }

    fn solve(&self, ilp: bool, node_limit: usize) -> Result<Option<Raw>> {
        self.solve_below(ilp, node_limit, None)
    }

    /// With a cutoff, `None` from the integer stage means nothing integral is within it.
    fn solve_below(&self, ilp: bool, node_limit: usize, cutoff: Option<&Rational>) -> Result<Option<Raw>> {
        let lp = self.program();
        debug!("l1 program: {} rows, {} columns", lp.num_rows(), lp.num_vars());
        let s = simplex_solve(&lp);
        match s.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Ok(None),
            other => return Err(Error::Internal(format!("l1 program returned {other:?}"))),
        }
        let raw = self.unpack(&s, Method::Lp, s.objective.clone());
        if !ilp {
            return Ok(Some(raw));
        }
        let all: Vec<usize> = (0..lp.num_vars()).collect();
        let t = branch_and_bound(&lp, &all, BnbConfig { node_limit, cutoff: cutoff.cloned() });
        match t.status {
            LpStatus::Optimal => {
                let mut r = self.unpack(&t, Method::Ilp, s.objective);
                r.pivots += s.pivots;
                Ok(Some(r))
            }
            LpStatus::Infeasible => Ok(None),
            LpStatus::BudgetExhausted => Err(Error::BudgetExhausted { nodes: t.nodes }),
            LpStatus::Unbounded => Err(Error::Internal("integer program unbounded".into())),
        }
    }
}

fn weighted_norm(c: &[Rational], w: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (ci, wi) in c.iter().zip(w) {
        s.add_mul(wi, &ci.abs());
    }
    s
}

fn upper_boundary(x: &SimplicialComplex, n: usize) -> Result<SparseIntMatrix> {
    if n < x.dim() {
        x.boundary_matrix(n + 1)
    } else {
        Ok(SparseIntMatrix::zeros(x.count(n), 0))
    }
}

fn check_weights(x: &SimplicialComplex, w: &WeightAssignment, n: usize) -> Result<()> {
    if w.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.dim() });
    }
    if w.len() != x.count(n) {
        return Err(Error::Precondition(format!(
            "{} weights for {} simplices of dimension {n}",
            w.len(),
            x.count(n)
        )));
    }
    Ok(())
}

fn check_chain(x: &SimplicialComplex, c: &Chain, n: usize) -> Result<()> {
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.dim() });
    }
    if n > x.dim() {
        return Err(Error::DimensionOutOfRange { got: n, lo: 0, hi: x.dim() });
    }
    match c.support().find(|&id| id >= x.count(n)) {
        Some(id) => Err(Error::UnknownSimplexId { dim: n, id }),
        None => Ok(()),
    }
}

/// Minimizes `Σ w|c|` over `c = a + D x`; `ids` maps rows of `D` to simplex ids.
fn homologous_core(
    d: &SparseIntMatrix,
    a: &[i64],
    w: &[Rational],
    opts: &SolveOptions,
    cutoff: Option<&Rational>,
) -> Result<Option<(Raw, Option<Vec<i64>>)>> {
    let p = L1Problem { e: None, f: Some((d, -1)), r: a, w };
    let raw = p.solve(false, opts.node_limit)?.expect("c = a is feasible");
    if cutoff.is_some_and(|t| raw.relaxation > *t) {
        return Ok(None);
    }
    if raw.c_integral() {
        let c = int_vec(&raw.c)?;
        let x = if raw.x_integral() {
            Some(int_vec(&raw.x)?)
        } else {
            let diff: Vec<i64> = c.iter().zip(a).map(|(ci, ai)| ci - ai).collect();
            solve_integer(d, &diff).as_deref().and_then(to_i64_vec)
        };
        if x.is_some() {
            return Ok(Some((raw, x)));
        }
    }
    if opts.mode == Mode::LpOnly {
        return Ok(Some((raw, None)));
    }
    let Some(raw) = p.solve_below(true, opts.node_limit, cutoff)? else {
        return Ok(None);
    };
    let x = int_vec(&raw.x)?;
    Ok(Some((raw, Some(x))))
}

fn finish(
    dim: usize,
    ids: &[usize],
    raw: Raw,
    w: &[Rational],
    certificate: Option<Certificate>,
) -> Result<OptimalChain> {
    let integral = certificate.is_some();
    let chain = if integral {
        Chain::from_pairs(dim, ids.iter().copied().zip(int_vec(&raw.c)?))
    } else {
        Chain::zero(dim)
    };
    Ok(OptimalChain {
        chain,
        values: ids.iter().copied().zip(raw.c.iter().cloned()).filter(|(_, v)| !v.is_zero()).collect(),
        norm: weighted_norm(&raw.c, w),
        integral,
        certificate,
        method: raw.method,
        relaxation: raw.relaxation,
        nodes: raw.nodes,
        pivots: raw.pivots,
    })
}

/// Optimal homologous chain: minimizes the weighted l1 norm over `a + ∂_{n+1} x`.
pub fn solve_ohcp(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    a: &Chain,
    n: usize,
    opts: &SolveOptions,
) -> Result<OptimalChain> {
    check_chain(x, a, n)?;
    check_weights(x, w, n)?;
    let d = upper_boundary(x, n)?;
    let av = a.to_dense(x.count(n));
    let (raw, xs) = homologous_core(&d, &av, w.as_slice(), opts, None)?.expect("no cutoff");
    let cert = xs.map(|xs| Certificate::Homologous { x: Chain::from_dense(n + 1, &xs) });
    let ids: Vec<usize> = (0..x.count(n)).collect();
    finish(n, &ids, raw, w.as_slice(), cert)
}

/// Decides whether some chain homologous to `a` has weighted norm at most `bound`.
///
/// Returns `None` when none does; otherwise an optimal chain. Branch and bound
/// discards every node whose relaxation exceeds `bound`, so a tight bound
/// settles instances that the unrestricted search cannot close.
/// In `LpOnly` mode a `Some` answer may be fractional and only bounds the optimum.
pub fn solve_ohcp_within(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    a: &Chain,
    n: usize,
    bound: &Rational,
    opts: &SolveOptions,
) -> Result<Option<OptimalChain>> {
    check_chain(x, a, n)?;
    check_weights(x, w, n)?;
    let d = upper_boundary(x, n)?;
    let av = a.to_dense(x.count(n));
    let Some((raw, xs)) = homologous_core(&d, &av, w.as_slice(), opts, Some(bound))? else {
        return Ok(None);
    };
    let cert = xs.map(|xs| Certificate::Homologous { x: Chain::from_dense(n + 1, &xs) });
    let ids: Vec<usize> = (0..x.count(n)).collect();
    let out = finish(n, &ids, raw, w.as_slice(), cert)?;
    Ok((!out.integral || out.norm <= *bound).then_some(out))
}

/// Optimal bounding chain: minimizes the weighted l1 norm over `c` with `∂_n c = b`.
pub fn solve_obcp(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    b: &Chain,
    n: usize,
    opts: &SolveOptions,
) -> Result<Solved> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange { got: 0, lo: 1, hi: x.dim() });
    }
    check_chain(x, b, n - 1)?;
    check_weights(x, w, n)?;
    let bd = x.boundary_matrix(n)?;
    let bv = b.to_dense(x.count(n - 1));
    let p = L1Problem { e: Some(&bd), f: None, r: &bv, w: w.as_slice() };
    let Some(mut raw) = p.solve(false, opts.node_limit)? else {
        return Ok(Solved::Infeasible);
    };
    if !raw.c_integral() && opts.mode == Mode::LpThenIlp {
        // branch and bound cannot prove integer infeasibility on unbounded variables
        if solve_integer(&bd, &bv).is_none() {
            debug!("boundary has rational but no integral preimage");
            return Ok(Solved::Infeasible);
        }
        match p.solve(true, opts.node_limit)? {
            Some(r) => raw = r,
            None => return Ok(Solved::Infeasible),
        }
    }
    let cert = if raw.c_integral() {
        let c = int_vec(&raw.c)?;
        if bd.mul_vec(&c) != bv {
            return Err(Error::Internal("bounding chain failed its boundary check".into()));
        }
        Some(Certificate::Bounds)
    } else {
        None
    };
    let ids: Vec<usize> = (0..x.count(n)).collect();
    finish(n, &ids, raw, w.as_slice(), cert).map(Solved::Optimal)
}

/// Optimal relative chain in `C_n(X, A)` whose boundary is homologous to `b` in `A`.
///
/// Finds an integral `c0` with `∂c0 = b`, then solves the homologous-chain
/// problem for the class of `c0` with the relative boundary matrix.
pub fn solve_relative_obcp(
    x: &SimplicialComplex,
    a: &Subcomplex,
    w: &WeightAssignment,
    b: &Chain,
    n: usize,
    opts: &SolveOptions,
) -> Result<Solved> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange { got: 0, lo: 1, hi: x.dim() });
    }
    check_chain(x, b, n - 1)?;
    check_weights(x, w, n)?;
    if let Some(id) = b.support().find(|&id| !a.contains(n - 1, id)) {
        return Err(Error::Precondition(format!(
            "b uses simplex {:?} outside the subcomplex",
            x.simplex(n - 1, id)
        )));
    }
    if n >= 2 && !x.apply_boundary(b)?.is_zero() {
        return Err(Error::Precondition("b is not a cycle".into()));
    }
    let full = x.boundary_matrix(n)?;
    let Some(c0) = solve_integer(&full, &b.to_dense(x.count(n - 1))) else {
        return Ok(Solved::Infeasible);
    };
    let c0 = to_i64_vec(&c0).ok_or_else(|| Error::Internal("c0 exceeds i64".into()))?;
    let c0 = Chain::from_dense(n, &c0);

    let ids: Vec<usize> = (0..x.count(n)).filter(|&j| !a.contains(n, j)).collect();
    let (d, up_ids) = if n < x.dim() {
        let rel = x.relative_boundary_matrix(a, n + 1)?;
        debug_assert_eq!(rel.rows, ids);
        (rel.matrix, rel.cols)
    } else {
        (SparseIntMatrix::zeros(ids.len(), 0), Vec::new())
    };
    let a_rel: Vec<i64> = ids.iter().map(|&j| c0.get(j)).collect();
    let w_rel: Vec<Rational> = ids.iter().map(|&j| w.get(j).clone()).collect();
    let (raw, xs) = homologous_core(&d, &a_rel, &w_rel, opts, None)?.expect("no cutoff");
    let cert = xs.map(|xs| Certificate::Relative {
        c0: c0.clone(),
        x: Chain::from_pairs(n + 1, up_ids.iter().copied().zip(xs)),
    });
    let out = finish(n, &ids, raw, &w_rel, cert)?;
    if out.integral {
        let diff = x.apply_boundary(&out.chain)?.minus(b);
        if diff.support().any(|id| !a.contains(n - 1, id)) {
            return Err(Error::Internal("relative chain has boundary off the subcomplex".into()));
        }
    }
    Ok(Solved::Optimal(out))
}

/// Exact check of a returned chain against its certificate.
pub fn verify_certificate(
    x: &SimplicialComplex,
    a: Option<&Subcomplex>,
    source: &Chain,
    result: &OptimalChain,
) -> Result<bool> {
    let n = result.chain.dim();
    Ok(match &result.certificate {
        None => false,
        Some(Certificate::Bounds) => x.apply_boundary(&result.chain)? == *source,
        Some(Certificate::Homologous { x: up }) => {
            let dx = if up.is_zero() { Chain::zero(n) } else { x.apply_boundary(up)? };
            result.chain == source.plus(&dx)
        }
        Some(Certificate::Relative { c0, x: up }) => {
            let Some(sub) = a else { return Ok(false) };
            let dx = if up.is_zero() { Chain::zero(n) } else { x.apply_boundary(up)? };
            let off = |c: &Chain| Chain::from_pairs(n, c.iter().filter(|(id, _)| !sub.contains(n, **id)).map(|(&i, &v)| (i, v)));
            x.apply_boundary(c0)? == *source && result.chain == off(&c0.plus(&dx))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub ohcp: OptimalChain,
    pub obcp: OptimalChain,
    pub equal_norms: bool,
    /// The homologous-chain optimum bounds `∂a`.
    pub ohcp_feasible_for_obcp: bool,
    /// The bounding-chain optimum is homologous to `a`.
    pub obcp_feasible_for_ohcp: bool,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.equal_norms && self.ohcp_feasible_for_obcp && self.obcp_feasible_for_ohcp
    }
}

/// Solves both problems for `a` and `∂a` when `H_n(X) = 0` and compares them.
pub fn verify_equivalence(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    a: &Chain,
    n: usize,
    opts: &SolveOptions,
) -> Result<EquivalenceReport> {
    let h = homology(x, n)?;
    if !h.is_trivial() {
        return Err(Error::Precondition(format!("H_{n}(X) = {h} is not trivial")));
    }
    let ohcp = solve_ohcp(x, w, a, n, opts)?;
    let b = x.apply_boundary(a)?;
    let obcp = solve_obcp(x, w, &b, n, opts)?
        .optimal()
        .ok_or_else(|| Error::Internal("boundary of a chain reported infeasible".into()))?;
    let ohcp_ok = ohcp.integral && x.apply_boundary(&ohcp.chain)? == b;
    let obcp_ok = obcp.integral && {
        let diff = obcp.chain.minus(a);
        let d = upper_boundary(x, n)?;
        solve_integer(&d, &diff.to_dense(x.count(n))).is_some()
    };
    Ok(EquivalenceReport {
        equal_norms: ohcp.norm == obcp.norm,
        ohcp_feasible_for_obcp: ohcp_ok,
        obcp_feasible_for_ohcp: obcp_ok,
        ohcp,
        obcp,
    })
}

/// `|c|` over all integer chains `c = a + ∂x` with `|c_i| <= bound`, by enumeration.
#[doc(hidden)]
pub fn enumerate_optimum(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    n: usize,
    bound: i64,
    accept: impl Fn(&Chain) -> bool,
) -> Option<Rational> {
    let m = x.count(n);
    let mut c = vec![-bound; m];
    let mut best: Option<Rational> = None;
    loop {
        let chain = Chain::from_dense(n, &c);
        if accept(&chain) {
            let v = chain.l1_norm(w).ok()?;
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return best;
            }
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
            i += 1;
        }
    }
}
