//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one line whether it passes or not.

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use homchain::complex::check_manifold;
use homchain::desingularize::{desingularize_1, desingularize_2, extract_embedded_path};
use homchain::gadgets::*;
use homchain::homology::{homology, solve_integer};
use homchain::lp::{is_totally_unimodular, TuConfig, TuVerdict};
use homchain::solver::{
    solve_obcp, solve_ohcp, solve_ohcp_within, solve_relative_obcp, verify_equivalence, OptimalChain,
    SolveOptions, Solved,
};
use homchain::{Chain, Rational, SimplicialComplex, WeightAssignment};
use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Boundary of a chain computed from vertex lists, independent of the library's matrices.
fn boundary(x: &SimplicialComplex, c: &Chain) -> Chain {
    let mut out = Chain::zero(c.dim().saturating_sub(1));
    for (&id, &v) in c.iter() {
        let s = x.simplex(c.dim(), id);
        for i in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
            let f = x.id_of(&face).expect("face present");
            out.add(f, if i % 2 == 0 { v } else { -v });
        }
    }
    out
}

fn weighted(c: &Chain, w: &WeightAssignment) -> Rational {
    c.iter().fold(Rational::zero(), |acc, (&i, &v)| acc + w.get(i).clone() * Rational::from(v.abs()))
}

// ---------------------------------------------------------------- 1-in-3 SAT sweep

fn random_sat(rng: &mut ChaCha8Rng) -> SatInstance {
    let n = rng.gen_range(1..=5usize);
    let m = if n < 2 { 0 } else { rng.gen_range(0..=5usize) };
    let clauses = (0..m)
        .map(|_| {
            let idx = sample(rng, 2 * n, 3);
            let lit = |i: usize| if i % 2 == 1 { Literal::neg(i / 2) } else { Literal::pos(i / 2) };
            [lit(idx.index(0)), lit(idx.index(1)), lit(idx.index(2))]
        })
        .collect();
    SatInstance::new(n, clauses).unwrap()
}

fn sat_sweep() -> Vec<SatInstance> {
    let mut v = vec![
        SatInstance::new(1, vec![]).unwrap(),
        SatInstance::parse("2 -2 -1\n2 3 -3\n").unwrap(),
        SatInstance::parse("1 -1 2\n1 -1 -2\n").unwrap(),
        SatInstance::parse("1 2 3\n-1 -2 -3\n").unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    while v.len() < 56 {
        v.push(random_sat(&mut rng));
    }
    v
}

/// `1 + 5n + 5m + |k|_1 + 5 sum over clauses of |k| on its literals`.
fn eq1_norm(sat: &SatInstance, k: &[i64]) -> Rational {
    let (n, m) = (sat.num_vars() as i64, sat.clauses().len() as i64);
    let kv: i64 = k.iter().map(|v| v.abs()).sum();
    let kc: i64 = sat.clauses().iter().flat_map(|c| c.iter().map(|l| k[l.index()].abs())).sum();
    Rational::from(1 + 5 * n + 5 * m + kv + 5 * kc)
}

// ---------------------------------------------------------------- exhaustive oracle

/// Least weighted norm over integer chains `c` with `|c_i| <= bound`, `∂c = b`
/// and `keep(c)`, by depth-first enumeration with exact row checks.
fn enumerate(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    n: usize,
    b: &Chain,
    bound: i64,
    keep: &dyn Fn(&Chain) -> bool,
) -> Option<Rational> {
    let m = x.count(n);
    let rows = if n == 0 { 0 } else { x.count(n - 1) };
    let mut col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m];
    let mut last = vec![None; rows];
    for (j, c) in col.iter_mut().enumerate() {
        let bd = boundary(x, &Chain::from_pairs(n, [(j, 1)]));
        for (&i, &v) in bd.iter() {
            c.push((i, v));
            last[i] = Some(j);
        }
    }
    let closes: Vec<Vec<usize>> =
        (0..m).map(|j| (0..rows).filter(|&i| last[i] == Some(j)).collect()).collect();
    let target: Vec<i64> = (0..rows).map(|i| b.get(i)).collect();
    if (0..rows).any(|i| last[i].is_none() && target[i] != 0) {
        return None;
    }
    struct St<'a> {
        col: &'a [Vec<(usize, i64)>],
        closes: &'a [Vec<usize>],
        target: &'a [i64],
        w: &'a WeightAssignment,
        bound: i64,
        acc: Vec<i64>,
        c: Vec<i64>,
        best: Option<Rational>,
        keep: &'a dyn Fn(&Chain) -> bool,
        n: usize,
    }
    fn go(s: &mut St, j: usize, norm: Rational) {
        if s.best.as_ref().is_some_and(|b| norm > *b) {
            return;
        }
        if j == s.c.len() {
            let chain = Chain::from_dense(s.n, &s.c);
            if (s.keep)(&chain) {
                s.best = Some(norm);
            }
            return;
        }
        for v in -s.bound..=s.bound {
            for &(i, e) in &s.col[j] {
                s.acc[i] += e * v;
            }
            if s.closes[j].iter().all(|&i| s.acc[i] == s.target[i]) {
                s.c[j] = v;
                let next = norm.clone() + s.w.get(j).clone() * Rational::from(v.abs());
                go(s, j + 1, next);
                s.c[j] = 0;
            }
            for &(i, e) in &s.col[j] {
                s.acc[i] -= e * v;
            }
        }
    }
    let mut st = St {
        col: &col,
        closes: &closes,
        target: &target,
        w,
        bound,
        acc: vec![0; rows],
        c: vec![0; m],
        best: None,
        keep,
        n,
    };
    go(&mut st, 0, Rational::zero());
    st.best
}

// ---------------------------------------------------------------- criteria

fn grid_paths() -> Outcome {
    let mut notes = Vec::new();
    for n in [1usize, 5, 20] {
        let start = Instant::now();
        let g = gen_grid(n).map_err(err)?;
        let w = WeightAssignment::uniform(1, g.complex.count(1));
        let c = solve_relative_obcp(&g.complex, &g.subcomplex, &w, &g.input, 1, &SolveOptions::lp_only())
            .map_err(err)?
            .optimal()
            .ok_or("grid reported infeasible")?;
        let elapsed = start.elapsed();
        let bfs = bfs_distance(&g.complex, &g.left, &g.right);
        ensure(c.integral, || format!("N={n}: LP vertex not integral"))?;
        ensure(c.norm == Rational::from(bfs as i64), || format!("N={n}: norm {} vs BFS {bfs}", c.norm))?;
        ensure(bfs == n, || format!("N={n}: BFS distance {bfs}"))?;
        let sf = desingularize_1(&g.complex, &c.chain, &g.subcomplex).map_err(err)?;
        let p = extract_embedded_path(&sf, &g.left, &g.right).map_err(err)?;
        ensure(p.edges.len() == n, || format!("N={n}: path has {} edges", p.edges.len()))?;
        let distinct: BTreeSet<_> = p.vertices.iter().collect();
        ensure(distinct.len() == p.vertices.len(), || format!("N={n}: path repeats a vertex"))?;
        ensure(g.left.contains(0, p.vertices[0]) && g.right.contains(0, *p.vertices.last().unwrap()), || {
            format!("N={n}: path does not run from L to R")
        })?;
        for (k, &e) in p.edges.iter().enumerate() {
            let s = g.complex.simplex(1, e);
            let mut pair = [p.vertices[k], p.vertices[k + 1]];
            pair.sort_unstable();
            ensure(s == pair, || format!("N={n}: edge {k} does not join consecutive path vertices"))?;
        }
        ensure(elapsed < Duration::from_secs(60), || format!("N={n}: {elapsed:?}"))?;
        notes.push(format!("N={n} {:.2?}", elapsed));
    }
    Ok(notes.join(", "))
}

fn bfs_distance(x: &SimplicialComplex, l: &homchain::Subcomplex, r: &homchain::Subcomplex) -> usize {
    let nv = x.count(0);
    let mut adj = vec![Vec::new(); nv];
    for e in 0..x.count(1) {
        let s = x.simplex(1, e);
        adj[s[0]].push(s[1]);
        adj[s[1]].push(s[0]);
    }
    let mut dist = vec![usize::MAX; nv];
    let mut q = VecDeque::new();
    for v in 0..nv {
        if l.contains(0, v) {
            dist[v] = 0;
            q.push_back(v);
        }
    }
    while let Some(u) = q.pop_front() {
        if r.contains(0, u) {
            return dist[u];
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    usize::MAX
}

fn sat_obcp(sweep: &[SatInstance]) -> Outcome {
    let (mut yes, mut no, mut empty) = (0, 0, 0);
    for (i, sat) in sweep.iter().enumerate() {
        let g = gen_sat_complex(sat).map_err(err)?;
        let t = Rational::from(1 + 6 * sat.num_vars() as i64 + 10 * sat.clauses().len() as i64);
        let sat_ok = brute_force_1in3(sat).map_err(err)?.is_some();
        // No bounding chain at all counts as an optimum above every threshold.
        let optimum = match solve_obcp(&g.complex, &g.weights, &g.input, 2, &SolveOptions::default()).map_err(err)? {
            Solved::Infeasible => {
                empty += 1;
                None
            }
            Solved::Optimal(c) => {
                ensure(c.integral, || format!("instance {i}: not integral"))?;
                ensure(boundary(&g.complex, &c.chain) == g.input, || format!("instance {i}: ∂c != b"))?;
                ensure(weighted(&c.chain, &g.weights) == c.norm, || format!("instance {i}: norm mismatch"))?;
                Some(c.norm)
            }
        };
        let meets = optimum.as_ref().is_some_and(|v| *v <= t);
        ensure(meets == sat_ok, || format!("instance {i}: optimum {optimum:?} threshold {t} sat {sat_ok}"))?;
        if sat_ok {
            ensure(optimum.as_ref() == Some(&t), || format!("instance {i}: satisfiable but optimum {optimum:?}"))?;
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || format!("sweep lacks a class: {yes} sat, {no} unsat"))?;
    Ok(format!("{} instances, {yes} satisfiable, {no} unsatisfiable ({empty} without any bounding chain)", sweep.len()))
}

fn eq1_identity(sweep: &[SatInstance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe91);
    let mut checked = 0;
    let mut tries = 0u64;
    'outer: while checked < 100 {
        for sat in sweep {
            if checked == 100 {
                break 'outer;
            }
            let g = gen_sat_complex(sat).map_err(err)?;
            let n = sat.num_vars();
            for _ in 0..20_000 {
                tries += 1;
                let mut k = vec![0i64; 2 * n];
                for v in 0..n {
                    k[2 * v] = rng.gen_range(-1..=2);
                    k[2 * v + 1] = 1 - k[2 * v];
                }
                if !sat.clauses().iter().all(|c| c.iter().map(|l| k[l.index()]).sum::<i64>() == 1) {
                    continue;
                }
                let d = g.combination(&k);
                ensure(boundary(&g.complex, &d) == g.input, || "combination is not feasible".into())?;
                let got = d.l1_norm(&g.weights).map_err(err)?;
                let want = eq1_norm(sat, &k);
                ensure(got == want, || format!("k = {k:?}: norm {got} vs formula {want}"))?;
                checked += 1;
                break;
            }
        }
        if tries > 10_000_000 {
            return Err(format!("only {checked} feasible k vectors found"));
        }
    }
    Ok(format!("{checked} feasible combinations"))
}

fn cone_sweep(sweep: &[SatInstance]) -> Outcome {
    let (mut yes, mut by_bound, mut by_search) = (0, 0, 0);
    for (i, sat) in sweep.iter().enumerate() {
        let g = gen_cone_ohcp(sat).map_err(err)?;
        let t = Rational::from(2 + 6 * sat.num_vars() as i64 + 10 * sat.clauses().len() as i64);
        let sat_ok = brute_force_1in3(sat).map_err(err)?.is_some();
        // The LP optimum bounds the integer optimum from below, so a relaxation
        // above the threshold already decides the question.
        let lp = solve_ohcp(&g.complex, &g.weights, &g.input, 2, &SolveOptions::lp_only()).map_err(err)?;
        let found = if lp.integral {
            Some(lp)
        } else if lp.norm > t {
            by_bound += 1;
            None
        } else {
            by_search += 1;
            solve_ohcp_within(&g.complex, &g.weights, &g.input, 2, &t, &SolveOptions::default()).map_err(err)?
        };
        let meets = match found {
            None => false,
            Some(c) => {
                ensure(c.integral, || format!("instance {i}: not integral"))?;
                let diff = c.chain.minus(&g.input);
                let d3 = g.complex.boundary_matrix(3).map_err(err)?;
                ensure(solve_integer(&d3, &diff.to_dense(g.complex.count(2))).is_some(), || {
                    format!("instance {i}: optimum not homologous to a")
                })?;
                c.norm <= t
            }
        };
        ensure(meets == sat_ok, || format!("instance {i}: meets threshold {t}: {meets}, satisfiable: {sat_ok}"))?;
        yes += sat_ok as usize;
    }
    Ok(format!(
        "{} instances, {yes} satisfiable, {by_bound} decided by the LP bound, {by_search} by bounded search",
        sweep.len()
    ))
}

fn moebius() -> Outcome {
    let f = gen_moebius_cube().map_err(err)?;
    let d2 = f.complex.boundary_matrix(2).map_err(err)?;
    let report = is_totally_unimodular(&d2, TuConfig::default());
    ensure(report.verdict == TuVerdict::No, || format!("TU verdict {:?}", report.verdict))?;
    let w = report.witness.ok_or("no witness")?;
    let sub = d2.submatrix(&w.rows, &w.cols);
    let det = bareiss(&sub);
    ensure(det == w.determinant, || format!("witness determinant {} recomputed as {det}", w.determinant))?;
    ensure(det.magnitude() >= &2u32.into(), || format!("|det| = {det}"))?;
    let wts = WeightAssignment::uniform(2, f.complex.count(2));
    let c = solve_obcp(&f.complex, &wts, &f.input, 2, &SolveOptions::lp_only())
        .map_err(err)?
        .optimal()
        .ok_or("infeasible")?;
    ensure(c.integral, || "LP vertex fractional".into())?;
    ensure(boundary(&f.complex, &c.chain) == f.input, || "∂c != b".into())?;
    Ok(format!("{}x{} witness with det {det}, LP optimum {}", w.rows.len(), w.cols.len(), c.norm))
}

/// Fraction-free determinant, written out here as an oracle.
fn bareiss(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == BigInt::from(0) {
            match (k + 1..n).find(|&i| a[i][k] != BigInt::from(0)) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    a[n - 1][n - 1].clone() * sign
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize, len: usize) -> WeightAssignment {
    WeightAssignment::new(n, (0..len).map(|_| Rational::new(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect())
        .unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Chain {
    let mut pairs = Vec::new();
    for i in 0..len {
        if rng.gen_bool(0.4) {
            pairs.push((i, rng.gen_range(-2..=2)));
        }
    }
    Chain::from_pairs(n, pairs)
}

fn equivalence(solved: &mut Vec<(SimplicialComplex, WeightAssignment, OptimalChain)>) -> Outcome {
    let cases: Vec<(SimplicialComplex, usize)> = vec![
        (cone(&circle()), 1),
        (cone(&tetrahedron_boundary()), 1),
        (cone(&tetrahedron_boundary()), 2),
        (cone(&projective_plane()), 1),
        (cone(&projective_plane()), 2),
        (cone(&torus()), 2),
        (tetrahedron(), 1),
        (tetrahedron(), 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xe9);
    for k in 0..50 {
        let (x, n) = &cases[k % cases.len()];
        let w = random_weights(&mut rng, *n, x.count(*n));
        let a = random_chain(&mut rng, *n, x.count(*n));
        let r = verify_equivalence(x, &w, &a, *n, &SolveOptions::default()).map_err(err)?;
        ensure(r.holds(), || format!("chain {k}: OHCP {} vs OBCP {}", r.ohcp.norm, r.obcp.norm))?;
        if *n == 2 && boundary_on_manifold_boundary(x, &r.ohcp.chain) {
            solved.push((x.clone(), w.clone(), r.ohcp));
        }
    }
    Ok(format!("50 chains over {} complexes", cases.len()))
}

fn desing_identity(solved: &[(SimplicialComplex, WeightAssignment, OptimalChain)]) -> Outcome {
    let mut surfaces = 0;
    for (i, (x, w, c)) in solved.iter().enumerate() {
        ensure(boundary_on_manifold_boundary(x, &c.chain), || format!("instance {i}: boundary leaves ∂M"))?;
        let s = desingularize_2(x, &c.chain, Some(w)).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(s.area == c.norm, || format!("instance {i}: area {} vs norm {}", s.area, c.norm))?;
        ensure(s.area == weighted(&c.chain, w), || format!("instance {i}: area differs from |c|"))?;
        ensure(s.pushback() == c.chain, || format!("instance {i}: pushback differs"))?;
        surfaces += 1;
    }
    ensure(surfaces >= 5, || format!("only {surfaces} surfaces checked"))?;
    Ok(format!("{surfaces} surfaces"))
}

fn homology_oracles() -> Outcome {
    let z = |x: &SimplicialComplex, n: usize| homology(x, n).map_err(err);
    let h = z(&circle(), 1)?;
    ensure(h.betti == 1 && h.torsion.is_empty(), || format!("circle H1 = {h}"))?;
    let h = z(&tetrahedron_boundary(), 2)?;
    ensure(h.betti == 1 && h.torsion.is_empty(), || format!("∂Δ³ H2 = {h}"))?;
    let h = z(&projective_plane(), 1)?;
    ensure(h.betti == 0 && h.torsion == vec![BigInt::from(2)], || format!("RP² H1 = {h}"))?;
    let h = z(&torus(), 1)?;
    ensure(h.betti == 2 && h.torsion.is_empty(), || format!("torus H1 = {h}"))?;
    let fixtures: Vec<(&str, SimplicialComplex)> = vec![
        ("circle", circle()),
        ("tetrahedron", tetrahedron()),
        ("∂Δ³", tetrahedron_boundary()),
        ("RP²", projective_plane()),
        ("torus", torus()),
        ("bounded sphere", bounded_sphere().complex),
        ("solid torus", solid_torus().complex),
        ("thickened torus", thickened_torus().complex),
        ("moebius cube", gen_moebius_cube().map_err(err)?.complex),
    ];
    for (name, x) in &fixtures {
        let cx = cone(x);
        for n in 1..=cx.dim() {
            let h = z(&cx, n)?;
            ensure(h.is_trivial(), || format!("cone over {name}: H{n} = {h}"))?;
        }
        let h0 = z(&cx, 0)?;
        ensure(h0.betti == 1 && h0.torsion.is_empty(), || format!("cone over {name}: H0 = {h0}"))?;
    }
    Ok(format!("4 named groups, cones over {} fixtures acyclic", fixtures.len()))
}

fn cube_knot_scale(solved: &mut Vec<(SimplicialComplex, WeightAssignment, OptimalChain)>) -> Outcome {
    let k = gen_cube_knot(4, &hamiltonian_corner_cycle(4)).map_err(err)?;
    ensure(k.complex.count(3) == 384, || format!("{} tetrahedra", k.complex.count(3)))?;
    let start = Instant::now();
    let c = solve_obcp(&k.complex, &k.weights, &k.input, 2, &SolveOptions::lp_only())
        .map_err(err)?
        .optimal()
        .ok_or("infeasible")?;
    let elapsed = start.elapsed();
    ensure(c.integral, || "LP vertex fractional".into())?;
    ensure(boundary(&k.complex, &c.chain) == k.input, || "∂c != b".into())?;
    ensure(elapsed < Duration::from_secs(600), || format!("{elapsed:?}"))?;
    let note = format!("384 tetrahedra, area {}, {:.2?}", c.norm, elapsed);
    solved.push((k.complex, k.weights, c));
    Ok(note)
}

fn small_instances() -> Vec<(String, SimplicialComplex, usize)> {
    let fan = |k: usize| {
        SimplicialComplex::build(&(1..=k).map(|i| vec![0, i, i % k + 1]).collect::<Vec<_>>()).unwrap()
    };
    let annulus = SimplicialComplex::build(&[
        vec![0, 1, 3],
        vec![1, 3, 4],
        vec![1, 2, 4],
        vec![2, 4, 5],
        vec![0, 2, 5],
        vec![0, 3, 5],
    ])
    .unwrap();
    let moebius_strip =
        SimplicialComplex::build(&[vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 0], vec![4, 0, 1]]).unwrap();
    vec![
        ("circle".into(), circle(), 1),
        ("tetrahedron".into(), tetrahedron(), 1),
        ("tetrahedron".into(), tetrahedron(), 2),
        ("∂Δ³".into(), tetrahedron_boundary(), 1),
        ("∂Δ³".into(), tetrahedron_boundary(), 2),
        ("fan 4".into(), fan(4), 1),
        ("fan 6".into(), fan(6), 2),
        ("fan 9".into(), fan(9), 2),
        ("annulus".into(), annulus.clone(), 1),
        ("annulus".into(), annulus, 2),
        ("moebius strip".into(), moebius_strip.clone(), 1),
        ("moebius strip".into(), moebius_strip, 2),
        ("RP²".into(), projective_plane(), 2),
        ("cone over circle".into(), cone(&circle()), 1),
        ("cone over ∂Δ³".into(), cone(&tetrahedron_boundary()), 3),
    ]
}

fn brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb7);
    let (mut compared, mut skipped, mut infeasible) = (0, 0, 0);
    for (name, x, n) in small_instances() {
        let m = x.count(n);
        if m > 12 {
            return Err(format!("{name}: {m} simplices"));
        }
        for trial in 0..6 {
            let w = random_weights(&mut rng, n, m);
            let bound = 2;
            // OBCP with b the boundary of a random chain, or of a random chain of the
            // upper dimension pushed down, which may be infeasible.
            let seed_chain = random_chain(&mut rng, n, m);
            let b = if trial == 5 && n >= 1 {
                let z = homchain::homology::free_generators(&x, n - 1).map_err(err)?;
                z.into_iter().next().unwrap_or_else(|| boundary(&x, &seed_chain))
            } else {
                boundary(&x, &seed_chain)
            };
            if n >= 1 {
                let solved = solve_obcp(&x, &w, &b, n, &SolveOptions::default()).map_err(err)?;
                let brute = enumerate(&x, &w, n, &b, bound, &|_| true);
                match solved {
                    Solved::Infeasible => {
                        ensure(brute.is_none(), || format!("{name}: solver infeasible, enumeration {brute:?}"))?;
                        infeasible += 1;
                    }
                    Solved::Optimal(c) => {
                        if c.chain.iter().any(|(_, v)| v.abs() > bound) {
                            skipped += 1;
                        } else {
                            ensure(Some(c.norm.clone()) == brute, || {
                                format!("{name} OBCP: solver {} vs enumeration {brute:?}", c.norm)
                            })?;
                            compared += 1;
                        }
                    }
                }
            }
            // OHCP: c is homologous to a when ∂c = ∂a and c - a bounds.
            let a = random_chain(&mut rng, n, m);
            let c = solve_ohcp(&x, &w, &a, n, &SolveOptions::default()).map_err(err)?;
            if c.chain.iter().any(|(_, v)| v.abs() > bound) {
                skipped += 1;
                continue;
            }
            let up = if n < x.dim() { Some(x.boundary_matrix(n + 1).map_err(err)?) } else { None };
            let a2 = a.clone();
            let homologous = move |ch: &Chain| {
                let diff = ch.minus(&a2);
                match &up {
                    Some(d) => solve_integer(d, &diff.to_dense(m)).is_some(),
                    None => diff.is_zero(),
                }
            };
            let da = if n == 0 { Chain::zero(0) } else { boundary(&x, &a) };
            let brute = if n == 0 {
                enumerate_free(&x, &w, n, bound, &homologous)
            } else {
                enumerate(&x, &w, n, &da, bound, &homologous)
            };
            ensure(Some(c.norm.clone()) == brute, || format!("{name} OHCP: solver {} vs enumeration {brute:?}", c.norm))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} optima matched, {infeasible} infeasible agreed, {skipped} outside the bound"))
}

fn enumerate_free(
    x: &SimplicialComplex,
    w: &WeightAssignment,
    n: usize,
    bound: i64,
    keep: &dyn Fn(&Chain) -> bool,
) -> Option<Rational> {
    let m = x.count(n);
    let mut c = vec![-bound; m];
    let mut best: Option<Rational> = None;
    loop {
        let ch = Chain::from_dense(n, &c);
        let v = weighted(&ch, w);
        if best.as_ref().map_or(true, |b| v < *b) && keep(&ch) {
            best = Some(v);
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

fn boundary_on_manifold_boundary(x: &SimplicialComplex, c: &Chain) -> bool {
    let report = check_manifold(x);
    match (&report.boundary, report.is_3_manifold()) {
        (Some(bd), true) => boundary(x, c).support().all(|e| bd.contains(1, e)),
        (None, true) => boundary(x, c).is_zero(),
        _ => false,
    }
}

fn spanning_surfaces(solved: &mut Vec<(SimplicialComplex, WeightAssignment, OptimalChain)>) -> Result<(), String> {
    let st = solid_torus();
    let w = WeightAssignment::uniform(2, st.complex.count(2));
    let bd = st.boundary.clone().unwrap();
    let lambda = homchain::homology::longitude(&st.complex, &bd).map_err(err)?;
    if let Solved::Optimal(c) =
        solve_relative_obcp(&st.complex, &bd, &w, &lambda, 2, &SolveOptions::default()).map_err(err)?
    {
        solved.push((st.complex.clone(), w, c));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xd5);
    for x in [tetrahedron(), cone(&tetrahedron_boundary())] {
        let bd = check_manifold(&x).boundary.ok_or("ball without boundary")?;
        let faces: Vec<usize> = (0..x.count(2)).filter(|&f| bd.contains(2, f)).collect();
        for _ in 0..3 {
            let w = random_weights(&mut rng, 2, x.count(2));
            let a = Chain::from_pairs(2, faces.iter().map(|&f| (f, rng.gen_range(-2..=2))));
            let c = solve_ohcp(&x, &w, &a, 2, &SolveOptions::default()).map_err(err)?;
            ensure(boundary(&x, &c.chain) == boundary(&x, &a), || "optimum changed the boundary".into())?;
            solved.push((x.clone(), w, c));
        }
    }
    for n in 1..=2 {
        let k = gen_cube_knot(n, &hamiltonian_corner_cycle(n)).map_err(err)?;
        if let Solved::Optimal(c) = solve_obcp(&k.complex, &k.weights, &k.input, 2, &SolveOptions::default()).map_err(err)? {
            solved.push((k.complex, k.weights, c));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let sweep = sat_sweep();
    let mut solved = Vec::new();
    let mut ok = Vec::new();
    let mut record = |label: &str, outcome: Outcome| {
        match &outcome {
            Ok(note) => println!("PASS  {label}: {note}"),
            Err(e) => println!("FAIL  {label}: {e}"),
        }
        ok.push(outcome.is_ok());
    };
    let guarded = |f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        r.map(|note| format!("{note} [{:.1?}]", start.elapsed()))
    };

    record("1 grid shortest path", guarded(&mut grid_paths));
    record("2 SAT complex threshold", guarded(&mut || sat_obcp(&sweep)));
    record("3 combination norm identity", guarded(&mut || eq1_identity(&sweep)));
    record("4 cone OHCP threshold", guarded(&mut || cone_sweep(&sweep)));
    record("5 integral LP without TU", guarded(&mut moebius));
    record("6 OHCP/OBCP equivalence", guarded(&mut || equivalence(&mut solved)));
    record("9 cube knot N=4", guarded(&mut || cube_knot_scale(&mut solved)));
    record(
        "7 desingularization area",
        guarded(&mut || {
            spanning_surfaces(&mut solved)?;
            desing_identity(&solved)
        }),
    );
    record("8 homology oracles", guarded(&mut homology_oracles));
    record("10 brute-force optima", guarded(&mut brute_force));

    let failed = ok.iter().filter(|&&b| !b).count();
    println!("{} of {} criteria pass", ok.len() - failed, ok.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
