//! 1-in-3 SAT instances and the complexes encoding them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::complex::{Chain, SimplicialComplex, WeightAssignment};
use crate::desingularize::permutation_sign;
use crate::error::{Error, Result};
use crate::homology::homology;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Index among the `2n` literals: `2 var` for `u`, `2 var + 1` for its negation.
    pub fn index(&self) -> usize {
        2 * self.var + self.negated as usize
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    fn from_signed(v: i64) -> Option<Self> {
        let var = usize::try_from(v.unsigned_abs()).ok()?.checked_sub(1)?;
        Some(Literal { var, negated: v < 0 })
    }

    fn to_signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}u{}", if self.negated { "~" } else { "" }, self.var + 1)
    }
}

/// A 1-in-3 SAT formula: every clause must have exactly one true literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatInstance {
    n: usize,
    clauses: Vec<[Literal; 3]>,
}

impl SatInstance {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            for (i, l) in c.iter().enumerate() {
                if l.var >= n {
                    return Err(Error::InvalidInstance(format!("clause {}: variable {} exceeds n = {n}", j + 1, l.var + 1)));
                }
                if c[..i].contains(l) {
                    return Err(Error::InvalidInstance(format!("clause {}: duplicate literal {l}", j + 1)));
                }
            }
        }
        Ok(SatInstance { n, clauses })
    }

    /// Parses one clause per line as three signed 1-based integers.
    ///
    /// Blank lines and lines starting with `c` or `#` are skipped, a trailing
    /// `0` is allowed, and an optional `p cnf N M` header fixes the variable count.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut clauses = Vec::new();
        let mut max_var = 0;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            if let Some(rest) = t.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 3 || f[0] != "cnf" {
                    return Err(err("expected header `p cnf <vars> <clauses>`".into()));
                }
                let v = f[1].parse::<usize>().map_err(|e| err(format!("variable count: {e}")))?;
                n = Some(v);
                continue;
            }
            let mut lits = Vec::new();
            for tok in t.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| err(format!("not an integer: `{tok}`")))?;
                lits.push(v);
            }
            if lits.last() == Some(&0) {
                lits.pop();
            }
            if lits.len() != 3 {
                return Err(err(format!("expected 3 literals, found {}", lits.len())));
            }
            let mut c = [Literal::pos(0); 3];
            for (i, &v) in lits.iter().enumerate() {
                c[i] = Literal::from_signed(v).ok_or_else(|| err("literal 0 inside a clause".into()))?;
                max_var = max_var.max(c[i].var + 1);
                if c[..i].contains(&c[i]) {
                    return Err(err(format!("duplicate literal {v}")));
                }
            }
            clauses.push(c);
        }
        let n = n.unwrap_or(max_var);
        if max_var > n {
            return Err(Error::Parse { line: 0, msg: format!("variable {max_var} exceeds header count {n}") });
        }
        SatInstance::new(n, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().filter(|l| l.eval(assignment)).count() == 1)
    }

    /// Number of clauses containing each literal, indexed by [`Literal::index`].
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; 2 * self.n];
        for c in &self.clauses {
            for l in c {
                occ[l.index()] += 1;
            }
        }
        occ
    }
}

impl fmt::Display for SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.n, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {}", c[0].to_signed(), c[1].to_signed(), c[2].to_signed())?;
        }
        Ok(())
    }
}

/// Exhaustive search for an assignment making exactly one literal per clause true.
pub fn brute_force_1in3(sat: &SatInstance) -> Result<Option<Vec<bool>>> {
    if sat.n > 24 {
        return Err(Error::Precondition(format!("brute force limited to 24 variables, got {}", sat.n)));
    }
    for mask in 0u32..(1 << sat.n) {
        let a: Vec<bool> = (0..sat.n).map(|i| mask >> i & 1 == 1).collect();
        if sat.is_satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// An oriented sphere with `k` triangular holes.
#[derive(Clone, Debug)]
pub struct PlanarSurface {
    /// Positively oriented triangles.
    pub triangles: Vec<[usize; 3]>,
    /// Hole boundaries, in the cyclic order induced by the orientation.
    pub circles: Vec<[usize; 3]>,
    pub vertices: usize,
}

impl PlanarSurface {
    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::build(&self.triangles.iter().map(|t| t.to_vec()).collect::<Vec<_>>()).expect("planar surface")
    }

    /// The fundamental chain of the surface in its own complex.
    pub fn chain(&self, x: &SimplicialComplex) -> Chain {
        Chain::from_pairs(2, self.triangles.iter().map(|t| oriented(x, t)))
    }
}

/// Sphere with `k` holes: one triangle, then `k - 1` annulus insertions into
/// the most recent triangle. Has `5k - 4` triangles and `3k` vertices.
pub fn planar_surface(k: usize) -> Result<PlanarSurface> {
    if k < 1 {
        return Err(Error::Precondition("planar surface needs at least one boundary circle".into()));
    }
    let mut triangles = vec![[0, 1, 2]];
    let mut circles = vec![[0, 1, 2]];
    let mut next = 3;
    for _ in 1..k {
        let [a, b, c] = triangles.pop().expect("nonempty");
        let (x, y, z) = (next, next + 1, next + 2);
        next += 3;
        triangles.extend([[a, b, x], [b, y, x], [b, c, y], [c, z, y], [c, a, z], [a, x, z]]);
        circles.push([x, z, y]);
    }
    Ok(PlanarSurface { triangles, circles, vertices: next })
}

/// Id and orientation sign of an ordered triangle.
fn oriented(x: &SimplicialComplex, t: &[usize]) -> (usize, i64) {
    (x.id_of_labels(t).expect("triangle present"), permutation_sign(t))
}

/// One glued surface of a SAT complex.
#[derive(Clone, Debug)]
pub struct GadgetSurface {
    /// `"F0"` or the literal, e.g. `"u2"`, `"~u1"`.
    pub label: String,
    /// Fundamental chain; glued boundary circles cancel against `F0`.
    pub chain: Chain,
    /// Whether the surface was attached through collars to stay simplicial.
    pub collared: bool,
    /// Index among the literals, `None` for `F0`.
    pub literal: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub complex: SimplicialComplex,
    pub weights: WeightAssignment,
    /// The chain `b` (OBCP) or `a` (OHCP).
    pub input: Chain,
    pub threshold: Rational,
    /// Labeled boundary circles of `F0`, as vertex labels in its boundary order.
    pub circles: Vec<(String, [usize; 3])>,
    pub surfaces: Vec<GadgetSurface>,
}

impl GadgetInstance {
    /// `[F0] + sum k_v [F_v]` with `k` indexed by [`Literal::index`].
    pub fn combination(&self, k: &[i64]) -> Chain {
        let mut d = Chain::zero(2);
        for s in &self.surfaces {
            let coef = s.literal.map_or(1, |i| k[i]);
            d = d.plus(&s.chain.scaled(coef));
        }
        d
    }
}

struct Assembly {
    triangles: Vec<([usize; 3], Rational, usize)>,
    tri_set: BTreeSet<[usize; 3]>,
    edge_set: BTreeSet<[usize; 2]>,
    circle_edges: BTreeSet<[usize; 2]>,
    next_vertex: usize,
}

fn sorted3(t: [usize; 3]) -> [usize; 3] {
    let mut s = t;
    s.sort_unstable();
    s
}

fn edges_of(t: [usize; 3]) -> [[usize; 2]; 3] {
    let s = sorted3(t);
    [[s[0], s[1]], [s[0], s[2]], [s[1], s[2]]]
}

impl Assembly {
    fn fits(&self, tris: &[[usize; 3]]) -> bool {
        let mut tri_local = BTreeSet::new();
        let mut edge_local = BTreeSet::new();
        for &t in tris {
            if self.tri_set.contains(&sorted3(t)) || !tri_local.insert(sorted3(t)) {
                return false;
            }
            for e in edges_of(t) {
                if !self.circle_edges.contains(&e) && self.edge_set.contains(&e) {
                    return false;
                }
                edge_local.insert(e);
            }
        }
        true
    }

    fn add(&mut self, tris: &[[usize; 3]], w: &Rational, surface: usize) {
        for &t in tris {
            self.tri_set.insert(sorted3(t));
            self.edge_set.extend(edges_of(t));
            self.triangles.push((t, w.clone(), surface));
        }
    }
}

/// The SAT complex: `F0` plus one planar surface per literal, glued along
/// labeled 3-edge circles with reversed orientation.
///
/// A literal surface that cannot be laid directly on `F0`'s circle vertices
/// without repeating a triangle or edge is attached through a six-triangle
/// collar per circle to a private copy; its triangles then weigh
/// `(5k - 4) / (11k - 4)` so the surface keeps norm `5k - 4`.
pub fn gen_sat_complex(sat: &SatInstance) -> Result<GadgetInstance> {
    let n = sat.n;
    let m = sat.clauses.len();
    let f0 = planar_surface(n + m + 1)?;
    let mut names = vec!["K".to_string()];
    names.extend((1..=n).map(|i| format!("u{i}")));
    names.extend((1..=m).map(|j| format!("c{j}")));

    let mut asm = Assembly {
        triangles: Vec::new(),
        tri_set: BTreeSet::new(),
        edge_set: BTreeSet::new(),
        circle_edges: f0.circles.iter().flat_map(|&c| edges_of(c)).collect(),
        next_vertex: f0.vertices,
    };
    asm.add(&f0.triangles, &Rational::one(), 0);
    let mut labels = vec!["F0".to_string()];
    let mut collared = vec![false];
    let mut literal_of = vec![None];

    for var in 0..n {
        for lit in [Literal::pos(var), Literal::neg(var)] {
            // circle 0 glues to u_var, the rest to the clauses containing lit
            let mut targets = vec![1 + var];
            targets.extend((0..m).filter(|&j| sat.clauses[j].contains(&lit)).map(|j| 1 + n + j));
            let k = targets.len();
            let fv = planar_surface(k)?;
            let sid = labels.len();
            labels.push(lit.to_string());
            literal_of.push(Some(lit.index()));

            let mut placed = None;
            for code in 0..3usize.pow(k as u32) {
                let mut map = vec![usize::MAX; fv.vertices];
                let mut r = code;
                for (p, &tgt) in fv.circles.iter().zip(&targets) {
                    let q = f0.circles[tgt];
                    for j in 0..3 {
                        map[p[j]] = q[(r % 3 + 3 - j) % 3];
                    }
                    r /= 3;
                }
                let tris: Vec<[usize; 3]> = fv.triangles.iter().map(|t| t.map(|v| map[v])).collect();
                if asm.fits(&tris) {
                    placed = Some(tris);
                    break;
                }
            }
            match placed {
                Some(tris) => {
                    asm.add(&tris, &Rational::one(), sid);
                    collared.push(false);
                }
                None => {
                    let base = asm.next_vertex;
                    asm.next_vertex += fv.vertices;
                    let mut tris: Vec<[usize; 3]> = fv.triangles.iter().map(|t| t.map(|v| base + v)).collect();
                    for (p, &tgt) in fv.circles.iter().zip(&targets) {
                        let q = f0.circles[tgt];
                        let [a, b, c] = [q[0], q[2], q[1]];
                        let [x, y, z] = p.map(|v| base + v);
                        tris.extend([[a, b, x], [b, y, x], [b, c, y], [c, z, y], [c, a, z], [a, x, z]]);
                    }
                    debug_assert!(asm.fits(&tris));
                    let w = Rational::new(5 * k as i64 - 4, 11 * k as i64 - 4);
                    asm.add(&tris, &w, sid);
                    collared.push(true);
                }
            }
        }
    }

    let complex = SimplicialComplex::build(&asm.triangles.iter().map(|(t, _, _)| t.to_vec()).collect::<Vec<_>>())?;
    let mut weights = vec![Rational::one(); complex.count(2)];
    let mut chains: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); labels.len()];
    for (t, w, s) in &asm.triangles {
        let (id, sign) = oriented(&complex, t);
        weights[id] = w.clone();
        chains[*s].insert(id, sign);
    }
    let surfaces: Vec<GadgetSurface> = chains
        .into_iter()
        .enumerate()
        .map(|(i, c)| GadgetSurface {
            label: labels[i].clone(),
            chain: Chain::from_pairs(2, c),
            collared: collared[i],
            literal: literal_of[i],
        })
        .collect();

    let k = f0.circles[0];
    let input = Chain::from_pairs(1, (0..3).map(|j| {
        let e = [k[j], k[(j + 1) % 3]];
        (complex.id_of_labels(&e).expect("circle edge"), if e[0] < e[1] { 1 } else { -1 })
    }));
    let circles = names.into_iter().zip(f0.circles.iter().copied()).collect();
    Ok(GadgetInstance {
        weights: WeightAssignment::new(2, weights)?,
        complex,
        input,
        threshold: Rational::from(1 + 6 * n as i64 + 10 * m as i64),
        circles,
        surfaces,
    })
}

/// The OHCP instance: the cone on the SAT complex with a triangle `sigma`
/// capping the `K` circle.
///
/// Triangles of the SAT complex and `sigma` keep their weights; cone
/// triangles weigh `10 + 6n + 10m`. The input is the cycle
/// `sigma - apex * boundary(sigma)`, which generates `H_2`.
pub fn gen_cone_ohcp(sat: &SatInstance) -> Result<GadgetInstance> {
    let base = gen_sat_complex(sat)?;
    let x = &base.complex;
    let n = sat.n as i64;
    let m = sat.clauses.len() as i64;
    let apex = x.labels().last().map_or(0, |&l| l + 1);
    let (_, k) = base.circles[0].clone();
    let sigma = sorted3(k).to_vec();
    if x.id_of_labels(&sigma).is_some() {
        return Err(Error::Internal("capping triangle already present".into()));
    }
    let mut tops: Vec<Vec<usize>> = x
        .simplices(2)
        .iter()
        .map(|t| {
            let mut c: Vec<usize> = t.iter().map(|&v| x.labels()[v]).collect();
            c.push(apex);
            c
        })
        .collect();
    tops.push(sigma.clone());
    let y = SimplicialComplex::build(&tops)?;
    let h2 = homology(&y, 2)?;
    if h2.betti != 1 || !h2.torsion.is_empty() {
        return Err(Error::Internal(format!("H_2 of the cone complex is {h2}, expected Z")));
    }

    let heavy = Rational::from(10 + 6 * n + 10 * m);
    let mut weights = vec![heavy; y.count(2)];
    for (id, t) in x.simplices(2).iter().enumerate() {
        let lab: Vec<usize> = t.iter().map(|&v| x.labels()[v]).collect();
        weights[y.id_of_labels(&lab).expect("base triangle")] = base.weights.get(id).clone();
    }
    let sid = y.id_of_labels(&sigma).expect("sigma");
    weights[sid] = Rational::one();

    // boundary of sigma, and the cone over it with the apex last
    let mut a = Chain::from_pairs(2, [(sid, 1)]);
    let faces = [(1, [sigma[1], sigma[2]]), (-1, [sigma[0], sigma[2]]), (1, [sigma[0], sigma[1]])];
    for (s, e) in faces {
        // apex * [u, v] = [apex, u, v] = [u, v, apex]
        a.add(y.id_of_labels(&[e[0], e[1], apex]).expect("cone triangle"), -s);
    }
    debug_assert!(y.apply_boundary(&a).map(|c| c.is_zero()).unwrap_or(false));

    let lift = |c: &Chain| {
        Chain::from_pairs(
            2,
            c.iter().map(|(&id, &v)| {
                let lab: Vec<usize> = x.simplex(2, id).iter().map(|&u| x.labels()[u]).collect();
                (y.id_of_labels(&lab).expect("base triangle"), v)
            }),
        )
    };
    let surfaces = base.surfaces.iter().map(|s| GadgetSurface { chain: lift(&s.chain), ..s.clone() }).collect();
    Ok(GadgetInstance {
        weights: WeightAssignment::new(2, weights)?,
        complex: y,
        input: a,
        threshold: Rational::from(2 + 6 * n + 10 * m),
        circles: base.circles,
        surfaces,
    })
}
