//! Strands of an integral 1-chain on a surface, reconnected without crossings.

use std::collections::BTreeMap;

use super::orient;
use crate::complex::{check_manifold, Chain, ManifoldClass, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strand {
    pub edge: usize,
    pub index: usize,
    pub tail: usize,
    pub head: usize,
}

/// At `vertex`, strand `incoming` continues as strand `outgoing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrandMatch {
    pub vertex: usize,
    pub incoming: usize,
    pub outgoing: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandComponent {
    pub closed: bool,
    /// Strand ids in travel order.
    pub strands: Vec<usize>,
    /// Vertices visited; for loops the first vertex is not repeated.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandFamily {
    pub strands: Vec<Strand>,
    pub matchings: Vec<StrandMatch>,
    pub components: Vec<StrandComponent>,
}

impl StrandFamily {
    pub fn arcs(&self) -> impl Iterator<Item = &StrandComponent> {
        self.components.iter().filter(|c| !c.closed)
    }

    pub fn loops(&self) -> impl Iterator<Item = &StrandComponent> {
        self.components.iter().filter(|c| c.closed)
    }

    /// The chain carried by one component.
    pub fn component_chain(&self, k: usize) -> Chain {
        let mut c = Chain::zero(1);
        for &s in &self.components[k].strands {
            let st = self.strands[s];
            c.add(st.edge, if st.tail < st.head { 1 } else { -1 });
        }
        c
    }

    fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.strands
            .iter()
            .find(|s| (s.tail == a && s.head == b) || (s.tail == b && s.head == a))
            .map(|s| s.edge)
    }
}

/// Parallel strands for `c` on the surface `x`, matched at every vertex off `a`.
pub fn desingularize_1(x: &SimplicialComplex, c: &Chain, a: &Subcomplex) -> Result<StrandFamily> {
    let report = check_manifold(x);
    if report.class != ManifoldClass::Surface {
        return Err(Error::NonManifold(report.reason.unwrap_or_else(|| "not a surface".into())));
    }
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: c.dim() });
    }
    let dc = x.apply_boundary(c)?;
    if let Some((&v, _)) = dc.iter().find(|(&v, _)| !a.contains(0, v)) {
        return Err(Error::Unbalanced(format!("vertex {v}")));
    }
    let eps = orient(x, 2)?;

    let mut strands = Vec::new();
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for (&e, &v) in c.iter() {
        let ev = x.simplex(1, e);
        let (tail, head) = if v > 0 { (ev[0], ev[1]) } else { (ev[1], ev[0]) };
        first.insert(e, strands.len());
        for k in 0..v.unsigned_abs() as usize {
            strands.push(Strand { edge: e, index: k, tail, head });
        }
    }

    // counterclockwise successor of each neighbour around each vertex
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); x.vertex_count()];
    for (t, tv) in x.simplices(2).iter().enumerate() {
        let cyc = if eps[t] > 0 { [tv[0], tv[1], tv[2]] } else { [tv[0], tv[2], tv[1]] };
        for i in 0..3 {
            succ[cyc[i]].insert(cyc[(i + 1) % 3], cyc[(i + 2) % 3]);
        }
    }

    let mut next = vec![usize::MAX; strands.len()];
    let mut matchings = Vec::new();
    let mut touched: Vec<usize> = strands.iter().flat_map(|s| [s.tail, s.head]).collect();
    touched.sort_unstable();
    touched.dedup();
    for v in touched {
        if a.contains(0, v) {
            continue;
        }
        let s = &succ[v];
        let has_pred: Vec<usize> = s.values().copied().collect();
        let start = s
            .keys()
            .copied()
            .find(|k| !has_pred.contains(k))
            .or_else(|| s.keys().next().copied())
            .expect("vertex of a triangle");
        let mut order = vec![start];
        let mut cur = start;
        while let Some(&n) = s.get(&cur) {
            if n == start {
                break;
            }
            order.push(n);
            cur = n;
        }
        // ends of strands in counterclockwise order: (strand, outgoing?)
        let mut ends: Vec<(usize, bool)> = Vec::new();
        for &nb in &order {
            let e = x.id_of(&[v.min(nb), v.max(nb)]).expect("edge");
            let Some(&base) = first.get(&e) else { continue };
            let n = c.get(e).unsigned_abs() as usize;
            let out = strands[base].tail == v;
            if v < nb {
                ends.extend((0..n).map(|k| (base + k, out)));
            } else {
                ends.extend((0..n).rev().map(|k| (base + k, out)));
            }
        }
        let mut stack: Vec<(usize, bool)> = Vec::new();
        for (st, out) in ends {
            match stack.last() {
                Some(&(other, o)) if o != out => {
                    stack.pop();
                    let (i, o) = if out { (other, st) } else { (st, other) };
                    next[i] = o;
                    matchings.push(StrandMatch { vertex: v, incoming: i, outgoing: o });
                }
                _ => stack.push((st, out)),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Internal(format!("unmatched strands at vertex {v}")));
        }
    }

    let mut used = vec![false; strands.len()];
    let mut components = Vec::new();
    let trace = |start: usize, used: &mut Vec<bool>| {
        let mut ids = Vec::new();
        let mut verts = vec![strands[start].tail];
        let mut cur = start;
        loop {
            used[cur] = true;
            ids.push(cur);
            let nx = next[cur];
            if nx == usize::MAX || nx == start {
                if nx != start {
                    verts.push(strands[cur].head);
                }
                return StrandComponent { closed: nx == start, strands: ids, vertices: verts };
            }
            verts.push(strands[cur].head);
            cur = nx;
        }
    };
    for s in 0..strands.len() {
        if !used[s] && a.contains(0, strands[s].tail) {
            components.push(trace(s, &mut used));
        }
    }
    for s in 0..strands.len() {
        if !used[s] {
            components.push(trace(s, &mut used));
        }
    }
    Ok(StrandFamily { strands, matchings, components })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Closed loops cut out of the arc, plus loops of the family.
    pub loops: Vec<Vec<usize>>,
}

/// An arc from `l` to `r` with repeated vertices cut out.
pub fn extract_embedded_path(sf: &StrandFamily, l: &Subcomplex, r: &Subcomplex) -> Result<EmbeddedPath> {
    let arc = sf
        .arcs()
        .find_map(|c| {
            let (s, t) = (c.vertices[0], *c.vertices.last()?);
            if l.contains(0, s) && r.contains(0, t) {
                Some(c.vertices.clone())
            } else if r.contains(0, s) && l.contains(0, t) {
                Some(c.vertices.iter().rev().copied().collect())
            } else {
                None
            }
        })
        .ok_or(Error::NoArc)?;
    let mut loops: Vec<Vec<usize>> = sf.loops().map(|c| c.vertices.clone()).collect();
    let mut path: Vec<usize> = Vec::with_capacity(arc.len());
    for v in arc {
        if let Some(p) = path.iter().position(|&u| u == v) {
            loops.push(path.split_off(p));
        }
        path.push(v);
    }
    let edges = path
        .windows(2)
        .map(|w| sf.edge_between(w[0], w[1]).ok_or_else(|| Error::Internal("path step without a strand".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddedPath { vertices: path, edges, loops })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Square grid of side `n` split along (i,j)-(i+1,j+1) diagonals.
    fn grid(n: usize) -> SimplicialComplex {
        let id = |i: usize, j: usize| i * (n + 1) + j;
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                t.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                t.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            }
        }
        SimplicialComplex::build(&t).unwrap()
    }

    fn path_chain(x: &SimplicialComplex, vs: &[usize]) -> Chain {
        let mut c = Chain::zero(1);
        for w in vs.windows(2) {
            let e = x.id_of(&[w[0].min(w[1]), w[0].max(w[1])]).unwrap();
            c.add(e, if w[0] < w[1] { 1 } else { -1 });
        }
        c
    }

    #[test]
    fn single_path_is_one_arc() {
        let x = grid(2);
        let a = Subcomplex::from_simplices(&x, &[vec![0], vec![2]]).unwrap();
        let c = path_chain(&x, &[0, 1, 2]);
        let sf = desingularize_1(&x, &c, &a).unwrap();
        assert_eq!(sf.components.len(), 1);
        assert_eq!(sf.components[0].vertices, vec![0, 1, 2]);
        let p = extract_embedded_path(&sf, &a, &a).unwrap();
        assert_eq!(p.edges.len(), 2);
    }

    #[test]
    fn doubled_loop_gives_two_loops() {
        let x = grid(2);
        // triangle loop around the centre vertex 4: 4 -> 5 -> 8 -> 4
        let c = path_chain(&x, &[4, 5, 8, 4]).scaled(2);
        let sf = desingularize_1(&x, &c, &Subcomplex::empty(&x)).unwrap();
        assert_eq!(sf.loops().count(), 2);
        assert!(sf.components.iter().all(|k| k.strands.len() == 3));
        let total: Chain = (0..2).fold(Chain::zero(1), |acc, k| acc.plus(&sf.component_chain(k)));
        assert_eq!(total, c);
    }

    #[test]
    fn crossing_strands_are_uncrossed() {
        // figure-four pattern through vertex 4 with coefficient 2 on shared edges
        let x = grid(2);
        let a = Subcomplex::from_simplices(&x, &[vec![3], vec![5], vec![1], vec![7]]).unwrap();
        let c = path_chain(&x, &[3, 4, 5]).plus(&path_chain(&x, &[1, 4, 7]));
        let sf = desingularize_1(&x, &c, &a).unwrap();
        assert_eq!(sf.arcs().count(), 2);
        let strands: usize = sf.components.iter().map(|k| k.strands.len()).sum();
        assert_eq!(strands, sf.strands.len());
        assert_eq!(sf.matchings.len(), 2);
    }

    #[test]
    fn arc_survives_an_extra_loop() {
        let x = grid(3);
        let l = Subcomplex::from_simplices(&x, &[vec![0]]).unwrap();
        let r = Subcomplex::from_simplices(&x, &[vec![3]]).unwrap();
        let a = l.union(&r);
        let c = path_chain(&x, &[0, 1, 2, 3]).plus(&path_chain(&x, &[9, 10, 14, 9]));
        let sf = desingularize_1(&x, &c, &a).unwrap();
        let p = extract_embedded_path(&sf, &l, &r).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3]);
        assert_eq!(p.loops.len(), 1);
    }

    #[test]
    fn unbalanced_vertex_is_rejected() {
        let x = grid(1);
        let c = path_chain(&x, &[0, 1]);
        assert!(matches!(desingularize_1(&x, &c, &Subcomplex::empty(&x)), Err(Error::Unbalanced(_))));
    }

    #[test]
    fn no_arc_is_an_error() {
        let x = grid(2);
        let c = path_chain(&x, &[4, 5, 8, 4]);
        let sf = desingularize_1(&x, &c, &Subcomplex::empty(&x)).unwrap();
        let l = Subcomplex::from_simplices(&x, &[vec![0]]).unwrap();
        assert_eq!(extract_embedded_path(&sf, &l, &l), Err(Error::NoArc));
    }
}
