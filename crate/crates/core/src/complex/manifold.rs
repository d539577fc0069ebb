//! Combinatorial manifold recognition for 2- and 3-dimensional complexes.

use std::collections::{BTreeMap, BTreeSet};

use super::{SimplicialComplex, Subcomplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldClass {
    Closed3Manifold,
    ManifoldWithBoundary3,
    Surface,
    NonManifold,
}

#[derive(Clone, Debug)]
pub struct ManifoldReport {
    pub class: ManifoldClass,
    /// Boundary subcomplex for surfaces and 3-manifolds.
    pub boundary: Option<Subcomplex>,
    /// Which link failed, for non-manifolds.
    pub reason: Option<String>,
}

impl ManifoldReport {
    fn non_manifold(reason: String) -> Self {
        ManifoldReport { class: ManifoldClass::NonManifold, boundary: None, reason: Some(reason) }
    }

    pub fn is_3_manifold(&self) -> bool {
        matches!(self.class, ManifoldClass::Closed3Manifold | ManifoldClass::ManifoldWithBoundary3)
    }
}

pub fn check_manifold(m: &SimplicialComplex) -> ManifoldReport {
    match m.dim() {
        2 if !m.is_empty() => check_surface(m),
        3 => check_3_manifold(m),
        d => ManifoldReport::non_manifold(format!("dimension {d} is not 2 or 3")),
    }
}

/// Whether an undirected simple graph is a single cycle or a single path.
fn circle_or_arc(edges: &[(usize, usize)]) -> Option<bool> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.is_empty() || adj.values().any(|n| n.len() > 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    if seen.len() != adj.len() {
        return None;
    }
    if edges.len() == adj.len() {
        Some(true)
    } else if edges.len() + 1 == adj.len() {
        Some(false)
    } else {
        None
    }
}

fn check_surface(m: &SimplicialComplex) -> ManifoldReport {
    let cof = m.coface_table(2);
    for (e, c) in cof.iter().enumerate() {
        if c.is_empty() || c.len() > 2 {
            return ManifoldReport::non_manifold(format!(
                "edge {:?} lies in {} triangles",
                m.simplex(1, e),
                c.len()
            ));
        }
    }
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m.vertex_count()];
    for t in m.simplices(2) {
        links[t[0]].push((t[1], t[2]));
        links[t[1]].push((t[0], t[2]));
        links[t[2]].push((t[0], t[1]));
    }
    for (v, link) in links.iter().enumerate() {
        if circle_or_arc(link).is_none() {
            return ManifoldReport::non_manifold(format!("vertex {v} link is not a circle or arc"));
        }
    }
    let boundary_edges: Vec<Vec<usize>> = cof
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() == 1)
        .map(|(e, _)| m.simplex(1, e).to_vec())
        .collect();
    let boundary = Subcomplex::from_simplices(m, &boundary_edges).expect("edges of m");
    ManifoldReport { class: ManifoldClass::Surface, boundary: Some(boundary), reason: None }
}

fn check_3_manifold(m: &SimplicialComplex) -> ManifoldReport {
    let tri_cof = m.coface_table(3);
    for (t, c) in tri_cof.iter().enumerate() {
        if c.is_empty() || c.len() > 2 {
            return ManifoldReport::non_manifold(format!(
                "triangle {:?} lies in {} tetrahedra",
                m.simplex(2, t),
                c.len()
            ));
        }
    }
    // edge links: opposite edges of the tetrahedra around each edge
    let mut edge_links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m.count(1)];
    let mut vertex_links: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m.vertex_count()];
    for t in m.simplices(3) {
        for i in 0..4 {
            for j in i + 1..4 {
                let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).map(|k| t[k]).collect();
                let e = m.id_of(&[t[i], t[j]]).expect("face");
                edge_links[e].push((rest[0], rest[1]));
            }
            let opp: Vec<usize> = (0..4).filter(|&k| k != i).map(|k| t[k]).collect();
            vertex_links[t[i]].push(opp);
        }
    }
    for (e, link) in edge_links.iter().enumerate() {
        if circle_or_arc(link).is_none() {
            return ManifoldReport::non_manifold(format!(
                "edge {:?} link is not a circle or arc",
                m.simplex(1, e)
            ));
        }
    }
    for (v, link) in vertex_links.into_iter().enumerate() {
        if !sphere_or_disc(link) {
            return ManifoldReport::non_manifold(format!("vertex {v} link is not a sphere or disc"));
        }
    }
    let boundary_tris: Vec<Vec<usize>> = tri_cof
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() == 1)
        .map(|(t, _)| m.simplex(2, t).to_vec())
        .collect();
    let class = if boundary_tris.is_empty() {
        ManifoldClass::Closed3Manifold
    } else {
        ManifoldClass::ManifoldWithBoundary3
    };
    let boundary = Subcomplex::from_simplices(m, &boundary_tris).expect("triangles of m");
    ManifoldReport { class, boundary: Some(boundary), reason: None }
}

fn sphere_or_disc(triangles: Vec<Vec<usize>>) -> bool {
    if triangles.is_empty() {
        return false;
    }
    let Ok(link) = SimplicialComplex::from_simplices(triangles) else {
        return false;
    };
    let report = check_surface(&link);
    if report.class != ManifoldClass::Surface || !is_connected(&link) {
        return false;
    }
    let has_boundary = report.boundary.is_some_and(|b| !b.is_empty());
    let chi = link.euler_characteristic();
    (has_boundary && chi == 1) || (!has_boundary && chi == 2)
}

fn is_connected(x: &SimplicialComplex) -> bool {
    let n = x.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for e in x.simplices(1) {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        parent[a] = b;
    }
    (0..n).all(|v| find(&mut parent, v) == find(&mut parent, 0))
}
