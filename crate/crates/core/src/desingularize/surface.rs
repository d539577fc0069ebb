//! Properly embedded surfaces from relative 2-cycles in a 3-manifold.
//!
//! Each unit of `c_σ` is a parallel copy of σ (a hexagon once the vertex
//! neighbourhoods are cut away). Copies are glued along every edge by a
//! non-crossing matching in the rotation order around the edge, and the corner
//! curves around each interior vertex are capped with disks. Collapsing each
//! hexagon back to a triangle gives the cell structure used for χ.

use std::collections::BTreeMap;

use super::{orient, permutation_sign};
use crate::complex::{check_manifold, Chain, SimplicialComplex, WeightAssignment};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceFace {
    pub simplex: usize,
    pub copy: usize,
    pub sign: i64,
}

/// Two hexagon sides glued across an edge of `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeGluing {
    pub edge: usize,
    pub faces: (usize, usize),
}

/// Corners identified into one vertex of `S`. Around an interior vertex of `M`
/// the corners form a closed curve on the link, capped by one disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCorners {
    pub vertex: usize,
    /// `(face, position of the vertex in the face's simplex)`.
    pub corners: Vec<(usize, usize)>,
    pub disk: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentStats {
    pub faces: usize,
    pub euler_characteristic: i64,
    pub boundary_curves: usize,
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceStats {
    pub euler_characteristic: i64,
    pub components: Vec<ComponentStats>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedSurface {
    pub faces: Vec<SurfaceFace>,
    pub gluings: Vec<EdgeGluing>,
    /// Unmatched sides `(edge, face)`, lying on `∂M`.
    pub boundary_sides: Vec<(usize, usize)>,
    pub vertices: Vec<VertexCorners>,
    /// Vertex of `S` at each corner, indexed `3 * face + position`.
    pub corner_vertex: Vec<usize>,
    pub area: Rational,
    pub stats: SurfaceStats,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Triangles around edge `e` in positive rotation order, and whether they close up.
fn rotation(
    m: &SimplicialComplex,
    eps: &[i64],
    edge_cof: &[Vec<(usize, i64)>],
    tri_cof: &[Vec<(usize, i64)>],
    e: usize,
) -> Result<(Vec<usize>, bool)> {
    let ev = m.simplex(1, e);
    let (v0, v1) = (ev[0], ev[1]);
    let tris: Vec<usize> = edge_cof[e].iter().map(|&(t, _)| t).collect();
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
    let mut has_pred: BTreeMap<usize, bool> = tris.iter().map(|&t| (t, false)).collect();
    let mut seen_tets = Vec::new();
    for &t in &tris {
        for &(tau, _) in &tri_cof[t] {
            if seen_tets.contains(&tau) {
                continue;
            }
            seen_tets.push(tau);
            let tv = m.simplex(3, tau);
            let others: Vec<usize> = tv.iter().copied().filter(|&v| v != v0 && v != v1).collect();
            let (w, w2) = (others[0], others[1]);
            let tw = m.id_of(&sorted([v0, v1, w])).expect("face");
            let tw2 = m.id_of(&sorted([v0, v1, w2])).expect("face");
            let s = permutation_sign(&[v0, v1, w, w2]) * eps[tau];
            let (a, b) = if s > 0 { (tw, tw2) } else { (tw2, tw) };
            succ.insert(a, b);
            has_pred.insert(b, true);
        }
    }
    let start = match has_pred.iter().find(|(_, &p)| !p) {
        Some((&t, _)) => t,
        None => *tris.iter().min().expect("edge of a 3-manifold lies in a triangle"),
    };
    let closed = has_pred.values().all(|&p| p);
    let mut order = vec![start];
    let mut cur = start;
    while let Some(&n) = succ.get(&cur) {
        if n == start {
            break;
        }
        order.push(n);
        cur = n;
    }
    if order.len() != tris.len() {
        return Err(Error::NonManifold(format!(
            "triangles around edge {:?} do not form a single rotation",
            ev
        )));
    }
    Ok((order, closed))
}

fn sorted(mut v: [usize; 3]) -> [usize; 3] {
    v.sort_unstable();
    v
}

/// Stack matching of signed sides: adjacent opposite signs pair up.
fn match_sides(sides: &[(usize, i64)]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut stack: Vec<(usize, i64)> = Vec::new();
    let mut pairs = Vec::new();
    for &(f, s) in sides {
        match stack.last() {
            Some(&(g, t)) if t != s => {
                stack.pop();
                pairs.push((g, f));
            }
            _ => stack.push((f, s)),
        }
    }
    (pairs, stack.into_iter().map(|(f, _)| f).collect())
}

/// Surface realizing an integral relative 2-cycle of a 3-manifold.
pub fn desingularize_2(m: &SimplicialComplex, c: &Chain, w: Option<&WeightAssignment>) -> Result<EmbeddedSurface> {
    let report = check_manifold(m);
    if !report.is_3_manifold() {
        return Err(Error::NonManifold(report.reason.unwrap_or_else(|| "not a 3-manifold".into())));
    }
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: c.dim() });
    }
    if let Some(id) = c.support().find(|&id| id >= m.count(2)) {
        return Err(Error::UnknownSimplexId { dim: 2, id });
    }
    let boundary = report.boundary.expect("3-manifold boundary");
    let dc = m.apply_boundary(c)?;
    if let Some(e) = dc.support().find(|&e| !boundary.contains(1, e)) {
        return Err(Error::Unbalanced(format!(
            "boundary of the chain meets interior edge {:?}",
            m.simplex(1, e)
        )));
    }
    let eps = orient(m, 3)?;
    let tri_cof = m.coface_table(3);
    let edge_cof = m.coface_table(2);

    let mut faces = Vec::new();
    let mut first_face: BTreeMap<usize, usize> = BTreeMap::new();
    for (&s, &v) in c.iter() {
        first_face.insert(s, faces.len());
        for k in 0..v.unsigned_abs() as usize {
            faces.push(SurfaceFace { simplex: s, copy: k, sign: v.signum() });
        }
    }

    let mut edges: Vec<usize> = Vec::new();
    for &s in first_face.keys() {
        for (_, f) in crate::complex::Simplex::new(m.simplex(2, s).to_vec())?.faces() {
            edges.push(m.id_of(&f).expect("edge"));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let mut gluings = Vec::new();
    let mut boundary_sides = Vec::new();
    for &e in &edges {
        let (order, closed) = rotation(m, &eps, &edge_cof, &tri_cof, e)?;
        let inc: BTreeMap<usize, i64> = edge_cof[e].iter().copied().collect();
        let mut sides: Vec<(usize, i64)> = Vec::new();
        for &t in &order {
            let coef = c.get(t);
            if coef == 0 {
                continue;
            }
            let i = inc[&t];
            let base = first_face[&t];
            let n = coef.unsigned_abs() as usize;
            let sign = coef.signum() * i;
            if i > 0 {
                sides.extend((0..n).map(|k| (base + k, sign)));
            } else {
                sides.extend((0..n).rev().map(|k| (base + k, sign)));
            }
        }
        let (pairs, rest) = match_sides(&sides);
        if closed && !rest.is_empty() {
            return Err(Error::Internal(format!("unmatched sides around interior edge {:?}", m.simplex(1, e))));
        }
        gluings.extend(pairs.into_iter().map(|faces| EdgeGluing { edge: e, faces }));
        boundary_sides.extend(rest.into_iter().map(|f| (e, f)));
    }

    let pos = |f: usize, v: usize| m.simplex(2, faces[f].simplex).iter().position(|&x| x == v).expect("corner");
    let mut corners = UnionFind::new(3 * faces.len());
    let mut comps = UnionFind::new(faces.len());
    for g in &gluings {
        let (a, b) = g.faces;
        comps.union(a, b);
        for &v in m.simplex(1, g.edge) {
            corners.union(3 * a + pos(a, v), 3 * b + pos(b, v));
        }
    }

    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertices: Vec<VertexCorners> = Vec::new();
    let mut corner_vertex = vec![0; 3 * faces.len()];
    for k in 0..3 * faces.len() {
        let r = corners.find(k);
        let id = *class_of.entry(r).or_insert_with(|| {
            let v = m.simplex(2, faces[k / 3].simplex)[k % 3];
            vertices.push(VertexCorners { vertex: v, corners: Vec::new(), disk: !boundary.contains(0, v) });
            vertices.len() - 1
        });
        vertices[id].corners.push((k / 3, k % 3));
        corner_vertex[k] = id;
    }

    let area = match w {
        Some(w) => c.l1_norm(w)?,
        None => Rational::from_int(c.mass()),
    };
    let mut s = EmbeddedSurface {
        faces,
        gluings,
        boundary_sides,
        vertices,
        corner_vertex,
        area,
        stats: SurfaceStats { euler_characteristic: 0, components: Vec::new() },
    };
    s.stats = compute_stats(&s, m, &mut comps)?;
    Ok(s)
}

fn compute_stats(s: &EmbeddedSurface, m: &SimplicialComplex, comps: &mut UnionFind) -> Result<SurfaceStats> {
    let nf = s.faces.len();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for f in 0..nf {
        let r = comps.find(f);
        let next = index.len();
        index.entry(r).or_insert(next);
    }
    let k = index.len();
    let comp = |uf: &mut UnionFind, f: usize| index[&uf.find(f)];
    let mut v = vec![0i64; k];
    let mut e = vec![0i64; k];
    let mut fcount = vec![0usize; k];
    for f in 0..nf {
        fcount[comp(comps, f)] += 1;
    }
    for vc in &s.vertices {
        v[comp(comps, vc.corners[0].0)] += 1;
    }
    for g in &s.gluings {
        e[comp(comps, g.faces.0)] += 1;
    }
    for &(_, f) in &s.boundary_sides {
        e[comp(comps, f)] += 1;
    }
    // boundary curves: components of the graph of boundary sides on S-vertices
    let mut bcurves = UnionFind::new(s.vertices.len());
    let mut on_boundary = vec![false; s.vertices.len()];
    for &(edge, f) in &s.boundary_sides {
        let ends: Vec<usize> = m
            .simplex(1, edge)
            .iter()
            .map(|&x| {
                let p = m.simplex(2, s.faces[f].simplex).iter().position(|&y| y == x).expect("corner");
                s.corner_vertex[3 * f + p]
            })
            .collect();
        on_boundary[ends[0]] = true;
        on_boundary[ends[1]] = true;
        bcurves.union(ends[0], ends[1]);
    }
    let mut b = vec![0usize; k];
    for (i, vc) in s.vertices.iter().enumerate() {
        if on_boundary[i] && bcurves.find(i) == i {
            b[comp(comps, vc.corners[0].0)] += 1;
        }
    }
    let mut components = Vec::with_capacity(k);
    for i in 0..k {
        let chi = v[i] - e[i] + fcount[i] as i64;
        let twice = 2 - chi - b[i] as i64;
        if twice < 0 || twice % 2 != 0 {
            return Err(Error::Internal(format!("component {i} has χ = {chi} with {} boundary curves", b[i])));
        }
        components.push(ComponentStats { faces: fcount[i], euler_characteristic: chi, boundary_curves: b[i], genus: twice / 2 });
    }
    Ok(SurfaceStats { euler_characteristic: components.iter().map(|c| c.euler_characteristic).sum(), components })
}

/// χ, components, and per-component genus and boundary count.
pub fn surface_stats(s: &EmbeddedSurface) -> &SurfaceStats {
    &s.stats
}

impl EmbeddedSurface {
    /// `Σ sign·σ` over the faces; equals the source chain.
    pub fn pushback(&self) -> Chain {
        Chain::from_pairs(2, self.faces.iter().map(|f| (f.simplex, f.sign)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.gluings.len() + self.boundary_sides.len()
    }

    /// Closed corner curves around interior vertices, each capped by a disk.
    pub fn disks(&self) -> impl Iterator<Item = &VertexCorners> {
        self.vertices.iter().filter(|v| v.disk)
    }

    /// The cell structure of `S` as oriented triangles on its own vertices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        (0..self.faces.len())
            .map(|f| {
                let t = [self.corner_vertex[3 * f], self.corner_vertex[3 * f + 1], self.corner_vertex[3 * f + 2]];
                if self.faces[f].sign > 0 { t } else { [t[0], t[2], t[1]] }
            })
            .collect()
    }

    /// Each face as a triangle in space, with `coords` indexed by vertex id:
    /// pulled toward its barycenter and offset along its normal by copy index.
    pub fn geometric_triangles(&self, m: &SimplicialComplex, coords: &[[f64; 3]]) -> Vec<[[f64; 3]; 3]> {
        let mut copies: BTreeMap<usize, usize> = BTreeMap::new();
        for f in &self.faces {
            *copies.entry(f.simplex).or_default() += 1;
        }
        self.faces
            .iter()
            .map(|f| {
                let s = m.simplex(2, f.simplex);
                let p: Vec<[f64; 3]> = s.iter().map(|&v| coords[v]).collect();
                let bary = [0, 1, 2].map(|i| (p[0][i] + p[1][i] + p[2][i]) / 3.0);
                let u = [0, 1, 2].map(|i| p[1][i] - p[0][i]);
                let v = [0, 1, 2].map(|i| p[2][i] - p[0][i]);
                let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt().max(1e-12);
                let scale = len.sqrt() * 0.05;
                let h = (f.copy as f64 - (copies[&f.simplex] as f64 - 1.0) / 2.0) * scale / len;
                let corner = |q: [f64; 3]| [0, 1, 2].map(|i| q[i] + 0.1 * (bary[i] - q[i]) + h * n[i]);
                let t = [corner(p[0]), corner(p[1]), corner(p[2])];
                if f.sign > 0 { t } else { [t[0], t[2], t[1]] }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::bounded_sphere;

    fn inner_sphere(m: &SimplicialComplex) -> Chain {
        let eps = orient(m, 3).unwrap();
        let cone: Vec<(usize, i64)> =
            (0..m.count(3)).filter(|&t| m.simplex(3, t)[0] == 0).map(|t| (t, eps[t])).collect();
        m.apply_boundary(&Chain::from_pairs(3, cone)).unwrap()
    }

    #[test]
    fn one_face_between_two_tetrahedra() {
        let m = SimplicialComplex::build(&[vec![0, 1, 2, 3], vec![1, 2, 3, 4]]).unwrap();
        let t = m.id_of(&[1, 2, 3]).unwrap();
        let s = desingularize_2(&m, &Chain::from_pairs(2, [(t, 1)]), None).unwrap();
        assert_eq!(s.faces.len(), 1);
        assert_eq!(s.stats.euler_characteristic, 1);
        assert_eq!(s.stats.components[0].boundary_curves, 1);
        assert_eq!(s.stats.components[0].genus, 0);
        assert_eq!(s.area, Rational::one());
    }

    #[test]
    fn interior_sphere_and_its_double() {
        let f = bounded_sphere();
        let m = &f.complex;
        let c = inner_sphere(m);
        assert_eq!(c.len(), 4);
        let s = desingularize_2(m, &c, None).unwrap();
        assert_eq!(s.stats.euler_characteristic, 2);
        assert_eq!(s.stats.components.len(), 1);
        assert_eq!(s.disks().count(), 4);
        assert_eq!(s.pushback(), c);

        let d = desingularize_2(m, &c.scaled(2), None).unwrap();
        assert_eq!(d.faces.len(), 8);
        assert_eq!(d.stats.euler_characteristic, 4);
        assert_eq!(d.stats.components.len(), 2);
        assert!(d.stats.components.iter().all(|c| c.genus == 0 && c.boundary_curves == 0));
        assert_eq!(d.area, Rational::from_int(8));
    }

    #[test]
    fn interior_boundary_is_rejected() {
        let f = bounded_sphere();
        let m = &f.complex;
        let t = m.id_of(&[1, 2, 3]).unwrap();
        assert!(matches!(desingularize_2(m, &Chain::from_pairs(2, [(t, 1)]), None), Err(Error::Unbalanced(_))));
    }

    #[test]
    fn non_manifold_is_rejected() {
        let m = SimplicialComplex::build(&[vec![0, 1, 2, 3], vec![0, 1, 4, 5]]).unwrap();
        assert!(matches!(desingularize_2(&m, &Chain::zero(2), None), Err(Error::NonManifold(_))));
    }

    #[test]
    fn deterministic() {
        let f = bounded_sphere();
        let c = inner_sphere(&f.complex).scaled(3);
        assert_eq!(desingularize_2(&f.complex, &c, None).unwrap(), desingularize_2(&f.complex, &c, None).unwrap());
    }
}
