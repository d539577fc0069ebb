//! Instance generators and small fixture complexes.

mod cube;
mod moebius;
mod sat;

pub use cube::{
    cube_vertex, gen_cube_knot, gen_grid, grid_vertex, hamiltonian_corner_cycle, CubeKnot, GridInstance, AXIS_AREA,
    DIAGONAL_AREA,
};
pub use moebius::{gen_moebius_cube, MoebiusFixture};
pub use sat::{
    brute_force_1in3, gen_cone_ohcp, gen_sat_complex, planar_surface, GadgetInstance, GadgetSurface, Literal,
    PlanarSurface, SatInstance,
};

use crate::complex::{Chain, SimplicialComplex, Subcomplex};

/// A complex with vertex coordinates and an optional distinguished subcomplex.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub complex: SimplicialComplex,
    pub coords: Option<Vec<[f64; 3]>>,
    pub boundary: Option<Subcomplex>,
}

fn fixture(tops: &[Vec<usize>]) -> Fixture {
    Fixture { complex: SimplicialComplex::build(tops).expect("fixture"), coords: None, boundary: None }
}

pub fn circle() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![0, 2]]).expect("circle")
}

pub fn tetrahedron() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![0, 1, 2, 3]]).expect("tetrahedron")
}

pub fn tetrahedron_boundary() -> SimplicialComplex {
    SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).expect("sphere")
}

/// Six-vertex projective plane.
pub fn projective_plane() -> SimplicialComplex {
    SimplicialComplex::build(&[
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ])
    .expect("rp2")
}

/// Cone with apex 0; vertex `v` of `x` becomes `v + 1`.
pub fn cone(x: &SimplicialComplex) -> SimplicialComplex {
    let mut tops = Vec::new();
    for s in x.maximal_simplices() {
        let mut t = vec![0];
        t.extend(s.iter().map(|&v| x.labels()[v] + 1));
        tops.push(t);
    }
    if tops.is_empty() {
        tops.push(vec![0]);
    }
    SimplicialComplex::from_simplices(tops).expect("cone")
}

/// The cone `apex * s` of a chain, as a chain of `cone(x)`.
pub fn cone_chain(x: &SimplicialComplex, cx: &SimplicialComplex, c: &Chain) -> Chain {
    Chain::from_pairs(
        c.dim() + 1,
        c.iter().map(|(&id, &v)| {
            let mut t = vec![0];
            t.extend(x.simplex(c.dim(), id).iter().map(|&u| x.labels()[u] + 1));
            (cx.id_of_labels(&t).expect("cone simplex"), v)
        }),
    )
}

/// Prism over triangle `bottom -> top` (matching positions), as three tetrahedra.
fn prism(bottom: [usize; 3], top: [usize; 3]) -> [Vec<usize>; 3] {
    let [a, b, c] = bottom;
    let [x, y, z] = top;
    [vec![a, b, c, z], vec![a, b, y, z], vec![a, x, y, z]]
}

/// Ball with an interior tetrahedral sphere: centre 0, inner tetrahedron 1..=4,
/// outer shell 5..=8.
pub fn bounded_sphere() -> Fixture {
    let mut tops = Vec::new();
    let faces = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
    for f in faces {
        tops.push(vec![0, f[0], f[1], f[2]]);
        tops.extend(prism(f, f.map(|v| v + 4)));
    }
    let mut fx = fixture(&tops);
    let t = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    let mut coords = vec![[0.0; 3]];
    coords.extend(t);
    coords.extend(t.map(|p| p.map(|c| 3.0 * c)));
    fx.coords = Some(coords);
    let report = crate::complex::check_manifold(&fx.complex);
    fx.boundary = report.boundary;
    fx
}

/// Ring of four triangular prisms: a solid torus with its boundary torus.
pub fn solid_torus() -> Fixture {
    let sections = 4;
    let mut tops = Vec::new();
    for i in 0..sections {
        let j = (i + 1) % sections;
        let bottom = [3 * i, 3 * i + 1, 3 * i + 2];
        let top = [3 * j, 3 * j + 1, 3 * j + 2];
        tops.extend(prism(bottom, top));
    }
    let mut fx = fixture(&tops);
    let mut coords = Vec::new();
    for i in 0..sections {
        let th = std::f64::consts::TAU * i as f64 / sections as f64;
        for k in 0..3 {
            let ph = std::f64::consts::TAU * k as f64 / 3.0;
            let r = 2.0 + 0.7 * ph.cos();
            coords.push([r * th.cos(), r * th.sin(), 0.7 * ph.sin()]);
        }
    }
    fx.coords = Some(coords);
    fx.boundary = crate::complex::check_manifold(&fx.complex).boundary;
    fx
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    SimplicialComplex::build(&torus_triangles()).expect("torus")
}

fn torus_triangles() -> Vec<Vec<usize>> {
    (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect()
}

/// Torus times an interval: two boundary tori, so no single longitude.
pub fn thickened_torus() -> Fixture {
    let mut tops = Vec::new();
    for t in torus_triangles() {
        let mut b = [t[0], t[1], t[2]];
        b.sort_unstable();
        tops.extend(prism(b, b.map(|v| v + 7)));
    }
    let mut fx = fixture(&tops);
    fx.boundary = crate::complex::check_manifold(&fx.complex).boundary;
    fx
}
