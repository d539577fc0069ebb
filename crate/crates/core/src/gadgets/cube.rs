//! Lattice instances: the square grid and the Freudenthal-triangulated cube.

use crate::complex::{Chain, SimplicialComplex, Subcomplex, WeightAssignment};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Area of a lattice triangle lying in a coordinate plane.
pub const AXIS_AREA: (i64, i64) = (1, 2);
/// Rational stand-in for `sqrt(2) / 2`, the area of the other lattice triangles.
pub const DIAGONAL_AREA: (i64, i64) = (99, 140);

#[derive(Clone, Debug)]
pub struct GridInstance {
    pub complex: SimplicialComplex,
    pub left: Subcomplex,
    pub right: Subcomplex,
    /// `left` union `right`.
    pub subcomplex: Subcomplex,
    /// `v_R - v_L` on the bottom row.
    pub input: Chain,
    pub coords: Vec<[f64; 3]>,
    pub size: usize,
}

/// Vertex `(i, j)` of the `N x N` grid has label `i (N + 1) + j`, with `i` the column.
pub fn grid_vertex(n: usize, i: usize, j: usize) -> usize {
    i * (n + 1) + j
}

/// The square `[0, N]^2` with every unit cell split along its rising diagonal.
pub fn gen_grid(n: usize) -> Result<GridInstance> {
    if n < 1 {
        return Err(Error::Precondition("grid size must be at least 1".into()));
    }
    let v = |i, j| grid_vertex(n, i, j);
    let mut tops = Vec::new();
    for i in 0..n {
        for j in 0..n {
            tops.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            tops.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    let complex = SimplicialComplex::build(&tops)?;
    let column = |i: usize| -> Result<Subcomplex> {
        let edges: Vec<Vec<usize>> = (0..n).map(|j| vec![v(i, j), v(i, j + 1)]).collect();
        Subcomplex::from_simplices(&complex, &edges)
    };
    let left = column(0)?;
    let right = column(n)?;
    let subcomplex = left.union(&right);
    let input = Chain::from_pairs(0, [(v(n, 0), 1), (v(0, 0), -1)]);
    let mut coords = vec![[0.0; 3]; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            coords[v(i, j)] = [i as f64, j as f64, 0.0];
        }
    }
    Ok(GridInstance { complex, left, right, subcomplex, input, coords, size: n })
}

#[derive(Clone, Debug)]
pub struct CubeKnot {
    pub complex: SimplicialComplex,
    pub weights: WeightAssignment,
    /// The loop as a 1-cycle.
    pub input: Chain,
    pub boundary: Subcomplex,
    pub coords: Vec<[f64; 3]>,
    /// Notes on the geometry, e.g. the area stand-ins.
    pub metadata: Vec<(String, String)>,
}

pub fn cube_vertex(n: usize, p: [usize; 3]) -> usize {
    p[0] + (n + 1) * p[1] + (n + 1) * (n + 1) * p[2]
}

/// The eight corners of `[0, N]^3` in Gray-code order.
pub fn hamiltonian_corner_cycle(n: usize) -> Vec<[usize; 3]> {
    [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 1, 1], [1, 1, 1], [1, 0, 1], [0, 0, 1]]
        .map(|p: [usize; 3]| p.map(|c| c * n))
        .to_vec()
}

fn freudenthal(n: usize) -> Vec<Vec<usize>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for z in 0..n {
        for y in 0..n {
            for x in 0..n {
                for perm in PERMS {
                    let mut p = [x, y, z];
                    let mut t = vec![cube_vertex(n, p)];
                    for axis in perm {
                        p[axis] += 1;
                        t.push(cube_vertex(n, p));
                    }
                    tets.push(t);
                }
            }
        }
    }
    tets
}

fn lattice_point(n: usize, label: usize) -> [usize; 3] {
    [label % (n + 1), label / (n + 1) % (n + 1), label / ((n + 1) * (n + 1))]
}

/// `[0, N]^3` in six tetrahedra per unit cell, with the closed lattice loop
/// through `corners` as input and triangle areas as weights.
///
/// Consecutive corners (cyclically) must differ in exactly one coordinate.
pub fn gen_cube_knot(n: usize, corners: &[[usize; 3]]) -> Result<CubeKnot> {
    if n < 1 {
        return Err(Error::Precondition("cube subdivision must be at least 1".into()));
    }
    if corners.len() < 2 {
        return Err(Error::Precondition("loop needs at least two corners".into()));
    }
    let complex = SimplicialComplex::build(&freudenthal(n))?;
    let mut input = Chain::zero(1);
    for (k, &p) in corners.iter().enumerate() {
        let q = corners[(k + 1) % corners.len()];
        if p.iter().chain(&q).any(|&c| c > n) {
            return Err(Error::Precondition(format!("loop point {p:?} outside the cube")));
        }
        let axes: Vec<usize> = (0..3).filter(|&i| p[i] != q[i]).collect();
        if axes.len() != 1 {
            return Err(Error::Precondition(format!("loop segment {p:?} -> {q:?} is not along a lattice axis")));
        }
        let axis = axes[0];
        let mut cur = p;
        while cur[axis] != q[axis] {
            let mut nxt = cur;
            if q[axis] > cur[axis] {
                nxt[axis] += 1;
            } else {
                nxt[axis] -= 1;
            }
            let (a, b) = (cube_vertex(n, cur), cube_vertex(n, nxt));
            let id = complex.id_of_labels(&[a, b]).expect("lattice edge");
            input.add(id, if a < b { 1 } else { -1 });
            cur = nxt;
        }
    }
    if !complex.apply_boundary(&input)?.is_zero() {
        return Err(Error::Internal("lattice loop is not closed".into()));
    }

    let axis = Rational::new(AXIS_AREA.0, AXIS_AREA.1);
    let diag = Rational::new(DIAGONAL_AREA.0, DIAGONAL_AREA.1);
    let weights: Vec<Rational> = complex
        .simplices(2)
        .iter()
        .map(|t| {
            let p: Vec<[usize; 3]> = t.iter().map(|&v| lattice_point(n, complex.labels()[v])).collect();
            let planar = (0..3).any(|i| p[0][i] == p[1][i] && p[1][i] == p[2][i]);
            if planar {
                axis.clone()
            } else {
                diag.clone()
            }
        })
        .collect();
    let coords = complex.labels().iter().map(|&l| lattice_point(n, l).map(|c| c as f64)).collect();
    let boundary = crate::complex::check_manifold(&complex)
        .boundary
        .ok_or_else(|| Error::Internal("cube has no boundary".into()))?;
    Ok(CubeKnot {
        weights: WeightAssignment::new(2, weights)?,
        complex,
        input,
        boundary,
        coords,
        metadata: vec![
            ("axis_area".into(), format!("{}/{}", AXIS_AREA.0, AXIS_AREA.1)),
            ("diagonal_area".into(), format!("{}/{} (stand-in for sqrt(2)/2)", DIAGONAL_AREA.0, DIAGONAL_AREA.1)),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{check_manifold, ManifoldClass};
    use crate::homology::homology;

    #[test]
    fn grid_counts() {
        let g = gen_grid(1).unwrap();
        assert_eq!((g.complex.count(0), g.complex.count(1), g.complex.count(2)), (4, 5, 2));
        let g = gen_grid(2).unwrap();
        assert_eq!((g.complex.count(0), g.complex.count(1), g.complex.count(2)), (9, 16, 8));
        for n in 1..5 {
            let g = gen_grid(n).unwrap();
            assert!(homology(&g.complex, 1).unwrap().is_trivial());
            assert_eq!(homology(&g.complex, 0).unwrap().betti, 1);
            assert_eq!(g.left.members(1).len(), n);
        }
        assert!(gen_grid(0).is_err());
    }

    #[test]
    fn cube_is_a_ball() {
        for n in 1..=2 {
            let k = gen_cube_knot(n, &hamiltonian_corner_cycle(n)).unwrap();
            assert_eq!(k.complex.count(3), 6 * n * n * n);
            assert_eq!(check_manifold(&k.complex).class, ManifoldClass::ManifoldWithBoundary3);
            assert!(k.input.support().all(|e| k.boundary.contains(1, e)));
            assert_eq!(k.input.len(), 8 * n);
        }
    }

    #[test]
    fn area_classes() {
        let k = gen_cube_knot(1, &hamiltonian_corner_cycle(1)).unwrap();
        let half = Rational::new(1, 2);
        let axis = k.weights.as_slice().iter().filter(|w| **w == half).count();
        // two per cube face; the six around the long diagonal are not planar
        assert_eq!(axis, 12);
        assert_eq!(k.weights.len(), axis + 6);
    }

    #[test]
    fn rejects_off_lattice_loops() {
        assert!(gen_cube_knot(2, &[[0, 0, 0], [1, 1, 0], [0, 1, 0]]).is_err());
        assert!(gen_cube_knot(1, &[[0, 0, 0], [2, 0, 0]]).is_err());
    }
}
