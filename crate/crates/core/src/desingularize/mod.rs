//! Embedded curves and surfaces from integral chains.

mod curves;
mod surface;

pub use curves::{desingularize_1, extract_embedded_path, EmbeddedPath, Strand, StrandComponent, StrandFamily, StrandMatch};
pub use surface::{desingularize_2, surface_stats, ComponentStats, EdgeGluing, EmbeddedSurface, SurfaceFace, SurfaceStats, VertexCorners};

use std::collections::VecDeque;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Sign of the permutation sorting `t`.
pub(crate) fn permutation_sign(t: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] > t[j] {
                s = -s;
            }
        }
    }
    s
}

/// Coherent orientation signs for the top simplices of a pure `n`-complex.
///
/// The lowest id of each component is positive. Fails when a component is not
/// orientable.
pub(crate) fn orient(x: &SimplicialComplex, n: usize) -> Result<Vec<i64>> {
    let cof = x.coface_table(n);
    let mut faces_of: Vec<Vec<usize>> = vec![Vec::new(); x.count(n)];
    for (f, c) in cof.iter().enumerate() {
        for &(s, _) in c {
            faces_of[s].push(f);
        }
    }
    let mut eps = vec![0i64; x.count(n)];
    for root in 0..x.count(n) {
        if eps[root] != 0 {
            continue;
        }
        eps[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for &f in &faces_of[s] {
                let c = &cof[f];
                if c.len() != 2 {
                    continue;
                }
                let (mine, other) = if c[0].0 == s { (c[0], c[1]) } else { (c[1], c[0]) };
                let want = -eps[s] * mine.1 * other.1;
                if eps[other.0] == 0 {
                    eps[other.0] = want;
                    queue.push_back(other.0);
                } else if eps[other.0] != want {
                    return Err(Error::Precondition(format!(
                        "complex is not orientable near {:?}",
                        x.simplex(n - 1, f)
                    )));
                }
            }
        }
    }
    Ok(eps)
}
