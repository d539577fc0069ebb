//! Least spanning area: longitude, relative bounding chain, embedded surface.

use crate::complex::{check_manifold, Chain, SimplicialComplex, Subcomplex, WeightAssignment};
use crate::desingularize::{desingularize_1, desingularize_2, EmbeddedSurface};
use crate::error::{Error, Result};
use crate::homology::longitude;
use crate::rational::Rational;
use crate::solver::{solve_obcp, solve_ohcp, solve_relative_obcp, OptimalChain, SolveOptions, Solved};

#[derive(Clone, Debug)]
pub struct SpanningArea {
    /// The curve being spanned, on the boundary of the manifold.
    pub curve: Chain,
    /// Number of closed components of `curve` after uncrossing.
    pub curve_loops: usize,
    pub optimum: OptimalChain,
    pub surface: EmbeddedSurface,
}

impl SpanningArea {
    pub fn area(&self) -> &Rational {
        &self.surface.area
    }

    /// Decision form: is there a spanning surface of area at most `a0`?
    pub fn meets(&self, a0: &Rational) -> bool {
        self.surface.area <= *a0
    }
}

/// Least-area surface spanning a curve on the boundary of a 3-manifold.
///
/// With `curve = None` the boundary must be a torus and the curve is its
/// longitude, shortened on the torus; the surface is then a minimal chain
/// relative to the boundary. With an explicit curve the chain must bound it
/// exactly.
pub fn spanning_area(
    m: &SimplicialComplex,
    w: &WeightAssignment,
    curve: Option<&Chain>,
    opts: &SolveOptions,
) -> Result<SpanningArea> {
    let report = check_manifold(m);
    if !report.is_3_manifold() {
        return Err(Error::NonManifold(report.reason.unwrap_or_else(|| "not a 3-manifold".into())));
    }
    let boundary = report.boundary.unwrap_or_else(|| Subcomplex::empty(m));
    let (curve, optimum) = match curve {
        Some(b) => {
            if let Some(e) = b.support().find(|&e| !boundary.contains(1, e)) {
                return Err(Error::Precondition(format!("curve leaves the boundary at edge {:?}", m.simplex(1, e))));
            }
            match solve_obcp(m, w, b, 2, opts)? {
                Solved::Optimal(c) => (b.clone(), c),
                Solved::Infeasible => return Err(Error::Precondition("curve does not bound".into())),
            }
        }
        None => {
            let lambda = longitude(m, &boundary)?;
            let lambda = shorten_on_boundary(m, &boundary, &lambda, opts)?;
            match solve_relative_obcp(m, &boundary, w, &lambda, 2, opts)? {
                Solved::Optimal(c) => (lambda, c),
                Solved::Infeasible => return Err(Error::Internal("longitude does not bound relative to the boundary".into())),
            }
        }
    };
    if !optimum.integral {
        return Err(Error::Internal("optimal spanning chain is not integral".into()));
    }
    let surface = desingularize_2(m, &optimum.chain, Some(w))?;
    let (b, maps) = boundary.to_complex(m)?;
    let curve_loops = if b.dim() == 2 && !curve.is_zero() {
        let local = Chain::from_pairs(
            1,
            curve.iter().map(|(&id, &v)| (maps[1].binary_search(&id).expect("curve on boundary"), v)),
        );
        desingularize_1(&b, &local, &Subcomplex::empty(&b)).map(|f| f.loops().count()).unwrap_or(0)
    } else {
        0
    };
    Ok(SpanningArea { curve, curve_loops, optimum, surface })
}

/// Shortest cycle on the boundary homologous there to `lambda`, in unit edge lengths.
fn shorten_on_boundary(
    m: &SimplicialComplex,
    boundary: &Subcomplex,
    lambda: &Chain,
    opts: &SolveOptions,
) -> Result<Chain> {
    let (b, maps) = boundary.to_complex(m)?;
    let local = Chain::from_pairs(
        1,
        lambda.iter().map(|(&id, &v)| {
            (maps[1].binary_search(&id).expect("longitude lies on the boundary"), v)
        }),
    );
    let w = WeightAssignment::uniform(1, b.count(1));
    let short = solve_ohcp(&b, &w, &local, 1, opts)?;
    if !short.integral {
        return Ok(lambda.clone());
    }
    Ok(Chain::from_pairs(1, short.chain.iter().map(|(&i, &v)| (maps[1][i], v))))
}
