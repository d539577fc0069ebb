//! Bundled cube triangulation whose 2-skeleton carries a Möbius strip.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::complex::{check_manifold, Chain, ManifoldClass, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};

const DATA: &str = include_str!("../../fixtures/moebius_cube.json");
const SHA256: &str = "29478cb1365bd684b7e5140b011f99061fba05a1a7756aba59ecfe34537d5f23";

#[derive(Deserialize)]
struct Raw {
    tetrahedra: Vec<Vec<usize>>,
    coords: Vec<[f64; 3]>,
    strip: Vec<Vec<usize>>,
    /// Boundary curve of the strip as a vertex cycle.
    boundary: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MoebiusFixture {
    pub complex: SimplicialComplex,
    pub coords: Vec<[f64; 3]>,
    /// Triangles of the strip, as vertex labels.
    pub strip: Vec<Vec<usize>>,
    /// The strip's triangles as a subcomplex.
    pub strip_subcomplex: Subcomplex,
    /// The boundary curve of the strip.
    pub input: Chain,
}

pub fn gen_moebius_cube() -> Result<MoebiusFixture> {
    load(DATA, SHA256)
}

fn load(data: &str, sha: &str) -> Result<MoebiusFixture> {
    let digest = hex::encode(Sha256::digest(data.as_bytes()));
    if digest != sha {
        return Err(Error::Fixture(format!("checksum mismatch: {digest}")));
    }
    let raw: Raw = serde_json::from_str(data).map_err(|e| Error::Fixture(e.to_string()))?;
    let complex = SimplicialComplex::build(&raw.tetrahedra)?;
    if check_manifold(&complex).class != ManifoldClass::ManifoldWithBoundary3 {
        return Err(Error::Fixture("cube is not a 3-manifold with boundary".into()));
    }
    for n in 2..=3 {
        let d = complex.boundary_matrix(n - 1)?.mul(&complex.boundary_matrix(n)?);
        if !d.is_zero() {
            return Err(Error::Fixture(format!("boundary of boundary is nonzero in dimension {n}")));
        }
    }
    if raw.coords.len() != complex.vertex_count() {
        return Err(Error::Fixture("coordinate count differs from vertex count".into()));
    }

    for t in &raw.strip {
        if complex.id_of_labels(t).is_none() {
            return Err(Error::Fixture(format!("strip triangle {t:?} missing")));
        }
    }
    let strip_subcomplex = Subcomplex::from_simplices(&complex, &raw.strip)?;
    let w = &raw.boundary;
    let mut input = Chain::zero(1);
    for i in 0..w.len() {
        let (a, b) = (w[i], w[(i + 1) % w.len()]);
        let id = complex
            .id_of_labels(&[a, b])
            .filter(|&id| strip_subcomplex.contains(1, id))
            .ok_or_else(|| Error::Fixture(format!("boundary edge {a}-{b} not on the strip")))?;
        input.add(id, if a < b { 1 } else { -1 });
    }
    Ok(MoebiusFixture { complex, coords: raw.coords, strip: raw.strip, strip_subcomplex, input })
}
