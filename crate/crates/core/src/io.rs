//! The JSON complex document and OFF mesh export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::{Chain, SimplicialComplex, Subcomplex, WeightAssignment};
use crate::desingularize::EmbeddedSurface;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const FORMAT: &str = "homchain-complex";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    format: String,
    version: u32,
    dimension: usize,
    /// All simplices, per dimension, as tuples of vertex labels; position is the id.
    simplices: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    weights: BTreeMap<usize, Vec<Rational>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    chains: BTreeMap<String, RawChain>,
    /// Member ids per dimension.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    dim: usize,
    /// `(id, coefficient)` pairs.
    terms: Vec<(usize, i64)>,
}

/// A complex with its weights, named chains and subcomplexes, coordinates and metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDocument {
    pub complex: SimplicialComplex,
    pub weights: BTreeMap<usize, WeightAssignment>,
    pub chains: BTreeMap<String, Chain>,
    pub subcomplexes: BTreeMap<String, Subcomplex>,
    /// Indexed by vertex id.
    pub coords: Option<Vec<[f64; 3]>>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl ComplexDocument {
    pub fn new(complex: SimplicialComplex) -> Self {
        ComplexDocument {
            complex,
            weights: BTreeMap::new(),
            chains: BTreeMap::new(),
            subcomplexes: BTreeMap::new(),
            coords: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_weights(mut self, w: WeightAssignment) -> Self {
        self.weights.insert(w.dim(), w);
        self
    }

    pub fn with_chain(mut self, name: &str, c: Chain) -> Self {
        self.chains.insert(name.into(), c);
        self
    }

    pub fn with_subcomplex(mut self, name: &str, a: Subcomplex) -> Self {
        self.subcomplexes.insert(name.into(), a);
        self
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 3]>) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn chain(&self, name: &str) -> Result<&Chain> {
        self.chains.get(name).ok_or_else(|| Error::Document(format!("no chain named `{name}`")))
    }

    pub fn subcomplex(&self, name: &str) -> Result<&Subcomplex> {
        self.subcomplexes.get(name).ok_or_else(|| Error::Document(format!("no subcomplex named `{name}`")))
    }

    /// Weights on `n`-simplices; unit weights when the document has none.
    pub fn weights_or_unit(&self, n: usize) -> WeightAssignment {
        self.weights.get(&n).cloned().unwrap_or_else(|| WeightAssignment::uniform(n, self.complex.count(n)))
    }

    /// Rational metadata value, e.g. a threshold.
    pub fn meta_rational(&self, key: &str) -> Option<Rational> {
        match self.metadata.get(key)? {
            serde_json::Value::String(s) => s.parse().ok(),
            serde_json::Value::Number(n) => n.as_i64().map(Rational::from),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        let x = &self.complex;
        let simplices = if x.is_empty() {
            Vec::new()
        } else {
            (0..=x.dim())
                .map(|n| x.simplices(n).iter().map(|s| s.iter().map(|&v| x.labels()[v]).collect()).collect())
                .collect()
        };
        let raw = Raw {
            format: FORMAT.into(),
            version: FORMAT_VERSION,
            dimension: x.dim(),
            simplices,
            weights: self.weights.iter().map(|(&n, w)| (n, w.as_slice().to_vec())).collect(),
            chains: self
                .chains
                .iter()
                .map(|(k, c)| (k.clone(), RawChain { dim: c.dim(), terms: c.iter().map(|(&i, &v)| (i, v)).collect() }))
                .collect(),
            subcomplexes: self
                .subcomplexes
                .iter()
                .map(|(k, a)| (k.clone(), (0..=x.dim()).map(|n| a.members(n)).collect()))
                .collect(),
            coords: self.coords.clone(),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if raw.format != FORMAT {
            return Err(Error::Document(format!("format `{}` is not `{FORMAT}`", raw.format)));
        }
        if raw.version != FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported version {}", raw.version)));
        }
        let all: Vec<Vec<usize>> = raw.simplices.iter().flatten().cloned().collect();
        let complex = SimplicialComplex::from_simplices(all)?;
        if !complex.is_empty() && complex.dim() != raw.dimension {
            return Err(Error::Document(format!("dimension {} but simplices reach {}", raw.dimension, complex.dim())));
        }
        // document position -> complex id, per dimension
        let mut ids: Vec<Vec<usize>> = Vec::new();
        for (n, level) in raw.simplices.iter().enumerate() {
            if n > complex.dim() || level.len() != complex.count(n) {
                return Err(Error::Document(format!("{}-simplices are not face-closed or repeat", n)));
            }
            let mut seen = vec![false; level.len()];
            let mut map = Vec::with_capacity(level.len());
            for s in level {
                if s.len() != n + 1 {
                    return Err(Error::Document(format!("simplex {s:?} listed in dimension {n}")));
                }
                let id = complex.id_of_labels(s).ok_or_else(|| Error::Document(format!("unknown simplex {s:?}")))?;
                if std::mem::replace(&mut seen[id], true) {
                    return Err(Error::Document(format!("simplex {s:?} listed twice")));
                }
                map.push(id);
            }
            ids.push(map);
        }
        if !complex.is_empty() && ids.len() != complex.dim() + 1 {
            return Err(Error::Document("simplex lists are not face-closed".into()));
        }
        let resolve = |n: usize, i: usize| -> Result<usize> {
            ids.get(n)
                .and_then(|m| m.get(i))
                .copied()
                .ok_or(Error::UnknownSimplexId { dim: n, id: i })
        };

        let mut weights = BTreeMap::new();
        for (n, list) in raw.weights {
            if n > complex.dim() || list.len() != complex.count(n) {
                return Err(Error::Document(format!(
                    "{} weights for {} simplices in dimension {n}",
                    list.len(),
                    if n > complex.dim() { 0 } else { complex.count(n) }
                )));
            }
            let mut w = vec![Rational::zero(); list.len()];
            for (i, v) in list.into_iter().enumerate() {
                w[resolve(n, i)?] = v;
            }
            weights.insert(n, WeightAssignment::new(n, w)?);
        }
        let mut chains = BTreeMap::new();
        for (name, c) in raw.chains {
            let mut terms = Vec::with_capacity(c.terms.len());
            for (i, v) in c.terms {
                terms.push((resolve(c.dim, i)?, v));
            }
            chains.insert(name, Chain::from_pairs(c.dim, terms));
        }
        let mut subcomplexes = BTreeMap::new();
        for (name, levels) in raw.subcomplexes {
            let mut tuples = Vec::new();
            for (n, members) in levels.iter().enumerate() {
                for &i in members {
                    tuples.push(complex.simplex(n, resolve(n, i)?).to_vec());
                }
            }
            let a = Subcomplex::from_simplices(&complex, &tuples)?;
            let listed: usize = levels.iter().map(Vec::len).sum();
            let closed: usize = (0..=complex.dim()).map(|n| a.members(n).len()).sum();
            if listed != closed {
                return Err(Error::Document(format!("subcomplex `{name}` is not face-closed")));
            }
            subcomplexes.insert(name, a);
        }
        if let Some(c) = &raw.coords {
            if c.len() != complex.vertex_count() {
                return Err(Error::Document(format!("{} coordinates for {} vertices", c.len(), complex.vertex_count())));
            }
        }
        let coords = raw.coords.map(|c| {
            let mut out = vec![[0.0; 3]; c.len()];
            for (i, p) in c.into_iter().enumerate() {
                out[ids[0][i]] = p;
            }
            out
        });
        Ok(ComplexDocument { complex, weights, chains, subcomplexes, coords, metadata: raw.metadata })
    }
}

/// ASCII OFF mesh of a surface; every face gets its own three vertices.
pub fn write_off(surface: &EmbeddedSurface, m: &SimplicialComplex, coords: &[[f64; 3]]) -> String {
    let tris = surface.geometric_triangles(m, coords);
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} 0", 3 * tris.len(), tris.len()).unwrap();
    for t in &tris {
        for p in t {
            writeln!(s, "{} {} {}", p[0], p[1], p[2]).unwrap();
        }
    }
    for k in 0..tris.len() {
        writeln!(s, "3 {} {} {}", 3 * k, 3 * k + 1, 3 * k + 2).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{bounded_sphere, gen_grid, gen_sat_complex, SatInstance};

    fn grid_doc() -> ComplexDocument {
        let g = gen_grid(3).unwrap();
        ComplexDocument::new(g.complex.clone())
            .with_weights(WeightAssignment::uniform(1, g.complex.count(1)))
            .with_chain("b", g.input.clone())
            .with_subcomplex("A", g.subcomplex.clone())
            .with_coords(g.coords.clone())
            .with_meta("threshold", "3")
    }

    #[test]
    fn round_trip_is_exact() {
        let doc = grid_doc();
        let text = doc.to_json();
        let back = ComplexDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.meta_rational("threshold"), Some(Rational::from(3)));

        let g = gen_sat_complex(&SatInstance::parse("1 2 -3\n").unwrap()).unwrap();
        let doc = ComplexDocument::new(g.complex).with_weights(g.weights).with_chain("b", g.input);
        let text = doc.to_json();
        assert_eq!(ComplexDocument::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn accepts_reordered_simplices_and_integer_weights() {
        let text = r#"{"format":"homchain-complex","version":1,"dimension":1,
            "simplices":[[[2],[0],[1]],[[1,2],[0,1]]],
            "weights":{"1":[3,"1/2"]},
            "chains":{"c":{"dim":1,"terms":[[0,1],[1,-1]]}}}"#;
        let doc = ComplexDocument::from_json(text).unwrap();
        let x = &doc.complex;
        let w = &doc.weights[&1];
        assert_eq!(w.get(x.id_of_labels(&[1, 2]).unwrap()), &Rational::from(3));
        assert_eq!(w.get(x.id_of_labels(&[0, 1]).unwrap()), &Rational::new(1, 2));
        let c = doc.chain("c").unwrap();
        assert_eq!(c.get(x.id_of_labels(&[1, 2]).unwrap()), 1);
        assert_eq!(c.get(x.id_of_labels(&[0, 1]).unwrap()), -1);
    }

    #[test]
    fn rejects_bad_documents() {
        let base = |s: &str| format!(r#"{{"format":"homchain-complex","version":1,"dimension":1,{s}}}"#);
        let cases = [
            base(r#""simplices":[[[0],[1]],[[0,1],[0,1]]]"#),
            base(r#""simplices":[[[0]],[[0,1]]]"#),
            base(r#""simplices":[[[0],[1]],[[0,1]]],"chains":{"c":{"dim":1,"terms":[[4,1]]}}"#),
            base(r#""simplices":[[[0],[1]],[[0,1]]],"subcomplexes":{"A":[[],[0]]}"#),
            base(r#""simplices":[[[0],[1]],[[0,1]]],"weights":{"1":["x"]}"#),
            r#"{"format":"other","version":1,"dimension":0,"simplices":[[[0]]]}"#.to_string(),
            "{".to_string(),
        ];
        for c in cases {
            assert!(ComplexDocument::from_json(&c).is_err(), "{c}");
        }
        assert!(matches!(ComplexDocument::from_json("{\n\n  \"format\": 3\n}"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn off_export() {
        let f = bounded_sphere();
        let m = &f.complex;
        let s = crate::desingularize::desingularize_2(m, &Chain::zero(2), None).unwrap();
        assert!(write_off(&s, m, f.coords.as_ref().unwrap()).starts_with("OFF\n0 0 0\n"));
        let t = m.id_of(&[5, 6, 7]).unwrap();
        let s = crate::desingularize::desingularize_2(m, &Chain::from_pairs(2, [(t, 1)]), None).unwrap();
        let off = write_off(&s, m, f.coords.as_ref().unwrap());
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[1], "3 1 0");
        assert_eq!(lines.len(), 2 + 3 + 1);
        assert_eq!(lines[5], "3 0 1 2");
    }
}
