//! Finite simplicial complexes, integer chains, weights and boundary operators.
//!
//! Simplices are stored with strictly increasing vertices; that order is also
//! the orientation. Within each dimension, simplex ids are lexicographic ranks
//! of the vertex tuples, so ids are canonical for a given vertex set.

mod chain;
mod manifold;
mod matrix;

use std::collections::{BTreeSet, HashMap};

pub use chain::{Chain, WeightAssignment};
pub use manifold::{check_manifold, ManifoldClass, ManifoldReport};
pub use matrix::SparseIntMatrix;

use crate::error::{Error, Result};

/// An oriented simplex, vertices strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts `vertices`; fails if one repeats.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(vertices));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with their signs in the boundary, `(-1)^i` for the
    /// face missing vertex `i`.
    pub fn faces(&self) -> impl Iterator<Item = (i64, Vec<usize>)> + '_ {
        (0..self.0.len()).filter(|_| self.0.len() > 1).map(move |i| {
            let mut f = self.0.clone();
            f.remove(i);
            (if i % 2 == 0 { 1 } else { -1 }, f)
        })
    }
}

/// An immutable, face-closed simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `labels[v]` is the input label of compacted vertex `v`.
    labels: Vec<usize>,
}

impl SimplicialComplex {
    /// Face closure of `tops`. Duplicate inputs are rejected.
    pub fn build(tops: &[Vec<usize>]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for t in tops {
            let s = Simplex::new(t.clone())?;
            if !seen.insert(s.0.clone()) {
                return Err(Error::DuplicateSimplex(s.0));
            }
        }
        Self::closure(seen.into_iter())
    }

    /// Face closure of any collection of simplices; duplicates are merged.
    pub fn from_simplices<I>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut set = BTreeSet::new();
        for s in simplices {
            set.insert(Simplex::new(s)?.0);
        }
        Self::closure(set.into_iter())
    }

    fn closure(tops: impl Iterator<Item = Vec<usize>>) -> Result<Self> {
        let tops: Vec<Vec<usize>> = tops.collect();
        let labels: Vec<usize> = tops
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let relabel: HashMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let dim = tops.iter().map(|t| t.len() - 1).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); dim + 1];
        for t in &tops {
            // relabeling is monotone, so the tuple stays sorted
            let t: Vec<usize> = t.iter().map(|v| relabel[v]).collect();
            insert_faces(&mut sets, t);
        }
        if tops.is_empty() {
            sets.clear();
        }
        let simplices: Vec<Vec<Vec<usize>>> =
            sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(SimplicialComplex { simplices, index, labels })
    }

    /// Top dimension; 0 for the empty complex.
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.count(0)
    }

    /// Number of `n`-simplices (0 above the top dimension).
    pub fn count(&self, n: usize) -> usize {
        self.simplices.get(n).map_or(0, Vec::len)
    }

    pub fn simplices(&self, n: usize) -> &[Vec<usize>] {
        self.simplices.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, n: usize, id: usize) -> &[usize] {
        &self.simplices[n][id]
    }

    /// Id of the simplex with the given vertices (any order).
    pub fn id_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        let n = v.len().checked_sub(1)?;
        self.index.get(n)?.get(&v).copied()
    }

    /// Input labels of the compacted vertices.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Simplices not contained in any larger simplex.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut covered: Vec<Vec<bool>> =
            self.simplices.iter().map(|l| vec![false; l.len()]).collect();
        for n in 1..self.simplices.len() {
            for s in &self.simplices[n] {
                for (_, f) in Simplex(s.clone()).faces() {
                    covered[n - 1][self.index[n - 1][&f]] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (n, level) in self.simplices.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if !covered[n][i] {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Ids of the `n`-simplices containing `(n-1)`-simplex `face`, with the sign
    /// of `face` in their boundary.
    pub fn cofaces(&self, n: usize, face: usize) -> Vec<(usize, i64)> {
        self.coface_table(n)[face].clone()
    }

    /// For every `(n-1)`-simplex, its `n`-dimensional cofaces and incidence signs.
    pub fn coface_table(&self, n: usize) -> Vec<Vec<(usize, i64)>> {
        let mut table = vec![Vec::new(); self.count(n - 1)];
        for (j, s) in self.simplices(n).iter().enumerate() {
            for (sign, f) in Simplex(s.clone()).faces() {
                table[self.index[n - 1][&f]].push((j, sign));
            }
        }
        table
    }

    /// Matrix of the boundary map from `n`-chains to `(n-1)`-chains.
    pub fn boundary_matrix(&self, n: usize) -> Result<SparseIntMatrix> {
        if n < 1 || n > self.dim() || self.is_empty() {
            return Err(Error::DimensionOutOfRange { got: n, lo: 1, hi: self.dim() });
        }
        let mut cols = Vec::with_capacity(self.count(n));
        for s in &self.simplices[n] {
            let mut col: Vec<(usize, i64)> = Simplex(s.clone())
                .faces()
                .map(|(sign, f)| (self.index[n - 1][&f], sign))
                .collect();
            col.sort_unstable();
            cols.push(col);
        }
        Ok(SparseIntMatrix::from_columns(self.count(n - 1), cols))
    }

    /// Boundary of an `n`-chain, `n >= 1`.
    pub fn apply_boundary(&self, c: &Chain) -> Result<Chain> {
        let n = c.dim();
        if n == 0 || n > self.dim() {
            return Err(Error::DimensionOutOfRange { got: n, lo: 1, hi: self.dim() });
        }
        let mut out = Chain::zero(n - 1);
        for (&id, &coef) in c.iter() {
            let s = self
                .simplices
                .get(n)
                .and_then(|l| l.get(id))
                .ok_or(Error::UnknownSimplexId { dim: n, id })?;
            for (sign, f) in Simplex(s.clone()).faces() {
                out.add(self.index[n - 1][&f], sign * coef);
            }
        }
        Ok(out)
    }

    /// Boundary matrix of the pair `(self, a)`: rows and columns of simplices in
    /// `a` are deleted.
    pub fn relative_boundary_matrix(&self, a: &Subcomplex, n: usize) -> Result<RelativeBoundary> {
        let full = self.boundary_matrix(n)?;
        let rows: Vec<usize> = (0..self.count(n - 1)).filter(|&i| !a.contains(n - 1, i)).collect();
        let cols: Vec<usize> = (0..self.count(n)).filter(|&j| !a.contains(n, j)).collect();
        let mut row_pos = vec![usize::MAX; self.count(n - 1)];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                full.column(j)
                    .iter()
                    .filter(|(r, _)| row_pos[*r] != usize::MAX)
                    .map(|&(r, v)| (row_pos[r], v))
                    .collect()
            })
            .collect();
        Ok(RelativeBoundary {
            matrix: SparseIntMatrix::from_columns(rows.len(), columns),
            rows,
            cols,
        })
    }

    /// Vertex ids spanning a simplex with the given input labels.
    pub fn id_of_labels(&self, labels: &[usize]) -> Option<usize> {
        let verts: Option<Vec<usize>> =
            labels.iter().map(|l| self.labels.binary_search(l).ok()).collect();
        self.id_of(&verts?)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|n| if n % 2 == 0 { self.count(n) as i64 } else { -(self.count(n) as i64) })
            .sum()
    }
}

fn insert_faces(sets: &mut [BTreeSet<Vec<usize>>], s: Vec<usize>) {
    let n = s.len() - 1;
    if sets[n].contains(&s) {
        return;
    }
    if n > 0 {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            insert_faces(sets, f);
        }
    }
    sets[n].insert(s);
}

/// The relative boundary matrix plus the original ids of its rows and columns.
#[derive(Clone, Debug)]
pub struct RelativeBoundary {
    pub matrix: SparseIntMatrix,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// A face-closed subset of a complex, as membership flags per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    flags: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(x: &SimplicialComplex) -> Self {
        Subcomplex { flags: (0..=x.dim()).map(|n| vec![false; x.count(n)]).collect() }
    }

    pub fn full(x: &SimplicialComplex) -> Self {
        Subcomplex { flags: (0..=x.dim()).map(|n| vec![true; x.count(n)]).collect() }
    }

    /// Closure of the listed simplices (vertex tuples in compacted ids).
    pub fn from_simplices(x: &SimplicialComplex, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut sub = Self::empty(x);
        for s in simplices {
            let s = Simplex::new(s.clone())?;
            if x.id_of(s.vertices()).is_none() {
                return Err(Error::UnknownSimplex(s.0));
            }
            sub.insert_closed(x, s.vertices());
        }
        Ok(sub)
    }

    fn insert_closed(&mut self, x: &SimplicialComplex, s: &[usize]) {
        let n = s.len() - 1;
        let id = x.index[n][s];
        if self.flags[n][id] {
            return;
        }
        self.flags[n][id] = true;
        if n > 0 {
            for (_, f) in Simplex(s.to_vec()).faces() {
                self.insert_closed(x, &f);
            }
        }
    }

    pub fn contains(&self, n: usize, id: usize) -> bool {
        self.flags.get(n).and_then(|l| l.get(id)).copied().unwrap_or(false)
    }

    pub fn members(&self, n: usize) -> Vec<usize> {
        self.flags
            .get(n)
            .map(|l| l.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect())
            .unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.iter().all(|l| l.iter().all(|f| !f))
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            flags: self
                .flags
                .iter()
                .zip(&other.flags)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x || *y).collect())
                .collect(),
        }
    }

    /// Whether every face of every member is a member.
    pub fn is_face_closed(&self, x: &SimplicialComplex) -> bool {
        (1..self.flags.len()).all(|n| {
            self.members(n).into_iter().all(|id| {
                Simplex(x.simplex(n, id).to_vec())
                    .faces()
                    .all(|(_, f)| self.flags[n - 1][x.index[n - 1][&f]])
            })
        })
    }

    /// The subcomplex as a standalone complex, plus maps from its ids to the
    /// parent ids per dimension. Vertex labels are the parent's vertex ids.
    pub fn to_complex(&self, x: &SimplicialComplex) -> Result<(SimplicialComplex, Vec<Vec<usize>>)> {
        let tops: Vec<Vec<usize>> = (0..self.flags.len())
            .flat_map(|n| self.members(n).into_iter().map(move |id| (n, id)))
            .map(|(n, id)| x.simplex(n, id).to_vec())
            .collect();
        let sub = SimplicialComplex::from_simplices(tops)?;
        let maps = (0..=sub.dim())
            .map(|n| {
                sub.simplices(n)
                    .iter()
                    .map(|s| {
                        let parent: Vec<usize> = s.iter().map(|&v| sub.labels[v]).collect();
                        x.index[n][&parent]
                    })
                    .collect()
            })
            .collect();
        Ok((sub, maps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap()
    }

    #[test]
    fn closure_counts() {
        let t = SimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (3, 3, 1));
        let d3 = SimplicialComplex::build(&[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!((d3.count(0), d3.count(1), d3.count(2), d3.count(3)), (4, 6, 4, 1));
        let s = tetra_boundary();
        assert_eq!((s.count(2), s.count(3), s.dim()), (4, 0, 2));
    }

    #[test]
    fn unsorted_input_is_sorted_and_duplicates_rejected() {
        let c = SimplicialComplex::build(&[vec![2, 0, 1]]).unwrap();
        assert_eq!(c.simplex(2, 0), &[0, 1, 2]);
        let err = SimplicialComplex::build(&[vec![0, 1, 2], vec![2, 1, 0]]).unwrap_err();
        assert_eq!(err, Error::DuplicateSimplex(vec![0, 1, 2]));
        assert!(matches!(
            SimplicialComplex::build(&[vec![0, 0, 1]]),
            Err(Error::RepeatedVertex(_))
        ));
    }

    #[test]
    fn labels_are_compacted() {
        let c = SimplicialComplex::build(&[vec![10, 30], vec![30, 70]]).unwrap();
        assert_eq!(c.labels(), &[10, 30, 70]);
        assert_eq!(c.simplices(1), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(c.id_of_labels(&[70, 30]), Some(1));
    }

    #[test]
    fn triangle_boundary_column() {
        let t = SimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let d = t.boundary_matrix(2).unwrap();
        // edges: (0,1)=0, (0,2)=1, (1,2)=2
        assert_eq!(d.column(0), &[(0, 1), (1, -1), (2, 1)]);
        assert!(t.boundary_matrix(3).is_err());
        assert!(t.boundary_matrix(0).is_err());
    }

    #[test]
    fn boundary_of_boundary_vanishes_on_sphere() {
        let s = tetra_boundary();
        let prod = s.boundary_matrix(1).unwrap().mul(&s.boundary_matrix(2).unwrap());
        assert!(prod.is_zero());
    }

    #[test]
    fn apply_boundary_examples() {
        let t = SimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let b = t.apply_boundary(&Chain::from_pairs(2, [(0, 1)])).unwrap();
        assert_eq!(b, Chain::from_pairs(1, [(2, 1), (1, -1), (0, 1)]));
        let b2 = t.apply_boundary(&Chain::from_pairs(2, [(0, 2)])).unwrap();
        assert_eq!(b2, b.scaled(2));
        assert!(t.apply_boundary(&Chain::zero(0)).is_err());

        let s = tetra_boundary();
        // coherent orientation of the sphere: +[012] -[013] +[023] -[123]
        let sphere = Chain::from_pairs(2, [(0, 1), (1, -1), (2, 1), (3, -1)]);
        assert!(s.apply_boundary(&sphere).unwrap().is_zero());
    }

    #[test]
    fn relative_matrix_extremes() {
        let t = SimplicialComplex::build(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let rel = t.relative_boundary_matrix(&Subcomplex::full(&t), 2).unwrap();
        assert_eq!((rel.matrix.rows(), rel.matrix.cols()), (0, 0));
        let rel = t.relative_boundary_matrix(&Subcomplex::empty(&t), 2).unwrap();
        assert_eq!(rel.matrix, t.boundary_matrix(2).unwrap());
    }

    #[test]
    fn rebuild_is_idempotent() {
        let c = SimplicialComplex::build(&[vec![4, 1, 2], vec![2, 3], vec![7]]).unwrap();
        let again = SimplicialComplex::build(&c.maximal_simplices()).unwrap();
        for n in 0..=c.dim() {
            assert_eq!(c.simplices(n), again.simplices(n));
        }
    }

    #[test]
    fn subcomplex_closure_and_conversion() {
        let s = tetra_boundary();
        let a = Subcomplex::from_simplices(&s, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(a.members(0).len(), 3);
        assert_eq!(a.members(1).len(), 3);
        assert!(a.is_face_closed(&s));
        let (sub, maps) = a.to_complex(&s).unwrap();
        assert_eq!(sub.count(2), 1);
        assert_eq!(maps[2], vec![s.id_of(&[0, 1, 2]).unwrap()]);
        assert!(Subcomplex::from_simplices(&s, &[vec![0, 1, 2, 3]]).is_err());
    }
}
