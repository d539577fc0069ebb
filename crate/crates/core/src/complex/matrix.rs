/// Sparse integer matrix stored by columns; at most one nonzero per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    /// Columns as `(row, value)` lists; entries are merged, sorted, and zeros dropped.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = cols.into_iter().map(normalize).collect();
        SparseIntMatrix { rows, cols }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut c = vec![Vec::new(); cols];
        for &(r, col, v) in entries {
            assert!(r < rows && col < cols, "entry ({r}, {col}) out of bounds");
            c[col].push((r, v));
        }
        Self::from_columns(rows, c)
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut c = vec![Vec::new(); cols];
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                c[j].push((i, v));
            }
        }
        Self::from_columns(rows, c)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cols[j]
            .binary_search_by_key(&i, |&(r, _)| r)
            .map(|k| self.cols[j][k].1)
            .unwrap_or(0)
    }

    /// All `(row, col, value)` triples, column-major.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i, j, v)))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols()]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut c = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            c[i].push((j, v));
        }
        SparseIntMatrix::from_columns(self.cols(), c)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols());
        let mut y = vec![0; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j] != 0 {
                for &(i, v) in col {
                    y[i] += v * x[j];
                }
            }
        }
        y
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols(), other.rows);
        let cols = other
            .cols
            .iter()
            .map(|oc| {
                let mut acc = std::collections::BTreeMap::new();
                for &(k, w) in oc {
                    for &(i, v) in &self.cols[k] {
                        *acc.entry(i).or_insert(0) += v * w;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        SparseIntMatrix::from_columns(self.rows, cols)
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
        rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j)).collect()).collect()
    }
}

fn normalize(mut col: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    col.sort_unstable_by_key(|&(r, _)| r);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}
