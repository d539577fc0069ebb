use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A sparse integer chain: simplex id to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    dim: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, coeffs: BTreeMap::new() }
    }

    /// Builds from `(id, coefficient)` pairs; repeated ids accumulate.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut c = Chain::zero(dim);
        for (id, v) in pairs {
            c.add(id, v);
        }
        c
    }

    /// From a dense coefficient vector.
    pub fn from_dense(dim: usize, values: &[i64]) -> Self {
        Self::from_pairs(dim, values.iter().copied().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, id: usize) -> i64 {
        self.coeffs.get(&id).copied().unwrap_or(0)
    }

    pub fn add(&mut self, id: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.coeffs.entry(id).or_insert(0);
        *e += v;
        if *e == 0 {
            self.coeffs.remove(&id);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &i64)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_dense(&self, len: usize) -> Vec<i64> {
        let mut v = vec![0; len];
        for (&i, &c) in &self.coeffs {
            v[i] = c;
        }
        v
    }

    pub fn scaled(&self, k: i64) -> Chain {
        Chain::from_pairs(self.dim, self.coeffs.iter().map(|(&i, &c)| (i, c * k)))
    }

    pub fn plus(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (&i, &c) in &other.coeffs {
            out.add(i, c);
        }
        out
    }

    pub fn minus(&self, other: &Chain) -> Chain {
        self.plus(&other.scaled(-1))
    }

    /// Sum of absolute coefficients.
    pub fn mass(&self) -> i64 {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// Weighted l1 norm, exact.
    pub fn l1_norm(&self, w: &WeightAssignment) -> Result<Rational> {
        if w.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: w.dim(), got: self.dim });
        }
        let mut total = Rational::zero();
        for (&id, &c) in &self.coeffs {
            let wi = w.weights.get(id).ok_or(Error::UnknownSimplexId { dim: self.dim, id })?;
            total.add_mul(wi, &Rational::from_int(c.abs()));
        }
        Ok(total)
    }
}

/// Nonnegative rational weight per simplex of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    dim: usize,
    weights: Vec<Rational>,
}

impl WeightAssignment {
    pub fn new(dim: usize, weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Precondition(format!("negative weight {w}")));
        }
        Ok(WeightAssignment { dim, weights })
    }

    pub fn uniform(dim: usize, len: usize) -> Self {
        WeightAssignment { dim, weights: vec![Rational::one(); len] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, id: usize) -> &Rational {
        &self.weights[id]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.weights
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        WeightAssignment { dim: self.dim, weights: self.weights.iter().map(|w| w * k).collect() }
    }
}
