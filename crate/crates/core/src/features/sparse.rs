use serde::{Deserialize, Serialize};

use super::FeatureError;

/// Sparse real vector with a declared dimension.
///
/// Indices are strictly increasing and below `dim`; stored values are finite
/// and non-zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, indices: Vec::new(), values: Vec::new() }
    }

    /// Builds a vector from sorted parts, checking every invariant.
    pub fn new(dim: usize, indices: Vec<usize>, values: Vec<f64>) -> Result<Self, FeatureError> {
        if indices.len() != values.len() {
            return Err(FeatureError::InvalidVector("indices and values differ in length".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FeatureError::InvalidVector("indices not strictly increasing".into()));
        }
        if indices.last().is_some_and(|&i| i >= dim) {
            return Err(FeatureError::InvalidVector(format!("index out of range for dimension {dim}")));
        }
        if values.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(FeatureError::InvalidVector("zero or non-finite value".into()));
        }
        Ok(Self { dim, indices, values })
    }

    /// Sorts, sums duplicate indices and drops zeros. Panics on an index ≥ `dim`.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            if indices.last() == Some(&i) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = Self { dim, indices, values };
        out.drop_zeros();
        out
    }

    /// Non-zero entries of a dense slice.
    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        Self { dim: dense.len(), indices, values }
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|v| *v != 0.0) {
            return;
        }
        let (indices, values) = self
            .indices
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (*i, *v))
            .unzip();
        self.indices = indices;
        self.values = values;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    /// Value at `index`, zero when not stored.
    pub fn get(&self, index: usize) -> f64 {
        self.indices.binary_search(&index).map_or(0.0, |p| self.values[p])
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self.drop_zeros();
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    /// `[self | other]` with dimension `self.dim + other.dim`.
    pub fn concat(&self, other: &SparseVector) -> SparseVector {
        let mut indices = self.indices.clone();
        let mut values = self.values.clone();
        indices.extend(other.indices.iter().map(|i| i + self.dim));
        values.extend_from_slice(&other.values);
        SparseVector { dim: self.dim + other.dim, indices, values }
    }

    pub fn check_dim(&self, expected: usize) -> Result<(), FeatureError> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(FeatureError::DimensionMismatch { expected, found: self.dim })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_merges_and_sorts() {
        let v = SparseVector::from_pairs(5, vec![(3, 1.0), (1, 2.0), (3, -1.0), (0, 0.5)]);
        assert_eq!(v.indices(), [0, 1]);
        assert_eq!(v.values(), [0.5, 2.0]);
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(SparseVector::new(3, vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(SparseVector::new(3, vec![3], vec![1.0]).is_err());
        assert!(SparseVector::new(3, vec![0], vec![0.0]).is_err());
        assert!(SparseVector::new(3, vec![0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn concat_offsets_indices() {
        let a = SparseVector::from_dense(&[1.0, 0.0]);
        let b = SparseVector::from_dense(&[0.0, 2.0, 3.0]);
        let c = a.concat(&b);
        assert_eq!(c.dim(), 5);
        assert_eq!(c.to_dense(), [1.0, 0.0, 0.0, 2.0, 3.0]);
        assert_eq!(c.get(3), 2.0);
        assert_eq!(c.get(1), 0.0);
    }
}
