use serde::{Deserialize, Serialize};

use super::FeatureError;

/// Per-feature min-max scaling to `[0, 1]` with training-set bounds.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DenseBlockScaler {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl DenseBlockScaler {
    /// Bounds over `rows`; every row must have the same length.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self, FeatureError> {
        let width = rows.first().map_or(0, Vec::len);
        let mut min = vec![f64::INFINITY; width];
        let mut max = vec![f64::NEG_INFINITY; width];
        for row in rows {
            if row.len() != width {
                return Err(FeatureError::DimensionMismatch { expected: width, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        if rows.is_empty() {
            return Ok(Self::default());
        }
        Ok(Self { min, max })
    }

    pub fn from_bounds(min: Vec<f64>, max: Vec<f64>) -> Result<Self, FeatureError> {
        if min.len() != max.len() {
            return Err(FeatureError::DimensionMismatch { expected: min.len(), found: max.len() });
        }
        if min.iter().zip(&max).any(|(a, b)| !a.is_finite() || !b.is_finite() || a > b) {
            return Err(FeatureError::InvalidVector("scaler bounds must be finite with min ≤ max".into()));
        }
        Ok(Self { min, max })
    }

    pub fn width(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    /// Scaled copy of `row`. A constant training feature maps to 0; values
    /// outside the training range are clamped.
    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>, FeatureError> {
        if row.len() != self.width() {
            return Err(FeatureError::DimensionMismatch { expected: self.width(), found: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                if hi > lo {
                    ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect())
    }
}
