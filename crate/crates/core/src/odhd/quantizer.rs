use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Per-feature uniform level quantizer with `levels` intervals over the
/// observed training range of each feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    levels: usize,
    bounds: Vec<(f64, f64)>,
}

impl Quantizer {
    pub fn new(levels: usize, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if levels < 2 {
            return Err(invalid(format!("level count must be >= 2, got {levels}")));
        }
        if bounds.is_empty() {
            return Err(invalid("quantizer needs at least one feature"));
        }
        for (j, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(invalid(format!("feature {j}: bad bounds ({lo}, {hi})")));
            }
        }
        Ok(Self { levels, bounds })
    }

    /// Captures per-feature (min, max) from the training rows.
    pub fn fit(train: &[Vec<f64>], levels: usize) -> Result<Self> {
        let first = train.first().ok_or_else(|| invalid("training set is empty"))?;
        let m = first.len();
        let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); m];
        for (i, row) in train.iter().enumerate() {
            if row.len() != m {
                return Err(invalid(format!("row {i} has {} features, expected {m}", row.len())));
            }
            for (b, &v) in bounds.iter_mut().zip(row) {
                if !v.is_finite() {
                    return Err(invalid(format!("row {i} contains a non-finite value")));
                }
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        Self::new(levels, bounds)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn features(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Interval width of feature `j`.
    pub fn width(&self, j: usize) -> f64 {
        let (lo, hi) = self.bounds[j];
        (hi - lo) / self.levels as f64
    }

    /// Level index in `1..=levels` for value `v` of feature `j`. Values
    /// outside the training range clamp to the first or last interval, and a
    /// constant feature maps everything to level 1.
    pub fn level(&self, j: usize, v: f64) -> usize {
        let (lo, _) = self.bounds[j];
        let width = self.width(j);
        if width <= 0.0 || v.is_nan() || v <= lo {
            return 1;
        }
        let idx = ((v - lo) / width).floor();
        if idx >= (self.levels - 1) as f64 {
            self.levels
        } else {
            1 + idx as usize
        }
    }

    pub fn quantize(&self, x: &[f64]) -> Result<Vec<usize>> {
        if x.len() != self.features() {
            return Err(Error::DimensionMismatch { left: x.len(), right: self.features() });
        }
        Ok(x.iter().enumerate().map(|(j, &v)| self.level(j, v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_two_level_column() {
        let q = Quantizer::fit(&[vec![0.0], vec![10.0]], 2).unwrap();
        assert_eq!(q.bounds(), &[(0.0, 10.0)]);
        assert_eq!(q.width(0), 5.0);
    }

    #[test]
    fn interval_boundaries() {
        let q = Quantizer::new(2, vec![(0.0, 10.0)]).unwrap();
        assert_eq!(q.quantize(&[4.9]).unwrap(), vec![1]);
        assert_eq!(q.quantize(&[5.0]).unwrap(), vec![2]);
        assert_eq!(q.quantize(&[10.0]).unwrap(), vec![2]);
        assert_eq!(q.quantize(&[-100.0]).unwrap(), vec![1]);
        assert_eq!(q.quantize(&[1e9]).unwrap(), vec![2]);
    }

    #[test]
    fn constant_feature_maps_to_first_level() {
        let q = Quantizer::fit(&[vec![3.0, 1.0], vec![3.0, 2.0]], 4).unwrap();
        assert_eq!(q.quantize(&[3.0, 1.0]).unwrap()[0], 1);
        assert_eq!(q.quantize(&[7.0, 1.0]).unwrap()[0], 1);
    }

    #[test]
    fn single_row_bounds_equal_row() {
        let q = Quantizer::fit(&[vec![1.5, -2.0]], 3).unwrap();
        assert_eq!(q.bounds(), &[(1.5, 1.5), (-2.0, -2.0)]);
    }

    #[test]
    fn errors() {
        assert!(Quantizer::fit(&[], 4).is_err());
        assert!(Quantizer::fit(&[vec![1.0]], 1).is_err());
        assert!(Quantizer::fit(&[vec![1.0], vec![1.0, 2.0]], 4).is_err());
        let q = Quantizer::new(4, vec![(0.0, 1.0)]).unwrap();
        assert!(matches!(q.quantize(&[0.1, 0.2]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn all_levels_reachable() {
        let q = Quantizer::new(10, vec![(0.0, 1.0)]).unwrap();
        let levels: Vec<usize> = (0..10).map(|i| q.level(0, i as f64 / 10.0 + 0.05)).collect();
        assert_eq!(levels, (1..=10).collect::<Vec<_>>());
    }
}
