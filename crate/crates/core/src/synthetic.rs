//! Gaussian benchmark: standard-normal inliers and a block of outliers
//! displaced by a constant offset in every coordinate.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{invalid, Result};
use crate::odhd::Label;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub inliers: usize,
    pub outliers: usize,
    pub features: usize,
    pub shift: f64,
}

impl Default for GaussianSpec {
    fn default() -> Self {
        Self { inliers: 200, outliers: 20, features: 10, shift: 5.0 }
    }
}

/// Inliers come first, then outliers.
pub fn gaussian_benchmark<R: Rng + ?Sized>(spec: &GaussianSpec, rng: &mut R) -> Result<Dataset> {
    if spec.inliers == 0 || spec.features == 0 {
        return Err(invalid("synthetic benchmark needs at least one inlier and one feature"));
    }
    let mut features = Vec::with_capacity(spec.inliers + spec.outliers);
    let mut labels = Vec::with_capacity(features.capacity());
    for i in 0..spec.inliers + spec.outliers {
        let outlier = i >= spec.inliers;
        let offset = if outlier { spec.shift } else { 0.0 };
        features.push(
            (0..spec.features)
                .map(|_| rng.sample::<f64, _>(StandardNormal) + offset)
                .collect(),
        );
        labels.push(if outlier { Label::Outlier } else { Label::Inlier });
    }
    Dataset::new("synthetic-gaussian", features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_shift() {
        let ds = gaussian_benchmark(&GaussianSpec::default(), &mut crate::rng::master(3)).unwrap();
        assert_eq!((ds.len(), ds.n_features(), ds.n_outliers()), (220, 10, 20));
        let mean = |rows: &[Vec<f64>]| {
            rows.iter().flatten().sum::<f64>() / (rows.len() * rows[0].len()) as f64
        };
        assert!(mean(&ds.features[..200]).abs() < 0.2);
        assert!((mean(&ds.features[200..]) - 5.0).abs() < 0.3);
    }
}
