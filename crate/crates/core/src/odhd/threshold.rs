use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hdc::Hypervector;

use super::Variant;

/// Similarities Sim₁..Simₙ of the training HVs against the one-class HV.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityArray(pub Vec<f64>);

impl SimilarityArray {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn non_empty(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(invalid("similarity array is empty"));
        }
        Ok(())
    }

    pub fn mean(&self) -> Result<f64> {
        self.non_empty()?;
        Ok(self.0.iter().sum::<f64>() / self.0.len() as f64)
    }

    /// Population standard deviation (no Bessel correction).
    pub fn std_dev(&self) -> Result<f64> {
        let mu = self.mean()?;
        let var = self.0.iter().map(|s| (s - mu).powi(2)).sum::<f64>() / self.0.len() as f64;
        Ok(var.sqrt())
    }

    /// (1/n)·Σ|Simᵢ − μ|.
    pub fn mad(&self) -> Result<f64> {
        let mu = self.mean()?;
        Ok(self.0.iter().map(|s| (s - mu).abs()).sum::<f64>() / self.0.len() as f64)
    }

    /// μ + 2σ for the software variant, μ + 2·MAD for the CiM-friendly one.
    pub fn threshold(&self, variant: Variant) -> Result<f64> {
        let deviation = match variant {
            Variant::Software => self.std_dev()?,
            Variant::CimFriendly => self.mad()?,
        };
        Ok(self.mean()? + 2.0 * deviation)
    }
}

pub fn mean_absolute_deviation(s: &SimilarityArray) -> Result<f64> {
    s.mad()
}

/// Scores every encoded training HV against `h_oc` and derives the threshold R.
pub fn compute_threshold(
    h_oc: &Hypervector,
    encoded: &[Hypervector],
    variant: Variant,
) -> Result<(f64, SimilarityArray)> {
    if encoded.is_empty() {
        return Err(invalid("no encoded samples"));
    }
    let sims = encoded
        .iter()
        .map(|h| variant.similarity(h_oc, h))
        .collect::<Result<Vec<_>>>()?;
    let sims = SimilarityArray(sims);
    Ok((sims.threshold(variant)?, sims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> SimilarityArray {
        SimilarityArray(vec![0.9, 0.8, 1.0])
    }

    #[test]
    fn mad_example() {
        assert!((s().mad().unwrap() - 0.2 / 3.0).abs() < 1e-12);
        assert_eq!(SimilarityArray(vec![0.4; 5]).mad().unwrap(), 0.0);
        assert!(SimilarityArray(vec![]).mad().is_err());
    }

    #[test]
    fn threshold_examples() {
        let sigma = (0.02f64 / 3.0).sqrt();
        let r_sw = s().threshold(Variant::Software).unwrap();
        assert!((r_sw - (0.9 + 2.0 * sigma)).abs() < 1e-12);
        assert!((r_sw - 1.0633).abs() < 1e-4);
        let r_cim = s().threshold(Variant::CimFriendly).unwrap();
        assert!((r_cim - (0.9 + 0.4 / 3.0)).abs() < 1e-12);
        assert!((r_cim - 1.0333).abs() < 1e-4);
    }

    #[test]
    fn constant_array_threshold_is_the_constant() {
        let c = SimilarityArray(vec![0.25; 4]);
        assert_eq!(c.threshold(Variant::Software).unwrap(), 0.25);
        assert_eq!(c.threshold(Variant::CimFriendly).unwrap(), 0.25);
    }

    #[test]
    fn compute_threshold_rejects_zero_model_under_cosine() {
        let zero = Hypervector::zeros(3).unwrap();
        let h = Hypervector::from_bipolar(vec![1, -1, 1]).unwrap();
        assert!(compute_threshold(&zero, std::slice::from_ref(&h), Variant::Software).is_err());
        let (r, sims) = compute_threshold(&zero, &[h], Variant::CimFriendly).unwrap();
        assert_eq!((r, sims.values()), (0.0, &[0.0][..]));
    }
}
