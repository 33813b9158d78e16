use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hdc::Hypervector;

use super::{compute_threshold, encode, Quantizer, SeedSet, SimilarityArray};

/// Which similarity / deviation pair the detector uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Cosine similarity, threshold μ + 2σ.
    #[serde(rename = "software")]
    Software,
    /// Dot similarity, threshold μ + 2·MAD, power-of-two padded training set.
    #[serde(rename = "cim")]
    CimFriendly,
}

impl Variant {
    pub fn similarity(self, h_oc: &Hypervector, h: &Hypervector) -> Result<f64> {
        match self {
            Variant::Software => h_oc.cosine_similarity(h),
            Variant::CimFriendly => Ok(h_oc.dot_similarity(h)? as f64),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Software => "software",
            Variant::CimFriendly => "cim",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "software" | "sw" => Ok(Variant::Software),
            "cim" | "cim-friendly" => Ok(Variant::CimFriendly),
            other => Err(invalid(format!("unknown variant `{other}` (expected software|cim)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Inlier,
    Outlier,
}

impl Label {
    pub fn is_outlier(self) -> bool {
        self == Label::Outlier
    }
}

/// Per-epoch fine-tuning record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub updates: usize,
    pub threshold: f64,
}

/// A trained detector: seeds, quantizer, one-class HV and threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct OneClassModel {
    pub(crate) seeds: SeedSet,
    pub(crate) quantizer: Quantizer,
    pub(crate) h_oc: Hypervector,
    pub(crate) threshold: f64,
    pub(crate) variant: Variant,
    pub(crate) epochs: usize,
}

impl OneClassModel {
    pub fn new(
        seeds: SeedSet,
        quantizer: Quantizer,
        h_oc: Hypervector,
        threshold: f64,
        variant: Variant,
        epochs: usize,
    ) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(invalid("threshold must be finite"));
        }
        if h_oc.dims() != seeds.dims() {
            return Err(invalid(format!(
                "one-class HV has {} dims, seeds have {}",
                h_oc.dims(),
                seeds.dims()
            )));
        }
        if seeds.levels() != quantizer.levels() {
            return Err(invalid("seed count differs from quantizer level count"));
        }
        Ok(Self { seeds, quantizer, h_oc, threshold, variant, epochs })
    }

    pub fn seeds(&self) -> &SeedSet {
        &self.seeds
    }

    pub fn quantizer(&self) -> &Quantizer {
        &self.quantizer
    }

    pub fn h_oc(&self) -> &Hypervector {
        &self.h_oc
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn epochs(&self) -> usize {
        self.epochs
    }

    pub fn similarity(&self, h: &Hypervector) -> Result<f64> {
        self.variant.similarity(&self.h_oc, h)
    }

    /// Fine-tuning: every training HV scoring below R is bundled into H_OC
    /// (comparisons use the running H_OC, in sequence order), then R is
    /// recomputed over all training HVs at the end of the epoch.
    pub fn fine_tune(&mut self, encoded: &[Hypervector], epochs: usize) -> Result<Vec<EpochLog>> {
        let mut log = Vec::with_capacity(epochs);
        for _ in 0..epochs {
            let mut updates = 0;
            for h in encoded {
                if self.similarity(h)? < self.threshold {
                    self.h_oc.bundle_assign(h)?;
                    updates += 1;
                }
            }
            let (threshold, _) = compute_threshold(&self.h_oc, encoded, self.variant)?;
            self.threshold = threshold;
            self.epochs += 1;
            log.push(EpochLog { updates, threshold });
        }
        Ok(log)
    }

    /// Scores against R: inlier iff score ≥ R.
    pub fn classify(&self, score: f64) -> Label {
        if score >= self.threshold {
            Label::Inlier
        } else {
            Label::Outlier
        }
    }

    pub fn detect(&self, x: &[f64]) -> Result<(Label, f64)> {
        let h = encode(&self.seeds, &self.quantizer, x)?;
        let score = self.similarity(&h)?;
        Ok((self.classify(score), score))
    }

    /// Current training similarities, e.g. for reporting.
    pub fn training_similarities(&self, encoded: &[Hypervector]) -> Result<SimilarityArray> {
        Ok(compute_threshold(&self.h_oc, encoded, self.variant)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odhd::{encode_levels, train};
    use crate::rng;

    fn model_from(encoded: &[Hypervector], seeds: SeedSet, variant: Variant) -> OneClassModel {
        let h_oc = train(encoded).unwrap();
        let (r, _) = compute_threshold(&h_oc, encoded, variant).unwrap();
        let q = Quantizer::new(seeds.levels(), vec![(0.0, 1.0); 3]).unwrap();
        OneClassModel::new(seeds, q, h_oc, r, variant, 0).unwrap()
    }

    fn sample_set(seed: u64) -> (SeedSet, Vec<Hypervector>) {
        let mut r = rng::master(seed);
        let seeds = SeedSet::generate(256, 4, &mut r).unwrap();
        let encoded = (0..8)
            .map(|i| encode_levels(&seeds, &[1 + i % 4, 1 + (i / 2) % 4, 1 + (i * 3) % 4]).unwrap())
            .collect();
        (seeds, encoded)
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let (seeds, enc) = sample_set(1);
        let mut m = model_from(&enc, seeds, Variant::Software);
        let before = m.clone();
        assert!(m.fine_tune(&enc, 0).unwrap().is_empty());
        assert_eq!(m, before);
    }

    #[test]
    fn all_scores_at_threshold_is_a_fixed_point() {
        let (seeds, enc) = sample_set(4);
        let same = vec![enc[0].clone(); 4];
        for variant in [Variant::Software, Variant::CimFriendly] {
            let mut m = model_from(&same, seeds.clone(), variant);
            let before = m.h_oc.clone();
            let log = m.fine_tune(&same, 5).unwrap();
            assert!(log.iter().all(|e| e.updates == 0));
            assert_eq!(m.h_oc, before);
        }
    }

    #[test]
    fn epoch_without_misses_leaves_h_oc_alone() {
        let (seeds, enc) = sample_set(2);
        let mut m = model_from(&enc, seeds, Variant::CimFriendly);
        m.threshold = f64::MIN;
        let h_before = m.h_oc.clone();
        let log = m.fine_tune(&enc, 1).unwrap();
        assert_eq!(log[0].updates, 0);
        assert_eq!(m.h_oc, h_before);
    }

    #[test]
    fn dot_update_raises_score_by_squared_norm() {
        let (seeds, enc) = sample_set(3);
        let m = model_from(&enc, seeds, Variant::CimFriendly);
        let h_t = &enc[0];
        let before = m.h_oc.dot_similarity(h_t).unwrap();
        let updated = m.h_oc.bundle(h_t).unwrap();
        let after = updated.dot_similarity(h_t).unwrap();
        assert_eq!(after - before, h_t.norm_squared());
        assert!(h_t.norm_squared() > 0);
    }

    #[test]
    fn score_equal_to_threshold_is_inlier() {
        let (seeds, enc) = sample_set(4);
        let m = model_from(&enc, seeds, Variant::CimFriendly);
        assert_eq!(m.classify(m.threshold()), Label::Inlier);
        assert_eq!(m.classify(m.threshold() - 1e-9), Label::Outlier);
    }

    #[test]
    fn orthogonal_query_is_outlier() {
        let h_oc = Hypervector::from_accumulator(vec![2, 2, 0, 0]).unwrap();
        let seeds = SeedSet::from_parts(
            vec![
                Hypervector::from_bipolar(vec![1, 1, 1, 1]).unwrap(),
                Hypervector::from_bipolar(vec![1, -1, 1, -1]).unwrap(),
            ],
            1,
        )
        .unwrap();
        let q = Quantizer::new(2, vec![(0.0, 1.0)]).unwrap();
        let m = OneClassModel::new(seeds, q, h_oc, 0.5, Variant::Software, 0).unwrap();
        // level 2 seed ⟨1,−1,1,−1⟩ is orthogonal to ⟨2,2,0,0⟩
        let (label, score) = m.detect(&[0.9]).unwrap();
        assert!(score.abs() < 1e-12);
        assert_eq!(label, Label::Outlier);
        assert!(m.detect(&[0.9, 0.1]).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("software".parse::<Variant>().unwrap(), Variant::Software);
        assert_eq!("cim".parse::<Variant>().unwrap(), Variant::CimFriendly);
        assert!("gpu".parse::<Variant>().is_err());
    }
}
