use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hdc::Hypervector;

use super::{
    compute_threshold, encode, pad_to_power_of_two, train, EpochLog, OneClassModel, Quantizer,
    SeedSet, SimilarityArray, Variant,
};

/// Detector hyper-parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdhdConfig {
    pub dims: usize,
    pub levels: usize,
    pub epochs: usize,
    pub variant: Variant,
}

impl Default for OdhdConfig {
    fn default() -> Self {
        Self { dims: 10_000, levels: 10, epochs: 10, variant: Variant::Software }
    }
}

impl OdhdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(invalid("levels must be >= 2"));
        }
        if self.dims < 2 * self.levels {
            return Err(invalid(format!(
                "dims ({}) must be >= 2 x levels ({})",
                self.dims,
                2 * self.levels
            )));
        }
        Ok(())
    }
}

/// What happened during [`fit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Rows actually encoded (after padding for the CiM-friendly variant).
    pub encoded_rows: usize,
    pub initial_threshold: f64,
    pub epochs: Vec<EpochLog>,
    /// Training similarities against the final H_OC.
    pub similarities: SimilarityArray,
}

/// Runs seed generation, quantization, (padding), encoding, training,
/// threshold calculation and fine-tuning on inlier-only training rows.
///
/// PRNG draws happen in a fixed order: seeds first, then padding.
pub fn fit<R: Rng + ?Sized>(
    train_rows: &[Vec<f64>],
    cfg: &OdhdConfig,
    rng: &mut R,
) -> Result<(OneClassModel, FitReport)> {
    cfg.validate()?;
    let quantizer = Quantizer::fit(train_rows, cfg.levels)?;
    let seeds = SeedSet::generate(cfg.dims, cfg.levels, rng)?;
    let rows = match cfg.variant {
        Variant::Software => train_rows.to_vec(),
        Variant::CimFriendly => pad_to_power_of_two(train_rows, rng)?,
    };
    let encoded: Vec<Hypervector> = rows
        .par_iter()
        .map(|x| encode(&seeds, &quantizer, x))
        .collect::<Result<_>>()?;

    let h_oc = train(&encoded)?;
    let (threshold, _) = compute_threshold(&h_oc, &encoded, cfg.variant)?;
    let mut model = OneClassModel::new(seeds, quantizer, h_oc, threshold, cfg.variant, 0)?;
    let epochs = model.fine_tune(&encoded, cfg.epochs)?;
    let similarities = model.training_similarities(&encoded)?;
    let report = FitReport {
        encoded_rows: encoded.len(),
        initial_threshold: threshold,
        epochs,
        similarities,
    };
    Ok((model, report))
}
