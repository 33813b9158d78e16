//! Versioned JSON model document.
//!
//! Seeds are stored as packed bits (LSB first within each byte, bit set ⇔ +1)
//! and hex encoded; the one-class HV is a plain integer array.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hdc::Hypervector;

use super::{OneClassModel, Quantizer, SeedSet, Variant};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const FORMAT_TAG: &str = "odhd-model";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    pub dims: usize,
    pub levels: usize,
    pub flips_per_step: usize,
    pub variant: Variant,
    pub epochs: usize,
    pub quantizer_bounds: Vec<(f64, f64)>,
    pub seeds: Vec<String>,
    pub h_oc: Vec<i64>,
    pub threshold: f64,
}

fn pack(h: &Hypervector) -> String {
    let mut bytes = vec![0u8; h.dims().div_ceil(8)];
    for (i, &e) in h.elems().iter().enumerate() {
        if e > 0 {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    hex::encode(bytes)
}

fn unpack(s: &str, dims: usize) -> Result<Hypervector> {
    let bytes = hex::decode(s).map_err(|e| Error::Format(format!("seed hex: {e}")))?;
    if bytes.len() != dims.div_ceil(8) {
        return Err(Error::Format(format!(
            "seed has {} bytes, expected {}",
            bytes.len(),
            dims.div_ceil(8)
        )));
    }
    let elems = (0..dims)
        .map(|i| if bytes[i / 8] >> (i % 8) & 1 == 1 { 1 } else { -1 })
        .collect();
    Hypervector::from_bipolar(elems)
}

impl From<&OneClassModel> for ModelDocument {
    fn from(m: &OneClassModel) -> Self {
        Self {
            format: FORMAT_TAG.into(),
            version: MODEL_FORMAT_VERSION,
            dims: m.seeds.dims(),
            levels: m.seeds.levels(),
            flips_per_step: m.seeds.flips_per_step(),
            variant: m.variant,
            epochs: m.epochs,
            quantizer_bounds: m.quantizer.bounds().to_vec(),
            seeds: m.seeds.seeds().iter().map(pack).collect(),
            h_oc: m.h_oc.elems().to_vec(),
            threshold: m.threshold,
        }
    }
}

impl ModelDocument {
    pub fn into_model(self) -> Result<OneClassModel> {
        if self.format != FORMAT_TAG {
            return Err(Error::Format(format!("unexpected format tag `{}`", self.format)));
        }
        if self.version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported model version {}", self.version)));
        }
        if self.seeds.len() != self.levels {
            return Err(Error::Format("seed count differs from levels".into()));
        }
        if self.h_oc.len() != self.dims {
            return Err(Error::Format("h_oc length differs from dims".into()));
        }
        let seeds = self
            .seeds
            .iter()
            .map(|s| unpack(s, self.dims))
            .collect::<Result<Vec<_>>>()?;
        let seeds = SeedSet::from_parts(seeds, self.flips_per_step)?;
        let quantizer = Quantizer::new(self.levels, self.quantizer_bounds)?;
        let h_oc = Hypervector::from_accumulator(self.h_oc)?;
        OneClassModel::new(seeds, quantizer, h_oc, self.threshold, self.variant, self.epochs)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

impl OneClassModel {
    pub fn to_json(&self) -> Result<String> {
        ModelDocument::from(self).to_json()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        ModelDocument::from_json(s)?.into_model()
    }
}
