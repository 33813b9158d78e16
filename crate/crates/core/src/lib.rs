//! One-class hyperdimensional computing (HDC) outlier detection.
//!
//! The crate is organised bottom-up:
//!
//! - [`hdc`]: bipolar/accumulator hypervectors with bundling, binding,
//!   cyclic permutation and the cosine / dot similarities.
//! - [`odhd`]: the six-phase detector (seed generation, encoding, training,
//!   threshold calculation, fine-tuning, detection) in a software-exact and
//!   a compute-in-memory friendly variant.
//! - [`data`], [`metrics`], [`experiment`]: CSV ingestion, positive-unlabeled
//!   splitting, ACC/F1/ROC-AUC and the repeated-run harness.

pub mod data;
pub mod error;
pub mod experiment;
pub mod hdc;
pub mod metrics;
pub mod odhd;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
pub use hdc::{Hypervector, Kind};
pub use odhd::{
    Label, OdhdConfig, OneClassModel, Quantizer, SeedSet, SimilarityArray, Variant,
};
