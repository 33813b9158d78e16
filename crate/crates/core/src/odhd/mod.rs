//! The one-class detector.
//!
//! Phases: seed generation ([`SeedSet`]), level quantization ([`Quantizer`]),
//! encoding ([`encode`]), training ([`train`]), threshold calculation
//! ([`compute_threshold`]), fine-tuning ([`OneClassModel::fine_tune`]) and
//! detection ([`OneClassModel::detect`]). [`fit`] runs the whole flow.

mod encoding;
mod io;
mod model;
mod padding;
mod pipeline;
mod quantizer;
mod seeds;
mod threshold;

pub use encoding::{encode, encode_levels, train};
pub use io::{ModelDocument, MODEL_FORMAT_VERSION};
pub use model::{EpochLog, Label, OneClassModel, Variant};
pub use padding::{pad_to_power_of_two, padded_len};
pub use pipeline::{fit, FitReport, OdhdConfig};
pub use quantizer::Quantizer;
pub use seeds::SeedSet;
pub use threshold::{compute_threshold, mean_absolute_deviation, SimilarityArray};
