//! Repeated train/test runs with mean and standard deviation of each metric.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split_pu, Dataset};
use crate::error::{invalid, Result};
use crate::metrics::{compute_metrics, Confusion, Metrics};
use crate::odhd::{fit, OdhdConfig, Variant};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub variant: Variant,
    pub dims: usize,
    pub levels: usize,
    pub epochs: usize,
    pub repeats: usize,
    pub seed: u64,
    pub train_fraction: f64,
    /// Wall-clock timings make the summary non-reproducible, so they are opt-in.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub record_timings: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let d = OdhdConfig::default();
        Self {
            dataset: String::new(),
            variant: d.variant,
            dims: d.dims,
            levels: d.levels,
            epochs: d.epochs,
            repeats: 10,
            seed: 0,
            train_fraction: 0.8,
            record_timings: false,
        }
    }
}

impl ExperimentConfig {
    pub fn odhd(&self) -> OdhdConfig {
        OdhdConfig { dims: self.dims, levels: self.levels, epochs: self.epochs, variant: self.variant }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub train_secs: f64,
    pub test_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub repeat: usize,
    pub threshold: f64,
    pub metrics: Metrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    #[serde(with = "nan_as_null")]
    pub mean: f64,
    #[serde(with = "nan_as_null")]
    pub std: f64,
}

impl MeanStd {
    /// Population statistics; NaN entries are skipped and an all-NaN input gives NaN.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().filter(|x| !x.is_nan()).collect();
        if v.is_empty() {
            return Self { mean: f64::NAN, std: f64::NAN };
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Self { mean, std: var.sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub acc: MeanStd,
    pub f1: MeanStd,
    pub auc: MeanStd,
    /// Confusion counts summed over repeats.
    pub confusion: Confusion,
    pub runs: Vec<RunResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Repeat `r` draws from stream `r + 1` of the master seed, so results do
/// not depend on how repeats are scheduled.
pub fn run_experiment(ds: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    if cfg.repeats == 0 {
        return Err(invalid("repeats must be >= 1"));
    }
    cfg.odhd().validate()?;
    let runs: Vec<RunResult> = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| run_once(ds, cfg, r))
        .collect::<Result<_>>()?;

    let mut confusion = Confusion::default();
    for run in &runs {
        let c = run.metrics.confusion;
        confusion.tp += c.tp;
        confusion.fp += c.fp;
        confusion.fn_ += c.fn_;
        confusion.tn += c.tn;
    }
    let timings = cfg.record_timings.then(|| Timings {
        train_secs: runs.iter().filter_map(|r| r.timings).map(|t| t.train_secs).sum::<f64>()
            / runs.len() as f64,
        test_secs: runs.iter().filter_map(|r| r.timings).map(|t| t.test_secs).sum::<f64>()
            / runs.len() as f64,
    });
    Ok(ExperimentSummary {
        config: cfg.clone(),
        acc: MeanStd::of(runs.iter().map(|r| r.metrics.acc)),
        f1: MeanStd::of(runs.iter().map(|r| r.metrics.f1)),
        auc: MeanStd::of(runs.iter().map(|r| r.metrics.auc)),
        confusion,
        runs,
        timings,
    })
}

fn run_once(ds: &Dataset, cfg: &ExperimentConfig, repeat: usize) -> Result<RunResult> {
    let mut rng = rng::derived(cfg.seed, repeat as u64 + 1);
    let t0 = Instant::now();
    let (train, test) = split_pu(ds, cfg.train_fraction, &mut rng)?;
    let (model, _) = fit(&train, &cfg.odhd(), &mut rng)?;
    let t1 = Instant::now();
    let detections: Vec<_> = test
        .features
        .par_iter()
        .map(|x| model.detect(x))
        .collect::<Result<_>>()?;
    let t2 = Instant::now();
    let (preds, scores): (Vec<_>, Vec<_>) = detections.into_iter().unzip();
    let metrics = compute_metrics(&test.labels, &preds, &scores)?;
    Ok(RunResult {
        repeat,
        threshold: model.threshold(),
        metrics,
        timings: cfg.record_timings.then(|| Timings {
            train_secs: (t1 - t0).as_secs_f64(),
            test_secs: (t2 - t1).as_secs_f64(),
        }),
    })
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{gaussian_benchmark, GaussianSpec};

    fn small_cfg(repeats: usize) -> ExperimentConfig {
        ExperimentConfig {
            dataset: "synthetic".into(),
            dims: 2000,
            epochs: 3,
            repeats,
            seed: 7,
            ..Default::default()
        }
    }

    fn data() -> Dataset {
        gaussian_benchmark(&GaussianSpec::default(), &mut rng::master(11)).unwrap()
    }

    #[test]
    fn single_repeat_has_zero_std() {
        let s = run_experiment(&data(), &small_cfg(1)).unwrap();
        assert_eq!(s.acc.std, 0.0);
        assert_eq!(s.auc.std, 0.0);
        assert_eq!(s.runs.len(), 1);
    }

    #[test]
    fn same_seed_same_summary() {
        let ds = data();
        let a = serde_json::to_string(&run_experiment(&ds, &small_cfg(3)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&ds, &small_cfg(3)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
    }

    #[test]
    fn confusion_totals_match_runs() {
        let s = run_experiment(&data(), &small_cfg(2)).unwrap();
        let c = s.confusion;
        assert_eq!(c.total(), 2 * 60);
        for r in &s.runs {
            let rc = r.metrics.confusion;
            assert_eq!(r.metrics.acc, rc.accuracy());
            assert_eq!(r.metrics.f1, rc.f1());
        }
    }

    #[test]
    fn zero_repeats_rejected() {
        assert!(run_experiment(&data(), &small_cfg(0)).is_err());
    }
}
