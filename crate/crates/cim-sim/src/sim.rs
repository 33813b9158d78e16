//! Phase-level simulation of training and testing for a dataset shape.

use serde::{Deserialize, Serialize};

use crate::design::Design;
use crate::error::{Result, SimError};
use crate::layout::LayoutPlan;
use crate::report::{BreakdownKind, BreakdownReport, SweepEntry, SweepReport};
use crate::schedule;
use crate::trace::{Op, Phase, PriceList, Trace};

/// Size of a labelled dataset; only counts matter to the simulator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetShape {
    pub name: String,
    pub samples: usize,
    pub features: usize,
    pub outliers: usize,
    /// Explicit training-set size; defaults to 80% of the inliers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<usize>,
}

impl DatasetShape {
    pub fn new(name: impl Into<String>, samples: usize, features: usize, outliers: usize) -> Self {
        Self { name: name.into(), samples, features, outliers, train: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.features == 0 || self.outliers >= self.samples {
            return Err(SimError::InvalidArgument(format!(
                "shape `{}` needs features > 0 and at least one inlier",
                self.name
            )));
        }
        if let Some(t) = self.train {
            if t == 0 || t > self.inliers() {
                return Err(SimError::InvalidArgument(format!(
                    "shape `{}`: training size {t} outside 1..={}",
                    self.name,
                    self.inliers()
                )));
            }
        }
        Ok(())
    }

    pub fn inliers(&self) -> usize {
        self.samples - self.outliers
    }

    pub fn n_train(&self) -> usize {
        self.train.unwrap_or_else(|| ((self.inliers() as f64 * 0.8).round() as usize).clamp(1, self.inliers()))
    }

    /// Training rows after power-of-two padding.
    pub fn n_padded(&self) -> usize {
        self.n_train().next_power_of_two()
    }

    pub fn n_test(&self) -> usize {
        self.samples - self.n_train()
    }
}

/// The six benchmark shapes shipped with the crate.
pub fn odds_shapes() -> Vec<DatasetShape> {
    serde_json::from_str(include_str!("../fixtures/odds_shapes.json")).expect("bundled fixture parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub dims: usize,
    pub levels: usize,
    pub epochs: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { dims: 10_000, levels: 10, epochs: 10 }
    }
}

fn plan(shape: &DatasetShape, cfg: &SimConfig, design: &Design) -> Result<(LayoutPlan, PriceList)> {
    shape.validate()?;
    design.validate()?;
    let l = LayoutPlan::new(&design.mat, cfg.levels, cfg.dims, shape.n_padded())?;
    Ok((l, PriceList::new(&design.costs)?))
}

/// Full training trace: encoding of every padded sample (stored to the
/// bundle segment), the training bundle, the initial threshold and each
/// fine-tuning epoch.
pub fn training_trace(l: &LayoutPlan, shape: &DatasetShape, cfg: &SimConfig) -> Result<Trace> {
    let n = shape.n_padded();
    let mut per = schedule::encode(l, shape.features, Phase::Encoding)?;
    per.compute(Phase::Encoding, Op::Write, l.lane_pes(0), 1);
    let mut t = per.repeated(n as u64);

    let mut bundle = Trace::new();
    bundle.compute(Phase::Tuning, Op::Write, l.lane_pes(0), 1);
    let mut fetch_add = Trace::new();
    fetch_add.compute(Phase::Tuning, Op::Write, l.lane_pes(0), 1);
    fetch_add.compute(Phase::Tuning, Op::Add, l.lane_pes(0), 1);
    bundle.append(fetch_add.repeated(n as u64 - 1));
    t.append(bundle);
    t.append(schedule::threshold(l, n, Phase::Tuning));
    t.append(schedule::fine_tune_epoch(l, n, Phase::Tuning).repeated(cfg.epochs as u64));
    Ok(t)
}

/// Per query: encoding, one dot against H_OC and a comparison with R.
pub fn testing_trace(l: &LayoutPlan, shape: &DatasetShape) -> Result<Trace> {
    let q = shape.n_test() as u64;
    let mut t = schedule::encode(l, shape.features, Phase::Encoding)?.repeated(q);
    let mut det = schedule::dot(l, 0, Phase::Detection);
    det.compute(Phase::Detection, Op::Sub, [0], 1);
    t.append(det.repeated(q));
    Ok(t)
}

pub fn simulate_training(shape: &DatasetShape, cfg: &SimConfig, design: &Design) -> Result<BreakdownReport> {
    let (l, prices) = plan(shape, cfg, design)?;
    let t = training_trace(&l, shape, cfg)?;
    BreakdownReport::build(BreakdownKind::Training, &t, &prices, shape, shape.n_padded(), cfg, design)
}

pub fn simulate_testing(shape: &DatasetShape, cfg: &SimConfig, design: &Design) -> Result<BreakdownReport> {
    let (l, prices) = plan(shape, cfg, design)?;
    let t = testing_trace(&l, shape)?;
    BreakdownReport::build(BreakdownKind::Testing, &t, &prices, shape, shape.n_test(), cfg, design)
}

/// Training and testing reports for every design × shape, with designs
/// ranked by summed latency and by summed energy.
pub fn sweep(designs: &[Design], shapes: &[DatasetShape], cfg: &SimConfig) -> Result<SweepReport> {
    if designs.is_empty() {
        return Err(SimError::InvalidArgument("sweep needs at least one design".into()));
    }
    let mut entries = Vec::new();
    for d in designs {
        for s in shapes {
            entries.push(SweepEntry {
                design: d.name().to_string(),
                dataset: s.name.clone(),
                training: simulate_training(s, cfg, d)?,
                testing: simulate_testing(s, cfg, d)?,
            });
        }
    }
    Ok(SweepReport::new(designs, cfg, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::design1;

    #[test]
    fn fixture_shapes() {
        let s = odds_shapes();
        assert_eq!(s.len(), 6);
        let wbc = &s[0];
        assert_eq!((wbc.n_train(), wbc.n_padded(), wbc.n_test()), (286, 512, 92));
    }

    #[test]
    fn degenerate_shape_has_no_permutation() {
        let shape = DatasetShape { train: Some(1), ..DatasetShape::new("one", 2, 1, 0) };
        let cfg = SimConfig { epochs: 0, ..Default::default() };
        let r = simulate_training(&shape, &cfg, &design1()).unwrap();
        assert_eq!(r.permutation_in_pe.latency_fs, 0);
        assert_eq!(r.permutation_pe_to_reg.energy_fj, 0);
        let t = simulate_testing(&DatasetShape::new("q", 2, 1, 0), &cfg, &design1()).unwrap();
        assert_eq!(t.permutation_in_pe.latency_fs, 0);
    }

    #[test]
    fn encoding_doubles_with_samples() {
        let cfg = SimConfig::default();
        let a = DatasetShape { train: Some(256), ..DatasetShape::new("a", 1000, 12, 10) };
        let b = DatasetShape { train: Some(512), ..a.clone() };
        let ra = simulate_training(&a, &cfg, &design1()).unwrap();
        let rb = simulate_training(&b, &cfg, &design1()).unwrap();
        assert_eq!(rb.encoding().latency_fs, 2 * ra.encoding().latency_fs);
        assert_eq!(rb.encoding().energy_fj, 2 * ra.encoding().energy_fj);
    }

    #[test]
    fn capacity_error_propagates() {
        let cfg = SimConfig { dims: 10_000_000, levels: 40, epochs: 1 };
        let shape = DatasetShape::new("x", 10, 3, 1);
        assert!(matches!(simulate_training(&shape, &cfg, &design1()), Err(SimError::Capacity(_))));
    }
}
