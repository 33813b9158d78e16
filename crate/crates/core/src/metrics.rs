//! Detection metrics with the outlier class as positive.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::odhd::Label;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl Confusion {
    pub fn from_labels(labels: &[Label], predictions: &[Label]) -> Result<Self> {
        if labels.len() != predictions.len() {
            return Err(invalid(format!(
                "{} labels but {} predictions",
                labels.len(),
                predictions.len()
            )));
        }
        let mut c = Confusion::default();
        for (t, p) in labels.iter().zip(predictions) {
            match (t.is_outlier(), p.is_outlier()) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }

    /// F1 on the outlier class; 0 when there are no true positives.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if self.tp == 0 {
            0.0
        } else {
            (2 * self.tp) as f64 / denom as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub acc: f64,
    pub f1: f64,
    /// `None` in JSON when undefined.
    #[serde(with = "nan_as_null")]
    pub auc: f64,
    pub auc_undefined: bool,
    pub confusion: Confusion,
}

/// `scores` are oriented so larger means more inlier-like.
pub fn compute_metrics(labels: &[Label], predictions: &[Label], scores: &[f64]) -> Result<Metrics> {
    if labels.is_empty() {
        return Err(invalid("no samples to evaluate"));
    }
    if scores.len() != labels.len() {
        return Err(invalid(format!("{} labels but {} scores", labels.len(), scores.len())));
    }
    let confusion = Confusion::from_labels(labels, predictions)?;
    let auc = roc_auc(labels, scores);
    Ok(Metrics {
        acc: confusion.accuracy(),
        f1: confusion.f1(),
        auc: auc.unwrap_or(f64::NAN),
        auc_undefined: auc.is_none(),
        confusion,
    })
}

/// Mann-Whitney AUC for ranking outliers above inliers by negated score.
/// Ties receive midranks. `None` if either class is absent.
pub fn roc_auc(labels: &[Label], scores: &[f64]) -> Option<f64> {
    let n_pos = labels.iter().filter(|l| l.is_outlier()).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| (-scores[a]).total_cmp(&-scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            if labels[idx].is_outlier() {
                rank_sum_pos += mid;
            }
        }
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Some((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n))
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
