//! CSV datasets and positive-unlabeled splitting.
//!
//! Schema: a header row, numeric feature columns, and a final `label` column
//! holding 0 (inlier) or 1 (outlier).

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::odhd::Label;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, features: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(invalid(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if !labels.contains(&Label::Inlier) {
            return Err(invalid("dataset has no inliers"));
        }
        let m = features.first().map_or(0, Vec::len);
        if m == 0 || features.iter().any(|r| r.len() != m) {
            return Err(invalid("feature rows must be non-empty and of equal length"));
        }
        Ok(Self { name: name.into(), features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn n_outliers(&self) -> usize {
        self.labels.iter().filter(|l| l.is_outlier()).count()
    }

    pub fn n_inliers(&self) -> usize {
        self.len() - self.n_outliers()
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let file = std::fs::File::open(path)?;
    parse_dataset(name, file)
}

pub fn parse_dataset<R: std::io::Read>(name: String, reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_err(&e, 1))?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse { line: 1, msg: "empty file (missing header)".into() });
    }
    if header.len() < 2 || &header[header.len() - 1] != "label" {
        return Err(Error::Parse {
            line: 1,
            msg: "header must list feature columns followed by a final `label` column".into(),
        });
    }
    let m = header.len() - 1;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != m + 1 {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} columns, found {}", m + 1, rec.len()),
            });
        }
        let mut row = Vec::with_capacity(m);
        for (j, cell) in rec.iter().take(m).enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("column `{}`: `{cell}` is not a number", &header[j]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line, msg: format!("column `{}` is not finite", &header[j]) });
            }
            row.push(v);
        }
        let label = match &rec[m] {
            "0" => Label::Inlier,
            "1" => Label::Outlier,
            other => {
                return Err(Error::Parse { line, msg: format!("label `{other}` is not 0 or 1") })
            }
        };
        features.push(row);
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::Parse { line: 2, msg: "no data rows".into() });
    }
    Dataset::new(name, features, labels)
}

fn csv_err(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse { line, msg: e.to_string() }
}

/// Positive-unlabeled split: training rows are drawn from inliers only; the
/// remaining inliers and every outlier form the test set (in dataset order).
pub fn split_pu<R: Rng + ?Sized>(
    ds: &Dataset,
    train_fraction: f64,
    rng: &mut R,
) -> Result<(Vec<Vec<f64>>, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(invalid(format!("train fraction must be in (0, 1), got {train_fraction}")));
    }
    let mut inliers: Vec<usize> =
        (0..ds.len()).filter(|&i| ds.labels[i] == Label::Inlier).collect();
    if inliers.is_empty() {
        return Err(invalid("dataset has no inliers"));
    }
    let n_train = ((inliers.len() as f64 * train_fraction).round() as usize).clamp(1, inliers.len());
    inliers.shuffle(rng);
    let mut train_idx = inliers[..n_train].to_vec();
    train_idx.sort_unstable();
    let mut in_train = vec![false; ds.len()];
    for &i in &train_idx {
        in_train[i] = true;
    }
    let train = train_idx.iter().map(|&i| ds.features[i].clone()).collect();
    let (mut tf, mut tl) = (Vec::new(), Vec::new());
    for i in (0..ds.len()).filter(|&i| !in_train[i]) {
        tf.push(ds.features[i].clone());
        tl.push(ds.labels[i]);
    }
    // The test set may legitimately hold no inliers, so skip Dataset::new's check.
    let test = Dataset { name: format!("{}-test", ds.name), features: tf, labels: tl };
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn parse(s: &str) -> Result<Dataset> {
        parse_dataset("t".into(), s.as_bytes())
    }

    #[test]
    fn parses_fixture() {
        let ds = parse("f_1,f_2,label\n1.0,2.0,0\n3.5,-1,1\n0,0,0\n").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.n_outliers(), 1);
        assert_eq!(ds.features[1], vec![3.5, -1.0]);
    }

    #[test]
    fn empty_and_header_only_are_errors() {
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("f_1,label\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn bad_cells_report_line_numbers() {
        match parse("f_1,label\n1,0\nabc,0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse("f_1,label\n1,0\n2,0\n3,7\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse("f_1,f_2\n1,0\n").is_err());
        assert!(parse("f_1,f_2,label\n1,0\n").is_err());
    }

    fn labelled(n_in: usize, n_out: usize) -> Dataset {
        let mut f = Vec::new();
        let mut l = Vec::new();
        for i in 0..n_in + n_out {
            f.push(vec![i as f64]);
            l.push(if i % 11 == 10 && l.iter().filter(|x: &&Label| x.is_outlier()).count() < n_out {
                Label::Outlier
            } else {
                Label::Inlier
            });
        }
        Dataset::new("d", f, l).unwrap()
    }

    #[test]
    fn split_counts_and_partition() {
        let ds = labelled(100, 10);
        assert_eq!(ds.n_outliers(), 10);
        let (train, test) = split_pu(&ds, 0.8, &mut rng::master(1)).unwrap();
        assert_eq!(train.len(), 80);
        assert_eq!(test.n_inliers(), 20);
        assert_eq!(test.n_outliers(), 10);
        let mut all: Vec<f64> = train.iter().chain(&test.features).map(|r| r[0]).collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, (0..110).map(|i| i as f64).collect::<Vec<_>>());
        let outlier_ids: Vec<f64> =
            (0..110).filter(|&i| ds.labels[i].is_outlier()).map(|i| i as f64).collect();
        assert!(train.iter().all(|r| !outlier_ids.contains(&r[0])));
    }

    #[test]
    fn split_is_deterministic_and_validates() {
        let ds = labelled(30, 3);
        let a = split_pu(&ds, 0.5, &mut rng::master(9)).unwrap();
        let b = split_pu(&ds, 0.5, &mut rng::master(9)).unwrap();
        assert_eq!(a, b);
        assert!(split_pu(&ds, 0.0, &mut rng::master(9)).is_err());
        assert!(split_pu(&ds, 1.0, &mut rng::master(9)).is_err());
    }
}
