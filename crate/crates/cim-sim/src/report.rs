//! Breakdown and sweep reports with JSON and aligned-text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::design::{CostTable, Design, MatDesign};
use crate::error::Result;
use crate::sim::{DatasetShape, SimConfig};
use crate::trace::{Cost, Phase, PriceList, Stage, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakdownKind {
    Training,
    Testing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub latency_us: f64,
    pub energy_uj: f64,
    pub latency_fs: u128,
    pub energy_fj: u128,
}

impl From<Cost> for PhaseRow {
    fn from(c: Cost) -> Self {
        Self { latency_us: c.latency_us(), energy_uj: c.energy_uj(), latency_fs: c.latency_fs, energy_fj: c.energy_fj }
    }
}

impl PhaseRow {
    pub fn cost(&self) -> Cost {
        Cost { latency_fs: self.latency_fs, energy_fj: self.energy_fj }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreakdownReport {
    pub kind: BreakdownKind,
    pub design: MatDesign,
    pub dataset: String,
    /// Encoded rows: padded training rows, or test queries.
    pub samples: usize,
    pub features: usize,
    pub config: SimConfig,
    pub permutation_in_pe: PhaseRow,
    pub permutation_pe_to_reg: PhaseRow,
    pub permutation_reg_to_pe: PhaseRow,
    pub encoding_bundling: PhaseRow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundling_threshold_tuning: Option<PhaseRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outlier_detection: Option<PhaseRow>,
    pub total: PhaseRow,
    pub cost_table: CostTable,
}

impl BreakdownReport {
    pub(crate) fn build(
        kind: BreakdownKind,
        trace: &Trace,
        prices: &PriceList,
        shape: &DatasetShape,
        samples: usize,
        cfg: &SimConfig,
        design: &Design,
    ) -> Result<Self> {
        let mut rows = [Cost::default(); 5];
        for s in &trace.steps {
            let c = prices.step(s)?;
            let slot = match (s.phase, s.stage) {
                (Phase::Encoding, Stage::PermuteInPe) => 0,
                (Phase::Encoding, Stage::PermutePeToReg) => 1,
                (Phase::Encoding, Stage::PermuteRegToPe) => 2,
                (Phase::Encoding, Stage::Other) => 3,
                _ => 4,
            };
            rows[slot] += c;
        }
        let total: Cost = rows.iter().copied().sum();
        let tail = PhaseRow::from(rows[4]);
        Ok(Self {
            kind,
            design: design.mat.clone(),
            dataset: shape.name.clone(),
            samples,
            features: shape.features,
            config: cfg.clone(),
            permutation_in_pe: rows[0].into(),
            permutation_pe_to_reg: rows[1].into(),
            permutation_reg_to_pe: rows[2].into(),
            encoding_bundling: rows[3].into(),
            bundling_threshold_tuning: (kind == BreakdownKind::Training).then_some(tail),
            outlier_detection: (kind == BreakdownKind::Testing).then_some(tail),
            total: total.into(),
            cost_table: design.costs.clone(),
        })
    }

    pub fn tail(&self) -> PhaseRow {
        self.bundling_threshold_tuning.or(self.outlier_detection).unwrap_or_default()
    }

    /// Phase rows in table order, excluding the total.
    pub fn phases(&self) -> [(&'static str, PhaseRow); 5] {
        let tail_name = match self.kind {
            BreakdownKind::Training => "Bndl+Thr+Tun",
            BreakdownKind::Testing => "Outlier Detection",
        };
        [
            ("Permutation in-PE", self.permutation_in_pe),
            ("Permutation PE->REG", self.permutation_pe_to_reg),
            ("Permutation REG->PE", self.permutation_reg_to_pe),
            ("Encoding bundling", self.encoding_bundling),
            (tail_name, self.tail()),
        ]
    }

    pub fn encoding(&self) -> Cost {
        self.permutation_in_pe.cost()
            + self.permutation_pe_to_reg.cost()
            + self.permutation_reg_to_pe.cost()
            + self.encoding_bundling.cost()
    }

    pub fn encoding_latency_share(&self) -> f64 {
        ratio(self.encoding().latency_fs, self.total.latency_fs)
    }

    /// Register traffic as a share of encoding latency.
    pub fn comm_latency_share(&self) -> f64 {
        ratio(self.permutation_pe_to_reg.latency_fs + self.permutation_reg_to_pe.latency_fs, self.encoding().latency_fs)
    }

    pub fn comm_energy_share(&self) -> f64 {
        ratio(self.permutation_pe_to_reg.energy_fj + self.permutation_reg_to_pe.energy_fj, self.encoding().energy_fj)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            BreakdownKind::Training => "training",
            BreakdownKind::Testing => "testing",
        };
        let _ = writeln!(
            s,
            "{kind} breakdown: {} on {} ({} rows, {} features, D={}, k={}, epochs={})",
            self.dataset, self.design.name, self.samples, self.features, self.config.dims, self.config.levels, self.config.epochs
        );
        s.push_str(&cost_table_text(&self.cost_table));
        let _ = writeln!(s, "{:<22} {:>16} {:>16}", "phase", "latency (us)", "energy (uJ)");
        for (name, row) in self.phases().iter().chain([("Total", self.total)].iter()) {
            let _ = writeln!(s, "{name:<22} {:>16.3} {:>16.3}", row.latency_us, row.energy_uj);
        }
        let _ = writeln!(
            s,
            "encoding share {:.1}% of latency; register traffic {:.1}% of encoding latency, {:.1}% of energy",
            100.0 * self.encoding_latency_share(),
            100.0 * self.comm_latency_share(),
            100.0 * self.comm_energy_share()
        );
        s
    }
}

type Getter = fn(&CostTable) -> Option<crate::design::OpCost>;

const OPS: [(&str, Getter); 8] = [
    ("Read/NOT", |t| t.read_not),
    ("AND/OR", |t| t.and_or),
    ("Mult", |t| t.mult),
    ("Write", |t| t.write),
    ("Add", |t| t.add),
    ("Sub", |t| t.sub),
    ("Shift", |t| t.shift),
    ("Permut", |t| t.permutation),
];

fn cost_cell(t: &CostTable, get: Getter) -> String {
    get(t).map_or_else(|| "-".to_string(), |c| format!("{:.2}/{:.2}", c.latency_ns, c.energy_nj))
}

/// One line of `op latency/energy` pairs plus the register-traffic fractions.
pub fn cost_table_text(t: &CostTable) -> String {
    let cells: Vec<String> = OPS.iter().map(|(name, get)| format!("{name} {}", cost_cell(t, *get))).collect();
    format!(
        "per-op ns/nJ: {}; comm fractions {:.3} time / {:.3} energy\n",
        cells.join(", "),
        t.comm_time_fraction,
        t.comm_energy_fraction
    )
}

fn ratio(a: u128, b: u128) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub design: String,
    pub dataset: String,
    pub training: BreakdownReport,
    pub testing: BreakdownReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub design: MatDesign,
    pub cost_table: CostTable,
    /// Training plus testing over all shapes.
    pub total: PhaseRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SimConfig,
    pub designs: Vec<DesignSummary>,
    /// Indices into `designs`, fastest first.
    pub rank_by_latency: Vec<usize>,
    /// Indices into `designs`, most frugal first.
    pub rank_by_energy: Vec<usize>,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub(crate) fn new(designs: &[Design], cfg: &SimConfig, entries: Vec<SweepEntry>) -> Self {
        let per = entries.len() / designs.len();
        let summaries: Vec<DesignSummary> = designs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let total: Cost = entries[i * per..(i + 1) * per]
                    .iter()
                    .map(|e| e.training.total.cost() + e.testing.total.cost())
                    .sum();
                DesignSummary { design: d.mat.clone(), cost_table: d.costs.clone(), total: total.into() }
            })
            .collect();
        let mut by_lat: Vec<usize> = (0..summaries.len()).collect();
        by_lat.sort_by_key(|&i| summaries[i].total.latency_fs);
        let mut by_en: Vec<usize> = (0..summaries.len()).collect();
        by_en.sort_by_key(|&i| summaries[i].total.energy_fj);
        Self { config: cfg.clone(), designs: summaries, rank_by_latency: by_lat, rank_by_energy: by_en, entries }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "per-op costs (latency ns / energy nJ)");
        let _ = write!(s, "{:<10}", "op");
        for d in &self.designs {
            let _ = write!(s, " {:>18}", d.design.name);
        }
        let _ = writeln!(s);
        for (name, get) in OPS {
            let _ = write!(s, "{name:<10}");
            for d in &self.designs {
                let _ = write!(s, " {:>18}", cost_cell(&d.cost_table, get));
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<12} {:<12} {:>14} {:>14} {:>14} {:>14}", "design", "dataset", "train (us)", "train (uJ)", "test (us)", "test (uJ)");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<12} {:<12} {:>14.3} {:>14.3} {:>14.3} {:>14.3}",
                e.design, e.dataset, e.training.total.latency_us, e.training.total.energy_uj,
                e.testing.total.latency_us, e.testing.total.energy_uj
            );
        }
        let names = |r: &[usize]| r.iter().map(|&i| self.designs[i].design.name.as_str()).collect::<Vec<_>>().join(" < ");
        let _ = writeln!(s);
        let _ = writeln!(s, "latency ranking: {}", names(&self.rank_by_latency));
        let _ = writeln!(s, "energy ranking:  {}", names(&self.rank_by_energy));
        s
    }
}
