//! Event traces and their pricing.
//!
//! A trace is a list of steps. Events inside one step are issued together:
//! the step takes as long as its slowest event and costs the sum of their
//! energies. Costs are kept as integer femtoseconds and femtojoules so that
//! sums are exact and associative.

use serde::{Deserialize, Serialize};

use crate::design::{CostTable, OpCost};
use crate::error::{Result, SimError};

/// Row primitives executed inside a PE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    ReadNot,
    AndOr,
    Mult,
    Write,
    Add,
    Sub,
    Shift,
    /// In-PE part of one segment-pair permutation (mask, shift, OR).
    PermuteCore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    PeToReg,
    RegToPe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Compute { op: Op, pe: usize, count: u64 },
    /// One N-wide word moved between a PE and a register.
    Transfer { dir: Dir, pe: usize, width: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Encoding,
    /// Training bundle, threshold computation and fine-tuning.
    Tuning,
    Detection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    PermuteInPe,
    PermutePeToReg,
    PermuteRegToPe,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub phase: Phase,
    pub stage: Stage,
    /// Number of back-to-back executions of this step.
    pub repeat: u64,
    pub events: Vec<Event>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, phase: Phase, stage: Stage, events: Vec<Event>) {
        if !events.is_empty() {
            self.steps.push(Step { phase, stage, repeat: 1, events });
        }
    }

    /// Convenience for a step with the same op once on each PE.
    pub fn compute(&mut self, phase: Phase, op: Op, pes: impl IntoIterator<Item = usize>, count: u64) {
        if count == 0 {
            return;
        }
        let events = pes.into_iter().map(|pe| Event::Compute { op, pe, count }).collect();
        self.push(phase, Stage::Other, events);
    }

    pub fn append(&mut self, other: Trace) {
        self.steps.extend(other.steps);
    }

    /// The same trace executed `times` times in sequence.
    pub fn repeated(mut self, times: u64) -> Trace {
        if times == 0 {
            return Trace::new();
        }
        for s in &mut self.steps {
            s.repeat *= times;
        }
        self
    }

    pub fn with_phase(mut self, phase: Phase) -> Trace {
        for s in &mut self.steps {
            s.phase = phase;
        }
        self
    }

    pub fn count_op(&self, op: Op) -> u64 {
        self.events()
            .map(|(rep, e)| match e {
                Event::Compute { op: o, count, .. } if *o == op => rep * count,
                _ => 0,
            })
            .sum()
    }

    pub fn count_transfers(&self, dir: Dir) -> u64 {
        self.events()
            .map(|(rep, e)| match e {
                Event::Transfer { dir: d, .. } if *d == dir => rep,
                _ => 0,
            })
            .sum()
    }

    fn events(&self) -> impl Iterator<Item = (u64, &Event)> {
        self.steps.iter().flat_map(|s| s.events.iter().map(move |e| (s.repeat, e)))
    }
}

/// Exact latency (fs) and energy (fJ).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cost {
    pub latency_fs: u128,
    pub energy_fj: u128,
}

impl Cost {
    pub fn latency_ns(&self) -> f64 {
        self.latency_fs as f64 / 1e6
    }

    pub fn energy_nj(&self) -> f64 {
        self.energy_fj as f64 / 1e6
    }

    pub fn latency_us(&self) -> f64 {
        self.latency_fs as f64 / 1e9
    }

    pub fn energy_uj(&self) -> f64 {
        self.energy_fj as f64 / 1e9
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost { latency_fs: self.latency_fs + o.latency_fs, energy_fj: self.energy_fj + o.energy_fj }
    }
}

impl std::ops::AddAssign for Cost {
    fn add_assign(&mut self, o: Cost) {
        *self = *self + o;
    }
}

impl std::iter::Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::default(), |a, b| a + b)
    }
}

fn femto(x: f64) -> u128 {
    (x * 1e6).round() as u128
}

fn unit(c: OpCost) -> Cost {
    Cost { latency_fs: femto(c.latency_ns), energy_fj: femto(c.energy_nj) }
}

/// Unit prices resolved from a cost table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceList {
    ops: [Option<Cost>; 8],
    transfer: Option<Cost>,
}

fn op_index(op: Op) -> usize {
    match op {
        Op::ReadNot => 0,
        Op::AndOr => 1,
        Op::Mult => 2,
        Op::Write => 3,
        Op::Add => 4,
        Op::Sub => 5,
        Op::Shift => 6,
        Op::PermuteCore => 7,
    }
}

impl PriceList {
    pub fn new(t: &CostTable) -> Result<Self> {
        t.validate()?;
        let sub = t.sub.map(unit).or_else(|| {
            // NOT, local write, then add with carry-in.
            Some(unit(t.read_not?) + unit(t.write?) + unit(t.add?))
        });
        let core = t.permutation.map(|p| Cost {
            latency_fs: femto(p.latency_ns * (1.0 - t.comm_time_fraction)),
            energy_fj: femto(p.energy_nj * (1.0 - t.comm_energy_fraction)),
        });
        let transfer = t.permutation.map(|p| Cost {
            latency_fs: femto(p.latency_ns * t.comm_time_fraction / 2.0),
            energy_fj: femto(p.energy_nj * t.comm_energy_fraction / 2.0),
        });
        Ok(Self {
            ops: [
                t.read_not.map(unit),
                t.and_or.map(unit),
                t.mult.map(unit),
                t.write.map(unit),
                t.add.map(unit),
                sub,
                t.shift.map(unit),
                core,
            ],
            transfer,
        })
    }

    pub fn op(&self, op: Op) -> Result<Cost> {
        self.ops[op_index(op)]
            .ok_or_else(|| SimError::Config(format!("cost table has no price for `{op:?}`")))
    }

    pub fn transfer(&self) -> Result<Cost> {
        self.transfer
            .ok_or_else(|| SimError::Config("cost table has no permutation entry to price transfers".into()))
    }

    pub fn event(&self, e: &Event) -> Result<Cost> {
        match *e {
            Event::Compute { op, count, .. } => {
                let c = self.op(op)?;
                Ok(Cost { latency_fs: c.latency_fs * count as u128, energy_fj: c.energy_fj * count as u128 })
            }
            Event::Transfer { .. } => self.transfer(),
        }
    }

    pub fn step(&self, s: &Step) -> Result<Cost> {
        let mut lat = 0u128;
        let mut energy = 0u128;
        for e in &s.events {
            let c = self.event(e)?;
            lat = lat.max(c.latency_fs);
            energy += c.energy_fj;
        }
        let r = s.repeat as u128;
        Ok(Cost { latency_fs: lat * r, energy_fj: energy * r })
    }
}

pub fn cost_of(trace: &Trace, table: &CostTable) -> Result<Cost> {
    PriceList::new(table)?.trace(trace)
}

impl PriceList {
    pub fn trace(&self, t: &Trace) -> Result<Cost> {
        t.steps.iter().map(|s| self.step(s)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::design1;

    fn table() -> CostTable {
        design1().costs
    }

    #[test]
    fn single_add_matches_table() {
        let mut t = Trace::new();
        t.compute(Phase::Tuning, Op::Add, [0], 1);
        let c = cost_of(&t, &table()).unwrap();
        assert_eq!(c.latency_ns(), 12.87);
        assert_eq!(c.energy_nj(), 19.97);
    }

    #[test]
    fn empty_trace_is_free() {
        assert_eq!(cost_of(&Trace::new(), &table()).unwrap(), Cost::default());
    }

    #[test]
    fn distinct_pes_share_latency() {
        let mut t = Trace::new();
        t.compute(Phase::Tuning, Op::Add, 0..4, 1);
        let c = cost_of(&t, &table()).unwrap();
        assert_eq!(c.latency_fs, 12_870_000);
        assert_eq!(c.energy_fj, 4 * 19_970_000);
    }

    #[test]
    fn segment_pair_permutation_split() {
        let p = PriceList::new(&table()).unwrap();
        let core = p.op(Op::PermuteCore).unwrap();
        let leg = p.transfer().unwrap();
        let total = core + leg + leg;
        assert_eq!(total.latency_fs, 36_130_000);
        assert_eq!(total.energy_fj, 93_580_000);
        assert_eq!((leg + leg).latency_fs, 20_305_060);
        assert_eq!(core.latency_fs, 15_824_940);
    }

    #[test]
    fn unpriced_op_is_config_error() {
        let mut tab = table();
        tab.mult = None;
        let mut t = Trace::new();
        t.compute(Phase::Tuning, Op::Mult, [0], 1);
        assert!(matches!(cost_of(&t, &tab), Err(SimError::Config(_))));
    }

    #[test]
    fn sub_falls_back_to_decomposition() {
        let mut tab = table();
        tab.sub = None;
        let p = PriceList::new(&tab).unwrap();
        let expect = p.op(Op::ReadNot).unwrap() + p.op(Op::Write).unwrap() + p.op(Op::Add).unwrap();
        assert_eq!(p.op(Op::Sub).unwrap(), expect);
    }

    #[test]
    fn repeat_scales_linearly() {
        let mut t = Trace::new();
        t.compute(Phase::Encoding, Op::Shift, [0, 1], 2);
        let one = cost_of(&t, &table()).unwrap();
        let five = cost_of(&t.clone().repeated(5), &table()).unwrap();
        assert_eq!(five.latency_fs, 5 * one.latency_fs);
        assert_eq!(five.energy_fj, 5 * one.energy_fj);
        assert!(t.repeated(0).is_empty());
    }
}
