//! Element-level functional model of the mat. Every operation updates the
//! cell contents and returns the trace it would issue.

use std::collections::HashMap;

use odhd_core::{Hypervector, SeedSet};

use crate::error::{Result, SimError};
use crate::layout::{HvRow, LayoutPlan};
use crate::schedule;
use crate::trace::{Phase, Trace};

#[derive(Clone, Debug)]
pub struct MatState {
    layout: LayoutPlan,
    cells: HashMap<(usize, usize), Vec<i64>>,
}

impl MatState {
    pub fn new(layout: LayoutPlan) -> Self {
        Self { layout, cells: HashMap::new() }
    }

    pub fn layout(&self) -> &LayoutPlan {
        &self.layout
    }

    fn pe_row(&self, pe: usize, row: usize) -> Vec<i64> {
        self.cells.get(&(pe, row)).cloned().unwrap_or_else(|| vec![0; self.layout.n()])
    }

    fn set_pe_row(&mut self, pe: usize, row: usize, v: Vec<i64>) {
        self.cells.insert((pe, row), v);
    }

    /// Writes an HV without cost (initial placement).
    pub fn store(&mut self, at: HvRow, hv: &Hypervector) -> Result<()> {
        self.layout.check(at)?;
        if hv.dims() != self.layout.dims {
            return Err(SimError::InvalidArgument(format!(
                "HV has {} elements, layout expects {}",
                hv.dims(),
                self.layout.dims
            )));
        }
        for (j, pe) in self.layout.lane_pes(at.lane).enumerate() {
            let seg = self.layout.segment(j);
            let mut row = vec![0; self.layout.n()];
            row[..seg.len()].copy_from_slice(&hv.elems()[seg]);
            self.set_pe_row(pe, at.row, row);
        }
        Ok(())
    }

    pub fn load(&self, at: HvRow) -> Result<Hypervector> {
        self.layout.check(at)?;
        let mut out = Vec::with_capacity(self.layout.dims);
        for (j, pe) in self.layout.lane_pes(at.lane).enumerate() {
            let seg = self.layout.segment(j);
            out.extend_from_slice(&self.pe_row(pe, at.row)[..seg.len()]);
        }
        Ok(Hypervector::from_accumulator(out)?)
    }

    /// Places the seed segment in the compute lane; it is never written again.
    pub fn load_seeds(&mut self, seeds: &SeedSet) -> Result<()> {
        if seeds.levels() != self.layout.levels {
            return Err(SimError::InvalidArgument(format!(
                "{} seeds for a layout of {} levels",
                seeds.levels(),
                self.layout.levels
            )));
        }
        for level in 1..=seeds.levels() {
            self.store(self.layout.seed_row(level), seeds.seed(level))?;
        }
        Ok(())
    }

    fn copy_row(&mut self, from: HvRow, to: HvRow) {
        let pes_from = self.layout.lane_pes(from.lane);
        for (pf, pt) in pes_from.zip(self.layout.lane_pes(to.lane)) {
            let v = self.pe_row(pf, from.row);
            self.set_pe_row(pt, to.row, v);
        }
    }

    fn add_rows(&mut self, a: HvRow, b: HvRow, dest: HvRow) {
        for pe in self.layout.lane_pes(dest.lane) {
            let x = self.pe_row(pe, a.row);
            let y = self.pe_row(pe, b.row);
            self.set_pe_row(pe, dest.row, x.iter().zip(&y).map(|(p, q)| p + q).collect());
        }
    }

    fn same_lane(&self, rows: &[HvRow]) -> Result<usize> {
        for r in rows {
            self.layout.check(*r)?;
        }
        let lane = rows[0].lane;
        if rows.iter().any(|r| r.lane != lane) {
            return Err(SimError::Layout("rows are not column-aligned in the same PEs".into()));
        }
        Ok(lane)
    }

    /// Rotates the HV in `src` right by `shift` into the lane's third spare
    /// row. `src` itself is left untouched.
    pub fn cim_permute(&mut self, src: HvRow, shift: usize) -> Result<(HvRow, Trace)> {
        self.layout.check(src)?;
        let spare = self.layout.rows.spare;
        if spare.contains(&src.row) {
            return Err(SimError::Layout(format!(
                "source row {} overlaps the permutation spare rows",
                src.row
            )));
        }
        let d = self.layout.dims;
        let r = shift % d;
        if r == 0 {
            return Ok((src, Trace::new()));
        }
        let pes: Vec<usize> = self.layout.lane_pes(src.lane).collect();
        let span = pes.len();
        let width = self.layout.segment_width;
        let owner = |g: usize| (g / width).min(span - 1);
        let segs: Vec<_> = (0..span).map(|j| self.layout.segment(j)).collect();
        let source: Vec<Vec<i64>> = pes.iter().map(|&pe| self.pe_row(pe, src.row)).collect();
        let n = self.layout.n();
        for (j, &pe) in pes.iter().enumerate() {
            let seg = segs[j].clone();
            let mut local = vec![0i64; n];
            let mut foreign = vec![0i64; n];
            for (c, g) in seg.clone().enumerate() {
                let from = (g + d - r) % d;
                let k = owner(from);
                let v = source[k][from - segs[k].start];
                if k == j {
                    local[c] = v;
                } else {
                    foreign[c] = v;
                }
            }
            // The two pieces have disjoint support, so OR equals bitwise merge.
            let merged = local.iter().zip(&foreign).map(|(a, b)| a | b).collect();
            self.set_pe_row(pe, spare[0], local);
            self.set_pe_row(pe, spare[1], foreign);
            self.set_pe_row(pe, spare[2], merged);
        }
        let out = HvRow { lane: src.lane, row: spare[2] };
        Ok((out, schedule::permute(&self.layout, src.lane, shift, Phase::Encoding)))
    }

    /// Accumulates `rows` into `dest`: copy of the first, then in-place adds.
    pub fn cim_bundle(&mut self, rows: &[HvRow], dest: HvRow) -> Result<Trace> {
        if rows.is_empty() {
            return Err(SimError::InvalidArgument("bundling needs at least one row".into()));
        }
        let mut all = rows.to_vec();
        all.push(dest);
        let lane = self.same_lane(&all)?;
        if rows[1..].contains(&dest) {
            return Err(SimError::Layout("destination row is also a later operand".into()));
        }
        self.copy_row(rows[0], dest);
        for &r in &rows[1..] {
            self.add_rows(dest, r, dest);
        }
        schedule::bundle(&self.layout, lane, rows.len(), Phase::Encoding)
    }

    /// Dot product of two aligned rows via point-wise multiply and
    /// shift-add reduction.
    pub fn cim_dot(&self, a: HvRow, b: HvRow) -> Result<(i128, Trace)> {
        let lane = self.same_lane(&[a, b])?;
        let n = self.layout.n();
        let pes: Vec<usize> = self.layout.lane_pes(lane).collect();
        let mut partials: Vec<i128> = Vec::with_capacity(pes.len());
        for &pe in &pes {
            let x = self.pe_row(pe, a.row);
            let y = self.pe_row(pe, b.row);
            let mut p: Vec<i128> = x.iter().zip(&y).map(|(u, v)| *u as i128 * *v as i128).collect();
            for stage in 0..schedule::log2_ceil(n) {
                let off = 1usize << stage;
                let shifted: Vec<i128> = (0..n).map(|c| if c + off < n { p[c + off] } else { 0 }).collect();
                for (pc, s) in p.iter_mut().zip(shifted) {
                    *pc += s;
                }
            }
            partials.push(p[0]);
        }
        while partials.len() > 1 {
            partials = partials.chunks(2).map(|c| c.iter().sum()).collect();
        }
        Ok((partials[0], schedule::dot(&self.layout, lane, Phase::Tuning)))
    }

    /// Floor division of every element by 2^power.
    pub fn cim_shift_divide(&mut self, at: HvRow, power: u32) -> Result<Trace> {
        if power == 0 {
            return Err(SimError::InvalidArgument("shift-division by 2^0 is not needed".into()));
        }
        self.layout.check(at)?;
        let sh = power.min(63);
        let pes: Vec<usize> = self.layout.lane_pes(at.lane).collect();
        for &pe in &pes {
            let v = self.pe_row(pe, at.row).into_iter().map(|x| x >> sh).collect();
            self.set_pe_row(pe, at.row, v);
        }
        Ok(schedule::shift_divide(&pes, power, Phase::Tuning))
    }

    pub fn cim_divide(&mut self, at: HvRow, divisor: u64) -> Result<Trace> {
        if !divisor.is_power_of_two() {
            return Err(SimError::InvalidArgument(format!(
                "divisor {divisor} is not a power of two"
            )));
        }
        self.cim_shift_divide(at, divisor.trailing_zeros())
    }

    /// Encodes a sample given its 1-based level indices, Horner style:
    /// acc = s(l_m), then acc = ρ(acc) + s(l_i) down to i = 1. The result
    /// ends in the work row and is copied to `dest` when that differs.
    pub fn cim_encode(&mut self, levels: &[usize], dest: HvRow) -> Result<Trace> {
        let k = self.layout.levels;
        if levels.is_empty() || levels.iter().any(|&l| l == 0 || l > k) {
            return Err(SimError::InvalidArgument(format!("levels must be non-empty and within 1..={k}")));
        }
        let work = self.layout.compute_row(self.layout.rows.work);
        self.copy_row(self.layout.seed_row(*levels.last().unwrap()), work);
        for &l in levels[..levels.len() - 1].iter().rev() {
            let (rotated, _) = self.cim_permute(work, 1)?;
            self.add_rows(rotated, self.layout.seed_row(l), work);
        }
        let mut t = schedule::encode(&self.layout, levels.len(), Phase::Encoding)?;
        if dest != work {
            self.layout.check(dest)?;
            self.copy_row(work, dest);
            t.compute(Phase::Encoding, crate::trace::Op::Write, self.layout.lane_pes(dest.lane), 1);
        }
        Ok(t)
    }
}
