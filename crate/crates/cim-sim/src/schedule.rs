//! Data-independent trace builders. The functional mat operations and the
//! phase simulator both draw their costs from here.

use crate::error::{Result, SimError};
use crate::layout::LayoutPlan;
use crate::trace::{Dir, Event, Op, Phase, Stage, Trace};

/// Residual intra-row shift after removing whole-segment rotations, or
/// `None` when the permutation is free.
pub fn residual_shift(l: &LayoutPlan, shift: usize) -> Option<usize> {
    let r = shift % l.dims;
    if r == 0 {
        return None;
    }
    let s = r % l.segment_width;
    if s == 0 && l.uniform() {
        None
    } else {
        Some(s)
    }
}

/// Two-round permutation: even destination PEs first, then odd ones. Each
/// group of up to two destinations (registers A and B) pays one in-PE step
/// and one transfer in each direction. Residuals above the 3-bit shifter
/// limit add shift steps per round.
pub fn permute(l: &LayoutPlan, lane: usize, shift: usize, phase: Phase) -> Trace {
    let mut t = Trace::new();
    let Some(s) = residual_shift(l, shift) else {
        return t;
    };
    let pes: Vec<usize> = l.lane_pes(lane).collect();
    let span = pes.len();
    let extra_shifts = if s > 3 { s.div_ceil(3) as u64 - 1 } else { 0 };
    for parity in 0..2 {
        let dests: Vec<usize> = (parity..span).step_by(2).collect();
        if dests.is_empty() {
            continue;
        }
        for group in dests.chunks(2) {
            let core = group
                .iter()
                .map(|&j| Event::Compute { op: Op::PermuteCore, pe: pes[j], count: 1 })
                .collect();
            t.push(phase, Stage::PermuteInPe, core);
            let out = group
                .iter()
                .map(|&j| Event::Transfer { dir: Dir::PeToReg, pe: pes[(j + span - 1) % span], width: l.n() })
                .collect();
            t.push(phase, Stage::PermutePeToReg, out);
            let back = group
                .iter()
                .map(|&j| Event::Transfer { dir: Dir::RegToPe, pe: pes[j], width: l.n() })
                .collect();
            t.push(phase, Stage::PermuteRegToPe, back);
        }
        if extra_shifts > 0 {
            let ev = dests
                .iter()
                .map(|&j| Event::Compute { op: Op::Shift, pe: pes[j], count: extra_shifts })
                .collect();
            t.push(phase, Stage::PermuteInPe, ev);
        }
    }
    t
}

/// Copy of the first row, then `count − 1` in-place additions.
pub fn bundle(l: &LayoutPlan, lane: usize, count: usize, phase: Phase) -> Result<Trace> {
    if count == 0 {
        return Err(SimError::InvalidArgument("bundling needs at least one row".into()));
    }
    let mut t = Trace::new();
    t.compute(phase, Op::Write, l.lane_pes(lane), 1);
    let mut adds = Trace::new();
    adds.compute(phase, Op::Add, l.lane_pes(lane), 1);
    t.append(adds.repeated(count as u64 - 1));
    Ok(t)
}

pub fn log2_ceil(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Pairwise accumulation of per-PE partial sums into the first PE.
/// Partner pairs move through the two registers, two pairs at a time.
pub fn cross_pe_reduce(pes: &[usize], width: usize, phase: Phase) -> Trace {
    let mut t = Trace::new();
    let mut active = pes.to_vec();
    while active.len() > 1 {
        let pairs: Vec<(usize, usize)> = active.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
        for batch in pairs.chunks(2) {
            t.push(
                phase,
                Stage::Other,
                batch.iter().map(|&(_, src)| Event::Transfer { dir: Dir::PeToReg, pe: src, width }).collect(),
            );
            t.push(
                phase,
                Stage::Other,
                batch.iter().map(|&(dst, _)| Event::Transfer { dir: Dir::RegToPe, pe: dst, width }).collect(),
            );
        }
        t.compute(phase, Op::Add, pairs.iter().map(|&(dst, _)| dst), 1);
        active = active.chunks(2).map(|c| c[0]).collect();
    }
    t
}

/// Shift-and-add reduction of every PE row to its first column, then across PEs.
pub fn reduce_rows(pes: &[usize], n: usize, phase: Phase) -> Trace {
    let mut t = Trace::new();
    for _ in 0..log2_ceil(n) {
        t.compute(phase, Op::Shift, pes.iter().copied(), 1);
        t.compute(phase, Op::Add, pes.iter().copied(), 1);
    }
    t.append(cross_pe_reduce(pes, n, phase));
    t
}

/// Point-wise product followed by the pop-count style reduction.
pub fn dot(l: &LayoutPlan, lane: usize, phase: Phase) -> Trace {
    let pes: Vec<usize> = l.lane_pes(lane).collect();
    let mut t = Trace::new();
    t.compute(phase, Op::Mult, pes.iter().copied(), 1);
    t.append(reduce_rows(&pes, l.n(), phase));
    t
}

/// Arithmetic right shift by `power` bits with a 3-bit shifter.
pub fn shift_divide(pes: &[usize], power: u32, phase: Phase) -> Trace {
    let mut t = Trace::new();
    t.compute(phase, Op::Shift, pes.iter().copied(), power.div_ceil(3) as u64);
    t
}

/// Horner-order encoding of one sample with `m` features into the work row.
pub fn encode(l: &LayoutPlan, m: usize, phase: Phase) -> Result<Trace> {
    if m == 0 {
        return Err(SimError::InvalidArgument("a sample needs at least one feature".into()));
    }
    let mut t = Trace::new();
    t.compute(phase, Op::Write, l.lane_pes(0), 1);
    let mut step = permute(l, 0, 1, phase);
    step.compute(phase, Op::Add, l.lane_pes(0), 1);
    t.append(step.repeated(m as u64 - 1));
    Ok(t)
}

/// Similarities of `n` stored HVs against H_OC, their mean and mean
/// absolute deviation via shift-division, and R = μ + 2·MAD.
pub fn threshold(l: &LayoutPlan, n: usize, phase: Phase) -> Trace {
    let lane0: Vec<usize> = l.lane_pes(0).collect();
    let mut per = Trace::new();
    per.compute(phase, Op::Write, lane0.iter().copied(), 1);
    per.append(dot(l, 0, phase));
    per.compute(phase, Op::Write, [lane0[0]], 1);
    let mut t = per.repeated(n as u64);

    let stats: Vec<usize> = (0..n.div_ceil(l.n()).max(1)).collect();
    let power = log2_ceil(n);
    // mean
    t.append(reduce_rows(&stats, l.n(), phase));
    if power > 0 {
        t.append(shift_divide(&stats[..1], power, phase));
    }
    // deviations: broadcast μ, subtract, absolute value, reduce, divide
    t.compute(phase, Op::Write, stats.iter().copied(), 1);
    t.compute(phase, Op::Sub, stats.iter().copied(), 1);
    t.compute(phase, Op::ReadNot, stats.iter().copied(), 1);
    t.compute(phase, Op::Add, stats.iter().copied(), 1);
    t.append(reduce_rows(&stats, l.n(), phase));
    if power > 0 {
        t.append(shift_divide(&stats[..1], power, phase));
    }
    // 2·MAD then + μ
    t.compute(phase, Op::Shift, [0], 1);
    t.compute(phase, Op::Add, [0], 1);
    t
}

/// One fine-tuning pass: fetch, score, compare and (worst case) update for
/// every stored HV, then a fresh threshold.
pub fn fine_tune_epoch(l: &LayoutPlan, n: usize, phase: Phase) -> Trace {
    let lane0: Vec<usize> = l.lane_pes(0).collect();
    let mut per = Trace::new();
    per.compute(phase, Op::Write, lane0.iter().copied(), 1);
    per.append(dot(l, 0, phase));
    per.compute(phase, Op::Sub, [lane0[0]], 1);
    per.compute(phase, Op::Add, lane0.iter().copied(), 1);
    let mut t = per.repeated(n as u64);
    t.append(threshold(l, n, phase));
    t
}
