//! Placement of hypervectors onto PE rows.
//!
//! A D-element HV occupies the same row of `span = ceil(D/N)` consecutive PEs
//! (a lane). Lane 0 is the compute lane; every lane shares the row map below,
//! and encoded training samples fill the storage rows of all lanes.

use serde::{Deserialize, Serialize};

use crate::design::MatDesign;
use crate::error::{Result, SimError};

/// Row indices of the per-lane map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowMap {
    /// Seeds occupy rows `0..levels`.
    pub levels: usize,
    pub spare: [usize; 3],
    pub scratch: usize,
    pub work: usize,
    pub h_oc: usize,
    pub stats: usize,
    pub broadcast: usize,
    pub first_storage: usize,
}

impl RowMap {
    fn new(levels: usize) -> Self {
        let k = levels;
        Self {
            levels,
            spare: [k, k + 1, k + 2],
            scratch: k + 3,
            work: k + 4,
            h_oc: k + 5,
            stats: k + 6,
            broadcast: k + 7,
            first_storage: k + 8,
        }
    }

    pub fn seed(&self, level: usize) -> usize {
        level - 1
    }
}

/// One HV-wide row: row `row` of every PE in lane `lane`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HvRow {
    pub lane: usize,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutPlan {
    pub design: MatDesign,
    pub dims: usize,
    pub levels: usize,
    /// PEs per HV.
    pub span: usize,
    /// Elements held by each PE of a lane (the last one may hold fewer).
    pub segment_width: usize,
    pub lanes: usize,
    pub rows: RowMap,
    pub storage_slots: usize,
}

impl LayoutPlan {
    pub fn new(design: &MatDesign, levels: usize, dims: usize, n_train: usize) -> Result<Self> {
        design.validate()?;
        if dims == 0 || levels == 0 {
            return Err(SimError::InvalidArgument("dims and levels must be positive".into()));
        }
        let need = levels as u128 * dims as u128;
        if design.cells() < need {
            return Err(SimError::Capacity(format!(
                "P×Q×M×N ≥ k×D violated: {}×{}×{}×{} = {} < {}×{} = {}",
                design.p, design.q, design.m, design.n, design.cells(), levels, dims, need
            )));
        }
        let span = dims.div_ceil(design.n);
        let segment_width = dims.div_ceil(span);
        let lanes = design.pes() / span;
        if lanes == 0 {
            return Err(SimError::Capacity(format!(
                "an HV needs {span} PEs but the mat has only {}",
                design.pes()
            )));
        }
        let rows = RowMap::new(levels);
        if rows.first_storage > design.m {
            return Err(SimError::Layout(format!(
                "{} rows per PE cannot hold {levels} seeds plus {} working rows",
                design.m,
                rows.first_storage - levels
            )));
        }
        let storage_slots = lanes * (design.m - rows.first_storage);
        if n_train > storage_slots {
            return Err(SimError::Layout(format!(
                "{n_train} training HVs exceed the {storage_slots} storage rows available"
            )));
        }
        let stats_pes = n_train.div_ceil(design.n);
        if stats_pes > design.pes() {
            return Err(SimError::Layout(format!(
                "similarity row needs {stats_pes} PEs but the mat has {}",
                design.pes()
            )));
        }
        Ok(Self {
            design: design.clone(),
            dims,
            levels,
            span,
            segment_width,
            lanes,
            rows,
            storage_slots,
        })
    }

    pub fn n(&self) -> usize {
        self.design.n
    }

    /// Whole-segment rotations are pure index remaps only when every PE
    /// holds exactly `segment_width` elements.
    pub fn uniform(&self) -> bool {
        self.span * self.segment_width == self.dims
    }

    pub fn lane_pes(&self, lane: usize) -> std::ops::Range<usize> {
        lane * self.span..(lane + 1) * self.span
    }

    /// Global element range stored by the `j`-th PE of a lane.
    pub fn segment(&self, j: usize) -> std::ops::Range<usize> {
        let lo = (j * self.segment_width).min(self.dims);
        let hi = ((j + 1) * self.segment_width).min(self.dims);
        lo..hi
    }

    pub fn seed_row(&self, level: usize) -> HvRow {
        HvRow { lane: 0, row: self.rows.seed(level) }
    }

    pub fn compute_row(&self, row: usize) -> HvRow {
        HvRow { lane: 0, row }
    }

    /// Storage position of the `i`-th training HV.
    pub fn storage(&self, i: usize) -> Result<HvRow> {
        if i >= self.storage_slots {
            return Err(SimError::Layout(format!("storage slot {i} out of range")));
        }
        let per_lane = self.design.m - self.rows.first_storage;
        Ok(HvRow { lane: i / per_lane, row: self.rows.first_storage + i % per_lane })
    }

    pub fn check(&self, r: HvRow) -> Result<()> {
        if r.lane >= self.lanes || r.row >= self.design.m {
            return Err(SimError::Layout(format!("row {r:?} is outside the mat")));
        }
        Ok(())
    }
}

pub fn layout(design: &MatDesign, levels: usize, dims: usize, n_train: usize) -> Result<LayoutPlan> {
    LayoutPlan::new(design, levels, dims, n_train)
}
