//! Functional and cost simulation of a compute-in-memory mat running the
//! one-class HDC detector.

pub mod design;
pub mod error;
pub mod layout;
pub mod mat;
pub mod report;
pub mod schedule;
pub mod sim;
pub mod trace;

pub use design::{design1, design2, design3, CostTable, Design, MatDesign, OpCost};
pub use error::{Result, SimError};
pub use layout::{layout, HvRow, LayoutPlan};
pub use mat::MatState;
pub use report::{BreakdownKind, BreakdownReport, PhaseRow, SweepReport};
pub use sim::{odds_shapes, simulate_testing, simulate_training, sweep, DatasetShape, SimConfig};
pub use trace::{cost_of, Cost, Dir, Event, Op, Phase, Stage, Step, Trace};
