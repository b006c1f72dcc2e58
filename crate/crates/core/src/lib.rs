//! Discrete, derivative-free optimization by overlapping block coordinate
//! descent with recursive recombination of subspaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`]: parameter grids, points, the objective contract and the
//!   memoization cache that turns overlap redundancy into commonality.
//! * [`plan`]: the `[T-]B<sizes>-O<overlaps>` structure grammar, circular
//!   cycle expansion and the type A/B recombination schedules.
//! * [`engine`]: Gauss-Seidel block descent with exhaustive search inside
//!   each active block.
//! * [`indicators`]: search-size, commonality, wake and novelty indicators
//!   computed over a block sequence, with exact integer sizes.
//! * [`bench`]: synthetic landscapes, brute force, the shared-ordering
//!   experiment protocol and the correlation harness.
//!
//! Objective values are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod bench;
pub mod engine;
pub mod indicators;
pub mod plan;
mod scalar;
pub mod space;

pub use scalar::Scalar;

pub use bench::{
    brute_force, correlate, random_orderings, run_experiment, ExperimentReport, LandscapeSpec,
    SyntheticLandscape,
};
pub use engine::{initial_point, run_search, InitPolicy, SearchState, SearchTrace, TraceRecord};
pub use indicators::{IndicatorTrace, SizeLedger, Variants};
pub use plan::{
    assemble_plan, build_recombination_schedule, expand_cycle, parse_structure_name, Block,
    Recombination, StructureSpec, SweepPlan, Verse,
};
pub use space::{
    combine_bi_objective, evaluate, Landscape, MemoCache, ObjectiveSpec, Parameter,
    ParameterSpace, Point,
};

/// Memoization cache over `f64` objective values.
pub type Cache = MemoCache<f64>;
/// Search trace with `f64` objective values.
pub type Trace = SearchTrace<f64>;
/// Single trace row with an `f64` objective value.
pub type Record = TraceRecord<f64>;
/// Objective normalization spec over `f64` raw values.
pub type Objective = ObjectiveSpec<f64>;
/// Search state with an `f64` objective value.
pub type State = SearchState<f64>;

/// Single-precision variants, mostly useful for memory-bound sweeps.
pub mod f32 {
    pub type Cache = super::MemoCache<f32>;
    pub type Trace = super::SearchTrace<f32>;
    pub type Objective = super::ObjectiveSpec<f32>;
}
