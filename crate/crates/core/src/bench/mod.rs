//! Synthetic landscapes, brute-force enumeration and the experiment harness.

mod brute;
mod experiment;
mod landscape;
mod report;
mod stats;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::plan::PlanError;
use crate::space::SpaceError;

pub use brute::{brute_force, BruteForce, DEFAULT_BUDGET};
pub use experiment::{
    compare_plans, correlate, run_experiment, CellFailure, CorrelationRow, CorrelationTable, ExperimentConfig,
    ExperimentReport, MeanRow, PlanComparison, PlanEntry, PlanReport, PlanSummary,
};
pub use landscape::{LandscapeKind, LandscapeSpec, SyntheticLandscape, FLOOR};
pub use report::{correlations_csv, csv_bytes, curve_csv, means_csv, summary_json, write_atomic, write_report};
pub use stats::{mean, pearson, sign_test, Histogram};

/// Orderings used by the reference protocol.
pub const PROTOCOL_ORDERINGS: usize = 590;
/// Reduced ordering count for quick runs.
pub const FAST_ORDERINGS: usize = 59;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("space has {required} points, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },
    #[error("landscape: {0}")]
    Landscape(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Io(e.to_string())
    }
}

/// `count` seeded random permutations of `0..m`, shared by every plan of an
/// experiment.
pub fn random_orderings(m: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut o: Vec<usize> = (0..m).collect();
            o.shuffle(&mut rng);
            o
        })
        .collect()
}
