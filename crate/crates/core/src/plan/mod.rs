//! Search structures: naming grammar, circular cycle expansion and
//! recombination schedules.

mod expand;
mod schedule;
mod structure;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use expand::expand_cycle;
pub use schedule::{build_recombination_schedule, midpoint_offsets, CycleStart, TYPE_A_OFFSETS, TYPE_B_OFFSETS};
pub use structure::{parse_structure_name, StructureSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("invalid structure: {0}")]
    Validation(String),
    #[error("structure needs blocks of {size} parameters but only {m} are available")]
    TooFewParameters { m: usize, size: usize },
    #[error("start offset {offset} outside 0..{m}")]
    OffsetOutOfRange { offset: usize, m: usize },
    #[error("structure {0} never covers all parameters")]
    NonTerminating(String),
    #[error("truncating {0} leaves an empty cycle")]
    EmptyTruncatedCycle(String),
    #[error("unknown recombination kind {0:?} (expected none, A or B)")]
    UnknownRecombination(String),
}

/// Traversal direction around the circular parameter list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verse {
    Forward,
    Reverse,
}

impl fmt::Display for Verse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verse::Forward => "forward",
            Verse::Reverse => "reverse",
        })
    }
}

/// Sweep pattern across cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Recombination {
    #[serde(rename = "none")]
    None,
    A,
    B,
}

impl fmt::Display for Recombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recombination::None => "none",
            Recombination::A => "A",
            Recombination::B => "B",
        })
    }
}

impl FromStr for Recombination {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "none" | "None" | "NONE" => Ok(Recombination::None),
            "A" | "a" => Ok(Recombination::A),
            "B" | "b" => Ok(Recombination::B),
            other => Err(PlanError::UnknownRecombination(other.to_string())),
        }
    }
}

/// Active block: positions on the circular arrangement, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Block {
    members: Vec<usize>,
}

impl Block {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.members.binary_search(&position).is_ok()
    }

    /// Positions shared with `other`.
    pub fn intersection(&self, other: &Block) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&p| other.contains(p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub offset: usize,
    pub verse: Verse,
    pub blocks: Vec<Block>,
}

/// A structure expanded into cycles of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepPlan {
    name: String,
    #[serde(skip)]
    structure: StructureSpec,
    m: usize,
    #[serde(skip)]
    recombination: Recombination,
    cycles: Vec<Cycle>,
}

impl SweepPlan {
    /// Parses `name` and assembles the plan.
    pub fn from_name(
        name: &str,
        m: usize,
        n_cycles: usize,
        recombination: Recombination,
    ) -> Result<Self, PlanError> {
        assemble_plan(&parse_structure_name(name)?, m, n_cycles, recombination)
    }

    /// Plan whose single block is the whole space.
    pub fn whole_space(m: usize) -> Result<Self, PlanError> {
        assemble_plan(&StructureSpec::new(vec![m], vec![0], false)?, m, 1, Recombination::None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &StructureSpec {
        &self.structure
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn recombination(&self) -> Recombination {
        self.recombination
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Blocks in execution order with (cycle, index within cycle).
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize, &Block)> + '_ {
        self.cycles
            .iter()
            .enumerate()
            .flat_map(|(c, cycle)| cycle.blocks.iter().enumerate().map(move |(i, b)| (c, i, b)))
    }

    /// Flattened block sequence; cycle boundaries are ordinary adjacencies.
    pub fn block_sequence(&self) -> Vec<Block> {
        self.blocks().map(|(_, _, b)| b.clone()).collect()
    }

    pub fn total_blocks(&self) -> usize {
        self.cycles.iter().map(|c| c.blocks.len()).sum()
    }

    /// JSON document `{name, m, cycles: [{offset, verse, blocks}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plan serializes")
    }
}

/// Expands `spec` over the recombination schedule.
pub fn assemble_plan(
    spec: &StructureSpec,
    m: usize,
    n_cycles: usize,
    recombination: Recombination,
) -> Result<SweepPlan, PlanError> {
    let schedule = build_recombination_schedule(recombination, m, n_cycles)?;
    let cycles = schedule
        .into_iter()
        .map(|start| {
            expand_cycle(spec, m, start.offset, start.verse).map(|blocks| Cycle {
                offset: start.offset,
                verse: start.verse,
                blocks,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepPlan {
        name: spec.to_string(),
        structure: spec.clone(),
        m,
        recombination,
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cycle_plan() {
        let plan = SweepPlan::from_name("B5-O0", 10, 1, Recombination::None).unwrap();
        assert_eq!(plan.total_blocks(), 2);
    }

    #[test]
    fn recombined_plan_metadata() {
        let plan = SweepPlan::from_name("B5-O0", 10, 3, Recombination::A).unwrap();
        assert_eq!(plan.total_blocks(), 6);
        let meta: Vec<_> = plan.cycles().iter().map(|c| (c.offset, c.verse)).collect();
        assert_eq!(
            meta,
            [(0, Verse::Forward), (9, Verse::Reverse), (5, Verse::Forward)]
        );
    }

    #[test]
    fn too_few_parameters() {
        assert!(matches!(
            SweepPlan::from_name("B2-O1", 1, 1, Recombination::None),
            Err(PlanError::TooFewParameters { m: 1, size: 2 })
        ));
    }

    #[test]
    fn json_shape() {
        let plan = SweepPlan::from_name("B2-O1", 3, 2, Recombination::B).unwrap();
        let json = plan.to_json();
        assert_eq!(json["name"], "B2-O1");
        assert_eq!(json["m"], 3);
        assert_eq!(json["cycles"][0]["verse"], "forward");
        assert_eq!(json["cycles"][1]["verse"], "reverse");
        assert_eq!(json["cycles"][0]["blocks"], serde_json::json!([[0, 1], [1, 2]]));
    }

    #[test]
    fn recombination_names() {
        assert_eq!("none".parse::<Recombination>(), Ok(Recombination::None));
        assert_eq!("B".parse::<Recombination>(), Ok(Recombination::B));
        assert!("C".parse::<Recombination>().is_err());
    }
}
