//! Parameter grids, points and the objective-function contract.

mod memo;
mod objective;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Scalar;

pub use memo::{evaluate, MemoCache};
pub use objective::{combine_bi_objective, Combined, ObjectiveKind, ObjectiveSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("parameter space must contain at least one parameter")]
    EmptySpace,
    #[error("parameter {param} has no levels")]
    EmptyParameter { param: usize },
    #[error("parameter {param} repeats level label {label:?}")]
    DuplicateLevel { param: usize, label: String },
    #[error("parameter at position {position} carries id {id}")]
    IdMismatch { position: usize, id: usize },
    #[error("point has {found} coordinates, space has {expected} parameters")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("level {level} out of range for parameter {param} (cardinality {cardinality})")]
    LevelOutOfRange {
        param: usize,
        level: usize,
        cardinality: usize,
    },
    #[error("cannot parse point {0:?}")]
    BadPoint(String),
    #[error("landscape returned non-finite value at point {point}")]
    NonFinite { point: Point },
    #[error("memo cache is full ({capacity} entries)")]
    CacheFull { capacity: usize },
    #[error("degenerate bounds for objective {objective}: min {min} >= max {max}")]
    DegenerateBounds { objective: usize, min: f64, max: f64 },
    #[error("invalid objective weights: {0}")]
    BadWeights(String),
}

/// One discrete design parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameter {
    id: usize,
    name: String,
    levels: Vec<String>,
}

impl Parameter {
    pub fn new(id: usize, name: impl Into<String>, levels: Vec<String>) -> Result<Self, SpaceError> {
        if levels.is_empty() {
            return Err(SpaceError::EmptyParameter { param: id });
        }
        for (i, label) in levels.iter().enumerate() {
            if levels[..i].contains(label) {
                return Err(SpaceError::DuplicateLevel {
                    param: id,
                    label: label.clone(),
                });
            }
        }
        Ok(Self {
            id,
            name: name.into(),
            levels,
        })
    }

    /// Parameter `p<id>` with levels labelled `0..cardinality`.
    pub fn indexed(id: usize, cardinality: usize) -> Result<Self, SpaceError> {
        Self::new(
            id,
            format!("p{id}"),
            (0..cardinality).map(|l| l.to_string()).collect(),
        )
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn cardinality(&self) -> usize {
        self.levels.len()
    }
}

/// Ordered product of finite parameter domains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSpace {
    params: Vec<Parameter>,
}

impl ParameterSpace {
    pub fn new(params: Vec<Parameter>) -> Result<Self, SpaceError> {
        if params.is_empty() {
            return Err(SpaceError::EmptySpace);
        }
        for (position, p) in params.iter().enumerate() {
            if p.id != position {
                return Err(SpaceError::IdMismatch { position, id: p.id });
            }
        }
        Ok(Self { params })
    }

    /// `m` parameters with `levels` values each.
    pub fn uniform(m: usize, levels: usize) -> Result<Self, SpaceError> {
        Self::from_cardinalities(&vec![levels; m])
    }

    pub fn from_cardinalities(cards: &[usize]) -> Result<Self, SpaceError> {
        let params = cards
            .iter()
            .enumerate()
            .map(|(id, &c)| Parameter::indexed(id, c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(params)
    }

    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    /// Parameter count `m`.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn cardinality(&self, param: usize) -> usize {
        self.params[param].cardinality()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.params.iter().map(Parameter::cardinality).collect()
    }

    /// Exact number of points in the grid.
    pub fn total_size(&self) -> BigUint {
        self.params
            .iter()
            .fold(BigUint::from(1u32), |acc, p| acc * p.cardinality())
    }

    pub fn validate(&self, point: &Point) -> Result<(), SpaceError> {
        if point.len() != self.len() {
            return Err(SpaceError::DimensionMismatch {
                expected: self.len(),
                found: point.len(),
            });
        }
        for (param, &level) in point.coords().iter().enumerate() {
            let cardinality = self.cardinality(param);
            if level >= cardinality {
                return Err(SpaceError::LevelOutOfRange {
                    param,
                    level,
                    cardinality,
                });
            }
        }
        Ok(())
    }

    /// All points in lexicographic order (parameter 0 most significant).
    pub fn points(&self) -> Points {
        Points {
            cards: self.cardinalities(),
            next: Some(vec![0; self.len()]),
        }
    }
}

/// Lexicographic odometer over a grid.
pub struct Points {
    cards: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Points {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.cards[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Point(current))
    }
}

/// Level index per parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(Vec<usize>);

impl Point {
    pub fn new(coords: Vec<usize>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [usize] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinates joined with `sep`.
    pub fn join(&self, sep: &str) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses coordinates separated by `sep`.
    pub fn parse_with(s: &str, sep: char) -> Result<Self, SpaceError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(SpaceError::BadPoint(s.to_string()));
        }
        s.split(sep)
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(Point)
            .map_err(|_| SpaceError::BadPoint(s.to_string()))
    }
}

impl From<Vec<usize>> for Point {
    fn from(v: Vec<usize>) -> Self {
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join(","))
    }
}

impl FromStr for Point {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Point::parse_with(s, ',')
    }
}

/// Deterministic black-box objective over a parameter space.
pub trait Landscape<T: Scalar>: Sync {
    fn value(&self, point: &Point) -> T;

    /// Raw objectives before combination, for bi-objective landscapes.
    fn raw_objectives(&self, _point: &Point) -> Option<[T; 2]> {
        None
    }
}

impl<T: Scalar, F> Landscape<T> for F
where
    F: Fn(&Point) -> T + Sync,
{
    fn value(&self, point: &Point) -> T {
        self(point)
    }
}
