use serde::{Deserialize, Serialize};

use super::SpaceError;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    Single,
    BiObjective,
}

/// 0-1 scaling bounds and weights for each raw objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec<T> {
    kind: ObjectiveKind,
    bounds: Vec<(T, T)>,
    weights: Vec<T>,
}

/// A combined objective value; `clamped` is set when a raw value fell
/// outside its bounds and was pulled back to the nearest bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combined<T> {
    pub value: T,
    pub clamped: bool,
}

impl<T: Scalar> ObjectiveSpec<T> {
    pub fn single(min: T, max: T) -> Result<Self, SpaceError> {
        Self::new(ObjectiveKind::Single, vec![(min, max)], vec![T::one()])
    }

    /// Two objectives weighted 1:1.
    pub fn bi(first: (T, T), second: (T, T)) -> Result<Self, SpaceError> {
        let half = T::of(0.5);
        Self::new(ObjectiveKind::BiObjective, vec![first, second], vec![half, half])
    }

    pub fn new(kind: ObjectiveKind, bounds: Vec<(T, T)>, weights: Vec<T>) -> Result<Self, SpaceError> {
        let expected = match kind {
            ObjectiveKind::Single => 1,
            ObjectiveKind::BiObjective => 2,
        };
        if bounds.len() != expected || weights.len() != expected {
            return Err(SpaceError::BadWeights(format!(
                "expected {expected} bounds and weights, got {} and {}",
                bounds.len(),
                weights.len()
            )));
        }
        for (objective, &(min, max)) in bounds.iter().enumerate() {
            if max.partial_cmp(&min) != Some(std::cmp::Ordering::Greater) || !min.is_finite() || !max.is_finite() {
                return Err(SpaceError::DegenerateBounds {
                    objective,
                    min: min.as_f64(),
                    max: max.as_f64(),
                });
            }
        }
        if weights.iter().any(|w| w.is_nan() || *w < T::zero()) {
            return Err(SpaceError::BadWeights("weights must be non-negative".into()));
        }
        let total = weights.iter().fold(T::zero(), |a, &w| a + w);
        if (total - T::one()).abs() > T::of(1e-6) {
            return Err(SpaceError::BadWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(Self {
            kind,
            bounds,
            weights,
        })
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn bounds(&self) -> &[(T, T)] {
        &self.bounds
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Weighted sum of 0-1 scaled raw values.
    pub fn combine(&self, raw: &[T]) -> Combined<T> {
        let mut clamped = false;
        let mut value = T::zero();
        for ((&f, &(min, max)), &w) in raw.iter().zip(&self.bounds).zip(&self.weights) {
            let mut scaled = (f - min) / (max - min);
            if scaled < T::zero() {
                scaled = T::zero();
                clamped = true;
            } else if scaled > T::one() {
                scaled = T::one();
                clamped = true;
            }
            value = value + w * scaled;
        }
        Combined {
            value: value.max(T::zero()).min(T::one()),
            clamped,
        }
    }
}

/// Normalizes two raw objectives to 0-1 and weights them per `spec`.
pub fn combine_bi_objective<T: Scalar>(
    f1: T,
    f2: T,
    spec: &ObjectiveSpec<T>,
) -> Result<Combined<T>, SpaceError> {
    if spec.kind != ObjectiveKind::BiObjective {
        return Err(SpaceError::BadWeights("spec is not bi-objective".into()));
    }
    Ok(spec.combine(&[f1, f2]))
}
