use std::collections::HashMap;
use std::io::Write;

use super::{Landscape, ParameterSpace, Point, SpaceError};
use crate::Scalar;

/// Memoized objective values for one search run (or several sequential runs).
///
/// Every distinct point reaches the landscape exactly once. With a capacity
/// set, a request that would store a new entry past it fails instead of
/// evicting, since eviction would break the commonality accounting.
#[derive(Debug, Clone)]
pub struct MemoCache<T> {
    entries: HashMap<Point, T>,
    hits: u64,
    misses: u64,
    capacity: Option<usize>,
}

impl<T> Default for MemoCache<T> {
    fn default() -> Self {
        Self {
            entries: HashMap::new(),
            hits: 0,
            misses: 0,
            capacity: None,
        }
    }
}

impl<T: Scalar> MemoCache<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: usize) -> Self {
        Self {
            capacity: Some(capacity),
            ..Self::default()
        }
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn requests(&self) -> u64 {
        self.hits + self.misses
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, point: &Point) -> Option<T> {
        self.entries.get(point).copied()
    }

    pub fn evaluate<L>(
        &mut self,
        space: &ParameterSpace,
        landscape: &L,
        point: &Point,
    ) -> Result<T, SpaceError>
    where
        L: Landscape<T> + ?Sized,
    {
        space.validate(point)?;
        if let Some(v) = self.entries.get(point) {
            self.hits += 1;
            return Ok(*v);
        }
        if let Some(capacity) = self.capacity {
            if self.entries.len() >= capacity {
                return Err(SpaceError::CacheFull { capacity });
            }
        }
        let value = landscape.value(point);
        if !value.is_finite() {
            return Err(SpaceError::NonFinite {
                point: point.clone(),
            });
        }
        self.misses += 1;
        self.entries.insert(point.clone(), value);
        Ok(value)
    }

    /// Entries sorted by point.
    pub fn sorted_entries(&self) -> Vec<(&Point, T)> {
        let mut v: Vec<_> = self.entries.iter().map(|(p, &f)| (p, f)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Writes `coords,value` rows sorted by point.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(["coords", "value"])?;
        for (p, v) in self.sorted_entries() {
            out.write_record([p.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Memoized evaluation of `point`.
pub fn evaluate<T, L>(
    space: &ParameterSpace,
    landscape: &L,
    point: &Point,
    cache: &mut MemoCache<T>,
) -> Result<T, SpaceError>
where
    T: Scalar,
    L: Landscape<T> + ?Sized,
{
    cache.evaluate(space, landscape, point)
}
