use num_bigint::BigUint;
use serde::Serialize;

use super::{BenchError, Histogram};
use crate::space::{Landscape, ObjectiveSpec, ParameterSpace, Point};
use crate::Scalar;

/// Default cap on enumerated points.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Result of enumerating the whole grid.
#[derive(Debug, Clone, Serialize)]
pub struct BruteForce<T> {
    /// Lexicographically first point attaining the minimum.
    pub best_point: Point,
    pub best_value: T,
    pub worst_value: T,
    pub evaluations: u64,
    pub histogram: Histogram,
    /// Exact per-objective (min, max) for bi-objective landscapes.
    pub raw_bounds: Option<[(T, T); 2]>,
}

impl<T: Scalar> BruteForce<T> {
    /// 0-1 scaling bounds for the scalar value.
    pub fn value_spec(&self) -> Result<ObjectiveSpec<T>, BenchError> {
        ObjectiveSpec::single(self.best_value, self.worst_value).map_err(BenchError::Space)
    }

    /// 0-1 scaling bounds for the two raw objectives, if any.
    pub fn raw_spec(&self) -> Option<Result<ObjectiveSpec<T>, BenchError>> {
        self.raw_bounds
            .map(|[a, b]| ObjectiveSpec::bi(a, b).map_err(BenchError::Space))
    }
}

pub fn brute_force<T, L>(
    space: &ParameterSpace,
    landscape: &L,
    budget: u64,
    bins: usize,
) -> Result<BruteForce<T>, BenchError>
where
    T: Scalar,
    L: Landscape<T> + ?Sized,
{
    let required = space.total_size();
    if required > BigUint::from(budget) {
        return Err(BenchError::BudgetExceeded { required, budget });
    }
    let mut values = Vec::with_capacity(budget.min(1 << 24) as usize);
    let mut best: Option<(Point, T)> = None;
    let mut worst = T::neg_infinity();
    let mut raw: Option<[(T, T); 2]> = None;
    for p in space.points() {
        let v = landscape.value(&p);
        if !v.is_finite() {
            return Err(BenchError::Space(crate::space::SpaceError::NonFinite { point: p }));
        }
        if let Some([a, b]) = landscape.raw_objectives(&p) {
            let r = raw.get_or_insert([(a, a), (b, b)]);
            r[0] = (r[0].0.min(a), r[0].1.max(a));
            r[1] = (r[1].0.min(b), r[1].1.max(b));
        }
        worst = worst.max(v);
        values.push(v.as_f64());
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((p, v));
        }
    }
    let (best_point, best_value) = best.expect("space has at least one point");
    Ok(BruteForce {
        best_point,
        best_value,
        worst_value: worst,
        evaluations: values.len() as u64,
        histogram: Histogram::new(values.iter().copied(), bins, best_value.as_f64(), worst.as_f64()),
        raw_bounds: raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::SyntheticLandscape;

    #[test]
    fn single_parameter() {
        let space = ParameterSpace::uniform(1, 3).unwrap();
        let f = |p: &Point| [0.7, 0.2, 0.9][p.coords()[0]];
        let r = brute_force(&space, &f, DEFAULT_BUDGET, 4).unwrap();
        assert_eq!(r.evaluations, 3);
        assert_eq!(r.best_value, 0.2);
        assert_eq!(r.best_point.coords(), &[1]);
        assert_eq!(r.worst_value, 0.9);
        assert_eq!(r.histogram.total(), 3);
    }

    #[test]
    fn budget_refusal_reports_requirement() {
        let space = ParameterSpace::uniform(10, 3).unwrap();
        let err = brute_force(&space, &|_: &Point| 0.0f64, 1000, 4).unwrap_err();
        assert_eq!(
            err,
            BenchError::BudgetExceeded {
                required: BigUint::from(59049u32),
                budget: 1000
            }
        );
    }

    #[test]
    fn separable_minimum_matches_per_parameter_composition() {
        let space = ParameterSpace::from_cardinalities(&[3, 4, 2, 3, 5]).unwrap();
        let l = SyntheticLandscape::new("separable".parse().unwrap(), &space, 8).unwrap();
        let r = brute_force::<f64, _>(&space, &l, DEFAULT_BUDGET, 10).unwrap();
        // per-parameter minimisation with the others held anywhere
        let mut point = Point::new(vec![0; 5]);
        for i in 0..5 {
            let best = (0..space.cardinality(i))
                .min_by(|&a, &b| {
                    let mut pa = point.clone();
                    pa.coords_mut()[i] = a;
                    let mut pb = point.clone();
                    pb.coords_mut()[i] = b;
                    Landscape::<f64>::value(&l, &pa).partial_cmp(&Landscape::<f64>::value(&l, &pb)).unwrap()
                })
                .unwrap();
            point.coords_mut()[i] = best;
        }
        assert_eq!(r.best_point, point);
        assert!((r.best_value - Landscape::<f64>::value(&l, &point)).abs() < 1e-15);
    }

    #[test]
    fn raw_bounds_for_conflict_landscape() {
        let space = ParameterSpace::uniform(4, 3).unwrap();
        let l = SyntheticLandscape::new("conflict".parse().unwrap(), &space, 2).unwrap();
        let r = brute_force::<f64, _>(&space, &l, DEFAULT_BUDGET, 5).unwrap();
        let spec = r.raw_spec().unwrap().unwrap();
        assert_eq!(spec.bounds()[0].0, 0.0);
        assert!(spec.bounds()[1].1 > spec.bounds()[1].0);
        assert!(r.value_spec().is_ok());
    }
}
