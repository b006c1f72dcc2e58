use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BenchError;
use crate::space::{Landscape, ObjectiveSpec, ParameterSpace, Point};
use crate::Scalar;

/// Lowest value any synthetic landscape produces, so `1/f` stays finite.
pub const FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LandscapeKind {
    SeparableConvex,
    Trap,
    SeededRandom,
    ConflictPair,
}

/// Landscape kind plus shape constants, written `kind[:key=value,...]`.
///
/// * `separable`: weighted squared distance to a random level per parameter.
/// * `trap[:basins=N,noise=X]`: minimum over basins that rise linearly to a
///   common plateau. The global one is a narrow hole; a wide shallow one sits
///   at the opposite corner and captures searches that cannot see the hole.
/// * `random`: independent uniform value per point.
/// * `conflict[:conflicts=N,coupling=X]`: two raw objectives whose optima
///   disagree on `N` parameters, combined 1:1 after 0-1 scaling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandscapeSpec {
    pub kind: LandscapeKind,
    pub basins: usize,
    pub noise: f64,
    pub conflicts: Option<usize>,
    pub coupling: f64,
}

impl LandscapeSpec {
    pub fn new(kind: LandscapeKind) -> Self {
        Self {
            kind,
            basins: 4,
            noise: 0.01,
            conflicts: None,
            coupling: 0.5,
        }
    }
}

impl fmt::Display for LandscapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LandscapeKind::SeparableConvex => f.write_str("separable"),
            LandscapeKind::SeededRandom => f.write_str("random"),
            LandscapeKind::Trap => write!(f, "trap:basins={},noise={}", self.basins, self.noise),
            LandscapeKind::ConflictPair => {
                f.write_str("conflict:")?;
                if let Some(c) = self.conflicts {
                    write!(f, "conflicts={c},")?;
                }
                write!(f, "coupling={}", self.coupling)
            }
        }
    }
}

impl FromStr for LandscapeSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| BenchError::Landscape(format!("{s:?}: {why}"));
        let (head, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let kind = match head {
            "separable" | "separable-convex" => LandscapeKind::SeparableConvex,
            "trap" => LandscapeKind::Trap,
            "random" | "seeded-random" => LandscapeKind::SeededRandom,
            "conflict" | "conflict-pair" => LandscapeKind::ConflictPair,
            _ => return Err(bad("unknown kind")),
        };
        let mut spec = LandscapeSpec::new(kind);
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match (kind, key) {
                (LandscapeKind::Trap, "basins") => {
                    spec.basins = value.parse().map_err(|_| bad("basins must be an integer"))?;
                    if spec.basins < 2 {
                        return Err(bad("a trap needs at least 2 basins"));
                    }
                }
                (LandscapeKind::Trap, "noise") => {
                    spec.noise = value.parse().map_err(|_| bad("noise must be a number"))?;
                    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
                        return Err(bad("noise must be finite and non-negative"));
                    }
                }
                (LandscapeKind::ConflictPair, "conflicts") => {
                    spec.conflicts = Some(value.parse().map_err(|_| bad("conflicts must be an integer"))?);
                }
                (LandscapeKind::ConflictPair, "coupling") => {
                    spec.coupling = value.parse().map_err(|_| bad("coupling must be a number"))?;
                    if !(spec.coupling >= 0.0 && spec.coupling.is_finite()) {
                        return Err(bad("coupling must be finite and non-negative"));
                    }
                }
                _ => return Err(bad(&format!("unknown option {key}"))),
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
struct Basin {
    center: Vec<usize>,
    weights: Vec<f64>,
    depth: f64,
    /// Normalized distance at which the basin wall reaches the plateau.
    width: f64,
}

#[derive(Debug, Clone)]
enum Shape {
    Separable {
        centers: Vec<usize>,
        weights: Vec<f64>,
        norm: f64,
    },
    Trap {
        basins: Vec<Basin>,
        noise: f64,
    },
    Random,
    Conflict {
        first: (Vec<usize>, Vec<f64>),
        second: (Vec<usize>, Vec<f64>),
        coupled: Vec<(usize, usize)>,
        coupling: f64,
        objective: ObjectiveSpec<f64>,
    },
}

/// Deterministic synthetic objective over a fixed grid.
#[derive(Debug, Clone)]
pub struct SyntheticLandscape {
    spec: LandscapeSpec,
    seed: u64,
    cards: Vec<usize>,
    shape: Shape,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform value in [0, 1) keyed on (seed, salt, point).
fn point_uniform(seed: u64, salt: u64, point: &Point) -> f64 {
    let mut h = splitmix(seed ^ splitmix(salt));
    for &c in point.coords() {
        h = splitmix(h ^ c as u64);
    }
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn span(card: usize) -> f64 {
    card.saturating_sub(1).max(1) as f64
}

impl SyntheticLandscape {
    pub fn new(spec: LandscapeSpec, space: &ParameterSpace, seed: u64) -> Result<Self, BenchError> {
        let cards = space.cardinalities();
        let m = cards.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..m).map(|_| rng.gen_range(0.5..1.5)).collect() };
        let corner = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            cards.iter().map(|&c| if rng.gen_bool(0.5) { 0 } else { c - 1 }).collect()
        };
        let shape = match spec.kind {
            LandscapeKind::SeparableConvex => {
                let centers: Vec<usize> = cards.iter().map(|&c| rng.gen_range(0..c)).collect();
                let weights = weights(&mut rng);
                let norm: f64 = (0..m)
                    .map(|i| {
                        let far = centers[i].max(cards[i] - 1 - centers[i]) as f64;
                        weights[i] * far * far
                    })
                    .sum();
                Shape::Separable {
                    centers,
                    weights,
                    norm: if norm > 0.0 { norm } else { 1.0 },
                }
            }
            LandscapeKind::Trap => {
                let first = corner(&mut rng);
                let opposite: Vec<usize> = first.iter().zip(&cards).map(|(&x, &c)| c - 1 - x).collect();
                let mut basins = vec![
                    Basin {
                        center: first,
                        weights: weights(&mut rng),
                        depth: 0.25,
                        width: 1.0,
                    },
                    Basin {
                        center: opposite,
                        weights: weights(&mut rng),
                        depth: 0.0,
                        width: 0.4,
                    },
                ];
                for _ in 2..spec.basins {
                    basins.push(Basin {
                        center: cards.iter().map(|&c| rng.gen_range(0..c)).collect(),
                        weights: weights(&mut rng),
                        depth: rng.gen_range(0.1..0.4),
                        width: rng.gen_range(0.3..0.8),
                    });
                }
                Shape::Trap {
                    basins,
                    noise: spec.noise,
                }
            }
            LandscapeKind::SeededRandom => Shape::Random,
            LandscapeKind::ConflictPair => {
                let n = spec.conflicts.unwrap_or((m / 2).max(1));
                if n == 0 || n > m {
                    return Err(BenchError::Landscape(format!("conflicts must be in 1..={m}, got {n}")));
                }
                let mut order: Vec<usize> = (0..m).collect();
                order.shuffle(&mut rng);
                let mut conflicting = order[..n].to_vec();
                conflicting.sort_unstable();
                let c1 = corner(&mut rng);
                let mut c2 = c1.clone();
                for &i in &conflicting {
                    c2[i] = cards[i] - 1 - c1[i];
                }
                let (w1, w2) = (weights(&mut rng), weights(&mut rng));
                let coupled: Vec<(usize, usize)> = conflicting.windows(2).map(|w| (w[0], w[1])).collect();
                let objective = ObjectiveSpec::bi(
                    (0.0, w1.iter().sum()),
                    (0.0, w2.iter().sum::<f64>() + spec.coupling * coupled.len() as f64),
                )
                .map_err(|e| BenchError::Landscape(e.to_string()))?;
                Shape::Conflict {
                    first: (c1, w1),
                    second: (c2, w2),
                    coupled,
                    coupling: spec.coupling,
                    objective,
                }
            }
        };
        Ok(Self {
            spec,
            seed,
            cards,
            shape,
        })
    }

    pub fn spec(&self) -> &LandscapeSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Bounds on the scalar value that hold for every point.
    pub fn analytic_bounds(&self) -> (f64, f64) {
        match &self.shape {
            Shape::Separable { .. } | Shape::Random => (FLOOR, FLOOR + 1.0),
            Shape::Trap { noise, .. } => (FLOOR, FLOOR + 1.0 + noise),
            Shape::Conflict { .. } => (0.0, 1.0),
        }
    }

    /// Normalization used by the conflict landscape.
    pub fn objective_spec(&self) -> Option<&ObjectiveSpec<f64>> {
        match &self.shape {
            Shape::Conflict { objective, .. } => Some(objective),
            _ => None,
        }
    }

    /// Replaces the analytic raw-objective bounds, e.g. with enumerated ones.
    pub fn set_objective_spec(&mut self, spec: ObjectiveSpec<f64>) -> Result<(), BenchError> {
        match &mut self.shape {
            Shape::Conflict { objective, .. } => {
                *objective = spec;
                Ok(())
            }
            _ => Err(BenchError::Landscape("only the conflict landscape has raw objectives".into())),
        }
    }

    fn raw(&self, point: &Point) -> Option<[f64; 2]> {
        let Shape::Conflict {
            first,
            second,
            coupled,
            coupling,
            ..
        } = &self.shape
        else {
            return None;
        };
        let x = point.coords();
        let quad = |(c, w): &(Vec<usize>, Vec<f64>)| -> f64 {
            (0..x.len())
                .map(|i| {
                    let d = (x[i] as f64 - c[i] as f64) / span(self.cards[i]);
                    w[i] * d * d
                })
                .sum()
        };
        let coupling_term: f64 = coupled
            .iter()
            .map(|&(a, b)| {
                let d = (x[a] as f64 - x[b] as f64) / span(self.cards[a].max(self.cards[b]));
                coupling * d * d
            })
            .sum();
        Some([quad(first), quad(second) + coupling_term])
    }

    fn evaluate_f64(&self, point: &Point) -> f64 {
        let x = point.coords();
        match &self.shape {
            Shape::Separable { centers, weights, norm } => {
                let s: f64 = (0..x.len())
                    .map(|i| {
                        let d = x[i] as f64 - centers[i] as f64;
                        weights[i] * d * d
                    })
                    .sum();
                FLOOR + s / norm
            }
            Shape::Trap { basins, noise } => {
                let best = basins
                    .iter()
                    .map(|b| {
                        let total: f64 = b.weights.iter().sum();
                        let dist: f64 = (0..x.len())
                            .map(|i| b.weights[i] * x[i].abs_diff(b.center[i]) as f64 / span(self.cards[i]))
                            .sum();
                        b.depth + (1.0 - b.depth) * (dist / total / b.width).min(1.0)
                    })
                    .fold(f64::INFINITY, f64::min);
                FLOOR + best + noise * point_uniform(self.seed, 1, point)
            }
            Shape::Random => FLOOR + point_uniform(self.seed, 2, point),
            Shape::Conflict { objective, .. } => {
                let [f1, f2] = self.raw(point).expect("conflict landscape");
                objective.combine(&[f1, f2]).value
            }
        }
    }
}

impl<T: Scalar> Landscape<T> for SyntheticLandscape {
    fn value(&self, point: &Point) -> T {
        T::of(self.evaluate_f64(point))
    }

    fn raw_objectives(&self, point: &Point) -> Option<[T; 2]> {
        self.raw(point).map(|[a, b]| [T::of(a), T::of(b)])
    }
}
