//! Gauss-Seidel block coordinate descent over a discrete grid.
//!
//! Each active block is searched exhaustively with every other parameter
//! frozen at its current level. The block argmin is taken jointly over all
//! active parameters, overlap members included, so shared parameters are
//! re-searched by the next block rather than passing their values forward.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::plan::{Block, SweepPlan};
use crate::space::{Landscape, MemoCache, ParameterSpace, Point, SpaceError};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("ordering is not a permutation of 0..{m}")]
    InvalidOrdering { m: usize },
    #[error("plan is for {plan_m} parameters, space has {space_m}")]
    PlanMismatch { plan_m: usize, space_m: usize },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("initial point: {0}")]
    Init(SpaceError),
    #[error("evaluation failed in block {block}: {source}")]
    Evaluation { block: usize, source: SpaceError },
    #[error("malformed trace: {0}")]
    BadTrace(String),
}

/// How the starting point is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitPolicy {
    Fixed(Point),
    /// Middle level `(cardinality - 1) / 2` of every parameter.
    MidLevel,
    SeededRandom,
}

pub fn initial_point(space: &ParameterSpace, policy: &InitPolicy, seed: u64) -> Result<Point, SpaceError> {
    match policy {
        InitPolicy::Fixed(p) => {
            space.validate(p)?;
            Ok(p.clone())
        }
        InitPolicy::MidLevel => Ok(Point::new(
            space.cardinalities().iter().map(|&c| (c - 1) / 2).collect(),
        )),
        InitPolicy::SeededRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Point::new(
                space.cardinalities().iter().map(|&c| rng.gen_range(0..c)).collect(),
            ))
        }
    }
}

/// Current iterate plus the history needed for wake and move indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState<T> {
    pub current: Point,
    pub current_value: T,
    /// Iterations completed.
    pub k: usize,
    /// Last iteration whose block contained each position (0 = never).
    pub last_visit: Vec<usize>,
    pub move_history: Vec<Vec<usize>>,
}

impl<T: Scalar> SearchState<T> {
    pub fn new(current: Point, current_value: T, m: usize) -> Self {
        Self {
            current,
            current_value,
            k: 0,
            last_visit: vec![0; m],
            move_history: Vec::new(),
        }
    }

    fn advance(&mut self, block: &Block, point: Point, value: T) {
        self.k += 1;
        for &p in block.members() {
            self.last_visit[p] = self.k;
        }
        self.move_history.push(block.members().to_vec());
        self.current = point;
        self.current_value = value;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    /// Zero-based cycle index.
    pub cycle: usize,
    /// One-based iteration `k`.
    pub iter: usize,
    /// Block index within its cycle.
    pub block: usize,
    /// Active positions, ascending.
    pub members: Vec<usize>,
    pub point: Point,
    pub value: T,
    /// Landscape invocations made by this run so far.
    pub evals_cum: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace<T> {
    pub plan_name: String,
    pub seed: Option<u64>,
    pub ordering: Vec<usize>,
    pub init: Point,
    pub init_value: T,
    pub records: Vec<TraceRecord<T>>,
}

impl<T: Scalar> SearchTrace<T> {
    pub fn final_value(&self) -> T {
        self.records.last().map_or(self.init_value, |r| r.value)
    }

    pub fn final_point(&self) -> &Point {
        self.records.last().map_or(&self.init, |r| &r.point)
    }

    pub fn values(&self) -> Vec<T> {
        self.records.iter().map(|r| r.value).collect()
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.records.iter().map(|r| Block::new(r.members.clone())).collect()
    }

    /// Landscape invocations made by the run, initial point included.
    pub fn invocations(&self) -> u64 {
        self.records.last().map_or(0, |r| r.evals_cum)
    }

    pub fn m(&self) -> usize {
        self.init.len()
    }

    /// CSV with columns `cycle,iter,block,point,f,evals_cum`; block members
    /// and point coordinates are `;`-separated.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(["cycle", "iter", "block", "point", "f", "evals_cum"])?;
        for r in &self.records {
            out.write_record([
                r.cycle.to_string(),
                r.iter.to_string(),
                join(&r.members, ";"),
                r.point.join(";"),
                r.value.to_string(),
                r.evals_cum.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads records written by [`SearchTrace::write_csv`]. The initial point
    /// is not part of the file and is taken to be the first record's point.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, EngineError> {
        let bad = |e: &dyn std::fmt::Display| EngineError::BadTrace(e.to_string());
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(|e| bad(&e))?.clone();
        let expected = ["cycle", "iter", "block", "point", "f", "evals_cum"];
        if header.iter().ne(expected.iter().copied()) {
            return Err(EngineError::BadTrace(format!("unexpected header {header:?}")));
        }
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| bad(&e))?;
            let int = |i: usize| row[i].trim().parse::<usize>().map_err(|e| bad(&e));
            let members = row[2]
                .split(';')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(&e))?;
            let point = Point::parse_with(&row[3], ';').map_err(|e| bad(&e))?;
            let value: f64 = row[4].trim().parse().map_err(|e| bad(&e))?;
            records.push(TraceRecord {
                cycle: int(0)?,
                iter: int(1)?,
                block: 0,
                members,
                point,
                value: T::of(value),
                evals_cum: int(5)? as u64,
            });
        }
        let first = records
            .first()
            .ok_or_else(|| EngineError::BadTrace("no records".into()))?;
        let (init, init_value) = (first.point.clone(), first.value);
        let m = init.len();
        let mut cycle = usize::MAX;
        let mut index = 0;
        for r in &mut records {
            if r.point.len() != m || r.members.iter().any(|&p| p >= m) || r.members.is_empty() {
                return Err(EngineError::BadTrace(format!("row {} inconsistent with m = {m}", r.iter)));
            }
            if r.cycle != cycle {
                cycle = r.cycle;
                index = 0;
            }
            r.block = index;
            index += 1;
        }
        Ok(Self {
            plan_name: String::new(),
            seed: None,
            ordering: (0..m).collect(),
            init,
            init_value,
            records,
        })
    }
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn check_ordering(ordering: &[usize], m: usize) -> Result<(), EngineError> {
    let mut seen = vec![false; m];
    if ordering.len() != m {
        return Err(EngineError::InvalidOrdering { m });
    }
    for &p in ordering {
        if p >= m || std::mem::replace(&mut seen[p], true) {
            return Err(EngineError::InvalidOrdering { m });
        }
    }
    Ok(())
}

/// Runs `plan` from `init`, mapping circular position `p` to parameter
/// `ordering[p]`.
///
/// The initial point is evaluated once before the first block. Ties inside a
/// block go to the lexicographically smallest active coordinates, compared
/// in position order.
pub fn run_search<T, L>(
    space: &ParameterSpace,
    landscape: &L,
    plan: &SweepPlan,
    ordering: &[usize],
    init: &Point,
    cache: &mut MemoCache<T>,
) -> Result<SearchTrace<T>, EngineError>
where
    T: Scalar,
    L: Landscape<T> + ?Sized,
{
    let m = space.len();
    if plan.m() != m {
        return Err(EngineError::PlanMismatch {
            plan_m: plan.m(),
            space_m: m,
        });
    }
    check_ordering(ordering, m)?;
    space.validate(init).map_err(EngineError::Init)?;

    let start_misses = cache.misses();
    let init_value = cache
        .evaluate(space, landscape, init)
        .map_err(|source| EngineError::Evaluation { block: 0, source })?;
    let mut state = SearchState::new(init.clone(), init_value, m);
    let mut records = Vec::with_capacity(plan.total_blocks());

    for (k, (cycle, index, block)) in plan.blocks().enumerate() {
        if block.is_empty() {
            return Err(EngineError::EmptyBlock { block: k });
        }
        let params: Vec<usize> = block.members().iter().map(|&p| ordering[p]).collect();
        let (best, best_value) = block_argmin(space, landscape, &state.current, &params, cache)
            .map_err(|source| EngineError::Evaluation { block: k, source })?;
        state.advance(block, best.clone(), best_value);
        records.push(TraceRecord {
            cycle,
            iter: state.k,
            block: index,
            members: block.members().to_vec(),
            point: best,
            value: best_value,
            evals_cum: cache.misses() - start_misses,
        });
    }
    Ok(SearchTrace {
        plan_name: plan.name().to_string(),
        seed: None,
        ordering: ordering.to_vec(),
        init: init.clone(),
        init_value,
        records,
    })
}

/// Exhaustive search over the levels of `params`, others fixed at `current`.
fn block_argmin<T, L>(
    space: &ParameterSpace,
    landscape: &L,
    current: &Point,
    params: &[usize],
    cache: &mut MemoCache<T>,
) -> Result<(Point, T), SpaceError>
where
    T: Scalar,
    L: Landscape<T> + ?Sized,
{
    let cards: Vec<usize> = params.iter().map(|&p| space.cardinality(p)).collect();
    let mut digits = vec![0usize; params.len()];
    let mut candidate = current.clone();
    let mut best: Option<(Point, T)> = None;
    loop {
        for (&p, &d) in params.iter().zip(&digits) {
            candidate.coords_mut()[p] = d;
        }
        let v = cache.evaluate(space, landscape, &candidate)?;
        // enumeration is lexicographic, so strict `<` keeps the smallest tie
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((candidate.clone(), v));
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(best.expect("non-empty block"));
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < cards[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}
