use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{mean, pearson, sign_test, Histogram};
use super::BenchError;
use crate::engine::{initial_point, run_search, InitPolicy};
use crate::indicators::{log_add_exp, IndicatorTrace, Variants};
use crate::plan::{Recombination, SweepPlan};
use crate::space::{Landscape, MemoCache, ParameterSpace};
use crate::Scalar;

/// One line of an experiment manifest: `name,cycles,recomb`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanEntry {
    pub name: String,
    pub cycles: usize,
    pub recombination: Recombination,
}

impl PlanEntry {
    pub fn new(name: impl Into<String>, cycles: usize, recombination: Recombination) -> Self {
        Self {
            name: name.into(),
            cycles,
            recombination,
        }
    }

    /// File-name friendly identifier, e.g. `B6.8.6-O5_c3_A`.
    pub fn label(&self) -> String {
        format!("{}_c{}_{}", self.name.replace(',', "."), self.cycles, self.recombination)
    }

    /// Parses a manifest: one entry per non-empty line, `#` starts a comment.
    pub fn parse_manifest(text: &str) -> Result<Vec<Self>, BenchError> {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for PlanEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.name, self.cycles, self.recombination)
    }
}

impl FromStr for PlanEntry {
    type Err = BenchError;

    /// Structure names contain commas, so the last two fields are split off
    /// from the right.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BenchError::Manifest(format!("expected name,cycles,recomb: {s:?}"));
        let mut parts = s.trim().rsplitn(3, ',');
        let recomb = parts.next().ok_or_else(bad)?;
        let cycles = parts.next().ok_or_else(bad)?;
        let name = parts.next().ok_or_else(bad)?;
        Ok(Self {
            name: name.trim().to_string(),
            cycles: cycles.trim().parse().map_err(|_| bad())?,
            recombination: recomb.parse().map_err(BenchError::Plan)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub init: InitPolicy,
    pub seed: u64,
    pub variants: Variants,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
    pub bins: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            init: InitPolicy::MidLevel,
            seed: 0,
            variants: Variants::default(),
            jobs: 1,
            bins: 10,
        }
    }
}

/// Per-iteration means across orderings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanRow {
    pub iter: usize,
    pub cycle: usize,
    pub f_mean: f64,
    /// `ln` of the mean of `1/f`.
    pub log_sq_max_mean: Option<f64>,
    /// `ln` of the mean search efficiency.
    pub log_se_mean: Option<f64>,
    pub ln_nss: Option<f64>,
    pub gcr: Option<f64>,
    pub log_cf: Option<f64>,
    pub log_ccf: Option<f64>,
    pub fsw: Option<f64>,
    pub nsm: Option<f64>,
    pub urr: Option<f64>,
    pub log_iruif: Option<f64>,
}

/// Plan-level features used for correlation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanSummary {
    pub label: String,
    pub entry: PlanEntry,
    pub iterations: usize,
    pub runs: usize,
    pub failures: usize,
    pub mean_final_f: Option<f64>,
    pub log_mean_final_sq_max: Option<f64>,
    pub log_mean_final_se: Option<f64>,
    /// Final-iteration indicators, averaged over orderings.
    pub ln_nss: Option<f64>,
    pub gcr: Option<f64>,
    pub ln_cv: Option<f64>,
    pub log_cf: Option<f64>,
    pub log_ccf: Option<f64>,
    pub log_iruif: Option<f64>,
    /// Per-run means over iterations, averaged over orderings.
    pub fsw: Option<f64>,
    pub nsm: Option<f64>,
    pub urr: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanReport {
    pub summary: PlanSummary,
    pub means: Vec<MeanRow>,
    /// Final objective value per ordering; `None` where the cell failed.
    pub finals: Vec<Option<f64>>,
    /// Mean NSM over iterations per ordering.
    pub run_nsm: Vec<Option<f64>>,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub plan: String,
    pub ordering: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub indicator: String,
    pub vs_log_sq: Option<f64>,
    pub vs_log_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable {
    pub rows: Vec<CorrelationRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub m: usize,
    pub cardinalities: Vec<usize>,
    pub landscape: String,
    pub seed: u64,
    pub orderings: usize,
    pub variants: String,
    pub plans: Vec<PlanReport>,
    pub failures: Vec<CellFailure>,
    pub correlations: CorrelationTable,
}

impl ExperimentReport {
    pub fn plan(&self, label: &str) -> Option<&PlanReport> {
        self.plans.iter().find(|p| p.summary.label == label)
    }
}

/// Outcome of one (plan, ordering) cell.
struct Cell {
    cycles: Vec<usize>,
    values: Vec<f64>,
    indicators: IndicatorTrace,
}

impl Cell {
    fn run_mean(&self, f: impl Fn(&crate::indicators::IndicatorRow) -> Option<f64>) -> Option<f64> {
        mean(self.indicators.rows.iter().filter_map(f))
    }
}

fn log_mean_exp(logs: &[f64]) -> Option<f64> {
    if logs.is_empty() {
        return None;
    }
    let total = logs.iter().copied().fold(f64::NEG_INFINITY, log_add_exp);
    Some(total - (logs.len() as f64).ln())
}

/// Runs every plan under every shared ordering with a fresh cache per cell,
/// then aggregates means, final-value histograms and correlations.
///
/// A failing cell is recorded and skipped; an invalid plan aborts before
/// any search runs.
pub fn run_experiment<T, L>(
    space: &ParameterSpace,
    landscape: &L,
    landscape_name: &str,
    plans: &[PlanEntry],
    orderings: &[Vec<usize>],
    config: &ExperimentConfig,
) -> Result<ExperimentReport, BenchError>
where
    T: Scalar,
    L: Landscape<T> + ?Sized,
{
    let m = space.len();
    let built = plans
        .iter()
        .map(|e| SweepPlan::from_name(&e.name, m, e.cycles, e.recombination))
        .collect::<Result<Vec<_>, _>>()?;
    for o in orderings {
        let mut sorted = o.clone();
        sorted.sort_unstable();
        if sorted != (0..m).collect::<Vec<_>>() {
            return Err(BenchError::Manifest(format!("ordering {o:?} is not a permutation of 0..{m}")));
        }
    }
    let init = initial_point(space, &config.init, config.seed)?;

    let jobs: Vec<(usize, usize)> = (0..built.len())
        .flat_map(|p| (0..orderings.len()).map(move |o| (p, o)))
        .collect();
    let run_cell = |&(p, o): &(usize, usize)| -> Result<Cell, String> {
        let mut cache = MemoCache::<T>::new();
        let trace = run_search(space, landscape, &built[p], &orderings[o], &init, &mut cache)
            .map_err(|e| e.to_string())?;
        let indicators = IndicatorTrace::from_search(&trace, space, config.variants).map_err(|e| e.to_string())?;
        Ok(Cell {
            cycles: trace.records.iter().map(|r| r.cycle).collect(),
            values: trace.values().into_iter().map(Scalar::as_f64).collect(),
            indicators,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| BenchError::Manifest(e.to_string()))?;
    let mut results: Vec<Result<Cell, String>> = pool.install(|| jobs.par_iter().map(run_cell).collect());

    let mut labels = HashSet::new();
    let mut failures = Vec::new();
    let mut plan_cells: Vec<Vec<Option<Cell>>> = Vec::with_capacity(built.len());
    for (p, entry) in plans.iter().enumerate() {
        let mut cells = Vec::with_capacity(orderings.len());
        for (o, r) in results.drain(..orderings.len()).enumerate() {
            match r {
                Ok(c) => cells.push(Some(c)),
                Err(error) => {
                    failures.push(CellFailure {
                        plan: entry.to_string(),
                        ordering: o,
                        error,
                    });
                    cells.push(None);
                }
            }
        }
        let _ = p;
        plan_cells.push(cells);
    }

    // shared histogram range across plans
    let all_finals: Vec<f64> = plan_cells
        .iter()
        .flatten()
        .flatten()
        .filter_map(|c| c.values.last().copied())
        .collect();
    let lo = all_finals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all_finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut reports = Vec::with_capacity(plans.len());
    for (entry, cells) in plans.iter().zip(&plan_cells) {
        let mut label = entry.label();
        let mut n = 1;
        while !labels.insert(label.clone()) {
            n += 1;
            label = format!("{}_{n}", entry.label());
        }
        reports.push(aggregate(label, entry, cells, config.bins, lo, hi));
    }
    let correlations = correlate(&reports.iter().map(|r| r.summary.clone()).collect::<Vec<_>>());
    Ok(ExperimentReport {
        m,
        cardinalities: space.cardinalities(),
        landscape: landscape_name.to_string(),
        seed: config.seed,
        orderings: orderings.len(),
        variants: config.variants.to_string(),
        plans: reports,
        failures,
        correlations,
    })
}

fn aggregate(label: String, entry: &PlanEntry, cells: &[Option<Cell>], bins: usize, lo: f64, hi: f64) -> PlanReport {
    let ok: Vec<&Cell> = cells.iter().flatten().collect();
    let iterations = ok.first().map_or(0, |c| c.values.len());
    let column = |k: usize, f: &dyn Fn(&crate::indicators::IndicatorRow) -> Option<f64>| -> Option<f64> {
        mean(ok.iter().filter_map(|c| f(&c.indicators.rows[k])))
    };
    let means = (0..iterations)
        .map(|k| {
            let sq: Vec<f64> = ok.iter().filter_map(|c| c.indicators.rows[k].sq_max).collect();
            let se: Vec<f64> = ok.iter().filter_map(|c| c.indicators.rows[k].se_log).collect();
            MeanRow {
                iter: k + 1,
                cycle: ok[0].cycles[k],
                f_mean: mean(ok.iter().map(|c| c.values[k])).unwrap_or(f64::NAN),
                log_sq_max_mean: mean(sq).map(f64::ln),
                log_se_mean: log_mean_exp(&se),
                ln_nss: column(k, &|r| Some(r.ln_nss)),
                gcr: column(k, &|r| r.gcr),
                log_cf: column(k, &|r| r.log_cf),
                log_ccf: column(k, &|r| r.log_ccf),
                fsw: column(k, &|r| Some(r.fsw)),
                nsm: column(k, &|r| r.nsm),
                urr: column(k, &|r| r.urr),
                log_iruif: column(k, &|r| r.log_iruif),
            }
        })
        .collect::<Vec<_>>();
    let finals: Vec<Option<f64>> = cells
        .iter()
        .map(|c| c.as_ref().and_then(|c| c.values.last().copied()))
        .collect();
    let run_nsm: Vec<Option<f64>> = cells
        .iter()
        .map(|c| c.as_ref().and_then(|c| c.run_mean(|r| r.nsm)))
        .collect();
    let last = |f: &dyn Fn(&crate::indicators::IndicatorRow) -> Option<f64>| {
        mean(ok.iter().filter_map(|c| c.indicators.rows.last().and_then(f)))
    };
    let per_run = |f: &dyn Fn(&crate::indicators::IndicatorRow) -> Option<f64>| {
        mean(ok.iter().filter_map(|c| c.run_mean(f)))
    };
    let final_row = means.last();
    let summary = PlanSummary {
        label,
        entry: entry.clone(),
        iterations,
        runs: ok.len(),
        failures: cells.len() - ok.len(),
        mean_final_f: final_row.map(|r| r.f_mean),
        log_mean_final_sq_max: final_row.and_then(|r| r.log_sq_max_mean),
        log_mean_final_se: final_row.and_then(|r| r.log_se_mean),
        ln_nss: last(&|r| Some(r.ln_nss)),
        gcr: last(&|r| r.gcr),
        ln_cv: last(&|r| Some(r.ln_cv)),
        log_cf: last(&|r| r.log_cf),
        log_ccf: last(&|r| r.log_ccf),
        log_iruif: last(&|r| r.log_iruif),
        fsw: per_run(&|r| Some(r.fsw)),
        nsm: per_run(&|r| r.nsm),
        urr: per_run(&|r| r.urr),
    };
    let histogram = Histogram::new(finals.iter().flatten().copied(), bins, lo, hi);
    PlanReport {
        summary,
        means,
        finals,
        run_nsm,
        histogram,
    }
}

/// Pearson coefficients across plans between final log quality / log
/// efficiency and each plan-level indicator.
pub fn correlate(plans: &[PlanSummary]) -> CorrelationTable {
    type Feature = fn(&PlanSummary) -> Option<f64>;
    let features: [(&str, Feature); 9] = [
        ("NSS_log", |s| s.ln_nss),
        ("GCR", |s| s.gcr),
        ("CV_log", |s| s.ln_cv),
        ("CF_log", |s| s.log_cf),
        ("CCF_log", |s| s.log_ccf),
        ("FSW", |s| s.fsw),
        ("NSM", |s| s.nsm),
        ("URR", |s| s.urr),
        ("IRUIF_log", |s| s.log_iruif),
    ];
    let nan = f64::NAN;
    let sq: Vec<f64> = plans.iter().map(|s| s.log_mean_final_sq_max.unwrap_or(nan)).collect();
    let se: Vec<f64> = plans.iter().map(|s| s.log_mean_final_se.unwrap_or(nan)).collect();
    let rows = features
        .iter()
        .map(|(name, f)| {
            let x: Vec<f64> = plans.iter().map(|s| f(s).unwrap_or(nan)).collect();
            CorrelationRow {
                indicator: name.to_string(),
                vs_log_sq: pearson(&x, &sq),
                vs_log_se: pearson(&x, &se),
            }
        })
        .collect();
    CorrelationTable { rows }
}

/// Paired comparison of two plans over the shared orderings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanComparison {
    pub first: String,
    pub second: String,
    pub mean_sq_first: Option<f64>,
    pub mean_sq_second: Option<f64>,
    pub mean_nsm_first: Option<f64>,
    pub mean_nsm_second: Option<f64>,
    /// Orderings where the first plan ended strictly lower.
    pub first_better: u64,
    pub second_better: u64,
    pub ties: u64,
    pub sign_test_p: f64,
}

pub fn compare_plans(first: &PlanReport, second: &PlanReport) -> PlanComparison {
    // lower f means higher quality
    let (mut first_better, mut second_better, mut ties) = (0, 0, 0);
    for (a, b) in first.finals.iter().zip(&second.finals) {
        if let (Some(a), Some(b)) = (a, b) {
            match a.partial_cmp(b) {
                Some(std::cmp::Ordering::Less) => first_better += 1,
                Some(std::cmp::Ordering::Greater) => second_better += 1,
                _ => ties += 1,
            }
        }
    }
    let sq = |r: &PlanReport| mean(r.finals.iter().flatten().filter(|f| **f > 0.0).map(|f| 1.0 / f));
    let nsm = |r: &PlanReport| mean(r.run_nsm.iter().flatten().copied());
    PlanComparison {
        first: first.summary.label.clone(),
        second: second.summary.label.clone(),
        mean_sq_first: sq(first),
        mean_sq_second: sq(second),
        mean_nsm_first: nsm(first),
        mean_nsm_second: nsm(second),
        second_better,
        first_better,
        ties,
        sign_test_p: sign_test(second_better, first_better),
    }
}
