//! Search-structure indicators over a block sequence.
//!
//! Sizes (ABS, LOS, GSS, TOS, NSS) are exact integers with natural-log
//! mirrors; products and roots downstream of them are carried as logs.
//! Blocks are compared by circular position, and consecutive blocks are
//! adjacent regardless of cycle boundaries.

mod composite;
mod flow;
mod novelty;
mod size;
mod wake;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::engine::SearchTrace;
use crate::plan::Block;
use crate::space::ParameterSpace;
use crate::Scalar;

pub use composite::{composite_usefulness, quality_and_efficiency, usefulness, Quality};
pub use flow::{commonality_flow, log_add_exp, FlowAccumulator};
pub use novelty::{move_novelty, move_pairs, MoveHistory, Novelty};
pub use size::{
    active_block_size, commonality_ratios, ln_big, ln_local_commonality_ratio, local_commonality_ratio,
    local_overlap_size, Commonality, SizeLedger,
};
pub use wake::{wake_freshness, Wake, WakeTracker};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndicatorError {
    #[error("net search size is zero at iteration {k}")]
    DegenerateStructure { k: usize },
    #[error("iteration {k} outside 1..={len}")]
    IterationOutOfRange { k: usize, len: usize },
    #[error("{blocks} blocks but {values} objective values")]
    LengthMismatch { blocks: usize, values: usize },
    #[error("block position {position} outside 0..{m}")]
    PositionOutOfRange { position: usize, m: usize },
    #[error("bad variant flag {0:?}")]
    BadVariant(String),
}

/// Orientation of the local commonality ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LcrOrientation {
    /// `LOS / (ABS^k ABS^(k+1))`.
    #[default]
    OverlapOverJoint,
    /// `(ABS^k ABS^(k+1)) / LOS`.
    JointOverOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum UrrVariant {
    /// `sqrt(FSW * NSM)`.
    #[default]
    SqrtProduct,
    /// `FSW * NSM`.
    Product,
    /// `sqrt(K^FSW * K^NSM)` with `K` the total iteration count.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum IruifVariant {
    /// `CCF^k * (URR^k)^2`.
    #[default]
    Pointwise,
    /// Running sum of the pointwise values.
    Cumulative,
}

/// Formula variants active for one indicator computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Variants {
    pub lcr: LcrOrientation,
    pub urr: UrrVariant,
    pub iruif: IruifVariant,
}

impl fmt::Display for Variants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lcr = match self.lcr {
            LcrOrientation::OverlapOverJoint => "ratio",
            LcrOrientation::JointOverOverlap => "literal",
        };
        let urr = match self.urr {
            UrrVariant::SqrtProduct => "sqrt",
            UrrVariant::Product => "product",
            UrrVariant::Exponential => "exp",
        };
        let iruif = match self.iruif {
            IruifVariant::Pointwise => "pointwise",
            IruifVariant::Cumulative => "cumulative",
        };
        write!(f, "lcr={lcr};urr={urr};iruif={iruif}")
    }
}

impl FromStr for Variants {
    type Err = IndicatorError;

    /// `key=value` pairs separated by `,` or `;`; omitted keys keep defaults.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = Variants::default();
        for item in s.split([',', ';']).map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || IndicatorError::BadVariant(item.to_string());
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            match (key.trim(), value.trim()) {
                ("lcr", "ratio") => v.lcr = LcrOrientation::OverlapOverJoint,
                ("lcr", "literal") => v.lcr = LcrOrientation::JointOverOverlap,
                ("urr", "sqrt") => v.urr = UrrVariant::SqrtProduct,
                ("urr", "product") => v.urr = UrrVariant::Product,
                ("urr", "exp") => v.urr = UrrVariant::Exponential,
                ("iruif", "pointwise") => v.iruif = IruifVariant::Pointwise,
                ("iruif", "cumulative") => v.iruif = IruifVariant::Cumulative,
                _ => return Err(bad()),
            }
        }
        Ok(v)
    }
}

/// All indicators at one iteration. `None` marks an undefined value.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorRow {
    pub iter: usize,
    pub sq_min: f64,
    pub sq_max: Option<f64>,
    pub se_log: Option<f64>,
    pub ln_gss: f64,
    pub ln_tos: f64,
    pub ln_nss: f64,
    pub gcr: Option<f64>,
    pub cv: BigUint,
    pub ln_cv: f64,
    pub lcr: Option<f64>,
    pub log_cf: Option<f64>,
    pub log_ccf: Option<f64>,
    pub sasw: u64,
    pub aasw: f64,
    pub fsw: f64,
    pub nsm: Option<f64>,
    pub urr: Option<f64>,
    pub log_iruif: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct IndicatorTrace {
    pub variants: Variants,
    pub m: usize,
    pub ledger: SizeLedger,
    pub rows: Vec<IndicatorRow>,
}

impl IndicatorTrace {
    /// Indicators for `blocks` (positions) with per-position cardinalities
    /// `card` and best-so-far objective `values`, one per block.
    pub fn compute(
        blocks: &[Block],
        card: &[usize],
        values: &[f64],
        variants: Variants,
    ) -> Result<Self, IndicatorError> {
        if blocks.len() != values.len() {
            return Err(IndicatorError::LengthMismatch {
                blocks: blocks.len(),
                values: values.len(),
            });
        }
        let m = card.len();
        if let Some(&position) = blocks.iter().flat_map(|b| b.members()).find(|&&p| p >= m) {
            return Err(IndicatorError::PositionOutOfRange { position, m });
        }
        let total = blocks.len();
        let mut ledger = SizeLedger::new(card.to_vec());
        let mut flow = FlowAccumulator::default();
        let mut wake = WakeTracker::new(m);
        let mut moves = MoveHistory::new(m);
        let mut iruif_sum: Option<f64> = Some(f64::NEG_INFINITY);
        let mut rows = Vec::with_capacity(total);

        for (i, (block, &f)) in blocks.iter().zip(values).enumerate() {
            let k = i + 1;
            ledger.push(block);
            let ln_lcr = ln_local_commonality_ratio(&ledger, k, variants.lcr);
            let (log_cf, log_ccf) = flow.push(ln_lcr, ledger.ln_abs(k));
            let common = commonality_ratios(&ledger, k, variants.lcr).ok();
            let w = wake.push(block);
            let nsm = moves.push(block).map(|n| n.nsm);
            let (urr, point_iruif) = match nsm {
                Some(nsm) => {
                    let (u, l) = composite_usefulness(w.fsw, nsm, log_ccf, variants.urr, total);
                    (Some(u), l)
                }
                None => (None, None),
            };
            let log_iruif = match variants.iruif {
                IruifVariant::Pointwise => point_iruif,
                IruifVariant::Cumulative => {
                    if let (Some(acc), Some(x)) = (iruif_sum, point_iruif) {
                        iruif_sum = Some(log_add_exp(acc, x));
                    } else if nsm.is_some() {
                        iruif_sum = None;
                    }
                    iruif_sum.filter(|_| nsm.is_some())
                }
            };
            let q = quality_and_efficiency(f, ledger.ln_nss(k));
            let cv = common.as_ref().map_or_else(|| ledger.tos(k).clone(), |c| c.cv.clone());
            rows.push(IndicatorRow {
                iter: k,
                sq_min: q.sq_min,
                sq_max: q.sq_max,
                se_log: q.se_log,
                ln_gss: ledger.ln_gss(k),
                ln_tos: ledger.ln_tos(k),
                ln_nss: ledger.ln_nss(k),
                gcr: common.as_ref().map(|c| c.gcr),
                ln_cv: ln_big(&cv),
                cv,
                lcr: ln_lcr.map(f64::exp),
                log_cf,
                log_ccf,
                sasw: w.sasw,
                aasw: w.aasw,
                fsw: w.fsw,
                nsm,
                urr,
                log_iruif,
            });
        }
        Ok(Self {
            variants,
            m,
            ledger,
            rows,
        })
    }

    /// Indicators of a search trace. Cardinalities follow the trace's
    /// position-to-parameter ordering.
    pub fn from_search<T: Scalar>(
        trace: &SearchTrace<T>,
        space: &ParameterSpace,
        variants: Variants,
    ) -> Result<Self, IndicatorError> {
        let card: Vec<usize> = trace.ordering.iter().map(|&p| space.cardinality(p)).collect();
        let values: Vec<f64> = trace.values().into_iter().map(Scalar::as_f64).collect();
        Self::compute(&trace.blocks(), &card, &values, variants)
    }

    pub fn last(&self) -> Option<&IndicatorRow> {
        self.rows.last()
    }

    /// CSV with one row per iteration; undefined values are empty fields.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record([
            "iter", "SQ_min", "SQ_max", "SE_log", "GCR", "CV", "LCR", "logCF", "logCCF", "SASW", "AASW", "FSW",
            "NSM", "URR", "logIRUIF", "variant_flags",
        ])?;
        let flags = self.variants.to_string();
        for r in &self.rows {
            out.write_record([
                r.iter.to_string(),
                r.sq_min.to_string(),
                opt(r.sq_max),
                opt(r.se_log),
                opt(r.gcr),
                r.cv.to_string(),
                opt(r.lcr),
                opt(r.log_cf),
                opt(r.log_ccf),
                r.sasw.to_string(),
                r.aasw.to_string(),
                r.fsw.to_string(),
                opt(r.nsm),
                opt(r.urr),
                opt(r.log_iruif),
                flags.clone(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
