use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{IndicatorError, LcrOrientation};
use crate::plan::Block;

/// Natural log of an arbitrary-size integer; `-inf` for zero.
pub fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Product of the level cardinalities of `block`; `card[p]` is the
/// cardinality of the parameter at position `p`.
pub fn active_block_size(block: &Block, card: &[usize]) -> BigUint {
    block
        .members()
        .iter()
        .fold(BigUint::one(), |acc, &p| acc * card[p])
}

/// Search size of the positions two blocks share; 0 when they share none.
pub fn local_overlap_size(a: &Block, b: &Block, card: &[usize]) -> BigUint {
    let shared = a.intersection(b);
    if shared.is_empty() {
        return BigUint::zero();
    }
    shared.iter().fold(BigUint::one(), |acc, &p| acc * card[p])
}

/// Exact per-iteration search sizes of a block sequence, with natural-log
/// mirrors. Iterations are one-based.
///
/// `TOS` is 0 at k = 1 (nothing overlapped yet) and the running product of
/// adjacent overlap sizes from k = 2 on.
#[derive(Debug, Clone, Default)]
pub struct SizeLedger {
    card: Vec<usize>,
    prev: Option<Block>,
    abs: Vec<BigUint>,
    los: Vec<Option<BigUint>>,
    gss: Vec<BigUint>,
    tos: Vec<BigUint>,
    nss: Vec<BigUint>,
    ln_abs: Vec<f64>,
    ln_gss: Vec<f64>,
    ln_tos: Vec<f64>,
    ln_nss: Vec<f64>,
}

impl SizeLedger {
    pub fn new(card: Vec<usize>) -> Self {
        Self {
            card,
            ..Self::default()
        }
    }

    pub fn from_blocks(blocks: &[Block], card: Vec<usize>) -> Self {
        let mut ledger = Self::new(card);
        for b in blocks {
            ledger.push(b);
        }
        ledger
    }

    pub fn push(&mut self, block: &Block) {
        let abs = active_block_size(block, &self.card);
        let ln_abs = ln_big(&abs);
        let los = self.prev.as_ref().map(|p| local_overlap_size(p, block, &self.card));
        let (gss, ln_gss, tos, ln_tos) = match self.abs.len() {
            0 => (abs.clone(), ln_abs, BigUint::zero(), f64::NEG_INFINITY),
            n => {
                let los = los.as_ref().expect("predecessor exists");
                let (tos, ln_tos) = if n == 1 {
                    (los.clone(), ln_big(los))
                } else {
                    (&self.tos[n - 1] * los, self.ln_tos[n - 1] + ln_big(los))
                };
                (&self.gss[n - 1] * &abs, self.ln_gss[n - 1] + ln_abs, tos, ln_tos)
            }
        };
        let nss = &gss - &tos;
        self.ln_nss.push(ln_big(&nss));
        self.nss.push(nss);
        self.abs.push(abs);
        self.ln_abs.push(ln_abs);
        self.los.push(los);
        self.gss.push(gss);
        self.ln_gss.push(ln_gss);
        self.tos.push(tos);
        self.ln_tos.push(ln_tos);
        self.prev = Some(block.clone());
    }

    /// Number of iterations recorded.
    pub fn len(&self) -> usize {
        self.abs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abs.is_empty()
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.card
    }

    pub fn abs(&self, k: usize) -> &BigUint {
        &self.abs[k - 1]
    }

    /// `LOS^(k-1,k)`; `None` at k = 1.
    pub fn los(&self, k: usize) -> Option<&BigUint> {
        self.los[k - 1].as_ref()
    }

    pub fn gss(&self, k: usize) -> &BigUint {
        &self.gss[k - 1]
    }

    pub fn tos(&self, k: usize) -> &BigUint {
        &self.tos[k - 1]
    }

    pub fn nss(&self, k: usize) -> &BigUint {
        &self.nss[k - 1]
    }

    pub fn ln_abs(&self, k: usize) -> f64 {
        self.ln_abs[k - 1]
    }

    pub fn ln_gss(&self, k: usize) -> f64 {
        self.ln_gss[k - 1]
    }

    pub fn ln_tos(&self, k: usize) -> f64 {
        self.ln_tos[k - 1]
    }

    pub fn ln_nss(&self, k: usize) -> f64 {
        self.ln_nss[k - 1]
    }
}

/// Global commonality ratio, commonality volume and local commonality ratio
/// at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Commonality {
    pub gcr: f64,
    pub gcr_exact: BigRational,
    /// `NSS * GCR`, which reduces to `TOS`.
    pub cv: BigUint,
    pub lcr: Option<f64>,
    pub lcr_exact: Option<BigRational>,
}

fn rational(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(n.clone().into(), d.clone().into())
}

fn ratio_f64(num: &BigUint, ln_num: f64, den: &BigUint, ln_den: f64) -> f64 {
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ if num.is_zero() => 0.0,
        _ => (ln_num - ln_den).exp(),
    }
}

/// `LCR^(k-1,k)`, the ratio paired with block `k`; 1 at k = 1.
///
/// The default orientation is overlap over joint size, `LOS / (ABS^(k-1) ABS^k)`;
/// the literal orientation inverts it and is undefined for disjoint blocks.
pub fn local_commonality_ratio(
    ledger: &SizeLedger,
    k: usize,
    orientation: LcrOrientation,
) -> Option<BigRational> {
    let Some(los) = ledger.los(k) else {
        return Some(BigRational::one());
    };
    let joint = ledger.abs(k - 1) * ledger.abs(k);
    match orientation {
        LcrOrientation::OverlapOverJoint => Some(rational(los, &joint)),
        LcrOrientation::JointOverOverlap if los.is_zero() => None,
        LcrOrientation::JointOverOverlap => Some(rational(&joint, los)),
    }
}

/// Natural log of [`local_commonality_ratio`]; `-inf` for a bottleneck.
pub fn ln_local_commonality_ratio(ledger: &SizeLedger, k: usize, orientation: LcrOrientation) -> Option<f64> {
    let Some(los) = ledger.los(k) else {
        return Some(0.0);
    };
    let ln_joint = ledger.ln_abs(k - 1) + ledger.ln_abs(k);
    match orientation {
        LcrOrientation::OverlapOverJoint => Some(ln_big(los) - ln_joint),
        LcrOrientation::JointOverOverlap if los.is_zero() => None,
        LcrOrientation::JointOverOverlap => Some(ln_joint - ln_big(los)),
    }
}

pub fn commonality_ratios(
    ledger: &SizeLedger,
    k: usize,
    orientation: LcrOrientation,
) -> Result<Commonality, IndicatorError> {
    if k == 0 || k > ledger.len() {
        return Err(IndicatorError::IterationOutOfRange { k, len: ledger.len() });
    }
    let (tos, nss) = (ledger.tos(k), ledger.nss(k));
    if nss.is_zero() {
        return Err(IndicatorError::DegenerateStructure { k });
    }
    let gcr_exact = rational(tos, nss);
    let cv = (BigRational::from_integer(nss.clone().into()) * &gcr_exact)
        .to_integer()
        .to_biguint()
        .expect("non-negative");
    let lcr_exact = local_commonality_ratio(ledger, k, orientation);
    let lcr = ln_local_commonality_ratio(ledger, k, orientation).map(f64::exp);
    Ok(Commonality {
        gcr: ratio_f64(tos, ledger.ln_tos(k), nss, ledger.ln_nss(k)),
        gcr_exact,
        cv,
        lcr,
        lcr_exact,
    })
}
