use super::size::{ln_local_commonality_ratio, SizeLedger};
use super::LcrOrientation;

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Running commonality flow: `CF^k` is the cube root of the product of
/// `LCR^n * ABS^n` over `n <= k`, and `CCF^k` the sum of `CF^1..CF^k`.
/// Both are held as natural logs. A zero ratio pins CF at zero from then
/// on; an undefined ratio makes both undefined from then on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowAccumulator {
    log_product: Option<f64>,
    log_ccf: Option<f64>,
}

impl Default for FlowAccumulator {
    fn default() -> Self {
        Self {
            log_product: Some(0.0),
            log_ccf: Some(f64::NEG_INFINITY),
        }
    }
}

impl FlowAccumulator {
    /// Folds in one iteration; returns `(ln CF^k, ln CCF^k)`.
    pub fn push(&mut self, ln_lcr: Option<f64>, ln_abs: f64) -> (Option<f64>, Option<f64>) {
        self.log_product = match (self.log_product, ln_lcr) {
            (Some(acc), Some(l)) => Some(acc + l + ln_abs),
            _ => None,
        };
        let log_cf = self.log_product.map(|p| p / 3.0);
        self.log_ccf = match (self.log_ccf, log_cf) {
            (Some(c), Some(f)) => Some(log_add_exp(c, f)),
            _ => None,
        };
        (log_cf, self.log_ccf)
    }
}

/// `(ln CF^k, ln CCF^k)` over the first `k` iterations of `ledger`.
pub fn commonality_flow(ledger: &SizeLedger, k: usize, orientation: LcrOrientation) -> (Option<f64>, Option<f64>) {
    let mut acc = FlowAccumulator::default();
    let mut out = (None, None);
    for n in 1..=k.min(ledger.len()) {
        out = acc.push(ln_local_commonality_ratio(ledger, n, orientation), ledger.ln_abs(n));
    }
    out
}
