use super::UrrVariant;

/// Usefulness of recursive recombination from freshness and novelty.
///
/// `total_iterations` is only read by the exponential variant.
pub fn usefulness(fsw: f64, nsm: f64, variant: UrrVariant, total_iterations: usize) -> f64 {
    match variant {
        UrrVariant::SqrtProduct => (fsw * nsm).sqrt(),
        UrrVariant::Product => fsw * nsm,
        UrrVariant::Exponential => (total_iterations as f64).powf((fsw + nsm) / 2.0),
    }
}

/// `(URR, ln IRUIF)` at one iteration, with IRUIF = CCF * URR^2.
pub fn composite_usefulness(
    fsw: f64,
    nsm: f64,
    log_ccf: Option<f64>,
    variant: UrrVariant,
    total_iterations: usize,
) -> (f64, Option<f64>) {
    let urr = usefulness(fsw, nsm, variant, total_iterations);
    (urr, log_ccf.map(|c| c + 2.0 * urr.ln()))
}

/// Search quality in minimization and maximization form, and the natural
/// log of search efficiency (maximization-form quality over net size).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality {
    pub sq_min: f64,
    pub sq_max: Option<f64>,
    pub se_log: Option<f64>,
}

pub fn quality_and_efficiency(best_value: f64, ln_nss: f64) -> Quality {
    let sq_max = (best_value > 0.0).then(|| 1.0 / best_value);
    Quality {
        sq_min: best_value,
        sq_max,
        se_log: sq_max.filter(|_| ln_nss.is_finite()).map(|q| q.ln() - ln_nss),
    }
}
