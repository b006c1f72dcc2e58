//! Naive reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use blockwake::indicators::{IndicatorTrace, Variants};
use blockwake::{Block, Recombination, StructureSpec, SweepPlan};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All grid points, last coordinate fastest.
pub fn grid(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in cards {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..c).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Block descent by filtering the whole grid. Returns `(point, value)` per block.
pub fn naive_search(
    cards: &[usize],
    f: &dyn Fn(&[usize]) -> f64,
    blocks: &[Vec<usize>],
    ordering: &[usize],
    init: &[usize],
) -> Vec<(Vec<usize>, f64)> {
    let all = grid(cards);
    let mut current = init.to_vec();
    let mut out = Vec::new();
    for b in blocks {
        let mut positions = b.clone();
        positions.sort_unstable();
        let active: Vec<usize> = positions.iter().map(|&p| ordering[p]).collect();
        let key = |x: &[usize]| active.iter().map(|&i| x[i]).collect::<Vec<_>>();
        let best = all
            .iter()
            .filter(|x| (0..cards.len()).all(|i| active.contains(&i) || x[i] == current[i]))
            .min_by(|a, b| f(a).partial_cmp(&f(b)).unwrap().then_with(|| key(a).cmp(&key(b))))
            .unwrap()
            .clone();
        out.push((best.clone(), f(&best)));
        current = best;
    }
    out
}

fn big_ln(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let s = n.to_str_radix(10);
    let head = &s[..s.len().min(17)];
    head.parse::<f64>().unwrap().ln() + (s.len() - head.len()) as f64 * std::f64::consts::LN_10
}

pub fn rat_ln(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    big_ln(&r.numer().to_biguint().unwrap()) - big_ln(&r.denom().to_biguint().unwrap())
}

#[derive(Debug, Clone)]
pub struct NaiveRow {
    pub abs: BigUint,
    pub gss: BigUint,
    pub tos: BigUint,
    pub nss: BigUint,
    pub gcr: Option<BigRational>,
    pub lcr: BigRational,
    pub log_cf: f64,
    pub log_ccf: f64,
    pub fsw: f64,
    pub nsm: Option<f64>,
    pub sq_max: f64,
    pub se_log: f64,
}

fn size(members: &[usize], card: &[usize]) -> BigUint {
    members.iter().map(|&p| BigUint::from(card[p])).product()
}

fn overlap(a: &[usize], b: &[usize], card: &[usize]) -> BigUint {
    let shared: Vec<usize> = a.iter().copied().filter(|p| b.contains(p)).collect();
    if shared.is_empty() {
        BigUint::zero()
    } else {
        size(&shared, card)
    }
}

/// Every indicator at every iteration, each recomputed from scratch.
pub fn naive_indicators(blocks: &[Vec<usize>], card: &[usize], values: &[f64]) -> Vec<NaiveRow> {
    let m = card.len();
    let sorted: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut s = b.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let abs = |k: usize| size(&sorted[k - 1], card);
    let los = |k: usize| overlap(&sorted[k - 2], &sorted[k - 1], card);
    let lcr = |k: usize| {
        if k == 1 {
            BigRational::one()
        } else {
            BigRational::new(los(k).into(), (abs(k - 1) * abs(k)).into())
        }
    };
    let pairs = |k: usize| -> HashSet<(usize, usize)> {
        sorted[k - 2].iter().copied().zip(sorted[k - 1].iter().copied()).collect()
    };
    (1..=blocks.len())
        .map(|k| {
            let gss: BigUint = (1..=k).map(abs).product();
            let tos: BigUint = if k == 1 { BigUint::zero() } else { (2..=k).map(los).product() };
            let nss = &gss - &tos;
            let gcr = (!nss.is_zero()).then(|| BigRational::new(tos.clone().into(), nss.clone().into()));
            let cf = |n: usize| -> f64 {
                let prod: BigRational = (1..=n).map(|i| lcr(i) * BigRational::from_integer(abs(i).into())).product();
                rat_ln(&prod) / 3.0
            };
            let cfs: Vec<f64> = (1..=k).map(cf).collect();
            let top = cfs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let log_ccf = if top == f64::NEG_INFINITY {
                top
            } else {
                top + cfs.iter().map(|c| (c - top).exp()).sum::<f64>().ln()
            };
            let ages: usize = (0..m)
                .map(|p| match (1..=k).rev().find(|&t| sorted[t - 1].contains(&p)) {
                    Some(t) => k - t + 1,
                    None => k + 1,
                })
                .sum();
            let nsm = (k >= 2).then(|| {
                if k == 2 {
                    return 1.0;
                }
                let now = pairs(k);
                (2..k)
                    .map(|j| {
                        let mut touched = vec![j - 1, j, k - 1, k];
                        touched.sort_unstable();
                        touched.dedup();
                        let mean =
                            touched.iter().map(|&t| sorted[t - 1].len()).sum::<usize>() as f64 / touched.len() as f64;
                        mean - pairs(j).intersection(&now).count() as f64
                    })
                    .fold(f64::INFINITY, f64::min)
                    / m as f64
            });
            NaiveRow {
                abs: abs(k),
                lcr: lcr(k),
                log_cf: cfs[k - 1],
                log_ccf,
                fsw: m as f64 / ages as f64,
                nsm,
                sq_max: 1.0 / values[k - 1],
                se_log: (1.0 / values[k - 1]).ln() - big_ln(&nss),
                gss,
                tos,
                nss,
                gcr,
            }
        })
        .collect()
}

/// A random valid structure together with a parameter count it fits.
pub fn random_structure<R: Rng>(rng: &mut R, max_m: usize) -> (StructureSpec, usize) {
    loop {
        let sizes: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=5)).collect();
        let overlaps: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..4)).collect();
        let truncated = rng.gen_bool(0.3);
        if let Ok(spec) = StructureSpec::new(sizes, overlaps, truncated) {
            let lo = spec.max_size().max(2);
            if lo <= max_m {
                return (spec, rng.gen_range(lo..=max_m));
            }
        }
    }
}

pub fn random_recombination<R: Rng>(rng: &mut R) -> Recombination {
    [Recombination::None, Recombination::A, Recombination::B][rng.gen_range(0..3)]
}

/// Deterministic pseudo-random value table over a grid.
pub fn hashed(seed: u64) -> impl Fn(&[usize]) -> f64 + Sync {
    move |x: &[usize]| {
        let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
        for &c in x {
            h = (h ^ c as u64).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
        }
        0.1 + (h >> 40) as f64 / (1u64 << 24) as f64
    }
}

pub const STRUCTURE_NAMES: [&str; 25] = [
    "B5-O4", "B5-O3", "B5-O2", "B4-O2", "B3-O2", "B5-O1", "B4-O1", "B3-O1", "B2-O1", "B5-O0", "B3-O0", "B2-O0",
    "T-B5-O4", "T-B5-O3", "T-B5-O2", "T-B4-O2", "T-B3-O2", "T-B4-O1", "T-B3-O1", "B7-O6", "B6,8,6-O5", "B4-O3,1,3",
    "B5,2,5-O1", "B4,6,4-O2", "B3,4,3-O0",
];

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a == b) || (a - b).abs() <= tol
}

/// Checks every row of `blocks` against the naive recomputation.
pub fn check(blocks: &[Block], card: &[usize], values: &[f64]) -> Result<(), String> {
    let trace = IndicatorTrace::compute(blocks, card, values, Variants::default()).map_err(|e| e.to_string())?;
    let raw: Vec<Vec<usize>> = blocks.iter().map(|b| b.members().to_vec()).collect();
    let naive = naive_indicators(&raw, card, values);
    for (k, (row, n)) in trace.rows.iter().zip(&naive).enumerate() {
        let k = k + 1;
        let l = &trace.ledger;
        let fail = |what: &str| Err(format!("iteration {k}: {what}"));
        if l.abs(k) != &n.abs || l.gss(k) != &n.gss || l.tos(k) != &n.tos || l.nss(k) != &n.nss {
            return fail("sizes");
        }
        if row.cv != n.tos {
            return fail("CV");
        }
        match (&n.gcr, row.gcr) {
            (Some(g), Some(x)) if close(x, g.to_f64().unwrap(), 1e-12 * g.to_f64().unwrap().max(1.0)) => {}
            (None, None) => {}
            _ => return fail("GCR"),
        }
        if !close(row.lcr.unwrap().ln(), rat_ln(&n.lcr), 1e-9) {
            return fail("LCR");
        }
        if !close(row.log_cf.unwrap(), n.log_cf, 1e-9) || !close(row.log_ccf.unwrap(), n.log_ccf, 1e-9) {
            return fail("CF/CCF");
        }
        if !close(row.ln_nss, rat_ln(&BigRational::from_integer(n.nss.clone().into())), 1e-9) {
            return fail("ln NSS");
        }
        if !close(row.fsw, n.fsw, 1e-12) {
            return fail("FSW");
        }
        match (row.nsm, n.nsm) {
            (Some(a), Some(b)) if close(a, b, 1e-12) => {}
            (None, None) => {}
            _ => return fail("NSM"),
        }
        if !close(row.sq_max.unwrap(), n.sq_max, 1e-12) {
            return fail("SQ");
        }
        match row.se_log {
            Some(se) if close(se, n.se_log, 1e-9) => {}
            None if n.se_log.is_infinite() => {}
            _ => return fail("SE"),
        }
    }
    Ok(())
}

/// Seeded random plan on 3-level parameters with a non-increasing value column.
pub fn indicator_case(seed: u64) -> Option<(Vec<Block>, Vec<usize>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (spec, m) = random_structure(&mut rng, 10);
    let plan = SweepPlan::from_name(&spec.to_string(), m, rng.gen_range(1..=6), random_recombination(&mut rng)).ok()?;
    let blocks = plan.block_sequence();
    let card = vec![3; m];
    let mut f = 2.0;
    let values = blocks
        .iter()
        .map(|_| {
            f *= rng.gen_range(0.5..=1.0);
            f
        })
        .collect();
    Some((blocks, card, values))
}
