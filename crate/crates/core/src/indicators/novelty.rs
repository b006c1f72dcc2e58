use std::collections::HashSet;

use crate::plan::Block;

/// Position-wise pairs of a move: both blocks ascending, paired left to
/// right up to the shorter length.
pub fn move_pairs(from: &Block, to: &Block) -> Vec<(usize, usize)> {
    from.members()
        .iter()
        .copied()
        .zip(to.members().iter().copied())
        .collect()
}

/// Novelty of each move against every earlier move.
///
/// Move `k` goes from block `k-1` to block `k`. Its elements of novelty
/// against an earlier move `j` are the mean size of the distinct blocks the
/// two moves touch minus the number of pairs they share; the most novel
/// search move value is the minimum over all earlier moves, and NSM divides
/// it by `m`. The first move has no history and scores 1.
#[derive(Debug, Clone)]
pub struct MoveHistory {
    m: usize,
    sizes: Vec<usize>,
    moves: Vec<HashSet<(usize, usize)>>,
    prev: Option<Block>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Novelty {
    /// Minimum elements of novelty over past moves; `None` for the first move.
    pub mnsm: Option<f64>,
    pub nsm: f64,
    pub pairs: Vec<(usize, usize)>,
}

impl MoveHistory {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            sizes: Vec::new(),
            moves: Vec::new(),
            prev: None,
        }
    }

    /// Records block `k`; returns the novelty of move `k` for k >= 2.
    pub fn push(&mut self, block: &Block) -> Option<Novelty> {
        self.sizes.push(block.len());
        let prev = self.prev.replace(block.clone())?;
        let pairs = move_pairs(&prev, block);
        let current: HashSet<_> = pairs.iter().copied().collect();
        let k = self.sizes.len();
        let mnsm = (2..k)
            .map(|j| {
                let shared = self.moves[j - 2].intersection(&current).count() as f64;
                self.mean_size(&[j - 1, j, k - 1, k]) - shared
            })
            .reduce(f64::min);
        self.moves.push(current);
        Some(Novelty {
            mnsm,
            nsm: mnsm.map_or(1.0, |v| v / self.m as f64),
            pairs,
        })
    }

    /// Mean block size over the distinct one-based iterations in `iters`.
    fn mean_size(&self, iters: &[usize]) -> f64 {
        let mut distinct: Vec<usize> = iters.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let total: usize = distinct.iter().map(|&i| self.sizes[i - 1]).sum();
        total as f64 / distinct.len() as f64
    }
}

/// NSM at iteration `k` (one-based) of `blocks`; `None` for k < 2.
pub fn move_novelty(blocks: &[Block], k: usize, m: usize) -> Option<f64> {
    let mut history = MoveHistory::new(m);
    let mut out = None;
    for b in blocks.iter().take(k) {
        out = history.push(b).map(|n| n.nsm);
    }
    if k < 2 {
        None
    } else {
        out
    }
}
