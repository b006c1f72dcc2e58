use crate::plan::Block;

/// Ages of the search wake at one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wake {
    /// Sum of ages.
    pub sasw: u64,
    /// Average age.
    pub aasw: f64,
    /// Freshness, the reciprocal of the average age.
    pub fsw: f64,
}

/// Wake at iteration `k` given each position's last visiting iteration
/// (`0` for never visited). A position visited at iteration `t` has age
/// `k - t + 1`, so members of the current block have age 1.
pub fn wake_freshness(last_visit: &[usize], k: usize) -> Wake {
    let sasw: u64 = last_visit.iter().map(|&t| (k - t.min(k) + 1) as u64).sum();
    let aasw = sasw as f64 / last_visit.len() as f64;
    Wake {
        sasw,
        aasw,
        fsw: 1.0 / aasw,
    }
}

/// Incremental last-visit stamps.
#[derive(Debug, Clone)]
pub struct WakeTracker {
    last_visit: Vec<usize>,
    k: usize,
}

impl WakeTracker {
    pub fn new(m: usize) -> Self {
        Self {
            last_visit: vec![0; m],
            k: 0,
        }
    }

    pub fn push(&mut self, block: &Block) -> Wake {
        self.k += 1;
        for &p in block.members() {
            self.last_visit[p] = self.k;
        }
        wake_freshness(&self.last_visit, self.k)
    }

    pub fn last_visit(&self) -> &[usize] {
        &self.last_visit
    }
}
