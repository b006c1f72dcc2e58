use serde::Serialize;

use super::{PlanError, Recombination, Verse};

/// Cycle start positions for type A recombination over ten parameters.
pub const TYPE_A_OFFSETS: [usize; 10] = [0, 9, 5, 4, 7, 6, 2, 1, 3, 8];
/// Cycle start positions for type B recombination over ten parameters.
pub const TYPE_B_OFFSETS: [usize; 10] = [0, 5, 7, 2, 9, 4, 8, 3, 6, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleStart {
    pub offset: usize,
    pub verse: Verse,
}

/// Start offset and traversal verse of each of `n_cycles` sweep cycles.
///
/// Without recombination every cycle restarts at 0 going forward. Types A
/// and B alternate the verse and take offsets from the fixed tables when
/// `m == 10`; for other `m` both use [`midpoint_offsets`].
pub fn build_recombination_schedule(
    kind: Recombination,
    m: usize,
    n_cycles: usize,
) -> Result<Vec<CycleStart>, PlanError> {
    if n_cycles == 0 {
        return Err(PlanError::Validation("cycle count must be at least 1".into()));
    }
    if m == 0 {
        return Err(PlanError::TooFewParameters { m, size: 1 });
    }
    let offsets: Vec<usize> = match (kind, m) {
        (Recombination::None, _) => vec![0],
        (Recombination::A, 10) => TYPE_A_OFFSETS.to_vec(),
        (Recombination::B, 10) => TYPE_B_OFFSETS.to_vec(),
        _ => midpoint_offsets(m),
    };
    Ok((0..n_cycles)
        .map(|c| CycleStart {
            offset: offsets[c % offsets.len()],
            verse: if kind == Recombination::None || c % 2 == 0 {
                Verse::Forward
            } else {
                Verse::Reverse
            },
        })
        .collect())
}

/// Greedy farthest-unvisited-midpoint sequence over `m` circular positions.
///
/// Starts at 0; each next offset is the midpoint (rounded down) of the
/// largest circular gap between offsets already used, earliest gap on ties.
/// Returns all `m` positions exactly once.
pub fn midpoint_offsets(m: usize) -> Vec<usize> {
    let mut used = vec![0usize];
    while used.len() < m {
        let mut sorted = used.clone();
        sorted.sort_unstable();
        let (mut best_start, mut best_len) = (0, 0);
        for (i, &start) in sorted.iter().enumerate() {
            let end = sorted.get(i + 1).copied().unwrap_or(sorted[0] + m);
            if end - start > best_len {
                best_start = start;
                best_len = end - start;
            }
        }
        used.push((best_start + best_len / 2) % m);
    }
    used
}
