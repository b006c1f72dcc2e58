use super::{Block, PlanError, StructureSpec, Verse};

/// Position reached after walking `distance` steps from `offset` on a
/// circle of `m` positions.
fn circular(offset: usize, distance: usize, verse: Verse, m: usize) -> usize {
    let d = distance % m;
    match verse {
        Verse::Forward => (offset + d) % m,
        Verse::Reverse => (offset + m - d) % m,
    }
}

/// Expands one sweep cycle of `spec` over `m` circularly arranged positions.
///
/// Block `j + 1` starts `size_j - overlap_j` positions after block `j` in
/// the traversal verse. The cycle is the shortest block prefix covering every
/// position; a truncated structure drops the last block of that prefix.
pub fn expand_cycle(
    spec: &StructureSpec,
    m: usize,
    start_offset: usize,
    verse: Verse,
) -> Result<Vec<Block>, PlanError> {
    if m == 0 || m < spec.max_size() {
        return Err(PlanError::TooFewParameters {
            m,
            size: spec.max_size(),
        });
    }
    if start_offset >= m {
        return Err(PlanError::OffsetOutOfRange { offset: start_offset, m });
    }
    let mut covered = vec![false; m];
    let mut uncovered = m;
    let mut blocks = Vec::new();
    let mut distance = 0usize;
    for j in 0.. {
        let size = spec.size_at(j);
        let members: Vec<usize> = (0..size)
            .map(|i| circular(start_offset, distance + i, verse, m))
            .collect();
        for &p in &members {
            if !covered[p] {
                covered[p] = true;
                uncovered -= 1;
            }
        }
        blocks.push(Block::new(members));
        if uncovered == 0 {
            break;
        }
        let step = size.saturating_sub(spec.overlap_at(j));
        // the coverage frontier advances by at least one per block otherwise
        if step == 0 || j > m {
            return Err(PlanError::NonTerminating(spec.to_string()));
        }
        distance += step;
    }
    if spec.truncated() {
        blocks.pop();
        if blocks.is_empty() {
            return Err(PlanError::EmptyTruncatedCycle(spec.to_string()));
        }
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::parse_structure_name;

    fn members(blocks: &[Block]) -> Vec<Vec<usize>> {
        blocks.iter().map(|b| b.members().to_vec()).collect()
    }

    fn expand(name: &str, m: usize, offset: usize, verse: Verse) -> Vec<Vec<usize>> {
        members(&expand_cycle(&parse_structure_name(name).unwrap(), m, offset, verse).unwrap())
    }

    #[test]
    fn disjoint_halves() {
        assert_eq!(
            expand("B5-O0", 10, 0, Verse::Forward),
            vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]
        );
    }

    #[test]
    fn sliding_window_stops_at_coverage() {
        let blocks = expand("B5-O4", 10, 0, Verse::Forward);
        assert_eq!(blocks.len(), 6);
        let starts: Vec<_> = blocks.iter().map(|b| b[0]).collect();
        assert_eq!(starts, [0, 1, 2, 3, 4, 5]);
        assert_eq!(
            expand("B2-O1", 4, 0, Verse::Forward),
            vec![vec![0, 1], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn truncation_drops_the_closing_block() {
        let full = expand("B5-O3", 10, 0, Verse::Forward);
        let trunc = expand("T-B5-O3", 10, 0, Verse::Forward);
        assert_eq!(full.len(), 4);
        assert_eq!(trunc, full[..3].to_vec());
        // a single-block cycle cannot be truncated
        let spec = parse_structure_name("T-B4-O1").unwrap();
        assert!(matches!(expand_cycle(&spec, 4, 0, Verse::Forward), Err(PlanError::EmptyTruncatedCycle(_))));
    }

    #[test]
    fn wraps_and_reverses() {
        assert_eq!(
            expand("B5-O0", 10, 9, Verse::Forward),
            vec![vec![0, 1, 2, 3, 9], vec![4, 5, 6, 7, 8]]
        );
        assert_eq!(
            expand("B5-O0", 10, 0, Verse::Reverse),
            vec![vec![0, 6, 7, 8, 9], vec![1, 2, 3, 4, 5]]
        );
    }

    #[test]
    fn mixed_sizes_and_overlaps() {
        assert_eq!(
            expand("B6,8,6-O5", 10, 0, Verse::Forward),
            vec![vec![0, 1, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 6, 7, 8], vec![4, 5, 6, 7, 8, 9]]
        );
        assert_eq!(
            expand("B4-O3,1,3", 10, 0, Verse::Forward),
            vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4], vec![4, 5, 6, 7], vec![5, 6, 7, 8], vec![6, 7, 8, 9]]
        );
    }

    #[test]
    fn errors() {
        let spec = parse_structure_name("B2-O1").unwrap();
        assert!(matches!(expand_cycle(&spec, 1, 0, Verse::Forward), Err(PlanError::TooFewParameters { .. })));
        assert!(matches!(expand_cycle(&spec, 4, 4, Verse::Forward), Err(PlanError::OffsetOutOfRange { .. })));
    }
}
