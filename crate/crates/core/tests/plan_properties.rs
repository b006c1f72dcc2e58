mod common;

use blockwake::plan::{build_recombination_schedule, midpoint_offsets, PlanError};
use blockwake::{expand_cycle, parse_structure_name, Recombination, StructureSpec, SweepPlan, Verse};
use common::{random_structure, STRUCTURE_NAMES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn members(blocks: &[blockwake::Block]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.members().to_vec()).collect()
}

fn structure() -> impl Strategy<Value = (StructureSpec, usize)> {
    any::<u64>().prop_map(|seed| random_structure(&mut ChaCha8Rng::seed_from_u64(seed), 12))
}

#[test]
fn listed_names_round_trip() {
    for name in STRUCTURE_NAMES {
        let spec = parse_structure_name(name).unwrap();
        assert_eq!(spec.to_string(), name);
        assert_eq!(parse_structure_name(&spec.to_string()).unwrap(), spec);
    }
}

#[test]
fn malformed_names_are_rejected() {
    for bad in ["", "B", "B5", "B5-O", "B5-O5", "B0-O0", "B5,-O1", "T-", "B5-O1x", "b5-o1", "B4,2-O2", "X-B5-O1"] {
        assert!(parse_structure_name(bad).is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn display_parse_round_trip((spec, _m) in structure()) {
        prop_assert_eq!(parse_structure_name(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn untruncated_cycles_cover_every_position((spec, m) in structure(), offset in 0usize..12, reverse in any::<bool>()) {
        prop_assume!(!spec.truncated());
        let verse = if reverse { Verse::Reverse } else { Verse::Forward };
        let blocks = match expand_cycle(&spec, m, offset % m, verse) {
            Ok(b) => b,
            Err(PlanError::NonTerminating(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let mut seen = vec![false; m];
        for b in &blocks {
            for &p in b.members() {
                seen[p] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        // minimal: without the last block something is uncovered
        let mut partial = vec![false; m];
        for b in &blocks[..blocks.len() - 1] {
            for &p in b.members() {
                partial[p] = true;
            }
        }
        prop_assert!(partial.iter().any(|&s| !s));
    }

    #[test]
    fn block_sizes_and_adjacent_overlaps((spec, m) in structure(), offset in 0usize..12) {
        let Ok(blocks) = expand_cycle(&spec, m, offset % m, Verse::Forward) else { return Ok(()) };
        for (j, b) in blocks.iter().enumerate() {
            prop_assert_eq!(b.len(), spec.size_at(j));
        }
        for j in 0..blocks.len().saturating_sub(1) {
            let (a, b) = (spec.size_at(j), spec.size_at(j + 1));
            if a + b - spec.overlap_at(j) <= m {
                prop_assert_eq!(blocks[j].intersection(&blocks[j + 1]).len(), spec.overlap_at(j));
            }
        }
    }

    #[test]
    fn offsets_rotate_the_base_cycle((spec, m) in structure(), offset in 0usize..12, reverse in any::<bool>()) {
        let offset = offset % m;
        let verse = if reverse { Verse::Reverse } else { Verse::Forward };
        let (Ok(base), Ok(shifted)) = (expand_cycle(&spec, m, 0, verse), expand_cycle(&spec, m, offset, verse)) else {
            return Ok(());
        };
        let rotated: Vec<Vec<usize>> = base
            .iter()
            .map(|b| {
                let mut v: Vec<usize> = b.members().iter().map(|&p| (p + offset) % m).collect();
                v.sort_unstable();
                v
            })
            .collect();
        prop_assert_eq!(members(&shifted), rotated);
    }

    #[test]
    fn reverse_mirrors_forward((spec, m) in structure()) {
        let (Ok(fwd), Ok(rev)) = (expand_cycle(&spec, m, 0, Verse::Forward), expand_cycle(&spec, m, 0, Verse::Reverse)) else {
            return Ok(());
        };
        let mirrored: Vec<Vec<usize>> = fwd
            .iter()
            .map(|b| {
                let mut v: Vec<usize> = b.members().iter().map(|&p| (m - p) % m).collect();
                v.sort_unstable();
                v
            })
            .collect();
        prop_assert_eq!(members(&rev), mirrored);
    }

    #[test]
    fn schedules_alternate_and_permute(m in 1usize..40, cycles in 1usize..30) {
        let offsets = midpoint_offsets(m);
        let mut sorted = offsets.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..m).collect::<Vec<_>>());
        for kind in [Recombination::A, Recombination::B] {
            let s = build_recombination_schedule(kind, m, cycles).unwrap();
            for (c, start) in s.iter().enumerate() {
                prop_assert_eq!(start.verse, if c % 2 == 0 { Verse::Forward } else { Verse::Reverse });
                prop_assert!(start.offset < m);
            }
            prop_assert_eq!(s[0].offset, 0);
        }
        let none = build_recombination_schedule(Recombination::None, m, cycles).unwrap();
        prop_assert!(none.iter().all(|s| s.offset == 0 && s.verse == Verse::Forward));
    }

    #[test]
    fn plan_cycles_follow_their_schedule((spec, m) in structure(), cycles in 1usize..6) {
        for kind in [Recombination::None, Recombination::A, Recombination::B] {
            let Ok(plan) = SweepPlan::from_name(&spec.to_string(), m, cycles, kind) else { continue };
            let schedule = build_recombination_schedule(kind, m, cycles).unwrap();
            prop_assert_eq!(plan.cycles().len(), cycles);
            for (c, s) in plan.cycles().iter().zip(&schedule) {
                prop_assert_eq!((c.offset, c.verse), (s.offset, s.verse));
                prop_assert_eq!(&c.blocks, &expand_cycle(&spec, m, s.offset, s.verse).unwrap());
            }
        }
    }
}

#[test]
fn ten_parameter_tables() {
    let offsets = |kind| -> Vec<usize> {
        build_recombination_schedule(kind, 10, 10).unwrap().iter().map(|s| s.offset).collect()
    };
    assert_eq!(offsets(Recombination::A), [0, 9, 5, 4, 7, 6, 2, 1, 3, 8]);
    assert_eq!(offsets(Recombination::B), [0, 5, 7, 2, 9, 4, 8, 3, 6, 1]);
}

#[test]
fn truncation_drops_the_closing_block() {
    let full = SweepPlan::from_name("B4-O1", 10, 1, Recombination::None).unwrap();
    let cut = SweepPlan::from_name("T-B4-O1", 10, 1, Recombination::None).unwrap();
    let f = full.block_sequence();
    assert_eq!(cut.block_sequence(), f[..f.len() - 1]);
}
