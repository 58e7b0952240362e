//! Cross-module invariants: canonical-form laws, symmetry equivariance,
//! inclusion monotonicity, lattice bounds on avoider counts, and the
//! inflation composition law.

use meshperm::construct::build_avoider;
use meshperm::enumerate::{all_multiperms, count_avoiders, EnumOptions};
use meshperm::numbers::multiperm_count;
use meshperm::occurrence::{
    avoids, count_occurrences_smp, is_occurrence_marked, is_occurrence_smp, MarkedSmp,
};
use meshperm::pattern::{format_smp, parse_smp, SignVector};
use meshperm::rank::{avoidable, rank, Rank};
use meshperm::symmetry::{all_symmetries, Symmetry};
use meshperm::{MultiPerm, Smp};
use num_bigint::BigUint;
use proptest::prelude::*;

fn opts() -> EnumOptions {
    EnumOptions::default()
}

fn all_smps(d: usize) -> Vec<Smp> {
    let m = 1usize << d;
    (0..1usize << m)
        .map(|mask| {
            let cols = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| SignVector::from_code(i as u32, d))
                .collect();
            Smp::new(d, cols).unwrap()
        })
        .collect()
}

fn perm_row(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn multiperm(d: usize, n: usize) -> impl Strategy<Value = MultiPerm> {
    prop::collection::vec(perm_row(n), d - 1).prop_map(|rows| MultiPerm::new(rows).unwrap())
}

fn arb_dim_len() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 1usize..=6)
}

fn smp_of_dim(d: usize) -> impl Strategy<Value = Smp> {
    prop::collection::btree_set(0u32..(1u32 << d), 0..(1usize << d)).prop_map(move |codes| {
        Smp::new(
            d,
            codes
                .into_iter()
                .map(|c| SignVector::from_code(c, d))
                .collect(),
        )
        .unwrap()
    })
}

fn arb_multiperm() -> impl Strategy<Value = MultiPerm> {
    arb_dim_len().prop_flat_map(|(d, n)| multiperm(d, n))
}

fn arb_smp() -> impl Strategy<Value = Smp> {
    (2usize..=4).prop_flat_map(smp_of_dim)
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(mp in arb_multiperm()) {
        // re-stacking the full matrix of a canonical permutation is a no-op
        let restacked = MultiPerm::from_matrix(mp.full_matrix()).unwrap();
        prop_assert_eq!(&restacked, &mp);
    }

    #[test]
    fn complement_row_is_an_involution(mp in arb_multiperm()) {
        for i in 1..=mp.d() {
            let twice = mp.complement_row(i).unwrap().complement_row(i).unwrap();
            prop_assert_eq!(&twice, &mp);
        }
    }

    #[test]
    fn pattern_text_round_trips(p in arb_smp()) {
        if p.k() > 0 {
            prop_assert_eq!(parse_smp(&format_smp(&p)).unwrap(), p);
        }
    }
}

#[test]
fn inflate_all_satisfies_the_order_isomorphism_conditions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        let random_perm = |rng: &mut rand_chacha::ChaCha8Rng, len: usize| {
            let mut row: Vec<u32> = (1..=len as u32).collect();
            for i in (1..row.len()).rev() {
                let j = rng.gen_range(0..=i);
                row.swap(i, j);
            }
            row
        };
        let pi = MultiPerm::new((0..d - 1).map(|_| random_perm(&mut rng, n)).collect()).unwrap();
        let sigma = MultiPerm::new((0..d - 1).map(|_| random_perm(&mut rng, m)).collect()).unwrap();
        let gamma = pi.inflate_all(&sigma).unwrap();
        assert_eq!(gamma.n(), n * m);
        for (row, (prow, srow)) in gamma
            .value_rows()
            .iter()
            .zip(pi.value_rows().iter().zip(sigma.value_rows()))
        {
            // each block is order-isomorphic to the corresponding row of Σ
            for block in 0..n {
                let slice = &row[block * m..(block + 1) * m];
                for a in 0..m {
                    for b in a + 1..m {
                        assert_eq!(slice[a] < slice[b], srow[a] < srow[b]);
                    }
                }
            }
            // block representatives are order-isomorphic to the row of Π,
            // and blocks separate cleanly
            for s in 0..n {
                for t in 0..n {
                    if s == t {
                        continue;
                    }
                    let max_s = row[s * m..(s + 1) * m].iter().max().unwrap();
                    let min_t = row[t * m..(t + 1) * m].iter().min().unwrap();
                    assert_eq!(max_s < min_t, prow[s] < prow[t]);
                }
            }
        }
    }
}

#[test]
fn generator_count_matches_formula() {
    for d in 2..=4usize {
        for n in 0..=4usize {
            if d == 4 && n == 4 {
                continue; // 13824 permutations, covered at d<=3; keep this quick
            }
            let all = all_multiperms(d, n).unwrap();
            assert_eq!(BigUint::from(all.len()), multiperm_count(d, n));
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }
    let all44 = all_multiperms(4, 4).unwrap();
    assert_eq!(BigUint::from(all44.len()), multiperm_count(4, 4));
}

#[test]
fn occurrence_counts_are_equivariant_under_all_symmetries() {
    // exhaustive in dimension 2
    let patterns2 = all_smps(2);
    let perms2: Vec<MultiPerm> = (1..=4)
        .flat_map(|n| all_multiperms(2, n).unwrap())
        .collect();
    for sym in all_symmetries(2) {
        for p in &patterns2 {
            let sp = sym.apply_pattern(p).unwrap();
            for mp in &perms2 {
                let smp_perm = sym.apply_perm(mp).unwrap();
                assert_eq!(
                    count_occurrences_smp(mp, p).unwrap(),
                    count_occurrences_smp(&smp_perm, &sp).unwrap(),
                    "symmetry {sym:?} on {mp} with {p}"
                );
            }
        }
    }
    // spot checks in dimension 3
    let perms3 = all_multiperms(3, 3).unwrap();
    let patterns3 = [
        parse_smp("+++,--+").unwrap(),
        parse_smp("++-,-+-,+-+").unwrap(),
        Smp::hyperplane_core(3, 2).unwrap(),
    ];
    for sym in all_symmetries(3).into_iter().step_by(7) {
        for p in &patterns3 {
            let sp = sym.apply_pattern(p).unwrap();
            for mp in &perms3 {
                let smp_perm = sym.apply_perm(mp).unwrap();
                assert_eq!(
                    count_occurrences_smp(mp, p).unwrap(),
                    count_occurrences_smp(&smp_perm, &sp).unwrap()
                );
            }
        }
    }
}

#[test]
fn avoider_counts_are_symmetry_invariant() {
    let sym = Symmetry {
        row_perm: vec![2, 1],
        flip: vec![true, false],
    };
    for p in all_smps(2) {
        let sp = sym.apply_pattern(&p).unwrap();
        for n in 1..=4 {
            assert_eq!(
                count_avoiders(&p, n, &opts()).unwrap(),
                count_avoiders(&sp, n, &opts()).unwrap()
            );
        }
    }
}

#[test]
fn occurrences_are_monotone_under_pattern_inclusion() {
    // P ⊆ P' makes every occurrence of P' an occurrence of P
    let patterns = all_smps(2);
    for n in 1..=5usize {
        for mp in all_multiperms(2, n).unwrap() {
            for p_big in &patterns {
                for p_small in &patterns {
                    if !p_small.is_subset_of(p_big) {
                        continue;
                    }
                    for i in 1..=n {
                        if is_occurrence_smp(&mp, i, p_big).unwrap() {
                            assert!(is_occurrence_smp(&mp, i, p_small).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rank_is_monotone_and_symmetry_invariant() {
    for p_big in all_smps(3) {
        let r_big = rank(&p_big).unwrap();
        // subsets obtained by dropping one column
        for drop in 0..p_big.k() {
            let cols: Vec<SignVector> = p_big
                .columns()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, c)| c.clone())
                .collect();
            let p_small = Smp::new(3, cols).unwrap();
            match (rank(&p_small).unwrap(), r_big) {
                (Rank::Finite(rs), Rank::Finite(rb)) => assert!(rs >= rb),
                (Rank::Infinite, _) => {}
                (Rank::Finite(_), Rank::Infinite) => {
                    panic!("subset avoidable but superset not: {p_small} vs {p_big}")
                }
            }
            assert!(!avoidable(&p_small) || avoidable(&p_big));
        }
    }
    let sym = Symmetry {
        row_perm: vec![3, 1, 2],
        flip: vec![true, false, true],
    };
    for p in all_smps(3) {
        assert_eq!(
            rank(&p).unwrap(),
            rank(&sym.apply_pattern(&p).unwrap()).unwrap()
        );
    }
}

#[test]
fn union_intersection_follow_the_avoidability_table() {
    let patterns = all_smps(2);
    let mut indeterminate_join = (false, false); // (avoidable seen, unavoidable seen)
    let mut indeterminate_meet = (false, false);
    for p1 in &patterns {
        for p2 in &patterns {
            if p1 == p2 {
                continue;
            }
            let join = p1.union(p2).unwrap();
            let meet = p1.intersection(p2).unwrap();
            match (avoidable(p1), avoidable(p2)) {
                (true, true) => {
                    assert!(avoidable(&join));
                    if avoidable(&meet) {
                        indeterminate_meet.0 = true;
                    } else {
                        indeterminate_meet.1 = true;
                    }
                }
                (true, false) | (false, true) => {
                    assert!(avoidable(&join));
                    assert!(!avoidable(&meet));
                }
                (false, false) => {
                    assert!(!avoidable(&meet));
                    if avoidable(&join) {
                        indeterminate_join.0 = true;
                    } else {
                        indeterminate_join.1 = true;
                    }
                }
            }
        }
    }
    // the indeterminate cells really are indeterminate
    assert_eq!(indeterminate_join, (true, true));
    assert_eq!(indeterminate_meet, (true, true));
}

#[test]
fn avoider_counts_respect_lattice_bounds() {
    let patterns = all_smps(2);
    let opts = opts();
    for n in 1..=5usize {
        let counts: Vec<BigUint> = patterns
            .iter()
            .map(|p| count_avoiders(p, n, &opts).unwrap())
            .collect();
        let lookup = |p: &Smp| {
            let idx = patterns.iter().position(|q| q == p).unwrap();
            counts[idx].clone()
        };
        for p1 in &patterns {
            for p2 in &patterns {
                let join = lookup(&p1.union(p2).unwrap());
                let meet = lookup(&p1.intersection(p2).unwrap());
                let (a1, a2) = (lookup(p1), lookup(p2));
                assert!(join >= a1.clone().max(a2.clone()));
                assert!(meet <= a1.min(a2));
            }
        }
    }
}

#[test]
fn inflation_composes_avoidance() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let candidates: Vec<Smp> = all_smps(2).into_iter().filter(avoidable).collect();
    for _ in 0..30 {
        let p1 = &candidates[rng.gen_range(0..candidates.len())];
        let p2 = &candidates[rng.gen_range(0..candidates.len())];
        let n1 = rng.gen_range(2..=4);
        let n2 = rng.gen_range(2..=4);
        let pi = build_avoider(p1, n1.max(2)).unwrap();
        let sigma = build_avoider(p2, n2.max(2)).unwrap();
        let gamma = pi.inflate_all(&sigma).unwrap();
        assert!(avoids(&gamma, p1).unwrap(), "{p1} not avoided");
        assert!(avoids(&gamma, p2).unwrap(), "{p2} not avoided");
    }
}

#[test]
fn shaded_marked_patterns_agree_with_plain_semantics() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let patterns: Vec<Smp> = all_smps(2).into_iter().filter(|p| p.k() > 0).collect();
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let mut row: Vec<u32> = (1..=n as u32).collect();
        for i in (1..row.len()).rev() {
            let j = rng.gen_range(0..=i);
            row.swap(i, j);
        }
        let mp = MultiPerm::new(vec![row]).unwrap();
        let p = &patterns[rng.gen_range(0..patterns.len())];
        let marked = MarkedSmp::all_shaded(p);
        for i in 1..=n {
            assert_eq!(
                is_occurrence_smp(&mp, i, p).unwrap(),
                is_occurrence_marked(&mp, i, &marked).unwrap()
            );
        }
    }
}

#[test]
fn checker_agrees_with_a_literal_reading_of_the_definition() {
    // independent route: test every element against the pattern through
    // sgn_between and column lookup, with no bit tables involved
    let naive_is_occurrence = |mp: &MultiPerm, i: usize, p: &Smp| -> bool {
        (1..=mp.n())
            .filter(|&j| j != i)
            .all(|j| !p.contains(&mp.sgn_between(j, i).unwrap()))
    };
    for d in 2..=3usize {
        let patterns = all_smps(d);
        for n in 1..=3usize {
            for mp in all_multiperms(d, n).unwrap() {
                for p in &patterns {
                    for i in 1..=n {
                        assert_eq!(
                            is_occurrence_smp(&mp, i, p).unwrap(),
                            naive_is_occurrence(&mp, i, p),
                            "{mp} element {i} pattern {p}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn shaded_mesh_cells_match_a_direct_predicate() {
    use meshperm::occurrence::{count_occurrences_mesh, MeshPattern};
    // ascending pair with the all-beyond corner cell shaded: an occurrence
    // is an ascending pair (i,j) such that no element r > j exceeds element
    // j in every value row
    let t = MultiPerm::identity(3, 2).unwrap();
    let beyond = MeshPattern::new(t.clone(), vec![vec![2, 2, 2]]).unwrap();
    // and with the all-before corner cell shaded: nothing strictly below
    // element i in every coordinate
    let before = MeshPattern::new(t, vec![vec![0, 0, 0]]).unwrap();
    for n in 3..=4usize {
        for mp in all_multiperms(3, n).unwrap() {
            let rows = mp.value_rows();
            let ascending: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| rows.iter().all(|row| row[i] < row[j]))
                .collect();
            let beyond_direct = ascending
                .iter()
                .filter(|&&(_, j)| !(0..n).any(|r| r > j && rows.iter().all(|row| row[r] > row[j])))
                .count();
            let before_direct = ascending
                .iter()
                .filter(|&&(i, _)| !(0..n).any(|r| r < i && rows.iter().all(|row| row[r] < row[i])))
                .count();
            assert_eq!(
                count_occurrences_mesh(&mp, &beyond).unwrap(),
                beyond_direct,
                "beyond cell on {mp}"
            );
            assert_eq!(
                count_occurrences_mesh(&mp, &before).unwrap(),
                before_direct,
                "before cell on {mp}"
            );
        }
    }
}
