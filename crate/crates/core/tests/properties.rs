use std::sync::OnceLock;

use matching_ekr::cayley::{coclique_linegraph_map, GraphAutomorphism};
use matching_ekr::graph::{all_canonical_cocliques, build_graph, degree_formula};
use matching_ekr::polytope::{gram_nullity, OddCut};
use matching_ekr::reps::{add_box, hook_dimension, mn_character, remove_box};
use matching_ekr::spectral::{integer_spectrum, kneser_adjacency, kneser_eigenvalues};
use matching_ekr::{
    binomial, enumerate_matchings, partitions_of, union_cycle_type, DerangementGraph, IntegerPartition, Limits,
};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn graph(k: usize) -> &'static DerangementGraph {
    static GRAPHS: [OnceLock<DerangementGraph>; 5] = [const { OnceLock::new() }; 5];
    GRAPHS[k].get_or_init(|| build_graph(k).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn k_and_permutation() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=4).prop_flat_map(|k| (Just(k), permutation(2 * k)))
}

fn partition(max_n: usize) -> impl Strategy<Value = IntegerPartition> {
    (1..=max_n).prop_flat_map(|n| {
        let all = partitions_of(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_permutations_are_automorphisms((k, sigma) in k_and_permutation()) {
        let g = graph(k);
        let perm = g.induced_permutation(&sigma).unwrap();
        prop_assert!(g.is_automorphism(&perm));
    }

    #[test]
    fn induced_edge_map_preserves_line_graph((k, sigma) in (3usize..=4).prop_flat_map(|k| (Just(k), permutation(2 * k)))) {
        let g = graph(k);
        let alpha = GraphAutomorphism::from_point_permutation(g, &sigma).unwrap();
        let map = coclique_linegraph_map(&alpha, k, &all_canonical_cocliques(g)).unwrap();
        prop_assert!(map.preserves_line_graph);
        for (e, &image) in matching_ekr::combinatorics::edges_of_complete_graph(2 * k).iter().zip(&map.edge_perm) {
            prop_assert_eq!(e.permuted(&sigma).index(2 * k), image);
        }
    }

    #[test]
    fn union_type_is_symmetric_and_invariant((k, sigma) in k_and_permutation(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let vs = graph(k).vertices();
        let (m, n) = (&vs[i.index(vs.len())], &vs[j.index(vs.len())]);
        let t = union_cycle_type(m, n).unwrap();
        prop_assert_eq!(&t, &union_cycle_type(n, m).unwrap());
        prop_assert_eq!(&t, &union_cycle_type(&m.permuted(&sigma), &n.permuted(&sigma)).unwrap());
        prop_assert_eq!(t.n(), k);
        prop_assert_eq!(t.count(1), m.shared_edges(n));
    }

    #[test]
    fn conjugate_has_same_dimension(p in partition(14)) {
        prop_assert_eq!(hook_dimension(&p), hook_dimension(&p.conjugate()));
    }

    #[test]
    fn character_at_identity_is_dimension(p in partition(12)) {
        let identity = IntegerPartition::new(vec![1; p.n()]).unwrap();
        prop_assert_eq!(mn_character(&p, &identity).unwrap(), BigInt::from(hook_dimension(&p)));
    }

    #[test]
    fn branching_rules(p in partition(14)) {
        let down: BigUint = remove_box(&p).unwrap().iter().map(hook_dimension).sum();
        prop_assert_eq!(down, hook_dimension(&p));
        let up: BigUint = add_box(&p).iter().map(hook_dimension).sum();
        prop_assert_eq!(up, hook_dimension(&p) * BigUint::from(p.n() + 1));
    }

    #[test]
    fn odd_cut_boundary_and_crossings(k in 2usize..=4, raw in any::<u64>()) {
        let n = 2 * k;
        let mut mask = raw & ((1 << n) - 1);
        if mask.count_ones() % 2 == 0 {
            mask ^= 1;
        }
        prop_assume!((3..n).contains(&(mask.count_ones() as usize)));
        let cut = OddCut::new(k, mask).unwrap();
        let s = cut.size();
        prop_assert_eq!(cut.boundary().len(), s * (n - s));
        for m in enumerate_matchings(k).unwrap() {
            prop_assert_eq!(cut.crossing(&m) % 2, 1);
        }
    }
}

#[test]
fn column_orthogonality() {
    for n in 1..=8 {
        let parts = partitions_of(n);
        for (a, mu) in parts.iter().enumerate() {
            for nu in &parts[a..] {
                let dot: BigInt = parts
                    .iter()
                    .map(|l| mn_character(l, mu).unwrap() * mn_character(l, nu).unwrap())
                    .sum();
                if mu == nu {
                    assert!(dot > BigInt::from(0), "{mu}");
                } else {
                    assert_eq!(dot, BigInt::from(0), "{mu} {nu}");
                }
            }
        }
    }
}

#[test]
fn dimension_squares_sum_to_group_order() {
    for n in 1..=12u64 {
        let sum: BigUint = partitions_of(n as usize).iter().map(|p| hook_dimension(p).pow(2)).sum();
        let order: BigUint = (1..=n).map(BigUint::from).product();
        assert_eq!(sum, order);
    }
}

#[test]
fn kneser_closed_form_matches_direct() {
    for n in 2..=10 {
        for k in 1..=n / 2 {
            if binomial(n as u64, k as u64) > BigUint::from(100u32) {
                continue;
            }
            let direct = integer_spectrum(&kneser_adjacency(n, k).unwrap()).unwrap();
            assert_eq!(direct, kneser_eigenvalues(n, k).unwrap(), "K({n},{k})");
        }
    }
}

#[test]
fn canonical_cocliques_give_least_eigenvectors() {
    for k in 2..=4 {
        let g = graph(k);
        let d = BigInt::from(degree_formula(k));
        let tau = num_rational::BigRational::new(-d, BigInt::from(2 * k as i64 - 2));
        for (_, set) in all_canonical_cocliques(g) {
            let c = matching_ekr::spectral::ratio_tightness_certificate(g, &set, &tau).unwrap();
            assert!(c.bound_met && c.eigenvector == Some(true), "k={k}");
        }
    }
}

#[test]
fn gram_nullity_is_one_less_than_vertex_count() {
    let l = Limits::default();
    for k in 2..=4 {
        assert_eq!(gram_nullity(k, &l).unwrap(), 2 * k - 1);
    }
}
