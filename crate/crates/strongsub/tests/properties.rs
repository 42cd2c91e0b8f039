//! Property tests for the solver invariants: degree and connectivity
//! upper bounds, monotonicity under spanning subgraphs, strongness
//! equivalence, witness soundness, and determinism across worker
//! counts.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strongsub::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

/// Digraph on `n` vertices decoded from an arc bitmask.
fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let arcs: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1u64 << i) != 0)
        .map(|(_, &a)| a)
        .collect();
    Digraph::from_arc_list(n, &arcs).unwrap()
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n, any::<u64>()).prop_map(move |(n, bits)| {
        let m = n * (n - 1);
        digraph_from_mask(n, bits & ((1u64 << m) - 1))
    })
}

fn arb_strong_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n, any::<u64>(), 1..=4u64).prop_map(move |(n, seed, pidx)| {
        random_strong_digraph(n, pidx as f64 * 0.15 + 0.25, seed).unwrap()
    })
}

/// A strong spanning subgraph sampled by random deletions that keep
/// strongness.
fn random_strong_spanning(d: &Digraph, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = d.clone();
    for arc in d.arcs().collect::<Vec<_>>() {
        if rng.random_bool(0.5) {
            let trial = current.delete_arcs(&[arc]).unwrap();
            if is_strong(&trial) {
                current = trial;
            }
        }
    }
    current
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delete_then_readd_round_trips(d in arb_digraph(6), pick in any::<u64>()) {
        let arcs: Vec<(usize, usize)> = d
            .arcs()
            .enumerate()
            .filter(|(i, _)| pick & (1u64 << (i % 64)) != 0)
            .map(|(_, a)| a)
            .collect();
        let deleted = d.delete_arcs(&arcs).unwrap();
        prop_assert_eq!(deleted.add_arcs(&arcs).unwrap(), d);
    }

    #[test]
    fn biorientation_is_symmetric(n in 2usize..=8, bits in any::<u32>()) {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .enumerate()
            .filter(|(i, _)| bits & (1u32 << (i % 32)) != 0)
            .map(|(_, e)| e)
            .collect();
        let d = Digraph::biorientation(n, &edges).unwrap();
        prop_assert!(d.is_symmetric());
        for (u, v) in d.arcs() {
            prop_assert!(d.has_arc(v, u));
        }
        prop_assert_eq!(d.arc_count(), 2 * edges.len());
    }

    #[test]
    fn isomorphism_is_reflexive_and_bijection_maps_arcs(d in arb_digraph(6), relabel in any::<u64>()) {
        prop_assert!(is_isomorphic(&d, &d).is_some());
        // Apply a random permutation and demand a witness back.
        let n = d.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = relabel;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let relabeled_arcs: Vec<(usize, usize)> =
            d.arcs().map(|(u, v)| (perm[u], perm[v])).collect();
        let relabeled = Digraph::from_arc_list(n, &relabeled_arcs).unwrap();
        let map = is_isomorphic(&d, &relabeled).expect("relabelings are isomorphic");
        prop_assert!(is_isomorphic(&relabeled, &d).is_some());
        let mut mapped: Vec<(usize, usize)> = d.arcs().map(|(u, v)| (map[u], map[v])).collect();
        mapped.sort_unstable();
        let mut target: Vec<(usize, usize)> = relabeled.arcs().collect();
        target.sort_unstable();
        prop_assert_eq!(mapped, target);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Degree upper bound: kappa_k never exceeds the minimum degree.
    #[test]
    fn kappa_bounded_by_min_degree(d in arb_strong_digraph(5), k in 2usize..=3) {
        prop_assume!(k <= d.order());
        let (dp, dm) = d.min_degrees();
        let r = kappa_k(&d, k, &cfg()).unwrap();
        prop_assert!(r.value <= dp.min(dm));
        prop_assert_eq!(verify_packing(&d, &r.witness), Ok(()));
        prop_assert_eq!(r.witness.parts.len(), r.value);
    }

    /// Connectivity upper bound, in its stated range n >= kappa + k.
    #[test]
    fn kappa_bounded_by_vertex_connectivity(d in arb_strong_digraph(5), k in 2usize..=3) {
        prop_assume!(k <= d.order());
        let (vc, cert) = vertex_connectivity(&d);
        prop_assert!(cert.verifies(&d));
        prop_assert!(vc <= d.min_degrees().0.min(d.min_degrees().1));
        if d.order() >= vc + k {
            let r = kappa_k(&d, k, &cfg()).unwrap();
            prop_assert!(r.value <= vc, "kappa_{k} = {} > kappa = {vc}", r.value);
        }
    }

    /// Monotonicity under strong spanning subgraphs.
    #[test]
    fn kappa_monotone_on_spanning_subgraphs(d in arb_strong_digraph(5), k in 2usize..=3, seed in any::<u64>()) {
        prop_assume!(k <= d.order());
        let sub = random_strong_spanning(&d, seed);
        let lower = kappa_k(&sub, k, &cfg()).unwrap().value;
        let upper = kappa_k(&d, k, &cfg()).unwrap().value;
        prop_assert!(lower <= upper);
    }

    /// For strong digraphs the value sits in 1..=n-1, and the top is
    /// reached only by the complete digraph at k outside {4, 6}.
    #[test]
    fn kappa_range_and_top_characterization(d in arb_strong_digraph(5), k in 2usize..=5) {
        prop_assume!(k <= d.order());
        let n = d.order();
        let r = kappa_k(&d, k, &cfg()).unwrap();
        prop_assert!(r.value >= 1);
        prop_assert!(r.value < n);
        if r.value == n - 1 {
            prop_assert_eq!(d.arc_count(), n * (n - 1));
            prop_assert!(k != 4 && k != 6);
        }
    }

    /// kappa_k is positive exactly on strong digraphs.
    #[test]
    fn positive_kappa_iff_strong(d in arb_digraph(5), k in 2usize..=3) {
        prop_assume!(k <= d.order());
        let r = kappa_k(&d, k, &cfg()).unwrap();
        prop_assert_eq!(r.value >= 1, is_strong(&d));
    }

    /// The flow-based connectivity matches the exhaustive vertex-subset
    /// oracle and its certificate checks out.
    #[test]
    fn connectivity_matches_subset_search(d in arb_digraph(6)) {
        let (vc, cert) = vertex_connectivity(&d);
        prop_assert!(cert.verifies(&d));
        let n = d.order();
        let brute = (0u64..(1u64 << n))
            .filter(|q| {
                let keep: Vec<usize> = (0..n).filter(|v| q & (1 << v) == 0).collect();
                if keep.len() <= 1 {
                    return true;
                }
                let (sub, _) = d.induced_subgraph(&VertexSet::new(keep).unwrap()).unwrap();
                !is_strong(&sub)
            })
            .map(|q| q.count_ones() as usize)
            .min()
            .unwrap();
        prop_assert_eq!(vc, brute);
    }

    #[test]
    fn minimal_spanning_subgraph_is_minimal(d in arb_strong_digraph(6)) {
        let h = minimal_strong_spanning_subgraph(&d).unwrap();
        let n = d.order();
        prop_assert!(is_minimally_strong(&h));
        prop_assert_eq!(h.order(), n);
        prop_assert!(h.arc_count() >= n && h.arc_count() <= 2 * n - 2);
        for (u, v) in h.arcs() {
            prop_assert!(d.has_arc(u, v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Identical results no matter how many workers run the sweep.
    #[test]
    fn kappa_is_schedule_independent(d in arb_strong_digraph(5), k in 2usize..=3) {
        prop_assume!(k <= d.order());
        let solve = || kappa_k(&d, k, &cfg()).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(solve);
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(solve);
        prop_assert_eq!(&one, &four);
        let direct = solve();
        prop_assert_eq!(&one, &direct);
    }
}

/// Deletion values stay within one of the base value, and minimality
/// reports agree with the raw definition on sampled digraphs.
#[test]
fn deletion_values_and_minimality_agree() {
    let cfg = cfg();
    for seed in 0..12u64 {
        let n = 4 + (seed % 2) as usize;
        let d = random_strong_digraph(n, 0.45, 600 + seed).unwrap();
        let base = kappa_k(&d, 2, &cfg).unwrap().value;
        let per_arc = kappa_k_after_deletions(&d, 2, &cfg).unwrap();
        for (&arc, &v) in &per_arc {
            assert!(v <= base, "deleting {:?} raised the value", arc);
            assert!(
                base <= v + 1,
                "deleting {:?} dropped the value by more than 1",
                arc
            );
        }
        // The minimality report re-derives the same picture.
        if base >= 1 {
            let report = is_minimally_connected(&d, 2, base, &cfg).unwrap();
            let minimal_by_definition = per_arc.values().all(|&v| v < base);
            assert_eq!(
                matches!(report.verdict, MinimalityVerdict::Minimal),
                minimal_by_definition
            );
        }
    }
}

#[test]
fn candidate_lists_are_canonical_and_deduplicated() {
    let d = random_strong_digraph(5, 0.5, 99).unwrap();
    let s = VertexSet::new([0, 1]).unwrap();
    let cands = enumerate_candidates(&d, &s, &cfg()).unwrap();
    for pair in cands.windows(2) {
        let key = |c: &Subgraph| {
            (
                c.vertices().len(),
                c.vertices().members(),
                c.arcs().to_vec(),
            )
        };
        assert!(key(&pair[0]) < key(&pair[1]), "not strictly increasing");
    }
    for c in &cands {
        assert!(c.is_strong());
        assert!(s.is_subset_of(c.vertices()));
    }
}
