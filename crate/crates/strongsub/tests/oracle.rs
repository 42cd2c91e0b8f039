//! Cross-validation of the packing solver against the brute-force
//! oracle, which filters raw arc subsets with no candidate reduction.

use itertools::Itertools;
use strongsub::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn all_terminal_sets(n: usize) -> Vec<VertexSet> {
    (2..=n.min(3))
        .flat_map(|size| (0..n).combinations(size))
        .map(|s| VertexSet::new(s).unwrap())
        .collect()
}

#[test]
fn oracle_agrees_on_every_order_3_digraph() {
    let pairs: Vec<(usize, usize)> = (0..3)
        .flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    for mask in 0u32..64 {
        let arcs: Vec<(usize, usize)> = (0..6)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| pairs[i])
            .collect();
        let d = Digraph::from_arc_list(3, &arcs).unwrap();
        for size in 2..=3 {
            for s in (0..3).combinations(size) {
                let s = VertexSet::new(s).unwrap();
                let solver = kappa_s(&d, &s, &cfg()).unwrap();
                let oracle = kappa_s_bruteforce(&d, &s).unwrap();
                assert_eq!(
                    solver.value, oracle,
                    "mismatch on mask {mask:#b} with terminals {:?}",
                    s
                );
                assert_eq!(verify_packing(&d, &solver.witness), Ok(()));
                assert_eq!(solver.witness.parts.len(), solver.value);
            }
        }
    }
}

#[test]
fn oracle_agrees_on_random_digraphs() {
    let mut checked = 0usize;
    for i in 0..60u64 {
        let n = 4 + (i % 2) as usize;
        let p = [0.3, 0.4, 0.5, 0.6][(i % 4) as usize];
        let d = random_strong_digraph(n, p, 41_000 + i).unwrap();
        for s in all_terminal_sets(n) {
            let solver = kappa_s(&d, &s, &cfg()).unwrap();
            let oracle = kappa_s_bruteforce(&d, &s).unwrap();
            assert_eq!(
                solver.value,
                oracle,
                "seed {} terminals {:?}",
                41_000 + i,
                s
            );
            checked += 1;
        }
    }
    assert!(checked > 500);
}

/// The oracle also covers non-strong hosts, where the answer may be 0.
#[test]
fn oracle_agrees_on_sparse_not_necessarily_strong_digraphs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = 4 + (rng.random_range(0..2) as usize);
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(0.3) {
                    arcs.push((u, v));
                }
            }
        }
        let d = Digraph::from_arc_list(n, &arcs).unwrap();
        for s in all_terminal_sets(n) {
            let solver = kappa_s(&d, &s, &cfg()).unwrap();
            let oracle = kappa_s_bruteforce(&d, &s).unwrap();
            assert_eq!(solver.value, oracle, "arcs {:?} terminals {:?}", arcs, s);
        }
    }
}
