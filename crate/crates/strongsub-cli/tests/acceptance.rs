//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line (visible with `--nocapture`).
//!
//! Run with `cargo test -p strongsub-cli --test acceptance`.

use std::process::Command;

use itertools::Itertools;
use strongsub::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn conclude(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: the solver and the brute-force oracle agree on every
/// digraph with 3 vertices (all terminal sets) and on 200 seeded random
/// digraphs with 4 or 5 vertices.
#[test]
fn criterion_1_oracle_equivalence() {
    let mut mismatches = 0usize;
    let mut checks = 0usize;

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
                checks += 1;
                if kappa_s(&d, &s, &cfg()).unwrap().value != kappa_s_bruteforce(&d, &s).unwrap() {
                    mismatches += 1;
                }
            }
        }
    }
    let order3_checks = checks;

    for i in 0..200u64 {
        let n = 4 + (i % 2) as usize;
        let p = [0.3, 0.4, 0.5, 0.6][(i % 4) as usize];
        let d = random_strong_digraph(n, p, 41_000 + i).unwrap();
        for size in 2..=3 {
            for s in (0..n).combinations(size) {
                let s = VertexSet::new(s).unwrap();
                checks += 1;
                let solver = kappa_s(&d, &s, &cfg()).unwrap();
                if solver.value != kappa_s_bruteforce(&d, &s).unwrap() {
                    mismatches += 1;
                }
                if verify_packing(&d, &solver.witness).is_err()
                    || solver.witness.parts.len() != solver.value
                {
                    mismatches += 1;
                }
            }
        }
    }
    conclude(
        "1 (oracle equivalence)",
        mismatches == 0,
        &format!(
            "{checks} solver-vs-oracle checks ({order3_checks} on all 64 order-3 digraphs, rest on 200 random digraphs), {mismatches} mismatches"
        ),
    );
}

/// Criterion 2: on 200 seeded random strong digraphs (n <= 5,
/// k in {2, 3}) the value respects the minimum-degree bound always and
/// the connectivity bound whenever n >= kappa + k.
#[test]
fn criterion_2_degree_and_connectivity_bounds() {
    let mut violations = 0usize;
    let mut degree_checks = 0usize;
    let mut connectivity_checks = 0usize;
    for i in 0..200u64 {
        let n = 3 + (i % 3) as usize;
        let p = [0.3, 0.4, 0.5, 0.6][(i % 4) as usize];
        let d = random_strong_digraph(n, p, 52_000 + i).unwrap();
        let (dp, dm) = d.min_degrees();
        let (vc, cert) = vertex_connectivity(&d);
        if !cert.verifies(&d) {
            violations += 1;
        }
        for k in 2..=3usize.min(n) {
            let value = kappa_k(&d, k, &cfg()).unwrap().value;
            degree_checks += 1;
            if value > dp.min(dm) {
                violations += 1;
            }
            if n >= vc + k {
                connectivity_checks += 1;
                if value > vc {
                    violations += 1;
                }
            }
        }
    }
    conclude(
        "2 (degree and connectivity bounds)",
        violations == 0,
        &format!(
            "200 digraphs, {degree_checks} degree checks, {connectivity_checks} connectivity checks, {violations} violations"
        ),
    );
}

/// Criterion 3: the symmetric join of a 2-clique with 4 independent
/// vertices has kappa_2 = kappa = 2, and the explicit witness packing
/// verifies for all 15 terminal pairs. Exact equality.
#[test]
fn criterion_3_join_sharpness() {
    let join = symmetric_join(2, 6).unwrap();
    let vc = vertex_connectivity(&join).0;
    let v2 = kappa_k(&join, 2, &cfg()).unwrap().value;
    let mut verified_pairs = 0usize;
    for pair in (0..6).combinations(2) {
        let s = VertexSet::new(pair).unwrap();
        let packing = join_witness_packing(2, 6, &s).unwrap();
        if packing.parts.len() == 2 && verify_packing(&join, &packing).is_ok() {
            verified_pairs += 1;
        }
    }
    conclude(
        "3 (join sharpness)",
        v2 == 2 && vc == 2 && verified_pairs == 15,
        &format!(
            "kappa_2 = {v2}, kappa = {vc}, witness packings verified for {verified_pairs}/15 pairs"
        ),
    );
}

/// Criterion 4: Hamiltonian decompositions are found and verified for
/// n in {5, 7, 8} and exhaustively refuted for n in {4, 6}.
#[test]
fn criterion_4_decompositions_at_desk_scale() {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [5usize, 7, 8] {
        let started = std::time::Instant::now();
        match hamiltonian_decomposition(n).unwrap() {
            Some(d) if d.validate().is_ok() => {
                notes.push(format!("n={n}: found in {:?}", started.elapsed()))
            }
            _ => {
                ok = false;
                notes.push(format!("n={n}: missing or invalid"));
            }
        }
    }
    for n in [4usize, 6] {
        if hamiltonian_decomposition(n).unwrap().is_some() {
            ok = false;
            notes.push(format!("n={n}: unexpectedly found"));
        } else {
            notes.push(format!("n={n}: refuted"));
        }
    }
    conclude("4 (decompositions)", ok, &notes.join(", "));
}

/// Criterion 5: the all-digraphs table at (4, 2, 2) gives f = 8 and
/// F = 9, and the characterization biconditional holds over the full
/// complement-constrained space at n = 5.
#[test]
fn criterion_5_characterization_values() {
    let cache = KappaCache::new();
    let table = compute_f_f_upper(4, 2, 2, SearchSpace::AllDigraphs, 0, &cfg(), &cache).unwrap();
    let report = verify_characterization(5, &cfg(), &cache).unwrap();
    conclude(
        "5 (characterization at small orders)",
        table.f == Some(8) && table.big_f == Some(9) && report.holds,
        &format!(
            "f(4,2,2) = {:?} (want 8), F(4,2,2) = {:?} (want 9); n=5 biconditional over {} deletion sets: {} mismatches",
            table.f, table.big_f, report.total_deletion_sets, report.mismatches
        ),
    );
}

/// Criterion 6: among 3-arc deletion classes at n = 5, exactly one has
/// kappa_2 = 3 and is minimal (the directed 3-cycle), exactly two have
/// kappa_2 <= 2, and every remaining class has kappa_2 = 3 without
/// minimality.
#[test]
fn criterion_6_three_arc_classification() {
    let cache = KappaCache::new();
    let classes = classify_three_arc_deletions(5, &cfg(), &cache).unwrap();
    let minimal: Vec<_> = classes.iter().filter(|c| c.minimal).collect();
    let low: Vec<_> = classes.iter().filter(|c| c.kappa_2 <= 2).collect();
    let rest_ok = classes
        .iter()
        .filter(|c| !c.minimal && c.kappa_2 > 2)
        .all(|c| c.kappa_2 == 3);
    let minimal_is_triangle = minimal.len() == 1
        && minimal[0].kappa_2 == 3
        && characterization_predicate(5, &minimal[0].representative).unwrap();
    conclude(
        "6 (three-arc classification)",
        minimal_is_triangle && low.len() == 2 && rest_ok && low.iter().all(|c| !c.minimal),
        &format!(
            "{} classes: {} minimal (3-cycle: {}), {} with kappa_2 <= 2, remainder at kappa_2 = 3 non-minimal: {}",
            classes.len(),
            minimal.len(),
            minimal_is_triangle,
            low.len(),
            rest_ok
        ),
    );
}

/// Criterion 7: f >= n * ell in every computed table; the union of ell
/// Hamiltonian cycles at order 5 has kappa_5 exactly ell; f(5,5,2) is
/// the lower bound 10; and the directed cycle realizes f(n, 2, 1) at
/// n in {4, 5, 6}.
#[test]
fn criterion_7_lower_bound_and_attainment() {
    let cache = KappaCache::new();
    let mut ok = true;
    let mut notes = Vec::new();

    let mut tables = vec![
        compute_f_f_upper(4, 2, 2, SearchSpace::AllDigraphs, 0, &cfg(), &cache).unwrap(),
        compute_f_f_upper(
            5,
            5,
            2,
            SearchSpace::ComplementConstrained,
            0,
            &cfg(),
            &cache,
        )
        .unwrap(),
    ];
    for n in [4usize, 5, 6] {
        tables.push(
            compute_f_f_upper(
                n,
                2,
                1,
                SearchSpace::SampledPlusFamilies,
                17,
                &cfg(),
                &cache,
            )
            .unwrap(),
        );
    }
    for t in &tables {
        if t.f.is_some_and(|f| f < t.n * t.ell) {
            ok = false;
            notes.push(format!(
                "f below n*ell at (n={}, k={}, ell={})",
                t.n, t.k, t.ell
            ));
        }
    }

    if tables[1].f != Some(10) {
        ok = false;
    }
    notes.push(format!("f(5,5,2) = {}", tables[1].f.unwrap_or(0)));

    for (i, n) in [4usize, 5, 6].iter().enumerate() {
        let t = &tables[2 + i];
        let cycle_found = t.f == Some(*n)
            && t.ex
                .iter()
                .any(|d| is_isomorphic(d, &directed_cycle(*n).unwrap()).is_some());
        if !cycle_found {
            ok = false;
        }
        notes.push(format!(
            "f({n},2,1) = {} via cycle: {cycle_found}",
            t.f.unwrap_or(0)
        ));
    }

    for ell in 2..=4usize {
        let d = union_of_ham_cycles(5, ell).unwrap();
        let v = kappa_k(&d, 5, &cfg()).unwrap().value;
        if v != ell {
            ok = false;
        }
        notes.push(format!("kappa_5(union(5,{ell})) = {v}"));
    }
    conclude("7 (lower bound f >= n*ell)", ok, &notes.join("; "));
}

/// Criterion 8: F(5, 2, 1) = 8 with extremal members exactly the
/// bioriented trees, and every minimally (4, 2)-connected digraph at
/// n = 4 stays within 2 * ell * (n - 1) = 12 arcs.
#[test]
fn criterion_8_upper_bounds() {
    let cache = KappaCache::new();
    let r51 = check_f_upper_bounds(5, 1, &cfg(), &cache).unwrap();
    let tree = r51.tree_report.as_ref().unwrap();
    let r42 = check_f_upper_bounds(4, 2, &cfg(), &cache).unwrap();
    conclude(
        "8 (arc-count upper bounds)",
        r51.max_arcs == Some(8)
            && tree.all_symmetric_trees
            && tree.reverified
            && r42.all_within_bound,
        &format!(
            "F(5,2,1) = {} with {} tree classes (all symmetric trees: {}); n=4, ell=2: max {} of bound {} over {} members",
            r51.max_arcs.unwrap_or(0),
            tree.max_classes.len(),
            tree.all_symmetric_trees,
            r42.max_arcs.unwrap_or(0),
            r42.bound,
            r42.members_found
        ),
    );
}

/// Criterion 9: kappa_2 of the complete digraph is n - 1 for
/// n in {3, 4, 5}, while kappa_4 at n = 4 drops to 2.
#[test]
fn criterion_9_complete_digraph_boundary() {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [3usize, 4, 5] {
        let v = kappa_k(&complete_digraph(n).unwrap(), 2, &cfg())
            .unwrap()
            .value;
        if v != n - 1 {
            ok = false;
        }
        notes.push(format!("kappa_2(K{n}) = {v}"));
    }
    let v44 = kappa_k(&complete_digraph(4).unwrap(), 4, &cfg())
        .unwrap()
        .value;
    if v44 != 2 {
        ok = false;
    }
    notes.push(format!("kappa_4(K4) = {v44} (below n-1 = 3)"));
    conclude("9 (complete digraph boundary)", ok, &notes.join(", "));
}

/// Criterion 10: documented commands produce byte-identical output
/// under --jobs 1 and --jobs 4.
#[test]
fn criterion_10_output_determinism() {
    let bin = env!("CARGO_BIN_EXE_strongsub");
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.dg");
    std::fs::write(&graph, complete_minus_3cycle(4).unwrap().to_dg_string()).unwrap();
    let join_file = dir.path().join("join.dg");
    std::fs::write(&join_file, symmetric_join(2, 6).unwrap().to_dg_string()).unwrap();
    let graph = graph.to_str().unwrap();
    let join_file = join_file.to_str().unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec!["kappa-k", graph, "--k", "2", "--format", "json"],
        vec!["kappa-s", graph, "--s", "0,1", "--format", "json"],
        vec![
            "min-check",
            graph,
            "--k",
            "2",
            "--ell",
            "2",
            "--format",
            "json",
        ],
        vec!["kappa", join_file, "--format", "json"],
        vec!["ham-decomp", "5", "--format", "json"],
        vec!["gen", "union-ham-cycles", "--n", "5", "--ell", "2"],
        vec![
            "extremal", "--n", "4", "--k", "2", "--ell", "2", "--space", "all", "--format", "json",
        ],
        vec!["classify", "--n", "5", "--format", "json"],
        vec!["verify", "eq1", "--format", "json"],
        vec!["verify", "thme", "--format", "json"],
    ];

    let mut ok = true;
    let mut notes = Vec::new();
    for case in &cases {
        let run = |jobs: &str| {
            let out = Command::new(bin)
                .args(case)
                .args(["--jobs", jobs, "--seed", "1729"])
                .output()
                .expect("binary runs");
            assert!(
                out.status.success(),
                "command {:?} failed: {}",
                case,
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let one = run("1");
        let four = run("4");
        if one != four {
            ok = false;
            notes.push(format!("{case:?} differs between --jobs 1 and --jobs 4"));
        }
    }
    if notes.is_empty() {
        notes.push(format!(
            "{} commands byte-identical across --jobs 1 and 4",
            cases.len()
        ));
    }
    conclude("10 (output determinism)", ok, &notes.join("; "));
}
