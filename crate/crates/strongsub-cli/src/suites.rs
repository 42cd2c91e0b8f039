//! Named verification suites: each runs a bundle of checks at desk
//! scale and reports one pass/fail line per check. All randomness is
//! seeded, so a suite's output is reproducible byte for byte.

use itertools::Itertools as _;
use serde::Serialize;

use strongsub::*;

use crate::CliError;

#[derive(Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Harness {
    checks: Vec<Check>,
}

impl Harness {
    fn new() -> Self {
        Harness { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    fn finish(self, suite: &str) -> SuiteOutcome {
        let passed = self.checks.iter().all(|c| c.pass);
        SuiteOutcome {
            suite: suite.to_string(),
            checks: self.checks,
            passed,
        }
    }
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub fn run_suite(
    suite: &str,
    n_override: Option<usize>,
    seed: u64,
    cfg: &SolverConfig,
) -> Result<SuiteOutcome, CliError> {
    let result = match suite {
        "eq1" => suite_eq1(seed, cfg),
        "thm03" => suite_thm03(seed, cfg),
        "thmb" => suite_thmb(seed, cfg),
        "tillson" => suite_tillson(),
        "thm02" => suite_thm02(seed, cfg),
        "lem1" => suite_lem1(seed, cfg),
        "thmc" => suite_thmc(seed, cfg),
        "thme" => suite_thme(n_override, cfg),
        "thma" => suite_thma(seed, cfg),
        "fprop" => suite_fprop(cfg),
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; suites: eq1 thm03 thmb tillson thm02 lem1 thmc thme thma fprop"
            )))
        }
    };
    result.map_err(crate::lab_error)
}

/// Seeded corpus of strong digraphs with 3 to 5 vertices.
fn strong_corpus(seed: u64, count: usize) -> Vec<Digraph> {
    let mut out = Vec::with_capacity(count);
    let probabilities = [0.3, 0.4, 0.5, 0.6];
    for i in 0..count as u64 {
        let n = 3 + (i % 3) as usize;
        let p = probabilities[(i % 4) as usize];
        out.push(random_strong_digraph(n, p, seed.wrapping_add(i)).expect("sampling gives up"));
    }
    out
}

/// Degree upper bound over a seeded random sweep.
fn suite_eq1(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    let corpus = strong_corpus(seed, 200);
    let mut violations = 0usize;
    let mut tested = 0usize;
    for d in &corpus {
        let (dp, dm) = d.min_degrees();
        for k in 2..=3usize.min(d.order()) {
            let value = kappa_k(d, k, cfg)?.value;
            tested += 1;
            if value > dp.min(dm) {
                violations += 1;
            }
        }
    }
    h.check(
        "degree-upper-bound",
        violations == 0,
        format!(
            "{} digraphs, {} (digraph, k) pairs, {} violations",
            corpus.len(),
            tested,
            violations
        ),
    );
    // Tightness witness: the complete digraph meets the bound.
    let k4 = complete_digraph(4).unwrap();
    let v = kappa_k(&k4, 2, cfg)?.value;
    h.check(
        "bound-tight-on-complete",
        v == 3,
        format!("kappa_2 of the complete digraph on 4 vertices = {v}"),
    );
    Ok(h.finish("eq1"))
}

/// Value range for strong digraphs and the top-value characterization.
fn suite_thm03(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    for n in [3usize, 4, 5] {
        let v = kappa_k(&complete_digraph(n).unwrap(), 2, cfg)?.value;
        h.check(
            &format!("complete-top-n{n}"),
            v == n - 1,
            format!("kappa_2 = {v}, expected {}", n - 1),
        );
    }
    let v = kappa_k(&complete_digraph(4).unwrap(), 4, cfg)?.value;
    h.check(
        "k4-exclusion",
        v == 2,
        format!("kappa_4 of the complete digraph on 4 vertices = {v}, below 3"),
    );

    let mut range_ok = true;
    let mut top_ok = true;
    let corpus = strong_corpus(seed, 60);
    for d in &corpus {
        let n = d.order();
        for k in 2..=n {
            let value = kappa_k(d, k, cfg)?.value;
            if value < 1 || value > n - 1 {
                range_ok = false;
            }
            if value == n - 1 && (d.arc_count() != n * (n - 1) || k == 4 || k == 6) {
                top_ok = false;
            }
        }
    }
    h.check(
        "range-on-strong",
        range_ok,
        format!("1 <= kappa_k <= n-1 over {} digraphs, all k", corpus.len()),
    );
    h.check(
        "top-only-complete",
        top_ok,
        "value n-1 only on complete digraphs with k outside {4, 6}".into(),
    );
    Ok(h.finish("thm03"))
}

/// Connectivity upper bound and its sharpness on the symmetric join.
fn suite_thmb(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    let corpus = strong_corpus(seed, 200);
    let mut violations = 0usize;
    let mut applicable = 0usize;
    for d in &corpus {
        let (vc, cert) = vertex_connectivity(d);
        if !cert.verifies(d) {
            violations += 1;
            continue;
        }
        for k in 2..=3usize.min(d.order()) {
            if d.order() >= vc + k {
                applicable += 1;
                if kappa_k(d, k, cfg)?.value > vc {
                    violations += 1;
                }
            }
        }
    }
    h.check(
        "connectivity-upper-bound",
        violations == 0,
        format!(
            "{} digraphs, {} applicable (digraph, k) pairs, {} violations",
            corpus.len(),
            applicable,
            violations
        ),
    );

    let join = symmetric_join(2, 6).unwrap();
    let vc = vertex_connectivity(&join).0;
    let v2 = kappa_k(&join, 2, cfg)?.value;
    h.check(
        "join-2-6-sharp",
        vc == 2 && v2 == 2,
        format!("kappa = {vc}, kappa_2 = {v2}, both should be 2"),
    );
    let mut witnesses_ok = 0usize;
    for pair in (0..6).combinations(2) {
        let s = VertexSet::new(pair).unwrap();
        let packing = join_witness_packing(2, 6, &s).expect("valid parameters");
        if verify_packing(&join, &packing).is_ok() && packing.parts.len() == 2 {
            witnesses_ok += 1;
        }
    }
    h.check(
        "join-2-6-witnesses",
        witnesses_ok == 15,
        format!("{witnesses_ok}/15 terminal pairs carry a verified 2-packing"),
    );

    // Larger join: the witness packings certify the lower bound at
    // every terminal set, the degree bound the upper one.
    let join39 = symmetric_join(3, 9).unwrap();
    let vc = vertex_connectivity(&join39).0;
    let mut all_verified = true;
    for triple in (0..9).combinations(3) {
        let s = VertexSet::new(triple).unwrap();
        let packing = join_witness_packing(3, 9, &s).expect("valid parameters");
        if verify_packing(&join39, &packing).is_err() || packing.parts.len() != 3 {
            all_verified = false;
        }
    }
    h.check(
        "join-3-9-sharp",
        vc == 3 && join39.min_degrees() == (3, 3) && all_verified,
        format!(
            "kappa = {vc}, min degrees {:?}, witness packings at all 84 triples: {all_verified}",
            join39.min_degrees()
        ),
    );
    Ok(h.finish("thmb"))
}

/// Hamiltonian decompositions exist exactly away from orders 4 and 6.
fn suite_tillson() -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    for n in 2..=8usize {
        let found = hamiltonian_decomposition(n).expect("order within cap");
        let expected = n != 4 && n != 6;
        let ok = found.is_some() == expected && found.as_ref().is_none_or(|d| d.validate().is_ok());
        let what = match &found {
            Some(d) => format!(
                "{} verified arc-disjoint Hamiltonian cycles",
                d.cycles.len()
            ),
            None => "no decomposition (exhaustive search)".to_string(),
        };
        h.check(&format!("order-{n}"), ok, what);
    }
    Ok(h.finish("tillson"))
}

/// Monotonicity under strong spanning subgraphs.
fn suite_thm02(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    use rand::{Rng, SeedableRng};
    let mut h = Harness::new();
    let corpus = strong_corpus(seed, 60);
    let mut violations = 0usize;
    let mut pairs = 0usize;
    for (i, d) in corpus.iter().enumerate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let mut sub = d.clone();
        for arc in d.arcs().collect::<Vec<_>>() {
            if rng.random_bool(0.5) {
                let trial = sub.delete_arcs(&[arc]).unwrap();
                if is_strong(&trial) {
                    sub = trial;
                }
            }
        }
        for k in 2..=3usize.min(d.order()) {
            pairs += 1;
            if kappa_k(&sub, k, cfg)?.value > kappa_k(d, k, cfg)?.value {
                violations += 1;
            }
        }
    }
    h.check(
        "spanning-monotonicity",
        violations == 0,
        format!("{pairs} (digraph, spanning subgraph, k) triples, {violations} violations"),
    );
    Ok(h.finish("thm02"))
}

/// The minimality report agrees with the definition on families and
/// random digraphs.
fn suite_lem1(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    for n in [3usize, 4, 5] {
        let c = directed_cycle(n).unwrap();
        let r = is_minimally_connected(&c, 2, 1, cfg)?;
        h.check(
            &format!("cycle-minimal-n{n}"),
            matches!(r.verdict, MinimalityVerdict::Minimal),
            format!("verdict {:?}", r.verdict),
        );
    }
    let k5 = complete_digraph(5).unwrap();
    let r = is_minimally_connected(&k5, 2, 4, cfg)?;
    h.check(
        "complete-5-minimal-at-4",
        matches!(r.verdict, MinimalityVerdict::Minimal) && r.per_arc.iter().all(|p| p.kappa == 3),
        format!(
            "verdict {:?}, every deletion lands on 3: {}",
            r.verdict,
            r.per_arc.iter().all(|p| p.kappa == 3)
        ),
    );
    let r = is_minimally_connected(&k5, 2, 3, cfg)?;
    h.check(
        "complete-5-not-minimal-at-3",
        matches!(r.verdict, MinimalityVerdict::SomeArcKeepsKappa),
        format!("verdict {:?}", r.verdict),
    );

    // On random strong digraphs the verdict at ell = kappa_2 matches
    // the per-arc definition, and every deletion drops the value by
    // exactly one when minimal.
    let corpus = strong_corpus(seed, 24);
    let mut consistent = true;
    for d in &corpus {
        let base = kappa_k(d, 2, cfg)?.value;
        let r = is_minimally_connected(d, 2, base, cfg)?;
        let by_definition = r.per_arc.iter().all(|p| p.kappa < base);
        if matches!(r.verdict, MinimalityVerdict::Minimal) != by_definition {
            consistent = false;
        }
        if by_definition && !r.per_arc.iter().all(|p| p.kappa == base - 1) {
            consistent = false;
        }
    }
    h.check(
        "definition-equivalence-on-samples",
        consistent,
        format!("{} random digraphs at ell = kappa_2", corpus.len()),
    );
    Ok(h.finish("lem1"))
}

/// Level-1 minimality coincides with minimal strongness; the top level
/// is reached exactly by complete digraphs (k outside {4, 6}).
fn suite_thmc(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    use rand::{Rng, SeedableRng};
    let mut h = Harness::new();

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut strong_iff = true;
    for _ in 0..40 {
        let n = 3 + rng.random_range(0..3usize);
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(0.4) {
                    arcs.push((u, v));
                }
            }
        }
        let d = Digraph::from_arc_list(n, &arcs).unwrap();
        for k in 2..=3usize.min(n) {
            if (kappa_k(&d, k, cfg)?.value >= 1) != is_strong(&d) {
                strong_iff = false;
            }
        }
    }
    h.check(
        "positive-value-iff-strong",
        strong_iff,
        "40 mixed digraphs, k in {2, 3}".into(),
    );

    let mut corpus = strong_corpus(seed, 16);
    corpus.push(directed_cycle(5).unwrap());
    corpus.push(symmetric_tree(5, TreeShape::Path, 0).unwrap());
    corpus.push(symmetric_tree(5, TreeShape::Star, 0).unwrap());
    corpus.push(complete_digraph(4).unwrap());
    let mut level1_equiv = true;
    for d in &corpus {
        let by_strongness = is_minimally_strong(d);
        for k in 2..=3usize.min(d.order()) {
            let r = is_minimally_connected(d, k, 1, cfg)?;
            if matches!(r.verdict, MinimalityVerdict::Minimal) != by_strongness {
                level1_equiv = false;
            }
        }
    }
    h.check(
        "level-1-is-minimal-strongness",
        level1_equiv,
        format!("{} digraphs, k in {{2, 3}}", corpus.len()),
    );

    let cache = KappaCache::new();
    let mut top_ok = true;
    let mut detail = Vec::new();
    for (n, k) in [(3usize, 2usize), (3, 3), (4, 2), (4, 3), (5, 2), (5, 5)] {
        let table = compute_f_f_upper(
            n,
            k,
            n - 1,
            SearchSpace::ComplementConstrained,
            0,
            cfg,
            &cache,
        )?;
        let only_complete = table.total_minimal == 1
            && table.ex.len() == 1
            && table.ex[0].arc_count() == n * (n - 1);
        if !only_complete {
            top_ok = false;
        }
        detail.push(format!("(n={n}, k={k}): {}", table.total_minimal));
    }
    let table44 = compute_f_f_upper(4, 4, 3, SearchSpace::ComplementConstrained, 0, cfg, &cache)?;
    let empty_at_excluded_k = table44.total_minimal == 0 && table44.f.is_none();
    h.check(
        "top-level-only-complete",
        top_ok,
        format!("minimal members at level n-1: {}", detail.join(", ")),
    );
    h.check(
        "top-level-empty-at-k4",
        empty_at_excluded_k,
        format!(
            "(n=4, k=4, ell=3) has {} minimal members",
            table44.total_minimal
        ),
    );
    Ok(h.finish("thmc"))
}

/// Characterization of minimally (2, n-2)-connected digraphs,
/// exhaustively at the given order (default 5, plus a recorded run at
/// 4).
fn suite_thme(n_override: Option<usize>, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    let orders: Vec<usize> = match n_override {
        Some(n) => vec![n],
        None => vec![4, 5],
    };
    for n in orders {
        let cache = KappaCache::new();
        let report = verify_characterization(n, cfg, &cache)?;
        let must_hold = n >= 5;
        h.check(
            &format!("biconditional-n{n}"),
            !must_hold || report.holds,
            format!(
                "{} deletion sets in {} classes, {} mismatches{}",
                report.total_deletion_sets,
                report.classes.len(),
                report.mismatches,
                if must_hold {
                    ""
                } else {
                    if report.holds {
                        " (recorded: holds)"
                    } else {
                        " (recorded: deviates)"
                    }
                }
            ),
        );
        // Per-class verdicts against the structural predicate. Below
        // order 5 the outcome is recorded data, not an assertion.
        for (idx, class) in report.classes.iter().enumerate() {
            h.check(
                &format!("n{n}-class-{idx:02}"),
                !must_hold || class.matches,
                format!(
                    "delete {:?} x{}: kappa_2 = {}, minimal = {}, predicate = {}, match = {}",
                    class.representative,
                    class.count,
                    class.kappa_2,
                    class.minimal,
                    class.predicate,
                    class.matches
                ),
            );
        }
        // Deleting one or two arcs never produces a minimal digraph.
        let tiny_all_nonminimal = report
            .classes
            .iter()
            .filter(|c| !c.representative.is_empty() && c.representative.len() <= 2)
            .all(|c| !c.minimal);
        h.check(
            &format!("small-deletions-nonminimal-n{n}"),
            tiny_all_nonminimal,
            "no deletion set of size 1 or 2 yields a minimal digraph".into(),
        );
        // Extremal arc counts read off the minimal classes.
        let minimal_sizes: Vec<usize> = report
            .classes
            .iter()
            .filter(|c| c.minimal)
            .map(|c| c.representative.len())
            .collect();
        if let (Some(&max_m), Some(&min_m)) =
            (minimal_sizes.iter().max(), minimal_sizes.iter().min())
        {
            let f = n * (n - 1) - max_m;
            let big_f = n * (n - 1) - min_m;
            let f_expected = n * (n - 1) - 2 * (n / 2);
            let big_f_expected = n * (n - 1) - 3;
            h.check(
                &format!("arc-counts-n{n}"),
                f == f_expected && big_f == big_f_expected,
                format!("f = {f} (expected {f_expected}), F = {big_f} (expected {big_f_expected})"),
            );
        }
    }
    Ok(h.finish("thme"))
}

/// Lower bound f >= n * ell and the families attaining it.
fn suite_thma(seed: u64, cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    let cache = KappaCache::new();

    let mut tables = Vec::new();
    tables.push(compute_f_f_upper(
        4,
        2,
        2,
        SearchSpace::AllDigraphs,
        seed,
        cfg,
        &cache,
    )?);
    tables.push(compute_f_f_upper(
        5,
        5,
        2,
        SearchSpace::ComplementConstrained,
        seed,
        cfg,
        &cache,
    )?);
    for n in [4usize, 5, 6] {
        tables.push(compute_f_f_upper(
            n,
            2,
            1,
            SearchSpace::SampledPlusFamilies,
            seed,
            cfg,
            &cache,
        )?);
    }
    let bound_ok = tables.iter().all(|t| t.f.is_none_or(|f| f >= t.n * t.ell));
    h.check(
        "f-at-least-n-ell",
        bound_ok,
        format!("{} computed tables", tables.len()),
    );

    let t552 = &tables[1];
    h.check(
        "f-5-5-2",
        t552.f == Some(10) && t552.f_exact,
        format!("f(5,5,2) = {}, lower bound 10 attained", fmt_opt(t552.f)),
    );

    for (i, n) in [4usize, 5, 6].iter().enumerate() {
        let t = &tables[2 + i];
        let cycle_attains = t.f == Some(*n)
            && t.ex
                .iter()
                .any(|d| is_isomorphic(d, &directed_cycle(*n).unwrap()).is_some());
        h.check(
            &format!("f-n-2-1-cycle-n{n}"),
            cycle_attains && t.f_exact,
            format!("f = {}, directed cycle among the minima", fmt_opt(t.f)),
        );
    }

    let mut union_ok = true;
    let mut values = Vec::new();
    for ell in 2..=4usize {
        let d = union_of_ham_cycles(5, ell).expect("order 5 decomposes");
        let v = kappa_k(&d, 5, cfg)?.value;
        values.push(format!("ell={ell}: {v}"));
        if v != ell {
            union_ok = false;
        }
        // Deleting any arc drops a degree below ell.
        for arc in d.arcs().collect::<Vec<_>>() {
            let (dp, dm) = d.delete_arcs(&[arc]).unwrap().min_degrees();
            if dp.min(dm) + 1 != ell {
                union_ok = false;
            }
        }
    }
    h.check(
        "union-of-cycles-value",
        union_ok,
        format!("kappa_5 of cycle unions at order 5: {}", values.join(", ")),
    );
    Ok(h.finish("thma"))
}

/// Arc-count upper bounds and the tree characterization at level 1.
fn suite_fprop(cfg: &SolverConfig) -> Result<SuiteOutcome, LabError> {
    let mut h = Harness::new();
    let cache = KappaCache::new();

    let r51 = check_f_upper_bounds(5, 1, cfg, &cache)?;
    let tree51 = r51.tree_report.as_ref().expect("level 1 reports trees");
    h.check(
        "level1-n5",
        r51.max_arcs == Some(8) && tree51.all_symmetric_trees && tree51.reverified,
        format!(
            "F = {} over {} minimally strong digraphs; {} extremal classes, all bioriented trees",
            fmt_opt(r51.max_arcs),
            r51.members_found,
            tree51.max_classes.len()
        ),
    );

    let r41 = check_f_upper_bounds(4, 1, cfg, &cache)?;
    let tree41 = r41.tree_report.as_ref().unwrap();
    h.check(
        "level1-n4",
        r41.max_arcs == Some(6) && tree41.max_classes.len() == 2 && tree41.all_symmetric_trees,
        format!(
            "F = {}, extremal classes = {} (path and star)",
            fmt_opt(r41.max_arcs),
            tree41.max_classes.len()
        ),
    );

    let r42 = check_f_upper_bounds(4, 2, cfg, &cache)?;
    h.check(
        "level2-n4-bound",
        r42.all_within_bound,
        format!(
            "max arcs {} within 2*ell*(n-1) = {} over {} members",
            fmt_opt(r42.max_arcs),
            r42.bound,
            r42.members_found
        ),
    );

    let r52 = check_f_upper_bounds(5, 2, cfg, &cache)?;
    h.check(
        "level2-n5-bound",
        r52.all_within_bound,
        format!(
            "max arcs {} within 2*ell*(n-1) = {} over {} members",
            fmt_opt(r52.max_arcs),
            r52.bound,
            r52.members_found
        ),
    );
    Ok(h.finish("fprop"))
}
