//! Minimality testing, exhaustive verification of the structure of
//! minimally connected digraphs at small orders, classification of
//! small deletion sets, and extremal arc-count tables.

use dashmap::DashMap;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::connectivity::is_minimally_strong;
use crate::digraph::{canonical_form, canonical_key, Digraph, GraphError, VertexSet};
use crate::generators::{
    complete_digraph, complete_minus_2cycle_matching, complete_minus_3cycle, directed_cycle,
    random_strong_digraph, symmetric_join, symmetric_tree, union_of_ham_cycles, TreeShape,
};
use crate::packing::{
    enumerate_candidates, kappa_k, kappa_k_after_deletions, SolverConfig, SolverError,
};

/// An arc set slated for deletion from the complete digraph.
pub type DeletionSet = Vec<(usize, usize)>;

/// Guard on the number of digraphs an exhaustive sweep may enumerate.
pub const SWEEP_CAP: usize = 600_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("search space {space} is infeasible here (n = {n}, cap {cap}); use the sampled space")]
    Scale {
        space: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("level ell must be at least 1")]
    LevelTooSmall,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl From<GraphError> for LabError {
    fn from(e: GraphError) -> Self {
        LabError::Solver(SolverError::Graph(e))
    }
}

/// Cache of exact `kappa_k` values keyed by canonical form, shared by
/// the exhaustive sweeps (isomorphic digraphs are solved once).
#[derive(Default)]
pub struct KappaCache {
    inner: DashMap<(u8, u64, u8), u32>,
}

impl KappaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn kappa_k(&self, d: &Digraph, k: usize, cfg: &SolverConfig) -> Result<usize, LabError> {
        let key = (d.order() as u8, canonical_key(d)?, k as u8);
        if let Some(hit) = self.inner.get(&key) {
            return Ok(*hit as usize);
        }
        let value = kappa_k(d, k, cfg)?.value;
        self.inner.insert(key, value as u32);
        Ok(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalityVerdict {
    Minimal,
    KappaTooLow,
    SomeArcKeepsKappa,
}

/// Verdict of the minimality test for `(k, ell)`, with every single-arc
/// deletion value listed.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalityReport {
    pub k: usize,
    pub ell: usize,
    pub kappa_k_value: usize,
    pub per_arc: Vec<PerArcKappa>,
    pub verdict: MinimalityVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerArcKappa {
    pub arc: (usize, usize),
    pub kappa: usize,
}

/// Tests whether `d` is minimally strong subgraph `(k, ell)`-connected:
/// `kappa_k(d) >= ell` while every single-arc deletion drops the value
/// to `ell - 1` or below.
///
/// Both that definition and its exact-value counterpart
/// (`kappa_k(d) == ell` and every deletion lands exactly on `ell - 1`)
/// are evaluated and asserted equal; a disagreement would falsify the
/// counting argument behind the equivalence, so it aborts loudly.
pub fn is_minimally_connected(
    d: &Digraph,
    k: usize,
    ell: usize,
    cfg: &SolverConfig,
) -> Result<MinimalityReport, SolverError> {
    if ell == 0 {
        return Err(SolverError::LevelTooSmall);
    }
    let kappa_value = kappa_k(d, k, cfg)?.value;
    let per_arc_map = kappa_k_after_deletions(d, k, cfg)?;
    let per_arc: Vec<PerArcKappa> = per_arc_map
        .iter()
        .map(|(&arc, &kappa)| PerArcKappa { arc, kappa })
        .collect();

    let definition_form = kappa_value >= ell && per_arc.iter().all(|p| p.kappa < ell);
    let exact_form = kappa_value == ell && per_arc.iter().all(|p| p.kappa == ell - 1);
    assert_eq!(
        definition_form, exact_form,
        "minimality characterizations disagree for k={k}, ell={ell} on {:?}",
        d
    );

    let verdict = if kappa_value < ell {
        MinimalityVerdict::KappaTooLow
    } else if per_arc.iter().any(|p| p.kappa >= ell) {
        MinimalityVerdict::SomeArcKeepsKappa
    } else {
        MinimalityVerdict::Minimal
    };
    Ok(MinimalityReport {
        k,
        ell,
        kappa_k_value: kappa_value,
        per_arc,
        verdict,
    })
}

/// Cache-backed minimality test used by the sweeps; evaluates the
/// definition directly with early exits.
pub fn is_minimally_connected_cached(
    d: &Digraph,
    k: usize,
    ell: usize,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<bool, LabError> {
    if ell == 0 {
        return Err(LabError::LevelTooSmall);
    }
    if cache.kappa_k(d, k, cfg)? < ell {
        return Ok(false);
    }
    for arc in d.arcs().collect::<Vec<_>>() {
        let deleted = d.delete_arcs(&[arc])?;
        if cache.kappa_k(&deleted, k, cfg)? >= ell {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the arcs of `m` form a directed 3-cycle or exactly
/// `floor(n/2)` vertex-disjoint 2-cycles inside the complete digraph on
/// `n` vertices.
pub fn characterization_predicate(n: usize, m: &[(usize, usize)]) -> Result<bool, GraphError> {
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v) in m {
        if u >= n {
            return Err(GraphError::VertexOutOfRange { v: u, n });
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange { v, n });
        }
        if u == v {
            return Err(GraphError::LoopArc(u));
        }
        if !seen.insert((u, v)) {
            return Err(GraphError::DuplicateArc(u, v));
        }
    }
    Ok(is_directed_triangle(m) || is_two_cycle_matching(m, n))
}

fn is_directed_triangle(m: &[(usize, usize)]) -> bool {
    if m.len() != 3 {
        return false;
    }
    let mut verts: Vec<usize> = m.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != 3 {
        return false;
    }
    let (a, b, c) = (verts[0], verts[1], verts[2]);
    let has = |u, v| m.contains(&(u, v));
    (has(a, b) && has(b, c) && has(c, a)) || (has(a, c) && has(c, b) && has(b, a))
}

fn is_two_cycle_matching(m: &[(usize, usize)], n: usize) -> bool {
    if m.len() != 2 * (n / 2) {
        return false;
    }
    let mut touched = vec![false; n];
    let mut pairs = 0;
    for &(u, v) in m {
        if u < v {
            if !m.contains(&(v, u)) {
                return false;
            }
            if touched[u] || touched[v] {
                return false;
            }
            touched[u] = true;
            touched[v] = true;
            pairs += 1;
        } else if !m.contains(&(v, u)) {
            return false;
        }
    }
    pairs == n / 2
}

/// Enumerates every arc set over `n` labeled vertices whose in- and
/// out-degrees are all at most `dmax`, optionally restricted to an
/// exact size. Emission order is deterministic (lexicographic chains).
fn bounded_arc_sets(
    n: usize,
    dmax: usize,
    exact_size: Option<usize>,
    cap: usize,
) -> Result<Vec<Vec<(usize, usize)>>, LabError> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    let mut outdeg = vec![0usize; n];
    let mut indeg = vec![0usize; n];
    let mut current = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        pairs: &[(usize, usize)],
        from: usize,
        dmax: usize,
        exact_size: Option<usize>,
        cap: usize,
        outdeg: &mut Vec<usize>,
        indeg: &mut Vec<usize>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) -> Result<(), LabError> {
        if exact_size.is_none_or(|s| s == current.len()) {
            if out.len() >= cap {
                return Err(LabError::Scale {
                    space: "complement-constrained",
                    n: outdeg.len(),
                    cap,
                });
            }
            out.push(current.clone());
            if exact_size.is_some() {
                return Ok(());
            }
        }
        for i in from..pairs.len() {
            let (u, v) = pairs[i];
            if outdeg[u] >= dmax || indeg[v] >= dmax {
                continue;
            }
            if exact_size.is_some_and(|s| current.len() + (pairs.len() - i) < s) {
                break;
            }
            outdeg[u] += 1;
            indeg[v] += 1;
            current.push((u, v));
            rec(
                pairs,
                i + 1,
                dmax,
                exact_size,
                cap,
                outdeg,
                indeg,
                current,
                out,
            )?;
            current.pop();
            outdeg[u] -= 1;
            indeg[v] -= 1;
        }
        Ok(())
    }

    if dmax > 0 || exact_size.is_none_or(|s| s == 0) {
        rec(
            &pairs,
            0,
            dmax,
            exact_size,
            cap,
            &mut outdeg,
            &mut indeg,
            &mut current,
            &mut out,
        )?;
    }
    Ok(out)
}

/// One isomorphism class of deletion sets in the characterization
/// report.
#[derive(Debug, Clone, Serialize)]
pub struct CharClass {
    pub representative: Vec<(usize, usize)>,
    pub count: usize,
    pub kappa_2: usize,
    pub minimal: bool,
    pub predicate: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterizationReport {
    pub n: usize,
    pub ell: usize,
    pub total_deletion_sets: usize,
    pub classes: Vec<CharClass>,
    pub mismatches: usize,
    pub holds: bool,
}

/// Exhaustively verifies, at order `n`, that the digraphs obtained from
/// the complete digraph by deleting an arc set with all degrees at most
/// one are minimally `(2, n-2)`-connected exactly when the deleted set
/// is a directed 3-cycle or a perfect matching of 2-cycles.
///
/// Arc sets with a degree above one force `kappa_2 <= n - 3` through
/// the degree bound and fail the predicate as well, so the constrained
/// space decides the full statement. Minimality is evaluated once per
/// isomorphism class (both sides of the equivalence are invariant under
/// relabeling); the report lists per-class counts.
pub fn verify_characterization(
    n: usize,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<CharacterizationReport, LabError> {
    if n < 4 {
        return Err(LabError::Scale {
            space: "characterization",
            n,
            cap: 4,
        });
    }
    let ell = n - 2;
    let kn = complete_digraph(n).map_err(|_| LabError::Scale {
        space: "characterization",
        n,
        cap: 8,
    })?;
    let sets = bounded_arc_sets(n, 1, None, SWEEP_CAP)?;
    let total = sets.len();

    // Group deletion sets by the isomorphism class of the digraph they
    // induce on the full labeled vertex set.
    let keyed: Vec<(u64, Vec<(usize, usize)>)> = sets
        .into_par_iter()
        .map(|m| {
            let md = Digraph::from_arc_list(n, &m).expect("valid deletion set");
            Ok((canonical_key(&md)?, m))
        })
        .collect::<Result<_, GraphError>>()?;
    let mut groups: std::collections::BTreeMap<u64, Vec<Vec<(usize, usize)>>> =
        std::collections::BTreeMap::new();
    for (key, m) in keyed {
        groups.entry(key).or_default().push(m);
    }

    let entries: Vec<(u64, Vec<DeletionSet>)> = groups.into_iter().collect();
    let evaluated: Vec<Result<CharClass, LabError>> = entries
        .par_iter()
        .map(|(_, members)| {
            let representative = members.iter().min().unwrap().clone();
            let d = kn.delete_arcs(&representative)?;
            let kappa_2 = cache.kappa_k(&d, 2, cfg)?;
            let minimal = is_minimally_connected_cached(&d, 2, ell, cfg, cache)?;
            let mut matches = true;
            let mut predicate_rep = false;
            for m in members {
                let predicate = characterization_predicate(n, m)?;
                if m == &representative {
                    predicate_rep = predicate;
                }
                if predicate != minimal {
                    matches = false;
                }
            }
            Ok(CharClass {
                representative,
                count: members.len(),
                kappa_2,
                minimal,
                predicate: predicate_rep,
                matches,
            })
        })
        .collect();

    let mut classes = Vec::with_capacity(evaluated.len());
    for c in evaluated {
        classes.push(c?);
    }
    classes.sort_by(|a, b| {
        (a.representative.len(), &a.representative)
            .cmp(&(b.representative.len(), &b.representative))
    });
    let mismatches = classes.iter().filter(|c| !c.matches).map(|c| c.count).sum();
    Ok(CharacterizationReport {
        n,
        ell,
        total_deletion_sets: total,
        classes,
        mismatches,
        holds: mismatches == 0,
    })
}

/// One isomorphism class of 3-arc deletion sets without shared heads or
/// tails.
#[derive(Debug, Clone, Serialize)]
pub struct DeletionClass {
    pub representative: Vec<(usize, usize)>,
    /// Canonical arc list of the digraph induced by the deleted set.
    pub iso_signature: Vec<(usize, usize)>,
    pub count: usize,
    pub kappa_2: usize,
    pub minimal: bool,
}

/// Classifies, up to isomorphism, every 3-arc deletion set in which no
/// two arcs share a head or a tail: the value `kappa_2` of the
/// complement-deleted digraph and whether it is minimally
/// `(2, n-2)`-connected. This computed table is the ground truth for
/// which 3-arc patterns lower the value and which merely break
/// minimality.
pub fn classify_three_arc_deletions(
    n: usize,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<Vec<DeletionClass>, LabError> {
    if n < 4 {
        return Err(LabError::Scale {
            space: "three-arc classification",
            n,
            cap: 4,
        });
    }
    let ell = n - 2;
    let kn = complete_digraph(n).map_err(|_| LabError::Scale {
        space: "three-arc classification",
        n,
        cap: 8,
    })?;
    let sets = bounded_arc_sets(n, 1, Some(3), SWEEP_CAP)?;
    let mut groups: std::collections::BTreeMap<u64, Vec<Vec<(usize, usize)>>> =
        std::collections::BTreeMap::new();
    for m in sets {
        let md = Digraph::from_arc_list(n, &m)?;
        groups.entry(canonical_key(&md)?).or_default().push(m);
    }
    let entries: Vec<(u64, Vec<DeletionSet>)> = groups.into_iter().collect();
    let classes: Vec<Result<DeletionClass, LabError>> = entries
        .par_iter()
        .map(|(_, members)| {
            let representative = members.iter().min().unwrap().clone();
            let md = Digraph::from_arc_list(n, &representative)?;
            let signature = canonical_form(&md)?.arcs().collect();
            let d = kn.delete_arcs(&representative)?;
            let kappa_2 = cache.kappa_k(&d, 2, cfg)?;
            let minimal = is_minimally_connected_cached(&d, 2, ell, cfg, cache)?;
            Ok(DeletionClass {
                representative,
                iso_signature: signature,
                count: members.len(),
                kappa_2,
                minimal,
            })
        })
        .collect();
    let mut out = Vec::with_capacity(classes.len());
    for c in classes {
        out.push(c?);
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpace {
    /// Every digraph on `n` labeled vertices; feasible for `n <= 4`.
    AllDigraphs,
    /// Complements of bounded-degree deletion sets of the complete
    /// digraph; complete for any `(k, ell)` because minimality forces
    /// all degrees to at least `ell`.
    ComplementConstrained,
    /// Named families plus seeded random strong digraphs; yields exact
    /// minima only when the lower bound `n * ell` is attained.
    SampledPlusFamilies,
}

impl SearchSpace {
    fn label(&self) -> &'static str {
        match self {
            SearchSpace::AllDigraphs => "all-digraphs",
            SearchSpace::ComplementConstrained => "complement-constrained",
            SearchSpace::SampledPlusFamilies => "sampled-plus-families",
        }
    }
}

/// Extremal arc counts over all minimally `(k, ell)`-connected digraphs
/// of order `n` found in the chosen search space, with the digraphs
/// attaining them (one canonical representative per isomorphism class).
#[derive(Debug, Clone)]
pub struct ExtremalTable {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub f: Option<usize>,
    pub big_f: Option<usize>,
    pub ex: Vec<Digraph>,
    pub big_ex: Vec<Digraph>,
    pub total_minimal: usize,
    pub search_space: SearchSpace,
    pub f_exact: bool,
    pub big_f_exact: bool,
}

impl ExtremalTable {
    pub fn csv_header() -> &'static str {
        "n,k,ell,f,F,ex_count,Ex_count"
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.ell,
            opt(self.f),
            opt(self.big_f),
            self.ex.len(),
            self.big_ex.len()
        )
    }
}

impl Serialize for ExtremalTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dg =
            |list: &[Digraph]| -> Vec<String> { list.iter().map(|d| d.to_dg_string()).collect() };
        let mut st = serializer.serialize_struct("ExtremalTable", 11)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("F", &self.big_f)?;
        st.serialize_field("ex", &dg(&self.ex))?;
        st.serialize_field("Ex", &dg(&self.big_ex))?;
        st.serialize_field("total_minimal", &self.total_minimal)?;
        st.serialize_field("search_space", self.search_space.label())?;
        st.serialize_field("f_exact", &self.f_exact)?;
        st.serialize_field("F_exact", &self.big_f_exact)?;
        st.end()
    }
}

fn minimal_members(
    candidates: Vec<Digraph>,
    k: usize,
    ell: usize,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<Vec<Digraph>, LabError> {
    let flags: Vec<Result<bool, LabError>> = candidates
        .par_iter()
        .map(|d| is_minimally_connected_cached(d, k, ell, cfg, cache))
        .collect();
    let mut members = Vec::new();
    for (d, flag) in candidates.into_iter().zip(flags) {
        if flag? {
            members.push(d);
        }
    }
    Ok(members)
}

fn table_from_members(
    n: usize,
    k: usize,
    ell: usize,
    members: Vec<Digraph>,
    space: SearchSpace,
    cfg: &SolverConfig,
) -> Result<ExtremalTable, LabError> {
    let exhaustive = !matches!(space, SearchSpace::SampledPlusFamilies);
    let total = members.len();
    let f = members.iter().map(|d| d.arc_count()).min();
    let big_f = members.iter().map(|d| d.arc_count()).max();
    let class_reps = |count: usize| -> Result<Vec<Digraph>, LabError> {
        let mut keys = std::collections::BTreeSet::new();
        let mut reps = Vec::new();
        for d in members.iter().filter(|d| d.arc_count() == count) {
            let key = canonical_key(d)?;
            if keys.insert(key) {
                reps.push(canonical_form(d)?);
            }
        }
        reps.sort_by_key(|d| d.arcs().collect::<Vec<_>>());
        Ok(reps)
    };
    let ex = match f {
        Some(count) => class_reps(count)?,
        None => Vec::new(),
    };
    let big_ex = match big_f {
        Some(count) => class_reps(count)?,
        None => Vec::new(),
    };
    // The members re-verify against the full solver, and the computed
    // minimum respects the degree lower bound n * ell.
    if let Some(fv) = f {
        assert!(fv >= n * ell, "f = {fv} below the degree bound {}", n * ell);
    }
    for d in ex.iter().chain(big_ex.iter()) {
        let report = is_minimally_connected(d, k, ell, cfg)?;
        assert!(
            matches!(report.verdict, MinimalityVerdict::Minimal),
            "extremal member failed re-verification: {:?}",
            d
        );
    }
    Ok(ExtremalTable {
        n,
        k,
        ell,
        f,
        big_f,
        ex,
        big_ex,
        total_minimal: total,
        search_space: space,
        f_exact: f.is_some() && (exhaustive || f == Some(n * ell)),
        big_f_exact: big_f.is_some() && exhaustive,
    })
}

/// Computes `f`, `F` and the extremal digraph lists for minimally
/// `(k, ell)`-connected digraphs of order `n` over the chosen search
/// space. The `seed` only drives the sampled space.
pub fn compute_f_f_upper(
    n: usize,
    k: usize,
    ell: usize,
    space: SearchSpace,
    seed: u64,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<ExtremalTable, LabError> {
    if ell == 0 {
        return Err(LabError::LevelTooSmall);
    }
    if k < 2 || k > n {
        return Err(LabError::Solver(SolverError::KOutOfRange { k, n }));
    }
    let candidates: Vec<Digraph> = match space {
        SearchSpace::AllDigraphs => {
            if n > 4 {
                return Err(LabError::Scale {
                    space: "all-digraphs",
                    n,
                    cap: 4,
                });
            }
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let m = pairs.len();
            (0u32..(1u32 << m))
                .into_par_iter()
                .filter_map(|mask| {
                    let arcs: Vec<(usize, usize)> = (0..m)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| pairs[i])
                        .collect();
                    let d = Digraph::from_arc_list(n, &arcs).expect("valid mask");
                    let (dp, dm) = d.min_degrees();
                    (dp >= ell && dm >= ell).then_some(d)
                })
                .collect()
        }
        SearchSpace::ComplementConstrained => {
            if ell > n - 1 {
                Vec::new()
            } else {
                let kn = complete_digraph(n).map_err(|_| LabError::Scale {
                    space: "complement-constrained",
                    n,
                    cap: 8,
                })?;
                if n > 6 {
                    return Err(LabError::Scale {
                        space: "complement-constrained",
                        n,
                        cap: 6,
                    });
                }
                let sets = bounded_arc_sets(n, n - 1 - ell, None, SWEEP_CAP)?;
                sets.into_iter()
                    .map(|m| kn.delete_arcs(&m).map_err(LabError::from))
                    .collect::<Result<Vec<_>, _>>()?
            }
        }
        SearchSpace::SampledPlusFamilies => sampled_corpus(n, seed)?,
    };
    let members = minimal_members(candidates, k, ell, cfg, cache)?;
    table_from_members(n, k, ell, members, space, cfg)
}

fn sampled_corpus(n: usize, seed: u64) -> Result<Vec<Digraph>, LabError> {
    let mut corpus: Vec<Digraph> = Vec::new();
    let mut push = |d: Digraph| corpus.push(d);
    if let Ok(d) = directed_cycle(n) {
        push(d);
    }
    if let Ok(d) = complete_digraph(n) {
        push(d);
    }
    if let Ok(d) = complete_minus_3cycle(n) {
        push(d);
    }
    if let Ok(d) = complete_minus_2cycle_matching(n) {
        push(d);
    }
    for shape in [TreeShape::Path, TreeShape::Star] {
        if let Ok(d) = symmetric_tree(n, shape, 0) {
            push(d);
        }
    }
    for s in 0..4u64 {
        if let Ok(d) = symmetric_tree(n, TreeShape::Random, seed.wrapping_add(s)) {
            push(d);
        }
    }
    if n <= 8 && n != 4 && n != 6 {
        for ell in 1..n {
            if let Ok(d) = union_of_ham_cycles(n, ell) {
                push(d);
            }
        }
    }
    for join_k in 2..=n / 3 {
        if let Ok(d) = symmetric_join(join_k, n) {
            push(d);
        }
    }
    let probabilities = [0.3, 0.4, 0.5, 0.6];
    for i in 0..100u64 {
        let p = probabilities[(i % 4) as usize];
        if let Ok(d) = random_strong_digraph(n, p, seed.wrapping_add(1000 + i)) {
            push(d);
        }
    }
    // Dedup up to isomorphism so the minimality tests run once per
    // class.
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for d in corpus {
        if d.order() <= 8 {
            if seen.insert(canonical_key(&d)?) {
                out.push(d);
            }
        } else {
            out.push(d);
        }
    }
    Ok(out)
}

/// Report for the arc-count upper bounds on minimally connected
/// digraphs: no member may exceed `2 * ell * (n - 1)` arcs, and at
/// `ell = 1` the maximum is exactly `2(n - 1)`, attained precisely by
/// biorientations of trees.
#[derive(Debug, Clone, Serialize)]
pub struct FBoundsReport {
    pub n: usize,
    pub ell: usize,
    pub bound: usize,
    pub members_found: usize,
    pub max_arcs: Option<usize>,
    pub all_within_bound: bool,
    pub tree_report: Option<TreeReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub min_arcs: usize,
    pub max_arcs: usize,
    #[serde(serialize_with = "serialize_digraphs")]
    pub max_classes: Vec<Digraph>,
    pub all_symmetric_trees: bool,
    pub reverified: bool,
}

fn serialize_digraphs<S: Serializer>(list: &[Digraph], s: S) -> Result<S::Ok, S::Error> {
    list.iter()
        .map(|d| d.to_dg_string())
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Checks the arc-count upper bounds at order `n` and level `ell`.
///
/// For `ell = 1` every minimally strong digraph on `n` labeled vertices
/// is enumerated directly (they are exactly the arc-minimal strong
/// spanning subgraphs of the complete digraph, and minimal strongness
/// coincides with minimal `(k, 1)`-connectivity, which the solver
/// re-verifies on every extremal class). For `ell >= 2` the test runs
/// the exhaustive complement-constrained table at `k = n`.
pub fn check_f_upper_bounds(
    n: usize,
    ell: usize,
    cfg: &SolverConfig,
    cache: &KappaCache,
) -> Result<FBoundsReport, LabError> {
    if ell == 0 {
        return Err(LabError::LevelTooSmall);
    }
    let bound = 2 * ell * (n - 1);
    if ell == 1 {
        if !(2..=6).contains(&n) {
            return Err(LabError::Scale {
                space: "minimally-strong enumeration",
                n,
                cap: 6,
            });
        }
        let kn = complete_digraph(n).expect("n <= 6");
        let full = VertexSet::new(0..n).expect("nonempty");
        let all_minimal = enumerate_candidates(&kn, &full, cfg)?;
        let members = all_minimal.len();
        let min_arcs = all_minimal.iter().map(|c| c.arcs().len()).min().unwrap();
        let max_arcs = all_minimal.iter().map(|c| c.arcs().len()).max().unwrap();

        let mut keys = std::collections::BTreeSet::new();
        let mut max_classes = Vec::new();
        let mut all_symmetric_trees = true;
        for cand in all_minimal.iter().filter(|c| c.arcs().len() == max_arcs) {
            let d = Digraph::from_arc_list(n, cand.arcs())?;
            debug_assert!(is_minimally_strong(&d));
            if !(d.is_symmetric() && d.underlying_graph().len() == n - 1) {
                all_symmetric_trees = false;
            }
            if keys.insert(canonical_key(&d)?) {
                max_classes.push(canonical_form(&d)?);
            }
        }
        max_classes.sort_by_key(|d| d.arcs().collect::<Vec<_>>());
        let mut reverified = true;
        for d in &max_classes {
            let report = is_minimally_connected(d, 2, 1, cfg)?;
            if !matches!(report.verdict, MinimalityVerdict::Minimal) {
                reverified = false;
            }
        }
        return Ok(FBoundsReport {
            n,
            ell,
            bound,
            members_found: members,
            max_arcs: Some(max_arcs),
            all_within_bound: max_arcs <= bound,
            tree_report: Some(TreeReport {
                min_arcs,
                max_arcs,
                max_classes,
                all_symmetric_trees,
                reverified,
            }),
        });
    }

    let table = compute_f_f_upper(
        n,
        n,
        ell,
        if n <= 4 {
            SearchSpace::AllDigraphs
        } else {
            SearchSpace::ComplementConstrained
        },
        0,
        cfg,
        cache,
    )?;
    Ok(FBoundsReport {
        n,
        ell,
        bound,
        members_found: table.total_minimal,
        max_arcs: table.big_f,
        all_within_bound: table.big_f.is_none_or(|m| m <= bound),
        tree_report: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn minimality_examples() {
        let c5 = directed_cycle(5).unwrap();
        let r = is_minimally_connected(&c5, 2, 1, &cfg()).unwrap();
        assert!(matches!(r.verdict, MinimalityVerdict::Minimal));

        let k5 = complete_digraph(5).unwrap();
        let r = is_minimally_connected(&k5, 2, 4, &cfg()).unwrap();
        assert!(matches!(r.verdict, MinimalityVerdict::Minimal));
        assert_eq!(r.kappa_k_value, 4);

        let r = is_minimally_connected(&k5, 2, 3, &cfg()).unwrap();
        assert!(matches!(r.verdict, MinimalityVerdict::SomeArcKeepsKappa));

        let c4 = directed_cycle(4).unwrap();
        let r = is_minimally_connected(&c4, 2, 2, &cfg()).unwrap();
        assert!(matches!(r.verdict, MinimalityVerdict::KappaTooLow));
    }

    #[test]
    fn predicate_examples() {
        assert!(characterization_predicate(5, &[(0, 1), (1, 2), (2, 0)]).unwrap());
        assert!(characterization_predicate(5, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap());
        assert!(!characterization_predicate(5, &[(0, 1), (1, 0)]).unwrap());
        assert!(!characterization_predicate(5, &[(0, 1), (1, 2), (2, 3)]).unwrap());
        // A 2-cycle matching of the right size at even order.
        assert!(characterization_predicate(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap());
        assert!(characterization_predicate(6, &[(0, 0)]).is_err());
    }

    #[test]
    fn bounded_sets_small() {
        // Deletion sets with degree at most 1 at n = 3: the empty set,
        // 6 single arcs, 3 two-cycles, 6 two-arc paths, 2 triangles.
        let sets = bounded_arc_sets(3, 1, None, 10_000).unwrap();
        assert_eq!(sets.len(), 1 + 6 + 3 + 6 + 2);
        let triples = bounded_arc_sets(3, 1, Some(3), 10_000).unwrap();
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn extremal_table_at_n4() {
        let cache = KappaCache::new();
        let table =
            compute_f_f_upper(4, 2, 2, SearchSpace::AllDigraphs, 0, &cfg(), &cache).unwrap();
        assert_eq!(table.f, Some(8));
        assert_eq!(table.big_f, Some(9));
        assert_eq!(table.ex.len(), 1);
        assert_eq!(table.big_ex.len(), 1);
        assert!(table.f_exact && table.big_f_exact);
        assert_eq!(table.csv_row(), "4,2,2,8,9,1,1");
    }

    #[test]
    fn sampled_table_realizes_cycle_minimum() {
        let cache = KappaCache::new();
        let table = compute_f_f_upper(5, 2, 1, SearchSpace::SampledPlusFamilies, 7, &cfg(), &cache)
            .unwrap();
        assert_eq!(table.f, Some(5));
        assert!(table.f_exact);
        assert!(table.ex.iter().any(|d| crate::digraph::is_isomorphic(
            d,
            &directed_cycle(5).unwrap()
        )
        .is_some()));
    }

    #[test]
    fn tree_bound_at_n4() {
        let cache = KappaCache::new();
        let report = check_f_upper_bounds(4, 1, &cfg(), &cache).unwrap();
        assert_eq!(report.max_arcs, Some(6));
        assert!(report.all_within_bound);
        let tree = report.tree_report.unwrap();
        assert_eq!(tree.max_arcs, 6);
        // Path and star are the two tree shapes on 4 vertices.
        assert_eq!(tree.max_classes.len(), 2);
        assert!(tree.all_symmetric_trees);
        assert!(tree.reverified);
    }

    #[test]
    fn classification_at_n4() {
        let cache = KappaCache::new();
        let classes = classify_three_arc_deletions(4, &cfg(), &cache).unwrap();
        // At n = 4: 3-cycle, 3-arc path, 2-cycle plus arc.
        assert_eq!(classes.len(), 3);
        let minimal: Vec<_> = classes.iter().filter(|c| c.minimal).collect();
        assert_eq!(minimal.len(), 1);
        assert!(is_directed_triangle(&minimal[0].representative));
    }

    #[test]
    fn characterization_at_n4() {
        let cache = KappaCache::new();
        let report = verify_characterization(4, &cfg(), &cache).unwrap();
        assert!(report.holds, "{:?}", report);
        assert!(report.classes.iter().any(|c| c.minimal));
    }

    #[test]
    fn deletion_family_values_at_n5() {
        let cache = KappaCache::new();
        let d = complete_minus_3cycle(5).unwrap();
        assert_eq!(cache.kappa_k(&d, 2, &cfg()).unwrap(), 3);
        let d = complete_minus_2cycle_matching(5).unwrap();
        assert_eq!(cache.kappa_k(&d, 2, &cfg()).unwrap(), 3);
    }

    /// Every high-value non-minimal 3-arc class closes into a 2-cycle
    /// matching deletion; the matching-deleted digraph is then a strong
    /// spanning subgraph of the class member, which pins the class
    /// value from both sides by monotonicity.
    #[test]
    fn nonminimal_high_classes_close_into_matchings() {
        let n = 5;
        let cache = KappaCache::new();
        let kn = complete_digraph(n).unwrap();
        let classes = classify_three_arc_deletions(n, &cfg(), &cache).unwrap();
        let high: Vec<_> = classes
            .iter()
            .filter(|c| !c.minimal && c.kappa_2 == n - 2)
            .collect();
        assert!(!high.is_empty());
        for class in high {
            let mut closure: std::collections::BTreeSet<(usize, usize)> =
                class.representative.iter().copied().collect();
            for &(u, v) in &class.representative {
                closure.insert((v, u));
            }
            let closure: Vec<(usize, usize)> = closure.into_iter().collect();
            assert!(characterization_predicate(n, &closure).unwrap());
            let smaller = kn.delete_arcs(&closure).unwrap();
            let bigger = kn.delete_arcs(&class.representative).unwrap();
            for (u, v) in smaller.arcs() {
                assert!(bigger.has_arc(u, v));
            }
            let low = cache.kappa_k(&smaller, 2, &cfg()).unwrap();
            let high_value = cache.kappa_k(&bigger, 2, &cfg()).unwrap();
            assert!(low <= high_value);
            assert_eq!(low, n - 2);
            assert_eq!(high_value, n - 2);
        }
    }
}
