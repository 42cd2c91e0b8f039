//! Constructors for the digraph families used throughout the lab:
//! complete digraphs and cycles, complete digraphs minus structured arc
//! sets, symmetric joins with explicit witness packings, unions of
//! arc-disjoint Hamiltonian cycles, bioriented trees, and seeded random
//! strong digraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::is_strong;
use crate::digraph::{bits, Digraph, GraphError, VertexSet};
use crate::packing::{Packing, Subgraph};

/// Default cap on the order of Hamiltonian decomposition searches.
pub const DECOMPOSITION_CAP: usize = 8;

const RANDOM_STRONG_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("family requires n >= {min}, got {n}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("symmetric join requires n >= 3k, got k = {k}, n = {n}")]
    JoinTooSmall { k: usize, n: usize },
    #[error("the complete digraph on {n} vertices has no Hamiltonian decomposition")]
    NoDecomposition { n: usize },
    #[error("decomposition search capped at n = {cap}, got {n}")]
    DecompositionCapExceeded { n: usize, cap: usize },
    #[error("cycle count {ell} out of range 1..={max}")]
    LevelOutOfRange { ell: usize, max: usize },
    #[error("arc probability must be in (0, 1], got {0}")]
    BadProbability(f64),
    #[error("no strong digraph sampled within {attempts} attempts")]
    RandomGiveUp { attempts: usize },
    #[error("terminal set must have exactly {expected} vertices, got {got}")]
    WrongTerminalCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The complete digraph on `n` vertices: all `n(n-1)` arcs.
pub fn complete_digraph(n: usize) -> Result<Digraph, FamilyError> {
    let mut arcs = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    Ok(Digraph::from_arc_list(n, &arcs)?)
}

/// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> Result<Digraph, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OrderTooSmall { n, min: 2 });
    }
    let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Digraph::from_arc_list(n, &arcs)?)
}

/// The complete digraph minus the directed 3-cycle on `{0, 1, 2}`.
pub fn complete_minus_3cycle(n: usize) -> Result<Digraph, FamilyError> {
    if n < 4 {
        return Err(FamilyError::OrderTooSmall { n, min: 4 });
    }
    Ok(complete_digraph(n)?.delete_arcs(&[(0, 1), (1, 2), (2, 0)])?)
}

/// The complete digraph minus `floor(n/2)` vertex-disjoint 2-cycles on
/// `{2i, 2i+1}`.
pub fn complete_minus_2cycle_matching(n: usize) -> Result<Digraph, FamilyError> {
    if n < 4 {
        return Err(FamilyError::OrderTooSmall { n, min: 4 });
    }
    let mut deleted = Vec::new();
    for i in 0..n / 2 {
        deleted.push((2 * i, 2 * i + 1));
        deleted.push((2 * i + 1, 2 * i));
    }
    Ok(complete_digraph(n)?.delete_arcs(&deleted)?)
}

/// Biorientation of the join of a `k`-clique with an independent set of
/// `n - k` vertices. Vertices `0..k` form the clique side, `k..n` the
/// independent side. Requires `n >= 3k` so that witness packings exist
/// for every terminal set.
pub fn symmetric_join(k: usize, n: usize) -> Result<Digraph, FamilyError> {
    if k < 2 {
        return Err(FamilyError::OrderTooSmall { n: k, min: 2 });
    }
    if n < 3 * k {
        return Err(FamilyError::JoinTooSmall { k, n });
    }
    let mut edges = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            edges.push((a, b));
        }
    }
    for a in 0..k {
        for b in k..n {
            edges.push((a, b));
        }
    }
    Ok(Digraph::biorientation(n, &edges)?)
}

/// An explicit packing of `k` internally disjoint strong subgraphs of
/// [`symmetric_join`]`(k, n)` through an arbitrary `k`-subset `s`.
///
/// The terminal set is first relabeled into a normal form (clique-side
/// terminals first, then independent-side terminals); each part is the
/// biorientation of a star or double star picked so that distinct parts
/// meet only in the terminals.
pub fn join_witness_packing(k: usize, n: usize, s: &VertexSet) -> Result<Packing, FamilyError> {
    if k < 2 {
        return Err(FamilyError::OrderTooSmall { n: k, min: 2 });
    }
    if n < 3 * k {
        return Err(FamilyError::JoinTooSmall { k, n });
    }
    if s.len() != k {
        return Err(FamilyError::WrongTerminalCount {
            expected: k,
            got: s.len(),
        });
    }
    let members = s.members();
    if let Some(&v) = members.iter().find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { v, n }.into());
    }

    let s_w: Vec<usize> = members.iter().copied().filter(|&v| v < k).collect();
    let s_u: Vec<usize> = members.iter().copied().filter(|&v| v >= k).collect();
    let s_in_u = s_u.len();

    // w_label[i] realizes the normal form w_{i+1}; terminals first.
    let mut w_label = s_w.clone();
    w_label.extend((0..k).filter(|v| !s_w.contains(v)));
    let mut u_label = s_u.clone();
    u_label.extend((k..n).filter(|v| !s_u.contains(v)));

    let mut parts = Vec::with_capacity(k);
    // Parts anchored at a clique-side terminal w_i, spanning the
    // independent-side terminals directly and reaching the clique-side
    // terminals through a private independent vertex u_{k+i}.
    for i in 1..=(k - s_in_u) {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let w_i = w_label[i - 1];
        for t in 1..=s_in_u {
            edges.push((w_i, u_label[t - 1]));
        }
        let hub = u_label[k + i - 1];
        for t in 1..=(k - s_in_u) {
            edges.push((hub, w_label[t - 1]));
        }
        parts.push(bioriented_part(&edges));
    }
    // Parts anchored at a private non-terminal clique vertex w_j,
    // adjacent to every terminal on both sides.
    for j in (k - s_in_u + 1)..=k {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let w_j = w_label[j - 1];
        for t in 1..=s_in_u {
            edges.push((w_j, u_label[t - 1]));
        }
        for t in 1..=(k - s_in_u) {
            edges.push((w_j, w_label[t - 1]));
        }
        parts.push(bioriented_part(&edges));
    }
    parts.sort_by(part_order);
    Ok(Packing { s: *s, parts })
}

fn bioriented_part(edges: &[(usize, usize)]) -> Subgraph {
    let mut verts = 0u64;
    let mut arcs = Vec::with_capacity(2 * edges.len());
    for &(a, b) in edges {
        verts |= (1u64 << a) | (1u64 << b);
        arcs.push((a, b));
        arcs.push((b, a));
    }
    Subgraph::new(VertexSet::from_mask(verts).unwrap(), arcs).unwrap()
}

fn part_order(a: &Subgraph, b: &Subgraph) -> std::cmp::Ordering {
    (a.vertices().len(), a.vertices().members(), a.arcs()).cmp(&(
        b.vertices().len(),
        b.vertices().members(),
        b.arcs(),
    ))
}

/// A decomposition of the arcs of the complete digraph into `n - 1`
/// pairwise arc-disjoint Hamiltonian cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamDecomposition {
    pub n: usize,
    pub cycles: Vec<Vec<(usize, usize)>>,
}

impl HamDecomposition {
    /// Structural check: each cycle visits every vertex exactly once,
    /// the cycles are pairwise arc-disjoint, and together they cover
    /// all `n(n-1)` arcs.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.n;
        if self.cycles.len() != n.saturating_sub(1) {
            return Err(format!(
                "expected {} cycles, got {}",
                n - 1,
                self.cycles.len()
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for (idx, cycle) in self.cycles.iter().enumerate() {
            if cycle.len() != n {
                return Err(format!(
                    "cycle {idx} has {} arcs, expected {n}",
                    cycle.len()
                ));
            }
            let mut succ = vec![usize::MAX; n];
            for &(u, v) in cycle {
                if u >= n || v >= n || u == v {
                    return Err(format!("cycle {idx} has bad arc ({u}, {v})"));
                }
                if succ[u] != usize::MAX {
                    return Err(format!("cycle {idx} leaves vertex {u} twice"));
                }
                succ[u] = v;
                if !seen.insert((u, v)) {
                    return Err(format!("arc ({u}, {v}) used twice"));
                }
            }
            let mut at = 0;
            for _ in 0..n {
                at = succ[at];
                if at == usize::MAX {
                    return Err(format!("cycle {idx} is not closed"));
                }
            }
            if at != 0 {
                return Err(format!("cycle {idx} does not return to start"));
            }
        }
        if seen.len() != n * (n - 1) {
            return Err(format!(
                "cycles cover {} arcs, expected {}",
                seen.len(),
                n * (n - 1)
            ));
        }
        Ok(())
    }

    /// Each cycle as a vertex sequence starting at 0.
    pub fn vertex_sequences(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|cycle| {
                let mut succ = vec![0usize; self.n];
                for &(u, v) in cycle {
                    succ[u] = v;
                }
                let mut seq = Vec::with_capacity(self.n);
                let mut at = 0;
                for _ in 0..self.n {
                    seq.push(at);
                    at = succ[at];
                }
                seq
            })
            .collect()
    }
}

/// Searches for a Hamiltonian decomposition of the complete digraph on
/// `n` vertices. Returns `None` when the exhaustive search proves none
/// exists (which happens exactly for n = 4 and n = 6 within the cap).
///
/// The first cycle is fixed to `0 -> 1 -> ... -> n-1 -> 0`: any
/// decomposition can be relabeled so that one of its cycles becomes
/// this canonical cycle, so the restriction loses nothing and the
/// remaining cycles are searched in strictly increasing lexicographic
/// order of their vertex sequences. The search is deterministic.
pub fn hamiltonian_decomposition(n: usize) -> Result<Option<HamDecomposition>, FamilyError> {
    hamiltonian_decomposition_with_cap(n, DECOMPOSITION_CAP)
}

pub fn hamiltonian_decomposition_with_cap(
    n: usize,
    cap: usize,
) -> Result<Option<HamDecomposition>, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OrderTooSmall { n, min: 2 });
    }
    if n > cap {
        return Err(FamilyError::DecompositionCapExceeded { n, cap });
    }
    let mut rem: Vec<u64> = (0..n)
        .map(|u| {
            let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
            full & !(1u64 << u)
        })
        .collect();
    let first: Vec<usize> = (0..n).collect();
    remove_cycle(&mut rem, &first);
    let mut cycles = vec![first];
    let found = extend_decomposition(&mut rem, &mut cycles, n);
    if !found {
        return Ok(None);
    }
    let decomposition = HamDecomposition {
        n,
        cycles: cycles
            .iter()
            .map(|seq| {
                (0..n)
                    .map(|i| (seq[i], seq[(i + 1) % n]))
                    .collect::<Vec<_>>()
            })
            .collect(),
    };
    decomposition
        .validate()
        .expect("search produced an invalid decomposition");
    Ok(Some(decomposition))
}

fn remove_cycle(rem: &mut [u64], seq: &[usize]) {
    let n = seq.len();
    for i in 0..n {
        rem[seq[i]] &= !(1u64 << seq[(i + 1) % n]);
    }
}

fn restore_cycle(rem: &mut [u64], seq: &[usize]) {
    let n = seq.len();
    for i in 0..n {
        rem[seq[i]] |= 1u64 << seq[(i + 1) % n];
    }
}

fn remaining_strong(rem: &[u64], n: usize) -> bool {
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    // Forward reachability, then backward via the transposed masks.
    let mut reached = 1u64;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u64;
        for v in bits(frontier) {
            next |= rem[v];
        }
        next &= full & !reached;
        reached |= next;
        frontier = next;
    }
    if reached != full {
        return false;
    }
    let mut back = 1u64;
    loop {
        let mut next = 0u64;
        for (v, &row) in rem.iter().enumerate().take(n) {
            if back & (1u64 << v) == 0 && row & back != 0 {
                next |= 1u64 << v;
            }
        }
        if next == 0 {
            break;
        }
        back |= next;
    }
    back == full
}

fn extend_decomposition(rem: &mut Vec<u64>, cycles: &mut Vec<Vec<usize>>, n: usize) -> bool {
    if cycles.len() == n - 1 {
        return true;
    }
    if !remaining_strong(rem, n) {
        return false;
    }
    let prev = cycles.last().unwrap().clone();
    let mut path = Vec::with_capacity(n);
    path.push(0usize);
    next_cycle(rem, cycles, n, &prev, true, 1, &mut path)
}

/// Extends `path` to the next Hamiltonian cycle of the remaining arcs
/// whose vertex sequence is lexicographically above `prev`, recursing
/// into the next decomposition level for each one found.
fn next_cycle(
    rem: &mut Vec<u64>,
    cycles: &mut Vec<Vec<usize>>,
    n: usize,
    prev: &[usize],
    tight: bool,
    visited: u64,
    path: &mut Vec<usize>,
) -> bool {
    let last = *path.last().unwrap();
    if path.len() == n {
        if rem[last] & 1 == 0 {
            return false;
        }
        let seq = path.clone();
        remove_cycle(rem, &seq);
        cycles.push(seq);
        if extend_decomposition(rem, cycles, n) {
            return true;
        }
        let seq = cycles.pop().unwrap();
        restore_cycle(rem, &seq);
        return false;
    }
    let lower = if tight { prev[path.len()] } else { 0 };
    for v in bits(rem[last]) {
        if v < lower || visited & (1u64 << v) != 0 {
            continue;
        }
        let still_tight = tight && v == lower;
        path.push(v);
        if next_cycle(
            rem,
            cycles,
            n,
            prev,
            still_tight,
            visited | (1u64 << v),
            path,
        ) {
            return true;
        }
        path.pop();
    }
    false
}

/// The union of the first `ell` cycles of the canonical Hamiltonian
/// decomposition: a spanning digraph with all in- and out-degrees equal
/// to `ell`.
pub fn union_of_ham_cycles(n: usize, ell: usize) -> Result<Digraph, FamilyError> {
    if n == 4 || n == 6 {
        return Err(FamilyError::NoDecomposition { n });
    }
    if n < 2 {
        return Err(FamilyError::OrderTooSmall { n, min: 2 });
    }
    if ell == 0 || ell > n - 1 {
        return Err(FamilyError::LevelOutOfRange { ell, max: n - 1 });
    }
    let decomposition =
        hamiltonian_decomposition(n)?.expect("decomposition exists away from orders 4 and 6");
    let mut arcs = Vec::with_capacity(n * ell);
    for cycle in decomposition.cycles.iter().take(ell) {
        arcs.extend_from_slice(cycle);
    }
    Ok(Digraph::from_arc_list(n, &arcs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeShape {
    Path,
    Star,
    Random,
}

/// Biorientation of a tree on `n` vertices; always minimally strong
/// with exactly `2(n-1)` arcs.
pub fn symmetric_tree(n: usize, shape: TreeShape, seed: u64) -> Result<Digraph, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OrderTooSmall { n, min: 2 });
    }
    let edges: Vec<(usize, usize)> = match shape {
        TreeShape::Path => (0..n - 1).map(|i| (i, i + 1)).collect(),
        TreeShape::Star => (1..n).map(|v| (0, v)).collect(),
        TreeShape::Random => {
            if n == 2 {
                vec![(0, 1)]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pruefer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
                pruefer_decode(&pruefer)
            }
        }
    };
    Ok(Digraph::biorientation(n, &edges)?)
}

fn pruefer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n];
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1 && !used[u]).unwrap();
        edges.push((leaf.min(v), leaf.max(v)));
        used[leaf] = true;
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let mut rest = (0..n).filter(|&u| degree[u] == 1 && !used[u]);
    let a = rest.next().unwrap();
    let b = rest.next().unwrap();
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Samples digraphs with independent arc probability `p` until one is
/// strong. Deterministic for a fixed seed.
pub fn random_strong_digraph(n: usize, p: f64, seed: u64) -> Result<Digraph, FamilyError> {
    random_strong_digraph_with_attempts(n, p, seed, RANDOM_STRONG_ATTEMPTS)
}

pub fn random_strong_digraph_with_attempts(
    n: usize,
    p: f64,
    seed: u64,
    attempts: usize,
) -> Result<Digraph, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OrderTooSmall { n, min: 2 });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(FamilyError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(p) {
                    arcs.push((u, v));
                }
            }
        }
        let d = Digraph::from_arc_list(n, &arcs)?;
        if is_strong(&d) {
            return Ok(d);
        }
    }
    Err(FamilyError::RandomGiveUp { attempts })
}

/// A named family with its parameters, addressable from the command
/// line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    CompleteMinus3cycle {
        n: usize,
    },
    CompleteMinus2cycleMatching {
        n: usize,
    },
    SymmetricJoin {
        k: usize,
        n: usize,
    },
    UnionHamCycles {
        n: usize,
        ell: usize,
    },
    SymmetricTree {
        n: usize,
        shape: TreeShape,
        seed: u64,
    },
    RandomStrong {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Digraph, FamilyError> {
        match *self {
            FamilySpec::Complete { n } => complete_digraph(n),
            FamilySpec::Cycle { n } => directed_cycle(n),
            FamilySpec::CompleteMinus3cycle { n } => complete_minus_3cycle(n),
            FamilySpec::CompleteMinus2cycleMatching { n } => complete_minus_2cycle_matching(n),
            FamilySpec::SymmetricJoin { k, n } => symmetric_join(k, n),
            FamilySpec::UnionHamCycles { n, ell } => union_of_ham_cycles(n, ell),
            FamilySpec::SymmetricTree { n, shape, seed } => symmetric_tree(n, shape, seed),
            FamilySpec::RandomStrong { n, p, seed } => random_strong_digraph(n, p, seed),
        }
    }
}
