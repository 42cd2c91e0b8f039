//! Exact strong subgraph connectivity: packings of internally disjoint
//! strong subgraphs through a terminal set.
//!
//! For a terminal set `S` (at least two vertices), `kappa_s` computes
//! the maximum number of strong subgraphs of `D` that all contain `S`,
//! pairwise share no vertex outside `S` and no arc at all. `kappa_k`
//! minimizes that over all `k`-subsets. Every result carries a witness
//! packing at the value and records that the level above was refuted by
//! exhaustive search, so certificates are machine-checkable end to end.
//!
//! The search enumerates arc-minimal candidate parts and packs them by
//! branch and bound. Any strong subgraph containing `S` can be pruned
//! arc by arc while it stays strong; each pruning step keeps the same
//! vertex set (an endpoint of a deleted arc always retains another
//! incident arc), so replacing every part of a packing by a pruned
//! version preserves containment of `S`, the pairwise vertex condition
//! and arc-disjointness. Restricting the search to arc-minimal parts
//! therefore decides every packing level exactly. An independent
//! brute-force oracle with no such reduction is provided for
//! cross-checking at tiny orders.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::connectivity::component_ids;
use crate::digraph::{bits, Digraph, GraphError, VertexSet};

/// Hard upper limit on the order accepted by the exact solver; arc ids
/// must fit the fixed-width [`ArcSet`].
pub const SOLVER_VERTEX_CAP: usize = 16;

const ARC_WORDS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("terminal set must have at least 2 vertices, got {0}")]
    TerminalSetTooSmall(usize),
    #[error("terminal set does not fit a digraph of order {n}")]
    TerminalSetOutOfRange { n: usize },
    #[error("k must satisfy 2 <= k <= n = {n}, got {k}")]
    KOutOfRange { k: usize, n: usize },
    #[error("packing level must be at least 1")]
    LevelTooSmall,
    #[error("digraph has {n} vertices, above the search cap of {cap}")]
    OrderAboveCap { n: usize, cap: usize },
    #[error("candidate enumeration exceeded {limit} subgraphs; raise SolverConfig::max_candidates or decide a single level with kappa_s_decision")]
    CandidateLimit { limit: usize },
    #[error("search timed out; proved {lower_bound} <= value <= {upper_bound}{}", terminal_suffix(.s))]
    Timeout {
        lower_bound: usize,
        upper_bound: usize,
        s: Option<Vec<usize>>,
    },
    #[error("brute-force oracle supports at most {cap} vertices, got {n}")]
    OracleTooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn terminal_suffix(s: &Option<Vec<usize>>) -> String {
    match s {
        Some(s) => format!(" (terminal set {:?})", s),
        None => String::new(),
    }
}

/// Resource limits for the exact searches. Breaching a limit yields an
/// error carrying the best bounds proved so far, never a wrong value.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Maximum order accepted for candidate enumeration (hard cap 16).
    pub vertex_cap: usize,
    /// Maximum number of candidate subgraphs gathered for one solve.
    pub max_candidates: usize,
    /// Wall-clock budget for one top-level call.
    pub timeout: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            vertex_cap: SOLVER_VERTEX_CAP,
            max_candidates: 2_000_000,
            timeout: None,
        }
    }
}

/// Fixed-width bitset over arc ids of the host digraph.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
struct ArcSet {
    w: [u64; ARC_WORDS],
}

impl ArcSet {
    fn insert(&mut self, id: usize) {
        self.w[id / 64] |= 1u64 << (id % 64);
    }

    fn contains(&self, id: usize) -> bool {
        self.w[id / 64] & (1u64 << (id % 64)) != 0
    }

    fn disjoint(&self, o: &ArcSet) -> bool {
        (0..ARC_WORDS).all(|i| self.w[i] & o.w[i] == 0)
    }

    fn or_assign(&mut self, o: &ArcSet) {
        for i in 0..ARC_WORDS {
            self.w[i] |= o.w[i];
        }
    }

    /// Removes a subset that is known to be contained in `self`.
    fn remove_subset(&mut self, o: &ArcSet) {
        for i in 0..ARC_WORDS {
            self.w[i] ^= o.w[i];
        }
    }

    fn count_minus(&self, o: &ArcSet) -> usize {
        (0..ARC_WORDS)
            .map(|i| (self.w[i] & !o.w[i]).count_ones() as usize)
            .sum()
    }

    fn is_empty(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..ARC_WORDS).flat_map(move |i| bits(self.w[i]).map(move |b| i * 64 + b))
    }

    /// Orders two sets of equal-length prefix-free families by their
    /// sorted id lists: the owner of the lowest differing id comes
    /// first.
    fn lex_cmp(&self, o: &ArcSet) -> std::cmp::Ordering {
        for i in 0..ARC_WORDS {
            let diff = self.w[i] ^ o.w[i];
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if self.w[i] & low != 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Orders two vertex masks of equal cardinality by their sorted member
/// lists.
fn mask_lex_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return std::cmp::Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    if a & low != 0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

/// One part of a packing: a set of vertices together with arcs between
/// them. Well-formedness (arcs inside the vertex set, no loops or
/// duplicates) is enforced on construction; strongness is a packing
/// property checked by [`verify_packing`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    vertices: VertexSet,
    arcs: Vec<(usize, usize)>,
}

impl Subgraph {
    pub fn new(vertices: VertexSet, mut arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        arcs.sort_unstable();
        for win in arcs.windows(2) {
            if win[0] == win[1] {
                return Err(GraphError::DuplicateArc(win[0].0, win[0].1));
            }
        }
        for &(u, v) in &arcs {
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            for w in [u, v] {
                if !vertices.contains(w) {
                    return Err(GraphError::VertexOutOfRange {
                        v: w,
                        n: crate::digraph::MAX_VERTICES,
                    });
                }
            }
        }
        Ok(Subgraph { vertices, arcs })
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Strong as a digraph on its own vertex set, with no isolated
    /// vertex.
    pub fn is_strong(&self) -> bool {
        let vmask = self.vertices.mask();
        if self.vertices.len() == 1 {
            return self.arcs.is_empty();
        }
        let mut out = [0u64; 64];
        let mut touched = 0u64;
        for &(u, v) in &self.arcs {
            out[u] |= 1u64 << v;
            touched |= (1u64 << u) | (1u64 << v);
        }
        if touched != vmask {
            return false;
        }
        let start = 1u64 << vmask.trailing_zeros();
        if mask_reach(&out, start, vmask) != vmask {
            return false;
        }
        let mut inn = [0u64; 64];
        for &(u, v) in &self.arcs {
            inn[v] |= 1u64 << u;
        }
        mask_reach(&inn, start, vmask) == vmask
    }
}

fn mask_reach(adj: &[u64], start: u64, within: u64) -> u64 {
    let mut reached = start & within;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u64;
        for v in bits(frontier) {
            next |= adj[v];
        }
        next &= within & !reached;
        reached |= next;
        frontier = next;
    }
    reached
}

/// A family of subgraphs through a common terminal set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub s: VertexSet,
    pub parts: Vec<Subgraph>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingViolation {
    #[error("terminal set has {0} vertices, needs at least 2")]
    TerminalSetTooSmall(usize),
    #[error("terminal set does not fit the host digraph")]
    TerminalSetOutOfRange,
    #[error("part {part} does not contain the whole terminal set")]
    PartMissingTerminals { part: usize },
    #[error("part {part} uses vertex {v} outside the host digraph")]
    VertexNotInHost { part: usize, v: usize },
    #[error("part {part} uses arc ({u}, {v}) missing from the host digraph")]
    ArcNotInHost { part: usize, u: usize, v: usize },
    #[error("part {part} has isolated vertex {v}")]
    IsolatedVertex { part: usize, v: usize },
    #[error("part {part} is not strong")]
    PartNotStrong { part: usize },
    #[error("parts {a} and {b} share vertex {v} outside the terminal set")]
    VertexOverlap { a: usize, b: usize, v: usize },
    #[error("parts {a} and {b} share arc ({u}, {v})")]
    ArcOverlap {
        a: usize,
        b: usize,
        u: usize,
        v: usize,
    },
}

/// Checks every packing invariant and reports the first violation:
/// each part lives inside the host, contains the terminal set, is
/// strong with no isolated vertex, and parts pairwise meet exactly in
/// the terminal set and share no arc.
pub fn verify_packing(d: &Digraph, p: &Packing) -> Result<(), PackingViolation> {
    if p.s.len() < 2 {
        return Err(PackingViolation::TerminalSetTooSmall(p.s.len()));
    }
    if !p.s.fits_order(d.order()) {
        return Err(PackingViolation::TerminalSetOutOfRange);
    }
    for (i, part) in p.parts.iter().enumerate() {
        if !p.s.is_subset_of(part.vertices()) {
            return Err(PackingViolation::PartMissingTerminals { part: i });
        }
        if let Some(v) = part
            .vertices()
            .members()
            .into_iter()
            .find(|&v| v >= d.order())
        {
            return Err(PackingViolation::VertexNotInHost { part: i, v });
        }
        for &(u, v) in part.arcs() {
            if !d.has_arc(u, v) {
                return Err(PackingViolation::ArcNotInHost { part: i, u, v });
            }
        }
        let mut incident = 0u64;
        for &(u, v) in part.arcs() {
            incident |= (1u64 << u) | (1u64 << v);
        }
        if let Some(v) = bits(part.vertices().mask() & !incident).next() {
            return Err(PackingViolation::IsolatedVertex { part: i, v });
        }
        if !part.is_strong() {
            return Err(PackingViolation::PartNotStrong { part: i });
        }
    }
    let s_mask = p.s.mask();
    for i in 0..p.parts.len() {
        for j in (i + 1)..p.parts.len() {
            let shared = p.parts[i].vertices().mask() & p.parts[j].vertices().mask();
            if shared != s_mask {
                let v = bits(shared & !s_mask).next().unwrap();
                return Err(PackingViolation::VertexOverlap { a: i, b: j, v });
            }
            for &(u, v) in p.parts[i].arcs() {
                if p.parts[j].arcs().binary_search(&(u, v)).is_ok() {
                    return Err(PackingViolation::ArcOverlap { a: i, b: j, u, v });
                }
            }
        }
    }
    Ok(())
}

/// A computed connectivity value with its certificate: a witness
/// packing of `value` parts, and the record that `value + 1` parts were
/// refuted (by exhaustive search, or by the terminal degree bound when
/// `value` equals it).
///
/// The JSON form is the certificate schema: `value`, `argmin_set`,
/// `witness` (the bare list of parts; their common terminal set is the
/// argmin set), `refuted_level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaResult {
    pub value: usize,
    pub argmin_set: VertexSet,
    pub witness: Packing,
    pub refuted_level: usize,
}

impl Serialize for KappaResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("KappaResult", 4)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("argmin_set", &self.argmin_set)?;
        st.serialize_field("witness", &self.witness.parts)?;
        st.serialize_field("refuted_level", &self.refuted_level)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for KappaResult {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            value: usize,
            argmin_set: VertexSet,
            witness: Vec<Subgraph>,
            refuted_level: usize,
        }
        let repr = Repr::deserialize(deserializer)?;
        Ok(KappaResult {
            value: repr.value,
            argmin_set: repr.argmin_set,
            witness: Packing {
                s: repr.argmin_set,
                parts: repr.witness,
            },
            refuted_level: repr.refuted_level,
        })
    }
}

/// Candidate part in solver-internal form.
#[derive(Clone)]
struct Cand {
    verts: u64,
    arcs: ArcSet,
}

fn cand_cmp(a: &Cand, b: &Cand) -> std::cmp::Ordering {
    a.verts
        .count_ones()
        .cmp(&b.verts.count_ones())
        .then_with(|| mask_lex_cmp(a.verts, b.verts))
        .then_with(|| a.arcs.lex_cmp(&b.arcs))
}

/// Shared per-digraph solver state: the arc index and the lazily built
/// atlas of arc-minimal strong spanning subgraphs per vertex subset.
/// The atlas is intrinsic to the host digraph, so deletion variants
/// reuse it by filtering out banned arcs.
struct Ctx<'a> {
    d: &'a Digraph,
    cfg: SolverConfig,
    deadline: Option<Instant>,
    arcs: Vec<(usize, usize)>,
    arc_id: Vec<u16>,
    out_ids: Vec<ArcSet>,
    in_ids: Vec<ArcSet>,
    atlas: Mutex<HashMap<u64, Arc<Vec<Cand>>>>,
}

impl<'a> Ctx<'a> {
    fn new(d: &'a Digraph, cfg: SolverConfig) -> Result<Self, SolverError> {
        let n = d.order();
        let cap = cfg.vertex_cap.min(SOLVER_VERTEX_CAP);
        if n > cap {
            return Err(SolverError::OrderAboveCap { n, cap });
        }
        let arcs: Vec<(usize, usize)> = d.arcs().collect();
        let mut arc_id = vec![u16::MAX; n * n];
        let mut out_ids = vec![ArcSet::default(); n];
        let mut in_ids = vec![ArcSet::default(); n];
        for (id, &(u, v)) in arcs.iter().enumerate() {
            arc_id[u * n + v] = id as u16;
            out_ids[u].insert(id);
            in_ids[v].insert(id);
        }
        Ok(Ctx {
            d,
            cfg,
            deadline: cfg.timeout.map(|t| Instant::now() + t),
            arcs,
            arc_id,
            out_ids,
            in_ids,
            atlas: Mutex::new(HashMap::new()),
        })
    }

    fn id_of(&self, u: usize, v: usize) -> usize {
        self.arc_id[u * self.d.order() + v] as usize
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|dl| Instant::now() > dl)
    }

    /// Effective adjacency after removing a banned arc set.
    fn effective_adjacency(&self, banned: &ArcSet) -> (Vec<u64>, Vec<u64>) {
        let n = self.d.order();
        let mut out: Vec<u64> = (0..n).map(|v| self.d.out_mask(v)).collect();
        let mut inn: Vec<u64> = (0..n).map(|v| self.d.in_mask(v)).collect();
        for id in banned.ids() {
            let (u, v) = self.arcs[id];
            out[u] &= !(1u64 << v);
            inn[v] &= !(1u64 << u);
        }
        (out, inn)
    }

    /// All arc-minimal strong spanning subgraphs of the subgraph
    /// induced by `t_mask`, in host arc ids. Memoized.
    fn atlas_for(&self, t_mask: u64) -> Result<Arc<Vec<Cand>>, SolverError> {
        if let Some(hit) = self.atlas.lock().unwrap().get(&t_mask) {
            return Ok(hit.clone());
        }
        let computed = Arc::new(self.enumerate_for(t_mask)?);
        let mut guard = self.atlas.lock().unwrap();
        let entry = guard.entry(t_mask).or_insert(computed);
        Ok(entry.clone())
    }

    fn enumerate_for(&self, t_mask: u64) -> Result<Vec<Cand>, SolverError> {
        let n = self.d.order();
        let t0 = t_mask.trailing_zeros() as usize;
        let mut avail_out = vec![0u64; n];
        let mut avail_in = vec![0u64; n];
        let mut t_arcs = Vec::new();
        for (id, &(u, v)) in self.arcs.iter().enumerate() {
            if t_mask & (1u64 << u) != 0 && t_mask & (1u64 << v) != 0 {
                t_arcs.push(id as u16);
                avail_out[u] |= 1u64 << v;
                avail_in[v] |= 1u64 << u;
            }
        }
        let mut en = Enumerator {
            ctx: self,
            t_mask,
            t0,
            t_arcs,
            avail_out,
            avail_in,
            inc_out: vec![0u64; n],
            inc_in: vec![0u64; n],
            included: Vec::new(),
            found: Vec::new(),
            tick: 0,
        };
        if en.strong_span(&en.avail_out, &en.avail_in) {
            en.dfs(0)?;
        }
        Ok(en.found)
    }
}

/// Depth-first enumeration of the arc-minimal strong spanning
/// subgraphs of one induced subgraph. Arcs are decided in lexicographic
/// order; at each decided prefix the branch is cut when the still
/// available arcs cannot span strongly, and a branch that has become
/// strong never grows further (any strict superset of a strong
/// spanning set keeps a removable arc).
struct Enumerator<'a, 'b> {
    ctx: &'b Ctx<'a>,
    t_mask: u64,
    t0: usize,
    t_arcs: Vec<u16>,
    avail_out: Vec<u64>,
    avail_in: Vec<u64>,
    inc_out: Vec<u64>,
    inc_in: Vec<u64>,
    included: Vec<u16>,
    found: Vec<Cand>,
    tick: u32,
}

impl Enumerator<'_, '_> {
    fn strong_span(&self, out: &[u64], inn: &[u64]) -> bool {
        let start = 1u64 << self.t0;
        mask_reach(out, start, self.t_mask) == self.t_mask
            && mask_reach(inn, start, self.t_mask) == self.t_mask
    }

    fn dfs(&mut self, pos: usize) -> Result<(), SolverError> {
        self.tick = self.tick.wrapping_add(1);
        if self.tick.is_multiple_of(1024) && self.ctx.expired() {
            return Err(SolverError::Timeout {
                lower_bound: 0,
                upper_bound: usize::MAX,
                s: None,
            });
        }
        if self.t_mask.count_ones() >= 2 && self.strong_span(&self.inc_out, &self.inc_in) {
            if self.included_is_minimal() {
                if self.found.len() >= self.ctx.cfg.max_candidates {
                    return Err(SolverError::CandidateLimit {
                        limit: self.ctx.cfg.max_candidates,
                    });
                }
                let mut arcs = ArcSet::default();
                for &id in &self.included {
                    arcs.insert(id as usize);
                }
                self.found.push(Cand {
                    verts: self.t_mask,
                    arcs,
                });
            }
            return Ok(());
        }
        if pos == self.t_arcs.len() {
            return Ok(());
        }
        let id = self.t_arcs[pos];
        let (u, v) = self.ctx.arcs[id as usize];

        // Include the arc, unless the part is already at the arc-count
        // ceiling for minimally strong digraphs (2t - 2; only
        // non-minimal leaves lie beyond it).
        if self.included.len() < 2 * self.t_mask.count_ones() as usize - 2 {
            self.inc_out[u] |= 1u64 << v;
            self.inc_in[v] |= 1u64 << u;
            self.included.push(id);
            self.dfs(pos + 1)?;
            self.included.pop();
            self.inc_out[u] &= !(1u64 << v);
            self.inc_in[v] &= !(1u64 << u);
        }

        // Exclude it, if the rest can still span strongly.
        self.avail_out[u] &= !(1u64 << v);
        self.avail_in[v] &= !(1u64 << u);
        if self.strong_span(&self.avail_out, &self.avail_in) {
            self.dfs(pos + 1)?;
        }
        self.avail_out[u] |= 1u64 << v;
        self.avail_in[v] |= 1u64 << u;
        Ok(())
    }

    fn included_is_minimal(&mut self) -> bool {
        for i in 0..self.included.len() {
            let (u, v) = self.ctx.arcs[self.included[i] as usize];
            self.inc_out[u] &= !(1u64 << v);
            self.inc_in[v] &= !(1u64 << u);
            let still_strong = self.strong_span(&self.inc_out, &self.inc_in);
            self.inc_out[u] |= 1u64 << v;
            self.inc_in[v] |= 1u64 << u;
            if still_strong {
                return false;
            }
        }
        true
    }
}

/// Candidate pool for one terminal set, with lazily memoized pairwise
/// compatibility rows.
struct Pool {
    cands: Vec<Cand>,
    s_mask: u64,
    rows: Vec<Option<Vec<u64>>>,
    row_words: usize,
}

impl Pool {
    fn new(cands: Vec<Cand>, s_mask: u64) -> Self {
        let row_words = cands.len().div_ceil(64);
        let rows = vec![None; cands.len()];
        Pool {
            cands,
            s_mask,
            rows,
            row_words,
        }
    }

    fn compatible(&self, i: usize, j: usize) -> bool {
        let a = &self.cands[i];
        let b = &self.cands[j];
        a.verts & b.verts == self.s_mask && a.arcs.disjoint(&b.arcs)
    }

    fn row(&mut self, i: usize) -> &Vec<u64> {
        if self.rows[i].is_none() {
            let mut row = vec![0u64; self.row_words];
            for j in (i + 1)..self.cands.len() {
                if self.compatible(i, j) {
                    row[j / 64] |= 1u64 << (j % 64);
                }
            }
            self.rows[i] = Some(row);
        }
        self.rows[i].as_ref().unwrap()
    }

    fn row_contains(&mut self, i: usize, j: usize) -> bool {
        let row = self.row(i);
        row[j / 64] & (1u64 << (j % 64)) != 0
    }
}

struct Search<'a, 'b> {
    ctx: &'b Ctx<'a>,
    pool: Pool,
    s_members: Vec<usize>,
    eff_out: Vec<ArcSet>,
    eff_in: Vec<ArcSet>,
    tick: u32,
}

impl Search<'_, '_> {
    /// Upper bound on how many further parts can still be packed: every
    /// part consumes one unused out-arc and one unused in-arc at each
    /// terminal.
    fn terminal_bound(&self, used: &ArcSet) -> usize {
        self.s_members
            .iter()
            .map(|&s| {
                self.eff_out[s]
                    .count_minus(used)
                    .min(self.eff_in[s].count_minus(used))
            })
            .min()
            .unwrap_or(0)
    }

    fn decide(&mut self, level: usize) -> Result<Option<Vec<u32>>, SolverError> {
        if level == 0 {
            return Ok(Some(Vec::new()));
        }
        let all: Vec<u32> = (0..self.pool.cands.len() as u32).collect();
        let mut chosen = Vec::new();
        let mut used = ArcSet::default();
        if self.dfs(&all, level, &mut chosen, &mut used)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }

    fn dfs(
        &mut self,
        p: &[u32],
        need: usize,
        chosen: &mut Vec<u32>,
        used: &mut ArcSet,
    ) -> Result<bool, SolverError> {
        self.tick = self.tick.wrapping_add(1);
        if self.tick.is_multiple_of(1024) && self.ctx.expired() {
            return Err(SolverError::Timeout {
                lower_bound: 0,
                upper_bound: usize::MAX,
                s: None,
            });
        }
        if need == 0 {
            return Ok(true);
        }
        if p.len() < need || self.terminal_bound(used) < need {
            return Ok(false);
        }
        for (slot, &ci) in p.iter().enumerate() {
            if p.len() - slot < need {
                break;
            }
            let next: Vec<u32> = p[slot + 1..]
                .iter()
                .copied()
                .filter(|&cj| self.pool.row_contains(ci as usize, cj as usize))
                .collect();
            let arcs = self.pool.cands[ci as usize].arcs;
            chosen.push(ci);
            used.or_assign(&arcs);
            if self.dfs(&next, need - 1, chosen, used)? {
                return Ok(true);
            }
            used.remove_subset(&arcs);
            chosen.pop();
        }
        Ok(false)
    }
}

fn validate_s(d: &Digraph, s: &VertexSet) -> Result<(), SolverError> {
    if s.len() < 2 {
        return Err(SolverError::TerminalSetTooSmall(s.len()));
    }
    if !s.fits_order(d.order()) {
        return Err(SolverError::TerminalSetOutOfRange { n: d.order() });
    }
    Ok(())
}

fn zero_result(s: &VertexSet) -> KappaResult {
    KappaResult {
        value: 0,
        argmin_set: *s,
        witness: Packing {
            s: *s,
            parts: Vec::new(),
        },
        refuted_level: 1,
    }
}

/// Gathers the candidate parts for `S` in `D` minus `banned`: for each
/// vertex superset of `S` inside the strong component of `S`, the
/// arc-minimal strong spanning subgraphs avoiding banned arcs. Sorted
/// by (order, vertex list, arc list).
fn gather(ctx: &Ctx, s_mask: u64, banned: &ArcSet) -> Result<Vec<Cand>, SolverError> {
    let (eff_out, eff_in) = ctx.effective_adjacency(banned);
    let s0 = 1u64 << s_mask.trailing_zeros();
    let n = ctx.d.order();
    let all = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let fwd = mask_reach(&eff_out, s0, all);
    let bwd = mask_reach(&eff_in, s0, all);
    let scc = fwd & bwd;
    if s_mask & !scc != 0 {
        return Ok(Vec::new());
    }
    let extra = scc & !s_mask;
    let mut out = Vec::new();
    let mut x = extra;
    loop {
        let t_mask = s_mask | x;
        let cands = ctx.atlas_for(t_mask)?;
        if banned.is_empty() {
            out.extend(cands.iter().cloned());
        } else {
            out.extend(cands.iter().filter(|c| c.arcs.disjoint(banned)).cloned());
        }
        if out.len() > ctx.cfg.max_candidates {
            return Err(SolverError::CandidateLimit {
                limit: ctx.cfg.max_candidates,
            });
        }
        if x == 0 {
            break;
        }
        x = (x - 1) & extra;
    }
    out.sort_unstable_by(cand_cmp);
    Ok(out)
}

fn cand_to_subgraph(ctx: &Ctx, cand: &Cand) -> Subgraph {
    let arcs: Vec<(usize, usize)> = cand.arcs.ids().map(|id| ctx.arcs[id]).collect();
    Subgraph::new(VertexSet::from_mask(cand.verts).unwrap(), arcs).unwrap()
}

fn search_for<'a, 'b>(
    ctx: &'b Ctx<'a>,
    s_mask: u64,
    banned: &ArcSet,
) -> Result<Search<'a, 'b>, SolverError> {
    let cands = gather(ctx, s_mask, banned)?;
    let s_members: Vec<usize> = bits(s_mask).collect();
    let eff_out: Vec<ArcSet> = (0..ctx.d.order())
        .map(|v| {
            let mut a = ctx.out_ids[v];
            for id in banned.ids() {
                if a.contains(id) {
                    let mut b = ArcSet::default();
                    b.insert(id);
                    a.remove_subset(&b);
                }
            }
            a
        })
        .collect();
    let eff_in: Vec<ArcSet> = (0..ctx.d.order())
        .map(|v| {
            let mut a = ctx.in_ids[v];
            for id in banned.ids() {
                if a.contains(id) {
                    let mut b = ArcSet::default();
                    b.insert(id);
                    a.remove_subset(&b);
                }
            }
            a
        })
        .collect();
    Ok(Search {
        ctx,
        pool: Pool::new(cands, s_mask),
        s_members,
        eff_out,
        eff_in,
        tick: 0,
    })
}

fn kappa_s_inner(ctx: &Ctx, s: &VertexSet, banned: &ArcSet) -> Result<KappaResult, SolverError> {
    let s_mask = s.mask();
    let mut search = search_for(ctx, s_mask, banned)?;
    if search.pool.cands.is_empty() {
        return Ok(zero_result(s));
    }
    let upper = search.terminal_bound(&ArcSet::default());
    if upper == 0 {
        return Ok(zero_result(s));
    }
    let mut refuted = upper + 1;
    for level in (1..=upper).rev() {
        match search.decide(level) {
            Ok(Some(idx)) => {
                let parts: Vec<Subgraph> = idx
                    .iter()
                    .map(|&i| cand_to_subgraph(ctx, &search.pool.cands[i as usize]))
                    .collect();
                let result = KappaResult {
                    value: level,
                    argmin_set: *s,
                    witness: Packing { s: *s, parts },
                    refuted_level: level + 1,
                };
                debug_assert!(verify_packing(ctx.d, &result.witness).is_ok());
                return Ok(result);
            }
            Ok(None) => refuted = level,
            Err(SolverError::Timeout { .. }) => {
                return Err(SolverError::Timeout {
                    lower_bound: 0,
                    upper_bound: refuted - 1,
                    s: Some(s.members()),
                })
            }
            Err(e) => return Err(e),
        }
    }
    // Candidates exist, so a single part always packs.
    unreachable!("level 1 must be feasible when candidates exist");
}

/// Maximum number of internally disjoint strong subgraphs of `d`
/// containing `s`, with a witness packing and the refuted level above.
pub fn kappa_s(d: &Digraph, s: &VertexSet, cfg: &SolverConfig) -> Result<KappaResult, SolverError> {
    validate_s(d, s)?;
    let ctx = Ctx::new(d, *cfg)?;
    kappa_s_inner(&ctx, s, &ArcSet::default())
}

/// Decides whether `level` internally disjoint strong subgraphs
/// containing `s` exist; `Some` carries a witness, `None` is an
/// exhaustive refutation.
pub fn kappa_s_decision(
    d: &Digraph,
    s: &VertexSet,
    level: usize,
    cfg: &SolverConfig,
) -> Result<Option<Packing>, SolverError> {
    validate_s(d, s)?;
    if level == 0 {
        return Err(SolverError::LevelTooSmall);
    }
    let ctx = Ctx::new(d, *cfg)?;
    let mut search = search_for(&ctx, s.mask(), &ArcSet::default())?;
    match search.decide(level) {
        Ok(Some(idx)) => {
            let parts: Vec<Subgraph> = idx
                .iter()
                .map(|&i| cand_to_subgraph(&ctx, &search.pool.cands[i as usize]))
                .collect();
            Ok(Some(Packing { s: *s, parts }))
        }
        Ok(None) => Ok(None),
        Err(SolverError::Timeout { upper_bound, .. }) => Err(SolverError::Timeout {
            lower_bound: 0,
            upper_bound,
            s: Some(s.members()),
        }),
        Err(e) => Err(e),
    }
}

/// All arc-minimal strong subgraphs of `d` containing `s`, the exact
/// candidate space the packing search runs over.
pub fn enumerate_candidates(
    d: &Digraph,
    s: &VertexSet,
    cfg: &SolverConfig,
) -> Result<Vec<Subgraph>, SolverError> {
    validate_s(d, s)?;
    let ctx = Ctx::new(d, *cfg)?;
    let cands = gather(&ctx, s.mask(), &ArcSet::default())?;
    Ok(cands.iter().map(|c| cand_to_subgraph(&ctx, c)).collect())
}

fn combinations_lex(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(k)
}

fn kappa_k_banned(ctx: &Ctx, k: usize, banned: &ArcSet) -> Result<KappaResult, SolverError> {
    let n = ctx.d.order();
    // A non-strong digraph always has a terminal set spread over two
    // strong components, so the minimum is 0.
    let (eff_out, eff_in) = ctx.effective_adjacency(banned);
    let all = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let strong = mask_reach(&eff_out, 1, all) == all && mask_reach(&eff_in, 1, all) == all;
    if !strong {
        let deleted: Vec<(usize, usize)> = banned.ids().map(|id| ctx.arcs[id]).collect();
        let residual = ctx.d.delete_arcs(&deleted).expect("banned arcs present");
        let comp = component_ids(&residual);
        for s in combinations_lex(n, k) {
            if s.iter().any(|&v| comp[v] != comp[s[0]]) {
                return Ok(zero_result(&VertexSet::new(s).unwrap()));
            }
        }
        unreachable!("a non-strong digraph has a component-crossing k-set");
    }
    let subsets: Vec<Vec<usize>> = combinations_lex(n, k).collect();
    let results: Vec<Result<KappaResult, SolverError>> = subsets
        .par_iter()
        .map(|s| kappa_s_inner(ctx, &VertexSet::new(s.iter().copied()).unwrap(), banned))
        .collect();
    let mut best: Option<KappaResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one k-subset"))
}

/// Strong subgraph `k`-connectivity: the minimum of [`kappa_s`] over
/// all `k`-subsets, reporting the lexicographically least minimizer
/// with its witness.
pub fn kappa_k(d: &Digraph, k: usize, cfg: &SolverConfig) -> Result<KappaResult, SolverError> {
    if k < 2 || k > d.order() {
        return Err(SolverError::KOutOfRange { k, n: d.order() });
    }
    let ctx = Ctx::new(d, *cfg)?;
    kappa_k_banned(&ctx, k, &ArcSet::default())
}

/// Exact `kappa_k` of every single-arc deletion, keyed by the deleted
/// arc. Each arc is solved independently against the shared candidate
/// atlas.
pub fn kappa_k_after_deletions(
    d: &Digraph,
    k: usize,
    cfg: &SolverConfig,
) -> Result<BTreeMap<(usize, usize), usize>, SolverError> {
    if k < 2 || k > d.order() {
        return Err(SolverError::KOutOfRange { k, n: d.order() });
    }
    let ctx = Ctx::new(d, *cfg)?;
    let arcs: Vec<(usize, usize)> = d.arcs().collect();
    let results: Vec<Result<usize, SolverError>> = arcs
        .par_iter()
        .map(|&(u, v)| {
            let mut banned = ArcSet::default();
            banned.insert(ctx.id_of(u, v));
            kappa_k_banned(&ctx, k, &banned).map(|r| r.value)
        })
        .collect();
    let mut map = BTreeMap::new();
    for (arc, r) in arcs.into_iter().zip(results) {
        map.insert(arc, r?);
    }
    Ok(map)
}

/// Brute-force oracle: filters every arc subset of `d` for
/// "strong and contains `s`", then searches the largest pairwise
/// compatible family over that raw list. No minimality reduction is
/// used anywhere; only counting prunes. Exponential, capped at 5
/// vertices.
pub fn kappa_s_bruteforce(d: &Digraph, s: &VertexSet) -> Result<usize, SolverError> {
    const CAP: usize = 5;
    validate_s(d, s)?;
    let n = d.order();
    if n > CAP {
        return Err(SolverError::OracleTooLarge { n, cap: CAP });
    }
    let arcs: Vec<(usize, usize)> = d.arcs().collect();
    let m = arcs.len();
    let s_mask = s.mask();

    let mut items: Vec<(u64, u32)> = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let mut verts = 0u64;
        let mut out = [0u64; CAP];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                verts |= (1u64 << u) | (1u64 << v);
                out[u] |= 1u64 << v;
            }
        }
        if s_mask & !verts != 0 {
            continue;
        }
        let start = 1u64 << verts.trailing_zeros();
        if mask_reach(&out, start, verts) != verts {
            continue;
        }
        let mut inn = [0u64; CAP];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                inn[v] |= 1u64 << u;
            }
        }
        if mask_reach(&inn, start, verts) != verts {
            continue;
        }
        items.push((verts, mask));
    }
    items.sort_unstable_by_key(|&(_, mask)| (mask.count_ones(), mask));

    // Arc masks incident to each terminal, for a counting bound: every
    // part consumes one out-arc and one in-arc at every terminal.
    let mut out_at = vec![0u32; CAP];
    let mut in_at = vec![0u32; CAP];
    for (i, &(u, v)) in arcs.iter().enumerate() {
        out_at[u] |= 1 << i;
        in_at[v] |= 1 << i;
    }
    let terminals: Vec<usize> = bits(s_mask).collect();

    struct Oracle<'a> {
        items: &'a [(u64, u32)],
        s_mask: u64,
        terminals: &'a [usize],
        out_at: &'a [u32],
        in_at: &'a [u32],
        best: usize,
    }

    impl Oracle<'_> {
        fn run(
            &mut self,
            from: usize,
            used_off: u64,
            used_arcs: u32,
            arcs_left: usize,
            depth: usize,
        ) {
            if depth > self.best {
                self.best = depth;
            }
            // Every further part needs two fresh arcs and a fresh
            // out/in arc at each terminal.
            if depth + arcs_left / 2 <= self.best {
                return;
            }
            let degree_room = self
                .terminals
                .iter()
                .map(|&s| {
                    let o = (self.out_at[s] & !used_arcs).count_ones() as usize;
                    let i = (self.in_at[s] & !used_arcs).count_ones() as usize;
                    o.min(i)
                })
                .min()
                .unwrap_or(0);
            if depth + degree_room <= self.best {
                return;
            }
            for i in from..self.items.len() {
                if depth + (self.items.len() - i) <= self.best {
                    break;
                }
                let (verts, mask) = self.items[i];
                if verts & used_off != 0 || mask & used_arcs != 0 {
                    continue;
                }
                self.run(
                    i + 1,
                    used_off | (verts & !self.s_mask),
                    used_arcs | mask,
                    arcs_left - mask.count_ones() as usize,
                    depth + 1,
                );
            }
        }
    }

    let mut oracle = Oracle {
        items: &items,
        s_mask,
        terminals: &terminals,
        out_at: &out_at,
        in_at: &in_at,
        best: 0,
    };
    oracle.run(0, 0, 0, m, 0);
    Ok(oracle.best)
}
