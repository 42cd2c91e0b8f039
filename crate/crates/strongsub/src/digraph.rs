//! Simple digraph values on at most 64 labeled vertices.
//!
//! A [`Digraph`] is an immutable value: editing operations return new
//! digraphs. Vertices are `0..n` and adjacency is kept as one `u64`
//! bitmask per vertex in each direction, so neighborhood queries and
//! set intersections are single word operations. Arc iteration is
//! always lexicographic, which keeps every downstream computation
//! deterministic.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hard cap on the vertex count; adjacency rows are single machine words.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count must be between 1 and {MAX_VERTICES}, got {0}")]
    BadOrder(usize),
    #[error("vertex {v} out of range for order {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("loop at vertex {0} is not allowed")]
    LoopArc(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("arc ({0}, {1}) is not present")]
    ArcNotPresent(usize, usize),
    #[error("vertex set must not be empty")]
    EmptyVertexSet,
    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),
    #[error("vertices x and y must differ, both are {0}")]
    IdenticalVertices(usize),
    #[error("digraph is not strong")]
    NotStrong,
    #[error("operation supports at most {cap} vertices, digraph has {n}")]
    OrderTooLarge { n: usize, cap: usize },
}

/// A set of vertices, stored as a bitmask. Members are reported in
/// increasing order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    mask: u64,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Result<Self, GraphError> {
        let mut mask = 0u64;
        for v in members {
            if v >= MAX_VERTICES {
                return Err(GraphError::VertexOutOfRange { v, n: MAX_VERTICES });
            }
            let bit = 1u64 << v;
            if mask & bit != 0 {
                return Err(GraphError::DuplicateVertex(v));
            }
            mask |= bit;
        }
        if mask == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        Ok(VertexSet { mask })
    }

    /// Builds the set from a bitmask. The mask must be nonzero.
    pub fn from_mask(mask: u64) -> Result<Self, GraphError> {
        if mask == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        Ok(VertexSet { mask })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.mask & (1u64 << v) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// True when every member is a vertex of a digraph of order `n`.
    pub fn fits_order(&self, n: usize) -> bool {
        n >= MAX_VERTICES || self.mask >> n == 0
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet{:?}", self.members())
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        VertexSet::new(members).map_err(D::Error::custom)
    }
}

/// Iterates the set bits of a mask in increasing order.
pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        }
    })
}

/// A simple directed graph: no loops, no parallel arcs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Digraph {
    /// The arcless digraph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::BadOrder(n));
        }
        Ok(Digraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
        })
    }

    /// Builds a digraph from an explicit arc list. Loops, duplicate arcs
    /// and out-of-range endpoints are rejected.
    pub fn from_arc_list(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut d = Digraph::empty(n)?;
        for &(u, v) in arcs {
            d.insert_arc(u, v)?;
        }
        Ok(d)
    }

    fn insert_arc(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::LoopArc(u));
        }
        if self.out[u] & (1u64 << v) != 0 {
            return Err(GraphError::DuplicateArc(u, v));
        }
        self.out[u] |= 1u64 << v;
        self.inn[v] |= 1u64 << u;
        Ok(())
    }

    /// Biorientation of an undirected edge list: every edge `{u, v}`
    /// becomes the two arcs `(u, v)` and `(v, u)`.
    pub fn biorientation(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut d = Digraph::empty(n)?;
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            if u < d.n && v < d.n && d.out[u] & (1u64 << v) != 0 {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            d.insert_arc(u, v)?;
            d.insert_arc(v, u)?;
        }
        Ok(d)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u] & (1u64 << v) != 0
    }

    /// Out-neighborhood of `u` as a bitmask.
    pub fn out_mask(&self, u: usize) -> u64 {
        self.out[u]
    }

    /// In-neighborhood of `u` as a bitmask.
    pub fn in_mask(&self, u: usize) -> u64 {
        self.inn[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].count_ones() as usize
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.inn[u].count_ones() as usize
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.out[u]).map(move |v| (u, v)))
    }

    /// Minimum out-degree and minimum in-degree.
    pub fn min_degrees(&self) -> (usize, usize) {
        let dplus = (0..self.n).map(|u| self.out_degree(u)).min().unwrap_or(0);
        let dminus = (0..self.n).map(|u| self.in_degree(u)).min().unwrap_or(0);
        (dplus, dminus)
    }

    /// Returns `self` minus the given arcs. Every arc must be present.
    pub fn delete_arcs(&self, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut d = self.clone();
        for &(u, v) in arcs {
            if !d.has_arc(u, v) {
                return Err(GraphError::ArcNotPresent(u, v));
            }
            d.out[u] &= !(1u64 << v);
            d.inn[v] &= !(1u64 << u);
        }
        Ok(d)
    }

    /// Returns `self` plus the given arcs; rejects arcs already present.
    pub fn add_arcs(&self, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut d = self.clone();
        for &(u, v) in arcs {
            d.insert_arc(u, v)?;
        }
        Ok(d)
    }

    /// Subgraph induced by a vertex set, relabeled to `0..|W|`.
    /// The second component maps each new index back to the old vertex.
    pub fn induced_subgraph(&self, w: &VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        if !w.fits_order(self.n) {
            let v = w.members().into_iter().find(|&v| v >= self.n).unwrap();
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        let old_of_new = w.members();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut d = Digraph::empty(old_of_new.len())?;
        for (&u_old, u_new) in old_of_new.iter().zip(0..) {
            for v_old in bits(self.out[u_old] & w.mask()) {
                d.insert_arc(u_new, new_of_old[v_old])?;
            }
        }
        Ok((d, old_of_new))
    }

    /// Subgraph induced by an arc set: exactly those arcs plus their
    /// endpoints, relabeled to consecutive indices.
    pub fn arc_induced_subgraph(
        &self,
        arcs: &[(usize, usize)],
    ) -> Result<(Digraph, Vec<usize>), GraphError> {
        let mut touched = 0u64;
        for &(u, v) in arcs {
            if !self.has_arc(u, v) {
                return Err(GraphError::ArcNotPresent(u, v));
            }
            touched |= (1u64 << u) | (1u64 << v);
        }
        if touched == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        let old_of_new = bits(touched).collect::<Vec<_>>();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut d = Digraph::empty(old_of_new.len())?;
        for &(u, v) in arcs {
            d.insert_arc(new_of_old[u], new_of_old[v])?;
        }
        Ok((d, old_of_new))
    }

    /// Edge set of the underlying undirected graph, sorted, each edge
    /// reported as `(min, max)`.
    pub fn underlying_graph(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in bits((self.out[u] | self.inn[u]) >> u >> 1) {
                edges.push((u, u + 1 + v));
            }
        }
        edges
    }

    /// True iff for every arc `(u, v)` the reverse arc is present too.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.out[u] == self.inn[u])
    }

    /// Text serialization: order on the first line, one arc per line,
    /// lexicographic.
    pub fn to_dg_string(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.arcs() {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    /// DOT export with vertex indices as labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph D {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {};\n", v));
        }
        for (u, v) in self.arcs() {
            s.push_str(&format!("  {} -> {};\n", u, v));
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Digraph(n={}, arcs={:?})",
            self.n,
            self.arcs().collect::<Vec<_>>()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Serialize for Digraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DigraphRepr {
            n: self.n,
            arcs: self.arcs().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DigraphRepr::deserialize(deserializer)?;
        Digraph::from_arc_list(repr.n, &repr.arcs).map_err(D::Error::custom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgParseError {
    #[error("line {line}: expected two vertex indices, got {text:?}")]
    BadArcLine { line: usize, text: String },
    #[error("line {line}: bad vertex count {text:?}")]
    BadOrderLine { line: usize, text: String },
    #[error("missing vertex count line")]
    MissingOrder,
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

/// Parses the `.dg` text format. `#` starts a comment, blank lines are
/// skipped, the first data line is the order, every later data line is
/// one arc `u v`.
pub fn parse_dg(input: &str) -> Result<Digraph, DgParseError> {
    let mut d: Option<Digraph> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let text = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if text.is_empty() {
            continue;
        }
        match d {
            None => {
                let n = text
                    .parse::<usize>()
                    .map_err(|_| DgParseError::BadOrderLine {
                        line,
                        text: text.to_string(),
                    })?;
                d = Some(Digraph::empty(n).map_err(|source| DgParseError::Graph { line, source })?);
            }
            Some(ref mut d) => {
                let mut it = text.split_whitespace();
                let (u, v) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => {
                        let u = a.parse::<usize>();
                        let v = b.parse::<usize>();
                        match (u, v) {
                            (Ok(u), Ok(v)) => (u, v),
                            _ => {
                                return Err(DgParseError::BadArcLine {
                                    line,
                                    text: text.to_string(),
                                })
                            }
                        }
                    }
                    _ => {
                        return Err(DgParseError::BadArcLine {
                            line,
                            text: text.to_string(),
                        })
                    }
                };
                d.insert_arc(u, v)
                    .map_err(|source| DgParseError::Graph { line, source })?;
            }
        }
    }
    d.ok_or(DgParseError::MissingOrder)
}

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
/// `perm[old]` is the image of vertex `old`.
pub(crate) fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Packs the adjacency matrix under a relabeling into a single word
/// (row-major); only valid for `n <= 8`.
fn encode_under(d: &Digraph, perm: &[usize]) -> u64 {
    let n = d.order();
    let mut bits_out = 0u64;
    for (u, v) in d.arcs() {
        bits_out |= 1u64 << (perm[u] * n + perm[v]);
    }
    bits_out
}

/// Canonical key of a digraph on at most 8 vertices: the minimum packed
/// adjacency matrix over all vertex relabelings. Two digraphs of equal
/// order are isomorphic iff their keys match.
pub fn canonical_key(d: &Digraph) -> Result<u64, GraphError> {
    let n = d.order();
    if n > 8 {
        return Err(GraphError::OrderTooLarge { n, cap: 8 });
    }
    let mut best = u64::MAX;
    for_each_permutation(n, |perm| {
        let code = encode_under(d, perm);
        if code < best {
            best = code;
        }
    });
    Ok(best)
}

/// The lexicographically least relabeling of `d` (the digraph whose
/// packed adjacency matrix equals [`canonical_key`]).
pub fn canonical_form(d: &Digraph) -> Result<Digraph, GraphError> {
    let n = d.order();
    let key = canonical_key(d)?;
    let mut arcs = Vec::with_capacity(d.arc_count());
    for u in 0..n {
        for v in 0..n {
            if key & (1u64 << (u * n + v)) != 0 {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arc_list(n, &arcs)
}

/// Searches for an isomorphism from `a` to `b`. Returns the vertex
/// bijection `map` with `map[u]` the image of `u`, or `None`.
///
/// Backtracking over degree-compatible assignments; meant for small
/// orders (roughly `n <= 8`), where the degree pruning keeps the
/// search negligible.
pub fn is_isomorphic(a: &Digraph, b: &Digraph) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.arc_count() != b.arc_count() {
        return None;
    }
    let n = a.order();
    let profile = |d: &Digraph| {
        let mut p: Vec<(usize, usize)> =
            (0..n).map(|v| (d.out_degree(v), d.in_degree(v))).collect();
        p.sort_unstable();
        p
    };
    if profile(a) != profile(b) {
        return None;
    }

    // Assign vertices of `a` in order of decreasing degree so conflicts
    // surface early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(a.out_degree(v) + a.in_degree(v)));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn assign(
        a: &Digraph,
        b: &Digraph,
        order: &[usize],
        pos: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let u = order[pos];
        for cand in 0..b.order() {
            if used[cand]
                || a.out_degree(u) != b.out_degree(cand)
                || a.in_degree(u) != b.in_degree(cand)
            {
                continue;
            }
            let ok = order[..pos].iter().all(|&w| {
                a.has_arc(u, w) == b.has_arc(cand, map[w])
                    && a.has_arc(w, u) == b.has_arc(map[w], cand)
            });
            if !ok {
                continue;
            }
            map[u] = cand;
            used[cand] = true;
            if assign(a, b, order, pos + 1, map, used) {
                return true;
            }
            map[u] = usize::MAX;
            used[cand] = false;
        }
        false
    }

    if assign(a, b, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_builds() {
        let d = Digraph::from_arc_list(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.order(), 3);
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn two_cycle_builds() {
        let d = Digraph::from_arc_list(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(d.arc_count(), 2);
        assert!(d.is_symmetric());
    }

    #[test]
    fn loop_rejected() {
        assert_eq!(
            Digraph::from_arc_list(3, &[(0, 0)]),
            Err(GraphError::LoopArc(0))
        );
    }

    #[test]
    fn duplicate_arc_rejected() {
        assert_eq!(
            Digraph::from_arc_list(3, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateArc(0, 1))
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Digraph::from_arc_list(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
    }

    #[test]
    fn delete_identity_and_missing() {
        let d = Digraph::from_arc_list(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.delete_arcs(&[]).unwrap(), d);
        assert_eq!(
            d.delete_arcs(&[(1, 0)]),
            Err(GraphError::ArcNotPresent(1, 0))
        );
    }

    #[test]
    fn biorientation_of_path() {
        let d = Digraph::biorientation(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(d.arc_count(), 4);
        assert!(d.is_symmetric());
        let d0 = Digraph::biorientation(4, &[]).unwrap();
        assert_eq!(d0.arc_count(), 0);
    }

    #[test]
    fn biorientation_of_k4() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let d = Digraph::biorientation(4, &edges).unwrap();
        assert_eq!(d.arc_count(), 12);
    }

    #[test]
    fn induced_on_pair_of_complete() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let d = Digraph::biorientation(4, &edges).unwrap();
        let (sub, back) = d
            .induced_subgraph(&VertexSet::new([0, 1]).unwrap())
            .unwrap();
        assert_eq!(sub.arc_count(), 2);
        assert_eq!(back, vec![0, 1]);
    }

    #[test]
    fn arc_induced_triangle_and_two_cycles() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v)))
            .collect();
        let d = Digraph::biorientation(4, &edges).unwrap();
        let (sub, back) = d.arc_induced_subgraph(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(sub.order(), 3);
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(back, vec![0, 1, 2]);

        let (sub2, _) = d
            .arc_induced_subgraph(&[(0, 1), (1, 0), (2, 3), (3, 2)])
            .unwrap();
        assert_eq!(sub2.order(), 4);
        assert_eq!(sub2.arc_count(), 4);
    }

    #[test]
    fn min_degrees_examples() {
        for n in 2..=7 {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .collect();
            let d = Digraph::biorientation(n, &edges).unwrap();
            assert_eq!(d.min_degrees(), (n - 1, n - 1));
        }
        let c6 = Digraph::from_arc_list(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(c6.min_degrees(), (1, 1));

        let edges: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
            .collect();
        let k5 = Digraph::biorientation(5, &edges).unwrap();
        let d = k5.delete_arcs(&[(0, 1), (1, 0)]).unwrap();
        assert_eq!(d.min_degrees(), (3, 3));
    }

    #[test]
    fn underlying_graph_round_trips_tree() {
        let tree = [(0, 1), (1, 2), (1, 3)];
        let d = Digraph::biorientation(4, &tree).unwrap();
        assert_eq!(d.underlying_graph(), tree.to_vec());
    }

    #[test]
    fn iso_finds_cycle_relabeling() {
        let c4 = Digraph::from_arc_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c4b = Digraph::from_arc_list(4, &[(2, 0), (0, 3), (3, 1), (1, 2)]).unwrap();
        let map = is_isomorphic(&c4, &c4b).expect("isomorphic");
        for (u, v) in c4.arcs() {
            assert!(c4b.has_arc(map[u], map[v]));
        }
        let two_cycles = Digraph::from_arc_list(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert!(is_isomorphic(&c4, &two_cycles).is_none());
    }

    #[test]
    fn iso_on_complete_minus_triangles() {
        let edges: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
            .collect();
        let k5 = Digraph::biorientation(5, &edges).unwrap();
        let a = k5.delete_arcs(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        let b = k5.delete_arcs(&[(2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(is_isomorphic(&a, &b).is_some());
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
    }

    #[test]
    fn dg_parse_and_serialize() {
        let text = "# sample\n3\n0 1\n1 2\n2 0\n";
        let d = parse_dg(text).unwrap();
        assert_eq!(d.arc_count(), 3);
        assert_eq!(d.to_dg_string(), "3\n0 1\n1 2\n2 0\n");
        assert_eq!(parse_dg(&d.to_dg_string()).unwrap(), d);

        assert!(matches!(parse_dg(""), Err(DgParseError::MissingOrder)));
        assert!(matches!(
            parse_dg("3\n0\n"),
            Err(DgParseError::BadArcLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_dg("3\n0 0\n"),
            Err(DgParseError::Graph {
                line: 2,
                source: GraphError::LoopArc(0)
            })
        ));
    }

    #[test]
    fn dot_lists_every_vertex() {
        let d = Digraph::from_arc_list(3, &[(0, 1)]).unwrap();
        let dot = d.to_dot();
        assert!(dot.contains("2;"));
        assert!(dot.contains("0 -> 1;"));
    }

    #[test]
    fn canonical_form_is_stable_representative() {
        let a = Digraph::from_arc_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = Digraph::from_arc_list(4, &[(1, 0), (0, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }
}
