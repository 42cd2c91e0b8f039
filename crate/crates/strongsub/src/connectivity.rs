//! Classical digraph connectivity: strong components, strong vertex
//! connectivity with cut certificates, and minimal strong spanning
//! subgraphs.

use serde::{Deserialize, Serialize};

use crate::digraph::{bits, Digraph, GraphError};

/// Strong components as an ordered partition of the vertex set.
/// Components appear in a topological order of the condensation (arcs
/// run from earlier components to later ones); vertices inside a
/// component are sorted.
pub fn strong_components(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.order();
    let mut state = Tarjan {
        d,
        index: 0,
        idx: vec![usize::MAX; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v] == usize::MAX {
            state.visit(v);
        }
    }
    // Tarjan emits components in reverse topological order.
    state.comps.reverse();
    for comp in &mut state.comps {
        comp.sort_unstable();
    }
    state.comps
}

struct Tarjan<'a> {
    d: &'a Digraph,
    index: usize,
    idx: Vec<usize>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.idx[v] = self.index;
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for w in bits(self.d.out_mask(v)) {
            if self.idx[w] == usize::MAX {
                self.visit(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.idx[w]);
            }
        }
        if self.low[v] == self.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// Component id per vertex, numbered in the order of [`strong_components`].
pub fn component_ids(d: &Digraph) -> Vec<usize> {
    let comps = strong_components(d);
    let mut id = vec![usize::MAX; d.order()];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            id[v] = c;
        }
    }
    id
}

pub fn is_strong(d: &Digraph) -> bool {
    // Two mask sweeps beat running full Tarjan here.
    let n = d.order();
    let all = full_mask(n);
    reach_mask(d, 1, all, false) == all && reach_mask(d, 1, all, true) == all
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Vertices reachable from `start` (a mask) inside `within`, following
/// out-arcs, or in-arcs when `reverse`.
pub(crate) fn reach_mask(d: &Digraph, start: u64, within: u64, reverse: bool) -> u64 {
    let mut reached = start & within;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u64;
        for v in bits(frontier) {
            next |= if reverse { d.in_mask(v) } else { d.out_mask(v) };
        }
        next &= within & !reached;
        reached |= next;
        frontier = next;
    }
    reached
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutKind {
    VertexCut,
    Complete,
}

/// Witness for a strong connectivity value: either a vertex cut `Q`
/// whose removal leaves no path from `separated_pair.0` to
/// `separated_pair.1`, or the marker that the digraph is complete (in
/// which case the value is `n - 1` by convention).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutCertificate {
    pub kind: CutKind,
    pub cut: Vec<usize>,
    pub separated_pair: Option<(usize, usize)>,
}

impl CutCertificate {
    /// Re-checks the certificate against a digraph: after deleting the
    /// cut there must be no path between the separated pair.
    pub fn verifies(&self, d: &Digraph) -> bool {
        match self.kind {
            CutKind::Complete => {
                self.cut.is_empty() && d.arc_count() == d.order() * (d.order().saturating_sub(1))
            }
            CutKind::VertexCut => {
                let Some((u, v)) = self.separated_pair else {
                    return false;
                };
                let mut removed = 0u64;
                for &q in &self.cut {
                    if q >= d.order() || q == u || q == v {
                        return false;
                    }
                    removed |= 1u64 << q;
                }
                let within = full_mask(d.order()) & !removed;
                reach_mask(d, 1u64 << u, within, false) & (1u64 << v) == 0
            }
        }
    }
}

/// Maximum number of internally disjoint directed `x -> y` paths.
///
/// For non-adjacent pairs this is the Menger value, computed by
/// max-flow on the vertex-split network with unit vertex capacities.
/// For an adjacent pair the value is `n - 1` by convention (the direct
/// arc makes the pair inseparable); callers computing global
/// connectivity skip adjacent pairs entirely.
pub fn local_vertex_connectivity(d: &Digraph, x: usize, y: usize) -> Result<usize, GraphError> {
    let n = d.order();
    if x >= n {
        return Err(GraphError::VertexOutOfRange { v: x, n });
    }
    if y >= n {
        return Err(GraphError::VertexOutOfRange { v: y, n });
    }
    if x == y {
        return Err(GraphError::IdenticalVertices(x));
    }
    if d.has_arc(x, y) {
        return Ok(n - 1);
    }
    Ok(menger(d, x, y).0)
}

/// Max-flow on the split network; returns the value and the minimum
/// vertex cut as a mask.
fn menger(d: &Digraph, x: usize, y: usize) -> (usize, u64) {
    let n = d.order();
    // Node 2v is the in-copy of v, node 2v+1 the out-copy.
    let source = 2 * x + 1;
    let sink = 2 * y;
    let big = n as i32;

    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        if v != x && v != y {
            net.add_edge(2 * v, 2 * v + 1, 1);
        }
    }
    for (u, v) in d.arcs() {
        net.add_edge(2 * u + 1, 2 * v, big);
    }

    let flow = net.max_flow(source, sink);
    let reachable = net.residual_reachable(source);
    let mut cut = 0u64;
    for v in 0..n {
        if v != x && v != y && reachable[2 * v] && !reachable[2 * v + 1] {
            cut |= 1u64 << v;
        }
    }
    debug_assert_eq!(flow as usize, cut.count_ones() as usize);
    (flow as usize, cut)
}

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: i32) {
        let e = self.to.len();
        self.head[u].push(e);
        self.to.push(v);
        self.cap.push(cap);
        self.head[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> i32 {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path.
            let mut parent_edge = vec![usize::MAX; self.head.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(source);
            parent_edge[source] = usize::MAX - 1;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && parent_edge[v] == usize::MAX {
                        parent_edge[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if parent_edge[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck = i32::MAX;
            let mut v = sink;
            while v != source {
                let e = parent_edge[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = parent_edge[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }

    fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// Strong vertex connectivity with a witness.
///
/// For the complete digraph the value is `n - 1` with a `complete`
/// certificate; otherwise it is the minimum of the Menger values over
/// ordered non-adjacent pairs, with the first (lexicographic) pair
/// attaining the minimum reported together with its cut.
pub fn vertex_connectivity(d: &Digraph) -> (usize, CutCertificate) {
    let n = d.order();
    let mut best: Option<(usize, (usize, usize), u64)> = None;
    for x in 0..n {
        for y in 0..n {
            if x == y || d.has_arc(x, y) {
                continue;
            }
            let (val, cut) = menger(d, x, y);
            if best.as_ref().is_none_or(|(b, _, _)| val < *b) {
                best = Some((val, (x, y), cut));
                if val == 0 {
                    // Nothing beats an empty cut.
                    return finish(best);
                }
            }
        }
    }
    match best {
        None => (
            n - 1,
            CutCertificate {
                kind: CutKind::Complete,
                cut: Vec::new(),
                separated_pair: None,
            },
        ),
        some => finish(some),
    }
}

fn finish(best: Option<(usize, (usize, usize), u64)>) -> (usize, CutCertificate) {
    let (val, pair, cut) = best.unwrap();
    (
        val,
        CutCertificate {
            kind: CutKind::VertexCut,
            cut: bits(cut).collect(),
            separated_pair: Some(pair),
        },
    )
}

/// A spanning strong subgraph from which no further arc can be removed.
/// Arcs are tried for removal in lexicographic order, so the result is
/// deterministic. The output has between `n` and `2n - 2` arcs.
pub fn minimal_strong_spanning_subgraph(d: &Digraph) -> Result<Digraph, GraphError> {
    if !is_strong(d) {
        return Err(GraphError::NotStrong);
    }
    let mut current = d.clone();
    for arc in d.arcs().collect::<Vec<_>>() {
        let trial = current.delete_arcs(&[arc])?;
        if is_strong(&trial) {
            current = trial;
        }
    }
    Ok(current)
}

/// True iff the digraph is strong and every single-arc deletion
/// destroys strongness.
pub fn is_minimally_strong(d: &Digraph) -> bool {
    if !is_strong(d) {
        return false;
    }
    d.arcs()
        .all(|arc| !is_strong(&d.delete_arcs(&[arc]).unwrap()))
}
