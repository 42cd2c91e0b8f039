//! An exact-computation laboratory for strong subgraph connectivity of
//! digraphs.
//!
//! The crate computes, at desk scale and with machine-checkable
//! certificates:
//!
//! - `kappa_s`: the maximum number of internally disjoint strong
//!   subgraphs containing a terminal set `S`, with a witness packing
//!   and an exhaustively refuted level above it;
//! - `kappa_k`: the minimum of `kappa_s` over all `k`-subsets;
//! - classical strong vertex connectivity with cut certificates;
//! - the digraph families that realize the extremal behaviour of these
//!   parameters (complete digraphs minus structured arc sets, symmetric
//!   joins with explicit witness packings, unions of arc-disjoint
//!   Hamiltonian cycles, bioriented trees);
//! - exhaustive small-order verification: minimality tests, the
//!   characterization of minimally `(2, n-2)`-connected digraphs,
//!   classification of 3-arc deletion sets, and `f`/`F` extremal
//!   tables.
//!
//! Everything is deterministic: arc orders are lexicographic, random
//! sampling is seeded, and parallel sweeps merge in a fixed order.

pub mod connectivity;
pub mod digraph;
pub mod extremal;
pub mod generators;
pub mod packing;

pub use connectivity::{
    is_minimally_strong, is_strong, local_vertex_connectivity, minimal_strong_spanning_subgraph,
    strong_components, vertex_connectivity, CutCertificate, CutKind,
};
pub use digraph::{
    canonical_form, canonical_key, is_isomorphic, parse_dg, DgParseError, Digraph, GraphError,
    VertexSet,
};
pub use extremal::{
    characterization_predicate, check_f_upper_bounds, classify_three_arc_deletions,
    compute_f_f_upper, is_minimally_connected, verify_characterization, CharacterizationReport,
    DeletionClass, ExtremalTable, FBoundsReport, KappaCache, LabError, MinimalityReport,
    MinimalityVerdict, SearchSpace,
};
pub use generators::{
    complete_digraph, complete_minus_2cycle_matching, complete_minus_3cycle, directed_cycle,
    hamiltonian_decomposition, join_witness_packing, random_strong_digraph, symmetric_join,
    symmetric_tree, union_of_ham_cycles, FamilyError, FamilySpec, HamDecomposition, TreeShape,
};
pub use packing::{
    enumerate_candidates, kappa_k, kappa_k_after_deletions, kappa_s, kappa_s_bruteforce,
    kappa_s_decision, verify_packing, KappaResult, Packing, PackingViolation, SolverConfig,
    SolverError, Subgraph,
};
