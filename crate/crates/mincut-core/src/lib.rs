//! Graph-cuts toolkit: second minimum (s,t)-cuts, minimum+1 (s,t)-cuts,
//! anchor edges, a compact DAG structure for all minimum+1 cuts, and a
//! dual-edge sensitivity oracle for (s,t)-mincut, all on integer-capacitated
//! multigraphs and all verifiable at desk scale against a brute-force cut
//! enumeration oracle.
//!
//! The hot loops (cut enumeration, pivot sweeps, per-node fan-out) run on
//! rayon under the default `parallel` feature and fall back to sequential
//! iteration without it; results are identical either way.

pub mod anchors;
pub mod dominator;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod global;
pub mod graph;
pub mod minplus1;
pub mod oracle;
pub mod par;
pub mod pqdag;
pub mod second;
pub mod sensitivity;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{cut_capacity, consolidate_parallel_edges, contract, Contraction, ContractionMap, Cut, Edge, EdgeId, Graph, VertexId};
pub use flow::{cancel_flow_cycles, max_flow, reduce_flow_through_edge, residual, ArcKind, ArcOrigin, FlowAssignment, ResidualArc, ResidualGraph};
pub use pqdag::{build_g_mu, build_g_mu_undirected, build_pq_dag, DagArc, GMu, PqDag};
pub use oracle::{brute_anchors, brute_classify, enumerate_cuts, CutClass, CutInventory};
pub use global::{global_mincut, global_mincut_via_second_mincut, GlobalCutResult};
pub use second::{non_transversal_candidate, second_mincut, second_mincut_covering, SecondMincutResult, SecondMincutSource};
pub use dominator::{dominator_tree, DominatorTree, EdgeSplitGraph};
pub use minplus1::{minplus1, minplus1_one_mincut};
pub use anchors::{build_structure, check_min_plus1_flow_characterization, classify_cut, compute_anchors, zero_flow_forest, AnchorStructure, CutFlowProfile};
pub use sensitivity::{BaselineOracle, CompactOracle, QueryAnswer, QueryTrace};
