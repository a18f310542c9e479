//! Deterministic global mincut for directed weighted graphs, and both
//! directions of the equivalence with second (s,t)-mincut.

use crate::error::{Error, Result};
use crate::graph::{cut_capacity, Graph, VertexId};
use crate::flow::max_flow;
use crate::par;
use crate::pqdag::build_pq_dag;
use crate::second::SecondMincutResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalCutResult {
    /// Sorted side of the cut (nonempty proper subset of the vertices).
    pub side: Vec<VertexId>,
    pub capacity: u64,
    /// Maximum-flow computations consumed.
    pub maxflow_calls: u64,
}

/// Minimum outgoing capacity over all nonempty proper vertex subsets,
/// computed as the best of maxflow(v0 -> u) and maxflow(u -> v0) over every
/// u for the fixed pivot v0 = 0. Always runs exactly 2(n-1) maxflows.
///
/// A capacity of zero is a valid outcome: it happens exactly when the graph
/// is not strongly connected.
pub fn global_mincut(g: &Graph) -> GlobalCutResult {
    assert!(g.n() >= 2, "global mincut needs at least two vertices");
    let pivot: VertexId = 0;
    let others: Vec<VertexId> = (1..g.n()).collect();
    let per_u = par::map(&others, |&u| {
        let fwd = max_flow(&g.with_terminals(pivot, u).unwrap());
        let bwd = max_flow(&g.with_terminals(u, pivot).unwrap());
        [fwd, bwd]
    });
    let mut best: Option<(u64, Vec<VertexId>)> = None;
    for pair in per_u {
        for (_, cut) in pair {
            if best.as_ref().is_none_or(|(cap, _)| cut.capacity < *cap) {
                best = Some((cut.capacity, cut.side));
            }
        }
    }
    let (capacity, side) = best.expect("n >= 2 yields at least one candidate");
    GlobalCutResult {
        side,
        capacity,
        maxflow_calls: 2 * (g.n() as u64 - 1),
    }
}

/// Computes a global mincut of `g` through one second (s,t)-mincut
/// computation, after adding isolated dummy terminals.
///
/// When the augmented graph has three or more (s1,t1)-mincuts (the input is
/// not strongly connected) the answer is read off a topological suffix of
/// its DAG; otherwise the second mincut of the augmented graph, minus the
/// dummy source, is a global mincut.
pub fn global_mincut_via_second_mincut(
    g: &Graph,
    second: &dyn Fn(&Graph) -> Result<SecondMincutResult>,
) -> Result<GlobalCutResult> {
    let n = g.n();
    let s1 = n;
    let t1 = n + 1;
    let links: Vec<(VertexId, VertexId, u64)> =
        g.edges().iter().map(|e| (e.u, e.v, e.cap)).collect();
    let g1 = if g.is_directed() {
        Graph::directed(n + 2, s1, t1, &links).unwrap()
    } else {
        Graph::undirected(n + 2, s1, t1, &links).unwrap()
    };

    let (f1, _) = max_flow(&g1);
    debug_assert_eq!(f1.value, 0);
    let dag = build_pq_dag(&g1, &f1)?;

    if dag.node_count() >= 4 {
        // Case 1: some zero-capacity global cut exists. The suffix holding
        // the last two nodes is a zero-capacity (s1,t1)-cut; stripping s1
        // leaves a zero-capacity global cut of g.
        let side: Vec<VertexId> = dag
            .suffix_side(dag.node_count() - 2)
            .into_iter()
            .filter(|&v| v != s1)
            .collect();
        let cut = cut_capacity(g, &side)?;
        debug_assert_eq!(cut.capacity, 0);
        return Ok(GlobalCutResult { side: cut.side, capacity: cut.capacity, maxflow_calls: 1 });
    }

    // Case 2: {s1} and {s1} ∪ V are the only (s1,t1)-mincuts, so any second
    // (s1,t1)-mincut subdivides V.
    let result = second(&g1)?;
    let side: Vec<VertexId> = result.cut.side.into_iter().filter(|&v| v != s1).collect();
    if side.is_empty() || side.len() == n {
        return Err(Error::PreconditionViolated(
            "second mincut of the augmented graph is a trivial cut".into(),
        ));
    }
    let cut = cut_capacity(g, &side)?;
    Ok(GlobalCutResult {
        side: cut.side,
        capacity: cut.capacity,
        maxflow_calls: 1 + result.maxflow_calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::enumerate_cuts;

    #[test]
    fn two_cycle_has_capacity_one() {
        let g = Graph::directed(2, 0, 1, &[(0, 1, 1), (1, 0, 1)]).unwrap();
        let r = global_mincut(&g);
        assert_eq!(r.capacity, 1);
        assert_eq!(r.maxflow_calls, 2);
    }

    #[test]
    fn two_core_scc() {
        // The strongly connected middle of the TWO fixture.
        let g = Graph::directed(2, 0, 1, &[(0, 1, 1), (1, 0, 1)]).unwrap();
        assert_eq!(global_mincut(&g).capacity, 1);
    }

    #[test]
    fn dag_has_zero_global_mincut() {
        let g = Graph::directed(3, 0, 2, &[(0, 1, 2), (1, 2, 3)]).unwrap();
        let r = global_mincut(&g);
        assert_eq!(r.capacity, 0);
        assert_eq!(r.maxflow_calls, 4);
    }

    #[test]
    fn matches_enumeration_on_random_graphs() {
        let mut rng = fixtures::rng(23);
        for _ in 0..30 {
            let g = fixtures::random_directed(&mut rng, 6, 0.4, 4);
            let inv = enumerate_cuts(&g, true).unwrap();
            let r = global_mincut(&g);
            assert_eq!(r.capacity, inv.lambda);
            let recomputed = cut_capacity(&g, &r.side).unwrap();
            assert_eq!(recomputed.capacity, r.capacity);
        }
    }

    #[test]
    fn strong_connectivity_iff_positive_mincut() {
        let mut rng = fixtures::rng(29);
        for _ in 0..30 {
            let g = fixtures::random_directed(&mut rng, 6, 0.35, 3);
            let arcs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            let comp = crate::pqdag::strongly_connected_components(g.n(), &arcs);
            let strongly_connected = comp.iter().all(|&c| c == comp[0]);
            let r = global_mincut(&g);
            assert_eq!(strongly_connected, r.capacity > 0);
        }
    }
}
