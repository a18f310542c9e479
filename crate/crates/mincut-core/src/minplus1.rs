//! Minimum+1 (s,t)-cut for directed multigraphs, given a maximum flow.
//!
//! On a graph whose only (s,t)-mincut is V \ {t}, a (λ+1) cut exists exactly
//! when some vertex is reachable from s through a single mandatory residual
//! arc; the dominator tree of the edge-split residual graph exposes those
//! arcs as marked internal vertices. Graphs with the mincut {s} go through
//! the transpose. General graphs are handled per DAG node on the quotient
//! `G_mu`, reduced to the one-mincut case with covering edges of weight `d`.

use crate::error::{Error, Result};
use crate::dominator::{dominator_tree, internal_marked_vertices, EdgeSplitGraph};
use crate::flow::{max_flow, residual, FlowAssignment, ResidualGraph};
use crate::graph::{cut_capacity, Cut, Graph, VertexId};
use crate::par;
use crate::pqdag::{build_g_mu, build_pq_dag};
use crate::second::non_transversal_candidate;

/// Arc-list view of a residual graph for the split/dominator machinery.
fn arc_triples(r: &ResidualGraph) -> Vec<(VertexId, VertexId, u64)> {
    r.arcs.iter().map(|a| (a.from, a.to, a.cap)).collect()
}

/// Mincut structure of `g` under maximum flow `f`: the canonical minimal
/// mincut (residual reachability from s) and the maximal one (complement of
/// reverse reachability from t).
fn mincut_extremes(r: &ResidualGraph) -> (Vec<VertexId>, Vec<VertexId>) {
    let fwd = r.reachable_from(r.s);
    let minimal: Vec<VertexId> = (0..r.n).filter(|&v| fwd[v]).collect();
    let mut radj = vec![Vec::new(); r.n];
    for a in &r.arcs {
        radj[a.to].push(a.from);
    }
    let mut seen = vec![false; r.n];
    let mut queue = vec![r.t];
    seen[r.t] = true;
    while let Some(v) = queue.pop() {
        for &w in &radj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    let maximal: Vec<VertexId> = (0..r.n).filter(|&v| !seen[v]).collect();
    (minimal, maximal)
}

/// One-mincut routine on an explicit arc list with terminals `s`, `t`:
/// returns the side of a cut with residual capacity exactly one, or None.
fn one_mincut_side(
    n: usize,
    arcs: &[(VertexId, VertexId, u64)],
    s: VertexId,
    t: VertexId,
    d: u64,
) -> Option<Vec<VertexId>> {
    let split = EdgeSplitGraph::from_arcs(n, arcs);
    let tree = dominator_tree(&split.adj, s);
    let internal = internal_marked_vertices(&split, &tree);
    let j = *internal.first()?;
    let u = split.marked[j].head;

    // Pin u next to t with effectively infinite arcs and take a maxflow;
    // every cut of the resulting value keeps u on the sink side.
    let mut pinned: Vec<(VertexId, VertexId, u64)> = arcs.to_vec();
    pinned.push((u, t, d));
    pinned.push((t, u, d));
    let h = Graph::directed(n, s, t, &pinned).unwrap();
    let (f, cut) = max_flow(&h);
    debug_assert_eq!(f.value, 1, "certified bottleneck must yield a unit cut");
    if f.value >= d {
        return None;
    }
    Some(cut.side)
}

/// Computes a (λ+1) (s,t)-cut of a graph that has exactly one (s,t)-mincut,
/// either V \ {t} or {s}; returns None when no such cut exists.
pub fn minplus1_one_mincut(g: &Graph, f: &FlowAssignment) -> Result<Option<Cut>> {
    let r = residual(g, f)?;
    if r.reachable_from(g.s())[g.t()] {
        return Err(Error::PreconditionViolated("flow is not maximum".into()));
    }
    let (minimal, maximal) = mincut_extremes(&r);
    if minimal != maximal {
        return Err(Error::PreconditionViolated(
            "graph has more than one (s,t)-mincut".into(),
        ));
    }
    let all_but_t: Vec<VertexId> = (0..g.n()).filter(|&v| v != g.t()).collect();
    let d = g.total_capacity().max(2);

    let side = if minimal == all_but_t {
        one_mincut_side(g.n(), &arc_triples(&r), g.s(), g.t(), d)
    } else if minimal == vec![g.s()] {
        // Transpose: reverse every arc and swap the terminals, then map the
        // returned side back through complementation.
        let reversed: Vec<(VertexId, VertexId, u64)> =
            r.arcs.iter().map(|a| (a.to, a.from, a.cap)).collect();
        one_mincut_side(g.n(), &reversed, g.t(), g.s(), d).map(|side| {
            let inside: std::collections::BTreeSet<VertexId> = side.into_iter().collect();
            (0..g.n()).filter(|v| !inside.contains(v)).collect()
        })
    } else {
        return Err(Error::PreconditionViolated(
            "the unique (s,t)-mincut is neither V \\ {t} nor {s}".into(),
        ));
    };

    match side {
        None => Ok(None),
        Some(side) => {
            let cut = cut_capacity(g, &side)?;
            debug_assert_eq!(cut.capacity, f.value + 1);
            Ok(Some(cut))
        }
    }
}

/// Computes a minimum+1 (s,t)-cut of a directed multigraph, if one exists.
pub fn minplus1(g: &Graph, f: &FlowAssignment) -> Result<Option<Cut>> {
    if !g.is_directed() {
        return Err(Error::DirectedRequired);
    }
    let lambda = f.value;
    let r = residual(g, f)?;
    let dag = build_pq_dag(g, f)?;
    let d = g.total_capacity().max(2);

    let mut sides: Vec<Vec<VertexId>> = Vec::new();

    // Cuts that respect every node: a node-respecting cut of residual
    // capacity exactly one.
    if let Some((cut, capacity)) = non_transversal_candidate(g, &dag, lambda) {
        if capacity == lambda + 1 {
            sides.push(cut.side);
        }
    }

    // Cuts that subdivide a node, via the covering reduction on G_mu.
    let nodes: Vec<usize> = (0..dag.node_count()).collect();
    let per_node = par::map(&nodes, |&nd| {
        if dag.nodes[nd].len() < 2 {
            return Vec::new();
        }
        let gmu = build_g_mu(&dag, &r, nd);
        let zero = FlowAssignment::zero(&gmu.graph);
        let mut found = Vec::new();
        if dag.nodes[nd].contains(&g.s()) || dag.nodes[nd].contains(&g.t()) {
            if let Ok(Some(cut)) = minplus1_one_mincut(&gmu.graph, &zero) {
                found.push(gmu.expand(&cut.side));
            }
        } else {
            let u = *gmu
                .members
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != gmu.graph.s() && q != gmu.graph.t())
                .flat_map(|(_, m)| m.iter())
                .min()
                .expect("internal node has members");
            let u_q = gmu.to_quotient[u];
            let (g_in, _) = gmu.graph.add_edge(gmu.graph.s(), u_q, d).unwrap();
            let (g_out, _) = gmu.graph.add_edge(u_q, gmu.graph.t(), d).unwrap();
            for forced in [g_in, g_out] {
                let zero = FlowAssignment::zero(&forced);
                if let Ok(Some(cut)) = minplus1_one_mincut(&forced, &zero) {
                    found.push(gmu.expand(&cut.side));
                }
            }
        }
        found
    });
    for found in per_node {
        sides.extend(found);
    }

    // Accept only genuine λ+1 cuts and report the lexicographically
    // smallest side for determinism.
    let mut valid: Vec<Vec<VertexId>> = sides
        .into_iter()
        .filter(|side| side.contains(&g.s()) && !side.contains(&g.t()))
        .filter(|side| {
            cut_capacity(g, side).map(|c| c.capacity == lambda + 1).unwrap_or(false)
        })
        .collect();
    valid.sort();
    match valid.into_iter().next() {
        None => Ok(None),
        Some(side) => Ok(Some(cut_capacity(g, &side)?)),
    }
}
