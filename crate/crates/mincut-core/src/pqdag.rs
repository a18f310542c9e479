//! The Picard-Queyranne DAG over the residual graph: its closed node sets
//! are exactly the (s,t)-mincuts. Directed inputs additionally merge
//! everything reachable from the source node into it and everything that
//! reaches the sink node into it; undirected inputs keep the plain
//! condensation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::flow::{residual, ArcKind, ArcOrigin, FlowAssignment, ResidualGraph};
use crate::graph::{Edge, Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DagArc {
    pub from: usize,
    pub to: usize,
    pub cap: u64,
    pub origin: ArcOrigin,
    pub kind: ArcKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PqDag {
    /// Sorted vertex ids per node.
    pub nodes: Vec<Vec<VertexId>>,
    pub node_of: Vec<usize>,
    pub s_node: usize,
    pub t_node: usize,
    /// The terminal vertices the dag was built for.
    pub s: VertexId,
    pub t: VertexId,
    /// Residual arcs between distinct nodes; parallel arcs are kept.
    pub arcs: Vec<DagArc>,
    /// Topological order starting at the sink node and ending at the source
    /// node; arcs always go from earlier to later positions.
    pub topo: Vec<usize>,
    pub topo_pos: Vec<usize>,
}

impl PqDag {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Vertices of the topological suffix `topo[start..]`; every suffix that
    /// contains the source node and not the sink node is an (s,t)-mincut.
    pub fn suffix_side(&self, start: usize) -> Vec<VertexId> {
        let mut side: Vec<VertexId> = self.topo[start..]
            .iter()
            .flat_map(|&nd| self.nodes[nd].iter().copied())
            .collect();
        side.sort_unstable();
        side
    }

    /// Closed-set test: true iff `side` is a union of nodes containing the
    /// source node, avoiding the sink node, with no dag arc leaving it.
    /// A side that subdivides any node is immediately rejected.
    pub fn is_one_transversal(&self, side: &[VertexId]) -> bool {
        let n = self.node_of.len();
        let mut inside = vec![false; n];
        for &v in side {
            if v >= n {
                return false;
            }
            inside[v] = true;
        }
        let mut node_in: Vec<Option<bool>> = vec![None; self.nodes.len()];
        for v in 0..n {
            let nd = self.node_of[v];
            match node_in[nd] {
                None => node_in[nd] = Some(inside[v]),
                Some(prev) => {
                    if prev != inside[v] {
                        return false; // subdivides a node
                    }
                }
            }
        }
        if node_in[self.s_node] != Some(true) || node_in[self.t_node] != Some(false) {
            return false;
        }
        self.arcs
            .iter()
            .all(|a| !(node_in[a.from] == Some(true) && node_in[a.to] == Some(false)))
    }
}

/// Iterative Tarjan; returns a component id per vertex.
pub(crate) fn strongly_connected_components(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![UNSET; n];
    let mut counter = 0usize;
    let mut comp_count = 0usize;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, pos)) = work.last() {
            if pos == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if pos < adj[v].len() {
                work.last_mut().unwrap().1 += 1;
                let w = adj[v][pos];
                if index[w] == UNSET {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comp
}

/// Condenses an arc-list graph. `merge_terminals` applies the directed-graph
/// rule: nodes reachable from the source's component collapse into it, nodes
/// reaching the sink's component collapse into it.
pub(crate) fn condense(r: &ResidualGraph, merge_terminals: bool) -> Result<PqDag> {
    let pairs: Vec<(usize, usize)> = r.arcs.iter().map(|a| (a.from, a.to)).collect();
    let comp = strongly_connected_components(r.n, &pairs);
    let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);

    let mut group = comp.clone();
    if merge_terminals {
        let cs = comp[r.s];
        let ct = comp[r.t];
        let mut fwd = vec![Vec::new(); comp_count];
        let mut bwd = vec![Vec::new(); comp_count];
        for a in &r.arcs {
            let (cf, cto) = (comp[a.from], comp[a.to]);
            if cf != cto {
                fwd[cf].push(cto);
                bwd[cto].push(cf);
            }
        }
        let reach = |adjacent: &Vec<Vec<usize>>, start: usize| {
            let mut seen = vec![false; comp_count];
            let mut queue = vec![start];
            seen[start] = true;
            while let Some(c) = queue.pop() {
                for &d in &adjacent[c] {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push(d);
                    }
                }
            }
            seen
        };
        let from_s = reach(&fwd, cs);
        let to_t = reach(&bwd, ct);
        if from_s[ct] {
            return Err(Error::PreconditionViolated(
                "flow is not maximum: sink reachable from source in the residual graph".into(),
            ));
        }
        for v in 0..r.n {
            if from_s[comp[v]] {
                group[v] = cs;
            } else if to_t[comp[v]] {
                group[v] = ct;
            }
        }
    } else if r.reachable_from(r.s)[r.t] {
        return Err(Error::PreconditionViolated(
            "flow is not maximum: sink reachable from source in the residual graph".into(),
        ));
    }

    // Dense node ids ordered by smallest member vertex.
    let mut min_vertex: Vec<(usize, usize)> = Vec::new(); // (min vertex, group key)
    let mut seen_groups = BTreeSet::new();
    for v in 0..r.n {
        if seen_groups.insert(group[v]) {
            min_vertex.push((v, group[v]));
        }
    }
    min_vertex.sort_unstable();
    let mut node_of_group = vec![usize::MAX; comp_count];
    for (i, &(_, key)) in min_vertex.iter().enumerate() {
        node_of_group[key] = i;
    }
    let node_of: Vec<usize> = (0..r.n).map(|v| node_of_group[group[v]]).collect();
    let mut nodes = vec![Vec::new(); min_vertex.len()];
    for v in 0..r.n {
        nodes[node_of[v]].push(v);
    }
    let s_node = node_of[r.s];
    let t_node = node_of[r.t];

    let arcs: Vec<DagArc> = r
        .arcs
        .iter()
        .filter(|a| node_of[a.from] != node_of[a.to])
        .map(|a| DagArc {
            from: node_of[a.from],
            to: node_of[a.to],
            cap: a.cap,
            origin: a.origin,
            kind: a.kind,
        })
        .collect();

    let (topo, topo_pos) = topo_order(nodes.len(), &arcs, s_node, t_node)?;
    Ok(PqDag {
        nodes,
        node_of,
        s_node,
        t_node,
        s: r.s,
        t: r.t,
        arcs,
        topo,
        topo_pos,
    })
}

/// Kahn's algorithm, pinned so the sink node comes first and the source node
/// last; ties broken by node index for reproducible output.
fn topo_order(
    count: usize,
    arcs: &[DagArc],
    s_node: usize,
    t_node: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut indeg = vec![0usize; count];
    let mut out = vec![Vec::new(); count];
    for a in arcs {
        indeg[a.to] += 1;
        out[a.from].push(a.to);
    }
    if indeg[t_node] != 0 {
        return Err(Error::PreconditionViolated(
            "sink node has incoming residual arcs".into(),
        ));
    }
    let mut ready: BTreeSet<usize> = (0..count).filter(|&v| indeg[v] == 0).collect();
    let mut topo = Vec::with_capacity(count);
    while topo.len() < count {
        let pick = if topo.is_empty() {
            t_node
        } else {
            ready
                .iter()
                .copied()
                .find(|&v| v != s_node)
                .or_else(|| ready.iter().copied().next())
                .expect("condensation is acyclic")
        };
        ready.remove(&pick);
        topo.push(pick);
        for &w in &out[pick] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    debug_assert_eq!(*topo.last().unwrap(), s_node);
    let mut topo_pos = vec![0usize; count];
    for (i, &nd) in topo.iter().enumerate() {
        topo_pos[nd] = i;
    }
    Ok((topo, topo_pos))
}

/// Builds the DAG for a maximum flow `f` on `g`.
pub fn build_pq_dag(g: &Graph, f: &FlowAssignment) -> Result<PqDag> {
    let r = residual(g, f)?;
    condense(&r, g.is_directed())
}

/// Quotient graph for one node of the DAG, plus maps between original and
/// quotient vertices.
#[derive(Debug, Clone)]
pub struct GMu {
    pub graph: Graph,
    /// original vertex -> quotient vertex
    pub to_quotient: Vec<usize>,
    /// quotient vertex -> original vertices (sorted)
    pub members: Vec<Vec<VertexId>>,
}

impl GMu {
    /// Expands a quotient side back to original vertices. Super-vertices
    /// bring in every vertex they absorbed, so a side containing the
    /// quotient source automatically picks up the whole topological suffix.
    pub fn expand(&self, quotient_side: &[usize]) -> Vec<VertexId> {
        let mut side: Vec<VertexId> = quotient_side
            .iter()
            .flat_map(|&q| self.members[q].iter().copied())
            .collect();
        side.sort_unstable();
        side
    }

    /// Quotient vertices other than the terminals.
    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.graph.n())
            .filter(|&q| q != self.graph.s() && q != self.graph.t())
            .collect()
    }
}

/// `G_mu` over the residual graph: vertices in nodes preceding `node` in the
/// topological order contract into a sink `t'`, vertices in succeeding nodes
/// into a source `s'`. When `node` is the source (sink) node, `s'` (`t'`) is
/// the original terminal itself. The result has (s,t)-mincut capacity zero
/// and at most two mincuts: `{s'}` and `{s'} ∪ V(node)`.
pub fn build_g_mu(dag: &PqDag, r: &ResidualGraph, node: usize) -> GMu {
    build_quotient(
        dag,
        node,
        r.n,
        true,
        r.arcs.iter().map(|a| (a.from, a.to, a.cap, usize::MAX)),
    )
}

/// Same contraction applied to the original undirected graph instead of the
/// residual graph; quotient edges keep their original edge ids, so anchors
/// of the quotient are anchors of `g`.
pub fn build_g_mu_undirected(g: &Graph, dag: &PqDag, node: usize) -> GMu {
    build_quotient(
        dag,
        node,
        g.n(),
        false,
        g.edges().iter().map(|e| (e.u, e.v, e.cap, e.id)),
    )
}

fn build_quotient(
    dag: &PqDag,
    node: usize,
    n: usize,
    directed: bool,
    links: impl Iterator<Item = (usize, usize, u64, usize)>,
) -> GMu {
    let keep = &dag.nodes[node];
    let k = keep.len();
    let pos = dag.topo_pos[node];

    // Quotient ids: kept vertices 0..k-1 in ascending order, then the sink
    // contraction t', then the source contraction s' (when they exist).
    let mut to_quotient = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        to_quotient[v] = i;
    }
    let (total, s_q, t_q) = if node == dag.s_node {
        (k + 1, keep.binary_search(&dag.s).unwrap(), k)
    } else if node == dag.t_node {
        (k + 1, k, keep.binary_search(&dag.t).unwrap())
    } else {
        (k + 2, k + 1, k)
    };
    for (p, &nd) in dag.topo.iter().enumerate() {
        if nd == node {
            continue;
        }
        let target = if p < pos { t_q } else { s_q };
        for &v in &dag.nodes[nd] {
            to_quotient[v] = target;
        }
    }
    let mut members = vec![Vec::new(); total];
    for v in 0..n {
        members[to_quotient[v]].push(v);
    }

    let mut edges = Vec::new();
    let mut fresh = 0usize;
    for (u, v, cap, id) in links {
        let (qu, qv) = (to_quotient[u], to_quotient[v]);
        if qu == qv {
            continue;
        }
        let id = if id == usize::MAX {
            fresh += 1;
            fresh - 1
        } else {
            id
        };
        edges.push(Edge { id, u: qu, v: qv, cap });
    }
    let graph = Graph::from_parts(total, s_q, t_q, directed, edges);
    GMu { graph, to_quotient, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flow::max_flow;
    use crate::graph::cut_capacity;

    fn dag_of(g: &Graph) -> (PqDag, FlowAssignment) {
        let (f, _) = max_flow(g);
        let dag = build_pq_dag(g, &f).unwrap();
        (dag, f)
    }

    #[test]
    fn t1_dag_has_two_nodes() {
        let g = fixtures::t1();
        let (dag, _) = dag_of(&g);
        assert_eq!(dag.node_count(), 2);
        assert_eq!(dag.nodes[dag.s_node], vec![0, 1]);
        assert_eq!(dag.nodes[dag.t_node], vec![2]);
        assert_eq!(dag.topo, vec![dag.t_node, dag.s_node]);
    }

    #[test]
    fn two_dag_has_three_nodes() {
        let g = fixtures::two();
        let (dag, _) = dag_of(&g);
        assert_eq!(dag.node_count(), 3);
        assert_eq!(dag.nodes[dag.s_node], vec![0]);
        assert_eq!(dag.nodes[dag.t_node], vec![3]);
        let mid = (0..3).find(|&nd| nd != dag.s_node && nd != dag.t_node).unwrap();
        assert_eq!(dag.nodes[mid], vec![1, 2]);
    }

    #[test]
    fn u1_without_ab_gives_singletons() {
        let g = fixtures::u1();
        let (_, _, _, _, ab) = fixtures::u1_edge_ids();
        let g = g.remove_edge(ab).unwrap();
        let (dag, _) = dag_of(&g);
        assert_eq!(dag.node_count(), 4);
        assert!(dag.nodes.iter().all(|nd| nd.len() == 1));
    }

    #[test]
    fn suffix_sides_are_mincuts() {
        for g in [fixtures::t1(), fixtures::two(), fixtures::u1()] {
            let (f, _) = max_flow(&g);
            let dag = build_pq_dag(&g, &f).unwrap();
            for start in 1..dag.node_count() {
                let side = dag.suffix_side(start);
                let cut = cut_capacity(&g, &side).unwrap();
                assert_eq!(cut.capacity, f.value, "suffix {start} of {side:?}");
                assert!(dag.is_one_transversal(&side));
            }
        }
    }

    #[test]
    fn one_transversal_examples() {
        let g = fixtures::t1();
        let (dag, _) = dag_of(&g);
        assert!(dag.is_one_transversal(&[0, 1]));
        assert!(!dag.is_one_transversal(&[0])); // subdivides the source node

        let g = fixtures::two();
        let (dag, _) = dag_of(&g);
        assert!(!dag.is_one_transversal(&[0, 1])); // subdivides {u,v}
        assert!(dag.is_one_transversal(&[0]));
        assert!(dag.is_one_transversal(&[0, 1, 2]));
    }

    #[test]
    fn t1_g_mu_at_source_node() {
        let g = fixtures::t1();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        let r = residual(&g, &f).unwrap();
        let gmu = build_g_mu(&dag, &r, dag.s_node);
        // Vertices {s, a, t'}; arcs s->a, a->s, t'->a, t'->s each of cap 1.
        assert_eq!(gmu.graph.n(), 3);
        assert_eq!(gmu.graph.m(), 4);
        assert_eq!(gmu.graph.s(), 0);
        assert_eq!(gmu.graph.t(), 2);
        let has = |u: usize, v: usize| gmu.graph.edges().iter().any(|e| e.u == u && e.v == v && e.cap == 1);
        assert!(has(0, 1) && has(1, 0) && has(2, 1) && has(2, 0));
    }

    #[test]
    fn two_g_mu_preserves_middle_arcs() {
        let g = fixtures::two();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        let r = residual(&g, &f).unwrap();
        let mid = (0..3).find(|&nd| nd != dag.s_node && nd != dag.t_node).unwrap();
        let gmu = build_g_mu(&dag, &r, mid);
        assert_eq!(gmu.graph.n(), 4);
        assert_eq!(gmu.members[gmu.graph.s()], vec![0]);
        assert_eq!(gmu.members[gmu.graph.t()], vec![3]);
    }

    #[test]
    fn g_mu_sink_node_is_trivial_for_t1() {
        let g = fixtures::t1();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        let r = residual(&g, &f).unwrap();
        let gmu = build_g_mu(&dag, &r, dag.t_node);
        assert_eq!(gmu.graph.n(), 2);
        assert_eq!(gmu.members[gmu.graph.s()], vec![0, 1]);
    }

    #[test]
    fn undirected_quotient_keeps_lambda_and_edge_ids() {
        let g = fixtures::u1();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        for node in 0..dag.node_count() {
            let gmu = build_g_mu_undirected(&g, &dag, node);
            let (fq, _) = max_flow(&gmu.graph);
            assert_eq!(fq.value, 2);
            for e in gmu.graph.edges() {
                assert!(g.edge(e.id).is_ok());
            }
        }
    }

    #[test]
    fn single_node_besides_terminals_quotient_is_input_sized() {
        // K4 with s,t adjacent: dense enough that only terminal nodes exist.
        let g = Graph::undirected(4, 0, 3, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)])
            .unwrap();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        let gmu = build_g_mu_undirected(&g, &dag, dag.s_node);
        assert_eq!(gmu.graph.n(), dag.nodes[dag.s_node].len() + 1);
    }
}
