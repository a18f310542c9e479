//! Dual-edge sensitivity oracle for (s,t)-mincut in simple graphs.
//!
//! Two interchangeable backends answer "what is an (s,t)-mincut after
//! failing (or inserting) this pair of edges":
//!
//! - [`BaselineOracle`] keeps the residual graph of a pinned maximum flow
//!   and replays the textbook augmenting-path argument on a private copy.
//! - [`CompactOracle`] keeps only the quotient `D(A) ∪ A` (the anchor
//!   structure's DAG plus anchor arcs) and runs the same query algorithm on
//!   it; contracting the strongly connected components of the updated
//!   quotient reproduces the DAG of the modified graph exactly.
//!
//! Queries never mutate shared state; each one works on its own copy.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use crate::anchors::{build_structure, AnchorStructure};
use crate::error::{Error, Result};
use crate::flow::{
    cancel_flow_cycles, max_flow, residual, ArcKind, ArcOrigin, FlowAssignment, ResidualArc,
    ResidualGraph,
};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::pqdag::{condense, PqDag};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryTrace {
    /// Neither edge interacts with the structure (both idle, both anchors,
    /// or both inside single nodes); the stored mincut stands.
    BothIdle,
    NoReduction,
    SingleReduction,
    DoubleReduction,
    NoIncrease,
    SingleIncrease,
    DoubleIncrease,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAnswer {
    /// Mincut capacity of the updated graph.
    pub capacity: u64,
    /// Source side realizing that capacity in the updated graph.
    pub side: Vec<VertexId>,
    /// Contributing edges of the reported cut, as sorted endpoint pairs
    /// (inserted query edges included when they cross).
    pub edges: Vec<(VertexId, VertexId)>,
    pub trace: QueryTrace,
}

fn fail_trace(lambda: u64, capacity: u64) -> QueryTrace {
    match lambda - capacity {
        0 => QueryTrace::NoReduction,
        1 => QueryTrace::SingleReduction,
        _ => QueryTrace::DoubleReduction,
    }
}

fn insert_trace(lambda: u64, capacity: u64) -> QueryTrace {
    match capacity - lambda {
        0 => QueryTrace::NoIncrease,
        1 => QueryTrace::SingleIncrease,
        _ => QueryTrace::DoubleIncrease,
    }
}

/// Granularity of a working graph: its units are either graph vertices
/// (baseline) or nodes of D(A) (compact).
#[derive(Clone, Copy)]
enum Level<'a> {
    Vertices,
    Nodes(&'a PqDag),
}

impl<'a> Level<'a> {
    fn unit_of(&self, v: VertexId) -> usize {
        match self {
            Level::Vertices => v,
            Level::Nodes(dag) => dag.node_of[v],
        }
    }

    fn vertices_of(&self, unit: usize) -> Vec<VertexId> {
        match self {
            Level::Vertices => vec![unit],
            Level::Nodes(dag) => dag.nodes[unit].clone(),
        }
    }
}

fn validate_simple(g: &Graph) -> Result<()> {
    if !g.is_simple() {
        return Err(Error::SimpleGraphRequired);
    }
    Ok(())
}

/// Withdraws the unit of flow riding edge `e1` from the working graph: a
/// two-unit search over flow-reversal arcs (one unit from t to the head
/// side, one from the tail side to s) stands in for the (t,s)-path through
/// the reversed arc; the union of used arcs is reversed and both arcs of
/// `e1` are dropped.
fn withdraw_unit(work: &mut ResidualGraph, e1: EdgeId, tail_unit: usize, head_unit: usize) -> Result<()> {
    // One link per flow-carrying edge, capacity one: an edge's unit of flow
    // can be withdrawn once even though it appears as two reversal arcs.
    let mut groups: std::collections::BTreeMap<EdgeId, usize> = std::collections::BTreeMap::new();
    for (i, a) in work.arcs.iter().enumerate() {
        if a.kind != ArcKind::Reversal {
            continue;
        }
        let Some(id) = a.origin.edge() else { continue };
        if id == e1 {
            continue;
        }
        groups.entry(id).or_insert(i);
    }

    // Micro max-flow network: units of demand t -> head_unit and
    // tail_unit -> s, edge-disjoint over the reversal arcs.
    let nn = work.n + 2;
    let (ss, tt) = (work.n, work.n + 1);
    let mut links: Vec<(usize, usize, u64, Option<usize>)> = Vec::new();
    for (_, &i) in &groups {
        let a = &work.arcs[i];
        links.push((a.from, a.to, 1, Some(i)));
    }
    links.push((ss, work.t, 1, None));
    links.push((ss, tail_unit, 1, None));
    links.push((head_unit, tt, 1, None));
    links.push((work.s, tt, 1, None));

    let mut to = Vec::new();
    let mut res = Vec::new();
    let mut adj = vec![Vec::new(); nn];
    let mut link_of_slot = Vec::new();
    for (idx, &(u, v, cap, _)) in links.iter().enumerate() {
        let slot = to.len();
        to.push(v);
        res.push(cap);
        link_of_slot.push(Some(idx));
        to.push(u);
        res.push(0);
        link_of_slot.push(None);
        adj[u].push(slot);
        adj[v].push(slot + 1);
    }
    let mut pushed = 0u64;
    loop {
        let mut pred = vec![usize::MAX; nn];
        let mut seen = vec![false; nn];
        seen[ss] = true;
        let mut queue = std::collections::VecDeque::from([ss]);
        while let Some(v) = queue.pop_front() {
            if v == tt {
                break;
            }
            for &slot in &adj[v] {
                if res[slot] > 0 && !seen[to[slot]] {
                    seen[to[slot]] = true;
                    pred[to[slot]] = slot;
                    queue.push_back(to[slot]);
                }
            }
        }
        if !seen[tt] {
            break;
        }
        let mut v = tt;
        while v != ss {
            let slot = pred[v];
            res[slot] -= 1;
            res[slot ^ 1] += 1;
            v = to[slot ^ 1];
        }
        pushed += 1;
        if pushed == 2 {
            break;
        }
    }
    if pushed != 2 {
        return Err(Error::NoCarrierPath);
    }

    // Reverse one arc copy per used edge, then drop e1 entirely.
    let mut reverse = Vec::new();
    for (slot, link) in link_of_slot.iter().enumerate() {
        let Some(idx) = link else { continue };
        let (_, _, cap, arc) = links[*idx];
        let Some(arc) = arc else { continue };
        if cap - res[slot] > 0 {
            reverse.push(arc);
        }
    }
    for i in reverse {
        let a = &mut work.arcs[i];
        std::mem::swap(&mut a.from, &mut a.to);
    }
    work.remove_edge_arcs(e1);
    Ok(())
}

/// One augmenting step: reverses a shortest (s,t)-path if one exists.
fn augment_once(work: &mut ResidualGraph) -> bool {
    match work.find_path(work.s, work.t, |_, _| true) {
        Some(path) => {
            work.update_path(&path).expect("bfs path chains");
            true
        }
        None => false,
    }
}

/// Condensation of the working graph with vertex membership resolved
/// through the level.
struct CondensedView {
    dag: PqDag,
}

impl CondensedView {
    fn new(work: &ResidualGraph) -> Result<Self> {
        Ok(CondensedView { dag: condense(work, false)? })
    }

    fn node_of_vertex(&self, level: &Level, v: VertexId) -> usize {
        self.dag.node_of[level.unit_of(v)]
    }

    fn vertices_of_node(&self, level: &Level, node: usize) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.dag.nodes[node]
            .iter()
            .flat_map(|&unit| level.vertices_of(unit))
            .collect();
        out.sort_unstable();
        out
    }

    /// Minimal mincut: the vertices of the source node's closure... the
    /// source node itself has no outgoing arcs, so its members alone form a
    /// mincut.
    fn minimal_side(&self, level: &Level) -> Vec<VertexId> {
        self.vertices_of_node(level, self.dag.s_node)
    }

    /// Maximal mincut: everything but the sink node's members.
    fn maximal_side(&self, level: &Level, n: usize) -> Vec<VertexId> {
        let sink: BTreeSet<VertexId> = self
            .vertices_of_node(level, self.dag.t_node)
            .into_iter()
            .collect();
        (0..n).filter(|v| !sink.contains(v)).collect()
    }

    /// Suffix of the topological order containing exactly one endpoint.
    fn split_side(&self, level: &Level, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let pa = self.dag.topo_pos[self.node_of_vertex(level, a)];
        let pb = self.dag.topo_pos[self.node_of_vertex(level, b)];
        let start = pa.max(pb);
        let mut out: Vec<VertexId> = self.dag.topo[start..]
            .iter()
            .flat_map(|&nd| self.dag.nodes[nd].iter().flat_map(|&u| level.vertices_of(u)))
            .collect();
        out.sort_unstable();
        out
    }
}

fn crosses(side: &BTreeSet<VertexId>, u: VertexId, v: VertexId) -> bool {
    side.contains(&u) != side.contains(&v)
}

/// Contributing edges of `side` read off the working graph's arcs, plus any
/// crossing inserted pairs, minus failed edges.
fn edges_from_arcs(
    base: &Graph,
    work: &ResidualGraph,
    side: &[VertexId],
    dropped: &[EdgeId],
) -> Vec<(VertexId, VertexId)> {
    let inside: BTreeSet<VertexId> = side.iter().copied().collect();
    let mut out = BTreeSet::new();
    for a in &work.arcs {
        let (u, v) = match a.origin {
            ArcOrigin::Edge(id) => {
                if dropped.contains(&id) {
                    continue;
                }
                let e = base.edge(id).expect("arc origin exists");
                (e.u, e.v)
            }
            ArcOrigin::Inserted(u, v) => (u, v),
            ArcOrigin::Artificial => continue,
        };
        if crosses(&inside, u, v) {
            out.insert((u.min(v), u.max(v)));
        }
    }
    out.into_iter().collect()
}

/// Shared failure logic over a working graph at either granularity.
/// `e1` must carry flow in the pinned assignment.
#[allow(clippy::too_many_arguments)]
fn fail_pair_on(
    base: &Graph,
    flow: &FlowAssignment,
    lambda: u64,
    level: &Level,
    mut work: ResidualGraph,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<QueryAnswer> {
    let (x1, y1) = flow.orientation(base, e1)?;
    withdraw_unit(&mut work, e1, level.unit_of(x1), level.unit_of(y1))?;
    let restored = augment_once(&mut work);
    let lambda1 = if restored { lambda } else { lambda - 1 };

    let view = CondensedView::new(&work)?;
    let e2_edge = base.edge(e2)?;
    let (na, nb) = (
        view.node_of_vertex(level, e2_edge.u),
        view.node_of_vertex(level, e2_edge.v),
    );
    let (capacity, side) = if na == nb {
        (lambda1, view.minimal_side(level))
    } else {
        (lambda1 - 1, view.split_side(level, e2_edge.u, e2_edge.v))
    };
    let edges = edges_from_arcs(base, &work, &side, &[e1, e2]);
    Ok(QueryAnswer { capacity, side, edges, trace: fail_trace(lambda, capacity) })
}

/// Shared insertion logic; `pair1` arcs are already part of `work` when this
/// is called with `added = true` semantics handled by the caller.
fn insert_pair_on(
    base: &Graph,
    lambda: u64,
    level: &Level,
    mut work: ResidualGraph,
    pair1: (VertexId, VertexId),
    pair2: (VertexId, VertexId),
) -> Result<QueryAnswer> {
    if pair1.0 != pair1.1 {
        let (u, v) = (level.unit_of(pair1.0), level.unit_of(pair1.1));
        if u != v {
            for (a, b) in [(u, v), (v, u)] {
                work.arcs.push(ResidualArc {
                    from: a,
                    to: b,
                    cap: 1,
                    origin: ArcOrigin::Inserted(pair1.0, pair1.1),
                    kind: ArcKind::Forward,
                });
            }
        }
    }
    let increased = augment_once(&mut work);
    let lambda1 = lambda + u64::from(increased);

    let view = CondensedView::new(&work)?;
    let (u2, v2) = pair2;
    let spanning = u2 != v2 && {
        let (na, nb) = (view.node_of_vertex(level, u2), view.node_of_vertex(level, v2));
        (na == view.dag.s_node && nb == view.dag.t_node)
            || (nb == view.dag.s_node && na == view.dag.t_node)
    };
    let (capacity, side) = if spanning {
        (lambda1 + 1, view.minimal_side(level))
    } else {
        let minimal = view.minimal_side(level);
        let crossed = {
            let inside: BTreeSet<VertexId> = minimal.iter().copied().collect();
            u2 != v2 && crosses(&inside, u2, v2)
        };
        let side = if crossed {
            view.maximal_side(level, base.n())
        } else {
            minimal
        };
        (lambda1, side)
    };
    let mut edges = edges_from_arcs(base, &work, &side, &[]);
    let inside: BTreeSet<VertexId> = side.iter().copied().collect();
    if u2 != v2 && crosses(&inside, u2, v2) {
        let key = (u2.min(v2), u2.max(v2));
        if !edges.contains(&key) {
            edges.push(key);
            edges.sort_unstable();
        }
    }
    Ok(QueryAnswer { capacity, side, edges, trace: insert_trace(lambda, capacity) })
}

/// Residual-graph backend: O(m) space, O(m) query time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaselineOracle {
    base: Graph,
    flow: FlowAssignment,
    lambda: u64,
    residual: ResidualGraph,
    mincut: Vec<VertexId>,
}

impl BaselineOracle {
    pub fn new(g: &Graph) -> Result<Self> {
        validate_simple(g)?;
        let (f0, cut) = max_flow(g);
        let flow = cancel_flow_cycles(g, &f0);
        let lambda = flow.value;
        let r = residual(g, &flow)?;
        Ok(BaselineOracle {
            base: g.clone(),
            flow,
            lambda,
            residual: r,
            mincut: cut.side,
        })
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn state_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    fn stored_answer(&self, dropped: &[EdgeId], trace: QueryTrace) -> QueryAnswer {
        let side = self.mincut.clone();
        let edges = edges_from_arcs(&self.base, &self.residual, &side, dropped);
        QueryAnswer { capacity: self.lambda, side, edges, trace }
    }

    fn check_pair(&self, e1: EdgeId, e2: EdgeId) -> Result<()> {
        if e1 == e2 {
            return Err(Error::UnknownEdge(e2));
        }
        self.base.edge(e1)?;
        self.base.edge(e2)?;
        Ok(())
    }

    /// Mincut after failing edges `e1` and `e2`; capacity is one of
    /// λ, λ-1, λ-2.
    pub fn query_fail(&self, e1: EdgeId, e2: EdgeId) -> Result<QueryAnswer> {
        self.check_pair(e1, e2)?;
        let (e1, e2) = if self.flow.is_idle(e1) { (e2, e1) } else { (e1, e2) };
        if self.flow.is_idle(e1) {
            // Neither edge carries flow: the stored mincut survives as is.
            return Ok(self.stored_answer(&[e1, e2], QueryTrace::BothIdle));
        }
        fail_pair_on(
            &self.base,
            &self.flow,
            self.lambda,
            &Level::Vertices,
            self.residual.clone(),
            e1,
            e2,
        )
    }

    /// Mincut after inserting the two endpoint pairs; capacity is one of
    /// λ, λ+1, λ+2.
    pub fn query_insert(&self, pair1: (VertexId, VertexId), pair2: (VertexId, VertexId)) -> Result<QueryAnswer> {
        for &v in [pair1.0, pair1.1, pair2.0, pair2.1].iter() {
            if v >= self.base.n() {
                return Err(Error::UnknownVertex(v));
            }
        }
        insert_pair_on(
            &self.base,
            self.lambda,
            &Level::Vertices,
            self.residual.clone(),
            pair1,
            pair2,
        )
    }

    /// Mixed pair: fail `e1`, insert `pair2`. Only the baseline supports
    /// this combination.
    pub fn query_fail_insert(&self, e1: EdgeId, pair2: (VertexId, VertexId)) -> Result<QueryAnswer> {
        self.base.edge(e1)?;
        for &v in [pair2.0, pair2.1].iter() {
            if v >= self.base.n() {
                return Err(Error::UnknownVertex(v));
            }
        }
        let mut work = self.residual.clone();
        let lambda1 = if self.flow.is_idle(e1) {
            work.remove_edge_arcs(e1);
            self.lambda
        } else {
            let (x1, y1) = self.flow.orientation(&self.base, e1)?;
            withdraw_unit(&mut work, e1, x1, y1)?;
            let restored = augment_once(&mut work);
            if restored {
                self.lambda
            } else {
                self.lambda - 1
            }
        };
        let answer = insert_pair_on(&self.base, lambda1, &Level::Vertices, work, pair2, (0, 0))?;
        // Re-derive the trace relative to the original capacity.
        let capacity = answer.capacity;
        let trace = if capacity >= self.lambda {
            insert_trace(self.lambda, capacity)
        } else {
            fail_trace(self.lambda, capacity)
        };
        Ok(QueryAnswer { trace, ..answer })
    }
}

/// Compact backend over D(A) ∪ A.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactOracle {
    structure: AnchorStructure,
    /// Quotient of the residual graph: nodes of D(A) with the dag's arcs
    /// plus one arc pair per anchor.
    quotient: ResidualGraph,
    mincut: Vec<VertexId>,
}

impl CompactOracle {
    pub fn new(g: &Graph) -> Result<Self> {
        validate_simple(g)?;
        let structure = build_structure(g)?;
        let (_, cut) = max_flow(g);
        let dag = &structure.dag;
        let mut arcs: Vec<ResidualArc> = dag
            .arcs
            .iter()
            .map(|a| ResidualArc {
                from: a.from,
                to: a.to,
                cap: a.cap,
                origin: a.origin,
                kind: a.kind,
            })
            .collect();
        for &id in &structure.anchors {
            let e = g.edge(id)?;
            let (nu, nv) = (dag.node_of[e.u], dag.node_of[e.v]);
            for (a, b) in [(nu, nv), (nv, nu)] {
                arcs.push(ResidualArc {
                    from: a,
                    to: b,
                    cap: 1,
                    origin: ArcOrigin::Edge(id),
                    kind: ArcKind::Forward,
                });
            }
        }
        let quotient = ResidualGraph {
            n: dag.node_count(),
            s: dag.s_node,
            t: dag.t_node,
            arcs,
        };
        Ok(CompactOracle { structure, quotient, mincut: cut.side })
    }

    pub fn lambda(&self) -> u64 {
        self.structure.lambda
    }

    pub fn structure(&self) -> &AnchorStructure {
        &self.structure
    }

    /// Arcs held by the compact state (its space, up to constants).
    pub fn arc_count(&self) -> usize {
        self.quotient.arcs.len()
    }

    pub fn state_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    fn is_structural(&self, id: EdgeId) -> Result<bool> {
        // Anchors and edges inside a single D(A) node never change the
        // mincut capacity, even paired.
        if self.structure.anchors.contains(&id) {
            return Ok(true);
        }
        let e = self.structure.base.edge(id)?;
        Ok(self.structure.dag.node_of[e.u] == self.structure.dag.node_of[e.v])
    }

    pub fn query_fail(&self, e1: EdgeId, e2: EdgeId) -> Result<QueryAnswer> {
        if e1 == e2 {
            return Err(Error::UnknownEdge(e2));
        }
        let base = &self.structure.base;
        base.edge(e1)?;
        base.edge(e2)?;
        // Pick a flow-carrying inter-node edge as e1.
        let swap = self.is_structural(e1)? && !self.is_structural(e2)?;
        let (e1, e2) = if swap { (e2, e1) } else { (e1, e2) };
        if self.is_structural(e1)? {
            let side = self.mincut.clone();
            let edges = edges_from_arcs(base, &self.quotient, &side, &[e1, e2]);
            return Ok(QueryAnswer {
                capacity: self.structure.lambda,
                side,
                edges,
                trace: QueryTrace::BothIdle,
            });
        }
        debug_assert!(!self.structure.flow.is_idle(e1), "inter-node edges carry flow");
        fail_pair_on(
            base,
            &self.structure.flow,
            self.structure.lambda,
            &Level::Nodes(&self.structure.dag),
            self.quotient.clone(),
            e1,
            e2,
        )
    }

    pub fn query_insert(&self, pair1: (VertexId, VertexId), pair2: (VertexId, VertexId)) -> Result<QueryAnswer> {
        let base = &self.structure.base;
        for &v in [pair1.0, pair1.1, pair2.0, pair2.1].iter() {
            if v >= base.n() {
                return Err(Error::UnknownVertex(v));
            }
        }
        insert_pair_on(
            base,
            self.structure.lambda,
            &Level::Nodes(&self.structure.dag),
            self.quotient.clone(),
            pair1,
            pair2,
        )
    }

    /// Mixed failure/insertion pairs are outside the compact oracle's
    /// contract; use the baseline.
    pub fn query_fail_insert(&self, _e1: EdgeId, _pair2: (VertexId, VertexId)) -> Result<QueryAnswer> {
        Err(Error::MixedPairUnsupported)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::cut_capacity;

    fn recompute_fail(g: &Graph, e1: EdgeId, e2: EdgeId) -> u64 {
        let g = g.remove_edges(&[e1, e2]).unwrap();
        max_flow(&g).0.value
    }

    fn recompute_insert(g: &Graph, p1: (usize, usize), p2: (usize, usize)) -> u64 {
        let mut g = g.clone();
        for (u, v) in [p1, p2] {
            if u != v {
                g = g.add_edge(u, v, 1).unwrap().0;
            }
        }
        max_flow(&g).0.value
    }

    fn check_fail_answer(g: &Graph, e1: EdgeId, e2: EdgeId, ans: &QueryAnswer) {
        let expect = recompute_fail(g, e1, e2);
        assert_eq!(ans.capacity, expect, "fail({e1},{e2}) on {g:?}");
        let stripped = g.remove_edges(&[e1, e2]).unwrap();
        let cut = cut_capacity(&stripped, &ans.side).unwrap();
        assert_eq!(cut.capacity, ans.capacity);
        // Reported contributing edges are exactly the crossing edges.
        let expect_edges: Vec<(usize, usize)> = cut
            .edge_set
            .iter()
            .map(|&id| {
                let e = stripped.edge(id).unwrap();
                (e.u.min(e.v), e.u.max(e.v))
            })
            .collect();
        let mut expect_edges = expect_edges;
        expect_edges.sort_unstable();
        assert_eq!(ans.edges, expect_edges);
    }

    #[test]
    fn u1_fail_both_spokes() {
        let g = fixtures::u1();
        let (_, at, _, bt, _) = fixtures::u1_edge_ids();
        for oracle_ans in [
            BaselineOracle::new(&g).unwrap().query_fail(at, bt).unwrap(),
            CompactOracle::new(&g).unwrap().query_fail(at, bt).unwrap(),
        ] {
            assert_eq!(oracle_ans.capacity, 0);
            assert_eq!(oracle_ans.side, vec![0, 1, 2]);
            check_fail_answer(&g, at, bt, &oracle_ans);
        }
    }

    #[test]
    fn u1_fail_anchor_and_spoke() {
        let g = fixtures::u1();
        let (_, at, _, _, ab) = fixtures::u1_edge_ids();
        for ans in [
            BaselineOracle::new(&g).unwrap().query_fail(ab, at).unwrap(),
            CompactOracle::new(&g).unwrap().query_fail(ab, at).unwrap(),
        ] {
            assert_eq!(ans.capacity, 1);
            check_fail_answer(&g, ab, at, &ans);
        }
    }

    #[test]
    fn same_edge_twice_is_rejected() {
        let g = fixtures::u1();
        let (_, _, _, _, ab) = fixtures::u1_edge_ids();
        let b = BaselineOracle::new(&g).unwrap();
        assert_eq!(b.query_fail(ab, ab).unwrap_err(), Error::UnknownEdge(ab));
        let c = CompactOracle::new(&g).unwrap();
        assert_eq!(c.query_fail(ab, ab).unwrap_err(), Error::UnknownEdge(ab));
    }

    #[test]
    fn u1_all_pairs_match_recompute() {
        let g = fixtures::u1();
        let b = BaselineOracle::new(&g).unwrap();
        let c = CompactOracle::new(&g).unwrap();
        for e1 in 0..g.m() {
            for e2 in (e1 + 1)..g.m() {
                let ba = b.query_fail(e1, e2).unwrap();
                let ca = c.query_fail(e1, e2).unwrap();
                assert_eq!(ba.capacity, ca.capacity, "pair ({e1},{e2})");
                check_fail_answer(&g, e1, e2, &ba);
                check_fail_answer(&g, e1, e2, &ca);
            }
        }
    }

    #[test]
    fn p3_insert_parallel_st_twice() {
        let g = fixtures::p3();
        let b = BaselineOracle::new(&g).unwrap();
        let c = CompactOracle::new(&g).unwrap();
        for ans in [
            b.query_insert((0, 2), (0, 2)).unwrap(),
            c.query_insert((0, 2), (0, 2)).unwrap(),
        ] {
            assert_eq!(ans.capacity, 3);
            assert_eq!(ans.capacity, recompute_insert(&g, (0, 2), (0, 2)));
        }
    }

    #[test]
    fn u1_insert_pairs_match_recompute() {
        let g = fixtures::u1();
        let b = BaselineOracle::new(&g).unwrap();
        let c = CompactOracle::new(&g).unwrap();
        let pairs = [(0usize, 3usize), (1, 2), (0, 1), (2, 3), (1, 3)];
        for &p1 in &pairs {
            for &p2 in &pairs {
                let expect = recompute_insert(&g, p1, p2);
                let ba = b.query_insert(p1, p2).unwrap();
                let ca = c.query_insert(p1, p2).unwrap();
                assert_eq!(ba.capacity, expect, "insert {p1:?} {p2:?}");
                assert_eq!(ca.capacity, expect, "insert {p1:?} {p2:?}");
                // The reported side must realize the capacity in G + pairs.
                let mut g2 = g.clone();
                for (u, v) in [p1, p2] {
                    g2 = g2.add_edge(u, v, 1).unwrap().0;
                }
                assert_eq!(cut_capacity(&g2, &ba.side).unwrap().capacity, expect);
                assert_eq!(cut_capacity(&g2, &ca.side).unwrap().capacity, expect);
            }
        }
    }

    #[test]
    fn intra_node_insertion_keeps_capacity() {
        // K4 minus nothing: dense SCC keeps internal pairs in one node.
        let g = Graph::undirected(4, 0, 3, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)])
            .unwrap();
        let c = CompactOracle::new(&g).unwrap();
        let ans = c.query_insert((1, 2), (1, 2)).unwrap();
        assert_eq!(ans.capacity, c.lambda());
    }

    #[test]
    fn mixed_pairs_only_on_baseline() {
        let g = fixtures::u1();
        let (_, at, _, _, _) = fixtures::u1_edge_ids();
        let b = BaselineOracle::new(&g).unwrap();
        let ans = b.query_fail_insert(at, (0, 3)).unwrap();
        let mut g2 = g.remove_edge(at).unwrap();
        g2 = g2.add_edge(0, 3, 1).unwrap().0;
        assert_eq!(ans.capacity, max_flow(&g2).0.value);
        let c = CompactOracle::new(&g).unwrap();
        assert_eq!(
            c.query_fail_insert(at, (0, 3)).unwrap_err(),
            Error::MixedPairUnsupported
        );
    }

    #[test]
    fn state_hash_is_query_invariant() {
        let g = fixtures::u1();
        let b = BaselineOracle::new(&g).unwrap();
        let c = CompactOracle::new(&g).unwrap();
        let (hb, hc) = (b.state_hash(), c.state_hash());
        for e1 in 0..g.m() {
            for e2 in 0..g.m() {
                if e1 != e2 {
                    let _ = b.query_fail(e1, e2).unwrap();
                    let _ = c.query_fail(e1, e2).unwrap();
                }
            }
        }
        let _ = b.query_insert((0, 3), (1, 2)).unwrap();
        let _ = c.query_insert((0, 3), (1, 2)).unwrap();
        assert_eq!(b.state_hash(), hb);
        assert_eq!(c.state_hash(), hc);
    }

    #[test]
    fn random_simple_graphs_all_pairs() {
        let mut rng = fixtures::rng(83);
        for _ in 0..6 {
            let g = fixtures::random_simple(&mut rng, 7, 0.5);
            let b = BaselineOracle::new(&g).unwrap();
            let c = CompactOracle::new(&g).unwrap();
            for e1 in 0..g.m() {
                for e2 in (e1 + 1)..g.m() {
                    let ba = b.query_fail(e1, e2).unwrap();
                    let ca = c.query_fail(e1, e2).unwrap();
                    assert_eq!(ba.capacity, ca.capacity, "pair ({e1},{e2}) on {g:?}");
                    check_fail_answer(&g, e1, e2, &ba);
                    check_fail_answer(&g, e1, e2, &ca);
                }
            }
        }
    }

    #[test]
    fn quotient_reachability_matches_residual() {
        // For vertices in distinct D(A) nodes, reachability in the quotient
        // equals reachability in the residual graph.
        let mut rng = fixtures::rng(89);
        for _ in 0..8 {
            let g = fixtures::random_simple(&mut rng, 7, 0.45);
            let c = CompactOracle::new(&g).unwrap();
            let st = c.structure();
            let r = residual(&g, &st.flow).unwrap();
            for u in 0..g.n() {
                let real = r.reachable_from(u);
                let quo = c.quotient.reachable_from(st.dag.node_of[u]);
                for v in 0..g.n() {
                    if st.dag.node_of[u] == st.dag.node_of[v] {
                        continue;
                    }
                    assert_eq!(
                        real[v],
                        quo[st.dag.node_of[v]],
                        "u={u} v={v} on {g:?}"
                    );
                }
            }
        }
    }
}
