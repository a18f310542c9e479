//! Integer-capacitated multigraphs, cuts and the basic transformations
//! (contraction, parallel-edge consolidation, edge insertion/removal).
//!
//! Edge identity is always the edge id, never the endpoint pair; parallel
//! edges coexist with distinct ids. Undirected graphs treat `(u, v)` and
//! `(v, u)` as the same edge. All values are immutable after construction;
//! every mutating operation returns a new graph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    s: VertexId,
    t: VertexId,
    directed: bool,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn directed(n: usize, s: VertexId, t: VertexId, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        Self::new(n, s, t, true, edges)
    }

    pub fn undirected(n: usize, s: VertexId, t: VertexId, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        Self::new(n, s, t, false, edges)
    }

    fn new(n: usize, s: VertexId, t: VertexId, directed: bool, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        if s == t {
            return Err(Error::SourceEqualsSink);
        }
        if s >= n {
            return Err(Error::InvalidVertex(s));
        }
        if t >= n {
            return Err(Error::InvalidVertex(t));
        }
        let mut list = Vec::with_capacity(edges.len());
        for (id, &(u, v, cap)) in edges.iter().enumerate() {
            if u >= n {
                return Err(Error::InvalidVertex(u));
            }
            if v >= n {
                return Err(Error::InvalidVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop);
            }
            if cap == 0 {
                return Err(Error::ZeroCapacity);
            }
            list.push(Edge { id, u, v, cap });
        }
        Ok(Graph { n, s, t, directed, edges: list })
    }

    /// Internal constructor for quotient graphs that must keep edge ids.
    pub(crate) fn from_parts(n: usize, s: VertexId, t: VertexId, directed: bool, edges: Vec<Edge>) -> Self {
        debug_assert!(s != t && s < n && t < n);
        debug_assert!(edges.iter().all(|e| e.u != e.v && e.u < n && e.v < n && e.cap > 0));
        Graph { n, s, t, directed, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.iter().find(|e| e.id == id).ok_or(Error::UnknownEdge(id))
    }

    /// Sum of all edge capacities; the infinity proxy `d` used by every
    /// algorithm that needs an effectively unbounded edge.
    pub fn total_capacity(&self) -> u64 {
        self.edges.iter().map(|e| e.cap).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.edges.iter().all(|e| e.cap == 1)
    }

    /// Undirected, unit capacities, no parallel edges.
    pub fn is_simple(&self) -> bool {
        if self.directed || !self.is_unit() {
            return false;
        }
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    /// Same graph with a different terminal pair, used by global-mincut
    /// style algorithms that vary the source and sink.
    pub fn with_terminals(&self, s: VertexId, t: VertexId) -> Result<Self> {
        if s == t {
            return Err(Error::SourceEqualsSink);
        }
        if s >= self.n {
            return Err(Error::InvalidVertex(s));
        }
        if t >= self.n {
            return Err(Error::InvalidVertex(t));
        }
        let mut g = self.clone();
        g.s = s;
        g.t = t;
        Ok(g)
    }

    pub fn add_edge(&self, u: VertexId, v: VertexId, cap: u64) -> Result<(Self, EdgeId)> {
        if u >= self.n {
            return Err(Error::InvalidVertex(u));
        }
        if v >= self.n {
            return Err(Error::InvalidVertex(v));
        }
        if u == v {
            return Err(Error::SelfLoop);
        }
        if cap == 0 {
            return Err(Error::ZeroCapacity);
        }
        let mut g = self.clone();
        let id = g.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        g.edges.push(Edge { id, u, v, cap });
        Ok((g, id))
    }

    /// Removes one parallel copy, identified by its edge id.
    pub fn remove_edge(&self, id: EdgeId) -> Result<Self> {
        let pos = self
            .edges
            .iter()
            .position(|e| e.id == id)
            .ok_or(Error::UnknownEdge(id))?;
        let mut g = self.clone();
        g.edges.remove(pos);
        Ok(g)
    }

    pub fn remove_edges(&self, ids: &[EdgeId]) -> Result<Self> {
        let mut g = self.clone();
        for &id in ids {
            g = g.remove_edge(id)?;
        }
        Ok(g)
    }
}

/// The source side of an (s,t)-cut, or any nonempty proper vertex subset for
/// global cuts, together with its capacity and crossing edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    /// Sorted vertex ids on the side of the cut.
    pub side: Vec<VertexId>,
    pub capacity: u64,
    /// Every edge with exactly one endpoint in `side`.
    pub edge_set: Vec<EdgeId>,
    /// Edges with tail in `side` and head outside; equals `edge_set` for
    /// undirected graphs.
    pub contributing: Vec<EdgeId>,
}

/// Capacity, edge-set and contributing edges of the cut given by `side`.
///
/// Directed graphs count only edges leaving the side; undirected graphs
/// count every crossing edge.
pub fn cut_capacity(g: &Graph, side: &[VertexId]) -> Result<Cut> {
    let set: BTreeSet<VertexId> = side.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::EmptySide);
    }
    if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
        return Err(Error::InvalidVertex(v));
    }
    if set.len() == g.n() {
        return Err(Error::FullSide);
    }
    let mut inside = vec![false; g.n()];
    for &v in &set {
        inside[v] = true;
    }
    let mut capacity = 0u64;
    let mut edge_set = Vec::new();
    let mut contributing = Vec::new();
    for e in g.edges() {
        let iu = inside[e.u];
        let iv = inside[e.v];
        if iu == iv {
            continue;
        }
        edge_set.push(e.id);
        if iu || !g.is_directed() {
            contributing.push(e.id);
            capacity += e.cap;
        }
    }
    Ok(Cut {
        side: set.into_iter().collect(),
        capacity,
        edge_set,
        contributing,
    })
}

/// Disjoint vertex groups to be contracted into single super-vertices.
#[derive(Debug, Clone, Default)]
pub struct ContractionMap {
    groups: Vec<Vec<VertexId>>,
}

impl ContractionMap {
    pub fn new(groups: Vec<Vec<VertexId>>) -> Self {
        ContractionMap { groups }
    }

    pub fn groups(&self) -> &[Vec<VertexId>] {
        &self.groups
    }
}

/// A contracted graph plus the map from old vertex ids to new ones.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Graph,
    /// old vertex id -> new vertex id
    pub vertex_map: Vec<VertexId>,
}

/// Quotient graph obtained by contracting each group of `map` into a single
/// node. Parallel edges stay parallel, self-loops produced by the
/// contraction are dropped, and surviving edges keep their ids.
pub fn contract(g: &Graph, map: &ContractionMap) -> Result<Contraction> {
    let mut group_of = vec![usize::MAX; g.n()];
    for (gi, group) in map.groups().iter().enumerate() {
        for &v in group {
            if v >= g.n() {
                return Err(Error::InvalidVertex(v));
            }
            if group_of[v] != usize::MAX {
                return Err(Error::PreconditionViolated(format!(
                    "vertex {v} appears in two contraction groups"
                )));
            }
            group_of[v] = gi;
        }
    }
    if group_of[g.s()] != usize::MAX && group_of[g.s()] == group_of[g.t()] {
        return Err(Error::SourceSinkMerged);
    }

    // Dense relabel: ungrouped vertices first in id order, then one node per
    // nonempty group in group order.
    let mut vertex_map = vec![usize::MAX; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        if group_of[v] == usize::MAX {
            vertex_map[v] = next;
            next += 1;
        }
    }
    let mut group_node = vec![usize::MAX; map.groups().len()];
    for (gi, group) in map.groups().iter().enumerate() {
        if group.is_empty() {
            continue;
        }
        group_node[gi] = next;
        next += 1;
    }
    for v in 0..g.n() {
        if group_of[v] != usize::MAX {
            vertex_map[v] = group_node[group_of[v]];
        }
    }

    let mut edges = Vec::with_capacity(g.m());
    for e in g.edges() {
        let u = vertex_map[e.u];
        let v = vertex_map[e.v];
        if u == v {
            continue; // self-loop created by the contraction
        }
        edges.push(Edge { id: e.id, u, v, cap: e.cap });
    }
    let graph = Graph::from_parts(next, vertex_map[g.s()], vertex_map[g.t()], g.is_directed(), edges);
    Ok(Contraction { graph, vertex_map })
}

/// Replaces every bundle of parallel undirected edges by a single edge whose
/// capacity is the bundle's total. The surviving edge keeps the smallest id
/// of its bundle, so consolidating an already simple graph is the identity.
pub fn consolidate_parallel_edges(g: &Graph) -> Result<Graph> {
    if g.is_directed() {
        return Err(Error::UndirectedRequired);
    }
    let mut bundles: std::collections::BTreeMap<(VertexId, VertexId), (EdgeId, u64)> =
        std::collections::BTreeMap::new();
    for e in g.edges() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        bundles
            .entry(key)
            .and_modify(|(id, cap)| {
                *id = (*id).min(e.id);
                *cap += e.cap;
            })
            .or_insert((e.id, e.cap));
    }
    let mut edges: Vec<Edge> = bundles
        .into_iter()
        .map(|((u, v), (id, cap))| Edge { id, u, v, cap })
        .collect();
    edges.sort_by_key(|e| e.id);
    Ok(Graph::from_parts(g.n(), g.s(), g.t(), false, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn t1_cut_capacities() {
        let g = fixtures::t1();
        let c = cut_capacity(&g, &[g.s()]).unwrap();
        assert_eq!(c.capacity, 3);
        let c = cut_capacity(&g, &[0, 1]).unwrap();
        assert_eq!(c.capacity, 2);
        assert_eq!(c.side, vec![0, 1]);
    }

    #[test]
    fn full_and_empty_sides_rejected() {
        let g = fixtures::t1();
        assert_eq!(cut_capacity(&g, &[]).unwrap_err(), Error::EmptySide);
        assert_eq!(cut_capacity(&g, &[0, 1, 2]).unwrap_err(), Error::FullSide);
    }

    #[test]
    fn directed_counts_only_leaving_edges() {
        // s -> a carries 2, a -> s is absent; side {a} leaves only via (a,t).
        let g = fixtures::t1();
        let c = cut_capacity(&g, &[1]).unwrap();
        assert_eq!(c.capacity, 1);
        assert_eq!(c.edge_set.len(), 2);
        assert_eq!(c.contributing.len(), 1);
    }

    #[test]
    fn contract_two_fixture() {
        let g = fixtures::two();
        let map = ContractionMap::new(vec![vec![1, 2]]);
        let c = contract(&g, &map).unwrap();
        assert_eq!(c.graph.n(), 3);
        // (u,v) and (v,u) became self-loops and vanished.
        assert_eq!(c.graph.m(), 4);
        let w = c.vertex_map[1];
        assert_eq!(w, c.vertex_map[2]);
        let from_s = c.graph.edges().iter().filter(|e| e.u == c.graph.s() && e.v == w).count();
        let to_t = c.graph.edges().iter().filter(|e| e.u == w && e.v == c.graph.t()).count();
        assert_eq!((from_s, to_t), (2, 2));
    }

    #[test]
    fn contract_identity_map() {
        let g = fixtures::two();
        let c = contract(&g, &ContractionMap::default()).unwrap();
        assert_eq!(c.graph, g);
    }

    #[test]
    fn contract_rejects_merged_terminals() {
        let g = fixtures::t1();
        let map = ContractionMap::new(vec![vec![g.s(), g.t()]]);
        assert_eq!(contract(&g, &map).unwrap_err(), Error::SourceSinkMerged);
    }

    #[test]
    fn consolidate_merges_parallel_units() {
        let g = Graph::undirected(2, 0, 1, &[(0, 1, 1), (0, 1, 1)]).unwrap();
        let c = consolidate_parallel_edges(&g).unwrap();
        assert_eq!(c.m(), 1);
        assert_eq!(c.edges()[0].cap, 2);
        assert_eq!(c.edges()[0].id, 0);
    }

    #[test]
    fn consolidate_is_identity_on_simple_graphs() {
        let g = fixtures::u1();
        assert_eq!(consolidate_parallel_edges(&g).unwrap(), g);
    }

    #[test]
    fn add_then_remove_roundtrip() {
        let g = fixtures::u1();
        let (g2, id) = g.add_edge(0, 3, 1).unwrap();
        assert_eq!(g2.remove_edge(id).unwrap(), g);
        assert_eq!(g.remove_edge(99).unwrap_err(), Error::UnknownEdge(99));
    }

    #[test]
    fn zero_capacity_rejected() {
        assert_eq!(
            Graph::directed(2, 0, 1, &[(0, 1, 0)]).unwrap_err(),
            Error::ZeroCapacity
        );
    }
}
