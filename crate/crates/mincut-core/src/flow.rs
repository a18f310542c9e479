//! Integral maximum (s,t)-flow and residual graphs.
//!
//! Residual conventions:
//! - A directed edge `(u,v)` with flow `f` yields a forward arc `(u,v)` of
//!   capacity `cap - f` and a backward arc `(v,u)` of capacity `f`;
//!   zero-capacity arcs are omitted.
//! - An undirected unit edge carrying flow from `x` to `y` yields two arcs
//!   `(y,x)`; an idle undirected edge yields the pair `(x,y)` and `(y,x)`.
//!   Undirected edges of capacity `q` generalize this: `q - f` residual
//!   capacity both ways plus two backward arcs of capacity `f`.
//!
//! With these rules the capacity of any (s,t)-cut in the residual graph is
//! exactly its capacity in the original graph minus λ, for directed and
//! undirected graphs alike.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{cut_capacity, Cut, EdgeId, Graph, VertexId};

/// Per-edge flow with an orientation for undirected edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeFlow {
    pub amount: u64,
    /// Flow leaves the edge's `u` endpoint. Always true for directed edges
    /// and for idle edges.
    pub from_u: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowAssignment {
    values: BTreeMap<EdgeId, EdgeFlow>,
    pub value: u64,
}

impl FlowAssignment {
    pub fn zero(g: &Graph) -> Self {
        let values = g
            .edges()
            .iter()
            .map(|e| (e.id, EdgeFlow { amount: 0, from_u: true }))
            .collect();
        FlowAssignment { values, value: 0 }
    }

    pub fn amount(&self, id: EdgeId) -> u64 {
        self.values.get(&id).map_or(0, |f| f.amount)
    }

    /// (tail, head) of the flow through edge `id` in graph `g`.
    pub fn orientation(&self, g: &Graph, id: EdgeId) -> Result<(VertexId, VertexId)> {
        let e = g.edge(id)?;
        let from_u = self.values.get(&id).map_or(true, |f| f.from_u);
        Ok(if from_u { (e.u, e.v) } else { (e.v, e.u) })
    }

    pub fn is_idle(&self, id: EdgeId) -> bool {
        self.amount(id) == 0
    }

    /// Raw orientation flag: flow leaves the edge's `u` endpoint.
    pub fn from_u(&self, id: EdgeId) -> bool {
        self.values.get(&id).map_or(true, |f| f.from_u)
    }

    /// Edge ids carrying no flow, ascending.
    pub fn no_flow(&self, g: &Graph) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = g
            .edges()
            .iter()
            .filter(|e| self.amount(e.id) == 0)
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn flow_edges(&self, g: &Graph) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = g
            .edges()
            .iter()
            .filter(|e| self.amount(e.id) > 0)
            .map(|e| e.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub(crate) fn set(&mut self, id: EdgeId, amount: u64, from_u: bool) {
        // Idle edges get a canonical orientation.
        let from_u = if amount == 0 { true } else { from_u };
        self.values.insert(id, EdgeFlow { amount, from_u });
    }
}

/// Where a residual arc comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    /// Arc derived from a graph edge.
    Edge(EdgeId),
    /// Arc standing for an inserted query edge.
    Inserted(VertexId, VertexId),
    /// Augmentation arc added by an algorithm (covering edges and the like).
    Artificial,
}

impl ArcOrigin {
    pub fn edge(&self) -> Option<EdgeId> {
        match self {
            ArcOrigin::Edge(id) => Some(*id),
            _ => None,
        }
    }
}

/// Classification at construction time: `Forward` arcs represent unused
/// capacity, `Reversal` arcs undo one unit of assigned flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    Forward,
    Reversal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidualArc {
    pub from: usize,
    pub to: usize,
    pub cap: u64,
    pub origin: ArcOrigin,
    pub kind: ArcKind,
}

/// A directed capacitated arc list over `0..n`, used both for true residual
/// graphs (vertices of `G`) and for their quotients (nodes of a DAG).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidualGraph {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub arcs: Vec<ResidualArc>,
}

impl ResidualGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, a) in self.arcs.iter().enumerate() {
            adj[a.from].push(i);
        }
        adj
    }

    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &i in &adj[v] {
                let w = self.arcs[i].to;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Shortest path between two vertices as arc indices, restricted to arcs
    /// accepted by `usable`.
    pub fn find_path(
        &self,
        from: usize,
        to: usize,
        usable: impl Fn(usize, &ResidualArc) -> bool,
    ) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let mut pred: Vec<Option<usize>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &i in &adj[v] {
                let a = &self.arcs[i];
                if !seen[a.to] && usable(i, a) {
                    seen[a.to] = true;
                    pred[a.to] = Some(i);
                    queue.push_back(a.to);
                }
            }
        }
        if from == to {
            return Some(Vec::new());
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let i = pred[v].expect("predecessor chain broken");
            path.push(i);
            v = self.arcs[i].from;
        }
        path.reverse();
        Some(path)
    }

    /// Reverses every arc of `path` in place; all other arcs are untouched.
    /// `path` lists arc indices that must chain head-to-tail.
    pub fn update_path(&mut self, path: &[usize]) -> Result<()> {
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a >= self.arcs.len() || b >= self.arcs.len() {
                return Err(Error::NotAPath);
            }
            if self.arcs[a].to != self.arcs[b].from {
                return Err(Error::NotAPath);
            }
        }
        if let Some(&i) = path.first() {
            if i >= self.arcs.len() {
                return Err(Error::NotAPath);
            }
        }
        for &i in path {
            let arc = &mut self.arcs[i];
            std::mem::swap(&mut arc.from, &mut arc.to);
        }
        Ok(())
    }

    /// Drops every arc whose origin is the given edge.
    pub fn remove_edge_arcs(&mut self, id: EdgeId) {
        self.arcs.retain(|a| a.origin.edge() != Some(id));
    }
}

/// Builds the residual graph of `g` under `f`, validating feasibility.
pub fn residual(g: &Graph, f: &FlowAssignment) -> Result<ResidualGraph> {
    validate(g, f)?;
    let mut arcs = Vec::new();
    for e in g.edges() {
        let amount = f.amount(e.id);
        if g.is_directed() {
            if e.cap - amount > 0 {
                arcs.push(ResidualArc {
                    from: e.u,
                    to: e.v,
                    cap: e.cap - amount,
                    origin: ArcOrigin::Edge(e.id),
                    kind: ArcKind::Forward,
                });
            }
            if amount > 0 {
                arcs.push(ResidualArc {
                    from: e.v,
                    to: e.u,
                    cap: amount,
                    origin: ArcOrigin::Edge(e.id),
                    kind: ArcKind::Reversal,
                });
            }
        } else {
            let (tail, head) = f.orientation(g, e.id)?;
            let idle = e.cap - amount;
            if idle > 0 {
                for (a, b) in [(tail, head), (head, tail)] {
                    arcs.push(ResidualArc {
                        from: a,
                        to: b,
                        cap: idle,
                        origin: ArcOrigin::Edge(e.id),
                        kind: ArcKind::Forward,
                    });
                }
            }
            if amount > 0 {
                for _ in 0..2 {
                    arcs.push(ResidualArc {
                        from: head,
                        to: tail,
                        cap: amount,
                        origin: ArcOrigin::Edge(e.id),
                        kind: ArcKind::Reversal,
                    });
                }
            }
        }
    }
    Ok(ResidualGraph { n: g.n(), s: g.s(), t: g.t(), arcs })
}

fn validate(g: &Graph, f: &FlowAssignment) -> Result<()> {
    let mut net = vec![0i64; g.n()];
    for e in g.edges() {
        let amount = f.amount(e.id);
        if amount > e.cap {
            return Err(Error::InfeasibleFlow(format!(
                "edge {} carries {} over capacity {}",
                e.id, amount, e.cap
            )));
        }
        let (tail, head) = f.orientation(g, e.id)?;
        if g.is_directed() && amount > 0 && tail != e.u {
            return Err(Error::InfeasibleFlow(format!(
                "directed edge {} carries flow against its direction",
                e.id
            )));
        }
        net[tail] += amount as i64;
        net[head] -= amount as i64;
    }
    for v in 0..g.n() {
        if v == g.s() || v == g.t() {
            continue;
        }
        if net[v] != 0 {
            return Err(Error::InfeasibleFlow(format!("conservation fails at vertex {v}")));
        }
    }
    if net[g.s()] != f.value as i64 {
        return Err(Error::InfeasibleFlow(format!(
            "net outflow at source is {}, flow value is {}",
            net[g.s()],
            f.value
        )));
    }
    Ok(())
}

/// Computes an integral maximum (s,t)-flow by shortest augmenting paths and
/// returns it with the canonical mincut: the set of vertices reachable from
/// `s` in the residual graph.
pub fn max_flow(g: &Graph) -> (FlowAssignment, Cut) {
    // Slot pairs: directed edges pair the forward slot with a zero-capacity
    // reverse; an undirected edge's two direction slots are mutual reverses.
    let mut to: Vec<usize> = Vec::new();
    let mut res: Vec<u64> = Vec::new();
    let mut rev: Vec<usize> = Vec::new();
    let mut slot_edge: Vec<Option<(EdgeId, bool)>> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n()];

    for e in g.edges() {
        let a = to.len();
        if g.is_directed() {
            to.push(e.v);
            res.push(e.cap);
            rev.push(a + 1);
            slot_edge.push(Some((e.id, true)));
            to.push(e.u);
            res.push(0);
            rev.push(a);
            slot_edge.push(None);
        } else {
            to.push(e.v);
            res.push(e.cap);
            rev.push(a + 1);
            slot_edge.push(Some((e.id, true)));
            to.push(e.u);
            res.push(e.cap);
            rev.push(a);
            slot_edge.push(Some((e.id, false)));
        }
        adj[e.u].push(a);
        adj[e.v].push(a + 1);
    }

    let (s, t) = (g.s(), g.t());
    let mut value = 0u64;
    loop {
        let mut pred: Vec<Option<usize>> = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        let mut queue = VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &i in &adj[v] {
                if res[i] > 0 && !seen[to[i]] {
                    seen[to[i]] = true;
                    pred[to[i]] = Some(i);
                    queue.push_back(to[i]);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            let i = pred[v].unwrap();
            bottleneck = bottleneck.min(res[i]);
            v = if i % 2 == 0 { to[i + 1] } else { to[i - 1] };
        }
        let mut v = t;
        while v != s {
            let i = pred[v].unwrap();
            res[i] -= bottleneck;
            res[rev[i]] += bottleneck;
            v = if i % 2 == 0 { to[i + 1] } else { to[i - 1] };
        }
        value += bottleneck;
    }

    let mut flow = FlowAssignment::zero(g);
    flow.value = value;
    for (slot, entry) in slot_edge.iter().enumerate() {
        let Some(&(id, primary)) = entry.as_ref() else { continue };
        if !primary {
            continue;
        }
        let e = g.edge(id).unwrap();
        if g.is_directed() {
            flow.set(id, e.cap - res[slot], true);
        } else {
            // res[slot] + res[slot+1] == 2 cap; the difference is twice the
            // net flow in the u -> v direction.
            let diff = res[slot + 1] as i64 - res[slot] as i64;
            debug_assert_eq!(diff.rem_euclid(2), 0);
            let net = diff / 2;
            flow.set(id, net.unsigned_abs(), net >= 0);
        }
    }

    let r = residual(g, &flow).expect("maxflow produced an infeasible assignment");
    let seen = r.reachable_from(s);
    let side: Vec<VertexId> = (0..g.n()).filter(|&v| seen[v]).collect();
    let cut = cut_capacity(g, &side).expect("canonical mincut side is degenerate");
    debug_assert_eq!(cut.capacity, value);
    (flow, cut)
}

/// Cancels directed cycles on which every edge carries flow along the cycle;
/// the flow value is unchanged and the set of flow-carrying edges never
/// grows.
pub fn cancel_flow_cycles(g: &Graph, f: &FlowAssignment) -> FlowAssignment {
    let mut rem: BTreeMap<EdgeId, (u64, VertexId, VertexId)> = BTreeMap::new();
    for e in g.edges() {
        let amount = f.amount(e.id);
        if amount > 0 {
            let (tail, head) = f.orientation(g, e.id).unwrap();
            rem.insert(e.id, (amount, tail, head));
        }
    }

    loop {
        // Flow digraph of the remaining amounts, adjacency in edge-id order.
        let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
        for (&id, &(amount, tail, _)) in &rem {
            if amount > 0 {
                adj[tail].push(id);
            }
        }
        let mut cycle: Option<Vec<EdgeId>> = None;
        let mut state = vec![0u8; g.n()]; // 0 new, 1 on stack, 2 done
        'outer: for start in 0..g.n() {
            if state[start] != 0 {
                continue;
            }
            // Iterative DFS remembering the arc taken into each vertex.
            let mut stack = vec![(start, 0usize)];
            let mut via: Vec<EdgeId> = Vec::new();
            state[start] = 1;
            while let Some(&(v, next)) = stack.last() {
                if next < adj[v].len() {
                    stack.last_mut().unwrap().1 += 1;
                    let id = adj[v][next];
                    let head = rem[&id].2;
                    match state[head] {
                        0 => {
                            state[head] = 1;
                            via.push(id);
                            stack.push((head, 0));
                        }
                        1 => {
                            // Found a cycle: the suffix of the stack from
                            // `head` plus this closing arc.
                            let mut ids = vec![id];
                            for (pos, &(w, _)) in stack.iter().enumerate().rev() {
                                if w == head {
                                    break;
                                }
                                ids.push(via[pos - 1]);
                            }
                            ids.reverse();
                            cycle = Some(ids);
                            break 'outer;
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                    via.pop();
                }
            }
        }
        let Some(ids) = cycle else { break };
        let delta = ids.iter().map(|id| rem[id].0).min().unwrap();
        for id in ids {
            rem.get_mut(&id).unwrap().0 -= delta;
        }
    }

    let mut out = FlowAssignment::zero(g);
    out.value = f.value;
    for e in g.edges() {
        if let Some(&(amount, tail, _)) = rem.get(&e.id) {
            out.set(e.id, amount, tail == e.u);
        }
    }
    out
}

/// Unit-path decomposition of `f`: (s,t)-paths as edge-id sequences plus the
/// leftover cyclic part per edge.
fn decompose(g: &Graph, f: &FlowAssignment) -> (Vec<Vec<EdgeId>>, BTreeMap<EdgeId, u64>) {
    let mut rem: BTreeMap<EdgeId, (u64, VertexId, VertexId)> = BTreeMap::new();
    for e in g.edges() {
        let amount = f.amount(e.id);
        if amount > 0 {
            let (tail, head) = f.orientation(g, e.id).unwrap();
            rem.insert(e.id, (amount, tail, head));
        }
    }
    let mut paths = Vec::new();
    for _ in 0..f.value {
        // Walk from s picking the smallest usable edge id; cancel any cycle
        // met on the way so the walk always terminates at t.
        let mut path: Vec<EdgeId> = Vec::new();
        let mut at: Vec<Option<usize>> = vec![None; g.n()]; // position on the walk
        let mut v = g.s();
        at[v] = Some(0);
        while v != g.t() {
            let next = rem
                .iter()
                .find(|(_, &(amount, tail, _))| amount > 0 && tail == v)
                .map(|(&id, &(_, _, head))| (id, head))
                .expect("feasible flow must continue to the sink");
            let (id, head) = next;
            if let Some(pos) = at[head] {
                // Cycle through `head`: cancel one unit around it.
                for &cid in &path[pos..] {
                    rem.get_mut(&cid).unwrap().0 -= 1;
                }
                rem.get_mut(&id).unwrap().0 -= 1;
                for &cid in &path[pos..] {
                    let w = rem[&cid].2;
                    at[w] = None;
                }
                path.truncate(pos);
                v = head;
                continue;
            }
            path.push(id);
            at[head] = Some(path.len());
            v = head;
        }
        for &id in &path {
            rem.get_mut(&id).unwrap().0 -= 1;
        }
        paths.push(path);
    }
    let leftover = rem
        .into_iter()
        .filter(|(_, (amount, _, _))| *amount > 0)
        .map(|(id, (amount, _, _))| (id, amount))
        .collect();
    (paths, leftover)
}

/// Reduces the flow by one unit along the (s,t)-path carrying edge `e`,
/// removes `e`, and returns the new flow (value λ-1) with the residual graph
/// of `g \ {e}`.
pub fn reduce_flow_through_edge(
    g: &Graph,
    f: &FlowAssignment,
    e: EdgeId,
) -> Result<(FlowAssignment, ResidualGraph)> {
    let edge = g.edge(e)?;
    if edge.cap != 1 || f.amount(e) != 1 {
        return Err(Error::PreconditionViolated(
            "reduce_flow_through_edge needs a unit edge carrying flow".into(),
        ));
    }
    let (paths, _) = decompose(g, f);
    let path = paths
        .into_iter()
        .find(|p| p.contains(&e))
        .ok_or(Error::NoCarrierPath)?;
    let mut reduced = f.clone();
    reduced.value -= 1;
    for &id in &path {
        let (tail, _) = f.orientation(g, id).unwrap();
        let amount = f.amount(id) - 1;
        let eg = g.edge(id).unwrap();
        reduced.set(id, amount, tail == eg.u);
    }
    let g2 = g.remove_edge(e)?;
    let r = residual(&g2, &reduced)?;
    Ok((reduced, r))
}
