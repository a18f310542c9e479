//! Second minimum (s,t)-cut for directed integer-weighted graphs.
//!
//! Two routes are implemented. `second_mincut` runs one global-mincut
//! computation per DAG node on the node's strongly connected component of
//! the residual graph (augmented with weight-`d` arcs when the node holds a
//! terminal, `d` being the total edge capacity). `second_mincut_covering`
//! reaches the same capacities with maximum-flow computations only, by
//! forcing a covering vertex to either side of each node's quotient graph
//! and then pinning each remaining internal vertex to the sink (or source)
//! side with a weight-`d` edge.
//!
//! Cuts that do not subdivide any DAG node are handled separately: for every
//! DAG arc (α,β) with α not the sink node and β not the source node, the
//! least-capacity node cut separating {source-node, α} from {sink-node, β}
//! is computed on the DAG itself. The minimum over admissible arcs is
//! exactly the least residual capacity over node-respecting non-minimum
//! cuts, because every such cut has some admissible arc leaving it.

use crate::error::{Error, Result};
use crate::flow::{max_flow, residual, ResidualGraph};
use crate::global::global_mincut;
use crate::graph::{cut_capacity, Cut, Graph, VertexId};
use crate::par;
use crate::pqdag::{build_g_mu, build_pq_dag, GMu, PqDag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecondMincutSource {
    /// The cut subdivides this DAG node.
    NodeSubdivision(usize),
    /// The cut respects all nodes and this DAG arc leaves it.
    NonTransversal(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondMincutResult {
    pub cut: Cut,
    /// λ + Δ2; always strictly greater than λ.
    pub capacity: u64,
    pub source: SecondMincutSource,
    /// Maxflows on input-scale graphs: the initial one plus those consumed
    /// by per-node subroutines.
    pub maxflow_calls: u64,
    /// Global-mincut invocations, one per processed DAG node.
    pub global_mincut_calls: u64,
    /// Mincut computations on the condensed DAG for the non-transversal
    /// candidate.
    pub dag_mincut_calls: u64,
}

#[derive(Debug, Clone)]
struct Candidate {
    capacity: u64,
    side: Vec<VertexId>,
    source: SecondMincutSource,
}

fn source_rank(s: &SecondMincutSource) -> u8 {
    match s {
        SecondMincutSource::NodeSubdivision(_) => 0,
        SecondMincutSource::NonTransversal(_, _) => 1,
    }
}

fn pick_best(mut candidates: Vec<Candidate>) -> Option<Candidate> {
    candidates.sort_by(|a, b| {
        a.capacity
            .cmp(&b.capacity)
            .then(source_rank(&a.source).cmp(&source_rank(&b.source)))
            .then(a.side.cmp(&b.side))
    });
    candidates.into_iter().next()
}

/// Least-capacity cut over node-respecting (s,t)-cuts of capacity above λ,
/// when one exists. The returned cut's capacity is λ plus the minimum over
/// admissible DAG arcs of the forced-terminal node mincut.
pub fn non_transversal_candidate(g: &Graph, dag: &PqDag, lambda: u64) -> Option<(Cut, u64)> {
    let (cand, _calls) = non_transversal_candidate_counted(dag, lambda);
    cand.map(|c| {
        let cut = cut_capacity(g, &c.side).expect("candidate side is a valid cut");
        debug_assert_eq!(cut.capacity, c.capacity);
        let capacity = cut.capacity;
        (cut, capacity)
    })
}

fn non_transversal_candidate_counted(dag: &PqDag, lambda: u64) -> (Option<Candidate>, u64) {
    // Consolidate parallel DAG arcs per node pair; parallel arcs always
    // cross a node-respecting cut together.
    let mut weight: std::collections::BTreeMap<(usize, usize), u64> = std::collections::BTreeMap::new();
    for a in &dag.arcs {
        *weight.entry((a.from, a.to)).or_insert(0) += a.cap;
    }
    let admissible: Vec<((usize, usize), u64)> = weight
        .iter()
        .filter(|&(&(from, to), _)| from != dag.t_node && to != dag.s_node)
        .map(|(&k, &w)| (k, w))
        .collect();
    if admissible.is_empty() {
        return (None, 0);
    }

    let node_count = dag.node_count();
    let dag_edges: Vec<(usize, usize, u64)> =
        weight.iter().map(|(&(u, v), &w)| (u, v, w)).collect();

    let per_arc = par::map(&admissible, |&((alpha, beta), _)| {
        // Merge {s-node, alpha} into a super source and {t-node, beta} into
        // a super sink, then take a node-level mincut.
        let map = |nd: usize| -> usize {
            if nd == dag.s_node || nd == alpha {
                0
            } else if nd == dag.t_node || nd == beta {
                1
            } else {
                2 + nd
            }
        };
        let mut edges = Vec::new();
        for &(u, v, w) in &dag_edges {
            let (mu, mv) = (map(u), map(v));
            if mu != mv {
                edges.push((mu, mv, w));
            }
        }
        // Dense relabel for the small maxflow graph.
        let mut ids: Vec<usize> = edges
            .iter()
            .flat_map(|&(u, v, _)| [u, v])
            .chain([0, 1])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let dense = |x: usize| ids.binary_search(&x).unwrap();
        let dense_edges: Vec<(usize, usize, u64)> =
            edges.iter().map(|&(u, v, w)| (dense(u), dense(v), w)).collect();
        let h = Graph::directed(ids.len(), dense(0), dense(1), &dense_edges).unwrap();
        let (f, cut) = max_flow(&h);
        // Map the dense side back to DAG nodes, re-adding the merged pair.
        let mut node_side: Vec<usize> = Vec::new();
        for nd in 0..node_count {
            let mapped = map(nd);
            if mapped == 0 || (mapped >= 2 && cut.side.contains(&dense(mapped))) {
                node_side.push(nd);
            }
        }
        (f.value, node_side, alpha, beta)
    });

    let mut candidates = Vec::new();
    for (value, node_side, alpha, beta) in per_arc {
        let mut side: Vec<VertexId> = node_side
            .iter()
            .flat_map(|&nd| dag.nodes[nd].iter().copied())
            .collect();
        side.sort_unstable();
        candidates.push(Candidate {
            capacity: lambda + value,
            side,
            source: SecondMincutSource::NonTransversal(alpha, beta),
        });
    }
    (pick_best(candidates), admissible.len() as u64)
}

/// The per-node subdivision candidate of Algorithm-style processing: the
/// SCC of the residual graph induced on the node, augmented with weight-`d`
/// arcs into `s` (out of `t`) when the node holds a terminal.
fn subdivision_candidates(
    g: &Graph,
    dag: &PqDag,
    r: &ResidualGraph,
    lambda: u64,
    d: u64,
) -> (Vec<Candidate>, u64, u64) {
    let nodes: Vec<usize> = (0..dag.node_count()).collect();
    let per_node = par::map(&nodes, |&nd| {
        let members = &dag.nodes[nd];
        if members.len() < 2 {
            return None;
        }
        let mut index = std::collections::BTreeMap::new();
        for (i, &v) in members.iter().enumerate() {
            index.insert(v, i);
        }
        let mut edges: Vec<(usize, usize, u64)> = Vec::new();
        for a in &r.arcs {
            if let (Some(&u), Some(&v)) = (index.get(&a.from), index.get(&a.to)) {
                edges.push((u, v, a.cap));
            }
        }
        if nd == dag.s_node {
            let si = index[&g.s()];
            for i in 0..members.len() {
                if i != si {
                    edges.push((i, si, d));
                }
            }
        } else if nd == dag.t_node {
            let ti = index[&g.t()];
            for i in 0..members.len() {
                if i != ti {
                    edges.push((ti, i, d));
                }
            }
        }
        if edges.is_empty() {
            // An SCC of two or more vertices always has internal arcs; a
            // node can only get here if it is a lone terminal group.
            return None;
        }
        let h = Graph::directed(members.len(), 0, 1, &edges).unwrap();
        let gm = global_mincut(&h);
        Some((nd, gm))
    });

    let mut candidates = Vec::new();
    let mut global_calls = 0u64;
    let mut maxflow_calls = 0u64;
    for item in per_node.into_iter().flatten() {
        let (nd, gm) = item;
        global_calls += 1;
        maxflow_calls += gm.maxflow_calls;
        let members = &dag.nodes[nd];
        let mut side: Vec<VertexId> = gm.side.iter().map(|&i| members[i]).collect();
        // Everything after the node in the topological order joins the
        // source side.
        side.extend(dag.suffix_side(dag.topo_pos[nd] + 1));
        side.sort_unstable();
        // Reject degenerate outcomes (wrong side of an augmented terminal
        // graph); a valid candidate keeps s inside and t outside and its
        // capacity in g is exactly lambda + the node-level value.
        if !side.contains(&g.s()) || side.contains(&g.t()) {
            continue;
        }
        match cut_capacity(g, &side) {
            Ok(cut) if cut.capacity == lambda + gm.capacity => candidates.push(Candidate {
                capacity: cut.capacity,
                side: cut.side,
                source: SecondMincutSource::NodeSubdivision(nd),
            }),
            _ => {}
        }
    }
    (candidates, global_calls, maxflow_calls)
}

/// Second (s,t)-mincut through one global-mincut computation per DAG node.
pub fn second_mincut(g: &Graph) -> Result<SecondMincutResult> {
    if !g.is_directed() {
        return Err(Error::DirectedRequired);
    }
    let d = g.total_capacity();
    let (f, _) = max_flow(g);
    let lambda = f.value;
    let r = residual(g, &f)?;
    let dag = build_pq_dag(g, &f)?;

    let (mut candidates, global_calls, node_maxflows) =
        subdivision_candidates(g, &dag, &r, lambda, d);
    let (nt, dag_calls) = non_transversal_candidate_counted(&dag, lambda);
    candidates.extend(nt);

    let best = pick_best(candidates).ok_or(Error::NoSecondMincut)?;
    let cut = cut_capacity(g, &best.side)?;
    debug_assert_eq!(cut.capacity, best.capacity);
    Ok(SecondMincutResult {
        capacity: cut.capacity,
        cut,
        source: best.source,
        maxflow_calls: 1 + node_maxflows,
        global_mincut_calls: global_calls,
        dag_mincut_calls: dag_calls,
    })
}

/// One-mincut routine on a quotient graph: for every internal vertex `x`,
/// pin it to the far side with a weight-`d` edge and take a maxflow. Only
/// values below `d` are genuine cuts of the quotient.
fn covering_scan(gmu: &GMu, d: u64, pin_to_sink: bool, skip: Option<usize>) -> (Vec<(u64, Vec<usize>)>, u64) {
    let base = &gmu.graph;
    let mut found = Vec::new();
    let mut calls = 0u64;
    for x in gmu.internal_vertices() {
        if Some(x) == skip {
            continue;
        }
        let pinned = if pin_to_sink {
            base.add_edge(x, base.t(), d).unwrap().0
        } else {
            base.add_edge(base.s(), x, d).unwrap().0
        };
        let (fx, cutx) = max_flow(&pinned);
        calls += 1;
        if fx.value < d {
            found.push((fx.value, cutx.side));
        }
    }
    (found, calls)
}

/// Second (s,t)-mincut using maximum-flow computations only (covering
/// technique); agrees with [`second_mincut`] in capacity.
pub fn second_mincut_covering(g: &Graph) -> Result<SecondMincutResult> {
    if !g.is_directed() {
        return Err(Error::DirectedRequired);
    }
    let d = g.total_capacity();
    let (f, _) = max_flow(g);
    let lambda = f.value;
    let r = residual(g, &f)?;
    let dag = build_pq_dag(g, &f)?;

    let nodes: Vec<usize> = (0..dag.node_count()).collect();
    let per_node = par::map(&nodes, |&nd| {
        if dag.nodes[nd].len() < 2 {
            return (Vec::new(), 0u64);
        }
        let gmu = build_g_mu(&dag, &r, nd);
        let s_q = gmu.graph.s();
        let t_q = gmu.graph.t();
        let mut found: Vec<(u64, Vec<usize>)> = Vec::new();
        let mut calls = 0u64;
        if dag.nodes[nd].contains(&g.s()) {
            // Unique mincut is everything but t': pin internals to the sink.
            let (v, c) = covering_scan(&gmu, d, true, None);
            found.extend(v);
            calls += c;
        } else if dag.nodes[nd].contains(&g.t()) {
            // Unique mincut is {s'}: pin internals to the source.
            let (v, c) = covering_scan(&gmu, d, false, None);
            found.extend(v);
            calls += c;
        } else {
            // Two mincuts: cover with the lowest internal vertex.
            let u = *gmu.members.iter().enumerate()
                .filter(|&(q, _)| q != s_q && q != t_q)
                .flat_map(|(_, m)| m.iter())
                .min()
                .expect("internal node has members");
            let u_q = gmu.to_quotient[u];
            let (with_su, _) = gmu.graph.add_edge(s_q, u_q, d).unwrap();
            let (with_ut, _) = gmu.graph.add_edge(u_q, t_q, d).unwrap();
            for (forced, pin_to_sink) in [(with_su, true), (with_ut, false)] {
                let forced_gmu = GMu {
                    graph: forced,
                    to_quotient: gmu.to_quotient.clone(),
                    members: gmu.members.clone(),
                };
                let (v, c) = covering_scan(&forced_gmu, d, pin_to_sink, Some(u_q));
                found.extend(v);
                calls += c;
            }
        }
        let expanded: Vec<(u64, Vec<VertexId>, usize)> = found
            .into_iter()
            .map(|(value, side)| (value, gmu.expand(&side), nd))
            .collect();
        (expanded, calls)
    });

    let mut candidates = Vec::new();
    let mut scan_calls = 0u64;
    for (found, calls) in per_node {
        scan_calls += calls;
        for (value, side, nd) in found {
            if !side.contains(&g.s()) || side.contains(&g.t()) {
                continue;
            }
            let Ok(cut) = cut_capacity(g, &side) else { continue };
            if cut.capacity != lambda + value {
                continue;
            }
            candidates.push(Candidate {
                capacity: cut.capacity,
                side: cut.side,
                source: SecondMincutSource::NodeSubdivision(nd),
            });
        }
    }
    let (nt, dag_calls) = non_transversal_candidate_counted(&dag, lambda);
    candidates.extend(nt);

    let best = pick_best(candidates).ok_or(Error::NoSecondMincut)?;
    let cut = cut_capacity(g, &best.side)?;
    Ok(SecondMincutResult {
        capacity: cut.capacity,
        cut,
        source: best.source,
        maxflow_calls: 1 + scan_calls,
        global_mincut_calls: 0,
        dag_mincut_calls: dag_calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::enumerate_cuts;

    #[test]
    fn t1_second_mincut() {
        let r = second_mincut(&fixtures::t1()).unwrap();
        assert_eq!(r.capacity, 3);
        assert_eq!(r.cut.side, vec![0]);
        assert!(matches!(r.source, SecondMincutSource::NodeSubdivision(_)));
    }

    #[test]
    fn two_second_mincut() {
        let r = second_mincut(&fixtures::two()).unwrap();
        assert_eq!(r.capacity, 3);
        // Tie between {s,u} and {s,v}; lexicographically smaller side wins.
        assert_eq!(r.cut.side, vec![0, 1]);
        assert_eq!(r.global_mincut_calls, 1);
    }

    #[test]
    fn directed_chain_has_no_second_mincut() {
        assert_eq!(
            second_mincut(&fixtures::p3_directed()).unwrap_err(),
            Error::NoSecondMincut
        );
    }

    #[test]
    fn t1_dag_arc_is_inadmissible() {
        let g = fixtures::t1();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        assert!(non_transversal_candidate(&g, &dag, f.value).is_none());
    }

    #[test]
    fn path_dag_without_admissible_arcs_gives_nothing() {
        // Residual DAG is a path T -> x -> S; both arcs touch a terminal
        // node on the wrong end.
        let g = Graph::directed(3, 0, 2, &[(0, 1, 1), (1, 2, 5)]).unwrap();
        let (f, _) = max_flow(&g);
        let dag = build_pq_dag(&g, &f).unwrap();
        assert!(non_transversal_candidate(&g, &dag, f.value).is_none());
    }

    #[test]
    fn covering_matches_fixtures() {
        assert_eq!(second_mincut_covering(&fixtures::t1()).unwrap().capacity, 3);
        assert_eq!(second_mincut_covering(&fixtures::two()).unwrap().capacity, 3);
        assert_eq!(
            second_mincut_covering(&fixtures::p3_directed()).unwrap_err(),
            Error::NoSecondMincut
        );
    }

    #[test]
    fn both_algorithms_match_the_oracle() {
        let mut rng = fixtures::rng(41);
        for _ in 0..40 {
            let g = fixtures::random_directed(&mut rng, 6, 0.5, 4);
            let inv = enumerate_cuts(&g, false).unwrap();
            let a = second_mincut(&g);
            let b = second_mincut_covering(&g);
            match inv.second_min {
                Some(expect) => {
                    let a = a.unwrap();
                    let b = b.unwrap();
                    assert_eq!(a.capacity, expect);
                    assert_eq!(b.capacity, expect);
                    assert_eq!(cut_capacity(&g, &a.cut.side).unwrap().capacity, expect);
                }
                None => {
                    assert_eq!(a.unwrap_err(), Error::NoSecondMincut);
                    assert_eq!(b.unwrap_err(), Error::NoSecondMincut);
                }
            }
        }
    }

    #[test]
    fn subdivision_cut_subdivides_exactly_one_node() {
        let mut rng = fixtures::rng(43);
        for _ in 0..25 {
            let g = fixtures::random_directed(&mut rng, 6, 0.5, 3);
            let Ok(r) = second_mincut(&g) else { continue };
            if let SecondMincutSource::NodeSubdivision(_) = r.source {
                let (f, _) = max_flow(&g);
                let dag = build_pq_dag(&g, &f).unwrap();
                let inside: std::collections::BTreeSet<_> = r.cut.side.iter().copied().collect();
                let subdivided = (0..dag.node_count())
                    .filter(|&nd| {
                        let members = &dag.nodes[nd];
                        let ins = members.iter().filter(|v| inside.contains(v)).count();
                        ins > 0 && ins < members.len()
                    })
                    .count();
                assert_eq!(subdivided, 1);
            }
        }
    }
}
