//! Anchor edges and the compact structure for all minimum+1 (s,t)-cuts of
//! undirected unit multigraphs.
//!
//! For a fixed maximum flow, an anchor is an idle edge contributing to some
//! (λ+1) cut; every (λ+1) cut crosses exactly one anchor. Removing the
//! anchors turns every minimum+1 cut into a mincut, so the DAG of the
//! remaining graph plus the anchor set stores and characterizes both
//! families: 1-transversal with no anchor crossing means mincut, with
//! exactly one anchor crossing means minimum+1.

use crate::error::{Error, Result};
use crate::dominator::{dominator_tree, internal_marked_vertices, EdgeSplitGraph};
use crate::flow::{cancel_flow_cycles, max_flow, residual, FlowAssignment};
use crate::graph::{consolidate_parallel_edges, cut_capacity, EdgeId, Graph, VertexId};
use crate::oracle::CutClass;
use crate::par;
use crate::pqdag::{build_g_mu_undirected, build_pq_dag, PqDag};
use crate::unionfind::UnionFind;

/// How a cut relates to the flow: its idle crossing edges and the counts of
/// flow-carrying crossing edges by direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutFlowProfile {
    pub idle: Vec<EdgeId>,
    pub outward: usize,
    pub inward: usize,
}

fn require_unit_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::UndirectedRequired);
    }
    if !g.is_unit() {
        return Err(Error::UnitCapacityRequired);
    }
    Ok(())
}

pub fn cut_flow_profile(g: &Graph, f: &FlowAssignment, side: &[VertexId]) -> Result<CutFlowProfile> {
    require_unit_undirected(g)?;
    let cut = cut_capacity(g, side)?;
    let inside: std::collections::BTreeSet<VertexId> = cut.side.iter().copied().collect();
    let mut profile = CutFlowProfile { idle: Vec::new(), outward: 0, inward: 0 };
    for &id in &cut.edge_set {
        if f.is_idle(id) {
            profile.idle.push(id);
        } else {
            let (tail, _) = f.orientation(g, id)?;
            if inside.contains(&tail) {
                profile.outward += 1;
            } else {
                profile.inward += 1;
            }
        }
    }
    Ok(profile)
}

/// Flow characterization of (λ+1) cuts: exactly one idle edge crosses and
/// every other crossing edge carries its unit of flow outward.
pub fn check_min_plus1_flow_characterization(
    g: &Graph,
    f: &FlowAssignment,
    side: &[VertexId],
) -> Result<bool> {
    let profile = cut_flow_profile(g, f, side)?;
    Ok(profile.idle.len() == 1 && profile.inward == 0)
}

/// Scans one single-mincut instance for anchors: every solo marked internal
/// vertex of the dominator tree over the edge-split residual graph whose arc
/// originates from an idle edge.
fn anchor_scan(gq: &Graph, fq: &FlowAssignment) -> Result<Vec<EdgeId>> {
    let r = residual(gq, fq)?;
    if r.reachable_from(gq.s())[gq.t()] {
        return Err(Error::PreconditionViolated("flow is not maximum".into()));
    }
    let fwd = r.reachable_from(gq.s());
    let minimal: Vec<VertexId> = (0..r.n).filter(|&v| fwd[v]).collect();
    let all_but_t: Vec<VertexId> = (0..gq.n()).filter(|&v| v != gq.t()).collect();

    let (root, arcs): (usize, Vec<(usize, usize, u64)>) = if minimal == all_but_t {
        (gq.s(), r.arcs.iter().map(|a| (a.from, a.to, a.cap)).collect())
    } else {
        // Unique mincut {s}: run on the transpose rooted at t.
        (gq.t(), r.arcs.iter().map(|a| (a.to, a.from, a.cap)).collect())
    };
    let split = EdgeSplitGraph::from_arcs(gq.n(), &arcs);
    let tree = dominator_tree(&split.adj, root);
    let mut out = Vec::new();
    for j in internal_marked_vertices(&split, &tree) {
        let arc_idx = split.marked[j].arc;
        if let Some(id) = r.arcs[arc_idx].origin.edge() {
            if fq.is_idle(id) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

/// Restriction of `f` to a quotient graph whose edges kept their ids.
/// Quotient edges keep the original endpoint order, so the orientation flag
/// carries over unchanged.
fn restrict_flow(gq: &Graph, f: &FlowAssignment) -> FlowAssignment {
    let mut fq = FlowAssignment::zero(gq);
    fq.value = f.value;
    for e in gq.edges() {
        fq.set(e.id, f.amount(e.id), f.from_u(e.id));
    }
    fq
}

/// All anchor edges of `g` for the maximum flow `f`, computed per DAG node
/// on the undirected quotient with the covering reduction; equals the
/// brute-force anchor set exactly.
pub fn compute_anchors(g: &Graph, f: &FlowAssignment) -> Result<Vec<EdgeId>> {
    require_unit_undirected(g)?;
    let dag = build_pq_dag(g, f)?;
    let d = g.total_capacity().max(2);
    // Covering edges get an id no base edge uses, so restricting the flow
    // to a covered quotient never picks up a contracted edge's flow.
    let cover_id = g.edges().iter().map(|e| e.id + 1).max().unwrap_or(0);

    let nodes: Vec<usize> = (0..dag.node_count()).collect();
    let per_node: Vec<Result<Vec<EdgeId>>> = par::map(&nodes, |&nd| {
        if dag.nodes[nd].len() < 2 {
            return Ok(Vec::new());
        }
        let gmu = build_g_mu_undirected(g, &dag, nd);
        let fq = restrict_flow(&gmu.graph, f);
        let mut found = Vec::new();
        if dag.nodes[nd].contains(&g.s()) || dag.nodes[nd].contains(&g.t()) {
            found.extend(anchor_scan(&gmu.graph, &fq)?);
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
            let cover = |a: usize, b: usize| {
                let mut edges = gmu.graph.edges().to_vec();
                edges.push(crate::graph::Edge { id: cover_id, u: a, v: b, cap: d });
                Graph::from_parts(gmu.graph.n(), gmu.graph.s(), gmu.graph.t(), false, edges)
            };
            let g_in = cover(gmu.graph.s(), u_q);
            let g_out = cover(u_q, gmu.graph.t());
            for forced in [g_in, g_out] {
                let fq = restrict_flow(&forced, f);
                found.extend(anchor_scan(&forced, &fq)?);
            }
        }
        Ok(found)
    });

    let mut anchors = std::collections::BTreeSet::new();
    for found in per_node {
        anchors.extend(found?);
    }
    Ok(anchors.into_iter().collect())
}

/// Spanning forest of the idle edges: a superset of the anchors with at most
/// n-2 edges. Idle edges closing a cycle of idle edges can never be anchors.
pub fn zero_flow_forest(g: &Graph, f: &FlowAssignment) -> Result<Vec<EdgeId>> {
    if g.is_directed() {
        return Err(Error::UndirectedRequired);
    }
    let mut uf = UnionFind::new(g.n());
    let mut forest = Vec::new();
    for id in f.no_flow(g) {
        let e = g.edge(id)?;
        if uf.union(e.u, e.v) {
            forest.push(id);
        }
    }
    Ok(forest)
}

/// The pair (D(A), A): the DAG of the consolidated graph without anchors,
/// plus the anchor set, under one pinned cycle-cancelled maximum flow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnchorStructure {
    pub base: Graph,
    /// The pinned flow: deterministic shortest-augmenting-path maxflow with
    /// flow cycles cancelled.
    pub flow: FlowAssignment,
    pub lambda: u64,
    pub anchors: Vec<EdgeId>,
    /// DAG of consolidate(G \ A); node membership is over original vertex
    /// ids, so classification needs no translation.
    pub dag: PqDag,
    pub consolidated: Graph,
    pub consolidated_flow: FlowAssignment,
}

pub fn build_structure(g: &Graph) -> Result<AnchorStructure> {
    require_unit_undirected(g)?;
    let (f0, cut) = max_flow(g);
    let f = cancel_flow_cycles(g, &f0);
    let lambda = f.value;
    let anchors = compute_anchors(g, &f)?;
    let stripped = g.remove_edges(&anchors)?;
    let consolidated = consolidate_parallel_edges(&stripped)?;

    // Aggregate the unit flows per consolidated bundle. After cycle
    // cancelling, parallel units of a pair never flow in opposite
    // directions.
    let mut bundle: std::collections::BTreeMap<(VertexId, VertexId), (u64, bool)> =
        std::collections::BTreeMap::new();
    for e in stripped.edges() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let amount = f.amount(e.id);
        let entry = bundle.entry(key).or_insert((0, true));
        if amount > 0 {
            let (tail, _) = f.orientation(g, e.id)?;
            let from_min = tail == key.0;
            if entry.0 > 0 {
                debug_assert_eq!(entry.1, from_min, "cycle-cancelled parallels agree");
            }
            entry.0 += amount;
            entry.1 = from_min;
        }
    }
    let mut consolidated_flow = FlowAssignment::zero(&consolidated);
    consolidated_flow.value = lambda;
    for e in consolidated.edges() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let (amount, from_min) = bundle.get(&key).copied().unwrap_or((0, true));
        let from_u = if e.u <= e.v { from_min } else { !from_min };
        consolidated_flow.set(e.id, amount, from_u);
    }

    let dag = build_pq_dag(&consolidated, &consolidated_flow)?;
    debug_assert!(dag.is_one_transversal(&cut.side));
    Ok(AnchorStructure {
        base: g.clone(),
        flow: f,
        lambda,
        anchors,
        dag,
        consolidated,
        consolidated_flow,
    })
}

/// Characterization query: 1-transversal in D(A) crossing no anchor is a
/// mincut, crossing exactly one anchor is a minimum+1 cut, anything else is
/// neither.
pub fn classify_cut(st: &AnchorStructure, side: &[VertexId]) -> Result<CutClass> {
    let g = &st.base;
    let inside: std::collections::BTreeSet<VertexId> = side.iter().copied().collect();
    if !inside.contains(&g.s()) || inside.contains(&g.t()) {
        return Err(Error::PreconditionViolated("side is not an (s,t)-cut".into()));
    }
    let mut crossing_anchors = 0usize;
    for &id in &st.anchors {
        let e = g.edge(id)?;
        if inside.contains(&e.u) != inside.contains(&e.v) {
            crossing_anchors += 1;
        }
    }
    Ok(if !st.dag.is_one_transversal(side) {
        CutClass::Other
    } else if crossing_anchors == 0 {
        CutClass::Mincut
    } else if crossing_anchors == 1 {
        CutClass::MinPlusOne
    } else {
        CutClass::Other
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{brute_anchors, brute_classify, enumerate_cuts};

    fn pinned_flow(g: &Graph) -> FlowAssignment {
        let (f, _) = max_flow(g);
        cancel_flow_cycles(g, &f)
    }

    #[test]
    fn u1_characterization_examples() {
        let g = fixtures::u1();
        let f = pinned_flow(&g);
        assert!(check_min_plus1_flow_characterization(&g, &f, &[0, 1]).unwrap());
        assert!(!check_min_plus1_flow_characterization(&g, &f, &[0]).unwrap());
    }

    #[test]
    fn doubled_idle_edge_fails_characterization() {
        // A second a-b edge makes {s,a} a (λ+2) cut with two idle edges.
        let g = fixtures::u1().add_edge(1, 2, 1).unwrap().0;
        let f = pinned_flow(&g);
        let profile = cut_flow_profile(&g, &f, &[0, 1]).unwrap();
        assert_eq!(profile.idle.len(), 2);
        assert!(!check_min_plus1_flow_characterization(&g, &f, &[0, 1]).unwrap());
    }

    #[test]
    fn u1_anchors() {
        let g = fixtures::u1();
        let f = pinned_flow(&g);
        let (_, _, _, _, ab) = fixtures::u1_edge_ids();
        assert_eq!(compute_anchors(&g, &f).unwrap(), vec![ab]);
    }

    #[test]
    fn star4_has_n_minus_2_anchors() {
        let g = fixtures::star(4);
        let f = pinned_flow(&g);
        let anchors = compute_anchors(&g, &f).unwrap();
        assert_eq!(anchors.len(), g.n() - 2);
        assert_eq!(anchors, brute_anchors(&g, &f).unwrap());
    }

    #[test]
    fn lambda_plus_two_graph_has_no_anchors() {
        // Doubling the idle edge pushes every non-mincut above λ+1.
        let g = fixtures::u1().add_edge(1, 2, 1).unwrap().0;
        let f = pinned_flow(&g);
        assert!(compute_anchors(&g, &f).unwrap().is_empty());
        assert!(brute_anchors(&g, &f).unwrap().is_empty());
    }

    #[test]
    fn forest_bounds_and_contains_anchors() {
        let g = fixtures::star(5);
        let f = pinned_flow(&g);
        let forest = zero_flow_forest(&g, &f).unwrap();
        assert!(forest.len() <= g.n() - 2);
        let anchors = compute_anchors(&g, &f).unwrap();
        assert!(anchors.iter().all(|a| forest.contains(a)));
    }

    #[test]
    fn dense_idle_region_still_gives_small_forest() {
        // Many idle edges among internal vertices, quadratic in count, but
        // the forest stays below n-2.
        let mut edges = vec![(0usize, 1usize, 1u64), (1, 7, 1)];
        for u in 2..7 {
            edges.push((1, u, 1));
            for v in (u + 1)..7 {
                edges.push((u, v, 1));
            }
        }
        let g = Graph::undirected(8, 0, 7, &edges).unwrap();
        let f = pinned_flow(&g);
        let idle = f.no_flow(&g);
        let forest = zero_flow_forest(&g, &f).unwrap();
        assert!(idle.len() > g.n());
        assert!(forest.len() <= g.n() - 2);
    }

    #[test]
    fn empty_no_flow_empty_forest() {
        let g = fixtures::p3();
        let f = pinned_flow(&g);
        assert!(zero_flow_forest(&g, &f).unwrap().is_empty());
    }

    #[test]
    fn u1_structure() {
        let st = build_structure(&fixtures::u1()).unwrap();
        let (_, _, _, _, ab) = fixtures::u1_edge_ids();
        assert_eq!(st.anchors, vec![ab]);
        assert_eq!(st.dag.node_count(), 4);
        assert_eq!(st.lambda, 2);
    }

    #[test]
    fn structure_without_anchors_is_plain_dag() {
        let g = fixtures::p3();
        let st = build_structure(&g).unwrap();
        assert!(st.anchors.is_empty());
        let f = pinned_flow(&g);
        assert_eq!(st.dag, build_pq_dag(&g, &f).unwrap());
    }

    #[test]
    fn classify_matches_brute_on_u1() {
        let g = fixtures::u1();
        let st = build_structure(&g).unwrap();
        assert_eq!(classify_cut(&st, &[0, 1]).unwrap(), CutClass::MinPlusOne);
        assert_eq!(classify_cut(&st, &[0, 1, 2]).unwrap(), CutClass::Mincut);
        for side in [vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2]] {
            assert_eq!(
                classify_cut(&st, &side).unwrap(),
                brute_classify(&g, &side).unwrap()
            );
        }
    }

    #[test]
    fn classify_modified_base_as_other() {
        let g = fixtures::u1().add_edge(1, 2, 1).unwrap().0;
        let st = build_structure(&g).unwrap();
        assert_eq!(classify_cut(&st, &[0, 1]).unwrap(), CutClass::Other);
        assert_eq!(brute_classify(&g, &[0, 1]).unwrap(), CutClass::Other);
    }

    #[test]
    fn anchors_match_brute_force_on_random_multigraphs() {
        let mut rng = fixtures::rng(71);
        for _ in 0..25 {
            let g = fixtures::random_undirected_multigraph(&mut rng, 6, 0.5, 2);
            let f = pinned_flow(&g);
            assert_eq!(
                compute_anchors(&g, &f).unwrap(),
                brute_anchors(&g, &f).unwrap(),
                "graph: {g:?}"
            );
        }
    }

    #[test]
    fn characterization_biconditional_on_random_graphs() {
        let mut rng = fixtures::rng(73);
        for _ in 0..15 {
            let g = fixtures::random_undirected_multigraph(&mut rng, 6, 0.5, 2);
            let f = pinned_flow(&g);
            let inv = enumerate_cuts(&g, false).unwrap();
            for mask in 0..inv.cut_count() {
                let side = inv.side_of_mask(mask);
                let is_mp1 = inv.capacities[mask as usize] == inv.lambda + 1;
                assert_eq!(
                    check_min_plus1_flow_characterization(&g, &f, &side).unwrap(),
                    is_mp1
                );
            }
        }
    }

    #[test]
    fn anchors_with_and_without_cycle_cancelling() {
        // Anchor sets are flow-dependent; both flows must agree with brute
        // force for their own flow.
        let mut rng = fixtures::rng(79);
        for _ in 0..10 {
            let g = fixtures::random_undirected_multigraph(&mut rng, 5, 0.6, 2);
            let (raw, _) = max_flow(&g);
            let cancelled = cancel_flow_cycles(&g, &raw);
            for f in [raw, cancelled] {
                assert_eq!(compute_anchors(&g, &f).unwrap(), brute_anchors(&g, &f).unwrap());
            }
        }
    }
}
