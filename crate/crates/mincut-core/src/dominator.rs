//! Edge-split graphs and dominator trees.
//!
//! Splitting every arc with a marked vertex turns edge domination into
//! vertex domination: a marked vertex dominates a vertex `u` exactly when
//! its arc lies on every path from the root to `u`. Arcs of capacity two or
//! more are split into two parallel copies so that no single marked vertex
//! can pretend to be a bottleneck that a wider arc never is; only copies of
//! capacity-one arcs (`solo`) certify anything.

use crate::graph::VertexId;

#[derive(Debug, Clone)]
pub struct MarkedVertex {
    pub tail: VertexId,
    pub head: VertexId,
    /// Index of the originating arc in the caller's arc list.
    pub arc: usize,
    /// The originating arc has capacity exactly one.
    pub solo: bool,
}

#[derive(Debug, Clone)]
pub struct EdgeSplitGraph {
    pub n_base: usize,
    pub adj: Vec<Vec<usize>>,
    pub marked: Vec<MarkedVertex>,
}

impl EdgeSplitGraph {
    /// Splits `(from, to, cap)` arcs over `0..n`; marked vertices are
    /// numbered from `n` upward.
    pub fn from_arcs(n: usize, arcs: &[(VertexId, VertexId, u64)]) -> Self {
        let mut marked = Vec::new();
        for (i, &(from, to, cap)) in arcs.iter().enumerate() {
            let copies = if cap >= 2 { 2 } else { 1 };
            for _ in 0..copies {
                marked.push(MarkedVertex { tail: from, head: to, arc: i, solo: cap == 1 });
            }
        }
        let mut adj = vec![Vec::new(); n + marked.len()];
        for (j, m) in marked.iter().enumerate() {
            let w = n + j;
            adj[m.tail].push(w);
            adj[w].push(m.head);
        }
        EdgeSplitGraph { n_base: n, adj, marked }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn marked_id(&self, j: usize) -> usize {
        self.n_base + j
    }
}

#[derive(Debug, Clone)]
pub struct DominatorTree {
    pub root: usize,
    /// Immediate dominator per vertex; `None` for unreachable vertices,
    /// `Some(root)` for the root itself.
    pub idom: Vec<Option<usize>>,
}

impl DominatorTree {
    pub fn is_reachable(&self, v: usize) -> bool {
        self.idom[v].is_some()
    }

    /// Walks the idom chain; true iff `anc` dominates `v` (reflexively).
    pub fn dominates(&self, anc: usize, v: usize) -> bool {
        let mut cur = v;
        loop {
            if cur == anc {
                return true;
            }
            match self.idom[cur] {
                Some(p) if p != cur => cur = p,
                _ => return false,
            }
        }
    }
}

/// Iterative data-flow dominator computation over a reverse postorder.
pub fn dominator_tree(adj: &[Vec<usize>], root: usize) -> DominatorTree {
    let n = adj.len();
    // Postorder via iterative DFS from the root.
    let mut post = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    visited[root] = true;
    while let Some(&(v, pos)) = stack.last() {
        if pos < adj[v].len() {
            stack.last_mut().unwrap().1 += 1;
            let w = adj[v][pos];
            if !visited[w] {
                visited[w] = true;
                stack.push((w, 0));
            }
        } else {
            post.push(v);
            stack.pop();
        }
    }
    let rpo: Vec<usize> = post.iter().rev().copied().collect();
    let mut order = vec![usize::MAX; n];
    for (i, &v) in rpo.iter().enumerate() {
        order[v] = i;
    }
    let mut preds = vec![Vec::new(); n];
    for v in 0..n {
        if !visited[v] {
            continue;
        }
        for &w in &adj[v] {
            if visited[w] {
                preds[w].push(v);
            }
        }
    }

    let mut idom = vec![usize::MAX; n];
    idom[root] = root;
    let intersect = |idom: &[usize], order: &[usize], mut a: usize, mut b: usize| -> usize {
        while a != b {
            while order[a] > order[b] {
                a = idom[a];
            }
            while order[b] > order[a] {
                b = idom[b];
            }
        }
        a
    };
    let mut changed = true;
    while changed {
        changed = false;
        for &v in &rpo {
            if v == root {
                continue;
            }
            let mut new_idom = usize::MAX;
            for &p in &preds[v] {
                if idom[p] == usize::MAX {
                    continue;
                }
                new_idom = if new_idom == usize::MAX {
                    p
                } else {
                    intersect(&idom, &order, new_idom, p)
                };
            }
            if new_idom != usize::MAX && idom[v] != new_idom {
                idom[v] = new_idom;
                changed = true;
            }
        }
    }

    DominatorTree {
        root,
        idom: idom
            .into_iter()
            .map(|d| if d == usize::MAX { None } else { Some(d) })
            .collect(),
    }
}

/// Marked vertices that are internal in the dominator tree, i.e. whose arc's
/// head has the marked vertex as its immediate dominator. Only solo copies
/// (capacity-one arcs) are reported.
pub fn internal_marked_vertices(split: &EdgeSplitGraph, tree: &DominatorTree) -> Vec<usize> {
    let mut out = Vec::new();
    for (j, m) in split.marked.iter().enumerate() {
        if !m.solo {
            continue;
        }
        let w = split.marked_id(j);
        if tree.idom[m.head] == Some(w) {
            out.push(j);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::Rng;

    #[test]
    fn star_split_markers_dominate_their_heads() {
        // Direct arcs from s to everything: each marked vertex is the
        // immediate dominator of its head.
        let arcs: Vec<(usize, usize, u64)> = (1..5).map(|v| (0, v, 1)).collect();
        let split = EdgeSplitGraph::from_arcs(5, &arcs);
        let tree = dominator_tree(&split.adj, 0);
        let internal = internal_marked_vertices(&split, &tree);
        assert_eq!(internal.len(), 4);
        for j in internal {
            assert_eq!(tree.idom[split.marked[j].head], Some(split.marked_id(j)));
        }
    }

    #[test]
    fn diamond_head_is_dominated_by_the_fork_only() {
        // s -> a -> t and s -> b -> t: t's immediate dominator is s (well,
        // the nearest common vertex), so no marked vertex dominates t.
        let arcs = [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)];
        let split = EdgeSplitGraph::from_arcs(4, &arcs);
        let tree = dominator_tree(&split.adj, 0);
        assert_eq!(tree.idom[3], Some(0));
    }

    #[test]
    fn chain_dominators_follow_the_chain() {
        let arcs = [(0, 1, 1), (1, 2, 1)];
        let split = EdgeSplitGraph::from_arcs(3, &arcs);
        let tree = dominator_tree(&split.adj, 0);
        assert_eq!(tree.idom[1], Some(split.marked_id(0)));
        assert_eq!(tree.idom[2], Some(split.marked_id(1)));
        assert!(tree.dominates(1, 2));
    }

    #[test]
    fn wide_arcs_never_certify() {
        let arcs = [(0, 1, 3)];
        let split = EdgeSplitGraph::from_arcs(2, &arcs);
        assert_eq!(split.marked.len(), 2);
        let tree = dominator_tree(&split.adj, 0);
        assert!(internal_marked_vertices(&split, &tree).is_empty());
        // Still reachable, just not through a single mandatory copy.
        assert!(tree.is_reachable(1));
    }

    #[test]
    fn ancestry_matches_removal_reachability() {
        let mut rng = fixtures::rng(57);
        for _ in 0..25 {
            let n = 8;
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.25) {
                        arcs.push((u, v, 1u64));
                    }
                }
            }
            let split = EdgeSplitGraph::from_arcs(n, &arcs);
            let total = split.vertex_count();
            if total > 40 {
                continue;
            }
            let tree = dominator_tree(&split.adj, 0);
            let reach = |skip: Option<usize>| {
                let mut seen = vec![false; total];
                if skip == Some(0) {
                    return seen;
                }
                seen[0] = true;
                let mut queue = vec![0usize];
                while let Some(v) = queue.pop() {
                    for &w in &split.adj[v] {
                        if Some(w) != skip && !seen[w] {
                            seen[w] = true;
                            queue.push(w);
                        }
                    }
                }
                seen
            };
            let base = reach(None);
            for v in 0..total {
                if !base[v] || v == 0 {
                    continue;
                }
                let without_v = reach(Some(v));
                for u in 0..total {
                    if u == v || !base[u] {
                        continue;
                    }
                    let dominated = !without_v[u];
                    assert_eq!(
                        tree.dominates(v, u),
                        dominated,
                        "v={v} u={u} arcs={arcs:?}"
                    );
                }
            }
        }
    }
}
