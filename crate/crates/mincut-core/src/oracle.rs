//! Exhaustive cut enumeration: the ground truth every algorithm in this
//! crate is checked against. Subsets are walked in Gray-code order with
//! incremental capacity updates; the mask space is split into ranges that
//! the parallel feature fans out over.

use crate::error::{Error, Result};
use crate::flow::FlowAssignment;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::par;

/// Hard ceiling on the vertex count for exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutClass {
    Mincut,
    MinPlusOne,
    Other,
}

/// Everything the enumeration learned about a graph's cuts.
#[derive(Debug, Clone)]
pub struct CutInventory {
    /// Capacity per subset mask. In (s,t) mode bit `i` selects the i-th free
    /// vertex (every vertex except s and t, ascending) and s is always on
    /// the side. In global mode bit `i` selects vertex `i` and the empty and
    /// full masks hold `u64::MAX` placeholders.
    pub capacities: Vec<u64>,
    pub lambda: u64,
    /// Least capacity strictly above lambda, when any cut exceeds lambda.
    pub second_min: Option<u64>,
    /// Sides of all minimum cuts, each sorted, ordered lexicographically.
    pub mincuts: Vec<Vec<VertexId>>,
    /// Sides of all cuts of capacity lambda + 1.
    pub min_plus_one: Vec<Vec<VertexId>>,
    pub global: bool,
    free: Vec<VertexId>,
    s: VertexId,
}

impl CutInventory {
    /// The vertex side selected by a mask.
    pub fn side_of_mask(&self, mask: u64) -> Vec<VertexId> {
        let mut side: Vec<VertexId> = (0..self.free.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.free[i])
            .collect();
        if !self.global {
            side.push(self.s);
        }
        side.sort_unstable();
        side
    }

    pub fn cut_count(&self) -> u64 {
        if self.global {
            (1u64 << self.free.len()) - 2
        } else {
            1u64 << self.free.len()
        }
    }
}

struct Walker<'a> {
    g: &'a Graph,
    inside: Vec<bool>,
    capacity: u64,
    incident: Vec<Vec<usize>>, // vertex -> edge indices
}

impl<'a> Walker<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut incident = vec![Vec::new(); g.n()];
        for (i, e) in g.edges().iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
        Walker { g, inside: vec![false; g.n()], capacity: 0, incident }
    }

    fn reset(&mut self, side: impl Iterator<Item = VertexId>) {
        self.inside.iter_mut().for_each(|b| *b = false);
        for v in side {
            self.inside[v] = true;
        }
        self.capacity = 0;
        for e in self.g.edges() {
            let (iu, iv) = (self.inside[e.u], self.inside[e.v]);
            if iu != iv && (iu || !self.g.is_directed()) {
                self.capacity += e.cap;
            }
        }
    }

    fn flip(&mut self, v: VertexId) {
        for &i in &self.incident[v] {
            let e = &self.g.edges()[i];
            let (iu, iv) = (self.inside[e.u], self.inside[e.v]);
            let before = iu != iv && (iu || !self.g.is_directed());
            let (ju, jv) = (iu ^ (e.u == v), iv ^ (e.v == v));
            let after = ju != jv && (ju || !self.g.is_directed());
            match (before, after) {
                (false, true) => self.capacity += e.cap,
                (true, false) => self.capacity -= e.cap,
                _ => {}
            }
        }
        self.inside[v] = !self.inside[v];
    }
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Enumerates every (s,t)-cut of `g`, or every global cut with
/// `global = true`, and aggregates capacities, minimum cuts, the second
/// minimum and all minimum+1 cuts.
pub fn enumerate_cuts(g: &Graph, global: bool) -> Result<CutInventory> {
    if g.n() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(g.n(), ENUMERATION_LIMIT));
    }
    let free: Vec<VertexId> = if global {
        (0..g.n()).collect()
    } else {
        (0..g.n()).filter(|&v| v != g.s() && v != g.t()).collect()
    };
    let total = 1u64 << free.len();

    struct ChunkOut {
        caps: Vec<u64>,
        local_min: u64,
        /// Masks with capacity at most local_min + 1; the merge re-filters
        /// against the global minimum.
        low: Vec<(u64, u64)>,
    }

    let ranges = par::chunk_ranges(total, if total >= 1 << 15 { 64 } else { 1 });
    let chunks: Vec<ChunkOut> = par::map(&ranges, |&(lo, hi)| {
        let mut walker = Walker::new(g);
        let start = gray(lo);
        walker.reset(
            (0..free.len())
                .filter(|&i| start >> i & 1 == 1)
                .map(|i| free[i])
                .chain(if global { None } else { Some(g.s()) }),
        );
        let mut caps = Vec::with_capacity((hi - lo) as usize);
        let mut local_min = u64::MAX;
        let mut low: Vec<(u64, u64)> = Vec::new();
        for k in lo..hi {
            if k > lo {
                // Consecutive Gray codes differ in exactly one bit.
                let changed = (gray(k - 1) ^ gray(k)).trailing_zeros() as usize;
                walker.flip(free[changed]);
            }
            let mask = gray(k);
            if global && (mask == 0 || mask == total - 1) {
                caps.push(u64::MAX);
                continue;
            }
            let cap = walker.capacity;
            caps.push(cap);
            if cap < local_min {
                local_min = cap;
                low.retain(|&(c, _)| c <= local_min.saturating_add(1));
            }
            if cap <= local_min.saturating_add(1) {
                low.push((cap, mask));
            }
        }
        ChunkOut { caps, local_min, low }
    });

    let mut capacities = vec![u64::MAX; total as usize];
    for (r, chunk) in ranges.iter().zip(&chunks) {
        for (off, &cap) in chunk.caps.iter().enumerate() {
            capacities[gray(r.0 + off as u64) as usize] = cap;
        }
    }

    let lambda = chunks
        .iter()
        .map(|c| c.local_min)
        .min()
        .expect("at least one cut exists");
    // u64::MAX doubles as the placeholder for the skipped empty/full masks
    // in global mode; no real capacity reaches it at desk scale.
    let second_min = capacities
        .iter()
        .copied()
        .filter(|&c| c > lambda && c != u64::MAX)
        .min();

    let inv = CutInventory {
        capacities,
        lambda,
        second_min,
        mincuts: Vec::new(),
        min_plus_one: Vec::new(),
        global,
        free,
        s: g.s(),
    };
    let mut mincuts: Vec<Vec<VertexId>> = Vec::new();
    let mut min_plus_one: Vec<Vec<VertexId>> = Vec::new();
    for chunk in &chunks {
        for &(cap, mask) in &chunk.low {
            if cap == lambda {
                mincuts.push(inv.side_of_mask(mask));
            } else if cap == lambda + 1 {
                min_plus_one.push(inv.side_of_mask(mask));
            }
        }
    }
    mincuts.sort();
    min_plus_one.sort();
    Ok(CutInventory { mincuts, min_plus_one, ..inv })
}

/// All idle edges that lie in the edge-set of at least one (lambda+1) cut:
/// the anchor set for `f`, computed by brute force.
pub fn brute_anchors(g: &Graph, f: &FlowAssignment) -> Result<Vec<EdgeId>> {
    let inv = enumerate_cuts(g, false)?;
    let mut anchors = std::collections::BTreeSet::new();
    for side in &inv.min_plus_one {
        let cut = crate::graph::cut_capacity(g, side)?;
        for &id in &cut.edge_set {
            if f.is_idle(id) {
                anchors.insert(id);
            }
        }
    }
    Ok(anchors.into_iter().collect())
}

/// Classifies a cut side by exact comparison against the enumerated lambda.
pub fn brute_classify(g: &Graph, side: &[VertexId]) -> Result<CutClass> {
    let inv = enumerate_cuts(g, false)?;
    let cut = crate::graph::cut_capacity(g, side)?;
    Ok(if cut.capacity == inv.lambda {
        CutClass::Mincut
    } else if cut.capacity == inv.lambda + 1 {
        CutClass::MinPlusOne
    } else {
        CutClass::Other
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flow::max_flow;

    #[test]
    fn t1_inventory() {
        let inv = enumerate_cuts(&fixtures::t1(), false).unwrap();
        assert_eq!(inv.lambda, 2);
        assert_eq!(inv.second_min, Some(3));
        assert_eq!(inv.mincuts, vec![vec![0, 1]]);
    }

    #[test]
    fn p3_has_no_second_min() {
        let inv = enumerate_cuts(&fixtures::p3(), false).unwrap();
        assert_eq!(inv.lambda, 1);
        assert_eq!(inv.second_min, None);
    }

    #[test]
    fn u1_min_plus_one_cuts() {
        let inv = enumerate_cuts(&fixtures::u1(), false).unwrap();
        assert_eq!(inv.lambda, 2);
        assert_eq!(inv.min_plus_one, vec![vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn u1_anchors() {
        let g = fixtures::u1();
        let (f, _) = max_flow(&g);
        let (_, _, _, _, ab) = fixtures::u1_edge_ids();
        assert_eq!(brute_anchors(&g, &f).unwrap(), vec![ab]);
    }

    #[test]
    fn star3_anchors_are_all_spokes() {
        let g = fixtures::star(3);
        let (f, _) = max_flow(&g);
        let anchors = brute_anchors(&g, &f).unwrap();
        assert_eq!(anchors.len(), 3);
        assert_eq!(anchors, vec![1, 2, 3]);
    }

    #[test]
    fn no_min_plus_one_means_no_anchors() {
        let g = fixtures::p3();
        let (f, _) = max_flow(&g);
        assert!(brute_anchors(&g, &f).unwrap().is_empty());
    }

    #[test]
    fn classify_u1_cuts() {
        let g = fixtures::u1();
        assert_eq!(brute_classify(&g, &[0, 1]).unwrap(), CutClass::MinPlusOne);
        assert_eq!(brute_classify(&g, &[0]).unwrap(), CutClass::Mincut);
    }

    #[test]
    fn classify_dense_middle_cut_as_other() {
        // K4 with a doubled 1-3 edge: the middle cut {0,1} has capacity
        // lambda + 2.
        let g = crate::graph::Graph::undirected(
            4,
            0,
            3,
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 2), (2, 3, 1)],
        )
        .unwrap();
        let inv = enumerate_cuts(&g, false).unwrap();
        assert_eq!(inv.lambda, 3);
        assert_eq!(brute_classify(&g, &[0, 1]).unwrap(), CutClass::Other);
    }

    #[test]
    fn global_mode_matches_st_mode_bounds() {
        let g = fixtures::two();
        let st = enumerate_cuts(&g, false).unwrap();
        let global = enumerate_cuts(&g, true).unwrap();
        assert!(global.lambda <= st.lambda);
        assert_eq!(global.cut_count(), (1 << 4) - 2);
    }

    #[test]
    fn guard_rejects_large_graphs() {
        let edges: Vec<(usize, usize, u64)> = (0..29).map(|i| (i, i + 1, 1)).collect();
        let g = crate::graph::Graph::directed(30, 0, 29, &edges).unwrap();
        assert!(matches!(enumerate_cuts(&g, false), Err(Error::TooLarge(30, _))));
    }

    #[test]
    fn incremental_capacities_match_direct_recompute() {
        let mut rng = fixtures::rng(11);
        for _ in 0..10 {
            let g = fixtures::random_directed(&mut rng, 6, 0.5, 4);
            let inv = enumerate_cuts(&g, false).unwrap();
            for mask in 0..inv.cut_count() {
                let side = inv.side_of_mask(mask);
                let cut = crate::graph::cut_capacity(&g, &side).unwrap();
                assert_eq!(cut.capacity, inv.capacities[mask as usize]);
            }
        }
    }
}
