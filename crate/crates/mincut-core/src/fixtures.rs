//! Canonical fixtures and seeded instance generators used across the test
//! suites and the CLI's `verify`/`bench` commands.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Directed; V = {s, a, t}; edges (s,a,2), (a,t,1), (s,t,1).
/// λ = 2 with unique mincut {s, a}; the second mincut is {s} with capacity 3.
pub fn t1() -> Graph {
    Graph::directed(3, 0, 2, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)]).unwrap()
}

/// Directed; V = {s, u, v, t}; unit edges (s,u), (s,v), (u,t), (v,t), (u,v),
/// (v,u). λ = 2 with exactly the two mincuts {s} and {s,u,v}; second-mincut
/// capacity 3.
pub fn two() -> Graph {
    Graph::directed(
        4,
        0,
        3,
        &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1), (1, 2, 1), (2, 1, 1)],
    )
    .unwrap()
}

/// Undirected unit path s - a - t; both (s,t)-cuts have capacity 1, so no
/// second mincut exists.
pub fn p3() -> Graph {
    Graph::undirected(3, 0, 2, &[(0, 1, 1), (1, 2, 1)]).unwrap()
}

/// Directed unit chain s -> a -> t.
pub fn p3_directed() -> Graph {
    Graph::directed(3, 0, 2, &[(0, 1, 1), (1, 2, 1)]).unwrap()
}

/// Undirected simple; V = {s, a, b, t}; unit edges {s,a}, {a,t}, {s,b},
/// {b,t}, {a,b}. λ = 2; with the canonical flow (unit s-a-t and s-b-t) the
/// edge {a,b} is the single anchor and the minimum+1 cuts are {s,a}, {s,b}.
pub fn u1() -> Graph {
    Graph::undirected(4, 0, 3, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1), (1, 2, 1)]).unwrap()
}

/// Edge ids of U1 by role: (sa, at, sb, bt, ab).
pub fn u1_edge_ids() -> (usize, usize, usize, usize, usize) {
    (0, 1, 2, 3, 4)
}

/// Undirected star: V = {s, t, v1..vk} with unit edges {s,t} and {vi,t}.
/// λ = 1; every spoke {vi,t} is an anchor, so |A| = k = n - 2.
pub fn star(k: usize) -> Graph {
    let mut edges = vec![(0, 1, 1)];
    for i in 0..k {
        edges.push((2 + i, 1, 1));
    }
    Graph::undirected(k + 2, 0, 1, &edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directed graph on `n` vertices with s = 0, t = n-1; every ordered pair
/// gets an edge with probability `density` and a capacity in `1..=cap_max`.
pub fn random_directed(rng: &mut ChaCha8Rng, n: usize, density: f64, cap_max: u64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(density) {
                    edges.push((u, v, rng.random_range(1..=cap_max)));
                }
            }
        }
        if !edges.is_empty() {
            return Graph::directed(n, 0, n - 1, &edges).unwrap();
        }
    }
}

/// Undirected unit multigraph: every unordered pair gets up to `max_parallel`
/// parallel unit edges with probability `density`.
pub fn random_undirected_multigraph(
    rng: &mut ChaCha8Rng,
    n: usize,
    density: f64,
    max_parallel: usize,
) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(density) {
                    let copies = rng.random_range(1..=max_parallel);
                    for _ in 0..copies {
                        edges.push((u, v, 1));
                    }
                }
            }
        }
        if !edges.is_empty() {
            return Graph::undirected(n, 0, n - 1, &edges).unwrap();
        }
    }
}

/// Undirected simple graph (unit capacities, no parallel edges).
pub fn random_simple(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(density) {
                    edges.push((u, v, 1));
                }
            }
        }
        if edges.len() >= 2 {
            return Graph::undirected(n, 0, n - 1, &edges).unwrap();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_documented_shape() {
        assert_eq!(t1().m(), 3);
        assert_eq!(two().m(), 6);
        assert_eq!(u1().m(), 5);
        assert!(u1().is_simple());
        let s5 = star(5);
        assert_eq!(s5.n(), 7);
        assert_eq!(s5.m(), 6);
    }

    #[test]
    fn generators_are_deterministic() {
        let mut a = rng(7);
        let mut b = rng(7);
        let ga = random_directed(&mut a, 6, 0.5, 5);
        let gb = random_directed(&mut b, 6, 0.5, 5);
        assert_eq!(ga, gb);
    }
}
