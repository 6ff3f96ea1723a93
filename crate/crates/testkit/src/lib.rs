//! Brute-force reference implementations and graph corpora for tests.
//!
//! Nothing here shares code with the algorithms under test beyond the
//! [`Graph`] container itself.

use kelayer::graph::Graph;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Bitmask cover test over an adjacency-mask representation.
fn edge_masks(g: &Graph) -> Vec<(u32, u32)> {
    assert!(g.node_count() <= 24, "brute force limited to 24 nodes");
    g.edges().iter().map(|&(u, v)| (1u32 << u, 1u32 << v)).collect()
}

fn covers(edges: &[(u32, u32)], set: u32) -> bool {
    edges.iter().all(|&(a, b)| set & (a | b) != 0)
}

/// Minimum vertex cover number by subset enumeration.
pub fn brute_mvc(g: &Graph) -> usize {
    all_min_covers(g).0
}

/// Cover number and every minimum cover (as sorted node lists, sorted).
pub fn all_min_covers(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    let n = g.node_count();
    let edges = edge_masks(g);
    let mut best = usize::MAX;
    let mut found = Vec::new();
    for set in 0u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size > best || !covers(&edges, set) {
            continue;
        }
        if size < best {
            best = size;
            found.clear();
        }
        found.push(set);
    }
    let mut out: Vec<Vec<usize>> = found
        .into_iter()
        .map(|set| (0..n).filter(|&v| set >> v & 1 == 1).collect())
        .collect();
    out.sort();
    (best, out)
}

/// Matching number by exhaustive recursion: the lowest undecided node is
/// either left unmatched or matched to each undecided neighbor in turn.
pub fn brute_matching_number(g: &Graph) -> usize {
    fn go(g: &Graph, used: &mut Vec<bool>, from: usize) -> usize {
        let Some(v) = (from..g.node_count()).find(|&v| !used[v]) else {
            return 0;
        };
        used[v] = true;
        let mut best = go(g, used, v + 1);
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(g, used, v + 1));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(g, &mut vec![false; g.node_count()], 0)
}

/// Every labelled graph on `n` nodes (2^(n(n-1)/2) of them).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        Graph::new(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap()
    })
}

/// Every graph on at most `max_n` nodes.
pub fn all_small_graphs(max_n: usize) -> Vec<Graph> {
    (0..=max_n).flat_map(all_graphs).collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// G(n, p) with its own sampler, independent of the library generator.
pub fn random_gnp(n: usize, p: f64, rng: &mut StdRng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random graph on `2..=max_n` nodes with a random edge density.
pub fn random_small(max_n: usize, rng: &mut StdRng) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let p = rng.gen_range(0.1..0.7);
    random_gnp(n, p, rng)
}

/// Random bipartite graph: random side assignment, cross edges with
/// probability `p`.
pub fn random_bipartite(n: usize, p: f64, rng: &mut StdRng) -> Graph {
    let side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Graph whose iterated leaf removal ends with no edges, grown by reversing
/// leaf removal: each step adds a hub wired to random existing nodes (odd
/// cycles allowed) and a fresh leaf hanging off the hub. Some isolated nodes
/// are sprinkled in.
pub fn random_leaf_removable(pairs: usize, rng: &mut StdRng) -> Graph {
    let mut n = 0usize;
    let mut edges = Vec::new();
    for _ in 0..pairs {
        let hub = n;
        let leaf = n + 1;
        n += 2;
        let links = if hub == 0 { 0 } else { rng.gen_range(0..=3.min(hub)) };
        for _ in 0..links {
            edges.push((hub, rng.gen_range(0..hub)));
        }
        edges.push((hub, leaf));
        if rng.gen_bool(0.1) {
            n += 1;
        }
    }
    // Shuffle labels so the construction order is not the index order.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    Graph::new(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Proptest strategy: graphs on `min_n..=max_n` nodes, each pair an edge
/// with a density drawn per graph.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.05f64..0.8, any::<u64>()).prop_map(|(n, p, seed)| random_gnp(n, p, &mut rng(seed)))
}

/// Proptest strategy over [`random_bipartite`].
pub fn arb_bipartite(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.02f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| random_bipartite(n, p, &mut rng(seed)))
}

/// Proptest strategy over [`random_leaf_removable`].
pub fn arb_leaf_removable(max_pairs: usize) -> impl Strategy<Value = Graph> {
    (1..=max_pairs, any::<u64>()).prop_map(|(k, seed)| random_leaf_removable(k, &mut rng(seed)))
}

/// Sample mean and (n-1) standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
