//! Maximum-cardinality matching in general graphs.
//!
//! Augmenting paths are found with Edmonds' blossom contraction (BFS variant).
//! The search runs on an adjacency list plus an optional mask of active nodes,
//! so callers can maintain a maximum matching of an induced subgraph while
//! nodes enter and leave it.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, Node, NodeSet};

const NONE: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matched pair ({0}, {1}) references a node outside the graph")]
    NodeOutOfRange(Node, Node),
}

/// A set of vertex-disjoint edges, stored as a mate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
}

impl Matching {
    pub fn empty(node_count: usize) -> Self {
        Matching {
            mate: vec![NONE; node_count],
        }
    }

    /// Builds the mate table from a list of pairs. Pairs are written in order
    /// without validation, so overlapping pairs yield an asymmetric table that
    /// [`is_valid_matching`] rejects.
    pub fn from_pairs<I>(node_count: usize, pairs: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut m = Matching::empty(node_count);
        for (u, v) in pairs {
            if u >= node_count || v >= node_count {
                return Err(MatchingError::NodeOutOfRange(u, v));
            }
            m.mate[u] = v;
            m.mate[v] = u;
        }
        Ok(m)
    }

    #[cfg(test)]
    pub(crate) fn from_mate_table(mate: Vec<usize>) -> Self {
        Matching { mate }
    }

    pub fn node_count(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, v: Node) -> Option<Node> {
        match self.mate[v] {
            NONE => None,
            u => Some(u),
        }
    }

    pub fn is_matched(&self, v: Node) -> bool {
        self.mate[v] != NONE
    }

    /// Number of matched pairs.
    pub fn size(&self) -> usize {
        self.pairs().len()
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending by `u`.
    pub fn pairs(&self) -> Vec<(Node, Node)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(u, &v)| v != NONE && u < v && self.mate[v] == u)
            .map(|(u, &v)| (u, v))
            .collect()
    }
}

/// Maximum matching of `g`.
///
/// Greedy initialization (each node, in ascending order, takes its lowest
/// free neighbor) followed by one augmenting search from every node that is
/// still free, in ascending order. A node with no augmenting path never gains
/// one later, so a single pass is enough.
pub fn maximum_matching(g: &Graph) -> Matching {
    let n = g.node_count();
    let mut mate = vec![NONE; n];
    for u in g.nodes() {
        if mate[u] != NONE {
            continue;
        }
        if let Some(&v) = g.neighbors(u).iter().find(|&&v| mate[v] == NONE) {
            mate[u] = v;
            mate[v] = u;
        }
    }
    let mut search = BlossomSearch::new(n);
    for root in g.nodes() {
        if mate[root] == NONE {
            search.augment_from(g.adjacency(), None, &mut mate, root);
        }
    }
    Matching { mate }
}

/// Matching number of `g`.
pub fn matching_number(g: &Graph) -> usize {
    maximum_matching(g).size()
}

/// True iff `m` is a symmetric mate table over `g` whose pairs are edges of `g`.
pub fn is_valid_matching(g: &Graph, m: &Matching) -> bool {
    if m.node_count() != g.node_count() {
        return false;
    }
    g.nodes().all(|u| match m.mate(u) {
        None => true,
        Some(v) => v != u && v < g.node_count() && m.mate[v] == u && g.has_edge(u, v),
    })
}

pub fn unmatched_nodes(g: &Graph, m: &Matching) -> NodeSet {
    NodeSet::from_mask(g.nodes().map(|v| !m.is_matched(v)).collect())
}

/// True if some free node of `g` starts an augmenting path for `m`, meaning
/// `m` is not maximum.
pub fn has_augmenting_path(g: &Graph, m: &Matching) -> bool {
    let mut search = BlossomSearch::new(g.node_count());
    g.nodes()
        .filter(|&v| !m.is_matched(v))
        .any(|root| search.find_path(g.adjacency(), None, &m.mate, root).is_some())
}

/// Reusable buffers for single-root augmenting path searches.
#[derive(Clone, Debug)]
pub(crate) struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<u32>,
    stamp: u32,
    touched: Vec<usize>,
    blossom_marked: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BlossomSearch {
    pub(crate) fn new(n: usize) -> Self {
        BlossomSearch {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![0; n],
            stamp: 0,
            touched: Vec::new(),
            blossom_marked: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Searches for an augmenting path from `root` and applies it to `mate`.
    /// Returns true if the matching grew.
    pub(crate) fn augment_from(
        &mut self,
        adj: &[Vec<usize>],
        active: Option<&[bool]>,
        mate: &mut [usize],
        root: usize,
    ) -> bool {
        let Some(end) = self.find_path(adj, active, mate, root) else {
            return false;
        };
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
        true
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = NONE;
            self.base[v] = v;
            self.used[v] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn touch(&mut self, v: usize) {
        if !self.used[v] && self.parent[v] == NONE {
            self.touched.push(v);
        }
    }

    /// Returns the free endpoint of an augmenting path from `root`; the path
    /// itself is recorded in `parent`.
    fn find_path(
        &mut self,
        adj: &[Vec<usize>],
        active: Option<&[bool]>,
        mate: &[usize],
        root: usize,
    ) -> Option<usize> {
        self.reset();
        self.touch(root);
        self.used[root] = true;
        self.queue.push_back(root);
        let is_active = |v: usize| active.is_none_or(|mask| mask[v]);

        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if !is_active(to) || self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    // Only tree nodes can lie in a blossom.
                    for i in 0..self.touched.len() {
                        let node = self.touched[i];
                        if self.in_blossom[self.base[node]] {
                            self.base[node] = cur;
                            if !self.used[node] {
                                self.used[node] = true;
                                self.queue.push_back(node);
                            }
                        }
                    }
                    for &b in &self.blossom_marked {
                        self.in_blossom[b] = false;
                    }
                    self.blossom_marked.clear();
                } else if self.parent[to] == NONE {
                    self.touch(to);
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.touch(next);
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn lca(&mut self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.lca_mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        loop {
            a = self.base[a];
            self.lca_mark[a] = self.stamp;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] == self.stamp {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            for x in [self.base[v], self.base[mate[v]]] {
                if !self.in_blossom[x] {
                    self.in_blossom[x] = true;
                    self.blossom_marked.push(x);
                }
            }
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }
}

/// Maximum matching of the subgraph induced by an evolving node set, updated
/// one node at a time.
///
/// Removing or inserting a single node changes the matching number by at
/// most one, and any augmenting path afterwards must end at the freed or
/// inserted node, so one search per update keeps the matching maximum.
#[derive(Clone, Debug)]
pub(crate) struct DynamicMatching<'g> {
    adj: &'g [Vec<usize>],
    active: Vec<bool>,
    mate: Vec<usize>,
    size: usize,
    search: BlossomSearch,
}

impl<'g> DynamicMatching<'g> {
    pub(crate) fn new(g: &'g Graph, active: Vec<bool>) -> Self {
        let sub = g.induced_subgraph(&NodeSet::from_mask(active.clone())).expect("mask over g");
        let local = maximum_matching(&sub.graph);
        let mut mate = vec![NONE; g.node_count()];
        let mut size = 0;
        for (u, v) in local.pairs() {
            let (ou, ov) = (sub.to_original[u], sub.to_original[v]);
            mate[ou] = ov;
            mate[ov] = ou;
            size += 1;
        }
        DynamicMatching {
            adj: g.adjacency(),
            active,
            mate,
            size,
            search: BlossomSearch::new(g.node_count()),
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn remove(&mut self, v: usize) {
        debug_assert!(self.active[v]);
        self.active[v] = false;
        let partner = self.mate[v];
        if partner != NONE {
            self.mate[v] = NONE;
            self.mate[partner] = NONE;
            self.size -= 1;
            if self
                .search
                .augment_from(self.adj, Some(&self.active), &mut self.mate, partner)
            {
                self.size += 1;
            }
        }
    }

    pub(crate) fn insert(&mut self, v: usize) {
        debug_assert!(!self.active[v]);
        self.active[v] = true;
        if self
            .search
            .augment_from(self.adj, Some(&self.active), &mut self.mate, v)
        {
            self.size += 1;
        }
    }

    /// Cheap copy of the mutable state, for undoing a tentative update.
    pub(crate) fn snapshot(&self) -> (Vec<bool>, Vec<usize>, usize) {
        (self.active.clone(), self.mate.clone(), self.size)
    }

    pub(crate) fn restore(&mut self, snap: (Vec<bool>, Vec<usize>, usize)) {
        self.active = snap.0;
        self.mate = snap.1;
        self.size = snap.2;
    }

    #[cfg(test)]
    pub(crate) fn matching(&self) -> Matching {
        Matching::from_mate_table(self.mate.clone())
    }
}
