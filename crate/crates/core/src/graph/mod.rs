//! Simple undirected graphs over dense `0..n` node indices.
//!
//! A [`Graph`] is immutable once built: the edge list is normalized to
//! `(u, v)` with `u < v`, sorted and deduplicated, and the adjacency lists are
//! sorted. Every algorithm in the crate works on this representation.

mod generate;
mod io;
mod leaves;

pub use generate::{generate_er, RngStream};
pub use io::{read_graph, write_graph};
pub use leaves::{remove_leaves, remove_leaves_ordered, LeafOrder, LeafRemoval};

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Index of a node inside one particular [`Graph`].
pub type Node = usize;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a node outside 0..{node_count}")]
    NodeOutOfRange { u: Node, v: Node, node_count: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(Node),
    #[error("node {node} is not in a graph of {node_count} nodes")]
    NotAMember { node: Node, node_count: usize },
    #[error("node set built for {set} nodes used with a graph of {graph} nodes")]
    UniverseMismatch { set: usize, graph: usize },
    #[error("average degree {avg_degree} is infeasible for {n} nodes")]
    InfeasibleDensity { n: usize, avg_degree: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(err: std::io::Error) -> Self {
        GraphError::Io(err.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(Node, Node)>,
    adjacency: Vec<Vec<Node>>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Node, Node)>,
    {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(GraphError::NodeOutOfRange { u, v, node_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::from_normalized(node_count, normalized))
    }

    /// Graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        Self::from_normalized(node_count, Vec::new())
    }

    /// `edges` must already be sorted, deduplicated and oriented `u < v`.
    fn from_normalized(node_count: usize, edges: Vec<(Node, Node)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            node_count,
            edges,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edges, sorted lexicographically with `u < v`.
    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    pub fn neighbors(&self, u: Node) -> &[Node] {
        &self.adjacency[u]
    }

    pub fn adjacency(&self) -> &[Vec<Node>] {
        &self.adjacency
    }

    pub fn degree(&self, u: Node) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u < self.node_count && v < self.node_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.node_count
    }

    /// Checks that the adjacency lists describe exactly the edge set.
    pub fn is_consistent(&self) -> bool {
        if self.adjacency.len() != self.node_count {
            return false;
        }
        let rebuilt = Self::from_normalized(self.node_count, self.edges.clone());
        rebuilt.adjacency == self.adjacency
            && self
                .edges
                .windows(2)
                .all(|w| w[0] < w[1])
            && self.edges.iter().all(|&(u, v)| u < v && v < self.node_count)
    }

    /// True if every edge has at least one endpoint in `cover`.
    pub fn is_vertex_cover(&self, cover: &NodeSet) -> bool {
        cover.universe() == self.node_count
            && self
                .edges
                .iter()
                .all(|&(u, v)| cover.contains(u) || cover.contains(v))
    }

    /// Subgraph induced by `nodes`, re-indexed densely in ascending original
    /// order.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> Result<Subgraph, GraphError> {
        if nodes.universe() != self.node_count {
            return Err(GraphError::UniverseMismatch {
                set: nodes.universe(),
                graph: self.node_count,
            });
        }
        let to_original: Vec<Node> = nodes.iter().collect();
        let mut to_local = vec![usize::MAX; self.node_count];
        for (local, &orig) in to_original.iter().enumerate() {
            to_local[orig] = local;
        }
        let edges: Vec<(Node, Node)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| nodes.contains(u) && nodes.contains(v))
            .map(|&(u, v)| (to_local[u], to_local[v]))
            .collect();
        // Order-preserving relabelling keeps the list sorted with u < v.
        let graph = Self::from_normalized(to_original.len(), edges);
        Ok(Subgraph { graph, to_original })
    }

    /// Subgraph induced by an explicit list of node indices.
    pub fn induced_by_nodes<I>(&self, nodes: I) -> Result<Subgraph, GraphError>
    where
        I: IntoIterator<Item = Node>,
    {
        let set = NodeSet::from_nodes(self.node_count, nodes)?;
        self.induced_subgraph(&set)
    }
}

/// A graph induced on a subset of some host graph, with the mapping from
/// local indices back to the host's indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_original: Vec<Node>,
}

impl Subgraph {
    /// The whole graph viewed as a subgraph of itself.
    pub fn identity(graph: Graph) -> Self {
        let to_original = graph.nodes().collect();
        Subgraph { graph, to_original }
    }

    pub fn original(&self, local: Node) -> Node {
        self.to_original[local]
    }

    /// Lifts a node set over the subgraph into the host's index space.
    pub fn lift(&self, local: &NodeSet, host_nodes: usize) -> NodeSet {
        let mut out = NodeSet::new(host_nodes);
        for v in local.iter() {
            out.insert(self.to_original[v]);
        }
        out
    }
}

/// Membership over the nodes `0..universe` of one graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    member: Vec<bool>,
    len: usize,
}

impl NodeSet {
    pub fn new(universe: usize) -> Self {
        NodeSet {
            member: vec![false; universe],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        NodeSet {
            member: vec![true; universe],
            len: universe,
        }
    }

    pub fn from_nodes<I>(universe: usize, nodes: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Node>,
    {
        let mut set = NodeSet::new(universe);
        for v in nodes {
            if v >= universe {
                return Err(GraphError::NotAMember {
                    node: v,
                    node_count: universe,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn from_mask(member: Vec<bool>) -> Self {
        let len = member.iter().filter(|&&b| b).count();
        NodeSet { member, len }
    }

    pub fn universe(&self) -> usize {
        self.member.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: Node) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    /// Returns true if `v` was not already present.
    pub fn insert(&mut self, v: Node) -> bool {
        let fresh = !self.member[v];
        if fresh {
            self.member[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: Node) -> bool {
        let present = self.member[v];
        if present {
            self.member[v] = false;
            self.len -= 1;
        }
        present
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Node> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<Node> {
        self.iter().collect()
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.member
    }

    pub fn complement(&self) -> NodeSet {
        NodeSet::from_mask(self.member.iter().map(|&b| !b).collect())
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.member
            .iter()
            .zip(&other.member)
            .all(|(&a, &b)| !(a && b))
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        assert_eq!(self.universe(), other.universe(), "node sets over different graphs");
        NodeSet::from_mask(
            self.member
                .iter()
                .zip(&other.member)
                .map(|(&a, &b)| a || b)
                .collect(),
        )
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.member
            .iter()
            .zip(&other.member)
            .all(|(&a, &b)| !a || b)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn builds_triangle_and_square() {
        let c3 = Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c3.edge_count(), 3);
        assert_eq!(c3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.nodes().all(|v| c4.degree(v) == 2));
        assert!(c4.is_consistent());
    }

    #[test]
    fn rejects_self_loop_and_out_of_range() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::NodeOutOfRange { .. })
        ));
    }

    #[test]
    fn duplicate_edges_are_merged() {
        let g = Graph::new(3, [(0, 1), (1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let c3 = cycle(3);
        let sub = c3.induced_by_nodes([0, 1]).unwrap();
        assert_eq!(sub.graph.edge_count(), 1);
        assert_eq!(sub.to_original, vec![0, 1]);

        let c4 = cycle(4);
        let sub = c4.induced_by_nodes([1, 3]).unwrap();
        assert_eq!(sub.graph.node_count(), 2);
        assert_eq!(sub.graph.edge_count(), 0);

        let k7 = complete(7);
        let sub = k7.induced_by_nodes([6, 1, 4, 2]).unwrap();
        assert_eq!(sub.graph, complete(4));
        assert_eq!(sub.to_original, vec![1, 2, 4, 6]);
    }

    #[test]
    fn induced_subgraph_rejects_foreign_nodes() {
        let c3 = cycle(3);
        assert!(matches!(
            c3.induced_by_nodes([0, 5]),
            Err(GraphError::NotAMember { node: 5, .. })
        ));
        assert!(matches!(
            c3.induced_subgraph(&NodeSet::new(4)),
            Err(GraphError::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn node_set_operations() {
        let a = NodeSet::from_nodes(5, [0, 2]).unwrap();
        let b = NodeSet::from_nodes(5, [1, 3, 4]).unwrap();
        assert!(a.is_disjoint(&b));
        let u = a.union(&b);
        assert_eq!(u.len(), 5);
        assert_eq!(u, NodeSet::full(5));
        assert_eq!(a.complement().to_vec(), vec![1, 3, 4]);
        assert!(a.is_subset(&u));
        assert!(!u.is_subset(&a));
    }

    #[test]
    fn vertex_cover_check() {
        let c4 = cycle(4);
        assert!(c4.is_vertex_cover(&NodeSet::from_nodes(4, [0, 2]).unwrap()));
        assert!(!c4.is_vertex_cover(&NodeSet::from_nodes(4, [0, 1]).unwrap()));
        assert!(petersen().is_consistent());
        assert_eq!(petersen().edge_count(), 15);
    }
}
