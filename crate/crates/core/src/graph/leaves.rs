use std::collections::BTreeSet;

use super::{Graph, NodeSet, Subgraph};

/// Result of iterated leaf removal.
#[derive(Clone, Debug)]
pub struct LeafRemoval {
    /// Subgraph induced by the surviving nodes, isolated survivors included.
    pub core: Subgraph,
    /// Number of (degree-1 node, neighbor) pairs deleted.
    pub removed_leaves: usize,
}

impl LeafRemoval {
    /// Surviving nodes that still carry an edge, in host indices. This set does
    /// not depend on the removal order.
    pub fn core_nodes(&self, host_nodes: usize) -> NodeSet {
        let mut set = NodeSet::new(host_nodes);
        for v in self.core.graph.nodes() {
            if self.core.graph.degree(v) > 0 {
                set.insert(self.core.to_original[v]);
            }
        }
        set
    }

    pub fn core_is_edgeless(&self) -> bool {
        self.core.graph.edge_count() == 0
    }
}

/// Which degree-1 node to remove next when several are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafOrder {
    LowestFirst,
    HighestFirst,
}

/// Repeatedly deletes a degree-1 node together with its unique neighbor until
/// no degree-1 node remains.
pub fn remove_leaves(g: &Graph) -> LeafRemoval {
    remove_leaves_ordered(g, LeafOrder::LowestFirst)
}

pub fn remove_leaves_ordered(g: &Graph, order: LeafOrder) -> LeafRemoval {
    let n = g.node_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = g.nodes().map(|v| g.degree(v)).collect();
    let mut leaves: BTreeSet<usize> = g.nodes().filter(|&v| degree[v] == 1).collect();
    let mut removed_leaves = 0;

    let delete = |v: usize, alive: &mut Vec<bool>, degree: &mut Vec<usize>, leaves: &mut BTreeSet<usize>| {
        alive[v] = false;
        leaves.remove(&v);
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                match degree[w] {
                    1 => {
                        leaves.insert(w);
                    }
                    0 => {
                        leaves.remove(&w);
                    }
                    _ => {}
                }
            }
        }
    };

    loop {
        let leaf = match order {
            LeafOrder::LowestFirst => leaves.pop_first(),
            LeafOrder::HighestFirst => leaves.pop_last(),
        };
        let Some(leaf) = leaf else { break };
        let parent = g
            .neighbors(leaf)
            .iter()
            .copied()
            .find(|&w| alive[w])
            .expect("degree-1 node has a live neighbor");
        delete(leaf, &mut alive, &mut degree, &mut leaves);
        delete(parent, &mut alive, &mut degree, &mut leaves);
        removed_leaves += 1;
    }

    let core = g
        .induced_subgraph(&NodeSet::from_mask(alive))
        .expect("mask has the graph's universe");
    LeafRemoval {
        core,
        removed_leaves,
    }
}
