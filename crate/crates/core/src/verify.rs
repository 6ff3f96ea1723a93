//! König-Egerváry verification through the reduced solution graph.
//!
//! A graph is KE iff it has a vertex cover of size equal to its matching
//! number. Such a cover holds exactly one endpoint of every matched pair and
//! no unmatched node. So the matched pairs become *double edges*
//! (mutual-determination constraints) and the unmatched nodes are seeded as
//! uncovered backbones. Constraint propagation plus per-node covered/uncovered
//! trials then either find a contradiction (not KE) or leave a state that
//! describes every minimum cover.
//!
//! States only ever move from [`NodeState::Unfrozen`] to a backbone. A request
//! to flip a backbone is dropped and surfaces as a violated constraint in
//! [`consistency_check`].

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, Node, NodeSet};
use crate::matching::{maximum_matching, Matching};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("more than {0} minimum covers")]
    CapExceeded(usize),
    #[error("the reduced solution graph is empty: the graph is not König-Egerváry")]
    NotKe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeState {
    /// Uncovered in every minimum cover.
    PositiveBackbone,
    /// Covered in every minimum cover.
    NegativeBackbone,
    Unfrozen,
}

impl NodeState {
    pub fn letter(self) -> char {
        match self {
            NodeState::PositiveBackbone => 'P',
            NodeState::NegativeBackbone => 'N',
            NodeState::Unfrozen => 'F',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

/// Order in which the confliction check probes unfrozen nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbeOrder {
    #[default]
    Ascending,
    Descending,
}

/// Host graph annotated with per-node states and double edges.
#[derive(Clone, Debug)]
pub struct ReducedSolutionGraph<'g> {
    graph: &'g Graph,
    states: Vec<NodeState>,
    double_edges: Arc<Matching>,
    empty: bool,
}

impl<'g> ReducedSolutionGraph<'g> {
    /// All nodes unfrozen; every pair of `double_edges` becomes a double edge.
    pub fn new(graph: &'g Graph, double_edges: Matching) -> Self {
        assert_eq!(graph.node_count(), double_edges.node_count());
        ReducedSolutionGraph {
            graph,
            states: vec![NodeState::Unfrozen; graph.node_count()],
            double_edges: Arc::new(double_edges),
            empty: false,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn state(&self, v: Node) -> NodeState {
        self.states[v]
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    /// Overwrites one state. Intended for building probe states by hand.
    pub fn set_state(&mut self, v: Node, state: NodeState) {
        self.states[v] = state;
    }

    pub fn double_partner(&self, v: Node) -> Option<Node> {
        self.double_edges.mate(v)
    }

    pub fn double_edges(&self) -> Vec<(Node, Node)> {
        self.double_edges.pairs()
    }

    pub fn matching(&self) -> &Matching {
        &self.double_edges
    }

    /// True when the graph was found not to be KE.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    fn nodes_in(&self, state: NodeState) -> NodeSet {
        NodeSet::from_mask(self.states.iter().map(|&s| s == state).collect())
    }

    pub fn positive_backbones(&self) -> NodeSet {
        self.nodes_in(NodeState::PositiveBackbone)
    }

    pub fn negative_backbones(&self) -> NodeSet {
        self.nodes_in(NodeState::NegativeBackbone)
    }

    pub fn free_nodes(&self) -> NodeSet {
        self.nodes_in(NodeState::Unfrozen)
    }

    /// One letter per node: `P` uncovered backbone, `N` covered backbone,
    /// `F` free.
    pub fn state_string(&self) -> String {
        self.states.iter().map(|s| s.letter()).collect()
    }

    /// A minimum vertex cover read off the solution graph: backbones as
    /// stated, free nodes fixed one at a time in ascending order, preferring
    /// "covered" whenever that stays consistent.
    pub fn min_cover(&self) -> Result<NodeSet, VerifyError> {
        if self.empty {
            return Err(VerifyError::NotKe);
        }
        let mut s = self.clone();
        let mut trail = Vec::new();
        for v in self.graph.nodes() {
            if s.states[v] != NodeState::Unfrozen {
                continue;
            }
            if !s.try_covered(v, &mut trail) {
                s.undo(&mut trail);
                if !s.try_uncovered(v, &mut trail) {
                    return Err(VerifyError::NotKe);
                }
            }
            trail.clear();
        }
        Ok(s.negative_backbones())
    }

    /// Trial state with `v` uncovered and propagated.
    fn with_uncovered(&self, v: Node) -> Self {
        let mut s = self.clone();
        let ok = s.try_uncovered(v, &mut Vec::new());
        s.empty |= !ok;
        s
    }

    /// Trial state with `v` covered and propagated.
    fn with_covered(&self, v: Node) -> Self {
        let mut s = self.clone();
        let ok = s.try_covered(v, &mut Vec::new());
        s.empty |= !ok;
        s
    }

    /// Uncovers the unfrozen node `v` and propagates, logging every changed
    /// node in `trail`. Returns false if a constraint touching a changed node
    /// is violated; on a consistent starting state that is exactly when the
    /// result is inconsistent.
    fn try_uncovered(&mut self, v: Node, trail: &mut Vec<Node>) -> bool {
        self.states[v] = NodeState::PositiveBackbone;
        trail.push(v);
        propagate(self, v, trail)
    }

    /// Covers the unfrozen node `v`; its double-edge partner, if unfrozen, is
    /// uncovered and propagated. Covering an unmatched node is a violation:
    /// the cover would exceed the matching number.
    fn try_covered(&mut self, v: Node, trail: &mut Vec<Node>) -> bool {
        self.states[v] = NodeState::NegativeBackbone;
        trail.push(v);
        match self.double_partner(v) {
            None => false,
            Some(j) => match self.states[j] {
                NodeState::Unfrozen => {
                    self.states[j] = NodeState::PositiveBackbone;
                    trail.push(j);
                    propagate(self, j, trail)
                }
                NodeState::NegativeBackbone => false,
                NodeState::PositiveBackbone => true,
            },
        }
    }

    fn undo(&mut self, trail: &mut Vec<Node>) {
        for v in trail.drain(..) {
            self.states[v] = NodeState::Unfrozen;
        }
    }
}

impl fmt::Display for ReducedSolutionGraph<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return writeln!(f, "empty");
        }
        writeln!(f, "states: {}", self.state_string())?;
        let pairs: Vec<String> = self
            .double_edges()
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        writeln!(f, "double edges: {}", pairs.join(" "))
    }
}

/// Propagates the consequences of `k` being an uncovered backbone: its
/// neighbors become covered, and the double-edge partner of a covered node
/// becomes uncovered, recursively. Only unfrozen nodes are assigned.
///
/// Propagation is depth first: all neighbors of a node are covered before the
/// first partner is uncovered and explored. A final pass handles double edges
/// that already had a covered end before the call.
pub fn freezing_influence(s: &mut ReducedSolutionGraph<'_>, k: Node) {
    let mut trail = Vec::new();
    propagate(s, k, &mut trail);
    settle(s, &mut trail);
}

/// Uncovers the unfrozen end of every double edge whose other end is covered.
fn settle(s: &mut ReducedSolutionGraph<'_>, trail: &mut Vec<Node>) -> bool {
    let mut ok = true;
    for v in s.graph.nodes() {
        if s.states[v] != NodeState::NegativeBackbone {
            continue;
        }
        if let Some(j) = s.double_partner(v) {
            if s.states[j] == NodeState::Unfrozen {
                s.states[j] = NodeState::PositiveBackbone;
                trail.push(j);
                ok &= propagate(s, j, trail);
            }
        }
    }
    ok
}

/// Depth-first propagation from the uncovered node `k`. Returns false if an
/// edge with two uncovered ends or a double edge with two covered ends was
/// created along the way.
fn propagate(s: &mut ReducedSolutionGraph<'_>, k: Node, trail: &mut Vec<Node>) -> bool {
    let mut ok = true;
    // Each frame holds the nodes newly covered by one uncovered node and a
    // cursor over them.
    let mut frames: Vec<(Vec<Node>, usize)> = vec![(cover_neighbors(s, k, trail, &mut ok), 0)];
    while let Some((covered, cursor)) = frames.last_mut() {
        let Some(&i) = covered.get(*cursor) else {
            frames.pop();
            continue;
        };
        *cursor += 1;
        if let Some(j) = s.double_partner(i) {
            if s.states[j] == NodeState::Unfrozen {
                s.states[j] = NodeState::PositiveBackbone;
                trail.push(j);
                let next = cover_neighbors(s, j, trail, &mut ok);
                frames.push((next, 0));
            }
        }
    }
    ok
}

fn cover_neighbors(
    s: &mut ReducedSolutionGraph<'_>,
    k: Node,
    trail: &mut Vec<Node>,
    ok: &mut bool,
) -> Vec<Node> {
    let mut covered = Vec::new();
    for &j in s.graph.neighbors(k) {
        match s.states[j] {
            NodeState::Unfrozen => {
                s.states[j] = NodeState::NegativeBackbone;
                trail.push(j);
                covered.push(j);
                if let Some(p) = s.double_partner(j) {
                    if s.states[p] == NodeState::NegativeBackbone {
                        *ok = false;
                    }
                }
            }
            NodeState::PositiveBackbone => *ok = false,
            NodeState::NegativeBackbone => {}
        }
    }
    covered
}

/// Inconsistent iff some edge joins two uncovered backbones or some double
/// edge joins two covered backbones (or the state is already empty).
pub fn consistency_check(s: &ReducedSolutionGraph<'_>) -> Consistency {
    use NodeState::*;
    let bad_edge = s
        .graph
        .edges()
        .iter()
        .any(|&(u, v)| s.states[u] == PositiveBackbone && s.states[v] == PositiveBackbone);
    let bad_double = s.graph.nodes().any(|u| {
        s.states[u] == NegativeBackbone
            && s.double_partner(u).is_some_and(|v| s.states[v] == NegativeBackbone)
    });
    if s.empty || bad_edge || bad_double {
        Consistency::Inconsistent
    } else {
        Consistency::Consistent
    }
}

/// Probes every unfrozen node (ascending) as uncovered and as covered.
pub fn confliction_check(s: ReducedSolutionGraph<'_>) -> ReducedSolutionGraph<'_> {
    confliction_check_ordered(s, ProbeOrder::Ascending)
}

/// Probes every still-unfrozen node in `order`:
/// both trials inconsistent empties the solution graph; exactly one
/// inconsistent commits the other trial with its propagation; neither leaves
/// the node free. Nodes frozen by an earlier commit are skipped.
pub fn confliction_check_ordered(
    mut s: ReducedSolutionGraph<'_>,
    order: ProbeOrder,
) -> ReducedSolutionGraph<'_> {
    if consistency_check(&s) == Consistency::Inconsistent {
        s.empty = true;
        return s;
    }
    let n = s.graph.node_count();
    let probe: Box<dyn Iterator<Item = Node>> = match order {
        ProbeOrder::Ascending => Box::new(0..n),
        ProbeOrder::Descending => Box::new((0..n).rev()),
    };
    let mut trail = Vec::new();
    for i in probe {
        if s.states[i] != NodeState::Unfrozen {
            continue;
        }
        let uncovered_ok = s.try_uncovered(i, &mut trail);
        s.undo(&mut trail);
        let covered_ok = s.try_covered(i, &mut trail);
        match (uncovered_ok, covered_ok) {
            (false, false) => {
                s.undo(&mut trail);
                s.empty = true;
                break;
            }
            (false, true) => trail.clear(),
            (true, false) => {
                s.undo(&mut trail);
                s.try_uncovered(i, &mut trail);
                trail.clear();
            }
            (true, true) => s.undo(&mut trail),
        }
    }
    s
}

/// Outcome of [`verify_ke`].
#[derive(Clone, Debug)]
pub struct Verification<'g> {
    pub solution: ReducedSolutionGraph<'g>,
}

impl<'g> Verification<'g> {
    pub fn is_ke(&self) -> bool {
        !self.solution.is_empty()
    }

    pub fn matching(&self) -> &Matching {
        self.solution.matching()
    }

    pub fn matching_number(&self) -> usize {
        self.solution.matching().size()
    }
}

pub fn verify_ke(g: &Graph) -> Verification<'_> {
    verify_ke_with(g, maximum_matching(g), ProbeOrder::Ascending)
}

/// Runs verification on a caller-supplied maximum matching.
pub fn verify_ke_with(g: &Graph, matching: Matching, order: ProbeOrder) -> Verification<'_> {
    let mut s = ReducedSolutionGraph::new(g, matching);
    let unmatched: Vec<Node> = g.nodes().filter(|&v| s.double_partner(v).is_none()).collect();
    for &k in &unmatched {
        s.states[k] = NodeState::PositiveBackbone;
    }
    let mut trail = Vec::new();
    for &k in &unmatched {
        propagate(&mut s, k, &mut trail);
    }
    settle(&mut s, &mut trail);
    Verification {
        solution: confliction_check_ordered(s, order),
    }
}

pub fn is_ke(g: &Graph) -> bool {
    verify_ke(g).is_ke()
}

/// All minimum vertex covers encoded by a non-empty solution graph, found by
/// fixing the lowest free node both ways and propagating.
pub fn enumerate_min_covers(
    s: &ReducedSolutionGraph<'_>,
    cap: usize,
) -> Result<Vec<NodeSet>, VerifyError> {
    if s.empty {
        return Err(VerifyError::NotKe);
    }
    let mut out = Vec::new();
    enumerate_into(s.clone(), cap, &mut out)?;
    Ok(out)
}

fn enumerate_into(
    s: ReducedSolutionGraph<'_>,
    cap: usize,
    out: &mut Vec<NodeSet>,
) -> Result<(), VerifyError> {
    let Some(v) = s.states.iter().position(|&st| st == NodeState::Unfrozen) else {
        if out.len() == cap {
            return Err(VerifyError::CapExceeded(cap));
        }
        out.push(s.negative_backbones());
        return Ok(());
    };
    for trial in [s.with_covered(v), s.with_uncovered(v)] {
        if consistency_check(&trial) == Consistency::Consistent {
            enumerate_into(trial, cap, out)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use NodeState::*;

    fn states(s: &ReducedSolutionGraph<'_>) -> String {
        s.state_string()
    }

    #[test]
    fn star_propagation_from_one_leaf() {
        // Center 0, leaves 1..=3, double edge (0,1); leaf 2 uncovered.
        let g = star(3);
        let mut s = ReducedSolutionGraph::new(&g, Matching::from_pairs(4, [(0, 1)]).unwrap());
        s.set_state(2, PositiveBackbone);
        freezing_influence(&mut s, 2);
        assert_eq!(s.state(0), NegativeBackbone);
        assert_eq!(s.state(1), PositiveBackbone);
        assert_eq!(s.state(3), Unfrozen);
        assert_eq!(consistency_check(&s), Consistency::Consistent);
        assert_eq!(s.negative_backbones().to_vec(), vec![0]);
    }

    #[test]
    fn isolated_positive_changes_nothing() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let mut s = ReducedSolutionGraph::new(&g, Matching::from_pairs(3, [(0, 1)]).unwrap());
        s.set_state(2, PositiveBackbone);
        freezing_influence(&mut s, 2);
        assert_eq!(states(&s), "FFP");
    }

    /// C5 relabelled 0..5 with edges i-(i+1); double edges (0,1), (2,3);
    /// node 4 unmatched.
    fn c5_trace() -> (Graph, Matching) {
        (cycle(5), Matching::from_pairs(5, [(0, 1), (2, 3)]).unwrap())
    }

    #[test]
    fn c5_propagation_trace() {
        let (g, m) = c5_trace();
        let mut s = ReducedSolutionGraph::new(&g, m);
        s.set_state(4, PositiveBackbone);
        freezing_influence(&mut s, 4);
        // 4 covers 0 and 3; 0's partner 1 is uncovered and covers 2; 3's
        // partner 2 is already covered.
        assert_eq!(states(&s), "NPNNP");
        assert_eq!(consistency_check(&s), Consistency::Inconsistent);
    }

    #[test]
    fn consistency_examples() {
        let c4 = cycle(4);
        let s = ReducedSolutionGraph::new(&c4, Matching::from_pairs(4, [(0, 1), (2, 3)]).unwrap());
        assert_eq!(consistency_check(&s), Consistency::Consistent);

        let k2 = path(2);
        let mut s = ReducedSolutionGraph::new(&k2, Matching::empty(2));
        s.set_state(0, PositiveBackbone);
        s.set_state(1, PositiveBackbone);
        assert_eq!(consistency_check(&s), Consistency::Inconsistent);
    }

    #[test]
    fn c4_stays_free() {
        let c4 = cycle(4);
        let v = verify_ke(&c4);
        assert!(v.is_ke());
        assert_eq!(states(&v.solution), "FFFF");
        assert_eq!(v.matching_number(), 2);
    }

    #[test]
    fn k2_stays_free() {
        let g = path(2);
        let v = verify_ke(&g);
        assert!(v.is_ke());
        assert_eq!(states(&v.solution), "FF");
    }

    /// Two triangles a-x1-x2 and b-y1-y2 hung off the matched edge a-b, plus
    /// a path c-d-e attached to a through d. Each triangle forces its apex to
    /// be covered, so the matched pair (a,b) would need two covered nodes.
    pub(crate) fn two_cycle_instance() -> Graph {
        // a=0 b=1 x1=2 x2=3 y1=4 y2=5 c=6 d=7 e=8
        Graph::new(
            9,
            [(0, 1), (0, 2), (0, 3), (2, 3), (1, 4), (1, 5), (4, 5), (6, 7), (7, 8), (7, 0)],
        )
        .unwrap()
    }

    #[test]
    fn two_cycle_instance_is_not_ke() {
        let g = two_cycle_instance();
        // With c unmatched, Step 2 only freezes the tail: c, e uncovered, d covered.
        let m = Matching::from_pairs(9, [(0, 1), (2, 3), (4, 5), (7, 8)]).unwrap();
        let mut s = ReducedSolutionGraph::new(&g, m.clone());
        s.set_state(6, PositiveBackbone);
        freezing_influence(&mut s, 6);
        assert_eq!(states(&s), "FFFFFFPNP");
        assert_eq!(consistency_check(&s), Consistency::Consistent);
        // Probing a: uncovered breaks triangle x, covered forces b uncovered
        // and breaks triangle y.
        let s = confliction_check(s);
        assert!(s.is_empty());

        assert!(!verify_ke_with(&g, m, ProbeOrder::Descending).is_ke());
        assert!(!verify_ke(&g).is_ke());
    }

    #[test]
    fn small_verdicts() {
        assert!(verify_ke(&cycle(4)).is_ke());
        assert!(!verify_ke(&cycle(3)).is_ke());
        assert!(!verify_ke(&cycle(5)).is_ke());
        assert!(!verify_ke(&petersen()).is_ke());
        assert!(!verify_ke(&complete(4)).is_ke());
        assert!(verify_ke(&star(5)).is_ke());
        assert!(verify_ke(&path(7)).is_ke());
        assert!(verify_ke(&Graph::empty(3)).is_ke());
        assert!(verify_ke(&Graph::empty(0)).is_ke());
    }

    #[test]
    fn star_backbones() {
        let g = star(3);
        let v = verify_ke(&g);
        assert!(v.is_ke());
        assert_eq!(v.solution.negative_backbones().to_vec(), vec![0]);
        assert_eq!(v.solution.positive_backbones().to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn enumerate_examples() {
        let c4 = cycle(4);
        let v = verify_ke(&c4);
        let mut covers: Vec<Vec<usize>> = enumerate_min_covers(&v.solution, 10)
            .unwrap()
            .iter()
            .map(NodeSet::to_vec)
            .collect();
        covers.sort();
        assert_eq!(covers, vec![vec![0, 2], vec![1, 3]]);

        let g = star(3);
        let covers = enumerate_min_covers(&verify_ke(&g).solution, 10).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].to_vec(), vec![0]);

        let k2 = path(2);
        assert_eq!(enumerate_min_covers(&verify_ke(&k2).solution, 10).unwrap().len(), 2);
        assert_eq!(
            enumerate_min_covers(&v.solution, 1),
            Err(VerifyError::CapExceeded(1))
        );
        let c3 = cycle(3);
        assert_eq!(
            enumerate_min_covers(&verify_ke(&c3).solution, 10),
            Err(VerifyError::NotKe)
        );
    }

    #[test]
    fn min_cover_is_a_cover_of_matching_size() {
        for g in [cycle(4), path(6), star(4), cycle(8), Graph::empty(2)] {
            let v = verify_ke(&g);
            let cover = v.solution.min_cover().unwrap();
            assert!(g.is_vertex_cover(&cover));
            assert_eq!(cover.len(), v.matching_number());
        }
        assert_eq!(verify_ke(&cycle(3)).solution.min_cover(), Err(VerifyError::NotKe));
    }

    #[test]
    fn display_lists_states_and_double_edges() {
        let g = path(3);
        let v = verify_ke(&g);
        assert_eq!(v.solution.to_string(), "states: PNP\ndouble edges: 0-1\n");
    }
}
