//! Exact minimum vertex cover by branch and bound, all-minimum-cover
//! enumeration, and exhaustive arrangement search.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Node, NodeSet};
use crate::layers::{initial_arrangement, EnergyMeasure};
use crate::matching::{maximum_matching, DynamicMatching};

pub const DEFAULT_BUDGET: usize = 130;
pub const MAX_ARRANGEMENT_PAIRS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} nodes, oracle budget is {budget}")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("more than {0} minimum covers")]
    CapExceeded(usize),
    #[error("matching has {pairs} pairs, exhaustive search allows {limit}")]
    TooManyPairs { pairs: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub mvc_number: usize,
    pub one_cover: NodeSet,
    /// Every minimum cover, ascending; only filled by [`enumerate_all_mvc`].
    pub all_covers: Option<Vec<NodeSet>>,
}

/// Exact minimum vertex cover with the default reductions.
pub fn exact_mvc(g: &Graph, budget: usize) -> Result<OracleResult, OracleError> {
    exact_mvc_with(g, budget, true)
}

/// Exact minimum vertex cover. With `reductions` off, the search only
/// branches and prunes, which makes it a check on the reduction rules.
pub fn exact_mvc_with(
    g: &Graph,
    budget: usize,
    reductions: bool,
) -> Result<OracleResult, OracleError> {
    let n = g.node_count();
    if n > budget {
        return Err(OracleError::BudgetExceeded { n, budget });
    }
    let mut solver = Solver::new(g, reductions);
    solver.search();
    let one_cover = NodeSet::from_nodes(n, solver.best_cover.iter().copied()).expect("nodes of g");
    debug_assert!(g.is_vertex_cover(&one_cover));
    Ok(OracleResult {
        mvc_number: one_cover.len(),
        one_cover,
        all_covers: None,
    })
}

struct Solver<'g> {
    graph: &'g Graph,
    reductions: bool,
    alive: Vec<bool>,
    deg: Vec<usize>,
    alive_count: usize,
    chosen: Vec<Node>,
    trail: Vec<Node>,
    bound: DynamicMatching<'g>,
    best_cover: Vec<Node>,
    mark: Vec<bool>,
}

impl<'g> Solver<'g> {
    fn new(graph: &'g Graph, reductions: bool) -> Self {
        let n = graph.node_count();
        let mut solver = Solver {
            graph,
            reductions,
            alive: vec![true; n],
            deg: (0..n).map(|v| graph.degree(v)).collect(),
            alive_count: n,
            chosen: Vec::new(),
            trail: Vec::new(),
            bound: DynamicMatching::new(graph, vec![true; n]),
            best_cover: Vec::new(),
            mark: vec![false; n],
        };
        solver.best_cover = solver.greedy_cover();
        solver
    }

    /// Repeatedly takes a maximum-degree node.
    fn greedy_cover(&self) -> Vec<Node> {
        let g = self.graph;
        let mut deg = self.deg.clone();
        let mut alive = vec![true; g.node_count()];
        let mut cover = Vec::new();
        loop {
            let Some(v) = (0..g.node_count())
                .filter(|&v| alive[v] && deg[v] > 0)
                .max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
            else {
                return cover;
            };
            alive[v] = false;
            cover.push(v);
            for &w in g.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
    }

    fn remove(&mut self, v: Node) {
        self.alive[v] = false;
        self.alive_count -= 1;
        for &w in self.graph.neighbors(v) {
            if self.alive[w] {
                self.deg[w] -= 1;
            }
        }
        self.bound.remove(v);
        self.trail.push(v);
    }

    fn include(&mut self, v: Node) {
        self.chosen.push(v);
        self.remove(v);
    }

    fn rewind(&mut self, trail_len: usize, chosen_len: usize) {
        while self.trail.len() > trail_len {
            let v = self.trail.pop().expect("nonempty trail");
            self.alive[v] = true;
            self.alive_count += 1;
            for &w in self.graph.neighbors(v) {
                if self.alive[w] {
                    self.deg[w] += 1;
                }
            }
        }
        self.chosen.truncate(chosen_len);
    }

    /// Degree-0 removal, degree-1 reduction and neighborhood domination,
    /// to a fixed point.
    fn reduce(&mut self) {
        let n = self.graph.node_count();
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if !self.alive[v] {
                    continue;
                }
                match self.deg[v] {
                    0 => {
                        self.remove(v);
                        changed = true;
                    }
                    1 => {
                        let w = self.alive_neighbor(v);
                        self.include(w);
                        changed = true;
                    }
                    _ => {
                        if let Some(u) = self.dominator(v) {
                            self.include(u);
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    fn alive_neighbor(&self, v: Node) -> Node {
        *self
            .graph
            .neighbors(v)
            .iter()
            .find(|&&w| self.alive[w])
            .expect("a live neighbor")
    }

    /// A live neighbor `u` of `v` with `N[v]` inside `N[u]`; some minimum
    /// cover of the live graph contains `u`.
    fn dominator(&mut self, v: Node) -> Option<Node> {
        let g = self.graph;
        let mut found = None;
        for &u in g.neighbors(v) {
            if !self.alive[u] || self.deg[u] < self.deg[v] {
                continue;
            }
            for &w in g.neighbors(u) {
                self.mark[w] = true;
            }
            let dominated = g
                .neighbors(v)
                .iter()
                .all(|&w| w == u || !self.alive[w] || self.mark[w]);
            for &w in g.neighbors(u) {
                self.mark[w] = false;
            }
            if dominated {
                found = Some(u);
                break;
            }
        }
        found
    }

    /// Live nodes minus the size of a greedy clique partition.
    fn clique_bound(&mut self) -> usize {
        let g = self.graph;
        let n = g.node_count();
        let mut used = vec![false; n];
        let mut cliques = 0;
        let mut clique = Vec::new();
        for v in 0..n {
            if !self.alive[v] || used[v] {
                continue;
            }
            cliques += 1;
            used[v] = true;
            clique.clear();
            clique.push(v);
            for &w in g.neighbors(v) {
                if self.alive[w] && !used[w] && clique.iter().all(|&c| g.has_edge(c, w)) {
                    used[w] = true;
                    clique.push(w);
                }
            }
        }
        self.alive_count - cliques
    }

    fn lower_bound(&mut self) -> usize {
        self.bound.size().max(self.clique_bound())
    }

    fn search(&mut self) {
        let trail_len = self.trail.len();
        let chosen_len = self.chosen.len();
        let snapshot = self.bound.snapshot();
        if self.reductions {
            self.reduce();
        }
        let pick = (0..self.graph.node_count())
            .filter(|&v| self.alive[v] && self.deg[v] > 0)
            .max_by_key(|&v| (self.deg[v], std::cmp::Reverse(v)));
        match pick {
            None => {
                if self.chosen.len() < self.best_cover.len() {
                    self.best_cover = self.chosen.clone();
                }
            }
            Some(v) if self.chosen.len() + self.lower_bound() < self.best_cover.len() => {
                let mark = self.trail.len();
                let mark_chosen = self.chosen.len();
                let inner = self.bound.snapshot();
                let neighbors: Vec<Node> = self
                    .graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| self.alive[w])
                    .collect();
                for w in neighbors {
                    self.include(w);
                }
                self.remove(v);
                self.search();
                self.rewind(mark, mark_chosen);
                self.bound.restore(inner);

                self.include(v);
                self.search();
                self.rewind(mark, mark_chosen);
            }
            Some(_) => {}
        }
        self.rewind(trail_len, chosen_len);
        self.bound.restore(snapshot);
    }
}

/// Every minimum vertex cover, failing once more than `cap` are found.
///
/// Nodes are decided in ascending order; a node placed outside the cover
/// forces its neighbors in, and branches that cannot stay within the cover
/// number are cut with the matching bound of the undecided remainder.
pub fn enumerate_all_mvc(g: &Graph, cap: usize) -> Result<OracleResult, OracleError> {
    let base = exact_mvc(g, usize::MAX)?;
    let k = base.mvc_number;
    let n = g.node_count();
    let mut state = vec![Decision::Open; n];
    let mut found = Vec::new();
    enumerate(g, 0, 0, k, cap, &mut state, &mut found)?;
    let mut covers: Vec<NodeSet> = found
        .into_iter()
        .map(|nodes| NodeSet::from_nodes(n, nodes).expect("nodes of g"))
        .collect();
    covers.sort_by_key(|c| c.to_vec());
    Ok(OracleResult {
        mvc_number: k,
        one_cover: covers.first().cloned().unwrap_or(base.one_cover),
        all_covers: Some(covers),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Decision {
    Open,
    In,
    Out,
}

fn enumerate(
    g: &Graph,
    v: Node,
    size: usize,
    k: usize,
    cap: usize,
    state: &mut Vec<Decision>,
    found: &mut Vec<Vec<Node>>,
) -> Result<(), OracleError> {
    if size > k {
        return Ok(());
    }
    if v == g.node_count() {
        found.push((0..v).filter(|&u| state[u] == Decision::In).collect());
        if found.len() > cap {
            return Err(OracleError::CapExceeded(cap));
        }
        return Ok(());
    }
    if size + remaining_bound(g, v, state) > k {
        return Ok(());
    }
    let forced = g.neighbors(v).iter().any(|&w| state[w] == Decision::Out);
    for choice in [Decision::In, Decision::Out] {
        if choice == Decision::Out && forced {
            continue;
        }
        state[v] = choice;
        let size = size + usize::from(choice == Decision::In);
        enumerate(g, v + 1, size, k, cap, state, found)?;
    }
    state[v] = Decision::Open;
    Ok(())
}

/// Nodes from `from` on that are forced in, plus the matching number of the
/// remaining open nodes.
fn remaining_bound(g: &Graph, from: Node, state: &[Decision]) -> usize {
    let n = g.node_count();
    let forced: Vec<bool> = (0..n)
        .map(|u| u >= from && g.neighbors(u).iter().any(|&w| state[w] == Decision::Out))
        .collect();
    let open: Vec<bool> = (0..n).map(|u| u >= from && !forced[u]).collect();
    let matched = DynamicMatching::new(g, open).size();
    forced.iter().filter(|&&f| f).count() + matched
}

/// Lowest energy over all arrangements of a matching, with the side of
/// every pair free and unmatched nodes in B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementOptimum {
    pub energy: usize,
    /// A class of the first optimal arrangement in Gray-code order.
    pub class_a: NodeSet,
}

/// Minimum B energy over all `2^#M` arrangements of the matching that
/// [`maximum_matching`] returns, each energy computed from scratch.
pub fn exhaustive_arrangement_search(
    g: &Graph,
    measure: EnergyMeasure,
) -> Result<ArrangementOptimum, OracleError> {
    let m = maximum_matching(g);
    let pairs = m.size();
    if pairs > MAX_ARRANGEMENT_PAIRS {
        return Err(OracleError::TooManyPairs {
            pairs,
            limit: MAX_ARRANGEMENT_PAIRS,
        });
    }
    let mut arr = initial_arrangement(g, &m);
    let mut best = ArrangementOptimum {
        energy: arr.energy(measure),
        class_a: arr.class_a(),
    };
    for step in 1u64..(1u64 << pairs) {
        arr.switch_pair(step.trailing_zeros() as usize);
        let e = arr.energy(measure);
        if e < best.energy {
            best = ArrangementOptimum {
                energy: e,
                class_a: arr.class_a(),
            };
        }
    }
    Ok(best)
}
