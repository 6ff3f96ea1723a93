//! KE-layer decomposition.
//!
//! A maximum matching splits a graph into classes A and B, one endpoint of
//! every matched pair on each side and every unmatched node in B. While the
//! current graph is not KE, the pairs are switched to lower the energy of B,
//! A is peeled off as a layer and the process repeats on the subgraph induced
//! by B. The final, KE subgraph contributes its matching number to the cover
//! estimate `#M_L + sum |A_l|`.

mod switch;

pub use switch::{switch_greedy, switch_random_pairs, switch_threshold};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Node, NodeSet, RngStream, Subgraph};
use crate::matching::{maximum_matching, matching_number, Matching};
use crate::verify::verify_ke;

#[derive(Debug, Error, PartialEq)]
pub enum LayerError {
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("layer cap of {cap} exceeded on a {n}-node graph")]
    LayerCapExceeded { cap: usize, n: usize },
    #[error("node {0} is not an endpoint of a matched pair")]
    NotMatched(Node),
    #[error("decomposition does not yield a valid cover: {0}")]
    InvalidCover(String),
    #[error("unknown {kind} `{value}`")]
    Unknown { kind: &'static str, value: String },
}

/// How the energy of the B class is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EnergyMeasure {
    /// Edges inside B.
    EdgeCount,
    /// Matching number of the subgraph induced by B.
    MatchingNumber,
}

impl EnergyMeasure {
    pub const ALL: [EnergyMeasure; 2] = [EnergyMeasure::EdgeCount, EnergyMeasure::MatchingNumber];

    pub fn name(self) -> &'static str {
        match self {
            EnergyMeasure::EdgeCount => "edges",
            EnergyMeasure::MatchingNumber => "matching",
        }
    }
}

impl fmt::Display for EnergyMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnergyMeasure {
    type Err = LayerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edges" | "edge" => Ok(EnergyMeasure::EdgeCount),
            "matching" => Ok(EnergyMeasure::MatchingNumber),
            _ => Err(LayerError::Unknown {
                kind: "energy measure",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Strategy {
    /// Algorithm 1: single-pair greedy switching.
    Greedy,
    /// Algorithm 2: random double switches, strict improvement only.
    RandomPairs,
    /// Algorithm 3: random double switches, worse moves kept with
    /// probability `1 - threshold`.
    Threshold,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Greedy, Strategy::RandomPairs, Strategy::Threshold];

    pub fn id(self) -> u8 {
        match self {
            Strategy::Greedy => 1,
            Strategy::RandomPairs => 2,
            Strategy::Threshold => 3,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for Strategy {
    type Err = LayerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "greedy" => Ok(Strategy::Greedy),
            "2" | "random" => Ok(Strategy::RandomPairs),
            "3" | "threshold" => Ok(Strategy::Threshold),
            _ => Err(LayerError::Unknown {
                kind: "strategy",
                value: s.to_string(),
            }),
        }
    }
}

pub const DEFAULT_THRESHOLD: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub energy: EnergyMeasure,
    /// Revert probability for non-improving moves; only used by
    /// [`Strategy::Threshold`].
    pub threshold: f64,
    pub seed: u64,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy, energy: EnergyMeasure, seed: u64) -> Self {
        StrategyConfig {
            strategy,
            energy,
            threshold: DEFAULT_THRESHOLD,
            seed,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self, LayerError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(LayerError::InvalidThreshold(threshold));
        }
        self.threshold = threshold;
        Ok(self)
    }
}

/// Energy of `g_sub` (the subgraph induced by a B class), from scratch.
pub fn energy(g_sub: &Graph, measure: EnergyMeasure) -> usize {
    match measure {
        EnergyMeasure::EdgeCount => g_sub.edge_count(),
        EnergyMeasure::MatchingNumber => matching_number(g_sub),
    }
}

/// Split of a graph's nodes into classes A and B driven by a matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement<'g> {
    graph: &'g Graph,
    /// Matched pairs as `(A side, B side)`.
    pairs: Vec<(Node, Node)>,
    in_a: Vec<bool>,
}

impl<'g> Arrangement<'g> {
    /// Pairs with the given nodes on the A side; the other endpoint of each
    /// pair goes to B. Pairs not mentioned default to their lower endpoint
    /// in A.
    pub fn with_a_side(
        graph: &'g Graph,
        matching: &Matching,
        a_side: &[Node],
    ) -> Result<Self, LayerError> {
        let mut arr = initial_arrangement(graph, matching);
        for &v in a_side {
            let k = arr
                .pairs
                .iter()
                .position(|&(a, b)| a == v || b == v)
                .ok_or(LayerError::NotMatched(v))?;
            if arr.pairs[k].1 == v {
                arr.switch_pair(k);
            }
        }
        Ok(arr)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Pair `k` as `(A side, B side)`.
    pub fn pair(&self, k: usize) -> (Node, Node) {
        self.pairs[k]
    }

    pub fn in_a(&self) -> &[bool] {
        &self.in_a
    }

    /// Exchanges the sides of pair `k`.
    pub fn switch_pair(&mut self, k: usize) {
        let (a, b) = self.pairs[k];
        self.pairs[k] = (b, a);
        self.in_a[a] = false;
        self.in_a[b] = true;
    }

    pub fn class_a(&self) -> NodeSet {
        NodeSet::from_mask(self.in_a.clone())
    }

    pub fn class_b(&self) -> NodeSet {
        NodeSet::from_mask(self.in_a.iter().map(|&a| !a).collect())
    }

    /// Energy of B recomputed from the induced subgraph.
    pub fn energy(&self, measure: EnergyMeasure) -> usize {
        let sub = self
            .graph
            .induced_subgraph(&self.class_b())
            .expect("class over the host graph");
        energy(&sub.graph, measure)
    }

    /// Partition, pair-split and unmatched-in-B invariants.
    pub fn is_valid(&self) -> bool {
        let n = self.graph.node_count();
        let mut seen = vec![false; n];
        for &(a, b) in &self.pairs {
            if a >= n || b >= n || seen[a] || seen[b] || !self.graph.has_edge(a, b) {
                return false;
            }
            seen[a] = true;
            seen[b] = true;
            if !self.in_a[a] || self.in_a[b] {
                return false;
            }
        }
        self.in_a.len() == n && (0..n).all(|v| seen[v] || !self.in_a[v])
    }
}

/// Lower-indexed endpoint of every matched pair in A; the rest in B.
pub fn initial_arrangement<'g>(g: &'g Graph, m: &Matching) -> Arrangement<'g> {
    let pairs = m.pairs();
    let mut in_a = vec![false; g.node_count()];
    for &(a, _) in &pairs {
        in_a[a] = true;
    }
    Arrangement {
        graph: g,
        pairs,
        in_a,
    }
}

fn run_strategy(arr: &mut Arrangement<'_>, cfg: &StrategyConfig, rng: &mut RngStream) -> usize {
    match cfg.strategy {
        Strategy::Greedy => switch_greedy(arr, cfg.energy),
        Strategy::RandomPairs => switch_random_pairs(arr, cfg.energy, rng),
        Strategy::Threshold => switch_threshold(arr, cfg.energy, cfg.threshold, rng),
    }
}

/// Switches one layer's arrangement until a full strategy pass no longer
/// lowers the energy. Returns the arrangement to peel and its energy.
///
/// Under [`Strategy::Threshold`] the lowest-energy arrangement seen at the
/// end of any pass is returned, since a pass may end above where it started.
pub fn optimize_layer<'g>(
    g: &'g Graph,
    m: &Matching,
    cfg: &StrategyConfig,
    rng: &mut RngStream,
) -> (Arrangement<'g>, usize) {
    let mut arr = initial_arrangement(g, m);
    let n = g.node_count();
    let mut best: Option<(usize, Arrangement<'g>)> = None;
    if cfg.strategy == Strategy::Threshold {
        best = Some((arr.energy(cfg.energy), arr.clone()));
    }
    let mut energy = n * n;
    let mut next = run_strategy(&mut arr, cfg, rng);
    loop {
        if let Some((best_energy, best_arr)) = &mut best {
            if next < *best_energy {
                *best_energy = next;
                *best_arr = arr.clone();
            }
        }
        if next >= energy {
            break;
        }
        energy = next;
        next = run_strategy(&mut arr, cfg, rng);
    }
    match best {
        Some((best_energy, best_arr)) => (best_arr, best_energy),
        None => (arr, next),
    }
}

/// Layer classes of a decomposition, in host indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerDecomposition {
    /// A_1 .. A_{L-1}.
    pub layer_classes: Vec<NodeSet>,
    /// Nodes of the final KE subgraph.
    pub final_class: NodeSet,
    pub final_matching_size: usize,
    pub layer_count: usize,
    pub mvc_estimate: usize,
    /// Terminal B energy of each peeled layer.
    pub layer_energies: Vec<usize>,
}

impl LayerDecomposition {
    /// Line-oriented summary: layer count, one line per class, estimate.
    pub fn to_text(&self) -> String {
        let mut out = format!("layers: {}\n", self.layer_count);
        let list = |set: &NodeSet| {
            set.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for (l, class) in self.layer_classes.iter().enumerate() {
            out.push_str(&format!("A{} ({}): {}\n", l + 1, class.len(), list(class)));
        }
        out.push_str(&format!(
            "B ({}): {}\n",
            self.final_class.len(),
            list(&self.final_class)
        ));
        out.push_str(&format!("final matching: {}\n", self.final_matching_size));
        out.push_str(&format!("mvc estimate: {}\n", self.mvc_estimate));
        out
    }
}

/// `ceil(log2 n) + 2`.
pub fn layer_cap(n: usize) -> usize {
    let log = if n <= 1 { 0 } else { (usize::BITS - (n - 1).leading_zeros()) as usize };
    log + 2
}

/// Peels KE layers off `g` until the remainder is KE.
pub fn decompose(g: &Graph, cfg: &StrategyConfig) -> Result<LayerDecomposition, LayerError> {
    if !(0.0..=1.0).contains(&cfg.threshold) {
        return Err(LayerError::InvalidThreshold(cfg.threshold));
    }
    let n = g.node_count();
    let cap = layer_cap(n);
    let mut rng = RngStream::new(cfg.seed);
    let mut current = Subgraph::identity(g.clone());
    let mut layer_classes = Vec::new();
    let mut layer_energies = Vec::new();

    let final_matching_size = loop {
        let verification = verify_ke(&current.graph);
        if verification.is_ke() {
            break verification.matching_number();
        }
        if layer_classes.len() >= cap {
            return Err(LayerError::LayerCapExceeded { cap, n });
        }
        let m = maximum_matching(&current.graph);
        let (arr, energy) = optimize_layer(&current.graph, &m, cfg, &mut rng);
        layer_classes.push(current.lift(&arr.class_a(), n));
        layer_energies.push(energy);
        let next = current
            .graph
            .induced_subgraph(&arr.class_b())
            .expect("class over the current graph");
        current = Subgraph {
            to_original: next.to_original.iter().map(|&v| current.to_original[v]).collect(),
            graph: next.graph,
        };
    };

    let final_class = NodeSet::from_nodes(n, current.to_original.iter().copied())
        .expect("subgraph nodes come from g");
    let peeled: usize = layer_classes.iter().map(NodeSet::len).sum();
    Ok(LayerDecomposition {
        layer_count: layer_classes.len() + 1,
        mvc_estimate: final_matching_size + peeled,
        layer_classes,
        final_class,
        final_matching_size,
        layer_energies,
    })
}

/// Every peeled class plus a minimum cover of the final KE subgraph.
pub fn cover_from_decomposition(g: &Graph, d: &LayerDecomposition) -> Result<NodeSet, LayerError> {
    let n = g.node_count();
    let mut cover = NodeSet::new(n);
    for class in &d.layer_classes {
        for v in class.iter() {
            cover.insert(v);
        }
    }
    let last = g
        .induced_subgraph(&d.final_class)
        .map_err(|e| LayerError::InvalidCover(e.to_string()))?;
    let verification = verify_ke(&last.graph);
    let local = verification
        .solution
        .min_cover()
        .map_err(|e| LayerError::InvalidCover(e.to_string()))?;
    for v in local.iter() {
        cover.insert(last.to_original[v]);
    }
    if !g.is_vertex_cover(&cover) {
        return Err(LayerError::InvalidCover("an edge is left uncovered".into()));
    }
    if cover.len() != d.mvc_estimate {
        return Err(LayerError::InvalidCover(format!(
            "cover has {} nodes, estimate is {}",
            cover.len(),
            d.mvc_estimate
        )));
    }
    Ok(cover)
}
