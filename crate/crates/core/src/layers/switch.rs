//! Matched-pair switching strategies.
//!
//! Each strategy swaps the sides of matched pairs to lower the energy of the
//! B class. Energies are tracked incrementally by [`EnergyTracker`].

use rand::Rng;

use super::{Arrangement, EnergyMeasure};
use crate::graph::{Graph, Node, RngStream};
use crate::matching::DynamicMatching;

// One tracker lives per layer, so the variant size gap is irrelevant.
/// Energy of the B class, kept up to date while pairs are switched.
#[allow(clippy::large_enum_variant)]
pub(crate) enum EnergyTracker<'g> {
    EdgeCount {
        graph: &'g Graph,
        in_b: Vec<bool>,
        edges: usize,
    },
    MatchingNumber {
        matching: DynamicMatching<'g>,
        saved: Option<(Vec<bool>, Vec<usize>, usize)>,
    },
}

impl<'g> EnergyTracker<'g> {
    pub(crate) fn new(arr: &Arrangement<'g>, measure: EnergyMeasure) -> Self {
        let graph = arr.graph();
        let in_b: Vec<bool> = arr.in_a().iter().map(|&a| !a).collect();
        match measure {
            EnergyMeasure::EdgeCount => {
                let edges = graph
                    .edges()
                    .iter()
                    .filter(|&&(u, v)| in_b[u] && in_b[v])
                    .count();
                EnergyTracker::EdgeCount { graph, in_b, edges }
            }
            EnergyMeasure::MatchingNumber => EnergyTracker::MatchingNumber {
                matching: DynamicMatching::new(graph, in_b),
                saved: None,
            },
        }
    }

    pub(crate) fn energy(&self) -> usize {
        match self {
            EnergyTracker::EdgeCount { edges, .. } => *edges,
            EnergyTracker::MatchingNumber { matching, .. } => matching.size(),
        }
    }

    /// Applies the moves `(to_b, to_a)`: `to_b` leaves A for B, `to_a` leaves
    /// B for A. Returns the new energy.
    pub(crate) fn apply(&mut self, moves: &[(Node, Node)]) -> usize {
        match self {
            EnergyTracker::EdgeCount { graph, in_b, edges } => {
                for &(to_b, to_a) in moves {
                    in_b[to_a] = false;
                    *edges -= graph.neighbors(to_a).iter().filter(|&&w| in_b[w]).count();
                    *edges += graph.neighbors(to_b).iter().filter(|&&w| in_b[w]).count();
                    in_b[to_b] = true;
                }
            }
            EnergyTracker::MatchingNumber { matching, saved } => {
                *saved = Some(matching.snapshot());
                for &(to_b, to_a) in moves {
                    matching.remove(to_a);
                    matching.insert(to_b);
                }
            }
        }
        self.energy()
    }

    /// Undoes the most recent [`apply`](Self::apply) with the same moves.
    pub(crate) fn undo(&mut self, moves: &[(Node, Node)]) {
        match self {
            EnergyTracker::EdgeCount { .. } => {
                let inverse: Vec<(Node, Node)> = moves.iter().rev().map(|&(b, a)| (a, b)).collect();
                self.apply(&inverse);
            }
            EnergyTracker::MatchingNumber { matching, saved } => {
                matching.restore(saved.take().expect("undo without apply"));
            }
        }
    }
}

/// Algorithm 1: visit every matched pair once, in ascending order of its
/// A-side node, and keep a switch only if it strictly lowers the energy.
pub fn switch_greedy(arr: &mut Arrangement<'_>, measure: EnergyMeasure) -> usize {
    let mut tracker = EnergyTracker::new(arr, measure);
    let mut energy = tracker.energy();
    let mut order: Vec<usize> = (0..arr.pair_count()).collect();
    order.sort_by_key(|&k| arr.pair(k).0);
    for k in order {
        let (a, b) = arr.pair(k);
        let moves = [(a, b)];
        let trial = tracker.apply(&moves);
        if trial >= energy {
            tracker.undo(&moves);
        } else {
            energy = trial;
            arr.switch_pair(k);
        }
    }
    energy
}

/// Algorithm 2: `#M` rounds of switching two distinct random pairs at once,
/// kept only on strict improvement.
pub fn switch_random_pairs(
    arr: &mut Arrangement<'_>,
    measure: EnergyMeasure,
    rng: &mut RngStream,
) -> usize {
    random_double_switch(arr, measure, rng, None)
}

/// Algorithm 3: like Algorithm 2, but a non-improving switch is reverted only
/// when a uniform draw `R` in `[0, 1)` satisfies `R <= threshold`. The
/// returned energy is that of the final arrangement.
pub fn switch_threshold(
    arr: &mut Arrangement<'_>,
    measure: EnergyMeasure,
    threshold: f64,
    rng: &mut RngStream,
) -> usize {
    random_double_switch(arr, measure, rng, Some(threshold))
}

fn random_double_switch(
    arr: &mut Arrangement<'_>,
    measure: EnergyMeasure,
    rng: &mut RngStream,
    threshold: Option<f64>,
) -> usize {
    let mut tracker = EnergyTracker::new(arr, measure);
    let mut energy = tracker.energy();
    let pairs = arr.pair_count();
    if pairs < 2 {
        return energy;
    }
    for _ in 0..pairs {
        let first = rng.gen_range(0..pairs);
        let mut second = rng.gen_range(0..pairs - 1);
        if second >= first {
            second += 1;
        }
        let (a1, b1) = arr.pair(first);
        let (a2, b2) = arr.pair(second);
        let moves = [(a1, b1), (a2, b2)];
        let trial = tracker.apply(&moves);
        let revert = match threshold {
            None => trial >= energy,
            Some(t) => {
                let r: f64 = rng.gen();
                trial >= energy && r <= t
            }
        };
        if revert {
            tracker.undo(&moves);
        } else {
            energy = trial;
            arr.switch_pair(first);
            arr.switch_pair(second);
        }
    }
    energy
}
