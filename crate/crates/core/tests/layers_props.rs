use kelayer::graph::RngStream;
use kelayer::layers::{
    cover_from_decomposition, decompose, initial_arrangement, switch_greedy, switch_random_pairs,
    switch_threshold, EnergyMeasure, Strategy as SwitchStrategy, StrategyConfig,
};
use kelayer::matching::{matching_number, maximum_matching};
use kelayer::oracle::{exact_mvc, exhaustive_arrangement_search, DEFAULT_BUDGET};
use kelayer::verify::verify_ke;
use kelayer_testkit::{arb_graph, arb_leaf_removable};
use proptest::prelude::*;

fn configs() -> impl Strategy<Value = StrategyConfig> {
    (
        prop::sample::select(SwitchStrategy::ALL.to_vec()),
        prop::sample::select(EnergyMeasure::ALL.to_vec()),
        0.0f64..=1.0,
        any::<u64>(),
    )
        .prop_map(|(s, e, t, seed)| StrategyConfig::new(s, e, seed).with_threshold(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_is_a_valid_cover(g in arb_graph(1, 40), cfg in configs()) {
        let d = decompose(&g, &cfg).unwrap();
        let cover = cover_from_decomposition(&g, &d).unwrap();
        prop_assert!(g.is_vertex_cover(&cover));
        prop_assert_eq!(cover.len(), d.mvc_estimate);
        prop_assert!(d.mvc_estimate >= matching_number(&g));
        prop_assert!(d.mvc_estimate >= exact_mvc(&g, DEFAULT_BUDGET).unwrap().mvc_number);
        prop_assert_eq!(d.layer_count, d.layer_classes.len() + 1);
        prop_assert_eq!(d.layer_energies.len(), d.layer_classes.len());
        let mut seen = d.final_class.clone();
        for class in &d.layer_classes {
            prop_assert!(!class.is_empty());
            prop_assert!(class.is_disjoint(&seen));
            seen = seen.union(class);
        }
        prop_assert_eq!(seen.len(), g.node_count());
        let last = g.induced_subgraph(&d.final_class).unwrap();
        prop_assert!(verify_ke(&last.graph).is_ke());
    }

    #[test]
    fn ke_graphs_are_one_layer(g in arb_leaf_removable(30), cfg in configs()) {
        let d = decompose(&g, &cfg).unwrap();
        prop_assert_eq!(d.layer_count, 1);
        prop_assert_eq!(d.mvc_estimate, matching_number(&g));
    }

    #[test]
    fn strategies_never_beat_the_optimum(g in arb_graph(2, 24), seed in any::<u64>()) {
        let m = maximum_matching(&g);
        prop_assume!(m.size() <= 12);
        for measure in EnergyMeasure::ALL {
            let best = exhaustive_arrangement_search(&g, measure).unwrap().energy;
            let start = initial_arrangement(&g, &m);
            let initial = start.energy(measure);

            let mut a = start.clone();
            let e = switch_greedy(&mut a, measure);
            prop_assert!(a.is_valid());
            prop_assert_eq!(e, a.energy(measure));
            prop_assert!(best <= e && e <= initial);

            let mut a = start.clone();
            let e = switch_random_pairs(&mut a, measure, &mut RngStream::new(seed));
            prop_assert!(a.is_valid());
            prop_assert_eq!(e, a.energy(measure));
            prop_assert!(best <= e && e <= initial);

            let mut a = start.clone();
            let e = switch_threshold(&mut a, measure, 0.5, &mut RngStream::new(seed));
            prop_assert!(a.is_valid());
            prop_assert_eq!(e, a.energy(measure));
            prop_assert!(best <= e);
        }
    }
}

#[test]
fn decomposition_is_reproducible() {
    let g = kelayer_testkit::random_gnp(60, 0.12, &mut kelayer_testkit::rng(8));
    for strategy in SwitchStrategy::ALL {
        let cfg = StrategyConfig::new(strategy, EnergyMeasure::MatchingNumber, 99);
        assert_eq!(decompose(&g, &cfg).unwrap(), decompose(&g, &cfg).unwrap());
    }
}
