use logic_gmdh::{
    contradiction_bound, synthesize, LabelMap, LearningSet, Mode, Model, SynthesisConfig,
};
use proptest::prelude::*;

fn learning_set(rows: Vec<Vec<f64>>, labels: Vec<bool>) -> Option<LearningSet> {
    let m = rows[0].len();
    let names = (1..=m).map(|i| format!("x{i}")).collect();
    LearningSet::new(names, "y", rows, labels, LabelMap::new("no", "yes")).ok()
}

/// Small integer-valued data with both classes present.
fn any_set(max_m: usize, levels: i32) -> impl Strategy<Value = LearningSet> {
    (1..=max_m, 4usize..28)
        .prop_flat_map(move |(m, n)| {
            (
                prop::collection::vec(prop::collection::vec(0..levels, m), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_filter_map("needs both classes", |(rows, labels)| {
            let rows = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            learning_set(rows, labels)
        })
}

fn any_config() -> impl Strategy<Value = SynthesisConfig> {
    (prop::bool::ANY, 0u32..3, 1usize..=4, prop::sample::select(vec![0.2, 0.4, 1.0]), 0u64..4).prop_map(
        |(split, delta, max_p, f_ratio, seed)| SynthesisConfig {
            mode: if split { Mode::Split } else { Mode::Statement1 },
            delta,
            max_p: Some(max_p),
            f_ratio,
            seed,
            ..SynthesisConfig::default()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn no_neuron_beats_the_contradiction_floor(set in any_set(4, 5), config in any_config()) {
        let Ok(out) = synthesize(&set, &config) else { return Ok(()) };
        let bound = contradiction_bound(&set, &out.collective.pool.features);
        prop_assert_eq!(bound, out.report.contradiction_bound);
        for trace in &out.traces {
            for n in trace.survivors.iter().chain(&trace.best) {
                prop_assert!(n.errors >= bound, "layer {} neuron V={} below floor {}", trace.r, n.errors, bound);
            }
        }
    }

    #[test]
    fn synthesis_is_deterministic(set in any_set(4, 6), config in any_config()) {
        let (Ok(a), Ok(b)) = (synthesize(&set, &config), synthesize(&set, &config)) else { return Ok(()) };
        let json = |s| Model::from_synthesis(s, "y", &config).to_json();
        prop_assert_eq!(json(&a), json(&b));
    }

    #[test]
    fn neurons_are_as_deep_as_their_layer(set in any_set(5, 4), config in any_config()) {
        let Ok(out) = synthesize(&set, &config) else { return Ok(()) };
        for trace in &out.traces {
            for n in trace.survivors.iter().chain(&trace.best) {
                prop_assert_eq!(n.expr.depth(), n.layer);
                prop_assert_eq!(n.layer, trace.r);
                prop_assert_eq!(n.leaf_count(), n.layer + 1);
            }
        }
    }

    #[test]
    fn survivor_columns_are_distinct(set in any_set(5, 4), config in any_config()) {
        let Ok(out) = synthesize(&set, &config) else { return Ok(()) };
        let pool: Vec<&Vec<bool>> = out.collective.pool.features.iter().map(|f| &f.column).collect();
        for trace in out.traces.iter().filter(|t| t.r > 0) {
            for (i, a) in trace.survivors.iter().enumerate() {
                prop_assert!(!pool.contains(&&a.column), "layer {} survivor repeats a pool feature", trace.r);
                for b in &trace.survivors[i + 1..] {
                    prop_assert_ne!(&a.column, &b.column);
                }
            }
        }
    }

    #[test]
    fn statement1_descends_strictly(set in any_set(6, 8)) {
        let config = SynthesisConfig { max_layers: 64, ..SynthesisConfig::default() };
        let out = synthesize(&set, &config).unwrap();
        let kept: Vec<usize> = out.traces[..=out.report.kept_layer].iter().map(|t| t.min_v.unwrap()).collect();
        prop_assert!(kept.windows(2).all(|w| w[1] < w[0]), "{:?}", kept);
        prop_assert_eq!(out.collective.errors(), *kept.last().unwrap());
    }

    /// With two Boolean pool features every non-constant function is either a
    /// feature (or its complement) or one of the ten connectives, so growth
    /// must find the best of them.
    #[test]
    fn two_feature_pools_find_the_best_nonconstant_function(set in any_set(2, 2)) {
        prop_assume!(set.m() == 2);
        let config = SynthesisConfig { max_p: Some(1), ..SynthesisConfig::default() };
        let out = synthesize(&set, &config).unwrap();
        let cols: Vec<&[bool]> = out.collective.pool.features.iter().map(|f| f.column.as_slice()).collect();
        prop_assume!(cols.len() == 2);
        let best = (1u8..15)
            .map(|table| {
                (0..set.n())
                    .filter(|&t| {
                        let idx = (cols[0][t] as u8) << 1 | cols[1][t] as u8;
                        (table >> idx & 1 == 1) != set.labels()[t]
                    })
                    .count()
            })
            .min()
            .unwrap();
        prop_assert_eq!(out.collective.errors(), best);
    }

    /// Three-feature pools may stop above the floor; the gap never goes negative.
    #[test]
    fn three_feature_gap_is_nonnegative(set in any_set(3, 2)) {
        prop_assume!(set.m() == 3);
        let config = SynthesisConfig { max_p: Some(1), ..SynthesisConfig::default() };
        let out = synthesize(&set, &config).unwrap();
        prop_assert!(out.collective.errors() >= contradiction_bound(&set, &out.collective.pool.features));
    }
}
