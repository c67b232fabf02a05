use proptest::prelude::*;

use pfms::format::{emit_instance, parse_instance};
use pfms::lab::{gen_pfms, gen_pfms_on, GeneratorConfig};
use pfms::{
    algebra::equals_up_to_level_order, complement, convex_hull, cut, includes, intersection,
    is_convex_exact, is_convex_sampled, union, CutThresholds, PictureFuzzyMultiset, TOL_CMP,
    TOL_SUM,
};

fn config() -> impl Strategy<Value = GeneratorConfig> {
    (any::<u64>(), 1usize..=12, 1usize..=4, any::<bool>())
        .prop_map(|(seed, grid, depth, convex)| GeneratorConfig::new(seed, grid, depth, convex))
}

fn instance() -> impl Strategy<Value = PictureFuzzyMultiset> {
    config().prop_map(|cfg| gen_pfms(&cfg).unwrap())
}

/// Three instances on one grid with one depth.
fn triple(convex: bool) -> impl Strategy<Value = [PictureFuzzyMultiset; 3]> {
    (config(), any::<u64>(), any::<u64>()).prop_map(move |(cfg, s1, s2)| {
        let cfg = GeneratorConfig {
            convex_only: convex || cfg.convex_only,
            ..cfg
        };
        let a = gen_pfms(&cfg).unwrap();
        let b = gen_pfms_on(a.grid(), &GeneratorConfig { seed: s1, ..cfg }).unwrap();
        let c = gen_pfms_on(a.grid(), &GeneratorConfig { seed: s2, ..cfg }).unwrap();
        [a, b, c]
    })
}

/// Arbitrary valid rows: random triples scaled into the simplex, σ sorted
/// down the levels.
fn raw_instance() -> impl Strategy<Value = PictureFuzzyMultiset> {
    (1usize..=6, 1usize..=3)
        .prop_flat_map(|(m, depth)| {
            (
                prop::collection::vec(-1e6f64..1e6, m),
                prop::collection::vec(
                    prop::collection::vec([0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0], depth),
                    m,
                ),
            )
        })
        .prop_filter_map("distinct coordinates", |(mut xs, rows)| {
            xs.sort_by(f64::total_cmp);
            xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-6);
            let rows: Vec<Vec<[f64; 3]>> = rows
                .into_iter()
                .take(xs.len())
                .map(|row| {
                    let mut row: Vec<[f64; 3]> = row
                        .into_iter()
                        .map(|[s, t, e]| {
                            let total = (s + t + e).max(1.0);
                            [s / total, t / total, e / total]
                        })
                        .collect();
                    row.sort_by(|a, b| b[0].total_cmp(&a[0]));
                    row
                })
                .collect();
            if rows.len() != xs.len() {
                return None;
            }
            PictureFuzzyMultiset::from_rows(xs, &rows).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip_is_bit_exact(d in raw_instance()) {
        let back = parse_instance(&emit_instance(&d)).unwrap();
        prop_assert_eq!(back.to_rows(), d.to_rows());
        prop_assert_eq!(back.grid().points(), d.grid().points());
    }

    #[test]
    fn lattice_laws(ds in triple(false)) {
        let [a, b, c] = &ds;
        prop_assert_eq!(union(a, b).unwrap(), union(b, a).unwrap());
        prop_assert_eq!(intersection(a, b).unwrap(), intersection(b, a).unwrap());
        prop_assert_eq!(
            union(&union(a, b).unwrap(), c).unwrap(),
            union(a, &union(b, c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            intersection(&intersection(a, b).unwrap(), c).unwrap(),
            intersection(a, &intersection(b, c).unwrap()).unwrap()
        );
        prop_assert_eq!(&union(a, a).unwrap(), a);
        prop_assert_eq!(&intersection(a, a).unwrap(), a);
        prop_assert!(includes(&intersection(a, b).unwrap(), a).unwrap());
        prop_assert!(equals_up_to_level_order(&complement(&complement(a)), a).unwrap());
    }

    #[test]
    fn intersection_of_convex_is_convex(ds in triple(true)) {
        let [a, b, c] = &ds;
        let ab = intersection(a, b).unwrap();
        prop_assert!(is_convex_exact(&ab).convex);
        prop_assert!(is_convex_exact(&intersection(&ab, c).unwrap()).convex);
    }

    #[test]
    fn interpolation_stays_valid(d in instance(), u in 0.0f64..=1.0) {
        let x = d.grid().lo() + u * (d.grid().hi() - d.grid().lo());
        let mut prev_sigma = f64::INFINITY;
        for level in 1..=d.depth() {
            let g = d.evaluate(x, level).unwrap();
            let [s, t, e] = g.to_array();
            prop_assert!([s, t, e].iter().all(|v| (0.0..=1.0).contains(v)));
            prop_assert!(s + t + e <= 1.0 + TOL_SUM);
            prop_assert!(s <= prev_sigma + TOL_CMP);
            prev_sigma = s;
        }
    }

    #[test]
    fn cut_matches_pointwise_predicate(
        d in instance(),
        r in 0.0f64..=1.0, s in 0.0f64..=1.0, t in 0.0f64..=1.0,
        u in 0.0f64..=1.0,
    ) {
        let thr = CutThresholds::new(r, s, t).unwrap();
        let x = d.grid().lo() + u * (d.grid().hi() - d.grid().lo());
        for level in 1..=d.depth() {
            let region = cut(&d, thr, level).unwrap();
            let g = d.evaluate(x, level).unwrap();
            let margin = [g.sigma() - r, g.tau() - s, t - g.eta()];
            // Skip points whose membership is decided by rounding.
            if margin.iter().all(|m| m.abs() > 1e-7) {
                prop_assert_eq!(region.contains(x), margin.iter().all(|&m| m > 0.0));
            }
        }
    }

    #[test]
    fn cut_shrinks_as_thresholds_tighten(
        d in instance(),
        r in 0.0f64..=1.0, s in 0.0f64..=1.0, t in 0.0f64..=1.0,
        dr in 0.0f64..=0.5, ds in 0.0f64..=0.5, dt in 0.0f64..=0.5,
    ) {
        let loose = CutThresholds::new(r, s, t).unwrap();
        let tight = CutThresholds::new((r + dr).min(1.0), (s + ds).min(1.0), (t - dt).max(0.0)).unwrap();
        for level in 1..=d.depth() {
            let small = cut(&d, tight, level).unwrap();
            let big = cut(&d, loose, level).unwrap();
            prop_assert!(small.is_subset_of(&big));
        }
    }

    #[test]
    fn sampled_checker_is_sound(d in instance(), seed in any::<u64>()) {
        let exact = is_convex_exact(&d);
        let sampled = is_convex_sampled(&d, 50, 5, seed);
        if exact.convex {
            prop_assert!(sampled.convex);
        }
        if let Some(w) = sampled.witness {
            prop_assert!(!exact.convex);
            prop_assert!(w.recheck(&d).unwrap() > TOL_CMP);
        }
        if let Some(w) = exact.witness {
            prop_assert!(w.recheck(&d).unwrap() > TOL_CMP);
        }
    }

    #[test]
    fn hull_is_convex_dominating_and_idempotent(d in instance()) {
        let h = convex_hull(&d);
        prop_assert!(h.is_channelwise_convex());
        prop_assert!(h.dominates(&d));
        prop_assert_eq!(h.hull(), h.clone());
        if is_convex_exact(&d).convex {
            prop_assert_eq!(h.rows(), &d.to_rows()[..]);
        }
    }
}
