mod common;

use proptest::prelude::*;

use dimkit::dimensions::ShatterCertificate;
use dimkit::embedding::{erm_augmented, good_patterns, GoodFunctionSpec};
use dimkit::gallery::three_hypothesis_class;
use dimkit::model::build_mixture;
use dimkit::witnesses::{canonical_witness, validate_witness};
use dimkit::{exact_dimension, DimensionKind, Flavor, IndexSet, Label, LabeledSample, Point};

use common::*;

fn table_class() -> impl Strategy<Value = (usize, u32, Rows)> {
    (1usize..=3, 2u32..=3).prop_flat_map(|(n, q)| {
        proptest::collection::btree_set(proptest::collection::vec(0..q, n), 1..=10)
            .prop_map(move |rows| (n, q, rows.into_iter().collect()))
    })
}

type Oracle = fn(&Rows, &[usize]) -> bool;

fn kinds() -> Vec<(DimensionKind, Oracle)> {
    vec![
        (DimensionKind::Natarajan, natarajan_shattered),
        (DimensionKind::Graph, graph_shattered),
        (DimensionKind::Ds, ds_shattered),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimensions_match_brute_force((n, q, rows) in table_class()) {
        let class = class_of(q, &rows);
        for (kind, oracle) in kinds() {
            let r = exact_dimension(&class, &kind, None).unwrap();
            prop_assert_eq!(r.dimension, oracle_dim(&rows, n, oracle), "{}", kind.name());
            if let Some(c) = &r.certificate {
                prop_assert!(c.verify(&class, &kind).unwrap());
            }
        }
    }

    #[test]
    fn natarajan_bounded_by_graph_and_ds((_n, q, rows) in table_class()) {
        let class = class_of(q, &rows);
        let d = |k| exact_dimension(&class, &k, None).unwrap().dimension;
        let nd = d(DimensionKind::Natarajan);
        prop_assert!(nd <= d(DimensionKind::Graph));
        prop_assert!(nd <= d(DimensionKind::Ds));
    }

    #[test]
    fn canonical_witness_valid_at_dimension((n, q, rows) in table_class()) {
        let class = class_of(q, &rows);
        let nd = exact_dimension(&class, &DimensionKind::Natarajan, None).unwrap().dimension;
        if nd < n {
            let w = canonical_witness(&class, &Flavor::Natarajan, nd, None).unwrap();
            let r = validate_witness(&w, &class, n as Point - 1).unwrap();
            prop_assert!(r.valid);
        }
    }

    #[test]
    fn mixture_swaps_under_complement(
        y in proptest::collection::vec(0u32..5, 1..8),
        bits in any::<u64>(),
    ) {
        let yp: Vec<Label> = y.iter().map(|v| v + 1).collect();
        let set = IndexSet::from_bits(bits & ((1 << y.len()) - 1));
        let a = build_mixture(set, &y, &yp).unwrap();
        let b = build_mixture(set.complement(y.len()), &yp, &y).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn truncation_closure(top in 1u32..=5, cut in 0u32..5) {
        let base = three_hypothesis_class().class.zero_padded().unwrap();
        let spec = GoodFunctionSpec::new(canonical_witness(&base, &Flavor::Natarajan, 1, None).unwrap(), 3).unwrap();
        let cut = cut.min(top - 1);
        let big = spec.window_patterns(top).unwrap();
        let small = spec.window_patterns(cut).unwrap();
        for p in big.iter() {
            prop_assert!(small.contains(&p[..=cut as usize].to_vec()));
        }
    }

    #[test]
    fn erm_matches_minimum_over_behaviors(
        pairs in proptest::collection::vec((0u32..=4, 0u32..3), 1..8),
    ) {
        let base = three_hypothesis_class().class.zero_padded().unwrap();
        let spec = GoodFunctionSpec::new(canonical_witness(&base, &Flavor::Natarajan, 1, None).unwrap(), 3).unwrap();
        let sample = LabeledSample::new(pairs.clone());
        let (h, risk) = erm_augmented(&spec, &sample).unwrap();
        let points = sample.distinct_points();
        let v = good_patterns(&spec, &points).unwrap();
        let at = |x: Point| points.iter().position(|&p| p == x).unwrap();
        let best = v.patterns.iter().map(|p| pairs.iter().filter(|&&(x, y)| p[at(x)] != y).count()).min().unwrap();
        prop_assert_eq!(risk.clone(), dimkit::Rational::new(best.into(), pairs.len().into()));
        prop_assert!(v.contains(&h.project(&points)));
    }
}

#[test]
fn certificates_reject_tampering() {
    let class = class_of(3, &vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 0], vec![2, 2]]);
    let r = exact_dimension(&class, &DimensionKind::Natarajan, None).unwrap();
    let c = r.certificate.unwrap();
    assert_eq!(c.points.len(), 2);
    let moved = ShatterCertificate { points: vec![c.points[0]], ..c.clone() };
    assert!(!moved.verify(&class, &DimensionKind::Natarajan).unwrap_or(false));
}
