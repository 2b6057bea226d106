use std::collections::BTreeMap;

use proptest::prelude::*;

use carfollow::ingest::Propulsion;
use carfollow::safety::{sweep_thresholds, Aggregation, SafetyMetric, SafetySeries};
use carfollow::similarity::dtw_distance;

/// Minimum over every monotone warping path, enumerated depth-first.
fn exhaustive_dtw(x: &[f64], y: &[f64]) -> f64 {
    fn walk(x: &[f64], y: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (x[i] - y[j]).abs();
        if i + 1 == x.len() && j + 1 == y.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < x.len() {
            walk(x, y, i + 1, j, acc, best);
        }
        if j + 1 < y.len() {
            walk(x, y, i, j + 1, acc, best);
        }
        if i + 1 < x.len() && j + 1 < y.len() {
            walk(x, y, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(x, y, 0, 0, 0.0, &mut best);
    best
}

fn small_seq() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..=5).prop_map(f64::from), 1..=6)
}

proptest! {
    #[test]
    fn dtw_matches_path_enumeration(x in small_seq(), y in small_seq()) {
        let d = dtw_distance(&x, &y).unwrap();
        prop_assert_eq!(d.distance, exhaustive_dtw(&x, &y));
        prop_assert_eq!(d.distance, dtw_distance(&y, &x).unwrap().distance);
    }

    #[test]
    fn sweeps_are_monotone_in_threshold(
        steps in prop::collection::vec((0.5f64..80.0, -6.0f64..6.0), 1..200),
    ) {
        let feats: Vec<_> = steps
            .iter()
            .enumerate()
            .map(|(k, &(s, dv))| carfollow::kinematics::FeatureStep {
                t: k as f64 * 0.1, v_f: 0.0, v_l: 0.0, a_f: 0.0, a_l: 0.0, s, dv,
            })
            .collect();
        let series = SafetySeries::from_features("p", &feats).unwrap();
        let groups = BTreeMap::from([(Propulsion::Ev, vec![series])]);
        let thr: Vec<f64> = (1..=12).map(|k| k as f64 * 0.5).collect();
        let ttc = sweep_thresholds(&groups, SafetyMetric::Ttc, &thr, Aggregation::MeanOfPairs).unwrap();
        let drac = sweep_thresholds(&groups, SafetyMetric::Drac, &thr, Aggregation::Pooled).unwrap();
        for w in ttc.rows.windows(2) {
            prop_assert!(w[0].ev.unwrap() <= w[1].ev.unwrap());
        }
        for w in drac.rows.windows(2) {
            prop_assert!(w[0].ev.unwrap() >= w[1].ev.unwrap());
        }
    }
}
