//! Time to collision, deceleration required to avoid a crash, and
//! critical-event rates over threshold sweeps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Propulsion;
use crate::kinematics::FeatureStep;

pub const TTC_THRESHOLDS: [f64; 7] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
pub const DRAC_THRESHOLDS: [f64; 7] = [2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SafetyMetric {
    #[serde(rename = "TTC")]
    Ttc,
    #[serde(rename = "DRAC")]
    Drac,
}

impl SafetyMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            SafetyMetric::Ttc => "TTC",
            SafetyMetric::Drac => "DRAC",
        }
    }
}

fn check_spacing(s: f64) -> Result<()> {
    if s > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpacing(s))
    }
}

/// `s / -dv` while closing in; `None` stands for an infinite TTC.
pub fn compute_ttc(s: f64, dv: f64) -> Result<Option<f64>> {
    check_spacing(s)?;
    Ok((dv < 0.0).then(|| s / -dv))
}

/// `dv^2 / s` while closing in, otherwise 0.
pub fn compute_drac(s: f64, dv: f64) -> Result<f64> {
    check_spacing(s)?;
    Ok(if dv < 0.0 { dv * dv / s } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafetySeries {
    pub pair_id: String,
    pub ttc: Vec<Option<f64>>,
    pub drac: Vec<f64>,
}

impl SafetySeries {
    pub fn from_features(pair_id: impl Into<String>, steps: &[FeatureStep]) -> Result<Self> {
        let pair_id = pair_id.into();
        let mut ttc = Vec::with_capacity(steps.len());
        let mut drac = Vec::with_capacity(steps.len());
        for st in steps {
            let wrap = |e: Error| e.in_stage("safety", format!("{pair_id} @ t={}", st.t));
            ttc.push(compute_ttc(st.s, st.dv).map_err(wrap)?);
            drac.push(compute_drac(st.s, st.dv).map_err(wrap)?);
        }
        Ok(Self { pair_id, ttc, drac })
    }

    pub fn len(&self) -> usize {
        self.drac.len()
    }

    pub fn is_empty(&self) -> bool {
        self.drac.is_empty()
    }

    fn critical_count(&self, metric: SafetyMetric, threshold: f64) -> usize {
        match metric {
            SafetyMetric::Ttc => self.ttc.iter().filter(|x| matches!(x, Some(v) if *v < threshold)).count(),
            SafetyMetric::Drac => self.drac.iter().filter(|&&v| v > threshold).count(),
        }
    }
}

/// Percentage of evaluated steps that are critical. Steps with infinite TTC
/// count towards the total.
pub fn critical_event_rate(series: &SafetySeries, metric: SafetyMetric, threshold: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::Empty("safety series"));
    }
    Ok(100.0 * series.critical_count(metric, threshold) as f64 / series.len() as f64)
}

/// How per-pair proportions are combined within a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Unweighted mean of per-pair percentages.
    #[default]
    MeanOfPairs,
    /// One ratio over all steps of all pairs.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub threshold: f64,
    pub ev: Option<f64>,
    pub icev: Option<f64>,
    /// `100 * (EV - ICEV) / ICEV`; absent when either class is missing or
    /// the ICEV rate is zero.
    pub change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSweep {
    pub metric: SafetyMetric,
    pub aggregation: Aggregation,
    pub rows: Vec<SweepRow>,
}

impl ThresholdSweep {
    pub fn thresholds(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.threshold).collect()
    }
}

fn class_rate(series: &[&SafetySeries], metric: SafetyMetric, thr: f64, agg: Aggregation) -> Result<Option<f64>> {
    if series.is_empty() {
        return Ok(None);
    }
    match agg {
        Aggregation::MeanOfPairs => {
            let mut sum = 0.0;
            for s in series {
                sum += critical_event_rate(s, metric, thr)?;
            }
            Ok(Some(sum / series.len() as f64))
        }
        Aggregation::Pooled => {
            let total: usize = series.iter().map(|s| s.len()).sum();
            if total == 0 {
                return Err(Error::Empty("safety series"));
            }
            let crit: usize = series.iter().map(|s| s.critical_count(metric, thr)).sum();
            Ok(Some(100.0 * crit as f64 / total as f64))
        }
    }
}

pub fn percent_change(ev: f64, icev: f64) -> Option<f64> {
    (icev != 0.0).then(|| 100.0 * (ev - icev) / icev)
}

/// Mean critical-event percentage per follower class at each threshold.
/// Series are used in the order given; classes other than EV and ICEV are
/// ignored.
pub fn sweep_thresholds(
    groups: &BTreeMap<Propulsion, Vec<SafetySeries>>,
    metric: SafetyMetric,
    thresholds: &[f64],
    aggregation: Aggregation,
) -> Result<ThresholdSweep> {
    let class = |p: Propulsion| -> Vec<&SafetySeries> { groups.get(&p).map(|v| v.iter().collect()).unwrap_or_default() };
    let (ev, icev) = (class(Propulsion::Ev), class(Propulsion::Icev));
    let mut rows = Vec::with_capacity(thresholds.len());
    for &thr in thresholds {
        let e = class_rate(&ev, metric, thr, aggregation)?;
        let i = class_rate(&icev, metric, thr, aggregation)?;
        rows.push(SweepRow {
            threshold: thr,
            ev: e,
            icev: i,
            change: match (e, i) {
                (Some(e), Some(i)) => percent_change(e, i),
                _ => None,
            },
        });
    }
    Ok(ThresholdSweep {
        metric,
        aggregation,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ttc_examples() {
        assert_eq!(compute_ttc(10.0, -2.0).unwrap(), Some(5.0));
        assert_eq!(compute_ttc(10.0, 1.0).unwrap(), None);
        assert_eq!(compute_ttc(10.0, 0.0).unwrap(), None);
        assert!(matches!(compute_ttc(0.0, -1.0), Err(Error::InvalidSpacing(_))));
    }

    #[test]
    fn drac_examples() {
        assert!((compute_drac(10.0, -2.0).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(compute_drac(10.0, 3.0).unwrap(), 0.0);
        assert_eq!(compute_drac(4.0, -4.0).unwrap(), 4.0);
        assert!(compute_drac(-1.0, -4.0).is_err());
    }

    fn series(ttc: Vec<Option<f64>>, drac: Vec<f64>) -> SafetySeries {
        SafetySeries {
            pair_id: "p".into(),
            ttc,
            drac,
        }
    }

    #[test]
    fn rate_examples() {
        let mut ttc = vec![None; 1000];
        ttc[1] = Some(0.5);
        ttc[2] = Some(0.7);
        ttc[3] = Some(0.9);
        ttc[4] = Some(3.0);
        let s = series(ttc, vec![0.0; 1000]);
        assert!((critical_event_rate(&s, SafetyMetric::Ttc, 1.0).unwrap() - 0.3).abs() < 1e-12);
        let calm = series(vec![None; 50], vec![0.0; 50]);
        for thr in TTC_THRESHOLDS {
            assert_eq!(critical_event_rate(&calm, SafetyMetric::Ttc, thr).unwrap(), 0.0);
        }
        assert!(critical_event_rate(&series(vec![], vec![]), SafetyMetric::Drac, 1.0).is_err());
    }

    #[test]
    fn sweep_single_pair_per_class() {
        let ev = series(vec![Some(1.2), None, None, None], vec![2.6, 0.0, 0.0, 0.0]);
        let icev = series(vec![Some(1.2), Some(2.2), None, None], vec![2.6, 3.1, 0.0, 0.0]);
        let groups = BTreeMap::from([(Propulsion::Ev, vec![ev.clone()]), (Propulsion::Icev, vec![icev])]);
        let sw = sweep_thresholds(&groups, SafetyMetric::Drac, &DRAC_THRESHOLDS, Aggregation::MeanOfPairs).unwrap();
        assert_eq!(sw.rows.len(), 7);
        for row in &sw.rows {
            assert_eq!(row.ev.unwrap(), critical_event_rate(&ev, SafetyMetric::Drac, row.threshold).unwrap());
        }
        assert_eq!(sw.rows[1].ev, Some(25.0));
        assert_eq!(sw.rows[1].icev, Some(50.0));
        assert_eq!(sw.rows[1].change, Some(-50.0));
    }

    #[test]
    fn sweep_equal_rates_and_missing_class() {
        let a = series(vec![Some(1.2), None], vec![0.0, 0.0]);
        let groups = BTreeMap::from([(Propulsion::Ev, vec![a.clone()]), (Propulsion::Icev, vec![a.clone()])]);
        let sw = sweep_thresholds(&groups, SafetyMetric::Ttc, &[1.5], Aggregation::MeanOfPairs).unwrap();
        assert_eq!(sw.rows[0].change, Some(0.0));

        let only_ev = BTreeMap::from([(Propulsion::Ev, vec![a])]);
        let sw = sweep_thresholds(&only_ev, SafetyMetric::Ttc, &[1.5], Aggregation::MeanOfPairs).unwrap();
        assert_eq!(sw.rows[0].icev, None);
        assert_eq!(sw.rows[0].change, None);
    }

    #[test]
    fn pooled_differs_from_mean_for_unequal_lengths() {
        let a = series(vec![Some(0.5), None], vec![0.0; 2]);
        let b = series(vec![None; 8], vec![0.0; 8]);
        let groups = BTreeMap::from([(Propulsion::Ev, vec![a, b])]);
        let mean = sweep_thresholds(&groups, SafetyMetric::Ttc, &[1.0], Aggregation::MeanOfPairs).unwrap();
        let pooled = sweep_thresholds(&groups, SafetyMetric::Ttc, &[1.0], Aggregation::Pooled).unwrap();
        assert_eq!(mean.rows[0].ev, Some(25.0));
        assert_eq!(pooled.rows[0].ev, Some(10.0));
    }
}
