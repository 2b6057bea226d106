//! Browser bindings for three interactive views: a DTW alignment explorer,
//! a velocity-spacing fit, and a TTC/DRAC threshold sweep over a synthetic
//! leader-follower pair.
//!
//! The plain `*_impl` functions carry the logic and are tested natively;
//! the exported wrappers only convert errors.

use std::collections::BTreeMap;

use wasm_bindgen::prelude::*;

use carfollow::efficiency::{fit_vs_curve, DEFAULT_JAM_SPACING};
use carfollow::ingest::{decompose_platoon, DrivingMode, PairOptions, Propulsion};
use carfollow::kinematics::extract_features;
use carfollow::safety::{sweep_thresholds, Aggregation, SafetyMetric, SafetySeries};
use carfollow::similarity::{accumulated_cost, dtw_banded, dtw_path, Band};
use carfollow::synthetic::{simulate_platoon, SyntheticVehicle};

/// One simulated pair sampled at 10 Hz.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct DemoPair {
    t: Vec<f64>,
    v_leader: Vec<f64>,
    v_follower: Vec<f64>,
    spacing: Vec<f64>,
    dv: Vec<f64>,
}

#[wasm_bindgen]
impl DemoPair {
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }
    pub fn v_leader(&self) -> Vec<f64> {
        self.v_leader.clone()
    }
    pub fn v_follower(&self) -> Vec<f64> {
        self.v_follower.clone()
    }
    pub fn spacing(&self) -> Vec<f64> {
        self.spacing.clone()
    }
    pub fn dv(&self) -> Vec<f64> {
        self.dv.clone()
    }
}

pub fn synthetic_pair_impl(seed: u64, follower_ev: bool, duration_s: f64) -> Result<DemoPair, String> {
    if !(60.0..=3600.0).contains(&duration_s) {
        return Err(format!("duration must be within 60..3600 s, got {duration_s}"));
    }
    let follower = if follower_ev { Propulsion::Ev } else { Propulsion::Icev };
    let vehicles = [
        SyntheticVehicle::new("lead", Propulsion::Icev, DrivingMode::Acc),
        SyntheticVehicle::new("follow", follower, DrivingMode::Acc),
    ];
    let platoon = simulate_platoon("demo", &vehicles, duration_s, seed);
    let pairs = decompose_platoon(&platoon, &PairOptions::default()).map_err(|e| e.to_string())?;
    let pair = pairs.first().ok_or("simulation produced no pair")?;
    let steps = extract_features(pair).map_err(|e| e.to_string())?;
    Ok(DemoPair {
        t: steps.iter().map(|s| s.t).collect(),
        v_leader: steps.iter().map(|s| s.v_l).collect(),
        v_follower: steps.iter().map(|s| s.v_f).collect(),
        spacing: steps.iter().map(|s| s.s).collect(),
        dv: steps.iter().map(|s| s.dv).collect(),
    })
}

/// Simulates a two-vehicle platoon with an EV or ICEV follower.
#[wasm_bindgen]
pub fn synthetic_pair(seed: u32, follower_ev: bool, duration_s: f64) -> Result<DemoPair, JsError> {
    synthetic_pair_impl(seed as u64, follower_ev, duration_s).map_err(|e| JsError::new(&e))
}

/// DTW result with the optimal path and, for small inputs, the full
/// accumulated-cost matrix (row-major).
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct DtwView {
    pub distance: f64,
    pub normalized: f64,
    /// Distance under the requested band; equals `distance` when unbanded.
    pub banded_distance: f64,
    pub rows: usize,
    pub cols: usize,
    path_x: Vec<u32>,
    path_y: Vec<u32>,
    cost: Vec<f64>,
}

#[wasm_bindgen]
impl DtwView {
    pub fn path_x(&self) -> Vec<u32> {
        self.path_x.clone()
    }
    pub fn path_y(&self) -> Vec<u32> {
        self.path_y.clone()
    }
    pub fn cost(&self) -> Vec<f64> {
        self.cost.clone()
    }
}

const MAX_DTW_CELLS: usize = 4_000_000;

pub fn dtw_explore_impl(x: &[f64], y: &[f64], band: Option<f64>) -> Result<DtwView, String> {
    if x.len() * y.len() > MAX_DTW_CELLS {
        return Err(format!("{} x {} cells is too large for the explorer", x.len(), y.len()));
    }
    let (res, path) = dtw_path(x, y).map_err(|e| e.to_string())?;
    let banded_distance = match band {
        Some(r) => {
            let b = Band::new(r).map_err(|e| e.to_string())?;
            dtw_banded(x, y, Some(b)).map_err(|e| e.to_string())?.distance
        }
        None => res.distance,
    };
    Ok(DtwView {
        distance: res.distance,
        normalized: res.normalized,
        banded_distance,
        rows: x.len(),
        cols: y.len(),
        path_x: path.iter().map(|p| p.0 as u32).collect(),
        path_y: path.iter().map(|p| p.1 as u32).collect(),
        cost: accumulated_cost(x, y),
    })
}

/// Aligns two series. A negative `band` means unconstrained.
#[wasm_bindgen]
pub fn dtw_explore(x: &[f64], y: &[f64], band: f64) -> Result<DtwView, JsError> {
    dtw_explore_impl(x, y, (band >= 0.0).then_some(band)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct VsFitView {
    pub jam_spacing: f64,
    pub desired_speed: f64,
    pub critical_spacing: f64,
    pub slope: f64,
    pub residual_rmse: f64,
    pub at_search_boundary: bool,
}

pub fn vs_fit_impl(spacing: &[f64], speed: &[f64], jam: f64, desired: f64) -> Result<VsFitView, String> {
    if spacing.len() != speed.len() {
        return Err("spacing and speed lengths differ".into());
    }
    let pts: Vec<(f64, f64)> = spacing.iter().copied().zip(speed.iter().copied()).collect();
    let f = fit_vs_curve(&pts, jam, desired).map_err(|e| e.to_string())?;
    Ok(VsFitView {
        jam_spacing: f.jam_spacing,
        desired_speed: f.desired_speed,
        critical_spacing: f.critical_spacing,
        slope: f.slope,
        residual_rmse: f.residual_rmse,
        at_search_boundary: f.at_search_boundary,
    })
}

/// Fits the two-segment v-s curve. A non-positive `jam` selects the default
/// jam spacing.
#[wasm_bindgen]
pub fn vs_fit(spacing: &[f64], speed: &[f64], jam: f64, desired: f64) -> Result<VsFitView, JsError> {
    let jam = if jam > 0.0 { jam } else { DEFAULT_JAM_SPACING };
    vs_fit_impl(spacing, speed, jam, desired).map_err(|e| JsError::new(&e))
}

pub fn safety_sweep_impl(spacing: &[f64], dv: &[f64], drac: bool, thresholds: &[f64]) -> Result<Vec<f64>, String> {
    if spacing.len() != dv.len() {
        return Err("spacing and dv lengths differ".into());
    }
    let steps: Vec<carfollow::kinematics::FeatureStep> = spacing
        .iter()
        .zip(dv)
        .enumerate()
        .map(|(k, (&s, &d))| carfollow::kinematics::FeatureStep {
            t: k as f64,
            v_f: 0.0,
            v_l: 0.0,
            a_f: 0.0,
            a_l: 0.0,
            s,
            dv: d,
        })
        .collect();
    let series = SafetySeries::from_features("demo", &steps).map_err(|e| e.to_string())?;
    let metric = if drac { SafetyMetric::Drac } else { SafetyMetric::Ttc };
    let groups = BTreeMap::from([(Propulsion::Ev, vec![series])]);
    let sw = sweep_thresholds(&groups, metric, thresholds, Aggregation::MeanOfPairs).map_err(|e| e.to_string())?;
    Ok(sw.rows.iter().map(|r| r.ev.unwrap_or(0.0)).collect())
}

/// Critical-event percentage at each threshold for one pair.
#[wasm_bindgen]
pub fn safety_sweep(spacing: &[f64], dv: &[f64], drac: bool, thresholds: &[f64]) -> Result<Vec<f64>, JsError> {
    safety_sweep_impl(spacing, dv, drac, thresholds).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_feeds_all_three_views() {
        let p = synthetic_pair_impl(3, true, 300.0).unwrap();
        assert_eq!(p.t.len(), p.spacing.len());
        let fit = vs_fit_impl(&p.spacing, &p.v_follower, DEFAULT_JAM_SPACING, 20.0);
        assert!(fit.is_ok() || fit.unwrap_err().contains("regime"));
        let rates = safety_sweep_impl(&p.spacing, &p.dv, false, &[1.0, 2.0, 4.0]).unwrap();
        assert!(rates.windows(2).all(|w| w[0] <= w[1]));
        let lead: Vec<f64> = p.v_leader.iter().step_by(10).copied().collect();
        let follow: Vec<f64> = p.v_follower.iter().step_by(10).copied().collect();
        let view = dtw_explore_impl(&lead, &follow, Some(5.0)).unwrap();
        assert!(view.banded_distance >= view.distance);
        assert_eq!(view.cost.len(), view.rows * view.cols);
        assert_eq!(*view.path_x.last().unwrap() as usize, view.rows - 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(synthetic_pair_impl(1, true, 10.0).is_err());
        assert!(vs_fit_impl(&[1.0], &[1.0, 2.0], 3.57, 20.0).is_err());
        assert!(safety_sweep_impl(&[0.0], &[-1.0], true, &[1.0]).is_err());
    }
}
