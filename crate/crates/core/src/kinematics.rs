//! Speed smoothing, finite-difference acceleration, trimming and per-step
//! feature extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{LeaderFollowerPair, RawSample, VehicleMeta};

/// Default moving-average window (samples); one second at 10 Hz.
pub const DEFAULT_SMOOTHING_WINDOW: usize = 10;

/// Speeds below this are treated as standstill when trimming run ends.
pub const STANDSTILL_SPEED: f64 = 0.1;

/// One vehicle's kinematic record. All series share the same length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleTrajectory {
    pub meta: VehicleMeta,
    pub t: Vec<f64>,
    /// Raw speed (m/s).
    pub u: Vec<f64>,
    /// Smoothed speed (m/s).
    pub v: Vec<f64>,
    /// Acceleration (m/s^2).
    pub a: Vec<f64>,
    /// Spacing to the preceding vehicle (m); `None` for a platoon leader.
    pub s: Option<Vec<f64>>,
}

impl VehicleTrajectory {
    /// Builds a trajectory from raw samples: smooth, then differentiate.
    pub fn from_samples(meta: VehicleMeta, samples: &[RawSample], window: usize) -> Result<Self> {
        let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
        let u: Vec<f64> = samples.iter().map(|s| s.u).collect();
        let s = if samples.iter().all(|s| s.ivs.is_some()) && !samples.is_empty() {
            Some(samples.iter().map(|s| s.ivs.unwrap_or_default()).collect())
        } else {
            None
        };
        let v = smooth_speed(&u, window)?;
        let a = compute_acceleration(&v, &t)?;
        Ok(Self { meta, t, u, v, a, s })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.t.first(), self.t.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Keeps samples in `range` in every series.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            meta: self.meta.clone(),
            t: self.t[range.clone()].to_vec(),
            u: self.u[range.clone()].to_vec(),
            v: self.v[range.clone()].to_vec(),
            a: self.a[range.clone()].to_vec(),
            s: self.s.as_ref().map(|s| s[range].to_vec()),
        }
    }

    /// Keeps the samples at `indices` (ascending) in every series.
    pub fn select(&self, indices: &[usize]) -> Self {
        let pick = |xs: &[f64]| indices.iter().map(|&i| xs[i]).collect::<Vec<_>>();
        Self {
            meta: self.meta.clone(),
            t: pick(&self.t),
            u: pick(&self.u),
            v: pick(&self.v),
            a: pick(&self.a),
            s: self.s.as_deref().map(pick),
        }
    }
}

/// Trailing moving average of raw speed.
///
/// The window grows from one sample at the start of the series, so
/// `v[k]` averages `u[k+1-w..=k]` with `w = min(window, k + 1)`. Each value
/// is clamped to the min/max of its window so constant runs stay exact.
pub fn smooth_speed(u: &[f64], window: usize) -> Result<Vec<f64>> {
    if u.is_empty() {
        return Err(Error::Empty("speed series"));
    }
    if window == 0 {
        return Err(Error::InvalidInput("smoothing window must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        let w = window.min(k + 1);
        let win = &u[k + 1 - w..=k];
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &x in win {
            lo = lo.min(x);
            hi = hi.max(x);
            sum += x;
        }
        out.push((sum / w as f64).clamp(lo, hi));
    }
    Ok(out)
}

/// Forward-difference acceleration `(v[k+1] - v[k]) / (t[k+1] - t[k])`.
/// The final sample repeats the previous value.
pub fn compute_acceleration(v: &[f64], t: &[f64]) -> Result<Vec<f64>> {
    if v.len() != t.len() {
        return Err(Error::InvalidInput(format!(
            "speed/time length mismatch ({} vs {})",
            v.len(),
            t.len()
        )));
    }
    if v.len() < 2 {
        return Err(Error::InvalidInput(
            "acceleration needs at least 2 samples".into(),
        ));
    }
    let mut a = Vec::with_capacity(v.len());
    for k in 0..v.len() - 1 {
        let dt = t[k + 1] - t[k];
        if dt == 0.0 {
            return Err(Error::InvalidInput(format!("zero time step at t = {}", t[k])));
        }
        if dt < 0.0 {
            return Err(Error::Structural(format!("time decreases at t = {}", t[k])));
        }
        a.push((v[k + 1] - v[k]) / dt);
    }
    a.push(a[a.len() - 1]);
    Ok(a)
}

/// Removes the first `head_s` and last `tail_s` seconds.
pub fn trim_trajectory(traj: &VehicleTrajectory, head_s: f64, tail_s: f64) -> Result<VehicleTrajectory> {
    let (lo, hi) = trim_bounds(&traj.t, head_s, tail_s).ok_or_else(|| Error::TooShort {
        id: traj.meta.vehicle_id.clone(),
        duration: traj.duration(),
        required: head_s + tail_s,
    })?;
    Ok(traj.slice(lo..hi))
}

const TIME_EPS: f64 = 1e-9;

/// Index range surviving a head/tail trim, or `None` when the series is not
/// longer than `head_s + tail_s`.
pub(crate) fn trim_bounds(t: &[f64], head_s: f64, tail_s: f64) -> Option<(usize, usize)> {
    let (first, last) = (*t.first()?, *t.last()?);
    if last - first <= head_s + tail_s && (head_s > 0.0 || tail_s > 0.0) {
        return None;
    }
    let start = first + head_s - TIME_EPS;
    let end = last - tail_s + TIME_EPS;
    let lo = t.partition_point(|&x| x < start);
    let hi = t.partition_point(|&x| x <= end);
    (hi > lo).then_some((lo, hi))
}

/// Trims a pair in lockstep: fixed head/tail, then standstill runs at either
/// end of the follower's smoothed speed.
pub fn trim_pair(pair: &LeaderFollowerPair, head_s: f64, tail_s: f64) -> Result<LeaderFollowerPair> {
    let (lo, hi) = trim_bounds(&pair.follower.t, head_s, tail_s).ok_or_else(|| Error::TooShort {
        id: pair.pair_id.clone(),
        duration: pair.follower.duration(),
        required: head_s + tail_s,
    })?;
    let v = &pair.follower.v[lo..hi];
    let first_moving = v.iter().position(|&x| x >= STANDSTILL_SPEED);
    let last_moving = v.iter().rposition(|&x| x >= STANDSTILL_SPEED);
    let (lo, hi) = match (first_moving, last_moving) {
        (Some(a), Some(b)) => (lo + a, lo + b + 1),
        _ => {
            return Err(Error::TooShort {
                id: pair.pair_id.clone(),
                duration: 0.0,
                required: head_s + tail_s,
            })
        }
    };
    Ok(LeaderFollowerPair {
        pair_id: pair.pair_id.clone(),
        platoon_id: pair.platoon_id.clone(),
        leader: pair.leader.slice(lo..hi),
        follower: pair.follower.slice(lo..hi),
    })
}

/// Per-step car-following state of a leader/follower pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureStep {
    pub t: f64,
    pub v_f: f64,
    pub v_l: f64,
    pub a_f: f64,
    pub a_l: f64,
    pub s: f64,
    /// Relative speed `v_l - v_f`; negative when closing in.
    pub dv: f64,
}

pub fn extract_features(pair: &LeaderFollowerPair) -> Result<Vec<FeatureStep>> {
    let (l, f) = (&pair.leader, &pair.follower);
    let spacing = f
        .s
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("pair {}: follower has no spacing", pair.pair_id)))?;
    let n = f.len();
    if l.len() != n || spacing.len() != n || l.v.len() != n || f.v.len() != n {
        return Err(Error::InvalidInput(format!(
            "pair {}: misaligned series (leader {}, follower {})",
            pair.pair_id,
            l.len(),
            n
        )));
    }
    Ok((0..n)
        .map(|k| FeatureStep {
            t: f.t[k],
            v_f: f.v[k],
            v_l: l.v[k],
            a_f: f.a[k],
            a_l: l.a[k],
            s: spacing[k],
            dv: l.v[k] - f.v[k],
        })
        .collect())
}
