//! Average speed variation and the two-segment velocity-spacing fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{percentile_sorted, sorted};

/// Dataset-wide mean of per-pair minimum spacing used as the default jam
/// spacing (m).
pub const DEFAULT_JAM_SPACING: f64 = 3.57;
/// Percentile of observed follower speeds taken as the desired speed.
pub const DESIRED_SPEED_PERCENTILE: f64 = 95.0;

const FIT_MIN_POINTS: usize = 20;
const REGIME_SPLIT: f64 = 0.9;
const SEARCH_MARGIN: f64 = 0.1;
const GRID_POINTS: usize = 200;
const GOLDEN_TOL: f64 = 1e-4;
const BOUNDARY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsvResult {
    pub pair_id: String,
    pub v_star: f64,
    pub asv: f64,
    pub window: [f64; 2],
}

impl AsvResult {
    pub fn for_pair(mut self, id: impl Into<String>) -> Self {
        self.pair_id = id.into();
        self
    }
}

fn interp(t: &[f64], v: &[f64], tq: f64) -> f64 {
    let i = t.partition_point(|&x| x < tq);
    if i < t.len() && t[i] == tq {
        return v[i];
    }
    if i == 0 {
        return v[0];
    }
    if i >= t.len() {
        return v[t.len() - 1];
    }
    let f = (tq - t[i - 1]) / (t[i] - t[i - 1]);
    v[i - 1] + (v[i] - v[i - 1]) * f
}

/// Time-averaged `|v - v_star|` over `window` (default: the whole series),
/// integrated with the trapezoidal rule on the actual timestamps.
pub fn compute_asv(v: &[f64], t: &[f64], v_star: f64, window: Option<[f64; 2]>) -> Result<AsvResult> {
    if !(v_star > 0.0) {
        return Err(Error::InvalidInput(format!("desired speed must be positive, got {v_star}")));
    }
    if v.len() != t.len() {
        return Err(Error::InvalidInput("speed/time length mismatch".into()));
    }
    if v.len() < 2 {
        return Err(Error::Empty("ASV window"));
    }
    let (t0, tn) = (t[0], t[t.len() - 1]);
    let [t1, t2] = window.unwrap_or([t0, tn]);
    if !(t2 > t1) {
        return Err(Error::Empty("ASV window"));
    }
    if t1 < t0 - 1e-9 || t2 > tn + 1e-9 {
        return Err(Error::InvalidInput(format!(
            "ASV window [{t1}, {t2}] outside trajectory span [{t0}, {tn}]"
        )));
    }
    let mut pts = vec![(t1, interp(t, v, t1))];
    let lo = t.partition_point(|&x| x <= t1);
    let hi = t.partition_point(|&x| x < t2);
    pts.extend((lo..hi).map(|i| (t[i], v[i])));
    pts.push((t2, interp(t, v, t2)));
    let integral: f64 = pts
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * ((w[0].1 - v_star).abs() + (w[1].1 - v_star).abs()) / 2.0)
        .sum();
    Ok(AsvResult {
        pair_id: String::new(),
        v_star,
        asv: integral / (t2 - t1),
        window: [t1, t2],
    })
}

/// How the desired cruising speed is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum VStarRule {
    /// Mean smoothed speed over the analysis window.
    WindowMean,
    /// A fixed value (m/s) for every vehicle.
    Fixed(f64),
    /// The vehicle's recorded ACC set speed, falling back to the window mean.
    SetSpeed,
}

pub fn estimate_v_star(v: &[f64], rule: VStarRule, set_speed: Option<f64>) -> Result<f64> {
    match rule {
        VStarRule::Fixed(x) => Ok(x),
        VStarRule::SetSpeed if set_speed.is_some() => Ok(set_speed.unwrap_or_default()),
        VStarRule::WindowMean | VStarRule::SetSpeed => {
            if v.is_empty() {
                return Err(Error::Empty("speed series"));
            }
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            Ok((v.iter().sum::<f64>() / v.len() as f64).clamp(lo, hi))
        }
    }
}

/// Fitted `v = clamp(D * (s - jam) / (s_c - jam), 0, D)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VsFit {
    pub jam_spacing: f64,
    pub desired_speed: f64,
    pub critical_spacing: f64,
    /// Rise of the car-following segment, (m/s)/m.
    pub slope: f64,
    pub residual_rmse: f64,
    pub n_points: usize,
    /// Set when the optimum sits on the edge of the search interval.
    pub at_search_boundary: bool,
}

impl VsFit {
    pub fn speed_at(&self, s: f64) -> f64 {
        vs_curve(s, self.jam_spacing, self.critical_spacing, self.desired_speed)
    }
}

fn vs_curve(s: f64, jam: f64, sc: f64, desired: f64) -> f64 {
    if s <= jam {
        0.0
    } else if s >= sc {
        desired
    } else {
        (desired * (s - jam) / (sc - jam)).clamp(0.0, desired)
    }
}

fn sse(points: &[(f64, f64)], jam: f64, sc: f64, desired: f64) -> f64 {
    points
        .iter()
        .map(|&(s, v)| {
            let r = v - vs_curve(s, jam, sc, desired);
            r * r
        })
        .sum()
}

/// Golden-section minimisation of `f` on `[a, b]`; returns the best abscissa
/// evaluated.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Least-squares critical spacing for fixed jam spacing and desired speed.
///
/// A uniform grid over `(jam + 0.1, max spacing)` brackets the minimum, a
/// golden-section search refines it, and a fine local scan followed by a
/// second golden-section pass settles the final value.
pub fn fit_vs_curve(points: &[(f64, f64)], jam_spacing: f64, desired_speed: f64) -> Result<VsFit> {
    if points.len() < FIT_MIN_POINTS {
        return Err(Error::InvalidInput(format!(
            "v-s fit needs at least {FIT_MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    if !(jam_spacing >= 0.0) || !(desired_speed > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad boundary conditions: jam {jam_spacing} m, desired {desired_speed} m/s"
        )));
    }
    let split = REGIME_SPLIT * desired_speed;
    let below = points.iter().filter(|p| p.1 < split).count();
    if below == 0 || below == points.len() {
        return Err(Error::DegenerateRegime(format!(
            "{below} of {} points below {split:.3} m/s",
            points.len()
        )));
    }
    let lo = jam_spacing + SEARCH_MARGIN;
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::DegenerateRegime(format!(
            "max spacing {hi} m does not exceed jam spacing + {SEARCH_MARGIN} m"
        )));
    }
    let obj = |sc: f64| sse(points, jam_spacing, sc, desired_speed);

    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + step * i as f64).collect();
    let (gi, _) = grid
        .iter()
        .map(|&x| obj(x))
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, y)| if y < acc.1 { (i, y) } else { acc });
    let a = grid[gi.saturating_sub(1)];
    let b = grid[(gi + 1).min(GRID_POINTS - 1)];
    let (x, _) = golden_section(obj, a, b, GOLDEN_TOL);

    let fine = 5e-4;
    let (mut bx, mut by) = (x, obj(x));
    for i in -40..=40 {
        let xi = (x + fine * i as f64).clamp(lo, hi);
        let yi = obj(xi);
        if yi < by {
            (bx, by) = (xi, yi);
        }
    }
    let (gx, gy) = golden_section(obj, (bx - fine).max(lo), (bx + fine).min(hi), GOLDEN_TOL / 10.0);
    let sc = if gy < by { gx } else { bx };

    let n = points.len();
    Ok(VsFit {
        jam_spacing,
        desired_speed,
        critical_spacing: sc,
        slope: desired_speed / (sc - jam_spacing),
        residual_rmse: (obj(sc) / n as f64).sqrt(),
        n_points: n,
        at_search_boundary: sc - lo < BOUNDARY_TOL || hi - sc < BOUNDARY_TOL,
    })
}

/// Desired speed as the configured percentile of observed speeds.
pub fn desired_speed_from(speeds: &[f64]) -> Option<f64> {
    (!speeds.is_empty()).then(|| percentile_sorted(&sorted(speeds), DESIRED_SPEED_PERCENTILE))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumberSummary {
    pub min: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub max: f64,
}

pub fn summarize_group(values: &[f64]) -> Result<FiveNumberSummary> {
    if values.is_empty() {
        return Err(Error::Empty("metric group"));
    }
    let s = sorted(values);
    Ok(FiveNumberSummary {
        min: s[0],
        p25: percentile_sorted(&s, 25.0),
        median: percentile_sorted(&s, 50.0),
        p75: percentile_sorted(&s, 75.0),
        max: s[s.len() - 1],
    })
}
