//! Deterministic synthetic platoons and coefficient tables for tests, demos
//! and fixture corpora.
//!
//! Followers run a constant-time-gap ACC law with a cruise-speed cap and a
//! first-order actuator lag; propulsion type changes the lag, time gap and
//! process noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::emissions::{EmissionCoefficientTable, EmissionType, ModelForm, Regime};
use crate::ingest::{DrivingMode, Platoon, PlatoonVehicle, Propulsion, RawSample, VehicleMeta};

const DT: f64 = 0.1;
const CAR_LENGTH: f64 = 4.5;

/// Controller and noise parameters for one follower.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerDynamics {
    /// Desired time gap (s).
    pub time_gap: f64,
    /// Standstill distance (m).
    pub standstill: f64,
    pub gap_gain: f64,
    pub speed_gain: f64,
    /// Actuator time constant (s).
    pub lag: f64,
    /// Std. dev. of the acceleration disturbance (m/s^2).
    pub accel_noise: f64,
    /// Cruise set speed (m/s).
    pub set_speed: f64,
}

impl FollowerDynamics {
    pub fn for_propulsion(p: Propulsion) -> Self {
        match p {
            Propulsion::Ev => Self {
                time_gap: 0.9,
                standstill: 3.0,
                gap_gain: 0.23,
                speed_gain: 0.6,
                lag: 0.25,
                accel_noise: 0.05,
                set_speed: 24.0,
            },
            _ => Self {
                time_gap: 1.5,
                standstill: 4.0,
                gap_gain: 0.18,
                speed_gain: 0.35,
                lag: 0.7,
                accel_noise: 0.2,
                set_speed: 24.0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticVehicle {
    pub id: String,
    pub model: String,
    pub propulsion: Propulsion,
    pub mode: DrivingMode,
}

impl SyntheticVehicle {
    pub fn new(id: &str, propulsion: Propulsion, mode: DrivingMode) -> Self {
        let model = match propulsion {
            Propulsion::Ev => "Tesla Model 3",
            Propulsion::Icev => "Audi A6",
            Propulsion::Hybrid => "Toyota Prius",
            Propulsion::PluginHybrid => "Mitsubishi Outlander PHEV",
            Propulsion::FuelCell => "Toyota Mirai",
            Propulsion::Other => "Prototype",
        };
        Self {
            id: id.into(),
            model: model.into(),
            propulsion,
            mode,
        }
    }
}

/// Leader speed: cruise segments joined by smooth ramps plus a slow wobble.
pub fn leader_profile(duration_s: f64, rng: &mut impl Rng) -> Vec<f64> {
    let n = (duration_s / DT).round() as usize + 1;
    let mut knots = vec![(0.0, rng.random_range(12.0..20.0))];
    let mut t = 0.0;
    while t < duration_s {
        t += rng.random_range(25.0..60.0);
        let target = if rng.random_bool(0.2) {
            rng.random_range(3.0..7.0)
        } else {
            rng.random_range(10.0..30.0)
        };
        knots.push((t, target));
    }
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (0..n)
        .map(|k| {
            let t = k as f64 * DT;
            let i = knots.partition_point(|&(kt, _)| kt <= t).clamp(1, knots.len() - 1);
            let (t0, v0) = knots[i - 1];
            let (t1, v1) = knots[i];
            let x = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
            let ease = x * x * (3.0 - 2.0 * x);
            let wobble = 0.6 * (t * 0.21 + phase).sin();
            (v0 + (v1 - v0) * ease + wobble).max(0.0)
        })
        .collect()
}

/// Simulates one platoon. Vehicle 0 follows `leader_profile`.
pub fn simulate_platoon(platoon_id: &str, vehicles: &[SyntheticVehicle], duration_s: f64, seed: u64) -> Platoon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lead_v = leader_profile(duration_s, &mut rng);
    let n = lead_v.len();
    let meas = Normal::new(0.0, 0.05).expect("valid sigma");

    let mut speeds: Vec<Vec<f64>> = vec![lead_v];
    let mut positions: Vec<Vec<f64>> = vec![integrate(&speeds[0], 1000.0)];
    let mut spacings: Vec<Vec<f64>> = vec![Vec::new()];
    for (idx, veh) in vehicles.iter().enumerate().skip(1) {
        let dyn_ = FollowerDynamics::for_propulsion(veh.propulsion);
        let noise = Normal::new(0.0, dyn_.accel_noise).expect("valid sigma");
        let (lv, lx) = (&speeds[idx - 1], &positions[idx - 1]);
        let mut v = lv[0];
        let mut x = lx[0] - CAR_LENGTH - dyn_.standstill - dyn_.time_gap * v;
        let mut a = 0.0;
        let (mut vs, mut xs, mut ss) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for k in 0..n {
            let gap = lx[k] - x - CAR_LENGTH;
            vs.push(v);
            xs.push(x);
            ss.push(gap);
            let desired_gap = dyn_.standstill + dyn_.time_gap * v;
            let follow = dyn_.gap_gain * (gap - desired_gap) + 0.4 * (lv[k] - v);
            let cruise = dyn_.speed_gain * (dyn_.set_speed - v);
            let mut cmd = follow.min(cruise).clamp(-6.0, 2.5);
            if gap < 2.0 {
                cmd = -6.0;
            }
            a += DT / dyn_.lag * (cmd - a);
            let jitter = noise.sample(&mut rng);
            v = (v + (a + jitter) * DT).max(0.0);
            x += v * DT;
        }
        speeds.push(vs);
        positions.push(xs);
        spacings.push(ss);
    }

    let vehicles = vehicles
        .iter()
        .enumerate()
        .map(|(i, veh)| PlatoonVehicle {
            meta: VehicleMeta {
                vehicle_id: veh.id.clone(),
                propulsion: veh.propulsion,
                driving_mode: Some(veh.mode),
                model_name: veh.model.clone(),
                acc_gap_setting: None,
                set_speed: (i > 0).then(|| FollowerDynamics::for_propulsion(veh.propulsion).set_speed),
            },
            samples: (0..n)
                .map(|k| RawSample {
                    t: round_to(k as f64 * DT, 1),
                    u: round_to((speeds[i][k] + meas.sample(&mut rng)).max(0.0), 3),
                    ivs: (i > 0).then(|| round_to(spacings[i][k].max(0.1), 3)),
                })
                .collect(),
        })
        .collect();
    Platoon {
        platoon_id: platoon_id.into(),
        vehicles,
    }
}

fn integrate(v: &[f64], x0: f64) -> Vec<f64> {
    let mut x = x0;
    v.iter()
        .map(|&vi| {
            let cur = x;
            x += vi * DT;
            cur
        })
        .collect()
}

fn round_to(x: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (x * f).round() / f
}

/// A small mixed corpus: EV- and ICEV-led platoons with EV, ICEV and a few
/// excluded (hybrid / human-driven) followers.
pub fn fixture_corpus(n_platoons: usize, duration_s: f64, seed: u64) -> Vec<Platoon> {
    use DrivingMode::*;
    use Propulsion::*;
    let layouts: [&[(Propulsion, DrivingMode)]; 4] = [
        &[(Icev, Acc), (Ev, Acc), (Icev, Acc), (Ev, Acc), (Icev, Acc)],
        &[(Ev, Acc), (Icev, Acc), (Ev, Acc), (Hybrid, Acc), (Icev, Acc)],
        &[(Icev, Acc), (Icev, Acc), (Ev, Acc), (Icev, Human), (Ev, Acc)],
        &[(Ev, Acc), (Ev, Acc), (Icev, Acc), (Ev, Acc)],
    ];
    (0..n_platoons)
        .map(|p| {
            let layout = layouts[p % layouts.len()];
            let vehicles: Vec<SyntheticVehicle> = layout
                .iter()
                .enumerate()
                .map(|(i, &(prop, mode))| SyntheticVehicle::new(&format!("{}", i + 1), prop, mode))
                .collect();
            simulate_platoon(&format!("platoon{:02}", p + 1), &vehicles, duration_s, seed.wrapping_add(p as u64 * 7919))
        })
        .collect()
}

/// Plausibly scaled log-linear coefficients. Not a calibrated VT-Micro set.
pub fn synthetic_coefficients() -> EmissionCoefficientTable {
    let mut t = EmissionCoefficientTable::zeros(ModelForm::LogLinear);
    let base = [
        (EmissionType::Fuel, -7.6, 0.010, 0.12),
        (EmissionType::Hc, -5.2, 0.012, 0.15),
        (EmissionType::Co, -1.9, 0.014, 0.20),
        (EmissionType::Nox, -5.6, 0.011, 0.18),
    ];
    for (e, c00, c10, c01) in base {
        t.set(e, Regime::Positive, 0, 0, c00);
        t.set(e, Regime::Positive, 1, 0, c10);
        t.set(e, Regime::Positive, 0, 1, c01);
        t.set(e, Regime::Positive, 2, 0, -4e-5);
        t.set(e, Regime::Positive, 1, 1, 1e-3);
        t.set(e, Regime::Positive, 0, 2, 5e-3);
        t.set(e, Regime::Negative, 0, 0, c00 - 0.1);
        t.set(e, Regime::Negative, 1, 0, c10 * 0.9);
        t.set(e, Regime::Negative, 0, 1, -c01 * 0.2);
        t.set(e, Regime::Negative, 2, 0, -3e-5);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulation_is_deterministic_and_physical() {
        let a = fixture_corpus(2, 120.0, 11);
        let b = fixture_corpus(2, 120.0, 11);
        assert_eq!(a, b);
        for p in &a {
            for (i, v) in p.vehicles.iter().enumerate() {
                assert_eq!(v.samples.len(), 1201);
                assert!(v.samples.iter().all(|s| s.u >= 0.0));
                assert_eq!(v.samples.iter().all(|s| s.ivs.is_some()), i > 0);
                assert!(v.samples.iter().filter_map(|s| s.ivs).all(|g| g > 0.0));
            }
        }
    }
}
