//! Pipeline configuration: TOML file format, defaults and validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::efficiency::{VStarRule, DEFAULT_JAM_SPACING};
use crate::emissions::ModelForm;
use crate::error::{Error, Result};
use crate::ingest::{DEFAULT_MAX_GAP_S, DEFAULT_MIN_OVERLAP_S};
use crate::kinematics::DEFAULT_SMOOTHING_WINDOW;
use crate::safety::{Aggregation, DRAC_THRESHOLDS, TTC_THRESHOLDS};
use crate::similarity::DEFAULT_SELECTION_K;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    pub kinematics: KinematicsConfig,
    pub similarity: SimilarityConfig,
    pub efficiency: EfficiencyConfig,
    pub safety: SafetyConfig,
    pub emissions: EmissionsConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    /// Platoon files or directories of them.
    pub paths: Vec<PathBuf>,
    /// Column schema file; the bundled OpenACC-style schema when absent.
    pub schema: Option<PathBuf>,
    /// Model-to-propulsion table; the bundled table when absent.
    pub propulsion_lookup: Option<PathBuf>,
    pub max_gap_s: f64,
    pub min_overlap_s: f64,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self {
            paths: Vec::new(),
            schema: None,
            propulsion_lookup: None,
            max_gap_s: DEFAULT_MAX_GAP_S,
            min_overlap_s: DEFAULT_MIN_OVERLAP_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KinematicsConfig {
    pub smoothing_window: usize,
    pub trim_head_s: f64,
    pub trim_tail_s: f64,
}

impl Default for KinematicsConfig {
    fn default() -> Self {
        Self {
            smoothing_window: DEFAULT_SMOOTHING_WINDOW,
            trim_head_s: 10.0,
            trim_tail_s: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilaritySeries {
    /// The leader's smoothed speed: the disturbance each follower faced.
    #[default]
    Leader,
    Follower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimilarityConfig {
    /// Resampling rate for DTW (Hz); `None` keeps the native rate.
    pub rate_hz: Option<f64>,
    /// Sakoe-Chiba radius in samples; `None` is unconstrained.
    pub band: Option<f64>,
    pub k: usize,
    pub series: SimilaritySeries,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            rate_hz: Some(1.0),
            band: None,
            k: DEFAULT_SELECTION_K,
            series: SimilaritySeries::Leader,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JamSpacingRule {
    #[default]
    Fixed,
    /// Mean of the per-pair minimum spacings.
    FromData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairScope {
    /// Only the DTW-selected pairs.
    #[default]
    Selected,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EfficiencyConfig {
    pub jam_spacing: f64,
    pub jam_spacing_rule: JamSpacingRule,
    /// Fixed desired speed (m/s); the 95th percentile of class speeds when
    /// absent.
    pub desired_speed: Option<f64>,
    pub v_star: VStarRule,
    pub per_vehicle_fits: bool,
    pub scope: PairScope,
}

impl Default for EfficiencyConfig {
    fn default() -> Self {
        Self {
            jam_spacing: DEFAULT_JAM_SPACING,
            jam_spacing_rule: JamSpacingRule::Fixed,
            desired_speed: None,
            v_star: VStarRule::WindowMean,
            per_vehicle_fits: false,
            scope: PairScope::Selected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SafetyConfig {
    pub ttc_thresholds: Vec<f64>,
    pub drac_thresholds: Vec<f64>,
    pub aggregation: Aggregation,
    pub scope: PairScope,
}

impl Default for SafetyConfig {
    fn default() -> Self {
        Self {
            ttc_thresholds: TTC_THRESHOLDS.to_vec(),
            drac_thresholds: DRAC_THRESHOLDS.to_vec(),
            aggregation: Aggregation::MeanOfPairs,
            scope: PairScope::Selected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmissionsConfig {
    /// Coefficient table; emissions are skipped when absent.
    pub coefficients: Option<PathBuf>,
    pub form: ModelForm,
    /// Display label to platoon id. Every eligible platoon when empty.
    pub platoons: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Not echoed: where a report lands does not change its content.
    #[serde(skip_serializing)]
    pub dir: PathBuf,
    pub formats: Vec<ReportFormat>,
    /// Write one time-series file per analysed pair.
    pub timeseries: bool,
    /// DTW matrix cache; disabled when absent.
    #[serde(skip_serializing)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![ReportFormat::Json, ReportFormat::Csv],
            timeseries: true,
            cache_dir: None,
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("`{name}` must be positive, got {x}")))
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("`{name}` must be non-negative, got {x}")))
    }
}

fn thresholds(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Config(format!("`{name}` must not be empty")));
    }
    for &x in xs {
        positive(name, x)?;
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("`{name}` must be strictly increasing")));
    }
    Ok(())
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// The resolved configuration as TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Invariant(format!("config echo: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.paths.is_empty() {
            return Err(Error::Config("no input paths given".into()));
        }
        positive("input.max_gap_s", self.input.max_gap_s)?;
        non_negative("input.min_overlap_s", self.input.min_overlap_s)?;
        if self.kinematics.smoothing_window == 0 {
            return Err(Error::Config("`kinematics.smoothing_window` must be positive".into()));
        }
        non_negative("kinematics.trim_head_s", self.kinematics.trim_head_s)?;
        non_negative("kinematics.trim_tail_s", self.kinematics.trim_tail_s)?;
        if let Some(r) = self.similarity.rate_hz {
            positive("similarity.rate_hz", r)?;
        }
        if let Some(b) = self.similarity.band {
            non_negative("similarity.band", b)?;
        }
        if self.similarity.k == 0 {
            return Err(Error::Config("`similarity.k` must be positive".into()));
        }
        non_negative("efficiency.jam_spacing", self.efficiency.jam_spacing)?;
        if let Some(d) = self.efficiency.desired_speed {
            positive("efficiency.desired_speed", d)?;
        }
        if let VStarRule::Fixed(v) = self.efficiency.v_star {
            positive("efficiency.v_star", v)?;
        }
        thresholds("safety.ttc_thresholds", &self.safety.ttc_thresholds)?;
        thresholds("safety.drac_thresholds", &self.safety.drac_thresholds)?;
        if self.output.formats.is_empty() {
            return Err(Error::Config("`output.formats` must not be empty".into()));
        }
        Ok(())
    }
}
