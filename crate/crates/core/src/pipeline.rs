//! End-to-end orchestration: ingest, pair extraction, similarity selection,
//! efficiency, safety and emissions.
//!
//! Per-pair work may run in parallel; every aggregation walks pairs in the
//! fixed order produced by ingest (files sorted by path, pairs by platoon
//! position), so reports do not depend on the thread count.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{JamSpacingRule, PairScope, PipelineConfig, SimilaritySeries};
use crate::efficiency::{
    compute_asv, desired_speed_from, estimate_v_star, fit_vs_curve, summarize_group, FiveNumberSummary, VsFit,
};
use crate::emissions::{
    compare_platoons, load_coefficients_path, platoon_average_moe, ModelForm, PlatoonComparison, PlatoonEmissionReport,
};
use crate::error::{Error, Result};
use crate::ingest::{
    decompose_platoon, is_retained, median_step, parse_trajectory_path, repair_gaps_with_step, ColumnSchema,
    LeaderFollowerPair, PairOptions, Platoon, Propulsion, PropulsionLookup,
};
use crate::kinematics::{extract_features, trim_pair, FeatureStep};
use crate::safety::{sweep_thresholds, Aggregation, SafetyMetric, SafetySeries, ThresholdSweep};
use crate::similarity::{downsample, pairwise_matrix, select_most_similar, Band, SelectionResult, SimilarityMatrix};

const INPUT_EXTENSIONS: [&str; 3] = ["csv", "tsv", "txt"];

/// Which analysis branches to run after ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    pub similarity: bool,
    pub efficiency: bool,
    pub safety: bool,
    pub emissions: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        similarity: true,
        efficiency: true,
        safety: true,
        emissions: true,
    };
    pub const INGEST_ONLY: Stages = Stages {
        similarity: false,
        efficiency: false,
        safety: false,
        emissions: false,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatoonSummary {
    pub platoon_id: String,
    pub source: String,
    pub n_vehicles: usize,
    pub n_pairs: usize,
    pub n_pairs_retained: usize,
    pub duration_s: f64,
    pub median_step_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub n_files: usize,
    pub n_platoons: usize,
    pub n_pairs: usize,
    pub n_pairs_retained: usize,
    /// Retained followers per propulsion class.
    pub followers: BTreeMap<Propulsion, usize>,
    /// Summed platoon durations before trimming.
    pub platoon_hours: f64,
    /// Summed retained-pair durations after trimming.
    pub pair_hours: f64,
    pub platoons: Vec<PlatoonSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilaritySection {
    pub series: SimilaritySeries,
    pub rate_hz: Option<f64>,
    pub band: Option<f64>,
    pub n_trajectories: usize,
    pub selection: SelectionResult,
    /// Median normalized distance of each selected id.
    pub selected_medians: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairAsv {
    pub pair_id: String,
    pub class: Propulsion,
    pub v_star: f64,
    pub asv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairFit {
    pub pair_id: String,
    pub class: Propulsion,
    pub fit: VsFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencySection {
    pub scope: PairScope,
    pub asv_summary: BTreeMap<Propulsion, FiveNumberSummary>,
    pub asv: Vec<PairAsv>,
    pub jam_spacing: f64,
    pub vs_fits: BTreeMap<Propulsion, VsFit>,
    pub per_vehicle_fits: Vec<PairFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SafetySection {
    pub scope: PairScope,
    pub aggregation: Aggregation,
    pub n_pairs: BTreeMap<Propulsion, usize>,
    pub ttc: ThresholdSweep,
    pub drac: ThresholdSweep,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionsSection {
    pub form: ModelForm,
    pub reports: Vec<PlatoonEmissionReport>,
    pub comparisons: Vec<PlatoonComparison>,
    pub skipped: Vec<String>,
}

/// Bulky per-pair data kept for file export only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    pub matrix: Option<SimilarityMatrix>,
    /// `(class, spacing, speed)` points behind the class fits.
    pub vs_scatter: Vec<(Propulsion, f64, f64)>,
    pub timeseries: Vec<PairSeries>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSeries {
    pub pair_id: String,
    pub steps: Vec<FeatureStep>,
    pub safety: SafetySeries,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: PipelineConfig,
    pub dataset: DatasetSummary,
    pub similarity: Option<SimilaritySection>,
    pub efficiency: Option<EfficiencySection>,
    pub safety: Option<SafetySection>,
    pub emissions: Option<EmissionsSection>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub artifacts: Artifacts,
}

/// A platoon after parsing and gap repair.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedPlatoon {
    pub source: PathBuf,
    pub platoon: Platoon,
    pub median_step: f64,
}

fn collect_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        for entry in entries {
            let p = entry.map_err(|e| Error::io(dir, e))?.path();
            if p.is_dir() {
                walk(&p, out)?;
            } else if p
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| INPUT_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
            {
                out.push(p);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            walk(p, &mut files)?;
        } else if p.exists() {
            files.push(p.clone());
        } else {
            return Err(Error::io(p, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file")));
        }
    }
    files.sort();
    files.dedup();
    if files.is_empty() {
        return Err(Error::Empty("input file list"));
    }
    Ok(files)
}

fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Parses every input file and repairs short gaps in each vehicle series.
/// When a long gap splits a series, the longest segment is kept.
pub fn load_platoons(cfg: &PipelineConfig, warnings: &mut Vec<String>) -> Result<Vec<LoadedPlatoon>> {
    let schema = match &cfg.input.schema {
        Some(p) => ColumnSchema::from_path(p)?,
        None => ColumnSchema::default(),
    };
    let lookup = match &cfg.input.propulsion_lookup {
        Some(p) => PropulsionLookup::from_path(p)?,
        None => PropulsionLookup::default(),
    };
    let files = collect_inputs(&cfg.input.paths)?;
    let max_gap = cfg.input.max_gap_s;
    let loaded = par_map(&files, |path| {
        let name = path.display().to_string();
        let parsed = parse_trajectory_path(path, &schema, &lookup).map_err(|e| e.in_stage("ingest", name.clone()))?;
        let mut notes: Vec<String> = parsed.warnings.iter().map(|w| format!("{name}: {w}")).collect();
        let mut platoon = parsed.platoon;
        for veh in &mut platoon.vehicles {
            if veh.samples.is_empty() {
                notes.push(format!("{name}: vehicle {} has no samples", veh.meta.vehicle_id));
                continue;
            }
            let segments = repair_gaps_with_step(&veh.samples, max_gap, parsed.median_step)
                .map_err(|e| e.in_stage("ingest", format!("{name}/{}", veh.meta.vehicle_id)))?;
            if segments.len() > 1 {
                notes.push(format!(
                    "{name}: vehicle {} split into {} segments by gaps over {max_gap} s; keeping the longest",
                    veh.meta.vehicle_id,
                    segments.len()
                ));
            }
            let mut best = 0;
            for (i, s) in segments.iter().enumerate() {
                if s.len() > segments[best].len() {
                    best = i;
                }
            }
            veh.samples = segments.into_iter().nth(best).unwrap_or_default();
        }
        Ok((
            LoadedPlatoon {
                source: path.clone(),
                platoon,
                median_step: parsed.median_step,
            },
            notes,
        ))
    })?;
    let mut out = Vec::with_capacity(loaded.len());
    for (lp, notes) in loaded {
        warnings.extend(notes);
        out.push(lp);
    }
    let mut seen = std::collections::BTreeSet::new();
    for lp in &out {
        if !seen.insert(lp.platoon.platoon_id.clone()) {
            return Err(Error::Structural(format!(
                "duplicate platoon id `{}` ({})",
                lp.platoon.platoon_id,
                lp.source.display()
            )));
        }
    }
    Ok(out)
}

fn follower_class(pair: &LeaderFollowerPair) -> Propulsion {
    pair.follower.meta.propulsion
}

fn similarity_input(pair: &LeaderFollowerPair, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    let series = match cfg.similarity.series {
        SimilaritySeries::Leader => &pair.leader.v,
        SimilaritySeries::Follower => &pair.follower.v,
    };
    match cfg.similarity.rate_hz {
        None => Ok(series.clone()),
        Some(rate) => {
            let step = median_step(&pair.follower.t).ok_or(Error::Empty("pair time axis"))?;
            downsample(series, 1.0 / step, rate)
        }
    }
}

fn cache_key(cfg: &PipelineConfig, inputs: &[(String, Vec<f64>)]) -> String {
    let mut h = Sha256::new();
    h.update(b"dtw-v1");
    h.update(format!("{:?}|{:?}|{:?}", cfg.similarity.series, cfg.similarity.rate_hz, cfg.similarity.band).as_bytes());
    for (id, xs) in inputs {
        h.update((id.len() as u64).to_le_bytes());
        h.update(id.as_bytes());
        h.update((xs.len() as u64).to_le_bytes());
        for x in xs {
            h.update(x.to_bits().to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn matrix_with_cache(cfg: &PipelineConfig, inputs: &[(String, Vec<f64>)]) -> Result<SimilarityMatrix> {
    let band = cfg.similarity.band.map(Band::new).transpose()?;
    let Some(dir) = &cfg.output.cache_dir else {
        return pairwise_matrix(inputs, band);
    };
    let path = dir.join(format!("dtw-{}.json", cache_key(cfg, inputs)));
    if let Ok(text) = fs::read_to_string(&path) {
        match serde_json::from_str::<SimilarityMatrix>(&text) {
            Ok(m) => {
                log::info!("DTW matrix loaded from cache {}", path.display());
                return Ok(m);
            }
            Err(e) => log::warn!("ignoring unreadable cache entry {}: {e}", path.display()),
        }
    }
    let m = pairwise_matrix(inputs, band)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    fs::write(&path, serde_json::to_string(&m)?).map_err(|e| Error::io(&path, e))?;
    Ok(m)
}

fn run_similarity(
    cfg: &PipelineConfig,
    pairs: &[LeaderFollowerPair],
    warnings: &mut Vec<String>,
) -> Result<(SimilaritySection, Option<SimilarityMatrix>)> {
    let inputs: Vec<(String, Vec<f64>)> = par_map(pairs, |p| {
        similarity_input(p, cfg)
            .map(|s| (p.pair_id.clone(), s))
            .map_err(|e| e.in_stage("similarity", p.pair_id.clone()))
    })?;
    let class: BTreeMap<&str, Propulsion> = pairs.iter().map(|p| (p.pair_id.as_str(), follower_class(p))).collect();
    let class_of = |id: &str| class.get(id).copied();
    let k = cfg.similarity.k;
    let (selection, medians, matrix) = if inputs.len() < 2 {
        warnings.push("fewer than two pairs: DTW selection keeps every pair".into());
        let mut selected: BTreeMap<Propulsion, Vec<String>> = BTreeMap::new();
        for p in pairs {
            selected.entry(follower_class(p)).or_default().push(p.pair_id.clone());
        }
        let medians = pairs.iter().map(|p| (p.pair_id.clone(), 0.0)).collect();
        (SelectionResult { k, selected }, medians, None)
    } else {
        let m = matrix_with_cache(cfg, &inputs).map_err(|e| e.in_stage("similarity", "pairwise matrix"))?;
        let sel = select_most_similar(&m, class_of, k);
        let med: BTreeMap<String, f64> = sel
            .all_ids()
            .into_iter()
            .map(|id| {
                let i = m.ids.iter().position(|x| *x == id).unwrap_or_default();
                (id, m.medians[i])
            })
            .collect();
        (sel, med, Some(m))
    };
    for (c, ids) in &selection.selected {
        if ids.len() < k {
            warnings.push(format!("similarity: only {} {} pairs available for k = {k}", ids.len(), c.as_str()));
        }
    }
    Ok((
        SimilaritySection {
            series: cfg.similarity.series,
            rate_hz: cfg.similarity.rate_hz,
            band: cfg.similarity.band,
            n_trajectories: inputs.len(),
            selection,
            selected_medians: medians,
        },
        matrix,
    ))
}

fn scoped<'a>(
    pairs: &'a [LeaderFollowerPair],
    scope: PairScope,
    selection: Option<&SelectionResult>,
) -> Vec<&'a LeaderFollowerPair> {
    match (scope, selection) {
        (PairScope::Selected, Some(sel)) => {
            let ids: std::collections::BTreeSet<String> = sel.all_ids().into_iter().collect();
            pairs.iter().filter(|p| ids.contains(&p.pair_id)).collect()
        }
        _ => pairs.iter().collect(),
    }
}

fn run_efficiency(
    cfg: &PipelineConfig,
    all_pairs: &[LeaderFollowerPair],
    pairs: &[&LeaderFollowerPair],
    warnings: &mut Vec<String>,
    artifacts: &mut Artifacts,
) -> Result<EfficiencySection> {
    let ecfg = &cfg.efficiency;
    let asv = par_map(pairs, |p| {
        let f = &p.follower;
        let wrap = |e: Error| e.in_stage("efficiency", p.pair_id.clone());
        let v_star = estimate_v_star(&f.v, ecfg.v_star, f.meta.set_speed).map_err(wrap)?;
        let r = compute_asv(&f.v, &f.t, v_star, None).map_err(wrap)?;
        Ok(PairAsv {
            pair_id: p.pair_id.clone(),
            class: follower_class(p),
            v_star,
            asv: r.asv,
        })
    })?;
    let mut by_class: BTreeMap<Propulsion, Vec<f64>> = BTreeMap::new();
    for r in &asv {
        by_class.entry(r.class).or_default().push(r.asv);
    }
    let asv_summary = by_class
        .iter()
        .map(|(&c, xs)| summarize_group(xs).map(|s| (c, s)))
        .collect::<Result<_>>()?;

    let jam_spacing = match ecfg.jam_spacing_rule {
        JamSpacingRule::Fixed => ecfg.jam_spacing,
        JamSpacingRule::FromData => {
            let mins: Vec<f64> = all_pairs
                .iter()
                .filter_map(|p| p.follower.s.as_ref())
                .map(|s| s.iter().copied().fold(f64::INFINITY, f64::min))
                .collect();
            crate::stats::mean(&mins).ok_or(Error::NoPairsRetained)?
        }
    };

    let mut points: BTreeMap<Propulsion, Vec<(f64, f64)>> = BTreeMap::new();
    for p in pairs {
        let Some(s) = &p.follower.s else { continue };
        let bucket = points.entry(follower_class(p)).or_default();
        bucket.extend(s.iter().copied().zip(p.follower.v.iter().copied()));
    }
    let mut vs_fits = BTreeMap::new();
    let mut desired: BTreeMap<Propulsion, f64> = BTreeMap::new();
    for (&c, pts) in &points {
        let speeds: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let d = match ecfg.desired_speed.or_else(|| desired_speed_from(&speeds)) {
            Some(d) if d > 0.0 => d,
            _ => {
                warnings.push(format!("v-s fit {}: no positive desired speed", c.as_str()));
                continue;
            }
        };
        desired.insert(c, d);
        match fit_vs_curve(pts, jam_spacing, d) {
            Ok(fit) => {
                if fit.at_search_boundary {
                    warnings.push(format!("v-s fit {}: optimum on the search boundary", c.as_str()));
                }
                vs_fits.insert(c, fit);
            }
            Err(e) => warnings.push(format!("v-s fit {}: {e}", c.as_str())),
        }
        artifacts.vs_scatter.extend(pts.iter().map(|&(s, v)| (c, s, v)));
    }

    let mut per_vehicle_fits = Vec::new();
    if ecfg.per_vehicle_fits {
        for p in pairs {
            let (Some(s), Some(&d)) = (&p.follower.s, desired.get(&follower_class(p))) else {
                continue;
            };
            let pts: Vec<(f64, f64)> = s.iter().copied().zip(p.follower.v.iter().copied()).collect();
            match fit_vs_curve(&pts, jam_spacing, d) {
                Ok(fit) => per_vehicle_fits.push(PairFit {
                    pair_id: p.pair_id.clone(),
                    class: follower_class(p),
                    fit,
                }),
                Err(e) => warnings.push(format!("v-s fit {}: {e}", p.pair_id)),
            }
        }
    }

    Ok(EfficiencySection {
        scope: ecfg.scope,
        asv_summary,
        asv,
        jam_spacing,
        vs_fits,
        per_vehicle_fits,
    })
}

fn run_safety(cfg: &PipelineConfig, pairs: &[&LeaderFollowerPair], artifacts: &mut Artifacts) -> Result<SafetySection> {
    let series = par_map(pairs, |p| {
        let wrap = |e: Error| e.in_stage("safety", p.pair_id.clone());
        let steps = extract_features(p).map_err(wrap)?;
        let s = SafetySeries::from_features(p.pair_id.clone(), &steps)?;
        Ok((steps, s))
    })?;
    let mut groups: BTreeMap<Propulsion, Vec<SafetySeries>> = BTreeMap::new();
    for (p, (steps, s)) in pairs.iter().zip(series) {
        groups.entry(follower_class(p)).or_default().push(s.clone());
        if cfg.output.timeseries {
            artifacts.timeseries.push(PairSeries {
                pair_id: p.pair_id.clone(),
                steps,
                safety: s,
            });
        }
    }
    let scfg = &cfg.safety;
    Ok(SafetySection {
        scope: scfg.scope,
        aggregation: scfg.aggregation,
        n_pairs: groups.iter().map(|(&c, v)| (c, v.len())).collect(),
        ttc: sweep_thresholds(&groups, SafetyMetric::Ttc, &scfg.ttc_thresholds, scfg.aggregation)?,
        drac: sweep_thresholds(&groups, SafetyMetric::Drac, &scfg.drac_thresholds, scfg.aggregation)?,
    })
}

fn run_emissions(
    cfg: &PipelineConfig,
    platoons: &[LoadedPlatoon],
    pairs: &[LeaderFollowerPair],
    warnings: &mut Vec<String>,
) -> Result<Option<EmissionsSection>> {
    let ecfg = &cfg.emissions;
    let Some(path) = &ecfg.coefficients else {
        warnings.push("emissions: no coefficient table configured, section skipped".into());
        return Ok(None);
    };
    let table = load_coefficients_path(path, ecfg.form).map_err(|e| e.in_stage("emissions", path.display().to_string()))?;
    let lead_of = |id: &str| {
        platoons
            .iter()
            .find(|lp| lp.platoon.platoon_id == id)
            .and_then(|lp| lp.platoon.vehicles.first())
            .map(|v| v.meta.propulsion)
    };
    let targets: Vec<(Option<String>, String)> = if ecfg.platoons.is_empty() {
        platoons.iter().map(|lp| (None, lp.platoon.platoon_id.clone())).collect()
    } else {
        ecfg.platoons.iter().map(|(l, id)| (Some(l.clone()), id.clone())).collect()
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (label, id) in targets {
        let Some(lead) = lead_of(&id) else {
            return Err(Error::InvalidInput(format!("platoon `{id}` not found in inputs")).in_stage("emissions", id));
        };
        let followers: Vec<_> = pairs.iter().filter(|p| p.platoon_id == id).map(|p| p.follower.clone()).collect();
        let eligible = matches!(lead, Propulsion::Ev | Propulsion::Icev)
            && followers.iter().any(|f| f.meta.propulsion == Propulsion::Icev);
        if !eligible {
            skipped.push(format!("{id}: needs an EV or ICEV leader and at least one retained ICEV follower"));
            continue;
        }
        let mut r = platoon_average_moe(&id, lead, &followers, &table).map_err(|e| e.in_stage("emissions", id.clone()))?;
        r.label = label;
        reports.push(r);
    }
    let comparisons = match compare_platoons(&reports) {
        Ok(c) => c,
        Err(e) => {
            warnings.push(format!("emissions: {e}"));
            Vec::new()
        }
    };
    Ok(Some(EmissionsSection {
        form: ecfg.form,
        reports,
        comparisons,
        skipped,
    }))
}

/// Runs the configured stages. Stage failures abort the run and name the
/// stage and the entity (file, pair or platoon) involved.
pub fn run_pipeline(cfg: &PipelineConfig, stages: Stages) -> Result<RunReport> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    let platoons = load_platoons(cfg, &mut warnings)?;
    let opts = PairOptions {
        smoothing_window: cfg.kinematics.smoothing_window,
        min_overlap_s: cfg.input.min_overlap_s,
    };
    let decomposed = par_map(&platoons, |lp| {
        decompose_platoon(&lp.platoon, &opts).map_err(|e| e.in_stage("pairs", lp.platoon.platoon_id.clone()))
    })?;

    let (head, tail) = (cfg.kinematics.trim_head_s, cfg.kinematics.trim_tail_s);
    let mut summaries = Vec::with_capacity(platoons.len());
    let mut retained = Vec::new();
    let mut n_pairs = 0;
    for (lp, pairs) in platoons.iter().zip(decomposed) {
        let expected = lp.platoon.vehicles.len().saturating_sub(1);
        if pairs.len() < expected {
            warnings.push(format!(
                "{}: {} of {expected} pairs dropped for insufficient overlap or samples",
                lp.platoon.platoon_id,
                expected - pairs.len()
            ));
        }
        n_pairs += pairs.len();
        let mut kept = 0;
        for pair in pairs.into_iter().filter(is_retained) {
            match trim_pair(&pair, head, tail) {
                Ok(p) => {
                    kept += 1;
                    retained.push(p);
                }
                Err(e @ Error::TooShort { .. }) => warnings.push(format!("trim: {e}; pair dropped")),
                Err(e) => return Err(e.in_stage("kinematics", pair.pair_id)),
            }
        }
        let lead_t = lp.platoon.vehicles.first().map(|v| v.samples.as_slice()).unwrap_or_default();
        let duration_s = match (lead_t.first(), lead_t.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        };
        summaries.push(PlatoonSummary {
            platoon_id: lp.platoon.platoon_id.clone(),
            source: lp.source.display().to_string(),
            n_vehicles: lp.platoon.vehicles.len(),
            n_pairs: expected,
            n_pairs_retained: kept,
            duration_s,
            median_step_s: lp.median_step,
        });
    }
    if retained.is_empty() {
        return Err(Error::NoPairsRetained);
    }
    let mut followers = BTreeMap::new();
    for p in &retained {
        *followers.entry(follower_class(p)).or_insert(0) += 1;
    }
    let dataset = DatasetSummary {
        n_files: platoons.len(),
        n_platoons: platoons.len(),
        n_pairs,
        n_pairs_retained: retained.len(),
        followers,
        platoon_hours: summaries.iter().map(|s| s.duration_s).sum::<f64>() / 3600.0,
        pair_hours: retained.iter().map(|p| p.follower.duration()).sum::<f64>() / 3600.0,
        platoons: summaries,
    };

    let mut artifacts = Artifacts::default();
    let similarity = if stages.similarity {
        let (sec, m) = run_similarity(cfg, &retained, &mut warnings)?;
        artifacts.matrix = m;
        Some(sec)
    } else {
        None
    };
    let selection = similarity.as_ref().map(|s| &s.selection);
    if selection.is_none()
        && ((stages.efficiency && cfg.efficiency.scope == PairScope::Selected)
            || (stages.safety && cfg.safety.scope == PairScope::Selected))
    {
        warnings.push("similarity stage not run: analysing every retained pair".into());
    }
    let efficiency = if stages.efficiency {
        let pairs = scoped(&retained, cfg.efficiency.scope, selection);
        Some(run_efficiency(cfg, &retained, &pairs, &mut warnings, &mut artifacts)?)
    } else {
        None
    };
    let safety = if stages.safety {
        let pairs = scoped(&retained, cfg.safety.scope, selection);
        Some(run_safety(cfg, &pairs, &mut artifacts)?)
    } else {
        None
    };
    let emissions = if stages.emissions {
        run_emissions(cfg, &platoons, &retained, &mut warnings)?
    } else {
        None
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(RunReport {
        config: cfg.clone(),
        dataset,
        similarity,
        efficiency,
        safety,
        emissions,
        warnings,
        artifacts,
    })
}
