//! Platoon trajectory files: parsing, gap repair, decomposition into
//! leader/follower pairs and follower filtering.
//!
//! A platoon file is a delimited table with one time column and, per vehicle,
//! a speed column and (for every vehicle but the leader) a spacing column.
//! Column names come from a [`ColumnSchema`]. Vehicle metadata is read from
//! `# key = value` lines ahead of the header (`platoon_id`,
//! `vehicle.<n>.model`, `vehicle.<n>.driving_mode`, `vehicle.<n>.propulsion`,
//! ...) and, optionally, from labelled pre-header rows.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{fmt_num, parse_kv};
use crate::kinematics::{VehicleTrajectory, DEFAULT_SMOOTHING_WINDOW};

pub const NOMINAL_STEP_S: f64 = 0.1;
pub const DEFAULT_MAX_GAP_S: f64 = 0.5;
pub const DEFAULT_MIN_OVERLAP_S: f64 = 30.0;

const DEFAULT_SCHEMA: &str = include_str!("../data/default_schema.txt");
const DEFAULT_LOOKUP: &str = include_str!("../data/propulsion_lookup.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Propulsion {
    #[serde(rename = "EV")]
    Ev,
    #[serde(rename = "ICEV")]
    Icev,
    Hybrid,
    PluginHybrid,
    FuelCell,
    Other,
}

impl Propulsion {
    pub fn parse(s: &str) -> Option<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Some(match key.as_str() {
            "ev" | "bev" | "electric" | "batteryelectric" => Propulsion::Ev,
            "icev" | "ice" | "combustion" | "petrol" | "gasoline" | "diesel" => Propulsion::Icev,
            "hybrid" | "hev" => Propulsion::Hybrid,
            "pluginhybrid" | "phev" => Propulsion::PluginHybrid,
            "fuelcell" | "fcev" => Propulsion::FuelCell,
            "other" => Propulsion::Other,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Propulsion::Ev => "EV",
            Propulsion::Icev => "ICEV",
            Propulsion::Hybrid => "Hybrid",
            Propulsion::PluginHybrid => "PluginHybrid",
            Propulsion::FuelCell => "FuelCell",
            Propulsion::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DrivingMode {
    #[serde(rename = "ACC")]
    Acc,
    Human,
}

impl DrivingMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "acc" => Some(DrivingMode::Acc),
            "human" | "manual" | "driver" => Some(DrivingMode::Human),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DrivingMode::Acc => "ACC",
            DrivingMode::Human => "Human",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleMeta {
    pub vehicle_id: String,
    pub propulsion: Propulsion,
    /// `None` when the file does not state a recognisable mode.
    pub driving_mode: Option<DrivingMode>,
    pub model_name: String,
    pub acc_gap_setting: Option<String>,
    /// ACC set speed (m/s), when recorded.
    pub set_speed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawSample {
    pub t: f64,
    pub u: f64,
    pub ivs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlatoonVehicle {
    pub meta: VehicleMeta,
    pub samples: Vec<RawSample>,
}

/// Vehicles in driving order; index 0 is the leader.
#[derive(Debug, Clone, PartialEq)]
pub struct Platoon {
    pub platoon_id: String,
    pub vehicles: Vec<PlatoonVehicle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderFollowerPair {
    pub pair_id: String,
    pub platoon_id: String,
    pub leader: VehicleTrajectory,
    pub follower: VehicleTrajectory,
}

/// Column-name mapping for platoon tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSchema {
    pub time_column: String,
    /// Template containing `{n}`.
    pub speed_column: String,
    /// Template containing `{n}`.
    pub spacing_column: String,
    /// Vehicle `n` reads its spacing from `spacing_column` at `n + offset`.
    pub spacing_index_offset: i64,
    /// `None` selects comma or tab from the header line.
    pub delimiter: Option<u8>,
    pub meta_prefix: String,
    /// Labels of optional pre-header metadata rows, keyed by field name.
    pub meta_rows: BTreeMap<String, String>,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self::parse(DEFAULT_SCHEMA).expect("bundled schema is valid")
    }
}

impl ColumnSchema {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = ColumnSchema {
            time_column: "Time".into(),
            speed_column: "Speed{n}".into(),
            spacing_column: "IVS{n}".into(),
            spacing_index_offset: -1,
            delimiter: None,
            meta_prefix: "#".into(),
            meta_rows: BTreeMap::new(),
        };
        for (line, k, v) in parse_kv(text)? {
            match k.as_str() {
                "time_column" => s.time_column = v,
                "speed_column" => s.speed_column = v,
                "spacing_column" => s.spacing_column = v,
                "spacing_index_offset" => {
                    s.spacing_index_offset = v.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad spacing_index_offset `{v}`"),
                    })?
                }
                "delimiter" => {
                    s.delimiter = match v.as_str() {
                        "auto" => None,
                        "comma" | "," => Some(b','),
                        "tab" | "\\t" => Some(b'\t'),
                        "semicolon" | ";" => Some(b';'),
                        _ => {
                            return Err(Error::Parse {
                                line,
                                message: format!("unsupported delimiter `{v}`"),
                            })
                        }
                    }
                }
                "meta_prefix" if !v.is_empty() => s.meta_prefix = v,
                k if k.starts_with("meta_row.") => {
                    s.meta_rows.insert(k["meta_row.".len()..].to_string(), v);
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown schema key `{k}`"),
                    })
                }
            }
        }
        for (name, tpl) in [("speed_column", &s.speed_column), ("spacing_column", &s.spacing_column)] {
            if !tpl.contains("{n}") {
                return Err(Error::Config(format!("{name} template must contain {{n}}")));
            }
        }
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

/// Model-name to propulsion lookup. Keys are matched case-insensitively.
#[derive(Debug, Clone, PartialEq)]
pub struct PropulsionLookup {
    table: HashMap<String, Propulsion>,
}

impl Default for PropulsionLookup {
    fn default() -> Self {
        Self::parse(DEFAULT_LOOKUP).expect("bundled lookup is valid")
    }
}

impl PropulsionLookup {
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = HashMap::new();
        for (line, k, v) in parse_kv(text)? {
            let p = Propulsion::parse(&v).ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown propulsion `{v}`"),
            })?;
            table.insert(normalize_model(&k), p);
        }
        Ok(Self { table })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, model: &str) -> Option<Propulsion> {
        self.table.get(&normalize_model(model)).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

fn normalize_model(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// A parsed platoon plus any non-fatal findings.
#[derive(Debug, Clone)]
pub struct ParsedPlatoon {
    pub platoon: Platoon,
    /// Median sampling interval of the time column (s).
    pub median_step: f64,
    pub warnings: Vec<String>,
}

fn expand(tpl: &str, n: i64) -> String {
    tpl.replace("{n}", &n.to_string())
}

fn parse_cell(cell: &str, line: usize, col: &str) -> Result<Option<f64>> {
    let c = cell.trim();
    if c.is_empty() || c.eq_ignore_ascii_case("nan") || c.eq_ignore_ascii_case("na") {
        return Ok(None);
    }
    let x: f64 = c.parse().map_err(|_| Error::Parse {
        line,
        message: format!("column `{col}`: `{c}` is not a number"),
    })?;
    if x.is_finite() {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

/// Median of the positive consecutive differences of `t`.
pub fn median_step(t: &[f64]) -> Option<f64> {
    let mut d: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    if d.is_empty() {
        return None;
    }
    d.sort_by(f64::total_cmp);
    Some(crate::stats::median_sorted(&d))
}

/// Reads a platoon table. `name` is used as the platoon id unless the file
/// carries a `platoon_id` metadata line.
pub fn parse_trajectory_file<R: Read>(
    mut source: R,
    name: &str,
    schema: &ColumnSchema,
    lookup: &PropulsionLookup,
) -> Result<ParsedPlatoon> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::io(name, e))?;
    let mut warnings = Vec::new();

    // Metadata lines and pre-header rows.
    let mut meta_kv: BTreeMap<String, String> = BTreeMap::new();
    let mut label_rows: Vec<Vec<String>> = Vec::new();
    let mut header: Option<(usize, Vec<String>)> = None;
    let mut delim = schema.delimiter;
    let mut body_start = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(schema.meta_prefix.as_str()) {
            if let Some((k, v)) = rest.split_once('=') {
                meta_kv.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        let d = *delim.get_or_insert(if line.contains('\t') { b'\t' } else { b',' });
        let cells: Vec<String> = line.split(d as char).map(|c| c.trim().to_string()).collect();
        if cells.iter().any(|c| c == &schema.time_column) {
            header = Some((idx, cells));
            body_start = idx + 1;
            break;
        }
        label_rows.push(cells);
    }
    let (header_idx, header) = header.ok_or_else(|| {
        Error::Structural(format!("{name}: no header row containing `{}`", schema.time_column))
    })?;
    let delim = delim.unwrap_or(b',');
    let col_of: HashMap<&str, usize> = header.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let time_col = col_of[schema.time_column.as_str()];

    let mut speed_cols = Vec::new();
    while let Some(&c) = col_of.get(expand(&schema.speed_column, speed_cols.len() as i64 + 1).as_str()) {
        speed_cols.push(c);
    }
    if speed_cols.is_empty() {
        return Err(Error::Structural(format!(
            "{name}: no speed columns matching `{}`",
            schema.speed_column
        )));
    }
    let n_veh = speed_cols.len();
    let mut spacing_cols: Vec<Option<usize>> = vec![None; n_veh];
    for (i, slot) in spacing_cols.iter_mut().enumerate().skip(1) {
        let idx = i as i64 + 1 + schema.spacing_index_offset;
        let col = expand(&schema.spacing_column, idx);
        *slot = Some(*col_of.get(col.as_str()).ok_or_else(|| {
            Error::Structural(format!("{name}: missing spacing column `{col}` for vehicle {}", i + 1))
        })?);
    }

    // Per-vehicle metadata from labelled rows.
    let mut row_meta: HashMap<(usize, &str), String> = HashMap::new();
    for (field, label) in &schema.meta_rows {
        if let Some(row) = label_rows.iter().find(|r| r.first().map(|c| c == label).unwrap_or(false)) {
            for (i, cell) in row.iter().skip(1).filter(|c| !c.is_empty()).enumerate().take(n_veh) {
                row_meta.insert((i + 1, field.as_str()), cell.clone());
            }
        }
    }
    let field = |n: usize, key: &str| -> Option<String> {
        meta_kv
            .get(&format!("vehicle.{n}.{key}"))
            .cloned()
            .or_else(|| row_meta.get(&(n, key)).cloned())
    };

    let mut vehicles = Vec::with_capacity(n_veh);
    for n in 1..=n_veh {
        let model_name = field(n, "model").unwrap_or_default();
        let propulsion = match field(n, "propulsion") {
            Some(p) => Propulsion::parse(&p).unwrap_or_else(|| {
                warnings.push(format!("{name}: vehicle {n}: unknown propulsion `{p}`, using Other"));
                Propulsion::Other
            }),
            None => lookup.get(&model_name).unwrap_or_else(|| {
                warnings.push(format!(
                    "{name}: vehicle {n}: model `{model_name}` not in propulsion lookup, using Other"
                ));
                Propulsion::Other
            }),
        };
        let driving_mode = match field(n, "driving_mode") {
            Some(m) => {
                let mode = DrivingMode::parse(&m);
                if mode.is_none() {
                    warnings.push(format!("{name}: vehicle {n}: unknown driving mode `{m}`"));
                }
                mode
            }
            None => None,
        };
        let set_speed = match field(n, "set_speed") {
            Some(s) => Some(s.parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("{name}: vehicle {n}: bad set_speed `{s}`"))
            })?),
            None => None,
        };
        vehicles.push(PlatoonVehicle {
            meta: VehicleMeta {
                vehicle_id: field(n, "id").unwrap_or_else(|| n.to_string()),
                propulsion,
                driving_mode,
                model_name,
                acc_gap_setting: field(n, "acc_gap_setting"),
                set_speed,
            },
            samples: Vec::new(),
        });
    }

    let mut times = Vec::new();
    let mut bad_spacing = 0usize;
    let mut prev_t: Option<f64> = None;
    for (idx, raw) in text.lines().enumerate().skip(body_start) {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with(schema.meta_prefix.as_str()) {
            continue;
        }
        let cells: Vec<&str> = line.split(delim as char).collect();
        if cells.len() < header.len() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {} fields, found {}", header.len(), cells.len()),
            });
        }
        let t = parse_cell(cells[time_col], line_no, &schema.time_column)?.ok_or_else(|| Error::Parse {
            line: line_no,
            message: "missing timestamp".into(),
        })?;
        if let Some(p) = prev_t {
            if t <= p {
                return Err(Error::Structural(format!(
                    "{name}: timestamps not strictly increasing at line {line_no} ({t} after {p})"
                )));
            }
        }
        prev_t = Some(t);
        times.push(t);
        for (i, veh) in vehicles.iter_mut().enumerate() {
            let u = parse_cell(cells[speed_cols[i]], line_no, &header[speed_cols[i]])?;
            let ivs = match spacing_cols[i] {
                Some(c) => parse_cell(cells[c], line_no, &header[c])?,
                None => None,
            };
            let Some(u) = u else { continue };
            if u < 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("negative speed {u} in `{}`", header[speed_cols[i]]),
                });
            }
            match (spacing_cols[i], ivs) {
                (None, _) => veh.samples.push(RawSample { t, u, ivs: None }),
                (Some(_), Some(s)) if s > 0.0 => veh.samples.push(RawSample { t, u, ivs: Some(s) }),
                (Some(_), Some(_)) => bad_spacing += 1,
                (Some(_), None) => {}
            }
        }
    }
    let _ = header_idx;
    if times.is_empty() {
        return Err(Error::Structural(format!("{name}: no data rows")));
    }
    if bad_spacing > 0 {
        warnings.push(format!("{name}: dropped {bad_spacing} samples with non-positive spacing"));
    }
    let step = median_step(&times).unwrap_or(NOMINAL_STEP_S);
    if (step - NOMINAL_STEP_S).abs() > 1e-3 {
        warnings.push(format!(
            "{name}: median sampling interval {step:.4} s, expected {NOMINAL_STEP_S} s (10 Hz)"
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(ParsedPlatoon {
        platoon: Platoon {
            platoon_id: meta_kv.get("platoon_id").cloned().unwrap_or_else(|| name.to_string()),
            vehicles,
        },
        median_step: step,
        warnings,
    })
}

pub fn parse_trajectory_path(
    path: &Path,
    schema: &ColumnSchema,
    lookup: &PropulsionLookup,
) -> Result<ParsedPlatoon> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_trajectory_file(std::io::BufReader::new(file), &name, schema, lookup)
}

/// Writes a platoon in the default layout; parsing the output with
/// [`ColumnSchema::default`] yields identical samples.
pub fn write_platoon<W: Write>(platoon: &Platoon, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# platoon_id = {}", platoon.platoon_id)?;
    for (i, v) in platoon.vehicles.iter().enumerate() {
        let n = i + 1;
        let m = &v.meta;
        writeln!(out, "# vehicle.{n}.id = {}", m.vehicle_id)?;
        if !m.model_name.is_empty() {
            writeln!(out, "# vehicle.{n}.model = {}", m.model_name)?;
        }
        writeln!(out, "# vehicle.{n}.propulsion = {}", m.propulsion.as_str())?;
        if let Some(d) = m.driving_mode {
            writeln!(out, "# vehicle.{n}.driving_mode = {}", d.as_str())?;
        }
        if let Some(g) = &m.acc_gap_setting {
            writeln!(out, "# vehicle.{n}.acc_gap_setting = {g}")?;
        }
        if let Some(s) = m.set_speed {
            writeln!(out, "# vehicle.{n}.set_speed = {}", fmt_num(s))?;
        }
    }
    let n = platoon.vehicles.len();
    let mut header = vec!["Time".to_string()];
    header.extend((1..=n).map(|i| format!("Speed{i}")));
    header.extend((1..n).map(|i| format!("IVS{i}")));
    writeln!(out, "{}", header.join(","))?;

    let mut times: Vec<f64> = platoon
        .vehicles
        .iter()
        .flat_map(|v| v.samples.iter().map(|s| s.t))
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| a.to_bits() == b.to_bits());
    let mut cursors = vec![0usize; n];
    for &t in &times {
        let mut speeds = vec![String::new(); n];
        let mut gaps = vec![String::new(); n.saturating_sub(1)];
        for (i, v) in platoon.vehicles.iter().enumerate() {
            if let Some(s) = v.samples.get(cursors[i]).filter(|s| s.t.to_bits() == t.to_bits()) {
                speeds[i] = fmt_num(s.u);
                if i > 0 {
                    gaps[i - 1] = s.ivs.map(fmt_num).unwrap_or_default();
                }
                cursors[i] += 1;
            }
        }
        let mut row = vec![fmt_num(t)];
        row.extend(speeds);
        row.extend(gaps);
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Fills short dropouts on a `NOMINAL_STEP_S` grid and splits at long ones.
pub fn repair_gaps(series: &[RawSample], max_gap_s: f64) -> Result<Vec<Vec<RawSample>>> {
    repair_gaps_with_step(series, max_gap_s, NOMINAL_STEP_S)
}

/// Gaps up to `max_gap_s` are linearly interpolated at `step` spacing; longer
/// gaps start a new segment.
pub fn repair_gaps_with_step(series: &[RawSample], max_gap_s: f64, step: f64) -> Result<Vec<Vec<RawSample>>> {
    let first = *series.first().ok_or(Error::Empty("sample series"))?;
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
    }
    let mut segments = Vec::new();
    let mut cur = vec![first];
    for w in series.windows(2) {
        let (p, q) = (w[0], w[1]);
        let dt = q.t - p.t;
        if dt <= 0.0 {
            return Err(Error::Structural(format!("time not increasing at t = {}", q.t)));
        }
        if dt > 1.5 * step {
            if dt > max_gap_s + 1e-9 {
                segments.push(std::mem::take(&mut cur));
            } else {
                let missing = (dt / step).round() as usize - 1;
                for j in 1..=missing {
                    let t = p.t + j as f64 * step;
                    let f = (t - p.t) / dt;
                    let lerp = |a: f64, b: f64| a + (b - a) * f;
                    cur.push(RawSample {
                        t,
                        u: lerp(p.u, q.u),
                        ivs: match (p.ivs, q.ivs) {
                            (Some(a), Some(b)) => Some(lerp(a, b)),
                            _ => None,
                        },
                    });
                }
            }
        }
        cur.push(q);
    }
    segments.push(cur);
    Ok(segments)
}

/// Options for turning a platoon into pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOptions {
    pub smoothing_window: usize,
    pub min_overlap_s: f64,
}

impl Default for PairOptions {
    fn default() -> Self {
        Self {
            smoothing_window: DEFAULT_SMOOTHING_WINDOW,
            min_overlap_s: DEFAULT_MIN_OVERLAP_S,
        }
    }
}

/// Splits an N-vehicle platoon into N-1 consecutive pairs, each clipped to
/// the samples both vehicles share. Pairs overlapping less than
/// `min_overlap_s` are dropped.
pub fn decompose_platoon(p: &Platoon, opts: &PairOptions) -> Result<Vec<LeaderFollowerPair>> {
    if p.vehicles.is_empty() {
        return Err(Error::Structural(format!("platoon {} has no vehicles", p.platoon_id)));
    }
    let trajectories: Vec<Option<VehicleTrajectory>> = p
        .vehicles
        .iter()
        .map(|v| VehicleTrajectory::from_samples(v.meta.clone(), &v.samples, opts.smoothing_window).ok())
        .collect();
    let mut pairs = Vec::with_capacity(p.vehicles.len().saturating_sub(1));
    for i in 1..p.vehicles.len() {
        let (Some(lead), Some(follow)) = (&trajectories[i - 1], &trajectories[i]) else {
            log::warn!("platoon {}: vehicle pair {}-{} lacks samples", p.platoon_id, i, i + 1);
            continue;
        };
        if follow.s.is_none() {
            continue;
        }
        let (li, fi) = join_times(&lead.t, &follow.t);
        if li.len() < 2 {
            continue;
        }
        let leader = lead.select(&li);
        let mut follower = follow.select(&fi);
        follower.t = leader.t.clone();
        if leader.duration() < opts.min_overlap_s {
            log::warn!(
                "platoon {}: pair {}-{} overlaps {:.1} s, dropped",
                p.platoon_id,
                lead.meta.vehicle_id,
                follow.meta.vehicle_id,
                leader.duration()
            );
            continue;
        }
        pairs.push(LeaderFollowerPair {
            pair_id: format!("{}:{}-{}", p.platoon_id, lead.meta.vehicle_id, follow.meta.vehicle_id),
            platoon_id: p.platoon_id.clone(),
            leader,
            follower,
        });
    }
    Ok(pairs)
}

const JOIN_TOL_S: f64 = 1e-3;

/// Indices of samples whose timestamps match within a millisecond.
fn join_times(a: &[f64], b: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let (mut i, mut j) = (0, 0);
    let (mut ia, mut ib) = (Vec::new(), Vec::new());
    while i < a.len() && j < b.len() {
        let d = a[i] - b[j];
        if d.abs() <= JOIN_TOL_S {
            ia.push(i);
            ib.push(j);
            i += 1;
            j += 1;
        } else if d < 0.0 {
            i += 1;
        } else {
            j += 1;
        }
    }
    (ia, ib)
}

/// Keeps pairs whose follower is an EV or ICEV driven under ACC.
pub fn filter_pairs(pairs: Vec<LeaderFollowerPair>) -> Vec<LeaderFollowerPair> {
    pairs.into_iter().filter(is_retained).collect()
}

pub fn is_retained(pair: &LeaderFollowerPair) -> bool {
    let m = &pair.follower.meta;
    m.driving_mode == Some(DrivingMode::Acc) && matches!(m.propulsion, Propulsion::Ev | Propulsion::Icev)
}
