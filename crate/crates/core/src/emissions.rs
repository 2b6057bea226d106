//! VT-Micro instantaneous fuel and emission rates, platoon averages and
//! ICEV-led vs EV-led comparisons.
//!
//! Coefficient files are delimited text with one row per coefficient:
//!
//! ```text
//! emission_type,regime,r,q,value
//! fuel,positive,0,0,-7.5
//! ...
//! ```
//!
//! `regime` is `positive` (a >= 0) or `negative` (a < 0). `r` is the speed
//! power and `q` the acceleration power, both in `0..=3`. The polynomial is
//! evaluated with speed in km/h and acceleration in km/h/s.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Propulsion;
use crate::kinematics::VehicleTrajectory;

const MPS_TO_KMH: f64 = 3.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EmissionType {
    #[serde(rename = "fuel")]
    Fuel,
    #[serde(rename = "HC")]
    Hc,
    #[serde(rename = "CO")]
    Co,
    #[serde(rename = "NOx")]
    Nox,
}

impl EmissionType {
    pub const ALL: [EmissionType; 4] = [EmissionType::Fuel, EmissionType::Hc, EmissionType::Co, EmissionType::Nox];

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fuel" => Some(EmissionType::Fuel),
            "hc" => Some(EmissionType::Hc),
            "co" => Some(EmissionType::Co),
            "nox" => Some(EmissionType::Nox),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmissionType::Fuel => "fuel",
            EmissionType::Hc => "HC",
            EmissionType::Co => "CO",
            EmissionType::Nox => "NOx",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            EmissionType::Fuel => "liters/sec/veh",
            _ => "grams/sec/veh",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    Positive,
    Negative,
}

impl Regime {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "accel" | "+" => Some(Regime::Positive),
            "negative" | "neg" | "decel" | "-" => Some(Regime::Negative),
            _ => None,
        }
    }

    /// Zero acceleration uses the positive grid.
    pub fn of(a: f64) -> Self {
        if a >= 0.0 {
            Regime::Positive
        } else {
            Regime::Negative
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelForm {
    /// `exp(P(v, a))`.
    #[default]
    LogLinear,
    /// `max(P(v, a), 0)`.
    LiteralPolynomial,
}

/// Coefficients `C[r][q]` (stored row-major as `r * 4 + q`) per emission type
/// and acceleration regime.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionCoefficientTable {
    grids: [[[f64; 16]; 2]; 4],
    pub form: ModelForm,
}

impl EmissionCoefficientTable {
    /// Table with every coefficient zero.
    pub fn zeros(form: ModelForm) -> Self {
        Self {
            grids: [[[0.0; 16]; 2]; 4],
            form,
        }
    }

    pub fn with_form(mut self, form: ModelForm) -> Self {
        self.form = form;
        self
    }

    pub fn coefficient(&self, e: EmissionType, regime: Regime, r: usize, q: usize) -> f64 {
        self.grids[e.index()][regime.index()][r * 4 + q]
    }

    pub fn set(&mut self, e: EmissionType, regime: Regime, r: usize, q: usize, value: f64) {
        self.grids[e.index()][regime.index()][r * 4 + q] = value;
    }

    pub fn len(&self) -> usize {
        4 * 2 * 16
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn grid(&self, e: EmissionType, regime: Regime) -> &[f64; 16] {
        &self.grids[e.index()][regime.index()]
    }
}

/// Reads and validates a coefficient file.
pub fn load_coefficients<R: Read>(source: R, form: ModelForm) -> Result<EmissionCoefficientTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Schema(format!("missing column `{name}`")))
    };
    let (ce, cg, cr, cq, cv) = (col("emission_type")?, col("regime")?, col("r")?, col("q")?, col("value")?);

    let mut table = EmissionCoefficientTable::zeros(form);
    let mut seen = [[[false; 16]; 2]; 4];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| rec.get(i).unwrap_or("");
        let e = EmissionType::parse(field(ce))
            .ok_or_else(|| Error::Schema(format!("line {line}: unknown emission type `{}`", field(ce))))?;
        let g = Regime::parse(field(cg))
            .ok_or_else(|| Error::Schema(format!("line {line}: unknown regime `{}`", field(cg))))?;
        let power = |i: usize| -> Result<usize> {
            match field(i).parse::<usize>() {
                Ok(p) if p <= 3 => Ok(p),
                _ => Err(Error::Schema(format!("line {line}: power `{}` not in 0..=3", field(i)))),
            }
        };
        let (r, q) = (power(cr)?, power(cq)?);
        let value: f64 = field(cv)
            .parse()
            .map_err(|_| Error::Validation(format!("line {line}: `{}` is not a number", field(cv))))?;
        if !value.is_finite() {
            return Err(Error::Validation(format!("line {line}: non-finite coefficient")));
        }
        let slot = &mut seen[e.index()][g.index()][r * 4 + q];
        if *slot {
            return Err(Error::Validation(format!(
                "line {line}: duplicate coefficient {} {:?} C{r}{q}",
                e.as_str(),
                g
            )));
        }
        *slot = true;
        table.set(e, g, r, q, value);
    }
    for e in EmissionType::ALL {
        for g in [Regime::Positive, Regime::Negative] {
            let have = seen[e.index()][g.index()].iter().filter(|&&x| x).count();
            if have != 16 {
                return Err(Error::Schema(format!(
                    "{} {:?}-acceleration grid has {have} of 16 coefficients",
                    e.as_str(),
                    g
                )));
            }
        }
    }
    Ok(table)
}

pub fn load_coefficients_path(path: &Path, form: ModelForm) -> Result<EmissionCoefficientTable> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_coefficients(std::io::BufReader::new(f), form)
}

/// Writes a table in the loader's format.
pub fn write_coefficients<W: std::io::Write>(table: &EmissionCoefficientTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["emission_type", "regime", "r", "q", "value"])?;
    for e in EmissionType::ALL {
        for (g, name) in [(Regime::Positive, "positive"), (Regime::Negative, "negative")] {
            for r in 0..4 {
                for q in 0..4 {
                    w.write_record([
                        e.as_str().to_string(),
                        name.to_string(),
                        r.to_string(),
                        q.to_string(),
                        format!("{:e}", table.coefficient(e, g, r, q)),
                    ])?;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::io("coefficients", e))?;
    Ok(())
}

/// Instantaneous rate for speed `v` (m/s) and acceleration `a` (m/s^2).
pub fn instantaneous_moe(v: f64, a: f64, table: &EmissionCoefficientTable, e: EmissionType) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("speed must be >= 0, got {v}")));
    }
    let vk = v * MPS_TO_KMH;
    let ak = a * MPS_TO_KMH;
    let c = table.grid(e, Regime::of(a));
    // Horner in both variables
    let mut p = 0.0;
    for r in (0..4).rev() {
        let mut inner = 0.0;
        for q in (0..4).rev() {
            inner = inner * ak + c[r * 4 + q];
        }
        p = p * vk + inner;
    }
    let rate = match table.form {
        ModelForm::LogLinear => p.exp(),
        ModelForm::LiteralPolynomial => p,
    };
    Ok(rate.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatoonEmissionReport {
    pub platoon_id: String,
    /// Optional display label (e.g. "Platoon A").
    pub label: Option<String>,
    pub lead_propulsion: Propulsion,
    pub rates: BTreeMap<EmissionType, f64>,
    pub n_icev_followers: usize,
    pub n_steps: usize,
}

/// Mean rate over every step of every ICEV follower. Other followers are
/// ignored. Followers are combined in vehicle-id order so the result does
/// not depend on input order.
pub fn platoon_average_moe(
    platoon_id: &str,
    lead_propulsion: Propulsion,
    followers: &[VehicleTrajectory],
    table: &EmissionCoefficientTable,
) -> Result<PlatoonEmissionReport> {
    if !matches!(lead_propulsion, Propulsion::Ev | Propulsion::Icev) {
        return Err(Error::InvalidInput(format!(
            "platoon {platoon_id}: leader propulsion {} is neither EV nor ICEV",
            lead_propulsion.as_str()
        )));
    }
    let mut icev: Vec<&VehicleTrajectory> = followers.iter().filter(|f| f.meta.propulsion == Propulsion::Icev).collect();
    if icev.is_empty() {
        return Err(Error::InvalidInput(format!("platoon {platoon_id}: no ICEV followers")));
    }
    icev.sort_by(|a, b| a.meta.vehicle_id.cmp(&b.meta.vehicle_id));
    let n_steps: usize = icev.iter().map(|f| f.len()).sum();
    if n_steps == 0 {
        return Err(Error::Empty("ICEV follower series"));
    }
    let mut rates = BTreeMap::new();
    for e in EmissionType::ALL {
        let mut total = 0.0;
        for f in &icev {
            let mut sum = 0.0;
            for (&v, &a) in f.v.iter().zip(&f.a) {
                sum += instantaneous_moe(v, a, table, e)
                    .map_err(|err| err.in_stage("emissions", format!("{platoon_id}/{}", f.meta.vehicle_id)))?;
            }
            total += sum;
        }
        rates.insert(e, total / n_steps as f64);
    }
    Ok(PlatoonEmissionReport {
        platoon_id: platoon_id.to_string(),
        label: None,
        lead_propulsion,
        rates,
        n_icev_followers: icev.len(),
        n_steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatoonComparison {
    /// ICEV-led platoon.
    pub from: String,
    /// EV-led platoon.
    pub to: String,
    /// `100 * (EV-led - ICEV-led) / ICEV-led`; absent when the base is zero.
    pub change: BTreeMap<EmissionType, Option<f64>>,
}

fn display_name(r: &PlatoonEmissionReport) -> String {
    r.label.clone().unwrap_or_else(|| r.platoon_id.clone())
}

/// Every ICEV-led report against every EV-led report, in input order.
pub fn compare_platoons(reports: &[PlatoonEmissionReport]) -> Result<Vec<PlatoonComparison>> {
    let icev: Vec<_> = reports.iter().filter(|r| r.lead_propulsion == Propulsion::Icev).collect();
    let ev: Vec<_> = reports.iter().filter(|r| r.lead_propulsion == Propulsion::Ev).collect();
    if icev.is_empty() || ev.is_empty() {
        return Err(Error::InvalidInput(format!(
            "platoon comparison needs ICEV-led and EV-led platoons (have {} and {})",
            icev.len(),
            ev.len()
        )));
    }
    let mut out = Vec::with_capacity(icev.len() * ev.len());
    for a in &icev {
        for b in &ev {
            let change = EmissionType::ALL
                .iter()
                .map(|&e| {
                    let (x, y) = (a.rates[&e], b.rates[&e]);
                    (e, (x != 0.0).then(|| 100.0 * (y - x) / x))
                })
                .collect();
            out.push(PlatoonComparison {
                from: display_name(a),
                to: display_name(b),
                change,
            });
        }
    }
    Ok(out)
}
