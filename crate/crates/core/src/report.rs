//! Writes a [`RunReport`] as a JSON summary plus comma-separated tables.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ReportFormat;
use crate::emissions::EmissionType;
use crate::error::{Error, Result};
use crate::format::{fmt_num, fmt_opt};
use crate::ingest::Propulsion;
use crate::pipeline::RunReport;
use crate::safety::ThresholdSweep;

const SUMMARY_FILE: &str = "summary.json";
const CONFIG_FILE: &str = "config.toml";

#[derive(Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    report: &'a RunReport,
    files: Vec<String>,
    omitted: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<String>,
    omitted: Vec<String>,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn omit(&mut self, what: &str, why: &str) {
        self.omitted.push(format!("{what}: {why}"));
    }
}

fn class_columns<'a, T>(map: impl Iterator<Item = (&'a Propulsion, T)>) -> Vec<(Propulsion, T)> {
    map.map(|(c, v)| (*c, v)).collect()
}

fn sweep_rows(sw: &ThresholdSweep) -> Vec<Vec<String>> {
    sw.rows
        .iter()
        .map(|r| vec![fmt_num(r.threshold), fmt_opt(r.ev), fmt_opt(r.icev), fmt_opt(r.change)])
        .collect()
}

/// File-system-safe form of an id.
pub fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') { c } else { '_' })
        .collect()
}

fn write_tables(report: &RunReport, w: &mut Writer) -> Result<()> {
    let ds = &report.dataset;
    w.table(
        "platoons.csv",
        &["platoon_id", "source", "n_vehicles", "n_pairs", "n_pairs_retained", "duration_s", "median_step_s"],
        ds.platoons.iter().map(|p| {
            vec![
                p.platoon_id.clone(),
                p.source.clone(),
                p.n_vehicles.to_string(),
                p.n_pairs.to_string(),
                p.n_pairs_retained.to_string(),
                fmt_num(p.duration_s),
                fmt_num(p.median_step_s),
            ]
        }),
    )?;

    match &report.similarity {
        Some(sim) => {
            match &report.artifacts.matrix {
                Some(m) => {
                    let path = w.dir.join("dtw_matrix.csv");
                    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    m.write_csv(std::io::BufWriter::new(file))?;
                    w.files.push("dtw_matrix.csv".into());
                }
                None => w.omit("dtw_matrix.csv", "fewer than two trajectories"),
            }
            let mut rows = Vec::new();
            for (c, ids) in &sim.selection.selected {
                for (rank, id) in ids.iter().enumerate() {
                    let med = sim.selected_medians.get(id).copied().unwrap_or_default();
                    rows.push(vec![c.as_str().to_string(), (rank + 1).to_string(), id.clone(), fmt_num(med)]);
                }
            }
            w.table("selection.csv", &["class", "rank", "pair_id", "median_distance"], rows)?;
        }
        None => {
            w.omit("dtw_matrix.csv", "similarity stage not run");
            w.omit("selection.csv", "similarity stage not run");
        }
    }

    match &report.efficiency {
        Some(eff) => {
            let cols = class_columns(eff.asv_summary.iter());
            let mut header = vec!["statistic"];
            header.extend(cols.iter().map(|(c, _)| c.as_str()));
            let stat = |name: &str, f: fn(&crate::efficiency::FiveNumberSummary) -> f64| {
                let mut r = vec![name.to_string()];
                r.extend(cols.iter().map(|(_, s)| fmt_num(f(s))));
                r
            };
            w.table(
                "asv_summary.csv",
                &header,
                [
                    stat("min", |s| s.min),
                    stat("p25", |s| s.p25),
                    stat("median", |s| s.median),
                    stat("p75", |s| s.p75),
                    stat("max", |s| s.max),
                ],
            )?;
            w.table(
                "asv_per_pair.csv",
                &["pair_id", "class", "v_star", "asv"],
                eff.asv
                    .iter()
                    .map(|a| vec![a.pair_id.clone(), a.class.as_str().into(), fmt_num(a.v_star), fmt_num(a.asv)]),
            )?;
            let fit_row = |label: String, class: Propulsion, f: &crate::efficiency::VsFit| {
                vec![
                    label,
                    class.as_str().into(),
                    fmt_num(f.jam_spacing),
                    fmt_num(f.desired_speed),
                    fmt_num(f.critical_spacing),
                    fmt_num(f.slope),
                    fmt_num(f.residual_rmse),
                    f.n_points.to_string(),
                    f.at_search_boundary.to_string(),
                ]
            };
            let fit_header = [
                "id",
                "class",
                "jam_spacing",
                "desired_speed",
                "critical_spacing",
                "slope",
                "residual_rmse",
                "n_points",
                "at_search_boundary",
            ];
            if eff.vs_fits.is_empty() {
                w.omit("vs_fit.csv", "no class had a usable fit");
            } else {
                w.table(
                    "vs_fit.csv",
                    &fit_header,
                    eff.vs_fits.iter().map(|(c, f)| fit_row(c.as_str().into(), *c, f)),
                )?;
            }
            if eff.per_vehicle_fits.is_empty() {
                w.omit("vs_fit_per_pair.csv", "per-vehicle fits disabled or none succeeded");
            } else {
                w.table(
                    "vs_fit_per_pair.csv",
                    &fit_header,
                    eff.per_vehicle_fits.iter().map(|p| fit_row(p.pair_id.clone(), p.class, &p.fit)),
                )?;
            }
            if report.artifacts.vs_scatter.is_empty() {
                w.omit("vs_scatter.csv", "no spacing/speed points");
            } else {
                w.table(
                    "vs_scatter.csv",
                    &["class", "spacing", "speed"],
                    report
                        .artifacts
                        .vs_scatter
                        .iter()
                        .map(|(c, s, v)| vec![c.as_str().into(), fmt_num(*s), fmt_num(*v)]),
                )?;
            }
        }
        None => {
            for f in ["asv_summary.csv", "asv_per_pair.csv", "vs_fit.csv", "vs_scatter.csv"] {
                w.omit(f, "efficiency stage not run");
            }
        }
    }

    match &report.safety {
        Some(s) => {
            let header = ["threshold", "ev_pct", "icev_pct", "change_pct"];
            w.table("ttc_sweep.csv", &header, sweep_rows(&s.ttc))?;
            w.table("drac_sweep.csv", &header, sweep_rows(&s.drac))?;
        }
        None => {
            w.omit("ttc_sweep.csv", "safety stage not run");
            w.omit("drac_sweep.csv", "safety stage not run");
        }
    }

    match &report.emissions {
        Some(em) if !em.reports.is_empty() => {
            let mut header = vec!["platoon_id", "label", "lead", "n_icev_followers", "n_steps"];
            header.extend(EmissionType::ALL.iter().map(|e| e.as_str()));
            w.table(
                "emissions.csv",
                &header,
                em.reports.iter().map(|r| {
                    let mut row = vec![
                        r.platoon_id.clone(),
                        r.label.clone().unwrap_or_default(),
                        r.lead_propulsion.as_str().into(),
                        r.n_icev_followers.to_string(),
                        r.n_steps.to_string(),
                    ];
                    row.extend(EmissionType::ALL.iter().map(|e| fmt_num(r.rates[e])));
                    row
                }),
            )?;
            if em.comparisons.is_empty() {
                w.omit("emissions_comparison.csv", "needs both ICEV-led and EV-led platoons");
            } else {
                let names: Vec<String> = EmissionType::ALL.iter().map(|e| format!("{}_change_pct", e.as_str())).collect();
                let mut header = vec!["from", "to"];
                header.extend(names.iter().map(String::as_str));
                w.table(
                    "emissions_comparison.csv",
                    &header,
                    em.comparisons.iter().map(|c| {
                        let mut row = vec![c.from.clone(), c.to.clone()];
                        row.extend(EmissionType::ALL.iter().map(|e| fmt_opt(c.change[e])));
                        row
                    }),
                )?;
            }
        }
        Some(_) => w.omit("emissions.csv", "no eligible platoons"),
        None => w.omit("emissions.csv", "emissions stage not run or no coefficient table"),
    }

    if report.artifacts.timeseries.is_empty() {
        w.omit("timeseries/", "no per-pair series (safety stage not run or disabled)");
    }
    let mut used = BTreeSet::new();
    for ps in &report.artifacts.timeseries {
        let mut stem = file_stem(&ps.pair_id);
        let mut n = 1;
        while !used.insert(stem.clone()) {
            n += 1;
            stem = format!("{}_{n}", file_stem(&ps.pair_id));
        }
        w.table(
            &format!("timeseries/{stem}.csv"),
            &["t", "v_leader", "v_follower", "a_leader", "a_follower", "spacing", "dv", "ttc", "drac"],
            ps.steps.iter().zip(ps.safety.ttc.iter().zip(&ps.safety.drac)).map(|(st, (ttc, drac))| {
                vec![
                    fmt_num(st.t),
                    fmt_num(st.v_l),
                    fmt_num(st.v_f),
                    fmt_num(st.a_l),
                    fmt_num(st.a_f),
                    fmt_num(st.s),
                    fmt_num(st.dv),
                    fmt_opt(*ttc),
                    fmt_num(*drac),
                ]
            }),
        )?;
    }
    Ok(())
}

/// Writes the report into `dir` and returns the files written, relative to
/// `dir`, in write order.
pub fn emit_report(report: &RunReport, formats: &[ReportFormat], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut w = Writer {
        dir,
        files: Vec::new(),
        omitted: Vec::new(),
    };
    w.text(CONFIG_FILE, &report.config.to_toml()?)?;
    if formats.contains(&ReportFormat::Csv) {
        write_tables(report, &mut w)?;
    }
    if formats.contains(&ReportFormat::Json) {
        let mut files = w.files.clone();
        files.push(SUMMARY_FILE.into());
        let summary = Summary {
            report,
            files,
            omitted: w.omitted.clone(),
        };
        let mut body = serde_json::to_string_pretty(&summary)?;
        body.push('\n');
        w.text(SUMMARY_FILE, &body)?;
    }
    Ok(w.files.into_iter().map(PathBuf::from).collect())
}
