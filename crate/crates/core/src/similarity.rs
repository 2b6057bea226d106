//! Dynamic time warping over speed series, the pairwise similarity matrix
//! and median-based selection of the most typical trajectories.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_num;
use crate::ingest::Propulsion;
use crate::stats::{median_sorted, sorted};

pub const DEFAULT_SELECTION_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtwResult {
    /// Accumulated absolute speed difference along the optimal warping path.
    pub distance: f64,
    /// `distance / max(len X, len Y)`.
    pub normalized: f64,
    pub path_length: Option<usize>,
}

/// Optional Sakoe-Chiba style restriction of the warping window.
///
/// Cell `(h, k)` (1-based, `h` indexing X of length m, `k` indexing Y of
/// length n) is admissible when `|h - k*m/n| <= radius`. Row ranges are
/// rounded outward to whole cells and widened where needed so that a
/// monotone path from `(1, 1)` to `(m, n)` always exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub radius: f64,
}

impl Band {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidInput(format!("band radius must be >= 0, got {radius}")));
        }
        Ok(Self { radius })
    }

    /// Inclusive 1-based column range per row (index 0 unused).
    fn row_ranges(&self, m: usize, n: usize) -> Vec<(usize, usize)> {
        let ratio = n as f64 / m as f64;
        let mut ranges = vec![(0, 0); m + 1];
        for (h, slot) in ranges.iter_mut().enumerate().skip(1) {
            let lo = ((h as f64 - self.radius) * ratio).floor().max(1.0) as usize;
            let hi = ((h as f64 + self.radius) * ratio).ceil().min(n as f64) as usize;
            *slot = (lo.min(n), hi.max(1));
        }
        ranges[1].0 = 1;
        ranges[m].1 = n;
        for h in 2..=m {
            let prev_hi = ranges[h - 1].1;
            let (lo, hi) = &mut ranges[h];
            *lo = (*lo).min(prev_hi + 1).min(n);
            *hi = (*hi).max(*lo).max(prev_hi);
        }
        ranges
    }
}

fn check_inputs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("DTW input series"));
    }
    Ok(())
}

/// DTW distance with absolute-difference local cost.
pub fn dtw_distance(x: &[f64], y: &[f64]) -> Result<DtwResult> {
    dtw_banded(x, y, None)
}

pub fn dtw_normalized(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(dtw_distance(x, y)?.normalized)
}

/// DTW restricted to `band` when given. Uses two rows of storage.
pub fn dtw_banded(x: &[f64], y: &[f64], band: Option<Band>) -> Result<DtwResult> {
    check_inputs(x, y)?;
    let (m, n) = (x.len(), y.len());
    let ranges = match band {
        Some(b) => b.row_ranges(m, n),
        None => vec![(1, n); m + 1],
    };
    let inf = f64::INFINITY;
    // Each buffer remembers the column range it last wrote so only that
    // range needs resetting; everything else stays at +inf.
    let mut prev = vec![inf; n + 1];
    prev[0] = 0.0;
    let mut prev_written = Some((0, 0));
    let mut cur = vec![inf; n + 1];
    let mut cur_written: Option<(usize, usize)> = None;
    for h in 1..=m {
        if let Some((a, b)) = cur_written {
            cur[a..=b].fill(inf);
        }
        let (lo, hi) = ranges[h];
        let xh = x[h - 1];
        for k in lo..=hi {
            let best = prev[k].min(cur[k - 1]).min(prev[k - 1]);
            cur[k] = (xh - y[k - 1]).abs() + best;
        }
        cur_written = Some((lo, hi));
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut prev_written, &mut cur_written);
    }
    let distance = prev[n];
    Ok(DtwResult {
        distance,
        normalized: distance / m.max(n) as f64,
        path_length: None,
    })
}

/// Full-matrix DTW returning the optimal warping path (0-based index pairs,
/// start to end). Ties prefer the diagonal step.
pub fn dtw_path(x: &[f64], y: &[f64]) -> Result<(DtwResult, Vec<(usize, usize)>)> {
    check_inputs(x, y)?;
    let (m, n) = (x.len(), y.len());
    let cost = accumulated_cost(x, y);
    let at = |h: usize, k: usize| cost[h * n + k];
    let mut path = vec![(m - 1, n - 1)];
    let (mut h, mut k) = (m - 1, n - 1);
    while h > 0 || k > 0 {
        (h, k) = if h == 0 {
            (0, k - 1)
        } else if k == 0 {
            (h - 1, 0)
        } else {
            let (d, up, left) = (at(h - 1, k - 1), at(h - 1, k), at(h, k - 1));
            if d <= up && d <= left {
                (h - 1, k - 1)
            } else if up <= left {
                (h - 1, k)
            } else {
                (h, k - 1)
            }
        };
        path.push((h, k));
    }
    path.reverse();
    let distance = at(m - 1, n - 1);
    Ok((
        DtwResult {
            distance,
            normalized: distance / m.max(n) as f64,
            path_length: Some(path.len()),
        },
        path,
    ))
}

/// Row-major `m x n` accumulated-cost matrix (0-based).
pub fn accumulated_cost(x: &[f64], y: &[f64]) -> Vec<f64> {
    let (m, n) = (x.len(), y.len());
    let mut d = vec![0.0f64; m * n];
    for h in 0..m {
        for k in 0..n {
            let local = (x[h] - y[k]).abs();
            let best = match (h, k) {
                (0, 0) => 0.0,
                (0, _) => d[k - 1],
                (_, 0) => d[(h - 1) * n],
                _ => d[(h - 1) * n + k - 1].min(d[(h - 1) * n + k]).min(d[h * n + k - 1]),
            };
            d[h * n + k] = local + best;
        }
    }
    d
}

/// Keeps every `floor(native_hz / target_hz)`-th sample, starting at 0.
pub fn downsample(series: &[f64], native_hz: f64, target_hz: f64) -> Result<Vec<f64>> {
    if !(target_hz > 0.0) {
        return Err(Error::InvalidInput(format!("target rate must be positive, got {target_hz}")));
    }
    if target_hz > native_hz {
        return Err(Error::InvalidInput(format!(
            "target rate {target_hz} Hz exceeds native rate {native_hz} Hz"
        )));
    }
    let step = ((native_hz / target_hz) + 1e-9).floor().max(1.0) as usize;
    Ok(series.iter().step_by(step).copied().collect())
}

/// Symmetric matrix of normalized DTW distances with per-row medians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub ids: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    /// Median of each row, diagonal excluded.
    pub medians: Vec<f64>,
}

impl SimilarityMatrix {
    /// Builds the matrix from the upper-triangle values in row-major order.
    #[allow(clippy::needless_range_loop)]
    fn from_upper(ids: Vec<String>, upper: &[f64]) -> Self {
        let n = ids.len();
        let mut dist = vec![vec![0.0; n]; n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().expect("upper triangle size");
                dist[i][j] = v;
                dist[j][i] = v;
            }
        }
        let medians = dist
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let others: Vec<f64> = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                if others.is_empty() {
                    0.0
                } else {
                    median_sorted(&sorted(&others))
                }
            })
            .collect();
        Self { ids, dist, medians }
    }

    /// Writes the matrix with ids as header row and first column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["id".to_string()];
        header.extend(self.ids.iter().cloned());
        w.write_record(&header)?;
        for (id, row) in self.ids.iter().zip(&self.dist) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|&v| fmt_num(v)));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("similarity matrix", e))?;
        Ok(())
    }

    /// Restricts the matrix to `keep` ids, in the given order.
    pub fn subset(&self, keep: &[String]) -> Self {
        let idx: Vec<usize> = keep
            .iter()
            .filter_map(|k| self.ids.iter().position(|i| i == k))
            .collect();
        let ids: Vec<String> = idx.iter().map(|&i| self.ids[i].clone()).collect();
        let mut upper = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                upper.push(self.dist[i][j]);
            }
        }
        Self::from_upper(ids, &upper)
    }
}

/// Normalized DTW between every pair of trajectories. Entries are computed
/// independently, so the result does not depend on evaluation order.
pub fn pairwise_matrix(trajectories: &[(String, Vec<f64>)], band: Option<Band>) -> Result<SimilarityMatrix> {
    if trajectories.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "pairwise DTW needs at least 2 trajectories, got {}",
            trajectories.len()
        )));
    }
    if let Some((id, _)) = trajectories.iter().find(|(_, s)| s.is_empty()) {
        return Err(Error::InvalidInput(format!("trajectory {id} is empty")));
    }
    let n = trajectories.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let eval = |&(i, j): &(usize, usize)| {
        dtw_banded(&trajectories[i].1, &trajectories[j].1, band).map(|r| r.normalized)
    };
    #[cfg(feature = "parallel")]
    let upper: Vec<f64> = {
        use rayon::prelude::*;
        cells.par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let upper: Vec<f64> = cells.iter().map(eval).collect::<Result<_>>()?;
    Ok(SimilarityMatrix::from_upper(
        trajectories.iter().map(|(id, _)| id.clone()).collect(),
        &upper,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub k: usize,
    pub selected: BTreeMap<Propulsion, Vec<String>>,
}

impl SelectionResult {
    pub fn all_ids(&self) -> Vec<String> {
        self.selected.values().flatten().cloned().collect()
    }
}

/// Per class, the `k` ids with the lowest median distance. Ties go to the
/// lexicographically smaller id. Ids with no class are ignored.
pub fn select_most_similar(
    matrix: &SimilarityMatrix,
    class_of: impl Fn(&str) -> Option<Propulsion>,
    k: usize,
) -> SelectionResult {
    let mut groups: BTreeMap<Propulsion, Vec<(f64, &str)>> = BTreeMap::new();
    for (id, &med) in matrix.ids.iter().zip(&matrix.medians) {
        if let Some(c) = class_of(id) {
            groups.entry(c).or_default().push((med, id));
        }
    }
    let selected = groups
        .into_iter()
        .map(|(c, mut v)| {
            v.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
            (c, v.into_iter().take(k).map(|(_, id)| id.to_string()).collect())
        })
        .collect();
    SelectionResult { k, selected }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dtw_examples() {
        let x = [3.0, 1.5, 7.25, 7.25];
        assert_eq!(dtw_distance(&x, &x).unwrap().distance, 0.0);
        assert_eq!(dtw_distance(&[0.0, 0.0], &[1.0, 1.0]).unwrap().distance, 2.0);
        let r = dtw_distance(&[0.0, 1.0, 2.0], &[0.0, 2.0]).unwrap();
        assert_eq!(r.distance, 1.0);
        assert_eq!(r.normalized, 1.0 / 3.0);
        assert_eq!(dtw_normalized(&[0.0, 2.0], &[0.0, 1.0, 2.0]).unwrap(), 1.0 / 3.0);
        assert!(dtw_distance(&[], &[1.0]).is_err());
    }

    #[test]
    fn path_agrees_with_distance() {
        let x = [0.0, 1.0, 2.0, 2.0, 5.0];
        let y = [0.0, 2.0, 4.0];
        let (r, path) = dtw_path(&x, &y).unwrap();
        assert_eq!(r.distance, dtw_distance(&x, &y).unwrap().distance);
        let cost: f64 = path.iter().map(|&(h, k)| (x[h] - y[k]).abs()).sum();
        assert_eq!(cost, r.distance);
        assert_eq!(path.first(), Some(&(0, 0)));
        assert_eq!(path.last(), Some(&(4, 2)));
    }

    #[test]
    fn wide_band_equals_unbanded() {
        let x: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).sin() * 5.0 + 10.0).collect();
        let y: Vec<f64> = (0..27).map(|i| (i as f64 * 0.45 + 0.2).sin() * 5.0 + 10.0).collect();
        let full = dtw_distance(&x, &y).unwrap();
        let banded = dtw_banded(&x, &y, Some(Band::new(40.0).unwrap())).unwrap();
        assert_eq!(full, banded);
    }

    #[test]
    fn narrow_band_is_finite_and_not_below_unbanded() {
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.2).cos()).collect();
        for n in [3, 17, 50, 120] {
            let y: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
            let full = dtw_distance(&x, &y).unwrap().distance;
            for r in [0.0, 0.5, 2.0] {
                let b = dtw_banded(&x, &y, Some(Band::new(r).unwrap())).unwrap().distance;
                assert!(b.is_finite(), "n={n} r={r}");
                assert!(b >= full);
            }
        }
    }

    #[test]
    fn downsample_examples() {
        let s: Vec<f64> = (0..25).map(f64::from).collect();
        assert_eq!(downsample(&s, 10.0, 1.0).unwrap(), vec![0.0, 10.0, 20.0]);
        assert_eq!(downsample(&s, 10.0, 10.0).unwrap(), s);
        assert!(downsample(&s, 10.0, 0.0).is_err());
        assert!(downsample(&s, 10.0, 20.0).is_err());
    }

    fn named(series: Vec<Vec<f64>>) -> Vec<(String, Vec<f64>)> {
        series.into_iter().enumerate().map(|(i, s)| (format!("t{i:02}"), s)).collect()
    }

    #[test]
    fn matrix_of_identical_series() {
        let m = pairwise_matrix(&named(vec![vec![1.0, 2.0, 3.0]; 3]), None).unwrap();
        assert!(m.dist.iter().flatten().all(|&d| d == 0.0));
        assert_eq!(m.medians, vec![0.0; 3]);
        assert!(pairwise_matrix(&named(vec![vec![1.0]]), None).is_err());
    }

    #[test]
    fn matrix_is_symmetric_with_medians() {
        let series: Vec<Vec<f64>> = (0..20).map(|i| (0..15).map(|k| ((i * k) % 7) as f64).collect()).collect();
        let m = pairwise_matrix(&named(series.clone()), None).unwrap();
        for i in 0..20 {
            assert_eq!(m.dist[i][i], 0.0);
            for j in 0..20 {
                assert_eq!(m.dist[i][j], m.dist[j][i]);
            }
            let mut row: Vec<f64> = (0..20).filter(|&j| j != i).map(|j| m.dist[i][j]).collect();
            row.sort_by(f64::total_cmp);
            assert_eq!(m.medians[i], (row[8] + row[9]) / 2.0);
        }
        assert_eq!(m.dist[3][11], dtw_normalized(&series[3], &series[11]).unwrap());
    }

    #[test]
    fn csv_export_shape() {
        let series: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, 1.0]).collect();
        let m = pairwise_matrix(&named(series), None).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 21);
        assert!(rows.iter().all(|r| r.split(',').count() == 21));
    }

    fn matrix_with_medians(medians: &[(&str, f64)]) -> SimilarityMatrix {
        SimilarityMatrix {
            ids: medians.iter().map(|(i, _)| i.to_string()).collect(),
            dist: vec![vec![0.0; medians.len()]; medians.len()],
            medians: medians.iter().map(|(_, m)| *m).collect(),
        }
    }

    #[test]
    fn selection_takes_smallest_medians() {
        let meds: Vec<(String, f64)> = (0..12).map(|i| (format!("id{i:02}"), (12 - i) as f64)).collect();
        let refs: Vec<(&str, f64)> = meds.iter().map(|(a, b)| (a.as_str(), *b)).collect();
        let m = matrix_with_medians(&refs);
        let sel = select_most_similar(&m, |_| Some(Propulsion::Ev), 10);
        let ev = &sel.selected[&Propulsion::Ev];
        assert_eq!(ev.len(), 10);
        assert!(!ev.contains(&"id00".to_string()) && !ev.contains(&"id01".to_string()));
    }

    #[test]
    fn selection_tie_breaks_by_id() {
        let m = matrix_with_medians(&[("b", 1.0), ("a", 1.0), ("c", 0.5)]);
        let sel = select_most_similar(&m, |_| Some(Propulsion::Icev), 2);
        assert_eq!(sel.selected[&Propulsion::Icev], vec!["c".to_string(), "a".to_string()]);
    }

    #[test]
    fn selection_excludes_outlier_and_groups_classes() {
        let mut series: Vec<Vec<f64>> = (0..6).map(|i| vec![10.0 + i as f64 * 0.01; 8]).collect();
        series[2] = vec![40.0; 8];
        let m = pairwise_matrix(&named(series), None).unwrap();
        let sel = select_most_similar(
            &m,
            |id| Some(if id < "t03" { Propulsion::Ev } else { Propulsion::Icev }),
            2,
        );
        assert!(!sel.selected[&Propulsion::Ev].contains(&"t02".to_string()));
        assert_eq!(sel.selected[&Propulsion::Icev].len(), 2);
    }
}
