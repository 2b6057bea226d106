//! Order statistics over sorted slices.

/// Median of an ascending, non-empty slice; even counts average the two
/// middle values.
pub fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    debug_assert!(n > 0);
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Percentile `p` in `[0, 100]` of an ascending, non-empty slice, linearly
/// interpolating between closest ranks.
pub fn percentile_sorted(xs: &[f64], p: f64) -> f64 {
    let n = xs.len();
    debug_assert!(n > 0);
    let rank = (p / 100.0).clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        xs[lo]
    } else {
        let w = rank - lo as f64;
        xs[lo] + (xs[hi] - xs[lo]) * w
    }
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}
