//! Small numeric helpers for error tables: grids, slope fits, medians, sums.

use crate::error::{QuadError, Result};

/// `points` values from `lo` to `hi` with a constant ratio; both endpoints are exact.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(QuadError::Config(format!(
            "geometric grid needs 0 < lo < hi, got lo = {lo}, hi = {hi}"
        )));
    }
    if points < 2 {
        return Err(QuadError::Config(format!(
            "geometric grid needs at least 2 points, got {points}"
        )));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| (llo + (lhi - llo) * i as f64 / last).exp())
        .collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    Ok(grid)
}

/// Least-squares slope of `log y` against `log x`.
///
/// `None` with fewer than two points, a non-positive value, or identical `x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Median of the finite values; `None` if there are none.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Fixed-order pairwise sum.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}
