//! Post-processing on sampled series. Everything here works from CSV columns
//! alone, so summaries can be recomputed from the written files.

use crate::error::{Result, RunError};
use crate::output::Table;

/// Time and value of the maximum of the first excursion of `series` above
/// `threshold`. Fast ripples near the top of a slow oscillation do not split
/// the excursion.
pub fn first_excursion_maximum(times: &[f64], series: &[f64], threshold: f64) -> Option<(f64, f64)> {
    let start = series.iter().position(|&x| x > threshold)?;
    let end = series[start..]
        .iter()
        .position(|&x| x <= threshold)
        .map_or(series.len(), |k| start + k);
    let (i, &v) = series[start..end]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    Some((times[start + i], v))
}

pub fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Index of the sample closest to `t`.
pub fn nearest_index(times: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (i, &s) in times.iter().enumerate() {
        if (s - t).abs() < (times[best] - t).abs() {
            best = i;
        }
    }
    best
}

/// Checks every row of a trajectory table: populations in `[0, 1]` and summing
/// to one, purity in `[1/4, 1]`, entanglement in `[0, 1]`.
pub fn validate_trajectory_table(table: &Table) -> Result<()> {
    const TOL: f64 = 1e-8;
    let col = |name: &str| table.column(name);
    let pops: Vec<Vec<f64>> = ["p00", "p01", "p10", "p11"]
        .iter()
        .map(|c| col(c).ok_or_else(|| RunError::Config(format!("trajectory table lacks `{c}`"))))
        .collect::<Result<_>>()?;
    let bad = |row: usize, what: &str| {
        Err(RunError::Config(format!("row {row} violates state invariants: {what}")))
    };
    for row in 0..table.rows.len() {
        let p: Vec<f64> = pops.iter().map(|c| c[row]).collect();
        if p.iter().any(|&x| !(-TOL..=1.0 + TOL).contains(&x)) {
            return bad(row, "population outside [0, 1]");
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > TOL {
            return bad(row, "populations do not sum to 1");
        }
    }
    for (name, lo) in [("purity", 0.25), ("eof", 0.0), ("fidelity_vs_target", 0.0)] {
        if let Some(values) = col(name) {
            if let Some(row) = values.iter().position(|&x| !(lo - TOL..=1.0 + TOL).contains(&x)) {
                return bad(row, name);
            }
        }
    }
    Ok(())
}
