//! Empirical precision-scaling measurements.

use std::time::Instant;

use serde::Serialize;

use crate::creal::CauchyReal;
use crate::error::Result;
use crate::eval::{eval_to_precision_stats, EvalConfig};
use crate::tier::CheckedTerm;

#[derive(Clone, Debug, Serialize)]
pub struct BenchEntry {
    pub precision: u32,
    pub median_nanos: u128,
    pub rounds: u32,
    pub si_expansions: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub precisions: Vec<BenchEntry>,
    /// Least-squares slope of `ln(time)` against `ln(n)`.
    pub log_log_slope: f64,
    /// Whether the observed growth is polynomially bounded on the sampled
    /// range (slope at most `slope_limit`).
    pub polynomial_trend: bool,
    pub slope_limit: f64,
}

/// Times `eval_to_precision` across the precision list and fits a log-log
/// slope. Wall times are machine-dependent; the reported criterion is the
/// trend, not the absolute numbers.
pub fn bench_scaling<F>(
    term: &CheckedTerm,
    make_point: F,
    precisions: &[u32],
    repeats: usize,
    slope_limit: f64,
    config: &EvalConfig,
) -> Result<BenchReport>
where
    F: Fn() -> Vec<CauchyReal>,
{
    let repeats = repeats.max(1);
    let mut entries = Vec::with_capacity(precisions.len());
    for &n in precisions {
        let mut times = Vec::with_capacity(repeats);
        let mut rounds = 0;
        let mut si_expansions = 0;
        for _ in 0..repeats {
            // Fresh argument sources each run so caches do not flatter the
            // later measurements.
            let point = make_point();
            let start = Instant::now();
            let (_, stats) = eval_to_precision_stats(term, &point, n, config)?;
            times.push(start.elapsed().as_nanos());
            rounds = stats.rounds;
            si_expansions = stats.si_expansions;
        }
        times.sort_unstable();
        let median = times[times.len() / 2];
        entries.push(BenchEntry { precision: n, median_nanos: median, rounds, si_expansions });
    }
    let slope = fit_slope(&entries);
    Ok(BenchReport {
        precisions: entries,
        log_log_slope: slope,
        polynomial_trend: slope <= slope_limit,
        slope_limit,
    })
}

fn fit_slope(entries: &[BenchEntry]) -> f64 {
    if entries.len() < 2 {
        return 0.0;
    }
    let points: Vec<(f64, f64)> = entries
        .iter()
        .map(|e| {
            let x = f64::from(e.precision).ln();
            // Clamp below to keep the fit finite on very fast runs.
            let y = (e.median_nanos.max(100) as f64).ln();
            (x, y)
        })
        .collect();
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return 0.0;
    }
    (n * sxy - sx * sy) / denom
}
