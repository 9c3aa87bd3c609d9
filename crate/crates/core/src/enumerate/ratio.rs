//! Observed counts against the predicted asymptotic `c·R^p·e^{qR}`.

use serde::{Deserialize, Serialize};

use super::bfs::{enumerate_bfs, BfsConfig};
use super::Method;
use crate::algebra::Partition;
use crate::constants::{asymptotic_count, counting_constant};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub count: usize,
    pub asymptotic: f64,
    /// `count / asymptotic`; `None` when the asymptotic vanishes (`R = 0`
    /// with `p > 0`).
    pub ratio: Option<f64>,
    pub method: Method,
    pub margin: f64,
    pub depth: usize,
    pub seconds: f64,
}

/// One BFS at the largest radius, then counts read off at each radius.
pub fn empirical_ratio(
    partition: &Partition,
    radii: &[f64],
    config: &BfsConfig,
) -> Result<Vec<RatioRow>> {
    let Some(r_max) = radii.iter().copied().reduce(f64::max) else {
        return Ok(Vec::new());
    };
    if radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::InvalidArgument("radii must be >= 0".into()));
    }
    let cc = counting_constant(partition)?;
    let report = enumerate_bfs(partition, r_max, config)?;
    Ok(radii
        .iter()
        .map(|&r| {
            let count = report.count_within(r);
            let asymptotic = asymptotic_count(&cc, r);
            RatioRow {
                r,
                count,
                asymptotic,
                ratio: (asymptotic > 0.0).then(|| count as f64 / asymptotic),
                method: Method::Bfs,
                margin: config.margin,
                depth: report.depth_reached.unwrap_or(0),
                seconds: report.seconds,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    /// `|ratio_{i+1} - ratio_i|` over the rows with a defined ratio.
    pub differences: Vec<f64>,
    /// Successive differences strictly decrease.
    pub cauchy_like: bool,
    /// Ratio at the largest radius.
    pub limit_estimate: Option<f64>,
    /// The limit estimate differs from 1 by more than 20%.
    pub flagged: bool,
}

pub fn summarize_ratios(rows: &[RatioRow]) -> RatioSummary {
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let differences: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let cauchy_like = differences.len() >= 2 && differences.windows(2).all(|w| w[1] < w[0]);
    let limit_estimate = ratios.last().copied();
    RatioSummary {
        differences,
        cauchy_like,
        limit_estimate,
        flagged: limit_estimate.is_some_and(|l| (l - 1.0).abs() > 0.2),
    }
}
