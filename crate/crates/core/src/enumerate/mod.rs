//! Exact enumeration of the cosets `γ·(G_hor ∩ Γ)`, `Γ = SL_N(Z)`, whose
//! horocycle `γ·U·K/K` has height at most `R`.
//!
//! Two independent strategies are provided: a breadth-first search through
//! the left action of elementary matrices ([`enumerate_bfs`]) and an
//! entry-bounded column scan ([`enumerate_brute`]). They share only the
//! integer matrix type; deduplication and height evaluation go through
//! different code paths.

mod bfs;
mod brute;
mod coset;
mod integer;
mod ratio;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use bfs::{enumerate_bfs, enumerate_bfs_partial, BfsConfig};
pub use brute::{
    default_entry_bound, enumerate_brute, enumerate_brute_at_bound, sufficient_entry_bound,
    BruteConfig,
};
pub use coset::{
    canonical_form, coset_height, invariant_key, reduced_representative, same_coset,
    stabilizer_membership, CanonicalForm, CosetRecord,
};
pub use integer::{hermite_rows, IntegerMatrix};
pub use ratio::{empirical_ratio, summarize_ratios, RatioRow, RatioSummary};

use crate::algebra::Partition;
use crate::error::{Error, Result};
use bfs::EnumerationDetails;

/// Heights within this distance of `R` count as `≤ R` and are flagged.
pub const HEIGHT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bfs,
    Brute,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Bfs => "bfs",
            Method::Brute => "brute",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub partition: Partition,
    pub radius: f64,
    pub method: Method,
    /// Number of distinct cosets with height `≤ R`.
    pub count: usize,
    /// Cosets whose height is within [`HEIGHT_TOL`] of `R`.
    pub boundary: usize,
    pub margin: Option<f64>,
    pub max_depth: Option<usize>,
    pub depth_reached: Option<usize>,
    pub entry_bound: Option<i64>,
    /// Cosets stored during the search, including those above `R`.
    pub states_explored: usize,
    /// `false` when the BFS ran out of budget or the brute-force bound did
    /// not stabilize.
    pub complete: bool,
    pub seconds: f64,
    pub cosets: Vec<CosetRecord>,
}

impl EnumerationReport {
    fn assemble(
        partition: &Partition,
        r: f64,
        method: Method,
        cosets: Vec<CosetRecord>,
        d: EnumerationDetails,
    ) -> Self {
        let boundary = cosets
            .iter()
            .filter(|c| (c.height - r).abs() <= HEIGHT_TOL)
            .count();
        Self {
            partition: partition.clone(),
            radius: r,
            method,
            count: cosets.len(),
            boundary,
            margin: d.margin,
            max_depth: d.max_depth,
            depth_reached: d.depth_reached,
            entry_bound: d.entry_bound,
            states_explored: d.states_explored,
            complete: d.complete,
            seconds: d.seconds,
            cosets,
        }
    }

    /// Number of cosets with height `≤ r`, for `r` up to the report radius.
    pub fn count_within(&self, r: f64) -> usize {
        self.cosets
            .iter()
            .filter(|c| c.height <= r + HEIGHT_TOL)
            .count()
    }

    pub fn canonical_set(&self) -> BTreeSet<CanonicalForm> {
        self.cosets
            .iter()
            .map(|c| canonical_form(&c.representative, &self.partition))
            .collect()
    }
}

fn sort_records(cosets: &mut [CosetRecord]) {
    cosets.sort_by(|a, b| {
        a.height
            .total_cmp(&b.height)
            .then_with(|| a.representative.cmp(&b.representative))
    });
}

/// Coset-set comparison between two reports at the same radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub bfs_count: usize,
    pub brute_count: usize,
    pub only_bfs: Vec<CanonicalForm>,
    pub only_brute: Vec<CanonicalForm>,
}

impl Comparison {
    pub fn identical(&self) -> bool {
        self.only_bfs.is_empty() && self.only_brute.is_empty()
    }
}

/// Compares the coset sets found by the two methods. A coset found by the
/// BFS but missing from the scan means the entry bound was too small and is
/// reported as [`Error::Inconsistent`].
pub fn compare(bfs: &EnumerationReport, brute: &EnumerationReport) -> Result<Comparison> {
    if bfs.partition != brute.partition || bfs.radius != brute.radius {
        return Err(Error::InvalidArgument(
            "reports cover different partitions or radii".into(),
        ));
    }
    let a = bfs.canonical_set();
    let b = brute.canonical_set();
    let cmp = Comparison {
        bfs_count: a.len(),
        brute_count: b.len(),
        only_bfs: a.difference(&b).cloned().collect(),
        only_brute: b.difference(&a).cloned().collect(),
    };
    if !cmp.only_bfs.is_empty() {
        return Err(Error::Inconsistent(format!(
            "{} BFS cosets have no representative within entry bound {:?}",
            cmp.only_bfs.len(),
            brute.entry_bound
        )));
    }
    Ok(cmp)
}
