//! Breadth-first search over cosets through the left action of the
//! elementary generators `E_ij(±1)`.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coset::{coset_height, invariant_key, reduced_representative, CosetRecord};
use super::integer::IntegerMatrix;
use super::{EnumerationReport, Method, HEIGHT_TOL};
use crate::algebra::Partition;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BfsConfig {
    /// States with height above `R + margin` are not expanded.
    pub margin: f64,
    /// Optional cap on the number of layers. Without it the search stops
    /// when the pruned frontier is empty, which always happens because only
    /// finitely many cosets have bounded height.
    pub max_depth: Option<usize>,
    /// Memory budget in stored cosets.
    pub max_states: usize,
}

impl Default for BfsConfig {
    fn default() -> Self {
        Self {
            margin: 2.0,
            max_depth: None,
            max_states: 8_000_000,
        }
    }
}

struct Stored {
    rep: IntegerMatrix,
    inv: IntegerMatrix,
    height: f64,
}

/// Runs the search; exceeding `max_states` or overflowing `i64` entries is
/// an [`Error::Resource`].
pub fn enumerate_bfs(
    partition: &Partition,
    r: f64,
    config: &BfsConfig,
) -> Result<EnumerationReport> {
    let report = enumerate_bfs_partial(partition, r, config)?;
    if !report.complete {
        return Err(Error::Resource(format!(
            "BFS stopped after {} stored cosets ({} within radius so far); partial result",
            report.states_explored, report.count
        )));
    }
    Ok(report)
}

/// Like [`enumerate_bfs`] but returns what was found so far, flagged with
/// `complete = false`, when the budget is exhausted.
pub fn enumerate_bfs_partial(
    partition: &Partition,
    r: f64,
    config: &BfsConfig,
) -> Result<EnumerationReport> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be >= 0, got {r}"
        )));
    }
    if !(config.margin >= 0.0) {
        return Err(Error::InvalidArgument("margin must be >= 0".into()));
    }
    let start = Instant::now();
    let n = partition.n();
    let cutoff = r + config.margin + HEIGHT_TOL;
    let gens: Vec<(usize, usize, i64)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .flat_map(|(i, j)| [(i, j, 1), (i, j, -1)])
        .collect();

    let index: DashMap<Vec<u8>, Vec<Stored>> = DashMap::new();
    let stored = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);

    let root = IntegerMatrix::identity(n);
    index.insert(
        invariant_key(&root, partition),
        vec![Stored {
            rep: root.clone(),
            inv: root.clone(),
            height: coset_height(&root, partition),
        }],
    );
    stored.fetch_add(1, Ordering::Relaxed);

    let mut frontier = vec![root];
    let mut depth = 0;
    while !frontier.is_empty() {
        if config.max_depth.is_some_and(|d| depth >= d) {
            break;
        }
        if stored.load(Ordering::Relaxed) > config.max_states {
            overflow.store(true, Ordering::Relaxed);
            break;
        }
        let next: Vec<IntegerMatrix> = frontier
            .par_iter()
            .flat_map_iter(|g| {
                let index = &index;
                let stored = &stored;
                let overflow = &overflow;
                gens.iter().filter_map(move |&(i, j, s)| {
                    if overflow.load(Ordering::Relaxed) {
                        return None;
                    }
                    let Some(child) = g.left_elementary(i, j, s) else {
                        overflow.store(true, Ordering::Relaxed);
                        return None;
                    };
                    let h = coset_height(&child, partition);
                    if h > cutoff {
                        return None;
                    }
                    let key = invariant_key(&child, partition);
                    let mut bucket = index.entry(key).or_default();
                    if bucket
                        .iter()
                        .any(|s| in_coset_of(&s.inv, &child, partition))
                    {
                        return None;
                    }
                    let rep = reduced_representative(&child, partition);
                    let Ok(inv) = rep.inverse() else {
                        overflow.store(true, Ordering::Relaxed);
                        return None;
                    };
                    bucket.push(Stored {
                        rep: rep.clone(),
                        inv,
                        height: h,
                    });
                    stored.fetch_add(1, Ordering::Relaxed);
                    Some(rep)
                })
            })
            .collect();
        frontier = next;
        depth += 1;
    }
    let complete = !overflow.load(Ordering::Relaxed);

    let mut cosets: Vec<CosetRecord> = index
        .into_iter()
        .flat_map(|(key, bucket)| {
            bucket.into_iter().map(move |s| CosetRecord {
                representative: s.rep,
                invariant_key: key.clone(),
                height: s.height,
            })
        })
        .collect();
    let states_explored = cosets.len();
    cosets.retain(|c| c.height <= r + HEIGHT_TOL);
    super::sort_records(&mut cosets);
    Ok(EnumerationReport::assemble(
        partition,
        r,
        Method::Bfs,
        cosets,
        EnumerationDetails {
            margin: Some(config.margin),
            max_depth: config.max_depth,
            depth_reached: Some(depth),
            entry_bound: None,
            states_explored,
            complete,
            seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// `inv · g ∈ G_hor ∩ Γ`, i.e. [`same_coset`] with the inverse of the stored
/// representative at hand. Entries of the product are formed lazily, below
/// the diagonal blocks first, so most mismatches exit after a few dot
/// products.
fn in_coset_of(inv: &IntegerMatrix, g: &IntegerMatrix, partition: &Partition) -> bool {
    let n = partition.n();
    let entry = |i: usize, j: usize| -> i128 {
        (0..n)
            .map(|k| inv.get(i, k) as i128 * g.get(k, j) as i128)
            .sum()
    };
    for i in 0..n {
        for j in 0..partition.block(partition.block_of(i)).start {
            if entry(i, j) != 0 {
                return false;
            }
        }
    }
    for block in partition.blocks() {
        for i in block.clone() {
            let mut nonzero = 0;
            for j in block.clone() {
                match entry(i, j) {
                    0 => {}
                    1 | -1 => nonzero += 1,
                    _ => return false,
                }
            }
            if nonzero != 1 {
                return false;
            }
        }
    }
    // Rows of a diagonal block each hold one ±1 and the block is invertible,
    // so it is a signed permutation.
    true
}

pub(crate) struct EnumerationDetails {
    pub margin: Option<f64>,
    pub max_depth: Option<usize>,
    pub depth_reached: Option<usize>,
    pub entry_bound: Option<i64>,
    pub states_explored: usize,
    pub complete: bool,
    pub seconds: f64,
}
