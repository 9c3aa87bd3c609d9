//! Entry-bounded exhaustive search, used as an oracle for the BFS.
//!
//! Columns are generated left to right inside the box `|entries| ≤ B`. A
//! partial matrix is discarded only when no completion can have height
//! `≤ R`:
//!
//! * the part of a column of block `k` orthogonal to the earlier blocks has
//!   norm at most the largest singular value on that block, which is at most
//!   `exp(R·√((N-1)/N))`;
//! * the first `p` columns of a block boundary span a lattice of covolume
//!   `exp(Σ_{i≤p} bᵢ)` with `|Σ_{i≤p} bᵢ| ≤ R·√(p(N-p)/N)`;
//! * every prefix of columns of a unimodular matrix spans a primitive
//!   sublattice.
//!
//! The last column is not scanned: it is solved from `det = 1`, which fixes
//! it modulo the span of the other columns.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bfs::EnumerationDetails;
use super::coset::{
    canonical_form, invariant_key, reduced_representative, CanonicalForm, CosetRecord,
};
use super::integer::{bareiss_det, ext_gcd, gcd, gram_det, minors_gcd, IntegerMatrix};
use super::{EnumerationReport, Method, HEIGHT_TOL};
use crate::algebra::Partition;
use crate::decompose::height_value;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteConfig {
    /// Initial entry bound; defaults to [`default_entry_bound`].
    pub entry_bound: Option<i64>,
    /// Re-run with a doubled bound until two successive runs agree.
    pub auto_double: bool,
    /// Largest bound tried by the doubling loop.
    pub max_bound: Option<i64>,
}

impl Default for BruteConfig {
    fn default() -> Self {
        Self {
            entry_bound: None,
            auto_double: true,
            max_bound: None,
        }
    }
}

/// `⌈e^{R+1}⌉ + 1` for `N = 2` and `⌈e^{R+2}⌉` otherwise.
pub fn default_entry_bound(n: usize, r: f64) -> i64 {
    if n == 2 {
        (r + 1.0).exp().ceil() as i64 + 1
    } else {
        (r + 2.0).exp().ceil() as i64
    }
}

/// A bound that provably contains a representative of every coset of
/// height `≤ R`: size-reduce each column against the Gram-Schmidt vectors of
/// the earlier blocks, which leaves norm at most
/// `√(1 + (N-1)/4)·exp(R·√((N-1)/N))`.
pub fn sufficient_entry_bound(n: usize, r: f64) -> i64 {
    let nf = n as f64;
    let t = (r * ((nf - 1.0) / nf).sqrt()).exp();
    ((1.0 + (nf - 1.0) / 4.0).sqrt() * t).ceil() as i64
}

pub fn enumerate_brute(
    partition: &Partition,
    r: f64,
    config: &BruteConfig,
) -> Result<EnumerationReport> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be >= 0, got {r}"
        )));
    }
    let start = Instant::now();
    let mut bound = config
        .entry_bound
        .unwrap_or_else(|| default_entry_bound(partition.n(), r));
    if bound < 1 {
        return Err(Error::InvalidArgument(
            "entry bound must be positive".into(),
        ));
    }
    let max_bound = config.max_bound.unwrap_or(bound.saturating_mul(16));
    let mut found = scan(partition, r, bound)?;
    let mut stable = !config.auto_double;
    if config.auto_double {
        loop {
            let next_bound = bound.saturating_mul(2);
            if next_bound > max_bound {
                break;
            }
            let next = scan(partition, r, next_bound)?;
            let same = next.len() == found.len() && next.keys().all(|k| found.contains_key(k));
            found = next;
            bound = next_bound;
            if same {
                stable = true;
                break;
            }
        }
    }
    let mut cosets: Vec<CosetRecord> = found.into_values().collect();
    super::sort_records(&mut cosets);
    let states = cosets.len();
    Ok(EnumerationReport::assemble(
        partition,
        r,
        Method::Brute,
        cosets,
        EnumerationDetails {
            margin: None,
            max_depth: None,
            depth_reached: None,
            entry_bound: Some(bound),
            states_explored: states,
            complete: stable,
            seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// One pass at a fixed bound.
pub fn enumerate_brute_at_bound(
    partition: &Partition,
    r: f64,
    bound: i64,
) -> Result<EnumerationReport> {
    enumerate_brute(
        partition,
        r,
        &BruteConfig {
            entry_bound: Some(bound),
            auto_double: false,
            max_bound: None,
        },
    )
}

type Found = HashMap<CanonicalForm, CosetRecord>;

struct Scan<'a> {
    partition: &'a Partition,
    r: f64,
    bound: i64,
    /// Bound on projected column norms, with a little slack.
    t: f64,
}

fn scan(partition: &Partition, r: f64, bound: i64) -> Result<Found> {
    let n = partition.n();
    let nf = n as f64;
    let s = Scan {
        partition,
        r,
        bound,
        t: (r * ((nf - 1.0) / nf).sqrt()).exp() * (1.0 + 1e-9),
    };
    let first = s.candidates(&[]);
    let found = first
        .par_iter()
        .map(|c0| {
            let mut local = Found::new();
            let mut cols = vec![c0.clone()];
            s.extend(&mut cols, &first, &[], &mut local);
            local
        })
        .reduce(Found::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found)
}

impl Scan<'_> {
    /// Integer vectors in the box whose component orthogonal to `basis` has
    /// norm at most `t`.
    fn candidates(&self, basis: &[Vec<f64>]) -> Vec<Vec<i64>> {
        let n = self.partition.n();
        let b = self.bound;
        let t2 = self.t * self.t;
        let last = n - 1;
        let mut e_last = vec![0.0; n];
        e_last[last] = 1.0;
        let w = project_out(&e_last, basis);
        let aa = dot(&w, &w);
        let mut out = Vec::new();
        let mut x = vec![-b; n];
        loop {
            x[last] = 0;
            let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            let u = project_out(&xf, basis);
            let bb = dot(&u, &w);
            let cc = dot(&u, &u) - t2;
            let range = if aa < 1e-12 {
                (cc <= 1e-9 * t2).then_some((-b, b))
            } else {
                let disc = bb * bb - aa * cc;
                (disc >= 0.0).then(|| {
                    let sq = disc.sqrt();
                    let lo = ((-bb - sq) / aa - 1e-7).ceil().max(-b as f64) as i64;
                    let hi = ((-bb + sq) / aa + 1e-7).floor().min(b as f64) as i64;
                    (lo, hi)
                })
            };
            if let Some((lo, hi)) = range {
                for z in lo..=hi {
                    x[last] = z;
                    let v: Vec<f64> = x.iter().map(|&v| v as f64).collect();
                    let p = project_out(&v, basis);
                    if dot(&p, &p) <= t2 && x.iter().fold(0i128, |g, &e| gcd(g, e as i128)) == 1 {
                        out.push(x.clone());
                    }
                }
            }
            // odometer over the first n-1 coordinates
            let mut i = 0;
            loop {
                if i == last {
                    return out;
                }
                if x[i] < b {
                    x[i] += 1;
                    break;
                }
                x[i] = -b;
                i += 1;
            }
        }
    }

    /// Extends a partial matrix whose columns `cols` are already admissible.
    /// `block_cands` are the candidates for the current block, `basis` the
    /// orthonormal basis of the earlier blocks.
    fn extend(
        &self,
        cols: &mut Vec<Vec<i64>>,
        block_cands: &[Vec<i64>],
        basis: &[Vec<f64>],
        found: &mut Found,
    ) {
        let n = self.partition.n();
        let j = cols.len();
        let jb = self.partition.block_of(j - 1);
        let block_end = self.partition.block(jb).end;

        // `cols` just completed block `jb`: check the prefix and move on.
        let (cands, basis_next): (Vec<Vec<i64>>, Vec<Vec<f64>>) = if j == block_end {
            if j < n {
                let p = j as f64;
                let nf = n as f64;
                let limit = self.r * (p * (nf - p) / nf).sqrt() + HEIGHT_TOL;
                let Some(d) = gram_det(cols) else { return };
                if d <= 0 || (0.5 * (d as f64).ln()).abs() > limit {
                    return;
                }
            }
            let mut nb = basis.to_vec();
            for c in &cols[self.partition.block(jb).start..] {
                let v: Vec<f64> = c.iter().map(|&x| x as f64).collect();
                let w = project_out(&project_out(&v, &nb), &nb);
                let nrm = dot(&w, &w).sqrt();
                nb.push(w.into_iter().map(|x| x / nrm).collect());
            }
            let cands = if j + 1 < n {
                self.candidates(&nb)
            } else {
                Vec::new()
            };
            (cands, nb)
        } else {
            (block_cands.to_vec(), basis.to_vec())
        };

        if j == n - 1 {
            self.finish(cols, &basis_next, found);
            return;
        }
        if j == n {
            return;
        }
        for c in &cands {
            cols.push(c.clone());
            if minors_gcd(cols) == 1 {
                self.extend(cols, &cands, &basis_next, found);
            }
            cols.pop();
        }
    }

    /// Solves for the last column given the first `n-1`.
    fn finish(&self, cols: &[Vec<i64>], basis: &[Vec<f64>], found: &mut Found) {
        let n = self.partition.n();
        let Some(x0) = solve_last_column(cols) else {
            return;
        };
        let last_block = self.partition.block(self.partition.num_blocks() - 1);
        let mut completions = Vec::new();
        if last_block.len() == 1 {
            completions.push(x0);
        } else {
            // x = x0 + Σ t_j c_j over the other columns of the last block
            let others = &cols[last_block.start..n - 1];
            let proj: Vec<Vec<f64>> = others
                .iter()
                .map(|c| project_out(&to_f64(c), basis))
                .collect();
            let center = project_out(&to_f64(&x0), basis);
            for t in close_vectors(&proj, &center, self.t) {
                let mut x = x0.clone();
                for (tj, c) in t.iter().zip(others) {
                    x.iter_mut().zip(c).for_each(|(a, b)| *a += tj * b);
                }
                completions.push(x);
            }
        }
        for x in completions {
            let mut all = cols.to_vec();
            all.push(x);
            let g = IntegerMatrix::from_columns(&all);
            if g.determinant() != 1 {
                continue;
            }
            let rep = reduced_representative(&g, self.partition);
            let Ok(h) = height_value(&rep.to_f64(), self.partition) else {
                continue;
            };
            if h <= self.r + HEIGHT_TOL {
                let cf = canonical_form(&rep, self.partition);
                found.entry(cf).or_insert_with(|| CosetRecord {
                    invariant_key: invariant_key(&rep, self.partition),
                    representative: rep,
                    height: h,
                });
            }
        }
    }
}

/// Some `x` with `det(cols | x) = 1`, if the columns span a primitive
/// sublattice.
fn solve_last_column(cols: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = cols.len() + 1;
    let cof: Vec<i128> = (0..n)
        .map(|i| {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| cols.iter().map(|c| c[r] as i128).collect())
                .collect();
            let d = bareiss_det(minor).expect("minor overflow");
            if (i + n - 1).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect();
    let mut g = cof[0];
    let mut coeffs = vec![1i128];
    if g < 0 {
        g = -g;
        coeffs[0] = -1;
    }
    for &c in &cof[1..] {
        let (ng, a, b) = ext_gcd(g, c);
        coeffs.iter_mut().for_each(|x| *x *= a);
        coeffs.push(b);
        g = ng;
    }
    if g != 1 {
        return None;
    }
    coeffs.into_iter().map(|x| i64::try_from(x).ok()).collect()
}

/// All integer `t` with `‖center + Σ t_j p_j‖ ≤ radius` (Fincke–Pohst).
fn close_vectors(p: &[Vec<f64>], center: &[f64], radius: f64) -> Vec<Vec<i64>> {
    let m = p.len();
    // Gram-Schmidt: p_j = Σ_{i≤j} rr[i][j] e_i
    let mut e: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rr = vec![vec![0.0; m]; m];
    for j in 0..m {
        let mut w = p[j].clone();
        for i in 0..j {
            rr[i][j] = dot(&e[i], &p[j]);
            w.iter_mut()
                .zip(&e[i])
                .for_each(|(a, b)| *a -= rr[i][j] * b);
        }
        rr[j][j] = dot(&w, &w).sqrt();
        e.push(w.into_iter().map(|x| x / rr[j][j]).collect());
    }
    let y: Vec<f64> = e.iter().map(|ei| dot(ei, center)).collect();
    let perp = dot(center, center) - y.iter().map(|v| v * v).sum::<f64>();
    let budget = radius * radius - perp;
    let mut out = Vec::new();
    if budget < 0.0 {
        return out;
    }
    let mut t = vec![0i64; m];
    fn rec(
        i: usize,
        rem: f64,
        rr: &[Vec<f64>],
        y: &[f64],
        t: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let m = y.len();
        let c: f64 = y[i] + (i + 1..m).map(|j| rr[i][j] * t[j] as f64).sum::<f64>();
        let s = rem.max(0.0).sqrt();
        let lo = ((-c - s) / rr[i][i] - 1e-9).ceil() as i64;
        let hi = ((-c + s) / rr[i][i] + 1e-9).floor() as i64;
        for v in lo..=hi {
            t[i] = v;
            let d = c + rr[i][i] * v as f64;
            let left = rem - d * d;
            if left < -1e-9 * (1.0 + rem.abs()) {
                continue;
            }
            if i == 0 {
                out.push(t.clone());
            } else {
                rec(i - 1, left, rr, y, t, out);
            }
        }
    }
    if m == 0 {
        out.push(Vec::new());
    } else {
        rec(m - 1, budget, &rr, &y, &mut t, &mut out);
    }
    out
}

fn to_f64(v: &[i64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project_out(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut w = v.to_vec();
    for q in basis {
        let c = dot(&w, q);
        w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_column_has_unit_determinant() {
        let cols = vec![vec![2, 3, 1], vec![1, 2, 1]];
        let x = solve_last_column(&cols).unwrap();
        let g = IntegerMatrix::from_columns(&[cols[0].clone(), cols[1].clone(), x]);
        assert_eq!(g.determinant(), 1);
        assert!(solve_last_column(&[vec![2, 0, 0], vec![0, 1, 0]]).is_none());
    }

    #[test]
    fn close_vectors_in_the_plane() {
        let p = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let got = close_vectors(&p, &[0.2, 0.0], 1.0);
        // integer points within distance 1 of (-0.2, 0)
        let mut want = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if (0.2 + a as f64).powi(2) + (b as f64).powi(2) <= 1.0 {
                    want.push(vec![a, b]);
                }
            }
        }
        let mut got = got;
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn sufficient_bound_is_small() {
        assert_eq!(sufficient_entry_bound(2, 0.0), 2);
        assert!(sufficient_entry_bound(3, 2.0) <= default_entry_bound(3, 2.0));
    }
}
