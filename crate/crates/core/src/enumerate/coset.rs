//! Cosets `γ·(G_hor ∩ Γ)` for `Γ = SL_N(Z)`.
//!
//! `G_hor ∩ Γ` consists of the integer matrices that are block upper
//! triangular and whose diagonal blocks are signed permutation matrices.
//! Right multiplication by it replaces the columns of block `k` by a signed
//! permutation of themselves plus integer combinations of the columns of
//! earlier blocks.

use serde::{Deserialize, Serialize};

use super::integer::{gram_det, hermite_rows, reduce_mod_hermite, IntegerMatrix};
use crate::algebra::Partition;
use crate::linalg::symmetric_eigenvalues;

/// One coset with the representative it was found through.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetRecord {
    pub representative: IntegerMatrix,
    #[serde(with = "hex_bytes")]
    pub invariant_key: Vec<u8>,
    pub height: f64,
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        s.serialize_str(&hex)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Whether `delta` lies in `G_hor ∩ SL_N(Z)`: block upper triangular with
/// signed permutation diagonal blocks. The determinant is assumed to be one.
pub fn stabilizer_membership(delta: &IntegerMatrix, partition: &Partition) -> bool {
    let n = partition.n();
    if delta.n() != n {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let (bi, bj) = (partition.block_of(i), partition.block_of(j));
            if bi > bj && delta.get(i, j) != 0 {
                return false;
            }
        }
    }
    for block in partition.blocks() {
        for i in block.clone() {
            let row_ok = block.clone().filter(|&j| delta.get(i, j) != 0).count() == 1
                && block.clone().all(|j| delta.get(i, j).abs() <= 1);
            let col_ok = block.clone().filter(|&j| delta.get(j, i) != 0).count() == 1;
            if !row_ok || !col_ok {
                return false;
            }
        }
    }
    true
}

/// `g₁·(G_hor∩Γ) = g₂·(G_hor∩Γ)`, decided exactly through `g₁⁻¹·g₂`.
pub fn same_coset(g1: &IntegerMatrix, g2: &IntegerMatrix, partition: &Partition) -> bool {
    match g1.inverse().and_then(|inv| inv.checked_mul(g2)) {
        Ok(delta) => stabilizer_membership(&delta, partition),
        Err(_) => false,
    }
}

/// Serialized Hermite forms of the sublattices spanned by the first
/// `|I₁ ∪ .. ∪ I_k|` columns, `k = 1, .., k₀-1`. Constant on cosets.
pub fn invariant_key(g: &IntegerMatrix, partition: &Partition) -> Vec<u8> {
    let cols = g.columns();
    let mut key = Vec::new();
    for k in 1..partition.num_blocks() {
        let p = partition.prefix_len(k);
        for row in hermite_rows(&cols[..p]) {
            for x in row {
                key.extend_from_slice(&x.to_le_bytes());
            }
        }
        key.push(0xff);
    }
    key
}

/// A complete invariant of the coset: for each block, the columns reduced
/// modulo the lattice of earlier columns, with the sign giving the smaller
/// reduction, sorted. Stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm(pub Vec<i64>);

pub fn canonical_form(g: &IntegerMatrix, partition: &Partition) -> CanonicalForm {
    let n = g.n();
    let cols = g.columns();
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(n);
    for block in partition.blocks() {
        let hnf = if block.start == 0 {
            Vec::new()
        } else {
            hermite_rows(&cols[..block.start])
        };
        let mut reduced: Vec<Vec<i64>> = block
            .map(|j| {
                let plus = reduce_mod_hermite(&cols[j], &hnf);
                let neg: Vec<i64> = cols[j].iter().map(|x| -x).collect();
                let minus = reduce_mod_hermite(&neg, &hnf);
                plus.min(minus)
            })
            .collect();
        reduced.sort();
        out.extend(reduced);
    }
    CanonicalForm(IntegerMatrix::from_columns(&out).data().to_vec())
}

/// Deterministic representative with small entries: the canonical form, with
/// the last column negated if needed to restore determinant one.
pub fn reduced_representative(g: &IntegerMatrix, partition: &Partition) -> IntegerMatrix {
    let n = g.n();
    let cf = canonical_form(g, partition);
    let mut m = IntegerMatrix::from_raw(n, cf.0);
    if m.determinant() < 0 {
        let mut data = m.data().to_vec();
        for i in 0..n {
            data[i * n + n - 1] = -data[i * n + n - 1];
        }
        m = IntegerMatrix::from_raw(n, data);
    }
    m
}

/// Height of `γ·U·K/K` read off the Gram data of the columns of `γ`.
///
/// For block `k`, the singular values of the columns of `I_k` projected away
/// from the span of earlier columns are `exp` of the entries of `a_M + b` on
/// that block, so the height is `√(Σ_i (log σ_i)²)`. Block determinants come
/// from exact Gram determinants, which keeps the smallest singular value
/// accurate when entries are large.
pub fn coset_height(g: &IntegerMatrix, partition: &Partition) -> f64 {
    let n = g.n();
    let cols_i = g.columns();
    let cols: Vec<Vec<f64>> = cols_i
        .iter()
        .map(|c| c.iter().map(|&x| x as f64).collect())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut ln_prev = 0.0;
    let mut sq = 0.0;
    for block in partition.blocks() {
        let proj: Vec<Vec<f64>> = block
            .clone()
            .map(|j| project_out(&cols[j], &basis))
            .collect();
        let ln_d = if block.end == n {
            0.0
        } else {
            ln_gram_det(&cols_i[..block.end], &cols[..block.end])
        };
        let ln_block = ln_d - ln_prev;
        ln_prev = ln_d;
        match proj.len() {
            1 => {
                let l = 0.5 * ln_block;
                sq += l * l;
            }
            2 => {
                let a = dot(&proj[0], &proj[0]);
                let c = dot(&proj[1], &proj[1]);
                let b = dot(&proj[0], &proj[1]);
                let half = 0.5 * (a + c);
                let lmax = half + (0.25 * (a - c) * (a - c) + b * b).sqrt();
                let l1 = 0.5 * lmax.ln();
                let l2 = 0.5 * (ln_block - lmax.ln());
                sq += l1 * l1 + l2 * l2;
            }
            _ => {
                let gram: Vec<Vec<f64>> = proj
                    .iter()
                    .map(|u| proj.iter().map(|v| dot(u, v)).collect())
                    .collect();
                for ev in symmetric_eigenvalues(&gram) {
                    let l = 0.5 * ev.ln();
                    sq += l * l;
                }
            }
        }
        for v in proj {
            let mut w = v;
            for _ in 0..2 {
                w = project_out(&w, &basis);
            }
            let nrm = dot(&w, &w).sqrt();
            basis.push(w.into_iter().map(|x| x / nrm).collect());
        }
    }
    sq.sqrt()
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

fn ln_gram_det(cols: &[Vec<i64>], cols_f: &[Vec<f64>]) -> f64 {
    match gram_det(cols) {
        Some(d) => (d as f64).ln(),
        None => {
            // Fall back to Gram-Schmidt in floating point.
            let mut basis: Vec<Vec<f64>> = Vec::new();
            let mut acc = 0.0;
            for c in cols_f {
                let w = project_out(&project_out(c, &basis), &basis);
                let nrm2 = dot(&w, &w);
                acc += nrm2.ln();
                basis.push(w.iter().map(|x| x / nrm2.sqrt()).collect());
            }
            acc
        }
    }
}
