//! Limits of translated horocyclic measures `⊕aₙᵏ·bₙ·ν_𝔍₀`.
//!
//! Sequences are described symbolically: each block's `aᵏ` is either
//! unbounded or the identity, and each block prefix `I₁ ∪ .. ∪ I_k` has
//! `λ(bₙ)` tending to `+∞`, constantly `1`, or tending to `0`.

use serde::{Deserialize, Serialize};

use crate::algebra::{lambda, Partition};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ABehavior {
    Unbounded,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BBehavior {
    ToInfinity,
    ConstantOne,
    ToZero,
}

/// A clean sequence. `b_prefix[k]` describes the prefix made of the first
/// `k + 1` blocks, so its last entry is the full product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanSequenceSpec {
    pub partition: Partition,
    pub a_blocks: Vec<ABehavior>,
    pub b_prefix: Vec<BBehavior>,
}

impl CleanSequenceSpec {
    pub fn new(
        partition: Partition,
        a_blocks: Vec<ABehavior>,
        b_prefix: Vec<BBehavior>,
    ) -> Result<Self> {
        let spec = Self {
            partition,
            a_blocks,
            b_prefix,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let k0 = self.partition.num_blocks();
        if self.a_blocks.len() != k0 {
            return Err(Error::MalformedSpec(format!(
                "{} a-behaviors for {k0} blocks",
                self.a_blocks.len()
            )));
        }
        if self.b_prefix.len() != k0 {
            return Err(Error::MalformedSpec(format!(
                "{} b-behaviors for {k0} block prefixes",
                self.b_prefix.len()
            )));
        }
        if self.b_prefix[k0 - 1] != BBehavior::ConstantOne {
            return Err(Error::MalformedSpec(
                "the full prefix has λ(b) = det b = 1 and must be constant_one".into(),
            ));
        }
        for (k, a) in self.a_blocks.iter().enumerate() {
            if *a == ABehavior::Unbounded && self.partition.sizes()[k] == 1 {
                return Err(Error::MalformedSpec(format!(
                    "block {k} has size one, so its SL factor is trivial and cannot be unbounded"
                )));
            }
        }
        Ok(())
    }

    /// Every clean sequence description on `partition`.
    pub fn all(partition: &Partition) -> Vec<Self> {
        let k0 = partition.num_blocks();
        let a_choices: Vec<Vec<ABehavior>> = partition
            .sizes()
            .iter()
            .map(|&s| {
                if s == 1 {
                    vec![ABehavior::Identity]
                } else {
                    vec![ABehavior::Unbounded, ABehavior::Identity]
                }
            })
            .collect();
        let b_choice = [
            BBehavior::ToInfinity,
            BBehavior::ConstantOne,
            BBehavior::ToZero,
        ];
        let mut out = Vec::new();
        for a in cartesian(&a_choices) {
            let mut b_choices: Vec<Vec<BBehavior>> = vec![b_choice.to_vec(); k0 - 1];
            b_choices.push(vec![BBehavior::ConstantOne]);
            for b in cartesian(&b_choices) {
                out.push(Self {
                    partition: partition.clone(),
                    a_blocks: a.clone(),
                    b_prefix: b,
                });
            }
        }
        out
    }

    /// `(aₙ, bₙ)` as diagonals: unbounded blocks get `(e^{(s-1)n}, e^{-n}, ..)`,
    /// prefix products are `e^{n}`, `1`, `e^{-n}` and `b` is scalar on blocks.
    pub fn instantiate(&self, n: f64) -> (Vec<f64>, Vec<f64>) {
        let dim = self.partition.n();
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        let mut prev = 0.0;
        for (k, block) in self.partition.blocks().enumerate() {
            let s = block.len() as f64;
            if self.a_blocks[k] == ABehavior::Unbounded {
                for i in block.clone() {
                    a[i] = if i == block.start { (s - 1.0) * n } else { -n };
                }
            }
            let log_prefix = match self.b_prefix[k] {
                BBehavior::ToInfinity => n,
                BBehavior::ConstantOne => 0.0,
                BBehavior::ToZero => -n,
            };
            let beta = (log_prefix - prev) / s;
            block.for_each(|i| b[i] = beta);
            prev = log_prefix;
        }
        (
            a.into_iter().map(f64::exp).collect(),
            b.into_iter().map(f64::exp).collect(),
        )
    }
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![Vec::new()], |acc, c| {
        acc.iter()
            .flat_map(|prefix| {
                c.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockRole {
    /// Compact factor `K_I`.
    K,
    /// Full factor `M_I`.
    M,
}

/// Where a block of `𝔍₁` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockOrigin {
    /// Union of at least two blocks of `𝔍₀`.
    New,
    /// A block of `𝔍₀` with unbounded `a`.
    OldInfinity,
    /// A block of `𝔍₀` with `a ≡ id`.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitClassification {
    pub nondivergent: bool,
    /// `𝔍₁`: consecutive blocks of `𝔍₀` grouped between the prefixes where
    /// `λ(bₙ) ≡ 1`.
    pub coarse_partition: Partition,
    pub block_roles: Vec<BlockRole>,
    pub block_origins: Vec<BlockOrigin>,
    /// Blocks of `𝔍₀` whose prefix has `λ(bₙ) → 0`.
    pub divergent_prefixes: Vec<usize>,
}

impl LimitClassification {
    /// Indices of the `𝔍₁` blocks with the given origin.
    pub fn blocks_with(&self, origin: BlockOrigin) -> Vec<usize> {
        (0..self.block_origins.len())
            .filter(|&j| self.block_origins[j] == origin)
            .collect()
    }
}

pub fn classify_limit(spec: &CleanSequenceSpec) -> Result<LimitClassification> {
    spec.validate()?;
    let p = &spec.partition;
    let divergent_prefixes: Vec<usize> = (0..p.num_blocks())
        .filter(|&k| spec.b_prefix[k] == BBehavior::ToZero)
        .collect();
    let mut sizes = Vec::new();
    let mut roles = Vec::new();
    let mut origins = Vec::new();
    let mut first = 0;
    for k in 0..p.num_blocks() {
        if spec.b_prefix[k] != BBehavior::ConstantOne {
            continue;
        }
        sizes.push((first..=k).map(|j| p.sizes()[j]).sum());
        let origin = if k > first {
            BlockOrigin::New
        } else if spec.a_blocks[k] == ABehavior::Unbounded {
            BlockOrigin::OldInfinity
        } else {
            BlockOrigin::Zero
        };
        roles.push(match origin {
            BlockOrigin::Zero => BlockRole::K,
            _ => BlockRole::M,
        });
        origins.push(origin);
        first = k + 1;
    }
    Ok(LimitClassification {
        nondivergent: divergent_prefixes.is_empty(),
        coarse_partition: Partition::coarse(&sizes),
        block_roles: roles,
        block_origins: origins,
        divergent_prefixes,
    })
}

/// The `k₀ - 1` proper block prefixes `I₁ ∪ .. ∪ I_j`, as index lists.
pub fn stable_subspaces(partition: &Partition) -> Vec<Vec<usize>> {
    (1..partition.num_blocks())
        .map(|j| (0..partition.prefix_len(j)).collect())
        .collect()
}

fn check_diagonals(partition: &Partition, a: &[f64], b: &[f64], prefix: &[usize]) -> Result<()> {
    let n = partition.n();
    for v in [a, b] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidArgument(
                "diagonal entries must be positive".into(),
            ));
        }
    }
    if let Some(&i) = prefix.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// Covolume of `(a·b)·Z^prefix` for a prefix that is a union of blocks:
/// `a` has determinant one on each block, so only `λ_prefix(b)` remains.
pub fn covolume(partition: &Partition, a: &[f64], b: &[f64], prefix: &[usize]) -> Result<f64> {
    check_diagonals(partition, a, b, prefix)?;
    if !stable_subspaces(partition).iter().any(|s| s == prefix) {
        return Err(Error::InvalidArgument(format!(
            "{prefix:?} is not a proper block prefix of {partition}"
        )));
    }
    for block in partition.blocks().filter(|r| r.end <= prefix.len()) {
        let det: f64 = a[block.clone()].iter().product();
        if (det - 1.0).abs() > 1e-9 * det.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "a has determinant {det} on block {block:?}"
            )));
        }
    }
    lambda(b, prefix)
}

/// `√det(MᵀM)` with `M` the images `a·b·e_i`, `i ∈ prefix`.
pub fn covolume_gram(partition: &Partition, a: &[f64], b: &[f64], prefix: &[usize]) -> Result<f64> {
    check_diagonals(partition, a, b, prefix)?;
    let cols: Vec<Vec<f64>> = prefix
        .iter()
        .map(|&i| {
            let mut v = vec![0.0; partition.n()];
            v[i] = a[i] * b[i];
            v
        })
        .collect();
    gram_covolume(&cols)
}

/// `√det(MᵀM)` for the columns of `M`, by Cholesky.
pub fn gram_covolume(cols: &[Vec<f64>]) -> Result<f64> {
    let k = cols.len();
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(x, y)| x * y).sum() };
    let mut l = vec![vec![0.0; k]; k];
    let mut log_det = 0.0;
    for i in 0..k {
        for j in 0..=i {
            let s = dot(&cols[i], &cols[j]) - (0..j).map(|m| l[i][m] * l[j][m]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Singular);
                }
                l[i][i] = s.sqrt();
                log_det += l[i][i].ln();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(log_det.exp())
}

/// Smallest prefix covolume over `n = 1..=steps` of the instantiated
/// sequence. Bounded away from zero exactly for nondivergent specs.
pub fn min_prefix_covolume(spec: &CleanSequenceSpec, steps: u32) -> Result<f64> {
    spec.validate()?;
    let prefixes = stable_subspaces(&spec.partition);
    let mut min = f64::INFINITY;
    for n in 1..=steps {
        let (a, b) = spec.instantiate(n as f64);
        for p in &prefixes {
            min = min.min(covolume(&spec.partition, &a, &b, p)?);
        }
    }
    Ok(min)
}
