use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};

/// Tolerance on `Σ yᵢ` accepted by [`CartanVector::new`], relative to the
/// vector's scale.
pub const TRACE_TOL: f64 = 1e-9;

/// A traceless diagonal vector in logarithmic coordinates.
///
/// Norms and inner products are the trace form restricted to the diagonal,
/// which is the Euclidean structure on the entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanVector(Vec<f64>);

impl CartanVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        let scale = entries.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        if sum.abs() > TRACE_TOL * scale {
            return Err(Error::NotTraceless(sum));
        }
        Ok(Self(entries))
    }

    /// Orthogonal projection of an arbitrary vector onto the traceless
    /// hyperplane.
    pub fn project(mut entries: Vec<f64>) -> Self {
        let mean = entries.iter().sum::<f64>() / entries.len() as f64;
        entries.iter_mut().for_each(|x| *x -= mean);
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    /// `λ_I(exp y) = exp(Σ_{i∈I} yᵢ)`.
    pub fn lambda(&self, index_set: &[usize]) -> Result<f64> {
        let mut sum = 0.0;
        for &i in index_set {
            sum += *self.0.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })?;
        }
        Ok(sum.exp())
    }

    /// Diagonal of `exp(y)`.
    pub fn exp_diagonal(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.exp()).collect()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.n(),
            });
        }
        Ok(())
    }
}

impl Add for &CartanVector {
    type Output = CartanVector;

    fn add(self, rhs: Self) -> CartanVector {
        CartanVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CartanVector {
    type Output = CartanVector;

    fn sub(self, rhs: Self) -> CartanVector {
        CartanVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `λ_I(a) = Π_{i∈I} aᵢ` for a positive diagonal matrix given by its
/// diagonal.
pub fn lambda(diagonal: &[f64], index_set: &[usize]) -> Result<f64> {
    index_set.iter().try_fold(1.0, |acc, &i| {
        diagonal
            .get(i)
            .map(|a| acc * a)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                n: diagonal.len(),
            })
    })
}

/// Orthogonal splitting `y = a_M + a_Z` with `a_M` in the block-traceless
/// subspace and `a_Z` constant on blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDiagonalSplit {
    pub a_m: CartanVector,
    pub a_z: CartanVector,
}

impl BlockDiagonalSplit {
    pub fn split(y: &CartanVector, partition: &Partition) -> Result<Self> {
        y.check_dim(partition.n())?;
        let mut a_z = vec![0.0; y.n()];
        for block in partition.blocks() {
            let mean = y.0[block.clone()].iter().sum::<f64>() / block.len() as f64;
            a_z[block].iter_mut().for_each(|x| *x = mean);
        }
        let a_z = CartanVector(a_z);
        let a_m = y - &a_z;
        Ok(Self { a_m, a_z })
    }

    pub fn join(&self) -> CartanVector {
        &self.a_m + &self.a_z
    }
}

/// Haar density factor `ρ(a, b) = α(b) · Π_{i<j, i~j} sinh(aᵢ - aⱼ)`.
///
/// `a` must lie in the closed chamber (entries weakly decreasing inside each
/// block); on a wall the density is zero. Only the block-constant part of `b`
/// enters `α(b) = Π_{i<j, i≁j} exp(bᵢ - bⱼ)`.
pub fn rho_density(partition: &Partition, a: &CartanVector, b: &CartanVector) -> Result<f64> {
    a.check_dim(partition.n())?;
    b.check_dim(partition.n())?;
    let n = partition.n();
    let mut log_alpha = 0.0;
    let mut sinh_prod = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            if partition.same_block(i, j) {
                let d = a.0[i] - a.0[j];
                if d < -1e-12 {
                    return Err(Error::OutsideChamber(format!(
                        "a[{i}] - a[{j}] = {d:e} < 0"
                    )));
                }
                sinh_prod *= d.max(0.0).sinh();
            } else {
                log_alpha += b.0[i] - b.0[j];
            }
        }
    }
    Ok(log_alpha.exp() * sinh_prod)
}

/// `v₀ = diag(N-1, N-3, .., 1-N)`, the sum of the positive roots.
pub fn v0(n: usize) -> Result<CartanVector> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("v0 needs n >= 2, got {n}")));
    }
    Ok(CartanVector(
        (1..=n).map(|i| n as f64 - 2.0 * i as f64 + 1.0).collect(),
    ))
}

/// `P_N² = Σ_{i=1}^{N} (N-2i+1)²`, evaluated as an exact integer sum.
pub fn p_norm_squared(n: u64) -> u64 {
    (1..=n as i64)
        .map(|i| {
            let t = n as i64 - 2 * i + 1;
            (t * t) as u64
        })
        .sum()
}

/// `P_N = ‖v₀‖`, computed from the closed form `N(N-1)(N+1)/3`.
pub fn p_norm(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "p_norm needs n >= 2, got {n}"
        )));
    }
    let n = n as f64;
    Ok((n * (n - 1.0) * (n + 1.0) / 3.0).sqrt())
}

/// A linear constraint `normal · y ≥ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub bound: f64,
}

impl HalfSpace {
    pub fn contains(&self, y: &[f64]) -> bool {
        let lhs: f64 = self.normal.iter().zip(y).map(|(a, b)| a * b).sum();
        lhs >= self.bound
    }
}

/// The shifted cone `𝒞_C`: block-internal gaps at least `max(0, C)` and
/// every proper block prefix sum at least `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub partition: Partition,
    pub offset: f64,
}

impl Cone {
    pub fn new(partition: Partition, offset: f64) -> Self {
        Self { partition, offset }
    }

    /// The positive cone `𝒞₀`.
    pub fn positive(partition: Partition) -> Self {
        Self::new(partition, 0.0)
    }

    /// Defining half-spaces. Block-internal conditions only need consecutive
    /// pairs because the gap bound `max(0, C)` is nonnegative.
    pub fn constraints(&self) -> Vec<HalfSpace> {
        let n = self.partition.n();
        let mut out = chamber_constraints(&self.partition, self.offset.max(0.0));
        for k in 1..self.partition.num_blocks() {
            let len = self.partition.prefix_len(k);
            let mut normal = vec![0.0; n];
            normal[..len].iter_mut().for_each(|x| *x = 1.0);
            out.push(HalfSpace {
                normal,
                bound: self.offset,
            });
        }
        out
    }

    pub fn contains(&self, y: &CartanVector) -> Result<bool> {
        y.check_dim(self.partition.n())?;
        Ok(self.constraints().iter().all(|h| h.contains(&y.0)))
    }
}

/// `yᵢ - yᵢ₊₁ ≥ gap` for consecutive indices inside each block.
pub fn chamber_constraints(partition: &Partition, gap: f64) -> Vec<HalfSpace> {
    let n = partition.n();
    let mut out = Vec::new();
    for block in partition.blocks() {
        for i in block.start..block.end.saturating_sub(1) {
            let mut normal = vec![0.0; n];
            normal[i] = 1.0;
            normal[i + 1] = -1.0;
            out.push(HalfSpace { normal, bound: gap });
        }
    }
    out
}
