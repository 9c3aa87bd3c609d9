//! Closed-form volumes and the asymptotic counting constant for
//! `Γ = SL_N(Z)`.
//!
//! All volumes are taken with respect to the Riemannian structure induced by
//! the trace form `(X, Y) ↦ Tr(X Yᵀ)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{p_norm, Partition};
use crate::error::{Error, Result};
use crate::special::{gamma, sphere_area, xi, zeta};

/// Largest dimension tabulated by [`VolumeTable::standard`].
pub const TABLE_MAX_N: usize = 64;

/// `Vol(SO_n) = 2^{n(n-1)/4} · Π_{k=2}^{n} 2π^{k/2}/Γ(k/2)`.
pub fn vol_so(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("vol_so needs n >= 1".into()));
    }
    let nf = n as f64;
    let prod: f64 = (2..=n)
        .map(|k| {
            let h = k as f64 / 2.0;
            2.0 * PI.powf(h) / gamma(h)
        })
        .product();
    Ok(2f64.powf(nf * (nf - 1.0) / 4.0) * prod)
}

/// The same volume through `Vol(SO_n) = Vol(SO_{n-1}) · Vol(S^{n-1}) · 2^{(n-1)/2}`.
pub fn vol_so_recursive(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("vol_so needs n >= 1".into()));
    }
    let mut v = 1.0;
    for k in 2..=n {
        v *= sphere_area(k) * 2f64.powf((k as f64 - 1.0) / 2.0);
    }
    Ok(v)
}

/// `Vol(SL_N(R)/SL_N(Z)) = ζ(2)·ζ(3)···ζ(N)`.
pub fn vol_sl_mod(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "vol_sl_mod needs n >= 2, got {n}"
        )));
    }
    (2..=n).try_fold(1.0, |acc, k| Ok(acc * zeta(k as f64)?))
}

/// Memoized `Vol(SO_n)` and `Vol(SL_n(R)/SL_n(Z))`, read-only after
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeTable {
    so: Vec<f64>,
    sl: Vec<f64>,
}

impl VolumeTable {
    /// Table for `n ≤ max_n`.
    pub fn build(max_n: usize) -> Self {
        let mut so = vec![f64::NAN; max_n + 1];
        let mut sl = vec![f64::NAN; max_n + 1];
        for n in 1..=max_n {
            so[n] = vol_so(n).expect("n >= 1");
            if n >= 2 {
                sl[n] = vol_sl_mod(n).expect("n >= 2");
            }
        }
        Self { so, sl }
    }

    /// Shared table, built once on first use.
    pub fn standard() -> &'static VolumeTable {
        static TABLE: OnceLock<VolumeTable> = OnceLock::new();
        TABLE.get_or_init(|| VolumeTable::build(TABLE_MAX_N))
    }

    /// Table from explicit values, indexed by `n` (index 0 unused).
    pub fn from_values(so: Vec<f64>, sl: Vec<f64>) -> Self {
        Self { so, sl }
    }

    pub fn so(&self, n: usize) -> Result<f64> {
        self.so
            .get(n)
            .copied()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("Vol(SO_{n}) not tabulated")))
    }

    pub fn sl_mod(&self, n: usize) -> Result<f64> {
        self.sl
            .get(n)
            .copied()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidArgument(format!("Vol(SL_{n}/SL_{n}(Z)) not tabulated")))
    }

    /// Copy with `Vol(SO_n)` replaced; used for fault injection.
    pub fn with_so(mut self, n: usize, value: f64) -> Self {
        if n >= self.so.len() {
            self.so.resize(n + 1, f64::NAN);
        }
        self.so[n] = value;
        self
    }
}

fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// `|Vol(SO_N)/Vol(SL_N/SL_N(Z))| / (2^{N(N-1)/4}·N!·(N-1)!/(ξ(2)···ξ(N))) - 1|`.
pub fn xi_identity_check(n: usize) -> Result<f64> {
    xi_identity_check_with(VolumeTable::standard(), n)
}

pub fn xi_identity_check_with(table: &VolumeTable, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "xi identity needs n >= 2, got {n}"
        )));
    }
    let lhs = table.so(n)? / table.sl_mod(n)?;
    let nf = n as f64;
    let xi_prod = (2..=n).try_fold(1.0, |acc, k| Ok::<_, Error>(acc * xi(k as f64)?))?;
    let rhs = 2f64.powf(nf * (nf - 1.0) / 4.0) * factorial(n) * factorial(n - 1) / xi_prod;
    Ok((lhs / rhs - 1.0).abs())
}

/// Haar normalization constants attached to a partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarConstants {
    /// `Vol(K) = Vol(SO_N)`.
    #[serde(rename = "volK")]
    pub vol_k: f64,
    /// `Vol(K_{I₀}) = Π_k Vol(SO_{n_k})`.
    #[serde(rename = "volKI0")]
    pub vol_k_blocks: f64,
    /// Langlands constant `(Vol(K)/Vol(K_{I₀}))·2^{Σ_{i<j}|I_i||I_j|/2}`.
    #[serde(rename = "C4")]
    pub c4: f64,
    /// Cartan constant `Vol(K_{I₀})²`.
    #[serde(rename = "C6")]
    pub c6: f64,
    /// `Vol(K)·2^{-Σ_{i<j}|I_i||I_j|/2}`.
    #[serde(rename = "C7")]
    pub c7: f64,
}

pub fn haar_constants(partition: &Partition) -> Result<HaarConstants> {
    haar_constants_with(VolumeTable::standard(), partition)
}

pub fn haar_constants_with(table: &VolumeTable, partition: &Partition) -> Result<HaarConstants> {
    let vol_k = table.so(partition.n())?;
    let vol_k_blocks = partition
        .sizes()
        .iter()
        .try_fold(1.0, |acc, &s| Ok::<_, Error>(acc * table.so(s)?))?;
    let half_cross = partition.cross_pairs() as f64 / 2.0;
    Ok(HaarConstants {
        vol_k,
        vol_k_blocks,
        c4: vol_k / vol_k_blocks * 2f64.powf(half_cross),
        c6: vol_k_blocks * vol_k_blocks,
        c7: vol_k * 2f64.powf(-half_cross),
    })
}

/// `N(R) ~ coefficient · R^{poly_exponent} · e^{exp_rate·R}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingConstant {
    /// `p = (N-2)/2`.
    #[serde(rename = "p")]
    pub poly_exponent: f64,
    /// `q = P_N`.
    #[serde(rename = "q")]
    pub exp_rate: f64,
    #[serde(rename = "c")]
    pub coefficient: f64,
}

impl CountingConstant {
    pub fn asymptotic_count(&self, r: f64) -> f64 {
        asymptotic_count(self, r)
    }
}

/// Everything that goes into the counting coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantComponents {
    #[serde(flatten)]
    pub haar: HaarConstants,
    /// `Vol(SL_N(R)/SL_N(Z))`.
    #[serde(rename = "volSL")]
    pub vol_sl: f64,
    /// Component count `2^{k₀} - 1` used for `|π₀(G_hor)|`.
    pub pi0: u64,
    /// `# K_{I₀} ∩ SL_N(Z) = Π_k n_k!·2^{n_k-1}`.
    #[serde(rename = "stabilizerFinite")]
    pub stabilizer_finite: f64,
    /// `Vol(G_hor/G_hor ∩ Γ) = Vol(K_{I₀}) / Π_k n_k!·2^{n_k-1}`
    /// (the unipotent quotient has volume one).
    #[serde(rename = "volGhor")]
    pub vol_g_hor: f64,
    /// `P_N² = N(N-1)(N+1)/3`.
    #[serde(rename = "pNormSquared")]
    pub p_norm_squared: f64,
}

pub fn components(partition: &Partition) -> Result<ConstantComponents> {
    components_with(VolumeTable::standard(), partition)
}

pub fn components_with(table: &VolumeTable, partition: &Partition) -> Result<ConstantComponents> {
    let haar = haar_constants_with(table, partition)?;
    let n = partition.n();
    let stabilizer_finite: f64 = partition
        .sizes()
        .iter()
        .map(|&s| factorial(s) * 2f64.powi(s as i32 - 1))
        .product();
    let nf = n as f64;
    Ok(ConstantComponents {
        vol_sl: table.sl_mod(n)?,
        pi0: (1u64 << partition.num_blocks()) - 1,
        stabilizer_finite,
        vol_g_hor: haar.vol_k_blocks / stabilizer_finite,
        p_norm_squared: nf * (nf - 1.0) * (nf + 1.0) / 3.0,
        haar,
    })
}

/// Counting constant for `Γ = SL_N(Z)`:
///
/// `c = (1/2)^{N(N-1)/2} · (2π/P_N)^{(N-2)/2} · 1/(2^{k₀}-1)
///      · Π_k Vol(SO_{n_k})/(n_k!·2^{n_k-1}) · Vol(SO_N)/Vol(SL_N(R)/SL_N(Z))`.
pub fn counting_constant(partition: &Partition) -> Result<CountingConstant> {
    counting_constant_with(VolumeTable::standard(), partition)
}

pub fn counting_constant_with(
    table: &VolumeTable,
    partition: &Partition,
) -> Result<CountingConstant> {
    let n = partition.n();
    let nf = n as f64;
    let pn = p_norm(n)?;
    let blocks = partition.sizes().iter().try_fold(1.0, |acc, &s| {
        Ok::<_, Error>(acc * table.so(s)? / (factorial(s) * 2f64.powi(s as i32 - 1)))
    })?;
    let pi0 = ((1u64 << partition.num_blocks()) - 1) as f64;
    let coefficient = 0.5f64.powf(nf * (nf - 1.0) / 2.0) * (2.0 * PI / pn).powf((nf - 2.0) / 2.0)
        / pi0
        * blocks
        * table.so(n)?
        / table.sl_mod(n)?;
    Ok(CountingConstant {
        poly_exponent: (nf - 2.0) / 2.0,
        exp_rate: pn,
        coefficient,
    })
}

/// Counting constant for a general lattice from the volume data
/// `Vol(G_hor/G_hor∩Γ)` and `Vol(K\G/Γ)`:
///
/// `c = (1/2)^{N(N-1)/2} · (2π/P_N)^{(N-2)/2} · (Vol(G_hor/G_hor∩Γ)/(2^{k₀}-1)) / Vol(K\G/Γ)`.
pub fn counting_constant_general(
    partition: &Partition,
    vol_g_hor: f64,
    vol_k_g_gamma: f64,
) -> Result<CountingConstant> {
    if !(vol_g_hor > 0.0 && vol_k_g_gamma > 0.0) {
        return Err(Error::InvalidArgument("volumes must be positive".into()));
    }
    let n = partition.n();
    let nf = n as f64;
    let pn = p_norm(n)?;
    let pi0 = ((1u64 << partition.num_blocks()) - 1) as f64;
    let coefficient = 0.5f64.powf(nf * (nf - 1.0) / 2.0)
        * (2.0 * PI / pn).powf((nf - 2.0) / 2.0)
        * (vol_g_hor / pi0)
        / vol_k_g_gamma;
    Ok(CountingConstant {
        poly_exponent: (nf - 2.0) / 2.0,
        exp_rate: pn,
        coefficient,
    })
}

/// `c·R^p·e^{qR}`.
pub fn asymptotic_count(cc: &CountingConstant, r: f64) -> f64 {
    let poly = if cc.poly_exponent == 0.0 {
        1.0
    } else {
        r.powf(cc.poly_exponent)
    };
    cc.coefficient * poly * (cc.exp_rate * r).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn vol_so_small_cases() {
        assert_eq!(vol_so(1).unwrap(), 1.0);
        assert!(rel(vol_so(2).unwrap(), 2.0 * 2f64.sqrt() * PI) < 1e-14);
        assert!(rel(vol_so(3).unwrap(), 16.0 * 2f64.sqrt() * PI * PI) < 1e-14);
        assert!(vol_so(0).is_err());
    }

    #[test]
    fn vol_so_recursion_agrees() {
        for n in 1..=12 {
            assert!(rel(vol_so(n).unwrap(), vol_so_recursive(n).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn vol_sl_values() {
        assert!(rel(vol_sl_mod(2).unwrap(), PI * PI / 6.0) < 1e-15);
        assert!((vol_sl_mod(3).unwrap() - 1.977_304_350_297_296).abs() < 1e-14);
        assert!((vol_sl_mod(4).unwrap() - 2.140_082_438_444_870_7).abs() < 1e-14);
        assert!(vol_sl_mod(1).is_err());
    }

    #[test]
    fn c7_examples() {
        let v3 = vol_so(3).unwrap();
        let p = Partition::new(3, &[1, 1, 1]).unwrap();
        assert!(rel(haar_constants(&p).unwrap().c7, v3 * 2f64.powf(-1.5)) < 1e-15);
        let p = Partition::new(3, &[2, 1]).unwrap();
        assert!(rel(haar_constants(&p).unwrap().c7, v3 * 0.5) < 1e-15);
        let p = Partition::new(2, &[1, 1]).unwrap();
        assert_eq!(haar_constants(&p).unwrap().c6, 1.0);
    }

    #[test]
    fn n2_constant() {
        let p = Partition::new(2, &[1, 1]).unwrap();
        let cc = counting_constant(&p).unwrap();
        assert_eq!(cc.poly_exponent, 0.0);
        assert!(rel(cc.exp_rate, 2f64.sqrt()) < 1e-15);
        assert!(rel(cc.coefficient, 2.0 * 2f64.sqrt() / PI) < 1e-14);
        let at1 = asymptotic_count(&cc, 1.0);
        assert!(rel(at1, 2.0 * 2f64.sqrt() / PI * 2f64.sqrt().exp()) < 1e-14);
        assert!((at1 - 3.703_226_428_457_666).abs() < 1e-13);
    }

    #[test]
    fn zero_radius_with_positive_exponent() {
        let p = Partition::new(3, &[1, 1, 1]).unwrap();
        let cc = counting_constant(&p).unwrap();
        assert_eq!(asymptotic_count(&cc, 0.0), 0.0);
        let ratio = asymptotic_count(&cc, 3.0) / asymptotic_count(&cc, 2.0);
        assert!(rel(ratio, 1.5f64.sqrt() * cc.exp_rate.exp()) < 1e-13);
    }

    #[test]
    fn xi_identity_small_n() {
        for n in 2..=8 {
            assert!(xi_identity_check(n).unwrap() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn corrupted_table_fails_identity() {
        let bad = VolumeTable::standard()
            .clone()
            .with_so(3, vol_so(3).unwrap() * 1.01);
        assert!(xi_identity_check_with(&bad, 3).unwrap() > 1e-3);
        assert!(xi_identity_check_with(&bad, 2).unwrap() < 1e-10);
    }

    #[test]
    fn general_form_matches_corollary() {
        for sizes in [
            &[1, 1][..],
            &[1, 1, 1],
            &[2, 1],
            &[1, 2],
            &[2, 2],
            &[1, 3],
            &[1, 1, 2],
        ] {
            let n = sizes.iter().sum();
            let p = Partition::new(n, sizes).unwrap();
            let comp = components(&p).unwrap();
            let vol_k_g_gamma = comp.vol_sl / comp.haar.vol_k;
            let general = counting_constant_general(&p, comp.vol_g_hor, vol_k_g_gamma).unwrap();
            let cor = counting_constant(&p).unwrap();
            assert!(
                rel(general.coefficient, cor.coefficient) < 1e-12,
                "{sizes:?}"
            );
        }
    }
}
