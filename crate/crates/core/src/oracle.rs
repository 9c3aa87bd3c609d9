//! Reference computations that share no code with the main paths: closed
//! forms written out by hand, direct sums, brute-force minimization and
//! Jacobi eigenvalues. The cross-checks in [`crate::acceptance`] and the
//! test suites compare against these.

use std::f64::consts::{PI, SQRT_2};

use crate::dynamics::gram_covolume;
use crate::linalg::symmetric_eigenvalues;

/// `ζ(3)`.
pub const APERY: f64 = 1.202_056_903_159_594_2;

/// `ξ(2) = π/6`.
pub fn xi2() -> f64 {
    PI / 6.0
}

/// `ξ(3) = (3/2)·ζ(3)/π`.
pub fn xi3() -> f64 {
    1.5 * APERY / PI
}

/// `π^{1/2}·3·2^{1/4} / (7·ξ(2)·ξ(3))`.
pub fn example1_coefficient() -> f64 {
    PI.sqrt() * 3.0 * 2f64.powf(0.25) / (7.0 * xi2() * xi3())
}

/// `π^{3/2} / (2^{1/4}·ξ(2)·ξ(3))`.
pub fn example2_coefficient() -> f64 {
    PI.powf(1.5) / (2f64.powf(0.25) * xi2() * xi3())
}

/// `Σ_{i=1}^{N} (N - 2i + 1)²`.
pub fn p_norm_squared_sum(n: u64) -> u64 {
    (1..=n as i64)
        .map(|i| {
            let x = n as i64 - 2 * i + 1;
            (x * x) as u64
        })
        .sum()
}

/// Singular values of a square matrix (row-major rows), decreasing, from the
/// eigenvalues of `mᵀm`.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mtm: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| rows[k][i] * rows[k][j]).sum())
                .collect()
        })
        .collect();
    symmetric_eigenvalues(&mtm)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Distance from the base point to `g·K` in `SL_2(R)/SO_2` for the trace
/// form: `√2·|log σ_max(g)|`.
fn point_distance(g: [[f64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = g;
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let smax2 = 0.5 * (s + (s * s - 4.0 * det * det).max(0.0).sqrt());
    SQRT_2 * 0.5 * smax2.ln().abs()
}

/// Height of `g·U·K/K` for `N = 2` by minimizing the distance from the base
/// point over the horocycle points `g·[[1,x],[0,1]]·K`.
pub fn n2_horocycle_distance(g: [[f64; 2]; 2]) -> f64 {
    let f = |x: f64| {
        point_distance([
            [g[0][0], g[0][0] * x + g[0][1]],
            [g[1][0], g[1][0] * x + g[1][1]],
        ])
    };
    // Coarse scan for a bracket, then golden section.
    let scale = 1.0 + g.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    let span = 4.0 * scale * scale;
    let steps = 4000;
    let mut best = 0;
    let xs: Vec<f64> = (0..=steps)
        .map(|i| -span + 2.0 * span * i as f64 / steps as f64)
        .collect();
    for i in 0..xs.len() {
        if f(xs[i]) < f(xs[best]) {
            best = i;
        }
    }
    let mut lo = xs[best.saturating_sub(1)];
    let mut hi = xs[(best + 1).min(steps)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// `μ_A` of `{y = (s, -s) : √2|s| ≤ R, s ≥ s_min}` for `N = 2` with density
/// `e^{2s}` and arc length `√2·ds`.
fn n2_ray_integral(r: f64, s_min: f64) -> f64 {
    let top = r / SQRT_2;
    let bottom = s_min.max(-top);
    if bottom >= top {
        return 0.0;
    }
    (SQRT_2 / 2.0) * ((2.0 * top).exp() - (2.0 * bottom).exp())
}

/// `μ_A(B⁺(R))` for `N = 2`: `(√2/2)(e^{√2R} - 1)`.
pub fn n2_positive_ball(r: f64) -> f64 {
    n2_ray_integral(r, 0.0)
}

/// `μ_A(B(R))` for `N = 2`, the full segment.
pub fn n2_ball(r: f64) -> f64 {
    n2_ray_integral(r, f64::NEG_INFINITY)
}

/// `μ_A(B^{C,+}(R))` for `N = 2`; equal to the cone integral over `𝒞_C`.
pub fn n2_shifted_ball(r: f64, c: f64) -> f64 {
    n2_ray_integral(r, c)
}

/// `μ_A(B⁺(R) ∖ B⁺(εR))` for `N = 2`.
pub fn n2_annulus(r: f64, epsilon: f64) -> f64 {
    n2_ray_integral(r, epsilon * r / SQRT_2)
}

/// Covolume of the lattice spanned by `columns`.
pub fn lattice_covolume(columns: &[Vec<f64>]) -> Option<f64> {
    gram_covolume(columns).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        assert_eq!(p_norm_squared_sum(2), 2);
        assert_eq!(p_norm_squared_sum(3), 8);
        assert_eq!(p_norm_squared_sum(4), 20);
    }

    #[test]
    fn xi_values() {
        assert!((xi3() - 0.573_939_894_046_755_5).abs() < 1e-15);
    }

    #[test]
    fn horocycle_distance_cases() {
        assert!(n2_horocycle_distance([[1.0, 0.0], [0.0, 1.0]]) < 1e-9);
        let t: f64 = 0.8;
        let d = n2_horocycle_distance([[t.exp(), 0.0], [0.0, (-t).exp()]]);
        assert!((d - SQRT_2 * t).abs() < 1e-9);
    }

    #[test]
    fn singular_values_diag() {
        let s = singular_values(&[vec![0.5, 0.0], vec![0.0, 2.0]]);
        assert!((s[0] - 2.0).abs() < 1e-14 && (s[1] - 0.5).abs() < 1e-14);
    }
}
