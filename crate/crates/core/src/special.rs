//! Gamma, Riemann zeta and the completed zeta function on the real axis.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        let series = LANCZOS_COEF[1..]
            .iter()
            .enumerate()
            .fold(LANCZOS_COEF[0], |acc, (i, c)| {
                acc + c / (x + i as f64 + 1.0)
            });
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
    }
}

/// Bernoulli numbers B₂, B₄, .., B₂₀.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ(s) for real `s > 1`: a direct sum over `n < 16` plus the
/// Euler–Maclaurin tail with ten Bernoulli corrections.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {s}")));
    }
    const CUT: f64 = 16.0;
    let head: f64 = (1..CUT as u32).map(|n| (n as f64).powf(-s)).sum();
    let mut tail = CUT.powf(1.0 - s) / (s - 1.0) + 0.5 * CUT.powf(-s);
    // term_k = B_2k / (2k)! · s(s+1)..(s+2k-2) · CUT^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = CUT.powf(-s - 1.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += b / fact * rising * power;
        let j = 2.0 * (k as f64 + 1.0);
        rising *= (s + j - 1.0) * (s + j);
        fact *= (j + 1.0) * (j + 2.0);
        power /= CUT * CUT;
    }
    Ok(head + tail)
}

/// Completed zeta `ξ(s) = ½·s(s-1)·π^{-s/2}·Γ(s/2)·ζ(s)`, positive for
/// `s > 1`.
pub fn xi(s: f64) -> Result<f64> {
    let z = zeta(s)?;
    Ok(0.5 * s * (s - 1.0) * PI.powf(-s / 2.0) * gamma(s / 2.0) * z)
}

/// Area of the unit sphere `S^{k-1} ⊂ R^k`, `2π^{k/2}/Γ(k/2)`.
pub fn sphere_area(k: usize) -> f64 {
    let h = k as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Γ at half-integers by the recurrence from Γ(1/2) = √π and Γ(1) = 1.
    fn gamma_half_integer(twice: u32) -> f64 {
        let mut g = if twice % 2 == 0 { 1.0 } else { PI.sqrt() };
        let mut x = if twice % 2 == 0 { 1.0 } else { 0.5 };
        while 2.0 * x < twice as f64 {
            g *= x;
            x += 1.0;
        }
        g
    }

    #[test]
    fn gamma_matches_recurrence_on_half_integers() {
        for twice in 1..=40 {
            let exact = gamma_half_integer(twice);
            let approx = gamma(twice as f64 / 2.0);
            assert!(
                ((approx - exact) / exact).abs() < 1e-13,
                "Γ({}/2): {approx} vs {exact}",
                twice
            );
        }
    }

    /// Brute partial sum with an integral tail estimate.
    fn zeta_series(s: f64) -> f64 {
        let n = 200_000u32;
        let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
        let nf = n as f64;
        head + nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
    }

    #[test]
    fn zeta_matches_series() {
        for s in [2.0, 3.0, 4.0, 5.0, 7.5, 12.0] {
            let a = zeta(s).unwrap();
            let b = zeta_series(s);
            assert!((a - b).abs() < 1e-14, "ζ({s}): {a} vs {b}");
        }
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_domain() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
        assert!(xi(1.0).is_err());
    }

    #[test]
    fn xi_values() {
        assert!((xi(2.0).unwrap() - PI / 6.0).abs() < 1e-15);
        let expect3 = 1.5 / PI * zeta_series(3.0);
        assert!((xi(3.0).unwrap() - expect3).abs() < 1e-14);
        assert!((xi(3.0).unwrap() - 0.573_939_894_046_755_5).abs() < 1e-14);
        // ξ(4) = 6·π⁻²·Γ(2)·ζ(4) = π²/15
        assert!((xi(4.0).unwrap() - PI * PI / 15.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }
}
