//! Quadrature for the `A`-part measure
//!
//! `μ_A = e^{⟨v₀, y⟩} · Π_{i<j, i~j} ½(1 - e^{-2(yᵢ-yⱼ)}) dy`
//!
//! on the traceless diagonal space (trace-form Lebesgue measure), over height
//! balls cut out by the chamber and cone conditions, and of the pure
//! exponential `e^{⟨v₀, y⟩}` over the cones `𝒞_C`.
//!
//! Points are written `y = t·v̂ + W·w` with `v̂ = v₀/P_N` and `W` an
//! orthonormal basis of the rest of the traceless space. Every constraint
//! normal has positive `v̂` component, so for fixed `w` each region is an
//! interval (or, for annuli, two intervals) in `t`.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{chamber_constraints, p_norm, v0, Cone, HalfSpace, Partition};
use crate::error::{Error, Result};

/// Integration region inside `{‖y‖ ≤ R}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    /// `B_𝔞(R)`: closed chamber, any block prefix sums.
    Ball,
    /// `B⁺_𝔞(R) = B_𝔞(R) ∩ 𝒞₀`.
    Positive,
    /// `B^{C,+}_𝔞(R) = B_𝔞(R) ∩ 𝒞_C`.
    Shifted { c: f64 },
    /// `B⁺_𝔞(R, ε) = B⁺_𝔞(R) ∖ B⁺_𝔞(εR)`.
    Annulus { epsilon: f64 },
    /// `{‖y‖ ≤ R} ∩ 𝒞_C`, with the cone's own block-internal gap `max(0, C)`.
    Cone { c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrand {
    /// Density of `μ_A`.
    Haar,
    /// `e^{⟨v₀, y⟩}`.
    ConeExponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum QuadratureMethod {
    /// Gaussian proposal in `w` with variance `R/P_N`, exact exponential
    /// tilting in `t`.
    MonteCarlo { samples: u64, seed: u64 },
    /// Trapezoid rule in `w` with step `step`, Simpson in `t`, halved until
    /// two successive estimates differ by less than `rel_tol`.
    Grid {
        step: f64,
        rel_tol: f64,
        max_refinements: u32,
    },
    /// Uniform sampling of the box `[-R, R]^{N-1}` with rejection.
    Rejection { samples: u64, seed: u64 },
}

impl QuadratureMethod {
    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self::MonteCarlo { samples, seed }
    }

    pub fn grid(step: f64) -> Self {
        Self::Grid {
            step,
            rel_tol: 1e-3,
            max_refinements: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub estimate: f64,
    /// Standard error for sampling methods, last refinement change for the
    /// grid.
    pub standard_error: f64,
    pub samples: Option<u64>,
    pub grid_step: Option<f64>,
    pub refinements: Option<u32>,
    pub seed: Option<u64>,
    pub partition: Partition,
    pub radius: f64,
    pub region: Region,
    pub integrand: Integrand,
    pub seconds: f64,
}

/// `μ_A` of a height-ball region.
pub fn mu_a_ball(
    partition: &Partition,
    r: f64,
    region: Region,
    method: QuadratureMethod,
) -> Result<QuadratureResult> {
    integrate(partition, r, region, Integrand::Haar, method)
}

/// `∫_{‖y‖≤R, y∈𝒞_C} e^{⟨v₀, y⟩} dy`.
pub fn cone_integral(
    partition: &Partition,
    c: f64,
    r: f64,
    method: QuadratureMethod,
) -> Result<QuadratureResult> {
    integrate(
        partition,
        r,
        Region::Cone { c },
        Integrand::ConeExponential,
        method,
    )
}

pub fn integrate(
    partition: &Partition,
    r: f64,
    region: Region,
    integrand: Integrand,
    method: QuadratureMethod,
) -> Result<QuadratureResult> {
    let start = Instant::now();
    let setup = Setup::new(partition, r, region, integrand)?;
    let (estimate, standard_error, samples, grid_step, refinements, seed) = match method {
        QuadratureMethod::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument("need at least two samples".into()));
            }
            let (e, s) = setup.monte_carlo(samples, seed);
            (e, s, Some(samples), None, None, Some(seed))
        }
        QuadratureMethod::Grid {
            step,
            rel_tol,
            max_refinements,
        } => {
            if !(step > 0.0) {
                return Err(Error::InvalidArgument("grid step must be positive".into()));
            }
            let (e, d, h, k) = setup.grid(step, rel_tol, max_refinements);
            (e, d, None, Some(h), Some(k), None)
        }
        QuadratureMethod::Rejection { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument("need at least two samples".into()));
            }
            let (e, s) = setup.rejection(samples, seed);
            (e, s, Some(samples), None, None, Some(seed))
        }
    };
    Ok(QuadratureResult {
        estimate,
        standard_error,
        samples,
        grid_step,
        refinements,
        seed,
        partition: partition.clone(),
        radius: r,
        region,
        integrand,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Geometry of one integration problem.
struct Setup {
    n: usize,
    r: f64,
    p: f64,
    /// `v̂`.
    vhat: Vec<f64>,
    /// Orthonormal basis of `v̂^⊥` inside the traceless space.
    w_basis: Vec<Vec<f64>>,
    /// Constraints as `t ≥ (bound - a·W w) / (a·v̂)`: `(a·v̂, W^T a, bound)`.
    constraints: Vec<(f64, Vec<f64>, f64)>,
    /// `ε·R` for annuli.
    inner: f64,
    /// Intra-block pairs `(i, j)` weighted by `½(1 - e^{-2(yᵢ-yⱼ)})`.
    pairs: Vec<(usize, usize)>,
}

const CHUNK: u64 = 1 << 14;

impl Setup {
    fn new(partition: &Partition, r: f64, region: Region, integrand: Integrand) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {r}"
            )));
        }
        let n = partition.n();
        let p = p_norm(n)?;
        let vhat: Vec<f64> = v0(n)?.entries().iter().map(|x| x / p).collect();
        let w_basis = complement_basis(&vhat);
        let (halfspaces, inner): (Vec<HalfSpace>, f64) = match region {
            Region::Ball => (chamber_constraints(partition, 0.0), 0.0),
            Region::Positive => (Cone::positive(partition.clone()).constraints(), 0.0),
            Region::Shifted { c } => {
                if c > 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "B^(C,+) needs C <= 0, got {c}"
                    )));
                }
                (Cone::new(partition.clone(), c).constraints(), 0.0)
            }
            Region::Annulus { epsilon } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "annulus needs epsilon in (0, 1), got {epsilon}"
                    )));
                }
                (Cone::positive(partition.clone()).constraints(), epsilon * r)
            }
            Region::Cone { c } => (Cone::new(partition.clone(), c).constraints(), 0.0),
        };
        let constraints = halfspaces
            .into_iter()
            .map(|h| {
                let av = dot(&h.normal, &vhat);
                debug_assert!(av > 0.0);
                let aw: Vec<f64> = w_basis.iter().map(|w| dot(&h.normal, w)).collect();
                (av, aw, h.bound)
            })
            .collect();
        let pairs = match integrand {
            Integrand::ConeExponential => Vec::new(),
            Integrand::Haar => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| partition.same_block(i, j))
                .collect(),
        };
        Ok(Self {
            n,
            r,
            p,
            vhat,
            w_basis,
            constraints,
            inner,
            pairs,
        })
    }

    fn dim_w(&self) -> usize {
        self.n - 2
    }

    /// The admissible `t` set for a given `w`, as up to two intervals.
    fn t_intervals(&self, w: &[f64]) -> Vec<(f64, f64)> {
        let w2: f64 = w.iter().map(|x| x * x).sum();
        let rem = self.r * self.r - w2;
        if rem <= 0.0 {
            return Vec::new();
        }
        let hi = rem.sqrt();
        let mut lo = -hi;
        for (av, aw, bound) in &self.constraints {
            lo = lo.max((bound - dot(aw, w)) / av);
        }
        if lo >= hi {
            return Vec::new();
        }
        let cut = self.inner * self.inner - w2;
        if cut > 0.0 {
            let s = cut.sqrt();
            let mut out = Vec::new();
            if lo < -s {
                out.push((lo, -s));
            }
            if hi > s {
                out.push((lo.max(s), hi));
            }
            out
        } else {
            vec![(lo, hi)]
        }
    }

    fn point(&self, t: f64, w: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.vhat.iter().map(|v| t * v).collect();
        for (c, b) in w.iter().zip(&self.w_basis) {
            y.iter_mut().zip(b).for_each(|(a, x)| *a += c * x);
        }
        y
    }

    /// Intra-block factor `Π ½(1 - e^{-2(yᵢ-yⱼ)})`.
    fn pair_factor(&self, y: &[f64]) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j)| 0.5 * (-(-2.0 * (y[i] - y[j])).exp_m1()))
            .product()
    }

    fn density(&self, t: f64, w: &[f64]) -> f64 {
        let y = self.point(t, w);
        (self.p * t).exp() * self.pair_factor(&y)
    }

    /// `∫ e^{P t} dt` over the intervals.
    fn tilt_mass(&self, intervals: &[(f64, f64)]) -> f64 {
        intervals
            .iter()
            .map(|&(a, b)| ((self.p * b).exp() - (self.p * a).exp()) / self.p)
            .sum()
    }

    /// Draws `t` from the density `∝ e^{P t}` on the intervals.
    fn sample_t(&self, intervals: &[(f64, f64)], mass: f64, rng: &mut ChaCha8Rng) -> f64 {
        let mut u: f64 = rng.random::<f64>() * mass;
        for &(a, b) in intervals {
            let m = ((self.p * b).exp() - (self.p * a).exp()) / self.p;
            if u <= m || (a, b) == *intervals.last().unwrap() {
                // invert e^{P t} = e^{P a} + P u
                let t = a + (1.0 + self.p * u * (-self.p * a).exp()).ln() / self.p;
                return t.clamp(a, b);
            }
            u -= m;
        }
        unreachable!("intervals are nonempty")
    }

    fn monte_carlo(&self, samples: u64, seed: u64) -> (f64, f64) {
        let d = self.dim_w();
        let sigma = (self.r / self.p).max(1e-6).sqrt();
        let log_norm = -(d as f64) * (sigma.ln() + 0.5 * (2.0 * PI).ln());
        let chunks = samples.div_ceil(CHUNK);
        let sums: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k);
                let m = CHUNK.min(samples - k * CHUNK);
                let vals: Vec<f64> = (0..m)
                    .map(|_| {
                        let w: Vec<f64> = (0..d)
                            .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
                            .collect();
                        let iv = self.t_intervals(&w);
                        if iv.is_empty() {
                            return 0.0;
                        }
                        let mass = self.tilt_mass(&iv);
                        let factor = if self.pairs.is_empty() {
                            1.0
                        } else {
                            let t = self.sample_t(&iv, mass, &mut rng);
                            self.pair_factor(&self.point(t, &w))
                        };
                        let w2: f64 = w.iter().map(|x| x * x).sum();
                        let log_phi = log_norm - w2 / (2.0 * sigma * sigma);
                        mass * factor * (-log_phi).exp()
                    })
                    .collect();
                let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
                (pairwise_sum(&vals), pairwise_sum(&sq))
            })
            .collect();
        let s: Vec<f64> = sums.iter().map(|x| x.0).collect();
        let s2: Vec<f64> = sums.iter().map(|x| x.1).collect();
        let nf = samples as f64;
        let mean = pairwise_sum(&s) / nf;
        let var = (pairwise_sum(&s2) / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (mean, (var / nf).sqrt())
    }

    fn rejection(&self, samples: u64, seed: u64) -> (f64, f64) {
        let dim = self.n - 1;
        let vol = (2.0 * self.r).powi(dim as i32);
        let chunks = samples.div_ceil(CHUNK);
        let sums: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k);
                let m = CHUNK.min(samples - k * CHUNK);
                let vals: Vec<f64> = (0..m)
                    .map(|_| {
                        let x: Vec<f64> = (0..dim)
                            .map(|_| self.r * (2.0 * rng.random::<f64>() - 1.0))
                            .collect();
                        let (t, w) = (x[0], &x[1..]);
                        let inside = self.t_intervals(w).iter().any(|&(a, b)| a <= t && t <= b);
                        if inside {
                            vol * self.density(t, w)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
                (pairwise_sum(&vals), pairwise_sum(&sq))
            })
            .collect();
        let s: Vec<f64> = sums.iter().map(|x| x.0).collect();
        let s2: Vec<f64> = sums.iter().map(|x| x.1).collect();
        let nf = samples as f64;
        let mean = pairwise_sum(&s) / nf;
        let var = (pairwise_sum(&s2) / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (mean, (var / nf).sqrt())
    }

    /// Simpson's rule in `t` on each interval.
    fn t_integral(&self, w: &[f64], intervals: &[(f64, f64)], panels: usize) -> f64 {
        intervals
            .iter()
            .map(|&(a, b)| {
                let m = panels.max(2) & !1;
                let h = (b - a) / m as f64;
                let vals: Vec<f64> = (0..=m)
                    .map(|i| {
                        let wgt = if i == 0 || i == m {
                            1.0
                        } else if i % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        wgt * self.density(a + i as f64 * h, w)
                    })
                    .collect();
                pairwise_sum(&vals) * h / 3.0
            })
            .sum()
    }

    /// Trapezoid rule over the `w` grid of the given step.
    fn grid_once(&self, step: f64, panels: usize) -> f64 {
        let d = self.dim_w();
        let k = (self.r / step).ceil() as i64;
        let h = self.r / k as f64;
        let side: Vec<f64> = (-k..=k).map(|i| i as f64 * h).collect();
        let count = side.len().pow(d as u32);
        let vals: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|mut idx| {
                let mut w = Vec::with_capacity(d);
                let mut weight = 1.0;
                for _ in 0..d {
                    let i = idx % side.len();
                    idx /= side.len();
                    w.push(side[i]);
                    if i == 0 || i == side.len() - 1 {
                        weight *= 0.5;
                    }
                }
                let iv = self.t_intervals(&w);
                if iv.is_empty() {
                    0.0
                } else {
                    weight * self.t_integral(&w, &iv, panels)
                }
            })
            .collect();
        pairwise_sum(&vals) * h.powi(d as i32)
    }

    fn grid(&self, step: f64, rel_tol: f64, max_refinements: u32) -> (f64, f64, f64, u32) {
        // Simpson panels: enough that P·Δt stays below about 0.1.
        let panels_for = |h: f64| -> usize {
            let base = (2.0 * self.r * self.p / 0.1).ceil() as usize;
            let by_step = (2.0 * self.r / h).ceil() as usize;
            base.max(by_step).max(16)
        };
        let mut h = step;
        let mut prev = self.grid_once(h, panels_for(h));
        if self.dim_w() == 0 {
            let finer = self.grid_once(h, 2 * panels_for(h));
            return (finer, (finer - prev).abs(), h, 1);
        }
        let mut k = 0;
        loop {
            k += 1;
            let h2 = h / 2.0;
            let cur = self.grid_once(h2, panels_for(h2));
            let delta = (cur - prev).abs();
            h = h2;
            if delta <= rel_tol * cur.abs() || k >= max_refinements {
                return (cur, delta, h, k);
            }
            prev = cur;
        }
    }
}

/// Orthonormal basis of the traceless vectors orthogonal to `vhat`.
fn complement_basis(vhat: &[f64]) -> Vec<Vec<f64>> {
    let n = vhat.len();
    let ones: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    let mut basis: Vec<Vec<f64>> = vec![ones, vhat.to_vec()];
    let mut out = Vec::new();
    for i in 0..n {
        if out.len() == n - 2 {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&e, b);
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nrm = dot(&e, &e).sqrt();
        if nrm > 1e-8 {
            let u: Vec<f64> = e.into_iter().map(|x| x / nrm).collect();
            basis.push(u.clone());
            out.push(u);
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Recursive pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// `(1/2)^{Σ|I_k|(|I_k|-1)/2} · (2πR/P_N)^{(N-2)/2} · e^{P_N R}`.
pub fn laplace_closed_form(partition: &Partition, r: f64) -> Result<f64> {
    let n = partition.n() as f64;
    let p = p_norm(partition.n())?;
    let poly = if partition.n() == 2 {
        1.0
    } else {
        (2.0 * PI * r / p).powf((n - 2.0) / 2.0)
    };
    Ok(0.5f64.powi(partition.intra_pairs() as i32) * poly * (p * r).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub mu: f64,
    pub mu_error: f64,
    pub closed_form: f64,
    pub ratio: f64,
    pub ratio_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymReport {
    pub rows: Vec<AsymRow>,
    /// Least-squares fit `log(ratio) ≈ α + β/R`.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// `e^α`.
    pub extrapolated: Option<f64>,
}

/// `μ_A(B⁺(R))` against the Laplace closed form at each radius.
pub fn asym_ratio_report(
    partition: &Partition,
    radii: &[f64],
    method: QuadratureMethod,
) -> Result<AsymReport> {
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must increase".into()));
    }
    let rows = radii
        .iter()
        .map(|&r| {
            let q = mu_a_ball(partition, r, Region::Positive, method)?;
            let cf = laplace_closed_form(partition, r)?;
            Ok(AsymRow {
                r,
                mu: q.estimate,
                mu_error: q.standard_error,
                closed_form: cf,
                ratio: q.estimate / cf,
                ratio_error: q.standard_error / cf,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (alpha, beta) = if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| 1.0 / r.r).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
        let m = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / m;
        let my = ys.iter().sum::<f64>() / m;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let beta = sxy / sxx;
        (Some(my - beta * mx), Some(beta))
    } else {
        (None, None)
    };
    Ok(AsymReport {
        rows,
        alpha,
        beta,
        extrapolated: alpha.map(f64::exp),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellRounded {
    /// `μ_A(B_𝔞(R+δ)) / μ_A(B_𝔞(R))`.
    pub upper: f64,
    /// `μ_A(B_𝔞(R-δ)) / μ_A(B_𝔞(R))`.
    pub lower: f64,
}

/// Volume ratios of the height balls `R ± δ` against `R`.
pub fn well_rounded_margin(
    partition: &Partition,
    r: f64,
    delta: f64,
    method: QuadratureMethod,
) -> Result<WellRounded> {
    if !(delta > 0.0 && delta < r) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < delta < R, got delta = {delta}, R = {r}"
        )));
    }
    let at = |rad: f64| mu_a_ball(partition, rad, Region::Ball, method).map(|q| q.estimate);
    let mid = at(r)?;
    Ok(WellRounded {
        upper: at(r + delta)? / mid,
        lower: at(r - delta)? / mid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(n: usize, sizes: &[usize]) -> Partition {
        Partition::new(n, sizes).unwrap()
    }

    #[test]
    fn complement_is_orthonormal_and_traceless() {
        for n in 2..=5 {
            let p = p_norm(n).unwrap();
            let vhat: Vec<f64> = v0(n).unwrap().entries().iter().map(|x| x / p).collect();
            let b = complement_basis(&vhat);
            assert_eq!(b.len(), n - 2);
            for (i, u) in b.iter().enumerate() {
                assert!(u.iter().sum::<f64>().abs() < 1e-12);
                assert!(dot(u, &vhat).abs() < 1e-12);
                for (j, v) in b.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(u, v) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampled_t_stays_in_intervals() {
        let s = Setup::new(
            &part(3, &[1, 1, 1]),
            3.0,
            Region::Annulus { epsilon: 0.5 },
            Integrand::Haar,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let iv = s.t_intervals(&[0.3]);
        assert!(!iv.is_empty());
        let mass = s.tilt_mass(&iv);
        for _ in 0..1000 {
            let t = s.sample_t(&iv, mass, &mut rng);
            assert!(iv.iter().any(|&(a, b)| a <= t && t <= b));
        }
    }

    #[test]
    fn pairwise_sum_matches() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn n2_positive_ball_exact() {
        let p = part(2, &[1, 1]);
        let r = 5.0;
        let want = 0.5 * 2f64.sqrt() * ((2f64.sqrt() * r).exp() - 1.0);
        let g = mu_a_ball(&p, r, Region::Positive, QuadratureMethod::grid(0.1)).unwrap();
        assert!(((g.estimate - want) / want).abs() < 1e-6);
        let m = mu_a_ball(
            &p,
            r,
            Region::Positive,
            QuadratureMethod::monte_carlo(100, 1),
        )
        .unwrap();
        assert!(((m.estimate - want) / want).abs() < 1e-12);
    }
}
