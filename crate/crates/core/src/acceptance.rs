//! End-to-end checks with their tolerances and time budgets. Each check
//! returns one [`CriterionResult`]; [`run_all`] runs them in order.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{p_norm_squared, Partition};
use crate::constants::{
    components, counting_constant, counting_constant_general, vol_so, vol_so_recursive,
    xi_identity_check, VolumeTable,
};
use crate::decompose::{block_cartan, frame, height_value, langlands_decompose, Matrix};
use crate::dynamics::{
    classify_limit, covolume, covolume_gram, min_prefix_covolume, stable_subspaces, ABehavior,
    BBehavior, BlockOrigin, BlockRole, CleanSequenceSpec,
};
use crate::enumerate::{
    compare, empirical_ratio, enumerate_bfs, enumerate_brute, summarize_ratios, BfsConfig,
    BruteConfig, EnumerationReport,
};
use crate::error::Result;
use crate::measure::{mu_a_ball, QuadratureMethod, Region};
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Reduced sample sizes and radii, for quick self-tests.
    Quick,
    /// The stated sizes.
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(
    name: &'static str,
    budget_seconds: f64,
    check: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = check();
    let seconds = start.elapsed().as_secs_f64();
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = seconds < budget_seconds;
    CriterionResult {
        name,
        passed: ok && in_time,
        detail: if in_time {
            detail
        } else {
            format!("{detail}; over the {budget_seconds}s budget")
        },
        seconds,
        budget_seconds,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn part(sizes: &[usize]) -> Partition {
    Partition::new(sizes.iter().sum(), sizes).expect("fixed partitions are valid")
}

pub fn run_all(scale: Scale) -> Vec<CriterionResult> {
    vec![
        example1_constant(),
        example2_constant(),
        p_norm_identity(),
        volume_identities(),
        decomposition_suite(scale),
        enumeration_equivalence(scale),
        empirical_ratio_experiment(scale),
        volume_quadrature(scale),
        classifier(scale),
    ]
}

fn example_constant(name: &'static str, sizes: &[usize], expected: f64) -> CriterionResult {
    timed(name, 1.0, || {
        let p = part(sizes);
        let cc = counting_constant(&p)?;
        let comp = components(&p)?;
        let general = counting_constant_general(&p, comp.vol_g_hor, comp.vol_sl / comp.haar.vol_k)?;
        let q2_err = (cc.exp_rate * cc.exp_rate - 8.0).abs();
        let e1 = rel(cc.coefficient, expected);
        let e2 = rel(general.coefficient, expected);
        let ok = cc.poly_exponent == 0.5 && q2_err <= 1e-12 && e1 <= 1e-12 && e2 <= 1e-12;
        Ok((
            ok,
            format!(
                "c = {:.15}, expected {expected:.15}, rel err {e1:.1e} / {e2:.1e}, |q²-8| = {q2_err:.1e}",
                cc.coefficient
            ),
        ))
    })
}

/// Coefficient for `{{1},{2},{3}}` against the hand-written closed form.
pub fn example1_constant() -> CriterionResult {
    example_constant(
        "example-1 constant",
        &[1, 1, 1],
        oracle::example1_coefficient(),
    )
}

/// Coefficient for `{{1,2},{3}}` against the hand-written closed form.
pub fn example2_constant() -> CriterionResult {
    example_constant(
        "example-2 constant",
        &[2, 1],
        oracle::example2_coefficient(),
    )
}

pub fn p_norm_identity() -> CriterionResult {
    timed("P_N identity", 1.0, || {
        let bad: Vec<u64> = (1..=50)
            .filter(|&n| p_norm_squared(n) != oracle::p_norm_squared_sum(n))
            .collect();
        Ok((bad.is_empty(), format!("N = 1..50, mismatches {bad:?}")))
    })
}

pub fn volume_identities() -> CriterionResult {
    timed("Vol(SO_n) and xi identity", 1.0, || {
        let mut worst_rec: f64 = 0.0;
        for n in 1..=12 {
            worst_rec = worst_rec.max(rel(vol_so_recursive(n)?, vol_so(n)?));
        }
        let mut worst_xi: f64 = 0.0;
        for n in 2..=8 {
            worst_xi = worst_xi.max(xi_identity_check(n)?);
        }
        Ok((
            worst_rec <= 1e-12 && worst_xi <= 1e-9,
            format!("recursion {worst_rec:.1e}, xi {worst_xi:.1e}"),
        ))
    })
}

/// Random `g ∈ SL_N(R)` with condition number at most `max_cond`.
pub fn random_sl(n: usize, max_cond: f64, rng: &mut impl Rng) -> Matrix {
    loop {
        let mut g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let det = g.determinant();
        if det.abs() < 1e-3 {
            continue;
        }
        if det < 0.0 {
            g.row_mut(0).neg_mut();
        }
        g /= det.abs().powf(1.0 / n as f64);
        let sv = g.singular_values();
        if sv.max() / sv.min() <= max_cond {
            return g;
        }
    }
}

/// Random element of `SO_n`.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Matrix {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut q = a.qr().q();
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Random element of `K_{I₀}·U_{I₀}`: block rotations times a block
/// unipotent matrix with entries in `[-spread, spread]`.
pub fn random_stabilizer(partition: &Partition, spread: f64, rng: &mut impl Rng) -> Matrix {
    let n = partition.n();
    let mut c = Matrix::identity(n, n);
    for block in partition.blocks() {
        let q = random_orthogonal(block.len(), rng);
        c.view_mut((block.start, block.start), (block.len(), block.len()))
            .copy_from(&q);
    }
    let mut u = Matrix::identity(n, n);
    for i in 0..n {
        for j in partition.block(partition.block_of(i)).end..n {
            u[(i, j)] = spread * (2.0 * rng.random::<f64>() - 1.0);
        }
    }
    c * u
}

/// Random partition of `n` into at least two blocks.
pub fn random_partition(n: usize, rng: &mut impl Rng) -> Partition {
    loop {
        let mut sizes = Vec::new();
        let mut len = 1;
        for _ in 1..n {
            if rng.random_bool(0.5) {
                sizes.push(len);
                len = 1;
            } else {
                len += 1;
            }
        }
        sizes.push(len);
        if sizes.len() >= 2 {
            return Partition::new(n, &sizes).expect("sizes sum to n");
        }
    }
}

pub fn decomposition_suite(scale: Scale) -> CriterionResult {
    timed("decomposition suite", 30.0, || {
        let trials = match scale {
            Scale::Quick => 1_000,
            Scale::Full => 10_000,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut worst_rec: f64 = 0.0;
        let mut worst_right: f64 = 0.0;
        let mut worst_left: f64 = 0.0;
        let mut worst_sv: f64 = 0.0;
        for _ in 0..trials {
            let n = rng.random_range(2..=5);
            let p = random_partition(n, &mut rng);
            let g = random_sl(n, 50.0, &mut rng);
            let f = frame(&g, &p)?;
            worst_rec = worst_rec.max((f.reconstruct() - &g).norm() / g.norm());
            let h = f.height();
            let s = random_stabilizer(&p, 2.0, &mut rng);
            worst_right = worst_right.max((height_value(&(&g * s), &p)? - h).abs());
            let q = random_orthogonal(n, &mut rng);
            worst_left = worst_left.max((height_value(&(q * &g), &p)? - h).abs());

            let m = langlands_decompose(&g, &p)?.m;
            let bc = block_cartan(&m, &p)?;
            for block in p.blocks().filter(|b| b.len() > 1) {
                let rows: Vec<Vec<f64>> = block
                    .clone()
                    .map(|i| block.clone().map(|j| m[(i, j)]).collect())
                    .collect();
                let sv = oracle::singular_values(&rows);
                for (k, i) in block.enumerate() {
                    worst_sv = worst_sv.max(rel(bc.a_m.entries()[i].exp(), sv[k]));
                }
            }
        }
        let hand = height_value(
            &Matrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]),
            &part(&[1, 1]),
        )?;
        let geo = oracle::n2_horocycle_distance([[1.0, 0.0], [1.0, 1.0]]);
        let expected = std::f64::consts::LN_2 / SQRT_2;
        let hand_err = (hand - expected).abs().max((geo - expected).abs());
        let ok = worst_rec <= 1e-9
            && worst_right <= 1e-9
            && worst_left <= 1e-9
            && worst_sv <= 1e-9
            && hand_err <= 1e-9;
        Ok((
            ok,
            format!(
                "{trials} samples: reconstruction {worst_rec:.1e}, right {worst_right:.1e}, left {worst_left:.1e}, \
                 singular values {worst_sv:.1e}; hand case {hand:.12} vs geodesic {geo:.12}"
            ),
        ))
    })
}

/// Compares the two coset sets at every radius of `grid` up to the report
/// radius.
fn nested_agreement(
    bfs: &EnumerationReport,
    brute: &EnumerationReport,
    grid: &[f64],
) -> Result<Option<f64>> {
    compare(bfs, brute)?;
    for &r in grid {
        let cut = |rep: &EnumerationReport| {
            let mut rep = rep.clone();
            rep.cosets
                .retain(|c| c.height <= r + crate::enumerate::HEIGHT_TOL);
            rep.canonical_set()
        };
        if cut(bfs) != cut(brute) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn enumeration_equivalence(scale: Scale) -> CriterionResult {
    timed("enumeration equivalence", 600.0, || {
        let (r2, r3) = match scale {
            Scale::Quick => (3.0, 1.0),
            Scale::Full => (5.0, 2.0),
        };
        let cases = [
            (part(&[1, 1]), r2, BfsConfig::default()),
            (
                part(&[1, 1, 1]),
                r3,
                BfsConfig {
                    margin: 0.5,
                    ..BfsConfig::default()
                },
            ),
            (
                part(&[2, 1]),
                r3,
                BfsConfig {
                    margin: 0.5,
                    ..BfsConfig::default()
                },
            ),
        ];
        let mut ok = true;
        let mut notes = Vec::new();
        for (p, r, cfg) in cases {
            let bfs = enumerate_bfs(&p, r, &cfg)?;
            let brute = enumerate_brute(&p, r, &BruteConfig::default())?;
            let grid: Vec<f64> = (0..=(4.0 * r) as usize).map(|i| i as f64 / 4.0).collect();
            let bad = nested_agreement(&bfs, &brute, &grid)?;
            ok &= bad.is_none() && brute.complete;
            notes.push(match bad {
                None => format!("{p} R<={r}: {} cosets", bfs.count),
                Some(at) => format!("{p}: sets differ at R={at}"),
            });
        }
        Ok((ok, notes.join("; ")))
    })
}

pub fn empirical_ratio_experiment(scale: Scale) -> CriterionResult {
    timed("empirical ratio (N=2)", 600.0, || {
        let radii: &[f64] = match scale {
            Scale::Quick => &[5.0, 6.0, 7.0],
            Scale::Full => &[4.0, 6.0, 8.0],
        };
        let rows = empirical_ratio(&part(&[1, 1]), radii, &BfsConfig::default())?;
        let summary = summarize_ratios(&rows);
        let table: Vec<String> = rows
            .iter()
            .map(|r| format!("R={} {:.6}", r.r, r.ratio.unwrap_or(f64::NAN)))
            .collect();
        let limit = summary.limit_estimate.unwrap_or(f64::NAN);
        Ok((
            summary.cauchy_like,
            format!(
                "{}; limit estimate {limit:.6}{}",
                table.join(", "),
                if summary.flagged {
                    " (FLAG: differs from 1 by >20%)"
                } else {
                    ""
                }
            ),
        ))
    })
}

pub fn volume_quadrature(scale: Scale) -> CriterionResult {
    timed("volume quadrature", 300.0, || {
        let samples = match scale {
            Scale::Quick => 1_000_000,
            Scale::Full => 10_000_000,
        };
        let n2 = part(&[1, 1]);
        let exact = oracle::n2_positive_ball(5.0);
        let mc = mu_a_ball(
            &n2,
            5.0,
            Region::Positive,
            QuadratureMethod::monte_carlo(samples, 1),
        )?;
        let grid = mu_a_ball(&n2, 5.0, Region::Positive, QuadratureMethod::grid(0.01))?;
        let e_mc = rel(mc.estimate, exact);
        let e_grid = rel(grid.estimate, exact);

        let p21 = part(&[2, 1]);
        let mc3 = mu_a_ball(
            &p21,
            6.0,
            Region::Positive,
            QuadratureMethod::monte_carlo(samples, 2),
        )?;
        let grid3 = mu_a_ball(&p21, 6.0, Region::Positive, QuadratureMethod::grid(0.01))?;
        let combined = mc3.standard_error + grid3.standard_error;
        let z = (mc3.estimate - grid3.estimate).abs() / combined;

        let mut worst_ratio = f64::INFINITY;
        for sizes in [&[1, 1][..], &[1, 1, 1], &[2, 1]] {
            let p = part(sizes);
            let m = QuadratureMethod::grid(0.05);
            let shifted = mu_a_ball(&p, 8.0, Region::Shifted { c: -2.0 }, m)?.estimate;
            let positive = mu_a_ball(&p, 8.0, Region::Positive, m)?.estimate;
            worst_ratio = worst_ratio.min(shifted / positive);
        }
        let ok = e_mc <= 1e-3 && e_grid <= 1e-3 && z <= 3.0 && worst_ratio >= 0.95;
        Ok((
            ok,
            format!(
                "N=2 R=5 rel err mc {e_mc:.1e} grid {e_grid:.1e}; [2,1] R=6 mc {:.6e}±{:.1e} grid {:.6e}±{:.1e} ({z:.2} combined errors); \
                 min B^(C,+)/B+ at R=8, C=-2: {worst_ratio:.6}",
                mc3.estimate, mc3.standard_error, grid3.estimate, grid3.standard_error
            ),
        ))
    })
}

/// Blocks of `𝔍₁` as index ranges, straight from the prefix behaviors.
fn coarse_blocks(spec: &CleanSequenceSpec) -> Vec<std::ops::Range<usize>> {
    let p = &spec.partition;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 0..p.num_blocks() {
        if spec.b_prefix[k] == BBehavior::ConstantOne {
            let end = p.block(k).end;
            out.push(start..end);
            start = end;
        }
    }
    out
}

/// Checks `𝔍₁ = 𝔍₁(new) ⊔ 𝔍₁(old,∞) ⊔ 𝔍₁(0)` for one spec, with the three
/// sets built from their definitions.
fn set_identity_holds(spec: &CleanSequenceSpec) -> Result<bool> {
    let c = classify_limit(spec)?;
    let p = &spec.partition;
    let i1 = coarse_blocks(spec);
    let i0: Vec<_> = p.blocks().collect();
    let a_inf: Vec<_> = (0..p.num_blocks())
        .filter(|&k| spec.a_blocks[k] == ABehavior::Unbounded)
        .map(|k| p.block(k))
        .collect();
    let a_one: Vec<_> = (0..p.num_blocks())
        .filter(|&k| spec.a_blocks[k] == ABehavior::Identity)
        .map(|k| p.block(k))
        .collect();
    let new: Vec<_> = i1.iter().filter(|b| !i0.contains(b)).cloned().collect();
    let old_inf: Vec<_> = i1
        .iter()
        .filter(|b| i0.contains(b) && a_inf.contains(b))
        .cloned()
        .collect();
    let zero: Vec<_> = i1
        .iter()
        .filter(|b| i0.contains(b) && a_one.contains(b))
        .cloned()
        .collect();
    let mut union: Vec<_> = new.iter().chain(&old_inf).chain(&zero).cloned().collect();
    let disjoint = union.len() == i1.len();
    union.sort_by_key(|r| r.start);
    let classifier_blocks: Vec<_> = c.coarse_partition.blocks().collect();
    let origins_match = i1.iter().enumerate().all(|(j, b)| {
        let expected = if new.contains(b) {
            BlockOrigin::New
        } else if old_inf.contains(b) {
            BlockOrigin::OldInfinity
        } else {
            BlockOrigin::Zero
        };
        c.block_origins[j] == expected
            && (c.block_roles[j] == BlockRole::K) == (expected == BlockOrigin::Zero)
    });
    Ok(disjoint && union == i1 && classifier_blocks == i1 && origins_match)
}

/// All partitions of `n` into at least two contiguous blocks.
pub fn compositions(n: usize) -> Vec<Partition> {
    (0..1usize << (n - 1))
        .filter(|mask| *mask != 0)
        .map(|mask| {
            let mut sizes = Vec::new();
            let mut len = 1;
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    sizes.push(len);
                    len = 1;
                } else {
                    len += 1;
                }
            }
            sizes.push(len);
            Partition::new(n, &sizes).expect("sizes sum to n")
        })
        .collect()
}

pub fn classifier(scale: Scale) -> CriterionResult {
    use ABehavior::Identity;
    use BBehavior::*;
    timed("classifier", 10.0, || {
        let n2 = part(&[1, 1]);
        let stable = classify_limit(&CleanSequenceSpec::new(
            part(&[2, 1]),
            vec![Identity, Identity],
            vec![ConstantOne, ConstantOne],
        )?)?;
        let expanding = classify_limit(&CleanSequenceSpec::new(
            n2.clone(),
            vec![Identity, Identity],
            vec![ToInfinity, ConstantOne],
        )?)?;
        let contracting = classify_limit(&CleanSequenceSpec::new(
            n2,
            vec![Identity, Identity],
            vec![ToZero, ConstantOne],
        )?)?;
        let examples_ok = stable.nondivergent
            && stable.coarse_partition.sizes() == [2, 1]
            && stable.block_roles.iter().all(|r| *r == BlockRole::K)
            && expanding.nondivergent
            && expanding.coarse_partition.sizes() == [2]
            && expanding.block_roles == [BlockRole::M]
            && !contracting.nondivergent;

        let mut specs = 0;
        let mut nondivergent = 0;
        let mut identity_failures = 0;
        let mut covolume_failures = 0;
        for n in 2..=4 {
            for p in compositions(n) {
                for spec in CleanSequenceSpec::all(&p) {
                    specs += 1;
                    if !set_identity_holds(&spec)? {
                        identity_failures += 1;
                    }
                    let c = classify_limit(&spec)?;
                    nondivergent += c.nondivergent as usize;
                    let bounded = min_prefix_covolume(&spec, 20)? >= 1e-3;
                    if bounded != c.nondivergent {
                        covolume_failures += 1;
                    }
                }
            }
        }

        let trials = match scale {
            Scale::Quick => 200,
            Scale::Full => 1_000,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let n = rng.random_range(2..=6);
            let p = random_partition(n, &mut rng);
            let mut a = vec![0.0; n];
            let mut b = vec![0.0; n];
            for block in p.blocks() {
                let logs: Vec<f64> = block.clone().map(|_| rng.random_range(-2.0..2.0)).collect();
                let mean = logs.iter().sum::<f64>() / logs.len() as f64;
                let beta: f64 = rng.random_range(-2.0..2.0);
                for (i, l) in block.zip(logs) {
                    a[i] = (l - mean).exp();
                    b[i] = beta.exp();
                }
            }
            for prefix in stable_subspaces(&p) {
                let closed = covolume(&p, &a, &b, &prefix)?;
                let gram = covolume_gram(&p, &a, &b, &prefix)?;
                worst = worst.max(rel(closed, gram));
            }
        }
        let ok = examples_ok && identity_failures == 0 && covolume_failures == 0 && worst <= 1e-12;
        Ok((
            ok,
            format!(
                "examples {}; {specs} clean specs for N<=4 ({nondivergent} nondivergent), \
                 set identity failures {identity_failures}, covolume/nondivergence mismatches {covolume_failures}; \
                 {trials} covolume pairs, worst rel diff {worst:.1e}",
                if examples_ok { "ok" } else { "FAILED" }
            ),
        ))
    })
}

/// Counting-constant evaluation against a corrupted volume table; used to
/// confirm that the checks above actually detect a wrong `Vol(SO_n)`.
pub fn corrupted_constant_detected(n: usize) -> Result<bool> {
    let table = VolumeTable::build(8).with_so(n, vol_so(n)? * 1.01);
    let p = part(&[1, 1, 1]);
    let bad = crate::constants::counting_constant_with(&table, &p)?;
    Ok(rel(bad.coefficient, oracle::example1_coefficient()) > 1e-12)
}
