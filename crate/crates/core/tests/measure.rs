use horocount::algebra::p_norm;
use horocount::measure::*;
use horocount::{oracle, Partition};

fn part(sizes: &[usize]) -> Partition {
    Partition::new(sizes.iter().sum(), sizes).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn mc(samples: u64, seed: u64) -> QuadratureMethod {
    QuadratureMethod::monte_carlo(samples, seed)
}

#[test]
fn n2_regions_against_analytic_integrals() {
    let p = part(&[1, 1]);
    let grid = QuadratureMethod::grid(0.01);
    let cases = [
        (Region::Ball, oracle::n2_ball(5.0)),
        (Region::Positive, oracle::n2_positive_ball(5.0)),
        (
            Region::Shifted { c: -1.0 },
            oracle::n2_shifted_ball(5.0, -1.0),
        ),
        (
            Region::Annulus { epsilon: 0.3 },
            oracle::n2_annulus(5.0, 0.3),
        ),
    ];
    for (region, exact) in cases {
        for method in [grid, mc(1000, 3)] {
            let q = mu_a_ball(&p, 5.0, region, method).unwrap();
            assert!(
                rel(q.estimate, exact) < 1e-3,
                "{region:?} {method:?}: {} vs {exact}",
                q.estimate
            );
        }
    }
    let c0 = cone_integral(&p, 0.0, 5.0, grid).unwrap();
    assert!(rel(c0.estimate, oracle::n2_positive_ball(5.0)) < 1e-6);
}

#[test]
fn shrinking_region_vanishes() {
    let p = part(&[1, 1]);
    let small: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&r| {
            mu_a_ball(&p, r, Region::Positive, QuadratureMethod::grid(r / 10.0))
                .unwrap()
                .estimate
        })
        .collect();
    assert!(small.windows(2).all(|w| w[1] < w[0]));
    assert!(small[2] < 2e-3);
}

#[test]
fn n2_cone_offsets_converge() {
    let p = part(&[1, 1]);
    let ratios: Vec<f64> = [4.0, 6.0, 8.0]
        .iter()
        .map(|&r| {
            let a = cone_integral(&p, -1.0, r, QuadratureMethod::grid(0.1))
                .unwrap()
                .estimate;
            let b = cone_integral(&p, 0.0, r, QuadratureMethod::grid(0.1))
                .unwrap()
                .estimate;
            a / b
        })
        .collect();
    assert!(ratios.windows(2).all(|w| (w[1] - 1.0) < (w[0] - 1.0)));
    assert!(ratios[2] - 1.0 < 1e-4);
}

#[test]
fn small_radius_against_rejection() {
    let rej = |seed| QuadratureMethod::Rejection {
        samples: 4_000_000,
        seed,
    };
    for sizes in [&[1, 1][..], &[1, 1, 1], &[2, 1], &[1, 1, 1, 1]] {
        let p = part(sizes);
        let cone = cone_integral(&p, 0.0, 0.5, mc(200_000, 1))
            .unwrap()
            .estimate;
        let cone_rej = cone_integral(&p, 0.0, 0.5, rej(2)).unwrap().estimate;
        assert!(rel(cone, cone_rej) < 0.01, "{p}: {cone} vs {cone_rej}");
        let mu = mu_a_ball(&p, 0.5, Region::Positive, QuadratureMethod::grid(0.01)).unwrap();
        let mu_rej = mu_a_ball(&p, 0.5, Region::Positive, rej(3)).unwrap();
        assert!(
            (mu.estimate - mu_rej.estimate).abs()
                < 0.01 * mu.estimate + 3.0 * mu_rej.standard_error,
            "{p}: {} vs {}",
            mu.estimate,
            mu_rej.estimate
        );
    }
}

#[test]
fn annulus_and_inner_ball_add_up() {
    for sizes in [&[1, 1, 1][..], &[2, 1]] {
        let p = part(sizes);
        let g = QuadratureMethod::grid(0.02);
        let whole = mu_a_ball(&p, 4.0, Region::Positive, g).unwrap();
        let inner = mu_a_ball(&p, 2.0, Region::Positive, g).unwrap();
        let shell = mu_a_ball(&p, 4.0, Region::Annulus { epsilon: 0.5 }, g).unwrap();
        let err = whole.standard_error + inner.standard_error + shell.standard_error;
        assert!(
            (inner.estimate + shell.estimate - whole.estimate).abs()
                <= 3.0 * err + 1e-9 * whole.estimate
        );
    }
}

#[test]
fn haar_measure_below_pure_exponential() {
    for sizes in [&[2, 1][..], &[1, 2], &[3, 1], &[2, 2]] {
        let p = part(sizes);
        let g = QuadratureMethod::grid(0.05);
        let mu = mu_a_ball(&p, 3.0, Region::Positive, g).unwrap().estimate;
        let cone = cone_integral(&p, 0.0, 3.0, g).unwrap().estimate;
        assert!(mu <= 0.5f64.powi(p.intra_pairs() as i32) * cone);
    }
}

#[test]
fn monte_carlo_agrees_with_grid() {
    for sizes in [&[1, 1, 1][..], &[2, 1]] {
        let p = part(sizes);
        for region in [
            Region::Ball,
            Region::Positive,
            Region::Shifted { c: -1.0 },
            Region::Annulus { epsilon: 0.5 },
        ] {
            let m = mu_a_ball(&p, 4.0, region, mc(400_000, 9)).unwrap();
            let g = mu_a_ball(&p, 4.0, region, QuadratureMethod::grid(0.02)).unwrap();
            let z = (m.estimate - g.estimate).abs() / (m.standard_error + g.standard_error);
            assert!(z <= 3.0, "{p} {region:?}: z = {z}");
        }
    }
}

#[test]
fn seeds_reproduce_and_differ_consistently() {
    let p = part(&[1, 1, 1]);
    let a = mu_a_ball(&p, 5.0, Region::Positive, mc(100_000, 42)).unwrap();
    let b = mu_a_ball(&p, 5.0, Region::Positive, mc(100_000, 42)).unwrap();
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    assert_eq!(a.seed, Some(42));
    let c = mu_a_ball(&p, 5.0, Region::Positive, mc(100_000, 43)).unwrap();
    assert_ne!(a.estimate, c.estimate);
    assert!((a.estimate - c.estimate).abs() <= 3.0 * (a.standard_error + c.standard_error));
}

#[test]
fn n2_asymptotic_ratio_tends_to_half_root_two() {
    let rep = asym_ratio_report(
        &part(&[1, 1]),
        &[4.0, 6.0, 8.0],
        QuadratureMethod::grid(0.1),
    )
    .unwrap();
    assert!(rel(rep.extrapolated.unwrap(), std::f64::consts::FRAC_1_SQRT_2) < 0.01);
    for row in &rep.rows {
        let exact = oracle::n2_positive_ball(row.r) / (std::f64::consts::SQRT_2 * row.r).exp();
        assert!(rel(row.ratio, exact) < 1e-6);
    }
}

#[test]
fn n3_asymptotic_ratio_table() {
    let rep = asym_ratio_report(&part(&[1, 1, 1]), &[6.0, 8.0, 10.0], mc(200_000, 5)).unwrap();
    assert_eq!(rep.rows.len(), 3);
    for row in &rep.rows {
        assert!(row.ratio > 0.0 && row.ratio_error > 0.0 && row.ratio_error < 0.01 * row.ratio);
    }
    assert!(rep.extrapolated.unwrap().is_finite());
    assert!(asym_ratio_report(&part(&[1, 1]), &[2.0, 1.0], QuadratureMethod::grid(0.1)).is_err());
}

#[test]
fn well_rounded_ratios() {
    let p = part(&[1, 1]);
    let g = QuadratureMethod::grid(0.01);
    let bound = (std::f64::consts::SQRT_2 * 0.01).exp();
    for r in [2.0, 4.0, 8.0] {
        let w = well_rounded_margin(&p, r, 0.01, g).unwrap();
        let exact_upper = oracle::n2_ball(r + 0.01) / oracle::n2_ball(r);
        let exact_lower = oracle::n2_ball(r - 0.01) / oracle::n2_ball(r);
        assert!(rel(w.upper, exact_upper) < 1e-6 && rel(w.lower, exact_lower) < 1e-6);
        assert!(w.upper <= bound + 1e-3 && w.upper > 1.0);
        assert!(w.lower >= 1.0 / bound - 1e-3 && w.lower < 1.0);
    }
    let tiny = well_rounded_margin(&p, 4.0, 1e-6, g).unwrap();
    assert!((tiny.upper - 1.0).abs() < 1e-5 && (tiny.lower - 1.0).abs() < 1e-5);

    let p21 = part(&[2, 1]);
    let pn = p_norm(3).unwrap();
    let w = well_rounded_margin(&p21, 6.0, 0.05, QuadratureMethod::grid(0.02)).unwrap();
    // Volumes grow like R^{1/2}·e^{P_N R}, so the ratios carry the
    // polynomial factor on top of e^{±P_N δ}.
    let upper = (pn * 0.05).exp() * (6.05f64 / 6.0).sqrt();
    let lower = (-pn * 0.05).exp() * (5.95f64 / 6.0).sqrt();
    assert!(rel(w.upper, upper) < 5e-3, "{} vs {upper}", w.upper);
    assert!(rel(w.lower, lower) < 5e-3, "{} vs {lower}", w.lower);
    assert!(w.upper > (pn * 0.05).exp() && w.lower < (-pn * 0.05).exp());
    assert!(well_rounded_margin(&p21, 1.0, 1.5, g).is_err());
}

#[test]
fn argument_checks() {
    let p = part(&[1, 1]);
    assert!(mu_a_ball(&p, -1.0, Region::Positive, mc(10, 1)).is_err());
    assert!(mu_a_ball(&p, 1.0, Region::Shifted { c: 1.0 }, mc(10, 1)).is_err());
    assert!(mu_a_ball(&p, 1.0, Region::Annulus { epsilon: 1.0 }, mc(10, 1)).is_err());
    assert!(mu_a_ball(&p, 1.0, Region::Positive, QuadratureMethod::grid(0.0)).is_err());
}
