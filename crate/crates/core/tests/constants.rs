use std::f64::consts::{PI, SQRT_2};

use horocount::constants::*;
use horocount::special::{xi, zeta};
use horocount::{oracle, Partition};

fn part(sizes: &[usize]) -> Partition {
    Partition::new(sizes.iter().sum(), sizes).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn examples_against_hand_written_closed_forms() {
    let c1 = counting_constant(&part(&[1, 1, 1])).unwrap();
    assert!(rel(c1.coefficient, oracle::example1_coefficient()) < 1e-12);
    assert_eq!(c1.poly_exponent, 0.5);
    assert!((c1.exp_rate.powi(2) - 8.0).abs() < 1e-12);
    let c2 = counting_constant(&part(&[2, 1])).unwrap();
    assert!(rel(c2.coefficient, oracle::example2_coefficient()) < 1e-12);
}

#[test]
fn n2_constant_is_two_root_two_over_pi() {
    let c = counting_constant(&part(&[1, 1])).unwrap();
    assert!(rel(c.coefficient, 2.0 * SQRT_2 / PI) < 1e-13);
    assert_eq!(c.poly_exponent, 0.0);
    assert!(rel(c.exp_rate, SQRT_2) < 1e-15);
    // e-fold growth per unit radius
    assert!(
        rel(
            c.asymptotic_count(3.0) / c.asymptotic_count(2.0),
            SQRT_2.exp()
        ) < 1e-12
    );
}

#[test]
fn xi_against_independent_values() {
    assert!(rel(xi(2.0).unwrap(), oracle::xi2()) < 1e-14);
    assert!(rel(xi(3.0).unwrap(), oracle::xi3()) < 1e-14);
    assert!(rel(zeta(3.0).unwrap(), oracle::APERY) < 1e-15);
    assert!(xi(1.0).is_err());
}

#[test]
fn general_form_reduces_to_corollary() {
    for sizes in [
        &[1, 1][..],
        &[1, 1, 1],
        &[2, 1],
        &[1, 2],
        &[2, 2],
        &[1, 3, 1],
        &[2, 1, 1, 2],
    ] {
        let p = part(sizes);
        let comp = components(&p).unwrap();
        let general =
            counting_constant_general(&p, comp.vol_g_hor, comp.vol_sl / comp.haar.vol_k).unwrap();
        let cor = counting_constant(&p).unwrap();
        assert!(rel(general.coefficient, cor.coefficient) < 1e-12, "{p}");
    }
}

#[test]
fn vol_so_identities() {
    for n in 1..=12 {
        assert!(rel(vol_so_recursive(n).unwrap(), vol_so(n).unwrap()) < 1e-12);
    }
    for n in 2..=8 {
        assert!(xi_identity_check(n).unwrap() <= 1e-9);
    }
    assert!(vol_so(0).is_err());
    assert!(vol_sl_mod(1).is_err());
}

#[test]
fn fault_injection_breaks_the_identity() {
    let bad = VolumeTable::build(8).with_so(4, vol_so(4).unwrap() * 1.001);
    assert!(xi_identity_check_with(&bad, 4).unwrap() > 1e-4);
    assert!(xi_identity_check_with(&bad, 3).unwrap() < 1e-9);
}

#[test]
fn components_serialize_with_short_names() {
    let v = serde_json::to_value(components(&part(&[2, 1])).unwrap()).unwrap();
    for key in ["C4", "C6", "C7", "volK", "volKI0", "volSL", "pi0"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["pi0"], 3);
}
