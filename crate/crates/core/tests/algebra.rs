use horocount::algebra::{
    lambda, p_norm, rho_density, v0, BlockDiagonalSplit, CartanVector, Cone, Partition,
};
use proptest::prelude::*;

fn sizes_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 2..=4)
}

fn traceless(n: usize) -> impl Strategy<Value = CartanVector> {
    prop::collection::vec(-3.0f64..3.0, n).prop_map(CartanVector::project)
}

#[test]
fn v0_lies_in_the_positive_cone() {
    for sizes in [vec![1, 1, 1], vec![2, 1], vec![1, 2, 1], vec![3, 2]] {
        let p = Partition::new(sizes.iter().sum(), &sizes).unwrap();
        let v = v0(p.n()).unwrap();
        assert!(Cone::positive(p.clone()).contains(&v).unwrap());
        assert!((v.norm() - p_norm(p.n()).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn rho_on_random_chamber_points_is_nonnegative() {
    let p = Partition::new(4, &[3, 1]).unwrap();
    let a = CartanVector::new(vec![1.0, 0.5, -1.5, 0.0]).unwrap();
    let b = CartanVector::new(vec![0.25, 0.25, 0.25, -0.75]).unwrap();
    let rho = rho_density(&p, &a, &b).unwrap();
    let expected = (3.0f64).exp() * 0.5f64.sinh() * 2.5f64.sinh() * 2.0f64.sinh();
    assert!((rho - expected).abs() < 1e-12 * expected);
}

proptest! {
    #[test]
    fn split_round_trip(sizes in sizes_strategy(), seed in prop::collection::vec(-3.0f64..3.0, 12)) {
        let n: usize = sizes.iter().sum();
        let p = Partition::new(n, &sizes).unwrap();
        let y = CartanVector::project(seed[..n].to_vec());
        let s = BlockDiagonalSplit::split(&y, &p).unwrap();
        prop_assert!(s.a_m.dot(&s.a_z).abs() < 1e-12);
        let back = s.join();
        for (u, v) in back.entries().iter().zip(y.entries()) {
            prop_assert!((u - v).abs() < 1e-12);
        }
        let again = BlockDiagonalSplit::split(&back, &p).unwrap();
        for (u, v) in again.a_z.entries().iter().zip(s.a_z.entries()) {
            prop_assert!((u - v).abs() < 1e-12);
        }
        prop_assert!(y.entries().iter().sum::<f64>().abs() < 1e-12);
        prop_assert!((&s.a_m + &s.a_z).entries().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn lambda_is_multiplicative(diag in prop::collection::vec(0.1f64..5.0, 6), mask in prop::collection::vec(0u8..3, 6)) {
        let i: Vec<usize> = (0..6).filter(|&k| mask[k] == 1).collect();
        let j: Vec<usize> = (0..6).filter(|&k| mask[k] == 2).collect();
        let ij: Vec<usize> = (0..6).filter(|&k| mask[k] != 0).collect();
        let lhs = lambda(&diag, &ij).unwrap();
        let rhs = lambda(&diag, &i).unwrap() * lambda(&diag, &j).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn cones_are_nested(y in traceless(4), c in -3.0f64..3.0, d in 0.0f64..3.0) {
        let p = Partition::new(4, &[2, 1, 1]).unwrap();
        let tight = Cone::new(p.clone(), c);
        let loose = Cone::new(p, c - d);
        if tight.contains(&y).unwrap() {
            prop_assert!(loose.contains(&y).unwrap());
        }
    }

    #[test]
    fn cone_translate(y in traceless(3), c in -2.0f64..0.0) {
        // For singleton blocks 𝒞_C = 𝒞₀ + x with x = C·(1, 0, -1).
        let p = Partition::new(3, &[1, 1, 1]).unwrap();
        let x = CartanVector::new(vec![c, 0.0, -c]).unwrap();
        let shifted = Cone::new(p.clone(), c).contains(&y).unwrap();
        let base = Cone::positive(p).contains(&(&y - &x)).unwrap();
        prop_assert_eq!(shifted, base);
    }
}
