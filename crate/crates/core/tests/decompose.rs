use horocount::acceptance::{random_orthogonal, random_partition, random_sl, random_stabilizer};
use horocount::decompose::*;
use horocount::{oracle, CartanVector, Partition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn part(sizes: &[usize]) -> Partition {
    Partition::new(sizes.iter().sum(), sizes).unwrap()
}

#[test]
fn hand_case_against_geodesic_minimization() {
    let g = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
    let h = height_value(&g, &part(&[1, 1])).unwrap();
    let geo = oracle::n2_horocycle_distance([[1.0, 0.0], [1.0, 1.0]]);
    assert!((h - std::f64::consts::LN_2 / std::f64::consts::SQRT_2).abs() < 1e-9);
    assert!((h - geo).abs() < 1e-9);
}

#[test]
fn n2_heights_agree_with_geodesic_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = part(&[1, 1]);
    for _ in 0..200 {
        let g = random_sl(2, 20.0, &mut rng);
        let h = height_value(&g, &p).unwrap();
        let geo = oracle::n2_horocycle_distance([[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]]);
        assert!((h - geo).abs() < 1e-8, "{h} vs {geo}");
    }
}

#[test]
fn block_singular_values_match_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = part(&[3, 2]);
    for _ in 0..100 {
        let g = random_sl(5, 30.0, &mut rng);
        let lf = langlands_decompose(&g, &p).unwrap();
        let bc = block_cartan(&lf.m, &p).unwrap();
        for block in p.blocks() {
            let rows: Vec<Vec<f64>> = block
                .clone()
                .map(|i| block.clone().map(|j| lf.m[(i, j)]).collect())
                .collect();
            let sv = oracle::singular_values(&rows);
            for (k, i) in block.enumerate() {
                assert!((bc.a_m.entries()[i].exp() / sv[k] - 1.0).abs() < 1e-10);
            }
        }
        let back = &bc.c1 * Matrix::from_diagonal(&bc.a_m.exp_diagonal().into()) * &bc.c2;
        assert!((back - &lf.m).norm() < 1e-10 * lf.m.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn frame_reconstructs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 4) as usize;
        let p = random_partition(n, &mut rng);
        let g = random_sl(n, 100.0, &mut rng);
        let f = frame(&g, &p).unwrap();
        prop_assert!((f.reconstruct() - &g).norm() <= 1e-9 * g.norm());
        prop_assert!((f.k.transpose() * &f.k - Matrix::identity(n, n)).norm() < 1e-10);
        for block in p.blocks() {
            let a = &f.a_m.entries()[block.clone()];
            prop_assert!(a.windows(2).all(|w| w[0] >= w[1] - 1e-12));
            prop_assert!(a.iter().sum::<f64>().abs() < 1e-9);
            for i in block.clone() {
                prop_assert!((f.u[(i, i)] - 1.0).abs() < 1e-12);
                for j in block.clone().filter(|&j| j != i) {
                    prop_assert!(f.u[(i, j)].abs() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn height_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 4) as usize;
        let p = random_partition(n, &mut rng);
        let g = random_sl(n, 50.0, &mut rng);
        let h = height_value(&g, &p).unwrap();
        let s = random_stabilizer(&p, 3.0, &mut rng);
        prop_assert!((height_value(&(&g * s), &p).unwrap() - h).abs() <= 1e-9);
        let q = random_orthogonal(n, &mut rng);
        prop_assert!((height_value(&(q * &g), &p).unwrap() - h).abs() <= 1e-9);
    }

    #[test]
    fn busemann_lower_bound(seed in any::<u64>()) {
        // m ∈ M·A block diagonal, u block unipotent
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 4) as usize;
        let p = random_partition(n, &mut rng);
        let g = random_sl(n, 50.0, &mut rng);
        let mut m = Matrix::zeros(n, n);
        for block in p.blocks() {
            let v = g.view((block.start, block.start), (block.len(), block.len()));
            m.view_mut((block.start, block.start), (block.len(), block.len())).copy_from(&v);
        }
        let det = m.determinant();
        prop_assume!(det.abs() > 1e-3);
        if det < 0.0 {
            m.row_mut(0).neg_mut();
        }
        m /= det.abs().powf(1.0 / n as f64);
        let u = {
            let s = random_stabilizer(&p, 3.0, &mut rng);
            let lf = langlands_decompose(&s, &p).unwrap();
            lf.u
        };
        let hm = height_value(&m, &p).unwrap();
        prop_assert!(height_value(&(&m * u), &p).unwrap() >= hm - 1e-9);
    }

    #[test]
    fn b_component_is_additive(seed in any::<u64>(), shift in prop::collection::vec(-1.5f64..1.5, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = part(&[2, 1, 2]);
        let g = random_sl(5, 50.0, &mut rng);
        let mut b1 = Vec::new();
        for (k, block) in p.blocks().enumerate() {
            b1.extend(block.map(|_| shift[k]));
        }
        let b1 = CartanVector::project(b1);
        let a = Matrix::from_diagonal(&b1.exp_diagonal().into());
        let lf = langlands_decompose(&g, &p).unwrap();
        // Left translation of a block upper triangular element, and right
        // translation of a general one.
        let upper = Matrix::from_diagonal(&lf.b.exp_diagonal().into()) * &lf.m * &lf.u;
        let left = langlands_decompose(&(&a * upper), &p).unwrap().b;
        let right = langlands_decompose(&(&g * &a), &p).unwrap().b;
        let expected = &b1 + &lf.b;
        for ((x, y), z) in left.entries().iter().zip(right.entries()).zip(expected.entries()) {
            prop_assert!((x - z).abs() < 1e-9);
            prop_assert!((y - z).abs() < 1e-9);
        }
    }
}
