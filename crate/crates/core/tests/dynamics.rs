use horocount::acceptance::compositions;
use horocount::dynamics::*;
use horocount::Partition;
use proptest::prelude::*;

fn part(sizes: &[usize]) -> Partition {
    Partition::new(sizes.iter().sum(), sizes).unwrap()
}

fn all_specs() -> Vec<CleanSequenceSpec> {
    (2..=4)
        .flat_map(compositions)
        .flat_map(|p| CleanSequenceSpec::all(&p))
        .collect()
}

#[test]
fn spec_census_up_to_four() {
    let specs = all_specs();
    let nondivergent = specs
        .iter()
        .filter(|s| classify_limit(s).unwrap().nondivergent)
        .count();
    // Σ over compositions of 2^{#blocks of size ≥ 2}·3^{k₀-1}, and the
    // nondivergent ones use two prefix behaviors instead of three.
    let expected = |base: usize| -> usize {
        (2..=4)
            .flat_map(compositions)
            .map(|p| {
                let a = 1usize << p.sizes().iter().filter(|&&s| s > 1).count();
                a * base.pow(p.num_blocks() as u32 - 1)
            })
            .sum()
    };
    assert_eq!(specs.len(), expected(3));
    assert_eq!(specs.len(), 129);
    assert_eq!(nondivergent, expected(2));
}

#[test]
fn nondivergence_matches_instantiated_covolumes() {
    for spec in all_specs() {
        let c = classify_limit(&spec).unwrap();
        let m = min_prefix_covolume(&spec, 20).unwrap();
        if c.nondivergent {
            assert!(m >= 1.0 - 1e-9, "{spec:?}: {m}");
        } else {
            assert!(m <= (-19.0f64).exp(), "{spec:?}: {m}");
        }
    }
}

#[test]
fn coarse_partition_is_coarser_and_roles_follow_origins() {
    for spec in all_specs() {
        let c = classify_limit(&spec).unwrap();
        let ends: Vec<usize> = spec.partition.blocks().map(|b| b.end).collect();
        assert!(c.coarse_partition.blocks().all(|b| ends.contains(&b.end)));
        assert_eq!(c.coarse_partition.n(), spec.partition.n());
        for (role, origin) in c.block_roles.iter().zip(&c.block_origins) {
            assert_eq!(*role == BlockRole::K, *origin == BlockOrigin::Zero);
        }
    }
}

#[test]
fn coarsening_is_idempotent() {
    for spec in all_specs() {
        let c = classify_limit(&spec).unwrap();
        if c.coarse_partition.num_blocks() < 2 {
            continue;
        }
        let p1 = Partition::new(c.coarse_partition.n(), c.coarse_partition.sizes()).unwrap();
        let k = p1.num_blocks();
        let again = CleanSequenceSpec::new(
            p1.clone(),
            vec![ABehavior::Identity; k],
            vec![BBehavior::ConstantOne; k],
        )
        .unwrap();
        let c2 = classify_limit(&again).unwrap();
        assert_eq!(c2.coarse_partition.sizes(), p1.sizes());
    }
}

#[test]
fn json_shape() {
    let spec = CleanSequenceSpec::new(
        part(&[1, 1]),
        vec![ABehavior::Identity; 2],
        vec![BBehavior::ToZero, BBehavior::ConstantOne],
    )
    .unwrap();
    let v = serde_json::to_value(classify_limit(&spec).unwrap()).unwrap();
    assert_eq!(v["nondivergent"], false);
    assert_eq!(v["coarse_partition"], serde_json::json!([2]));
    assert_eq!(v["divergent_prefixes"], serde_json::json!([0]));
}

/// Block upper triangular matrices preserve exactly the block-prefix
/// coordinate subspaces: any other coordinate subset is moved by some
/// elementary matrix inside the group.
#[test]
fn prefixes_are_the_stable_coordinate_subspaces() {
    for p in (2..=5).flat_map(compositions) {
        let n = p.n();
        let stable = stable_subspaces(&p);
        for mask in 1u32..(1 << n) - 1 {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            // E_ij (i row, j column) with j in the set moves e_j into e_i + e_j.
            let moved = (0..n).any(|j| {
                set.contains(&j)
                    && (0..n).any(|i| {
                        i != j
                            && !set.contains(&i)
                            && (p.same_block(i, j) || p.block_of(i) < p.block_of(j))
                    })
            });
            assert_eq!(!moved, stable.contains(&set), "{p} {set:?}");
        }
    }
}

proptest! {
    #[test]
    fn covolume_closed_form_vs_gram(
        logs in prop::collection::vec(-3.0f64..3.0, 4),
        betas in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let p = part(&[2, 2]);
        let a = [logs[0].exp(), (-logs[0]).exp(), logs[1].exp(), (-logs[1]).exp()];
        let b = [betas[0].exp(), betas[0].exp(), betas[1].exp(), betas[1].exp()];
        let c = covolume(&p, &a, &b, &[0, 1]).unwrap();
        let g = covolume_gram(&p, &a, &b, &[0, 1]).unwrap();
        prop_assert!(((c - g) / g).abs() < 1e-12);
    }
}
