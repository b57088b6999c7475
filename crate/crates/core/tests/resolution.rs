use std::sync::Arc;

use intres::approx::{default_max_depth, top_multiplicities};
use intres::testkit::{naive_top_multiplicities, oracle_submodule, perturbed, plant, presented, rng};
use intres::{
    enumerate_intervals, euler_profile, interval_dimension, interval_resolution, intgldim, json, verify_resolution,
    Error, Field, PersistenceModule, Poset,
};
use proptest::prelude::*;

fn fixture(name: &str) -> Arc<PersistenceModule> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    Arc::new(json::module_from_json(&v).unwrap())
}

fn grid(m: usize, n: usize) -> Arc<Poset> {
    Arc::new(Poset::grid(m, n).unwrap())
}

#[test]
fn archived_module_has_length_one() {
    let m = fixture("g23_intdim1.json");
    let ip = enumerate_intervals(m.poset());
    let res = interval_resolution(&m, &ip, default_max_depth(&ip)).unwrap();
    assert_eq!(res.length, 1);
    assert!(verify_resolution(&res, &ip).ok());
    assert_eq!(
        interval_resolution(&m, &ip, 0).unwrap_err(),
        Error::DepthExceeded { max_depth: 0 }
    );
}

#[test]
fn every_module_over_the_square_is_interval_decomposable() {
    let p = grid(2, 2);
    let ip = enumerate_intervals(&p);
    for seed in 0..150 {
        let m = Arc::new(presented(&p, Field::f2(), 6, seed));
        assert_eq!(interval_dimension(&m, &ip).unwrap(), 0);
        let m = Arc::new(perturbed(&p, Field::f2(), 3, seed));
        assert_eq!(interval_dimension(&m, &ip).unwrap(), 0);
    }
}

#[test]
fn lengths_are_bounded_by_the_global_dimension() {
    for (a, b) in [(2, 3), (2, 4), (3, 3)] {
        let p = grid(a, b);
        let ip = enumerate_intervals(&p);
        let bound = intgldim(&ip, Field::f2()).unwrap();
        for seed in 0..50 {
            let m = if seed % 2 == 0 {
                presented(&p, Field::f2(), 6, seed)
            } else {
                perturbed(&p, Field::f2(), 3, seed)
            };
            assert!(interval_dimension(&Arc::new(m), &ip).unwrap() <= bound);
        }
    }
}

#[test]
fn submodules_of_interval_modules_are_interval_decomposable() {
    let p = grid(3, 3);
    let ip = enumerate_intervals(&p);
    for seed in 0..60 {
        let mut r = rng(seed);
        let iv = ip.get(rand::Rng::gen_range(&mut r, 0..ip.len()));
        let n = Arc::new(oracle_submodule(&p, Field::new(3).unwrap(), iv.members(), seed).unwrap());
        assert_eq!(interval_dimension(&n, &ip).unwrap(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_multiplicities_match_definition(seed in any::<u64>(), shape in 0usize..3, p_idx in 0usize..2) {
        let (a, b) = [(2, 3), (3, 2), (2, 4)][shape];
        let p = grid(a, b);
        let f = Field::new([2, 3][p_idx]).unwrap();
        let ip = enumerate_intervals(&p);
        let m = Arc::new(if seed % 2 == 0 { presented(&p, f, 5, seed) } else { perturbed(&p, f, 2, seed) });
        prop_assert_eq!(top_multiplicities(&m, &ip), naive_top_multiplicities(&m, &ip));
    }

    #[test]
    fn resolutions_are_sound_and_stable(seed in any::<u64>(), shape in 0usize..3) {
        let (a, b) = [(2, 3), (3, 3), (4, 2)][shape];
        let p = grid(a, b);
        let f = Field::f2();
        let ip = enumerate_intervals(&p);
        let m = Arc::new(presented(&p, f, 6, seed));
        let res = interval_resolution(&m, &ip, default_max_depth(&ip)).unwrap();
        let report = verify_resolution(&res, &ip);
        prop_assert!(report.ok(), "{:?}", report.violations);
        for (i, step) in res.steps.iter().enumerate() {
            if i + 1 < res.steps.len() {
                prop_assert!(!step.kernel.is_zero());
            } else {
                prop_assert!(step.kernel.is_zero());
            }
        }
        let scrambled = Arc::new(m.scramble(&mut rng(seed ^ 0x5eed)));
        let again = interval_resolution(&scrambled, &ip, default_max_depth(&ip)).unwrap();
        prop_assert_eq!(again.table(ip.len()), res.table(ip.len()));
        let euler = euler_profile(&res, ip.len());
        let weighted: i64 = (0..ip.len()).map(|j| euler[j] * ip.get(j).len() as i64).sum();
        prop_assert_eq!(weighted, m.total_dim() as i64);
    }

    #[test]
    fn planted_multiplicities_are_recovered(seed in any::<u64>(), shape in 0usize..3) {
        let (a, b) = [(2, 3), (3, 3), (5, 2)][shape];
        let p = grid(a, b);
        let ip = enumerate_intervals(&p);
        let pm = plant(&ip, Field::new(5).unwrap(), 6, seed);
        let res = interval_resolution(&pm.module, &ip, 0).unwrap();
        prop_assert_eq!(res.length, 0);
        let got: Vec<usize> = res.table(ip.len()).iter().map(|row| row.first().copied().unwrap_or(0)).collect();
        prop_assert_eq!(got, pm.multiplicities);
    }
}
