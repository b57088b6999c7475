use std::sync::Arc;

use intres::approx::default_max_depth;
use intres::ladder::{compressed_multiplicity, interval_approximation_delta};
use intres::testkit::{perturbed, plant, presented, rng};
use intres::{enumerate_intervals, euler_profile, interval_resolution, json, Field, PersistenceModule, Poset, StairRow};
use proptest::prelude::*;

fn example() -> Arc<PersistenceModule> {
    let path = format!("{}/tests/fixtures/ladder_g42.json", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    Arc::new(json::module_from_json(&v).unwrap())
}

#[test]
fn worked_example() {
    let m = example();
    let p = m.poset().clone();
    let iv = |rows: [(usize, usize, usize); 2]| {
        let rows = rows.map(|(row, start, end)| StairRow { row, start, end });
        intres::Interval::from_staircase(&p, &rows).unwrap()
    };
    assert_eq!(compressed_multiplicity(&m, &iv([(1, 2, 3), (2, 1, 3)])).unwrap(), 0);
    assert_eq!(compressed_multiplicity(&m, &iv([(1, 2, 4), (2, 2, 3)])).unwrap(), 1);

    let ip = enumerate_intervals(&p);
    let res = interval_resolution(&m, &ip, default_max_depth(&ip)).unwrap();
    let prof = interval_approximation_delta(&m, &ip).unwrap();
    assert_eq!(prof.delta, euler_profile(&res, ip.len()));
}

fn check_against_resolution(m: &Arc<PersistenceModule>) -> Result<(), TestCaseError> {
    let ip = enumerate_intervals(m.poset());
    let res = interval_resolution(m, &ip, default_max_depth(&ip)).unwrap();
    let euler = euler_profile(&res, ip.len());
    let prof = interval_approximation_delta(m, &ip).unwrap();
    for i in 0..ip.len() {
        let above: i64 = (0..ip.len()).filter(|&j| ip.leq(i, j)).map(|j| euler[j]).sum();
        prop_assert_eq!(prof.c[i] as i64, above);
    }
    prop_assert_eq!(&prof.delta, &euler);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn compression_matches_resolution(seed in any::<u64>(), n in 2usize..=5, kind in 0usize..3) {
        let p = Arc::new(Poset::grid(n, 2).unwrap());
        let f = Field::f2();
        let m = Arc::new(match kind {
            0 => perturbed(&p, f, 3, seed),
            1 => presented(&p, f, 8, seed),
            _ => plant(&enumerate_intervals(&p), f, 5, seed).module.as_ref().clone(),
        });
        check_against_resolution(&m)?;
    }

    #[test]
    fn invariants_are_additive_and_isomorphism_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let p = Arc::new(Poset::grid(n, 2).unwrap());
        let f = Field::new(3).unwrap();
        let ip = enumerate_intervals(&p);
        let a = presented(&p, f, 5, seed);
        let b = perturbed(&p, f, 2, seed.wrapping_add(1));
        let s = PersistenceModule::direct_sum(p.clone(), f, &[&a, &b]).scramble(&mut rng(seed));
        let (pa, pb, ps) = (
            interval_approximation_delta(&a, &ip).unwrap(),
            interval_approximation_delta(&b, &ip).unwrap(),
            interval_approximation_delta(&s, &ip).unwrap(),
        );
        for j in 0..ip.len() {
            prop_assert_eq!(ps.c[j], pa.c[j] + pb.c[j]);
            prop_assert_eq!(ps.delta[j], pa.delta[j] + pb.delta[j]);
        }
    }
}
