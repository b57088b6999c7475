use std::sync::Arc;

use intres::artrans::{dual_onto, minimal_projective_presentation, tau, tau_inverse, top_dims};
use intres::testkit::{perturbed, presented, rng};
use intres::{cokernel, hom_basis, hom_dim, kernel, Field, ModuleMorphism, PersistenceModule, Poset};
use proptest::prelude::*;
use rand::Rng;

fn grid(m: usize, n: usize) -> Arc<Poset> {
    Arc::new(Poset::grid(m, n).unwrap())
}

fn random_morphism(a: &Arc<PersistenceModule>, b: &Arc<PersistenceModule>, seed: u64) -> ModuleMorphism {
    let hb = hom_basis(a, b);
    let mut r = rng(seed);
    let mut g = ModuleMorphism::zero(a.clone(), b.clone());
    for h in &hb.basis {
        let s = r.gen_range(0..a.field().modulus());
        g.components = g.components.iter().zip(&h.components).map(|(x, y)| x.add(&y.scale(s))).collect();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hom_is_additive(seed in any::<u64>()) {
        let p = grid(3, 2);
        let f = Field::new(3).unwrap();
        let a = perturbed(&p, f, 2, seed);
        let b = perturbed(&p, f, 2, seed.wrapping_add(1));
        let c = presented(&p, f, 4, seed.wrapping_add(2));
        let ab = PersistenceModule::direct_sum(p.clone(), f, &[&a, &b]);
        prop_assert_eq!(hom_dim(&ab, &c), hom_dim(&a, &c) + hom_dim(&b, &c));
        prop_assert_eq!(hom_dim(&c, &ab), hom_dim(&c, &a) + hom_dim(&c, &b));
    }

    #[test]
    fn hom_basis_is_independent_and_natural(seed in any::<u64>()) {
        let p = grid(2, 3);
        let f = Field::f2();
        let a = Arc::new(presented(&p, f, 4, seed));
        let b = Arc::new(perturbed(&p, f, 2, seed.wrapping_add(7)));
        let hb = hom_basis(&a, &b);
        let mut ech = intres::Echelon::new(f, hb.basis.first().map_or(0, |g| g.flatten().len()));
        for g in &hb.basis {
            prop_assert!(g.validate().is_ok());
            prop_assert!(ech.insert(&g.flatten()));
        }
        prop_assert_eq!(hb.dimension(), hom_dim(&a, &b));
    }

    #[test]
    fn kernels_and_cokernels_are_exact(seed in any::<u64>()) {
        let p = grid(3, 3);
        let f = Field::new(5).unwrap();
        let a = Arc::new(presented(&p, f, 4, seed));
        let b = Arc::new(presented(&p, f, 4, seed.wrapping_add(3)));
        let g = random_morphism(&a, &b, seed);
        let (k, incl) = kernel(&g).unwrap();
        let (c, proj) = cokernel(&g).unwrap();
        prop_assert!(k.check_commutativity() && c.check_commutativity());
        prop_assert!(incl.then(&g).is_zero());
        prop_assert!(g.then(&proj).is_zero());
        prop_assert!(proj.is_epi());
        for x in 0..p.len() {
            let r = g.components[x].rank();
            prop_assert_eq!(k.dim(x), a.dim(x) - r);
            prop_assert_eq!(c.dim(x), b.dim(x) - r);
            prop_assert_eq!(incl.components[x].rank(), k.dim(x));
        }
    }

    #[test]
    fn duality_reverses_hom(seed in any::<u64>()) {
        let p = grid(3, 2);
        let op = Arc::new(p.opposite());
        let f = Field::f2();
        let a = presented(&p, f, 4, seed);
        let b = perturbed(&p, f, 2, seed.wrapping_add(11));
        let (da, db) = (dual_onto(&a, &op).unwrap(), dual_onto(&b, &op).unwrap());
        prop_assert_eq!(hom_dim(&a, &b), hom_dim(&db, &da));
        prop_assert_eq!(dual_onto(&da, &p).unwrap(), a);
    }

    #[test]
    fn presentation_ranks(seed in any::<u64>()) {
        let p = grid(2, 4);
        let m = Arc::new(presented(&p, Field::new(3).unwrap(), 6, seed));
        let pres = minimal_projective_presentation(&m).unwrap();
        prop_assert!(pres.is_radical());
        prop_assert_eq!(pres.p0_mults(), top_dims(&m));
        for x in 0..p.len() {
            prop_assert_eq!(pres.epsilon.components[x].rank(), m.dim(x));
            prop_assert_eq!(pres.d1.components[x].rank(), pres.epsilon.source.dim(x) - m.dim(x));
        }
    }
}

#[test]
fn translates_invert_on_nonprojective_intervals() {
    let p = grid(2, 3);
    let f = Field::f2();
    let ip = intres::enumerate_intervals(&p);
    for iv in ip.intervals() {
        let v = Arc::new(PersistenceModule::from_interval(p.clone(), f, iv));
        let t = Arc::new(tau(&v).unwrap());
        let mins = p.minimal_elements(iv.members());
        let projective = mins.len() == 1 && p.up_set(mins.to_vec()[0]) == iv.members();
        assert_eq!(t.is_zero(), projective);
        if !projective {
            assert_eq!(tau_inverse(&t).unwrap(), *v);
        }
    }
}

#[test]
fn scramble_keeps_module_and_hom_dims() {
    let p = grid(3, 3);
    let f = Field::new(7).unwrap();
    for seed in 0..10 {
        let m = presented(&p, f, 5, seed);
        let s = m.scramble(&mut rng(seed));
        assert!(s.check_commutativity());
        assert_eq!(s.dims(), m.dims());
        for x in 0..p.len() {
            let pr = PersistenceModule::projective_at(p.clone(), f, x);
            assert_eq!(hom_dim(&pr, &s), m.dim(x));
        }
    }
}
