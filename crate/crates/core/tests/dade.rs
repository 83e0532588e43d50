use std::sync::Arc;

use blockpic_core::autgroup::make_automorphism;
use blockpic_core::dade::{
    commutator, commutator_identity_check, compose, inverse, pair_order, torsion_subgroup, twist_by_character,
    DadeContext, DadePair, LinearCharacter,
};
use blockpic_core::fusion::build_inertial_pair;
use blockpic_core::picard::CoefficientProfile;
use blockpic_core::AbelianPGroup;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn character_context(p: u64, e: &[u32], gens: &[Vec<Vec<i64>>], m: CoefficientProfile) -> Arc<DadeContext> {
    let g = AbelianPGroup::new(p, e).unwrap();
    let autos: Vec<_> = gens.iter().map(|r| make_automorphism(&g, r).unwrap()).collect();
    DadeContext::characters(&build_inertial_pair(&g, &autos).unwrap(), m).unwrap()
}

fn contexts() -> Vec<Arc<DadeContext>> {
    vec![
        DadeContext::trivial(),
        DadeContext::z3_inversion(),
        DadeContext::free_negation(),
        DadeContext::mixed_model(),
        character_context(2, &[2], &[], CoefficientProfile::new(2)),
        character_context(3, &[1, 1], &[], CoefficientProfile::large()),
        character_context(2, &[2, 1], &[], CoefficientProfile::large()),
        character_context(3, &[2], &[vec![vec![8]]], CoefficientProfile::large()),
    ]
}

fn random_pair(ctx: &Arc<DadeContext>, rng: &mut ChaCha8Rng) -> DadePair {
    let v: Vec<i64> = (0..ctx.dimension()).map(|_| rng.gen_range(-40..=40)).collect();
    let phi = rng.gen_range(0..ctx.out().order());
    DadePair::new(ctx, &v, phi).unwrap()
}

#[test]
fn group_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for ctx in contexts() {
        let id = DadePair::identity(&ctx);
        for _ in 0..10_000 {
            let (a, b, c) = (random_pair(&ctx, &mut rng), random_pair(&ctx, &mut rng), random_pair(&ctx, &mut rng));
            let ab_c = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let a_bc = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "{}", ctx.name());
            assert_eq!(compose(&a, &id).unwrap(), a);
            assert_eq!(compose(&id, &a).unwrap(), a);
            assert!(compose(&a, &inverse(&a)).unwrap().is_identity());
            assert!(compose(&inverse(&a), &a).unwrap().is_identity());
        }
    }
}

#[test]
fn inverse_is_negated_inverse_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ctx in contexts() {
        for _ in 0..2_000 {
            let a = random_pair(&ctx, &mut rng);
            let phi_inv = ctx.out().inv(a.phi());
            let w: Vec<i64> = ctx.act(phi_inv, a.v()).iter().map(|x| -x).collect();
            assert_eq!(inverse(&a), DadePair::new(&ctx, &w, phi_inv).unwrap());
        }
    }
}

#[test]
fn commutator_pattern_on_torsion_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ctx in contexts().into_iter().filter(|c| c.is_finite()) {
        for _ in 0..2_000 {
            let a = random_pair(&ctx, &mut rng);
            let phi = rng.gen_range(0..ctx.out().order());
            let x = DadePair::new(&ctx, a.v(), 0).unwrap();
            let y = DadePair::new(&ctx, &ctx.zero(), phi).unwrap();
            // [x, y] = x y x^-1 y^-1 written out by hand
            let by_hand = compose(&compose(&compose(&x, &y).unwrap(), &inverse(&x)).unwrap(), &inverse(&y)).unwrap();
            let fv = ctx.act(phi, a.v());
            let diff: Vec<i64> = a.v().iter().zip(&fv).map(|(s, t)| s - t).collect();
            assert_eq!(by_hand, DadePair::new(&ctx, &diff, 0).unwrap());
            assert_eq!(commutator(&x, &y).unwrap(), by_hand);
            assert!(commutator_identity_check(&ctx, a.v(), phi).unwrap());
        }
    }
}

#[test]
fn projection_to_out_is_a_homomorphism_with_kernel_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for ctx in contexts() {
        for _ in 0..2_000 {
            let (a, b) = (random_pair(&ctx, &mut rng), random_pair(&ctx, &mut rng));
            let ab = compose(&a, &b).unwrap();
            assert_eq!(ab.phi(), ctx.out().mul(a.phi(), b.phi()));
            if a.phi() == 0 && b.phi() == 0 {
                assert_eq!(ab, compose(&b, &a).unwrap());
            }
        }
    }
}

#[test]
fn orders_match_power_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for ctx in contexts().into_iter().filter(|c| c.is_finite()) {
        for _ in 0..500 {
            let a = random_pair(&ctx, &mut rng);
            let mut x = a.clone();
            let mut k = 1u64;
            while !x.is_identity() {
                x = compose(&x, &a).unwrap();
                k += 1;
            }
            assert_eq!(pair_order(&a), Some(k));
        }
    }
}

#[test]
fn worked_examples() {
    let ctx = DadeContext::z3_inversion();
    let s = DadePair::new(&ctx, &[1], 1).unwrap();
    assert_eq!(compose(&s, &s).unwrap(), DadePair::identity(&ctx));
    assert_eq!(inverse(&s), s);
    let c = commutator(&DadePair::new(&ctx, &[1], 0).unwrap(), &DadePair::new(&ctx, &[0], 1).unwrap()).unwrap();
    assert_eq!(c, DadePair::new(&ctx, &[2], 0).unwrap());

    let z = DadeContext::free_negation();
    let c = commutator(&DadePair::new(&z, &[1], 0).unwrap(), &DadePair::new(&z, &[0], 1).unwrap()).unwrap();
    assert_eq!(c.v(), &[2]);
    assert_eq!(pair_order(&DadePair::new(&z, &[1], 0).unwrap()), None);

    assert_eq!(torsion_subgroup(&DadeContext::mixed_model()).unwrap().torsion(), &[2, 4]);
    let free2 = DadeContext::from_matrices("Z^2", 2, &[], &[]).unwrap();
    assert_eq!(torsion_subgroup(&free2).unwrap().dimension(), 0);
}

#[test]
fn twist_needs_a_summand() {
    let ctx = DadeContext::z3_inversion();
    let q = AbelianPGroup::new(3, &[1]).unwrap();
    let zeta = LinearCharacter::trivial(&q, CoefficientProfile::large());
    assert!(twist_by_character(&DadePair::identity(&ctx), &zeta).is_err());
}

fn c4_context() -> Arc<DadeContext> {
    character_context(2, &[2], &[], CoefficientProfile::new(2))
}

#[test]
fn faithful_twist_on_c4_has_order_four() {
    let ctx = c4_context();
    let q = ctx.character_summand().unwrap().quotient.clone();
    let zeta = LinearCharacter::new(&q, CoefficientProfile::new(2), &[1]).unwrap();
    let x = twist_by_character(&DadePair::identity(&ctx), &zeta).unwrap();
    assert_eq!(pair_order(&x), Some(4));
}

proptest! {
    #[test]
    fn twisting_is_an_injective_homomorphism(a in 0u64..4, b in 0u64..4) {
        let ctx = c4_context();
        let q = ctx.character_summand().unwrap().quotient.clone();
        let m = CoefficientProfile::new(2);
        let za = LinearCharacter::new(&q, m, &[a]).unwrap();
        let zb = LinearCharacter::new(&q, m, &[b]).unwrap();
        let zab = LinearCharacter::new(&q, m, &[(a + b) % 4]).unwrap();
        let id = DadePair::identity(&ctx);
        let ta = twist_by_character(&id, &za).unwrap();
        let tb = twist_by_character(&id, &zb).unwrap();
        prop_assert_eq!(compose(&ta, &tb).unwrap(), twist_by_character(&id, &zab).unwrap());
        prop_assert_eq!(ta.phi(), 0);
        prop_assert_eq!(ta.is_identity(), a == 0);
    }

    #[test]
    fn order_two_twist_twice_is_identity(v in proptest::collection::vec(0u64..2, 2)) {
        let ctx = character_context(2, &[1, 1], &[], CoefficientProfile::large());
        let q = ctx.character_summand().unwrap().quotient.clone();
        let z = LinearCharacter::new(&q, CoefficientProfile::large(), &v).unwrap();
        let id = DadePair::identity(&ctx);
        let twice = twist_by_character(&twist_by_character(&id, &z).unwrap(), &z).unwrap();
        prop_assert!(twice.is_identity());
    }
}
