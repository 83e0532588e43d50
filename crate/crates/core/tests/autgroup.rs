use blockpic_core::autgroup::{aut_order_formula, enumerate_aut, enumerate_aut_oracle};
use blockpic_core::{AbelianPGroup, GroupElement};
use proptest::prelude::*;

fn groups_up_to(n: u64) -> Vec<AbelianPGroup> {
    (2..=n)
        .filter(|&q| (2..q).all(|d| q % d != 0))
        .flat_map(|p| AbelianPGroup::all_of_order_at_most(p, n).unwrap())
        .filter(|g| !g.is_trivial())
        .collect()
}

/// The order of `Aut(Z/p^{e_1} x ... x Z/p^{e_r})`, `e` ascending, from
/// the counting formula of Hillar and Rhea.
fn formula(p: u64, e: &[u32]) -> u128 {
    let mut e = e.to_vec();
    e.sort_unstable();
    let r = e.len();
    let p = p as u128;
    let mut total: u128 = 1;
    for k in 0..r {
        let d = (0..r).rev().find(|&l| e[l] == e[k]).unwrap() + 1;
        let c = (0..r).find(|&l| e[l] == e[k]).unwrap() + 1;
        total *= p.pow(d as u32) - p.pow(k as u32);
        total *= p.pow(e[k]).pow((r - d) as u32);
        total *= p.pow(e[k] - 1).pow((r - c + 1) as u32);
    }
    total
}

/// Count endomorphisms that are injective on all of `P`, with the images of
/// the generators ranging over every admissible tuple.
fn brute_count(g: &AbelianPGroup) -> u128 {
    let elems: Vec<GroupElement> = g.elements().collect();
    let r = g.rank();
    let orders: Vec<u64> = g.moduli().to_vec();
    // admissible images: order divides the generator's order
    let cand: Vec<Vec<&GroupElement>> = (0..r)
        .map(|j| {
            elems
                .iter()
                .filter(|x| orders[j] % g.element_order(x).unwrap() == 0)
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; r];
    let mut count = 0;
    loop {
        let images: Vec<&GroupElement> = (0..r).map(|j| cand[j][idx[j]]).collect();
        let mut seen = std::collections::HashSet::new();
        let injective = elems.iter().all(|x| {
            let mut y = g.identity();
            for (j, &c) in x.coords.iter().enumerate() {
                y = g.add(&y, &g.scale(images[j], c as i64).unwrap()).unwrap();
            }
            seen.insert(y)
        });
        count += injective as u128;
        let mut k = 0;
        loop {
            if k == r {
                return count;
            }
            idx[k] += 1;
            if idx[k] < cand[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn formula_oracle_agrees_with_brute_force() {
    for g in groups_up_to(16) {
        assert_eq!(formula(g.p(), g.exponents()), brute_count(&g), "{g}");
    }
}

#[test]
fn enumeration_matches_formula_up_to_128() {
    for g in groups_up_to(128) {
        let aut = enumerate_aut(&g, u128::MAX).unwrap();
        assert_eq!(aut.order() as u128, formula(g.p(), g.exponents()), "{g}");
        assert_eq!(aut_order_formula(&g), formula(g.p(), g.exponents()), "{g}");
    }
}

#[test]
fn element_sets_match_brute_force_up_to_16() {
    for g in groups_up_to(16) {
        let aut = enumerate_aut(&g, u128::MAX).unwrap();
        let mut ours: Vec<_> = aut.elements().map(|k| aut.automorphism(k).unwrap()).collect();
        ours.sort();
        ours.dedup();
        assert_eq!(ours.len(), aut.order());
        assert_eq!(ours, enumerate_aut_oracle(&g), "{g}");
    }
}

#[test]
fn known_orders() {
    let cases: [(u64, &[u32], u128); 5] = [
        (2, &[1, 1], 6),
        (3, &[2], 6),
        (2, &[2, 1], 8),
        (3, &[1, 1, 1], 11232),
        (2, &[1, 1, 1, 1, 1, 1, 1], 163849992929280),
    ];
    for (p, e, n) in cases {
        let g = AbelianPGroup::new(p, e).unwrap();
        assert_eq!(formula(p, e), n);
        assert_eq!(enumerate_aut(&g, u128::MAX).unwrap().order() as u128, n);
    }
}

#[test]
fn bound_is_enforced() {
    let g = AbelianPGroup::new(2, &[1, 1, 1, 1]).unwrap();
    assert!(enumerate_aut(&g, 100).is_err());
}

fn small_group() -> impl Strategy<Value = AbelianPGroup> {
    let gs = groups_up_to(64);
    (0..gs.len()).prop_map(move |k| gs[k].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn automorphisms_preserve_addition(g in small_group(), seed in any::<u64>()) {
        let aut = enumerate_aut(&g, u128::MAX).unwrap();
        let a = aut.automorphism((seed % aut.order() as u64) as usize).unwrap();
        let n = g.order() as usize;
        let x = g.element_at((seed as usize / 7) % n);
        let y = g.element_at((seed as usize / 131) % n);
        let lhs = a.apply(&g.add(&x, &y).unwrap()).unwrap();
        let rhs = g.add(&a.apply(&x).unwrap(), &a.apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_and_order(g in small_group(), seed in any::<u64>()) {
        let aut = enumerate_aut(&g, u128::MAX).unwrap();
        let a = aut.automorphism((seed % aut.order() as u64) as usize).unwrap();
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order()).is_identity());
        prop_assert_eq!(aut.order() as u64 % a.order(), 0);
    }
}
