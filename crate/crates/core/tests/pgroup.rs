use blockpic_core::pgroup::{quotient_invariants, subgroup_generated, QuotientMap};
use blockpic_core::{AbelianPGroup, GroupElement};
use proptest::prelude::*;

fn group() -> impl Strategy<Value = AbelianPGroup> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], proptest::collection::vec(1u32..4, 1..4))
        .prop_filter_map("order too large", |(p, mut e)| {
            e.sort_unstable_by(|a, b| b.cmp(a));
            AbelianPGroup::with_bound(p, &e, 1 << 12).ok()
        })
}

fn with_elements(n: usize) -> impl Strategy<Value = (AbelianPGroup, Vec<GroupElement>)> {
    group().prop_flat_map(move |g| {
        let order = g.order() as usize;
        (Just(g), proptest::collection::vec(0..order, n))
    })
    .prop_map(|(g, idx)| {
        let xs = idx.iter().map(|&k| g.element_at(k)).collect();
        (g, xs)
    })
}

proptest! {
    #[test]
    fn addition_is_an_abelian_group_law((g, xs) in with_elements(3)) {
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        let ab = g.add(a, b).unwrap();
        prop_assert_eq!(g.add(&ab, c).unwrap(), g.add(a, &g.add(b, c).unwrap()).unwrap());
        prop_assert_eq!(&ab, &g.add(b, a).unwrap());
        prop_assert_eq!(g.add(a, &g.neg(a).unwrap()).unwrap(), g.identity());
        prop_assert_eq!(g.sub(&ab, b).unwrap(), a.clone());
    }

    #[test]
    fn indexing_is_a_bijection((g, xs) in with_elements(1)) {
        let k = g.index_of(&xs[0]);
        prop_assert_eq!(g.element_at(k), xs[0].clone());
        prop_assert!(k < g.order() as usize);
    }

    #[test]
    fn element_order_divides_exponent((g, xs) in with_elements(1)) {
        let n = g.element_order(&xs[0]).unwrap();
        prop_assert_eq!(g.exponent() % n, 0);
        prop_assert!(g.scale(&xs[0], n as i64).unwrap().is_zero());
    }

    #[test]
    fn generated_subgroups_are_closed((g, xs) in with_elements(2)) {
        let s = subgroup_generated(&g, &xs).unwrap();
        prop_assert_eq!(g.order() as usize % s.order(), 0);
        for a in s.elements() {
            for b in s.elements() {
                prop_assert!(s.contains(&g.add(a, b).unwrap()));
            }
        }
    }

    #[test]
    fn quotients_have_the_right_order((g, xs) in with_elements(2)) {
        let s = subgroup_generated(&g, &xs).unwrap();
        let q = quotient_invariants(&g, &s).unwrap();
        prop_assert_eq!(q.order() as usize * s.order(), g.order() as usize);
        // the quotient map is a surjective homomorphism with kernel S
        let map = QuotientMap::new(&g, &s).unwrap();
        let mut kernel = 0;
        for x in g.elements() {
            let y = map.apply(&x).unwrap();
            if y.is_zero() {
                kernel += 1;
                prop_assert!(s.contains(&x));
            }
        }
        prop_assert_eq!(kernel, s.order());
        for a in &xs {
            let sum = map.apply(&g.add(a, &xs[1]).unwrap()).unwrap();
            prop_assert_eq!(sum, q.add(&map.apply(a).unwrap(), &map.apply(&xs[1]).unwrap()).unwrap());
        }
    }
}

#[test]
fn constructor_errors() {
    assert!(AbelianPGroup::new(4, &[1]).is_err());
    assert!(AbelianPGroup::new(2, &[0]).is_err());
    assert!(AbelianPGroup::with_bound(2, &[10, 10], 1 << 10).is_err());
    assert_eq!(AbelianPGroup::new(3, &[2, 1]).unwrap().order(), 27);
}
