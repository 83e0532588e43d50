use std::collections::HashSet;

use blockpic_core::autgroup::{enumerate_aut, make_automorphism};
use blockpic_core::fusion::{
    acts_freely, build_inertial_pair, focal_subgroup, focal_subgroup_from_elements, frobenius_complement_survey,
};
use blockpic_core::identify::identify;
use blockpic_core::{AbelianPGroup, Automorphism};

fn groups_up_to(n: u64) -> Vec<AbelianPGroup> {
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
        .iter()
        .flat_map(|&p| AbelianPGroup::all_of_order_at_most(p, n).unwrap())
        .filter(|g| !g.is_trivial())
        .collect()
}

fn aut_elements(g: &AbelianPGroup) -> Vec<Automorphism> {
    let aut = enumerate_aut(g, u128::MAX).unwrap();
    aut.elements().map(|k| aut.automorphism(k).unwrap()).collect()
}

/// Free `p'`-subgroups of `Aut(P)` up to conjugacy, by closing every pair
/// of elements. Adequate when all such subgroups are 2-generated, which
/// holds for the small cases used here.
fn free_classes_oracle(g: &AbelianPGroup) -> usize {
    let aut = aut_elements(g);
    let p = g.p();
    let id = Automorphism::identity(&std::sync::Arc::new(g.clone()));
    let close = |gens: &[&Automorphism]| -> Vec<Automorphism> {
        let mut set: Vec<Automorphism> = vec![id.clone()];
        let mut k = 0;
        while k < set.len() {
            for s in gens {
                let y = set[k].compose(s);
                if !set.contains(&y) {
                    set.push(y);
                }
            }
            k += 1;
        }
        set.sort();
        set
    };
    let fixes_nothing = |a: &Automorphism| {
        a.is_identity() || g.elements().filter(|x| !x.is_zero()).all(|x| a.apply(&x).unwrap() != x)
    };
    let mut subgroups: HashSet<Vec<Automorphism>> = HashSet::new();
    for a in &aut {
        for b in &aut {
            let s = close(&[a, b]);
            if s.len() as u64 % p != 0 && s.iter().all(fixes_nothing) {
                subgroups.insert(s);
            }
        }
    }
    let mut classes: Vec<Vec<Automorphism>> = Vec::new();
    for s in subgroups {
        let seen = classes.iter().any(|c| {
            aut.iter().any(|x| {
                let xi = x.inverse();
                let mut conj: Vec<Automorphism> = s.iter().map(|y| xi.compose(y).compose(x)).collect();
                conj.sort();
                &conj == c
            })
        });
        if !seen {
            classes.push(s);
        }
    }
    classes.len()
}

#[test]
fn survey_matches_oracle_on_small_groups() {
    for (p, e) in [(2, vec![1]), (3, vec![1]), (2, vec![1, 1]), (5, vec![1]), (3, vec![2]), (7, vec![1]), (3, vec![1, 1]), (2, vec![2, 1])] {
        let g = AbelianPGroup::new(p, &e).unwrap();
        let survey = frobenius_complement_survey(&g).unwrap();
        assert_eq!(survey.len(), free_classes_oracle(&g), "{g}");
    }
}

#[test]
fn survey_examples() {
    let names = |p: u64, e: &[u32]| -> Vec<String> {
        let g = AbelianPGroup::new(p, e).unwrap();
        let mut v: Vec<String> = frobenius_complement_survey(&g)
            .unwrap()
            .iter()
            .map(|s| identify(s.e()).type_name())
            .collect();
        v.sort();
        v
    };
    assert_eq!(names(2, &[1, 1]), ["C1", "C3"]);
    assert_eq!(names(3, &[1]), ["C1", "C2"]);
    assert_eq!(names(2, &[1]), ["C1"]);
}

#[test]
fn surveyed_facts_up_to_32() {
    for g in groups_up_to(32) {
        let aut_order = enumerate_aut(&g, u128::MAX).unwrap().order();
        for s in frobenius_complement_survey(&g).unwrap() {
            assert!(s.acts_freely && s.is_p_prime, "{g}");
            if s.e().order() > 1 {
                assert!(s.foc().is_whole(), "{g}: free and nontrivial but foc != P");
            }
            if s.is_abelian {
                assert!(s.is_cyclic, "{g}: abelian free complement that is not cyclic");
            }
            // focal subgroup from generators agrees with all of E
            assert_eq!(*s.foc(), focal_subgroup_from_elements(&g, s.e()).unwrap());
            assert_eq!(s.out_pf().order() * s.e().order(), s.normalizer().order());
            if s.e().order() == 1 {
                assert_eq!(s.out_pf().order(), aut_order);
                // with E trivial, Out(P,F) is Aut(P) element for element;
                // for large Aut(P) equal order as a group of automorphisms suffices
                assert!(s.out_pf().aut_parent().is_some());
                if aut_order > 5000 {
                    continue;
                }
                let mut out: Vec<Automorphism> =
                    s.out_pf().elements().map(|k| s.out_pf().automorphism(k).unwrap()).collect();
                let mut all = aut_elements(&g);
                out.sort();
                all.sort();
                assert_eq!(out, all, "{g}");
            }
        }
    }
}

#[test]
fn pair_examples() {
    let v4 = AbelianPGroup::new(2, &[1, 1]).unwrap();
    let pair = build_inertial_pair(&v4, &[make_automorphism(&v4, &[vec![0, 1], vec![1, 1]]).unwrap()]).unwrap();
    assert!(pair.is_frobenius && pair.foc().is_whole());
    assert_eq!(identify(pair.out_pf()).type_name(), "C2");

    let c9 = AbelianPGroup::new(3, &[2]).unwrap();
    let pair = build_inertial_pair(&c9, &[make_automorphism(&c9, &[vec![8]]).unwrap()]).unwrap();
    assert!(pair.acts_freely && pair.foc().is_whole());
    assert_eq!(identify(pair.out_pf()).type_name(), "C3");

    let g = AbelianPGroup::new(2, &[2, 1]).unwrap();
    let pair = build_inertial_pair(&g, &[]).unwrap();
    assert!(!pair.is_frobenius && pair.foc().is_trivial());
    assert_eq!(pair.out_pf().order(), 8);

    let swap = make_automorphism(&v4, &[vec![0, 1], vec![1, 0]]).unwrap();
    let e = build_inertial_pair(&v4, &[swap]).unwrap();
    assert!(!acts_freely(&v4, e.e()));
    assert!(focal_subgroup(&v4, build_inertial_pair(&v4, &[]).unwrap().e()).unwrap().is_trivial());

    // E = Aut(P) leaves nothing outside
    let c5 = AbelianPGroup::new(5, &[1]).unwrap();
    let all = build_inertial_pair(&c5, &[make_automorphism(&c5, &[vec![2]]).unwrap()]).unwrap();
    assert_eq!(all.out_pf().order(), 1);
}
