//! Inertial pairs `(P, E)` with `E ≤ Aut(P)` and the invariants of the
//! fusion system of `P ⋊ E`.
//!
//! For abelian `P` that fusion system is determined by `E`: the
//! `F`-automorphism group of `P` is `E` itself, the focal subgroup is
//! `[P, E]`, and `Out(P, F) = N_{Aut(P)}(E)/E`.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::autgroup::{
    aut_order_formula, automorphism_group, conjugation_orbit, normalizer_in_aut, Automorphism,
    PermContext,
};
use crate::error::{Error, Result};
use crate::group::{quotient_group, FiniteGroup, HomomorphismData, Subgroup};
use crate::pgroup::{subgroup_generated, AbelianPGroup, GroupElement, SubgroupTable};
use crate::schreier::{compose, invert, is_identity, Perm};
use crate::search::{AutSearch, SEARCH_BOUND};

/// Largest `|Aut(P)|` the complement survey walks through.
pub const SURVEY_AUT_BOUND: u128 = 1 << 25;

/// `(P, E)` with its hypotheses and fusion invariants, computed eagerly.
#[derive(Clone, Debug)]
pub struct InertialPair {
    p: Arc<AbelianPGroup>,
    e: FiniteGroup,
    pub is_p_prime: bool,
    pub is_abelian: bool,
    pub is_cyclic: bool,
    pub acts_freely: bool,
    pub is_frobenius: bool,
    foc: SubgroupTable,
    normalizer: FiniteGroup,
    e_in_n: Subgroup,
    out_pf: FiniteGroup,
    projection: Option<HomomorphismData>,
}

impl InertialPair {
    pub fn p(&self) -> &AbelianPGroup {
        &self.p
    }

    pub fn p_arc(&self) -> &Arc<AbelianPGroup> {
        &self.p
    }

    /// `E` as a group of automorphisms of `P`.
    pub fn e(&self) -> &FiniteGroup {
        &self.e
    }

    /// `foc(F) = [P, E]`.
    pub fn foc(&self) -> &SubgroupTable {
        &self.foc
    }

    /// `N_{Aut(P)}(E)`.
    pub fn normalizer(&self) -> &FiniteGroup {
        &self.normalizer
    }

    /// `E` as a subgroup of [`normalizer`](Self::normalizer).
    pub fn e_in_normalizer(&self) -> &Subgroup {
        &self.e_in_n
    }

    /// `Out(P, F) = N_{Aut(P)}(E)/E`.
    pub fn out_pf(&self) -> &FiniteGroup {
        &self.out_pf
    }

    /// The projection `N → N/E`, or `None` when `E` is trivial (then
    /// `out_pf` is `N` itself).
    pub fn projection(&self) -> Option<&HomomorphismData> {
        self.projection.as_ref()
    }

    /// Coset of `n ∈ N` in `Out(P, F)`.
    pub fn project(&self, n: usize) -> usize {
        self.projection.as_ref().map_or(n, |h| h.apply(n))
    }

    pub fn is_focal_whole(&self) -> bool {
        self.foc.is_whole()
    }
}

/// Validate `gens`, close them up to `E`, and compute every flag and
/// invariant of the pair.
pub fn build_inertial_pair(p: &AbelianPGroup, gens: &[Automorphism]) -> Result<InertialPair> {
    let arc = Arc::new(p.clone());
    if gens.iter().any(|g| g.parent() != p) {
        return Err(Error::ParentMismatch);
    }
    let gens: Vec<Automorphism> = gens
        .iter()
        .map(|g| Automorphism::from_images_unchecked(&arc, &images(g)))
        .collect();
    let e = automorphism_group(&arc, &gens)?;
    pair_from_group(arc, e)
}

fn images(a: &Automorphism) -> Vec<GroupElement> {
    (0..a.rank()).map(|j| a.image_of_generator(j)).collect()
}

pub(crate) fn pair_from_group(p: Arc<AbelianPGroup>, e: FiniteGroup) -> Result<InertialPair> {
    let order = e.order() as u64;
    let is_p_prime = order % p.p() != 0;
    let is_abelian = e.is_abelian();
    let is_cyclic = is_abelian && abelian_exponent(&e) == order;
    let acts_freely = acts_freely(&p, &e);
    let is_frobenius = order > 1 && is_cyclic && is_p_prime && acts_freely;
    let foc = focal_subgroup(&p, &e)?;
    let (normalizer, e_in_n, out_pf, projection) = out_pf_parts(&e)?;
    Ok(InertialPair {
        p,
        e,
        is_p_prime,
        is_abelian,
        is_cyclic,
        acts_freely,
        is_frobenius,
        foc,
        normalizer,
        e_in_n,
        out_pf,
        projection,
    })
}

// lcm of generator orders, which is the exponent when `e` is abelian
fn abelian_exponent(e: &FiniteGroup) -> u64 {
    e.generators().iter().fold(1u64, |acc, &g| {
        let o = e.element_order(g) as u64;
        acc / gcd(acc, o) * o
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Does every non-identity element of `E` fix only `0`?
pub fn acts_freely(p: &AbelianPGroup, e: &FiniteGroup) -> bool {
    if e.order() == 1 {
        return true;
    }
    // E permutes P∖{0} in regular orbits, so |E| divides |P| - 1
    if (p.order() - 1) % e.order() as u64 != 0 {
        return false;
    }
    e.elements().skip(1).all(|a| {
        let perm = e.permutation(a).expect("group of automorphisms");
        perm.iter().enumerate().skip(1).all(|(x, &y)| x as u32 != y)
    })
}

/// `[P, E]`, generated by `φ(g) - g` over the generators `φ` of `E` and `g`
/// of `P`. Generators suffice: the span of these differences is
/// `E`-stable, and `φψ - 1 = φ(ψ - 1) + (φ - 1)`.
pub fn focal_subgroup(p: &AbelianPGroup, e: &FiniteGroup) -> Result<SubgroupTable> {
    let mut gens = Vec::new();
    for &a in e.generators() {
        let phi = e.automorphism(a).ok_or(Error::ParentMismatch)?;
        for x in p.generators() {
            gens.push(p.sub(&phi.apply(&x)?, &x)?);
        }
    }
    subgroup_generated(p, &gens)
}

/// `[P, E]` from every element of `E` and every element of `P`.
pub fn focal_subgroup_from_elements(p: &AbelianPGroup, e: &FiniteGroup) -> Result<SubgroupTable> {
    let mut gens = Vec::new();
    for a in e.elements() {
        let phi = e.automorphism(a).ok_or(Error::ParentMismatch)?;
        for x in p.elements() {
            gens.push(p.sub(&phi.apply(&x)?, &x)?);
        }
    }
    subgroup_generated(p, &gens)
}

type OutParts = (FiniteGroup, Subgroup, FiniteGroup, Option<HomomorphismData>);

fn out_pf_parts(e: &FiniteGroup) -> Result<OutParts> {
    let n = normalizer_in_aut(e)?;
    if e.order() == 1 {
        let triv = n.trivial_subgroup();
        return Ok((n.clone(), triv, n, None));
    }
    let idx: Vec<usize> = e
        .elements()
        .map(|a| {
            let perm = e.permutation(a).expect("group of automorphisms");
            n.index_of_permutation(&perm)
                .ok_or_else(|| Error::NotASubgroup("E is not inside its normaliser".into()))
        })
        .collect::<Result<_>>()?;
    let gens: Vec<usize> = e
        .generators()
        .iter()
        .map(|&g| n.index_of_permutation(&e.permutation(g).expect("automorphisms")))
        .collect::<Option<_>>()
        .expect("generators lie in E");
    let mut sub = n.subgroup_from_elements(&idx)?;
    if sub.order() != e.order() {
        return Err(Error::NotASubgroup(format!("{} ≠ {}", sub.order(), e.order())));
    }
    sub = sub.with_generators(gens);
    if e.order() == n.order() {
        let q = FiniteGroup::trivial();
        let proj = HomomorphismData::from_fn_unchecked(n.clone(), q.clone(), |_| 0);
        return Ok((n, sub, q, Some(proj)));
    }
    let qd = quotient_group(&n, &sub)?;
    Ok((n, sub, qd.group, Some(qd.projection)))
}

/// `Out(P, F) = N_{Aut(P)}(E)/E`.
pub fn out_pf(e: &FiniteGroup) -> Result<FiniteGroup> {
    Ok(out_pf_parts(e)?.2)
}

/// Representatives, up to `Aut(P)`-conjugacy, of all subgroups of `Aut(P)`
/// acting freely on `P∖{0}` (these are automatically of `p'`-order), with
/// their pairs. Sorted by `|E|`, then by the canonical key of the
/// representative.
pub fn frobenius_complement_survey(p: &AbelianPGroup) -> Result<Vec<InertialPair>> {
    let classes = free_subgroup_classes(p)?;
    let arc = Arc::new(p.clone());
    let ctx = PermContext::new(&arc);
    classes
        .into_iter()
        .map(|elems| {
            let gens = small_generating_set(&elems);
            let autos: Vec<Automorphism> = gens
                .iter()
                .map(|perm| key_to_automorphism(&ctx, &ctx.key_of(perm)))
                .collect();
            let e = automorphism_group(&arc, &autos)?;
            pair_from_group(arc.clone(), e)
        })
        .collect()
}

fn key_to_automorphism(ctx: &PermContext, key: &[u32]) -> Automorphism {
    let parent = &ctx.parent;
    let images: Vec<GroupElement> = key.iter().map(|&k| parent.element_at(k as usize)).collect();
    Automorphism::from_images_unchecked(parent, &images)
}

fn small_generating_set(elems: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut span: HashSet<Perm> = elems.iter().filter(|x| is_identity(x)).cloned().collect();
    let mut sorted: Vec<&Perm> = elems.iter().collect();
    sorted.sort_by_key(|x| std::cmp::Reverse(perm_order(x)));
    for x in sorted {
        if span.len() == elems.len() {
            break;
        }
        if !span.contains(x) {
            gens.push(x.clone());
            span = closure_perms(&gens, usize::MAX).expect("finite").into_iter().collect();
        }
    }
    gens
}

fn perm_order(x: &[u32]) -> usize {
    let mut y = x.to_vec();
    let mut k = 1;
    while !is_identity(&y) {
        y = compose(x, &y);
        k += 1;
    }
    k
}

fn closure_perms(gens: &[Perm], cap: usize) -> Option<Vec<Perm>> {
    let id: Perm = (0..gens.first().map_or(0, Vec::len) as u32).collect();
    crate::group::closure(gens, &id, |a, b| compose(a, b), Some(cap))
}

// Semiregular on P∖{0}: all cycles have the same length.
fn is_semiregular(perm: &[u32]) -> bool {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut len = 0;
    for start in 1..n {
        if seen[start] {
            continue;
        }
        let mut k = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            k += 1;
        }
        if len == 0 {
            len = k;
        } else if k != len {
            return false;
        }
    }
    true
}

enum SeenSet {
    Bits { base: u64, bits: Vec<u64> },
    Hash { base: u64, set: HashSet<u64> },
    Wide(HashSet<Vec<u32>>),
}

impl SeenSet {
    fn new(base: u64, r: usize) -> Self {
        let total = (base as u128).checked_pow(r as u32);
        match total {
            Some(t) if t <= 1 << 31 => SeenSet::Bits {
                base,
                bits: vec![0; (t as usize).div_ceil(64)],
            },
            Some(t) if t <= u64::MAX as u128 => SeenSet::Hash {
                base,
                set: HashSet::new(),
            },
            _ => SeenSet::Wide(HashSet::new()),
        }
    }

    fn pack(base: u64, key: &[u32]) -> u64 {
        key.iter().fold(0u64, |acc, &k| acc * base + k as u64)
    }

    /// Inserts; returns whether `key` was new.
    fn insert(&mut self, key: &[u32]) -> bool {
        match self {
            SeenSet::Bits { base, bits } => {
                let i = Self::pack(*base, key) as usize;
                let (w, b) = (i / 64, i % 64);
                let fresh = bits[w] >> b & 1 == 0;
                bits[w] |= 1 << b;
                fresh
            }
            SeenSet::Hash { base, set } => set.insert(Self::pack(*base, key)),
            SeenSet::Wide(set) => set.insert(key.to_vec()),
        }
    }

    fn contains(&self, key: &[u32]) -> bool {
        match self {
            SeenSet::Bits { base, bits } => {
                let i = Self::pack(*base, key) as usize;
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            SeenSet::Hash { base, set } => set.contains(&Self::pack(*base, key)),
            SeenSet::Wide(set) => set.contains(key),
        }
    }
}

fn powers(x: &[u32]) -> Vec<Perm> {
    let mut out = vec![(0..x.len() as u32).collect::<Perm>()];
    let mut y = x.to_vec();
    while !is_identity(&y) {
        out.push(y.clone());
        y = compose(x, &y);
    }
    out
}

/// Element lists (as permutations of `P`) of class representatives.
pub(crate) fn free_subgroup_classes(p: &AbelianPGroup) -> Result<Vec<Vec<Perm>>> {
    if p.order() > SEARCH_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: p.order() as u128,
            bound: SEARCH_BOUND as u128,
        });
    }
    let aut_order = aut_order_formula(p);
    if aut_order > SURVEY_AUT_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: aut_order,
            bound: SURVEY_AUT_BOUND,
        });
    }
    let arc = Arc::new(p.clone());
    let ctx = PermContext::new(&arc);
    let identity: Perm = (0..p.order() as u32).collect();

    // every free cyclic subgroup, found through its generators
    let mut seen = SeenSet::new(p.order(), p.rank());
    let mut cyclic: Vec<Vec<Perm>> = Vec::new();
    let _ = AutSearch::new(p).run(true, |perm| {
        let key = ctx.key_of(perm);
        if seen.contains(&key) || !is_semiregular(perm) {
            return ControlFlow::Continue(());
        }
        let all = powers(perm);
        let m = all.len();
        let mut divisors: Vec<usize> = (1..m).filter(|d| m % d == 0).collect();
        divisors.reverse();
        for d in divisors {
            let psi = &all[d];
            if seen.contains(&ctx.key_of(psi)) {
                continue;
            }
            let sub: Vec<Perm> = (0..m / d).map(|k| all[(k * d) % m].clone()).collect();
            for x in &sub {
                seen.insert(&ctx.key_of(x));
            }
            cyclic.push(sub);
        }
        ControlFlow::Continue(())
    });

    let mut known: HashSet<Vec<u32>> = HashSet::new();
    let mut reps: Vec<(Vec<u32>, Vec<Perm>)> = Vec::new();
    let register = |elems: &[Perm], known: &mut HashSet<Vec<u32>>, reps: &mut Vec<_>| {
        register_class(&ctx, elems, known, reps)
    };
    register(&[identity], &mut known, &mut reps);
    for sub in &cyclic {
        register(sub, &mut known, &mut reps);
    }

    // non-cyclic free subgroups are joins ⟨H, C⟩ with C cyclic and free
    let target = (p.order() - 1) as usize;
    let cyclic_sets: Vec<HashSet<&Perm>> = cyclic.iter().map(|c| c.iter().collect()).collect();
    let mut next = 1;
    while next < reps.len() {
        let h = reps[next].1.clone();
        next += 1;
        if target % h.len() != 0 || target / h.len() < 2 {
            continue;
        }
        let h_set: HashSet<&Perm> = h.iter().collect();
        let h_gens = small_generating_set(&h);
        for (c, c_set) in cyclic.iter().zip(&cyclic_sets) {
            if c_set.iter().all(|x| h_set.contains(x)) {
                continue;
            }
            let mut gens = h_gens.clone();
            gens.push(c[1].clone());
            let Some(joined) = closure_perms(&gens, target) else {
                continue;
            };
            if target % joined.len() != 0 || !joined.iter().all(|x| is_identity(x) || is_fpf(x)) {
                continue;
            }
            register(&joined, &mut known, &mut reps);
        }
    }
    let mut out = reps;
    out.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, elems)| elems).collect())
}

// Adds the class of the subgroup `elems` unless already known; the stored
// representative is the one with the smallest key in its orbit.
fn register_class(
    ctx: &PermContext,
    elems: &[Perm],
    known: &mut HashSet<Vec<u32>>,
    reps: &mut Vec<(Vec<u32>, Vec<Perm>)>,
) {
    let mut keys: Vec<Vec<u32>> = elems.iter().map(|x| ctx.key_of(x)).collect();
    let key = ctx.subgroup_key(&mut keys);
    if known.contains(&key) {
        return;
    }
    let (orbit, _, _) = conjugation_orbit(ctx, key);
    let min = orbit.iter().min().expect("orbit contains the key").clone();
    known.extend(orbit);
    let r = ctx.parent.rank().max(1);
    let rep: Vec<Perm> = min.chunks(r).map(|k| ctx.perm_of(k)).collect();
    reps.push((min, rep));
}

fn is_fpf(x: &[u32]) -> bool {
    x.iter().enumerate().skip(1).all(|(i, &y)| i as u32 != y)
}

/// Conjugacy classes of subgroups of `Aut(P)` by brute force, for the tests:
/// closes every pair of elements and dedupes by conjugation.
#[doc(hidden)]
pub fn free_subgroups_by_brute_force(p: &AbelianPGroup) -> Vec<Vec<Perm>> {
    let aut = crate::autgroup::enumerate_aut(p, 1 << 16).expect("small Aut(P)");
    let perms: Vec<Perm> = aut.elements().map(|a| aut.permutation(a).unwrap()).collect();
    let free: Vec<&Perm> = perms.iter().filter(|x| is_identity(x) || is_fpf(x)).collect();
    let id: Perm = (0..p.order() as u32).collect();
    let mut subgroups: HashSet<Vec<Perm>> = HashSet::new();
    subgroups.insert(vec![id]);
    let mut frontier: Vec<Vec<Perm>> = subgroups.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for x in &free {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.clone();
            gens.push((*x).clone());
            let Some(mut g) = closure_perms(&gens, perms.len()) else {
                continue;
            };
            if !g.iter().all(|y| is_identity(y) || is_fpf(y)) {
                continue;
            }
            g.sort();
            if subgroups.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
    // one representative per conjugacy class
    let mut classes: Vec<Vec<Perm>> = Vec::new();
    let mut covered: HashSet<Vec<Perm>> = HashSet::new();
    let mut all: Vec<Vec<Perm>> = subgroups.into_iter().collect();
    all.sort();
    let inv: HashMap<&Perm, Perm> = perms.iter().map(|x| (x, invert(x))).collect();
    for h in all {
        if covered.contains(&h) {
            continue;
        }
        for g in &perms {
            let mut c: Vec<Perm> = h.iter().map(|x| compose(g, &compose(x, &inv[g]))).collect();
            c.sort();
            covered.insert(c);
        }
        classes.push(h);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u64, e: &[u32]) -> AbelianPGroup {
        AbelianPGroup::new(p, e).unwrap()
    }

    fn auto(p: &AbelianPGroup, rows: &[Vec<i64>]) -> Automorphism {
        crate::autgroup::make_automorphism(p, rows).unwrap()
    }

    #[test]
    fn klein_four_with_order_three() {
        let v4 = group(2, &[1, 1]);
        let pair = build_inertial_pair(&v4, &[auto(&v4, &[vec![0, 1], vec![1, 1]])]).unwrap();
        assert_eq!(pair.e().order(), 3);
        assert!(pair.is_frobenius);
        assert!(pair.foc().is_whole());
        assert_eq!(pair.out_pf().order(), 2);
    }

    #[test]
    fn c9_inversion() {
        let c9 = group(3, &[2]);
        let pair = build_inertial_pair(&c9, &[auto(&c9, &[vec![-1]])]).unwrap();
        assert!(pair.acts_freely);
        assert!(pair.is_frobenius);
        assert!(pair.foc().is_whole());
        assert_eq!(pair.out_pf().order(), 3);
        assert!(pair.out_pf().is_cyclic());
    }

    #[test]
    fn trivial_inertial_group() {
        let g = group(2, &[2, 1]);
        let pair = build_inertial_pair(&g, &[]).unwrap();
        assert!(!pair.is_frobenius);
        assert!(pair.acts_freely);
        assert!(pair.foc().is_trivial());
        assert_eq!(pair.out_pf().order(), 8);
    }

    #[test]
    fn swap_is_not_free() {
        let v4 = group(2, &[1, 1]);
        let pair = build_inertial_pair(&v4, &[auto(&v4, &[vec![0, 1], vec![1, 0]])]).unwrap();
        assert!(!pair.acts_freely);
        assert!(!pair.is_p_prime);
    }

    #[test]
    fn whole_aut_gives_trivial_out() {
        let c9 = group(3, &[2]);
        let pair = build_inertial_pair(&c9, &[auto(&c9, &[vec![2]])]).unwrap();
        assert_eq!(pair.out_pf().order(), 1);
    }

    #[test]
    fn survey_small_cases() {
        let sizes = |p: u64, e: &[u32]| -> Vec<usize> {
            frobenius_complement_survey(&group(p, e))
                .unwrap()
                .iter()
                .map(|x| x.e().order())
                .collect()
        };
        assert_eq!(sizes(2, &[1, 1]), vec![1, 3]);
        assert_eq!(sizes(3, &[1]), vec![1, 2]);
        assert_eq!(sizes(2, &[1]), vec![1]);
        assert_eq!(sizes(5, &[1]), vec![1, 2, 4]);
    }

    #[test]
    fn survey_matches_brute_force() {
        for (p, e) in [(3, vec![1, 1]), (2, vec![1, 1, 1]), (2, vec![2, 1]), (3, vec![2]), (2, vec![2, 2])] {
            let g = group(p, &e);
            let mut fast: Vec<usize> = free_subgroup_classes(&g).unwrap().iter().map(Vec::len).collect();
            let mut slow: Vec<usize> = free_subgroups_by_brute_force(&g).iter().map(Vec::len).collect();
            fast.sort_unstable();
            slow.sort_unstable();
            assert_eq!(fast, slow, "{g}");
        }
    }

    #[test]
    fn semiregularity() {
        assert!(is_semiregular(&[0, 2, 1, 4, 3]));
        assert!(!is_semiregular(&[0, 2, 1, 3, 4]));
    }
}
