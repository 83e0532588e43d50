//! Finite groups on index sets.
//!
//! A [`FiniteGroup`] has elements `0..order` with `0` the identity. The
//! multiplication is backed by one of several laws: a dense Cayley table, a
//! permutation group on the elements of an abelian p-group (ranked through a
//! stabiliser chain), an explicit list of automorphisms, a coset table of a
//! quotient, a semidirect product of two smaller groups, or a subgroup of
//! another group. All algorithms (normalisers, quotients, identification, exactness
//! checks) work on indices and never care which law is underneath.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::autgroup::Automorphism;
use crate::error::{Error, Result};
use crate::pgroup::{AbelianPGroup, GroupElement};
use crate::schreier::StabChain;

#[derive(Clone)]
pub struct FiniteGroup(Arc<Inner>);

struct Inner {
    order: usize,
    generators: Vec<usize>,
    law: Law,
}

enum Law {
    Dense {
        mul: Vec<u32>,
        inv: Vec<u32>,
        labels: Option<Vec<String>>,
    },
    Perm {
        parent: Arc<AbelianPGroup>,
        chain: Arc<StabChain>,
    },
    Aut {
        elems: Vec<Automorphism>,
        index: HashMap<Automorphism, u32>,
        inv: Vec<u32>,
    },
    Quotient {
        parent: FiniteGroup,
        coset_of: Vec<u32>,
        reps: Vec<u32>,
    },
    Semidirect {
        normal: FiniteGroup,
        top: FiniteGroup,
        // action[h * |A| + a] = h·a
        action: Vec<u32>,
    },
    Sub {
        parent: FiniteGroup,
        elems: Vec<u32>,
        index: HashMap<u32, u32>,
    },
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.0.law {
            Law::Dense { .. } => "table",
            Law::Perm { .. } | Law::Aut { .. } => "automorphisms",
            Law::Quotient { .. } => "quotient",
            Law::Semidirect { .. } => "semidirect",
            Law::Sub { .. } => "subgroup",
        };
        write!(f, "FiniteGroup({kind}, order {})", self.order())
    }
}

/// BFS closure of `gens` under right multiplication, starting from the identity.
///
/// Returns `None` once more than `cap` elements have been produced.
pub fn closure<T, F>(gens: &[T], identity: &T, mul: F, cap: Option<usize>) -> Option<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    let mut out = vec![identity.clone()];
    seen.insert(identity.clone());
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                out.push(y);
                if cap.is_some_and(|c| out.len() > c) {
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// Result of [`orbit_stabilizer`].
#[derive(Debug, Clone)]
pub struct OrbitStabilizer<T, X> {
    pub orbit: Vec<X>,
    pub stabilizer: Vec<T>,
}

/// Orbit of `point` under the group generated by `gens`, with the full
/// element list of its stabiliser.
///
/// `act(g, x)` must be a left action (`act(gh, x) = act(g, act(h, x))`) and
/// `mul(g, h)` the product `gh`. When `group_order` is known, Schreier
/// generators stop being processed as soon as `|orbit|·|stab| = |G|`.
pub fn orbit_stabilizer<T, X, M, I, A>(
    gens: &[T],
    identity: &T,
    mul: M,
    inv: I,
    point: X,
    act: A,
    group_order: Option<u128>,
) -> OrbitStabilizer<T, X>
where
    T: Clone + Eq + Hash,
    X: Clone + Eq + Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
    A: Fn(&T, &X) -> X,
{
    let mut stab_list = vec![identity.clone()];
    let mut stab: HashSet<T> = HashSet::new();
    stab.insert(identity.clone());
    let mut stab_gens: Vec<T> = Vec::new();
    let orbit = schreier_generators(gens, identity, &mul, inv, point, act, |h, orbit_len| {
        if group_order.is_some_and(|n| stab_list.len() as u128 * orbit_len as u128 >= n) {
            return false;
        }
        if !stab.contains(&h) {
            stab_gens.push(h);
            stab_list = closure(&stab_gens, identity, &mul, None).expect("finite group");
            stab = stab_list.iter().cloned().collect();
        }
        true
    });
    OrbitStabilizer {
        orbit,
        stabilizer: stab_list,
    }
}

/// Orbit of `point` with a transversal; every Schreier generator of the
/// stabiliser is passed to `visit` together with the orbit length, until
/// `visit` returns `false`.
pub fn schreier_generators<T, X, M, I, A, V>(
    gens: &[T],
    identity: &T,
    mul: M,
    inv: I,
    point: X,
    act: A,
    mut visit: V,
) -> Vec<X>
where
    T: Clone,
    X: Clone + Eq + Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
    A: Fn(&T, &X) -> X,
    V: FnMut(T, usize) -> bool,
{
    let gen_inv: Vec<T> = gens.iter().map(&inv).collect();
    let mut orbit: IndexSet<X> = IndexSet::new();
    orbit.insert(point);
    // trans[k] maps the base point to orbit[k]; also keep inverses
    let mut trans = vec![identity.clone()];
    let mut trans_inv = vec![identity.clone()];
    let mut head = 0;
    while head < orbit.len() {
        let y = orbit[head].clone();
        for (s, s_inv) in gens.iter().zip(&gen_inv) {
            let z = act(s, &y);
            if orbit.insert(z) {
                trans.push(mul(s, &trans[head]));
                trans_inv.push(mul(&trans_inv[head], s_inv));
            }
        }
        head += 1;
    }
    let n = orbit.len();
    'outer: for k in 0..n {
        for s in gens {
            let z = act(s, &orbit[k]);
            let j = orbit.get_index_of(&z).expect("orbit is closed");
            let h = mul(&trans_inv[j], &mul(s, &trans[k]));
            if !visit(h, n) {
                break 'outer;
            }
        }
    }
    orbit.into_iter().collect()
}

impl FiniteGroup {
    fn new(order: usize, generators: Vec<usize>, law: Law) -> Self {
        let mut g = FiniteGroup(Arc::new(Inner {
            order,
            generators,
            law,
        }));
        if g.0.generators.is_empty() && order > 1 {
            let gens = g.greedy_generators();
            Arc::get_mut(&mut g.0).expect("fresh").generators = gens;
        }
        g
    }

    pub fn trivial() -> Self {
        Self::new(
            1,
            vec![],
            Law::Dense {
                mul: vec![0],
                inv: vec![0],
                labels: None,
            },
        )
    }

    /// The cyclic group `Z/n`, element `k` standing for `k` (additively).
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order zero");
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::new(n, gens, Law::Dense { mul, inv, labels: None })
    }

    /// `⊕ Z/d_i` as a dense table; element index is mixed radix with the
    /// first factor most significant.
    pub fn abelian(invariants: &[usize]) -> Self {
        let n: usize = invariants.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; invariants.len()];
            for i in (0..invariants.len()).rev() {
                d[i] = x % invariants[i];
                x /= invariants[i];
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().zip(invariants).fold(0, |acc, (&x, &m)| acc * m + x);
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let da = digits(a);
            let neg: Vec<usize> = da.iter().zip(invariants).map(|(&x, &m)| (m - x) % m).collect();
            inv[a] = undigits(&neg) as u32;
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<usize> = da
                    .iter()
                    .zip(&db)
                    .zip(invariants)
                    .map(|((&x, &y), &m)| (x + y) % m)
                    .collect();
                mul[a * n + b] = undigits(&sum) as u32;
            }
        }
        let gens = (0..invariants.len())
            .filter(|&i| invariants[i] > 1)
            .map(|i| {
                let mut d = vec![0; invariants.len()];
                d[i] = 1;
                undigits(&d)
            })
            .collect();
        Self::new(n, gens, Law::Dense { mul, inv, labels: None })
    }

    /// Build from a full Cayley table `table[a][b] = a·b` with identity `0`.
    ///
    /// Checks the identity, latin-square, and associativity laws.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Error::NotASubgroup(format!("invalid Cayley table: {m}"));
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(bad("shape"));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(bad("0 is not the identity"));
            }
            let mut seen = vec![false; n];
            for &b in &table[a] {
                if b >= n || seen[b] {
                    return Err(bad("row is not a permutation"));
                }
                seen[b] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        Ok(Self::from_table_unchecked(table, None))
    }

    pub(crate) fn from_table_unchecked(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Self {
        let n = table.len();
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                let c = table[a][b];
                mul[a * n + b] = c as u32;
                if c == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        Self::new(
            n,
            vec![],
            Law::Dense {
                mul,
                inv,
                labels,
            },
        )
    }

    /// Closure of concrete elements under `mul`, as a dense table.
    pub fn generated_by<T, F>(gens: &[T], identity: &T, mul: F) -> Self
    where
        T: Clone + Eq + Hash + fmt::Debug,
        F: Fn(&T, &T) -> T,
    {
        let elems = closure(gens, identity, &mul, None).expect("finite group");
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        let mut g = Self::from_table_unchecked(&table, None);
        let gen_idx: Vec<usize> = gens.iter().map(|x| index[x]).filter(|&i| i != 0).collect();
        Arc::get_mut(&mut g.0).expect("fresh").generators = gen_idx;
        g
    }

    /// The subgroup of Aut(P) generated by `gens`, as a permutation group on
    /// the elements of `P` (which must have at most
    /// [`PERMUTATION_BOUND`](crate::autgroup::PERMUTATION_BOUND) elements).
    pub(crate) fn from_permutation_chain(
        parent: Arc<AbelianPGroup>,
        chain: StabChain,
        gens: &[Vec<u32>],
    ) -> Result<Self> {
        let order = usize::try_from(chain.order()).map_err(|_| Error::OrderBoundExceeded {
            order: chain.order(),
            bound: usize::MAX as u128,
        })?;
        let mut generators: Vec<usize> = gens
            .iter()
            .map(|g| chain.index_of(g).map(|i| i as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotASubgroup("generator outside the chain".into()))?;
        generators.retain(|&i| i != 0);
        generators.dedup();
        Ok(Self::new(
            order,
            generators,
            Law::Perm {
                parent,
                chain: Arc::new(chain),
            },
        ))
    }

    /// The parent `P` when this is a group of automorphisms of `P`.
    pub fn aut_parent(&self) -> Option<&Arc<AbelianPGroup>> {
        match &self.0.law {
            Law::Perm { parent, .. } => Some(parent),
            Law::Aut { elems, .. } => Some(elems[0].parent_arc()),
            _ => None,
        }
    }

    /// Group whose elements are the given automorphisms (assumed closed).
    ///
    /// Elements are sorted canonically with the identity first.
    pub fn from_automorphisms(mut elems: Vec<Automorphism>, gens: &[Automorphism]) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::NotASubgroup("empty".into()));
        }
        elems.sort();
        elems.dedup();
        let id_pos = elems
            .iter()
            .position(Automorphism::is_identity)
            .ok_or_else(|| Error::NotASubgroup("identity missing".into()))?;
        let id = elems.remove(id_pos);
        elems.insert(0, id);
        let index: HashMap<Automorphism, u32> =
            elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut inv = vec![0u32; elems.len()];
        for (i, e) in elems.iter().enumerate() {
            let ie = e.inverse();
            inv[i] = *index
                .get(&ie)
                .ok_or_else(|| Error::NotASubgroup("not closed under inverses".into()))?;
        }
        let generators = gens
            .iter()
            .map(|g| {
                index
                    .get(g)
                    .map(|&i| i as usize)
                    .ok_or_else(|| Error::NotASubgroup("generator not in element list".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = elems.len();
        Ok(Self::new(n, generators, Law::Aut { elems, index, inv }))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.law {
            Law::Dense { mul, .. } => mul[a * self.order() + b] as usize,
            Law::Perm { chain, .. } => chain.mul(a as u128, b as u128) as usize,
            Law::Aut { elems, index, .. } => {
                let c = elems[a].compose(&elems[b]);
                index[&c] as usize
            }
            Law::Quotient {
                parent,
                coset_of,
                reps,
            } => coset_of[parent.mul(reps[a] as usize, reps[b] as usize)] as usize,
            Law::Semidirect {
                normal,
                top,
                action,
            } => {
                let n = normal.order();
                let (a1, h1) = (a % n, a / n);
                let (a2, h2) = (b % n, b / n);
                let moved = action[h1 * n + a2] as usize;
                normal.mul(a1, moved) + n * top.mul(h1, h2)
            }
            Law::Sub {
                parent,
                elems,
                index,
            } => index[&(parent.mul(elems[a] as usize, elems[b] as usize) as u32)] as usize,
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.0.law {
            Law::Dense { inv, .. } | Law::Aut { inv, .. } => inv[a] as usize,
            Law::Perm { chain, .. } => chain.inv(a as u128) as usize,
            Law::Quotient {
                parent,
                coset_of,
                reps,
            } => coset_of[parent.inv(reps[a] as usize)] as usize,
            Law::Semidirect {
                normal,
                top,
                action,
            } => {
                // (a,h)^{-1} = (h^{-1}·a^{-1}, h^{-1})
                let n = normal.order();
                let (x, h) = (a % n, a / n);
                let hi = top.inv(h);
                action[hi * n + normal.inv(x)] as usize + n * hi
            }
            Law::Sub {
                parent,
                elems,
                index,
            } => index[&(parent.inv(elems[a] as usize) as u32)] as usize,
        }
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut result = 0;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        result
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|a| self.element_order(a) == self.order())
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.law {
            Law::Dense { labels, .. } => labels
                .as_ref()
                .map_or_else(|| format!("#{a}"), |l| l[a].clone()),
            Law::Aut { elems, .. } => elems[a].to_string(),
            Law::Perm { .. } => self.automorphism(a).expect("automorphism law").to_string(),
            Law::Quotient { parent, reps, .. } => format!("{}·N", parent.label(reps[a] as usize)),
            Law::Semidirect { normal, top, .. } => {
                let n = normal.order();
                format!("({}, {})", normal.label(a % n), top.label(a / n))
            }
            Law::Sub { parent, elems, .. } => parent.label(elems[a] as usize),
        }
    }

    /// The automorphism behind element `a`, when this group is made of them.
    pub fn automorphism(&self, a: usize) -> Option<Automorphism> {
        match &self.0.law {
            Law::Aut { elems, .. } => Some(elems[a].clone()),
            Law::Perm { parent, chain } => {
                let images: Vec<GroupElement> = (0..parent.rank())
                    .map(|j| {
                        let g = parent.index_of(&parent.generator(j)) as u32;
                        parent.element_at(chain.apply(a as u128, g) as usize)
                    })
                    .collect();
                Some(Automorphism::from_images_unchecked(parent, &images))
            }
            _ => None,
        }
    }

    /// The permutation of `P`'s elements induced by element `a`.
    pub fn permutation(&self, a: usize) -> Option<Vec<u32>> {
        match &self.0.law {
            Law::Perm { chain, .. } => Some(chain.element(a as u128)),
            Law::Aut { elems, .. } => Some(elems[a].to_permutation()),
            _ => None,
        }
    }

    pub fn index_of_automorphism(&self, x: &Automorphism) -> Option<usize> {
        match &self.0.law {
            Law::Aut { index, .. } => index.get(x).map(|&i| i as usize),
            Law::Perm { parent, chain } => {
                if x.parent() != parent.as_ref() {
                    return None;
                }
                chain.index_of(&x.to_permutation()).map(|i| i as usize)
            }
            _ => None,
        }
    }

    /// Index of the element acting on `P` by the permutation `perm`.
    pub fn index_of_permutation(&self, perm: &[u32]) -> Option<usize> {
        match &self.0.law {
            Law::Perm { chain, .. } => chain.index_of(perm).map(|i| i as usize),
            Law::Aut { elems, index, .. } => {
                let parent = elems[0].parent_arc();
                if perm.len() as u64 != parent.order() {
                    return None;
                }
                let images: Vec<GroupElement> = (0..parent.rank())
                    .map(|j| parent.element_at(perm[parent.index_of(&parent.generator(j))] as usize))
                    .collect();
                let a = Automorphism::from_images_unchecked(parent, &images);
                index.get(&a).map(|&i| i as usize)
            }
            _ => None,
        }
    }

    /// Every element as an automorphism (materialises the whole group).
    pub fn automorphisms(&self) -> Option<Vec<Automorphism>> {
        match &self.0.law {
            Law::Aut { elems, .. } => Some(elems.clone()),
            Law::Perm { .. } => Some(
                self.elements()
                    .map(|a| self.automorphism(a).expect("automorphism law"))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Cayley table, `table[a][b] = a·b`.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|a| self.elements().map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Copy into a dense table (keeps labels).
    pub fn to_dense(&self) -> FiniteGroup {
        if matches!(self.0.law, Law::Dense { .. }) {
            return self.clone();
        }
        let labels = self.elements().map(|a| self.label(a)).collect();
        let mut g = Self::from_table_unchecked(&self.cayley_table(), Some(labels));
        Arc::get_mut(&mut g.0).expect("fresh").generators = self.generators().to_vec();
        g
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = [0].into_iter().collect();
        // prefer elements of large order
        let mut cands: Vec<usize> = self.elements().skip(1).collect();
        cands.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in cands {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure_indices(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut v = closure(gens, &0usize, |&a, &b| self.mul(a, b), None).expect("finite");
        v.sort_unstable();
        v
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        Subgroup {
            elems: self.closure_indices(gens),
            gens: gens.to_vec(),
        }
    }

    /// The whole group as a [`Subgroup`] of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elems: self.elements().collect(),
            gens: self.generators().to_vec(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elems: vec![0],
            gens: vec![],
        }
    }

    /// Verify a set of indices is a subgroup.
    pub fn subgroup_from_elements(&self, elems: &[usize]) -> Result<Subgroup> {
        let mut v = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.first() != Some(&0) || v.iter().any(|&x| x >= self.order()) {
            return Err(Error::NotASubgroup("identity missing or index out of range".into()));
        }
        let set: HashSet<usize> = v.iter().copied().collect();
        for &a in &v {
            for &b in &v {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup("not closed".into()));
                }
            }
        }
        Ok(Subgroup { elems: v, gens: vec![] })
    }

    /// Materialise a subgroup as a group in its own right.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> FiniteGroup {
        let elems: Vec<u32> = s.elems.iter().map(|&x| x as u32).collect();
        let index: HashMap<u32, u32> =
            elems.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let generators = s
            .gens
            .iter()
            .filter_map(|g| index.get(&(*g as u32)).map(|&i| i as usize))
            .filter(|&i| i != 0)
            .collect();
        Self::new(
            elems.len(),
            generators,
            Law::Sub {
                parent: self.clone(),
                elems,
                index,
            },
        )
    }
}

/// A subgroup of some [`FiniteGroup`], as a sorted index list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// Same subgroup, recording `gens` (which must generate it) as generators.
    pub fn with_generators(mut self, gens: Vec<usize>) -> Self {
        self.gens = gens;
        self
    }
}

fn check_subgroup(g: &FiniteGroup, e: &Subgroup) -> Result<()> {
    if e.elems.iter().any(|&x| x >= g.order()) || !e.contains(0) {
        return Err(Error::NotASubgroup("index out of range".into()));
    }
    for &a in &e.elems {
        for &b in e.gens.iter().chain(e.elems.iter().take(1)) {
            if !e.contains(g.mul(a, b)) {
                return Err(Error::NotASubgroup("not closed".into()));
            }
        }
    }
    Ok(())
}

/// `{g ∈ G : gEg⁻¹ = E}` straight from the definition.
pub fn normalizer(g: &FiniteGroup, e: &Subgroup) -> Result<Subgroup> {
    check_subgroup(g, e)?;
    let elems: Vec<usize> = g
        .elements()
        .filter(|&x| e.elems.iter().all(|&y| e.contains(g.conj(x, y))))
        .collect();
    Ok(Subgroup {
        elems,
        gens: vec![],
    })
}

/// `{g ∈ G : gx = xg for all x ∈ E}` straight from the definition.
pub fn centralizer(g: &FiniteGroup, e: &Subgroup) -> Result<Subgroup> {
    check_subgroup(g, e)?;
    let elems: Vec<usize> = g
        .elements()
        .filter(|&x| e.elems.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Ok(Subgroup {
        elems,
        gens: vec![],
    })
}

/// Normaliser as the stabiliser of `E` under conjugation, computed from the
/// generators of `G` by orbit–stabiliser.
pub fn normalizer_structured(g: &FiniteGroup, e: &Subgroup) -> Result<Subgroup> {
    check_subgroup(g, e)?;
    let os = orbit_stabilizer(
        g.generators(),
        &0usize,
        |&a, &b| g.mul(a, b),
        |&a| g.inv(a),
        e.elems.clone(),
        |&s, set: &Vec<usize>| {
            let mut v: Vec<usize> = set.iter().map(|&x| g.conj(s, x)).collect();
            v.sort_unstable();
            v
        },
        Some(g.order() as u128),
    );
    let mut elems = os.stabilizer;
    elems.sort_unstable();
    Ok(Subgroup {
        elems,
        gens: vec![],
    })
}

/// Centraliser as the stabiliser of the generator tuple of `E`.
pub fn centralizer_structured(g: &FiniteGroup, e: &Subgroup) -> Result<Subgroup> {
    check_subgroup(g, e)?;
    let tuple: Vec<usize> = if e.gens.is_empty() {
        e.elems.clone()
    } else {
        e.gens.clone()
    };
    let os = orbit_stabilizer(
        g.generators(),
        &0usize,
        |&a, &b| g.mul(a, b),
        |&a| g.inv(a),
        tuple,
        |&s, t: &Vec<usize>| t.iter().map(|&x| g.conj(s, x)).collect(),
        Some(g.order() as u128),
    );
    let mut elems = os.stabilizer;
    elems.sort_unstable();
    Ok(Subgroup {
        elems,
        gens: vec![],
    })
}

pub fn is_normal(g: &FiniteGroup, n: &Subgroup) -> bool {
    let gens: Vec<usize> = if g.generators().is_empty() {
        g.elements().collect()
    } else {
        g.generators().to_vec()
    };
    gens.iter()
        .all(|&x| n.elems.iter().all(|&y| n.contains(g.conj(x, y))))
}

/// A quotient group together with the projection from the parent.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub group: FiniteGroup,
    /// `g ↦ gN`
    pub projection: HomomorphismData,
}

/// `G/N` with cosets labelled by their smallest element.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Result<QuotientData> {
    check_subgroup(g, n)?;
    if !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x as u32);
        for &y in &n.elems {
            coset_of[g.mul(x, y)] = id;
        }
    }
    let generators: Vec<usize> = {
        let mut v: Vec<usize> = g
            .generators()
            .iter()
            .map(|&x| coset_of[x] as usize)
            .filter(|&c| c != 0)
            .collect();
        v.dedup();
        v
    };
    let map = coset_of.clone();
    let order = reps.len();
    let group = FiniteGroup::new(
        order,
        generators,
        Law::Quotient {
            parent: g.clone(),
            coset_of,
            reps,
        },
    );
    let projection = HomomorphismData {
        source: g.clone(),
        target: group.clone(),
        map,
    };
    Ok(QuotientData { group, projection })
}

/// A semidirect product `A ⋊ H` with its structure maps.
#[derive(Clone, Debug)]
pub struct SemidirectData {
    pub group: FiniteGroup,
    /// `a ↦ (a, 1)`
    pub embed_normal: HomomorphismData,
    /// `h ↦ (0, h)`
    pub embed_top: HomomorphismData,
    /// `(a, h) ↦ h`
    pub projection: HomomorphismData,
}

/// Extend an action given on the generators of `h` to all of `h`.
///
/// `gen_action[k]` is the permutation of `a`'s elements induced by
/// `h.generators()[k]`. The result is the flat table `h * |A| + a ↦ h·a`.
pub fn extend_action(
    a: &FiniteGroup,
    h: &FiniteGroup,
    gen_action: &[Vec<usize>],
) -> Result<Vec<u32>> {
    if gen_action.len() != h.generators().len() {
        return Err(Error::ActionNotHomomorphism("one permutation per generator".into()));
    }
    let n = a.order();
    let mut action = vec![u32::MAX; h.order() * n];
    for t in 0..n {
        action[t] = t as u32;
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (k, &s) in h.generators().iter().enumerate() {
            let y = h.mul(x, s);
            let fresh = action[y * n] == u32::MAX;
            for t in 0..n {
                let img = action[x * n + gen_action[k][t]];
                if fresh {
                    action[y * n + t] = img;
                } else if action[y * n + t] != img {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "relation violated at element {}",
                        h.label(y)
                    )));
                }
            }
            if fresh {
                queue.push_back(y);
            }
        }
    }
    if action.contains(&u32::MAX) {
        return Err(Error::ActionNotHomomorphism("generators do not span".into()));
    }
    Ok(action)
}

/// `A ⋊ H` with `(a,h)(a',h') = (a·(h·a'), hh')`.
///
/// `action[h]` is the permutation of `A` induced by `h`; it must be a
/// homomorphism `H → Aut(A)`, which is verified.
pub fn semidirect_product(
    a: &FiniteGroup,
    h: &FiniteGroup,
    action: &[Vec<usize>],
) -> Result<SemidirectData> {
    if action.len() != h.order() || action.iter().any(|p| p.len() != a.order()) {
        return Err(Error::ActionNotHomomorphism("wrong shape".into()));
    }
    let flat: Vec<u32> = action.iter().flatten().map(|&x| x as u32).collect();
    semidirect_product_flat(a, h, flat)
}

/// As [`semidirect_product`], with the action as a flat table
/// `action[h * |A| + a] = h·a`.
pub fn semidirect_product_flat(
    a: &FiniteGroup,
    h: &FiniteGroup,
    action: Vec<u32>,
) -> Result<SemidirectData> {
    let n = a.order();
    if action.len() != h.order() * n {
        return Err(Error::ActionNotHomomorphism("wrong shape".into()));
    }
    let act = |x: usize, t: usize| action[x * n + t] as usize;
    let a_gens = a.generators().to_vec();
    for x in h.elements() {
        let mut seen = vec![false; n];
        for t in 0..n {
            let y = act(x, t);
            if y >= n || seen[y] {
                return Err(Error::ActionNotHomomorphism(format!(
                    "{} does not act bijectively",
                    h.label(x)
                )));
            }
            seen[y] = true;
        }
        for u in a.elements() {
            for &v in &a_gens {
                if act(x, a.mul(u, v)) != a.mul(act(x, u), act(x, v)) {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "{} is not an automorphism",
                        h.label(x)
                    )));
                }
            }
        }
    }
    for x in h.elements() {
        for &y in h.generators() {
            let xy = h.mul(x, y);
            if (0..n).any(|t| act(xy, t) != act(x, act(y, t))) {
                return Err(Error::ActionNotHomomorphism(format!(
                    "action of {} disagrees with composition",
                    h.label(xy)
                )));
            }
        }
    }
    if (0..n).any(|t| act(0, t) != t) {
        return Err(Error::ActionNotHomomorphism("identity acts nontrivially".into()));
    }
    let mut generators: Vec<usize> = a.generators().to_vec();
    generators.extend(h.generators().iter().map(|&y| y * n));
    let group = FiniteGroup::new(
        n * h.order(),
        generators,
        Law::Semidirect {
            normal: a.clone(),
            top: h.clone(),
            action,
        },
    );
    let embed_normal =
        HomomorphismData::from_fn_unchecked(a.clone(), group.clone(), |x| x);
    let embed_top = HomomorphismData::from_fn_unchecked(h.clone(), group.clone(), |y| y * n);
    let projection = HomomorphismData::from_fn_unchecked(group.clone(), h.clone(), |x| x / n);
    Ok(SemidirectData {
        group,
        embed_normal,
        embed_top,
        projection,
    })
}

/// Direct product, as the semidirect product with trivial action.
pub fn direct_product(a: &FiniteGroup, h: &FiniteGroup) -> SemidirectData {
    let n = a.order();
    let action: Vec<u32> = (0..h.order() * n).map(|i| (i % n) as u32).collect();
    semidirect_product_flat(a, h, action).expect("trivial action is a homomorphism")
}

/// A map between two finite groups, given on every element.
#[derive(Clone, Debug)]
pub struct HomomorphismData {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    map: Vec<u32>,
}

impl HomomorphismData {
    /// Verifies multiplicativity.
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&y| y >= target.order()) {
            return Err(Error::ActionNotHomomorphism("map has wrong shape".into()));
        }
        let h = Self {
            source,
            target,
            map: map.into_iter().map(|y| y as u32).collect(),
        };
        h.verify()?;
        Ok(h)
    }

    pub(crate) fn from_fn_unchecked<F: Fn(usize) -> usize>(
        source: FiniteGroup,
        target: FiniteGroup,
        f: F,
    ) -> Self {
        let map = source.elements().map(|x| f(x) as u32).collect();
        HomomorphismData {
            source,
            target,
            map,
        }
    }

    /// Image of element `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> Vec<usize> {
        self.map.iter().map(|&y| y as usize).collect()
    }

    pub fn verify(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.map.len() != s.order() || self.map.iter().any(|&y| y as usize >= t.order()) {
            return Err(Error::ActionNotHomomorphism("map has wrong shape".into()));
        }
        for a in s.elements() {
            for &b in s.generators() {
                if self.apply(s.mul(a, b)) != t.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "f({}·{}) ≠ f({})·f({})",
                        s.label(a),
                        s.label(b),
                        s.label(a),
                        s.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source.elements().filter(|&x| self.map[x] == 0).collect()
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.map {
            hit[y as usize] = true;
        }
        (0..hit.len()).filter(|&y| hit[y]).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().filter(|&&y| y == 0).count() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &HomomorphismData) -> Result<HomomorphismData> {
        if !self.target.same_as(&then.source) {
            return Err(Error::NotComposable(0));
        }
        Ok(HomomorphismData {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&x| then.map[x as usize]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(&table).unwrap()
    }

    fn s3() -> FiniteGroup {
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
        semidirect_product(&c3, &c2, &action).unwrap().group
    }

    #[test]
    fn cyclic_table_basics() {
        let g = cyclic(6);
        assert!(g.is_abelian());
        assert!(g.is_cyclic());
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.pow(1, -1), 5);
    }

    #[test]
    fn s3_as_semidirect() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let c3 = g.subgroup(&[1]);
        assert_eq!(c3.order(), 3);
        assert_eq!(normalizer(&g, &c3).unwrap().order(), 6);
        assert_eq!(normalizer_structured(&g, &c3).unwrap().order(), 6);
        let q = quotient_group(&g, &c3).unwrap();
        assert_eq!(q.group.order(), 2);
        let c2 = g.subgroup(&[3]);
        assert_eq!(quotient_group(&g, &c2).unwrap_err(), Error::NotNormal);
        assert_eq!(centralizer(&g, &c2).unwrap().order(), 2);
        assert_eq!(centralizer_structured(&g, &c2).unwrap().order(), 2);
    }

    #[test]
    fn quotient_by_whole_is_trivial() {
        let g = s3();
        let q = quotient_group(&g, &g.whole()).unwrap();
        assert_eq!(q.group.order(), 1);
    }

    #[test]
    fn bad_action_rejected() {
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        // swapping 0 and 1 is not an automorphism
        let action = vec![vec![0, 1, 2], vec![1, 0, 2]];
        assert!(matches!(
            semidirect_product(&c3, &c2, &action),
            Err(Error::ActionNotHomomorphism(_))
        ));
        // inversion by an element of order 3 breaks the homomorphism law
        let c3b = cyclic(3);
        let action = vec![vec![0, 1, 2], vec![0, 2, 1], vec![0, 2, 1]];
        assert!(semidirect_product(&c3, &c3b, &action).is_err());
    }

    #[test]
    fn from_table_rejects_non_group() {
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(&t).is_err());
    }

    #[test]
    fn orbit_stabilizer_on_points() {
        // S3 acting on {0,1,2} by permutations
        type P = [u8; 3];
        let mul = |a: &P, b: &P| -> P { [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]] };
        let inv = |a: &P| -> P {
            let mut r = [0u8; 3];
            for i in 0..3 {
                r[a[i] as usize] = i as u8;
            }
            r
        };
        let gens: Vec<P> = vec![[1, 2, 0], [1, 0, 2]];
        let os = orbit_stabilizer(&gens, &[0, 1, 2], mul, inv, 0u8, |g: &P, x: &u8| g[*x as usize], Some(6));
        assert_eq!(os.orbit.len(), 3);
        assert_eq!(os.stabilizer.len(), 2);
    }
}
