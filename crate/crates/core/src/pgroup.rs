//! Finite abelian p-groups given by invariant factors.
//!
//! Written additively throughout: the group `C_{p^{e_1}} × … × C_{p^{e_r}}`
//! has elements `coords` with `coords[i] ∈ [0, p^{e_i})` and componentwise
//! modular addition. Elements are ordered lexicographically on `coords`,
//! which coincides with the mixed-radix index returned by
//! [`AbelianPGroup::index_of`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::smith_normal_form;

/// Default cap on `|P|`.
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianPGroup {
    p: u64,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
    order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl AbelianPGroup {
    /// `make_group` with the default order bound.
    pub fn new(p: u64, exponents: &[u32]) -> Result<Self> {
        Self::with_bound(p, exponents, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(p: u64, exponents: &[u32], bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if exponents.contains(&0) {
            return Err(Error::EmptyOrNonPositiveExponent);
        }
        let mut exponents = exponents.to_vec();
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        let total: u32 = exponents.iter().sum();
        let order = (p as u128).checked_pow(total).unwrap_or(u128::MAX);
        if order > bound as u128 {
            return Err(Error::OrderBoundExceeded {
                order,
                bound: bound as u128,
            });
        }
        let moduli = exponents.iter().map(|&e| p.pow(e)).collect();
        Ok(AbelianPGroup {
            p,
            exponents,
            moduli,
            order: order as u64,
        })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, &[])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponents.len() <= 1
    }

    /// Largest element order, `p^{e_1}`.
    pub fn exponent(&self) -> u64 {
        self.moduli.first().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GroupElement::new(coords)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Build an element, reducing each coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ParentMismatch);
        }
        Ok(GroupElement::new(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.rank() && a.coords.iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.scale_unchecked(a, -1))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub(crate) fn scale_unchecked(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| {
                    let k = k.rem_euclid(m as i64) as u128;
                    ((x as u128 * k) % m as u128) as u64
                })
                .collect(),
        )
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.scale_unchecked(a, k))
    }

    /// Least `n ≥ 1` with `n·a = 0`.
    pub fn element_order(&self, a: &GroupElement) -> Result<u64> {
        self.check(a)?;
        Ok(self.order_unchecked(a))
    }

    pub(crate) fn order_unchecked(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| {
                let mut ord = 1;
                let mut x = c;
                while x != 0 {
                    x = (x * self.p) % m;
                    ord *= self.p;
                }
                ord
            })
            .max()
            .unwrap_or(1)
    }

    /// Mixed-radix index; agrees with the lexicographic order on coordinates.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        let mut idx = 0u64;
        for (c, m) in a.coords.iter().zip(&self.moduli) {
            idx = idx * m + c;
        }
        idx as usize
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            coords[i] = (idx % m) as u64;
            idx /= m;
        }
        GroupElement::new(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    /// Every abelian `p`-group (one per partition) of order at most `max_order`,
    /// the trivial group included.
    pub fn all_of_order_at_most(p: u64, max_order: u64) -> Result<Vec<AbelianPGroup>> {
        let mut out = Vec::new();
        let mut n = 0u32;
        while (p as u128).pow(n) <= max_order as u128 {
            for part in partitions(n, n) {
                out.push(Self::with_bound(p, &part, max_order)?);
            }
            n += 1;
        }
        Ok(out)
    }
}

impl fmt::Debug for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Partitions of `n` into parts of size at most `max`, non-increasing.
pub fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A subgroup of an [`AbelianPGroup`], stored as its full sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupTable {
    parent: AbelianPGroup,
    elements: Vec<GroupElement>,
}

impl SubgroupTable {
    pub fn parent(&self) -> &AbelianPGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() as u64 == self.parent.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Trusts the caller: `elements` must be a sorted subgroup.
    pub(crate) fn from_sorted(parent: AbelianPGroup, elements: Vec<GroupElement>) -> Self {
        SubgroupTable { parent, elements }
    }

    /// Accept an arbitrary element list, verifying the subgroup axioms.
    pub fn from_elements(parent: &AbelianPGroup, elements: &[GroupElement]) -> Result<Self> {
        let set: BTreeSet<GroupElement> = elements.iter().cloned().collect();
        if !set.contains(&parent.identity()) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for a in &set {
            parent.check(a)?;
            for b in &set {
                if !set.contains(&parent.add_unchecked(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a} + {b} escapes")));
                }
            }
        }
        Ok(SubgroupTable {
            parent: parent.clone(),
            elements: set.into_iter().collect(),
        })
    }
}

/// Closure of `gens` under addition.
pub fn subgroup_generated(p: &AbelianPGroup, gens: &[GroupElement]) -> Result<SubgroupTable> {
    for g in gens {
        p.check(g)?;
    }
    let mut seen = vec![false; p.order() as usize];
    let id = p.identity();
    seen[p.index_of(&id)] = true;
    let mut members = vec![id];
    let mut frontier = 0;
    while frontier < members.len() {
        let x = members[frontier].clone();
        frontier += 1;
        for g in gens {
            let y = p.add_unchecked(&x, g);
            let idx = p.index_of(&y);
            if !seen[idx] {
                seen[idx] = true;
                members.push(y);
            }
        }
    }
    members.sort();
    Ok(SubgroupTable::from_sorted(p.clone(), members))
}

/// Explicit quotient `P → P/S` realised through a Smith normal form.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: AbelianPGroup,
    target: AbelianPGroup,
    // for each target coordinate: the row of the transform matrix
    rows: Vec<Vec<i128>>,
    // for each target coordinate: a preimage in the source
    lifts: Vec<GroupElement>,
}

impl QuotientMap {
    pub fn new(p: &AbelianPGroup, s: &SubgroupTable) -> Result<Self> {
        if s.parent() != p {
            return Err(Error::NotASubgroup("different parent".into()));
        }
        let r = p.rank();
        // relation columns: p^{e_i} e_i and the generators of S (all elements suffice)
        let mut cols: Vec<Vec<i128>> = (0..r)
            .map(|i| {
                let mut c = vec![0i128; r];
                c[i] = p.moduli()[i] as i128;
                c
            })
            .collect();
        let sgens = minimal_generators(p, s);
        cols.extend(sgens.iter().map(|g| g.coords.iter().map(|&c| c as i128).collect()));
        let matrix: Vec<Vec<i128>> = (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let snf = smith_normal_form(&matrix);
        let mut factors: Vec<(i128, usize)> = snf
            .diagonal
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 1)
            .map(|(i, &d)| (d, i))
            .collect();
        factors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let exponents: Vec<u32> = factors
            .iter()
            .map(|&(d, _)| {
                let mut e = 0;
                let mut x = d;
                while x > 1 {
                    x /= p.p() as i128;
                    e += 1;
                }
                e
            })
            .collect();
        let target = AbelianPGroup::with_bound(p.p(), &exponents, u64::MAX)?;
        let rows = factors.iter().map(|&(_, i)| snf.left[i].clone()).collect();
        let lifts = factors
            .iter()
            .map(|&(_, i)| {
                let coords: Vec<i64> = (0..r)
                    .map(|k| snf.left_inv[k][i].rem_euclid(p.moduli()[k] as i128) as i64)
                    .collect();
                p.element(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientMap {
            source: p.clone(),
            target,
            rows,
            lifts,
        })
    }

    pub fn source(&self) -> &AbelianPGroup {
        &self.source
    }

    pub fn target(&self) -> &AbelianPGroup {
        &self.target
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check(x)?;
        let coords: Vec<i64> = self
            .rows
            .iter()
            .zip(self.target.moduli())
            .map(|(row, &m)| {
                let v: i128 = row.iter().zip(&x.coords).map(|(a, &c)| a * c as i128).sum();
                v.rem_euclid(m as i128) as i64
            })
            .collect();
        self.target.element(&coords)
    }

    /// A preimage of the `i`-th generator of the quotient.
    pub fn lift_generator(&self, i: usize) -> &GroupElement {
        &self.lifts[i]
    }
}

// A small generating set: greedily keep elements not yet in the span.
fn minimal_generators(p: &AbelianPGroup, s: &SubgroupTable) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut span = subgroup_generated(p, &[]).expect("identity subgroup");
    for x in s.elements().iter().rev() {
        if span.order() == s.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x.clone());
            span = subgroup_generated(p, &gens).expect("elements of P");
        }
    }
    gens
}

/// Invariant factors of `P/S`.
pub fn quotient_invariants(p: &AbelianPGroup, s: &SubgroupTable) -> Result<AbelianPGroup> {
    Ok(QuotientMap::new(p, s)?.target().clone())
}
