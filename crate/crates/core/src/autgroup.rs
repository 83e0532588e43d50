//! Automorphisms of finite abelian p-groups as integer matrices.
//!
//! An automorphism of `P = ⊕ C_{p^{e_i}}` is stored by the images of the
//! standard generators: column `j` of the matrix is `φ(g_j)`, row `i` is
//! reduced modulo `p^{e_i}`. Such a matrix defines a homomorphism exactly when
//! `p^{max(e_i - e_j, 0)}` divides `M[i][j]`, and composition is matrix
//! multiplication with row-wise reduction.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{closure, schreier_generators, FiniteGroup};
use crate::pgroup::{subgroup_generated, AbelianPGroup, GroupElement};
use crate::schreier::{compose, invert, Perm, StabChain};

/// Largest `|P|` for which automorphisms are converted to permutations of P.
pub const PERMUTATION_BOUND: u64 = 1 << 10;

/// Default cap on the number of automorphisms materialised at once.
pub const DEFAULT_ELEMENT_BOUND: u128 = 1 << 20;

#[derive(Clone)]
pub struct Automorphism {
    parent: Arc<AbelianPGroup>,
    // column-major: cols[j * r + i] = M[i][j]
    cols: Box<[u64]>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.cols == other.cols
    }
}

impl Eq for Automorphism {}

impl Hash for Automorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cols.hash(state);
    }
}

impl PartialOrd for Automorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Automorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cols.cmp(&other.cols)
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix()
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Validate and build an automorphism from matrix rows.
pub fn make_automorphism(p: &AbelianPGroup, rows: &[Vec<i64>]) -> Result<Automorphism> {
    Automorphism::from_rows(&Arc::new(p.clone()), rows)
}

impl Automorphism {
    pub fn from_rows(parent: &Arc<AbelianPGroup>, rows: &[Vec<i64>]) -> Result<Self> {
        let r = parent.rank();
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(Error::BadShape {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
                expected: r,
            });
        }
        let moduli = parent.moduli();
        let mut cols = vec![0u64; r * r];
        for i in 0..r {
            for j in 0..r {
                cols[j * r + i] = rows[i][j].rem_euclid(moduli[i] as i64) as u64;
            }
        }
        let a = Automorphism {
            parent: parent.clone(),
            cols: cols.into_boxed_slice(),
        };
        a.check_divisibility()?;
        if !a.images_generate() {
            return Err(Error::NotBijective);
        }
        Ok(a)
    }

    /// Build from the images of the generators (no validation).
    pub(crate) fn from_images_unchecked(parent: &Arc<AbelianPGroup>, images: &[GroupElement]) -> Self {
        let cols: Vec<u64> = images.iter().flat_map(|x| x.coords.iter().copied()).collect();
        Automorphism {
            parent: parent.clone(),
            cols: cols.into_boxed_slice(),
        }
    }

    /// Build from the images of the generators, validating everything.
    pub fn from_images(parent: &Arc<AbelianPGroup>, images: &[GroupElement]) -> Result<Self> {
        if images.len() != parent.rank() || images.iter().any(|x| !parent.contains(x)) {
            return Err(Error::ParentMismatch);
        }
        let a = Self::from_images_unchecked(parent, images);
        a.check_divisibility()?;
        if !a.images_generate() {
            return Err(Error::NotBijective);
        }
        Ok(a)
    }

    fn check_divisibility(&self) -> Result<()> {
        let p = self.parent.p();
        let e = self.parent.exponents();
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                let required = p.pow(e[i].saturating_sub(e[j]));
                let value = self.cols[j * r + i];
                if value % required != 0 {
                    return Err(Error::DivisibilityViolation {
                        row: i,
                        col: j,
                        value,
                        required,
                    });
                }
            }
        }
        Ok(())
    }

    // P is generated by the images iff they generate P/pP (Frattini quotient),
    // i.e. the reduction of the matrix mod p has full rank.
    fn images_generate(&self) -> bool {
        let r = self.rank();
        let p = self.parent.p();
        let mut m: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|j| self.cols[j * r + i] % p).collect())
            .collect();
        let mut rank = 0;
        for col in 0..r {
            let Some(piv) = (rank..r).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = mod_inverse(m[rank][col], p);
            for i in 0..r {
                if i != rank && m[i][col] != 0 {
                    let f = m[i][col] * inv % p;
                    for k in 0..r {
                        m[i][k] = (m[i][k] + p * p - f * m[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank == r
    }

    pub fn identity(parent: &Arc<AbelianPGroup>) -> Self {
        let images = parent.generators();
        Self::from_images_unchecked(parent, &images)
    }

    pub fn parent(&self) -> &AbelianPGroup {
        &self.parent
    }

    pub fn parent_arc(&self) -> &Arc<AbelianPGroup> {
        &self.parent
    }

    pub fn rank(&self) -> usize {
        self.parent.rank()
    }

    pub fn is_identity(&self) -> bool {
        let r = self.rank();
        (0..r).all(|j| (0..r).all(|i| self.cols[j * r + i] == u64::from(i == j)))
    }

    /// Rows of the matrix, `M[i][j]` = coordinate `i` of `φ(g_j)`.
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| self.cols[j * r + i]).collect())
            .collect()
    }

    pub fn image_of_generator(&self, j: usize) -> GroupElement {
        let r = self.rank();
        GroupElement::new(self.cols[j * r..(j + 1) * r].to_vec())
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.parent.contains(x) {
            return Err(Error::ParentMismatch);
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &GroupElement) -> GroupElement {
        let r = self.rank();
        let moduli = self.parent.moduli();
        let mut out = vec![0u64; r];
        for (j, &c) in x.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..r {
                let m = moduli[i] as u128;
                out[i] = ((out[i] as u128 + c as u128 * self.cols[j * r + i] as u128) % m) as u64;
            }
        }
        GroupElement::new(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let r = self.rank();
        let mut cols = Vec::with_capacity(r * r);
        for j in 0..r {
            let img = self.apply_unchecked(&other.image_of_generator(j));
            cols.extend_from_slice(&img.coords);
        }
        Automorphism {
            parent: self.parent.clone(),
            cols: cols.into_boxed_slice(),
        }
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.clone();
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }

    pub fn pow(&self, k: u64) -> Automorphism {
        let mut result = Automorphism::identity(&self.parent);
        let mut sq = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        result
    }

    pub fn inverse(&self) -> Automorphism {
        if self.parent.order() > 1 << 16 {
            return self.pow(self.order() - 1);
        }
        let perm = self.to_permutation();
        let inv = invert(&perm);
        let images: Vec<GroupElement> = (0..self.rank())
            .map(|j| self.parent.element_at(inv[self.parent.index_of(&self.parent.generator(j))] as usize))
            .collect();
        Self::from_images_unchecked(&self.parent, &images)
    }

    pub fn conjugate_by(&self, g: &Automorphism, g_inv: &Automorphism) -> Automorphism {
        g.compose(self).compose(g_inv)
    }

    /// Images of all elements of P, indexed by [`AbelianPGroup::index_of`].
    pub fn to_permutation(&self) -> Vec<u32> {
        self.parent
            .elements()
            .map(|x| self.parent.index_of(&self.apply_unchecked(&x)) as u32)
            .collect()
    }

    /// Indices of the generator images: a compact identifier.
    pub fn compact_key(&self) -> Vec<u32> {
        (0..self.rank())
            .map(|j| self.parent.index_of(&self.image_of_generator(j)) as u32)
            .collect()
    }

    /// Non-identity fixed points exist?
    pub fn has_nonzero_fixed_point(&self) -> bool {
        self.parent
            .elements()
            .skip(1)
            .any(|x| self.apply_unchecked(&x) == x)
    }
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(m as i128) as u64
}

fn units_generators(p: u64, e: u32) -> Vec<u64> {
    let m = p.pow(e);
    if p == 2 {
        let mut v = Vec::new();
        if e >= 2 {
            v.push(m - 1);
        }
        if e >= 3 {
            v.push(5);
        }
        return v;
    }
    // a primitive root mod p that is also one mod p^2 generates mod p^e
    let phi = m / p * (p - 1);
    let factors = prime_factors(phi);
    (2..m)
        .find(|&g| {
            g % p != 0 && factors.iter().all(|&q| pow_mod(g, phi / q, m) != 1)
        })
        .into_iter()
        .collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Elementary generators of Aut(P): transvections `g_j ↦ g_j + p^{max(e_i-e_j,0)} g_i`
/// and scalings of single generators by generators of the unit group.
pub fn elementary_generators(p: &Arc<AbelianPGroup>) -> Vec<Automorphism> {
    let r = p.rank();
    let e = p.exponents();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let mut images = p.generators();
            images[j].coords[i] = p.p().pow(e[i].saturating_sub(e[j])) % p.moduli()[i];
            out.push(Automorphism::from_images_unchecked(p, &images));
        }
        for u in units_generators(p.p(), e[i]) {
            let mut images = p.generators();
            images[i].coords[i] = u;
            out.push(Automorphism::from_images_unchecked(p, &images));
        }
    }
    out.retain(|a| !a.is_identity());
    out
}

/// The Hillar–Rhea closed formula for `|Aut(P)|`.
pub fn aut_order_formula(p: &AbelianPGroup) -> u128 {
    let prime = p.p() as u128;
    let mut e: Vec<u32> = p.exponents().to_vec();
    e.sort_unstable();
    let n = e.len();
    // 1-indexed d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k}
    let d: Vec<usize> = (0..n)
        .map(|k| (0..n).filter(|&l| e[l] == e[k]).max().unwrap() + 1)
        .collect();
    let c: Vec<usize> = (0..n)
        .map(|k| (0..n).filter(|&l| e[l] == e[k]).min().unwrap() + 1)
        .collect();
    let mut total: u128 = 1;
    for k in 0..n {
        total *= prime.pow(d[k] as u32) - prime.pow(k as u32);
    }
    for j in 0..n {
        total *= prime.pow(e[j] * (n - d[j]) as u32);
    }
    for i in 0..n {
        total *= prime.pow((e[i] - 1) * (n - c[i] + 1) as u32);
    }
    total
}

/// `|Aut(P)|` by Schreier–Sims on the permutation action of the elementary
/// generators on P.
pub fn aut_order(p: &AbelianPGroup) -> Result<u128> {
    check_permutation_bound(p)?;
    let arc = Arc::new(p.clone());
    let perms: Vec<Perm> = elementary_generators(&arc)
        .iter()
        .map(Automorphism::to_permutation)
        .collect();
    Ok(StabChain::new(p.order() as usize, &perms).order())
}

fn check_permutation_bound(p: &AbelianPGroup) -> Result<()> {
    if p.order() > PERMUTATION_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: p.order() as u128,
            bound: PERMUTATION_BOUND as u128,
        });
    }
    Ok(())
}

/// A short generating set for Aut(P): products of elementary generators are
/// tried until two or three of them generate a group of the full order.
/// Falls back to the elementary set.
pub fn aut_generators(p: &Arc<AbelianPGroup>) -> Vec<Automorphism> {
    let elementary = elementary_generators(p);
    if elementary.len() <= 3 || p.order() > PERMUTATION_BOUND {
        return elementary;
    }
    let full = aut_order_formula(p);
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15 ^ p.order();
    let mut next = |n: usize| -> usize {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % n as u64) as usize
    };
    for size in 2..=3 {
        for _attempt in 0..40 {
            let cands: Vec<Automorphism> = (0..size)
                .map(|_| {
                    let len = 1 + next(2 * elementary.len());
                    (0..len).fold(Automorphism::identity(p), |acc, _| {
                        acc.compose(&elementary[next(elementary.len())])
                    })
                })
                .collect();
            let perms: Vec<Perm> = cands.iter().map(Automorphism::to_permutation).collect();
            if StabChain::new(p.order() as usize, &perms).order() == full {
                return cands;
            }
        }
    }
    elementary
}

/// The subgroup of Aut(P) generated by `gens`.
///
/// For `|P| ≤ PERMUTATION_BOUND` the group is held as a permutation group on
/// P (no element list); otherwise the elements are listed explicitly, up to
/// [`DEFAULT_ELEMENT_BOUND`] of them.
pub fn automorphism_group(p: &Arc<AbelianPGroup>, gens: &[Automorphism]) -> Result<FiniteGroup> {
    if gens.iter().any(|g| g.parent() != p.as_ref()) {
        return Err(Error::ParentMismatch);
    }
    if p.order() <= PERMUTATION_BOUND {
        let perms: Vec<Perm> = gens.iter().map(Automorphism::to_permutation).collect();
        let chain = StabChain::new(p.order() as usize, &perms);
        return FiniteGroup::from_permutation_chain(p.clone(), chain, &perms);
    }
    let id = Automorphism::identity(p);
    let cap = DEFAULT_ELEMENT_BOUND as usize;
    let elems = closure(gens, &id, |a, b| a.compose(b), Some(cap)).ok_or(
        Error::OrderBoundExceeded {
            order: cap as u128 + 1,
            bound: DEFAULT_ELEMENT_BOUND,
        },
    )?;
    FiniteGroup::from_automorphisms(elems, gens)
}

/// Aut(P) as a group.
///
/// Built from [`aut_generators`]; its order is checked against
/// [`aut_order_formula`]. Fails when `|Aut(P)|` exceeds `bound`.
pub fn enumerate_aut(p: &AbelianPGroup, bound: u128) -> Result<FiniteGroup> {
    let expected = aut_order_formula(p);
    if expected > bound {
        return Err(Error::OrderBoundExceeded {
            order: expected,
            bound,
        });
    }
    let arc = Arc::new(p.clone());
    let g = automorphism_group(&arc, &aut_generators(&arc))?;
    if g.order() as u128 != expected {
        return Err(Error::NotASubgroup(format!(
            "generated group has order {}, order formula gives {expected}",
            g.order()
        )));
    }
    Ok(g)
}

/// Brute-force Aut(P): every matrix respecting the divisibility constraints,
/// kept when its image generates P by explicit enumeration.
pub fn enumerate_aut_oracle(p: &AbelianPGroup) -> Vec<Automorphism> {
    let arc = Arc::new(p.clone());
    let r = p.rank();
    let e = p.exponents();
    let prime = p.p();
    // choices[i*r+j]: admissible values of M[i][j]
    let choices: Vec<Vec<u64>> = (0..r * r)
        .map(|k| {
            let (i, j) = (k / r, k % r);
            let step = prime.pow(e[i].saturating_sub(e[j]));
            (0..p.moduli()[i]).step_by(step as usize).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; r * r];
    loop {
        let images: Vec<GroupElement> = (0..r)
            .map(|j| GroupElement::new((0..r).map(|i| choices[i * r + j][idx[i * r + j]]).collect()))
            .collect();
        let span = subgroup_generated(p, &images).expect("images lie in P");
        if span.is_whole() {
            out.push(Automorphism::from_images_unchecked(&arc, &images));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == r * r {
                out.sort();
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Closure of explicit automorphisms (with a common parent) as a group.
pub fn closure_group(gens: &[Automorphism]) -> Result<FiniteGroup> {
    let first = gens.first().ok_or(Error::ParentMismatch)?;
    automorphism_group(first.parent_arc(), gens)
}

/// Closure of `gens` inside Aut(P); the trivial group when `gens` is empty.
pub fn closure_in(p: &Arc<AbelianPGroup>, gens: &[Automorphism]) -> Result<FiniteGroup> {
    automorphism_group(p, gens)
}

/// Largest subgroup of Aut(P) whose elements are listed for conjugation.
pub const SUBGROUP_LIST_BOUND: usize = 1 << 16;

/// Coordinates of every element of P, for evaluating automorphisms that are
/// known only through the indices of the generator images.
pub(crate) struct PermContext {
    pub parent: Arc<AbelianPGroup>,
    coords: Vec<Vec<u64>>,
    strides: Vec<u64>,
    pub gen_idx: Vec<u32>,
}

impl PermContext {
    pub fn new(parent: &Arc<AbelianPGroup>) -> Self {
        let coords: Vec<Vec<u64>> = parent.elements().map(|x| x.coords).collect();
        let r = parent.rank();
        let mut strides = vec![1u64; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * parent.moduli()[i + 1];
        }
        let gen_idx = (0..r)
            .map(|j| parent.index_of(&parent.generator(j)) as u32)
            .collect();
        PermContext {
            parent: parent.clone(),
            coords,
            strides,
            gen_idx,
        }
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    /// The automorphism sending `g_j` to element `key[j]`, applied to `x`.
    pub fn eval(&self, key: &[u32], x: u32) -> u32 {
        let moduli = self.parent.moduli();
        let cx = &self.coords[x as usize];
        let mut idx = 0u64;
        for i in 0..moduli.len() {
            let mut v = 0u64;
            for (j, &c) in cx.iter().enumerate() {
                v += c * self.coords[key[j] as usize][i];
            }
            idx += (v % moduli[i]) * self.strides[i];
        }
        idx as u32
    }

    pub fn key_of(&self, perm: &[u32]) -> Vec<u32> {
        self.gen_idx.iter().map(|&g| perm[g as usize]).collect()
    }

    pub fn perm_of(&self, key: &[u32]) -> Perm {
        (0..self.degree() as u32).map(|x| self.eval(key, x)).collect()
    }

    /// Key of `s ∘ e ∘ s⁻¹` for `e` given by its key.
    pub fn conj_key(&self, s: &[u32], s_inv: &[u32], key: &[u32]) -> Vec<u32> {
        self.gen_idx
            .iter()
            .map(|&g| s[self.eval(key, s_inv[g as usize]) as usize])
            .collect()
    }

    /// Canonical key of a subgroup: its element keys, sorted and concatenated.
    pub fn subgroup_key(&self, element_keys: &mut [Vec<u32>]) -> Vec<u32> {
        element_keys.sort_unstable();
        element_keys.concat()
    }

    pub fn conj_subgroup(&self, s: &[u32], key: &[u32]) -> Vec<u32> {
        let r = self.gen_idx.len().max(1);
        let s_inv = invert(s);
        let mut elems: Vec<Vec<u32>> = key.chunks(r).map(|k| self.conj_key(s, &s_inv, k)).collect();
        self.subgroup_key(&mut elems)
    }
}

/// Orbit of a subgroup (given by key) under Aut(P)-conjugation, and its
/// stabiliser as a stabiliser chain.
pub(crate) fn conjugation_orbit(
    ctx: &PermContext,
    key: Vec<u32>,
) -> (Vec<Vec<u32>>, StabChain, Vec<Perm>) {
    let parent = &ctx.parent;
    let full = aut_order_formula(parent);
    let gens: Vec<Perm> = aut_generators(parent)
        .iter()
        .map(Automorphism::to_permutation)
        .collect();
    let degree = ctx.degree();
    let id: Perm = (0..degree as u32).collect();
    let mut chain = StabChain::new(degree, &[]);
    let mut stab_gens = Vec::new();
    let orbit = schreier_generators(
        &gens,
        &id,
        |a, b| compose(a, b),
        |a| invert(a),
        key,
        |s, k| ctx.conj_subgroup(s, k),
        |h, n| {
            if chain.order() * n as u128 >= full {
                return false;
            }
            if chain.extend(&h) {
                stab_gens.push(h);
            }
            chain.order() * (n as u128) < full
        },
    );
    (orbit, chain, stab_gens)
}

fn element_keys(ctx: &PermContext, e: &FiniteGroup) -> Result<Vec<Vec<u32>>> {
    if e.order() > SUBGROUP_LIST_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: e.order() as u128,
            bound: SUBGROUP_LIST_BOUND as u128,
        });
    }
    e.elements()
        .map(|a| {
            e.permutation(a)
                .map(|p| ctx.key_of(&p))
                .ok_or_else(|| Error::NotASubgroup("not a group of automorphisms".into()))
        })
        .collect()
}

fn aut_parent(e: &FiniteGroup) -> Result<Arc<AbelianPGroup>> {
    e.aut_parent()
        .cloned()
        .ok_or_else(|| Error::NotASubgroup("not a group of automorphisms".into()))
}

/// `N_{Aut(P)}(E)` without listing Aut(P): the stabiliser of `E` under
/// conjugation, by orbit–stabiliser over a generating set of Aut(P).
pub fn normalizer_in_aut(e: &FiniteGroup) -> Result<FiniteGroup> {
    let parent = aut_parent(e)?;
    if parent.order() > PERMUTATION_BOUND {
        return explicit_fallback(e, &parent, crate::group::normalizer_structured);
    }
    if e.order() as u128 == aut_order_formula(&parent) {
        return enumerate_aut(&parent, u128::MAX);
    }
    let ctx = PermContext::new(&parent);
    let mut keys = element_keys(&ctx, e)?;
    let key = ctx.subgroup_key(&mut keys);
    let (_, chain, gens) = conjugation_orbit(&ctx, key);
    FiniteGroup::from_permutation_chain(parent, chain, &gens)
}

/// `C_{Aut(P)}(E)` as the stabiliser of the generator tuple of `E`.
pub fn centralizer_in_aut(e: &FiniteGroup) -> Result<FiniteGroup> {
    let parent = aut_parent(e)?;
    if parent.order() > PERMUTATION_BOUND {
        return explicit_fallback(e, &parent, crate::group::centralizer_structured);
    }
    let ctx = PermContext::new(&parent);
    let full = aut_order_formula(&parent);
    let tuple: Vec<u32> = e
        .generators()
        .iter()
        .flat_map(|&g| ctx.key_of(&e.permutation(g).expect("automorphism law")))
        .collect();
    let gens: Vec<Perm> = aut_generators(&parent)
        .iter()
        .map(Automorphism::to_permutation)
        .collect();
    let degree = ctx.degree();
    let id: Perm = (0..degree as u32).collect();
    let r = parent.rank().max(1);
    let mut chain = StabChain::new(degree, &[]);
    let mut stab_gens = Vec::new();
    schreier_generators(
        &gens,
        &id,
        |a, b| compose(a, b),
        |a| invert(a),
        tuple,
        |s, t: &Vec<u32>| {
            let s_inv = invert(s);
            t.chunks(r).flat_map(|k| ctx.conj_key(s, &s_inv, k)).collect()
        },
        |h, n| {
            if chain.order() * n as u128 >= full {
                return false;
            }
            if chain.extend(&h) {
                stab_gens.push(h);
            }
            chain.order() * (n as u128) < full
        },
    );
    FiniteGroup::from_permutation_chain(parent, chain, &stab_gens)
}

// For P too large for the permutation model: list Aut(P) and work by index.
fn explicit_fallback(
    e: &FiniteGroup,
    parent: &Arc<AbelianPGroup>,
    op: fn(&FiniteGroup, &crate::group::Subgroup) -> Result<crate::group::Subgroup>,
) -> Result<FiniteGroup> {
    let aut = enumerate_aut(parent, DEFAULT_ELEMENT_BOUND)?;
    let idx: Vec<usize> = e
        .generators()
        .iter()
        .map(|&g| {
            let a = e.automorphism(g).expect("automorphism law");
            aut.index_of_automorphism(&a).expect("inside Aut(P)")
        })
        .collect();
    let sub = aut.subgroup(&idx);
    let res = op(&aut, &sub)?;
    let elems: Vec<Automorphism> = res
        .elements()
        .iter()
        .map(|&i| aut.automorphism(i).expect("automorphism law"))
        .collect();
    FiniteGroup::from_automorphisms(elems, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u64, e: &[u32]) -> Arc<AbelianPGroup> {
        Arc::new(AbelianPGroup::new(p, e).unwrap())
    }

    #[test]
    fn c9_doubling() {
        let c9 = group(3, &[2]);
        let a = Automorphism::from_rows(&c9, &[vec![2]]).unwrap();
        assert_eq!(a.order(), 6);
        assert_eq!(a.apply(&c9.element(&[3]).unwrap()).unwrap().coords, vec![6]);
    }

    #[test]
    fn klein_swap() {
        let v4 = group(2, &[1, 1]);
        let s = Automorphism::from_rows(&v4, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.apply(&v4.element(&[1, 0]).unwrap()).unwrap().coords, vec![0, 1]);
        let id = Automorphism::identity(&v4);
        for x in v4.elements() {
            assert_eq!(id.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn divisibility_enforced() {
        let g = group(2, &[2, 1]);
        // g_2 ↦ g_1 sends an element of order 2 to one of order 4
        let err = Automorphism::from_rows(&g, &[vec![1, 1], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::DivisibilityViolation { row: 0, col: 1, .. }));
        // with columns as images, [[1,0],[1,1]] sends g_1 ↦ g_1 + g_2: fine
        assert!(Automorphism::from_rows(&g, &[vec![1, 0], vec![1, 1]]).is_ok());
        // g_2 ↦ 2 g_1 is allowed
        assert!(Automorphism::from_rows(&g, &[vec![1, 2], vec![0, 1]]).is_ok());
    }

    #[test]
    fn non_bijective_rejected() {
        let v4 = group(2, &[1, 1]);
        assert_eq!(
            Automorphism::from_rows(&v4, &[vec![1, 1], vec![1, 1]]).unwrap_err(),
            Error::NotBijective
        );
        assert!(matches!(
            Automorphism::from_rows(&v4, &[vec![1]]),
            Err(Error::BadShape { .. })
        ));
    }

    #[test]
    fn apply_parent_mismatch() {
        let v4 = group(2, &[1, 1]);
        let id = Automorphism::identity(&v4);
        assert_eq!(id.apply(&GroupElement::new(vec![2, 0])), Err(Error::ParentMismatch));
    }

    #[test]
    fn small_enumerations() {
        let v4 = enumerate_aut(&AbelianPGroup::new(2, &[1, 1]).unwrap(), 1000).unwrap();
        assert_eq!(v4.order(), 6);
        assert!(!v4.is_abelian());
        let c9 = enumerate_aut(&AbelianPGroup::new(3, &[2]).unwrap(), 1000).unwrap();
        assert_eq!(c9.order(), 6);
        assert!(c9.is_cyclic());
        let c2 = enumerate_aut(&AbelianPGroup::new(2, &[1]).unwrap(), 1000).unwrap();
        assert_eq!(c2.order(), 1);
    }

    #[test]
    fn bound_enforced() {
        let g = AbelianPGroup::new(2, &[1, 1, 1, 1, 1]).unwrap();
        assert!(matches!(
            enumerate_aut(&g, 1000),
            Err(Error::OrderBoundExceeded { .. })
        ));
    }

    #[test]
    fn closure_examples() {
        let c9 = group(3, &[2]);
        let a = Automorphism::from_rows(&c9, &[vec![2]]).unwrap();
        assert_eq!(closure_group(&[a]).unwrap().order(), 6);
        let id = Automorphism::identity(&c9);
        assert_eq!(closure_group(&[id]).unwrap().order(), 1);
        let v4 = group(2, &[1, 1]);
        let swap = Automorphism::from_rows(&v4, &[vec![0, 1], vec![1, 0]]).unwrap();
        let shear = Automorphism::from_rows(&v4, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(closure_group(&[swap, shear]).unwrap().order(), 6);
    }

    #[test]
    fn inverse_roundtrip() {
        let g = group(3, &[2, 1]);
        for a in enumerate_aut(&g, 10_000).unwrap().automorphisms().unwrap() {
            assert!(a.compose(&a.inverse()).is_identity());
        }
    }

    #[test]
    fn formula_small_values() {
        let f = |p, e: &[u32]| aut_order_formula(&AbelianPGroup::new(p, e).unwrap());
        assert_eq!(f(2, &[1, 1]), 6);
        assert_eq!(f(3, &[2]), 6);
        assert_eq!(f(2, &[2, 1]), 8);
        assert_eq!(f(2, &[1, 1, 1]), 168);
        assert_eq!(f(2, &[]), 1);
    }

    #[test]
    fn normalizer_without_enumeration() {
        // a Singer cycle of order 7 in GL(3,2): its normaliser has order 21
        let g = group(2, &[1, 1, 1]);
        let s = Automorphism::from_rows(&g, &[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(s.order(), 7);
        let e = closure_group(&[s]).unwrap();
        assert_eq!(normalizer_in_aut(&e).unwrap().order(), 21);
        assert_eq!(centralizer_in_aut(&e).unwrap().order(), 7);
    }
}
