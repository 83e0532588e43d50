//! Isomorphism types of finite groups.
//!
//! Abelian groups are recognised by their invariant factors, read off from
//! the number of elements killed by each prime power. Nonabelian groups of
//! order at most [`IDENTIFICATION_BOUND`] are matched against a built-in
//! catalog by exhaustive search for an isomorphism, which is returned as a
//! certificate and can be rechecked independently.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::group::FiniteGroup;

/// Largest order for which nonabelian groups are looked up in the catalog.
pub const IDENTIFICATION_BOUND: usize = 63;

/// Largest order for which abelian invariants are computed.
pub const ABELIAN_BOUND: usize = 1 << 24;

/// An explicit isomorphism from a catalog group onto the identified group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismCertificate {
    /// `map[k]` is the image of catalog element `k`.
    pub map: Vec<usize>,
    /// Images of the catalog generators.
    pub generator_images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Cyclic(u64),
    /// Invariant factors `d_1 | d_2 | …`, at least two of them.
    Abelian(Vec<u64>),
    Named {
        name: String,
        certificate: IsomorphismCertificate,
    },
    /// Not identified; small groups keep their Cayley table.
    Opaque {
        abelian: bool,
        table: Option<Vec<Vec<usize>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGroupId {
    pub order: usize,
    pub descriptor: Descriptor,
}

impl AbstractGroupId {
    /// Name of the isomorphism type, e.g. `C6`, `C2 x C4`, `S3`.
    pub fn type_name(&self) -> String {
        match &self.descriptor {
            Descriptor::Cyclic(n) => format!("C{n}"),
            Descriptor::Abelian(inv) => inv
                .iter()
                .map(|d| format!("C{d}"))
                .collect::<Vec<_>>()
                .join(" x "),
            Descriptor::Named { name, .. } => name.clone(),
            Descriptor::Opaque { abelian: true, .. } => format!("abelian group of order {}", self.order),
            Descriptor::Opaque { abelian: false, .. } => {
                format!("nonabelian group of order {}", self.order)
            }
        }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self.descriptor, Descriptor::Opaque { .. })
    }

    /// Invariant factors when the group is abelian and identified.
    pub fn invariant_factors(&self) -> Option<Vec<u64>> {
        match &self.descriptor {
            Descriptor::Cyclic(1) => Some(vec![]),
            Descriptor::Cyclic(n) => Some(vec![*n]),
            Descriptor::Abelian(inv) => Some(inv.clone()),
            _ => None,
        }
    }

    /// Same isomorphism type (certificates are ignored).
    pub fn same_type(&self, other: &AbstractGroupId) -> bool {
        self.order == other.order && !self.is_opaque() && self.type_name() == other.type_name()
    }
}

impl fmt::Display for AbstractGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.type_name())
    }
}

/// Identify `g` up to isomorphism.
pub fn identify(g: &FiniteGroup) -> AbstractGroupId {
    let order = g.order();
    if g.is_abelian() {
        let descriptor = if order <= ABELIAN_BOUND {
            let inv = abelian_invariants(g);
            match inv.len() {
                0 => Descriptor::Cyclic(1),
                1 => Descriptor::Cyclic(inv[0]),
                _ => Descriptor::Abelian(inv),
            }
        } else {
            Descriptor::Opaque {
                abelian: true,
                table: None,
            }
        };
        return AbstractGroupId { order, descriptor };
    }
    if order > IDENTIFICATION_BOUND {
        return AbstractGroupId {
            order,
            descriptor: Descriptor::Opaque {
                abelian: false,
                table: None,
            },
        };
    }
    let dense = g.to_dense();
    let profile = order_profile(&dense);
    for entry in catalog() {
        if entry.group.order() != order || entry.profile != profile {
            continue;
        }
        if let Some(certificate) = find_isomorphism(&entry.group, &dense) {
            return AbstractGroupId {
                order,
                descriptor: Descriptor::Named {
                    name: entry.name.clone(),
                    certificate,
                },
            };
        }
    }
    AbstractGroupId {
        order,
        descriptor: Descriptor::Opaque {
            abelian: false,
            table: Some(dense.cayley_table()),
        },
    }
}

/// Recheck a named identification against `g`: the certificate must be a
/// bijection from the catalog group that respects multiplication.
pub fn verify_identification(g: &FiniteGroup, id: &AbstractGroupId) -> bool {
    let Descriptor::Named { name, certificate } = &id.descriptor else {
        return false;
    };
    let Some(entry) = catalog().iter().find(|e| &e.name == name) else {
        return false;
    };
    verify_certificate(&entry.group, g, certificate)
}

fn verify_certificate(k: &FiniteGroup, g: &FiniteGroup, cert: &IsomorphismCertificate) -> bool {
    let n = k.order();
    if g.order() != n || cert.map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in &cert.map {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    k.elements().all(|a| {
        k.elements()
            .all(|b| cert.map[k.mul(a, b)] == g.mul(cert.map[a], cert.map[b]))
    })
}

/// Invariant factors `d_1 | … | d_k` of an abelian group (empty when trivial).
pub fn abelian_invariants(g: &FiniteGroup) -> Vec<u64> {
    let n = g.order() as u64;
    // partition of each Sylow subgroup, parts in decreasing order
    let mut sylow: Vec<(u64, Vec<u32>)> = Vec::new();
    for q in prime_factors(n) {
        let mut v = 0;
        let mut m = n;
        while m % q == 0 {
            m /= q;
            v += 1;
        }
        // killed[k] = #{x : q^k x = 0}
        let mut killed = vec![1u64];
        let mut k = 0;
        while *killed.last().unwrap() < q.pow(v) {
            k += 1;
            let qk = q.pow(k) as i64;
            let c = g.elements().filter(|&x| g.pow(x, qk) == 0).count() as u64;
            killed.push(c);
        }
        // number of parts ≥ k is log_q(killed[k]/killed[k-1])
        let at_least: Vec<u32> = (1..killed.len())
            .map(|k| ilog(killed[k] / killed[k - 1], q))
            .collect();
        let parts = at_least[0] as usize;
        let partition: Vec<u32> = (0..parts)
            .map(|i| at_least.iter().filter(|&&c| c as usize > i).count() as u32)
            .collect();
        sylow.push((q, partition));
    }
    let len = sylow.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
    // d_len is the product of the largest parts, and so on downwards
    let mut out = vec![1u64; len];
    for (q, partition) in &sylow {
        for (i, &e) in partition.iter().enumerate() {
            out[len - 1 - i] *= q.pow(e);
        }
    }
    out
}

fn ilog(mut x: u64, q: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= q;
        k += 1;
    }
    k
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Sorted `(element order, count)` pairs.
fn order_profile(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for a in g.elements() {
        *counts.entry(g.element_order(a)).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Search for an isomorphism `k → g`, trying every tuple of images of the
/// generators of `k` with matching element orders.
fn find_isomorphism(k: &FiniteGroup, g: &FiniteGroup) -> Option<IsomorphismCertificate> {
    let gens = k.generators().to_vec();
    let orders: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = k.element_order(s);
            g.elements().filter(|&a| orders[a] == o).collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    let mut images = vec![0usize; gens.len()];
    search(k, g, &gens, &candidates, 0, &mut choice, &mut images)
}

fn search(
    k: &FiniteGroup,
    g: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    choice: &mut [usize],
    images: &mut [usize],
) -> Option<IsomorphismCertificate> {
    if depth == gens.len() {
        return extend(k, g, gens, images).map(|map| IsomorphismCertificate {
            map,
            generator_images: images.to_vec(),
        });
    }
    for &c in &candidates[depth] {
        choice[depth] = c;
        images[depth] = c;
        if let Some(cert) = search(k, g, gens, candidates, depth + 1, choice, images) {
            return Some(cert);
        }
    }
    None
}

// The homomorphism determined by `gens ↦ images`, if it exists and is bijective.
fn extend(k: &FiniteGroup, g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = k.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let y = k.mul(x, s);
            let img = g.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    let mut hit = vec![false; g.order()];
    for &y in &map {
        if std::mem::replace(&mut hit[y], true) {
            return None;
        }
    }
    Some(map)
}

pub(crate) struct CatalogEntry {
    pub name: String,
    pub group: FiniteGroup,
    profile: Vec<(usize, usize)>,
}

/// The built-in nonabelian groups, in lookup order.
pub fn catalog_names() -> Vec<&'static str> {
    catalog().iter().map(|e| e.name.as_str()).collect()
}

/// The catalog group with the given name, as a dense table.
pub fn catalog_group(name: &str) -> Option<FiniteGroup> {
    catalog().iter().find(|e| e.name == name).map(|e| e.group.clone())
}

pub(crate) fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

fn entry(name: &str, group: FiniteGroup) -> CatalogEntry {
    let group = group.to_dense();
    CatalogEntry {
        name: name.to_string(),
        profile: order_profile(&group),
        group,
    }
}

fn perm_group(degree: u32, gens: &[Vec<u32>]) -> FiniteGroup {
    let id: Vec<u32> = (0..degree).collect();
    FiniteGroup::generated_by(gens, &id, |a, b| b.iter().map(|&x| a[x as usize]).collect())
}

fn cycle(degree: u32, points: &[u32]) -> Vec<u32> {
    let mut p: Vec<u32> = (0..degree).collect();
    for w in 0..points.len() {
        p[points[w] as usize] = points[(w + 1) % points.len()];
    }
    p
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: u32) -> FiniteGroup {
    let rot: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<u32> = (0..n).map(|i| (n - i) % n).collect();
    perm_group(n, &[rot, refl])
}

/// Dicyclic group of order `4n`: `⟨a, x | a^{2n}, x² = a^n, x a x⁻¹ = a⁻¹⟩`.
pub fn dicyclic(n: u32) -> FiniteGroup {
    let m = 2 * n;
    let mul = move |&(k, j): &(u32, u32), &(l, i): &(u32, u32)| -> (u32, u32) {
        if j == 0 {
            (k.wrapping_add(l) % m, i)
        } else {
            let base = (k + m - l) % m;
            if i == 0 {
                (base, 1)
            } else {
                ((base + n) % m, 0)
            }
        }
    };
    FiniteGroup::generated_by(&[(1, 0), (0, 1)], &(0, 0), mul)
}

fn direct(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let mut gens: Vec<(usize, usize)> = a.generators().iter().map(|&x| (x, 0)).collect();
    gens.extend(b.generators().iter().map(|&y| (0, y)));
    FiniteGroup::generated_by(&gens, &(0, 0), |&(x1, y1), &(x2, y2)| (a.mul(x1, x2), b.mul(y1, y2)))
}

/// Affine maps `x ↦ ux + v` over `Z/q` with `u` in the subgroup generated by `g`.
fn affine(q: u32, g: u32) -> FiniteGroup {
    let mul = move |&(u1, v1): &(u32, u32), &(u2, v2): &(u32, u32)| ((u1 * u2) % q, (u1 * v2 + v1) % q);
    FiniteGroup::generated_by(&[(1, 1), (g, 0)], &(1, 0), mul)
}

fn sl23() -> FiniteGroup {
    type M = [u32; 4];
    let mul = |a: &M, b: &M| -> M {
        [
            (a[0] * b[0] + a[1] * b[2]) % 3,
            (a[0] * b[1] + a[1] * b[3]) % 3,
            (a[2] * b[0] + a[3] * b[2]) % 3,
            (a[2] * b[1] + a[3] * b[3]) % 3,
        ]
    };
    FiniteGroup::generated_by(&[[1, 1, 0, 1], [1, 0, 1, 1]], &[1, 0, 0, 1], mul)
}

fn heisenberg(q: u32) -> FiniteGroup {
    type H = (u32, u32, u32);
    let mul = move |&(a, b, c): &H, &(x, y, z): &H| -> H { ((a + x) % q, (b + y) % q, (c + z + a * y) % q) };
    FiniteGroup::generated_by(&[(1, 0, 0), (0, 1, 0)], &(0, 0, 0), mul)
}

fn build_catalog() -> Vec<CatalogEntry> {
    let c = FiniteGroup::cyclic;
    let s3 = dihedral(3);
    let d4 = dihedral(4);
    let q8 = dicyclic(2);
    let a4 = perm_group(4, &[cycle(4, &[0, 1, 2]), cycle(4, &[0, 1, 3])]);
    let s4 = perm_group(4, &[cycle(4, &[0, 1, 2, 3]), cycle(4, &[0, 1])]);
    let a5 = perm_group(5, &[cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])]);
    let mut out = vec![
        entry("S3", s3.clone()),
        entry("D4", d4.clone()),
        entry("Q8", q8.clone()),
        entry("A4", a4.clone()),
        entry("S4", s4.clone()),
        entry("SL(2,3)", sl23()),
        entry("A5", a5),
    ];
    for n in 5..=31 {
        out.push(entry(&format!("D{n}"), dihedral(n)));
    }
    for n in 3..=15 {
        out.push(entry(&format!("Dic{n}"), dicyclic(n)));
    }
    out.extend([
        entry("C2 x D4", direct(&c(2), &d4)),
        entry("C2 x Q8", direct(&c(2), &q8)),
        entry("C3 x S3", direct(&c(3), &s3)),
        entry("C4 x S3", direct(&c(4), &s3)),
        entry("C2 x A4", direct(&c(2), &a4)),
        entry("C3 x D4", direct(&c(3), &d4)),
        entry("C3 x Q8", direct(&c(3), &q8)),
        entry("S3 x S3", direct(&s3, &s3)),
        entry("C2 x S4", direct(&c(2), &s4)),
        entry("F20", affine(5, 2)),
        entry("F21", affine(7, 2)),
        entry("F42", affine(7, 3)),
        entry("He3", heisenberg(3)),
        entry("(C3 x C3) : C2", generalized_dihedral_c3c3()),
    ]);
    out
}

// C3 × C3 extended by inversion.
fn generalized_dihedral_c3c3() -> FiniteGroup {
    type G = (u32, u32, u32);
    let mul = |&(a, b, s): &G, &(x, y, t): &G| -> G {
        let (x, y) = if s == 1 { ((3 - x) % 3, (3 - y) % 3) } else { (x, y) };
        ((a + x) % 3, (b + y) % 3, (s + t) % 2)
    };
    FiniteGroup::generated_by(&[(1, 0, 0), (0, 1, 0), (0, 0, 1)], &(0, 0, 0), mul)
}
