//! The pair calculus `D ⋊ Out(P,F)`.
//!
//! `D` is a finitely generated abelian group `Z^f ⊕ Z/d_1 ⊕ … ⊕ Z/d_t`
//! supplied by the caller, together with an action of a finite group
//! `Out` by integer matrices. Elements are pairs `(v, φ)` composed by
//! `(v, φ)(w, ψ) = (v + φ·w, φψ)`. Nothing here knows what an
//! endopermutation module is; every context is a model of a Dade group,
//! not a computation of one.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fusion::InertialPair;
use crate::group::{closure, semidirect_product_flat, FiniteGroup, SemidirectData};
use crate::pgroup::{AbelianPGroup, GroupElement, QuotientMap};
use crate::picard::CoefficientProfile;

/// Largest `Out` for which a context stores one matrix per element.
pub const CONTEXT_OUT_BOUND: usize = 1 << 20;

/// Column `j` is the image of the `j`-th basis vector of `D`.
pub type Matrix = Vec<Vec<i64>>;

/// Where the character group `Hom(P/foc, O^×)` sits inside `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSummand {
    /// Index of the first torsion coordinate of the summand.
    pub offset: usize,
    pub quotient: AbelianPGroup,
    pub profile: CoefficientProfile,
}

#[derive(Debug)]
pub struct DadeContext {
    name: String,
    free_rank: usize,
    torsion: Vec<u64>,
    out: FiniteGroup,
    // matrices[g] flattened row-major, n×n with n = free_rank + torsion.len()
    matrices: Vec<Vec<i64>>,
    summand: Option<CharacterSummand>,
}

/// An element `(v, φ)` of `D ⋊ Out`.
#[derive(Clone, Debug)]
pub struct DadePair {
    ctx: Arc<DadeContext>,
    v: Vec<i64>,
    phi: usize,
}

impl PartialEq for DadePair {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.v == other.v && self.phi == other.phi
    }
}

impl Eq for DadePair {}

/// A linear character of `P/foc` with values in `Z/p^m`.
///
/// `values[i]` is the image of the `i`-th generator of the quotient,
/// recorded as a residue modulo `p^{min(a_i, m)}` where `p^{a_i}` is that
/// generator's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCharacter {
    quotient: AbelianPGroup,
    profile: CoefficientProfile,
    values: Vec<u64>,
}

impl LinearCharacter {
    pub fn new(quotient: &AbelianPGroup, profile: CoefficientProfile, values: &[u64]) -> Result<Self> {
        let moduli = character_moduli(quotient, profile);
        if values.len() != moduli.len() {
            return Err(Error::InvalidCharacter(format!(
                "{} values for a quotient of rank {}",
                values.len(),
                moduli.len()
            )));
        }
        for (i, (&x, &m)) in values.iter().zip(&moduli).enumerate() {
            if x >= m {
                return Err(Error::InvalidCharacter(format!(
                    "value {x} at generator {i} must lie below {m}"
                )));
            }
        }
        Ok(LinearCharacter {
            quotient: quotient.clone(),
            profile,
            values: values.to_vec(),
        })
    }

    pub fn trivial(quotient: &AbelianPGroup, profile: CoefficientProfile) -> Self {
        let values = vec![0; quotient.rank()];
        LinearCharacter {
            quotient: quotient.clone(),
            profile,
            values,
        }
    }

    /// Every character, in lexicographic order of values.
    pub fn all(quotient: &AbelianPGroup, profile: CoefficientProfile) -> Vec<Self> {
        let moduli = character_moduli(quotient, profile);
        let total: u64 = moduli.iter().product();
        (0..total)
            .map(|mut k| {
                let mut values = vec![0; moduli.len()];
                for i in (0..moduli.len()).rev() {
                    values[i] = k % moduli[i];
                    k /= moduli[i];
                }
                LinearCharacter {
                    quotient: quotient.clone(),
                    profile,
                    values,
                }
            })
            .collect()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn quotient(&self) -> &AbelianPGroup {
        &self.quotient
    }

    pub fn order(&self) -> u64 {
        let moduli = character_moduli(&self.quotient, self.profile);
        self.values
            .iter()
            .zip(&moduli)
            .map(|(&x, &m)| m / gcd(m, x))
            .fold(1, |acc, o| acc.max(o))
    }
}

/// `Hom(Z/p^a, Z/p^m) ≅ Z/p^{min(a,m)}` for each factor of `q`.
pub fn character_moduli(q: &AbelianPGroup, profile: CoefficientProfile) -> Vec<u64> {
    q.exponents()
        .iter()
        .map(|&a| q.p().pow(profile.exponent_for(a)))
        .collect()
}

impl DadeContext {
    /// Build a context from matrices for the generators of `out`, extending
    /// them to all of `out` and checking that this gives a homomorphism.
    pub fn new(
        name: &str,
        free_rank: usize,
        torsion: &[u64],
        out: FiniteGroup,
        generator_matrices: &[Matrix],
    ) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::InvalidCharacter("torsion moduli must be at least 2".into()));
        }
        if generator_matrices.len() != out.generators().len() {
            return Err(Error::ActionNotHomomorphism(format!(
                "{} matrices for {} generators",
                generator_matrices.len(),
                out.generators().len()
            )));
        }
        if out.order() > CONTEXT_OUT_BOUND {
            return Err(Error::OrderBoundExceeded {
                order: out.order() as u128,
                bound: CONTEXT_OUT_BOUND as u128,
            });
        }
        let shape = Shape {
            free: free_rank,
            torsion: torsion.to_vec(),
        };
        let gens: Vec<Vec<i64>> = generator_matrices
            .iter()
            .map(|m| shape.canonical(m))
            .collect::<Result<_>>()?;
        let matrices = extend_matrices(&shape, &out, &gens)?;
        Ok(DadeContext {
            name: name.to_string(),
            free_rank,
            torsion: torsion.to_vec(),
            out,
            matrices,
            summand: None,
        })
    }

    /// A context whose `Out` is the finite group generated by the given
    /// matrices themselves.
    pub fn from_matrices(name: &str, free_rank: usize, torsion: &[u64], gens: &[Matrix]) -> Result<Self> {
        let shape = Shape {
            free: free_rank,
            torsion: torsion.to_vec(),
        };
        let canon: Vec<Vec<i64>> = gens.iter().map(|m| shape.canonical(m)).collect::<Result<_>>()?;
        let identity = shape.identity();
        let mul = |a: &Vec<i64>, b: &Vec<i64>| shape.mul(a, b);
        if closure(&canon, &identity, mul, Some(CONTEXT_OUT_BOUND)).is_none() {
            return Err(Error::OrderBoundExceeded {
                order: CONTEXT_OUT_BOUND as u128 + 1,
                bound: CONTEXT_OUT_BOUND as u128,
            });
        }
        let out = FiniteGroup::generated_by(&canon, &identity, mul);
        // generated_by drops identity generators; match them up again
        let out_gens: Vec<Matrix> = canon
            .iter()
            .filter(|m| **m != identity)
            .map(|m| shape.unflatten(m))
            .collect();
        Self::new(name, free_rank, torsion, out, &out_gens)
    }

    /// `D` trivial, `Out` trivial.
    pub fn trivial() -> Arc<Self> {
        Arc::new(
            Self::new("trivial", 0, &[], FiniteGroup::trivial(), &[]).expect("trivial context"),
        )
    }

    /// `Z/3` with `C2` acting by inversion.
    pub fn z3_inversion() -> Arc<Self> {
        Arc::new(
            Self::new("Z/3 : C2", 0, &[3], FiniteGroup::cyclic(2), &[vec![vec![-1]]])
                .expect("inversion is an action"),
        )
    }

    /// `Z` with `C2` acting by negation.
    pub fn free_negation() -> Arc<Self> {
        Arc::new(
            Self::new("Z : C2", 1, &[], FiniteGroup::cyclic(2), &[vec![vec![-1]]])
                .expect("negation is an action"),
        )
    }

    /// `Z ⊕ Z/2 ⊕ Z/4` with `C2` swapping nothing but negating the free part
    /// and the `Z/4` part, and a shear from the free part into `Z/2`.
    pub fn mixed_model() -> Arc<Self> {
        let m = vec![vec![-1, 0, 0], vec![1, 1, 0], vec![0, 0, -1]];
        Arc::new(
            Self::new("Z + Z/2 + Z/4 : C2", 1, &[2, 4], FiniteGroup::cyclic(2), &[m])
                .expect("mixed model is an action"),
        )
    }

    /// `D = Hom(P/foc, Z/p^m)` with `Out(P,F)` acting by
    /// `(n·χ)(x) = χ(n⁻¹ x)`; the whole of `D` is the character summand.
    pub fn characters(pair: &InertialPair, profile: CoefficientProfile) -> Result<Arc<Self>> {
        let p = pair.p();
        let qmap = QuotientMap::new(p, pair.foc())?;
        let q = qmap.target().clone();
        let moduli = character_moduli(&q, profile);
        // D has invariant factors moduli (possibly with 1s when m = 0)
        let keep: Vec<usize> = (0..moduli.len()).filter(|&i| moduli[i] > 1).collect();
        let torsion: Vec<u64> = keep.iter().map(|&i| moduli[i]).collect();
        let out = pair.out_pf().clone();
        if out.order() > CONTEXT_OUT_BOUND {
            return Err(Error::OrderBoundExceeded {
                order: out.order() as u128,
                bound: CONTEXT_OUT_BOUND as u128,
            });
        }
        let n = pair.normalizer();
        let mut matrices = Vec::new();
        for &g in out.generators() {
            let lift = n
                .elements()
                .find(|&x| pair.project(x) == g)
                .expect("projection is onto");
            let inv = n
                .automorphism(n.inv(lift))
                .expect("normalizer consists of automorphisms");
            let full = character_action(&qmap, &inv, profile)?;
            let restricted: Matrix = keep
                .iter()
                .map(|&i| keep.iter().map(|&j| full[i][j]).collect())
                .collect();
            matrices.push(restricted);
        }
        let name = format!("Hom({q}, O^x)");
        let mut ctx = Self::new(&name, 0, &torsion, out, &matrices)?;
        if keep.len() == moduli.len() {
            ctx.summand = Some(CharacterSummand {
                offset: 0,
                quotient: q,
                profile,
            });
        }
        Ok(Arc::new(ctx))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates of `D`.
    pub fn dimension(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn out(&self) -> &FiniteGroup {
        &self.out
    }

    pub fn character_summand(&self) -> Option<&CharacterSummand> {
        self.summand.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    fn shape(&self) -> Shape {
        Shape {
            free: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// The matrix of `φ`.
    pub fn matrix(&self, phi: usize) -> Matrix {
        self.shape().unflatten(&self.matrices[phi])
    }

    /// `φ·v`.
    pub fn act(&self, phi: usize, v: &[i64]) -> Vec<i64> {
        let n = self.dimension();
        let m = &self.matrices[phi];
        let w: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
            .collect();
        self.reduce(w)
    }

    fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (k, &d) in self.torsion.iter().enumerate() {
            let x = &mut v[self.free_rank + k];
            *x = x.rem_euclid(d as i64);
        }
        v
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dimension()]
    }
}

impl DadePair {
    pub fn new(ctx: &Arc<DadeContext>, v: &[i64], phi: usize) -> Result<Self> {
        if v.len() != ctx.dimension() {
            return Err(Error::BadShape {
                rows: v.len(),
                cols: 1,
                expected: ctx.dimension(),
            });
        }
        if phi >= ctx.out.order() {
            return Err(Error::NotASubgroup(format!("{phi} is not an element of Out")));
        }
        Ok(DadePair {
            ctx: ctx.clone(),
            v: ctx.reduce(v.to_vec()),
            phi,
        })
    }

    pub fn identity(ctx: &Arc<DadeContext>) -> Self {
        DadePair {
            ctx: ctx.clone(),
            v: ctx.zero(),
            phi: 0,
        }
    }

    pub fn context(&self) -> &Arc<DadeContext> {
        &self.ctx
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn is_identity(&self) -> bool {
        self.phi == 0 && self.v.iter().all(|&x| x == 0)
    }
}

/// `(v, φ)(w, ψ) = (v + φ·w, φψ)`.
pub fn compose(a: &DadePair, b: &DadePair) -> Result<DadePair> {
    if !Arc::ptr_eq(&a.ctx, &b.ctx) {
        return Err(Error::ContextMismatch);
    }
    let ctx = &a.ctx;
    let w = ctx.act(a.phi, &b.v);
    let v: Vec<i64> = a.v.iter().zip(&w).map(|(x, y)| x + y).collect();
    Ok(DadePair {
        ctx: ctx.clone(),
        v: ctx.reduce(v),
        phi: ctx.out.mul(a.phi, b.phi),
    })
}

/// `(v, φ)⁻¹ = (−φ⁻¹·v, φ⁻¹)`.
pub fn inverse(a: &DadePair) -> DadePair {
    let ctx = &a.ctx;
    let phi_inv = ctx.out.inv(a.phi);
    let v: Vec<i64> = ctx.act(phi_inv, &a.v).into_iter().map(|x| -x).collect();
    DadePair {
        ctx: ctx.clone(),
        v: ctx.reduce(v),
        phi: phi_inv,
    }
}

/// `a b a⁻¹ b⁻¹`.
pub fn commutator(a: &DadePair, b: &DadePair) -> Result<DadePair> {
    compose(&compose(a, b)?, &compose(&inverse(a), &inverse(b))?)
}

/// `[(v, 1), (0, φ)]` evaluated with the group law, compared with
/// `(v − φ·v, 1)`.
pub fn commutator_identity_check(ctx: &Arc<DadeContext>, v: &[i64], phi: usize) -> Result<bool> {
    let a = DadePair::new(ctx, v, 0)?;
    let b = DadePair::new(ctx, &ctx.zero(), phi)?;
    let lhs = commutator(&a, &b)?;
    let fv = ctx.act(phi, &a.v);
    let diff: Vec<i64> = a.v.iter().zip(&fv).map(|(x, y)| x - y).collect();
    let rhs = DadePair::new(ctx, &diff, 0)?;
    Ok(lhs == rhs)
}

/// Add the image of `zeta` in the character summand to `v`.
pub fn twist_by_character(a: &DadePair, zeta: &LinearCharacter) -> Result<DadePair> {
    let summand = a.ctx.summand.as_ref().ok_or(Error::NoCharacterSummandDeclared)?;
    if summand.quotient != zeta.quotient || summand.profile != zeta.profile {
        return Err(Error::InvalidCharacter(
            "character of a different quotient or coefficient profile".into(),
        ));
    }
    let mut v = a.v.clone();
    for (i, &x) in zeta.values.iter().enumerate() {
        v[a.ctx.free_rank + summand.offset + i] += x as i64;
    }
    Ok(DadePair {
        ctx: a.ctx.clone(),
        v: a.ctx.reduce(v),
        phi: a.phi,
    })
}

/// The finite part `D^t` with the restricted action.
pub fn torsion_subgroup(ctx: &DadeContext) -> Result<DadeContext> {
    let f = ctx.free_rank;
    let n = ctx.dimension();
    let t = ctx.torsion.len();
    let mut matrices = Vec::with_capacity(ctx.matrices.len());
    for m in &ctx.matrices {
        // images of torsion vectors have no free part
        if (0..f).any(|i| (f..n).any(|j| m[i * n + j] != 0)) {
            return Err(Error::ActionDoesNotPreserveTorsion);
        }
        let mut r = Vec::with_capacity(t * t);
        for i in f..n {
            for j in f..n {
                r.push(m[i * n + j]);
            }
        }
        matrices.push(r);
    }
    Ok(DadeContext {
        name: format!("torsion of {}", ctx.name),
        free_rank: 0,
        torsion: ctx.torsion.clone(),
        out: ctx.out.clone(),
        matrices,
        summand: ctx.summand.clone(),
    })
}

/// Order of `(v, φ)`: `k = ord(φ)`, then the order of the translation
/// `(v + φv + … + φ^{k-1}v, 1)`. `None` when that translation has a
/// nonzero free part.
pub fn pair_order(a: &DadePair) -> Option<u64> {
    let ctx = &a.ctx;
    let k = ctx.out.element_order(a.phi);
    let mut power = DadePair::identity(ctx);
    for _ in 0..k {
        power = compose(&power, a).expect("same context");
    }
    if power.v[..ctx.free_rank].iter().any(|&x| x != 0) {
        return None;
    }
    let t = power.v[ctx.free_rank..]
        .iter()
        .zip(&ctx.torsion)
        .map(|(&x, &d)| d / gcd(d, x as u64))
        .fold(1u64, lcm);
    Some(k as u64 * t)
}

/// `D ⋊ Out` as a finite group, for contexts without free part.
///
/// Elements of `D` are indexed in mixed radix with the first coordinate
/// most significant, matching [`FiniteGroup::abelian`].
pub fn as_semidirect(ctx: &DadeContext) -> Result<SemidirectData> {
    if !ctx.is_finite() {
        return Err(Error::OrderBoundExceeded {
            order: u128::MAX,
            bound: CONTEXT_OUT_BOUND as u128,
        });
    }
    let inv: Vec<usize> = ctx.torsion.iter().map(|&d| d as usize).collect();
    let d = FiniteGroup::abelian(&inv);
    let size = d.order();
    let mut action = Vec::with_capacity(size * ctx.out.order());
    for phi in ctx.out.elements() {
        for x in 0..size {
            let v = coords_of(&ctx.torsion, x);
            action.push(index_of(&ctx.torsion, &ctx.act(phi, &v)) as u32);
        }
    }
    semidirect_product_flat(&d, &ctx.out, action)
}

/// Coordinates of the `x`-th element of `⊕ Z/d_i`.
pub fn coords_of(torsion: &[u64], mut x: usize) -> Vec<i64> {
    let mut v = vec![0i64; torsion.len()];
    for i in (0..torsion.len()).rev() {
        v[i] = (x % torsion[i] as usize) as i64;
        x /= torsion[i] as usize;
    }
    v
}

pub fn index_of(torsion: &[u64], v: &[i64]) -> usize {
    v.iter()
        .zip(torsion)
        .fold(0, |acc, (&x, &d)| acc * d as usize + x.rem_euclid(d as i64) as usize)
}

// Matrix of the action χ ↦ χ ∘ α on Hom(Q, Z/p^m), where `alpha` acts on P
// and induces an automorphism of Q = P/S.
fn character_action(qmap: &QuotientMap, alpha: &crate::autgroup::Automorphism, profile: CoefficientProfile) -> Result<Matrix> {
    let q = qmap.target();
    let r = q.rank();
    let p = q.p();
    let k: Vec<u32> = q.exponents().iter().map(|&a| profile.exponent_for(a)).collect();
    // b[i][j] = i-th coordinate of α(q_j)
    let mut b = vec![vec![0u64; r]; r];
    for j in 0..r {
        let image: GroupElement = qmap.apply(&alpha.apply(qmap.lift_generator(j))?)?;
        for i in 0..r {
            b[i][j] = image.coords[i];
        }
    }
    // (χ∘α)(q_j) = Σ_i b[i][j] χ(q_i); in units of p^{M-k}, the coefficient
    // of c_i in c'_j is b[i][j] p^{k_j - k_i}, an integer by divisibility.
    let mut out = vec![vec![0i64; r]; r];
    for j in 0..r {
        for i in 0..r {
            let entry = if k[j] >= k[i] {
                b[i][j] as i128 * (p as i128).pow(k[j] - k[i])
            } else {
                let d = (p as i128).pow(k[i] - k[j]);
                let x = b[i][j] as i128;
                if x % d != 0 {
                    return Err(Error::DivisibilityViolation {
                        row: i,
                        col: j,
                        value: b[i][j],
                        required: d as u64,
                    });
                }
                x / d
            };
            let modulus = (p as i128).pow(k[j]);
            out[j][i] = entry.rem_euclid(modulus.max(1)) as i64;
        }
    }
    Ok(out)
}

#[derive(Clone)]
struct Shape {
    free: usize,
    torsion: Vec<u64>,
}

impl Shape {
    fn dim(&self) -> usize {
        self.free + self.torsion.len()
    }

    fn modulus(&self, i: usize) -> Option<i64> {
        (i >= self.free).then(|| self.torsion[i - self.free] as i64)
    }

    fn identity(&self) -> Vec<i64> {
        let n = self.dim();
        (0..n * n).map(|k| (k / n == k % n) as i64).collect()
    }

    /// Validate and reduce; returns the flat row-major form.
    fn canonical(&self, m: &Matrix) -> Result<Vec<i64>> {
        let n = self.dim();
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::BadShape {
                rows: m.len(),
                cols: m.first().map_or(0, |r| r.len()),
                expected: n,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut x = m[i][j];
                match (self.modulus(i), self.modulus(j)) {
                    (None, Some(_)) if x != 0 => {
                        return Err(Error::DivisibilityViolation {
                            row: i,
                            col: j,
                            value: x.unsigned_abs(),
                            required: 0,
                        })
                    }
                    (Some(di), Some(dj)) => {
                        let required = di / gcd(di as u64, dj as u64) as i64;
                        if x % required != 0 {
                            return Err(Error::DivisibilityViolation {
                                row: i,
                                col: j,
                                value: x.unsigned_abs(),
                                required: required as u64,
                            });
                        }
                        x = x.rem_euclid(di);
                    }
                    (Some(di), None) => x = x.rem_euclid(di),
                    _ => {}
                }
                flat.push(x);
            }
        }
        Ok(flat)
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.dim();
        let mut c = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: i64 = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum();
                c[i * n + j] = match self.modulus(i) {
                    Some(d) => s.rem_euclid(d),
                    None => s,
                };
            }
        }
        c
    }

    fn unflatten(&self, m: &[i64]) -> Matrix {
        let n = self.dim();
        (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect()
    }
}

// BFS over `out`, assigning M(xs) = M(x)M(s) and failing on any conflict.
fn extend_matrices(shape: &Shape, out: &FiniteGroup, gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut mats: Vec<Option<Vec<i64>>> = vec![None; out.order()];
    mats[0] = Some(shape.identity());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (k, &s) in out.generators().iter().enumerate() {
            let y = out.mul(x, s);
            let m = shape.mul(mats[x].as_ref().expect("visited"), &gens[k]);
            match &mats[y] {
                None => {
                    mats[y] = Some(m);
                    queue.push(y);
                }
                Some(old) if *old != m => {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "matrices disagree at {}",
                        out.label(y)
                    )))
                }
                _ => {}
            }
        }
    }
    mats.into_iter()
        .map(|m| m.ok_or_else(|| Error::ActionNotHomomorphism("generators do not span".into())))
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::make_automorphism;
    use crate::fusion::build_inertial_pair;

    #[test]
    fn z3_inversion_examples() {
        let ctx = DadeContext::z3_inversion();
        let s = DadePair::new(&ctx, &[1], 1).unwrap();
        let ss = compose(&s, &s).unwrap();
        assert!(ss.is_identity());
        let inv = inverse(&s);
        assert_eq!((inv.v(), inv.phi()), (&[1i64][..], 1));
        let a = DadePair::new(&ctx, &[1], 0).unwrap();
        let b = DadePair::new(&ctx, &[0], 1).unwrap();
        let c = commutator(&a, &b).unwrap();
        assert_eq!((c.v(), c.phi()), (&[2i64][..], 0));
        assert!(commutator_identity_check(&ctx, &[1], 1).unwrap());
    }

    #[test]
    fn free_negation_commutator() {
        let ctx = DadeContext::free_negation();
        let a = DadePair::new(&ctx, &[1], 0).unwrap();
        let b = DadePair::new(&ctx, &[0], 1).unwrap();
        let c = commutator(&a, &b).unwrap();
        assert_eq!(c.v(), &[2]);
        assert_eq!(pair_order(&a), None);
        assert_eq!(pair_order(&b), Some(2));
    }

    #[test]
    fn conjugation_formula() {
        let ctx = DadeContext::mixed_model();
        let w = DadePair::new(&ctx, &[3, 1, 1], 0).unwrap();
        let phi = DadePair::new(&ctx, &[0, 0, 0], 1).unwrap();
        let conj = compose(&compose(&phi, &w).unwrap(), &inverse(&phi)).unwrap();
        assert_eq!(conj.v(), ctx.act(1, w.v()).as_slice());
        assert_eq!(conj.phi(), 0);
    }

    #[test]
    fn torsion_examples() {
        let ctx = DadeContext::mixed_model();
        let t = torsion_subgroup(&ctx).unwrap();
        assert_eq!(t.torsion(), &[2, 4]);
        assert_eq!(t.free_rank(), 0);
        let z2 = DadeContext::new("Z^2", 2, &[], FiniteGroup::trivial(), &[]).unwrap();
        assert_eq!(torsion_subgroup(&z2).unwrap().dimension(), 0);
    }

    #[test]
    fn bad_matrices_rejected() {
        // Z/2 → Z/4 must land in 2Z/4
        let r = DadeContext::new("bad", 0, &[4, 2], FiniteGroup::cyclic(2), &[vec![vec![1, 1], vec![0, 1]]]);
        assert!(matches!(r, Err(Error::DivisibilityViolation { .. })));
        // negation on Z/3 has order 2, not 3
        let r = DadeContext::new("bad", 0, &[3], FiniteGroup::cyclic(3), &[vec![vec![-1]]]);
        assert!(matches!(r, Err(Error::ActionNotHomomorphism(_))));
    }

    #[test]
    fn faithful_character_twist_on_c4() {
        let p = AbelianPGroup::new(2, &[2]).unwrap();
        let pair = build_inertial_pair(&p, &[]).unwrap();
        let profile = CoefficientProfile::new(2);
        let ctx = DadeContext::characters(&pair, profile).unwrap();
        assert_eq!(ctx.torsion(), &[4]);
        let q = &ctx.character_summand().unwrap().quotient;
        let zeta = LinearCharacter::new(q, profile, &[1]).unwrap();
        let x = twist_by_character(&DadePair::identity(&ctx), &zeta).unwrap();
        assert_eq!(pair_order(&x), Some(4));
        // Aut(C4) = {±1} acts on characters by negation
        assert_eq!(ctx.matrix(1), vec![vec![3]]);
    }

    #[test]
    fn klein_four_characters_with_c3() {
        let p = AbelianPGroup::new(2, &[1, 1]).unwrap();
        let a = make_automorphism(&p, &[vec![0, 1], vec![1, 1]]).unwrap();
        let pair = build_inertial_pair(&p, &[a]).unwrap();
        let ctx = DadeContext::characters(&pair, CoefficientProfile::large()).unwrap();
        // foc = P, so no characters
        assert_eq!(ctx.dimension(), 0);
        assert_eq!(ctx.out().order(), 2);
    }

    #[test]
    fn twist_needs_summand() {
        let ctx = DadeContext::z3_inversion();
        let q = AbelianPGroup::new(3, &[1]).unwrap();
        let zeta = LinearCharacter::trivial(&q, CoefficientProfile::large());
        assert_eq!(
            twist_by_character(&DadePair::identity(&ctx), &zeta),
            Err(Error::NoCharacterSummandDeclared)
        );
    }

    #[test]
    fn context_mismatch() {
        let a = DadePair::identity(&DadeContext::z3_inversion());
        let b = DadePair::identity(&DadeContext::z3_inversion());
        assert_eq!(compose(&a, &b), Err(Error::ContextMismatch));
    }

    #[test]
    fn from_matrices_builds_out() {
        let ctx = DadeContext::from_matrices("Z/5 : C4", 0, &[5], &[vec![vec![2]]]).unwrap();
        assert_eq!(ctx.out().order(), 4);
        let sd = as_semidirect(&ctx).unwrap();
        assert_eq!(sd.group.order(), 20);
    }
}
