//! Picard groups assembled from fusion data, and exactness checks.
//!
//! Every answer is an abstract finite group built from `Hom(E, k^×)`,
//! `Out(P,F) = N_{Aut(P)}(E)/E` and character groups of `P`, returned in a
//! [`PicardReport`] that records which statement produced it and which
//! hypotheses on the coefficient ring were assumed.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::dade::{as_semidirect, DadeContext};
use crate::error::{Error, Result};
use crate::fusion::{build_inertial_pair, InertialPair};
use crate::group::{
    direct_product, extend_action, semidirect_product_flat, FiniteGroup, HomomorphismData,
    SemidirectData,
};
use crate::identify::{identify, verify_identification, AbstractGroupId};
use crate::pgroup::AbelianPGroup;

/// Largest action table (`|A| · |H|` entries) built for a semidirect product.
pub const ASSEMBLY_BOUND: usize = 1 << 24;

/// How many `p`-power roots of unity the coefficient ring has.
///
/// `m = None` means "as many as needed", so `Hom(Z/p^a, O^×) ≅ Z/p^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientProfile {
    pub m: Option<u32>,
}

impl CoefficientProfile {
    pub fn new(m: u32) -> Self {
        CoefficientProfile { m: Some(m) }
    }

    pub fn large() -> Self {
        CoefficientProfile { m: None }
    }

    /// Exponent of `Hom(Z/p^a, O^×)`.
    pub fn exponent_for(&self, a: u32) -> u32 {
        self.m.map_or(a, |m| a.min(m))
    }
}

impl fmt::Display for CoefficientProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "m = {m}"),
            None => f.write_str("m large"),
        }
    }
}

/// The structural result a report was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    LocalBlock,
    FrobeniusBound,
    CyclicDefect,
    KleinFour,
    Nilpotent,
}

impl Statement {
    pub fn description(&self) -> &'static str {
        match self {
            Statement::LocalBlock => "local block O(P:E) with [P,E] = P: Pic = Hom(E,k^x) : N_Aut(P)(E)/E",
            Statement::FrobeniusBound => {
                "Frobenius inertial quotient: Pic(B) embeds in Hom(E,k^x) : N_E"
            }
            Statement::CyclicDefect => "cyclic defect group: Pic(B) = T(B) = Out_P(A) x Aut(P)/E",
            Statement::KleinFour => "Klein four defect group, non-nilpotent block: Pic(B) = T(B)",
            Statement::Nilpotent => "nilpotent block: Pic(B) = L(B) = Hom(P,O^x) : Out(P)",
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            Statement::LocalBlock => "local-block",
            Statement::FrobeniusBound => "frobenius-bound",
            Statement::CyclicDefect => "cyclic-defect",
            Statement::KleinFour => "klein-four",
            Statement::Nilpotent => "nilpotent",
        }
    }
}

/// Hypotheses a report relies on without checking them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Assumption {
    CharacteristicZero,
    ResidueFieldLargeEnough,
    CoefficientRoots(CoefficientProfile),
    /// `|Out_P(A)| = d`, which depends on the block and not only on `(P, E)`.
    OutPOrder(u64),
    /// A Morita autoequivalence permutes the tree edges by an automorphism
    /// that fixes a vertex.
    VertexStabilization,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::CharacteristicZero => f.write_str("char(O) = 0"),
            Assumption::ResidueFieldLargeEnough => f.write_str("k is a splitting field for all subgroups"),
            Assumption::CoefficientRoots(p) => write!(f, "p-power roots of unity in O: {p}"),
            Assumption::OutPOrder(d) => write!(f, "|Out_P(A)| = {d}"),
            Assumption::VertexStabilization => {
                f.write_str("induced tree automorphism stabilises a vertex (imported)")
            }
        }
    }
}

/// A named piece of the assembled group.
#[derive(Clone, Debug)]
pub struct Constituent {
    pub role: &'static str,
    pub group: FiniteGroup,
    pub identification: AbstractGroupId,
}

impl Constituent {
    fn new(role: &'static str, group: FiniteGroup) -> Self {
        let identification = identify(&group);
        Constituent {
            role,
            group,
            identification,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PicardReport {
    pub statement: Statement,
    pub group: FiniteGroup,
    pub identification: AbstractGroupId,
    /// The isomorphism certificate, if any, was rechecked.
    pub certificate_verified: bool,
    pub constituents: Vec<Constituent>,
    pub assumptions: Vec<Assumption>,
    /// The group is only known to contain the Picard group.
    pub upper_bound: bool,
    /// `1 → A → A ⋊ H → H → 1` for the assembled product, when there is one.
    pub sequence: Vec<HomomorphismData>,
}

impl PicardReport {
    fn new(statement: Statement, group: FiniteGroup, constituents: Vec<Constituent>) -> Self {
        let identification = identify(&group);
        let certificate_verified = match &identification.descriptor {
            crate::identify::Descriptor::Named { .. } => verify_identification(&group, &identification),
            _ => true,
        };
        PicardReport {
            statement,
            group,
            identification,
            certificate_verified,
            constituents,
            assumptions: vec![Assumption::CharacteristicZero, Assumption::ResidueFieldLargeEnough],
            upper_bound: false,
            sequence: vec![],
        }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// `Hom(E, Z/N)` for abelian `E` of exponent `N`, tabulated on all of `E`.
struct CharacterTable {
    group: FiniteGroup,
    // values[χ][e]
    values: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
    exponent: u64,
}

fn character_table(e: &FiniteGroup) -> Result<CharacterTable> {
    if !e.is_abelian() {
        return Err(Error::EnotAbelian);
    }
    let gens = e.generators().to_vec();
    let exponent = gens
        .iter()
        .map(|&g| e.element_order(g) as u64)
        .fold(1u64, |a, b| a / gcd(a, b) * b);
    let steps: Vec<u64> = gens.iter().map(|&g| exponent / e.element_order(g) as u64).collect();
    let counts: Vec<u64> = gens.iter().map(|&g| e.element_order(g) as u64).collect();
    let total: u64 = counts.iter().product();
    let mut values = Vec::new();
    for mut k in 0..total {
        let mut on_gens = vec![0u64; gens.len()];
        for i in (0..gens.len()).rev() {
            on_gens[i] = (k % counts[i]) * steps[i];
            k /= counts[i];
        }
        if let Some(full) = extend_character(e, &gens, &on_gens, exponent) {
            values.push(full);
        }
    }
    // the all-zero tuple comes first, so index 0 is the trivial character
    let n = values.len();
    if n != e.order() {
        return Err(Error::InvalidCharacter(format!(
            "found {n} characters of a group of order {}",
            e.order()
        )));
    }
    let index: HashMap<Vec<u64>, usize> = values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let sum: Vec<u64> = values[a]
                        .iter()
                        .zip(&values[b])
                        .map(|(x, y)| (x + y) % exponent)
                        .collect();
                    index[&sum]
                })
                .collect()
        })
        .collect();
    let group = FiniteGroup::from_table(&table)?;
    Ok(CharacterTable {
        group,
        values,
        index,
        exponent,
    })
}

// The homomorphism E → Z/N with the given values on the generators, if any.
fn extend_character(e: &FiniteGroup, gens: &[usize], on_gens: &[u64], n: u64) -> Option<Vec<u64>> {
    let mut val = vec![u64::MAX; e.order()];
    val[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &v) in gens.iter().zip(on_gens) {
            let y = e.mul(x, s);
            let w = (val[x] + v) % n;
            if val[y] == u64::MAX {
                val[y] = w;
                queue.push(y);
            } else if val[y] != w {
                return None;
            }
        }
    }
    Some(val)
}

/// `Hom(E, k^×) ⋊ N_{Aut(P)}(E)/E`, with `n·χ = χ ∘ (conjugation by n)⁻¹`.
pub struct LocalAssembly {
    pub characters: FiniteGroup,
    pub out: FiniteGroup,
    pub product: SemidirectData,
}

/// Assemble `Hom(E, k^×) ⋊ Out(P,F)` for abelian `E`.
pub fn assemble_local(pair: &InertialPair) -> Result<LocalAssembly> {
    let n = pair.normalizer();
    let e_sub = pair.e_in_normalizer();
    let e = n.subgroup_as_group(e_sub);
    let local: HashMap<usize, usize> = e_sub.elements().iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let chars = character_table(&e)?;
    let out = pair.out_pf().clone();
    let size = chars.group.order() * out.order();
    if size > ASSEMBLY_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: size as u128,
            bound: ASSEMBLY_BOUND as u128,
        });
    }
    // lift each generator of Out(P,F) to N
    let mut lifts: Vec<Option<usize>> = vec![None; out.generators().len()];
    let want: HashMap<usize, usize> = out.generators().iter().enumerate().map(|(k, &g)| (g, k)).collect();
    for x in n.elements() {
        if let Some(&k) = want.get(&pair.project(x)) {
            lifts[k].get_or_insert(x);
            if lifts.iter().all(Option::is_some) {
                break;
            }
        }
    }
    let gen_action: Vec<Vec<usize>> = lifts
        .iter()
        .map(|lift| {
            let x = lift.expect("projection is onto");
            let x_inv = n.inv(x);
            // (x·χ)(f) = χ(x⁻¹ f x)
            let pulled: Vec<usize> = e_sub
                .elements()
                .iter()
                .map(|&f| local[&n.mul(n.mul(x_inv, f), x)])
                .collect();
            (0..chars.group.order())
                .map(|c| {
                    let v: Vec<u64> = pulled.iter().map(|&k| chars.values[c][k]).collect();
                    chars.index[&v]
                })
                .collect()
        })
        .collect();
    let action = extend_action(&chars.group, &out, &gen_action)?;
    let product = semidirect_product_flat(&chars.group, &out, action)?;
    debug_assert!(chars.exponent >= 1);
    Ok(LocalAssembly {
        characters: chars.group,
        out,
        product,
    })
}

/// `1 → A → A ⋊ H → H → 1`.
pub fn canonical_sequence(sd: &SemidirectData) -> Vec<HomomorphismData> {
    let a = sd.embed_normal.source.clone();
    let h = sd.projection.target.clone();
    vec![
        from_trivial(&a),
        sd.embed_normal.clone(),
        sd.projection.clone(),
        to_trivial(&h),
    ]
}

fn from_trivial(g: &FiniteGroup) -> HomomorphismData {
    HomomorphismData::new(FiniteGroup::trivial(), g.clone(), vec![0]).expect("trivial map")
}

fn to_trivial(g: &FiniteGroup) -> HomomorphismData {
    HomomorphismData::new(g.clone(), FiniteGroup::trivial(), vec![0; g.order()]).expect("trivial map")
}

/// Picard group of `O(P ⋊ E)` for abelian `p'`-group `E` with `[P,E] = P`.
pub fn pic_local(pair: &InertialPair, profile: CoefficientProfile) -> Result<PicardReport> {
    check_local(pair)?;
    let asm = assemble_local(pair)?;
    let mut report = PicardReport::new(
        Statement::LocalBlock,
        asm.product.group.clone(),
        vec![
            Constituent::new("Out_P(OL) = Hom(E,k^x)", asm.characters.clone()),
            Constituent::new("Out(P,F) = N_Aut(P)(E)/E", asm.out.clone()),
        ],
    );
    report.assumptions.push(Assumption::CoefficientRoots(profile));
    report.sequence = canonical_sequence(&asm.product);
    Ok(report)
}

fn check_local(pair: &InertialPair) -> Result<()> {
    if !pair.is_p_prime {
        return Err(Error::EnotPPrime {
            order: pair.e().order() as u64,
            p: pair.p().p(),
        });
    }
    if !pair.is_abelian {
        return Err(Error::EnotAbelian);
    }
    if !pair.is_focal_whole() {
        return Err(Error::FocalNotWhole);
    }
    Ok(())
}

/// The group `Hom(E,k^×) ⋊ N_E` into which the Picard group of any block
/// with Frobenius inertial quotient embeds, with its canonical sequence.
pub fn pic_frobenius_bound(pair: &InertialPair) -> Result<PicardReport> {
    if !pair.is_frobenius {
        let why = if pair.e().order() == 1 {
            "E is trivial"
        } else if !pair.is_cyclic {
            "E is not cyclic"
        } else if !pair.is_p_prime {
            "|E| is divisible by p"
        } else {
            "E does not act freely on P minus the identity"
        };
        return Err(Error::NotFrobenius(why.into()));
    }
    let asm = assemble_local(pair)?;
    let mut report = PicardReport::new(
        Statement::FrobeniusBound,
        asm.product.group.clone(),
        vec![
            Constituent::new("Hom(E,k^x)", asm.characters.clone()),
            Constituent::new("N_E = N_Aut(P)(E)/E", asm.out.clone()),
        ],
    );
    report.upper_bound = true;
    report.sequence = canonical_sequence(&asm.product);
    Ok(report)
}

/// The subgroup of `Hom(E,k^×) ⋊ N_E` generated by the order-`d` subgroup
/// of the (cyclic) character group and the complement `N_E`.
fn frobenius_subgroup(pair: &InertialPair, d: u64) -> Result<(FiniteGroup, FiniteGroup)> {
    let asm = assemble_local(pair)?;
    let x = &asm.characters;
    if d == 0 || x.order() as u64 % d != 0 {
        return Err(Error::BadDivisor {
            d,
            order: x.order() as u64,
        });
    }
    let k = (x.order() as u64 / d) as i64;
    let outp: Vec<usize> = match x.generators().first() {
        Some(&g) => vec![asm.product.embed_normal.apply(x.pow(g, k))],
        None => vec![],
    };
    let g = &asm.product.group;
    let mut gens = outp.clone();
    gens.extend(asm.out.generators().iter().map(|&h| asm.product.embed_top.apply(h)));
    let sub = g.subgroup(&gens);
    let cyc = g.subgroup(&outp);
    Ok((g.subgroup_as_group(&sub), g.subgroup_as_group(&cyc)))
}

/// Cyclic defect group: `Out_P(A) × Aut(P)/E` with `|Out_P(A)| = d`.
pub fn pic_cyclic(pair: &InertialPair, d: Option<u64>) -> Result<PicardReport> {
    let p = pair.p();
    if !p.is_cyclic() || p.order() < 3 {
        return Err(Error::NotCyclicDefect);
    }
    if pair.e().order() == 1 {
        return Err(Error::TrivialInertialGroup);
    }
    let e = pair.e().order() as u64;
    let d = d.unwrap_or(e);
    if d == 0 || e % d != 0 {
        return Err(Error::BadDivisor { d, order: e });
    }
    let c = FiniteGroup::cyclic(d as usize);
    let quotient = pair.out_pf().clone();
    let product = direct_product(&c, &quotient);
    let mut report = PicardReport::new(
        Statement::CyclicDefect,
        product.group.clone(),
        vec![
            Constituent::new("Out_P(A)", c),
            Constituent::new("Aut(P)/E", quotient),
        ],
    );
    report.assumptions.push(Assumption::OutPOrder(d));
    report.sequence = canonical_sequence(&product);
    Ok(report)
}

/// The three Morita classes of blocks with Klein four defect group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KleinFourCase {
    /// Morita equivalent to `O A4`.
    A4,
    /// Morita equivalent to the principal block of `O A5`.
    A5Principal,
    Nilpotent,
}

/// `C2 × C2` with `E = C3` generated by `[[0,1],[1,1]]`.
pub fn klein_four_pair() -> Result<InertialPair> {
    let v4 = AbelianPGroup::new(2, &[1, 1])?;
    let a = crate::autgroup::make_automorphism(&v4, &[vec![0, 1], vec![1, 1]])?;
    build_inertial_pair(&v4, &[a])
}

pub fn pic_kleinfour(case: KleinFourCase, profile: CoefficientProfile) -> Result<PicardReport> {
    match case {
        KleinFourCase::A4 => {
            let mut r = pic_local(&klein_four_pair()?, profile)?;
            r.statement = Statement::KleinFour;
            Ok(r)
        }
        KleinFourCase::A5Principal => {
            // Out_P(A) is trivial; Pic(B) is the complement N_E ≅ C2
            let pair = klein_four_pair()?;
            let (g, outp) = frobenius_subgroup(&pair, 1)?;
            let mut r = PicardReport::new(
                Statement::KleinFour,
                g,
                vec![
                    Constituent::new("Out_P(A)", outp),
                    Constituent::new("Out(P,F) = S3/C3", pair.out_pf().clone()),
                ],
            );
            r.assumptions.push(Assumption::OutPOrder(1));
            Ok(r)
        }
        KleinFourCase::Nilpotent => pic_nilpotent(&AbelianPGroup::new(2, &[1, 1])?, profile),
    }
}

/// Nilpotent block with defect group `P`: `Hom(P, O^×) ⋊ Aut(P)`.
pub fn pic_nilpotent(p: &AbelianPGroup, profile: CoefficientProfile) -> Result<PicardReport> {
    let (ctx, sd) = nilpotent_parts(p, profile)?;
    let chars = sd.embed_normal.source.clone();
    let mut report = PicardReport::new(
        Statement::Nilpotent,
        sd.group.clone(),
        vec![
            Constituent::new("Hom(P,O^x)", chars),
            Constituent::new("Out(P) = Aut(P)", ctx.out().clone()),
        ],
    );
    report.assumptions.push(Assumption::CoefficientRoots(profile));
    report.sequence = canonical_sequence(&sd);
    Ok(report)
}

fn nilpotent_parts(p: &AbelianPGroup, profile: CoefficientProfile) -> Result<(Arc<DadeContext>, SemidirectData)> {
    if p.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let pair = build_inertial_pair(p, &[])?;
    let ctx = DadeContext::characters(&pair, profile)?;
    let size = ctx.torsion().iter().product::<u64>() as usize * ctx.out().order();
    if size > ASSEMBLY_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: size as u128,
            bound: ASSEMBLY_BOUND as u128,
        });
    }
    let sd = as_semidirect(&ctx)?;
    Ok((ctx, sd))
}

/// Outcome of an exactness check at one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDiagnostic {
    /// The node is the target of map `position`.
    pub position: usize,
    pub image_order: usize,
    pub kernel_order: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeDiagnostic>,
    /// Maps that failed the homomorphism check.
    pub not_homomorphisms: Vec<usize>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.not_homomorphisms.is_empty() && self.nodes.iter().all(|n| n.exact)
    }
}

/// Check `im(f_i) = ker(f_{i+1})` at every interior node of
/// `G_0 → G_1 → … → G_k`. A leading map out of the trivial group makes the
/// first check injectivity, a trailing map into it makes the last one
/// surjectivity.
pub fn verify_exact_sequence(seq: &[HomomorphismData]) -> Result<ExactnessReport> {
    for i in 1..seq.len() {
        if !seq[i - 1].target.same_as(&seq[i].source) && !same_group(&seq[i - 1].target, &seq[i].source) {
            return Err(Error::NotComposable(i));
        }
    }
    let not_homomorphisms = (0..seq.len()).filter(|&i| seq[i].verify().is_err()).collect();
    let nodes = (1..seq.len())
        .map(|i| {
            let image = seq[i - 1].image();
            let mut kernel = seq[i].kernel();
            kernel.sort_unstable();
            NodeDiagnostic {
                position: i - 1,
                image_order: image.len(),
                kernel_order: kernel.len(),
                exact: image == kernel,
            }
        })
        .collect();
    Ok(ExactnessReport {
        nodes,
        not_homomorphisms,
    })
}

// Trivial groups built separately are interchangeable.
fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == 1 && b.order() == 1
}

/// One row `1 → Out_P(A) → X → Y` of the diagram.
#[derive(Clone, Debug)]
pub struct DiagramRow {
    /// `Out_P(A) → X`
    pub left: HomomorphismData,
    /// `X → Y`
    pub right: HomomorphismData,
}

/// Upward arrows between two consecutive rows.
#[derive(Clone, Debug)]
pub struct RowInclusion {
    /// `X_lower → X_upper`
    pub middle: HomomorphismData,
    /// `Y_lower → Y_upper`
    pub target: HomomorphismData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramCheck {
    pub failures: Vec<String>,
}

impl DiagramCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the diagram
///
/// ```text
/// 1 → Out_P(A) → E(B) → D ⋊ Out(P,F)
///          ‖       ↑        ↑
/// 1 → Out_P(A) → L(B) → Hom(P/foc,O^×) ⋊ Out(P,F)
///          ‖       ↑        ↑
/// 1 → Out_P(A) → T(B) → Out(P,F)
/// ```
///
/// `rows` runs bottom to top and `inclusions[k]` goes from row `k` to row
/// `k + 1`. Rows must be exact at `Out_P(A)` and at the middle term, all
/// upward maps injective, and both squares commute.
pub fn verify_picard_diagram(rows: &[DiagramRow; 3], inclusions: &[RowInclusion; 2]) -> Result<DiagramCheck> {
    let mut failures = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        if !row.left.target.same_as(&row.right.source) {
            return Err(Error::ShapeMismatch(format!("row {k}: middle terms differ")));
        }
        if k > 0 && rows[0].left.source.order() != row.left.source.order() {
            return Err(Error::ShapeMismatch(format!("row {k}: left term differs")));
        }
        let seq = [from_trivial(&row.left.source), row.left.clone(), row.right.clone()];
        let ex = verify_exact_sequence(&seq)?;
        for i in ex.not_homomorphisms {
            failures.push(format!("row {k}: map {i} is not a homomorphism"));
        }
        for node in ex.nodes.iter().filter(|n| !n.exact) {
            failures.push(format!(
                "row {k}: not exact at node {} (image {}, kernel {})",
                node.position + 1,
                node.image_order,
                node.kernel_order
            ));
        }
    }
    for (k, inc) in inclusions.iter().enumerate() {
        let (lo, hi) = (&rows[k], &rows[k + 1]);
        if !inc.middle.source.same_as(&lo.right.source) || !inc.middle.target.same_as(&hi.right.source) {
            return Err(Error::ShapeMismatch(format!("inclusion {k}: middle maps between wrong groups")));
        }
        if !inc.target.source.same_as(&lo.right.target) || !inc.target.target.same_as(&hi.right.target) {
            return Err(Error::ShapeMismatch(format!("inclusion {k}: target maps between wrong groups")));
        }
        for (name, map) in [("middle", &inc.middle), ("target", &inc.target)] {
            if map.verify().is_err() {
                failures.push(format!("inclusion {k}: {name} map is not a homomorphism"));
            } else if !map.is_injective() {
                failures.push(format!("inclusion {k}: {name} map is not injective"));
            }
        }
        // left square: the Out_P(A) terms are identified
        for a in lo.left.source.elements() {
            if inc.middle.apply(lo.left.apply(a)) != hi.left.apply(a) {
                failures.push(format!("inclusion {k}: left square fails"));
                break;
            }
        }
        for x in lo.right.source.elements() {
            if inc.target.apply(lo.right.apply(x)) != hi.right.apply(inc.middle.apply(x)) {
                failures.push(format!("inclusion {k}: right square fails"));
                break;
            }
        }
    }
    Ok(DiagramCheck { failures })
}

fn identity_map(g: &FiniteGroup) -> HomomorphismData {
    HomomorphismData::new(g.clone(), g.clone(), g.elements().collect()).expect("identity")
}

/// The diagram for the local block `O(P ⋊ E)`: all three middle terms are
/// the Picard group, and the character part of the Dade model is
/// `Hom(P/foc, O^×)`, which is trivial because `foc = P`.
pub fn local_diagram(pair: &InertialPair, profile: CoefficientProfile) -> Result<([DiagramRow; 3], [RowInclusion; 2])> {
    if pair.p().is_trivial() {
        return Err(Error::TrivialGroup);
    }
    check_local(pair)?;
    let asm = assemble_local(pair)?;
    let pic = asm.product.group.clone();
    let ctx = DadeContext::characters(pair, profile)?;
    let dade = as_semidirect(&ctx)?;
    // Out(P,F) → D ⋊ Out(P,F); the out groups are the same object
    let out = asm.out.clone();
    let into_dade = HomomorphismData::new(out.clone(), dade.group.clone(), out.elements().map(|h| dade.embed_top.apply(h)).collect())?;
    let left = asm.product.embed_normal.clone();
    let bottom = DiagramRow {
        left: left.clone(),
        right: asm.product.projection.clone(),
    };
    let phi = asm.product.projection.compose(&into_dade)?;
    let middle = DiagramRow {
        left: left.clone(),
        right: phi.clone(),
    };
    let top = DiagramRow { left, right: phi };
    let inc0 = RowInclusion {
        middle: identity_map(&pic),
        target: into_dade.clone(),
    };
    let inc1 = RowInclusion {
        middle: identity_map(&pic),
        target: identity_map(&dade.group),
    };
    Ok(([bottom, middle, top], [inc0, inc1]))
}

/// The diagram for a nilpotent block with defect group `P`, taking the
/// Dade model to be the character group: `T = Out(P)`, `L = E = Hom(P,O^×) ⋊ Out(P)`,
/// and `Out_P(A)` trivial.
pub fn nilpotent_diagram(p: &AbelianPGroup, profile: CoefficientProfile) -> Result<([DiagramRow; 3], [RowInclusion; 2])> {
    let (ctx, sd) = nilpotent_parts(p, profile)?;
    let out = ctx.out().clone();
    let l = sd.group.clone();
    let trivial = FiniteGroup::trivial();
    let into = |g: &FiniteGroup| HomomorphismData::new(trivial.clone(), g.clone(), vec![0]).expect("trivial map");
    let bottom = DiagramRow {
        left: into(&out),
        right: identity_map(&out),
    };
    let middle = DiagramRow {
        left: into(&l),
        right: identity_map(&l),
    };
    let top = DiagramRow {
        left: into(&l),
        right: identity_map(&l),
    };
    let inc0 = RowInclusion {
        middle: sd.embed_top.clone(),
        target: sd.embed_top.clone(),
    };
    let inc1 = RowInclusion {
        middle: identity_map(&l),
        target: identity_map(&l),
    };
    Ok(([bottom, middle, top], [inc0, inc1]))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
