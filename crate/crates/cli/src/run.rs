//! Dispatch from a parsed job to the library.

use std::sync::Arc;

use blockpic_core::autgroup::{aut_generators, aut_order_formula, enumerate_aut, enumerate_aut_oracle, DEFAULT_ELEMENT_BOUND};
use blockpic_core::brauertree::{
    build_tree, cycles, morita_parity_check, period, tree_automorphisms, HookKind, HookState, Side, TreeSpec,
};
use blockpic_core::dade::{self, DadeContext, DadePair};
use blockpic_core::fusion::{build_inertial_pair, focal_subgroup_from_elements, frobenius_complement_survey, InertialPair};
use blockpic_core::identify::{identify, verify_identification, Descriptor};
use blockpic_core::picard::{
    self, local_diagram, nilpotent_diagram, verify_exact_sequence, verify_picard_diagram, Assumption,
    CoefficientProfile, PicardReport, ASSEMBLY_BOUND,
};
use blockpic_core::pgroup::DEFAULT_ORDER_BOUND;
use blockpic_core::{make_automorphism, AbelianPGroup, Automorphism, Error};
use thiserror::Error as ThisError;

use crate::job::{print_job, JobSpec, Matrix, ParseError};
use crate::report::{summary, Report};

/// Largest `|Aut(P)|` for which `--oracle` runs the brute-force
/// automorphism enumeration.
pub const ORACLE_AUT_BOUND: u128 = 1 << 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Run brute-force cross-checks where available.
    pub oracle: bool,
    /// Override the enumeration bounds on `|P|` and `|Aut(P)|`.
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{command}: {source}")]
    Library { command: &'static str, source: Error },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for violated hypotheses, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library { source, .. } if source.is_hypothesis_violation() => 2,
            _ => 1,
        }
    }
}

pub fn run(job: &JobSpec, opts: RunOptions) -> Result<Report, CliError> {
    let command = job.command();
    let lib = |source: Error| CliError::Library { command, source };
    let mut report = Report::new(command, print_job(job));
    match job {
        JobSpec::Aut { p, exponents } => run_aut(&mut report, &group(*p, exponents, opts).map_err(lib)?, opts),
        JobSpec::Fusion { p, exponents, e, survey } => {
            let pg = group(*p, exponents, opts).map_err(lib)?;
            run_fusion(&mut report, &pg, e, *survey, opts)
        }
        JobSpec::PicLocal { p, exponents, e, m } => {
            let pair = pair(*p, exponents, e, opts).map_err(lib)?;
            let r = picard::pic_local(&pair, profile(*m)).map_err(lib)?;
            fill_picard(&mut report, &r)
        }
        JobSpec::PicFrobenius { p, exponents, e } => {
            let pair = pair(*p, exponents, e, opts).map_err(lib)?;
            let r = picard::pic_frobenius_bound(&pair).map_err(lib)?;
            fill_picard(&mut report, &r)
        }
        JobSpec::PicCyclic { p, exponents, e, d } => {
            let pair = pair(*p, exponents, e, opts).map_err(lib)?;
            let r = picard::pic_cyclic(&pair, *d).map_err(lib)?;
            fill_picard(&mut report, &r)
        }
        JobSpec::PicKleinfour { case, m } => {
            let r = picard::pic_kleinfour(*case, profile(*m)).map_err(lib)?;
            fill_picard(&mut report, &r)
        }
        JobSpec::PicNilpotent { p, exponents, m } => {
            let pg = group(*p, exponents, opts).map_err(lib)?;
            let r = picard::pic_nilpotent(&pg, profile(*m)).map_err(lib)?;
            fill_picard(&mut report, &r)
        }
        JobSpec::Dade { free, torsion, action, v } => run_dade(&mut report, *free, torsion, action, v.as_deref()),
        JobSpec::Tree { vertices, pi, n } => run_tree(
            &mut report,
            &TreeSpec {
                vertices: vertices.clone(),
            },
            pi.as_deref(),
            *n,
        ),
        JobSpec::Verify { p, exponents, e, m } => {
            let pg = group(*p, exponents, opts).map_err(lib)?;
            run_verify(&mut report, &pg, e, profile(*m))
        }
    }
    .map_err(lib)?;
    complete_assumptions(&mut report);
    Ok(report)
}

/// Every report lists the standing hypotheses, marking those the result
/// does not rely on.
fn complete_assumptions(report: &mut Report) {
    let standing = [
        Assumption::CharacteristicZero,
        Assumption::ResidueFieldLargeEnough,
        Assumption::VertexStabilization,
    ];
    for a in standing {
        let text = a.to_string();
        if !report.assumptions.contains(&text) {
            report.assumptions.push(format!("{text}: not used"));
        }
    }
}

fn profile(m: Option<u32>) -> CoefficientProfile {
    m.map_or_else(CoefficientProfile::large, CoefficientProfile::new)
}

fn group(p: u64, exponents: &[u32], opts: RunOptions) -> Result<AbelianPGroup, Error> {
    AbelianPGroup::with_bound(p, exponents, opts.bound.unwrap_or(DEFAULT_ORDER_BOUND))
}

fn automorphisms(pg: &AbelianPGroup, e: &[Matrix]) -> Result<Vec<Automorphism>, Error> {
    e.iter().map(|m| make_automorphism(pg, m)).collect()
}

fn pair(p: u64, exponents: &[u32], e: &[Matrix], opts: RunOptions) -> Result<InertialPair, Error> {
    let pg = group(p, exponents, opts)?;
    build_inertial_pair(&pg, &automorphisms(&pg, e)?)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run_aut(report: &mut Report, pg: &AbelianPGroup, opts: RunOptions) -> Result<(), Error> {
    let bound = opts.bound.map_or(DEFAULT_ELEMENT_BOUND, u128::from);
    let aut = enumerate_aut(pg, bound)?;
    let id = identify(&aut);
    report.set_group(&aut, &id, verify_identification(&aut, &id));
    report.detail("P", pg);
    report.detail("order formula", aut_order_formula(pg));
    let gens: Vec<String> = aut_generators(&Arc::new(pg.clone())).iter().map(|a| a.to_string()).collect();
    report.detail("generators", gens.join(" "));
    report.check("enumeration matches order formula", aut.order() as u128 == aut_order_formula(pg));
    if opts.oracle {
        if aut_order_formula(pg) <= ORACLE_AUT_BOUND {
            let brute = enumerate_aut_oracle(pg);
            let mut ours: Vec<Automorphism> = aut.elements().map(|k| aut.automorphism(k).expect("aut law")).collect();
            ours.sort();
            report.check("brute-force element set", ours == brute);
        } else {
            report.detail("oracle", "skipped, Aut(P) too large for brute force");
        }
    }
    Ok(())
}

fn describe_pair(report: &mut Report, pair: &InertialPair) {
    let e_id = identify(pair.e());
    let out_id = identify(pair.out_pf());
    report.detail("P", pair.p());
    report.detail("E", e_id.type_name());
    report.detail("p'-order", yes(pair.is_p_prime));
    report.detail("cyclic", yes(pair.is_cyclic));
    report.detail("free action", yes(pair.acts_freely));
    report.detail("Frobenius", yes(pair.is_frobenius));
    let foc = if pair.foc().is_whole() {
        "P".to_string()
    } else if pair.foc().is_trivial() {
        "1".to_string()
    } else {
        format!("subgroup of order {}", pair.foc().order())
    };
    report.detail("foc", &foc);
    report.detail("|N_Aut(P)(E)|", pair.normalizer().order());
    report.detail("Out(P,F)", out_id.type_name());
    report.detail(
        "summary",
        format!(
            "free action: {}; foc = {foc}; Out(P,F) ≅ {}",
            yes(pair.acts_freely),
            out_id.type_name()
        ),
    );
}

fn run_fusion(report: &mut Report, pg: &AbelianPGroup, e: &[Matrix], survey: bool, opts: RunOptions) -> Result<(), Error> {
    let pair = build_inertial_pair(pg, &automorphisms(pg, e)?)?;
    let out_id = identify(pair.out_pf());
    report.set_group(pair.out_pf(), &out_id, verify_identification(pair.out_pf(), &out_id));
    describe_pair(report, &pair);
    if opts.oracle {
        let all = focal_subgroup_from_elements(pg, pair.e())?;
        report.check("foc from generators equals foc from all of E", all == *pair.foc());
    }
    if survey {
        let pairs = frobenius_complement_survey(pg)?;
        report.detail("survey classes", pairs.len());
        for (k, s) in pairs.iter().enumerate() {
            report.detail(
                &format!("survey {k}"),
                format!(
                    "E = {}, Frobenius: {}, foc = P: {}, Out(P,F) = {}",
                    identify(s.e()).type_name(),
                    yes(s.is_frobenius),
                    yes(s.foc().is_whole()),
                    identify(s.out_pf()).type_name()
                ),
            );
        }
        let free_nontrivial_whole = pairs
            .iter()
            .filter(|s| s.e().order() > 1)
            .all(|s| s.foc().is_whole());
        let abelian_cyclic = pairs.iter().filter(|s| s.is_abelian).all(|s| s.is_cyclic);
        report.check("free and nontrivial implies foc = P", free_nontrivial_whole);
        report.check("abelian free complements are cyclic", abelian_cyclic);
    }
    Ok(())
}

fn fill_picard(report: &mut Report, r: &PicardReport) -> Result<(), Error> {
    report.theorem = Some(r.statement.description().to_string());
    report.set_group(&r.group, &r.identification, r.certificate_verified);
    report.assumptions = r.assumptions.iter().map(Assumption::to_string).collect();
    let mut s = summary(&r.identification);
    if r.upper_bound {
        s.push_str(" (upper bound)");
    }
    report.detail("summary", s);
    report.detail("statement", r.statement.key());
    report.detail("upper bound only", yes(r.upper_bound));
    for c in &r.constituents {
        report.detail(&format!("constituent {}", c.role), c.identification.type_name());
    }
    if matches!(r.identification.descriptor, Descriptor::Named { .. }) {
        report.check("isomorphism certificate", r.certificate_verified);
    }
    if !r.sequence.is_empty() {
        let ex = verify_exact_sequence(&r.sequence)?;
        report.check("split sequence exact", ex.is_exact());
    }
    Ok(())
}

fn run_dade(report: &mut Report, free: usize, torsion: &[u64], action: &[Matrix], v: Option<&[i64]>) -> Result<(), Error> {
    let ctx = Arc::new(DadeContext::from_matrices("input", free, torsion, action)?);
    report.detail("model", "user-supplied presentation (a model, not a computed Dade group)");
    report.detail("free rank", free);
    let t: Vec<String> = torsion.iter().map(u64::to_string).collect();
    report.detail("torsion", format!("[{}]", t.join(",")));
    let out_id = identify(ctx.out());
    report.detail("Out", out_id.type_name());
    let torsion_order = torsion.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d as usize));
    match torsion_order.and_then(|n| n.checked_mul(ctx.out().order())) {
        Some(n) if ctx.is_finite() && n <= ASSEMBLY_BOUND => {
            let sd = dade::as_semidirect(&ctx)?;
            let id = identify(&sd.group);
            report.set_group(&sd.group, &id, verify_identification(&sd.group, &id));
            report.detail("D : Out", id.type_name());
        }
        Some(_) if ctx.is_finite() => report.detail("D : Out", "too large to tabulate"),
        _ => {
            let tors = dade::torsion_subgroup(&ctx)?;
            let tt: Vec<String> = tors.torsion().iter().map(u64::to_string).collect();
            report.detail("D : Out", "infinite");
            report.detail("torsion subgroup", format!("[{}]", tt.join(",")));
        }
    }
    if let Some(v) = v {
        let x = DadePair::new(&ctx, v, 0)?;
        report.detail("pair", format!("({:?}, 1)", x.v()));
        let inv = dade::inverse(&x);
        report.detail("inverse", format!("({:?}, 1)", inv.v()));
        report.detail(
            "order",
            dade::pair_order(&x).map_or_else(|| "infinite".to_string(), |k| k.to_string()),
        );
        for &g in ctx.out().generators() {
            let phi = DadePair::new(&ctx, &ctx.zero(), g)?;
            let c = dade::commutator(&x, &phi)?;
            report.detail(&format!("[(v,1),(0,{})]", ctx.out().label(g)), format!("({:?}, 1)", c.v()));
            report.check(
                &format!("commutator identity for {}", ctx.out().label(g)),
                dade::commutator_identity_check(&ctx, v, g)?,
            );
        }
        report.check("v times inverse is identity", dade::compose(&x, &inv)?.is_identity());
    }
    Ok(())
}

fn run_tree(report: &mut Report, spec: &TreeSpec, pi: Option<&[u32]>, n: Option<i64>) -> Result<(), Error> {
    let tree = build_tree(spec)?;
    let l = tree.edge_count();
    let labels = tree.labels();
    report.detail("edges", l);
    for line in tree.to_string().lines() {
        report.detail("tree", line.trim());
    }
    report.detail("sigma rho", cycles(&tree.sigma_rho(), labels));
    let periods_ok = (0..l)
        .flat_map(|i| [HookKind::U, HookKind::V].map(|kind| HookState { kind, edge: i }))
        .all(|s| period(s, &tree) == 2 * l as u64);
    report.detail("hook period", 2 * l);
    report.check("every hook has period 2|I|", periods_ok);
    let auts = tree_automorphisms(&tree)?;
    report.detail("automorphisms", auts.len());
    for a in &auts {
        let fixed: Vec<String> = a
            .stabilized
            .iter()
            .map(|v| {
                let mark = if v.side == Side::Rho { "r" } else { "s" };
                format!("{mark}{}", v.index)
            })
            .collect();
        report.detail(
            "automorphism",
            format!("{} fixes vertices [{}]", cycles(&a.perm, labels), fixed.join(",")),
        );
    }
    if pi.is_some() || n.is_some() {
        let perm: Vec<usize> = match pi {
            Some(pi) => {
                if pi.len() != l {
                    return Err(Error::NotTreeAutomorphism);
                }
                pi.iter()
                    .map(|&x| tree.index_of_label(x).ok_or(Error::NotTreeAutomorphism))
                    .collect::<Result<_, _>>()?
            }
            None => (0..l).collect(),
        };
        let n = n.unwrap_or(2 * l as i64);
        report.assumptions.push(Assumption::VertexStabilization.to_string());
        let out = morita_parity_check(&tree, &perm, n)?;
        report.detail(
            "parity",
            format!(
                "Omega^{}({}) = {}; admissible n = {} mod {}",
                out.residue,
                tree.state_label(out.from),
                tree.state_label(out.to),
                out.residue,
                out.modulus
            ),
        );
        report.detail("n", n);
        report.detail("n admissible", yes(out.admissible));
        report.check("admissible n are even", out.forces_even());
    }
    Ok(())
}

fn run_verify(report: &mut Report, pg: &AbelianPGroup, e: &[Matrix], profile: CoefficientProfile) -> Result<(), Error> {
    let (rows, inclusions) = if e.is_empty() {
        report.detail("diagram", "nilpotent block");
        nilpotent_diagram(pg, profile)?
    } else {
        let pair = build_inertial_pair(pg, &automorphisms(pg, e)?)?;
        report.detail("diagram", "local block");
        local_diagram(&pair, profile)?
    };
    let top = &rows[2].right.source;
    let id = identify(top);
    report.set_group(top, &id, verify_identification(top, &id));
    report.assumptions = vec![
        Assumption::CharacteristicZero.to_string(),
        Assumption::ResidueFieldLargeEnough.to_string(),
        Assumption::CoefficientRoots(profile).to_string(),
    ];
    let check = verify_picard_diagram(&rows, &inclusions)?;
    for f in &check.failures {
        report.detail("failure", f);
    }
    report.check("rows exact and squares commute", check.holds());
    Ok(())
}
