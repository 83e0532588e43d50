//! The nine acceptance criteria, one line of output each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use blockpic_cli::{parse_job, print_job, CATALOG};
use blockpic_core::autgroup::{enumerate_aut, enumerate_aut_oracle, make_automorphism};
use blockpic_core::brauertree::{
    build_tree, caterpillar, morita_parity_check, path, period, star, tree_automorphisms, HookKind, HookState,
    TreeSpec,
};
use blockpic_core::dade::{commutator, compose, inverse, DadeContext, DadePair};
use blockpic_core::fusion::{build_inertial_pair, frobenius_complement_survey, InertialPair};
use blockpic_core::picard::{
    pic_cyclic, pic_kleinfour, pic_local, pic_nilpotent, verify_exact_sequence, CoefficientProfile, KleinFourCase,
};
use blockpic_core::AbelianPGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn groups_up_to(primes: &[u64], n: u64) -> Vec<AbelianPGroup> {
    primes
        .iter()
        .flat_map(|&p| AbelianPGroup::all_of_order_at_most(p, n).unwrap())
        .filter(|g| !g.is_trivial())
        .collect()
}

/// Every surveyed pair for `|P| ≤ 32`, computed once.
fn survey() -> &'static Vec<(AbelianPGroup, Vec<InertialPair>)> {
    static SURVEY: OnceLock<Vec<(AbelianPGroup, Vec<InertialPair>)>> = OnceLock::new();
    SURVEY.get_or_init(|| {
        groups_up_to(&PRIMES, 32)
            .into_iter()
            .map(|g| {
                let s = frobenius_complement_survey(&g).unwrap();
                (g, s)
            })
            .collect()
    })
}

fn pair(p: u64, e: &[u32], gens: &[Vec<Vec<i64>>]) -> InertialPair {
    let g = AbelianPGroup::new(p, e).unwrap();
    let autos: Vec<_> = gens.iter().map(|r| make_automorphism(&g, r).unwrap()).collect();
    build_inertial_pair(&g, &autos).unwrap()
}

fn klein_four_reproduction() -> Outcome {
    let r = pic_local(&pair(2, &[1, 1], &[vec![vec![0, 1], vec![1, 1]]]), CoefficientProfile::large())
        .map_err(|e| e.to_string())?;
    ensure!(r.order() == 6, "order {}", r.order());
    ensure!(!r.group.is_abelian(), "abelian");
    ensure!(r.identification.type_name() == "S3", "identified {}", r.identification);
    ensure!(r.certificate_verified, "certificate not verified");
    let a5 = pic_kleinfour(KleinFourCase::A5Principal, CoefficientProfile::large()).map_err(|e| e.to_string())?;
    ensure!(a5.identification.type_name() == "C2", "A5 principal gave {}", a5.identification);
    Ok("A4 local block gives S3 (certificate verified), A5 principal block gives C2".into())
}

fn local_order_identity() -> Outcome {
    let mut count = 0;
    for (g, pairs) in survey() {
        for s in pairs.iter().filter(|s| s.is_frobenius) {
            let r = pic_local(s, CoefficientProfile::large()).map_err(|e| format!("{g}: {e}"))?;
            ensure!(
                r.order() == s.normalizer().order(),
                "{g}: |Pic| = {} but |N| = {}",
                r.order(),
                s.normalizer().order()
            );
            let ex = verify_exact_sequence(&r.sequence).map_err(|e| e.to_string())?;
            ensure!(ex.is_exact(), "{g}: sequence not exact: {:?}", ex.nodes);
            count += 1;
        }
    }
    ensure!(count > 0, "no Frobenius pairs found");
    Ok(format!("{count} Frobenius pairs, |Pic| = |N_Aut(P)(E)| and the split sequence is exact"))
}

fn cyclic_consistency() -> Outcome {
    let mut count = 0;
    for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (3, 3)] {
        let n = p.pow(k);
        let aut_order = (p - 1) * p.pow(k - 1);
        for d in (2..p).filter(|d| (p - 1) % d == 0) {
            // a unit of order d
            let u = (2..n)
                .find(|&u| {
                    u % p != 0 && (1..=d).find(|&j| (0..j).fold(1, |x, _| x * u % n) == 1) == Some(d)
                })
                .unwrap();
            let s = pair(p, &[k], &[vec![vec![u as i64]]]);
            let cyc = pic_cyclic(&s, None).map_err(|e| e.to_string())?;
            let loc = pic_local(&s, CoefficientProfile::large()).map_err(|e| e.to_string())?;
            ensure!(
                cyc.identification.same_type(&loc.identification),
                "C{n}, |E| = {d}: {} vs {}",
                cyc.identification,
                loc.identification
            );
            ensure!(cyc.group.is_abelian(), "C{n}, |E| = {d}: not abelian");
            ensure!(cyc.order() as u64 == aut_order, "C{n}, |E| = {d}: order {}", cyc.order());
            count += 1;
        }
    }
    Ok(format!("{count} cyclic pairs, pic_cyclic and pic_local agree, abelian of order |Aut(P)|"))
}

fn hillar_rhea(p: u64, e: &[u32]) -> u128 {
    let mut e = e.to_vec();
    e.sort_unstable();
    let r = e.len();
    let p = p as u128;
    (0..r)
        .map(|k| {
            let d = (0..r).rev().find(|&l| e[l] == e[k]).unwrap() + 1;
            let c = (0..r).find(|&l| e[l] == e[k]).unwrap() + 1;
            (p.pow(d as u32) - p.pow(k as u32))
                * p.pow(e[k]).pow((r - d) as u32)
                * p.pow(e[k] - 1).pow((r - c + 1) as u32)
        })
        .product()
}

fn aut_oracle() -> Outcome {
    let primes: Vec<u64> = (2..=128).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
    let groups = groups_up_to(&primes, 128);
    for g in &groups {
        let aut = enumerate_aut(g, u128::MAX).map_err(|e| format!("{g}: {e}"))?;
        ensure!(
            aut.order() as u128 == hillar_rhea(g.p(), g.exponents()),
            "{g}: enumerated {} vs formula {}",
            aut.order(),
            hillar_rhea(g.p(), g.exponents())
        );
    }
    let small: Vec<_> = groups.iter().filter(|g| g.order() <= 16).collect();
    for g in &small {
        let aut = enumerate_aut(g, u128::MAX).unwrap();
        let mut ours: Vec<_> = aut.elements().map(|k| aut.automorphism(k).unwrap()).collect();
        ours.sort();
        ensure!(ours == enumerate_aut_oracle(g), "{g}: element sets differ");
    }
    Ok(format!(
        "{} groups of order <= 128 match the order formula, {} of order <= 16 match brute force",
        groups.len(),
        small.len()
    ))
}

fn fusion_facts() -> Outcome {
    let mut pairs = 0;
    for (g, classes) in survey() {
        for s in classes {
            pairs += 1;
            if s.acts_freely && s.e().order() > 1 {
                ensure!(s.foc().is_whole(), "{g}: free nontrivial E with foc != P");
            }
            if s.acts_freely && s.is_p_prime && s.is_abelian {
                ensure!(s.is_cyclic, "{g}: abelian free p'-subgroup that is not cyclic");
            }
        }
        let trivial = build_inertial_pair(g, &[]).map_err(|e| e.to_string())?;
        let aut = enumerate_aut(g, u128::MAX).unwrap();
        ensure!(trivial.out_pf().order() == aut.order(), "{g}: |Out(P,F)| != |Aut(P)|");
        for &x in trivial.out_pf().generators() {
            let a = trivial.out_pf().automorphism(x).ok_or("not automorphisms")?;
            ensure!(aut.index_of_automorphism(&a).is_some(), "{g}: stray element");
        }
    }
    Ok(format!("{pairs} surveyed pairs over {} groups", survey().len()))
}

fn character_context(p: u64, e: &[u32], m: CoefficientProfile) -> Arc<DadeContext> {
    let g = AbelianPGroup::new(p, e).unwrap();
    DadeContext::characters(&build_inertial_pair(&g, &[]).unwrap(), m).unwrap()
}

fn dade_calculus() -> Outcome {
    let contexts = [
        DadeContext::trivial(),
        DadeContext::z3_inversion(),
        DadeContext::free_negation(),
        DadeContext::mixed_model(),
        character_context(2, &[2], CoefficientProfile::new(2)),
        character_context(2, &[1, 1], CoefficientProfile::large()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut draw = |ctx: &Arc<DadeContext>| {
        let v: Vec<i64> = (0..ctx.dimension()).map(|_| rng.gen_range(-30..=30)).collect();
        let phi = rng.gen_range(0..ctx.out().order());
        DadePair::new(ctx, &v, phi).unwrap()
    };
    for ctx in &contexts {
        let id = DadePair::identity(ctx);
        for _ in 0..10_000 {
            let (a, b, c) = (draw(ctx), draw(ctx), draw(ctx));
            let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            ensure!(l == r, "{}: associativity", ctx.name());
            ensure!(compose(&a, &id).unwrap() == a && compose(&id, &a).unwrap() == a, "{}: identity", ctx.name());
            ensure!(compose(&a, &inverse(&a)).unwrap().is_identity(), "{}: inverse", ctx.name());
            // (v, φ)^{-1} = (−φ^{-1}·v, φ^{-1})
            let fi = ctx.out().inv(a.phi());
            let w: Vec<i64> = ctx.act(fi, a.v()).iter().map(|x| -x).collect();
            ensure!(inverse(&a) == DadePair::new(ctx, &w, fi).unwrap(), "{}: inverse formula", ctx.name());
            if ctx.is_finite() {
                let x = DadePair::new(ctx, a.v(), 0).unwrap();
                let y = DadePair::new(ctx, &ctx.zero(), b.phi()).unwrap();
                let fv = ctx.act(b.phi(), a.v());
                let diff: Vec<i64> = a.v().iter().zip(&fv).map(|(s, t)| s - t).collect();
                ensure!(
                    commutator(&x, &y).unwrap() == DadePair::new(ctx, &diff, 0).unwrap(),
                    "{}: commutator pattern",
                    ctx.name()
                );
            }
        }
    }
    Ok(format!("{} contexts x 10^4 random triples", contexts.len()))
}

fn tree_shapes() -> Vec<TreeSpec> {
    let mut out = Vec::new();
    for k in 1..=8 {
        out.push(star(k));
        out.push(path(k));
    }
    for legs in [
        vec![1, 1],
        vec![2, 1],
        vec![1, 0, 1],
        vec![2, 2],
        vec![1, 2, 1],
        vec![3, 0, 3],
        vec![1, 1, 1, 1],
        vec![2, 0, 0, 2],
        vec![0, 3, 0],
        vec![2, 1, 2],
    ] {
        out.push(caterpillar(&legs));
    }
    out.retain(|s| s.vertices.len() <= 9);
    out
}

fn brauer_periods() -> Outcome {
    let shapes = tree_shapes();
    let mut checks = 0;
    for spec in &shapes {
        let tree = build_tree(spec).map_err(|e| e.to_string())?;
        let l = tree.edge_count() as u64;
        for i in 0..tree.edge_count() {
            for kind in [HookKind::U, HookKind::V] {
                let p = period(HookState { kind, edge: i }, &tree);
                ensure!(p == 2 * l, "{spec:?}: period {p} for l = {l}");
            }
        }
        for a in tree_automorphisms(&tree).map_err(|e| e.to_string())? {
            if a.stabilized.is_empty() {
                continue;
            }
            for n in 0..4 * l as i64 {
                let out = morita_parity_check(&tree, &a.perm, n).map_err(|e| e.to_string())?;
                ensure!(!out.admissible || n % 2 == 0, "{spec:?}: odd admissible n = {n}");
                ensure!(out.forces_even(), "{spec:?}: class {} mod {}", out.residue, out.modulus);
                checks += 1;
            }
        }
    }
    Ok(format!("{} trees, all periods 2l, {checks} parity checks even", shapes.len()))
}

fn nilpotent_formula() -> Outcome {
    let v4 = AbelianPGroup::new(2, &[1, 1]).unwrap();
    for m in [CoefficientProfile::new(1), CoefficientProfile::new(2), CoefficientProfile::large()] {
        let r = pic_nilpotent(&v4, m).map_err(|e| e.to_string())?;
        ensure!(r.order() == 24, "{m}: order {}", r.order());
        let parts: Vec<String> = r.constituents.iter().map(|c| c.identification.type_name()).collect();
        ensure!(parts == ["C2 x C2", "S3"], "{m}: constituents {parts:?}");
        ensure!(r.certificate_verified, "{m}: certificate");
        ensure!(verify_exact_sequence(&r.sequence).unwrap().is_exact(), "{m}: sequence");
    }
    let c2 = pic_nilpotent(&AbelianPGroup::new(2, &[1]).unwrap(), CoefficientProfile::new(1)).map_err(|e| e.to_string())?;
    ensure!(c2.identification.type_name() == "C2", "C2 gave {}", c2.identification);
    Ok("Klein four gives (C2 x C2) : S3 of order 24 for m = 1, 2, large; C2 gives C2".into())
}

fn blockpic(args: &[&str], stdin: &str) -> (Option<i32>, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_blockpic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code(), out.stdout)
}

fn cli_contract() -> Outcome {
    let (c1, a) = blockpic(&["--check"], "");
    let (c2, b) = blockpic(&["--check"], "");
    ensure!(c1 == Some(0) && c2 == Some(0), "catalog replay exit codes {c1:?} {c2:?}");
    ensure!(a == b, "catalog replay differs between runs");
    for e in CATALOG {
        let job = e.job();
        ensure!(parse_job(&print_job(&job)).as_ref() == Ok(&job), "{}: round trip", e.name);
    }
    let cases = [
        ("[pic-kleinfour]\ncase = A4\n", 0),
        ("[pic-local]\nP = [1,1]\nE = []\n", 1),
        ("[aut]\np = 6\nP = [1]\n", 1),
        ("[pic-frobenius]\np = 2\nP = [1,1]\nE = [[[0,1],[1,0]]]\n", 2),
        ("[pic-local]\np = 2\nP = [1,1]\nE = []\n", 2),
    ];
    for (input, code) in cases {
        let (got, _) = blockpic(&[], input);
        ensure!(got == Some(code), "{input:?}: exit {got:?}, expected {code}");
    }
    Ok(format!("{} catalog entries replay identically and round trip; exit codes 0/1/2 as contracted", CATALOG.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("Klein four Picard groups", klein_four_reproduction, Some(1)),
        ("local block order identity", local_order_identity, Some(60)),
        ("cyclic defect consistency", cyclic_consistency, None),
        ("Aut enumeration oracle", aut_oracle, Some(120)),
        ("fusion facts", fusion_facts, None),
        ("Dade calculus", dade_calculus, None),
        ("Brauer tree periods", brauer_periods, None),
        ("nilpotent formula", nilpotent_formula, None),
        ("CLI contract", cli_contract, None),
    ];
    let mut failed = Vec::new();
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(*s) => {
                Err(format!("took {:.2} s, limit {s} s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, text) = match &outcome {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        println!("[{tag}] {} {name} ({:.2} s): {text}", k + 1, elapsed.as_secs_f64());
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
