//! Replays the fuzz corpus seeds through the fuzz target bodies, so the
//! seeds stay meaningful without a nightly toolchain.

use std::fs;
use std::path::PathBuf;

use blockpic_cli::job::{fmt_matrix, fmt_vertices, parse_matrix, parse_matrix_list, parse_vertices};
use blockpic_cli::{parse_input, print_job};
use blockpic_core::brauertree::{build_tree, period, HookKind, HookState, TreeSpec};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(PathBuf, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let s = fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_job_seeds() {
    let parsed = seeds("parse_job").iter().filter(|(_, s)| parse_input(s).is_ok()).count();
    assert!(parsed >= 4);
}

#[test]
fn parse_matrix_seeds() {
    for (path, s) in seeds("parse_matrix") {
        let _ = parse_matrix_list(&s);
        if let Some(m) = parse_matrix(&s) {
            assert_eq!(parse_matrix(&fmt_matrix(&m)), Some(m), "{}", path.display());
        }
    }
}

#[test]
fn parse_tree_seeds() {
    let mut built = 0;
    for (path, s) in seeds("parse_tree") {
        let vertices = parse_vertices(s.trim()).unwrap_or_else(|| panic!("{}", path.display()));
        assert_eq!(parse_vertices(&fmt_vertices(&vertices)).as_ref(), Some(&vertices));
        if let Ok(tree) = build_tree(&TreeSpec { vertices }) {
            for i in 0..tree.edge_count() {
                assert_eq!(period(HookState { kind: HookKind::U, edge: i }, &tree), 2 * tree.edge_count() as u64);
            }
            built += 1;
        }
    }
    assert!(built >= 4);
}

#[test]
fn job_roundtrip_seeds() {
    for (path, s) in seeds("job_roundtrip") {
        let jobs = parse_input(&s).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed: String = jobs.iter().map(print_job).collect();
        assert_eq!(parse_input(&printed).unwrap(), jobs);
    }
}
