#![no_main]

use blockpic_cli::job::{fmt_vertices, parse_vertices};
use blockpic_core::brauertree::{build_tree, period, tree_automorphisms, HookKind, HookState, TreeSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Some(vertices) = parse_vertices(text) else { return };
    assert_eq!(parse_vertices(&fmt_vertices(&vertices)).as_ref(), Some(&vertices));
    // any accepted tree must satisfy the period law
    if let Ok(tree) = build_tree(&TreeSpec { vertices }) {
        let l = tree.edge_count() as u64;
        for i in 0..tree.edge_count() {
            assert_eq!(period(HookState { kind: HookKind::U, edge: i }, &tree), 2 * l);
        }
        let _ = tree_automorphisms(&tree);
    }
});
