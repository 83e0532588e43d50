//! Brauer trees as plane trees with two-coloured vertices.
//!
//! Each vertex lists its incident edges in cyclic order. Vertices of one
//! colour are the orbits of `ρ`, the others the orbits of `σ`, where `ρ(i)`
//! (resp. `σ(i)`) is the edge after `i` around its `ρ`-vertex (resp.
//! `σ`-vertex). The Heller operator on hooks is `Ω(U_i) = V_{ρ(i)}`,
//! `Ω(V_i) = U_{σ(i)}`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest tree for which automorphisms are listed.
pub const TREE_EDGE_BOUND: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// The vertex is an orbit of `ρ`.
    Rho,
    /// The vertex is an orbit of `σ`.
    Sigma,
}

/// One vertex of a tree specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpec {
    /// Edge labels in cyclic order.
    pub edges: Vec<u32>,
    pub side: Option<Side>,
}

impl VertexSpec {
    pub fn new(edges: &[u32]) -> Self {
        VertexSpec {
            edges: edges.to_vec(),
            side: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSpec {
    pub vertices: Vec<VertexSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HookKind {
    U,
    V,
}

/// The hook `U_i` or `V_i`; `edge` is an index into [`BrauerTree::labels`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HookState {
    pub kind: HookKind,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerTree {
    labels: Vec<u32>,
    vertices: Vec<VertexSpec>,
    sides: Vec<Side>,
    rho: Vec<usize>,
    sigma: Vec<usize>,
    // ends[i] = (ρ-vertex, σ-vertex)
    ends: Vec<(usize, usize)>,
}

/// Build a tree from its vertices, checking that the data is a tree, that
/// the colouring is a proper two-colouring, and that `σρ` is one cycle.
///
/// Unmarked colourings default to putting the first vertex on the `ρ` side.
pub fn build_tree(spec: &TreeSpec) -> Result<BrauerTree> {
    let vs = &spec.vertices;
    if vs.is_empty() {
        return Err(Error::NotATree("no vertices".into()));
    }
    let mut labels: Vec<u32> = vs.iter().flat_map(|v| v.edges.iter().copied()).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let n = labels.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, v) in vs.iter().enumerate() {
        if v.edges.is_empty() {
            return Err(Error::NotATree(format!("vertex {} has no edges", k + 1)));
        }
        let mut seen = v.edges.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadCyclicOrder(format!("vertex {} repeats an edge", k + 1)));
        }
        for l in &v.edges {
            incident[index[l]].push(k);
        }
    }
    for (i, inc) in incident.iter().enumerate() {
        if inc.len() != 2 {
            return Err(Error::NotATree(format!("edge {} has {} ends", labels[i], inc.len())));
        }
    }
    if vs.len() != n + 1 {
        return Err(Error::NotATree(format!("{} vertices for {} edges", vs.len(), n)));
    }
    // two-colour by BFS; connectivity comes for free
    let start_side = vs
        .iter()
        .position(|v| v.side.is_some())
        .map(|k| (k, vs[k].side.unwrap()))
        .unwrap_or((0, Side::Rho));
    let mut sides: Vec<Option<Side>> = vec![None; vs.len()];
    sides[start_side.0] = Some(start_side.1);
    let mut queue = VecDeque::from([start_side.0]);
    while let Some(k) = queue.pop_front() {
        let here = sides[k].unwrap();
        for l in &vs[k].edges {
            let i = index[l];
            let other = if incident[i][0] == k { incident[i][1] } else { incident[i][0] };
            let there = flip(here);
            match sides[other] {
                None => {
                    sides[other] = Some(there);
                    queue.push_back(other);
                }
                Some(s) if s != there => {
                    return Err(Error::NotATree(format!("cycle through edge {l}")));
                }
                _ => {}
            }
        }
    }
    if sides.iter().any(Option::is_none) {
        return Err(Error::NotATree("disconnected".into()));
    }
    let sides: Vec<Side> = sides.into_iter().map(Option::unwrap).collect();
    for (k, v) in vs.iter().enumerate() {
        if let Some(s) = v.side {
            if s != sides[k] {
                return Err(Error::BadCyclicOrder(format!(
                    "side mark of vertex {} contradicts the two-colouring",
                    k + 1
                )));
            }
        }
    }
    let mut rho = vec![usize::MAX; n];
    let mut sigma = vec![usize::MAX; n];
    let mut ends = vec![(usize::MAX, usize::MAX); n];
    for (k, v) in vs.iter().enumerate() {
        let d = v.edges.len();
        for w in 0..d {
            let i = index[&v.edges[w]];
            let next = index[&v.edges[(w + 1) % d]];
            match sides[k] {
                Side::Rho => {
                    rho[i] = next;
                    ends[i].0 = k;
                }
                Side::Sigma => {
                    sigma[i] = next;
                    ends[i].1 = k;
                }
            }
        }
    }
    let tree = BrauerTree {
        labels,
        vertices: vs.to_vec(),
        sides,
        rho,
        sigma,
        ends,
    };
    if cycle_length(&tree.sigma_rho(), 0) != n {
        return Err(Error::NotTransitive);
    }
    Ok(tree)
}

fn flip(s: Side) -> Side {
    match s {
        Side::Rho => Side::Sigma,
        Side::Sigma => Side::Rho,
    }
}

fn cycle_length(perm: &[usize], start: usize) -> usize {
    let mut x = perm[start];
    let mut len = 1;
    while x != start {
        x = perm[x];
        len += 1;
    }
    len
}

impl BrauerTree {
    /// Number of edges `ℓ`.
    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn index_of_label(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn vertices(&self) -> &[VertexSpec] {
        &self.vertices
    }

    pub fn side(&self, vertex: usize) -> Side {
        self.sides[vertex]
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// `(ρ-vertex, σ-vertex)` of edge `i`.
    pub fn ends(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    /// `i ↦ σ(ρ(i))`.
    pub fn sigma_rho(&self) -> Vec<usize> {
        self.rho.iter().map(|&j| self.sigma[j]).collect()
    }

    /// `i ↦ ρ(σ(i))`.
    pub fn rho_sigma(&self) -> Vec<usize> {
        self.sigma.iter().map(|&j| self.rho[j]).collect()
    }

    /// The tree as it would be written in an input file.
    pub fn spec(&self) -> TreeSpec {
        TreeSpec {
            vertices: self.vertices.clone(),
        }
    }

    pub fn state_label(&self, s: HookState) -> String {
        let k = match s.kind {
            HookKind::U => 'U',
            HookKind::V => 'V',
        };
        format!("{k}{}", self.labels[s.edge])
    }
}

/// `Ω(U_i) = V_{ρ(i)}`, `Ω(V_i) = U_{σ(i)}`.
pub fn omega(state: HookState, tree: &BrauerTree) -> HookState {
    match state.kind {
        HookKind::U => HookState {
            kind: HookKind::V,
            edge: tree.rho[state.edge],
        },
        HookKind::V => HookState {
            kind: HookKind::U,
            edge: tree.sigma[state.edge],
        },
    }
}

/// `Ω^n(state)` for `n ≥ 0`.
pub fn omega_pow(state: HookState, tree: &BrauerTree, n: u64) -> HookState {
    let period = 2 * tree.edge_count() as u64;
    (0..n % period).fold(state, |s, _| omega(s, tree))
}

/// The states `state, Ω(state), …` up to and including `Ω^steps(state)`.
pub fn walk(state: HookState, tree: &BrauerTree, steps: usize) -> Vec<HookState> {
    let mut out = vec![state];
    for _ in 0..steps {
        out.push(omega(*out.last().unwrap(), tree));
    }
    out
}

/// Least `n ≥ 1` with `Ω^n(state) = state`; always `2ℓ`.
pub fn period(state: HookState, tree: &BrauerTree) -> u64 {
    let mut s = omega(state, tree);
    let mut n = 1;
    while s != state {
        s = omega(s, tree);
        n += 1;
    }
    assert_eq!(n, 2 * tree.edge_count() as u64, "σρ is not a single cycle");
    n
}

/// Images of `U_0, …, U_{ℓ-1}` under `Ω^n`.
pub fn parity_classes(tree: &BrauerTree, n: u64) -> Vec<HookState> {
    (0..tree.edge_count())
        .map(|i| omega_pow(HookState { kind: HookKind::U, edge: i }, tree, n))
        .collect()
}

/// A vertex of the tree, named by its colour and index in the spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomorphism {
    /// Edge permutation, on edge indices.
    pub perm: Vec<usize>,
    /// Vertices mapped to themselves.
    pub stabilized: Vec<VertexRef>,
}

/// Edge permutations preserving the plane tree with its colouring, i.e.
/// commuting with both `ρ` and `σ`. Such a permutation commutes with the
/// `ℓ`-cycle `σρ`, hence is a power of it, so only `ℓ` candidates are tried.
pub fn tree_automorphisms(tree: &BrauerTree) -> Result<Vec<TreeAutomorphism>> {
    let n = tree.edge_count();
    if n > TREE_EDGE_BOUND {
        return Err(Error::OrderBoundExceeded {
            order: n as u128,
            bound: TREE_EDGE_BOUND as u128,
        });
    }
    let c = tree.sigma_rho();
    let mut power: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for _ in 0..n {
        if is_tree_automorphism(tree, &power) {
            out.push(TreeAutomorphism {
                stabilized: stabilized_vertices(tree, &power),
                perm: power.clone(),
            });
        }
        power = power.iter().map(|&x| c[x]).collect();
    }
    Ok(out)
}

pub fn is_tree_automorphism(tree: &BrauerTree, pi: &[usize]) -> bool {
    let n = tree.edge_count();
    if pi.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &x in pi {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    (0..n).all(|i| pi[tree.rho[i]] == tree.rho[pi[i]] && pi[tree.sigma[i]] == tree.sigma[pi[i]])
}

/// Vertices `v` with `π(v) = v`, in spec order.
pub fn stabilized_vertices(tree: &BrauerTree, pi: &[usize]) -> Vec<VertexRef> {
    let mut out = Vec::new();
    for (k, v) in tree.vertices.iter().enumerate() {
        let edges: Vec<usize> = v.edges.iter().map(|l| tree.index_of_label(*l).unwrap()).collect();
        let mut img: Vec<usize> = edges.iter().map(|&i| pi[i]).collect();
        let mut orig = edges.clone();
        img.sort_unstable();
        orig.sort_unstable();
        if img == orig {
            out.push(VertexRef {
                side: tree.sides[k],
                index: k,
            });
        }
    }
    out
}

/// The congruence class of `n` forced by a Morita autoequivalence
/// `Ω^n(B)` inducing `π` on the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityOutcome {
    /// The stabilised vertex used.
    pub vertex: VertexRef,
    /// The hook `X_i` with `i` in that vertex, and its image `X_{π(i)}`.
    pub from: HookState,
    pub to: HookState,
    /// Admissible `n` are exactly `residue + k · modulus`.
    pub residue: u64,
    pub modulus: u64,
    /// Whether the candidate `n` lies in the class.
    pub admissible: bool,
}

impl ParityOutcome {
    /// Every admissible `n` is even.
    pub fn forces_even(&self) -> bool {
        self.residue % 2 == 0 && self.modulus % 2 == 0
    }
}

/// Follow the congruence argument: pick a vertex fixed by `π`, an edge `i`
/// at it, and the even `m` with `Ω^m(X_i) = X_{π(i)}` where `X = U` at a
/// `ρ`-vertex and `X = V` at a `σ`-vertex. Then `n ≡ m (mod 2ℓ)`.
pub fn morita_parity_check(tree: &BrauerTree, pi: &[usize], n: i64) -> Result<ParityOutcome> {
    if !is_tree_automorphism(tree, pi) {
        return Err(Error::NotTreeAutomorphism);
    }
    let stabilized = stabilized_vertices(tree, pi);
    let vertex = *stabilized
        .iter()
        .min_by_key(|v| (v.side, v.index))
        .ok_or(Error::NoStabilizedVertex)?;
    let i = tree.index_of_label(tree.vertices[vertex.index].edges[0]).unwrap();
    let target = pi[i];
    let (kind, step) = match vertex.side {
        Side::Rho => (HookKind::U, tree.sigma_rho()),
        Side::Sigma => (HookKind::V, tree.rho_sigma()),
    };
    let mut x = i;
    let mut t = 0u64;
    while x != target {
        x = step[x];
        t += 1;
    }
    let modulus = 2 * tree.edge_count() as u64;
    let residue = 2 * t;
    let from = HookState { kind, edge: i };
    let to = HookState { kind, edge: target };
    debug_assert_eq!(omega_pow(from, tree, residue), to);
    Ok(ParityOutcome {
        vertex,
        from,
        to,
        residue,
        modulus,
        admissible: n.rem_euclid(modulus as i64) as u64 == residue,
    })
}

/// `k` edges at one vertex, which is on the `ρ` side.
pub fn star(k: u32) -> TreeSpec {
    let mut vertices = vec![VertexSpec::new(&(1..=k).collect::<Vec<_>>())];
    vertices.extend((1..=k).map(|i| VertexSpec::new(&[i])));
    TreeSpec { vertices }
}

/// `k` edges in a row.
pub fn path(k: u32) -> TreeSpec {
    let mut vertices = vec![VertexSpec::new(&[1])];
    vertices.extend((1..k).map(|i| VertexSpec::new(&[i, i + 1])));
    vertices.push(VertexSpec::new(&[k]));
    TreeSpec { vertices }
}

/// A path of `legs.len() - 1` spine edges with `legs[j]` pendant edges at
/// the `j`-th spine vertex.
pub fn caterpillar(legs: &[u32]) -> TreeSpec {
    let spine = legs.len().saturating_sub(1) as u32;
    let mut next = spine + 1;
    let mut vertices = Vec::new();
    let mut leaves = Vec::new();
    for (j, &count) in legs.iter().enumerate() {
        let j = j as u32;
        let mut edges = Vec::new();
        if j > 0 {
            edges.push(j);
        }
        for _ in 0..count {
            edges.push(next);
            leaves.push(next);
            next += 1;
        }
        if j < spine {
            edges.push(j + 1);
        }
        vertices.push(VertexSpec::new(&edges));
    }
    vertices.extend(leaves.into_iter().map(|l| VertexSpec::new(&[l])));
    TreeSpec { vertices }
}

impl fmt::Display for BrauerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.vertices.iter().enumerate() {
            let mark = match self.sides[k] {
                Side::Rho => "r",
                Side::Sigma => "s",
            };
            let edges: Vec<String> = v.edges.iter().map(u32::to_string).collect();
            writeln!(f, "  {mark} ({})", edges.join(" "))?;
        }
        writeln!(f, "  rho   = {}", cycles(&self.rho, &self.labels))?;
        write!(f, "  sigma = {}", cycles(&self.sigma, &self.labels))
    }
}

/// Cycle notation with labels, fixed points omitted (`()` for the identity).
pub fn cycles(perm: &[usize], labels: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut c = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            c.push(labels[x].to_string());
            x = perm[x];
        }
        out.push_str(&format!("({})", c.join(" ")));
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
