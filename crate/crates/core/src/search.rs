//! Backtracking enumeration of Aut(P) as permutations of P.
//!
//! Images of the standard generators are chosen one at a time. After
//! choosing `φ(g_j)` the map is extended additively to `⟨g_0, …, g_j⟩`, which
//! exposes collisions (non-injective choices) and, when asked for,
//! nonzero fixed points, so whole subtrees are pruned early.

use std::ops::ControlFlow;

use crate::pgroup::AbelianPGroup;

/// Largest `|P|` accepted by the search (the addition table is `|P|²`).
pub const SEARCH_BOUND: u64 = 1 << 10;

pub(crate) struct AutSearch {
    n: usize,
    add: Vec<u32>,
    moduli: Vec<u64>,
    strides: Vec<usize>,
    // spans[j]: indices of ⟨g_0..g_{j-1}⟩ (spans[0] = {0})
    spans: Vec<Vec<u32>>,
    candidates: Vec<Vec<u32>>,
}

impl AutSearch {
    pub fn new(p: &AbelianPGroup) -> Self {
        assert!(p.order() <= SEARCH_BOUND, "group too large for the search engine");
        let n = p.order() as usize;
        let elems: Vec<_> = p.elements().collect();
        let mut add = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = p.index_of(&p.add_unchecked(&elems[a], &elems[b])) as u32;
            }
        }
        let r = p.rank();
        let moduli = p.moduli().to_vec();
        let mut strides = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        let mut spans = vec![vec![0u32]];
        for j in 0..r {
            let prev: &Vec<u32> = &spans[j];
            let step = strides[j];
            let next: Vec<u32> = (0..moduli[j] as usize)
                .flat_map(|c| prev.iter().map(move |&x| x + (c * step) as u32))
                .collect();
            spans.push(next);
        }
        let e = p.exponents();
        let candidates = (0..r)
            .map(|j| {
                (0..n as u32)
                    .filter(|&y| {
                        let c = &elems[y as usize].coords;
                        (0..r).all(|i| c[i] % p.p().pow(e[i].saturating_sub(e[j])) == 0)
                    })
                    .collect()
            })
            .collect();
        AutSearch {
            n,
            add,
            moduli,
            strides,
            spans,
            candidates,
        }
    }

    /// Calls `f` on the permutation of every automorphism (only the
    /// fixed-point-free ones when `fixed_point_free`), in lexicographic order
    /// of the generator images.
    pub fn run<F>(&self, fixed_point_free: bool, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let mut perm = vec![u32::MAX; self.n];
        let mut used = vec![false; self.n];
        perm[0] = 0;
        used[0] = true;
        self.assign(0, fixed_point_free, &mut perm, &mut used, &mut f)
    }

    fn assign<F>(
        &self,
        j: usize,
        fpf: bool,
        perm: &mut [u32],
        used: &mut [bool],
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        if j == self.moduli.len() {
            return f(perm);
        }
        let m = self.moduli[j] as usize;
        let stride = self.strides[j];
        let prev = &self.spans[j];
        let mut touched: Vec<u32> = Vec::with_capacity(prev.len() * m);
        for &y in &self.candidates[j] {
            if used[y as usize] {
                continue;
            }
            let mut ok = true;
            let mut w = 0u32;
            'fill: for c in 1..m {
                w = self.add[w as usize * self.n + y as usize];
                for &x in prev {
                    let z = x as usize + c * stride;
                    let img = self.add[perm[x as usize] as usize * self.n + w as usize];
                    if used[img as usize] || (fpf && img as usize == z) {
                        ok = false;
                        break 'fill;
                    }
                    used[img as usize] = true;
                    perm[z] = img;
                    touched.push(z as u32);
                }
            }
            if ok {
                self.assign(j + 1, fpf, perm, used, f)?;
            }
            for &z in &touched {
                used[perm[z as usize] as usize] = false;
                perm[z as usize] = u32::MAX;
            }
            touched.clear();
        }
        ControlFlow::Continue(())
    }
}
