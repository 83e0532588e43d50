//! Deterministic Schreier–Sims for permutation groups of small degree.
//!
//! Besides the group order, a complete chain gives a bijection between the
//! group and `0..order`: an element `g = u_0[k_0] ∘ u_1[k_1] ∘ … ∘ u_{L-1}[k_{L-1}]`
//! (transversal elements, level 0 outermost) has index `Σ k_i · stride_i`
//! with level 0 most significant. The identity has index 0.

pub type Perm = Vec<u32>;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    // position in `orbit`, or u32::MAX
    pos: Vec<u32>,
    u: Vec<Perm>,
    u_inv: Vec<Perm>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let id: Perm = (0..degree as u32).collect();
        let mut pos = vec![u32::MAX; degree];
        pos[base as usize] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            pos,
            u: vec![id.clone()],
            u_inv: vec![id],
        }
    }

    fn extend_orbit(&mut self) {
        let gens_inv: Vec<Perm> = self.gens.iter().map(|g| invert(g)).collect();
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            for (s, s_inv) in self.gens.iter().zip(&gens_inv) {
                let y = s[x as usize];
                if self.pos[y as usize] == u32::MAX {
                    self.pos[y as usize] = self.orbit.len() as u32;
                    self.orbit.push(y);
                    self.u.push(compose(s, &self.u[head]));
                    self.u_inv.push(compose(&self.u_inv[head], s_inv));
                }
            }
            head += 1;
        }
    }
}

/// `(a ∘ b)[x] = a[b[x]]`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn invert(a: &[u32]) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn is_identity(a: &[u32]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    generators: Vec<Perm>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            generators: Vec::new(),
        };
        for g in gens {
            chain.extend(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The generators that were actually added (non-redundant at insertion).
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &[u32]) -> bool {
        let (residue, _) = self.strip(g.to_vec(), 0);
        is_identity(&residue)
    }

    /// Adds `g` to the group; returns whether the group grew.
    pub fn extend(&mut self, g: &[u32]) -> bool {
        assert_eq!(g.len(), self.degree, "permutation degree mismatch");
        if self.contains(g) {
            return false;
        }
        self.generators.push(g.to_vec());
        let j = self.insert_strong(g.to_vec(), 0);
        self.complete(j);
        true
    }

    // Sift `g` through levels `from..`; returns the residue and the level
    // where sifting stopped (== levels.len() when it went all the way).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let b = g[level.base as usize];
            let k = level.pos[b as usize];
            if k == u32::MAX {
                return (g, l);
            }
            g = compose(&level.u_inv[k as usize], &g);
        }
        let n = self.levels.len();
        (g, n)
    }

    // Adds `g` (fixing the bases of levels < `from`) to every level it
    // belongs to; returns the deepest such level.
    fn insert_strong(&mut self, g: Perm, from: usize) -> usize {
        let mut j = from;
        while j < self.levels.len() && g[self.levels[j].base as usize] == self.levels[j].base {
            j += 1;
        }
        if j == self.levels.len() {
            let moved = g
                .iter()
                .enumerate()
                .find(|&(i, &x)| i as u32 != x)
                .map(|(i, _)| i as u32)
                .expect("non-identity");
            self.levels.push(Level::new(moved, self.degree));
        }
        for l in from..=j {
            self.levels[l].gens.push(g.clone());
            self.levels[l].extend_orbit();
        }
        j
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        'levels: while i >= 0 {
            let l = i as usize;
            let level = &self.levels[l];
            let mut pending = None;
            'scan: for k in 0..level.orbit.len() {
                for s in &level.gens {
                    let y = s[level.orbit[k] as usize];
                    let kk = level.pos[y as usize] as usize;
                    // u_{s(b)}^{-1} s u_b fixes the base point
                    let h = compose(&level.u_inv[kk], &compose(s, &level.u[k]));
                    let (residue, _) = self.strip(h, l + 1);
                    if !is_identity(&residue) {
                        pending = Some(residue);
                        break 'scan;
                    }
                }
            }
            match pending {
                Some(residue) => {
                    let j = self.insert_strong(residue, l + 1);
                    i = j as isize;
                    continue 'levels;
                }
                None => i -= 1,
            }
        }
    }

    fn strides(&self) -> Vec<u128> {
        let mut strides = vec![1u128; self.levels.len()];
        for l in (0..self.levels.len().saturating_sub(1)).rev() {
            strides[l] = strides[l + 1] * self.levels[l + 1].orbit.len() as u128;
        }
        strides
    }

    fn digits(&self, mut index: u128) -> Vec<usize> {
        let mut d = vec![0; self.levels.len()];
        for l in (0..self.levels.len()).rev() {
            let n = self.levels[l].orbit.len() as u128;
            d[l] = (index % n) as usize;
            index /= n;
        }
        d
    }

    /// Image of `x` under the element with transversal digits `d`.
    fn apply_digits(&self, d: &[usize], mut x: u32) -> u32 {
        for l in (0..self.levels.len()).rev() {
            x = self.levels[l].u[d[l]][x as usize];
        }
        x
    }

    fn apply_digits_inv(&self, d: &[usize], mut x: u32) -> u32 {
        for (l, level) in self.levels.iter().enumerate() {
            x = level.u_inv[d[l]][x as usize];
        }
        x
    }

    /// Digits of the element whose base images are given by `img`.
    fn digits_from_images<F: Fn(u32) -> u32>(&self, img: F) -> Option<Vec<usize>> {
        let mut d: Vec<usize> = Vec::with_capacity(self.levels.len());
        for (l, level) in self.levels.iter().enumerate() {
            // g_l = u_{l-1}^{-1} ∘ … ∘ u_0^{-1} ∘ g
            let mut x = img(level.base);
            for (m, prev) in self.levels[..l].iter().enumerate() {
                x = prev.u_inv[d[m]][x as usize];
            }
            let k = level.pos[x as usize];
            if k == u32::MAX {
                return None;
            }
            d.push(k as usize);
        }
        Some(d)
    }

    fn index_from_digits(&self, d: &[usize]) -> u128 {
        self.strides().iter().zip(d).map(|(s, &k)| s * k as u128).sum()
    }

    /// Index of a permutation, `None` if not in the group.
    pub fn index_of(&self, g: &[u32]) -> Option<u128> {
        let d = self.digits_from_images(|b| g[b as usize])?;
        // base images agree; the element is in the group iff it equals the word
        if (0..self.degree as u32).any(|x| self.apply_digits(&d, x) != g[x as usize]) {
            return None;
        }
        Some(self.index_from_digits(&d))
    }

    pub fn element(&self, index: u128) -> Perm {
        let d = self.digits(index);
        (0..self.degree as u32).map(|x| self.apply_digits(&d, x)).collect()
    }

    /// Image of point `x` under element `index`.
    pub fn apply(&self, index: u128, x: u32) -> u32 {
        self.apply_digits(&self.digits(index), x)
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (da, db) = (self.digits(a), self.digits(b));
        let d = self
            .digits_from_images(|x| self.apply_digits(&da, self.apply_digits(&db, x)))
            .expect("closed under products");
        self.index_from_digits(&d)
    }

    pub fn inv(&self, a: u128) -> u128 {
        let da = self.digits(a);
        let d = self
            .digits_from_images(|x| self.apply_digits_inv(&da, x))
            .expect("closed under inverses");
        self.index_from_digits(&d)
    }
}
