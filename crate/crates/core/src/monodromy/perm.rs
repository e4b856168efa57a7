//! Permutations on `0..n`, group orders by Schreier–Sims, block systems.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

/// `p[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j] = i;
        }
        Perm(v)
    }

    /// Disjoint cycles of length at least 2.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut j = self.0[s];
            while j != s {
                seen[j] = true;
                c.push(j);
                j = self.0[j];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = t.iter().sum();
        t.extend(std::iter::repeat(1).take(self.0.len() - moved));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return f.write_str("()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `transversal[x]` sends the base point to `x`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut transversal = vec![None; n];
        transversal[base] = Some(Perm::identity(n));
        Level { base, gens: Vec::new(), transversal }
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Perm::identity(n));
        let mut queue = vec![self.base];
        while let Some(x) = queue.pop() {
            let ux = self.transversal[x].clone().unwrap();
            for g in &self.gens {
                let y = g.apply(x);
                if self.transversal[y].is_none() {
                    self.transversal[y] = Some(ux.then(g));
                    queue.push(y);
                }
            }
        }
    }

    fn orbit(&self) -> Vec<usize> {
        (0..self.transversal.len()).filter(|&x| self.transversal[x].is_some()).collect()
    }
}

/// Base and strong generating set, built by the deterministic Schreier–Sims
/// algorithm.
pub struct StabChain {
    levels: Vec<Level>,
    n: usize,
}

impl StabChain {
    pub fn new(n: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain { levels: Vec::new(), n };
        for g in gens {
            let (r, j) = chain.sift(g, 0);
            if !r.is_identity() {
                chain.add(r, 0, j);
            }
        }
        chain.complete();
        chain
    }

    /// Residue of `g` and the level where sifting stopped.
    fn sift(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, lv) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(lv.base);
            match &lv.transversal[x] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    /// Adds `r` (fixing the bases before `from`) to levels `from..=to`.
    fn add(&mut self, r: Perm, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = (0..self.n).find(|&i| r.apply(i) != i).expect("nonidentity residue");
            self.levels.push(Level::new(b, self.n));
        }
        for lv in &mut self.levels[from..=to] {
            lv.gens.push(r.clone());
            lv.rebuild_orbit();
        }
    }

    fn complete(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                let lv = &self.levels[i];
                for x in lv.orbit() {
                    let ux = lv.transversal[x].clone().unwrap();
                    for s in &lv.gens {
                        let y = s.apply(x);
                        let uy = lv.transversal[y].as_ref().unwrap();
                        let h = ux.then(s).then(&uy.inverse());
                        let (r, j) = self.sift(&h, i + 1);
                        if !r.is_identity() {
                            self.add(r, i + 1, j);
                            continue 'restart;
                        }
                    }
                }
            }
            return;
        }
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, lv| acc * BigUint::from(lv.orbit().len()))
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.sift(g, 0).0.is_identity()
    }
}

/// Order of the group generated by `gens`.
pub fn group_order(n: usize, gens: &[Perm]) -> BigUint {
    StabChain::new(n, gens).order()
}

pub fn is_transitive(n: usize, gens: &[Perm]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// A partition of `0..n` into equal cells permuted by the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &BlockSystem) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|c| b.iter().all(|x| c.contains(x))))
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("point in some block")
    }
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    let mut y = x;
    while uf[y] != r {
        let next = uf[y];
        uf[y] = r;
        y = next;
    }
    r
}

/// The finest block system in which all of `seed` lie in one cell.
pub fn minimal_block_system(n: usize, gens: &[Perm], seed: &[usize]) -> BlockSystem {
    let mut uf: Vec<usize> = (0..n).collect();
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &s in &seed[1..] {
        let (a, b) = (find(&mut uf, seed[0]), find(&mut uf, s));
        if a != b {
            uf[b] = a;
            queue.push((seed[0], s));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (a, b) = (find(&mut uf, gx), find(&mut uf, gy));
            if a != b {
                uf[b] = a;
                queue.push((gx, gy));
            }
        }
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut root_cell: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut uf, i);
        match root_cell[r] {
            Some(c) => cells[c].push(i),
            None => {
                root_cell[r] = Some(cells.len());
                cells.push(vec![i]);
            }
        }
    }
    BlockSystem { blocks: cells }
}

/// All nontrivial block systems of a transitive group, sorted by block size.
pub fn block_systems(n: usize, gens: &[Perm]) -> Vec<BlockSystem> {
    let mut found: BTreeSet<BlockSystem> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = (1..n).map(|j| vec![0, j]).collect();
    while let Some(seed) = frontier.pop() {
        let sys = minimal_block_system(n, gens, &seed);
        if sys.len() <= 1 || found.contains(&sys) {
            continue;
        }
        let cell = sys.blocks[sys.block_of(0)].clone();
        for j in 0..n {
            if !cell.contains(&j) {
                let mut s = cell.clone();
                s.push(j);
                frontier.push(s);
            }
        }
        found.insert(sys);
    }
    let mut out: Vec<BlockSystem> = found.into_iter().collect();
    out.sort_by_key(|s| s.block_size());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize) -> Perm {
        Perm((0..n).map(|i| (i + 1) % n).collect())
    }

    #[test]
    fn orders() {
        let t = Perm(vec![1, 0, 2, 3]);
        assert_eq!(group_order(4, &[cyc(4), t.clone()]), BigUint::from(24u32));
        assert_eq!(group_order(4, &[cyc(4)]), BigUint::from(4u32));
        let d4 = Perm(vec![0, 3, 2, 1]);
        assert_eq!(group_order(4, &[cyc(4), d4]), BigUint::from(8u32));
        assert_eq!(group_order(7, &[cyc(7), Perm(vec![1, 0, 2, 3, 4, 5, 6])]), BigUint::from(5040u32));
    }

    #[test]
    fn cyclic_four_has_one_system() {
        let sys = block_systems(4, &[cyc(4)]);
        assert_eq!(sys, vec![BlockSystem { blocks: vec![vec![0, 2], vec![1, 3]] }]);
    }

    #[test]
    fn primitive_groups_have_none() {
        let t = Perm(vec![1, 0, 2, 3]);
        assert!(block_systems(4, &[cyc(4), t]).is_empty());
        assert!(block_systems(2, &[Perm(vec![1, 0])]).is_empty());
        assert!(block_systems(5, &[cyc(5)]).is_empty());
    }

    #[test]
    fn cyclic_eight_is_a_chain() {
        let sys = block_systems(8, &[cyc(8)]);
        assert_eq!(sys.len(), 2);
        assert!(sys[0].refines(&sys[1]));
    }

    #[test]
    fn perm_algebra() {
        let p = Perm(vec![1, 2, 0]);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.to_string(), "(0 1 2)");
        assert_eq!(Perm(vec![1, 0, 2, 4, 3]).cycle_type(), vec![2, 2, 1]);
    }
}
