//! Right factors from block systems, decompositions of iterates and their
//! equivalence.

use std::collections::HashMap;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::{monodromy_group, BlockSystem, PermGroup};
use crate::arith::BigFloat;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::CBig;
use crate::poly::{nullspace, Poly};
use crate::ratmap::{Mobius, RatMap};
use crate::scalar::{cabs, ExactField, Real};
use crate::search::right_mobius_links;
use crate::symmetry::{critical_values, left_mobius_link};

/// `u` with `f = u ∘ w`, found from a linear system and verified.
pub fn left_quotient<K: ExactField>(f: &RatMap<K>, w: &RatMap<K>) -> Option<RatMap<K>> {
    let (m, k) = (f.degree(), w.degree());
    if k == 0 || m % k != 0 {
        return None;
    }
    let r = m / k;
    let basis: Vec<Poly<K>> = (0..=r).map(|i| w.p().pow_u(i as u32) * &w.q().pow_u((r - i) as u32)).collect();
    // columns: U1_0..U1_r, then U2_0..U2_r
    let cols: Vec<Poly<K>> = basis
        .iter()
        .map(|b| -(f.q().clone() * b))
        .chain(basis.iter().map(|b| f.p().clone() * b))
        .collect();
    let rows = cols.iter().map(|c| c.deg() + 1).max().unwrap_or(0);
    let mat: Vec<Vec<K>> = (0..rows).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    for v in nullspace(&mat, 2 * (r + 1)) {
        let u1 = Poly::new(v[..=r].to_vec());
        let u2 = Poly::new(v[r + 1..].to_vec());
        if let Ok(u) = RatMap::new(u1, u2) {
            if u.degree() == r && u.compose(w) == *f {
                return Some(u);
            }
        }
    }
    None
}

fn block_poly(points: &[&CBig], bits: u32) -> Vec<CBig> {
    let zero = Complex::new(BigFloat::with_precision(0.0, bits), BigFloat::with_precision(0.0, bits));
    let one = Complex::new(BigFloat::with_precision(1.0, bits), BigFloat::with_precision(0.0, bits));
    let mut c = vec![one];
    for z in points {
        let mut next = vec![zero.clone(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + x;
            next[i] = next[i].clone() - x.clone() * *z;
        }
        c = next;
    }
    c
}

/// Reduced echelon basis of the pencil spanned by two rows, pivoting on the
/// largest entries. Returns the pivot columns and the rows.
fn pencil_basis(mut rows: [Vec<CBig>; 2]) -> Option<((usize, usize), [Vec<CBig>; 2])> {
    let n = rows[0].len();
    let argmax = |row: &[CBig], skip: Option<usize>| {
        (0..n).filter(|&j| Some(j) != skip).max_by(|&x, &y| cabs(&row[x]).partial_cmp(&cabs(&row[y])).unwrap())
    };
    let (r0, c0) = [0, 1]
        .iter()
        .map(|&r| (r, argmax(&rows[r], None).unwrap()))
        .max_by(|x, y| cabs(&rows[x.0][x.1]).partial_cmp(&cabs(&rows[y.0][y.1])).unwrap())?;
    rows.swap(0, r0);
    let p = rows[0][c0].clone();
    if p.is_zero() {
        return None;
    }
    rows[0] = rows[0].iter().map(|x| x.clone() / &p).collect();
    let f = rows[1][c0].clone();
    rows[1] = rows[1].iter().zip(&rows[0]).map(|(x, y)| x.clone() - y.clone() * &f).collect();
    let c1 = argmax(&rows[1], Some(c0))?;
    let p = rows[1][c1].clone();
    if p.is_zero() {
        return None;
    }
    rows[1] = rows[1].iter().map(|x| x.clone() / &p).collect();
    let f = rows[0][c1].clone();
    rows[0] = rows[0].iter().zip(&rows[1]).map(|(x, y)| x.clone() - y.clone() * &f).collect();
    Some(((c0, c1), rows))
}

fn exact_pencil<K: ExactField>(
    a: &RatMap<K>,
    g: &PermGroup<K>,
    bs: &BlockSystem,
    bits: u32,
) -> Option<((usize, usize), [Poly<K>; 2])> {
    if bs.len() < 2 {
        return None;
    }
    let fiber = g.fiber_at(a, bits)?;
    let rows = [0, 1].map(|b| block_poly(&bs.blocks[b].iter().map(|&i| &fiber[i]).collect::<Vec<_>>(), bits));
    let (piv, rows) = pencil_basis(rows)?;
    let tol = bits / 2 - 8;
    let rec = |row: &Vec<CBig>| -> Option<Poly<K>> {
        Some(Poly::new(row.iter().map(|z| K::reconstruct(z, tol)).collect::<Option<Vec<K>>>()?))
    };
    Some((piv, [rec(&rows[0])?, rec(&rows[1])?]))
}

/// `(w, u)` with `a = u ∘ w`, where `w` is constant on the blocks of `bs`
/// (so `deg w` is the block size).
pub fn right_factor_from_blocks<K: ExactField>(
    a: &RatMap<K>,
    g: &PermGroup<K>,
    bs: &BlockSystem,
    cfg: &Config,
) -> Result<Option<(RatMap<K>, RatMap<K>)>> {
    let mut previous = None;
    for bits in cfg.precision_ladder() {
        let cur = exact_pencil(a, g, bs, bits);
        if cur.is_some() && cur == previous {
            let (_, [p, q]) = cur.unwrap();
            let Ok(w) = RatMap::new(p, q) else { return Ok(None) };
            if w.degree() != bs.block_size() {
                return Ok(None);
            }
            return Ok(left_quotient(a, &w).map(|u| (w, u)));
        }
        previous = cur;
    }
    Err(Error::PrecisionCap(cfg.precision_cap))
}

/// Factors of a decomposition, innermost first.
#[derive(Clone, PartialEq)]
pub struct Decomposition<K> {
    pub factors: Vec<RatMap<K>>,
}

impl<K: ExactField> std::fmt::Debug for Decomposition<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.strings()).finish()
    }
}

impl<K: ExactField> Decomposition<K> {
    pub fn compose(&self) -> RatMap<K> {
        let mut it = self.factors.iter();
        let first = it.next().expect("nonempty decomposition").clone();
        it.fold(first, |acc, f| f.compose(&acc))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree()).collect()
    }

    pub fn strings(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionView {
    pub factors: Vec<String>,
    pub degrees: Vec<usize>,
}

impl<K: ExactField> From<&Decomposition<K>> for DecompositionView {
    fn from(d: &Decomposition<K>) -> Self {
        DecompositionView { factors: d.strings(), degrees: d.degrees() }
    }
}

/// Maximal chains of block systems, finest first.
fn maximal_chains(systems: &[BlockSystem]) -> Vec<Vec<usize>> {
    let n = systems.len();
    let below = |i: usize, j: usize| i != j && systems[i].refines(&systems[j]);
    let covers = |i: usize, j: usize| below(i, j) && !(0..n).any(|k| below(i, k) && below(k, j));
    let minimal: Vec<usize> = (0..n).filter(|&j| !(0..n).any(|i| below(i, j))).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = minimal.into_iter().map(|j| vec![j]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        let next: Vec<usize> = (0..n).filter(|&j| covers(last, j)).collect();
        if next.is_empty() {
            out.push(chain);
        } else {
            for j in next {
                let mut c = chain.clone();
                c.push(j);
                stack.push(c);
            }
        }
    }
    out
}

/// Decompositions of `f` into indecomposable factors, one per equivalence
/// class, read off the maximal chains of block systems of its monodromy.
pub fn decompositions<K: ExactField>(f: &RatMap<K>, cfg: &Config) -> Result<Vec<Decomposition<K>>> {
    let g = monodromy_group(f, cfg)?;
    let systems = g.block_systems();
    if systems.is_empty() {
        return Ok(vec![Decomposition { factors: vec![f.clone()] }]);
    }
    let mut right: HashMap<usize, RatMap<K>> = HashMap::new();
    let mut out: Vec<Decomposition<K>> = Vec::new();
    for chain in maximal_chains(&systems) {
        let mut ws = Vec::new();
        for &i in &chain {
            if !right.contains_key(&i) {
                let (w, _) = right_factor_from_blocks(f, &g, &systems[i], cfg)?
                    .ok_or_else(|| Error::InvalidArgument("block system without an exact right factor".into()))?;
                right.insert(i, w);
            }
            ws.push(right[&i].clone());
        }
        ws.push(f.clone());
        let mut factors = vec![ws[0].clone()];
        for k in 1..ws.len() {
            let step = left_quotient(&ws[k], &ws[k - 1])
                .ok_or_else(|| Error::InvalidArgument("nested right factors do not compose".into()))?;
            factors.push(step);
        }
        let d = Decomposition { factors };
        debug_assert!(d.compose() == *f);
        let mut known = false;
        for e in &out {
            if equivalent(e, &d)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            out.push(d);
        }
    }
    Ok(out)
}

/// Decompositions of `a^n`.
pub fn decompositions_of_iterate<K: ExactField>(a: &RatMap<K>, n: u32, cfg: &Config) -> Result<Vec<Decomposition<K>>> {
    let f = a.iterate(n, cfg)?;
    decompositions(&f, cfg)
}

/// Möbius maps `mu_1..mu_(r-1)` with `B_1 = mu_1 ∘ A_1`,
/// `B_i = mu_i ∘ A_i ∘ mu_(i-1)^-1` and `B_r = A_r ∘ mu_(r-1)^-1`. Chains of
/// different lengths give `None`.
pub fn equivalent<K: ExactField>(d1: &Decomposition<K>, d2: &Decomposition<K>) -> Result<Option<Vec<Mobius<K>>>> {
    if d1.compose() != d2.compose() {
        return Err(Error::InvalidArgument("decompositions of different maps".into()));
    }
    let r = d1.factors.len();
    if r != d2.factors.len() {
        return Ok(None);
    }
    let mut links: Vec<Mobius<K>> = Vec::new();
    let mut prev_inv = Mobius::identity();
    for i in 0..r - 1 {
        let a = d1.factors[i].pre_mobius(&prev_inv);
        let Some(mu) = left_mobius_link(&a, &d2.factors[i]) else { return Ok(None) };
        prev_inv = mu.inverse();
        links.push(mu);
    }
    if d1.factors[r - 1].pre_mobius(&prev_inv) != d2.factors[r - 1] {
        return Ok(None);
    }
    Ok(Some(links))
}

/// `R` with `b = a ∘ R`, if one exists.
pub fn left_factor_divide<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>, cfg: &Config) -> Result<Option<RatMap<K>>> {
    let (m, n) = (a.degree(), b.degree());
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidArgument(format!("degree {m} does not divide {n}")));
    }
    if let Some(mu) = a.to_mobius() {
        return Ok(Some(b.post_mobius(&mu.inverse())));
    }
    if !critical_values(a).is_subset(&critical_values(b)) {
        return Ok(None);
    }
    let verify = |r: RatMap<K>| if a.compose(&r) == *b { Some(r) } else { None };
    if m == n {
        let (links, _) = right_mobius_links(b, a, cfg, 0x6c66)?;
        return Ok(links.into_iter().find_map(|nu| verify(nu.to_map())));
    }
    let g = monodromy_group(b, cfg)?;
    for bs in g.block_systems().iter().filter(|s| s.block_size() == n / m) {
        let Some((w, u)) = right_factor_from_blocks(b, &g, bs, cfg)? else { continue };
        // a ∘ nu = u gives b = a ∘ (nu ∘ w)
        let (links, _) = right_mobius_links(&u, a, cfg, 0x6c67)?;
        if let Some(r) = links.into_iter().find_map(|nu| verify(w.post_mobius(&nu))) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;

    type G = QuadRat<1>;

    fn pm(s: &str) -> RatMap<G> {
        parse_map(s).unwrap()
    }

    #[test]
    fn quotient_by_inner_factor() {
        let a = pm("(z^2+1)/z");
        let f = a.compose(&a);
        assert_eq!(left_quotient(&f, &a), Some(a.clone()));
        assert_eq!(left_quotient(&pm("z^6"), &pm("z^2")), Some(pm("z^3")));
        assert_eq!(left_quotient(&pm("z^6+z"), &pm("z^2")), None);
    }

    #[test]
    fn power_map_blocks_give_square() {
        let cfg = Config::default();
        let f = pm("z^4");
        let g = monodromy_group(&f, &cfg).unwrap();
        let sys = g.block_systems();
        assert_eq!(sys.len(), 1);
        let (w, u) = right_factor_from_blocks(&f, &g, &sys[0], &cfg).unwrap().unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(u.compose(&w), f);
        let d = decompositions(&f, &cfg).unwrap();
        assert_eq!(d.len(), 1);
        let sq = Decomposition { factors: vec![pm("z^2"), pm("z^2")] };
        assert!(equivalent(&d[0], &sq).unwrap().is_some());
    }

    #[test]
    fn equivalence_examples() {
        let d1 = Decomposition { factors: vec![pm("z^2"), pm("z^2")] };
        let d2 = Decomposition { factors: vec![pm("-z^2"), pm("z^2")] };
        let links = equivalent(&d1, &d2).unwrap().unwrap();
        assert_eq!(links[0].to_string(), "-z");
        assert_eq!(equivalent(&d1, &d1).unwrap().unwrap()[0].to_string(), "z");
        let d3 = Decomposition { factors: vec![pm("z^4")] };
        assert_eq!(equivalent(&d1, &d3).unwrap(), None);
    }

    #[test]
    fn joukowski_square_has_one_class() {
        let cfg = Config::default();
        let a = pm("(z^2+1)/z");
        let d = decompositions_of_iterate(&a, 2, &cfg).unwrap();
        assert_eq!(d.len(), 1);
        let aa = Decomposition { factors: vec![a.clone(), a.clone()] };
        assert!(equivalent(&d[0], &aa).unwrap().is_some());
    }

    #[test]
    fn left_division_examples() {
        let cfg = Config::default();
        let a = pm("(z^2+1)/z");
        let aa = a.compose(&a);
        let r = left_factor_divide(&a, &aa, &cfg).unwrap().unwrap();
        assert_eq!(a.compose(&r), aa);
        assert_eq!(left_factor_divide(&pm("z^2"), &pm("z^6"), &cfg).unwrap().map(|r| r.degree()), Some(3));
        assert_eq!(left_factor_divide(&a, &pm("z^4"), &cfg).unwrap(), None);
    }
}
