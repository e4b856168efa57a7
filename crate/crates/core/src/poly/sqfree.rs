use num_traits::Zero;

use super::Poly;
use crate::scalar::Field;

/// Yun's algorithm; factors are monic, ordered by multiplicity.
pub fn squarefree_decomposition<K: Field>(f: &Poly<K>) -> Vec<(Poly<K>, u32)> {
    assert!(!f.is_zero(), "squarefree decomposition of zero");
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.divrem(&a0).0;
    let c = df.divrem(&a0).0;
    let mut d = c - b.derivative();
    let mut i = 1u32;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let b_next = b.divrem(&a).0;
        let c_next = d.divrem(&a).0;
        d = c_next - b_next.derivative();
        if a.deg() > 0 {
            out.push((a.monic(), i));
        }
        b = b_next;
        i += 1;
    }
    out
}

pub fn squarefree_part<K: Field>(f: &Poly<K>) -> Poly<K> {
    if f.deg() == 0 {
        return Poly::constant(K::one());
    }
    f.divrem(&f.gcd(&f.derivative())).0.monic()
}

/// Number of times `b` (nonconstant) divides `f`.
pub fn multiplicity<K: Field>(f: &Poly<K>, b: &Poly<K>) -> u32 {
    assert!(b.deg() > 0);
    let mut g = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = g.divrem(b);
        if !r.is_zero() || g.is_zero() {
            return k;
        }
        g = q;
        k += 1;
    }
}

/// Pairwise coprime monic squarefree polynomials such that the squarefree
/// part of every input is a product of some of them.
pub fn gcd_free_basis<K: Field>(inputs: &[Poly<K>]) -> Vec<Poly<K>> {
    let mut basis: Vec<Poly<K>> = Vec::new();
    for f in inputs {
        if f.is_zero() || f.deg() == 0 {
            continue;
        }
        for (piece, _) in squarefree_decomposition(f) {
            let mut p = piece;
            let mut next = Vec::with_capacity(basis.len() + 2);
            for b in basis.drain(..) {
                if p.deg() == 0 {
                    next.push(b);
                    continue;
                }
                let g = p.gcd(&b);
                if g.deg() == 0 {
                    next.push(b);
                    continue;
                }
                let rest = b.divrem(&g).0;
                if rest.deg() > 0 {
                    next.push(rest.monic());
                }
                p = p.divrem(&g).0;
                next.push(g);
            }
            if p.deg() > 0 {
                next.push(p.monic());
            }
            basis = next;
        }
    }
    basis
}
