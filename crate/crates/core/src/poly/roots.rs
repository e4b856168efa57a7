//! Certified root isolation.
//!
//! Roots are approximated numerically, rounded to dyadic field elements and
//! certified exactly: with Weierstrass corrections `W_i`, the disks
//! `D(z_i, n|W_i|)` contain the Gerschgorin disks of the companion-like
//! matrix `diag(z) - W 1^T`, so pairwise disjointness certifies one root each.

use num_rational::BigRational;
use num_traits::Zero;

use super::{squarefree_part, Poly};
use crate::arith::{sqrt_upper, AlgebraicPoint, BigFloat, ComplexBall};
use crate::error::{Error, Result};
use crate::numeric::{roots_big, CBig};
use crate::scalar::ExactField;

/// Numerical roots of `f` (with multiplicity) at `bits` of precision.
pub fn approximate_roots<K: ExactField>(f: &Poly<K>, bits: u32) -> Vec<CBig> {
    if f.deg() == 0 {
        return Vec::new();
    }
    let coeffs = f.to_complex::<BigFloat>(bits + 16);
    roots_big(&coeffs, bits + 8).0
}

pub fn isolate_roots<K: ExactField>(f: &Poly<K>, cap: u32) -> Result<Vec<AlgebraicPoint<K>>> {
    isolate_roots_with(f, 64, cap)
}

/// Isolating disks for the distinct roots of `f`, starting at `bits`.
pub fn isolate_roots_with<K: ExactField>(f: &Poly<K>, bits: u32, cap: u32) -> Result<Vec<AlgebraicPoint<K>>> {
    assert!(!f.is_zero(), "isolating roots of zero");
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    let s = squarefree_part(f);
    let mut bits = bits.max(32);
    let mut out = Vec::new();
    let mut rest = s;
    loop {
        if rest.deg() == 0 {
            return Ok(out);
        }
        let approx = approximate_roots(&rest, bits);
        let mut remaining = Vec::new();
        for z in approx {
            if let Some(r) = K::reconstruct(&z, bits.saturating_sub(12)) {
                if rest.deg() > 0 && rest.eval(&r).is_zero() {
                    rest = rest.divrem(&Poly::linear_root(r.clone())).0;
                    out.push(AlgebraicPoint::rational(r));
                    continue;
                }
            }
            remaining.push(z);
        }
        if rest.deg() == 0 {
            return Ok(out);
        }
        if remaining.len() == rest.deg() {
            let centers: Vec<K> = remaining.iter().map(|z| K::round_from_complex(z, bits)).collect();
            if let Some(balls) = certify_disks(&rest, &centers) {
                for b in balls {
                    out.push(AlgebraicPoint::finite_unchecked(rest.clone(), b));
                }
                return Ok(out);
            }
        }
        bits *= 2;
        if bits > cap {
            return Err(Error::PrecisionCap(cap));
        }
    }
}

/// Disks `D(z_i, n|W_i|)` if pairwise disjoint.
pub fn certify_disks<K: ExactField>(f: &Poly<K>, z: &[K]) -> Option<Vec<ComplexBall<K>>> {
    let n = f.deg();
    if z.len() != n || n == 0 {
        return None;
    }
    let lc = f.lc();
    let mut balls = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                let d = z[i].clone() - &z[j];
                if d.is_zero() {
                    return None;
                }
                den = den * d;
            }
        }
        let w = f.eval(&z[i]) / den;
        let r = sqrt_upper(&w.norm()) * BigRational::from_integer((n as i64).into());
        balls.push(ComplexBall::new(z[i].clone(), r));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !balls[i].disjoint(&balls[j]) {
                return None;
            }
        }
    }
    if n == 1 {
        // a single disk always holds the root; tighten to the exact value
        let root = -f.coeff(0) / f.coeff(1);
        return Some(vec![ComplexBall::new(root, BigRational::zero())]);
    }
    Some(balls)
}
