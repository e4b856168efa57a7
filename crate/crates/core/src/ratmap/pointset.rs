//! Finite subsets of the projective line described exactly: a monic
//! squarefree polynomial for the finite part plus a flag for infinity.

use num_traits::{One, Zero};

use super::{Pt, RatMap};
use crate::arith::AlgebraicPoint;
use crate::error::Result;
use crate::poly::{gcd_free_basis, isolate_roots, resultant_bivariate, squarefree_part, Poly};
use crate::scalar::ExactField;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointSet<K> {
    fin: Poly<K>,
    inf: bool,
}

impl<K: ExactField> PointSet<K> {
    pub fn empty() -> Self {
        PointSet { fin: Poly::one(), inf: false }
    }

    pub fn infinity() -> Self {
        PointSet { fin: Poly::one(), inf: true }
    }

    /// Roots of `f` (and infinity if `inf`).
    pub fn from_poly(f: &Poly<K>, inf: bool) -> Self {
        let fin = if f.is_zero() { panic!("point set of the zero polynomial") } else { squarefree_part(f) };
        PointSet { fin, inf }
    }

    pub fn point(z: &Pt<K>) -> Self {
        match z {
            None => PointSet::infinity(),
            Some(v) => PointSet { fin: Poly::linear_root(v.clone()), inf: false },
        }
    }

    pub fn finite_part(&self) -> &Poly<K> {
        &self.fin
    }

    pub fn has_infinity(&self) -> bool {
        self.inf
    }

    pub fn len(&self) -> usize {
        self.fin.deg() + usize::from(self.inf)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, z: &Pt<K>) -> bool {
        match z {
            None => self.inf,
            Some(v) => self.fin.deg() > 0 && self.fin.eval(v).is_zero(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        PointSet { fin: self.fin.lcm(&other.fin), inf: self.inf || other.inf }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        PointSet { fin: self.fin.gcd(&other.fin), inf: self.inf && other.inf }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let g = self.fin.gcd(&other.fin);
        PointSet { fin: self.fin.divrem(&g).0.monic(), inf: self.inf && !other.inf }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// `A(S)`.
    pub fn image(&self, a: &RatMap<K>) -> Self {
        let mut out = PointSet::empty();
        if self.inf {
            out = out.union(&PointSet::point(&a.at_infinity()));
        }
        if self.fin.deg() == 0 {
            return out;
        }
        let poles = self.fin.gcd(a.q());
        if poles.deg() > 0 {
            out.inf = true;
        }
        let rest = self.fin.divrem(&poles).0;
        if rest.deg() > 0 {
            let lifted: Poly<Poly<K>> = rest.map_coeffs(|c| Poly::constant(c.clone()));
            let r = resultant_bivariate(&lifted, &a.pencil());
            out = out.union(&PointSet::from_poly(&r, false));
        }
        out
    }

    /// `A^-1(S)`.
    pub fn preimage(&self, a: &RatMap<K>) -> Self {
        let mut out = PointSet::empty();
        if self.inf {
            out = PointSet::from_poly(a.q(), a.at_infinity().is_none());
        }
        if self.fin.deg() > 0 {
            let d = self.fin.deg();
            let mut acc = Poly::zero();
            for k in 0..=d {
                let term = a.p().pow_u(k as u32) * &a.q().pow_u((d - k) as u32);
                acc = acc + term.scale(&self.fin.coeff(k));
            }
            let inf_hit = a.at_infinity().map_or(false, |v| self.fin.eval(&v).is_zero());
            out = out.union(&PointSet::from_poly(&acc, inf_hit));
        }
        out
    }

    /// Isolated points, infinity last.
    pub fn points(&self, cap: u32) -> Result<Vec<AlgebraicPoint<K>>> {
        let mut pts = isolate_roots(&self.fin, cap)?;
        if self.inf {
            pts.push(AlgebraicPoint::Infinity);
        }
        Ok(pts)
    }

    /// The common refinement of several sets: pairwise disjoint nonempty
    /// pieces such that every input is a union of pieces.
    pub fn atoms(sets: &[PointSet<K>]) -> Vec<PointSet<K>> {
        let fins: Vec<Poly<K>> = sets.iter().map(|s| s.fin.clone()).collect();
        let mut out: Vec<PointSet<K>> =
            gcd_free_basis(&fins).into_iter().map(|b| PointSet { fin: b, inf: false }).collect();
        if sets.iter().any(|s| s.inf) {
            out.push(PointSet::infinity());
        }
        out
    }
}
