//! Ramification portraits, computed exactly.
//!
//! Write the Wronskian as `W = prod w_k^k`. The finite points of local degree
//! `k + 1` are the roots of `w_k` (poles of order `e` are roots of `W` of
//! order `e - 1`), and the local degree at infinity is `2m - 1 - deg W`.
//! The number of critical points of local degree `k + 1` over a finite value
//! `v` is the multiplicity of `v` as a root of `Res_z(w_k', P - tQ)`, where
//! `w_k'` drops the poles.

use serde::Serialize;

use super::{PointSet, RatMap};
use crate::arith::AlgebraicPoint;
use crate::error::Result;
use crate::poly::{gcd_free_basis, multiplicity, resultant_bivariate, squarefree_decomposition, Poly};
use crate::scalar::ExactField;

/// Critical points grouped by local degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalData<K> {
    /// `(w_k, k + 1)` for each nonconstant `w_k`.
    pub finite: Vec<(Poly<K>, u32)>,
    pub local_degree_at_infinity: u32,
}

impl<K: ExactField> CriticalData<K> {
    pub fn of(a: &RatMap<K>) -> Self {
        let m = a.degree();
        let w = a.wronskian();
        let finite = squarefree_decomposition(&w).into_iter().map(|(f, k)| (f, k + 1)).collect();
        let e = (2 * m - 1 - w.deg()) as u32;
        CriticalData { finite, local_degree_at_infinity: e }
    }

    /// Critical points as point sets with their local degrees.
    pub fn sets(&self) -> Vec<(PointSet<K>, u32)> {
        let mut out: Vec<(PointSet<K>, u32)> =
            self.finite.iter().map(|(f, e)| (PointSet::from_poly(f, false), *e)).collect();
        if self.local_degree_at_infinity > 1 {
            out.push((PointSet::infinity(), self.local_degree_at_infinity));
        }
        out
    }

    /// All critical points.
    pub fn support(&self) -> PointSet<K> {
        self.sets().iter().fold(PointSet::empty(), |acc, (s, _)| acc.union(s))
    }

    /// Local degree on a piece that is either inside one critical set or
    /// disjoint from all of them.
    pub fn local_degree_on(&self, piece: &PointSet<K>) -> u32 {
        for (s, e) in self.sets() {
            if !piece.is_disjoint(&s) {
                return e;
            }
        }
        1
    }
}

/// A set of critical values sharing one multiplicity collection.
#[derive(Clone, Debug, PartialEq)]
pub struct PortraitClass<K> {
    pub values: PointSet<K>,
    /// Local degrees over each value, descending, summing to `m`.
    pub collection: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitPoint {
    pub value: String,
    pub approx: Option<[f64; 2]>,
    pub collection: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Portrait<K> {
    pub degree: usize,
    pub classes: Vec<PortraitClass<K>>,
}

fn finish(mut c: Vec<u32>, m: usize) -> Vec<u32> {
    let s: u32 = c.iter().sum();
    for _ in s as usize..m {
        c.push(1);
    }
    c.sort_unstable_by(|a, b| b.cmp(a));
    c
}

impl<K: ExactField> Portrait<K> {
    pub fn of(a: &RatMap<K>) -> Self {
        let m = a.degree();
        let crit = CriticalData::of(a);
        let pencil = a.pencil();
        // values of non-pole critical points, one resultant per local degree
        let mut per_degree: Vec<(Poly<K>, u32)> = Vec::new();
        let mut at_inf: Vec<u32> = Vec::new();
        for (w, e) in &crit.finite {
            let poles = w.gcd(a.q());
            for _ in 0..poles.deg() {
                at_inf.push(*e);
            }
            let rest = w.divrem(&poles).0;
            if rest.deg() > 0 {
                let lifted: Poly<Poly<K>> = rest.map_coeffs(|c| Poly::constant(c.clone()));
                per_degree.push((resultant_bivariate(&lifted, &pencil), *e));
            }
        }
        let e_inf = crit.local_degree_at_infinity;
        let a_inf = a.at_infinity();
        let inf_val = if e_inf > 1 { a_inf.clone() } else { None };
        let mut inputs: Vec<Poly<K>> = per_degree.iter().map(|(r, _)| r.clone()).collect();
        if let Some(v) = &inf_val {
            inputs.push(Poly::linear_root(v.clone()));
        }
        let mut classes = Vec::new();
        for b in gcd_free_basis(&inputs) {
            let mut c = Vec::new();
            for (r, e) in &per_degree {
                for _ in 0..multiplicity(r, &b) {
                    c.push(*e);
                }
            }
            if let Some(v) = &inf_val {
                if b.eval(v).is_zero() {
                    c.push(e_inf);
                }
            }
            classes.push(PortraitClass { values: PointSet::from_poly(&b, false), collection: finish(c, m) });
        }
        if e_inf > 1 && a_inf.is_none() {
            at_inf.push(e_inf);
        }
        if !at_inf.is_empty() {
            classes.push(PortraitClass { values: PointSet::infinity(), collection: finish(at_inf, m) });
        }
        // merge classes with equal collections so the result is canonical
        let mut merged: Vec<PortraitClass<K>> = Vec::new();
        for c in classes {
            if let Some(x) = merged.iter_mut().find(|x| x.collection == c.collection) {
                x.values = x.values.union(&c.values);
            } else {
                merged.push(c);
            }
        }
        merged.sort_by(|x, y| y.collection.cmp(&x.collection));
        Portrait { degree: m, classes: merged }
    }

    /// Critical values `V(A)`.
    pub fn values(&self) -> PointSet<K> {
        self.classes.iter().fold(PointSet::empty(), |acc, c| acc.union(&c.values))
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.values.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Collection over the values of `piece`, which must lie inside one class
    /// or be disjoint from all of them (then the collection is all ones).
    pub fn collection_on(&self, piece: &PointSet<K>) -> Vec<u32> {
        for c in &self.classes {
            if !piece.is_disjoint(&c.values) {
                return c.collection.clone();
            }
        }
        vec![1; self.degree]
    }

    /// `sum (m - #collection) = 2m - 2`.
    pub fn riemann_hurwitz_defect(&self) -> usize {
        self.classes.iter().map(|c| c.values.len() * (self.degree - c.collection.len())).sum()
    }

    pub fn is_simple(&self) -> bool {
        let m = self.degree;
        if m < 2 {
            return false;
        }
        self.len() == 2 * m - 2
            && self.classes.iter().all(|c| c.collection.len() == m - 1 && c.collection[0] == 2)
    }

    /// Individual points with their collections.
    pub fn points(&self, cap: u32) -> Result<Vec<(AlgebraicPoint<K>, Vec<u32>)>> {
        let mut out = Vec::new();
        for c in &self.classes {
            for p in c.values.points(cap)? {
                out.push((p, c.collection.clone()));
            }
        }
        Ok(out)
    }

    pub fn describe(&self, cap: u32) -> Result<Vec<PortraitPoint>> {
        Ok(self
            .points(cap)?
            .into_iter()
            .map(|(p, c)| PortraitPoint { value: describe_point(&p), approx: p.approx().map(|z| [z.re, z.im]), collection: c })
            .collect())
    }
}

/// Text for a point: the exact value, `infinity`, or `root of f near z`.
pub fn describe_point<K: ExactField>(p: &AlgebraicPoint<K>) -> String {
    match p {
        AlgebraicPoint::Infinity => "infinity".to_string(),
        _ => match p.exact_value() {
            Some(v) => v.to_string(),
            None => {
                let z = p.approx().unwrap();
                format!("root of {} near {:.6}{:+.6}i", crate::expr::poly_to_string(p.factor().unwrap(), "t"), z.re, z.im)
            }
        },
    }
}

impl<K: ExactField> RatMap<K> {
    pub fn portrait(&self) -> Portrait<K> {
        Portrait::of(self)
    }

    pub fn critical_data(&self) -> CriticalData<K> {
        CriticalData::of(self)
    }

    pub fn is_simple(&self) -> bool {
        self.degree() >= 2 && self.portrait().is_simple()
    }
}

impl<K: ExactField> Default for PointSet<K> {
    fn default() -> Self {
        PointSet::empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use num_traits::Zero;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn p(cs: &[i64]) -> P {
        P::from_ints(cs)
    }

    fn map(n: &[i64], d: &[i64]) -> RatMap<G> {
        RatMap::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn power_map() {
        let pt = map(&[0, 0, 1], &[1]).portrait();
        assert_eq!(pt.len(), 2);
        assert!(pt.values().contains(&None) && pt.values().contains(&Some(G::zero())));
        assert!(pt.classes.iter().all(|c| c.collection == vec![2]));
        let cube = map(&[0, 0, 0, 1], &[1]);
        assert!(!cube.is_simple());
        assert_eq!(cube.portrait().classes[0].collection, vec![3]);
    }

    #[test]
    fn joukowski() {
        let pt = map(&[1, 0, 1], &[0, 1]).portrait();
        assert_eq!(pt.classes.len(), 1);
        assert_eq!(pt.classes[0].values, PointSet::from_poly(&p(&[-4, 0, 1]), false));
        assert_eq!(pt.classes[0].collection, vec![2]);
        assert!(pt.is_simple());
    }

    #[test]
    fn simple_cubic() {
        let a = map(&[1, 0, 0, 1], &[0, 1]);
        let pt = a.portrait();
        assert_eq!(pt.len(), 4);
        assert!(pt.values().contains(&None));
        // finite critical values are roots of 4 t^3 - 27 (t = 3/(2 zeta), 2 zeta^3 = 1)
        assert_eq!(pt.values().finite_part(), &p(&[-27, 0, 0, 4]).monic());
        assert!(pt.classes.iter().all(|c| c.collection == vec![2, 1]));
        assert!(a.is_simple());
        assert_eq!(pt.riemann_hurwitz_defect(), 4);
    }

    #[test]
    fn pole_of_order_two() {
        // 1/z^2 + z : double pole at 0
        let a = map(&[1, 0, 0, 1], &[0, 0, 1]);
        let pt = a.portrait();
        assert_eq!(pt.riemann_hurwitz_defect(), 4);
        let over_inf = pt.collection_on(&PointSet::infinity());
        assert_eq!(over_inf, vec![2, 1]);
    }
}
