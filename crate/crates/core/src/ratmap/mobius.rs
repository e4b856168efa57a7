
use super::{Pt, RatMap};
use crate::poly::Poly;
use crate::scalar::ExactField;

/// `(a z + b)/(c z + d)`, scaled so that `c = 1`, or `d = 1` when `c = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mobius<K> {
    a: K,
    b: K,
    c: K,
    d: K,
}

fn hom<K: ExactField>(p: &Pt<K>) -> (K, K) {
    match p {
        Some(x) => (x.clone(), K::one()),
        None => (K::one(), K::zero()),
    }
}

impl<K: ExactField> Mobius<K> {
    pub fn new(a: K, b: K, c: K, d: K) -> Option<Self> {
        if (a.clone() * &d - b.clone() * &c).is_zero() {
            return None;
        }
        let s = if c.is_zero() { d.inv() } else { c.inv() };
        Some(Mobius { a: a * &s, b: b * &s, c: c * &s, d: d * &s })
    }

    pub fn identity() -> Self {
        Mobius { a: K::one(), b: K::zero(), c: K::zero(), d: K::one() }
    }

    pub fn translation(t: K) -> Self {
        Mobius { a: K::one(), b: t, c: K::zero(), d: K::one() }
    }

    pub fn coeffs(&self) -> [&K; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Mobius::identity()
    }

    pub fn apply(&self, z: &Pt<K>) -> Pt<K> {
        let (x, y) = hom(z);
        let num = self.a.clone() * &x + self.b.clone() * &y;
        let den = self.c.clone() * &x + self.d.clone() * &y;
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius<K>) -> Mobius<K> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&inner.a, &inner.b, &inner.c, &inner.d);
        Mobius::new(
            a.clone() * e + b.clone() * g,
            a.clone() * f + b.clone() * h,
            c.clone() * e + d.clone() * g,
            c.clone() * f + d.clone() * h,
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> Mobius<K> {
        Mobius::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone()).expect("invertible")
    }

    pub fn to_map(&self) -> RatMap<K> {
        RatMap::new(
            Poly::new(vec![self.b.clone(), self.a.clone()]),
            Poly::new(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("degree one")
    }

    /// The map sending `p0, p1, p2` to `0, infinity, 1`.
    pub fn normalizing(p: &[Pt<K>; 3]) -> Option<Self> {
        let (x1, y1) = hom(&p[0]);
        let (x2, y2) = hom(&p[1]);
        let (x3, y3) = hom(&p[2]);
        let br = |ax: &K, ay: &K, bx: &K, by: &K| ax.clone() * by - ay.clone() * bx;
        let n3 = br(&x3, &y3, &x1, &y1);
        let d3 = br(&x3, &y3, &x2, &y2);
        if n3.is_zero() || d3.is_zero() {
            return None;
        }
        let k = d3 / n3;
        Mobius::new(y1.clone() * &k, -(x1 * &k), y2, -x2)
    }

    /// The unique map with `src[i] -> dst[i]`, if both triples are distinct.
    pub fn from_three(src: &[Pt<K>; 3], dst: &[Pt<K>; 3]) -> Option<Self> {
        let ls = Mobius::normalizing(src)?;
        let ld = Mobius::normalizing(dst)?;
        Some(ld.inverse().compose(&ls))
    }

    pub fn conj_map(&self, a: &RatMap<K>) -> RatMap<K> {
        // self ∘ a ∘ self^-1
        self.to_map().compose(&a.compose(&self.inverse().to_map()))
    }
}

impl<K: ExactField> RatMap<K> {
    pub fn pre_mobius(&self, m: &Mobius<K>) -> RatMap<K> {
        self.compose(&m.to_map())
    }

    pub fn post_mobius(&self, m: &Mobius<K>) -> RatMap<K> {
        m.to_map().compose(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::scalar::Ring;

    type G = QuadRat<1>;

    fn g(n: i64) -> G {
        G::from_int(n)
    }

    #[test]
    fn three_point_interpolation_handles_infinity() {
        let src = [Some(g(0)), None, Some(g(1))];
        let dst = [Some(g(2)), Some(g(3)), None];
        let m = Mobius::from_three(&src, &dst).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert_eq!(m.apply(s), *d);
        }
        assert!(Mobius::from_three(&[Some(g(0)), Some(g(0)), None], &dst).is_none());
    }

    #[test]
    fn inverse_and_composition() {
        let m = Mobius::new(g(1), g(2), g(3), g(5)).unwrap();
        assert!(m.compose(&m.inverse()).is_identity());
        assert_eq!(m.apply(&Some(g(-2))), Some(g(0)));
        assert_eq!(m.apply(&None), Some(G::from_frac(1, 3)));
        assert_eq!(m.to_map().to_mobius().unwrap(), m);
    }
}
