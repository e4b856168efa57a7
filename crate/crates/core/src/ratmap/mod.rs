//! Rational maps of the Riemann sphere with exact coefficients.

mod fiber;
mod mobius;
mod pointset;
mod portrait;

pub use fiber::{fiber, FiberPoint};
pub use mobius::Mobius;
pub use pointset::PointSet;
pub use portrait::{describe_point, CriticalData, Portrait, PortraitClass, PortraitPoint};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{resultant_formal_bivariate, Poly};
use crate::scalar::{ExactField, Real};

/// Point of the projective line over `K`; `None` is infinity.
pub type Pt<K> = Option<K>;

/// `P/Q` with `gcd(P, Q) = 1` and `Q` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMap<K> {
    p: Poly<K>,
    q: Poly<K>,
}

impl<K: ExactField> RatMap<K> {
    pub fn new(p: Poly<K>, q: Poly<K>) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DegenerateMap("zero denominator".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = if g.deg() > 0 { (p.divrem(&g).0, q.divrem(&g).0) } else { (p, q) };
        let l = q.lc().inv();
        p = p.scale(&l);
        q = q.scale(&l);
        let m = RatMap { p, q };
        if m.degree() == 0 {
            return Err(Error::DegenerateMap("constant map".into()));
        }
        Ok(m)
    }

    pub fn polynomial(p: Poly<K>) -> Result<Self> {
        RatMap::new(p, Poly::one())
    }

    pub fn identity() -> Self {
        RatMap { p: Poly::x(), q: Poly::one() }
    }

    pub fn p(&self) -> &Poly<K> {
        &self.p
    }

    pub fn q(&self) -> &Poly<K> {
        &self.q
    }

    pub fn degree(&self) -> usize {
        if self.p.is_zero() {
            return self.q.deg();
        }
        self.p.deg().max(self.q.deg())
    }

    pub fn is_polynomial(&self) -> bool {
        self.q.deg() == 0
    }

    pub fn is_identity(&self) -> bool {
        *self == RatMap::identity()
    }

    /// `a(infinity)`.
    pub fn at_infinity(&self) -> Pt<K> {
        let (dp, dq) = (self.p.deg(), self.q.deg());
        if self.p.is_zero() || dp < dq {
            Some(K::zero())
        } else if dp > dq {
            None
        } else {
            Some(self.p.lc() / self.q.lc())
        }
    }

    pub fn eval(&self, z: &Pt<K>) -> Pt<K> {
        match z {
            None => self.at_infinity(),
            Some(z) => {
                let d = self.q.eval(z);
                if d.is_zero() {
                    None
                } else {
                    Some(self.p.eval(z) / d)
                }
            }
        }
    }

    /// Numerical evaluation; `None` at a pole.
    pub fn eval_complex<T: Real>(&self, z: &Complex<T>, bits: u32) -> Option<Complex<T>> {
        let (pz, _) = crate::poly::eval_complex(&self.p.to_complex::<T>(bits), z);
        let (qz, _) = crate::poly::eval_complex(&self.q.to_complex::<T>(bits), z);
        if qz.is_zero() {
            None
        } else {
            Some(pz / qz)
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RatMap<K>) -> RatMap<K> {
        let m = self.degree();
        let n = self.p.compose_homogeneous(&inner.p, &inner.q, m);
        let d = self.q.compose_homogeneous(&inner.p, &inner.q, m);
        RatMap::new(n, d).expect("composition of nonconstant maps is nonconstant")
    }

    pub fn iterate(&self, n: u32, cfg: &Config) -> Result<RatMap<K>> {
        if n == 0 {
            return Err(Error::InvalidArgument("iterate count must be at least 1".into()));
        }
        let deg = (self.degree() as u64).checked_pow(n).unwrap_or(u64::MAX);
        cfg.check_degree(deg)?;
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// `P'Q - PQ'`.
    pub fn wronskian(&self) -> Poly<K> {
        self.p.derivative() * &self.q - self.p.clone() * &self.q.derivative()
    }

    /// Whether the `z^(2m-2)` coefficient of the Wronskian vanishes.
    pub fn in_l(&self) -> bool {
        let m = self.degree();
        m == 0 || self.wronskian().deg() < 2 * m - 2 || self.wronskian().is_zero()
    }

    /// `P(z) - t Q(z)` as a polynomial in `z` with coefficients in `K[t]`.
    pub fn pencil(&self) -> Poly<Poly<K>> {
        let m = self.degree();
        Poly::new(
            (0..=m)
                .map(|k| Poly::new(vec![self.p.coeff(k), -self.q.coeff(k)]))
                .collect(),
        )
    }

    /// `Res_{2m-2,m,z}(W, P - tQ)` without the degeneracy check. On maps
    /// whose Wronskian drops degree the padding contributes `(a_m - t b_m)`
    /// factors, i.e. the critical value `a(infinity)` of a critical infinity.
    pub fn critical_resultant(&self) -> Poly<K> {
        let m = self.degree();
        let w = self.wronskian();
        let wl: Poly<Poly<K>> = w.map_coeffs(|c| Poly::constant(c.clone()));
        let pen = self.pencil();
        let df = 2 * m - 2;
        resultant_formal_bivariate(&wl, &pen, df, m)
    }

    /// The polynomial whose roots are the finite critical values.
    pub fn critical_value_poly(&self) -> Result<Poly<K>> {
        if self.in_l() {
            return Err(Error::DegenerateAtInfinity);
        }
        Ok(self.critical_resultant())
    }

    pub fn is_mobius(&self) -> bool {
        self.degree() == 1
    }

    pub fn to_mobius(&self) -> Option<Mobius<K>> {
        if !self.is_mobius() {
            return None;
        }
        Mobius::new(self.p.coeff(1), self.p.coeff(0), self.q.coeff(1), self.q.coeff(0))
    }

    /// Coefficients `(a, b, c, d, e, f)` of `(a z^2 + b z + c)/(d z^2 + e z + f)`.
    pub fn quadratic_coeffs(&self) -> Option<[K; 6]> {
        if self.degree() != 2 {
            return None;
        }
        Some([
            self.p.coeff(2),
            self.p.coeff(1),
            self.p.coeff(0),
            self.q.coeff(2),
            self.q.coeff(1),
            self.q.coeff(0),
        ])
    }

    /// Finite fixed points: roots of `P - zQ`; infinity is fixed when `deg P > deg Q`.
    pub fn fixed_point_poly(&self) -> Poly<K> {
        self.p.clone() - self.q.clone() * &Poly::x()
    }

    pub fn fixes_infinity(&self) -> bool {
        self.at_infinity().is_none()
    }

    /// Derivative `A'(z)` at a finite non-pole point.
    pub fn derivative_at(&self, z: &K) -> Option<K> {
        let qz = self.q.eval(z);
        if qz.is_zero() {
            return None;
        }
        Some(self.wronskian().eval(z) / (qz.clone() * &qz))
    }
}

/// Coordinate change `z -> 1/z` conjugate `1/A(1/z)`.
pub fn invert_chart<K: ExactField>(a: &RatMap<K>) -> RatMap<K> {
    let m = a.degree();
    let rev = |f: &Poly<K>| {
        let mut c: Vec<K> = (0..=m).map(|k| f.coeff(k)).collect();
        c.reverse();
        Poly::new(c)
    };
    RatMap::new(rev(a.q()), rev(a.p())).expect("chart change preserves degree")
}

/// Multiplier of a fixed point (`None` for infinity handled by the chart change).
pub fn multiplier<K: ExactField>(a: &RatMap<K>, z: &Pt<K>) -> Option<K> {
    match z {
        Some(z) => a.derivative_at(z),
        None => invert_chart(a).derivative_at(&K::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::scalar::Ring;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn p(cs: &[i64]) -> P {
        P::from_ints(cs)
    }

    fn map(n: &[i64], d: &[i64]) -> RatMap<G> {
        RatMap::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn composition_examples() {
        let sq = map(&[0, 0, 1], &[1]);
        let shift = map(&[1, 1], &[1]);
        assert_eq!(sq.compose(&shift), map(&[1, 2, 1], &[1]));
        let a = map(&[1, 0, 1], &[0, 1]);
        let aa = a.compose(&a);
        assert_eq!(aa, map(&[1, 0, 3, 0, 1], &[0, 1, 0, 1]));
        assert_eq!(aa.degree(), 4);
        assert_eq!(a.compose(&RatMap::identity()), a);
    }

    #[test]
    fn iterate_examples() {
        let cfg = Config::default();
        assert_eq!(map(&[0, 0, 1], &[1]).iterate(3, &cfg).unwrap(), map(&[0, 0, 0, 0, 0, 0, 0, 0, 1], &[1]));
        let a = map(&[1, 0, 1], &[0, 1]);
        assert_eq!(a.iterate(2, &cfg).unwrap(), map(&[1, 0, 3, 0, 1], &[0, 1, 0, 1]));
        let mu = map(&[1, 2], &[3, 1]);
        assert_eq!(mu.iterate(5, &cfg).unwrap().degree(), 1);
        let err = map(&[0, 0, 1], &[1]).iterate(9, &cfg).unwrap_err();
        assert_eq!(err.code(), "OVERFLOW_GUARD");
    }

    #[test]
    fn wronskian_examples() {
        assert_eq!(map(&[0, 0, 1], &[1]).wronskian(), p(&[0, 2]));
        assert_eq!(map(&[1, 0, 1], &[0, 1]).wronskian(), p(&[-1, 0, 1]));
        assert_eq!(map(&[5, 2], &[3, 1]).wronskian(), p(&[1]));
        assert!(map(&[0, 0, 1], &[1]).in_l());
    }

    #[test]
    fn critical_value_poly_examples() {
        let a = map(&[1, 0, 1], &[0, 1]);
        assert_eq!(a.critical_value_poly().unwrap(), p(&[4, 0, -1]));
        assert_eq!(map(&[0, 0, 1], &[1]).critical_value_poly(), Err(Error::DegenerateAtInfinity));
        let mu = map(&[5, 2], &[3, 1]);
        assert_eq!(mu.critical_value_poly().unwrap().deg(), 0);
    }

    #[test]
    fn constant_quotient_is_degenerate() {
        assert!(RatMap::new(p(&[-1, 0, 1]), p(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn multipliers_of_squaring() {
        let sq = map(&[0, 0, 1], &[1]);
        assert_eq!(multiplier(&sq, &Some(G::zero())), Some(G::zero()));
        assert_eq!(multiplier(&sq, &Some(G::one())), Some(G::from_int(2)));
        assert_eq!(multiplier(&sq, &None), Some(G::zero()));
    }
}
