//! Points of the projective line given by a defining factor and an
//! isolating ball, or the marker at infinity.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{sqrt_upper, ComplexBall};
use crate::error::{Error, Result};
use crate::poly::{isolate_roots_with, squarefree_part, Poly};
use crate::scalar::{round_dyadic, ExactField};

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraicPoint<K> {
    Infinity,
    Finite { factor: Poly<K>, ball: ComplexBall<K> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Distinct {
    Yes,
    No,
    Indeterminate,
}

impl<K: ExactField> AlgebraicPoint<K> {
    pub fn rational(r: K) -> Self {
        AlgebraicPoint::Finite { factor: Poly::linear_root(r.clone()), ball: ComplexBall::exact(r) }
    }

    /// Caller guarantees `ball` holds exactly one root of the squarefree `factor`.
    pub fn finite_unchecked(factor: Poly<K>, ball: ComplexBall<K>) -> Self {
        AlgebraicPoint::Finite { factor, ball }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, AlgebraicPoint::Infinity)
    }

    pub fn factor(&self) -> Option<&Poly<K>> {
        match self {
            AlgebraicPoint::Finite { factor, .. } => Some(factor),
            AlgebraicPoint::Infinity => None,
        }
    }

    pub fn ball(&self) -> Option<&ComplexBall<K>> {
        match self {
            AlgebraicPoint::Finite { ball, .. } => Some(ball),
            AlgebraicPoint::Infinity => None,
        }
    }

    /// The point as a field element when it is one.
    pub fn exact_value(&self) -> Option<K> {
        match self {
            AlgebraicPoint::Infinity => None,
            AlgebraicPoint::Finite { factor, ball } => {
                if factor.deg() == 1 {
                    Some(-factor.coeff(0) / factor.coeff(1))
                } else if ball.is_exact() && factor.eval(&ball.center).is_zero() {
                    Some(ball.center.clone())
                } else {
                    None
                }
            }
        }
    }

    pub fn approx(&self) -> Option<Complex<f64>> {
        self.ball().map(|b| b.center_f64())
    }

    /// Shrink the isolating ball below `target` by certified Newton steps.
    pub fn refine(&self, target: &BigRational, cap: u32) -> Result<Self> {
        let AlgebraicPoint::Finite { factor, ball } = self else {
            return Err(Error::FiniteRequired);
        };
        if let Some(v) = self.exact_value() {
            return Ok(AlgebraicPoint::Finite { factor: factor.clone(), ball: ComplexBall::exact(v) });
        }
        if &ball.radius <= target {
            return Ok(self.clone());
        }
        let df = factor.derivative();
        let n = BigRational::from_integer(BigInt::from(factor.deg()));
        let need = target_bits(target);
        let mut bits = 64u32.max(need / 2);
        let mut cur = ball.clone();
        loop {
            let mut z = cur.center.clone();
            for _ in 0..8 {
                let d = df.eval(&z);
                if d.is_zero() {
                    break;
                }
                let step = factor.eval(&z) / d;
                z = round_elem(&(z - step), bits);
            }
            let fz = factor.eval(&z);
            let cand = if fz.is_zero() {
                ComplexBall::exact(z)
            } else {
                let d = df.eval(&z);
                if d.is_zero() {
                    ComplexBall::new(z, cur.radius.clone() * BigRational::from_integer(2.into()))
                } else {
                    ComplexBall::new(z, &n * sqrt_upper(&(fz / d).norm()))
                }
            };
            if cur.contains_ball(&cand) {
                cur = cand;
                if &cur.radius <= target {
                    return Ok(AlgebraicPoint::Finite { factor: factor.clone(), ball: cur });
                }
                bits = bits.max(target_bits(&cur.radius) * 2);
            } else if let Some(b) = reisolate(factor, &cur, bits, cap)? {
                cur = b;
                if &cur.radius <= target {
                    return Ok(AlgebraicPoint::Finite { factor: factor.clone(), ball: cur });
                }
            }
            bits = bits.saturating_mul(2);
            if bits > cap.saturating_mul(2) {
                return Err(Error::PrecisionCap(cap));
            }
        }
    }

    /// Decide whether two points differ. Definite answers are proven.
    pub fn certainly_distinct(&self, other: &Self, cap: u32) -> Distinct {
        match (self, other) {
            (AlgebraicPoint::Infinity, AlgebraicPoint::Infinity) => return Distinct::No,
            (AlgebraicPoint::Infinity, _) | (_, AlgebraicPoint::Infinity) => return Distinct::Yes,
            _ => {}
        }
        let (fp, bp) = (self.factor().unwrap(), self.ball().unwrap());
        let (fq, bq) = (other.factor().unwrap(), other.ball().unwrap());
        if bp.disjoint(bq) {
            return Distinct::Yes;
        }
        if let (Some(a), Some(b)) = (self.exact_value(), other.exact_value()) {
            return if a == b { Distinct::No } else { Distinct::Yes };
        }
        if fp.is_coprime(fq) {
            return Distinct::Yes;
        }
        let h = squarefree_part(&fp.lcm(fq));
        let mut bits = 64u32;
        while bits <= cap {
            let Ok(roots) = isolate_roots_with(&h, bits, cap) else {
                return Distinct::Indeterminate;
            };
            let disks: Vec<ComplexBall<K>> = roots.iter().map(|r| r.ball().unwrap().clone()).collect();
            match (locate(self, &disks, cap), locate(other, &disks, cap)) {
                (Some(i), Some(j)) => return if i == j { Distinct::No } else { Distinct::Yes },
                _ => bits *= 2,
            }
        }
        Distinct::Indeterminate
    }

    /// Image under `z -> (a z + b)/(c z + d)`.
    pub fn mobius_image(&self, m: [&K; 4], cap: u32) -> Result<Self> {
        let [a, b, c, d] = m;
        let AlgebraicPoint::Finite { factor, .. } = self else {
            return Ok(if c.is_zero() {
                AlgebraicPoint::Infinity
            } else {
                AlgebraicPoint::rational(a.clone() / c)
            });
        };
        if let Some(v) = self.exact_value() {
            let den = c.clone() * &v + d;
            return Ok(if den.is_zero() {
                AlgebraicPoint::Infinity
            } else {
                AlgebraicPoint::rational((a.clone() * &v + b) / den)
            });
        }
        // roots of f(mu^-1(t)) are the images of the roots of f
        let num = Poly::new(vec![-b.clone(), d.clone()]);
        let den = Poly::new(vec![a.clone(), -c.clone()]);
        let g = factor.compose_homogeneous(&num, &den, factor.deg()).monic();
        let ab = ComplexBall::exact(a.clone());
        let bb = ComplexBall::exact(b.clone());
        let cb = ComplexBall::exact(c.clone());
        let db = ComplexBall::exact(d.clone());
        let mut pt = self.clone();
        let mut bits = 64u32;
        while bits <= cap {
            let roots = isolate_roots_with(&g, bits, cap)?;
            let z = pt.ball().unwrap();
            let image = ab.mul(z).add(&bb).div(&cb.mul(z).add(&db));
            if let Some(img) = image {
                let hits: Vec<&AlgebraicPoint<K>> =
                    roots.iter().filter(|r| r.ball().unwrap().overlaps(&img)).collect();
                if hits.len() == 1 {
                    return Ok(AlgebraicPoint::Finite { factor: g, ball: hits[0].ball().unwrap().clone() });
                }
            }
            let target = &z.radius / BigRational::from_integer(BigInt::from(1u64 << 16));
            pt = pt.refine(&target, cap)?;
            bits *= 2;
        }
        Err(Error::PrecisionCap(cap))
    }
}

/// Index of the unique disk meeting the point's ball, refining as needed.
fn locate<K: ExactField>(p: &AlgebraicPoint<K>, disks: &[ComplexBall<K>], cap: u32) -> Option<usize> {
    let mut pt = p.clone();
    for _ in 0..64 {
        let b = pt.ball()?;
        let hits: Vec<usize> = (0..disks.len()).filter(|&i| disks[i].overlaps(b)).collect();
        if hits.len() == 1 {
            return Some(hits[0]);
        }
        if hits.is_empty() {
            return None;
        }
        let mut gap = b.radius.clone();
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                let d = sqrt_upper(&(disks[i].center.clone() - &disks[j].center).norm())
                    - &disks[i].radius
                    - &disks[j].radius;
                if d.is_positive() && d < gap {
                    gap = d;
                }
            }
        }
        let target = gap / BigRational::from_integer(4.into());
        pt = pt.refine(&target, cap).ok()?;
    }
    None
}

fn target_bits(r: &BigRational) -> u32 {
    if r.is_zero() {
        return 64;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    ((db - nb).max(0) + 16) as u32
}

fn round_elem<K: ExactField>(z: &K, bits: u32) -> K {
    let (a, b) = z.parts();
    K::from_parts(round_dyadic(a, bits), round_dyadic(b, bits))
}

/// Fresh isolation of all roots; returns the disk inside `cur`.
fn reisolate<K: ExactField>(f: &Poly<K>, cur: &ComplexBall<K>, bits: u32, cap: u32) -> Result<Option<ComplexBall<K>>> {
    if bits > cap {
        return Err(Error::PrecisionCap(cap));
    }
    let roots = isolate_roots_with(f, bits, cap)?;
    Ok(roots
        .into_iter()
        .filter_map(|r| r.ball().cloned())
        .find(|b| cur.contains_ball(b) && b.radius < cur.radius))
}

impl<K: ExactField> AlgebraicPoint<K> {
    /// Point for a value known to be a root of `f` within `ball` (used by tests
    /// and fixtures); returns `None` when the ball does not isolate it.
    pub fn from_ball(f: &Poly<K>, ball: ComplexBall<K>, cap: u32) -> Option<Self> {
        let s = squarefree_part(f);
        let roots = isolate_roots_with(&s, 64, cap).ok()?;
        let hits: Vec<_> = roots.into_iter().filter(|r| r.ball().unwrap().overlaps(&ball)).collect();
        if hits.len() == 1 {
            Some(hits.into_iter().next().unwrap())
        } else {
            None
        }
    }

    pub fn one() -> Self {
        AlgebraicPoint::rational(K::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::arith::QuadRat;
    use crate::poly::isolate_roots;
    use crate::scalar::Ring;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn sqrt2_points() -> Vec<AlgebraicPoint<G>> {
        let mut pts = isolate_roots(&P::from_ints(&[-2, 0, 1]), 4096).unwrap();
        pts.sort_by(|a, b| a.approx().unwrap().re.partial_cmp(&b.approx().unwrap().re).unwrap());
        pts
    }

    #[test]
    fn refine_sqrt2_to_tiny_radius() {
        let p = sqrt2_points().pop().unwrap();
        let target = BigRational::new(1.into(), BigInt::from(10).pow(30));
        let r = p.refine(&target, 8192).unwrap();
        let b = r.ball().unwrap();
        assert!(b.radius <= target);
        // the ball brackets sqrt(2): squares of its real extremes straddle 2
        let c = b.center.re().clone();
        let lo = &c - &b.radius;
        let hi = &c + &b.radius;
        let two = BigRational::from_integer(2.into());
        assert!(&lo * &lo <= two && &hi * &hi >= two);
    }

    #[test]
    fn refine_infinity_is_an_error() {
        let p: AlgebraicPoint<G> = AlgebraicPoint::Infinity;
        assert_eq!(p.refine(&BigRational::one(), 1024), Err(Error::FiniteRequired));
    }

    #[test]
    fn rational_root_refines_to_exact_zero_ball() {
        let p = AlgebraicPoint::finite_unchecked(
            P::from_ints(&[0, 1]),
            ComplexBall::new(G::from_frac(1, 100), BigRational::new(1.into(), 10.into())),
        );
        let r = p.refine(&BigRational::new(1.into(), BigInt::from(10).pow(10)), 1024).unwrap();
        assert!(r.ball().unwrap().is_exact());
        assert_eq!(r.exact_value(), Some(G::zero()));
    }

    #[test]
    fn distinctness_verdicts() {
        let pts = sqrt2_points();
        assert_eq!(pts[0].certainly_distinct(&pts[1], 4096), Distinct::Yes);
        assert_eq!(pts[1].certainly_distinct(&pts[0], 4096), Distinct::Yes);
        let two = AlgebraicPoint::rational(G::from_int(2));
        assert_eq!(two.certainly_distinct(&two.clone(), 4096), Distinct::No);
        let zero = AlgebraicPoint::rational(G::zero());
        assert_eq!(AlgebraicPoint::Infinity.certainly_distinct(&zero, 4096), Distinct::Yes);
        // same root described by two different factors
        let f = P::from_ints(&[-2, 0, 1]) * P::from_ints(&[1, 0, 1]);
        let alt = AlgebraicPoint::from_ball(&f, pts[1].ball().unwrap().clone(), 4096).unwrap();
        assert_eq!(alt.certainly_distinct(&pts[1], 4096), Distinct::No);
        assert_eq!(alt.certainly_distinct(&pts[0], 4096), Distinct::Yes);
    }

    #[test]
    fn mobius_image_of_sqrt2() {
        let p = sqrt2_points().pop().unwrap();
        // 1/z sends sqrt 2 to sqrt(2)/2, a root of 2t^2 - 1
        let (z, o) = (G::zero(), G::one());
        let img = p.mobius_image([&z, &o, &o, &z], 4096).unwrap();
        let f = img.factor().unwrap().clone();
        assert_eq!(f, P::from_ints(&[-1, 0, 2]).monic());
        assert!(img.approx().unwrap().re > 0.0);
    }
}
