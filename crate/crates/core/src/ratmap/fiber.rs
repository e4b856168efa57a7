//! Certified fibers `A^-1(w)` over a ball of values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::RatMap;
use crate::arith::{sqrt_lower, sqrt_upper, ComplexBall};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{approximate_roots, Poly};
use crate::scalar::ExactField;

/// A fiber point: a ball holding exactly one solution, or `None` for infinity.
pub type FiberPoint<K> = Option<ComplexBall<K>>;

fn abs_up<K: ExactField>(x: &K) -> BigRational {
    sqrt_upper(&x.norm())
}

fn abs_low<K: ExactField>(x: &K) -> BigRational {
    sqrt_lower(&x.norm())
}

/// Solutions of `P(z) = w' Q(z)`, one ball each, valid for every `w'` in `w`.
///
/// With approximations `z_i` of the roots of `F = P - cQ` (`c` the centre),
/// the disks of radius `n (|F(z_i)| + r|Q(z_i)|) / (|lc| prod |z_i - z_j|)`
/// contain the Weierstrass inclusion disks of every `P - w'Q`.
pub fn fiber<K: ExactField>(a: &RatMap<K>, w: &ComplexBall<K>, cfg: &Config) -> Result<Vec<FiberPoint<K>>> {
    let m = a.degree();
    let c = &w.center;
    let r = &w.radius;
    let f = a.p().clone() - a.q().scale(c);
    let n = f.deg();
    let mut out: Vec<FiberPoint<K>> = Vec::with_capacity(m);
    if n < m {
        // the value a(infinity) lies in the ball
        if !r.is_zero() || m - n > 1 || f.is_zero() {
            return Err(Error::NearCritical);
        }
        out.push(None);
    }
    if n == 0 {
        return Ok(out);
    }
    if r.is_zero() && f.gcd(&f.derivative()).deg() > 0 {
        return Err(Error::NearCritical);
    }
    let lc_low = abs_low(&f.lc()) - r * abs_up(&a.q().coeff(m));
    if lc_low <= BigRational::zero() {
        return Err(Error::NearCritical);
    }
    let nq = BigRational::from_integer(BigInt::from(n));
    for bits in cfg.precision_ladder() {
        let approx = approximate_roots(&f, bits);
        if approx.len() != n {
            continue;
        }
        let z: Vec<K> = approx.iter().map(|x| K::round_from_complex(x, bits)).collect();
        if let Some(balls) = disks(&f, a.q(), &z, r, &lc_low, &nq)? {
            out.extend(balls.into_iter().map(Some));
            return Ok(out);
        }
    }
    Err(Error::NearCritical)
}

fn disks<K: ExactField>(
    f: &Poly<K>,
    q: &Poly<K>,
    z: &[K],
    r: &BigRational,
    lc_low: &BigRational,
    nq: &BigRational,
) -> Result<Option<Vec<ComplexBall<K>>>> {
    let n = z.len();
    let mut balls = Vec::with_capacity(n);
    let mut ball_only_width = true;
    for i in 0..n {
        let mut prod = lc_low.clone();
        for j in 0..n {
            if j != i {
                let d = abs_low(&(z[i].clone() - &z[j]));
                if d.is_zero() {
                    return Ok(None);
                }
                prod *= d;
            }
        }
        let fz = abs_up(&f.eval(&z[i]));
        let qz = r * abs_up(&q.eval(&z[i]));
        if fz > qz {
            ball_only_width = false;
        }
        balls.push(ComplexBall::new(z[i].clone(), nq * (fz + qz) / prod));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !balls[i].disjoint(&balls[j]) {
                // extra precision cannot shrink disks dominated by the ball width
                return if ball_only_width && !r.is_zero() { Err(Error::NearCritical) } else { Ok(None) };
            }
        }
    }
    Ok(Some(balls))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::scalar::Ring;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn map(n: &[i64], d: &[i64]) -> RatMap<G> {
        RatMap::new(P::from_ints(n), P::from_ints(d)).unwrap()
    }

    fn holds(pts: &[FiberPoint<G>], v: G) -> bool {
        pts.iter().flatten().filter(|b| b.contains_point(&v)).count() == 1
    }

    #[test]
    fn squaring_over_four() {
        let cfg = Config::default();
        let pts = fiber(&map(&[0, 0, 1], &[1]), &ComplexBall::exact(G::from_int(4)), &cfg).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(holds(&pts, G::from_int(2)) && holds(&pts, G::from_int(-2)));
    }

    #[test]
    fn joukowski_over_five_halves() {
        let cfg = Config::default();
        let w = ComplexBall::new(G::from_frac(5, 2), BigRational::new(1.into(), 1000.into()));
        let pts = fiber(&map(&[1, 0, 1], &[0, 1]), &w, &cfg).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(holds(&pts, G::from_int(2)) && holds(&pts, G::from_frac(1, 2)));
    }

    #[test]
    fn near_critical_value() {
        let cfg = Config::default();
        let sq = map(&[0, 0, 1], &[1]);
        let w = ComplexBall::new(G::from_frac(1, 1000), BigRational::new(1.into(), 100.into()));
        assert_eq!(fiber(&sq, &w, &cfg), Err(Error::NearCritical));
        assert_eq!(fiber(&sq, &ComplexBall::exact(G::zero()), &cfg), Err(Error::NearCritical));
    }

    #[test]
    fn value_at_infinity_gives_marker() {
        let cfg = Config::default();
        // z/(z^2+1) takes the value 0 at 0 and at infinity
        let pts = fiber(&map(&[0, 1], &[1, 0, 1]), &ComplexBall::exact(G::zero()), &cfg).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&None));
    }
}
