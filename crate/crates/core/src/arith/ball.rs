//! Complex balls with an exact (dyadic) centre and a rational radius.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{round_dyadic, ExactField};

fn scale_bits(q: &BigRational) -> u64 {
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    (64 + ((db - nb) / 2).max(0) + 2) as u64
}

/// Rational `s >= sqrt(q)` with relative error about `2^-64`.
pub fn sqrt_upper(q: &BigRational) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    let k = scale_bits(q);
    let scaled = q * BigRational::from_integer(BigInt::one() << (2 * k));
    let fl = scaled.floor().to_integer();
    let mut s = fl.sqrt();
    if BigRational::from_integer(&s * &s) != scaled {
        s += 1;
    }
    BigRational::new(s, BigInt::one() << k)
}

/// Rational `0 <= s <= sqrt(q)`.
pub fn sqrt_lower(q: &BigRational) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    let k = scale_bits(q);
    let scaled = q * BigRational::from_integer(BigInt::one() << (2 * k));
    let s = scaled.floor().to_integer().sqrt();
    BigRational::new(s, BigInt::one() << k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall<K> {
    pub center: K,
    pub radius: BigRational,
}

impl<K: ExactField> ComplexBall<K> {
    pub fn new(center: K, radius: BigRational) -> Self {
        debug_assert!(!radius.is_negative());
        ComplexBall { center, radius }
    }

    pub fn exact(center: K) -> Self {
        ComplexBall { center, radius: BigRational::zero() }
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Upper bound on `|center|`.
    pub fn abs_center_upper(&self) -> BigRational {
        sqrt_upper(&self.center.norm())
    }

    pub fn abs_upper(&self) -> BigRational {
        self.abs_center_upper() + &self.radius
    }

    /// Lower bound on `|z|` over the ball (may be zero).
    pub fn abs_lower(&self) -> BigRational {
        let c = sqrt_lower(&self.center.norm()) - &self.radius;
        if c.is_negative() {
            BigRational::zero()
        } else {
            c
        }
    }

    pub fn contains_point(&self, z: &K) -> bool {
        (z.clone() - &self.center).norm() <= &self.radius * &self.radius
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_point(&K::zero())
    }

    /// `other` lies inside `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        let slack = &self.radius - &other.radius;
        if slack.is_negative() {
            return false;
        }
        (other.center.clone() - &self.center).norm() <= &slack * &slack
    }

    pub fn disjoint(&self, other: &Self) -> bool {
        let r = &self.radius + &other.radius;
        (other.center.clone() - &self.center).norm() > &r * &r
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        !self.disjoint(other)
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexBall::new(self.center.clone() + &other.center, &self.radius + &other.radius)
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexBall::new(self.center.clone() - &other.center, &self.radius + &other.radius)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.abs_center_upper() * &other.radius
            + other.abs_center_upper() * &self.radius
            + &self.radius * &other.radius;
        ComplexBall::new(self.center.clone() * &other.center, r)
    }

    /// `1/z` over the ball; `None` if the ball may contain zero.
    pub fn inv(&self) -> Option<Self> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return None;
        }
        let c_lo = sqrt_lower(&self.center.norm());
        if c_lo.is_zero() {
            return None;
        }
        // |1/(c+e) - 1/c| = |e| / (|c| |c+e|)
        let r = &self.radius / (&c_lo * &lo);
        Some(ComplexBall::new(self.center.inv(), r))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn scale(&self, k: &K) -> Self {
        ComplexBall::new(self.center.clone() * k, &self.radius * sqrt_upper(&k.norm()))
    }

    /// Replace the centre by a dyadic approximation and widen accordingly.
    pub fn round(&self, bits: u32) -> Self {
        let (a, b) = self.center.parts();
        let c = K::from_parts(round_dyadic(a, bits), round_dyadic(b, bits));
        let err = sqrt_upper(&(c.clone() - &self.center).norm());
        let mut r = &self.radius + err;
        let unit = BigRational::new(BigInt::one(), BigInt::one() << (bits + 8));
        if !r.is_zero() && r < unit {
            r = unit;
        }
        ComplexBall::new(c, r)
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn center_f64(&self) -> Complex<f64> {
        self.center.to_complex::<f64>(53)
    }
}
