//! Double-double floats: an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi)/2`, about 106 bits of significand.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn add_dd(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    fn mul_dd(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    fn div_dd(self, b: Self) -> Self {
        // long division, three quotient digits
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}+{:e}", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            std::cmp::Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr for DoubleDouble {
            type Output = DoubleDouble;
            fn $method(self, rhs: DoubleDouble) -> DoubleDouble {
                let f: fn(DoubleDouble, DoubleDouble) -> DoubleDouble = $body;
                f(self, rhs)
            }
        }
        impl<'a> $tr<&'a DoubleDouble> for DoubleDouble {
            type Output = DoubleDouble;
            fn $method(self, rhs: &'a DoubleDouble) -> DoubleDouble {
                let f: fn(DoubleDouble, DoubleDouble) -> DoubleDouble = $body;
                f(self, *rhs)
            }
        }
        impl<'a, 'b> $tr<&'b DoubleDouble> for &'a DoubleDouble {
            type Output = DoubleDouble;
            fn $method(self, rhs: &'b DoubleDouble) -> DoubleDouble {
                let f: fn(DoubleDouble, DoubleDouble) -> DoubleDouble = $body;
                f(*self, *rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_dd(b));
forward_binop!(Sub, sub, |a, b| a.add_dd(-b));
forward_binop!(Mul, mul, |a, b| a.mul_dd(b));
forward_binop!(Div, div, |a, b| a.div_dd(b));
forward_binop!(Rem, rem, |a, b| {
    // truncated remainder, only needed to satisfy `Num`
    let q = a.div_dd(b);
    let t = if q.hi.fract() == 0.0 { DoubleDouble::new(q.hi, q.lo.trunc()) } else { DoubleDouble::from_f64(q.hi.trunc()) };
    a - t.mul_dd(b)
});

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> DoubleDouble {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = num_traits::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(DoubleDouble::from_f64)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        Some(DoubleDouble::new(hi, (n - hi as i64) as f64))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        Some(DoubleDouble::new(hi, (n as i128 - hi as i128) as f64))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(DoubleDouble::from_f64(x))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        self.to_rational().trunc().to_integer().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_rational().trunc().to_integer().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl Real for DoubleDouble {
    fn precision(&self) -> u32 {
        106
    }
    fn with_precision(x: f64, _bits: u32) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn from_rational(q: &BigRational, _bits: u32) -> Self {
        let hi = q.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DoubleDouble::from_f64(hi);
        }
        let rest = q - BigRational::from_float(hi).unwrap();
        DoubleDouble::new(hi, rest.to_f64().unwrap_or(0.0))
    }
    fn to_rational(&self) -> BigRational {
        let part = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        part(self.hi) + part(self.lo)
    }
    fn abs(&self) -> Self {
        if self.hi < 0.0 {
            -*self
        } else {
            *self
        }
    }
    fn sqrt(&self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(self.hi.sqrt());
        }
        // one Newton step from the f64 root doubles the accurate bits
        let x = DoubleDouble::from_f64(self.hi.sqrt());
        x + (*self - x * x) / x.mul_f64(2.0)
    }
    fn eps(bits: u32) -> Self {
        DoubleDouble::from_f64((2.0f64).powi(-(bits.min(1000) as i32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::with_precision(x, 106)
    }

    #[test]
    fn keeps_bits_lost_by_f64() {
        let tiny = dd(2f64.powi(-80));
        let s = dd(1.0) + tiny;
        assert_eq!(s.hi(), 1.0);
        assert_eq!(s.lo(), 2f64.powi(-80));
        assert_eq!((s - dd(1.0)).to_f64().unwrap(), 2f64.powi(-80));
    }

    #[test]
    fn third_is_accurate_to_about_106_bits() {
        let third = dd(1.0) / dd(3.0);
        let exact = BigRational::new(1.into(), 3.into());
        let err = (third.to_rational() - exact).to_f64().unwrap().abs();
        assert!(err < 2f64.powi(-104), "{err:e}");
        assert!(((third * dd(3.0)) - dd(1.0)).abs() < DoubleDouble::eps(104));
    }

    #[test]
    fn sqrt_two() {
        let r = dd(2.0).sqrt();
        assert!((r * r - dd(2.0)).abs() < DoubleDouble::eps(103));
    }

    #[test]
    fn rational_round_trip() {
        let q = BigRational::new(22.into(), 7.into());
        let x = DoubleDouble::from_rational(&q, 106);
        let err = (x.to_rational() - &q).to_f64().unwrap().abs();
        assert!(err < 2f64.powi(-102));
        let d = BigRational::new(3.into(), 1024.into());
        assert_eq!(DoubleDouble::from_rational(&d, 106).to_rational(), d);
    }

    #[test]
    fn ordering_uses_the_low_part() {
        let a = dd(1.0) + dd(2f64.powi(-70));
        assert!(a > dd(1.0));
        assert!(-a < dd(-1.0));
        assert_eq!((dd(7.0) % dd(2.0)).to_f64().unwrap(), 1.0);
    }
}
