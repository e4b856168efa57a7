//! Binary floating point with a per-value precision: `mant * 2^exp`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

/// Precision used when both operands of a division are exact constants.
const EXACT_DIV_BITS: u32 = 64;

#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    /// 0 marks an exact constant (from `zero()`, `one()`, integers).
    prec: u32,
}

impl BigFloat {
    pub fn new(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut x = BigFloat { mant, exp, prec };
        x.normalize();
        x
    }

    pub fn from_f64_prec(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return BigFloat { mant: BigInt::zero(), exp: 0, prec };
        }
        let (m, e, s) = Float::integer_decode(x);
        let mant = if s < 0 { -BigInt::from(m) } else { BigInt::from(m) };
        BigFloat::new(mant, e as i64, prec)
    }

    fn bits(&self) -> i64 {
        self.mant.bits() as i64
    }

    /// Exponent of the leading bit plus one (`|x| < 2^top`).
    fn top(&self) -> i64 {
        self.exp + self.bits()
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if self.prec == 0 {
            return;
        }
        let b = self.bits();
        let p = self.prec as i64;
        if b > p {
            let shift = (b - p) as u64;
            let neg = self.mant.sign() == Sign::Minus;
            let mag = self.mant.magnitude().clone();
            let mut q = &mag >> shift;
            if ((&mag >> (shift - 1)) & num_bigint::BigUint::one()).is_one() {
                q += 1u32;
            }
            let q = BigInt::from(q);
            self.mant = if neg { -q } else { q };
            self.exp += shift as i64;
        }
    }

    fn joint_prec(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn set_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize();
        self
    }

    fn align(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let ma = &a.mant << ((a.exp - e) as usize);
        let mb = &b.mant << ((b.exp - e) as usize);
        (ma, mb, e)
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let p = self.joint_prec(other);
        let other_mant = if negate_other { -other.mant.clone() } else { other.mant.clone() };
        if other.mant.is_zero() {
            return self.clone().set_precision(p);
        }
        if self.mant.is_zero() {
            return BigFloat::new(other_mant, other.exp, p);
        }
        if p > 0 {
            let gap = p as i64 + 2;
            if self.top() > other.top() + gap {
                return self.clone().set_precision(p);
            }
            if other.top() > self.top() + gap {
                return BigFloat::new(other_mant, other.exp, p);
            }
        }
        let o = BigFloat { mant: other_mant, exp: other.exp, prec: other.prec };
        let (ma, mb, e) = Self::align(self, &o);
        BigFloat::new(ma + mb, e, p)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        BigFloat::new(&self.mant * &other.mant, self.exp + other.exp, self.joint_prec(other))
    }

    fn div_impl(&self, other: &Self) -> Self {
        assert!(!other.mant.is_zero(), "BigFloat division by zero");
        let mut p = self.joint_prec(other);
        if p == 0 {
            p = EXACT_DIV_BITS;
        }
        if self.mant.is_zero() {
            return BigFloat { mant: BigInt::zero(), exp: 0, prec: p };
        }
        let shift = (p as i64 + 2 + other.bits() - self.bits()).max(0);
        let num = &self.mant << (shift as usize);
        let q = num / &other.mant;
        BigFloat::new(q, self.exp - shift - other.exp, p)
    }

    fn sqrt_impl(&self) -> Self {
        let p = if self.prec == 0 { EXACT_DIV_BITS } else { self.prec };
        if self.mant.is_zero() {
            return BigFloat { mant: BigInt::zero(), exp: 0, prec: p };
        }
        assert!(self.mant.sign() == Sign::Plus, "BigFloat sqrt of a negative number");
        let mut shift = (2 * p as i64 + 4 - self.bits()).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << (shift as usize);
        let r = m.sqrt();
        BigFloat::new(r, (self.exp - shift) / 2, p)
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}[{}b]", self.to_f64().unwrap_or(f64::NAN), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64().unwrap_or(f64::NAN))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if sa != sb {
            return Some(rank(sa).cmp(&rank(sb)));
        }
        if sa == Sign::NoSign {
            return Some(Ordering::Equal);
        }
        let mag = if self.top() != other.top() {
            self.top().cmp(&other.top())
        } else {
            let (ma, mb, _) = Self::align(self, other);
            ma.abs().cmp(&mb.abs())
        };
        Some(if sa == Sign::Minus { mag.reverse() } else { mag })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'a BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(&self, rhs)
            }
        }
        impl<'a, 'b> $tr<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a.div_impl(b));
forward_binop!(Rem, rem, |a, b| {
    // truncated remainder, only needed to satisfy `Num`
    let q = a.div_impl(b);
    let qi = q.to_rational().trunc();
    let qf = BigFloat::from_rational(&qi, a.joint_prec(b).max(EXACT_DIV_BITS));
    a.add_impl(&qf.mul_impl(b), true)
});

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec: 0 }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat { mant: BigInt::one(), exp: 0, prec: 0 }
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = num_bigint::ParseBigIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let n = BigInt::from_str_radix(s, radix)?;
        Ok(BigFloat { mant: n, exp: 0, prec: 0 })
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat { mant: BigInt::from(n), exp: 0, prec: 0 })
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat { mant: BigInt::from(n), exp: 0, prec: 0 })
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(BigFloat::from_f64_prec(x, 0))
    }
}

impl ToPrimitive for BigFloat {
    fn to_i64(&self) -> Option<i64> {
        self.to_rational().trunc().to_integer().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_rational().trunc().to_integer().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        if self.mant.is_zero() {
            return Some(0.0);
        }
        let b = self.bits();
        let (m, e) = if b > 64 {
            (&self.mant >> ((b - 64) as usize), self.exp + b - 64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64()?;
        let e = e.clamp(-2000, 2000) as i32;
        // split the scaling so that 2^e never overflows on its own
        let half = e / 2;
        Some(mf * 2f64.powi(half) * 2f64.powi(e - half))
    }
}

impl Real for BigFloat {
    fn precision(&self) -> u32 {
        self.prec
    }
    fn with_precision(x: f64, bits: u32) -> Self {
        BigFloat::from_f64_prec(x, bits)
    }
    fn from_rational(q: &BigRational, bits: u32) -> Self {
        let n = BigFloat { mant: q.numer().clone(), exp: 0, prec: bits };
        let d = BigFloat { mant: q.denom().clone(), exp: 0, prec: bits };
        n.div_impl(&d)
    }
    fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }
    fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }
    fn sqrt(&self) -> Self {
        self.sqrt_impl()
    }
    fn eps(bits: u32) -> Self {
        BigFloat { mant: BigInt::one(), exp: -(bits as i64), prec: bits }
    }
}
