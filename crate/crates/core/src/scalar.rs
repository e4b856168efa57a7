//! Scalar traits shared by the exact and the floating-point layers.
//!
//! Polynomial algebra is written once against [`Ring`] / [`Field`]; the
//! exact coefficient fields implement [`ExactField`] and the floating types
//! used for path tracking and root approximation implement [`Real`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Commutative ring with exact division when it exists.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// `Some(q)` with `q * other == self`, `None` when `other` does not divide.
    fn exact_div(&self, other: &Self) -> Option<Self>;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

pub trait Field: Ring + Div<Output = Self> + for<'a> Div<&'a Self, Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self
    }
}

/// Floating scalar: `f64`, [`DoubleDouble`](crate::arith::DoubleDouble) or the multi-precision [`BigFloat`](crate::arith::BigFloat).
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Working precision of this value in bits.
    fn precision(&self) -> u32;
    /// Constant at the given precision (the `f64` impl ignores `bits`).
    fn with_precision(x: f64, bits: u32) -> Self;
    fn from_rational(q: &BigRational, bits: u32) -> Self;
    /// Exact value as a rational.
    fn to_rational(&self) -> BigRational;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    /// `2^-bits` at precision `bits`.
    fn eps(bits: u32) -> Self;
}

impl Real for f64 {
    fn precision(&self) -> u32 {
        53
    }
    fn with_precision(x: f64, _bits: u32) -> Self {
        x
    }
    fn from_rational(q: &BigRational, _bits: u32) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn eps(bits: u32) -> Self {
        (2.0f64).powi(-(bits.min(1000) as i32))
    }
}

/// Exact coefficient field: an imaginary quadratic field `Q(sqrt(-D))`.
pub trait ExactField: Field + Eq + std::hash::Hash + fmt::Display + Send + Sync {
    /// The `D` in `Q(sqrt(-D))`.
    const DISC: u64;

    fn from_rational(q: BigRational) -> Self;
    fn from_parts(re: BigRational, gen: BigRational) -> Self;
    /// Rational part and coefficient of `sqrt(-D)`.
    fn parts(&self) -> (&BigRational, &BigRational);
    /// `|x|^2`, always rational.
    fn norm(&self) -> BigRational;
    fn conj(&self) -> Self;
    /// The generator `sqrt(-D)`.
    fn generator() -> Self {
        Self::from_parts(BigRational::zero(), BigRational::one())
    }
    fn is_rational(&self) -> bool {
        self.parts().1.is_zero()
    }

    fn to_complex<T: Real>(&self, bits: u32) -> Complex<T> {
        let (a, b) = self.parts();
        let re = T::from_rational(a, bits);
        let im = if b.is_zero() {
            T::zero()
        } else {
            let s = T::with_precision(Self::DISC as f64, bits).sqrt();
            T::from_rational(b, bits) * s
        };
        Complex::new(re, im)
    }

    /// Dyadic element of the field close to `z` (error about `2^-bits`).
    fn round_from_complex<T: Real>(z: &Complex<T>, bits: u32) -> Self {
        let re = round_dyadic(&z.re.to_rational(), bits);
        let gen = if Self::DISC == 1 {
            round_dyadic(&z.im.to_rational(), bits)
        } else {
            let s = T::with_precision(Self::DISC as f64, bits + 8).sqrt();
            round_dyadic(&(z.im.clone() / s).to_rational(), bits)
        };
        Self::from_parts(re, gen)
    }

    /// Small-height element within `2^-tol_bits` of `z`, if one exists.
    fn reconstruct<T: Real>(z: &Complex<T>, tol_bits: u32) -> Option<Self> {
        let re = crate::arith::reconstruct_rational(&z.re.to_rational(), tol_bits)?;
        let gen = if Self::DISC == 1 {
            crate::arith::reconstruct_rational(&z.im.to_rational(), tol_bits)?
        } else {
            let s = T::with_precision(Self::DISC as f64, z.re.precision() + 8).sqrt();
            crate::arith::reconstruct_rational(&(z.im.clone() / s).to_rational(), tol_bits)?
        };
        Some(Self::from_parts(re, gen))
    }

    /// Parser token for the generator (`i` for the Gaussian field).
    fn generator_token() -> String {
        if Self::DISC == 1 {
            "i".to_string()
        } else {
            format!("sqrt(-{})", Self::DISC)
        }
    }
}

/// Nearest multiple of `2^-bits`.
pub fn round_dyadic(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = scaled.round().to_integer();
    BigRational::new(n, scale)
}

impl<T: Real> Ring for Complex<T> {
    fn from_int(n: i64) -> Self {
        Complex::new(T::from_i64(n).unwrap_or_else(T::zero), T::zero())
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.clone() / other.clone())
        }
    }
}

impl<T: Real> Field for Complex<T> {}

/// `|z|` for a complex number over a [`Real`].
pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    (z.re.clone() * &z.re + z.im.clone() * &z.im).sqrt()
}

/// `|z|^2`.
pub fn cnorm<T: Real>(z: &Complex<T>) -> T {
    z.re.clone() * &z.re + z.im.clone() * &z.im
}
