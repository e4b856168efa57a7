//! Elements `a + b*sqrt(-D)` of an imaginary quadratic field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{ExactField, Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRat<const D: u64> {
    re: BigRational,
    im: BigRational,
}

impl<const D: u64> QuadRat<D> {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QuadRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        QuadRat { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        QuadRat { re: BigRational::new(n.into(), d.into()), im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    fn disc() -> BigRational {
        BigRational::from_integer(BigInt::from(D))
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl<const D: u64> fmt::Display for QuadRat<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = Self::generator_token();
        let gen_part = |c: &BigRational| -> String {
            if c.is_one() {
                g.clone()
            } else if (-c).is_one() {
                format!("-{g}")
            } else {
                format!("{}*{g}", fmt_rat(c))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", gen_part(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}", fmt_rat(&self.re), gen_part(&-self.im.clone()))
        } else {
            write!(f, "{}+{}", fmt_rat(&self.re), gen_part(&self.im))
        }
    }
}

impl<const D: u64> fmt::Debug for QuadRat<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const D: u64> Zero for QuadRat<D> {
    fn zero() -> Self {
        QuadRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<const D: u64> One for QuadRat<D> {
    fn one() -> Self {
        QuadRat { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl<const D: u64> Neg for QuadRat<D> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadRat { re: -self.re, im: -self.im }
    }
}

impl<const D: u64> Neg for &QuadRat<D> {
    type Output = QuadRat<D>;
    fn neg(self) -> QuadRat<D> {
        QuadRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn add_ref<const D: u64>(a: &QuadRat<D>, b: &QuadRat<D>) -> QuadRat<D> {
    QuadRat { re: &a.re + &b.re, im: &a.im + &b.im }
}

fn sub_ref<const D: u64>(a: &QuadRat<D>, b: &QuadRat<D>) -> QuadRat<D> {
    QuadRat { re: &a.re - &b.re, im: &a.im - &b.im }
}

fn mul_ref<const D: u64>(a: &QuadRat<D>, b: &QuadRat<D>) -> QuadRat<D> {
    if a.im.is_zero() && b.im.is_zero() {
        return QuadRat { re: &a.re * &b.re, im: BigRational::zero() };
    }
    let re = &a.re * &b.re - QuadRat::<D>::disc() * (&a.im * &b.im);
    let im = &a.re * &b.im + &a.im * &b.re;
    QuadRat { re, im }
}

fn div_ref<const D: u64>(a: &QuadRat<D>, b: &QuadRat<D>) -> QuadRat<D> {
    assert!(!b.is_zero(), "division by zero in QuadRat");
    if b.im.is_zero() {
        return QuadRat { re: &a.re / &b.re, im: &a.im / &b.re };
    }
    let n = b.norm();
    let c = mul_ref(a, &b.conj());
    QuadRat { re: c.re / &n, im: c.im / n }
}

macro_rules! quad_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl<const D: u64> $tr for QuadRat<D> {
            type Output = QuadRat<D>;
            fn $method(self, rhs: QuadRat<D>) -> QuadRat<D> {
                $f(&self, &rhs)
            }
        }
        impl<'a, const D: u64> $tr<&'a QuadRat<D>> for QuadRat<D> {
            type Output = QuadRat<D>;
            fn $method(self, rhs: &'a QuadRat<D>) -> QuadRat<D> {
                $f(&self, rhs)
            }
        }
        impl<'a, 'b, const D: u64> $tr<&'b QuadRat<D>> for &'a QuadRat<D> {
            type Output = QuadRat<D>;
            fn $method(self, rhs: &'b QuadRat<D>) -> QuadRat<D> {
                $f(self, rhs)
            }
        }
    };
}

quad_binop!(Add, add, add_ref);
quad_binop!(Sub, sub, sub_ref);
quad_binop!(Mul, mul, mul_ref);
quad_binop!(Div, div, div_ref);

impl<const D: u64> Ring for QuadRat<D> {
    fn from_int(n: i64) -> Self {
        QuadRat::from_ints(n, 0)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(div_ref(self, other))
        }
    }
}

impl<const D: u64> Field for QuadRat<D> {}

impl<const D: u64> ExactField for QuadRat<D> {
    const DISC: u64 = D;

    fn from_rational(q: BigRational) -> Self {
        QuadRat { re: q, im: BigRational::zero() }
    }
    fn from_parts(re: BigRational, gen: BigRational) -> Self {
        QuadRat { re, im: gen }
    }
    fn parts(&self) -> (&BigRational, &BigRational) {
        (&self.re, &self.im)
    }
    fn norm(&self) -> BigRational {
        &self.re * &self.re + Self::disc() * (&self.im * &self.im)
    }
    fn conj(&self) -> Self {
        QuadRat { re: self.re.clone(), im: -self.im.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = QuadRat<1>;
    type E = QuadRat<3>;

    #[test]
    fn gaussian_products_and_inverses() {
        let a = G::from_ints(1, 2);
        let b = G::from_ints(3, -1);
        assert_eq!(&a * &b, G::from_ints(5, 5));
        assert_eq!((&a / &b) * &b, a);
        assert_eq!(G::generator() * G::generator(), G::from_ints(-1, 0));
    }

    #[test]
    fn eisenstein_generator_squares_to_minus_three() {
        let s = E::generator();
        assert_eq!(&s * &s, E::from_ints(-3, 0));
        assert_eq!(E::from_ints(1, 1).norm(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn display_forms() {
        assert_eq!(G::from_ints(0, 1).to_string(), "i");
        assert_eq!(G::from_ints(1, -2).to_string(), "1-2*i");
        assert_eq!(G::from_frac(-3, 2).to_string(), "-3/2");
        assert_eq!(E::from_ints(1, 1).to_string(), "1+sqrt(-3)");
    }
}
