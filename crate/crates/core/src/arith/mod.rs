//! Exact field arithmetic, multi-precision floats, certified balls and
//! algebraic points.

mod ball;
mod bigfloat;
mod ddouble;
mod point;
mod quad;

pub use ball::{sqrt_lower, sqrt_upper, ComplexBall};
pub use bigfloat::BigFloat;
pub use ddouble::DoubleDouble;
pub use point::{AlgebraicPoint, Distinct};
pub use quad::QuadRat;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Continued-fraction reconstruction: the first convergent within
/// `2^-tol_bits` of `q`, provided its denominator is below `2^(tol_bits/2)`.
pub fn reconstruct_rational(q: &BigRational, tol_bits: u32) -> Option<BigRational> {
    let tol = BigRational::new(BigInt::one(), BigInt::one() << tol_bits);
    let max_den = BigInt::one() << (tol_bits / 3);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = q.clone();
    for _ in 0..(4 * tol_bits + 8) {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max_den {
            return None;
        }
        let c = BigRational::new(h2.clone(), k2.clone());
        if (&c - q).abs() <= tol {
            return Some(c);
        }
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        x = frac.recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    None
}
