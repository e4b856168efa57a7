//! Floating-point root approximation (Aberth–Ehrlich) over any [`Real`].

use num_complex::Complex;
use num_traits::Zero;

use crate::arith::BigFloat;
use crate::poly::eval_complex;
use crate::scalar::{cabs, Real};

pub type C64 = Complex<f64>;
pub type CBig = Complex<BigFloat>;

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn to_big(z: &C64, bits: u32) -> CBig {
    Complex::new(BigFloat::with_precision(z.re, bits), BigFloat::with_precision(z.im, bits))
}

pub fn to_c64<T: Real>(z: &Complex<T>) -> C64 {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

pub fn set_bits(z: &CBig, bits: u32) -> CBig {
    Complex::new(z.re.clone().set_precision(bits), z.im.clone().set_precision(bits))
}

/// Starting points on a circle enclosing all roots.
pub fn initial_guesses<T: Real>(coeffs: &[Complex<T>], bits: u32) -> Vec<Complex<T>> {
    let n = coeffs.len() - 1;
    let lc = to_c64(&coeffs[n]).norm();
    let mut rad: f64 = 0.0;
    for (k, c) in coeffs.iter().enumerate().take(n) {
        let a = to_c64(c).norm() / lc;
        if a > 0.0 && a.is_finite() {
            rad = rad.max(a.powf(1.0 / (n - k) as f64));
        }
    }
    let rad = if rad > 0.0 && rad.is_finite() { 2.0 * rad } else { 1.0 };
    (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex::new(T::with_precision(rad * th.cos(), bits), T::with_precision(rad * th.sin(), bits))
        })
        .collect()
}

/// Simultaneous Aberth iteration. Returns the approximations and whether the
/// last correction fell below `2^-tol_bits` relative to the root size.
pub fn aberth<T: Real>(
    coeffs: &[Complex<T>],
    mut z: Vec<Complex<T>>,
    tol_bits: u32,
    max_iter: usize,
) -> (Vec<Complex<T>>, bool) {
    let n = z.len();
    if n == 0 {
        return (z, true);
    }
    let one = T::one();
    let tol = T::eps(tol_bits);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_complex(coeffs, &z[i]);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = czero::<T>();
            for j in 0..n {
                if j != i {
                    let d = z[i].clone() - &z[j];
                    if !d.is_zero() {
                        s = s + Complex::new(one.clone(), T::zero()) / d;
                    }
                }
            }
            let denom = Complex::new(one.clone(), T::zero()) - ratio.clone() * &s;
            let step = if denom.is_zero() { ratio } else { ratio / denom };
            let size = cabs(&z[i]);
            let scale = if size > one { size } else { one.clone() };
            let small = cabs(&step) <= tol.clone() * &scale;
            z[i] = z[i].clone() - step;
            if small {
                done[i] = true;
            } else {
                all = false;
            }
            let bad = z[i].re.to_f64().map_or(true, |x| !x.is_finite())
                || z[i].im.to_f64().map_or(true, |x| !x.is_finite());
            if bad {
                return (z, false);
            }
        }
        if all {
            return (z, true);
        }
    }
    (z, false)
}

/// Roots of a polynomial with complex coefficients at `bits` of precision,
/// starting in `f64` when the coefficients fit.
pub fn roots_big(coeffs: &[CBig], bits: u32) -> (Vec<CBig>, bool) {
    let n = coeffs.len() - 1;
    if n == 0 {
        return (Vec::new(), true);
    }
    let c64: Vec<C64> = coeffs.iter().map(to_c64).collect();
    let fits = c64.iter().all(|c| c.re.is_finite() && c.im.is_finite()) && c64[n].norm() > 1e-280;
    let start: Vec<CBig> = if fits {
        let (z, _) = aberth(&c64, initial_guesses(&c64, 53), 50, 400);
        if z.iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            z.iter().map(|w| to_big(w, bits)).collect()
        } else {
            initial_guesses(coeffs, bits)
        }
    } else {
        initial_guesses(coeffs, bits)
    };
    aberth(coeffs, start, bits.saturating_sub(4), 400 + 4 * n)
}

/// One Newton step for `p` at `z`.
pub fn newton_step<T: Real>(coeffs: &[Complex<T>], z: &Complex<T>) -> Complex<T> {
    let (p, dp) = eval_complex(coeffs, z);
    if dp.is_zero() {
        return z.clone();
    }
    z.clone() - p / dp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aberth_finds_cube_roots_of_unity() {
        let c: Vec<C64> = vec![Complex::new(-1.0, 0.0), Complex::zero(), Complex::zero(), Complex::new(1.0, 0.0)];
        let (z, ok) = aberth(&c, initial_guesses(&c, 53), 45, 200);
        assert!(ok);
        for w in z {
            assert!(((w * w * w) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn big_roots_reach_requested_precision() {
        // z^2 - 2
        let c: Vec<CBig> = [-2.0, 0.0, 1.0].iter().map(|&x| to_big(&Complex::new(x, 0.0), 256)).collect();
        let (z, ok) = roots_big(&c, 256);
        assert!(ok);
        for w in z {
            let sq = w.clone() * &w;
            let err = cabs(&(sq - to_big(&Complex::new(2.0, 0.0), 256)));
            assert!(err < BigFloat::eps(240));
        }
    }
}
