//! Dense univariate polynomials over a [`Ring`], lowest degree first.
//!
//! Bivariate polynomials are `Poly<Poly<K>>`; the resultant code works over
//! any ring with exact division, so `Res_z` with coefficients in `K[t]` is
//! the same routine as the scalar one.

mod linalg;
mod resultant;
mod roots;
mod sqfree;

pub use linalg::{nullspace, solve};
pub use resultant::{interpolate, resultant, resultant_bivariate, resultant_formal, resultant_formal_bivariate, sylvester_determinant};
pub use roots::{approximate_roots, isolate_roots, isolate_roots_with};
pub use sqfree::{gcd_free_basis, multiplicity, squarefree_decomposition, squarefree_part};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{ExactField, Field, Real, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly { coeffs: vec![R::zero(), R::one()] }
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `x - r`.
    pub fn linear_root(r: R) -> Self {
        Poly::new(vec![-r, R::one()])
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| R::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `sum c_k x^k y^(n-k)` at formal degree `n >= deg`.
    pub fn eval_homogeneous(&self, x: &R, y: &R, n: usize) -> R {
        let mut acc = R::zero();
        let mut ypow = R::one();
        for k in (0..=n).rev() {
            let c = self.coeff(k);
            if !c.is_zero() {
                let mut term = c * &ypow;
                term = term * &x.pow(k as u64);
                acc = acc + term;
            }
            ypow = ypow * y;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &R::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow_u(&self, e: u32) -> Self {
        Ring::pow(self, e as u64)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `f(num/den) * den^n` with `n` the formal degree (`n >= deg f`).
    pub fn compose_homogeneous(&self, num: &Self, den: &Self, n: usize) -> Self {
        let mut acc = Poly::zero();
        let mut num_pow = Poly::one();
        let mut den_pows = vec![Poly::one()];
        for _ in 0..n {
            let next = den_pows.last().unwrap().clone() * den;
            den_pows.push(next);
        }
        for k in 0..=n {
            let c = self.coeff(k);
            if !c.is_zero() {
                acc = acc + (num_pow.clone() * &den_pows[n - k]).scale(&c);
            }
            if k < n {
                num_pow = num_pow * num;
            }
        }
        acc
    }

    /// Substitution `f(num/den)` cleared by `den^deg f`.
    pub fn compose(&self, num: &Self, den: &Self) -> (Self, Self) {
        let n = self.deg();
        (self.compose_homogeneous(num, den, n), den.pow_u(n as u32))
    }

    /// Plain substitution `f(g)`.
    pub fn substitute(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * g + Poly::constant(c.clone());
        }
        acc
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        if self.deg() < d.deg() || self.is_zero() {
            return self.clone();
        }
        let delta = self.deg() - d.deg();
        let ld = d.lc();
        let mut r = self.clone();
        let mut steps = 0usize;
        while !r.is_zero() && r.deg() >= d.deg() {
            let k = r.deg() - d.deg();
            let lr = r.lc();
            r = r.scale(&ld) - d.scale(&lr).shift(k);
            steps += 1;
        }
        if steps < delta + 1 {
            r = r.scale(&ld.pow((delta + 1 - steps) as u64));
        }
        r
    }

    /// Coefficient-wise exact division by a scalar.
    pub fn div_scalar_exact(&self, c: &R) -> Option<Self> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            v.push(x.exact_div(c)?);
        }
        Some(Poly::new(v))
    }

    /// Exact quotient `self / d`, `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let ld = d.lc();
        let mut r = self.clone();
        let mut q = vec![R::zero(); self.deg() - d.deg() + 1];
        while !r.is_zero() && r.deg() >= d.deg() {
            let k = r.deg() - d.deg();
            let c = r.lc().exact_div(&ld)?;
            r = r - d.scale(&c).shift(k);
            q[k] = c;
        }
        if r.is_zero() {
            Some(Poly::new(q))
        } else {
            None
        }
    }
}

impl<K: Field> Poly<K> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc().inv();
        self.scale(&l)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.deg() < d.deg() || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let linv = d.lc().inv();
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        let mut q = vec![K::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * &linv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - dc.clone() * &c;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self.clone() * other).divrem(&g).0.monic()
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.gcd(other).deg() == 0 && !(self.is_zero() && other.is_zero())
    }
}

impl<K: ExactField> Poly<K> {
    pub fn to_complex<T: Real>(&self, bits: u32) -> Vec<Complex<T>> {
        self.coeffs.iter().map(|c| c.to_complex::<T>(bits)).collect()
    }
}

/// Horner evaluation of complex coefficients (lowest first) with derivative.
pub fn eval_complex<T: Real>(coeffs: &[Complex<T>], z: &Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::new(T::zero(), T::zero());
    let mut dp = Complex::new(T::zero(), T::zero());
    for c in coeffs.iter().rev() {
        dp = dp * z + &p;
        p = p * z + c;
    }
    (p, dp)
}

impl<R: std::fmt::Debug> std::fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly { coeffs: vec![R::one()] }
    }
}

fn add_p<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        v.push(match (a.coeffs.get(k), b.coeffs.get(k)) {
            (Some(x), Some(y)) => x.clone() + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    Poly::new(v)
}

fn sub_p<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        v.push(match (a.coeffs.get(k), b.coeffs.get(k)) {
            (Some(x), Some(y)) => x.clone() - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y.clone(),
            (None, None) => unreachable!(),
        });
    }
    Poly::new(v)
}

fn mul_p<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![R::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                v[i + j] = v[i + j].clone() + x.clone() * y;
            }
        }
    }
    Poly::new(v)
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl<R: Ring> $tr for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: Poly<R>) -> Poly<R> {
                $f(&self, &rhs)
            }
        }
        impl<'a, R: Ring> $tr<&'a Poly<R>> for Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &'a Poly<R>) -> Poly<R> {
                $f(&self, rhs)
            }
        }
        impl<'a, 'b, R: Ring> $tr<&'b Poly<R>> for &'a Poly<R> {
            type Output = Poly<R>;
            fn $method(self, rhs: &'b Poly<R>) -> Poly<R> {
                $f(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_p);
poly_binop!(Sub, sub, sub_p);
poly_binop!(Mul, mul, mul_p);

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn from_int(n: i64) -> Self {
        Poly::constant(R::from_int(n))
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;

    type G = QuadRat<1>;
    type P = Poly<G>;

    fn p(cs: &[i64]) -> P {
        P::from_ints(cs)
    }

    #[test]
    fn compose_examples() {
        let (n, d) = p(&[0, 0, 1]).compose(&p(&[1, 1]), &p(&[1]));
        assert_eq!((n, d), (p(&[1, 2, 1]), p(&[1])));
        let (n, d) = p(&[0, 1]).compose(&p(&[3, 1, 7]), &p(&[0, 2]));
        assert_eq!((n, d), (p(&[3, 1, 7]), p(&[0, 2])));
        let (n, d) = p(&[1, 0, 1]).compose(&p(&[1, 0, 1]), &p(&[0, 1]));
        assert_eq!((n, d), (p(&[1, 0, 3, 0, 1]), p(&[0, 0, 1])));
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, -2, 1])), b);
        assert_eq!(a.div_exact(&b), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn bivariate_exact_division() {
        // (x^2 - y^2) / (x - y) in K[x][y]
        let x = Poly::constant(p(&[0, 1]));
        let y: Poly<P> = Poly::x();
        let num = x.clone() * &x - y.clone() * &y;
        let den = x.clone() - &y;
        assert_eq!(num.div_exact(&den), Some(x + y));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = p(&[3, 0, 2, 5]);
        let b = p(&[1, 2]);
        let r = a.pseudo_rem(&b);
        // lc(b)^3 * a(-1/2) == r
        let half = G::from_frac(-1, 2);
        assert_eq!(r, P::constant(a.eval(&half) * G::from_int(8)));
    }
}
