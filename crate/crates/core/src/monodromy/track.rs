//! Homotopy continuation of the fiber `P(z) = w Q(z)` along paths in the
//! `w`-plane.

use num_complex::Complex;
use num_traits::Zero;

use crate::poly::eval_complex;
use crate::scalar::{cabs, Real};

pub type C64 = Complex<f64>;

/// A path piece, parametrized by `s` in `[0, 1]`.
#[derive(Clone, Debug)]
pub enum Piece {
    Segment(C64, C64),
    /// Centre, radius, start angle, signed sweep.
    Arc(C64, f64, f64, f64),
}

impl Piece {
    pub fn at(&self, s: f64) -> C64 {
        match self {
            Piece::Segment(a, b) => a + (b - a) * s,
            Piece::Arc(c, r, t0, sweep) => c + C64::from_polar(*r, t0 + sweep * s),
        }
    }
}

/// `P` and `Q` as complex coefficient vectors at a fixed precision.
pub struct Pencil<T> {
    pub p: Vec<Complex<T>>,
    pub q: Vec<Complex<T>>,
    pub bits: u32,
}

fn cz<T: Real>(z: C64, bits: u32) -> Complex<T> {
    Complex::new(T::with_precision(z.re, bits), T::with_precision(z.im, bits))
}

/// Distance from each point to its nearest neighbour.
fn separations<T: Real>(z: &[Complex<T>]) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; z.len()];
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let e = cabs(&(z[i].clone() - &z[j])).to_f64_lossy();
            d[i] = d[i].min(e);
            d[j] = d[j].min(e);
        }
    }
    d
}

fn min_separation<T: Real>(z: &[Complex<T>]) -> f64 {
    separations(z).into_iter().fold(f64::INFINITY, f64::min)
}

impl<T: Real> Pencil<T> {
    fn residual(&self, z: &Complex<T>, w: &Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
        let (p, dp) = eval_complex(&self.p, z);
        let (q, dq) = eval_complex(&self.q, z);
        (p - q.clone() * w, dp - dq * w, q)
    }

    /// Moves every point of the fiber along `piece`. Returns `None` when the
    /// step size collapses.
    pub fn track(&self, start: &[Complex<T>], piece: &Piece) -> Option<Vec<Complex<T>>> {
        let bits = self.bits;
        let tol = (2.0f64).powi(-(bits.min(1000) as i32) / 2 - 4);
        let mut z = start.to_vec();
        let mut s = 0.0f64;
        let mut h: f64 = 1.0 / 32.0;
        let mut w0 = cz::<T>(piece.at(0.0), bits);
        while s < 1.0 {
            h = h.min(1.0 - s);
            if h < 1e-9 {
                return None;
            }
            let s1 = if s + h >= 1.0 { 1.0 } else { s + h };
            let w1 = cz::<T>(piece.at(s1), bits);
            let sep = separations(&z);
            match self.step(&z, &w0, &w1, &sep, tol) {
                Some(next) => {
                    z = next;
                    s = s1;
                    w0 = w1;
                    h = (h * 1.5).min(1.0 / 16.0);
                }
                None => h /= 2.0,
            }
        }
        Some(z)
    }

    fn step(&self, z: &[Complex<T>], w0: &Complex<T>, w1: &Complex<T>, seps: &[f64], tol: f64) -> Option<Vec<Complex<T>>> {
        let dw = w1.clone() - w0;
        let mut out = Vec::with_capacity(z.len());
        for (zi, &sep) in z.iter().zip(seps) {
            // Euler predictor, then Newton on the new fiber
            let (_, dh, q) = self.residual(zi, w0);
            if dh.is_zero() {
                return None;
            }
            let mut y = zi.clone() + q * &dw / dh;
            let mut last = f64::INFINITY;
            let mut converged = false;
            for k in 0..8 {
                let (f, df, _) = self.residual(&y, w1);
                if df.is_zero() {
                    return None;
                }
                let corr = f / df;
                let c = cabs(&corr).to_f64_lossy();
                if k == 0 && c > sep / 8.0 {
                    return None;
                }
                if k > 0 && c > last / 2.0 && c > tol * (1.0 + cabs(&y).to_f64_lossy()) {
                    return None;
                }
                y = y - corr;
                last = c;
                if c <= tol * (1.0 + cabs(&y).to_f64_lossy()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return None;
            }
            if cabs(&(y.clone() - zi)).to_f64_lossy() > sep / 4.0 {
                return None;
            }
            out.push(y);
        }
        let floor = seps.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_separation(&out) < floor / 2.0 {
            return None;
        }
        Some(out)
    }
}

/// The permutation `i -> j` with `end[i]` nearest to `start[j]`, if that
/// matching is unambiguous.
pub fn match_points<T: Real>(start: &[Complex<T>], end: &[Complex<T>]) -> Option<Vec<usize>> {
    let sep = min_separation(start);
    let mut perm = Vec::with_capacity(end.len());
    let mut used = vec![false; start.len()];
    for e in end {
        let (j, d) = start
            .iter()
            .enumerate()
            .map(|(j, s)| (j, cabs(&(e.clone() - s)).to_f64_lossy()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if d > sep / 4.0 || used[j] {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}
