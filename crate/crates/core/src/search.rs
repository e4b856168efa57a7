//! Numerical search for Möbius transformations sending finite point sets
//! into other point sets, followed by exact reconstruction.
//!
//! A Möbius map is fixed by three images. Candidates come from every
//! assignment of images to three source points, survive a floating filter
//! on all remaining constraints, and are then rebuilt exactly from high
//! precision values. Callers verify the exact candidates.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::arith::{AlgebraicPoint, BigFloat, ComplexBall};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::to_c64;
use crate::ratmap::{fiber, Mobius, RatMap};
use crate::scalar::{cabs, ExactField, Real};

/// Numerical point of the sphere, `None` for infinity.
pub type NPt = Option<Complex<BigFloat>>;

/// The map should send every point of `src` to some point of `dst`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub src: Vec<NPt>,
    pub dst: Vec<NPt>,
}

type H<T> = (Complex<T>, Complex<T>);

fn hom<T: Real>(p: &Option<Complex<T>>, bits: u32) -> H<T> {
    let one = Complex::new(T::with_precision(1.0, bits), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    match p {
        Some(z) => (z.clone(), one),
        None => (one, zero),
    }
}

fn bracket<T: Real>(p: &H<T>, q: &H<T>) -> Complex<T> {
    p.0.clone() * &q.1 - p.1.clone() * &q.0
}

/// Matrix `[a, b, c, d]` of the map sending `p0, p1, p2` to `0, inf, 1`.
fn normalizing<T: Real>(p: &[H<T>; 3]) -> Option<[Complex<T>; 4]> {
    let n3 = bracket(&p[2], &p[0]);
    let d3 = bracket(&p[2], &p[1]);
    if n3.is_zero() || d3.is_zero() {
        return None;
    }
    let k = d3 / n3;
    Some([p[0].1.clone() * &k, -(p[0].0.clone() * &k), p[1].1.clone(), -p[1].0.clone()])
}

fn mat_mul<T: Real>(x: &[Complex<T>; 4], y: &[Complex<T>; 4]) -> [Complex<T>; 4] {
    [
        x[0].clone() * &y[0] + x[1].clone() * &y[2],
        x[0].clone() * &y[1] + x[1].clone() * &y[3],
        x[2].clone() * &y[0] + x[3].clone() * &y[2],
        x[2].clone() * &y[1] + x[3].clone() * &y[3],
    ]
}

fn adjugate<T: Real>(x: &[Complex<T>; 4]) -> [Complex<T>; 4] {
    [x[3].clone(), -x[1].clone(), -x[2].clone(), x[0].clone()]
}

fn three_point<T: Real>(src: &[H<T>; 3], dst: &[H<T>; 3]) -> Option<[Complex<T>; 4]> {
    let ls = normalizing(src)?;
    let ld = normalizing(dst)?;
    Some(mat_mul(&adjugate(&ld), &ls))
}

fn apply<T: Real>(m: &[Complex<T>; 4], p: &H<T>) -> H<T> {
    (
        m[0].clone() * &p.0 + m[1].clone() * &p.1,
        m[2].clone() * &p.0 + m[3].clone() * &p.1,
    )
}

/// Chordal distance between projective points.
fn chordal(p: &H<f64>, q: &H<f64>) -> f64 {
    let n = |h: &H<f64>| (h.0.norm_sqr() + h.1.norm_sqr()).sqrt();
    bracket(p, q).norm() / (n(p) * n(q))
}

fn to_h64(p: &NPt) -> H<f64> {
    hom(&p.as_ref().map(to_c64), 53)
}

const FILTER_TOL: f64 = 1e-7;

/// A numerical survivor of the filter, with its exact reconstruction when
/// one was found.
#[derive(Clone)]
pub struct Survivor<K> {
    pub numeric: [Complex<BigFloat>; 4],
    pub exact: Option<Mobius<K>>,
}

impl<K: ExactField> Survivor<K> {
    pub fn apply64(&self, z: Option<C64>) -> Option<C64> {
        let m: [C64; 4] = std::array::from_fn(|k| to_c64(&self.numeric[k]));
        let (x, y) = apply(&m, &hom(&z, 53));
        if y.norm() <= 1e-300 * x.norm() {
            None
        } else {
            Some(x / y)
        }
    }
}

pub type C64 = Complex<f64>;

/// Fixed generic sample points for numerical exclusion tests.
pub const SAMPLES: [(f64, f64); 3] = [(0.318, 0.727), (-1.137, 0.211), (0.593, -1.419)];

/// Chordal distance between two points of the sphere.
pub fn sphere_distance(p: Option<C64>, q: Option<C64>) -> f64 {
    chordal(&hom(&p, 53), &hom(&q, 53))
}

/// Numerical value of `a` at a point of the sphere.
pub fn eval64<K: ExactField>(a: &RatMap<K>, z: Option<C64>) -> Option<C64> {
    match z {
        None => a.at_infinity().map(|w| to_c64(&w.to_complex::<BigFloat>(64))),
        Some(z) => a.eval_complex::<f64>(&z, 53),
    }
}

/// Whether two numerical self-maps of the sphere clearly differ at one of
/// the sample points.
pub fn clearly_differ(f: impl Fn(Option<C64>) -> Option<C64>, g: impl Fn(Option<C64>) -> Option<C64>) -> bool {
    SAMPLES.iter().any(|&(re, im)| {
        let z = Some(C64::new(re, im));
        sphere_distance(f(z), g(z)) > 1e-6
    })
}

/// Survivors of the floating filter on all constraints. Each comes with
/// its exact reconstruction over `K`, when there is one of small height.
pub fn mobius_candidates<K: ExactField>(cons: &[Constraint], bits: u32) -> Vec<Survivor<K>> {
    // three source points that are pairwise apart
    let mut chosen: Vec<(NPt, usize)> = Vec::new();
    'outer: for (ci, c) in cons.iter().enumerate() {
        for s in &c.src {
            let h = to_h64(s);
            if chosen.iter().all(|(t, _)| chordal(&to_h64(t), &h) > 1e-6) {
                chosen.push((s.clone(), ci));
                if chosen.len() == 3 {
                    break 'outer;
                }
            }
        }
    }
    if chosen.len() < 3 {
        return Vec::new();
    }
    let src64: [H<f64>; 3] = std::array::from_fn(|k| to_h64(&chosen[k].0));
    let srcb: [H<BigFloat>; 3] = std::array::from_fn(|k| hom(&chosen[k].0, bits));
    let dst_lists: Vec<&Vec<NPt>> = chosen.iter().map(|(_, ci)| &cons[*ci].dst).collect();
    let checks: Vec<(Vec<H<f64>>, Vec<H<f64>>)> =
        cons.iter().map(|c| (c.src.iter().map(to_h64).collect(), c.dst.iter().map(to_h64).collect())).collect();
    let mut out: Vec<Survivor<K>> = Vec::new();
    for y0 in dst_lists[0] {
        for y1 in dst_lists[1] {
            for y2 in dst_lists[2] {
                let d64 = [to_h64(y0), to_h64(y1), to_h64(y2)];
                let Some(m) = three_point(&src64, &d64) else { continue };
                let ok = checks.iter().all(|(src, dst)| {
                    src.iter().all(|s| {
                        let im = apply(&m, s);
                        dst.iter().any(|t| chordal(&im, t) < FILTER_TOL)
                    })
                });
                if !ok {
                    continue;
                }
                let db = [hom(y0, bits), hom(y1, bits), hom(y2, bits)];
                let Some(mb) = three_point(&srcb, &db) else { continue };
                let exact = rebuild::<K>(&mb, bits);
                if exact.is_some() && out.iter().any(|s| s.exact == exact) {
                    continue;
                }
                out.push(Survivor { numeric: mb, exact });
            }
        }
    }
    out
}

fn rebuild<K: ExactField>(m: &[Complex<BigFloat>; 4], bits: u32) -> Option<Mobius<K>> {
    let tol = bits / 2 - 8;
    let (c, d) = (&m[2], &m[3]);
    let s = if cabs(c) >= cabs(d) { c.clone() } else { d.clone() };
    if s.is_zero() {
        return None;
    }
    let r = |z: &Complex<BigFloat>| K::reconstruct(&(z.clone() / &s), tol);
    Mobius::new(r(&m[0])?, r(&m[1])?, r(&m[2])?, r(&m[3])?)
}

/// Ball centres of a certified fiber as numerical points.
pub fn fiber_points<K: ExactField>(a: &RatMap<K>, w: &K, cfg: &Config) -> Result<Vec<NPt>> {
    let pts = fiber(a, &ComplexBall::exact(w.clone()), cfg)?;
    let bits = cfg.precision.max(64) + 32;
    Ok(pts.into_iter().map(|p| p.map(|b| b.center.to_complex::<BigFloat>(bits))).collect())
}

/// Numerical points of isolated algebraic points.
pub fn algebraic_points<K: ExactField>(pts: &[AlgebraicPoint<K>], bits: u32, cap: u32) -> Result<Vec<NPt>> {
    let target = num_rational::BigRational::new(One::one(), num_bigint::BigInt::one() << (bits + 8));
    pts.iter()
        .map(|p| match p {
            AlgebraicPoint::Infinity => Ok(None),
            _ => {
                let r = p.refine(&target, cap)?;
                Ok(Some(r.ball().unwrap().center.to_complex::<BigFloat>(bits + 32)))
            }
        })
        .collect()
}

/// Small pseudo-random field element used as a generic value.
pub fn random_value<K: ExactField>(rng: &mut impl rand::Rng) -> K {
    let re = num_rational::BigRational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(7i64..=23).into());
    let im = num_rational::BigRational::new(rng.gen_range(-40i64..=40).into(), rng.gen_range(7i64..=23).into());
    K::from_parts(re, im)
}

/// All Möbius `nu` with `a ∘ nu = g` (exactly verified), plus whether every
/// numerical survivor was decided.
pub fn right_mobius_links<K: ExactField>(g: &RatMap<K>, a: &RatMap<K>, cfg: &Config, stream: u64) -> Result<(Vec<Mobius<K>>, bool)> {
    if g.degree() != a.degree() {
        return Ok((Vec::new(), true));
    }
    let mut rng = cfg.rng(stream);
    for bits in cfg.precision_ladder() {
        let c = cfg.with_precision(bits);
        let mut cons = Vec::new();
        let mut tries = 0;
        while cons.len() < 2 && tries < 12 {
            tries += 1;
            let w: K = random_value(&mut rng);
            let (Ok(src), Ok(dst)) = (fiber_points(g, &w, &c), fiber_points(a, &w, &c)) else { continue };
            cons.push(Constraint { src, dst });
        }
        if cons.len() < 2 {
            return Err(Error::NearCriticalBase);
        }
        let mut good: Vec<Mobius<K>> = Vec::new();
        let mut unresolved = 0;
        for s in mobius_candidates::<K>(&cons, bits) {
            match s.exact {
                Some(nu) if a.pre_mobius(&nu) == *g => {
                    if !good.contains(&nu) {
                        good.push(nu)
                    }
                }
                _ => {
                    if !clearly_differ(|z| eval64(a, s.apply64(z)), |z| eval64(g, z)) {
                        unresolved += 1;
                    }
                }
            }
        }
        if unresolved == 0 || bits * 2 > cfg.precision_cap {
            return Ok((good, unresolved == 0));
        }
    }
    Err(Error::PrecisionCap(cfg.precision_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;

    type G = QuadRat<1>;

    #[test]
    fn symmetries_of_joukowski_square() {
        let cfg = Config::default();
        let a: RatMap<G> = parse_map("(z^2+1)/z").unwrap();
        let f = a.compose(&a);
        let (links, complete) = right_mobius_links(&f, &f, &cfg, 1).unwrap();
        assert!(complete);
        let mut s: Vec<String> = links.iter().map(|m| m.to_string()).collect();
        s.sort();
        assert_eq!(s, vec!["1/z", "z"]);
    }

    #[test]
    fn links_between_different_maps() {
        let cfg = Config::default();
        let a: RatMap<G> = parse_map("z^2").unwrap();
        let g: RatMap<G> = parse_map("(z+1)^2").unwrap();
        let (links, complete) = right_mobius_links(&g, &a, &cfg, 2).unwrap();
        assert!(complete);
        let mut s: Vec<String> = links.iter().map(|m| m.to_string()).collect();
        s.sort();
        assert_eq!(s, vec!["-z-1", "z+1"]);
    }
}
