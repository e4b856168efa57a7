//! Monodromy of rational maps, imprimitivity blocks and the decompositions
//! of iterates.
//!
//! The fiber over a base point on a large circle is carried around lasso
//! loops, one per finite critical value; the loop around infinity is the
//! inverse of the big circle. Permutations are computed twice, in `f64` and
//! at doubled multi-precision, and must agree. Everything built from them
//! downstream (right factors, decompositions) is verified exactly.

mod audit;
mod factor;
pub mod perm;
mod track;

use num_bigint::BigUint;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

pub use audit::{audit_hypothesis, audit_iterates, AuditReport, AuditRow};
pub use factor::{
    decompositions, decompositions_of_iterate, equivalent, left_factor_divide, left_quotient, right_factor_from_blocks, Decomposition,
    DecompositionView,
};
pub use perm::{block_systems, group_order, BlockSystem, Perm};

use crate::arith::{AlgebraicPoint, BigFloat, DoubleDouble};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{to_c64, CBig};
use crate::poly::approximate_roots;
use crate::ratmap::{describe_point, RatMap};
use crate::scalar::{ExactField, Real};
use track::{match_points, Pencil, Piece, C64};

/// Monodromy generators of a map over a base point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermGroup<K> {
    pub degree: usize,
    /// One per branch point, in loop order; their product is the identity.
    pub generators: Vec<Perm>,
    pub branch_points: Vec<String>,
    #[serde(skip)]
    pub base: K,
    pub base_point: [f64; 2],
    /// Fiber over the base point; generators act on these labels.
    pub fiber: Vec<[f64; 2]>,
    /// The generators came out the same at this precision and at half of it.
    pub stable_bits: u32,
}

impl<K: ExactField> PermGroup<K> {
    pub fn order(&self) -> BigUint {
        group_order(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        perm::is_transitive(self.degree, &self.generators)
    }

    pub fn product_is_identity(&self) -> bool {
        self.generators.iter().fold(Perm::identity(self.degree), |acc, g| acc.then(g)).is_identity()
    }

    pub fn block_systems(&self) -> Vec<BlockSystem> {
        block_systems(self.degree, &self.generators)
    }

    /// The fiber of `a` over the base point at `bits`, in label order.
    pub fn fiber_at(&self, a: &RatMap<K>, bits: u32) -> Option<Vec<CBig>> {
        labelled_fiber(a, &self.base, &self.fiber, bits)
    }
}

/// Fiber of `a` over an exact base point at `bits`, in the label order of
/// `fiber`.
fn labelled_fiber<K: ExactField>(a: &RatMap<K>, base: &K, fiber: &[[f64; 2]], bits: u32) -> Option<Vec<CBig>> {
    let f = a.p().clone() - a.q().scale(base);
    let roots = approximate_roots(&f, bits.max(64));
    if roots.len() != fiber.len() {
        return None;
    }
    let labels: Vec<C64> = fiber.iter().map(|p| Complex::new(p[0], p[1])).collect();
    let approx: Vec<C64> = roots.iter().map(to_c64).collect();
    let perm = match_points(&approx, &labels)?;
    let mut out = vec![roots[0].clone(); roots.len()];
    for (label, &root) in perm.iter().enumerate() {
        out[label] = roots[root].clone();
    }
    Some(out)
}

struct Layout<K> {
    base: K,
    base_c: C64,
    radius: f64,
    /// Finite critical values with their lassos, in loop order.
    lassos: Vec<(String, Vec<Piece>)>,
    infinity_branch: bool,
}

fn dist_to_segment(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = ((p - a) * d.conj()).re / d.norm_sqr();
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// Smallest distance from a segment `base -> v` to another obstacle.
fn clearance(base: C64, obstacles: &[C64]) -> f64 {
    let mut c = f64::INFINITY;
    for v in obstacles {
        for o in obstacles {
            if o != v {
                c = c.min(dist_to_segment(*o, base, *v));
            }
        }
    }
    c
}

/// Among a few candidate angles, the one whose segments stay furthest from
/// the other obstacles.
fn best_angle(radius: f64, obstacles: &[C64], rng: &mut impl rand::Rng) -> (f64, f64) {
    (0..ANGLE_SAMPLES)
        .map(|_| {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            (t, clearance(C64::from_polar(radius, t), obstacles))
        })
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap()
}

const ANGLE_SAMPLES: usize = 32;

fn layout<K: ExactField>(a: &RatMap<K>, values: &[AlgebraicPoint<K>], extra: Option<C64>, rng: &mut impl rand::Rng) -> Option<Layout<K>> {
    let finite: Vec<(C64, String)> =
        values.iter().filter(|p| !p.is_infinite()).map(|p| (p.approx().unwrap(), describe_point(p))).collect();
    let mut obstacles: Vec<C64> = finite.iter().map(|v| v.0).collect();
    obstacles.extend(extra);
    let mut sep = f64::INFINITY;
    for i in 0..obstacles.len() {
        for j in i + 1..obstacles.len() {
            sep = sep.min((obstacles[i] - obstacles[j]).norm());
        }
    }
    let reach = obstacles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = 2.0 * reach + 2.0;
    let (angle, clear) = best_angle(radius, &obstacles, rng);
    if clear.is_finite() && clear < 0.05 * sep {
        return None;
    }
    // loops stay well inside the clearance of the segments
    let eps = (0.3 * sep).min(0.5).min(0.5 * clear);
    let base = K::round_from_complex(&C64::from_polar(radius, angle), 20);
    let base_c = base.to_complex::<f64>(53);
    if a.at_infinity() == Some(base.clone()) {
        return None;
    }
    let mut lassos: Vec<(f64, String, Vec<Piece>)> = Vec::new();
    for (v, name) in &finite {
        for o in &obstacles {
            if o != v && dist_to_segment(*o, base_c, *v) < eps {
                return None;
            }
        }
        let u = (v - base_c) / (v - base_c).norm();
        let p = v - u * eps;
        let start = (p - v).arg();
        let pieces = vec![
            Piece::Segment(base_c, p),
            Piece::Arc(*v, eps, start, std::f64::consts::TAU),
            Piece::Segment(p, base_c),
        ];
        // direction seen from the base, measured from the inward normal
        let key = ((v - base_c) / (-base_c)).arg();
        lassos.push((key, name.clone(), pieces));
    }
    lassos.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    for w in lassos.windows(2) {
        if w[1].0 - w[0].0 < 1e-6 {
            return None;
        }
    }
    Some(Layout {
        base,
        base_c,
        radius,
        lassos: lassos.into_iter().map(|(_, n, p)| (n, p)).collect(),
        infinity_branch: values.iter().any(|p| p.is_infinite()),
    })
}

fn loop_perm<T: Real>(pencil: &Pencil<T>, start: &[Complex<T>], pieces: &[Piece]) -> Option<Perm> {
    let mut z = start.to_vec();
    for piece in pieces {
        z = pencil.track(&z, piece)?;
    }
    Some(Perm(match_points(start, &z)?))
}

/// Lasso permutations followed by the big circle.
fn loop_perms<K: ExactField, T: Real>(a: &RatMap<K>, lay: &Layout<K>, fiber: &[CBig], bits: u32) -> Option<Vec<Perm>> {
    let pencil = Pencil::<T> { p: a.p().to_complex(bits), q: a.q().to_complex(bits), bits };
    let start: Vec<Complex<T>> = fiber
        .iter()
        .map(|z| Complex::new(T::from_rational(&z.re.to_rational(), bits), T::from_rational(&z.im.to_rational(), bits)))
        .collect();
    let mut loops: Vec<Vec<Piece>> = lay.lassos.iter().map(|(_, p)| p.clone()).collect();
    loops.push(vec![Piece::Arc(Complex::new(0.0, 0.0), lay.radius, lay.base_c.arg(), std::f64::consts::TAU)]);
    loops.par_iter().map(|l| loop_perm(&pencil, &start, l)).collect()
}

/// Monodromy generators of `a`, stable under doubling the precision.
pub fn monodromy_group<K: ExactField>(a: &RatMap<K>, cfg: &Config) -> Result<PermGroup<K>> {
    let m = a.degree();
    if m < 2 {
        return Err(Error::InvalidArgument("degree at least 2 required".into()));
    }
    cfg.check_degree(m as u64)?;
    let portrait = a.portrait();
    let values: Vec<AlgebraicPoint<K>> = portrait.points(cfg.precision_cap)?.into_iter().map(|(p, _)| p).collect();
    // a noncritical finite value at infinity must be avoided by the paths
    let extra = a.at_infinity().filter(|v| !portrait.values().contains(&Some(v.clone()))).map(|v| v.to_complex::<f64>(53));
    let mut rng = cfg.rng(0x6d6f6e);
    for _attempt in 0..5 {
        let Some(lay) = layout(a, &values, extra, &mut rng) else { continue };
        let mut previous: Option<Vec<Perm>> = None;
        let Some(labels) = fiber_labels(a, &lay.base) else { continue };
        let mut bits = 53;
        loop {
            let Some(fiber) = labelled_fiber(a, &lay.base, &labels, bits) else { break };
            let perms = if bits == 53 {
                loop_perms::<K, f64>(a, &lay, &fiber, bits)
            } else if bits == 106 {
                loop_perms::<K, DoubleDouble>(a, &lay, &fiber, bits)
            } else {
                loop_perms::<K, BigFloat>(a, &lay, &fiber, bits)
            };
            let Some(perms) = perms else { break };
            if previous.as_ref() == Some(&perms) {
                return assemble(m, &lay, perms, &fiber, bits);
            }
            previous = Some(perms);
            bits *= 2;
            if bits > cfg.precision_cap {
                return Err(Error::PrecisionCap(cfg.precision_cap));
            }
        }
    }
    Err(Error::NearCriticalBase)
}

/// Fiber over the base in a deterministic label order.
fn fiber_labels<K: ExactField>(a: &RatMap<K>, base: &K) -> Option<Vec<[f64; 2]>> {
    let f = a.p().clone() - a.q().scale(base);
    let mut roots: Vec<C64> = approximate_roots(&f, 64).iter().map(to_c64).collect();
    if roots.len() != a.degree() {
        return None;
    }
    roots.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
    Some(roots.iter().map(|z| [z.re, z.im]).collect())
}

fn assemble<K: ExactField>(m: usize, lay: &Layout<K>, mut perms: Vec<Perm>, fiber: &[CBig], stable_bits: u32) -> Result<PermGroup<K>> {
    let big = perms.pop().unwrap();
    let product = perms.iter().fold(Perm::identity(m), |acc, g| acc.then(g));
    if product != big || lay.infinity_branch == big.is_identity() {
        return Err(Error::NearCriticalBase);
    }
    let mut branch_points: Vec<String> = lay.lassos.iter().map(|(n, _)| n.clone()).collect();
    if lay.infinity_branch {
        perms.push(big.inverse());
        branch_points.push("infinity".into());
    }
    let g = PermGroup {
        degree: m,
        generators: perms,
        branch_points,
        base: lay.base.clone(),
        base_point: [lay.base_c.re, lay.base_c.im],
        fiber: fiber.iter().map(|z| {
            let c = to_c64(z);
            [c.re, c.im]
        }).collect(),
        stable_bits,
    };
    if !g.is_transitive() {
        return Err(Error::InvalidArgument("monodromy is not transitive".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;

    type G = QuadRat<1>;

    fn group(s: &str) -> PermGroup<G> {
        let a: RatMap<G> = parse_map(s).unwrap();
        monodromy_group(&a, &Config::default()).unwrap()
    }

    #[test]
    fn power_map_is_cyclic() {
        let g = group("z^4");
        assert_eq!(g.generators.len(), 2);
        assert!(g.product_is_identity());
        assert_eq!(g.order(), BigUint::from(4u32));
        assert_eq!(g.generators[0].cycle_type(), vec![4]);
        assert_eq!(g.block_systems().len(), 1);
    }

    #[test]
    fn simple_maps_have_full_symmetric_group() {
        let g = group("(z^2+1)/z");
        assert_eq!(g.order(), BigUint::from(2u32));
        let g = group("(z^3+1)/z");
        assert_eq!(g.generators.len(), 4);
        assert!(g.generators.iter().all(|p| p.cycle_type() == vec![2, 1]));
        assert!(g.product_is_identity());
        assert_eq!(g.order(), BigUint::from(6u32));
    }

    #[test]
    fn finite_value_at_infinity_is_avoided() {
        // the value 1 at infinity is not critical
        let g = group("(z^3+2)/(z^3-z+1)");
        assert!(g.product_is_identity());
        assert_eq!(g.order(), BigUint::from(6u32));
    }
}
