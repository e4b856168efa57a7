//! Orbifold structures on the sphere, the canonical pair of a rational map,
//! the cubic Lattès test and the generalized Lattès certificate.
//!
//! Singular points are kept as exact [`PointSet`]s grouped by their value of
//! `nu`, so every comparison here is decided by polynomial gcds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::arith::{AlgebraicPoint, ComplexBall};
use crate::certificate::{Certificate, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::poly_to_string;
use crate::poly::{resultant, resultant_formal_bivariate, Poly};
use crate::ratmap::{describe_point, CriticalData, PointSet, RatMap};
use crate::scalar::ExactField;

/// A ramification function: `nu` on each group, 1 elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbifold<K> {
    groups: Vec<(PointSet<K>, u32)>,
}

impl<K: ExactField> Default for Orbifold<K> {
    fn default() -> Self {
        Orbifold { groups: Vec::new() }
    }
}

impl<K: ExactField> Orbifold<K> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an orbifold from `(points, nu)` pairs. Groups with equal `nu`
    /// are merged; `nu <= 1` entries are dropped.
    pub fn new(groups: Vec<(PointSet<K>, u32)>) -> Result<Self> {
        let mut o = Orbifold::empty();
        for (s, nu) in groups {
            if nu <= 1 || s.is_empty() {
                continue;
            }
            if !s.is_disjoint(&o.support()) {
                return Err(Error::InvalidArgument("orbifold points must be distinct".into()));
            }
            o.insert(s, nu);
        }
        Ok(o)
    }

    fn insert(&mut self, s: PointSet<K>, nu: u32) {
        match self.groups.iter_mut().find(|(_, n)| *n == nu) {
            Some(g) => g.0 = g.0.union(&s),
            None => {
                self.groups.push((s, nu));
                self.groups.sort_by(|a, b| b.1.cmp(&a.1));
            }
        }
    }

    pub fn groups(&self) -> &[(PointSet<K>, u32)] {
        &self.groups
    }

    /// The singular set `c(O)`.
    pub fn support(&self) -> PointSet<K> {
        self.groups.iter().fold(PointSet::empty(), |acc, (s, _)| acc.union(s))
    }

    /// `nu` on a piece lying inside one group or outside the support.
    pub fn nu_on(&self, piece: &PointSet<K>) -> u32 {
        self.groups.iter().find(|(s, _)| !s.is_disjoint(piece)).map_or(1, |g| g.1)
    }

    /// The values of `nu` above 1 with multiplicity, descending.
    pub fn signature(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for (s, nu) in &self.groups {
            v.extend(std::iter::repeat(*nu).take(s.len()));
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn euler_characteristic(&self) -> BigRational {
        euler_characteristic(&self.signature())
    }

    /// Isolated singular points with their `nu`.
    pub fn points(&self, cap: u32) -> Result<Vec<(AlgebraicPoint<K>, u32)>> {
        let mut out = Vec::new();
        for (s, nu) in &self.groups {
            for p in s.points(cap)? {
                out.push((p, *nu));
            }
        }
        Ok(out)
    }

    pub fn describe(&self, cap: u32) -> Result<Vec<SingularPoint>> {
        Ok(self
            .points(cap)?
            .iter()
            .map(|(p, nu)| SingularPoint { point: describe_point(p), nu: *nu })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub point: String,
    pub nu: u32,
}

/// `2 + sum (1/nu - 1)`.
pub fn euler_characteristic(signature: &[u32]) -> BigRational {
    let one = BigRational::one();
    signature.iter().fold(BigRational::from_integer(BigInt::from(2)), |acc, &nu| {
        acc + BigRational::new(BigInt::one(), BigInt::from(nu)) - &one
    })
}

/// `(O_1, O_2)`: `nu_2` is the lcm of the local degrees over each value and
/// `nu_1(z) = nu_2(A(z)) / deg_z A`.
pub fn canonical_orbifolds<K: ExactField>(a: &RatMap<K>) -> (Orbifold<K>, Orbifold<K>) {
    let portrait = a.portrait();
    let mut o2 = Orbifold::empty();
    for class in &portrait.classes {
        let nu = class.collection.iter().fold(1u32, |l, &e| l.lcm(&e));
        if nu > 1 {
            o2.insert(class.values.clone(), nu);
        }
    }
    let crit = CriticalData::of(a);
    let crit_sets: Vec<PointSet<K>> = crit.sets().into_iter().map(|(s, _)| s).collect();
    let mut o1 = Orbifold::empty();
    for (values, nu2) in o2.groups.clone() {
        let pre = values.preimage(a);
        let mut inputs = vec![pre.clone()];
        inputs.extend(crit_sets.iter().cloned());
        for atom in PointSet::atoms(&inputs) {
            if !atom.is_subset(&pre) {
                continue;
            }
            let d = crit.local_degree_on(&atom);
            let nu1 = nu2 / d;
            if nu1 > 1 {
                o1.insert(atom, nu1);
            }
        }
    }
    (o1, o2)
}

/// Pieces of the fibers over `c(O_2) ∪ A(c(O_1))` on which `nu_1`, the
/// local degree and `nu_2(A(.))` are constant, with those three numbers.
fn fiber_data<K: ExactField>(a: &RatMap<K>, o1: &Orbifold<K>, o2: &Orbifold<K>) -> Vec<(u32, u32, u32)> {
    let targets = o2.support().union(&o1.support().image(a));
    let fiber = targets.preimage(a);
    let crit = CriticalData::of(a);
    let mut inputs = vec![fiber.clone()];
    inputs.extend(o1.groups.iter().map(|(s, _)| s.clone()));
    inputs.extend(crit.sets().into_iter().map(|(s, _)| s));
    inputs.extend(o2.groups.iter().map(|(s, _)| s.preimage(a)));
    PointSet::atoms(&inputs)
        .into_iter()
        .filter(|x| x.is_subset(&fiber))
        .map(|x| (o1.nu_on(&x), crit.local_degree_on(&x), o2.nu_on(&x.image(a))))
        .collect()
}

/// `nu_2(A(z)) = nu_1(z) deg_z A` everywhere.
pub fn is_covering<K: ExactField>(a: &RatMap<K>, o1: &Orbifold<K>, o2: &Orbifold<K>) -> bool {
    fiber_data(a, o1, o2).into_iter().all(|(n1, d, n2)| n2 == n1 * d)
}

/// `nu_2(A(z)) = nu_1(z) gcd(deg_z A, nu_2(A(z)))` everywhere.
pub fn is_minimal_holomorphic<K: ExactField>(a: &RatMap<K>, o1: &Orbifold<K>, o2: &Orbifold<K>) -> bool {
    fiber_data(a, o1, o2).into_iter().all(|(n1, d, n2)| n2 == n1 * d.gcd(&n2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LattesVerdict {
    Lattes,
    NotLattes,
}

impl LattesVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            LattesVerdict::Lattes => "LATTES",
            LattesVerdict::NotLattes => "NOT_LATTES",
        }
    }
}

/// A simple cubic is Lattès exactly when its two canonical orbifolds have
/// the same singular points.
pub fn cubic_lattes_test<K: ExactField>(a: &RatMap<K>) -> Result<LattesVerdict> {
    if a.degree() != 3 || !a.is_simple() {
        return Err(Error::NotSimple);
    }
    let (o1, o2) = canonical_orbifolds(a);
    Ok(if o1.support() == o2.support() { LattesVerdict::Lattes } else { LattesVerdict::NotLattes })
}

fn describe_set<K: ExactField>(s: &PointSet<K>) -> String {
    let f = poly_to_string(s.finite_part(), "t");
    if s.has_infinity() {
        format!("roots of {f} and infinity")
    } else {
        format!("roots of {f}")
    }
}

/// Certificate that `T(V(T)) ∩ V(T) = ∅` for `T = a` (degree at least 5) or
/// `T = a^3`. A pass rules out generalized Lattès maps.
pub fn generalized_lattes_genericity<K: ExactField>(a: &RatMap<K>, cfg: &Config) -> Result<Certificate> {
    let m = a.degree();
    if m < 2 {
        return Err(Error::InvalidArgument("degree at least 2 required".into()));
    }
    if m >= 5 {
        return Ok(direct_certificate(a));
    }
    cfg.check_degree(m.pow(3) as u64)?;
    let v = a.portrait().values();
    let route = ball_route(a, &v, cfg)?;
    if let BallOutcome::Separated(bits) | BallOutcome::Resolved(_, bits) = &route {
        let common = match &route {
            BallOutcome::Resolved(c, _) => c.clone(),
            _ => PointSet::empty(),
        };
        let verdict = if common.is_empty() { Verdict::Pass } else { Verdict::Fail };
        let mut cert = Certificate::new("generalized_lattes_genericity", verdict)
            .with("T", "A^3")
            .with("V(A)", describe_set(&v))
            .with("route", "ball_arithmetic")
            .with("precision_bits", *bits);
        if !common.is_empty() {
            cert.push("common_points", describe_set(&common));
        }
        return Ok(cert);
    }
    // critical values of a^3 by the chain rule
    let av = v.image(a);
    let aav = av.image(a);
    let vt = v.union(&av).union(&aav);
    let a3v = aav.image(a);
    let a4v = a3v.image(a);
    let a5v = a4v.image(a);
    let tvt = a3v.union(&a4v).union(&a5v);
    let res = resultant(vt.finite_part(), tvt.finite_part());
    let common = vt.intersect(&tvt);
    let verdict = if common.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let mut cert = Certificate::new("generalized_lattes_genericity", verdict)
        .with("T", "A^3")
        .with("V(T)", describe_set(&vt))
        .with("T(V(T))", describe_set(&tvt))
        .with("Res_t(R,S)", &res)
        .with("infinity_in_V", vt.has_infinity())
        .with("infinity_in_T(V)", tvt.has_infinity());
    if !common.is_empty() {
        cert.push("common_points", describe_set(&common));
    }
    Ok(cert)
}

/// A ball in the chart `z` or in the chart `w = 1/z`.
#[derive(Clone)]
enum Charted<K> {
    Z(ComplexBall<K>),
    W(ComplexBall<K>),
}

/// Dyadic centre and a dyadic radius rounded up.
fn tidy<K: ExactField>(b: ComplexBall<K>, bits: u32) -> ComplexBall<K> {
    let b = b.round(bits);
    let scale = BigInt::one() << (bits + 8);
    let r = (b.radius * BigRational::from_integer(scale.clone())).ceil();
    ComplexBall::new(b.center, r / BigRational::from_integer(scale))
}

fn eval_ball<K: ExactField>(p: &Poly<K>, z: &ComplexBall<K>, bits: u32) -> ComplexBall<K> {
    let mut acc = ComplexBall::exact(K::zero());
    for c in p.coeffs().iter().rev() {
        acc = tidy(acc.mul(z).add(&ComplexBall::exact(c.clone())), bits);
    }
    acc
}

/// `w^m f(1/w)`.
fn reversed<K: ExactField>(f: &Poly<K>, m: usize) -> Poly<K> {
    Poly::new((0..=m).map(|k| f.coeff(m - k)).collect())
}

fn image_ball<K: ExactField>(a: &RatMap<K>, rev: &(Poly<K>, Poly<K>), z: &Charted<K>, bits: u32) -> Option<Charted<K>> {
    let (num, den) = match z {
        Charted::Z(b) => (eval_ball(a.p(), b, bits), eval_ball(a.q(), b, bits)),
        Charted::W(b) => (eval_ball(&rev.0, b, bits), eval_ball(&rev.1, b, bits)),
    };
    if let Some(v) = num.div(&den) {
        Some(Charted::Z(tidy(v, bits)))
    } else {
        den.div(&num).map(|w| Charted::W(tidy(w, bits)))
    }
}

fn charted_disjoint<K: ExactField>(x: &Charted<K>, y: &Charted<K>) -> bool {
    match (x, y) {
        (Charted::Z(a), Charted::Z(b)) | (Charted::W(a), Charted::W(b)) => a.disjoint(b),
        (Charted::Z(a), Charted::W(b)) | (Charted::W(b), Charted::Z(a)) => {
            a.inv().map_or(false, |ai| ai.disjoint(b)) || b.inv().map_or(false, |bi| bi.disjoint(a))
        }
    }
}

enum BallOutcome<K> {
    /// Every ball of the first three levels misses every ball of the last three.
    Separated(u32),
    /// Overlaps settled exactly; the common part, possibly empty.
    Resolved(PointSet<K>, u32),
    Unresolved,
}

fn same_exact<K: ExactField>(x: &Charted<K>, y: &Charted<K>) -> bool {
    match (x, y) {
        (Charted::Z(a), Charted::Z(b)) | (Charted::W(a), Charted::W(b)) => a.is_exact() && b.is_exact() && a.center == b.center,
        _ => false,
    }
}

/// Compares `V ∪ A(V) ∪ A^2(V)` with `A^3(V) ∪ A^4(V) ∪ A^5(V)` by pushing
/// isolating balls forward. Pairs that keep overlapping are settled by exact
/// images of the defining factors.
fn ball_route<K: ExactField>(a: &RatMap<K>, v: &PointSet<K>, cfg: &Config) -> Result<BallOutcome<K>> {
    let m = a.degree();
    let rev = (reversed(a.p(), m), reversed(a.q(), m));
    let pts = v.points(cfg.precision_cap)?;
    let ladder: Vec<u32> = cfg.precision_ladder().into_iter().filter(|&b| b <= 512).collect();
    for (step, &bits) in ladder.iter().enumerate() {
        let target = BigRational::new(BigInt::one(), BigInt::one() << (bits / 2));
        let mut orbits = Vec::with_capacity(pts.len());
        for p in &pts {
            let start = match p {
                AlgebraicPoint::Infinity => Charted::W(ComplexBall::exact(K::zero())),
                finite => Charted::Z(tidy(finite.refine(&target, cfg.precision_cap)?.ball().unwrap().clone(), bits)),
            };
            let mut orbit = vec![start];
            for _ in 0..5 {
                match image_ball(a, &rev, orbit.last().unwrap(), bits) {
                    Some(next) => orbit.push(next),
                    None => break,
                }
            }
            orbits.push(orbit);
        }
        if orbits.iter().any(|o| o.len() < 6) {
            continue;
        }
        let mut overlaps = Vec::new();
        for (s, o) in orbits.iter().enumerate() {
            for i in 0..3 {
                for (t, q) in orbits.iter().enumerate() {
                    for j in 3..6 {
                        if !charted_disjoint(&o[i], &q[j]) {
                            overlaps.push((s, i, t, j, same_exact(&o[i], &q[j])));
                        }
                    }
                }
            }
        }
        if overlaps.is_empty() {
            return Ok(BallOutcome::Separated(bits));
        }
        if step + 1 < ladder.len() && !overlaps.iter().all(|o| o.4) {
            continue;
        }
        let atom = |k: usize| match &pts[k] {
            AlgebraicPoint::Infinity => PointSet::infinity(),
            AlgebraicPoint::Finite { factor, .. } => PointSet::from_poly(factor, false),
        };
        let mut levels: Vec<Vec<PointSet<K>>> = (0..pts.len()).map(|k| vec![atom(k)]).collect();
        let mut level = |k: usize, n: usize| {
            while levels[k].len() <= n {
                let next = levels[k].last().unwrap().image(a);
                levels[k].push(next);
            }
            levels[k][n].clone()
        };
        let mut common = PointSet::empty();
        for (s, i, t, j, _) in overlaps {
            let x = level(s, i);
            let y = level(t, j);
            common = common.union(&x.intersect(&y));
        }
        return Ok(BallOutcome::Resolved(common, bits));
    }
    Ok(BallOutcome::Unresolved)
}

fn direct_certificate<K: ExactField>(a: &RatMap<K>) -> Certificate {
    let m = a.degree();
    let r = a.critical_resultant();
    let lifted: Poly<Poly<K>> = r.map_coeffs(|c| Poly::constant(c.clone()));
    let s = resultant_formal_bivariate(&lifted, &a.pencil(), 2 * m - 2, m);
    let res = resultant(&r, &s);
    let v_inf = a.portrait().values().has_infinity();
    // infinity in A(V): a finite critical value at a pole, or A(inf) = inf
    let av_inf = (r.deg() > 0 && r.gcd(a.q()).deg() > 0) || (v_inf && a.at_infinity().is_none());
    let mut fails = Vec::new();
    if res.is_zero() {
        fails.push(format!("finite: roots of {}", poly_to_string(&r.gcd(&s), "t")));
    }
    if v_inf && av_inf {
        fails.push("infinity".to_string());
    }
    let verdict = if fails.is_empty() { Verdict::Pass } else { Verdict::Fail };
    let mut cert = Certificate::new("generalized_lattes_genericity", verdict)
        .with("T", "A")
        .with("R", poly_to_string(&r, "t"))
        .with("S", poly_to_string(&s, "t"))
        .with("Res_t(R,S)", &res)
        .with("infinity_in_V", v_inf)
        .with("infinity_in_T(V)", av_inf);
    if !fails.is_empty() {
        cert.push("common_points", fails.join("; "));
    }
    cert
}

/// The same verdict from exact point sets, for any `T`.
pub fn genericity_by_pointsets<K: ExactField>(t: &RatMap<K>) -> Verdict {
    let v = t.portrait().values();
    if v.is_disjoint(&v.image(t)) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;
    use num_traits::Zero;

    type G = QuadRat<1>;
    type E = QuadRat<3>;

    fn pm(s: &str) -> RatMap<G> {
        parse_map(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn characteristics() {
        assert_eq!(euler_characteristic(&[2, 2, 2, 2]), BigRational::zero());
        assert_eq!(euler_characteristic(&[2, 2]), q(1, 1));
        assert_eq!(euler_characteristic(&[2, 3, 6]), BigRational::zero());
        assert_eq!(euler_characteristic(&[]), q(2, 1));
        assert_eq!(euler_characteristic(&[3, 3, 3]), BigRational::zero());
    }

    #[test]
    fn canonical_pair_of_simple_cubic() {
        let a = pm("(z^3+1)/z");
        let (o1, o2) = canonical_orbifolds(&a);
        assert_eq!(o2.signature(), vec![2, 2, 2, 2]);
        assert_eq!(o1.signature(), vec![2, 2, 2, 2]);
        assert!(o2.support().has_infinity());
        assert!(!o1.support().has_infinity());
        assert!(is_covering(&a, &o1, &o2));
        assert_eq!(o1.euler_characteristic(), BigRational::from_integer(3.into()) * o2.euler_characteristic());
        assert_eq!(cubic_lattes_test(&a), Ok(LattesVerdict::NotLattes));
    }

    #[test]
    fn canonical_pair_of_square() {
        let a = pm("z^2");
        let (o1, o2) = canonical_orbifolds(&a);
        assert_eq!(o2.signature(), vec![2, 2]);
        assert_eq!(o2.support(), PointSet::from_poly(&Poly::x(), true));
        assert!(o1.signature().is_empty());
        assert!(is_covering(&a, &o1, &o2));
        assert!(!is_covering(&a, &o2, &o2));
        assert!(is_minimal_holomorphic(&a, &Orbifold::empty(), &o2));
        let one = Orbifold::new(vec![(PointSet::point(&Some(G::from_ints(1, 0))), 2)]).unwrap();
        assert!(!is_minimal_holomorphic(&a, &Orbifold::empty(), &one));
    }

    #[test]
    fn cubic_power_is_not_simple() {
        assert_eq!(cubic_lattes_test(&pm("z^3")), Err(Error::NotSimple));
    }

    #[test]
    fn lattes_cubic_over_eisenstein_field() {
        let a: RatMap<E> = parse_map("(1+sqrt(-3))*(z^3+4)/(6*z^2)").unwrap();
        assert!(a.is_simple());
        let (o1, o2) = canonical_orbifolds(&a);
        assert_eq!(o2.signature(), vec![2, 2, 2, 2]);
        assert!(is_covering(&a, &o1, &o2));
        assert_eq!(cubic_lattes_test(&a), Ok(LattesVerdict::Lattes));
    }

    #[test]
    fn genericity_examples() {
        let cfg = Config::default();
        let sq = generalized_lattes_genericity(&pm("z^2"), &cfg).unwrap();
        assert_eq!(sq.verdict, Verdict::Fail);
        let j = pm("(z^2+1)/z");
        let c = generalized_lattes_genericity(&j, &cfg).unwrap();
        let t = j.iterate(3, &cfg).unwrap();
        assert_eq!(t.portrait().values(), {
            let v = j.portrait().values();
            v.union(&v.image(&j)).union(&v.image(&j).image(&j))
        });
        assert_eq!(c.verdict, genericity_by_pointsets(&t));
        for s in ["z^2-2", "z^2+i", "(z^2-z)/(z+2)", "z^3-3*z", "(z^3+1)/z"] {
            let a = pm(s);
            let c = generalized_lattes_genericity(&a, &cfg).unwrap();
            assert_eq!(c.witness("route"), Some("ball_arithmetic"), "{s}");
            assert_eq!(c.verdict, genericity_by_pointsets(&a.iterate(3, &cfg).unwrap()), "{s}");
        }
    }

    #[test]
    fn direct_route_agrees_with_pointsets() {
        let cfg = Config::default();
        for s in ["(z^5+2*z+1)/(3*z^2-1)", "z^5+z^2-1", "(z^5+1)/z^4", "z^5", "(2*z^5-i)/(z^3+z)"] {
            let a = pm(s);
            let c = generalized_lattes_genericity(&a, &cfg).unwrap();
            assert_eq!(c.verdict, genericity_by_pointsets(&a), "{s}");
        }
    }
}
