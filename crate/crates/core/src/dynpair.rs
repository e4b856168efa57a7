//! Pairs of maps: Möbius conjugacy, the graph curves `y = α∘A1^s(x)` and
//! `x = A1^s∘α⁻¹(y)`, and semiconjugacies `A^r ∘ X = X ∘ B`.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::certificate::{Certificate, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::poly_to_string;
use crate::monodromy::audit_hypothesis;
use crate::orbifold::generalized_lattes_genericity;
use crate::poly::{approximate_roots, resultant_bivariate, squarefree_part, Poly};
use crate::ratmap::{multiplier, CriticalData, Mobius, Pt, RatMap};
use crate::scalar::ExactField;
use crate::search::{clearly_differ, eval64, mobius_candidates, right_mobius_links, Constraint, NPt, C64};
use crate::numeric::to_c64;

/// `a^n`, the identity for `n = 0`.
fn power<K: ExactField>(a: &RatMap<K>, n: u32, cfg: &Config) -> Result<RatMap<K>> {
    if n == 0 {
        Ok(RatMap::identity())
    } else {
        a.iterate(n, cfg)
    }
}

/// `prod (t - lambda)` over the fixed points, with multiplicity.
pub fn multiplier_polynomial<K: ExactField>(a: &RatMap<K>) -> Poly<K> {
    let fp = a.fixed_point_poly();
    let w = a.wronskian();
    let q2 = a.q().clone() * a.q();
    let n = w.deg().max(q2.deg());
    // t Q(z)^2 - W(z) as a polynomial in z over K[t]
    let g: Poly<Poly<K>> = Poly::new((0..=n).map(|k| Poly::new(vec![-w.coeff(k), q2.coeff(k)])).collect());
    let lifted: Poly<Poly<K>> = fp.map_coeffs(|c| Poly::constant(c.clone()));
    let mut m = if fp.deg() == 0 { Poly::constant(K::one()) } else { resultant_bivariate(&lifted, &g).monic() };
    if a.fixes_infinity() {
        // infinity is fixed with multiplicity m + 1 - deg(P - zQ)
        let l = multiplier(a, &None).expect("infinity is fixed");
        for _ in fp.deg()..a.degree() + 1 {
            m = m * Poly::linear_root(l.clone());
        }
    }
    m
}

fn fixed_points<K: ExactField>(a: &RatMap<K>, bits: u32) -> Vec<NPt> {
    let mut v: Vec<NPt> = approximate_roots(&squarefree_part(&a.fixed_point_poly()), bits).into_iter().map(Some).collect();
    if a.fixes_infinity() {
        v.push(None);
    }
    v
}

fn critical_points<K: ExactField>(a: &RatMap<K>, bits: u32) -> Vec<NPt> {
    let mut v: Vec<NPt> = approximate_roots(&squarefree_part(&a.wronskian()), bits).into_iter().map(Some).collect();
    if CriticalData::of(a).local_degree_at_infinity > 1 {
        v.push(None);
    }
    v
}

/// Every Möbius `α` with `a2 ∘ α = α ∘ a1`, each verified exactly.
pub fn conjugacies<K: ExactField>(a1: &RatMap<K>, a2: &RatMap<K>, cfg: &Config) -> Result<Vec<Mobius<K>>> {
    if a1.degree() != a2.degree() || a1.degree() < 2 {
        return Err(Error::InvalidArgument("maps of equal degree at least 2 expected".into()));
    }
    if multiplier_polynomial(a1) != multiplier_polynomial(a2) {
        return Ok(Vec::new());
    }
    for bits in cfg.precision_ladder() {
        let c1 = critical_points(a1, bits);
        let c2 = critical_points(a2, bits);
        let cons = [
            Constraint { src: fixed_points(a1, bits), dst: fixed_points(a2, bits) },
            Constraint { src: c1, dst: c2 },
        ];
        let distinct: usize = cons.iter().map(|c| c.src.len()).sum();
        if distinct < 3 {
            return Err(Error::DegenerateReferenceData);
        }
        let mut found: Vec<Mobius<K>> = Vec::new();
        let mut unresolved = 0;
        for s in mobius_candidates::<K>(&cons, bits) {
            if let Some(al) = &s.exact {
                if a2.pre_mobius(al) == a1.post_mobius(al) {
                    if !found.contains(al) {
                        found.push(al.clone());
                    }
                    continue;
                }
            }
            if !clearly_differ(|z| eval64(a2, s.apply64(z)), |z| s.apply64(eval64(a1, z))) {
                unresolved += 1;
            }
        }
        if unresolved == 0 {
            found.sort_by_key(|m| (!m.is_identity(), m.to_string()));
            return Ok(found);
        }
    }
    Err(Error::PrecisionCap(cfg.precision_cap))
}

/// Some `α` with `a2 = α ∘ a1 ∘ α⁻¹`, the identity when it qualifies.
pub fn find_conjugating<K: ExactField>(a1: &RatMap<K>, a2: &RatMap<K>, cfg: &Config) -> Result<Option<Mobius<K>>> {
    Ok(conjugacies(a1, a2, cfg)?.into_iter().next())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Orientation {
    YOfX,
    XOfY,
}

impl Orientation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Orientation::YOfX => "Y_OF_X",
            Orientation::XOfY => "X_OF_Y",
        }
    }
}

/// `y = (α ∘ base^s)(x)` or `x = (base^s ∘ α⁻¹)(y)`.
#[derive(Clone)]
pub struct GraphCurve<K> {
    pub orientation: Orientation,
    pub mobius: Mobius<K>,
    pub s: u32,
    pub base: RatMap<K>,
}

impl<K: ExactField> GraphCurve<K> {
    /// The map whose graph this is, in the curve's orientation.
    pub fn map(&self, cfg: &Config) -> Result<RatMap<K>> {
        let it = power(&self.base, self.s, cfg)?;
        Ok(match self.orientation {
            Orientation::YOfX => it.post_mobius(&self.mobius),
            Orientation::XOfY => it.pre_mobius(&self.mobius.inverse()),
        })
    }

    pub fn describe(&self, cfg: &Config) -> Result<String> {
        let g = self.map(cfg)?;
        Ok(match self.orientation {
            Orientation::YOfX => format!("y = {}", g.to_string().replace('z', "x")),
            Orientation::XOfY => format!("x = {}", g.to_string().replace('z', "y")),
        })
    }
}

impl<K: ExactField> std::fmt::Debug for GraphCurve<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphCurve")
            .field("orientation", &self.orientation)
            .field("mobius", &self.mobius.to_string())
            .field("s", &self.s)
            .field("base", &self.base.to_string())
            .finish()
    }
}

/// Whether `(a1, a2)^d` maps the curve into itself, by the exact identity
/// `a2^d ∘ g = g ∘ a1^d` (resp. `a1^d ∘ g = g ∘ a2^d` for `x = g(y)`).
///
/// Both sides have degree at most `D = deg(outer)^d deg(g)`, so they are
/// equal once they agree at `2D + 1` points: the cross difference of their
/// numerators and denominators has degree `2D`. Evaluating exactly at the
/// integers `0..=2D` avoids composing out the degree-`D` maps.
pub fn verify_invariant<K: ExactField>(c: &GraphCurve<K>, a1: &RatMap<K>, a2: &RatMap<K>, d: u32, cfg: &Config) -> Result<bool> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let g = c.map(cfg)?;
    let (outer, inner) = match c.orientation {
        Orientation::YOfX => (a2, a1),
        Orientation::XOfY => (a1, a2),
    };
    let degree = (outer.degree() as u64).pow(d) * g.degree() as u64;
    cfg.check_degree(degree)?;
    let iterate = |f: &RatMap<K>, mut z: Pt<K>| {
        for _ in 0..d {
            z = f.eval(&z);
        }
        z
    };
    Ok((0..=2 * degree as i64).all(|k| {
        let x = Some(K::from_int(k));
        iterate(outer, g.eval(&x)) == g.eval(&iterate(inner, x))
    }))
}

/// The graph curves with `s <= s_max` in both orientations, for every
/// conjugacy `α`, each verified invariant.
pub fn enumerate_periodic_curves<K: ExactField>(a1: &RatMap<K>, a2: &RatMap<K>, s_max: u32, cfg: &Config) -> Result<Vec<GraphCurve<K>>> {
    let mut out = Vec::new();
    for al in conjugacies(a1, a2, cfg)? {
        for orientation in [Orientation::YOfX, Orientation::XOfY] {
            for s in 0..=s_max {
                let c = GraphCurve { orientation, mobius: al.clone(), s, base: a1.clone() };
                if verify_invariant(&c, a1, a2, 1, cfg)? {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of the search for unexpected invariant graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphProbe {
    pub max_degree: u32,
    /// No `y = g(x)` with `a2 ∘ g = g ∘ a1` and `deg g <= max_degree`.
    pub y_of_x_excluded: bool,
    /// No `x = g(y)` with `a1 ∘ g = g ∘ a2` and `deg g <= max_degree`.
    pub x_of_y_excluded: bool,
}

impl GraphProbe {
    pub fn finds_nothing(&self) -> bool {
        self.y_of_x_excluded && self.x_of_y_excluded
    }
}

fn fixed_multipliers<K: ExactField>(a: &RatMap<K>, bits: u32) -> Vec<C64> {
    let fp = squarefree_part(&a.fixed_point_poly());
    let w = a.wronskian();
    let mut out: Vec<C64> = approximate_roots(&fp, bits)
        .into_iter()
        .map(|z| {
            let z = to_c64(&z);
            let wz = eval_c64(&w, z);
            let qz = eval_c64(a.q(), z);
            wz / (qz * qz)
        })
        .collect();
    if a.fixes_infinity() {
        out.push(to_c64(&multiplier(a, &None).unwrap().to_complex::<crate::arith::BigFloat>(64)));
    }
    out
}

fn eval_c64<K: ExactField>(p: &Poly<K>, z: C64) -> C64 {
    let mut acc = Complex::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * z + to_c64(&c.to_complex::<f64>(53));
    }
    acc
}

/// If `g ∘ a = b ∘ g` with `g(p) = q` of local degree `e`, the multipliers
/// satisfy `lambda_b(q) = lambda_a(p)^e`. A fixed point of `a` with no such
/// partner excludes every `g` of degree at most `k`.
fn excluded_by_multipliers(la: &[C64], lb: &[C64], k: u32) -> bool {
    la.iter().any(|&l| {
        !(1..=k as i32).any(|e| {
            let p = l.powi(e);
            lb.iter().any(|&m| (p - m).norm() <= 1e-8 * (1.0 + m.norm()))
        })
    })
}

/// Falsification probe for invariant graphs of degree at most `k`, by the
/// multiplier obstruction at fixed points.
pub fn probe_invariant_graphs<K: ExactField>(a1: &RatMap<K>, a2: &RatMap<K>, k: u32, cfg: &Config) -> GraphProbe {
    let bits = cfg.precision.max(128);
    let (l1, l2) = (fixed_multipliers(a1, bits), fixed_multipliers(a2, bits));
    GraphProbe {
        max_degree: k,
        y_of_x_excluded: excluded_by_multipliers(&l1, &l2, k),
        x_of_y_excluded: excluded_by_multipliers(&l2, &l1, k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SemiconjugacyVerdict {
    Confirms,
    CounterexampleDump,
    HypothesisNotCertified,
}

impl SemiconjugacyVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SemiconjugacyVerdict::Confirms => "CONFIRMS",
            SemiconjugacyVerdict::CounterexampleDump => "COUNTEREXAMPLE_DUMP",
            SemiconjugacyVerdict::HypothesisNotCertified => "HYPOTHESIS_NOT_CERTIFIED",
        }
    }
}

#[derive(Clone)]
pub struct SemiconjugacyReport<K> {
    pub verdict: SemiconjugacyVerdict,
    pub l: Option<u32>,
    pub mu: Option<Mobius<K>>,
    pub certificates: Vec<Certificate>,
}

impl<K: ExactField> std::fmt::Debug for SemiconjugacyReport<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SemiconjugacyReport")
            .field("verdict", &self.verdict)
            .field("l", &self.l)
            .field("mu", &self.mu.as_ref().map(|m| m.to_string()))
            .finish()
    }
}

/// For `a^r ∘ x = x ∘ b`, looks for `x = a^l ∘ mu` with `b = mu⁻¹ ∘ a^r ∘ mu`.
pub fn semiconjugacy_check<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>, x: &RatMap<K>, r: u32, cfg: &Config) -> Result<SemiconjugacyReport<K>> {
    let ar = a.iterate(r, cfg)?;
    cfg.check_degree((ar.degree() * x.degree()) as u64)?;
    if r == 0 || ar.compose(x) != x.compose(b) {
        return Err(Error::InputNotSemiconjugate);
    }
    let mut certificates = vec![audit_hypothesis(a)?];
    if let Ok(g) = generalized_lattes_genericity(a, cfg) {
        certificates.push(g);
    }
    let certified = certificates.iter().all(|c| c.passed());
    let (m, n) = (a.degree(), x.degree());
    let mut l = 0u32;
    let mut deg = 1usize;
    while deg < n {
        deg *= m;
        l += 1;
    }
    let mut mu = None;
    if deg == n {
        let al = power(a, l, cfg)?;
        let links = if l == 0 {
            x.to_mobius().into_iter().collect()
        } else {
            right_mobius_links(x, &al, cfg, 0x7334)?.0
        };
        mu = links.into_iter().find(|nu| ar.pre_mobius(nu).post_mobius(&nu.inverse()) == *b);
    }
    let verdict = match (&mu, certified) {
        (Some(_), _) => SemiconjugacyVerdict::Confirms,
        (None, true) => SemiconjugacyVerdict::CounterexampleDump,
        (None, false) => SemiconjugacyVerdict::HypothesisNotCertified,
    };
    let mut cert = Certificate::new("semiconjugacy", if mu.is_some() { Verdict::Pass } else { Verdict::Fail })
        .with("A", a)
        .with("B", b)
        .with("X", x)
        .with("r", r);
    if let Some(nu) = &mu {
        cert.push("l", l);
        cert.push("mu", nu);
    }
    certificates.push(cert);
    Ok(SemiconjugacyReport { verdict, l: mu.as_ref().map(|_| l), mu, certificates })
}

/// Text of the multiplier polynomial, for reports.
pub fn multiplier_polynomial_string<K: ExactField>(a: &RatMap<K>) -> String {
    poly_to_string(&multiplier_polynomial(a), "t")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;

    type G = QuadRat<1>;

    fn pm(s: &str) -> RatMap<G> {
        parse_map(s).unwrap()
    }

    #[test]
    fn conjugate_pair() {
        let cfg = Config::default();
        let a1 = pm("(z^2+1)/z");
        let a2 = pm("(z^2-z+1)/(z-1)");
        let al = find_conjugating(&a1, &a2, &cfg).unwrap().unwrap();
        assert_eq!(a2.pre_mobius(&al), a1.post_mobius(&al));
        let all: Vec<String> = conjugacies(&a1, &a2, &cfg).unwrap().iter().map(|m| m.to_string()).collect();
        assert!(all.contains(&"z+1".to_string()), "{all:?}");
    }

    #[test]
    fn multipliers_separate() {
        let cfg = Config::default();
        assert_eq!(multiplier_polynomial_string(&pm("z^2")), "t^3-2*t^2");
        assert!(find_conjugating(&pm("z^2"), &pm("z^2+1"), &cfg).unwrap().is_none());
        let a = pm("(2*z^2-i*z+3)/(z^2+z-1)");
        assert!(find_conjugating(&a, &a, &cfg).unwrap().unwrap().is_identity());
    }

    #[test]
    fn periodic_curves() {
        let cfg = Config::default();
        let a1 = pm("(z^2+2*z-1)/(z+3)");
        let al = Mobius::new(G::from_ints(2, 0), G::from_ints(1, 0), G::from_ints(1, 0), G::from_ints(1, 0)).unwrap();
        let a2 = al.conj_map(&a1);
        let cs = enumerate_periodic_curves(&a1, &a2, 2, &cfg).unwrap();
        assert_eq!(cs.len(), 6);
        for c in &cs {
            assert!(verify_invariant(c, &a1, &a2, 2, &cfg).unwrap());
        }
        let same = enumerate_periodic_curves(&a1, &a1, 0, &cfg).unwrap();
        assert!(same.iter().any(|c| c.describe(&cfg).unwrap() == "y = x"));
        let other = pm("(z^2-3)/(z+2*i)");
        assert!(enumerate_periodic_curves(&a1, &other, 2, &cfg).unwrap().is_empty());
        assert!(probe_invariant_graphs(&a1, &other, 4, &cfg).finds_nothing());
        assert!(!probe_invariant_graphs(&a1, &a2, 4, &cfg).finds_nothing());
    }

    #[test]
    fn invariance_checks() {
        let cfg = Config::default();
        let a1 = pm("(z^2+1)/z");
        let a2 = pm("(z^2-z+1)/(z-1)");
        let al = Mobius::translation(G::from_ints(1, 0));
        let c = GraphCurve { orientation: Orientation::YOfX, mobius: al.clone(), s: 0, base: a1.clone() };
        assert!(verify_invariant(&c, &a1, &a2, 1, &cfg).unwrap());
        let c1 = GraphCurve { s: 1, ..c.clone() };
        assert!(verify_invariant(&c1, &a1, &a2, 2, &cfg).unwrap());
        assert!(!verify_invariant(&c, &a1, &pm("z^2+1"), 1, &cfg).unwrap());
    }

    #[test]
    fn semiconjugacies() {
        let cfg = Config::default();
        let a = pm("(z^2+2*z-1)/(z+3)");
        let mu = Mobius::translation(G::from_ints(1, 0));
        let x = a.iterate(2, &cfg).unwrap().pre_mobius(&mu);
        let b = mu.inverse().conj_map(&a);
        let rep = semiconjugacy_check(&a, &b, &x, 1, &cfg).unwrap();
        assert_eq!(rep.verdict, SemiconjugacyVerdict::Confirms, "{rep:?}");
        assert_eq!(rep.l, Some(2));
        let rep = semiconjugacy_check(&a, &b, &mu.to_map(), 1, &cfg).unwrap();
        assert_eq!(rep.l, Some(0));
        let err = semiconjugacy_check(&a, &pm("z^2+3"), &pm("(z+1)/(z-2)"), 1, &cfg).unwrap_err();
        assert_eq!(err, Error::InputNotSemiconjugate);
    }
}
