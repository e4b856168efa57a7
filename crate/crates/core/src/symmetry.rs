//! Symmetries `mu` with `A ∘ mu = A`: the closed formula for quadratics, the
//! disjointness certificate `mu_A(V) ∩ V = ∅`, the numerical oracle for the
//! symmetries of iterates, and quadratics sharing a right factor.

use crate::arith::{AlgebraicPoint, Distinct};
use crate::certificate::{Certificate, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::poly_to_string;
use crate::monodromy::{audit_hypothesis, decompositions, equivalent, Decomposition};
use crate::poly::{approximate_roots, resultant, resultant_formal_bivariate, squarefree_part, Poly};
use crate::ratmap::{Mobius, PointSet, Pt, RatMap};
use crate::scalar::ExactField;
use crate::search::{clearly_differ, eval64, mobius_candidates, right_mobius_links, Constraint, NPt, C64};

fn require_quadratic<K: ExactField>(a: &RatMap<K>) -> Result<[K; 6]> {
    a.quadratic_coeffs().ok_or_else(|| Error::InvalidArgument(format!("degree {} map, expected 2", a.degree())))
}

/// The involution `mu_A` of a quadratic map.
pub fn sigma_quadratic<K: ExactField>(a: &RatMap<K>) -> Result<Mobius<K>> {
    let [a2, b, c, d, e, f] = require_quadratic(a)?;
    let cd_af = c.clone() * &d - a2.clone() * &f;
    let ce_bf = c.clone() * &e - b.clone() * &f;
    let ae_bd = a2.clone() * &e - b.clone() * &d;
    let af_cd = -cd_af.clone();
    Ok(Mobius::new(cd_af, ce_bf, ae_bd, af_cd).expect("quadratic maps have a nondegenerate involution"))
}

/// `S(t) = Res_z(R(z), num(z) - t den(z))`: the finite `mu`-images of the
/// roots of `R` (at formal degree `dr` for `R`).
fn image_resultant<K: ExactField>(r: &Poly<K>, dr: usize, mu: &Mobius<K>) -> Poly<K> {
    let [a, b, c, d] = mu.coeffs();
    let lifted: Poly<Poly<K>> = r.map_coeffs(|x| Poly::constant(x.clone()));
    let pencil: Poly<Poly<K>> = Poly::new(vec![
        Poly::new(vec![b.clone(), -d.clone()]),
        Poly::new(vec![a.clone(), -c.clone()]),
    ]);
    resultant_formal_bivariate(&lifted, &pencil, dr, 1)
}

fn describe_common<K: ExactField>(g: &Poly<K>) -> String {
    if g.deg() == 1 {
        (-g.coeff(0) / g.coeff(1)).to_string()
    } else {
        format!("root of {}", poly_to_string(g, "t"))
    }
}

/// Disjointness of `V(A)` and `mu_A(V(A))` for a quadratic map, decided by
/// `Res_t(R, S) != 0` plus the checks at infinity.
pub fn emp_certificate<K: ExactField>(a: &RatMap<K>) -> Result<Certificate> {
    require_quadratic(a)?;
    let mu = sigma_quadratic(a)?;
    let r = a.critical_resultant();
    let s = image_resultant(&r, 2, &mu);
    let v_inf = a.portrait().values().has_infinity();
    let res = resultant(&r, &s);
    let mut cert = Certificate::new("emp", Verdict::Pass)
        .with("mu", &mu)
        .with("R", poly_to_string(&r, "t"))
        .with("S", poly_to_string(&s, "t"))
        .with("Res_t(R,S)", &res)
        .with("infinity_in_V", v_inf);
    let mut fail = |label: &str, v: String| {
        if cert.verdict == Verdict::Pass {
            cert.verdict = Verdict::Fail;
            cert.push(label, v);
        }
    };
    if res.is_zero() {
        let g = r.gcd(&s);
        fail("common_point", describe_common(&g));
    }
    if v_inf {
        match mu.apply(&None) {
            None => fail("common_point", "infinity".into()),
            Some(p) => {
                if r.deg() > 0 && r.eval(&p).is_zero() {
                    fail("common_point", p.to_string());
                }
            }
        }
        // a finite critical value sent to infinity
        let inv = mu.inverse();
        if let Some(pole) = inv.apply(&None) {
            if r.deg() > 0 && r.eval(&pole).is_zero() {
                fail("common_point", "infinity".into());
            }
        }
    }
    Ok(cert)
}

/// The same question answered with exact point sets.
pub fn emp_by_pointsets<K: ExactField>(a: &RatMap<K>) -> Result<Verdict> {
    let mu = sigma_quadratic(a)?;
    let v = a.portrait().values();
    let img = v.image(&mu.to_map());
    Ok(if v.is_disjoint(&img) { Verdict::Pass } else { Verdict::Fail })
}

/// Independent route: isolate the critical values, push them through `mu`
/// with ball arithmetic and compare with `certainly_distinct`.
pub fn emp_by_balls<K: ExactField>(a: &RatMap<K>, cap: u32) -> Result<Verdict> {
    let mu = sigma_quadratic(a)?;
    let v: Vec<AlgebraicPoint<K>> = a.portrait().points(cap)?.into_iter().map(|(p, _)| p).collect();
    let mut images = Vec::with_capacity(v.len());
    for p in &v {
        images.push(p.mobius_image(mu.coeffs(), cap)?);
    }
    let mut verdict = Verdict::Pass;
    for x in &v {
        for y in &images {
            match x.certainly_distinct(y, cap) {
                Distinct::Yes => {}
                Distinct::No => return Ok(Verdict::Fail),
                Distinct::Indeterminate => verdict = Verdict::Indeterminate,
            }
        }
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGroup<K> {
    pub elements: Vec<Mobius<K>>,
    /// Whether every candidate was decided exactly.
    pub complete: bool,
}

impl<K: ExactField> SymmetryGroup<K> {
    pub fn contains(&self, m: &Mobius<K>) -> bool {
        self.elements.contains(m)
    }

    pub fn sorted_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.elements.iter().map(|m| m.to_string()).collect();
        v.sort();
        v
    }

    /// Closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|x| {
            self.contains(&x.inverse()) && self.elements.iter().all(|y| self.contains(&x.compose(y)))
        })
    }
}

/// `Sigma(A)` for a quadratic map.
pub fn sigma_group<K: ExactField>(a: &RatMap<K>) -> Result<SymmetryGroup<K>> {
    let mu = sigma_quadratic(a)?;
    Ok(SymmetryGroup { elements: vec![Mobius::identity(), mu], complete: true })
}

/// All `mu` with `A^n ∘ mu = A^n`, found from fibers and verified exactly.
pub fn sigma_infinity_oracle<K: ExactField>(a: &RatMap<K>, n: u32, cfg: &Config) -> Result<SymmetryGroup<K>> {
    let f = a.iterate(n, cfg)?;
    match right_mobius_links(&f, &f, cfg, 0x5151 + n as u64) {
        Ok((mut elements, complete)) => {
            elements.sort_by_key(|m| m.to_string());
            if let Some(i) = elements.iter().position(|m| m.is_identity()) {
                let id = elements.remove(i);
                elements.insert(0, id);
            }
            Ok(SymmetryGroup { elements, complete })
        }
        Err(Error::PrecisionCap(_)) => Ok(SymmetryGroup { elements: vec![Mobius::identity()], complete: false }),
        Err(e) => Err(e),
    }
}

/// Sample points `z` (as many as needed) with pairwise distinct values.
pub(crate) fn separating_points<K: ExactField>(a: &RatMap<K>, count: usize) -> Vec<(Pt<K>, Pt<K>)> {
    let mut out: Vec<(Pt<K>, Pt<K>)> = Vec::new();
    let mut candidates: Vec<Pt<K>> = vec![Some(K::zero()), None, Some(K::one())];
    for k in 2..64i64 {
        candidates.push(Some(K::from_int(-k + 1)));
        candidates.push(Some(K::from_int(k)));
    }
    for z in candidates {
        let v = a.eval(&z);
        if out.iter().all(|(_, w)| *w != v) {
            out.push((z, v));
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// `nu` with `a2 = nu ∘ a1`, when the two quadratics share their involution.
pub fn same_right_factor<K: ExactField>(a1: &RatMap<K>, a2: &RatMap<K>) -> Result<Option<Mobius<K>>> {
    if sigma_quadratic(a1)? != sigma_quadratic(a2)? {
        return Ok(None);
    }
    Ok(left_mobius_link(a1, a2))
}

/// `nu` with `b = nu ∘ a`, if one exists.
pub fn left_mobius_link<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>) -> Option<Mobius<K>> {
    if a.degree() != b.degree() {
        return None;
    }
    let pts = separating_points(a, 3);
    if pts.len() < 3 {
        return None;
    }
    let src = [pts[0].1.clone(), pts[1].1.clone(), pts[2].1.clone()];
    let dst = [b.eval(&pts[0].0), b.eval(&pts[1].0), b.eval(&pts[2].0)];
    let nu = Mobius::from_three(&src, &dst)?;
    if a.post_mobius(&nu) == *b {
        Some(nu)
    } else {
        None
    }
}

/// `V(A)` as an exact point set.
pub fn critical_values<K: ExactField>(a: &RatMap<K>) -> PointSet<K> {
    a.portrait().values()
}

/// Outcome of the search for degree-`m` maps `B != A` with `B^n = A^n`.
#[derive(Clone, PartialEq)]
pub struct RootUniqueness<K> {
    pub unique: bool,
    /// Every `B = nu ∘ A` found with `B^n = A^n`, `B != A`.
    pub witnesses: Vec<RatMap<K>>,
    /// The decompositions of `A^n` form the single class `(A, ..., A)`, so
    /// every such `B` has the form `nu ∘ A`.
    pub single_class: bool,
    /// Every numerical candidate was decided exactly.
    pub complete: bool,
}

impl<K: ExactField> std::fmt::Debug for RootUniqueness<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RootUniqueness")
            .field("unique", &self.unique)
            .field("witnesses", &self.witnesses.iter().map(|b| b.to_string()).collect::<Vec<_>>())
            .field("single_class", &self.single_class)
            .field("complete", &self.complete)
            .finish()
    }
}

/// Fixed points of `f` as numerical points, simple roots only once.
fn fixed_points<K: ExactField>(f: &RatMap<K>, bits: u32) -> Vec<NPt> {
    let fp = squarefree_part(&f.fixed_point_poly());
    let mut pts: Vec<NPt> = approximate_roots(&fp, bits).into_iter().map(Some).collect();
    if f.fixes_infinity() {
        pts.push(None);
    }
    pts
}

/// Whether `A` is the only degree-`m` map with `A^n` as its `n`-th iterate.
///
/// If `B^n = A^n` and `B = nu ∘ A`, then `B` and `A` commute with `F = A^n`
/// and permute `Fix(F)`, hence so does `nu`. The candidates `nu` are the
/// Möbius maps permuting `Fix(F)`; each is tested exactly.
pub fn iterate_root_unique<K: ExactField>(a: &RatMap<K>, n: u32, cfg: &Config) -> Result<RootUniqueness<K>> {
    let hyp = audit_hypothesis(a)?;
    if !hyp.passed() {
        return Err(Error::PreconditionUncertified(format!("{} is {}", hyp.name, hyp.verdict)));
    }
    let f = a.iterate(n, cfg)?;
    let chain = Decomposition { factors: vec![a.clone(); n as usize] };
    let classes = decompositions(&f, cfg)?;
    let mut single_class = classes.len() == 1;
    for d in &classes {
        single_class &= equivalent(d, &chain)?.is_some();
    }
    let mut witnesses: Vec<RatMap<K>> = Vec::new();
    let mut complete = false;
    for bits in cfg.precision_ladder() {
        let mut pts = fixed_points(&f, bits);
        if pts.len() < 3 {
            pts = fixed_points(&f.compose(&f), bits);
        }
        let cons = [Constraint { src: pts.clone(), dst: pts }];
        let mut unresolved = 0;
        for s in mobius_candidates::<K>(&cons, bits) {
            if let Some(nu) = &s.exact {
                if nu.is_identity() {
                    continue;
                }
                let b = a.post_mobius(nu);
                if witnesses.contains(&b) {
                    continue;
                }
                if b.iterate(n, cfg)? == f {
                    witnesses.push(b);
                    continue;
                }
            }
            // (nu ∘ A)^n against F at sample points
            let bn = |z: Option<C64>| {
                let mut w = z;
                for _ in 0..n {
                    w = s.apply64(eval64(a, w));
                }
                w
            };
            if !clearly_differ(bn, |z| eval64(&f, z)) {
                unresolved += 1;
            }
        }
        if unresolved == 0 {
            complete = true;
            break;
        }
    }
    Ok(RootUniqueness { unique: witnesses.is_empty(), witnesses, single_class, complete })
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
    fn involution_examples() {
        assert_eq!(sigma_quadratic(&pm("z^2")).unwrap().to_string(), "-z");
        assert_eq!(sigma_quadratic(&pm("(z^2+1)/z")).unwrap().to_string(), "1/z");
        let a = pm("(2*z^2-i*z+3)/(z^2+z-1)");
        let mu = sigma_quadratic(&a).unwrap();
        assert_eq!(a.pre_mobius(&mu), a);
        assert!(mu.compose(&mu).is_identity());
    }

    #[test]
    fn involution_of_precomposition() {
        let a = pm("(z^2+1)/z");
        let mu = sigma_quadratic(&a).unwrap();
        let nu = Mobius::new(G::from_ints(1, 0), G::from_ints(1, 0), G::from_ints(0, 0), G::from_ints(1, 0)).unwrap();
        let got = sigma_quadratic(&a.pre_mobius(&nu)).unwrap();
        assert_eq!(got, nu.inverse().compose(&mu).compose(&nu));
        // the unconjugated form does not hold
        assert_ne!(got, nu.inverse().compose(&mu));
    }

    #[test]
    fn emp_examples() {
        let c = emp_certificate(&pm("(z^2+1)/z")).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert_eq!(c.witness("R"), Some("-t^2+4"));
        assert_eq!(c.witness("S"), Some("4*t^2-1"));
        assert_eq!(c.witness("Res_t(R,S)"), Some("225"));
        let c = emp_certificate(&pm("z^2")).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.witness("common_point"), Some("0"));
        for s in ["z^2+1", "z^2-2", "z^2+i"] {
            assert_eq!(emp_certificate(&pm(s)).unwrap().verdict, Verdict::Fail);
        }
    }

    #[test]
    fn emp_routes_agree() {
        for s in ["(z^2+1)/z", "z^2", "z^2+1", "(z^2+3)/(z^2-z+2)", "(i*z^2+2)/(z-3)", "(z^2-2*z)/(3*z+1)"] {
            let a = pm(s);
            let v = emp_certificate(&a).unwrap().verdict;
            assert_eq!(v, emp_by_pointsets(&a).unwrap(), "{s}");
            assert_eq!(v, emp_by_balls(&a, 4096).unwrap(), "{s}");
        }
    }

    #[test]
    fn symmetry_oracle() {
        let cfg = Config::default();
        let g = sigma_infinity_oracle(&pm("(z^2+1)/z"), 2, &cfg).unwrap();
        assert!(g.complete);
        assert_eq!(g.sorted_strings(), vec!["1/z", "z"]);
        let g = sigma_infinity_oracle(&pm("z^2"), 2, &cfg).unwrap();
        for m in ["-z", "i*z", "-i*z"] {
            assert!(g.sorted_strings().contains(&m.to_string()));
        }
        let g = sigma_infinity_oracle(&pm("(z^3+1)/z"), 1, &cfg).unwrap();
        assert_eq!(g.sorted_strings(), vec!["z"]);
    }

    #[test]
    fn shared_right_factor() {
        let a1 = pm("(z^2+1)/z");
        assert_eq!(same_right_factor(&a1, &pm("z/(z^2+1)")).unwrap().unwrap().to_string(), "1/z");
        assert_eq!(same_right_factor(&pm("z^2"), &a1).unwrap(), None);
        assert!(same_right_factor(&a1, &a1).unwrap().unwrap().is_identity());
    }

    #[test]
    fn iterate_roots() {
        let cfg = Config::default();
        // A is odd, so (-A)∘(-A) = A∘A
        let r = iterate_root_unique(&pm("(z^2+1)/z"), 2, &cfg).unwrap();
        assert!(r.single_class && r.complete);
        assert!(!r.unique);
        assert_eq!(r.witnesses.iter().map(|b| b.to_string()).collect::<Vec<_>>(), vec!["(-z^2-1)/z"]);
        let r = iterate_root_unique(&pm("(z^2+2*z-1)/(z+3)"), 2, &cfg).unwrap();
        assert!(r.unique && r.single_class && r.complete, "{r:?}");
        assert!(matches!(iterate_root_unique(&pm("z^2"), 2, &cfg), Err(Error::PreconditionUncertified(_))));
    }
}
