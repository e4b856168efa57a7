//! The fiber-product curves `h_{A,B}: A1(x) B2(y) - A2(x) B1(y) = 0` and
//! `h_A`, the curve `h_{A,A}` with the diagonal removed.
//!
//! Irreducibility is only certified by explicit criteria and reducibility
//! only by explicit components. There is no bivariate factorization.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::coeff_times;
pub use crate::monodromy::left_factor_divide;
use crate::ratmap::{Mobius, PointSet, Portrait, RatMap};
use crate::scalar::ExactField;
use crate::search::right_mobius_links;

/// Polynomial in `x` and `y`; `c[i][j]` is the coefficient of `x^i y^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly<K> {
    c: Vec<Vec<K>>,
}

impl<K: ExactField> BiPoly<K> {
    pub fn from_grid(mut c: Vec<Vec<K>>) -> Self {
        let w = c.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in &mut c {
            r.resize(w, K::zero());
        }
        let mut p = BiPoly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|r| r.iter().all(|v| v.is_zero())) {
            self.c.pop();
        }
        loop {
            let last_zero = self.c.iter().all(|r| r.last().is_none_or(|v| v.is_zero()));
            if self.c.is_empty() || self.c[0].is_empty() || !last_zero {
                break;
            }
            for r in &mut self.c {
                r.pop();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> K {
        self.c.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(K::zero)
    }

    pub fn deg_x(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.c.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    pub fn eval(&self, x: &K, y: &K) -> K {
        let mut acc = K::zero();
        for row in self.c.iter().rev() {
            let mut r = K::zero();
            for v in row.iter().rev() {
                r = r * y + v;
            }
            acc = acc * x + &r;
        }
        acc
    }

    /// `self * (x - y)`.
    pub fn times_x_minus_y(&self) -> Self {
        let (dx, dy) = (self.deg_x(), self.deg_y());
        let mut c = vec![vec![K::zero(); dy + 2]; dx + 2];
        for i in 0..=dx {
            for j in 0..=dy {
                let v = self.coeff(i, j);
                c[i + 1][j] = c[i + 1][j].clone() + &v;
                c[i][j + 1] = c[i][j + 1].clone() - &v;
            }
        }
        BiPoly::from_grid(c)
    }

    /// Divides by the leading coefficient in the order used for display.
    pub fn normalized(&self) -> Self {
        let Some(lead) = self.terms().first().map(|t| t.2.clone()) else { return self.clone() };
        BiPoly::from_grid(self.c.iter().map(|r| r.iter().map(|v| v.clone() / &lead).collect()).collect())
    }

    /// Nonzero terms `(i, j, c)`, by total degree, then by `x`-degree,
    /// both descending.
    fn terms(&self) -> Vec<(usize, usize, K)> {
        let mut t = Vec::new();
        for (i, r) in self.c.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                if !v.is_zero() {
                    t.push((i, j, v.clone()));
                }
            }
        }
        t.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        t
    }
}

fn mono(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.into(),
        _ => format!("{var}^{k}"),
    }
}

impl<K: ExactField> std::fmt::Display for BiPoly<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, j, v) in terms {
            let m = [mono("x", i), mono("y", j)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*");
            let t = coeff_times(&v, &m);
            if !out.is_empty() && !t.starts_with('-') {
                out.push('+');
            }
            out.push_str(&t);
        }
        write!(f, "{out}")
    }
}

impl<K: ExactField> std::fmt::Debug for BiPoly<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// `F(x) G(y) - H(x) J(y)` from coefficient lists.
fn cross<K: ExactField>(f: &[K], g: &[K], h: &[K], j: &[K]) -> BiPoly<K> {
    let dx = f.len().max(h.len());
    let dy = g.len().max(j.len());
    let mut c = vec![vec![K::zero(); dy]; dx];
    for (i, fi) in f.iter().enumerate() {
        for (k, gk) in g.iter().enumerate() {
            c[i][k] = c[i][k].clone() + fi.clone() * gk;
        }
    }
    for (i, hi) in h.iter().enumerate() {
        for (k, jk) in j.iter().enumerate() {
            c[i][k] = c[i][k].clone() - hi.clone() * jk;
        }
    }
    BiPoly::from_grid(c)
}

/// The component `x = R(y)`, as `R2(y) x - R1(y)`.
fn graph_x_of_y<K: ExactField>(r: &RatMap<K>) -> BiPoly<K> {
    cross(&[K::zero(), K::one()], r.q().coeffs(), &[K::one()], r.p().coeffs())
}

/// The component `y = R(x)`, as `R1(x) - R2(x) y`.
fn graph_y_of_x<K: ExactField>(r: &RatMap<K>) -> BiPoly<K> {
    cross(r.p().coeffs(), &[K::one()], r.q().coeffs(), &[K::zero(), K::one()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Irreducibility {
    IrreducibleByCriterion,
    ReducibleWithWitness,
    Unknown,
}

impl Irreducibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Irreducibility::IrreducibleByCriterion => "IRREDUCIBLE_BY_CRITERION",
            Irreducibility::ReducibleWithWitness => "REDUCIBLE_WITH_WITNESS",
            Irreducibility::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiberCurveAnalysis<K: ExactField> {
    pub bipoly: BiPoly<K>,
    pub bidegree: (usize, usize),
    pub irreducibility: Irreducibility,
    /// Name of the criterion used, when irreducible.
    pub criterion: Option<String>,
    /// Explicit components, when reducible.
    pub witness: Vec<BiPoly<K>>,
    pub genus: Option<BigRational>,
    /// Facts imported rather than checked.
    pub asserted: Option<String>,
    /// Why the analysis stopped short, if it did.
    pub note: Option<String>,
}

impl<K: ExactField> FiberCurveAnalysis<K> {
    fn new(bipoly: BiPoly<K>, bidegree: (usize, usize)) -> Self {
        FiberCurveAnalysis {
            bipoly,
            bidegree,
            irreducibility: Irreducibility::Unknown,
            criterion: None,
            witness: Vec::new(),
            genus: None,
            asserted: None,
            note: None,
        }
    }
}

fn critical_values<K: ExactField>(a: &RatMap<K>) -> PointSet<K> {
    a.portrait().values()
}

/// The irreducibility criterion that applies to `h_{a,b}`, if any.
pub fn irreducibility_criterion<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>) -> Option<&'static str> {
    if critical_values(a).intersect(&critical_values(b)).len() <= 1 {
        Some("critical_values_meet_at_most_once")
    } else if a.degree().gcd(&b.degree()) == 1 {
        Some("coprime_degrees")
    } else {
        None
    }
}

/// `h_{a,b}` with its irreducibility status and, when certified, its genus.
pub fn build_h<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>, cfg: &Config) -> FiberCurveAnalysis<K> {
    let bipoly = cross(a.p().coeffs(), b.q().coeffs(), a.q().coeffs(), b.p().coeffs());
    let mut out = FiberCurveAnalysis::new(bipoly, (a.degree(), b.degree()));
    if let Some(c) = irreducibility_criterion(a, b) {
        out.irreducibility = Irreducibility::IrreducibleByCriterion;
        out.criterion = Some(c.into());
        out.genus = Some(genus_unchecked(a, b));
        return out;
    }
    match reducible_witness(a, b, cfg) {
        Ok(w) if !w.is_empty() => {
            out.irreducibility = Irreducibility::ReducibleWithWitness;
            out.witness = w;
        }
        Ok(_) => {}
        Err(e) => out.note = Some(e.code().into()),
    }
    out
}

fn reducible_witness<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>, cfg: &Config) -> Result<Vec<BiPoly<K>>> {
    let (m, l) = (a.degree(), b.degree());
    if a == b {
        // x = nu(y) for every nu with a ∘ nu = a
        let (links, _) = right_mobius_links(a, a, cfg, 0x6662)?;
        let mut links: Vec<Mobius<K>> = links;
        links.sort_by_key(|nu| !nu.is_identity());
        return Ok(links.iter().map(|nu| graph_x_of_y(&nu.to_map()).normalized()).collect());
    }
    if l % m == 0 {
        if let Some(r) = left_factor_divide(a, b, cfg)? {
            return Ok(vec![graph_x_of_y(&r).normalized()]);
        }
    }
    if m % l == 0 {
        if let Some(r) = left_factor_divide(b, a, cfg)? {
            return Ok(vec![graph_y_of_x(&r).normalized()]);
        }
    }
    Ok(Vec::new())
}

/// The terms of `2 - 2g = sum gcd(a_ij, b_ik) - l m (r - 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusCount {
    /// `gcd(a_ij, b_ik)` for every point of `S` and every pair of preimages.
    pub gcd_terms: Vec<u32>,
    pub l: usize,
    pub m: usize,
    /// `|S|`.
    pub r: usize,
}

impl GenusCount {
    pub fn euler_characteristic(&self) -> i64 {
        self.gcd_terms.iter().map(|&t| t as i64).sum::<i64>() - (self.l * self.m) as i64 * (self.r as i64 - 2)
    }

    pub fn genus(&self) -> BigRational {
        BigRational::new((2 - self.euler_characteristic()).into(), 2.into())
    }
}

impl std::fmt::Display for GenusCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.gcd_terms.iter().map(|t| t.to_string()).collect();
        write!(f, "({})-{}·{}·{}={}", terms.join("+"), self.l, self.m, self.r as i64 - 2, self.euler_characteristic())
    }
}

/// The count over `S = V(a) ∪ V(b)`, with all-ones collections where a map
/// is unramified. Only meaningful when `h_{a,b}` is irreducible.
pub fn genus_count<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>) -> GenusCount {
    let (pa, pb) = (Portrait::of(a), Portrait::of(b));
    let mut sets: Vec<PointSet<K>> = pa.classes.iter().map(|c| c.values.clone()).collect();
    sets.extend(pb.classes.iter().map(|c| c.values.clone()));
    let mut gcd_terms = Vec::new();
    let mut r = 0;
    for x in PointSet::atoms(&sets) {
        let (ca, cb) = (pa.collection_on(&x), pb.collection_on(&x));
        for _ in 0..x.len() {
            for u in &ca {
                for v in &cb {
                    gcd_terms.push(u.gcd(v));
                }
            }
        }
        r += x.len();
    }
    GenusCount { gcd_terms, l: b.degree(), m: a.degree(), r }
}

fn genus_unchecked<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>) -> BigRational {
    genus_count(a, b).genus()
}

/// Genus of `h_{a,b}`; requires one of the irreducibility criteria.
pub fn genus<K: ExactField>(a: &RatMap<K>, b: &RatMap<K>) -> Result<BigRational> {
    if irreducibility_criterion(a, b).is_none() {
        return Err(Error::IrreducibilityUnknown);
    }
    Ok(genus_unchecked(a, b))
}

/// `(A1(x) A2(y) - A2(x) A1(y)) / (x - y)`.
pub fn build_h_diagonal_removed<K: ExactField>(a: &RatMap<K>) -> Result<FiberCurveAnalysis<K>> {
    let m = a.degree();
    if m < 2 {
        return Err(Error::InvalidArgument(format!("degree {m} map, expected at least 2")));
    }
    let (p, q) = (a.p().coeffs(), a.q().coeffs());
    let full = cross(p, q, q, p);
    // x^i y^j - x^j y^i = (x - y) x^j y^j (x^(i-j-1) + ... + y^(i-j-1)) for i > j
    let mut c = vec![vec![K::zero(); m]; m];
    for i in 0..=m {
        for j in 0..i {
            let w = a.p().coeff(i) * &a.q().coeff(j) - a.q().coeff(i) * &a.p().coeff(j);
            if w.is_zero() {
                continue;
            }
            for k in 0..i - j {
                let (ex, ey) = (j + k, j + (i - j - 1 - k));
                c[ex][ey] = c[ex][ey].clone() + &w;
            }
        }
    }
    let quotient = BiPoly::from_grid(c);
    assert!(quotient.times_x_minus_y() == full, "division by x - y left a remainder");
    let mut out = FiberCurveAnalysis::new(quotient, (m - 1, m - 1));
    if m == 2 {
        // a x y + b x + c y + d is irreducible when a d != b c
        let q = &out.bipoly;
        let det = q.coeff(1, 1) * &q.coeff(0, 0) - q.coeff(1, 0) * &q.coeff(0, 1);
        if !det.is_zero() || (q.coeff(1, 1).is_zero() && !(q.coeff(1, 0).is_zero() && q.coeff(0, 1).is_zero())) {
            out.irreducibility = Irreducibility::IrreducibleByCriterion;
            out.criterion = Some("nondegenerate_bilinear".into());
            out.genus = Some(BigRational::zero());
        }
    } else if a.is_simple() {
        out.asserted = Some("irreducible of positive genus for simple maps of degree at least 3".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;
    use crate::symmetry::sigma_quadratic;
    use num_traits::One;

    type G = QuadRat<1>;

    fn pm(s: &str) -> RatMap<G> {
        parse_map(s).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn joukowski_against_its_twist() {
        let a = pm("(z^2+1)/z");
        let b = pm("z/(z^2+1)");
        let h = build_h(&a, &b, &Config::default());
        assert_eq!(h.irreducibility, Irreducibility::IrreducibleByCriterion);
        assert_eq!(h.criterion.as_deref(), Some("critical_values_meet_at_most_once"));
        assert_eq!(h.genus, Some(int(1)));
        assert_eq!(h.bidegree, (2, 2));
        assert_eq!(h.bipoly.to_string(), "x^2*y^2+x^2-x*y+y^2+1");
    }

    #[test]
    fn squares_split() {
        let a = pm("z^2");
        let h = build_h(&a, &a, &Config::default());
        assert_eq!(h.irreducibility, Irreducibility::ReducibleWithWitness);
        let w: Vec<String> = h.witness.iter().map(|c| c.to_string()).collect();
        assert_eq!(w, vec!["x-y", "x+y"]);
    }

    #[test]
    fn genus_count_is_spelled_out() {
        let a = pm("(z^2+1)/z");
        let b = sigma_quadratic(&a).unwrap().to_map().compose(&a);
        assert_eq!(genus_count(&a, &b).to_string(), "(1+1+1+1+1+1+1+1)-2·2·2=0");
    }

    #[test]
    fn coprime_degrees() {
        let a = pm("(z^3+2*z-1)/(z^2+3)");
        let b = pm("(z^2-i)/(z+5)");
        let h = build_h(&a, &b, &Config::default());
        assert_eq!(h.irreducibility, Irreducibility::IrreducibleByCriterion);
        assert_eq!(h.bidegree, (3, 2));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&pm("z^2"), &pm("(z-1)^3+1")).unwrap(), int(1));
        assert_eq!(genus(&pm("(z^2+1)/z"), &pm("z^2+5")).unwrap(), int(1));
        assert_eq!(genus(&pm("(z^2+1)/z"), &pm("(z^2+3)/(z-1)")).unwrap(), int(0));
        assert_eq!(genus(&pm("z^2"), &pm("z^3")).unwrap(), int(0));
        assert_eq!(genus(&pm("z^2"), &pm("-z^2")), Err(Error::IrreducibilityUnknown));
    }

    #[test]
    fn composite_pair_is_reducible() {
        let a = pm("(z^2+1)/z");
        let b = a.compose(&a);
        let h = build_h(&a, &b, &Config::default());
        assert_eq!(h.irreducibility, Irreducibility::ReducibleWithWitness);
        let comp = &h.witness[0];
        assert_eq!(comp.deg_x(), 1);
        // a point of the component lies on h
        let y = G::from_ints(3, 1);
        let c0 = comp.eval(&G::zero(), &y);
        let c1 = comp.eval(&G::one(), &y) - &c0;
        let x = -c0 / c1;
        assert!(h.bipoly.eval(&x, &y).is_zero());
    }

    #[test]
    fn diagonal_removed() {
        let h = build_h_diagonal_removed(&pm("z^2")).unwrap();
        assert_eq!(h.bipoly.to_string(), "x+y");
        let h = build_h_diagonal_removed(&pm("(z^2+1)/z")).unwrap();
        assert_eq!(h.bipoly.to_string(), "x*y-1");
        assert_eq!(h.irreducibility, Irreducibility::IrreducibleByCriterion);
        let h = build_h_diagonal_removed(&pm("(z^3+1)/z")).unwrap();
        assert_eq!(h.bidegree, (2, 2));
        assert!(h.asserted.is_some());
        assert!(build_h_diagonal_removed(&pm("(z+1)/(z-1)")).is_err());
    }
}
