//! Audit of the decompositions of iterates of quadratic and cubic maps.

use serde::Serialize;

use super::factor::{decompositions_of_iterate, equivalent, Decomposition, DecompositionView};
use crate::certificate::{Certificate, Verdict};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::orbifold::{cubic_lattes_test, LattesVerdict};
use crate::ratmap::RatMap;
use crate::scalar::ExactField;
use crate::symmetry::emp_certificate;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRow {
    pub n: u32,
    pub degree: usize,
    pub classes: Vec<DecompositionView>,
    /// Every class is equivalent to `(A, ..., A)`.
    pub only_iterate_chain: bool,
    /// Innermost factors have degree at most `m`, and exactly `m` when `m`
    /// is prime.
    pub innermost_degree_ok: bool,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub map: String,
    pub degree: usize,
    pub hypothesis: Certificate,
    pub rows: Vec<AuditRow>,
    /// `PASS`, `VIOLATION` or `HYPOTHESIS_NOT_CERTIFIED`.
    pub verdict: String,
}

/// emp for quadratics; simple and not Lattès for cubics.
pub fn audit_hypothesis<K: ExactField>(a: &RatMap<K>) -> Result<Certificate> {
    match a.degree() {
        2 => {
            let mut c = emp_certificate(a)?;
            c.name = "hypothesis".into();
            Ok(c)
        }
        3 => {
            let simple = a.is_simple();
            let lattes = if simple { Some(cubic_lattes_test(a)?) } else { None };
            let ok = lattes == Some(LattesVerdict::NotLattes);
            let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
            Ok(Certificate::new("hypothesis", verdict)
                .with("simple", simple)
                .with("lattes_test", lattes.map_or("NOT_SIMPLE", |v| v.as_str())))
        }
        m => Err(Error::InvalidArgument(format!("audit needs degree 2 or 3, got {m}"))),
    }
}

fn is_prime(m: usize) -> bool {
    m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)
}

/// Decompositions of `a^n` for `n <= n_max`, compared with `(A, ..., A)`.
pub fn audit_iterates<K: ExactField>(a: &RatMap<K>, n_max: u32, cfg: &Config) -> Result<AuditReport> {
    let m = a.degree();
    let hypothesis = audit_hypothesis(a)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let deg = (m as u64).pow(n);
        if cfg.check_degree(deg).is_err() {
            break;
        }
        let classes = decompositions_of_iterate(a, n, cfg)?;
        let chain = Decomposition { factors: vec![a.clone(); n as usize] };
        let mut only_iterate_chain = classes.len() == 1;
        for d in &classes {
            if equivalent(d, &chain)?.is_none() {
                only_iterate_chain = false;
            }
        }
        let innermost_degree_ok = classes.iter().all(|d| {
            let k = d.factors[0].degree();
            k <= m && (!is_prime(m) || k == m)
        });
        let ok = only_iterate_chain && innermost_degree_ok;
        rows.push(AuditRow {
            n,
            degree: deg as usize,
            classes: classes.iter().map(DecompositionView::from).collect(),
            only_iterate_chain,
            innermost_degree_ok,
            verdict: if ok { "PASS" } else { "VIOLATION" }.into(),
        });
    }
    let verdict = if !hypothesis.passed() {
        "HYPOTHESIS_NOT_CERTIFIED"
    } else if rows.iter().all(|r| r.verdict == "PASS") {
        "PASS"
    } else {
        "VIOLATION"
    };
    Ok(AuditReport { map: a.to_string(), degree: m, hypothesis, rows, verdict: verdict.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadRat;
    use crate::expr::parse_map;

    type G = QuadRat<1>;

    #[test]
    fn joukowski_audit_passes() {
        let a: RatMap<G> = parse_map("(z^2+1)/z").unwrap();
        let r = audit_iterates(&a, 3, &Config::default()).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.verdict, "PASS", "{r:?}");
    }

    #[test]
    fn square_audit_is_not_certified() {
        let a: RatMap<G> = parse_map("z^2").unwrap();
        let r = audit_iterates(&a, 2, &Config::default()).unwrap();
        assert_eq!(r.verdict, "HYPOTHESIS_NOT_CERTIFIED");
    }
}
