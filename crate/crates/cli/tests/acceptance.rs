//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line to
//! stderr (unbuffered, so it shows even under capture) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratdyn::certificate::Verdict;
use ratdyn::dynpair::{conjugacies, enumerate_periodic_curves, probe_invariant_graphs, verify_invariant};
use ratdyn::error::Error;
use ratdyn::expr::parse_corpus;
use ratdyn::fibercurve::{genus, genus_count};
use ratdyn::monodromy::{audit_hypothesis, audit_iterates, monodromy_group};
use ratdyn::orbifold::{canonical_orbifolds, cubic_lattes_test, euler_characteristic, generalized_lattes_genericity, is_covering, LattesVerdict};
use ratdyn::symmetry::{emp_by_balls, emp_certificate, iterate_root_unique, sigma_infinity_oracle, sigma_quadratic};
use ratdyn::{parse_map, Config, GaussMap, GaussPoly, GaussRat, Mobius};
use ratdyn_cli::run_command;

const BALL_CAP: u32 = 4096;

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn finish(n: u32, failures: &[String], detail: &str) {
    report(n, failures.is_empty(), detail);
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> GaussRat {
    GaussRat::from_ints(r.gen_range(-5..=5), r.gen_range(-5..=5))
}

fn random_map(r: &mut ChaCha8Rng, m: usize) -> GaussMap {
    loop {
        let p = GaussPoly::new((0..=m).map(|_| gauss(r)).collect());
        let q = GaussPoly::new((0..=m).map(|_| gauss(r)).collect());
        if let Ok(a) = GaussMap::new(p, q) {
            if a.degree() == m {
                return a;
            }
        }
    }
}

fn random_mobius(r: &mut ChaCha8Rng) -> Mobius<GaussRat> {
    loop {
        if let Some(m) = Mobius::new(gauss(r), gauss(r), gauss(r), gauss(r)) {
            if !m.is_identity() {
                return m;
            }
        }
    }
}

fn emp_quadratic(r: &mut ChaCha8Rng) -> GaussMap {
    loop {
        let a = random_map(r, 2);
        if emp_certificate(&a).unwrap().passed() {
            return a;
        }
    }
}

/// Simple and not Lattès.
fn certified_cubic(r: &mut ChaCha8Rng) -> GaussMap {
    loop {
        let a = random_map(r, 3);
        if audit_hypothesis(&a).unwrap().passed() {
            return a;
        }
    }
}

fn pm(s: &str) -> GaussMap {
    parse_map(s).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

#[test]
fn criterion_01_involution() {
    let t = Instant::now();
    let mut r = rng(1);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let a = random_map(&mut r, 2);
        let mu = sigma_quadratic(&a).unwrap();
        if a.pre_mobius(&mu) != a || !mu.compose(&mu).is_identity() {
            failures.push(a.to_string());
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(10) {
        failures.push(format!("runtime {}", secs(el)));
    }
    finish(1, &failures, &format!("200 quadratics, A∘mu = A and mu∘mu = id exact, {}", secs(el)));
}

#[test]
fn criterion_02_genus_one() {
    let t = Instant::now();
    let mut r = rng(2);
    let mut failures = Vec::new();
    for _ in 0..50 {
        let a = emp_quadratic(&mut r);
        let b = a.post_mobius(&sigma_quadratic(&a).unwrap());
        match genus(&a, &b) {
            Ok(g) if g == BigRational::from_integer(1.into()) => {}
            other => failures.push(format!("{a}: {other:?}")),
        }
    }
    let a = pm("(z^2+1)/z");
    let b = a.post_mobius(&sigma_quadratic(&a).unwrap());
    let shown = genus_count(&a, &b).to_string();
    if shown != "(1+1+1+1+1+1+1+1)-2·2·2=0" {
        failures.push(shown.clone());
    }
    let el = t.elapsed();
    if el > Duration::from_secs(30) {
        failures.push(format!("runtime {}", secs(el)));
    }
    finish(2, &failures, &format!("50 emp quadratics of genus 1, {shown}, {}", secs(el)));
}

#[test]
fn criterion_03_certificate_soundness() {
    let mut r = rng(3);
    let mut maps: Vec<GaussMap> = ["z^2", "z^2+1", "z^2-2", "z^2+i", "3*z^2-z+2", "(z^2+1)/(z^2-1)"].iter().map(|s| pm(s)).collect();
    while maps.len() < 100 {
        maps.push(random_map(&mut r, 2));
    }
    let mut failures = Vec::new();
    let mut fails = 0;
    for a in &maps {
        let exact = emp_certificate(a).unwrap().verdict;
        let balls = emp_by_balls(a, BALL_CAP).unwrap();
        if exact == Verdict::Fail {
            fails += 1;
        }
        if exact != balls {
            failures.push(format!("{a}: exact {exact} balls {balls}"));
        }
    }
    if fails < 5 {
        failures.push(format!("only {fails} FAIL cases"));
    }
    finish(3, &failures, &format!("100 quadratics, {fails} FAIL, {} disagreements", failures.len()));
}

#[test]
fn criterion_04_quadratic_audit() {
    let t = Instant::now();
    let cfg = Config::default().with_precision(256);
    let mut r = rng(4);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let a = emp_quadratic(&mut r);
        match audit_iterates(&a, 3, &cfg) {
            Ok(rep) if rep.verdict == "PASS" && rep.rows.len() == 3 && rep.rows.iter().all(|row| row.classes.len() == 1) => {}
            Ok(rep) => failures.push(format!("{a}: {}", rep.verdict)),
            Err(e) => failures.push(format!("{a}: {e}")),
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(300) {
        failures.push(format!("runtime {}", secs(el)));
    }
    finish(4, &failures, &format!("20 emp quadratics up to degree 8, one class each, {}", secs(el)));
}

#[test]
fn criterion_05_cubic_audit() {
    let t = Instant::now();
    let cfg = Config::default();
    let mut r = rng(5);
    let mut failures = Vec::new();
    for _ in 0..10 {
        let a = certified_cubic(&mut r);
        match audit_iterates(&a, 2, &cfg) {
            Ok(rep) if rep.verdict == "PASS" && rep.rows[1].classes.len() == 1 => {}
            Ok(rep) => failures.push(format!("{a}: {}", rep.verdict)),
            Err(e) => failures.push(format!("{a}: {e}")),
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(600) {
        failures.push(format!("runtime {}", secs(el)));
    }
    finish(5, &failures, &format!("10 simple non-Lattès cubics at degree 9, one class each, {}", secs(el)));
}

#[test]
fn criterion_06_sigma_infinity() {
    let cfg = Config::default();
    let mut r = rng(6);
    let mut failures = Vec::new();
    for _ in 0..10 {
        let a = emp_quadratic(&mut r);
        let mu = sigma_quadratic(&a).unwrap();
        for n in [2, 3] {
            let g = sigma_infinity_oracle(&a, n, &cfg).unwrap();
            let ok = g.complete && g.elements.len() == 2 && g.contains(&Mobius::identity()) && g.contains(&mu);
            if !ok {
                failures.push(format!("{a} n={n}: {:?} complete={}", g.sorted_strings(), g.complete));
            }
        }
    }
    finish(6, &failures, "10 emp quadratics, n = 2, 3 give {id, mu} complete");
}

#[test]
fn criterion_07_root_uniqueness() {
    let cfg = Config::default();
    let mut r = rng(7);
    let mut maps: Vec<GaussMap> = (0..10).map(|_| emp_quadratic(&mut r)).collect();
    maps.extend((0..5).map(|_| certified_cubic(&mut r)));
    let mut failures = Vec::new();
    for a in &maps {
        match iterate_root_unique(a, 2, &cfg) {
            Ok(u) if u.unique && u.complete => {}
            Ok(u) => failures.push(format!("{a}: {u:?}")),
            Err(e) => failures.push(format!("{a}: {e}")),
        }
    }
    let control = iterate_root_unique(&pm("z^2"), 2, &cfg);
    if !matches!(control, Err(Error::PreconditionUncertified(_))) {
        failures.push(format!("z^2 control: {control:?}"));
    }
    finish(7, &failures, "10 quadratics and 5 cubics unique at n = 2, z^2 hypothesis not certified");
}

#[test]
fn criterion_08_monodromy() {
    let cfg = Config::default();
    let mut r = rng(8);
    let mut failures = Vec::new();
    let mut maps = Vec::new();
    while maps.len() < 5 {
        let a = random_map(&mut r, 2);
        if a.is_simple() {
            maps.push((a, 2u32));
        }
    }
    while maps.len() < 10 {
        let a = random_map(&mut r, 3);
        if a.is_simple() {
            maps.push((a, 6u32));
        }
    }
    for (a, order) in &maps {
        let g = match monodromy_group(a, &cfg) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("{a}: {e}"));
                continue;
            }
        };
        if g.order() != (*order).into() || !g.product_is_identity() {
            failures.push(format!("{a}: order {} product {}", g.order(), g.product_is_identity()));
        }
        // recompute from the same seed at twice the precision it settled at
        let again = monodromy_group(a, &cfg.with_precision(2 * g.stable_bits)).unwrap();
        if again.generators != g.generators || g.fiber_at(a, 2 * g.stable_bits).is_none() {
            failures.push(format!("{a}: unstable under doubling"));
        }
    }
    let blocks = monodromy_group(&pm("z^4"), &cfg).unwrap().block_systems().len();
    if blocks != 1 {
        failures.push(format!("z^4 has {blocks} block systems"));
    }
    finish(8, &failures, "S2 and S3 for simple maps, product identity, stable under doubling, z^4 has one block system");
}

#[test]
fn criterion_09_orbifolds() {
    let mut failures = Vec::new();
    for (sig, chi) in [(vec![2, 2, 2, 2], 0), (vec![2, 2], 1), (vec![2, 3, 6], 0)] {
        if euler_characteristic(&sig) != BigRational::from_integer(chi.into()) {
            failures.push(format!("{sig:?}"));
        }
    }
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/corpus.txt")).unwrap();
    let corpus: Vec<GaussMap> = parse_corpus(&text).unwrap();
    let mut checked = 0;
    for a in corpus.iter().filter(|a| a.degree() >= 2) {
        let (o1, o2) = canonical_orbifolds(a);
        let m: i64 = a.degree() as i64;
        if !is_covering(a, &o1, &o2) || o1.euler_characteristic() != o2.euler_characteristic() * BigRational::from_integer(m.into()) {
            failures.push(a.to_string());
        }
        checked += 1;
    }
    finish(9, &failures, &format!("chi values exact, {checked} corpus maps covered with chi(o1) = m chi(o2)"));
}

#[test]
fn criterion_10_periodic_curves() {
    let t = Instant::now();
    let cfg = Config::default();
    let mut r = rng(10);
    let mut failures = Vec::new();
    let pick = |r: &mut ChaCha8Rng, k: usize| if k % 2 == 0 { emp_quadratic(r) } else { certified_cubic(r) };
    for k in 0..10 {
        let a1 = pick(&mut r, k);
        let al = random_mobius(&mut r);
        let a2 = al.conj_map(&a1);
        let curves = enumerate_periodic_curves(&a1, &a2, 2, &cfg).unwrap();
        if curves.len() != 6 {
            failures.push(format!("{a1}: {} curves", curves.len()));
        }
        for c in &curves {
            for d in [1, 2] {
                if !verify_invariant(c, &a1, &a2, d, &cfg).unwrap() {
                    failures.push(format!("{a1}: {c:?} not invariant at d={d}"));
                }
            }
        }
    }
    let mut pairs = 0;
    while pairs < 10 {
        let a1 = pick(&mut r, pairs);
        let a2 = pick(&mut r, pairs);
        if !conjugacies(&a1, &a2, &cfg).unwrap().is_empty() {
            continue;
        }
        pairs += 1;
        if !enumerate_periodic_curves(&a1, &a2, 2, &cfg).unwrap().is_empty() || !probe_invariant_graphs(&a1, &a2, 4, &cfg).finds_nothing() {
            failures.push(format!("{a1} vs {a2}"));
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(300) {
        failures.push(format!("runtime {}", secs(el)));
    }
    finish(10, &failures, &format!("10 conjugate pairs with 6 invariant curves, 10 non-conjugate pairs with none, {}", secs(el)));
}

#[test]
fn criterion_11_generalized_lattes() {
    let cfg = Config::default();
    let mut r = rng(11);
    let mut failures = Vec::new();
    let sq = generalized_lattes_genericity(&pm("z^2"), &cfg).unwrap();
    if sq.verdict != Verdict::Fail {
        failures.push("z^2 does not FAIL".into());
    }
    let mut definite = 0;
    let mut cubic_passes = 0;
    for m in 2..=5 {
        let count = if m == 3 { 10 } else { 5 };
        for _ in 0..count {
            let a = random_map(&mut r, m);
            let c = match generalized_lattes_genericity(&a, &cfg) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("{a}: {e}"));
                    continue;
                }
            };
            if c.verdict == Verdict::Indeterminate || c.witnesses.is_empty() {
                failures.push(format!("{a}: {}", c.verdict));
                continue;
            }
            definite += 1;
            if m == 3 && c.passed() && a.is_simple() {
                cubic_passes += 1;
                if cubic_lattes_test(&a).unwrap() != LattesVerdict::NotLattes {
                    failures.push(format!("{a}: PASS but Lattès"));
                }
            }
        }
    }
    if definite < 20 {
        failures.push(format!("only {definite} definite verdicts"));
    }
    finish(11, &failures, &format!("z^2 FAILs, {definite} definite verdicts in degrees 2-5, {cubic_passes} simple PASS cubics not Lattès"));
}

fn without_elapsed(out: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(out).unwrap();
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v.to_string()
}

#[test]
fn criterion_12_determinism() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["sigma", "(z^2+2*z-1)/(z+3)"],
        vec!["certify", "emp", "(2*z^2-i*z+3)/(z^2+z-1)"],
        vec!["certify", "generic", "(z^3+2)/(z^3-z+1)"],
        vec!["genus", "(z^2+1)/z", "z/(z^2+1)"],
        vec!["monodromy", "(z^3+i*z-1)/(2*z^2+3)"],
        vec!["decompose", "(z^2+1)/z", "--iterate", "2"],
        vec!["audit", "(z^2+2*z-1)/(z+3)", "--nmax", "2"],
        vec!["conjugacy", "(z^2+1)/z", "(z^2-z+1)/(z-1)"],
        vec!["periodic-curves", "(z^2+1)/z", "(z^2-z+1)/(z-1)"],
        vec!["root-unique", "(z^3+1)/z"],
    ];
    let mut failures = Vec::new();
    for cmd in &commands {
        let mut argv = vec!["ratdyn", "--seed", "7"];
        argv.extend_from_slice(cmd);
        let first = run_command(&argv);
        let second = run_command(&argv);
        if first.code != second.code || without_elapsed(&first.stdout) != without_elapsed(&second.stdout) {
            failures.push(cmd.join(" "));
        }
    }
    finish(12, &failures, &format!("{} commands byte-identical across two runs", commands.len()));
}
