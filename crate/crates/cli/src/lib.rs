//! The `ratdyn` command line: argument parsing, command dispatch and the
//! JSON report.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ratdyn::certificate::Certificate;
use ratdyn::dynpair::{enumerate_periodic_curves, conjugacies, probe_invariant_graphs, verify_invariant};
use ratdyn::fibercurve::{build_h, genus, Irreducibility};
use ratdyn::monodromy::{audit_iterates, decompositions_of_iterate, monodromy_group, DecompositionView};
use ratdyn::orbifold::{canonical_orbifolds, cubic_lattes_test, generalized_lattes_genericity};
use ratdyn::symmetry::{emp_certificate, iterate_root_unique, sigma_infinity_oracle, sigma_quadratic};
use ratdyn::{parse_map, Config, Error, ExactField, QuadRat, RatMap};

#[derive(Parser, Debug)]
#[command(name = "ratdyn", version, about = "Exact and certified computations for rational maps")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    /// Largest precision tried before giving up.
    #[arg(long, global = true, default_value_t = 8192)]
    precision_cap: u32,
    #[arg(long, global = true, default_value_t = 256)]
    degree_cap: u64,
    /// Seed for every pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Coefficient field: Q(i) or Q(sqrt(-3)).
    #[arg(long, global = true, value_enum, default_value_t = FieldChoice::Gaussian)]
    field: FieldChoice,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldChoice {
    Gaussian,
    Eisenstein,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CertKind {
    Emp,
    Generic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a map and print its canonical form.
    Parse { map: String },
    /// Critical values with their multiplicity collections.
    Portrait { map: String },
    /// Möbius symmetries `mu` with `A^n ∘ mu = A^n`.
    Sigma {
        map: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Genericity certificates.
    Certify { kind: CertKind, map: String },
    /// Genus of the fiber-product curve `A(x) = B(y)`.
    Genus { a: String, b: String },
    /// Irreducibility of the fiber-product curve `A(x) = B(y)`.
    Irreducible { a: String, b: String },
    /// Decompositions of an iterate into indecomposable factors.
    Decompose {
        map: String,
        #[arg(long, default_value_t = 1)]
        iterate: u32,
    },
    /// Decompositions of all iterates up to `--nmax`.
    Audit {
        map: String,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
    },
    /// Monodromy group and its block systems.
    Monodromy { map: String },
    /// Möbius conjugacies between two maps.
    Conjugacy { a1: String, a2: String },
    /// Graph curves invariant under `(A1, A2)`.
    PeriodicCurves {
        a1: String,
        a2: String,
        #[arg(long, default_value_t = 2)]
        smax: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// The `n`-th iterate.
    Iterate { map: String, n: u32 },
    /// Lattès test for simple cubics, with the canonical orbifolds.
    Lattes { map: String },
    /// Whether `A` is the only map whose `n`-th iterate is `A^n`.
    RootUnique {
        map: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Portrait { .. } => "portrait",
            Command::Sigma { .. } => "sigma",
            Command::Certify { kind: CertKind::Emp, .. } => "certify emp",
            Command::Certify { kind: CertKind::Generic, .. } => "certify generic",
            Command::Genus { .. } => "genus",
            Command::Irreducible { .. } => "irreducible",
            Command::Decompose { .. } => "decompose",
            Command::Audit { .. } => "audit",
            Command::Monodromy { .. } => "monodromy",
            Command::Conjugacy { .. } => "conjugacy",
            Command::PeriodicCurves { .. } => "periodic-curves",
            Command::Iterate { .. } => "iterate",
            Command::Lattes { .. } => "lattes",
            Command::RootUnique { .. } => "root-unique",
        }
    }

    fn map_args(&self) -> Vec<&str> {
        match self {
            Command::Parse { map }
            | Command::Portrait { map }
            | Command::Sigma { map, .. }
            | Command::Certify { map, .. }
            | Command::Decompose { map, .. }
            | Command::Audit { map, .. }
            | Command::Monodromy { map }
            | Command::Iterate { map, .. }
            | Command::Lattes { map }
            | Command::RootUnique { map, .. } => vec![map],
            Command::Genus { a, b } | Command::Irreducible { a, b } => vec![a, b],
            Command::Conjugacy { a1, a2 } | Command::PeriodicCurves { a1, a2, .. } => vec![a1, a2],
        }
    }
}

/// Exit code and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// What a command produced before it is wrapped into the report.
struct Report {
    verdict: String,
    certificates: Vec<Certificate>,
    data: Value,
    indeterminate: bool,
}

impl Report {
    fn new(verdict: &str, data: Value) -> Self {
        Report { verdict: verdict.into(), certificates: Vec::new(), data, indeterminate: false }
    }
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let args: Vec<&str> = argv.iter().map(|s| s.as_ref()).collect();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let cfg = Config {
        precision: cli.precision,
        precision_cap: cli.precision_cap.max(cli.precision),
        degree_cap: cli.degree_cap,
        seed: cli.seed,
    };
    let start = Instant::now();
    let result = match cli.field {
        FieldChoice::Gaussian => execute::<QuadRat<1>>(&cli.command, &cfg),
        FieldChoice::Eisenstein => execute::<QuadRat<3>>(&cli.command, &cfg),
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let (inputs, report, code) = match result {
        Ok((inputs, r)) => {
            let code = if r.indeterminate { EXIT_INDETERMINATE } else { EXIT_OK };
            (inputs, r, code)
        }
        Err(e) => {
            let indeterminate = matches!(e, Error::PrecisionCap(_) | Error::IrreducibilityUnknown | Error::NearCriticalBase);
            let verdict = if indeterminate { "INDETERMINATE" } else { "ERROR" };
            let data = json!({ "error": e.code(), "message": e.to_string() });
            let inputs = cli.command.map_args().iter().map(|s| s.to_string()).collect();
            let code = if indeterminate { EXIT_INDETERMINATE } else { EXIT_ERROR };
            (inputs, Report { verdict: verdict.into(), certificates: Vec::new(), data, indeterminate }, code)
        }
    };
    let mut doc = Map::new();
    doc.insert("command".into(), json!(cli.command.name()));
    doc.insert("inputs".into(), json!(inputs));
    doc.insert("verdict".into(), json!(report.verdict));
    doc.insert("certificates".into(), serde_json::to_value(&report.certificates).unwrap());
    doc.insert("data".into(), report.data);
    doc.insert("precision_bits".into(), json!(cfg.precision));
    doc.insert("elapsed_ms".into(), json!(elapsed));
    let doc = Value::Object(doc);
    let stdout = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).unwrap() + "\n",
        Format::Text => text_report(&doc),
    };
    let stderr = if code == EXIT_ERROR { format!("error: {}\n", doc["data"]["message"].as_str().unwrap_or("")) } else { String::new() };
    Outcome { code, stdout, stderr }
}

fn text_report(doc: &Value) -> String {
    let mut out = format!("{}: {}\n", doc["command"].as_str().unwrap(), doc["verdict"].as_str().unwrap());
    for i in doc["inputs"].as_array().unwrap() {
        out += &format!("  input {}\n", i.as_str().unwrap());
    }
    for c in doc["certificates"].as_array().unwrap() {
        out += &format!("  certificate {} {}\n", c["name"].as_str().unwrap(), c["verdict"].as_str().unwrap());
        for w in c["witnesses"].as_array().unwrap() {
            out += &format!("    {} = {}\n", w["label"].as_str().unwrap(), w["value"].as_str().unwrap());
        }
    }
    if let Value::Object(m) = &doc["data"] {
        for (k, v) in m {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out += &format!("  {k}: {s}\n");
        }
    }
    out
}

fn parse<K: ExactField>(s: &str) -> ratdyn::Result<RatMap<K>> {
    parse_map::<K>(s)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn execute<K: ExactField>(cmd: &Command, cfg: &Config) -> ratdyn::Result<(Vec<String>, Report)> {
    let maps: Vec<RatMap<K>> = cmd.map_args().into_iter().map(parse::<K>).collect::<ratdyn::Result<_>>()?;
    let inputs = strings(&maps);
    for m in &maps {
        cfg.check_degree(m.degree() as u64)?;
    }
    let report = match cmd {
        Command::Parse { .. } => {
            let a = &maps[0];
            Report::new(
                "OK",
                json!({
                    "map": a.to_string(),
                    "degree": a.degree(),
                    "numerator": ratdyn::expr::poly_to_string(a.p(), "z"),
                    "denominator": ratdyn::expr::poly_to_string(a.q(), "z"),
                    "is_mobius": a.is_mobius(),
                    "in_l": a.in_l(),
                }),
            )
        }
        Command::Portrait { .. } => {
            let a = &maps[0];
            let p = a.portrait();
            Report::new(
                "OK",
                json!({
                    "degree": a.degree(),
                    "critical_values": serde_json::to_value(p.describe(cfg.precision_cap)?).unwrap(),
                    "simple": p.is_simple(),
                }),
            )
        }
        Command::Sigma { n, .. } => {
            let a = &maps[0];
            let g = sigma_infinity_oracle(a, *n, cfg)?;
            let mut data = Map::new();
            if a.degree() == 2 {
                data.insert("mu".into(), json!(sigma_quadratic(a)?.to_string()));
            }
            data.insert("n".into(), json!(n));
            data.insert("elements".into(), json!(g.sorted_strings()));
            data.insert("complete".into(), json!(g.complete));
            let mut r = Report::new(if g.complete { "OK" } else { "INDETERMINATE" }, Value::Object(data));
            r.indeterminate = !g.complete;
            r
        }
        Command::Certify { kind, .. } => {
            let a = &maps[0];
            let c = match kind {
                CertKind::Emp => emp_certificate(a)?,
                CertKind::Generic => generalized_lattes_genericity(a, cfg)?,
            };
            let mut r = Report::new(c.verdict.as_str(), json!({}));
            r.indeterminate = c.verdict == ratdyn::certificate::Verdict::Indeterminate;
            r.certificates.push(c);
            r
        }
        Command::Genus { .. } => {
            let g = genus(&maps[0], &maps[1])?;
            Report::new("OK", json!({ "genus": g.to_string() }))
        }
        Command::Irreducible { .. } => {
            let h = build_h(&maps[0], &maps[1], cfg);
            let mut r = Report::new(
                h.irreducibility.as_str(),
                json!({
                    "bipoly": h.bipoly.to_string(),
                    "bidegree": [h.bidegree.0, h.bidegree.1],
                    "criterion": h.criterion,
                    "witness": strings(&h.witness),
                    "genus": h.genus.as_ref().map(|g| g.to_string()),
                    "note": h.note,
                }),
            );
            r.indeterminate = h.irreducibility == Irreducibility::Unknown;
            r
        }
        Command::Decompose { iterate, .. } => {
            let classes = decompositions_of_iterate(&maps[0], *iterate, cfg)?;
            let views: Vec<DecompositionView> = classes.iter().map(DecompositionView::from).collect();
            Report::new(
                "OK",
                json!({ "n": iterate, "classes": serde_json::to_value(views).unwrap(), "count": classes.len() }),
            )
        }
        Command::Audit { nmax, .. } => {
            let rep = audit_iterates(&maps[0], *nmax, cfg)?;
            let mut r = Report::new(&rep.verdict, json!({ "degree": rep.degree, "rows": serde_json::to_value(&rep.rows).unwrap() }));
            r.certificates.push(rep.hypothesis.clone());
            r
        }
        Command::Monodromy { .. } => {
            let g = monodromy_group(&maps[0], cfg)?;
            let systems: Vec<Vec<Vec<usize>>> = g.block_systems().into_iter().map(|b| b.blocks).collect();
            Report::new(
                "OK",
                json!({
                    "degree": g.degree,
                    "order": g.order().to_string(),
                    "transitive": g.is_transitive(),
                    "product_is_identity": g.product_is_identity(),
                    "generators": strings(&g.generators),
                    "branch_points": g.branch_points,
                    "base_point": g.base_point,
                    "block_systems": systems,
                }),
            )
        }
        Command::Conjugacy { .. } => {
            let all = conjugacies(&maps[0], &maps[1], cfg)?;
            let verdict = if all.is_empty() { "NOT_CONJUGATE" } else { "CONJUGATE" };
            Report::new(
                verdict,
                json!({
                    "alpha": all.first().map(|m| m.to_string()),
                    "all": strings(&all),
                    "multipliers": [
                        ratdyn::dynpair::multiplier_polynomial_string(&maps[0]),
                        ratdyn::dynpair::multiplier_polynomial_string(&maps[1]),
                    ],
                }),
            )
        }
        Command::PeriodicCurves { smax, d, .. } => {
            let (a1, a2) = (&maps[0], &maps[1]);
            let curves = enumerate_periodic_curves(a1, a2, *smax, cfg)?;
            let mut list = Vec::new();
            for c in &curves {
                list.push(json!({
                    "orientation": c.orientation.as_str(),
                    "mobius": c.mobius.to_string(),
                    "s": c.s,
                    "curve": c.describe(cfg)?,
                    "invariant_d": verify_invariant(c, a1, a2, *d, cfg)?,
                }));
            }
            let probe = probe_invariant_graphs(a1, a2, 4, cfg);
            Report::new(
                "OK",
                json!({ "count": curves.len(), "curves": list, "d": d, "probe": serde_json::to_value(probe).unwrap() }),
            )
        }
        Command::Iterate { n, .. } => {
            let f = maps[0].iterate(*n, cfg)?;
            Report::new("OK", json!({ "n": n, "map": f.to_string(), "degree": f.degree() }))
        }
        Command::Lattes { .. } => {
            let a = &maps[0];
            let v = cubic_lattes_test(a)?;
            let (o1, o2) = canonical_orbifolds(a);
            Report::new(
                v.as_str(),
                json!({
                    "o1": { "signature": o1.signature(), "euler_characteristic": o1.euler_characteristic().to_string() },
                    "o2": { "signature": o2.signature(), "euler_characteristic": o2.euler_characteristic().to_string() },
                }),
            )
        }
        Command::RootUnique { n, .. } => {
            let r = iterate_root_unique(&maps[0], *n, cfg)?;
            let verdict = match (r.unique, r.complete && r.single_class) {
                (false, _) => "NOT_UNIQUE",
                (true, true) => "UNIQUE",
                (true, false) => "INDETERMINATE",
            };
            let mut rep = Report::new(
                verdict,
                json!({ "n": n, "witnesses": strings(&r.witnesses), "single_class": r.single_class, "complete": r.complete }),
            );
            rep.indeterminate = verdict == "INDETERMINATE";
            rep
        }
    };
    Ok((inputs, report))
}
