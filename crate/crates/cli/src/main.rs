//! `tgrs`: construct, analyze and verify twisted generalized Reed-Solomon codes.
//!
//! Exit codes: 0 success, 1 a check or expectation failed, 2 bad input.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tgrs_core::catalog::{self, Example};
use tgrs_core::criteria::{check_so, is_mds};
use tgrs_core::json::{field_to_json, instance_from_json, instance_to_json};
use tgrs_core::recipes::verify_construction;
use tgrs_core::suite::{self, Mutation, SuiteConfig};
use tgrs_core::{construct, Bounds, Error, MdsClass, Recipe};

#[derive(Parser)]
#[command(name = "tgrs", version, about = "Twisted generalized Reed-Solomon code workbench")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Longest code handled by the exhaustive distance and subset searches.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an instance from a recipe file and check the recipe's claims.
    Construct {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report parameters, self-orthogonality and MDS status of an instance file.
    Analyze(AnalyzeArgs),
    /// Stabilizer code parameters of a self-orthogonal instance.
    Quantum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the bundled worked examples and compare every parameter.
    VerifyPaper {
        /// Example ids, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Write the example instances into this directory.
        #[arg(long)]
        dump_instances: Option<PathBuf>,
    },
    /// Seeded randomized comparison of every criterion with a direct computation.
    PropertySuite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Check names (or prefixes), comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Directory receiving counterexample instance files.
        #[arg(long, default_value = "counterexamples")]
        out: PathBuf,
        #[arg(long, value_enum, hide = true)]
        inject: Option<Inject>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Inject {
    SignFlip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    So,
    Sd,
    Mds,
    Dmin,
    Dual,
    Quantum,
    Hull,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated subset of so, sd, mds, dmin, dual, quantum, hull; all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<CheckKind>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    expect_so: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    expect_sd: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    expect_mds: Option<bool>,
    #[arg(long)]
    expect_d: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    /// Unreadable or invalid input, exit 2.
    Input { name: String, msg: String },
    /// A requested check or expectation did not hold, exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input { name: e.name().into(), msg: e.to_string() }
    }
}

fn input(name: &str, msg: impl Into<String>) -> Failure {
    Failure::Input { name: name.into(), msg: msg.into() }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input("Io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input("Parse", format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("json values serialize") + "\n";
    fs::write(path, text).map_err(|e| input("Io", format!("{}: {e}", path.display())))
}

fn bounds(cli: &Cli) -> Result<Bounds, Failure> {
    let mut b = Bounds::default();
    if let Ok(s) = std::env::var("TGRS_MAX_FIELD") {
        b.max_field = s.trim().parse().ok().filter(|&v: &u64| v > 0).ok_or_else(|| input("Parse", format!("TGRS_MAX_FIELD must be a positive integer, got {s:?}")))?;
    }
    if let Some(n) = cli.max_n {
        if n == 0 {
            return Err(input("Parse", "--max-n must be positive"));
        }
        b.max_n = n;
    }
    Ok(b)
}

fn emit(cli: &Cli, doc: &Value, text: &str) {
    match cli.format {
        Format::Structured => println!("{}", serde_json::to_string_pretty(doc).expect("json values serialize")),
        Format::Text => print!("{text}"),
    }
}

fn cmd_construct(cli: &Cli, recipe: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let b = bounds(cli)?;
    let rec = Recipe::from_json(&read_json(recipe)?)?;
    let c = construct(&rec, &b)?;
    let report = match verify_construction(&c, &b) {
        Err(Error::ClaimViolated(m)) => return Err(Failure::Check(format!("ClaimViolated: {m}"))),
        r => r?,
    };
    let mut doc = instance_to_json(&c.instance);
    doc["recipe"] = serde_json::to_value(&c.recipe).expect("plain data");
    doc["claim"] = serde_json::to_value(c.claim).expect("plain data");
    doc["provenance"] = serde_json::to_value(&c.provenance).expect("plain data");
    doc["report"] = serde_json::to_value(&report).expect("plain data");
    if let Some(p) = out {
        write_json(p, &doc)?;
    }
    let mut text = render::construction(&c, &report);
    match out {
        Some(p) => text.push_str(&format!("wrote {}\n", p.display())),
        None => text.push_str(&(serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n")),
    }
    emit(cli, &doc, &text);
    Ok(())
}

const ALL_CHECKS: [CheckKind; 7] =
    [CheckKind::So, CheckKind::Sd, CheckKind::Mds, CheckKind::Dmin, CheckKind::Dual, CheckKind::Quantum, CheckKind::Hull];

fn cmd_analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<(), Failure> {
    let b = bounds(cli)?;
    let inst = instance_from_json(&read_json(&a.input)?)?;
    let explicit = !a.checks.is_empty();
    let checks: Vec<CheckKind> = if explicit { a.checks.clone() } else { ALL_CHECKS.to_vec() };
    let want = |c: CheckKind| checks.contains(&c);
    let code = inst.code()?;
    let report = code.classify(&b)?;
    let f = inst.field();
    let mut doc = json!({
        "field": field_to_json(f),
        "n": report.n,
        "k": report.k,
        "twist_shape": inst.twist().shape_name(),
    });
    let mut r = render::Report::new(&inst, &report);
    let mut problems = Vec::new();

    if want(CheckKind::Dmin) {
        doc["d"] = json!(report.d);
        doc["singleton_defect"] = json!(report.singleton_defect);
        doc["mds_class"] = json!(report.mds_class);
        r.distance();
    }
    if want(CheckKind::Dual) {
        doc["dual_k"] = json!(report.dual_k);
        doc["dual_d"] = json!(report.dual_d);
        doc["dual_singleton_defect"] = json!(report.dual_singleton_defect);
        r.dual();
    }
    if want(CheckKind::Hull) {
        doc["hull_dim"] = json!(report.hull_dim);
        r.hull();
    }
    if want(CheckKind::So) {
        doc["self_orthogonal"] = json!(report.self_orthogonal);
        match check_so(&inst) {
            Ok(dec) => {
                if dec.verdict != report.self_orthogonal {
                    problems.push(format!("criterion says {}, G·Gᵀ = 0 is {}", dec.verdict, report.self_orthogonal));
                }
                r.criterion(Some(&dec));
                doc["criterion"] = serde_json::to_value(&dec).expect("plain data");
            }
            Err(Error::CaseNotCovered { .. }) => {
                r.criterion(None);
                doc["criterion"] = Value::Null;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if want(CheckKind::Sd) {
        doc["self_dual"] = json!(report.self_dual);
        r.self_dual();
    }
    if want(CheckKind::Mds) {
        let witness = is_mds(&inst, &b)?;
        doc["mds"] = json!(witness);
        if witness != (report.mds_class == MdsClass::Mds) {
            problems.push(format!("determinant test says MDS = {witness}, distance gives class {:?}", report.mds_class));
        }
        r.mds(witness);
    }
    if want(CheckKind::Quantum) {
        match code.quantum_derive(&b) {
            Ok(q) => {
                doc["quantum"] = serde_json::to_value(q).expect("plain data");
                r.quantum(Some(&q));
            }
            Err(Error::NotSelfOrthogonal) if !explicit => {
                doc["quantum"] = Value::Null;
                r.quantum(None);
            }
            Err(Error::NotSelfOrthogonal) => problems.push("NotSelfOrthogonal: quantum parameters need a self-orthogonal code".into()),
            Err(e) => return Err(e.into()),
        }
    }

    let mut expectations = Vec::new();
    let mut expect = |name: &str, expected: String, actual: String| {
        let ok = expected == actual;
        if !ok {
            problems.push(format!("expected {name} = {expected}, got {actual}"));
        }
        expectations.push(json!({ "name": name, "expected": expected, "actual": actual, "ok": ok }));
    };
    if let Some(e) = a.expect_so {
        expect("self-orthogonal", e.to_string(), report.self_orthogonal.to_string());
    }
    if let Some(e) = a.expect_sd {
        expect("self-dual", e.to_string(), report.self_dual.to_string());
    }
    if let Some(e) = a.expect_mds {
        expect("mds", e.to_string(), (report.mds_class == MdsClass::Mds).to_string());
    }
    if let Some(e) = a.expect_d {
        expect("d", e.to_string(), report.d.to_string());
    }
    r.expectations(&expectations);
    doc["expectations"] = Value::Array(expectations);
    doc["problems"] = json!(problems);
    if let Some(p) = &a.out {
        write_json(p, &doc)?;
    }
    emit(cli, &doc, &r.finish(&problems));
    match problems.first() {
        Some(p) => Err(Failure::Check(p.clone())),
        None => Ok(()),
    }
}

fn cmd_quantum(cli: &Cli, path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let b = bounds(cli)?;
    let inst = instance_from_json(&read_json(path)?)?;
    let code = inst.code()?;
    let q = match code.quantum_derive(&b) {
        Err(Error::NotSelfOrthogonal) => return Err(Failure::Check("NotSelfOrthogonal: the code is not self-orthogonal".into())),
        r => r?,
    };
    let doc = serde_json::to_value(q).expect("plain data");
    if let Some(p) = out {
        write_json(p, &doc)?;
    }
    emit(cli, &doc, &render::quantum_line(&q));
    Ok(())
}

fn cmd_verify_paper(cli: &Cli, only: &[String], dump: Option<&Path>) -> Result<(), Failure> {
    let b = bounds(cli)?;
    if let Some(bad) = only.iter().find(|id| !catalog::IDS.contains(&id.as_str())) {
        return Err(input("Parse", format!("unknown example {bad:?}; known: {}", catalog::IDS.join(", "))));
    }
    let ids: Vec<&str> = catalog::IDS.iter().copied().filter(|id| only.is_empty() || only.iter().any(|o| o == id)).collect();
    if let Some(dir) = dump {
        fs::create_dir_all(dir).map_err(|e| input("Io", format!("{}: {e}", dir.display())))?;
    }
    let mut outcomes = Vec::new();
    for id in &ids {
        let ex = Example::load(id)?;
        if let Some(dir) = dump {
            for (i, c) in ex.cases.iter().enumerate() {
                let name = if ex.cases.len() == 1 { format!("{id}.json") } else { format!("{id}-{}.json", i + 1) };
                write_json(&dir.join(name), &instance_to_json(&c.instance))?;
            }
        }
        outcomes.extend(catalog::verify(&ex, &b)?);
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let doc = json!({ "cases": outcomes, "passed": outcomes.len() - failed, "failed": failed });
    emit(cli, &doc, &render::paper_table(&outcomes));
    if failed > 0 {
        let first = outcomes.iter().find(|o| !o.passed()).expect("counted");
        return Err(Failure::Check(format!("{} of {} example cases differ, first {}", failed, outcomes.len(), first.id)));
    }
    Ok(())
}

fn cmd_property_suite(cli: &Cli, seed: u64, only: &[String], out: &Path, inject: Option<Inject>) -> Result<(), Failure> {
    let b = bounds(cli)?;
    let cfg = SuiteConfig {
        seed,
        max_n: cli.max_n.unwrap_or(SuiteConfig::default().max_n),
        only: only.to_vec(),
        mutation: inject.map(|Inject::SignFlip| Mutation::SignFlip),
        ..SuiteConfig::default()
    };
    let report = suite::run(&cfg, &b)?;
    let mut text = render::suite(&report);
    if !report.counterexamples.is_empty() {
        fs::create_dir_all(out).map_err(|e| input("Io", format!("{}: {e}", out.display())))?;
        for (i, c) in report.counterexamples.iter().enumerate() {
            let mut doc = c.instance.clone().unwrap_or_else(|| json!({}));
            doc["check"] = json!(c.check);
            doc["detail"] = json!(c.detail);
            write_json(&out.join(format!("{}-{:03}.json", c.check, i + 1)), &doc)?;
        }
        text.push_str(&format!("counterexamples written to {}\n", out.display()));
    }
    emit(cli, &serde_json::to_value(&report).expect("plain data"), &text);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} counterexamples", report.total_counterexamples())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Construct { recipe, out } => cmd_construct(&cli, recipe, out.as_deref()),
        Cmd::Analyze(a) => cmd_analyze(&cli, a),
        Cmd::Quantum { input, out } => cmd_quantum(&cli, input, out.as_deref()),
        Cmd::VerifyPaper { only, dump_instances } => cmd_verify_paper(&cli, only, dump_instances.as_deref()),
        Cmd::PropertySuite { seed, only, out, inject } => cmd_property_suite(&cli, *seed, only, out, *inject),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input { name, msg }) => {
            eprintln!("error: {name}: {msg}");
            ExitCode::from(2)
        }
    }
}
