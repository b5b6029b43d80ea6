//! One pass/fail line per acceptance criterion. Thresholds are pinned below.

use std::time::{Duration, Instant};

use tgrs_core::catalog::{verify, Example, IDS};
use tgrs_core::suite::{run, SuiteConfig, SuiteReport};
use tgrs_core::Bounds;

const SEED: u64 = 1;
/// Parameters are integers over exact fields: agreement must be exact.
const EXAMPLE_TIME: Duration = Duration::from_secs(10);
const EXAMPLES_TIME: Duration = Duration::from_secs(60);
const DIFFERENTIAL_TIME: Duration = Duration::from_secs(120);
const MIN_A1: usize = 500;
const MIN_A2: usize = 500;
const MIN_PARITY: usize = 200;
const MIN_MDS: usize = 200;
const MIN_LAMBDA: usize = 100;
const MIN_DISTANCE: usize = 100;

struct Line {
    id: usize,
    ok: bool,
    text: String,
}

fn line(id: usize, ok: bool, text: impl Into<String>) -> Line {
    let l = Line { id, ok, text: text.into() };
    println!("criterion {}: {} {}", l.id, if l.ok { "PASS" } else { "FAIL" }, l.text);
    l
}

fn examples() -> Line {
    let bounds = Bounds::default();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut cases = 0;
    for id in IDS {
        let t = Instant::now();
        let ex = Example::load(id).unwrap();
        for out in verify(&ex, &bounds).unwrap() {
            cases += 1;
            for c in out.checks.iter().filter(|c| !c.ok) {
                failures.push(format!("{id}{} {}: want {}, got {}", out.label, c.name, c.expected, c.actual));
            }
        }
        slowest = slowest.max(t.elapsed());
    }
    let total = start.elapsed();
    let ok = failures.is_empty() && slowest < EXAMPLE_TIME && total < EXAMPLES_TIME;
    let text = format!("{cases} example cases, {} mismatches, slowest {slowest:.2?}, total {total:.2?}", failures.len());
    for f in &failures {
        println!("    {f}");
    }
    line(1, ok, text)
}

fn count(r: &SuiteReport, name: &str) -> (usize, usize) {
    let c = r.check(name).unwrap();
    (c.trials, c.counterexamples)
}

#[test]
fn acceptance() {
    let bounds = Bounds::default();
    let mut lines = vec![examples()];

    let cfg = SuiteConfig { seed: SEED, ..SuiteConfig::default() };
    let start = Instant::now();
    let diff = run(&SuiteConfig { only: vec!["so-differential".into()], ..cfg.clone() }, &bounds).unwrap();
    let took = start.elapsed();
    let (a1, a1x) = count(&diff, "so-differential-a1");
    let (a2, a2x) = count(&diff, "so-differential-a2");
    lines.push(line(
        2,
        a1 >= MIN_A1 && a2 >= MIN_A2 && a1x + a2x == 0 && took < DIFFERENTIAL_TIME,
        format!("A1 {a1} instances, A2 {a2} instances, {} counterexamples, {took:.2?}", a1x + a2x),
    ));

    let rest = run(&SuiteConfig { only: vec![], ..cfg }, &bounds).unwrap();
    let (h1, h1x) = count(&rest, "parity-check-h1");
    let (h2, h2x) = count(&rest, "parity-check-h2");
    lines.push(line(
        3,
        h1 >= MIN_PARITY && h2 >= MIN_PARITY && h1x + h2x == 0,
        format!("H1 {h1} instances, H2 {h2} instances, {} failures", h1x + h2x),
    ));

    let (m, mx) = count(&rest, "mds-equivalence");
    lines.push(line(4, m >= MIN_MDS && mx == 0, format!("{m} instances, {mx} failures")));

    let (lk, lkx) = count(&rest, "lambda-key");
    let (ls, lsx) = count(&rest, "lambda-symmetric");
    let (vd, vdx) = count(&rest, "vandermonde-dual");
    lines.push(line(
        5,
        lk >= MIN_LAMBDA && ls >= MIN_LAMBDA && lkx + lsx + vdx == 0,
        format!("{lk} point sets for the key identity, {ls} brute-force sets, {vd} dual identities, {} failures", lkx + lsx + vdx),
    ));

    let bad: Vec<_> = rest.table.iter().filter(|c| !c.ok).collect();
    for c in &bad {
        println!("    {} n = {} expected {}: {} positives, {} mismatches", c.gamma, c.n, c.expected, c.positives, c.mismatches);
    }
    let twists: usize = rest.table.iter().map(|c| c.twists_checked).sum();
    lines.push(line(
        6,
        !rest.table.is_empty() && bad.is_empty(),
        format!("{} cells, {twists} twists, {} cells off", rest.table.len(), bad.len()),
    ));

    let (d, dx) = count(&rest, "distance-oracles");
    lines.push(line(7, d >= MIN_DISTANCE && dx == 0, format!("{d} codes with q^k <= 2^20, {dx} disagreements")));

    for c in rest.counterexamples.iter().chain(&diff.counterexamples).take(10) {
        println!("    {}: {}", c.check, c.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
