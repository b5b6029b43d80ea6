//! Plain-text renderings of reports.

use std::fmt::Write;

use serde_json::Value;
use tgrs_core::catalog::CaseOutcome;
use tgrs_core::criteria::SoDecision;
use tgrs_core::suite::SuiteReport;
use tgrs_core::{CodeReport, Construction, QuantumParams, TgrsInstance};

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

pub fn quantum_line(q: &QuantumParams) -> String {
    let sat = if q.saturates_singleton { ", meets the quantum Singleton bound" } else { "" };
    format!("quantum   {q}{sat}\n")
}

pub fn construction(c: &Construction, r: &CodeReport) -> String {
    let mut s = String::new();
    let cl = &c.claim;
    let _ = writeln!(s, "recipe    {}", c.recipe.id);
    if let Some(g) = &c.provenance.g {
        let _ = writeln!(s, "g(x)      {g}");
    }
    let _ = writeln!(s, "field     {}", c.instance.field());
    let _ = writeln!(s, "claim     [{},{}] with d >= {}{}", cl.n, cl.k, cl.d_bound, if cl.self_dual { ", self-dual" } else { "" });
    let _ = writeln!(
        s,
        "code      [{},{},{}] {}, {}",
        r.n,
        r.k,
        r.d,
        r.mds_class,
        yes_no(r.self_dual, "self-dual", "self-orthogonal")
    );
    s
}

/// Text report of `analyze`, assembled in the order the checks run.
pub struct Report {
    out: String,
    r: CodeReport,
}

impl Report {
    pub fn new(inst: &TgrsInstance, r: &CodeReport) -> Report {
        let mut out = String::new();
        let _ = writeln!(out, "instance  [{},{}] over {}, {} twist", r.n, r.k, inst.field(), inst.twist().shape_name());
        Report { out, r: r.clone() }
    }

    pub fn distance(&mut self) {
        let r = &self.r;
        let _ = writeln!(self.out, "code      [{},{},{}], Singleton defect {}, {}", r.n, r.k, r.d, r.singleton_defect, r.mds_class);
    }

    pub fn dual(&mut self) {
        let r = &self.r;
        let _ = writeln!(self.out, "dual      [{},{},{}], Singleton defect {}", r.n, r.dual_k, r.dual_d, r.dual_singleton_defect);
    }

    pub fn hull(&mut self) {
        let _ = writeln!(self.out, "hull      dimension {}", self.r.hull_dim);
    }

    pub fn criterion(&mut self, d: Option<&SoDecision>) {
        let so = yes_no(self.r.self_orthogonal, "self-orthogonal", "not self-orthogonal");
        let _ = writeln!(self.out, "gram      {so}");
        match d {
            None => {
                let _ = writeln!(self.out, "criterion no case applies (k > n/2)");
            }
            Some(d) => {
                let v = yes_no(d.verdict, "self-orthogonal", "not self-orthogonal");
                let _ = writeln!(self.out, "criterion {}: {v}", d.applicable_case.label());
                for c in &d.failed_conditions {
                    let _ = writeln!(self.out, "          fails {}: {} != {}", c.name, c.lhs, c.rhs);
                }
            }
        }
    }

    pub fn self_dual(&mut self) {
        let _ = writeln!(self.out, "self-dual {}", yes_no(self.r.self_dual, "yes", "no"));
    }

    pub fn mds(&mut self, witness: bool) {
        let _ = writeln!(self.out, "mds test  {}", yes_no(witness, "MDS", "not MDS"));
    }

    pub fn quantum(&mut self, q: Option<&QuantumParams>) {
        match q {
            Some(q) => self.out.push_str(&quantum_line(q)),
            None => {
                let _ = writeln!(self.out, "quantum   none (not self-orthogonal)");
            }
        }
    }

    pub fn expectations(&mut self, e: &[Value]) {
        for x in e {
            let ok = x["ok"].as_bool().unwrap_or(false);
            let _ = writeln!(
                self.out,
                "expect    {} = {}: {}",
                x["name"].as_str().unwrap_or_default(),
                x["expected"].as_str().unwrap_or_default(),
                if ok { "ok".to_string() } else { format!("got {}", x["actual"].as_str().unwrap_or_default()) }
            );
        }
    }

    pub fn finish(mut self, problems: &[String]) -> String {
        for p in problems {
            let _ = writeln!(self.out, "problem   {p}");
        }
        self.out
    }
}

pub fn paper_table(outcomes: &[CaseOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let r = &o.report;
        let name = if o.label.is_empty() { o.id.clone() } else { format!("{} ({})", o.id, o.label) };
        let q = r.quantum.map_or("-".to_string(), |q| q.to_string());
        let code = format!("[{},{},{}]", r.n, r.k, r.d);
        let dual = format!("[{},{},{}]", r.n, r.dual_k, r.dual_d);
        let verdict = if o.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(s, "{name:<22} {code:<9} dual {dual:<9} {:<5} quantum {q:<11} {verdict}", r.mds_class.to_string());
        for c in o.checks.iter().filter(|c| !c.ok) {
            let _ = writeln!(s, "    {}: expected {}, got {}", c.name, c.expected, c.actual);
        }
        if let Some(n) = &o.note {
            let _ = writeln!(s, "    note: {n}");
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let _ = writeln!(s, "{passed}/{} example cases pass", outcomes.len());
    s
}

pub fn suite(r: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "seed {}", r.seed);
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{:<20} {:>7} trials {:>6} skipped {:>7} positive {:>4} counterexamples",
            c.name, c.trials, c.skipped, c.positives, c.counterexamples
        );
    }
    if !r.table.is_empty() {
        let _ = writeln!(s, "\nself-orthogonality table sweep");
        for c in &r.table {
            let cond = if c.condition.is_empty() { "-" } else { c.condition.as_str() };
            let _ = writeln!(
                s,
                "  {:<24} {:<9} {:<4} {:>6} twists {:>6} SO  {}  {}",
                c.gamma,
                c.n,
                if c.expected == "yes" { "✓" } else { "✗" },
                c.twists_checked,
                c.positives,
                if c.ok { "ok" } else { "OFF" },
                cond
            );
        }
    }
    for c in &r.counterexamples {
        let _ = writeln!(s, "counterexample {}: {}", c.check, c.detail);
    }
    s
}
