//! The bundled worked examples, reproduced end to end.
//!
//! Each data file fixes the field presentations (moduli with x registered as
//! primitive element), the evaluation points and column multipliers as
//! exponent lists, the twist entries and the expected parameters.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::{Bounds, CodeReport, MdsClass};
use crate::criteria::{check_so, SoDecision};
use crate::error::{Error, Result};
use crate::gf::{Elem, Embedding, Field, Poly};
use crate::json::{elem_from_json, elems_from_json, parse_elem, twist_from_json, FieldSpec};
use crate::tgrs::{EvalData, TgrsInstance};

pub const IDS: [&str; 10] =
    ["block1", "block2", "block3", "line1", "line2", "block4", "block5", "block6", "line3", "line4"];

pub(crate) fn raw(id: &str) -> Option<&'static str> {
    Some(match id {
        "block1" => include_str!("../data/block1.json"),
        "block2" => include_str!("../data/block2.json"),
        "block3" => include_str!("../data/block3.json"),
        "line1" => include_str!("../data/line1.json"),
        "line2" => include_str!("../data/line2.json"),
        "block4" => include_str!("../data/block4.json"),
        "block5" => include_str!("../data/block5.json"),
        "block6" => include_str!("../data/block6.json"),
        "line3" => include_str!("../data/line3.json"),
        "line4" => include_str!("../data/line4.json"),
        _ => return None,
    })
}

/// Parameters an example is expected to reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dual_k: usize,
    pub dual_d: usize,
    pub mds_class: MdsClass,
    pub self_orthogonal: bool,
    pub self_dual: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturates: Option<bool>,
    /// Value printed in the source text when it disagrees with the derived one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published_quantum: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExampleCase {
    pub label: String,
    pub instance: TgrsInstance,
    pub expected: Expected,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub id: String,
    pub summary: String,
    /// Defining polynomial over its coefficient field, when the points are its roots.
    pub g: Option<Poly>,
    pub split: Field,
    /// Image of the coefficient field's x in `split`.
    pub base_embedding: Option<Embedding>,
    /// Embedding of `split` into the code field (identity when absent).
    pub code_embedding: Option<Embedding>,
    pub cases: Vec<ExampleCase>,
}

fn req<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("example is missing {key:?}")))
}

fn field_of(v: &Value) -> Result<Field> {
    let spec: FieldSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("field: {e}")))?;
    spec.build()
}

impl Example {
    pub fn load(id: &str) -> Result<Example> {
        let text = raw(id).ok_or_else(|| Error::Parse(format!("unknown example {id:?}")))?;
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Example::from_json(&v)
    }

    pub fn all() -> Result<Vec<Example>> {
        IDS.iter().map(|id| Example::load(id)).collect()
    }

    pub fn from_json(v: &Value) -> Result<Example> {
        let id = req(v, "id")?.as_str().unwrap_or_default().to_string();
        let summary = v.get("summary").and_then(Value::as_str).unwrap_or_default().to_string();
        let split = field_of(req(v, "split")?)?;
        let (g, base_embedding) = match v.get("base") {
            Some(b) => {
                let base = field_of(b)?;
                let g = Poly::new(&base, elems_from_json(&base, req(v, "g")?)?);
                let emb = match v.get("base_image") {
                    Some(img) => Embedding::with_image(&base, &split, elem_from_json(&split, img)?)?,
                    None => Embedding::new(&base, &split)?,
                };
                (Some(g), Some(emb))
            }
            None => (None, None),
        };
        let (code, code_embedding) = match v.get("code") {
            Some(c) => {
                let code = field_of(c)?;
                let img = parse_elem(&code, req(v, "split_image")?.as_str().unwrap_or_default())?;
                let emb = Embedding::with_image(&split, &code, img)?;
                (code, Some(emb))
            }
            None => (split.clone(), None),
        };
        let alpha: Vec<Elem> = elems_from_json(&split, req(v, "alpha")?)?
            .into_iter()
            .map(|a| code_embedding.as_ref().map_or(a, |e| e.map(a)))
            .collect();
        let vv = elems_from_json(&code, req(v, "v")?)?;
        let k = req(v, "k")?.as_u64().ok_or_else(|| Error::Parse("k must be an integer".into()))? as usize;
        let eval = EvalData::new(&code, alpha, vv)?;
        let mut cases = Vec::new();
        for c in req(v, "cases")?.as_array().ok_or_else(|| Error::Parse("cases must be an array".into()))? {
            let twist = twist_from_json(&code, req(c, "twist")?)?;
            let expected: Expected = serde_json::from_value(req(c, "expected")?.clone())
                .map_err(|e| Error::Parse(format!("expected: {e}")))?;
            cases.push(ExampleCase {
                label: c.get("label").and_then(Value::as_str).unwrap_or_default().to_string(),
                instance: TgrsInstance::new(eval.clone(), k, twist)?,
                expected,
            });
        }
        Ok(Example { id, summary, g, split, base_embedding, code_embedding, cases })
    }

    /// Whether the evaluation points are exactly the roots of g.
    pub fn points_are_roots(&self) -> Option<bool> {
        let (g, emb) = (self.g.as_ref()?, self.base_embedding.as_ref()?);
        let g = emb.map_poly(g);
        let pts = self.cases.first()?.instance.eval().alpha();
        let pulled: Option<Vec<Elem>> = match &self.code_embedding {
            Some(e) => pts.iter().map(|&a| e.preimage(a)).collect(),
            None => Some(pts.to_vec()),
        };
        let pulled = pulled?;
        Some(g.degree() == Some(pulled.len()) && pulled.iter().all(|&a| g.eval(a).is_zero()))
    }
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> Check {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    Check { name: name.into(), ok: expected == actual, expected, actual }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub id: String,
    pub label: String,
    pub report: CodeReport,
    pub decision: SoDecision,
    pub checks: Vec<Check>,
    /// Extra remark, e.g. a disagreement with a published value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Builds, analyses and compares every case of an example.
pub fn verify(ex: &Example, bounds: &Bounds) -> Result<Vec<CaseOutcome>> {
    let roots = ex.points_are_roots();
    ex.cases
        .iter()
        .map(|c| {
            let inst = &c.instance;
            let code = inst.code()?;
            let report = code.report(bounds)?;
            let decision = check_so(inst)?;
            let e = &c.expected;
            let mut checks = vec![
                check("n", e.n, report.n),
                check("k", e.k, report.k),
                check("d", e.d, report.d),
                check("dual k", e.dual_k, report.dual_k),
                check("dual d", e.dual_d, report.dual_d),
                check("class", e.mds_class, report.mds_class),
                check("self-orthogonal", e.self_orthogonal, report.self_orthogonal),
                check("self-dual", e.self_dual, report.self_dual),
                check("criterion verdict", e.self_orthogonal, decision.verdict),
            ];
            if let Some(r) = roots {
                checks.push(check("points are the roots of g", true, r));
            }
            if let Some(q) = &e.quantum {
                let actual = report.quantum.map_or("none".to_string(), |p| p.to_string());
                checks.push(check("quantum", q, actual));
            }
            if let Some(s) = e.saturates {
                checks.push(check("quantum Singleton equality", s, report.quantum.is_some_and(|p| p.saturates_singleton)));
            }
            let note = e.published_quantum.as_ref().map(|p| {
                let derived = report.quantum.map_or("none".to_string(), |q| q.to_string());
                format!("published value {p} (suspected erratum); derived {derived}")
            });
            Ok(CaseOutcome { id: ex.id.clone(), label: c.label.clone(), report, decision, checks, note })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_load() {
        let all = Example::all().unwrap();
        assert_eq!(all.len(), IDS.len());
        for ex in &all {
            assert!(!ex.cases.is_empty(), "{}", ex.id);
        }
    }

    #[test]
    fn block1_reproduces() {
        let ex = Example::load("block1").unwrap();
        let out = verify(&ex, &Bounds::default()).unwrap();
        assert!(out[0].passed(), "{:?}", out[0].checks);
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(Example::load("nope"), Err(Error::Parse(_))));
    }
}
