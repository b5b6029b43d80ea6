//! Structured-text encodings of fields, elements, matrices, instances and
//! reports.
//!
//! Elements are written as `"0"`, `"1"`, `"b^e"` (power of the registered
//! generator), a bare integer (prime fields) or `{"coeffs": [c0, c1, ...]}`.
//! All forms are accepted on input whenever they make sense for the field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fla::Matrix;
use crate::gf::{Elem, Field};
use crate::tgrs::{EvalData, TgrsInstance, TwistMatrix};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    /// Ascending coefficients of the monic modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    /// Ascending coefficients of a registered primitive element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn of(f: &Field) -> FieldSpec {
        let generator = f.has_registered_generator().then(|| {
            let mut c = f.coeffs(f.generator());
            while c.len() > 1 && c.last() == Some(&0) {
                c.pop();
            }
            c
        });
        FieldSpec { p: f.p(), h: f.h(), modulus: Some(f.modulus().to_vec()), generator }
    }

    pub fn build(&self) -> Result<Field> {
        Field::create(self.p, self.h, self.modulus.as_deref(), self.generator.as_deref())
    }
}

pub fn field_to_json(f: &Field) -> Value {
    serde_json::to_value(FieldSpec::of(f)).expect("plain data")
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let spec: FieldSpec = serde_json::from_value(v.clone()).map_err(|e| parse_err(format!("field: {e}")))?;
    spec.build()
}

pub fn elem_to_json(f: &Field, a: Elem) -> Value {
    if f.has_registered_generator() {
        return Value::String(f.format(a));
    }
    if f.h() == 1 {
        return json!(a.0);
    }
    json!({ "coeffs": f.coeffs(a) })
}

pub fn elem_from_json(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => {
            let n = n.as_i64().ok_or_else(|| parse_err(format!("not an integer: {n}")))?;
            Ok(f.from_int(n))
        }
        Value::String(s) => parse_elem(f, s),
        Value::Object(m) => {
            let c = m.get("coeffs").ok_or_else(|| parse_err("element object needs \"coeffs\""))?;
            let c: Vec<u32> = serde_json::from_value(c.clone()).map_err(|e| parse_err(format!("coeffs: {e}")))?;
            f.from_coeffs(&c)
        }
        _ => Err(parse_err(format!("cannot read element from {v}"))),
    }
}

/// Reads `"0"`, `"1"`, `"b^e"`, `"b"` or a decimal integer.
pub fn parse_elem(f: &Field, s: &str) -> Result<Elem> {
    let s = s.trim();
    if let Some(e) = s.strip_prefix("b^") {
        let e: u64 = e.parse().map_err(|_| parse_err(format!("bad exponent in {s:?}")))?;
        return Ok(f.exp_of(e));
    }
    if s == "b" {
        return Ok(f.generator());
    }
    let n: i64 = s.parse().map_err(|_| parse_err(format!("cannot read element {s:?}")))?;
    Ok(f.from_int(n))
}

pub fn elems_from_json(f: &Field, v: &Value) -> Result<Vec<Elem>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of elements"))?
        .iter()
        .map(|x| elem_from_json(f, x))
        .collect()
}

pub fn elems_to_json(f: &Field, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|&a| elem_to_json(f, a)).collect())
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let f = m.field();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.to_rows().iter().map(|r| elems_to_json(f, r)).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(f: &Field, v: &Value) -> Result<Matrix> {
    let data = v.get("entries").or_else(|| v.get("data")).unwrap_or(v);
    let rows = data.as_array().ok_or_else(|| parse_err("matrix data must be an array of rows"))?;
    let rows: Vec<Vec<Elem>> = rows.iter().map(|r| elems_from_json(f, r)).collect::<Result<_>>()?;
    let cols = match v.get("cols").and_then(Value::as_u64) {
        Some(c) => c as usize,
        None => rows.first().map_or(0, Vec::len),
    };
    if let Some(r) = v.get("rows").and_then(Value::as_u64) {
        if r as usize != rows.len() {
            return Err(Error::DimensionMismatch(format!("declared {r} rows, found {}", rows.len())));
        }
    }
    Matrix::from_rows(f, cols, &rows)
}

/// A1 twists are written as the 2×2 block [[η11, η12], [η21, η22]], A2 as
/// the list η_1..η_{n−k}, general twists as the full k×(n−k) matrix.
pub fn twist_to_json(f: &Field, t: &TwistMatrix) -> Value {
    match t {
        TwistMatrix::A1 { eta11, eta12, eta21, eta22 } => json!({
            "shape": "A1",
            "entries": [elems_to_json(f, &[*eta11, *eta12]), elems_to_json(f, &[*eta21, *eta22])],
        }),
        TwistMatrix::A2 { eta } => json!({ "shape": "A2", "entries": elems_to_json(f, eta) }),
        TwistMatrix::General(m) => json!({ "shape": "general", "entries": matrix_to_json(m)["entries"] }),
    }
}

/// Also reads the keyed forms `eta11`..`eta22` (A1), `eta` (A2) and `matrix` (general).
pub fn twist_from_json(f: &Field, v: &Value) -> Result<TwistMatrix> {
    let shape = v.get("shape").and_then(Value::as_str).ok_or_else(|| parse_err("twist needs a \"shape\""))?;
    let entries = v.get("entries");
    let get = |key: &str| -> Result<Elem> {
        match v.get(key) {
            Some(x) => elem_from_json(f, x),
            None => Ok(Elem::ZERO),
        }
    };
    match shape {
        "A1" => match entries {
            Some(e) => {
                let rows = e.as_array().filter(|r| r.len() == 2).ok_or_else(|| parse_err("A1 entries must be a 2×2 block"))?;
                let r0 = elems_from_json(f, &rows[0])?;
                let r1 = elems_from_json(f, &rows[1])?;
                if r0.len() != 2 || r1.len() != 2 {
                    return Err(parse_err("A1 entries must be a 2×2 block"));
                }
                Ok(TwistMatrix::A1 { eta11: r0[0], eta12: r0[1], eta21: r1[0], eta22: r1[1] })
            }
            None => Ok(TwistMatrix::A1 { eta11: get("eta11")?, eta12: get("eta12")?, eta21: get("eta21")?, eta22: get("eta22")? }),
        },
        "A2" => {
            let eta = entries.or_else(|| v.get("eta")).ok_or_else(|| parse_err("A2 twist needs \"entries\""))?;
            Ok(TwistMatrix::A2 { eta: elems_from_json(f, eta)? })
        }
        "general" => {
            let m = entries.or_else(|| v.get("matrix")).ok_or_else(|| parse_err("general twist needs \"entries\""))?;
            Ok(TwistMatrix::General(matrix_from_json(f, m)?))
        }
        other => Err(parse_err(format!("unknown twist shape {other:?}"))),
    }
}

pub fn instance_to_json(inst: &TgrsInstance) -> Value {
    let f = inst.field();
    json!({
        "field": field_to_json(f),
        "n": inst.n(),
        "k": inst.k(),
        "alpha": elems_to_json(f, inst.eval().alpha()),
        "v": elems_to_json(f, inst.eval().v()),
        "twist": twist_to_json(f, inst.twist()),
    })
}

pub fn instance_from_json(v: &Value) -> Result<TgrsInstance> {
    let f = field_from_json(v.get("field").ok_or_else(|| parse_err("instance needs \"field\""))?)?;
    let alpha = elems_from_json(&f, v.get("alpha").ok_or_else(|| parse_err("instance needs \"alpha\""))?)?;
    let vv = elems_from_json(&f, v.get("v").ok_or_else(|| parse_err("instance needs \"v\""))?)?;
    let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| parse_err("instance needs integer \"k\""))? as usize;
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != alpha.len() {
            return Err(Error::DimensionMismatch(format!("declared n = {n}, alpha has {} entries", alpha.len())));
        }
    }
    let twist = twist_from_json(&f, v.get("twist").ok_or_else(|| parse_err("instance needs \"twist\""))?)?;
    TgrsInstance::new(EvalData::new(&f, alpha, vv)?, k, twist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_forms() {
        let f = Field::with_primitive_modulus(2, &[1, 1, 0, 1]).unwrap();
        for a in f.elements() {
            assert_eq!(elem_from_json(&f, &elem_to_json(&f, a)).unwrap(), a);
        }
        assert_eq!(parse_elem(&f, "b^7").unwrap(), Elem::ONE);
        let g = Field::new(3, 2).unwrap();
        for a in g.elements() {
            assert_eq!(elem_from_json(&g, &elem_to_json(&g, a)).unwrap(), a);
        }
        assert!(elem_from_json(&g, &json!({"coeffs": [3]})).is_err());
        assert!(elem_from_json(&g, &json!(true)).is_err());
    }

    #[test]
    fn instance_round_trip() {
        let f = Field::new(5, 1).unwrap();
        let e = EvalData::new(&f, vec![Elem(0), Elem(1), Elem(2), Elem(3), Elem(4)], vec![Elem(1); 5]).unwrap();
        let inst = TgrsInstance::new(e, 2, TwistMatrix::A2 { eta: vec![Elem(1), Elem(0), Elem(3)] }).unwrap();
        let back = instance_from_json(&instance_to_json(&inst)).unwrap();
        assert_eq!(back.generator(), inst.generator());
        assert_eq!(back.twist(), inst.twist());
        let a1 = TgrsInstance::new(inst.eval().clone(), 2, TwistMatrix::A1 { eta11: Elem(1), eta12: Elem(2), eta21: Elem(0), eta22: Elem(4) }).unwrap();
        assert_eq!(instance_from_json(&instance_to_json(&a1)).unwrap().twist(), a1.twist());
        let keyed = json!({ "shape": "A1", "eta12": 2 });
        assert_eq!(
            twist_from_json(&f, &keyed).unwrap(),
            TwistMatrix::A1 { eta11: Elem(0), eta12: Elem(2), eta21: Elem(0), eta22: Elem(0) }
        );
        assert!(twist_from_json(&f, &json!({ "shape": "A1", "entries": [[1, 2]] })).is_err());
    }

    #[test]
    fn field_round_trip() {
        let f = Field::with_primitive_modulus(3, &[2, 1, 0, 0, 1]).unwrap();
        let g = field_from_json(&field_to_json(&f)).unwrap();
        assert_eq!(f, g);
        assert!(g.has_registered_generator());
    }
}
