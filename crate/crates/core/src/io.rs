//! JSON files for algebras, forms and full algebras, plus complex literals.
//!
//! An algebra file looks like
//!
//! ```json
//! { "n": 2, "P": [0, 1], "Qbar": [[[[[1.0, 0.0], ...]]]], "Qm": ..., "h": ... }
//! ```
//!
//! where every number is a `[re, im]` pair, `Qbar` is indexed `[i][j][s][t]`,
//! `Qm` `[i][j][k][t]` and `h` `[j][k]`. `Qm`, `h` and `notes` are optional.
//! Floats are written in shortest round-trip form, so save then load is exact.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::frobenius::FullThreeAlgebra;
use crate::lawrence::{ThreeAlgebra, MBAR_LEGS, M_LEGS};
use crate::tensor::{BasisPermutation, DenseTensor, Leg, Scalar, MAX_DIM};

/// Contents of an algebra file.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraFile {
    pub p: BasisPermutation,
    pub qbar: DenseTensor,
    pub qm: Option<DenseTensor>,
    pub h: Option<Vec<Vec<Scalar>>>,
    pub notes: Vec<String>,
}

impl AlgebraFile {
    pub fn new(p: BasisPermutation, qbar: DenseTensor) -> Self {
        AlgebraFile {
            p,
            qbar,
            qm: None,
            h: None,
            notes: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.qbar.n()
    }

    pub fn algebra(&self) -> Result<ThreeAlgebra> {
        ThreeAlgebra::new(self.p.clone(), self.qbar.clone(), self.qm.clone())
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n()));
        obj.insert("P".into(), json!(self.p.as_slice()));
        obj.insert("Qbar".into(), tensor_value(&self.qbar));
        if let Some(qm) = &self.qm {
            obj.insert("Qm".into(), tensor_value(qm));
        }
        if let Some(h) = &self.h {
            obj.insert("h".into(), matrix_value(h));
        }
        if !self.notes.is_empty() {
            obj.insert("notes".into(), json!(self.notes));
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("values serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::format("json", e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::format("json", "expected an object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| Error::format("n", "missing"))?
            .as_u64()
            .ok_or_else(|| Error::format("n", "expected a positive integer"))? as usize;
        if n == 0 || n > MAX_DIM {
            return Err(Error::format("n", format!("must lie in 1..={MAX_DIM}, got {n}")));
        }
        let p_raw = obj.get("P").ok_or_else(|| Error::format("P", "missing"))?;
        let p = parse_permutation(p_raw, n)?;
        let qbar_raw = obj.get("Qbar").ok_or_else(|| Error::format("Qbar", "missing"))?;
        let qbar = parse_tensor("Qbar", qbar_raw, n, MBAR_LEGS.to_vec())?;
        let qm = match obj.get("Qm") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_tensor("Qm", v, n, M_LEGS.to_vec())?),
        };
        let h = match obj.get("h") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_matrix("h", v, n)?),
        };
        let notes = match obj.get("notes") {
            None | Some(Value::Null) => Vec::new(),
            Some(v) => v
                .as_array()
                .and_then(|a| a.iter().map(|s| s.as_str().map(String::from)).collect())
                .ok_or_else(|| Error::format("notes", "expected a list of strings"))?,
        };
        Ok(AlgebraFile { p, qbar, qm, h, notes })
    }
}

fn parse_permutation(v: &Value, n: usize) -> Result<BasisPermutation> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::format("P", "expected an array of indices"))?;
    if arr.len() != n {
        return Err(Error::format("P", format!("expected {n} entries, got {}", arr.len())));
    }
    let map = arr
        .iter()
        .map(|x| x.as_u64().map(|k| k as usize))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::format("P", "entries must be non-negative integers"))?;
    BasisPermutation::new(map).map_err(|e| match e {
        Error::BasisPermutation(m) => Error::format("P", m),
        other => Error::format("P", other.to_string()),
    })
}

fn parse_scalar(field: &str, v: &Value) -> Result<Scalar> {
    let bad = || Error::format(field, format!("expected a [re, im] pair, got {v}"));
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            Ok(Scalar::new(re, im))
        }
        Value::Number(x) => Ok(Scalar::new(x.as_f64().ok_or_else(bad)?, 0.0)),
        _ => Err(bad()),
    }
}

/// Reads a nested array of depth `depth` with every level of length `n`.
fn flatten(field: &str, v: &Value, n: usize, depth: usize, out: &mut Vec<Scalar>) -> Result<()> {
    if depth == 0 {
        out.push(parse_scalar(field, v)?);
        return Ok(());
    }
    let arr = v
        .as_array()
        .filter(|a| a.len() == n)
        .ok_or_else(|| Error::format(field, format!("expected nested arrays of length {n}")))?;
    for x in arr {
        flatten(field, x, n, depth - 1, out)?;
    }
    Ok(())
}

fn parse_tensor(field: &str, v: &Value, n: usize, legs: Vec<Leg>) -> Result<DenseTensor> {
    let mut data = Vec::new();
    flatten(field, v, n, legs.len(), &mut data)?;
    DenseTensor::from_data(n, legs, data).map_err(|e| Error::format(field, e.to_string()))
}

fn parse_matrix(field: &str, v: &Value, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut data = Vec::new();
    flatten(field, v, n, 2, &mut data)?;
    Ok(data.chunks(n).map(|r| r.to_vec()).collect())
}

/// Reads a form file: either a bare `[j][k]` matrix or an object with an `h`
/// entry.
pub fn parse_form(text: &str, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::format("h", e.to_string()))?;
    match &v {
        Value::Object(obj) => {
            let inner = obj.get("h").ok_or_else(|| Error::format("h", "missing"))?;
            parse_matrix("h", inner, n)
        }
        _ => parse_matrix("h", &v, n),
    }
}

fn scalar_value(x: Scalar) -> Value {
    json!([x.re, x.im])
}

pub fn matrix_value(m: &[Vec<Scalar>]) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(|x| scalar_value(*x)).collect()))
            .collect(),
    )
}

/// Nested array `[i0][i1]...` of `[re, im]` pairs.
pub fn tensor_value(t: &DenseTensor) -> Value {
    fn build(data: &[Scalar], n: usize, depth: usize) -> Value {
        if depth == 0 {
            return scalar_value(data[0]);
        }
        let stride = data.len() / n;
        Value::Array((0..n).map(|k| build(&data[k * stride..(k + 1) * stride], n, depth - 1)).collect())
    }
    build(t.data(), t.n(), t.rank())
}

pub fn full_algebra_value(full: &FullThreeAlgebra, p: &BasisPermutation, h: &[Vec<Scalar>]) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(p.n()));
    obj.insert("P".into(), json!(p.as_slice()));
    obj.insert("h".into(), matrix_value(h));
    for (name, t) in full.tensors() {
        obj.insert(name.into(), tensor_value(t));
    }
    Value::Object(obj)
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `i` (a trailing `j` is accepted
/// in place of `i`).
pub fn parse_complex(text: &str) -> Result<Scalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::format("complex", format!("cannot parse {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Scalar::new(real(&s)?, 0.0));
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    let re = if re_part.is_empty() { 0.0 } else { real(re_part)? };
    Ok(Scalar::new(re, im))
}

/// `re + im i` with twelve decimals.
pub fn format_complex(z: Scalar) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{:.12} {} {:.12} i", z.re, sign, z.im.abs())
}
