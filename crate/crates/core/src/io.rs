//! JSON encodings for matrices, minor tables and witnesses.
//!
//! Elements are carried as strings in the field's text encoding ("3/4" or
//! "-2" over the rationals, a decimal residue over GF(p)); subsets are
//! label lists; output is deterministic.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{Matrix, SkewMatrix};
use crate::minors::MinorTable;
use crate::subsets;
use crate::witness::Witness;

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| parse_error(format!("{what} must be a JSON object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_error(format!("{what} must be a JSON array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| parse_error(format!("{what} must be a JSON string")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_error(format!("missing key `{key}`")))
}

fn labels_from(v: &Value) -> Result<Vec<String>> {
    as_array(v, "labels")?
        .iter()
        .map(|l| as_str(l, "label").map(str::to_owned))
        .collect()
}

pub fn field_spec_from_json(v: &Value) -> Result<FieldSpec> {
    let obj = as_object(v, "field")?;
    match as_str(field(obj, "kind")?, "field kind")? {
        "rational" => Ok(FieldSpec::Rationals),
        "prime" => {
            let p = field(obj, "p")?
                .as_u64()
                .ok_or_else(|| parse_error("`p` must be a positive integer"))?;
            FieldSpec::prime(p)
        }
        other => Err(parse_error(format!("unknown field kind `{other}`"))),
    }
}

pub fn field_spec_to_json(spec: FieldSpec) -> Value {
    match spec {
        FieldSpec::Rationals => json!({ "kind": "rational" }),
        FieldSpec::Prime(p) => json!({ "kind": "prime", "p": p }),
    }
}

/// Parses the CLI's `--field` shorthand: `rational` or `p=<odd prime>`.
pub fn field_spec_from_arg(s: &str) -> Result<FieldSpec> {
    if s == "rational" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(p) = s.strip_prefix("p=") {
        let p: u64 = p
            .parse()
            .map_err(|_| parse_error(format!("bad modulus `{p}`")))?;
        return FieldSpec::prime(p);
    }
    Err(parse_error(format!(
        "field must be `rational` or `p=<odd prime>`, got `{s}`"
    )))
}

/// Parses a matrix object. A present `"skew": true` flag makes the reader
/// reject non-skew entries.
pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    let obj = as_object(&v, "matrix")?;
    let spec = field_spec_from_json(field(obj, "field")?)?;
    let labels = labels_from(field(obj, "labels")?)?;
    let rows = as_array(field(obj, "rows")?, "rows")?;
    let n = labels.len();
    if rows.len() != n {
        return Err(Error::NotSquare { rows: rows.len(), cols: n });
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = as_array(row, "row")?;
        if row.len() != n {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
        for e in row {
            entries.push(spec.parse(as_str(e, "entry")?)?);
        }
    }
    let m = Matrix::new(spec, labels, entries)?;
    let skew_flag = match obj.get("skew") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(parse_error("`skew` must be a boolean")),
    };
    if skew_flag {
        if let Some((i, j)) = m.skew_violation() {
            return Err(Error::SkewViolation {
                row: m.labels()[i].clone(),
                col: m.labels()[j].clone(),
            });
        }
    }
    Ok(m)
}

pub fn skew_matrix_from_json(text: &str) -> Result<SkewMatrix> {
    SkewMatrix::new(matrix_from_json(text)?)
}

pub fn matrix_to_json(m: &Matrix) -> String {
    let n = m.n();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| json!(m.get(i, j).to_string())).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("field".into(), field_spec_to_json(m.spec()));
    obj.insert("labels".into(), json!(m.labels()));
    obj.insert("rows".into(), Value::Array(rows));
    if m.is_skew() {
        obj.insert("skew".into(), json!(true));
    }
    serde_json::to_string_pretty(&Value::Object(obj)).expect("matrix serializes")
}

/// Parses a minor table. The file format carries no field marker, so the
/// field is supplied by the caller.
pub fn minor_table_from_json(text: &str, spec: FieldSpec) -> Result<MinorTable> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    let obj = as_object(&v, "minor table")?;
    let labels = labels_from(field(obj, "labels")?)?;
    let max_order = field(obj, "max_order")?
        .as_u64()
        .ok_or_else(|| parse_error("`max_order` must be a nonnegative integer"))?
        as usize;
    let index_of = |l: &str| -> Result<usize> {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::UnknownLabel(l.to_owned()))
    };
    let mut raw = Vec::new();
    for entry in as_array(field(obj, "minors")?, "minors")? {
        let entry = as_object(entry, "minor entry")?;
        let mut mask = 0u32;
        for l in as_array(field(entry, "subset")?, "subset")? {
            let i = index_of(as_str(l, "subset label")?)?;
            if subsets::contains(mask, i) {
                return Err(parse_error("subset repeats a label"));
            }
            mask |= 1 << i;
        }
        let value = spec.parse(as_str(field(entry, "value")?, "minor value")?)?;
        raw.push((mask, value));
    }
    MinorTable::from_entries(spec, labels, max_order, raw)
}

pub fn minor_table_to_json(t: &MinorTable) -> String {
    let labels = t.labels();
    let minors: Vec<Value> = t
        .entries()
        .iter()
        .map(|(mask, v)| {
            let subset: Vec<&String> =
                subsets::indices(*mask).into_iter().map(|i| &labels[i]).collect();
            json!({ "subset": subset, "value": v.to_string() })
        })
        .collect();
    let out = json!({
        "labels": labels,
        "max_order": t.max_order(),
        "minors": minors,
    });
    serde_json::to_string_pretty(&out).expect("minor table serializes")
}

pub fn witness_from_json(text: &str) -> Result<Witness> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    let obj = as_object(&v, "witness")?;
    let transposed = field(obj, "transposed")?
        .as_bool()
        .ok_or_else(|| parse_error("`transposed` must be a boolean"))?;
    let mut signs = std::collections::BTreeMap::new();
    for (l, s) in as_object(field(obj, "signs")?, "signs")? {
        let s = s
            .as_i64()
            .ok_or_else(|| parse_error("signs must be -1 or 1"))?;
        if s != 1 && s != -1 {
            return Err(parse_error("signs must be -1 or 1"));
        }
        signs.insert(l.clone(), s as i8);
    }
    Witness::new(signs, transposed)
}

pub fn witness_to_json(w: &Witness) -> String {
    let signs: Map<String, Value> = w
        .signs()
        .iter()
        .map(|(l, s)| (l.clone(), json!(*s)))
        .collect();
    let out = json!({ "transposed": w.transposed(), "signs": signs });
    serde_json::to_string_pretty(&out).expect("witness serializes")
}
