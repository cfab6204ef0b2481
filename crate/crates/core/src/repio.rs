//! JSON encoding of matrices and surface representations.
//!
//! A matrix is `[["a11","a12"],["a21","a22"]]` with rational strings; a
//! representation file is `{"genus": g, "pairs": [{"A": m, "B": m}, …]}`
//! with a `"boundary"` matrix present exactly for bounded surfaces.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sl2::Mat2;
use crate::surface::{BoundedSurfaceRep, ClosedSurfaceRep};

pub fn mat_to_json(m: &Mat2) -> Value {
    let s = |r: &Rational| Value::String(rational::format(r));
    json!([[s(m.a11()), s(m.a12())], [s(m.a21()), s(m.a22())]])
}

fn entry(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
        _ => Err(Error::Parse(format!("matrix entry {v} is not a rational string"))),
    }
}

pub fn mat_from_json(v: &Value) -> Result<Mat2> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| Error::Parse("matrix must be a 2×2 array".into()))?;
    let mut e = Vec::with_capacity(4);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::Parse("matrix row must have two entries".into()))?;
        for x in row {
            e.push(entry(x)?);
        }
    }
    let mut it = e.into_iter();
    let (a, b, c, d) = (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    );
    Mat2::new(a, b, c, d)
}

fn pairs_to_json(pairs: &[(Mat2, Mat2)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|(a, b)| json!({"A": mat_to_json(a), "B": mat_to_json(b)}))
            .collect(),
    )
}

pub fn closed_to_json(r: &ClosedSurfaceRep) -> Value {
    json!({"genus": r.genus(), "pairs": pairs_to_json(r.pairs())})
}

pub fn bounded_to_json(b: &BoundedSurfaceRep) -> Value {
    json!({
        "genus": b.genus(),
        "pairs": pairs_to_json(b.pairs()),
        "boundary": mat_to_json(b.boundary()),
    })
}

/// A parsed representation file.
#[derive(Clone, Debug)]
pub enum RepFile {
    Closed(ClosedSurfaceRep),
    Bounded(Box<BoundedSurfaceRep>),
}

pub fn rep_from_json(v: &Value) -> Result<RepFile> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("representation must be a JSON object".into()))?;
    let genus = obj
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid \"genus\"".into()))? as usize;
    let list = obj
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing or invalid \"pairs\"".into()))?;
    if list.len() != genus {
        return Err(Error::Parse(format!(
            "genus {genus} but {} pairs",
            list.len()
        )));
    }
    let mut pairs = Vec::with_capacity(genus);
    for (i, p) in list.iter().enumerate() {
        let get = |k: &str| {
            p.get(k)
                .ok_or_else(|| Error::Parse(format!("pair {} lacks \"{k}\"", i + 1)))
                .and_then(mat_from_json)
        };
        pairs.push((get("A")?, get("B")?));
    }
    match obj.get("boundary") {
        None => Ok(RepFile::Closed(ClosedSurfaceRep::new(pairs)?)),
        Some(w) => Ok(RepFile::Bounded(Box::new(BoundedSurfaceRep::with_boundary(
            pairs,
            &mat_from_json(w)?,
        )?))),
    }
}

pub fn closed_from_json(v: &Value) -> Result<ClosedSurfaceRep> {
    match rep_from_json(v)? {
        RepFile::Closed(r) => Ok(r),
        RepFile::Bounded(_) => Err(Error::Parse(
            "expected a closed representation, found a boundary".into(),
        )),
    }
}

pub fn closed_from_str(s: &str) -> Result<ClosedSurfaceRep> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    closed_from_json(&v)
}
