//! JSON formats for complexes, cell complexes and differential cochains.
//!
//! Exact numbers are written as decimal strings (`"12"`, `"-3/4"`) so that they are
//! never squeezed through floating point; readers also accept plain JSON integers.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cells::{Cell, CellComplex, Cochain};
use crate::chain::{Complex, Ring};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(Error::Parse(format!("`{s}` has a zero denominator")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn value_to_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        Value::Number(n) if n.is_u64() => Ok(BigRational::from_integer(BigInt::from(n.as_u64().unwrap()))),
        other => Err(Error::Parse(format!("expected an exact number, found {other}"))),
    }
}

pub fn rationals_from_json(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array of numbers".into()))?.iter().map(value_to_rational).collect()
}

pub fn rationals_to_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(rational_to_string(q))).collect())
}

/// `{ring, lo, hi, ranks, differentials}` with each differential row-major.
#[derive(Serialize, Deserialize)]
struct ComplexFile {
    ring: Ring,
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    differentials: Vec<Vec<Value>>,
}

pub fn complex_to_json(c: &Complex) -> Value {
    let f = ComplexFile {
        ring: c.ring(),
        lo: c.lo(),
        hi: c.hi(),
        ranks: (c.lo()..=c.hi()).map(|n| c.rank(n)).collect(),
        differentials: (c.lo()..c.hi())
            .map(|n| c.differential(n).data().iter().map(|q| Value::String(rational_to_string(q))).collect())
            .collect(),
    };
    serde_json::to_value(f).expect("complex serializes")
}

pub fn complex_from_json(v: &Value) -> Result<Complex> {
    let f: ComplexFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("complex: {e}")))?;
    if f.hi < f.lo || f.ranks.len() as i64 != f.hi - f.lo + 1 {
        return Err(Error::Parse(format!("window [{}, {}] does not match {} ranks", f.lo, f.hi, f.ranks.len())));
    }
    let diffs = f
        .differentials
        .iter()
        .enumerate()
        .map(|(i, entries)| {
            let (rows, cols) = (f.ranks[i + 1], f.ranks[i]);
            if entries.len() != rows * cols {
                return Err(Error::Parse(format!("differential {} needs {} entries, got {}", f.lo + i as i64, rows * cols, entries.len())));
            }
            Ok(QMatrix::from_vec(rows, cols, entries.iter().map(value_to_rational).collect::<Result<_>>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    Complex::new(f.ring, f.lo, f.ranks, diffs)
}

#[derive(Deserialize)]
struct Triangulation {
    #[serde(default)]
    #[allow(dead_code)]
    vertices: Vec<Value>,
    facets: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct GeneralCell {
    id: Value,
    dim: usize,
    #[serde(default)]
    boundary: Vec<(Value, i64)>,
}

#[derive(Deserialize)]
struct GeneralCells {
    cells: Vec<GeneralCell>,
}

/// Reads either `{vertices, facets}` or `{cells: [{id, dim, boundary: [[id, inc], ...]}]}`.
pub fn cell_complex_from_json(v: &Value) -> Result<CellComplex> {
    if v.get("facets").is_some() {
        let t: Triangulation = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("triangulation: {e}")))?;
        return CellComplex::from_facets(&t.facets);
    }
    if v.get("cells").is_some() {
        let g: GeneralCells = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("cell list: {e}")))?;
        let top = g.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut index = std::collections::HashMap::new();
        let mut layers: Vec<Vec<&GeneralCell>> = vec![vec![]; top + 1];
        for c in &g.cells {
            let key = c.id.to_string();
            if index.insert(key.clone(), (c.dim, layers[c.dim].len())).is_some() {
                return Err(Error::Parse(format!("duplicate cell id {key}")));
            }
            layers[c.dim].push(c);
        }
        let cells = layers
            .iter()
            .enumerate()
            .map(|(d, layer)| {
                layer
                    .iter()
                    .map(|c| {
                        let boundary = c
                            .boundary
                            .iter()
                            .map(|(id, inc)| match index.get(&id.to_string()) {
                                Some(&(fd, pos)) if fd + 1 == d => Ok((pos, *inc)),
                                Some(_) => Err(Error::Parse(format!("cell {} has a boundary cell {id} of the wrong dimension", c.id))),
                                None => Err(Error::Parse(format!("cell {} references unknown cell {id}", c.id))),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Cell { boundary, label: c.id.to_string(), vertices: None })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return CellComplex::from_cells(cells);
    }
    Err(Error::Parse("expected a triangulation (`facets`) or a cell list (`cells`)".into()))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

pub fn cochain_to_json(z: &Cochain) -> Value {
    serde_json::json!({ "degree": z.degree, "values": rationals_to_json(&z.values) })
}
