//! Matrices as JSON arrays of arrays of `"p/q"` strings.

use serde_json::Value;

use super::{Mat, Rational};

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn scalar_from_json(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => s.parse().map_err(|e: super::ParseRationalError| e.to_string()),
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from_int)
            .ok_or_else(|| format!("non-integer JSON number {n}; write it as a \"p/q\" string")),
        other => Err(format!("expected a rational string, found {other}")),
    }
}

/// Parse a matrix with the given shape. An empty array is accepted for any
/// shape with zero rows or zero columns.
pub fn mat_from_json(v: &Value, rows: usize, cols: usize) -> Result<Mat, String> {
    let arr = v.as_array().ok_or("matrix must be an array of rows")?;
    if arr.is_empty() && (rows == 0 || cols == 0) {
        return Ok(Mat::zeros(rows, cols));
    }
    if arr.len() != rows {
        return Err(format!("expected {rows} rows, found {}", arr.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in arr {
        let r = row.as_array().ok_or("matrix row must be an array")?;
        if r.len() != cols {
            return Err(format!("expected {cols} columns, found {}", r.len()));
        }
        for x in r {
            data.push(scalar_from_json(x)?);
        }
    }
    Ok(Mat::from_vec(rows, cols, data))
}

/// Parse a matrix whose shape is read off the JSON itself.
pub fn mat_from_json_any(v: &Value) -> Result<Mat, String> {
    let arr = v.as_array().ok_or("matrix must be an array of rows")?;
    let rows = arr.len();
    let cols = arr.first().and_then(Value::as_array).map_or(0, Vec::len);
    mat_from_json(v, rows, cols)
}
