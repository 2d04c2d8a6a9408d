//! Tensor JSON format.
//!
//! ```json
//! {"dim": 5, "field": "rational", "entries": [[0,1,0,1,"1"], ...]}
//! ```
//!
//! Entries may list any generating set. The loader expands each entry over
//! its orbit under the pair (anti)symmetries, rejects inconsistent values,
//! and then checks the first Bianchi identity. The emitter writes the
//! orbit-canonical form: one entry per orbit with `i < j`, `k < l`,
//! `(i,j) <= (k,l)` and a nonzero value, in lexicographic order.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{Field, GaussianRational, Rational, Scalar, C64, DEFAULT_TOLERANCE};
use crate::tensor::{orbit, CurvatureTensor};

/// A tensor over whichever field its file declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTensor {
    Rational(CurvatureTensor<Rational>),
    GaussianRational(CurvatureTensor<GaussianRational>),
    F64(CurvatureTensor<f64>),
    C64(CurvatureTensor<C64>),
}

impl AnyTensor {
    pub fn field(&self) -> Field {
        match self {
            AnyTensor::Rational(_) => Field::Rational,
            AnyTensor::GaussianRational(_) => Field::GaussianRational,
            AnyTensor::F64(_) => Field::F64,
            AnyTensor::C64(_) => Field::C64,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyTensor::Rational(t) => t.dim(),
            AnyTensor::GaussianRational(t) => t.dim(),
            AnyTensor::F64(t) => t.dim(),
            AnyTensor::C64(t) => t.dim(),
        }
    }

    pub fn emit(&self) -> String {
        match self {
            AnyTensor::Rational(t) => emit_tensor(t),
            AnyTensor::GaussianRational(t) => emit_tensor(t),
            AnyTensor::F64(t) => emit_tensor(t),
            AnyTensor::C64(t) => emit_tensor(t),
        }
    }
}

#[derive(Deserialize, Serialize)]
struct TensorFile {
    dim: usize,
    field: Field,
    entries: Vec<Vec<Value>>,
}

/// Parses a tensor file in whatever field it declares.
pub fn parse_tensor(text: &str) -> Result<AnyTensor> {
    let file: TensorFile = serde_json::from_str(text)?;
    Ok(match file.field {
        Field::Rational => AnyTensor::Rational(build(&file)?),
        Field::GaussianRational => AnyTensor::GaussianRational(build(&file)?),
        Field::F64 => AnyTensor::F64(build(&file)?),
        Field::C64 => AnyTensor::C64(build(&file)?),
    })
}

/// Parses a tensor file whose declared field must be `F`.
pub fn parse_tensor_as<F: Scalar>(text: &str) -> Result<CurvatureTensor<F>> {
    let file: TensorFile = serde_json::from_str(text)?;
    if file.field != F::FIELD {
        return Err(Error::Malformed(format!(
            "file declares field {}, expected {}",
            file.field,
            F::FIELD
        )));
    }
    build(&file)
}

fn index(v: &Value, dim: usize, entry: &[Value]) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| Error::Malformed(format!("non-integer index in entry {entry:?}")))?
        as usize;
    if i >= dim {
        return Err(Error::IndexOutOfRange {
            index: entry.iter().take(4).filter_map(Value::as_u64).map(|v| v as usize).collect(),
            dim,
        });
    }
    Ok(i)
}

fn build<F: Scalar>(file: &TensorFile) -> Result<CurvatureTensor<F>> {
    let n = file.dim;
    if n == 0 {
        return Err(Error::InvalidDimension {
            dim: 0,
            reason: "dimension must be positive".into(),
        });
    }
    let mut slots: Vec<Option<F>> = vec![None; n.pow(4)];
    let offset = |[i, j, k, l]: [usize; 4]| ((i * n + j) * n + k) * n + l;
    for entry in &file.entries {
        if entry.len() != 5 {
            return Err(Error::Malformed(format!(
                "entries must be [i,j,k,l,value], got {entry:?}"
            )));
        }
        let idx = [
            index(&entry[0], n, entry)?,
            index(&entry[1], n, entry)?,
            index(&entry[2], n, entry)?,
            index(&entry[3], n, entry)?,
        ];
        let value = F::parse_value(&entry[4])?;
        for (image, positive) in orbit(idx) {
            let v = if positive { value } else { -value };
            let slot = &mut slots[offset(image)];
            match slot {
                Some(existing) if !existing.approx_eq(&v, DEFAULT_TOLERANCE) => {
                    // the image may coincide with `idx` itself under a sign flip
                    let forced = if positive { *existing } else { -*existing };
                    return Err(Error::SymmetryConflict {
                        index: idx,
                        forced: forced.to_value().to_string(),
                        given: value.to_value().to_string(),
                    });
                }
                _ => *slot = Some(v),
            }
        }
    }
    let tensor = CurvatureTensor::from_fn(n, |i, j, k, l| {
        slots[offset([i, j, k, l])].unwrap_or_else(F::zero)
    });
    let report = tensor.validate_symmetries(DEFAULT_TOLERANCE);
    if let Some(v) = report.violations.first() {
        return Err(Error::Malformed(format!(
            "{:?} violated at {:?} (residual {:e})",
            v.identity, v.index, v.residual
        )));
    }
    Ok(tensor)
}

/// Orbit-canonical entries `(i,j,k,l,value)`.
pub fn canonical_entries<F: Scalar>(t: &CurvatureTensor<F>) -> Vec<([usize; 4], F)> {
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    if (i, j) > (k, l) {
                        continue;
                    }
                    let v = t.get(i, j, k, l);
                    if !v.is_zero() {
                        out.push(([i, j, k, l], v));
                    }
                }
            }
        }
    }
    out
}

/// Writes the canonical JSON form, one entry per line.
pub fn emit_tensor<F: Scalar>(t: &CurvatureTensor<F>) -> String {
    let entries: Vec<String> = canonical_entries(t)
        .into_iter()
        .map(|([i, j, k, l], v)| format!("  [{i},{j},{k},{l},{}]", v.to_value()))
        .collect();
    let body = if entries.is_empty() {
        String::new()
    } else {
        format!("\n{}\n", entries.join(",\n"))
    };
    format!(
        "{{\"dim\":{},\"field\":\"{}\",\"entries\":[{}]}}\n",
        t.dim(),
        F::FIELD,
        body
    )
}

/// SHA-256 of the canonical emitted form, hex encoded.
pub fn tensor_hash<F: Scalar>(t: &CurvatureTensor<F>) -> String {
    sha256_hex(emit_tensor(t).as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_generator_gives_constant_curvature_in_dimension_two() {
        let t = parse_tensor(r#"{"dim":2,"field":"rational","entries":[[0,1,0,1,"1"]]}"#).unwrap();
        let expected = CurvatureTensor::constant_curvature(2, Rational::from_int(1)).unwrap();
        assert_eq!(t, AnyTensor::Rational(expected));
    }

    #[test]
    fn inconsistent_orbit_is_rejected() {
        let text = r#"{"dim":2,"field":"rational","entries":[[0,1,0,1,"1"],[1,0,0,1,"1"]]}"#;
        assert!(matches!(parse_tensor(text), Err(Error::SymmetryConflict { .. })));
    }

    #[test]
    fn consistent_duplicate_is_accepted() {
        let text = r#"{"dim":2,"field":"rational","entries":[[0,1,0,1,"1"],[1,0,0,1,"-1"]]}"#;
        assert!(parse_tensor(text).is_ok());
    }

    #[test]
    fn self_conflicting_orbit_is_rejected() {
        let text = r#"{"dim":3,"field":"rational","entries":[[0,0,1,2,"1"]]}"#;
        assert!(matches!(parse_tensor(text), Err(Error::SymmetryConflict { .. })));
    }

    #[test]
    fn out_of_range_and_malformed() {
        let text = r#"{"dim":2,"field":"rational","entries":[[0,1,0,2,"1"]]}"#;
        assert!(matches!(parse_tensor(text), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(parse_tensor("{not json"), Err(Error::Json(_))));
        let bad_value = r#"{"dim":2,"field":"rational","entries":[[0,1,0,1,"x"]]}"#;
        assert!(matches!(parse_tensor(bad_value), Err(Error::Malformed(_))));
    }

    #[test]
    fn bianchi_violation_is_rejected() {
        // R(0,1,2,3) alone is not Bianchi-closed
        let text = r#"{"dim":4,"field":"rational","entries":[[0,1,2,3,"1"]]}"#;
        assert!(matches!(parse_tensor(text), Err(Error::Malformed(_))));
    }

    #[test]
    fn gaussian_and_float_fields() {
        let g = parse_tensor(r#"{"dim":2,"field":"gaussian_rational","entries":[[0,1,0,1,"1/2+1/3i"]]}"#)
            .unwrap();
        assert_eq!(g.field(), Field::GaussianRational);
        let f = parse_tensor(r#"{"dim":2,"field":"f64","entries":[[0,1,0,1,0.5]]}"#).unwrap();
        let AnyTensor::F64(f) = f else { panic!() };
        assert_eq!(f.get(1, 0, 1, 0), 0.5);
        let c = parse_tensor(r#"{"dim":2,"field":"c64","entries":[[0,1,0,1,[1.0,2.0]]]}"#).unwrap();
        assert_eq!(c.field(), Field::C64);
    }

    #[test]
    fn emit_is_canonical() {
        let t = CurvatureTensor::constant_curvature(3, Rational::new(3, 2)).unwrap();
        let text = emit_tensor(&t);
        assert_eq!(
            text,
            "{\"dim\":3,\"field\":\"rational\",\"entries\":[\n  [0,1,0,1,\"3/2\"],\n  [0,2,0,2,\"3/2\"],\n  [1,2,1,2,\"3/2\"]\n]}\n"
        );
        assert_eq!(parse_tensor(&text).unwrap(), AnyTensor::Rational(t));
    }
}
