//! Instance files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "matrices": [[[1, 0], [0, 1]], [1, 0, 0, [1, 0.5]]],
//!   "points": [0.5, [0.1, -0.2]],
//!   "eps": 1e-3,
//!   "rho": 0.9,
//!   "seed": 7
//! }
//! ```
//!
//! A matrix is either a list of rows or a flat row-major list of `n * n`
//! entries. An entry is a real number or an `[re, im]` pair. `matrix` may
//! replace `matrices` for single-matrix commands. A document with an `input`
//! field (any command output) is read through that field.

use std::path::Path;

use mixdisc::{Complex64, ComplexMatrix, SymmetricMatrix};
use serde_json::Value;

use crate::doc::Doc;
use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Instance {
    pub n: Option<usize>,
    pub matrices: Vec<ComplexMatrix>,
    pub points: Option<Vec<Complex64>>,
    pub eps: Option<f64>,
    pub rho: Option<f64>,
    pub seed: Option<u64>,
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Parse(msg.into()))
}

pub fn read(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<Instance, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let root = match value.get("input") {
        Some(inner) if inner.is_object() => inner,
        _ => &value,
    };
    let Some(obj) = root.as_object() else {
        return parse_err("instance must be an object");
    };
    let n = match obj.get("n") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().filter(|&n| n >= 1).ok_or_else(|| CliError::Parse("`n` must be a positive integer".into()))? as usize),
    };
    let raw: Vec<&Value> = match (obj.get("matrices"), obj.get("matrix")) {
        (Some(Value::Array(ms)), _) => ms.iter().collect(),
        (Some(_), _) => return parse_err("`matrices` must be an array"),
        (None, Some(m)) => vec![m],
        (None, None) => Vec::new(),
    };
    let matrices = raw
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(m, n).map_err(|e| CliError::Parse(format!("matrix {k}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let points = match obj.get("points") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ps)) => Some(
            ps.iter()
                .enumerate()
                .map(|(k, p)| parse_complex(p).map_err(|e| CliError::Parse(format!("point {k}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return parse_err("`points` must be an array"),
    };
    Ok(Instance {
        n,
        matrices,
        points,
        eps: optional_f64(obj.get("eps"), "eps")?,
        rho: optional_f64(obj.get("rho"), "rho")?,
        seed: match obj.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| CliError::Parse("`seed` must be a non-negative integer".into()))?),
        },
    })
}

fn optional_f64(v: Option<&Value>, name: &str) -> Result<Option<f64>, CliError> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(x) => Ok(Some(parse_real(x).map_err(|e| CliError::Parse(format!("`{name}`: {e}")))?)),
    }
}

fn parse_real(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| "number out of range".to_string()),
        Value::String(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(format!("expected a number, got \"{other}\"")),
        },
        other => Err(format!("expected a number, got {other}")),
    }
}

fn parse_complex(v: &Value) -> Result<Complex64, String> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(parse_real(&pair[0])?, parse_real(&pair[1])?)),
        Value::Array(_) => Err("complex entries are [re, im] pairs".into()),
        other => Ok(Complex64::new(parse_real(other)?, 0.0)),
    }
}

/// Nested when every item is an array as long as the list itself.
fn is_nested(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(|row| row.as_array().is_some_and(|r| r.len() == items.len()))
}

fn parse_matrix(v: &Value, n: Option<usize>) -> Result<ComplexMatrix, String> {
    let Value::Array(items) = v else {
        return Err("a matrix is an array".into());
    };
    let entries: Vec<Complex64> = if is_nested(items) {
        items.iter().flat_map(|row| row.as_array().expect("checked").iter()).map(parse_complex).collect::<Result<_, _>>()?
    } else {
        items.iter().map(parse_complex).collect::<Result<_, _>>()?
    };
    let dim = (entries.len() as f64).sqrt().round() as usize;
    if dim * dim != entries.len() || dim == 0 {
        return Err(format!("{} entries do not form a square matrix", entries.len()));
    }
    if let Some(n) = n {
        if dim != n {
            return Err(format!("dimension {dim} does not match n = {n}"));
        }
    }
    if entries.iter().any(|z| !z.is_finite()) {
        return Err("non-finite entry".into());
    }
    ComplexMatrix::new(dim, entries).map_err(|e| e.to_string())
}

pub fn to_symmetric(m: &ComplexMatrix, k: usize) -> Result<SymmetricMatrix, CliError> {
    let n = m.dim();
    if m.as_slice().iter().any(|z| z.im != 0.0) {
        return Err(CliError::Core(mixdisc::Error::Input(format!("matrix {k} must be real"))));
    }
    SymmetricMatrix::new(n, m.as_slice().iter().map(|z| z.re).collect())
        .map_err(|e| CliError::Core(mixdisc::Error::Input(format!("matrix {k}: {e}"))))
}

fn entry_doc(z: Complex64) -> Doc {
    if z.im == 0.0 {
        Doc::Num(z.re)
    } else {
        z.into()
    }
}

pub fn matrix_doc(m: &ComplexMatrix) -> Doc {
    Doc::Arr(m.rows().into_iter().map(|row| Doc::Arr(row.into_iter().map(entry_doc).collect())).collect())
}

pub fn symmetric_doc(m: &SymmetricMatrix) -> Doc {
    Doc::Arr(m.rows().into_iter().map(|row| row.into()).collect())
}

impl Instance {
    pub fn dim(&self) -> Option<usize> {
        self.n.or_else(|| self.matrices.first().map(ComplexMatrix::dim))
    }

    /// The instance in file format, so that it can be read back.
    pub fn to_doc(&self) -> Doc {
        let mut d = Doc::obj();
        d.push("n", self.dim());
        d.push("matrices", Doc::Arr(self.matrices.iter().map(matrix_doc).collect()));
        if let Some(p) = &self.points {
            d.push("points", Doc::Arr(p.iter().map(|&z| entry_doc(z)).collect()));
        }
        if let Some(eps) = self.eps {
            d.push("eps", eps);
        }
        if let Some(rho) = self.rho {
            d.push("rho", rho);
        }
        if let Some(seed) = self.seed {
            d.push("seed", seed);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_flat_and_complex_entries() {
        let inst = parse(r#"{"n": 2, "matrices": [[[1, 0], [0, 1]], [1, 0, 0, [1, 0.5]]], "points": [0.5, [0.1, -0.2]]}"#).unwrap();
        assert_eq!(inst.matrices[0], ComplexMatrix::identity(2));
        assert_eq!(inst.matrices[1].get(1, 1), Complex64::new(1.0, 0.5));
        assert_eq!(inst.points.unwrap()[1], Complex64::new(0.1, -0.2));
    }

    #[test]
    fn two_by_two_complex_rows_are_rows() {
        let inst = parse(r#"{"matrices": [[[[1, 2], 0], [0, 1]]]}"#).unwrap();
        assert_eq!(inst.matrices[0].get(0, 0), Complex64::new(1.0, 2.0));
        let inst = parse(r#"{"n": 2, "matrices": [[[1, 2], [3, 4]]]}"#).unwrap();
        assert_eq!(inst.matrices[0].get(1, 0), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse("{"), Err(CliError::Parse(_))));
        assert!(matches!(parse(r#"{"matrices": [[1, 2, 3]]}"#), Err(CliError::Parse(_))));
        assert!(matches!(parse(r#"{"n": 3, "matrices": [[[1, 0], [0, 1]]]}"#), Err(CliError::Parse(_))));
        assert!(matches!(parse(r#"{"matrices": [[[1, 0], [0]]]}"#), Err(CliError::Parse(_))));
    }

    #[test]
    fn documents_round_trip() {
        let text = r#"{"n": 2, "matrices": [[[0.1, 0], [0, [1, 0.5]]]], "points": [[0.3, 0.1]], "eps": 0.001, "rho": 0.9, "seed": 4}"#;
        let inst = parse(text).unwrap();
        let echoed = Doc::obj().with("input", inst.to_doc()).to_json();
        assert_eq!(parse(&echoed).unwrap(), inst);
    }
}
