//! Output documents. Objects keep insertion order and every float is written
//! with 17 significant digits so that values survive a round trip exactly.

use mixdisc::Complex64;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Clone, Debug, PartialEq)]
pub enum Doc {
    Null,
    Bool(bool),
    Int(i128),
    Num(f64),
    Str(String),
    Arr(Vec<Doc>),
    Obj(Vec<(String, Doc)>),
}

impl Doc {
    pub fn obj() -> Self {
        Doc::Obj(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Doc>) -> Self {
        if let Doc::Obj(fields) = &mut self {
            fields.push((key.to_string(), value.into()));
        }
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Doc>) {
        if let Doc::Obj(fields) = self {
            fields.push((key.to_string(), value.into()));
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// `{:.16e}` for finite values; non-finite values become the strings
/// `"inf"`, `"-inf"` and `"nan"`.
pub fn format_float(x: f64) -> Result<Box<RawValue>, String> {
    let text = if x.is_nan() {
        "\"nan\"".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "\"inf\"" } else { "\"-inf\"" }.to_string()
    } else {
        format!("{x:.16e}")
    };
    RawValue::from_string(text).map_err(|e| e.to_string())
}

impl Serialize for Doc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Doc::Null => s.serialize_unit(),
            Doc::Bool(b) => s.serialize_bool(*b),
            Doc::Int(i) => s.serialize_i128(*i),
            Doc::Num(x) => format_float(*x).map_err(serde::ser::Error::custom)?.serialize(s),
            Doc::Str(t) => s.serialize_str(t),
            Doc::Arr(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            Doc::Obj(fields) => {
                let mut map = s.serialize_map(Some(fields.len()))?;
                for (k, v) in fields {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

impl From<bool> for Doc {
    fn from(b: bool) -> Self {
        Doc::Bool(b)
    }
}

impl From<f64> for Doc {
    fn from(x: f64) -> Self {
        Doc::Num(x)
    }
}

impl From<usize> for Doc {
    fn from(x: usize) -> Self {
        Doc::Int(x as i128)
    }
}

impl From<u32> for Doc {
    fn from(x: u32) -> Self {
        Doc::Int(x as i128)
    }
}

impl From<u64> for Doc {
    fn from(x: u64) -> Self {
        Doc::Int(x as i128)
    }
}

impl From<&str> for Doc {
    fn from(t: &str) -> Self {
        Doc::Str(t.to_string())
    }
}

impl From<String> for Doc {
    fn from(t: String) -> Self {
        Doc::Str(t)
    }
}

/// Complex numbers are written as `[re, im]`.
impl From<Complex64> for Doc {
    fn from(z: Complex64) -> Self {
        Doc::Arr(vec![Doc::Num(z.re), Doc::Num(z.im)])
    }
}

impl<T: Into<Doc>> From<Vec<T>> for Doc {
    fn from(items: Vec<T>) -> Self {
        Doc::Arr(items.into_iter().map(Into::into).collect())
    }
}

impl<T: Into<Doc>> From<Option<T>> for Doc {
    fn from(x: Option<T>) -> Self {
        x.map_or(Doc::Null, Into::into)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let d = Doc::obj().with("x", 0.1).with("y", f64::INFINITY).with("n", 3usize);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"x":1.0000000000000001e-1,"y":"inf","n":3}"#);
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn round_trip_is_exact() {
        for x in [1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, -0.0] {
            let text = serde_json::to_string(&Doc::Num(x)).unwrap();
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn objects_keep_order() {
        let d = Doc::obj().with("b", 1usize).with("a", 2usize);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"b":1,"a":2}"#);
    }
}
