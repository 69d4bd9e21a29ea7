//! Real scalars written either as JSON numbers or as short symbolic
//! expressions such as `"-1/sqrt2"`, `"sqrt3/2"` or `"2*sqrt2"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{JnrError, Result};

/// Evaluates a product/quotient of factors, each a decimal number or
/// `sqrtN`, with an optional leading sign.
pub fn parse_scalar(s: &str) -> Result<f64> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err(JnrError::Parse(format!("empty scalar {s:?}")));
    }
    let mut value = 1.0;
    let mut divide = false;
    let mut start = 0;
    let bytes = body.as_bytes();
    for k in 0..=bytes.len() {
        if k == bytes.len() || bytes[k] == b'*' || bytes[k] == b'/' {
            let f = factor(&body[start..k]).ok_or_else(|| JnrError::Parse(format!("bad scalar {s:?}")))?;
            if divide {
                value /= f;
            } else {
                value *= f;
            }
            if k < bytes.len() {
                divide = bytes[k] == b'/';
            }
            start = k + 1;
        }
    }
    Ok(sign * value)
}

fn factor(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(r) = s.strip_prefix("sqrt") {
        let r = r.trim_start_matches('(').trim_end_matches(')');
        let x: f64 = r.parse().ok()?;
        return (x >= 0.0).then(|| x.sqrt());
    }
    let x: f64 = s.parse().ok()?;
    x.is_finite().then_some(x)
}

/// A real number that deserializes from a number or a symbolic string and
/// serializes as a plain number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Sym(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Real(x)),
            Raw::Sym(s) => parse_scalar(&s).map(Real).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_forms() {
        let r2 = 2f64.sqrt();
        assert_eq!(parse_scalar("sqrt2").unwrap(), r2);
        assert_eq!(parse_scalar("-1/sqrt2").unwrap(), -1.0 / r2);
        assert_eq!(parse_scalar("sqrt3/2").unwrap(), 3f64.sqrt() / 2.0);
        assert_eq!(parse_scalar("2*sqrt2").unwrap(), 2.0 * r2);
        assert_eq!(parse_scalar(" 0.5 ").unwrap(), 0.5);
        assert_eq!(parse_scalar("-sqrt3").unwrap(), -(3f64.sqrt()));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "-", "sqrt", "pi", "1//2", "sqrt-2", "1e999"] {
            assert!(parse_scalar(s).is_err(), "{s}");
        }
    }

    #[test]
    fn real_from_json() {
        let v: Vec<Real> = serde_json::from_str(r#"[1, -0.25, "sqrt2", "-1/sqrt2"]"#).unwrap();
        assert_eq!(v[1].0, -0.25);
        assert_eq!(v[3].0, -1.0 / 2f64.sqrt());
        assert!(serde_json::from_str::<Real>(r#""x""#).is_err());
    }
}
