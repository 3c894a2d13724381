//! JSON input parsing with pointer-located schema errors, and the scalar,
//! element and matrix formats shared by several commands.

use std::path::Path;
use std::str::FromStr;

use kll_core::numfield::{FieldElement, NumberField};
use kll_core::poly::Q;
use kll_core::traceorders::Mat2;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_path_to_error::Segment;

use crate::error::{pre, CliError};

fn escape(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

pub fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

pub fn parse_str<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        source: source.to_string(),
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })
}

pub fn parse_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| pre(format!("{}: {e}", path.display())))?;
    parse_str(&path.display().to_string(), &text)
}

/// An integer or a rational written as a string such as "-3/4".
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Str(String),
}

impl Scalar {
    pub fn to_q(&self) -> Result<Q, CliError> {
        match self {
            Scalar::Int(n) => Ok(Q::from_integer((*n).into())),
            Scalar::Str(s) => Q::from_str(s.trim()).map_err(|_| pre(format!("not a rational number: {s:?}"))),
        }
    }
}

/// A field element: a scalar, or coordinates in the power basis.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Scalar(Scalar),
    Coeffs(Vec<Scalar>),
}

impl ElemSpec {
    pub fn to_element(&self, k: &NumberField) -> Result<FieldElement, CliError> {
        match self {
            ElemSpec::Scalar(s) => Ok(k.rational(s.to_q()?)),
            ElemSpec::Coeffs(cs) => {
                if cs.len() > k.degree() {
                    return Err(pre(format!("{} coordinates given for a field of degree {}", cs.len(), k.degree())));
                }
                let qs = cs.iter().map(Scalar::to_q).collect::<Result<Vec<_>, _>>()?;
                Ok(k.element(qs))
            }
        }
    }
}

pub type MatSpec = [[ElemSpec; 2]; 2];

pub fn to_mat(m: &MatSpec, k: &NumberField) -> Result<Mat2, CliError> {
    Ok(Mat2::new(m[0][0].to_element(k)?, m[0][1].to_element(k)?, m[1][0].to_element(k)?, m[1][1].to_element(k)?))
}

/// `None` means Q.
pub fn field(poly: Option<&[i64]>) -> Result<NumberField, CliError> {
    match poly {
        None => Ok(NumberField::rationals()),
        Some(c) => Ok(NumberField::new(c)?),
    }
}

pub fn element_json(x: &FieldElement) -> serde_json::Value {
    serde_json::Value::Array(x.coeffs().iter().map(|c| c.to_string().into()).collect())
}

pub fn matrix_json(m: &Mat2) -> serde_json::Value {
    let [a, b, c, d] = m.entries();
    serde_json::json!([[element_json(a), element_json(b)], [element_json(c), element_json(d)]])
}

/// "3..24" or "3..=24" as an inclusive range.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || pre(format!("expected a range like 3..24, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Inner {
        order: u64,
    }

    #[derive(Debug, Deserialize)]
    #[allow(dead_code)]
    struct Outer {
        edges: Vec<Inner>,
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let err = parse_str::<Outer>("t", r#"{"edges":[{"order":2},{"order":"x"}]}"#).unwrap_err();
        match err {
            CliError::Schema { pointer, .. } => assert_eq!(pointer, "/edges/1/order"),
            e => panic!("{e}"),
        }
        assert_eq!(escape("a/b~c"), "a~1b~0c");
    }

    #[test]
    fn scalars() {
        assert_eq!(Scalar::Str("-6/8".into()).to_q().unwrap(), Q::new((-3).into(), 4.into()));
        assert!(Scalar::Str("x".into()).to_q().is_err());
        assert_eq!(parse_range("3..=24").unwrap(), 3..=24);
        assert_eq!(parse_range("3..24").unwrap(), 3..=24);
        assert!(parse_range("5..2").is_err());
    }
}
