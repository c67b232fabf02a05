//! JSON interchange format for multisets.
//!
//! ```json
//! {"format_version":"1","domain":[0,1,2],"depth":1,
//!  "elements":[[[0.2,0.1,0.5]],[[0.6,0.2,0.1]],[[0.3,0.1,0.4]]]}
//! ```
//!
//! `elements[i]` lists the `depth` triples `[σ, τ, η]` of `domain[i]`.
//! Unknown fields are rejected. Numbers are written in shortest round-trip
//! form, so `parse_instance(&emit_instance(d))` reproduces `d` bit for bit.

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::error::PfmsError;
use crate::grade::{GradeSequence, GradeTriple};
use crate::multiset::{DomainGrid, PictureFuzzyMultiset};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: PfmsError,
    },
}

impl FormatError {
    pub fn kind(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } => "SyntaxError",
            FormatError::Schema { .. } => "SchemaError",
            FormatError::Invalid { source, .. } => source.kind(),
        }
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// The serialized form of a multiset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceDocument {
    pub format_version: String,
    pub domain: Vec<f64>,
    pub depth: usize,
    pub elements: Vec<Vec<[f64; 3]>>,
}

impl From<&PictureFuzzyMultiset> for InstanceDocument {
    fn from(d: &PictureFuzzyMultiset) -> Self {
        InstanceDocument {
            format_version: FORMAT_VERSION.to_string(),
            domain: d.grid().points().to_vec(),
            depth: d.depth(),
            elements: d.to_rows(),
        }
    }
}

pub fn emit_instance(d: &PictureFuzzyMultiset) -> String {
    serde_json::to_string(&InstanceDocument::from(d)).expect("finite values serialize")
}

pub fn instance_value(d: &PictureFuzzyMultiset) -> Value {
    serde_json::to_value(InstanceDocument::from(d)).expect("finite values serialize")
}

pub fn parse_instance(text: &str) -> Result<PictureFuzzyMultiset, FormatError> {
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    instance_from_value(&value)
}

pub fn instance_from_value(value: &Value) -> Result<PictureFuzzyMultiset, FormatError> {
    let obj = value
        .as_object()
        .ok_or_else(|| FormatError::schema("$", "expected an object"))?;
    check_fields(obj)?;

    match obj.get("format_version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(Value::String(v)) => {
            return Err(FormatError::schema(
                "$.format_version",
                format!("unsupported version \"{v}\""),
            ))
        }
        _ => {
            return Err(FormatError::schema(
                "$.format_version",
                "expected the string \"1\"",
            ))
        }
    }

    let domain = number_array(&obj["domain"], "$.domain")?;
    let depth = obj["depth"]
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| FormatError::schema("$.depth", "expected a positive integer"))?
        as usize;

    let elements = obj["elements"]
        .as_array()
        .ok_or_else(|| FormatError::schema("$.elements", "expected an array"))?;
    if elements.len() != domain.len() {
        return Err(FormatError::schema(
            "$.elements",
            format!(
                "expected {} elements (one per domain point), found {}",
                domain.len(),
                elements.len()
            ),
        ));
    }

    let grid = DomainGrid::new(domain).map_err(|source| {
        let path = match source {
            PfmsError::NonFiniteCoordinate { index }
            | PfmsError::DuplicateCoordinate { index }
            | PfmsError::UnsortedGrid { index } => format!("$.domain[{}]", index + 1),
            _ => "$.domain".to_string(),
        };
        FormatError::Invalid { path, source }
    })?;

    let mut grades = Vec::with_capacity(elements.len());
    for (i, element) in elements.iter().enumerate() {
        let path = format!("$.elements[{i}]");
        let levels = element
            .as_array()
            .ok_or_else(|| FormatError::schema(&path, "expected an array of triples"))?;
        if levels.len() != depth {
            return Err(FormatError::schema(
                &path,
                format!("expected {depth} triples, found {}", levels.len()),
            ));
        }
        let mut triples = Vec::with_capacity(depth);
        for (k, triple) in levels.iter().enumerate() {
            let tpath = format!("{path}[{k}]");
            let values = number_array(triple, &tpath)?;
            if values.len() != 3 {
                return Err(FormatError::schema(
                    &tpath,
                    format!("expected [sigma, tau, eta], found {} numbers", values.len()),
                ));
            }
            let g = GradeTriple::new(values[0], values[1], values[2]).map_err(|source| {
                FormatError::Invalid {
                    path: tpath,
                    source,
                }
            })?;
            triples.push(g);
        }
        GradeSequence::validate(&triples, i).map_err(|source| FormatError::Invalid {
            path: path.clone(),
            source,
        })?;
        grades.push(GradeSequence::from_levels_unchecked(triples));
    }

    PictureFuzzyMultiset::new(grid, grades).map_err(|source| FormatError::Invalid {
        path: "$".to_string(),
        source,
    })
}

fn check_fields(obj: &Map<String, Value>) -> Result<(), FormatError> {
    const FIELDS: [&str; 4] = ["format_version", "domain", "depth", "elements"];
    if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(FormatError::schema(format!("$.{extra}"), "unknown field"));
    }
    if let Some(missing) = FIELDS.iter().find(|f| !obj.contains_key(**f)) {
        return Err(FormatError::schema(format!("$.{missing}"), "missing field"));
    }
    Ok(())
}

fn number_array(value: &Value, path: &str) -> Result<Vec<f64>, FormatError> {
    let items = value
        .as_array()
        .ok_or_else(|| FormatError::schema(path, "expected an array of numbers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| FormatError::schema(format!("{path}[{i}]"), "expected a number"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONVEX: &str = r#"{"format_version":"1","domain":[0,1,2],"depth":1,"elements":[[[0.2,0.1,0.5]],[[0.6,0.2,0.1]],[[0.3,0.1,0.4]]]}"#;

    #[test]
    fn parses_worked_fixture() {
        let d = parse_instance(CONVEX).unwrap();
        let expected = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.2, 0.1, 0.5]],
                vec![[0.6, 0.2, 0.1]],
                vec![[0.3, 0.1, 0.4]],
            ],
        )
        .unwrap();
        assert_eq!(d, expected);
        assert_eq!(parse_instance(&emit_instance(&d)).unwrap(), d);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_instance("{\n  \"domain\": [0,\n  }").unwrap_err();
        match err {
            FormatError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn depth_mismatch_is_schema_error_at_element() {
        let text = r#"{"format_version":"1","domain":[0,1],"depth":1,"elements":[[[0.2,0.1,0.5]],[[0.6,0.2,0.1],[0.1,0.1,0.1]]]}"#;
        assert_eq!(
            parse_instance(text).unwrap_err(),
            FormatError::Schema {
                path: "$.elements[1]".into(),
                message: "expected 1 triples, found 2".into()
            }
        );
    }

    #[test]
    fn sum_violation_reports_element_path() {
        let text = r#"{"format_version":"1","domain":[0,1],"depth":1,"elements":[[[0.2,0.1,0.5]],[[0.6,0.3,0.3]]]}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.kind(), "SumExceedsOne");
        assert!(matches!(err, FormatError::Invalid { ref path, .. } if path == "$.elements[1][0]"));
    }

    #[test]
    fn sigma_order_reports_element_path() {
        let text = r#"{"format_version":"1","domain":[0],"depth":2,"elements":[[[0.3,0.1,0.1],[0.5,0.1,0.1]]]}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.kind(), "SigmaOrderViolation");
        assert!(matches!(err, FormatError::Invalid { ref path, .. } if path == "$.elements[0]"));
    }

    #[test]
    fn schema_violations() {
        let cases = [
            (r#"[]"#, "$"),
            (
                r#"{"format_version":"1","domain":[0],"depth":1,"elements":[[[0,0,0]]],"extra":1}"#,
                "$.extra",
            ),
            (
                r#"{"format_version":"1","domain":[0],"depth":1}"#,
                "$.elements",
            ),
            (
                r#"{"format_version":"2","domain":[0],"depth":1,"elements":[[[0,0,0]]]}"#,
                "$.format_version",
            ),
            (
                r#"{"format_version":1,"domain":[0],"depth":1,"elements":[[[0,0,0]]]}"#,
                "$.format_version",
            ),
            (
                r#"{"format_version":"1","domain":[0],"depth":0,"elements":[[]]}"#,
                "$.depth",
            ),
            (
                r#"{"format_version":"1","domain":[0,"a"],"depth":1,"elements":[[[0,0,0]],[[0,0,0]]]}"#,
                "$.domain[1]",
            ),
            (
                r#"{"format_version":"1","domain":[0,1],"depth":1,"elements":[[[0,0,0]]]}"#,
                "$.elements",
            ),
            (
                r#"{"format_version":"1","domain":[0],"depth":1,"elements":[[[0,0]]]}"#,
                "$.elements[0][0]",
            ),
        ];
        for (text, want) in cases {
            match parse_instance(text).unwrap_err() {
                FormatError::Schema { path, .. } => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn grid_errors_point_at_coordinate() {
        let text = r#"{"format_version":"1","domain":[0,2,1],"depth":1,"elements":[[[0,0,0]],[[0,0,0]],[[0,0,0]]]}"#;
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.kind(), "UnsortedGrid");
        assert!(matches!(err, FormatError::Invalid { ref path, .. } if path == "$.domain[2]"));
    }
}
