//! `.ifs` documents: JSON with rationals written as strings.

use ifsx_core::{Error as CoreError, IfsSystem, Mode, OrthogonalMap, OscAttribute, Point, Scalar, Similitude};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("{0}")]
    Unrepresentable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentMode {
    Exact,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub ratio: String,
    pub orthogonal: Vec<Vec<String>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attributes {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub osc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsDocument {
    pub dimension: usize,
    pub mode: DocumentMode,
    pub maps: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<Attributes>,
}

/// Canonical rational literal: an integer or a reduced `p/q` with `q > 1`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let bad = || format!("malformed rational {text:?}: expected an integer or a reduced p/q");
    let int = |s: &str| -> Result<BigInt, String> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(BigRational::from_integer(int(text)?)),
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if !q.is_positive() || q.is_one() {
                return Err(bad());
            }
            let r = BigRational::new(p.clone(), q.clone());
            if r.numer() != &p || r.denom() != &q {
                return Err(bad());
            }
            Ok(r)
        }
    }
}

fn osc_from_str(s: &str) -> Option<OscAttribute> {
    Some(match s {
        "declared" => OscAttribute::Declared,
        "witnessed" => OscAttribute::Witnessed,
        "implied-by-ssc" => OscAttribute::ImpliedBySsc,
        "inherited" => OscAttribute::Inherited,
        _ => return None,
    })
}

fn osc_name(osc: OscAttribute) -> &'static str {
    match osc {
        OscAttribute::Declared => "declared",
        OscAttribute::Witnessed => "witnessed",
        OscAttribute::ImpliedBySsc => "implied-by-ssc",
        OscAttribute::Inherited => "inherited",
    }
}

/// 1-based line of the `index`-th occurrence of `"key"`, or of the document start.
fn line_of_key(text: &str, key: &str, index: usize) -> usize {
    let needle = format!("\"{key}\"");
    text.match_indices(&needle)
        .nth(index)
        .map(|(pos, _)| text[..pos].matches('\n').count() + 1)
        .unwrap_or(1)
}

pub fn parse_document(text: &str) -> Result<IfsSystem, DocumentError> {
    let doc: IfsDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |line: usize, message: String| DocumentError::Invalid { line, message };
    if doc.dimension == 0 {
        return Err(invalid(line_of_key(text, "dimension", 0), "dimension must be at least 1".into()));
    }
    if doc.maps.len() < 2 {
        return Err(invalid(
            line_of_key(text, "maps", 0),
            format!("an IFS needs at least two maps, found {}", doc.maps.len()),
        ));
    }
    let mode = match doc.mode {
        DocumentMode::Exact => Mode::Exact,
        DocumentMode::Interval => Mode::Interval,
    };
    let mut maps = Vec::with_capacity(doc.maps.len());
    for (i, m) in doc.maps.iter().enumerate() {
        let line = line_of_key(text, "ratio", i);
        let at = |what: &str, e: String| invalid(line, format!("map {}: {what}: {e}", i + 1));
        let ratio = parse_rational(&m.ratio).map_err(|e| at("ratio", e))?;
        if m.orthogonal.len() != doc.dimension || m.orthogonal.iter().any(|r| r.len() != doc.dimension) {
            return Err(at(
                "orthogonal",
                format!("expected a {0}×{0} matrix", doc.dimension),
            ));
        }
        if m.translation.len() != doc.dimension {
            return Err(at(
                "translation",
                format!("expected {} coordinates, found {}", doc.dimension, m.translation.len()),
            ));
        }
        let rows = m
            .orthogonal
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s).map(Scalar::Exact)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| at("orthogonal", e))?;
        let translation = m
            .translation
            .iter()
            .map(|s| parse_rational(s).map(Scalar::Exact))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| at("translation", e))?;
        let orthogonal = OrthogonalMap::from_rows(rows).map_err(|e| at("orthogonal", e.to_string()))?;
        let f = Similitude::new(Scalar::Exact(ratio), orthogonal, Point::new(translation))
            .map_err(|e| at("map", e.to_string()))?;
        maps.push(f.in_mode(mode));
    }
    let mut sys = IfsSystem::new(maps).map_err(|e: CoreError| invalid(line_of_key(text, "maps", 0), e.to_string()))?;
    if let Some(osc) = doc.attributes.as_ref().and_then(|a| a.osc.as_deref()) {
        let attr = osc_from_str(osc).ok_or_else(|| {
            invalid(
                line_of_key(text, "osc", 0),
                format!("unknown osc attribute {osc:?}; expected declared or witnessed"),
            )
        })?;
        sys = sys.with_osc(attr);
    }
    Ok(sys)
}

fn exact_string(x: &Scalar) -> Result<String, DocumentError> {
    x.as_rational()
        .map(|q| q.to_string())
        .ok_or_else(|| DocumentError::Unrepresentable(format!("value {x} is not an exact rational")))
}

pub fn to_document(sys: &IfsSystem) -> Result<IfsDocument, DocumentError> {
    let maps = sys
        .maps()
        .iter()
        .map(|f| {
            Ok(MapEntry {
                ratio: exact_string(f.ratio())?,
                orthogonal: f
                    .orthogonal()
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(exact_string).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
                translation: f.translation().coords().iter().map(exact_string).collect::<Result<Vec<_>, _>>()?,
            })
        })
        .collect::<Result<Vec<_>, DocumentError>>()?;
    Ok(IfsDocument {
        dimension: sys.dim(),
        mode: match sys.mode() {
            Mode::Exact => DocumentMode::Exact,
            Mode::Interval => DocumentMode::Interval,
        },
        maps,
        attributes: sys.osc().map(|osc| Attributes {
            osc: Some(osc_name(osc).to_string()),
            notes: None,
        }),
    })
}

/// Pretty JSON; interval-mode systems have no exact form and are rejected.
pub fn serialize_document(sys: &IfsSystem) -> Result<String, DocumentError> {
    if sys.mode() == Mode::Interval {
        return Err(DocumentError::Unrepresentable(
            "interval-mode systems cannot be written as exact documents".into(),
        ));
    }
    let doc = to_document(sys)?;
    Ok(serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifsx_core::catalog;

    const F5: &str = r#"{
  "dimension": 1,
  "mode": "exact",
  "maps": [
    { "ratio": "1/5", "orthogonal": [["1"]], "translation": ["0"] },
    { "ratio": "1/5", "orthogonal": [["1"]], "translation": ["3/5"] },
    { "ratio": "1/5", "orthogonal": [["1"]], "translation": ["4/5"] }
  ],
  "attributes": { "osc": "declared" }
}"#;

    #[test]
    fn parses_fifths() {
        let sys = parse_document(F5).unwrap();
        assert_eq!(sys, catalog::touching_fifths());
        assert_eq!(sys.osc(), Some(OscAttribute::Declared));
    }

    #[test]
    fn validation_errors_carry_lines() {
        let bad = F5.replacen("\"1/5\"", "\"5/4\"", 1);
        match parse_document(&bad) {
            Err(DocumentError::Invalid { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("map 1"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let planar = r#"{"dimension": 2, "mode": "exact", "maps": [
            {"ratio": "1/2", "orthogonal": [["1","0"],["0","2"]], "translation": ["0","0"]},
            {"ratio": "1/2", "orthogonal": [["1","0"],["0","1"]], "translation": ["1/2","0"]}]}"#;
        match parse_document(planar) {
            Err(DocumentError::Invalid { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("orthogonal"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse_document("{\n  \"dimension\": 1,\n  \"mode\": exact\n}") {
            Err(DocumentError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-3/4").unwrap(), BigRational::new((-3).into(), 4.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        for bad in ["2/4", "1/1", "1/-2", "0.5", "", "1/0", "+1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn round_trip() {
        let sys = catalog::touching_fifths().power(2).unwrap();
        let text = serialize_document(&sys).unwrap();
        assert_eq!(parse_document(&text).unwrap(), sys);
        assert!(serialize_document(&sys.to_interval_mode()).is_err());
    }
}
