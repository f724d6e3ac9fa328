//! Scene files: the JSON input format describing a configuration and the
//! optional lemma blocks.
//!
//! A scene document looks like
//!
//! ```json
//! {
//!   "points": { "A": ["0", "0"], "B": ["4", "0"], "C": ["0", "4"], "P": ["1", "1"] },
//!   "cevian_params": { "A1": ["-2", "3"], "B1": ["1", "1"], "C1": ["1", "1"] },
//!   "Q": ["2", "3"],
//!   "APrime": ["-3", "4"],
//!   "lemma1": {
//!     "points": { "A": ["0", "0"], "B": ["6", "0"], "C": ["1", "5"],
//!                  "D": ["7", "4"], "E": ["2", "2"], "F1": ["5", "1"] },
//!     "lines": [["E", "F1"], ["1", "0", "-2"], ["E", "D"]],
//!     "samples": 8
//!   },
//!   "lemma2": [["0","0"], ["4","0"], ["0","4"], ["1","1"], ["1","2"]]
//! }
//! ```
//!
//! All coordinates are scalar literals (`[-]digits[/digits]`) carried as
//! JSON strings so exact values survive serialization. Two-element
//! arrays are affine points `(x, y)`; three-element arrays are
//! homogeneous triples. Lemma-1 lines are either two point names (from
//! the block's own `points`) or three coefficient literals. `Q` is a
//! point; `APrime` is the parameter pair of `A'_P` on line `AP`.
//!
//! Parsing is two-phase: [`SceneFile::parse`] validates the syntax
//! (shape, key sets, literal grammar, name references) and keeps every
//! coordinate as text, so one parsed scene can be instantiated over any
//! scalar field; the typed extractors ([`SceneFile::configuration`] and
//! friends) convert to a concrete field and enforce the geometric
//! invariants.

use std::collections::BTreeMap;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::construct::{ConfigError, Configuration, LemmaOneInstance};
use crate::projective::{join, Line, Point};
use crate::scalar::{literal_is_well_formed, Scalar};

/// Errors from scene loading: syntactic (`Parse`, with a JSONPath-style
/// location) or semantic (`Invariant`, naming the violated rule).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("scene parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("scene invariant violation: {message}")]
    Invariant { message: String },
}

fn parse_err(path: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Parse {
        path: path.into(),
        message: message.into(),
    }
}

fn invariant(err: ConfigError) -> SceneError {
    SceneError::Invariant {
        message: err.to_string(),
    }
}

/// A point literal: affine pair or homogeneous triple, kept as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointSpec {
    Affine(String, String),
    Homogeneous(String, String, String),
}

impl PointSpec {
    /// Convert to a typed point. `path` locates error reports.
    pub fn to_point<S: Scalar>(&self, path: &str) -> Result<Point<S>, SceneError> {
        let scalar = |text: &str, idx: usize| {
            S::parse_text(text).map_err(|e| parse_err(format!("{path}[{idx}]"), e.to_string()))
        };
        match self {
            PointSpec::Affine(x, y) => Ok(Point::affine(scalar(x, 0)?, scalar(y, 1)?)),
            PointSpec::Homogeneous(x, y, z) => {
                Point::new([scalar(x, 0)?, scalar(y, 1)?, scalar(z, 2)?])
                    .map_err(|_| parse_err(path, "zero homogeneous triple"))
            }
        }
    }

    fn to_json(&self) -> Value {
        let texts: Vec<&String> = match self {
            PointSpec::Affine(x, y) => vec![x, y],
            PointSpec::Homogeneous(x, y, z) => vec![x, y, z],
        };
        Value::Array(texts.into_iter().map(|t| Value::String(t.clone())).collect())
    }
}

/// A lemma-1 line literal: two point names from the block, or three
/// coefficient literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineSpec {
    Through(String, String),
    Coeffs(String, String, String),
}

impl LineSpec {
    fn to_json(&self) -> Value {
        let texts: Vec<&String> = match self {
            LineSpec::Through(m, n) => vec![m, n],
            LineSpec::Coeffs(a, b, c) => vec![a, b, c],
        };
        Value::Array(texts.into_iter().map(|t| Value::String(t.clone())).collect())
    }
}

/// The lemma-1 block: named points (at least `A, B, C, D, E`; extra
/// names may anchor line specs), three pencil lines, and a sample count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaOneScene {
    pub points: BTreeMap<String, PointSpec>,
    pub lines: [LineSpec; 3],
    pub samples: u32,
}

/// A syntactically validated scene, field-independent (all coordinates
/// still text).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneFile {
    /// Exactly `A`, `B`, `C`, `P`.
    pub points: BTreeMap<String, PointSpec>,
    /// Exactly `A1`, `B1`, `C1`; each pair `(α, β)` places the point at
    /// `α·vertex + β·P`.
    pub cevian_params: BTreeMap<String, (String, String)>,
    pub q: Option<PointSpec>,
    pub a_prime: Option<(String, String)>,
    pub lemma1: Option<LemmaOneScene>,
    pub lemma2: Option<[PointSpec; 5]>,
}

fn expect_obj<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, SceneError> {
    v.as_object()
        .ok_or_else(|| parse_err(path, "expected an object"))
}

fn expect_array<'v>(v: &'v Value, path: &str) -> Result<&'v [Value], SceneError> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| parse_err(path, "expected an array"))
}

/// Reject keys outside `allowed` (catches typos loudly).
fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), SceneError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(parse_err(
                format!("{path}.{key}"),
                format!("unknown key (expected one of: {})", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn get<'v>(obj: &'v Map<String, Value>, path: &str, key: &str) -> Result<&'v Value, SceneError> {
    obj.get(key)
        .ok_or_else(|| parse_err(path, format!("missing required key \"{key}\"")))
}

fn scalar_text(v: &Value, path: &str) -> Result<String, SceneError> {
    let s = v
        .as_str()
        .ok_or_else(|| parse_err(path, "expected a scalar literal as a JSON string"))?;
    if !literal_is_well_formed(s) {
        return Err(parse_err(
            path,
            format!("malformed scalar literal {s:?} (expected [-]digits[/digits])"),
        ));
    }
    Ok(s.to_string())
}

fn point_spec(v: &Value, path: &str) -> Result<PointSpec, SceneError> {
    let arr = expect_array(v, path)?;
    let text = |i: usize| scalar_text(&arr[i], &format!("{path}[{i}]"));
    match arr.len() {
        2 => Ok(PointSpec::Affine(text(0)?, text(1)?)),
        3 => Ok(PointSpec::Homogeneous(text(0)?, text(1)?, text(2)?)),
        n => Err(parse_err(
            path,
            format!("expected 2 (affine) or 3 (homogeneous) coordinates, found {n}"),
        )),
    }
}

fn pair_spec(v: &Value, path: &str) -> Result<(String, String), SceneError> {
    let arr = expect_array(v, path)?;
    if arr.len() != 2 {
        return Err(parse_err(
            path,
            format!("expected a parameter pair of 2 entries, found {}", arr.len()),
        ));
    }
    Ok((
        scalar_text(&arr[0], &format!("{path}[0]"))?,
        scalar_text(&arr[1], &format!("{path}[1]"))?,
    ))
}

fn line_spec(v: &Value, path: &str, names: &BTreeMap<String, PointSpec>) -> Result<LineSpec, SceneError> {
    let arr = expect_array(v, path)?;
    match arr.len() {
        2 => {
            let name = |i: usize| -> Result<String, SceneError> {
                let s = arr[i]
                    .as_str()
                    .ok_or_else(|| parse_err(format!("{path}[{i}]"), "expected a point name"))?;
                if !names.contains_key(s) {
                    return Err(parse_err(
                        format!("{path}[{i}]"),
                        format!("undefined point name {s:?}"),
                    ));
                }
                Ok(s.to_string())
            };
            let (m, n) = (name(0)?, name(1)?);
            if m == n {
                return Err(parse_err(path, "line references the same point twice"));
            }
            Ok(LineSpec::Through(m, n))
        }
        3 => Ok(LineSpec::Coeffs(
            scalar_text(&arr[0], &format!("{path}[0]"))?,
            scalar_text(&arr[1], &format!("{path}[1]"))?,
            scalar_text(&arr[2], &format!("{path}[2]"))?,
        )),
        n => Err(parse_err(
            path,
            format!("expected 2 point names or 3 coefficients, found {n}"),
        )),
    }
}

impl SceneFile {
    /// Parse and syntactically validate a scene document.
    pub fn parse(bytes: &[u8]) -> Result<SceneFile, SceneError> {
        let value: Value =
            serde_json::from_slice(bytes).map_err(|e| parse_err("$", e.to_string()))?;
        let root = expect_obj(&value, "$")?;
        check_keys(
            root,
            "$",
            &["points", "cevian_params", "Q", "APrime", "lemma1", "lemma2"],
        )?;

        let points_obj = expect_obj(get(root, "$", "points")?, "$.points")?;
        check_keys(points_obj, "$.points", &["A", "B", "C", "P"])?;
        let mut points = BTreeMap::new();
        for key in ["A", "B", "C", "P"] {
            let path = format!("$.points.{key}");
            points.insert(
                key.to_string(),
                point_spec(get(points_obj, "$.points", key)?, &path)?,
            );
        }

        let params_obj = expect_obj(get(root, "$", "cevian_params")?, "$.cevian_params")?;
        check_keys(params_obj, "$.cevian_params", &["A1", "B1", "C1"])?;
        let mut cevian_params = BTreeMap::new();
        for key in ["A1", "B1", "C1"] {
            let path = format!("$.cevian_params.{key}");
            cevian_params.insert(
                key.to_string(),
                pair_spec(get(params_obj, "$.cevian_params", key)?, &path)?,
            );
        }

        let q = root.get("Q").map(|v| point_spec(v, "$.Q")).transpose()?;
        let a_prime = root
            .get("APrime")
            .map(|v| pair_spec(v, "$.APrime"))
            .transpose()?;

        let lemma1 = root
            .get("lemma1")
            .map(|v| Self::parse_lemma1(v))
            .transpose()?;

        let lemma2 = root
            .get("lemma2")
            .map(|v| {
                let arr = expect_array(v, "$.lemma2")?;
                if arr.len() != 5 {
                    return Err(parse_err(
                        "$.lemma2",
                        format!("expected 5 points, found {}", arr.len()),
                    ));
                }
                let mut specs = Vec::with_capacity(5);
                for (i, entry) in arr.iter().enumerate() {
                    specs.push(point_spec(entry, &format!("$.lemma2[{i}]"))?);
                }
                Ok(<[PointSpec; 5]>::try_from(specs).expect("length checked"))
            })
            .transpose()?;

        Ok(SceneFile {
            points,
            cevian_params,
            q,
            a_prime,
            lemma1,
            lemma2,
        })
    }

    fn parse_lemma1(v: &Value) -> Result<LemmaOneScene, SceneError> {
        let obj = expect_obj(v, "$.lemma1")?;
        check_keys(obj, "$.lemma1", &["points", "lines", "samples"])?;

        let pts_obj = expect_obj(get(obj, "$.lemma1", "points")?, "$.lemma1.points")?;
        let mut points = BTreeMap::new();
        for (name, spec) in pts_obj {
            let path = format!("$.lemma1.points.{name}");
            points.insert(name.clone(), point_spec(spec, &path)?);
        }
        for required in ["A", "B", "C", "D", "E"] {
            if !points.contains_key(required) {
                return Err(parse_err(
                    "$.lemma1.points",
                    format!("missing required key \"{required}\""),
                ));
            }
        }

        let lines_arr = expect_array(get(obj, "$.lemma1", "lines")?, "$.lemma1.lines")?;
        if lines_arr.len() != 3 {
            return Err(parse_err(
                "$.lemma1.lines",
                format!("expected 3 line specs, found {}", lines_arr.len()),
            ));
        }
        let mut lines = Vec::with_capacity(3);
        for (i, entry) in lines_arr.iter().enumerate() {
            lines.push(line_spec(entry, &format!("$.lemma1.lines[{i}]"), &points)?);
        }

        let samples_v = get(obj, "$.lemma1", "samples")?;
        let samples = samples_v
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| parse_err("$.lemma1.samples", "expected a small non-negative integer"))?;

        Ok(LemmaOneScene {
            points,
            lines: <[LineSpec; 3]>::try_from(lines).expect("length checked"),
            samples,
        })
    }

    /// Canonical JSON form; [`SceneFile::parse`] of its serialization is
    /// the identity.
    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        let mut points = Map::new();
        for (name, spec) in &self.points {
            points.insert(name.clone(), spec.to_json());
        }
        root.insert("points".into(), Value::Object(points));

        let mut params = Map::new();
        for (name, (al, be)) in &self.cevian_params {
            params.insert(
                name.clone(),
                Value::Array(vec![
                    Value::String(al.clone()),
                    Value::String(be.clone()),
                ]),
            );
        }
        root.insert("cevian_params".into(), Value::Object(params));

        if let Some(q) = &self.q {
            root.insert("Q".into(), q.to_json());
        }
        if let Some((al, be)) = &self.a_prime {
            root.insert(
                "APrime".into(),
                Value::Array(vec![
                    Value::String(al.clone()),
                    Value::String(be.clone()),
                ]),
            );
        }
        if let Some(block) = &self.lemma1 {
            let mut obj = Map::new();
            let mut pts = Map::new();
            for (name, spec) in &block.points {
                pts.insert(name.clone(), spec.to_json());
            }
            obj.insert("points".into(), Value::Object(pts));
            obj.insert(
                "lines".into(),
                Value::Array(block.lines.iter().map(LineSpec::to_json).collect()),
            );
            obj.insert("samples".into(), Value::Number(block.samples.into()));
            root.insert("lemma1".into(), Value::Object(obj));
        }
        if let Some(five) = &self.lemma2 {
            root.insert(
                "lemma2".into(),
                Value::Array(five.iter().map(PointSpec::to_json).collect()),
            );
        }
        Value::Object(root)
    }

    /// Instantiate the configuration over a concrete field, enforcing
    /// all geometric invariants.
    pub fn configuration<S: Scalar>(&self) -> Result<Configuration<S>, SceneError> {
        let point = |name: &str| {
            self.points[name].to_point::<S>(&format!("$.points.{name}"))
        };
        let pair = |name: &str| -> Result<(S, S), SceneError> {
            let (al, be) = &self.cevian_params[name];
            let path = format!("$.cevian_params.{name}");
            Ok((
                S::parse_text(al).map_err(|e| parse_err(format!("{path}[0]"), e.to_string()))?,
                S::parse_text(be).map_err(|e| parse_err(format!("{path}[1]"), e.to_string()))?,
            ))
        };
        let mut cfg = Configuration::new(
            point("A")?,
            point("B")?,
            point("C")?,
            point("P")?,
            pair("A1")?,
            pair("B1")?,
            pair("C1")?,
        )
        .map_err(invariant)?;
        if let Some(q) = &self.q {
            cfg = cfg.with_q(q.to_point::<S>("$.Q")?).map_err(invariant)?;
        }
        if let Some((al, be)) = &self.a_prime {
            let t = (
                S::parse_text(al).map_err(|e| parse_err("$.APrime[0]", e.to_string()))?,
                S::parse_text(be).map_err(|e| parse_err("$.APrime[1]", e.to_string()))?,
            );
            cfg = cfg.with_a_prime(t).map_err(invariant)?;
        }
        Ok(cfg)
    }

    /// Instantiate the lemma-1 block, if present, returning the validated
    /// instance and its sample count.
    pub fn lemma_one<S: Scalar>(
        &self,
    ) -> Result<Option<(LemmaOneInstance<S>, u32)>, SceneError> {
        let Some(block) = &self.lemma1 else {
            return Ok(None);
        };
        if block.samples < 6 {
            return Err(invariant(ConfigError::LemmaTooFewSamples(block.samples)));
        }
        let mut pts: BTreeMap<&str, Point<S>> = BTreeMap::new();
        for (name, spec) in &block.points {
            pts.insert(
                name.as_str(),
                spec.to_point::<S>(&format!("$.lemma1.points.{name}"))?,
            );
        }
        let line = |spec: &LineSpec, idx: usize| -> Result<Line<S>, SceneError> {
            let path = format!("$.lemma1.lines[{idx}]");
            match spec {
                LineSpec::Through(m, n) => join(&pts[m.as_str()], &pts[n.as_str()]).map_err(|_| {
                    SceneError::Invariant {
                        message: format!("lemma-1 line l{} endpoints coincide", idx + 1),
                    }
                }),
                LineSpec::Coeffs(a, b, c) => {
                    let coeff = |t: &str, i: usize| {
                        S::parse_text(t)
                            .map_err(|e| parse_err(format!("{path}[{i}]"), e.to_string()))
                    };
                    Line::new([coeff(a, 0)?, coeff(b, 1)?, coeff(c, 2)?])
                        .map_err(|_| parse_err(&path, "zero line triple"))
                }
            }
        };
        let instance = LemmaOneInstance::new(
            pts["A"].clone(),
            pts["B"].clone(),
            pts["C"].clone(),
            pts["D"].clone(),
            pts["E"].clone(),
            line(&block.lines[0], 0)?,
            line(&block.lines[1], 1)?,
            line(&block.lines[2], 2)?,
        )
        .map_err(invariant)?;
        Ok(Some((instance, block.samples)))
    }

    /// Instantiate the lemma-2 block, if present.
    pub fn lemma_two<S: Scalar>(&self) -> Result<Option<[Point<S>; 5]>, SceneError> {
        let Some(five) = &self.lemma2 else {
            return Ok(None);
        };
        let mut pts = Vec::with_capacity(5);
        for (i, spec) in five.iter().enumerate() {
            pts.push(spec.to_point::<S>(&format!("$.lemma2[{i}]"))?);
        }
        Ok(Some(<[Point<S>; 5]>::try_from(pts).expect("length checked")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn k1_doc() -> &'static str {
        r#"{
            "points": {
                "A": ["0", "0"], "B": ["4", "0"], "C": ["0", "4"], "P": ["1", "1"]
            },
            "cevian_params": {
                "A1": ["-2", "3"], "B1": ["1", "1"], "C1": ["1", "1"]
            },
            "Q": ["2", "3"],
            "APrime": ["-3", "4"],
            "lemma2": [["0","0"], ["4","0"], ["0","4"], ["1","1"], ["1","2"]]
        }"#
    }

    #[test]
    fn parses_golden_scene() {
        let scene = SceneFile::parse(k1_doc().as_bytes()).unwrap();
        let cfg = scene.configuration::<Rational>().unwrap();
        assert!(cfg.a().proj_eq(&Point::affine(
            Rational::from_int(0),
            Rational::from_int(0)
        )));
        assert!(cfg.q().is_some());
        assert_eq!(
            cfg.t_a_prime(),
            Some(&(Rational::from_int(-3), Rational::from_int(4)))
        );
        let five = scene.lemma_two::<Rational>().unwrap().unwrap();
        assert!(five[4].proj_eq(&Point::affine(
            Rational::from_int(1),
            Rational::from_int(2)
        )));
    }

    #[test]
    fn round_trips_through_json() {
        let scene = SceneFile::parse(k1_doc().as_bytes()).unwrap();
        let emitted = serde_json::to_string(&scene.to_json()).unwrap();
        let reparsed = SceneFile::parse(emitted.as_bytes()).unwrap();
        assert_eq!(scene, reparsed);
    }

    #[test]
    fn rejects_p_on_side() {
        let doc = r#"{
            "points": { "A": ["0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["2","2"] },
            "cevian_params": { "A1": ["1","1"], "B1": ["1","1"], "C1": ["1","1"] }
        }"#;
        let scene = SceneFile::parse(doc.as_bytes()).unwrap();
        let err = scene.configuration::<Rational>().unwrap_err();
        assert_eq!(
            err,
            SceneError::Invariant {
                message: "P on side BC".into()
            }
        );
    }

    #[test]
    fn rejects_malformed_scalar_with_path() {
        let doc = r#"{
            "points": { "A": ["1//2","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["1","1"], "B1": ["1","1"], "C1": ["1","1"] }
        }"#;
        let err = SceneFile::parse(doc.as_bytes()).unwrap_err();
        match err {
            SceneError::Parse { path, .. } => assert_eq!(path, "$.points.A[0]"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_bad_arity() {
        let doc = r#"{
            "points": { "A": ["0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["1","1"], "B1": ["1","1"], "C1": ["1","1"] },
            "extra": 1
        }"#;
        let err = SceneFile::parse(doc.as_bytes()).unwrap_err();
        assert!(matches!(err, SceneError::Parse { ref path, .. } if path == "$.extra"));

        let doc = r#"{
            "points": { "A": ["0","0","0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["1","1"], "B1": ["1","1"], "C1": ["1","1"] }
        }"#;
        let err = SceneFile::parse(doc.as_bytes()).unwrap_err();
        assert!(matches!(err, SceneError::Parse { ref path, .. } if path == "$.points.A"));
    }

    #[test]
    fn rejects_zero_homogeneous_triple() {
        let doc = r#"{
            "points": { "A": ["0","0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["1","1"], "B1": ["1","1"], "C1": ["1","1"] }
        }"#;
        let scene = SceneFile::parse(doc.as_bytes()).unwrap();
        let err = scene.configuration::<Rational>().unwrap_err();
        assert!(matches!(err, SceneError::Parse { ref path, .. } if path == "$.points.A"));
    }

    #[test]
    fn lemma1_block_parses_and_validates() {
        let doc = r#"{
            "points": { "A": ["0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["-2","3"], "B1": ["1","1"], "C1": ["1","1"] },
            "lemma1": {
                "points": { "A": ["0","0"], "B": ["6","0"], "C": ["1","5"],
                             "D": ["7","4"], "E": ["2","2"],
                             "F1": ["5","1"], "F2": ["0","5"], "F3": ["5","6"] },
                "lines": [["E","F1"], ["E","F2"], ["E","F3"]],
                "samples": 8
            }
        }"#;
        let scene = SceneFile::parse(doc.as_bytes()).unwrap();
        let (inst, samples) = scene.lemma_one::<Rational>().unwrap().unwrap();
        assert_eq!(samples, 8);
        assert!(inst.l1.incident(&inst.e));
        assert!(inst.l3.incident(&inst.e));

        // Too few samples is an invariant violation.
        let doc = doc.replace("\"samples\": 8", "\"samples\": 4");
        let scene = SceneFile::parse(doc.as_bytes()).unwrap();
        let err = scene.lemma_one::<Rational>().unwrap_err();
        assert!(matches!(err, SceneError::Invariant { .. }));

        // Undefined name in a line spec fails at parse time.
        let doc = doc.replace("[\"E\",\"F1\"]", "[\"E\",\"nope\"]");
        let err = SceneFile::parse(doc.as_bytes()).unwrap_err();
        assert!(
            matches!(err, SceneError::Parse { ref path, .. } if path == "$.lemma1.lines[0][1]")
        );
    }
}
