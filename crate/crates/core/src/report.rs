//! Canonical JSON reports for verification and fuzz runs.
//!
//! Output is byte-deterministic: `serde_json`'s map type keeps keys
//! sorted, every scalar is emitted through the field's own canonical
//! text form ([`Scalar::to_text`]), points are emitted in canonical
//! homogeneous form, and the bytes are pretty-printed with a trailing
//! newline. Running the same input twice yields identical bytes.

use serde_json::{json, Map, Value};

use crate::scalar::Scalar;
use crate::scene::SceneFile;
use crate::suite::{Claim, FuzzReport, FuzzWitness, Verdict};

/// One verdict as a JSON object.
fn verdict_value<S: Scalar>(v: &Verdict<S>) -> Value {
    let mut obj = Map::new();
    obj.insert("status".to_string(), json!(v.status.as_str()));
    let determinants: Map<String, Value> = v
        .determinants
        .iter()
        .map(|(k, d)| (k.clone(), json!(d.to_text())))
        .collect();
    obj.insert("determinants".to_string(), Value::Object(determinants));
    let points: Map<String, Value> = v
        .points
        .iter()
        .map(|(k, p)| (k.clone(), json!(p.canonical_text())))
        .collect();
    obj.insert("points".to_string(), Value::Object(points));
    if !v.flags.is_empty() {
        let flags: Map<String, Value> =
            v.flags.iter().map(|(k, b)| (k.clone(), json!(b))).collect();
        obj.insert("flags".to_string(), Value::Object(flags));
    }
    if let Some(step) = &v.degenerate_step {
        obj.insert("degenerate_step".to_string(), json!(step));
    }
    Value::Object(obj)
}

fn to_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report values are plain JSON");
    bytes.push(b'\n');
    bytes
}

/// The report of a `verify` run: the scene as parsed plus every
/// requested verdict keyed by claim id.
pub fn verify_report<S: Scalar>(scene: &SceneFile, verdicts: &[(Claim, Verdict<S>)]) -> Vec<u8> {
    let claims: Map<String, Value> = verdicts
        .iter()
        .map(|(c, v)| (c.id().to_string(), verdict_value(v)))
        .collect();
    let value = json!({
        "scene": scene.to_json(),
        "claims": Value::Object(claims),
    });
    to_bytes(&value)
}

fn witness_value<S: Scalar>(w: &FuzzWitness<S>) -> Value {
    let mut obj = Map::new();
    obj.insert("trial".to_string(), json!(w.trial));
    obj.insert("scene".to_string(), w.scene.to_json());
    obj.insert("verdict".to_string(), verdict_value(&w.verdict));
    if let Some(status) = w.rational_recheck {
        obj.insert("rational_recheck".to_string(), json!(status.as_str()));
    }
    Value::Object(obj)
}

/// The report of a `fuzz` run: the plan, the total generator
/// rejections, and per-claim tallies with full witnesses for every
/// violation.
pub fn fuzz_report<S: Scalar>(report: &FuzzReport<S>) -> Vec<u8> {
    let plan = json!({
        "claim": report
            .plan
            .claim
            .map_or_else(|| "all".to_string(), |c| c.id().to_string()),
        "trials": report.plan.trials,
        "seed": report.plan.seed,
        "bound": report.plan.bound,
        "field": report.plan.field.as_str(),
    });
    let claims: Map<String, Value> = report
        .claims
        .iter()
        .map(|(c, tally)| {
            let witnesses: Vec<Value> = tally.witnesses.iter().map(witness_value).collect();
            (
                c.id().to_string(),
                json!({
                    "holds": tally.holds,
                    "violated": tally.violated,
                    "degenerate": tally.degenerate,
                    "witnesses": witnesses,
                }),
            )
        })
        .collect();
    let value = json!({
        "plan": plan,
        "generator_rejections": report.generator_rejections,
        "claims": Value::Object(claims),
    });
    to_bytes(&value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::suite::{fuzz, verify_claim, FieldChoice, FuzzPlan, SuiteInput};

    fn small_scene() -> SceneFile {
        let doc = r#"{
            "points": { "A": ["0","0"], "B": ["4","0"], "C": ["0","4"], "P": ["1","1"] },
            "cevian_params": { "A1": ["-2","3"], "B1": ["1","1"], "C1": ["1","1"] }
        }"#;
        SceneFile::parse(doc.as_bytes()).unwrap()
    }

    #[test]
    fn verify_report_shape_and_determinism() {
        let scene = small_scene();
        let input = SuiteInput::<Rational>::from_scene(&scene).unwrap();
        let verdicts = vec![(
            Claim::NecktieConcurrency,
            verify_claim(Claim::NecktieConcurrency, &input),
        )];
        let bytes = verify_report(&scene, &verdicts);
        assert_eq!(bytes, verify_report(&scene, &verdicts));
        assert_eq!(bytes.last(), Some(&b'\n'));
        let value: Value = serde_json::from_slice(&bytes).unwrap();
        let claim = &value["claims"]["1.1"];
        assert_eq!(claim["status"], "holds");
        assert_eq!(claim["determinants"]["collinear(C, W_C, W)"], "0");
        assert_eq!(claim["points"]["W"], json!(["15/7", "15/7", "1"]));
        assert!(claim.get("flags").is_none());
        assert!(claim.get("degenerate_step").is_none());
        assert_eq!(value["scene"]["points"]["A"], json!(["0", "0"]));
    }

    #[test]
    fn fuzz_report_shape_and_determinism() {
        let plan = FuzzPlan {
            claim: Some(Claim::NecktieConcurrency),
            trials: 3,
            seed: 5,
            bound: 15,
            field: FieldChoice::Rational,
        };
        let report = fuzz::<Rational>(&plan).unwrap();
        let bytes = fuzz_report(&report);
        assert_eq!(bytes, fuzz_report(&report));
        let value: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(value["plan"]["claim"], "1.1");
        assert_eq!(value["plan"]["trials"], 3);
        assert_eq!(value["plan"]["field"], "rational");
        assert_eq!(value["claims"]["1.1"]["holds"], 3);
        assert_eq!(value["claims"]["1.1"]["violated"], 0);
        assert_eq!(value["claims"]["1.1"]["witnesses"], json!([]));
    }
}
