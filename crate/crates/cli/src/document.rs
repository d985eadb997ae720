//! Self-describing JSON documents: lifts, annulus lifts, fragmentation
//! certificates, annulus plans and sampler configs.
//!
//! Rationals are strings `"p/q"` (or `"p"`) in lowest terms. Objects are written
//! with sorted keys, so serialization is canonical.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use thiserror::Error;

use torsion_core::bounds::Regime;
use torsion_core::fragmentation::{
    AnnulusFragPlan, CountedRole, FactorKind, FragCertificate, TraceFactor,
};
use torsion_core::qm_lab::SamplerConfig;
use torsion_core::rational::parse_q;
use torsion_core::{AnnulusLift, FixedInterval, PLLift, Q};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violation at {path}: {message}")]
    InvariantViolation { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Lift(PLLift),
    Annulus(AnnulusLift),
    Certificate(FragCertificate),
    Plan(AnnulusFragPlan),
    ProbeConfig(SamplerConfig),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Lift(_) => "lift",
            Document::Annulus(_) => "annulus",
            Document::Certificate(_) => "certificate",
            Document::Plan(_) => "plan",
            Document::ProbeConfig(_) => "probe_config",
        }
    }
}

fn violation(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::InvariantViolation {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn q_value(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn lift_value(f: &PLLift) -> Value {
    Value::Array(
        f.samples()
            .iter()
            .map(|(x, y)| json!([x.to_string(), y.to_string()]))
            .collect(),
    )
}

fn annulus_value(a: &AnnulusLift) -> Value {
    json!({ "lower": lift_value(&a.lower), "upper": lift_value(&a.upper) })
}

fn interval_value(w: &FixedInterval) -> Value {
    json!({
        "start": q_value(&w.start),
        "end": q_value(&w.end),
        "whole_line": w.whole_line,
    })
}

fn factor_value(f: &TraceFactor) -> Value {
    let mut v = json!({
        "lower_trace": lift_value(&f.lower_trace),
        "upper_trace": lift_value(&f.upper_trace),
        "touches_lower": f.touches_lower,
        "touches_upper": f.touches_upper,
    });
    let m = v.as_object_mut().expect("object");
    match &f.kind {
        FactorKind::Explicit => {
            m.insert("kind".into(), json!("explicit"));
        }
        FactorKind::Counted { role, multiplicity } => {
            m.insert("kind".into(), json!("counted"));
            m.insert("role".into(), json!(role.tag()));
            m.insert("multiplicity".into(), json!(multiplicity));
        }
    }
    v
}

/// Payload fields of the document, without `kind` and `format_version`.
fn payload(doc: &Document) -> Value {
    match doc {
        Document::Lift(f) => json!({ "samples": lift_value(f) }),
        Document::Annulus(a) => annulus_value(a),
        Document::Certificate(c) => json!({
            "target": lift_value(&c.target),
            "factors": c.factors.iter().map(lift_value).collect::<Vec<_>>(),
            "k": c.k,
            "fixed_intervals": c.fixed_intervals.iter().map(interval_value).collect::<Vec<_>>(),
            "reflected": c.reflected,
            "min_disp": q_value(&c.min_disp),
            "max_disp": q_value(&c.max_disp),
        }),
        Document::Plan(p) => json!({
            "source": annulus_value(&p.source),
            "target": annulus_value(&p.target),
            "shift": p.shift.to_string(),
            "flipped": p.flipped,
            "alpha": q_value(&p.alpha),
            "regime": p.regime.tag(),
            "factors": p.factors.iter().map(factor_value).collect::<Vec<_>>(),
            "total_count": p.total_count,
        }),
        Document::ProbeConfig(c) => json!({
            "seed": c.seed,
            "breakpoint_count": c.breakpoint_count,
            "denominator_bound": c.denominator_bound,
            "displacement_offset": q_value(&c.displacement_offset),
            "roughness": q_value(&c.roughness),
        }),
    }
}

pub fn to_value(doc: &Document) -> Value {
    let mut v = payload(doc);
    let m = v.as_object_mut().expect("payloads are objects");
    m.insert("kind".into(), json!(doc.kind()));
    m.insert("format_version".into(), json!(FORMAT_VERSION));
    v
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(doc)).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let v: Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(&v)
}

pub fn from_value(v: &Value) -> Result<Document, DocumentError> {
    let obj = object(v, "$")?;
    let version = field(obj, "$", "format_version")?
        .as_u64()
        .ok_or_else(|| violation("$.format_version", "expected a non-negative integer"))?;
    if version != FORMAT_VERSION {
        return Err(violation(
            "$.format_version",
            format!("unsupported version {version}, expected {FORMAT_VERSION}"),
        ));
    }
    let kind = string(field(obj, "$", "kind")?, "$.kind")?;
    match kind {
        "lift" => Ok(Document::Lift(lift(
            field(obj, "$", "samples")?,
            "$.samples",
        )?)),
        "annulus" => Ok(Document::Annulus(annulus(v, "$")?)),
        "certificate" => certificate(obj).map(Document::Certificate),
        "plan" => plan(obj).map(Document::Plan),
        "probe_config" => probe_config(obj).map(Document::ProbeConfig),
        other => Err(violation(
            "$.kind",
            format!("unknown document kind {other:?}"),
        )),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    v.as_object()
        .ok_or_else(|| violation(path, "expected an object"))
}

fn field<'a>(
    obj: &'a Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<&'a Value, DocumentError> {
    obj.get(key)
        .ok_or_else(|| violation(path, format!("missing field {key:?}")))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str, DocumentError> {
    v.as_str()
        .ok_or_else(|| violation(path, "expected a string"))
}

fn boolean(v: &Value, path: &str) -> Result<bool, DocumentError> {
    v.as_bool()
        .ok_or_else(|| violation(path, "expected a boolean"))
}

fn unsigned(v: &Value, path: &str) -> Result<u64, DocumentError> {
    v.as_u64()
        .ok_or_else(|| violation(path, "expected a non-negative integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocumentError> {
    v.as_array()
        .ok_or_else(|| violation(path, "expected an array"))
}

fn rational(v: &Value, path: &str) -> Result<Q, DocumentError> {
    let s = string(v, path)?;
    parse_q(s).ok_or_else(|| violation(path, format!("{s:?} is not a rational p/q")))
}

fn lift(v: &Value, path: &str) -> Result<PLLift, DocumentError> {
    // an annulus trace may be written as {"samples": [...]} or as the bare list
    let list = match v.as_object() {
        Some(obj) => field(obj, path, "samples")?,
        None => v,
    };
    let samples = array(list, path)?
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let p = format!("{path}[{i}]");
            match pair.as_array().map(Vec::as_slice) {
                Some([x, y]) => Ok((
                    rational(x, &format!("{p}[0]"))?,
                    rational(y, &format!("{p}[1]"))?,
                )),
                _ => Err(violation(&p, "expected a pair [x, y]")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    PLLift::new(samples).map_err(|e| violation(path, format!("{}: {e}", e.name())))
}

fn annulus(v: &Value, path: &str) -> Result<AnnulusLift, DocumentError> {
    let obj = object(v, path)?;
    Ok(AnnulusLift::new(
        lift(field(obj, path, "lower")?, &format!("{path}.lower"))?,
        lift(field(obj, path, "upper")?, &format!("{path}.upper"))?,
    ))
}

fn fixed_interval(v: &Value, path: &str) -> Result<FixedInterval, DocumentError> {
    let obj = object(v, path)?;
    Ok(FixedInterval {
        start: rational(field(obj, path, "start")?, &format!("{path}.start"))?,
        end: rational(field(obj, path, "end")?, &format!("{path}.end"))?,
        whole_line: boolean(
            field(obj, path, "whole_line")?,
            &format!("{path}.whole_line"),
        )?,
    })
}

fn certificate(obj: &Map<String, Value>) -> Result<FragCertificate, DocumentError> {
    let factors = array(field(obj, "$", "factors")?, "$.factors")?
        .iter()
        .enumerate()
        .map(|(i, f)| lift(f, &format!("$.factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let fixed_intervals = array(field(obj, "$", "fixed_intervals")?, "$.fixed_intervals")?
        .iter()
        .enumerate()
        .map(|(i, w)| fixed_interval(w, &format!("$.fixed_intervals[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FragCertificate {
        target: lift(field(obj, "$", "target")?, "$.target")?,
        factors,
        k: unsigned(field(obj, "$", "k")?, "$.k")?,
        fixed_intervals,
        reflected: boolean(field(obj, "$", "reflected")?, "$.reflected")?,
        min_disp: rational(field(obj, "$", "min_disp")?, "$.min_disp")?,
        max_disp: rational(field(obj, "$", "max_disp")?, "$.max_disp")?,
    })
}

fn trace_factor(v: &Value, path: &str) -> Result<TraceFactor, DocumentError> {
    let obj = object(v, path)?;
    let kind = match string(field(obj, path, "kind")?, &format!("{path}.kind"))? {
        "explicit" => FactorKind::Explicit,
        "counted" => {
            let tag = string(field(obj, path, "role")?, &format!("{path}.role"))?;
            let role = CountedRole::from_tag(tag).ok_or_else(|| {
                violation(&format!("{path}.role"), format!("unknown role {tag:?}"))
            })?;
            let multiplicity = unsigned(
                field(obj, path, "multiplicity")?,
                &format!("{path}.multiplicity"),
            )?;
            FactorKind::Counted { role, multiplicity }
        }
        other => {
            return Err(violation(
                &format!("{path}.kind"),
                format!("unknown factor kind {other:?}"),
            ))
        }
    };
    Ok(TraceFactor {
        lower_trace: lift(
            field(obj, path, "lower_trace")?,
            &format!("{path}.lower_trace"),
        )?,
        upper_trace: lift(
            field(obj, path, "upper_trace")?,
            &format!("{path}.upper_trace"),
        )?,
        touches_lower: boolean(
            field(obj, path, "touches_lower")?,
            &format!("{path}.touches_lower"),
        )?,
        touches_upper: boolean(
            field(obj, path, "touches_upper")?,
            &format!("{path}.touches_upper"),
        )?,
        kind,
    })
}

fn plan(obj: &Map<String, Value>) -> Result<AnnulusFragPlan, DocumentError> {
    let tag = string(field(obj, "$", "regime")?, "$.regime")?;
    let regime = Regime::from_tag(tag)
        .ok_or_else(|| violation("$.regime", format!("unknown regime {tag:?}")))?;
    let shift_s = string(field(obj, "$", "shift")?, "$.shift")?;
    let shift: BigInt = shift_s
        .parse()
        .map_err(|_| violation("$.shift", format!("{shift_s:?} is not an integer")))?;
    let factors = array(field(obj, "$", "factors")?, "$.factors")?
        .iter()
        .enumerate()
        .map(|(i, f)| trace_factor(f, &format!("$.factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AnnulusFragPlan {
        source: annulus(field(obj, "$", "source")?, "$.source")?,
        target: annulus(field(obj, "$", "target")?, "$.target")?,
        shift,
        flipped: boolean(field(obj, "$", "flipped")?, "$.flipped")?,
        alpha: rational(field(obj, "$", "alpha")?, "$.alpha")?,
        regime,
        factors,
        total_count: unsigned(field(obj, "$", "total_count")?, "$.total_count")?,
    })
}

fn probe_config(obj: &Map<String, Value>) -> Result<SamplerConfig, DocumentError> {
    Ok(SamplerConfig {
        seed: unsigned(field(obj, "$", "seed")?, "$.seed")?,
        breakpoint_count: unsigned(field(obj, "$", "breakpoint_count")?, "$.breakpoint_count")?,
        denominator_bound: unsigned(field(obj, "$", "denominator_bound")?, "$.denominator_bound")?,
        displacement_offset: rational(
            field(obj, "$", "displacement_offset")?,
            "$.displacement_offset",
        )?,
        roughness: rational(field(obj, "$", "roughness")?, "$.roughness")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsion_core::bounds::Regularity;
    use torsion_core::fragmentation::{fragment_circle, plan_annulus_fragmentation};
    use torsion_core::rational::q;

    #[test]
    fn parse_lift() {
        let d = parse_document(r#"{"kind":"lift","format_version":1,"samples":[["0","1/2"]]}"#)
            .unwrap();
        assert_eq!(d, Document::Lift(PLLift::translation(q("1/2"))));
    }

    #[test]
    fn duplicate_x_is_a_violation() {
        let e = parse_document(
            r#"{"kind":"lift","format_version":1,"samples":[["0","0"],["0","1/4"]]}"#,
        )
        .unwrap_err();
        match e {
            DocumentError::InvariantViolation { message, .. } => {
                assert!(message.contains("DuplicateX"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_document("{\n  \"kind\": \"lift\",\n  oops\n}").unwrap_err();
        assert!(matches!(e, DocumentError::Syntax { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn parse_twist() {
        let text = r#"{"kind":"annulus","format_version":1,
            "lower":[["0","0"]],"upper":{"samples":[["0","1"]]}}"#;
        assert_eq!(
            parse_document(text).unwrap(),
            Document::Annulus(AnnulusLift::twist_power(1))
        );
    }

    #[test]
    fn bad_version_and_kind() {
        assert!(parse_document(r#"{"kind":"lift","format_version":2,"samples":[]}"#).is_err());
        assert!(parse_document(r#"{"kind":"nope","format_version":1}"#).is_err());
        assert!(
            parse_document(r#"{"kind":"lift","format_version":1,"samples":[["1/0","0"]]}"#)
                .is_err()
        );
    }

    #[test]
    fn round_trips() {
        let f = PLLift::new(vec![(q("0"), q("1/8")), (q("1/3"), q("1"))]).unwrap();
        let a = AnnulusLift::new(f.clone(), PLLift::translation(q("7/3")));
        let docs = vec![
            Document::Lift(f.clone()),
            Document::Annulus(a.clone()),
            Document::Certificate(fragment_circle(&f).unwrap()),
            Document::Plan(
                plan_annulus_fragmentation(&a, Regime::new(Regularity::General, true)).unwrap(),
            ),
            Document::ProbeConfig(SamplerConfig::new(u64::MAX, q("-3/2"), q("1/8"))),
        ];
        for d in docs {
            let text = serialize(&d);
            let back = parse_document(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize(&back), text);
        }
    }
}
