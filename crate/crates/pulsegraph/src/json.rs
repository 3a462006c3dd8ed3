//! The JSON wire format for graphs and schedules.
//!
//! A node document is an object `{"kind": <name>, "params": {...},
//! "items": [...]}`. Raw numbers stand for `Num` scalars, and in
//! waveform-parameter positions they promote to `Const` waveforms of the
//! host's configured duration. Variables are written `{"kind": "Var",
//! "key": "foo"}`. Durations are in seconds, frequencies in Hz, phases in
//! radians; `"duration": "unbounded"` is admitted for clocks and clock
//! sequences only.
//!
//! A schedule document is `{"channels": [{"id", "label"}...], "body":
//! <context>}` where a context is `{"context": "sequential"|"parallel",
//! "target_duration": <scalar>?, "items": [{"channel": <id>, "waveform":
//! <node>} | <context>...]}`.

use serde_json::Value;

use crate::graph::{
    Duration, Node, PhaseMode, Scalar, ScalarOp, Waveform, WaveformArg, WaveformOp,
};
use crate::schedule::{Channel, Schedule, ScheduleMap};

/// A parse error with the JSON-pointer-style path of the offending value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at {path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError {
        path: path.to_owned(),
        message: message.into(),
    })
}

/// A parsed top-level document: a single graph or a whole schedule.
pub enum Document {
    Node(Node),
    Schedule(ScheduleMap),
}

/// Parses either document form; objects carrying `channels` and `body` are
/// schedules, everything else is a node.
pub fn parse_document(value: &Value) -> Result<Document, JsonError> {
    match value {
        Value::Object(map) if map.contains_key("channels") && map.contains_key("body") => {
            parse_schedule(value).map(Document::Schedule)
        }
        _ => parse_node(value).map(Document::Node),
    }
}

/// Parses a node, deciding the category from the document: kinds (and item
/// trees) that only make sense as scalars parse as scalars, the rest as
/// waveforms.
pub fn parse_node(value: &Value) -> Result<Node, JsonError> {
    if is_scalar_doc(value) {
        parse_scalar(value, "").map(Node::Scalar)
    } else {
        parse_waveform(value, "").map(Node::Waveform)
    }
}

fn is_scalar_doc(value: &Value) -> bool {
    match value {
        Value::Number(_) => true,
        Value::Object(map) => match map.get("kind").and_then(Value::as_str) {
            Some("Num" | "Var" | "Min" | "Max") => true,
            Some("Sum" | "Product" | "Sub" | "Div" | "Neg") => map
                .get("items")
                .and_then(Value::as_array)
                .is_some_and(|items| items.iter().all(is_scalar_doc)),
            _ => false,
        },
        _ => false,
    }
}

fn kind_of<'v>(value: &'v Value, path: &str) -> Result<(&'v str, &'v serde_json::Map<String, Value>), JsonError> {
    let Value::Object(map) = value else {
        return err(path, "expected an object or a number");
    };
    match map.get("kind").and_then(Value::as_str) {
        Some(kind) => Ok((kind, map)),
        None => err(path, "missing \"kind\""),
    }
}

fn number(value: &Value, path: &str) -> Result<f64, JsonError> {
    value
        .as_f64()
        .ok_or(())
        .or_else(|_| err(path, "expected a number"))
}

struct Params<'v> {
    map: Option<&'v serde_json::Map<String, Value>>,
    path: String,
}

impl<'v> Params<'v> {
    fn of(map: &'v serde_json::Map<String, Value>, path: &str) -> Result<Self, JsonError> {
        let params = match map.get("params") {
            None => None,
            Some(Value::Object(p)) => Some(p),
            Some(_) => return err(&format!("{path}/params"), "expected an object"),
        };
        Ok(Params {
            map: params,
            path: format!("{path}/params"),
        })
    }

    fn get(&self, name: &str) -> Option<(&'v Value, String)> {
        self.map
            .and_then(|m| m.get(name))
            .map(|v| (v, format!("{}/{name}", self.path)))
    }

    fn required(&self, name: &str) -> Result<(&'v Value, String), JsonError> {
        self.get(name)
            .ok_or(())
            .or_else(|_| err(&self.path, format!("missing parameter {name:?}")))
    }

    fn scalar(&self, name: &str) -> Result<Scalar, JsonError> {
        let (value, path) = self.required(name)?;
        parse_scalar(value, &path)
    }
}

/// Parses a scalar document.
pub fn parse_scalar(value: &Value, path: &str) -> Result<Scalar, JsonError> {
    if let Value::Number(_) = value {
        return Ok(Scalar::num(number(value, path)?));
    }
    let (kind, map) = kind_of(value, path)?;
    match kind {
        "Num" => {
            let v = map
                .get("value")
                .or_else(|| value.pointer("/params/value"))
                .ok_or(())
                .or_else(|_| err(path, "Num requires \"value\""))?;
            Ok(Scalar::num(number(v, &format!("{path}/value"))?))
        }
        "Var" => {
            let key = map
                .get("key")
                .or_else(|| value.pointer("/params/key"))
                .and_then(Value::as_str)
                .ok_or(())
                .or_else(|_| err(path, "Var requires a string \"key\""))?;
            Ok(Scalar::var(key))
        }
        "Sum" | "Product" | "Sub" | "Div" | "Neg" | "Min" | "Max" => {
            let op = match kind {
                "Sum" => ScalarOp::Sum,
                "Product" => ScalarOp::Product,
                "Sub" => ScalarOp::Sub,
                "Div" => ScalarOp::Div,
                "Neg" => ScalarOp::Neg,
                "Min" => ScalarOp::Min,
                _ => ScalarOp::Max,
            };
            let items = scalar_items(map, path)?;
            Scalar::op(op, items).or_else(|e| err(path, e.to_string()))
        }
        other => err(path, format!("unknown scalar kind {other:?}")),
    }
}

fn scalar_items(
    map: &serde_json::Map<String, Value>,
    path: &str,
) -> Result<Vec<Scalar>, JsonError> {
    let Some(Value::Array(items)) = map.get("items") else {
        return err(path, "operator requires an \"items\" array");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_scalar(v, &format!("{path}/items/{i}")))
        .collect()
}

fn waveform_items(
    map: &serde_json::Map<String, Value>,
    path: &str,
) -> Result<Vec<Waveform>, JsonError> {
    let Some(Value::Array(items)) = map.get("items") else {
        return err(path, "operator requires an \"items\" array");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_waveform(v, &format!("{path}/items/{i}")))
        .collect()
}

/// A waveform-parameter position: numbers and scalar documents promote to
/// `Const` waveforms; anything else must be a waveform document.
fn waveform_arg(value: &Value, path: &str) -> Result<WaveformArg, JsonError> {
    if is_scalar_doc(value) {
        Ok(WaveformArg::Scalar(parse_scalar(value, path)?))
    } else {
        Ok(WaveformArg::Waveform(parse_waveform(value, path)?))
    }
}

/// Parses a waveform document.
pub fn parse_waveform(value: &Value, path: &str) -> Result<Waveform, JsonError> {
    let (kind, map) = kind_of(value, path)?;
    let params = Params::of(map, path)?;
    match kind {
        "Const" => Ok(Waveform::constant(
            params.scalar("value")?,
            params.scalar("duration")?,
        )),
        "Zero" => Ok(Waveform::zero(params.scalar("duration")?)),
        "Ramp" => Ok(Waveform::ramp(
            params.scalar("start_value")?,
            params.scalar("stop_value")?,
            params.scalar("duration")?,
        )),
        "Triangle" => Ok(Waveform::triangle(
            params.scalar("amplitude")?,
            params.scalar("duration")?,
        )),
        "Gaussian" => Ok(Waveform::gaussian(
            params.scalar("amplitude")?,
            params.scalar("sigma")?,
            params.scalar("duration")?,
        )),
        "Clock" => Ok(Waveform::clock(
            params.scalar("frequency")?,
            params.scalar("phase")?,
            clock_duration(&params)?,
        )),
        "ClockSeq" => {
            let items = waveform_items(map, path)?;
            Waveform::clock_seq(items).or_else(|e| err(path, e.to_string()))
        }
        "Sine" => {
            let mode = match params.get("phase_mode") {
                None => PhaseMode::Absolute,
                Some((v, p)) => match v.as_str() {
                    Some("absolute") => PhaseMode::Absolute,
                    Some("continuous") => PhaseMode::Continuous,
                    _ => return err(&p, "expected \"absolute\" or \"continuous\""),
                },
            };
            let ref_clock = params
                .get("ref_clock")
                .map(|(v, p)| parse_waveform(v, &p))
                .transpose()?;
            let (amplitude, ap) = params.required("amplitude")?;
            let (frequency, fp) = params.required("frequency")?;
            let (phase, pp) = params.required("phase")?;
            Waveform::sine_with_mode(
                waveform_arg(amplitude, &ap)?,
                waveform_arg(frequency, &fp)?,
                waveform_arg(phase, &pp)?,
                params.scalar("duration")?,
                mode,
                ref_clock,
            )
            .or_else(|e| err(path, e.to_string()))
        }
        "SineFM" | "SinePM" => {
            let (carrier, cp) = params.required("carrier")?;
            let carrier = parse_waveform(carrier, &cp)?;
            let (modulation, mp) = params.required("modulation")?;
            let (amplitude, ap) = params.required("amplitude")?;
            let (phase, pp) = params.required("phase")?;
            let build = if kind == "SineFM" {
                Waveform::sine_fm
            } else {
                Waveform::sine_pm
            };
            build(
                carrier,
                waveform_arg(modulation, &mp)?,
                waveform_arg(amplitude, &ap)?,
                waveform_arg(phase, &pp)?,
                params.scalar("duration")?,
            )
            .or_else(|e| err(path, e.to_string()))
        }
        "Polynomial" => {
            let (coeffs, cp) = params.required("coefficients")?;
            let Value::Array(coeffs) = coeffs else {
                return err(&cp, "expected an array of scalars");
            };
            let coefficients = coeffs
                .iter()
                .enumerate()
                .map(|(i, v)| parse_scalar(v, &format!("{cp}/{i}")))
                .collect::<Result<Vec<Scalar>, JsonError>>()?;
            Ok(Waveform::polynomial(
                coefficients,
                params.scalar("duration")?,
            ))
        }
        "Power" => Ok(Waveform::power(
            params.scalar("scale")?,
            params.scalar("exponent")?,
            params.scalar("duration")?,
        )),
        "Sum" | "Product" | "Sub" | "Div" | "Neg" => {
            let op = match kind {
                "Sum" => WaveformOp::Sum,
                "Product" => WaveformOp::Product,
                "Sub" => WaveformOp::Sub,
                "Div" => WaveformOp::Div,
                _ => WaveformOp::Neg,
            };
            let items = waveform_items(map, path)?;
            Waveform::op(op, items).or_else(|e| err(path, e.to_string()))
        }
        "Sequence" => Ok(Waveform::sequence(waveform_items(map, path)?)),
        other => err(path, format!("unknown waveform kind {other:?}")),
    }
}

fn clock_duration(params: &Params<'_>) -> Result<Duration, JsonError> {
    match params.get("duration") {
        None => err(&params.path, "missing parameter \"duration\""),
        Some((Value::String(s), _)) if s == "unbounded" => Ok(Duration::Unbounded),
        Some((v, p)) => Ok(Duration::Expr(parse_scalar(v, &p)?)),
    }
}

/// Parses and finalizes a schedule document. Declared channels appear in the
/// result even if nothing was added to them.
pub fn parse_schedule(value: &Value) -> Result<ScheduleMap, JsonError> {
    let Value::Object(map) = value else {
        return err("", "expected a schedule object");
    };
    let Some(Value::Array(channel_docs)) = map.get("channels") else {
        return err("/channels", "expected an array of channels");
    };

    let mut channels: Vec<Channel> = Vec::new();
    for (i, doc) in channel_docs.iter().enumerate() {
        let path = format!("/channels/{i}");
        let Value::Object(doc) = doc else {
            return err(&path, "expected a channel object");
        };
        let id = match doc.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return err(&path, "channel requires a string or number \"id\""),
        };
        let label = match doc.get("label") {
            Some(Value::String(s)) => s.clone(),
            None => id.clone(),
            _ => return err(&path, "channel label must be a string"),
        };
        if channels.iter().any(|c| c.id() == id) {
            return err(&path, format!("duplicate channel id {id:?}"));
        }
        channels.push(Channel::with_id(id, label));
    }

    let Some(body) = map.get("body") else {
        return err("/body", "missing schedule body");
    };

    let mut schedule = Schedule::new();
    for channel in &channels {
        schedule.declare(channel);
    }

    let (context, target) = context_header(body, "/body")?;
    // A plain sequential body is the root context itself; anything else
    // nests inside the root.
    if context == "sequential" && target.is_none() {
        context_items(&mut schedule, &channels, body, "/body")?;
    } else {
        open_context(&mut schedule, &channels, context, target, body, "/body")?;
    }
    schedule
        .finalize()
        .or_else(|e| err("/body", e.to_string()))
}

fn context_header<'v>(
    value: &'v Value,
    path: &str,
) -> Result<(&'v str, Option<Scalar>), JsonError> {
    let Value::Object(map) = value else {
        return err(path, "expected a context object");
    };
    let context = match map.get("context").and_then(Value::as_str) {
        Some(c @ ("sequential" | "parallel")) => c,
        Some(other) => {
            return err(
                &format!("{path}/context"),
                format!("unknown context {other:?}"),
            )
        }
        None => return err(path, "missing \"context\""),
    };
    let target = map
        .get("target_duration")
        .map(|v| parse_scalar(v, &format!("{path}/target_duration")))
        .transpose()?;
    Ok((context, target))
}

fn open_context(
    schedule: &mut Schedule,
    channels: &[Channel],
    // header already parsed by the caller
    context: &str,
    target: Option<Scalar>,
    value: &Value,
    path: &str,
) -> Result<(), JsonError> {
    if context == "sequential" {
        schedule.open_sequential(target);
    } else {
        schedule.open_parallel(target);
    }
    context_items(schedule, channels, value, path)?;
    schedule.close().or_else(|e| err(path, e.to_string()))
}

fn context_items(
    schedule: &mut Schedule,
    channels: &[Channel],
    value: &Value,
    path: &str,
) -> Result<(), JsonError> {
    let items = match value.get("items") {
        Some(Value::Array(items)) => items,
        Some(_) => return err(&format!("{path}/items"), "expected an array"),
        None => return Ok(()),
    };
    for (i, item) in items.iter().enumerate() {
        let item_path = format!("{path}/items/{i}");
        let Value::Object(map) = item else {
            return err(&item_path, "expected an entry or context object");
        };
        if map.contains_key("context") {
            let (context, target) = context_header(item, &item_path)?;
            open_context(schedule, channels, context, target, item, &item_path)?;
        } else if map.contains_key("channel") {
            let id = match map.get("channel") {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Number(n)) => n.to_string(),
                _ => return err(&item_path, "entry requires a \"channel\" id"),
            };
            let Some(channel) = channels.iter().find(|c| c.id() == id) else {
                return err(&item_path, format!("unknown channel {id:?}"));
            };
            let Some(waveform_doc) = map.get("waveform") else {
                return err(&item_path, "entry requires a \"waveform\"");
            };
            let waveform = parse_waveform(waveform_doc, &format!("{item_path}/waveform"))?;
            schedule
                .add(channel, waveform)
                .or_else(|e| err(&item_path, e.to_string()))?;
        } else {
            return err(&item_path, "expected \"context\" or \"channel\"");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Kind;
    use serde_json::json;

    #[test]
    fn scalar_documents_parse_with_promotion() {
        let doc = json!({"kind": "Sum", "items": [2, {"kind": "Var", "key": "foo"}]});
        let node = parse_node(&doc).unwrap();
        assert_eq!(node, Node::from(Scalar::num(2.0) + Scalar::var("foo")));
    }

    #[test]
    fn sine_documents_promote_numbers_to_const() {
        let doc = json!({
            "kind": "Sine",
            "params": {"amplitude": 1.0, "frequency": 1e7, "phase": 0.0, "duration": 3e-7}
        });
        let node = parse_node(&doc).unwrap();
        assert_eq!(node.kind(), Kind::Sine);
        assert_eq!(
            node.as_waveform().unwrap(),
            &Waveform::sine(1.0, 1e7, 0.0, 3e-7)
        );
    }

    #[test]
    fn unbounded_clock_durations_are_admitted() {
        let doc = json!({
            "kind": "Clock",
            "params": {"frequency": 1e7, "phase": 0.0, "duration": "unbounded"}
        });
        let node = parse_node(&doc).unwrap();
        assert!(node
            .as_waveform()
            .unwrap()
            .duration_expr()
            .is_unbounded());
    }

    #[test]
    fn unknown_kinds_report_their_path() {
        let doc = json!({
            "kind": "Sequence",
            "items": [{"kind": "Sin", "params": {}}]
        });
        let e = parse_node(&doc).unwrap_err();
        assert_eq!(e.path, "/items/0");
        assert!(e.message.contains("Sin"));
    }

    #[test]
    fn arity_errors_surface_from_construction() {
        let doc = json!({"kind": "Neg", "items": [1, 2]});
        let e = parse_node(&doc).unwrap_err();
        assert!(e.message.contains("1 operand"));
    }

    #[test]
    fn missing_ref_clock_is_a_parse_error() {
        let doc = json!({
            "kind": "Sine",
            "params": {
                "amplitude": 1.0, "frequency": 1e7, "phase": 0.0,
                "duration": 3e-7, "phase_mode": "continuous"
            }
        });
        let e = parse_node(&doc).unwrap_err();
        assert!(e.message.contains("reference clock"));
    }

    #[test]
    fn schedule_documents_build_and_finalize() {
        let doc = json!({
            "channels": [
                {"id": "c1", "label": "a"},
                {"id": "c2", "label": "b"}
            ],
            "body": {
                "context": "sequential",
                "items": [
                    {"context": "parallel", "items": [
                        {"channel": "c1", "waveform":
                            {"kind": "Const", "params": {"value": 1.0, "duration": 100e-9}}},
                        {"channel": "c2", "waveform":
                            {"kind": "Const", "params": {"value": 2.0, "duration": 60e-9}}}
                    ]}
                ]
            }
        });
        let map = parse_schedule(&doc).unwrap();
        assert_eq!(map.len(), 2);
        for (_, waveform) in map.iter() {
            let d = crate::eval::resolve_scalar(waveform.duration_expr().expr().unwrap())
                .unwrap();
            assert_eq!(d, 100e-9);
        }
    }

    #[test]
    fn schedule_detection_is_structural() {
        let node_doc = json!({"kind": "Zero", "params": {"duration": 1e-6}});
        assert!(matches!(
            parse_document(&node_doc).unwrap(),
            Document::Node(_)
        ));
        let schedule_doc = json!({"channels": [], "body": {"context": "sequential"}});
        assert!(matches!(
            parse_document(&schedule_doc).unwrap(),
            Document::Schedule(_)
        ));
    }

    #[test]
    fn numeric_channel_ids_are_admitted() {
        let doc = json!({
            "channels": [{"id": 7, "label": "drive"}],
            "body": {"context": "sequential", "items": [
                {"channel": 7, "waveform": {"kind": "Zero", "params": {"duration": 1e-6}}}
            ]}
        });
        let map = parse_schedule(&doc).unwrap();
        assert_eq!(map.channels().next().unwrap().id(), "7");
    }

    #[test]
    fn unknown_channels_are_rejected() {
        let doc = json!({
            "channels": [{"id": "c1", "label": "a"}],
            "body": {"context": "sequential", "items": [
                {"channel": "zz", "waveform": {"kind": "Zero", "params": {"duration": 1e-6}}}
            ]}
        });
        let e = parse_schedule(&doc).unwrap_err();
        assert_eq!(e.path, "/body/items/0");
        assert!(e.message.contains("zz"));
    }
}
