use serde_json::{json, Map, Value};

use crate::args::{Cli, Format};
use crate::CliError;

/// A finished job: the JSON report and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

impl Outcome {
    /// Wrap command-specific fields in the common envelope `{check, input, mode, verdict, ...}`.
    pub fn finish(cli: &Cli, verdict: bool, fields: Value) -> Outcome {
        let mut obj = envelope(cli);
        obj.insert("verdict".into(), Value::Bool(verdict));
        if let Value::Object(extra) = fields {
            obj.extend(extra);
        }
        Outcome {
            report: Value::Object(obj),
            exit: if verdict { 0 } else { 1 },
        }
    }

    pub fn failed(cli: &Cli, err: &CliError) -> Outcome {
        let mut obj = envelope(cli);
        obj.insert("verdict".into(), Value::Bool(false));
        let mut detail = json!({ "kind": err.kind(), "message": err.to_string() });
        if let Some(qmalg_core::Error::NotEven { profile }) = match err {
            CliError::Core(e) | CliError::Input { source: e, .. } => Some(e),
            _ => None,
        } {
            // a nonzero last entry means the search stopped at the cap, not at a zero level
            detail["profile"] = json!(profile);
            detail["inconclusive"] = json!(profile.last().is_some_and(|&d| d != 0));
        }
        obj.insert("error".into(), detail);
        Outcome {
            report: Value::Object(obj),
            exit: err.exit_code(),
        }
    }

    /// Canonical rendering: sorted keys, fixed indentation, trailing newline.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => canonical_json(&self.report),
            Format::Text => render_text(&self.report),
        }
    }
}

fn envelope(cli: &Cli) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("check".into(), json!(cli.command.name()));
    obj.insert("input".into(), json!(cli.command.inputs()));
    obj.insert("mode".into(), json!(cli.global.q_mode.label()));
    if let crate::args::QMode::Numeric(q0) = &cli.global.q_mode {
        obj.insert("q0".into(), json!(q0.to_string()));
    }
    obj
}

pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let shown = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    } else {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn cli() -> Cli {
        Cli::try_parse_from(["qmalg", "classify", "--input", "m.json"]).unwrap()
    }

    #[test]
    fn envelope_fields() {
        let out = Outcome::finish(&cli(), false, json!({ "kind": "hecke" }));
        assert_eq!(out.exit, 1);
        assert_eq!(out.report["check"], "classify");
        assert_eq!(out.report["input"], json!(["m.json"]));
        assert_eq!(out.report["kind"], "hecke");
        let text = out.render(Format::Json);
        assert!(text.find("\"check\"").unwrap() < text.find("\"verdict\"").unwrap());
    }

    #[test]
    fn inconclusive_search_is_flagged() {
        let err = CliError::Core(qmalg_core::Error::NotEven { profile: vec![2, 1] });
        let out = Outcome::failed(&cli(), &err);
        assert_eq!(out.report["error"]["inconclusive"], true);
        let err = CliError::Core(qmalg_core::Error::NotEven { profile: vec![2, 2, 0] });
        assert_eq!(Outcome::failed(&cli(), &err).report["error"]["inconclusive"], false);
    }
}
