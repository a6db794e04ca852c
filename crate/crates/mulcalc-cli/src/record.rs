//! Output records and their text/JSON renderings.
//!
//! JSON output is schema-stable: a single object with a `format_version`
//! field, complex numbers as `{"re": .., "im": ..}`, keys in sorted order
//! and floats in shortest round-trip form, so identical inputs produce
//! byte-identical bytes. Text output is line-oriented `key: value` with
//! numbers at 15 significant digits.

use std::collections::BTreeMap;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

/// Version of the JSON output schema.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A typed result value; rendered differently in text and JSON modes.
#[derive(Debug, Clone)]
pub enum Value {
    Complex(Complex64),
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Complex(z) => serde_json::json!({"re": z.re, "im": z.im}),
            Value::Real(x) => serde_json::json!(x),
            Value::Int(n) => serde_json::json!(n),
            Value::Bool(b) => serde_json::json!(b),
            Value::Text(s) => serde_json::json!(s),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Value::Complex(z) => format_complex(*z),
            Value::Real(x) => format_sig(*x, 15),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }
}

/// The result of one CLI invocation.
#[derive(Debug, Clone, Default)]
pub struct Record {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<(String, Value)>,
    pub diagnostics: Vec<(String, Value)>,
    pub passed: Option<bool>,
}

impl Record {
    pub fn new(command: &str) -> Record {
        Record {
            command: command.to_string(),
            ..Record::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.push((key.to_string(), value));
        self
    }

    pub fn diagnostic(&mut self, key: &str, value: Value) -> &mut Self {
        self.diagnostics.push((key.to_string(), value));
        self
    }

    /// Digest of the canonicalized inputs (first 16 hex chars of SHA-256).
    pub fn inputs_digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.command.as_bytes());
        hasher.update(b"\n");
        for (k, v) in &self.inputs {
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut out = String::new();
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("inputs_digest: {}\n", self.inputs_digest()));
        for (k, v) in &self.results {
            out.push_str(&format!("{k}: {}\n", v.to_text()));
        }
        for (k, v) in &self.diagnostics {
            out.push_str(&format!("{k}: {}\n", v.to_text()));
        }
        if let Some(passed) = self.passed {
            out.push_str(&format!("passed: {passed}\n"));
        }
        out
    }

    fn render_json(&self) -> String {
        let results: BTreeMap<&str, serde_json::Value> = self
            .results
            .iter()
            .map(|(k, v)| (k.as_str(), v.to_json()))
            .collect();
        let diagnostics: BTreeMap<&str, serde_json::Value> = self
            .diagnostics
            .iter()
            .map(|(k, v)| (k.as_str(), v.to_json()))
            .collect();
        let mut object = serde_json::Map::new();
        object.insert("format_version".into(), serde_json::json!(FORMAT_VERSION));
        object.insert("command".into(), serde_json::json!(self.command));
        object.insert(
            "inputs_digest".into(),
            serde_json::json!(self.inputs_digest()),
        );
        object.insert("inputs".into(), serde_json::json!(self.inputs));
        object.insert("results".into(), serde_json::json!(results));
        object.insert("diagnostics".into(), serde_json::json!(diagnostics));
        if let Some(passed) = self.passed {
            object.insert("passed".into(), serde_json::json!(passed));
        }
        serde_json::Value::Object(object).to_string()
    }
}

/// `%.15g`-style significant-digit formatting.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude >= -4 && magnitude < digits as i32 {
        let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// `a + bi` form with 15 significant digits per component.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!(
        "{} {} {}i",
        format_sig(z.re, 15),
        sign,
        format_sig(z.im.abs(), 15)
    )
}

/// Parses `a+bi` complex literals: `2`, `-1.5`, `i`, `-i`, `3i`, `1+2i`,
/// `2.5-0.5i`, `1e-3+2e4i`.
pub fn parse_complex(source: &str) -> Result<Complex64, String> {
    let t: String = source.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".to_string());
    }
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Err(format!("`{source}` is not a complex literal (want a+bi)"));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let b = bytes[idx];
        if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag_part = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other
                .parse::<f64>()
                .map_err(|_| format!("`{source}` is not a complex literal (want a+bi)")),
        }
    };
    match split {
        Some(idx) => {
            let re: f64 = body[..idx]
                .parse()
                .map_err(|_| format!("`{source}` is not a complex literal (want a+bi)"))?;
            Ok(Complex64::new(re, imag_part(&body[idx..])?))
        }
        None => Ok(Complex64::new(0.0, imag_part(body)?)),
    }
}
