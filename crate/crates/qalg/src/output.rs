//! Report rendering. JSON keys come out sorted (`serde_json::Map` is a
//! `BTreeMap`), floats are rounded to 12 significant digits, and outcome
//! maps are keyed by bitstrings with qubit 0 first.

use qalg_core::state::{bitstring, DistributionKind};
use qalg_core::{Distribution, QuantumState, C64};
use serde_json::{Map, Value};

/// Probabilities and amplitude components below this are printed as absent/zero.
pub const NOISE_FLOOR: f64 = 1e-15;

const BAR_WIDTH: usize = 40;

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> Value {
    let r = round12(x);
    if r.is_finite() {
        Value::from(r)
    } else {
        Value::String(r.to_string())
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn snap(x: f64) -> f64 {
    if x.abs() < NOISE_FLOOR {
        0.0
    } else {
        x
    }
}

pub fn complex(z: C64) -> Value {
    Value::Array(vec![num(snap(z.re)), num(snap(z.im))])
}

/// Exact probabilities, or integer counts for sampled distributions.
pub fn distribution(d: &Distribution) -> Value {
    let mut m = Map::new();
    for (&k, &v) in &d.entries {
        let key = bitstring(k, d.width);
        match d.kind {
            DistributionKind::Exact if v >= NOISE_FLOOR => {
                m.insert(key, num(v));
            }
            DistributionKind::Sampled { .. } => {
                m.insert(key, Value::from(v as u64));
            }
            _ => {}
        }
    }
    Value::Object(m)
}

/// Every entry of a dense vector over a `width`-qubit register.
pub fn dense(width: usize, v: &[f64]) -> Value {
    Value::Object(v.iter().enumerate().map(|(k, &p)| (bitstring(k, width), num(p))).collect())
}

/// Nonzero amplitudes as `[re, im]` pairs.
pub fn amplitudes(state: &QuantumState) -> Value {
    let n = state.n_qubits();
    let mut m = Map::new();
    for (k, a) in state.amplitudes().iter().enumerate() {
        if a.norm() >= NOISE_FLOOR {
            m.insert(bitstring(k, n), complex(*a));
        }
    }
    Value::Object(m)
}

pub fn bitstrings(values: &[usize], width: usize) -> Value {
    Value::Array(values.iter().map(|&v| Value::String(bitstring(v, width))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// The object printed for one invocation.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::from(command));
        fields.insert("inputs".into(), inputs);
        Report { fields }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string(&Value::Object(self.fields.clone())).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.fields {
                    text_entry(&mut out, k, v, 0);
                }
                out
            }
        }
    }
}

fn is_histogram(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            !m.is_empty()
                && m.iter().all(|(k, v)| k.chars().all(|c| c == '0' || c == '1') && v.is_number())
        }
        _ => false,
    }
}

fn text_entry(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if is_histogram(v) => {
            out.push_str(&format!("{pad}{key}:\n"));
            let vals: Vec<f64> = m.values().filter_map(Value::as_f64).collect();
            let top = vals.iter().copied().fold(0.0, f64::max);
            for (k, x) in m {
                let f = x.as_f64().unwrap_or(0.0);
                let len = if top > 0.0 { (f / top * BAR_WIDTH as f64).round() as usize } else { 0 };
                out.push_str(&format!("{pad}  {k} |{:<BAR_WIDTH$}| {x}\n", "#".repeat(len.min(BAR_WIDTH))));
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                text_entry(out, k, x, depth + 1);
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(0.49999999999999994), 0.5);
        assert_eq!(round12(-0.0), 0.0);
        assert_eq!(round12(1.234567890123456e-7), 1.23456789012e-7);
        assert_eq!(num(2.0 / 3.0).to_string(), "0.666666666667");
    }

    #[test]
    fn keys_are_sorted_and_bitstrings() {
        let d = Distribution::exact(2, &[0.5, 0.0, 1e-33, 0.5]);
        assert_eq!(distribution(&d).to_string(), r#"{"00":0.5,"11":0.5}"#);
        let mut r = Report::new("demo", Value::Null);
        r.set("zeta", 1).set("alpha", 2);
        assert_eq!(r.render(Format::Json), "{\"alpha\":2,\"command\":\"demo\",\"inputs\":null,\"zeta\":1}\n");
    }

    #[test]
    fn text_histogram() {
        let mut r = Report::new("demo", Value::Null);
        r.set("distribution", distribution(&Distribution::exact(1, &[0.25, 0.75])));
        let text = r.render(Format::Text);
        assert!(text.contains("  1 |########################################| 0.75"));
        assert!(text.contains("  0 |#############"));
    }
}
