use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;
pub const ENGINE: &str = concat!("gradlc ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Serialize)]
pub struct RingSummary {
    pub field: String,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub ideal: Vec<String>,
}

/// One command's output. Field order is the serialization order.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub engine: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSummary>,
    /// Assumptions the computation relies on but does not check.
    pub hypotheses: Vec<String>,
    /// `None` for commands that only compute.
    pub verdict: Option<bool>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}  schema {}", self.engine, self.schema).unwrap();
        writeln!(s, "command: {}", self.command).unwrap();
        if let Some(seed) = self.seed {
            writeln!(s, "seed: {seed}").unwrap();
        }
        if let Some(r) = &self.ring {
            let vars: Vec<String> = r
                .vars
                .iter()
                .zip(&r.weights)
                .map(|(v, w)| if *w == 1 { v.clone() } else { format!("{v}:{w}") })
                .collect();
            writeln!(s, "ring: {}[{}]", r.field, vars.join(", ")).unwrap();
            writeln!(s, "ideal: ({})", r.ideal.join(", ")).unwrap();
        }
        if !self.hypotheses.is_empty() {
            writeln!(s, "assumed, not verified:").unwrap();
            for h in &self.hypotheses {
                writeln!(s, "  - {h}").unwrap();
            }
        }
        if let Some(v) = self.verdict {
            writeln!(s, "verdict: {}", if v { "yes" } else { "no" }).unwrap();
        }
        writeln!(s).unwrap();
        render(&mut s, "", &self.result, 0);
        if let Some(ms) = self.timing_ms {
            writeln!(s, "\ntiming: {ms} ms").unwrap();
        }
        s
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

/// Objects become `key: value` lines or sections, arrays of objects become
/// aligned tables.
fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    if let Some(s) = scalar(v) {
        writeln!(out, "{pad}{key}: {s}").unwrap();
        return;
    }
    match v {
        Value::Object(m) => {
            let inner = if key.is_empty() {
                indent
            } else {
                writeln!(out, "{pad}{key}:").unwrap();
                indent + 2
            };
            for (k, x) in m {
                render(out, k, x, inner);
            }
        }
        Value::Array(a) if a.iter().all(Value::is_object) => {
            writeln!(out, "{pad}{key}:").unwrap();
            table(out, key, a, indent + 2);
        }
        other => writeln!(out, "{pad}{key}: {}", serde_json::to_string(other).unwrap()).unwrap(),
    }
}

/// Scalar columns go in the table; nested values of row `k` follow it as
/// `key[k].column` sections.
fn table(out: &mut String, key: &str, rows: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    let mut cols: Vec<String> = Vec::new();
    let mut nested: Vec<String> = Vec::new();
    for r in rows {
        for (k, v) in r.as_object().into_iter().flatten() {
            let target = if scalar(v).is_some() { &mut cols } else { &mut nested };
            if !target.contains(k) {
                target.push(k.clone());
            }
        }
    }
    cols.retain(|c| !nested.contains(c));
    if !cols.is_empty() {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| r.get(c).and_then(scalar).unwrap_or_default()).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(k, c)| cells.iter().map(|r| r[k].chars().count()).chain([c.chars().count()]).max().unwrap())
            .collect();
        let line = |out: &mut String, items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}", w = *w))
                .collect();
            writeln!(out, "{pad}{}", parts.join("  ").trim_end()).unwrap();
        };
        line(out, &cols);
        for r in &cells {
            line(out, r);
        }
    }
    for (k, r) in rows.iter().enumerate() {
        for c in &nested {
            if let Some(v) = r.get(c).filter(|v| !v.is_null()) {
                render(out, &format!("{key}[{k}].{c}"), v, indent);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pretty_aligns_tables() {
        let r = Report {
            schema: SCHEMA,
            engine: ENGINE,
            command: "lc-table x.ring".into(),
            seed: None,
            ring: None,
            hypotheses: vec!["R is reduced".into()],
            verdict: Some(true),
            result: json!({"depth": 1, "rows": [{"i": 1, "t": 1, "dim": 1}, {"i": 2, "t": -10, "dim": 11}]}),
            timing_ms: None,
        };
        let text = r.to_pretty();
        assert!(text.contains("  - R is reduced"));
        assert!(text.contains("rows:\n  i  t    dim\n  1  1    1\n  2  -10  11\n"), "{text}");
        let j: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["schema"], 1);
        assert!(j.get("timing_ms").is_none());
    }
}
