use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use wzterm_core::closedforms::AngleClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_tol: f64,
    pub angle_tol: f64,
    pub branch_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub tolerances: Tolerances,
    pub threads: Option<usize>,
}

/// Uniform result record of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub command: String,
    /// parsed parameters, including defaults; `inputs.argv` reruns the command
    pub inputs: Map<String, Value>,
    pub values: BTreeMap<String, Value>,
    pub diagnostics: BTreeMap<String, Value>,
    pub metadata: Metadata,
    #[serde(skip)]
    pub format: Format,
}

impl ResultEnvelope {
    pub fn new(command: &str, metadata: Metadata, format: Format) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            values: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            metadata,
            format,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn argv(&self) -> Vec<String> {
        self.inputs
            .get("argv")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_string)).collect())
            .unwrap_or_default()
    }

    pub fn diag(&mut self, key: &str, v: impl Serialize) {
        self.diagnostics.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn real(&mut self, key: &str, value: f64, tolerance: f64) {
        self.values.insert(key.to_string(), json!({ "value": value, "tolerance": tolerance }));
    }

    pub fn real_stderr(&mut self, key: &str, value: f64, stderr: f64) {
        self.values.insert(key.to_string(), json!({ "value": value, "stderr": stderr }));
    }

    pub fn exact(&mut self, key: &str, value: impl Serialize) {
        self.values.insert(key.to_string(), json!({ "value": value, "tolerance": 0.0 }));
    }

    pub fn complex(&mut self, key: &str, z: Complex64, tolerance: f64) {
        self.values.insert(key.to_string(), json!({ "re": z.re, "im": z.im, "tolerance": tolerance }));
    }

    /// `<key>_raw`, `<key>_canonical` and `<key>_pi` (nearest multiple of pi, if within tolerance).
    pub fn angle(&mut self, key: &str, a: &AngleClass<f64>, tolerance: f64) {
        self.real(&format!("{key}_raw"), a.raw, tolerance);
        self.real(&format!("{key}_canonical"), a.canonical, tolerance);
        self.values.insert(
            format!("{key}_pi"),
            json!({ "multiple": a.pi_multiple, "residual": a.pi_residual, "tolerance": tolerance }),
        );
    }

    pub fn angle_stderr(&mut self, key: &str, a: &AngleClass<f64>, stderr: f64) {
        self.real_stderr(&format!("{key}_raw"), a.raw, stderr);
        self.real_stderr(&format!("{key}_canonical"), a.canonical, stderr);
        self.values.insert(format!("{key}_pi"), json!({ "multiple": a.pi_multiple, "residual": a.pi_residual, "stderr": stderr }));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    /// One `path = value` line per leaf, numbers formatted exactly as in the JSON form.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("envelope serializes");
        let mut out = String::new();
        flatten("", &v, &mut out);
        out
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}

/// Parses the text form back into `path -> value`.
pub fn parse_text(s: &str) -> BTreeMap<String, Value> {
    s.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), serde_json::from_str(v).unwrap_or(Value::String(v.to_string()))))
        .collect()
}

/// `path -> value` of every leaf of a JSON value.
pub fn leaves(v: &Value) -> BTreeMap<String, Value> {
    let mut s = String::new();
    flatten("", v, &mut s);
    parse_text(&s)
}
