//! Rendering of reports as JSON, CSV or DOT.

use clap::ValueEnum;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

/// 1-skeleton of a complex with its facets.
pub struct Graph {
    pub title: String,
    /// `(label, comment)` per vertex.
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<(usize, usize)>,
    pub facets: Vec<Vec<usize>>,
}

pub struct Report {
    pub record: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    /// CSV header used when there are no rows.
    pub columns: Vec<&'static str>,
    pub ok: bool,
    pub counterexample: Option<Value>,
    pub graph: Option<Graph>,
}

impl Report {
    pub fn new(record: Map<String, Value>) -> Self {
        Self {
            record,
            rows: Vec::new(),
            columns: Vec::new(),
            ok: true,
            counterexample: None,
            graph: None,
        }
    }

    /// Records a failed check; the first counterexample is kept.
    pub fn fail(&mut self, counterexample: Value) {
        self.ok = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample);
        }
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => Ok(json(report)),
        Format::Csv => csv(report),
        Format::Dot => report
            .graph
            .as_ref()
            .map(dot)
            .ok_or_else(|| "dot output is only available for export-complex".to_string()),
    }
}

fn json(report: &Report) -> String {
    let mut obj = report.record.clone();
    obj.insert("ok".into(), Value::Bool(report.ok));
    if !report.rows.is_empty() {
        obj.insert(
            "rows".into(),
            Value::Array(report.rows.iter().cloned().map(Value::Object).collect()),
        );
    }
    if let Some(c) = &report.counterexample {
        obj.insert("counterexample".into(), c.clone());
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

fn csv(report: &Report) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    if report.rows.is_empty() && !report.columns.is_empty() {
        w.write_record(&report.columns).map_err(err)?;
    } else if report.rows.is_empty() {
        let mut rec = report.record.clone();
        rec.insert("ok".into(), Value::Bool(report.ok));
        w.write_record(rec.keys()).map_err(err)?;
        w.write_record(rec.values().map(cell)).map_err(err)?;
    } else {
        w.write_record(report.rows[0].keys()).map_err(err)?;
        for row in &report.rows {
            w.write_record(row.values().map(cell)).map_err(err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot(g: &Graph) -> String {
    let mut s = String::from("graph close_complex {\n");
    s.push_str(&format!(
        "  // {}: {} vertices, {} facets\n",
        g.title,
        g.vertices.len(),
        g.facets.len()
    ));
    for (i, (label, comment)) in g.vertices.iter().enumerate() {
        s.push_str(&format!("  v{i} [label=\"{}\"]; // {}\n", escape(label), comment));
    }
    for (a, b) in &g.edges {
        s.push_str(&format!("  v{a} -- v{b};\n"));
    }
    for (i, f) in g.facets.iter().enumerate() {
        let vs: Vec<String> = f.iter().map(|v| format!("v{v}")).collect();
        s.push_str(&format!("  // facet {i}: {}\n", vs.join(" ")));
    }
    s.push_str("}\n");
    s
}
