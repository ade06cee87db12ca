use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use rosen_core::words::criteria::GrowthRow;
use rosen_core::SCHEMA;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `{"schema": ..., "command": ..., "config": ..., ...body}`.
pub fn document(command: &str, cfg: &RunConfig, body: Value) -> Value {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command));
    doc.insert("config".into(), json!(cfg));
    if let Value::Object(fields) = body {
        doc.extend(fields);
    }
    Value::Object(doc)
}

pub fn print_json(doc: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn growth_csv(rows: &[GrowthRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(["n", "q_n", "q_n^{1/n}", "loglog q_n/n"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.q_n.clone(),
            r.q_root.to_string(),
            r.loglog_over_n.map_or_else(String::new, |v| v.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn growth_text(rows: &[GrowthRow]) -> String {
    let mut s = String::from("     n  q_n^(1/n)      loglog q_n/n  q_n\n");
    for r in rows {
        let ll = r.loglog_over_n.map_or_else(|| "-".into(), |v| format!("{v:.6}"));
        s.push_str(&format!("{:>6}  {:<13.9}  {:<12}  {}\n", r.n, r.q_root, ll, r.q_n));
    }
    s
}

pub fn interval_text((lo, hi): (f64, f64)) -> String {
    format!("[{lo:.6}, {hi:.6}]")
}
