//! Plain-text and JSON renderings shared by the subcommands.

use serde_json::{Map, Value as Json};
use smuc::domains::Value;
use smuc::field::Field;

pub fn valuation_json(field: &Field, values: &[Value]) -> Json {
    let obj: Map<String, Json> =
        values.iter().enumerate().map(|(k, v)| (field.node_name(k).to_string(), v.to_json())).collect();
    Json::Object(obj)
}

/// Rows of values under a header of node names, columns joined by ` | `.
pub fn table(field: &Field, rows: &[Vec<Value>]) -> String {
    let header: Vec<String> = (0..field.node_count()).map(|k| field.node_name(k).to_string()).collect();
    let mut out = header.join(" | ");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Value::to_string).collect();
        out.push_str(&cells.join(" | "));
        out.push('\n');
    }
    out
}

/// Every node label as `label : domain` followed by `node = value` lines.
pub fn labels(field: &Field) -> String {
    let mut out = String::new();
    for (name, label) in field.node_labels() {
        out.push_str(&format!("{name} : {}\n", label.domain));
        for (k, v) in label.values.iter().enumerate() {
            out.push_str(&format!("  {} = {v}\n", field.node_name(k)));
        }
    }
    out
}

pub fn print_json(doc: &Json) {
    println!("{}", serde_json::to_string_pretty(doc).expect("JSON values serialize"));
}
