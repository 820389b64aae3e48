//! Report rendering. Every exact integer is emitted as a decimal string in
//! all three formats, so parsing a report back recovers the value losslessly.

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Ordered field list for a single-record report.
#[derive(Default)]
pub struct Record {
    pub fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new() -> Record {
        Record::default()
    }

    pub fn push(&mut self, key: &'static str, value: impl ToString) -> &mut Record {
        self.fields.push((key, value.to_string()));
        self
    }
}

pub fn csv_escape(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn csv_row(values: impl Iterator<Item = String>) -> String {
    values
        .map(|v| csv_escape(&v))
        .collect::<Vec<_>>()
        .join(",")
}

fn json_object<'a>(fields: impl Iterator<Item = (&'a str, &'a str)>) -> Value {
    let map: Map<String, Value> = fields
        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

/// Emits one record: `text` verbatim in text mode, a header/value CSV pair,
/// or a flat JSON object with string values.
pub fn emit_record(format: Format, text: &str, record: &Record) {
    match format {
        Format::Text => println!("{text}"),
        Format::Csv => {
            println!(
                "{}",
                record
                    .fields
                    .iter()
                    .map(|(k, _)| (*k).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            println!("{}", csv_row(record.fields.iter().map(|(_, v)| v.clone())));
        }
        Format::Json => {
            println!(
                "{}",
                json_object(record.fields.iter().map(|(k, v)| (*k, v.as_str())))
            );
        }
    }
}

/// Emits a tabular report. Text mode uses `# title` plus space-separated
/// rows (the shape the eigenvalue-table parser ingests), CSV a header plus
/// one line per row, JSON an object with a row array.
pub fn emit_table(format: Format, title: &str, columns: &[&'static str], rows: &[Vec<String>]) {
    match format {
        Format::Text => {
            println!("# {title}");
            for row in rows {
                println!("{}", row.join(" "));
            }
        }
        Format::Csv => {
            println!("{}", columns.join(","));
            for row in rows {
                println!("{}", csv_row(row.iter().cloned()));
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json_object(columns.iter().copied().zip(row.iter().map(String::as_str)))
                })
                .collect();
            println!("{}", json!({ "title": title, "rows": rows }));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_escaping_quotes_only_when_needed() {
        assert_eq!(csv_escape("4830"), "4830");
        assert_eq!(csv_escape("0,35"), "\"0,35\"");
        assert_eq!(csv_escape("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn json_objects_hold_strings() {
        let v = json_object([("trace", "4830"), ("q", "5")].into_iter());
        assert_eq!(v["trace"], Value::String("4830".into()));
        assert_eq!(v["q"], Value::String("5".into()));
    }
}
