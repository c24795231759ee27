//! Tabular output. Every number is written in scientific notation with ten
//! significant digits; CSV files open with `#` comment lines carrying the
//! derived constants and the fully resolved settings.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, Settings};

pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Derived constants reported alongside the rows.
    pub notes: Vec<(&'static str, f64)>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Table {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &'static str, value: f64) {
        self.notes.push((key, value));
    }

    pub fn render(&self, settings: &Settings) -> String {
        match settings.format {
            Format::Csv => self.csv(settings),
            Format::Json => self.json(settings),
        }
    }

    fn csv(&self, settings: &Settings) -> String {
        let mut out = format!(
            "# vactorque {} {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command
        );
        for (k, v) in &self.notes {
            out.push_str(&format!("# {k} = {}\n", sci(*v)));
        }
        out.push_str("# resolved settings:\n");
        for line in settings.to_toml().lines() {
            if line.is_empty() {
                out.push_str("#\n");
            } else {
                out.push_str(&format!("# {line}\n"));
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| sci(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, settings: &Settings) -> String {
        let notes: Map<String, Value> = self
            .notes
            .iter()
            .map(|(k, v)| (k.to_string(), number(*v)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&x| number(x)).collect()))
            .collect();
        let doc = json!({
            "program": format!("vactorque {}", env!("CARGO_PKG_VERSION")),
            "command": self.command,
            "settings": serde_json::to_value(settings).expect("settings serialise"),
            "notes": notes,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
        s.push('\n');
        s
    }

    pub fn write(&self, settings: &Settings) -> std::io::Result<()> {
        let text = self.render(settings);
        match &settings.output {
            Some(path) => std::fs::write(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()
            }
        }
    }
}

/// Ten significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

/// The value rounded to ten significant digits; null when not finite.
fn number(x: f64) -> Value {
    sci(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}
