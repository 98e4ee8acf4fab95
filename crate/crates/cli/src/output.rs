//! Command results and their JSON and CSV renderings.

use std::io::Write;

use hesse_core::numerics::to_decimal;
use rug::{Complex, Float, Rational};
use serde_json::{json, Map, Value};

/// Everything a command reports.
#[derive(Debug, Default)]
pub struct CommandResult {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    /// Table rows, when the command produces a table.
    pub rows: Vec<Map<String, Value>>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl CommandResult {
    pub fn new(command: &str) -> Self {
        CommandResult { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), v.into());
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    /// JSON object with sorted keys.
    pub fn to_json(&self) -> Value {
        let mut outputs = self.outputs.clone();
        if !self.rows.is_empty() {
            outputs.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        }
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": outputs,
            "notes": self.notes,
            "seconds": self.seconds,
        })
    }

    /// Table rows as CSV, or `key,value` lines for scalar outputs.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["key", "value"])?;
            for (k, v) in &self.outputs {
                flatten(k, v, &mut |key, val| w.write_record([key, val]))?;
            }
        } else {
            let mut header: Vec<&String> = self.rows.iter().flat_map(|r| r.keys()).collect();
            header.sort();
            header.dedup();
            w.write_record(&header)?;
            for r in &self.rows {
                w.write_record(header.iter().map(|k| r.get(*k).map(cell).unwrap_or_default()))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten<F>(key: &str, v: &Value, emit: &mut F) -> csv::Result<()>
where
    F: FnMut(&str, &str) -> csv::Result<()>,
{
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                flatten(&format!("{key}.{k}"), inner, emit)?;
            }
            Ok(())
        }
        other => emit(key, &cell(other)),
    }
}

/// Decimal string with `digits` significant digits.
pub fn real(x: &Float, digits: u32) -> Value {
    Value::String(to_decimal(x, digits as usize))
}

/// `{"re": …, "im": …}` with decimal strings.
pub fn cplx(z: &Complex, digits: u32) -> Value {
    json!({ "re": to_decimal(z.real(), digits as usize), "im": to_decimal(z.imag(), digits as usize) })
}

/// `"p/q"`, or `"p"` for integers.
pub fn frac(q: &Rational) -> Value {
    Value::String(q.to_string())
}
