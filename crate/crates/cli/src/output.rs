use serde_json::Value;

use crate::Format;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One command's result in all three formats.
pub struct Report {
    pub status: Status,
    /// An object; `"schema"` is added on rendering.
    pub json: Value,
    /// Header row first.
    pub csv: Vec<Vec<String>>,
    pub text: String,
}

impl Report {
    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => {
                let mut v = self.json.clone();
                if let Value::Object(m) = &mut v {
                    m.insert("schema".into(), SCHEMA_VERSION.into());
                }
                let mut s = serde_json::to_string_pretty(&v)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Text => self.text.clone(),
        })
    }
}
