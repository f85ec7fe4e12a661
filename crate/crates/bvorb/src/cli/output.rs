//! Rendering of command results as JSON, CSV or an aligned text table.

use serde_json::Value;

use super::config::Format;
use super::CliError;

/// A command result: the JSON document plus a flat row view used by the
/// CSV and table renderers.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Internal(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(|e| CliError::Internal(e.to_string()))?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| CliError::Internal(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
            }
            Format::Table => Ok(table(&self.header, &self.rows)),
        }
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> Document {
        Document { json: serde_json::json!({"a": 1}), header: vec!["label", "value"], rows: vec![vec!["x,y".into(), "1/2".into()], vec!["long label".into(), "3".into()]] }
    }

    #[test]
    fn csv_quotes_commas() {
        let s = doc().render(Format::Csv).unwrap();
        assert_eq!(s, "label,value\n\"x,y\",1/2\nlong label,3\n");
    }

    #[test]
    fn table_aligns() {
        let s = doc().render(Format::Table).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "label       value");
        assert_eq!(lines[2], "x,y         1/2");
    }
}
