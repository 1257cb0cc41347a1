//! Plain row/column tables rendered as CSV, TSV or JSON.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
    Json,
}

pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> Result<()> {
        match format {
            Format::Csv | Format::Tsv => {
                let delim = if format == Format::Csv { b',' } else { b'\t' };
                let mut out = csv::WriterBuilder::new().delimiter(delim).from_writer(w);
                out.write_record(&self.columns)?;
                for r in &self.rows {
                    out.write_record(r)?;
                }
                out.flush()?;
            }
            Format::Json => {
                // columns and rows kept as arrays so that column order survives
                let doc = serde_json::json!({ "columns": self.columns, "rows": self.rows });
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["stratum", "value"]);
        t.push(vec!["1,1".into(), "1".into()]);
        t
    }

    #[test]
    fn csv_quotes_commas() {
        let mut out = Vec::new();
        sample().write(&mut out, Format::Csv).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "stratum,value\n\"1,1\",1\n"
        );
    }

    #[test]
    fn tsv_and_json() {
        let mut out = Vec::new();
        sample().write(&mut out, Format::Tsv).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "stratum\tvalue\n1,1\t1\n");
        let mut out = Vec::new();
        sample().write(&mut out, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["columns"][1], "value");
        assert_eq!(v["rows"][0][0], "1,1");
    }
}
