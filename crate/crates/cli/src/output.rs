//! Row output in CSV or JSON.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes `rows` as CSV with a header, or `records` as one JSON array.
pub fn emit<R: Serialize, J: Serialize>(format: Format, rows: &[R], records: &[J], mut out: impl Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Joins per-round numbers for a single CSV cell.
pub fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        n: usize,
        mean: f64,
        tag: &'static str,
    }

    #[test]
    fn csv_uses_lf_and_a_header() {
        let rows = [
            Row {
                n: 4,
                mean: 1.5,
                tag: "a",
            },
            Row {
                n: 8,
                mean: 2.0,
                tag: "b;c",
            },
        ];
        let mut buf = Vec::new();
        emit(Format::Csv, &rows, &rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,mean,tag\n4,1.5,a\n8,2.0,b;c\n");
        let mut buf = Vec::new();
        emit(Format::Json, &rows, &rows, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[1]["tag"], "b;c");
        assert_eq!(join([3, 1, 2]), "3;1;2");
    }
}
