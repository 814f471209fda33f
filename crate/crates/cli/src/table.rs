//! Tabular output: CSV with a fixed header, or JSON lines.

use std::io::{self, Write};

use serde::Serialize;

pub const CSV_HEADER: &str = "d_m,T_K,model,geometry,value,unit,m_terms,rel_err";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "jsonl", alias = "json-lines")]
    JsonLines,
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub d_m: f64,
    #[serde(rename = "T_K")]
    pub t_k: f64,
    pub model: String,
    pub geometry: String,
    pub value: f64,
    pub unit: String,
    pub m_terms: usize,
    pub rel_err: f64,
}

/// Scientific notation with 9 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

fn rounded(v: f64) -> f64 {
    sci(v).parse().expect("formatted float parses")
}

/// Writes `rows` to `out`, returning the number of bytes written.
pub fn emit_table<W: Write + ?Sized>(rows: &[Row], format: Format, out: &mut W) -> io::Result<usize> {
    let mut buf = String::new();
    match format {
        Format::Csv => {
            buf.push_str(CSV_HEADER);
            buf.push('\n');
            for r in rows {
                buf.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    sci(r.d_m),
                    sci(r.t_k),
                    r.model,
                    r.geometry,
                    sci(r.value),
                    r.unit,
                    r.m_terms,
                    sci(r.rel_err)
                ));
            }
        }
        Format::JsonLines => {
            for r in rows {
                let r = Row {
                    d_m: rounded(r.d_m),
                    t_k: rounded(r.t_k),
                    value: rounded(r.value),
                    rel_err: rounded(r.rel_err),
                    ..r.clone()
                };
                buf.push_str(&serde_json::to_string(&r).map_err(io::Error::other)?);
                buf.push('\n');
            }
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(buf.len())
}

/// A named scalar, for outputs that are not distance curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub quantity: String,
    pub value: f64,
    pub unit: String,
}

pub fn emit_quantities<W: Write + ?Sized>(items: &[Quantity], format: Format, out: &mut W) -> io::Result<usize> {
    let mut buf = String::new();
    match format {
        Format::Csv => {
            buf.push_str("quantity,value,unit\n");
            for q in items {
                buf.push_str(&format!("{},{},{}\n", q.quantity, sci(q.value), q.unit));
            }
        }
        Format::JsonLines => {
            for q in items {
                let q = Quantity {
                    value: rounded(q.value),
                    ..q.clone()
                };
                buf.push_str(&serde_json::to_string(&q).map_err(io::Error::other)?);
                buf.push('\n');
            }
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(buf.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row() -> Row {
        Row {
            d_m: 3e-6,
            t_k: 300.0,
            model: "plasma".into(),
            geometry: "pp".into(),
            value: 1.234567891234e-9,
            unit: "N".into(),
            m_terms: 12,
            rel_err: 3.2e-12,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut out = Vec::new();
        let n = emit_table(&[], Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));
        assert_eq!(n, CSV_HEADER.len() + 1);
        let mut out = Vec::new();
        assert_eq!(emit_table(&[], Format::JsonLines, &mut out).unwrap(), 0);
    }

    #[test]
    fn one_row_two_lines_eight_fields() {
        let mut out = Vec::new();
        emit_table(&[row()], Format::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 8);
        assert_eq!(
            lines[1],
            "3.00000000e-6,3.00000000e2,plasma,pp,1.23456789e-9,N,12,3.20000000e-12"
        );
    }

    #[test]
    fn json_lines_fields() {
        let mut out = Vec::new();
        emit_table(&[row()], Format::JsonLines, &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["model"], "plasma");
        assert_eq!(v["T_K"], 300.0);
        assert_eq!(v["value"], 1.23456789e-9);
        assert_eq!(v["m_terms"], 12);
    }

    proptest! {
        #[test]
        fn printed_values_round_trip(mantissa in 1.0f64..10.0, exp in -30i32..30) {
            let v = mantissa * 10f64.powi(exp);
            let back: f64 = sci(v).parse().unwrap();
            // One unit in the ninth significant digit.
            let ulp9 = 10f64.powi(v.log10().floor() as i32 - 8);
            prop_assert!((back - v).abs() <= ulp9);
        }
    }
}
