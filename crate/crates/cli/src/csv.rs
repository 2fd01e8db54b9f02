//! Minimal CSV writer: header row, comma separated, 17 significant digits.

use std::io::{self, Write};

/// 17 significant digits, which round-trips every f64. NaN is `nan`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if v == 0.0 {
        if v.is_sign_negative() { "-0" } else { "0" }.to_string()
    } else {
        let exp = v.abs().log10().floor() as i32;
        if (-5..17).contains(&exp) {
            let decimals = (16 - exp).max(0) as usize;
            format!("{v:.decimals$}")
        } else {
            format!("{v:.16e}")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        out.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}
