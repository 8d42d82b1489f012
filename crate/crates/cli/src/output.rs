//! CSV and JSON writers. Floats use 17 significant digits.

use std::io::{self, Write};

use crate::sweep::{SweepRow, SweepTiming};

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes a header and rows of already-formatted cells.
pub fn write_table<W: Write>(mut w: W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| quote(c)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn write_sweep<W: Write>(w: W, rows: &[SweepRow]) -> io::Result<()> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.length_m),
                num(r.accel_per_s),
                num(r.planck_x),
                num(r.probability),
                num(r.abs_error),
                num(r.planck_reference),
                r.status.clone(),
            ]
        })
        .collect();
    write_table(
        w,
        &[
            "length_m",
            "accel_per_s",
            "planck_x",
            "probability",
            "abs_error",
            "planck_reference",
            "status",
        ],
        &body,
    )
}

pub fn write_timings<W: Write>(w: W, timings: &[SweepTiming]) -> io::Result<()> {
    let body: Vec<Vec<String>> = timings
        .iter()
        .map(|t| {
            vec![
                num(t.length_m),
                num(t.accel_per_s),
                format!("{:.3}", t.runtime_ms),
            ]
        })
        .collect();
    write_table(w, &["length_m", "accel_per_s", "runtime_ms"], &body)
}
