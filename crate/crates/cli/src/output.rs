use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qdist::sim::{export_qasm, transpile_to_basis};

use crate::error::{CliError, Result};
use crate::experiment::{point_circuits, ExperimentSpec, Row, Table};

pub const CSV_HEADER: [&str; 4] = ["param", "estimate", "std_error", "oracle"];

const SIG_DIGITS: i32 = 10;

/// `x` with 10 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = SIG_DIGITS - 1 - exponent;
    if (0..=15).contains(&decimals) {
        let s = format!("{x:.*}", decimals as usize);
        // rounding may carry into a new leading digit (9.99... -> 10.0...)
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > SIG_DIGITS as usize {
            return format!("{x:.*}", (decimals - 1).max(0) as usize);
        }
        s
    } else {
        format!("{x:.*e}", (SIG_DIGITS - 1) as usize)
    }
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in &table.rows {
        w.write_record([r.param, r.estimate, r.std_error, r.oracle].map(fmt_sig))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the rows back from a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(CliError::CsvFormat(format!("unexpected header {:?}", r.headers()?)));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let f = |i: usize| -> Result<f64> {
                let field = rec.get(i).ok_or_else(|| CliError::CsvFormat(format!("short record {rec:?}")))?;
                field
                    .parse()
                    .map_err(|_| CliError::CsvFormat(format!("bad number {field:?}")))
            };
            Ok(Row {
                param: f(0)?,
                estimate: f(1)?,
                std_error: f(2)?,
                oracle: f(3)?,
            })
        })
        .collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart: the oracle as one polyline, the estimates as dots.
pub fn render_svg(table: &Table) -> Result<String> {
    if table.rows.is_empty() {
        return Err(CliError::EmptyTable);
    }
    let xs = table.rows.iter().map(|r| r.param);
    let ys = table.rows.iter().flat_map(|r| [r.estimate, r.oracle]).filter(|y| y.is_finite());
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (y0, y1) = ys.fold((0.0f64, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (xs_span, ys_span) = (span(x0, x1), span(y0, y1.max(y0)));
    let px = |x: f64| MARGIN + (x - x0) / xs_span * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / ys_span * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>"#);
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" font-size="11" text-anchor="{anchor}">{}</text>"#,
            px(x),
            bottom + 16.0,
            fmt_sig(x)
        );
    }
    for y in [y0, y0 + ys_span] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            left - 6.0,
            py(y) + 4.0,
            fmt_sig(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(&table.param)
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&table.quantity)
    );
    if let Some(label) = &table.label {
        let _ = writeln!(s, r#"<text x="{}" y="30" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(label));
    }
    let points: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", px(r.param), py(r.oracle)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
    for r in &table.rows {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="crimson"/>"#,
            px(r.param),
            py(r.estimate)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg(table: &Table, path: &Path) -> Result<()> {
    fs::write(path, render_svg(table)?)?;
    Ok(())
}

/// Output path of `table`: `base` itself for an unlabelled table, otherwise
/// `<stem>_<label>.<ext>` next to it.
pub fn table_path(base: &Path, table: &Table, ext: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match &table.label {
        Some(label) => format!("{stem}_{label}.{ext}"),
        None => format!("{stem}.{ext}"),
    };
    base.with_file_name(name)
}

/// Writes one OpenQASM file per measurement circuit of every sweep point
/// and returns the paths in sweep order.
pub fn emit_qasm(spec: &ExperimentSpec, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let param = spec.experiment.param();
    let mut written = Vec::new();
    for pc in point_circuits(spec)? {
        let mut name = spec.experiment.name().to_string();
        if let Some(theta) = pc.series {
            let _ = write!(name, "_theta_{}", fmt_sig(theta));
        }
        let _ = write!(name, "_{param}_{}", fmt_sig(pc.param));
        if let Some(tag) = &pc.tag {
            let _ = write!(name, "_{tag}");
        }
        name.push_str(".qasm");
        let path = dir.join(name);
        fs::write(&path, export_qasm(&transpile_to_basis(&pc.circuit)?)?)?;
        written.push(path);
    }
    Ok(written)
}
