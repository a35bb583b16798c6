//! Gnuplot-ready text files and a minimal static SVG rendering.

use std::fmt::Write as _;
use std::path::Path;

use crate::output::{format_float, OutputError};

#[derive(Debug, Clone, PartialEq)]
pub struct PlotBlock {
    pub label: String,
    /// Rows of `columns.len()` values; the first column is x.
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub columns: Vec<String>,
    pub blocks: Vec<PlotBlock>,
}

impl PlotData {
    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|b| b.rows.is_empty())
    }

    /// Header line `# x: ..., y: ...` with `log` appended for log-scale data.
    pub fn axis_header(&self) -> String {
        if self.log_y {
            format!("# x: {}, y: {} (arb.u., log)", self.x_label, self.y_label)
        } else {
            format!("# x: {}, y: {}", self.x_label, self.y_label)
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.axis_header());
        let _ = writeln!(s, "# columns: {}", self.columns.join(" "));
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                // gnuplot: two blank lines separate indexable data blocks
                s.push_str("\n\n");
            }
            let _ = writeln!(s, "# block: {}", b.label);
            for r in &b.rows {
                let line: Vec<String> = r.iter().map(|&x| format_float(x)).collect();
                let _ = writeln!(s, "{}", line.join(" "));
            }
        }
        s
    }
}

pub fn emit_plot_data(path: &Path, data: &PlotData) -> Result<(), OutputError> {
    if data.is_empty() {
        return Err(OutputError::Empty(path.display().to_string()));
    }
    std::fs::write(path, data.render()).map_err(|e| OutputError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

const W: f64 = 720.0;
const H: f64 = 440.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot of column `y_column` against column 0, one polyline per block.
pub fn render_svg(data: &PlotData, y_column: usize) -> Result<String, OutputError> {
    let pts: Vec<Vec<(f64, f64)>> = data
        .blocks
        .iter()
        .map(|b| {
            b.rows
                .iter()
                .filter_map(|r| {
                    let y = *r.get(y_column)?;
                    let y = if data.log_y {
                        (y > 0.0).then(|| y.log10())?
                    } else {
                        y
                    };
                    (r[0].is_finite() && y.is_finite()).then_some((r[0], y))
                })
                .collect()
        })
        .collect();
    let all: Vec<&(f64, f64)> = pts.iter().flatten().collect();
    if all.is_empty() {
        return Err(OutputError::Empty("svg".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &&(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    let ylabel = if data.log_y {
        format!("log10 {}", data.y_label)
    } else {
        data.y_label.clone()
    };
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, H - 15.0, escape(&data.x_label));
    let _ = writeln!(s, r#"<text x="15" y="{}" font-size="14" transform="rotate(-90 15 {})" text-anchor="middle">{}</text>"#, H / 2.0, H / 2.0, escape(&ylabel));
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" font-size="11" text-anchor="{anchor}">{}</text>"#, sx(v), H - MARGIN + 15.0, short(v));
    }
    for v in [y0, y1] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#, MARGIN - 5.0, sy(v) + 4.0, short(v));
    }
    for (i, line) in pts.iter().enumerate() {
        if line.is_empty() {
            continue;
        }
        let path: Vec<String> = line.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"><title>{}</title></polyline>"#,
            COLORS[i % COLORS.len()],
            path.join(" "),
            escape(&data.blocks[i].label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn short(v: f64) -> String {
    format!("{v:.3}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
