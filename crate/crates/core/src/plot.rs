//! Hand-written SVG line plots and heatmaps from experiment CSVs.
//!
//! Output is meant for eyeballing, not publication. Rendering is a pure
//! function of the CSV text and the [`PlotSpec`], so identical inputs give
//! byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MascError, Result};
use crate::experiment::ExperimentKind;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "kebab-case")]
pub enum PlotSpec {
    /// One polyline per `series` column, split further by the distinct
    /// values of `group` when given.
    Lines { title: String, x: String, series: Vec<String>, group: Option<String> },
    /// One rectangle per distinct `(x, y)` cell, shaded by the mean of
    /// `value` over the rows in that cell.
    Heatmap { title: String, x: String, y: String, value: String },
}

impl PlotSpec {
    /// The plot matching each experiment's CSV schema.
    pub fn default_for(kind: ExperimentKind) -> PlotSpec {
        let lines = |title: &str, x: &str, series: &[&str], group: Option<&str>| PlotSpec::Lines {
            title: title.into(),
            x: x.into(),
            series: series.iter().map(|s| s.to_string()).collect(),
            group: group.map(Into::into),
        };
        match kind {
            ExperimentKind::Fig3Cycles => lines("recovery rate on G_l", "s", &["rate"], Some("l")),
            ExperimentKind::Fig4ErdosRenyi => PlotSpec::Heatmap {
                title: "Erdős–Rényi recovery rate".into(),
                x: "k".into(),
                y: "s".into(),
                value: "rate".into(),
            },
            ExperimentKind::Fig5DftRecovery => lines("partial DFT recovery", "s", &["rate", "masc_fraction"], None),
            ExperimentKind::Fig6MrslLarge => lines("MRSL bounds, n = 1009", "omega_size", &["bound", "s_max_sampled"], None),
            ExperimentKind::Fig7MrslSmall => {
                lines("MRSL bounds, n = 61", "omega_size", &["bound", "s_max_sampled", "s_naive"], None)
            }
            ExperimentKind::Custom => lines("recovery rate", "s", &["rate"], None),
        }
    }

    fn columns(&self) -> Vec<&str> {
        match self {
            PlotSpec::Lines { x, series, group, .. } => {
                let mut c = vec![x.as_str()];
                c.extend(series.iter().map(String::as_str));
                c.extend(group.as_deref());
                c
            }
            PlotSpec::Heatmap { x, y, value, .. } => vec![x, y, value],
        }
    }
}

struct Frame {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Frame {
    fn parse(text: &str) -> Result<Frame> {
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let bad = |e: csv::Error| MascError::input(format!("malformed CSV: {e}"));
        let header = reader.headers().map_err(bad)?.iter().map(str::to_owned).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_owned).collect()).map_err(bad))
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Frame { header, rows })
    }

    fn index(&self, wanted: &[&str]) -> Result<Vec<usize>> {
        let missing: Vec<&str> = wanted.iter().copied().filter(|w| !self.header.iter().any(|h| h == w)).collect();
        if !missing.is_empty() {
            return Err(MascError::input(format!("CSV is missing columns: {}", missing.join(", "))));
        }
        Ok(wanted.iter().map(|w| self.header.iter().position(|h| h == w).unwrap_or(0)).collect())
    }

    fn number(&self, row: usize, col: usize) -> Result<f64> {
        let cell = &self.rows[row][col];
        cell.parse::<f64>()
            .map_err(|_| MascError::input(format!("non-numeric value `{cell}` in column `{}`", self.header[col])))
    }
}

/// Renders `csv` (with optional `#` comment lines) as an SVG document.
pub fn render_svg(csv: &str, spec: &PlotSpec) -> Result<String> {
    let frame = Frame::parse(csv)?;
    let idx = frame.index(&spec.columns())?;
    if frame.rows.is_empty() {
        return Err(MascError::input("CSV has no data rows"));
    }
    match spec {
        PlotSpec::Lines { title, x, series, group } => lines(&frame, &idx, title, x, series, group.is_some()),
        PlotSpec::Heatmap { title, x, y, value } => heatmap(&frame, &idx, title, x, y, value),
    }
}

/// Reads `csv_path`, renders it and writes `svg_path`. Nothing is written
/// when the CSV is empty or lacks a column the spec needs.
pub fn emit_plot(csv_path: &Path, spec: &PlotSpec, svg_path: &Path) -> Result<()> {
    let svg = render_svg(&std::fs::read_to_string(csv_path)?, spec)?;
    std::fs::write(svg_path, svg)?;
    Ok(())
}

fn fmt_num(v: f64) -> String {
    if v == v.round() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Axes {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Axes {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Axes {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it.filter(|v| v.is_finite()).fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
            if lo > hi {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        let (x0, x1) = span(&mut xs.clone());
        let (y0, y1) = span(&mut ys.clone());
        Axes { x0, x1, y0: y0.min(0.0), y1 }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn frame_svg(out: &mut String, title: &str, xlabel: &str, ylabel: &str, ax: &Axes) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(out, r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = ax.x0 + f * (ax.x1 - ax.x0);
        let yv = ax.y0 + f * (ax.y1 - ax.y0);
        let (x, y) = (ax.px(xv), ax.py(yv));
        let _ = writeln!(out, r#"<line x1="{x:.1}" y1="{b}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#, b + 4.0);
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, b + 17.0, fmt_num(xv));
        let _ = writeln!(out, r#"<line x1="{:.1}" y1="{y:.1}" x2="{l}" y2="{y:.1}" stroke="black"/>"#, l - 4.0);
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, l - 7.0, y + 4.0, fmt_num(yv));
    }
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (l + r) / 2.0, HEIGHT - 12.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(ylabel)
    );
}

fn lines(frame: &Frame, idx: &[usize], title: &str, x: &str, series: &[String], grouped: bool) -> Result<String> {
    let xi = idx[0];
    let gi = grouped.then(|| idx[idx.len() - 1]);
    // (series name, group label) -> points, ordered by group then series
    let mut curves: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    let mut order: Vec<(String, String)> = Vec::new();
    for row in 0..frame.rows.len() {
        let xv = frame.number(row, xi)?;
        for (k, name) in series.iter().enumerate() {
            let yv = frame.number(row, idx[1 + k])?;
            let label = gi.map_or(String::new(), |g| frame.rows[row][g].clone());
            let key = (name.clone(), label);
            if !curves.contains_key(&key) {
                order.push(key.clone());
            }
            curves.entry(key).or_default().push((xv, yv));
        }
    }
    let ax = Axes::new(
        curves.values().flatten().map(|p| p.0).collect::<Vec<_>>().into_iter(),
        curves.values().flatten().map(|p| p.1).collect::<Vec<_>>().into_iter(),
    );
    let ylabel = if series.len() == 1 { series[0].as_str() } else { "value" };
    let mut out = String::new();
    frame_svg(&mut out, title, x, ylabel, &ax);
    for (i, key) in order.iter().enumerate() {
        let mut pts = curves[key].clone();
        pts.retain(|p| p.0.is_finite() && p.1.is_finite());
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.1},{:.1}", ax.px(a), ax.py(b))).collect();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, path.join(" "));
        let label = match (grouped, key.1.is_empty()) {
            (true, _) if series.len() == 1 => format!("{} = {}", frame.header[idx[idx.len() - 1]], key.1),
            (true, _) => format!("{} ({})", key.0, key.1),
            _ => key.0.clone(),
        };
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&label));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn heatmap(frame: &Frame, idx: &[usize], title: &str, x: &str, y: &str, value: &str) -> Result<String> {
    let key = |v: f64| v.to_bits();
    let mut cells: BTreeMap<(u64, u64), (f64, f64, f64, usize)> = BTreeMap::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for row in 0..frame.rows.len() {
        let (xv, yv, v) = (frame.number(row, idx[0])?, frame.number(row, idx[1])?, frame.number(row, idx[2])?);
        xs.push(xv);
        ys.push(yv);
        let e = cells.entry((key(xv), key(yv))).or_insert((xv, yv, 0.0, 0));
        if v.is_finite() {
            e.2 += v;
            e.3 += 1;
        }
    }
    let distinct = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup();
    };
    distinct(&mut xs);
    distinct(&mut ys);
    let ax = Axes { x0: 0.0, x1: xs.len() as f64, y0: 0.0, y1: ys.len() as f64 };
    let (lo, hi) = cells
        .values()
        .filter(|c| c.3 > 0)
        .map(|c| c.2 / c.3 as f64)
        .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (cw, ch) = (ax.px(1.0) - ax.px(0.0), ax.py(0.0) - ax.py(1.0));
    for c in cells.values() {
        let i = xs.iter().position(|&v| v == c.0).unwrap_or(0) as f64;
        let j = ys.iter().position(|&v| v == c.1).unwrap_or(0) as f64;
        let shade = if c.3 == 0 {
            "#dddddd".to_string()
        } else {
            let t = if hi > lo { (c.2 / c.3 as f64 - lo) / (hi - lo) } else { 1.0 };
            let g = (255.0 * (1.0 - t)).round() as u8;
            format!("#{g:02x}{g:02x}ff")
        };
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="{cw:.1}" height="{ch:.1}" fill="{shade}" stroke="white"/>"#,
            ax.px(i),
            ax.py(j + 1.0)
        );
    }
    for (i, v) in xs.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            ax.px(i as f64 + 0.5),
            HEIGHT - BOTTOM + 16.0,
            fmt_num(*v)
        );
    }
    for (j, v) in ys.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            ax.py(j as f64 + 0.5) + 4.0,
            fmt_num(*v)
        );
    }
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, ax.px(xs.len() as f64 / 2.0), HEIGHT - 12.0, escape(x));
    let mid = (TOP + HEIGHT - BOTTOM) / 2.0;
    let _ = writeln!(out, r#"<text x="18" y="{mid:.1}" text-anchor="middle" transform="rotate(-90 18 {mid:.1})">{}</text>"#, escape(y));
    let lx = WIDTH - RIGHT + 12.0;
    let _ = writeln!(out, r#"<text x="{lx}" y="{}">{}: {} to {}</text>"#, TOP + 10.0, escape(value), fmt_num(lo), fmt_num(hi));
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG5: &str = "# masckit\ns,trials,successes,rate,masc_fraction,seed\n1,10,10,1,1,3\n2,10,9,0.9,0.5,3\n3,10,5,0.5,0,3\n";

    #[test]
    fn two_series_give_two_polylines() {
        let svg = render_svg(FIG5, &PlotSpec::default_for(ExperimentKind::Fig5DftRecovery)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">masc_fraction<") && svg.contains(">s<"));
        assert_eq!(svg, render_svg(FIG5, &PlotSpec::default_for(ExperimentKind::Fig5DftRecovery)).unwrap());
    }

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let csv = "k,p,s,graph,edges,trials,successes,rate,seed\n1,0.7,1,0,9,2,2,1,0\n1,0.7,1,1,9,2,1,0.5,1\n1,0.7,2,0,9,2,0,0,0\n2,0.5,1,0,4,2,2,1,0\n";
        let svg = render_svg(csv, &PlotSpec::default_for(ExperimentKind::Fig4ErdosRenyi)).unwrap();
        // one background rect plus three cells
        assert_eq!(svg.matches("<rect").count(), 4);
    }

    #[test]
    fn missing_columns_are_listed() {
        let err = render_svg("s,rate\n1,1\n", &PlotSpec::default_for(ExperimentKind::Fig5DftRecovery)).unwrap_err();
        assert!(err.to_string().contains("masc_fraction"), "{err}");
    }

    #[test]
    fn empty_csv_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let (csv, svg) = (dir.path().join("e.csv"), dir.path().join("e.svg"));
        std::fs::write(&csv, "# only comments\ns,trials,successes,rate,seed\n").unwrap();
        assert!(emit_plot(&csv, &PlotSpec::default_for(ExperimentKind::Custom), &svg).is_err());
        assert!(!svg.exists());
        std::fs::write(&csv, "").unwrap();
        assert!(emit_plot(&csv, &PlotSpec::default_for(ExperimentKind::Custom), &svg).is_err());
        assert!(!svg.exists());
    }
}
