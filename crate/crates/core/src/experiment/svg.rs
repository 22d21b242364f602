//! Minimal deterministic SVG line charts.

use std::fmt::Write;

use super::format::fmt_sig_digits;
use crate::optimizer::SweepRow;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 40.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 80.0;
const TICKS: usize = 5;

#[derive(Debug, Clone)]
pub struct Series {
    pub name: &'static str,
    pub label: &'static str,
    pub color: &'static str,
    pub dashed: bool,
    /// Disjoint pieces, each drawn as its own polyline.
    pub segments: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl LineChart {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 600" width="800" height="600" font-family="sans-serif">"#
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="600" fill="white"/>"#);

        let (x0, y0) = (LEFT, HEIGHT - BOTTOM);
        let (x1, y1) = (WIDTH - RIGHT, TOP);
        let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
        let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
        let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let xv = self.x_range.0 + t * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + t * (self.y_range.1 - self.y_range.0);
            let (xp, yp) = (self.px(xv), self.py(yv));
            let _ = writeln!(s, r#"<line x1="{xp:.2}" y1="{y0:.2}" x2="{xp:.2}" y2="{:.2}"/>"#, y0 + 6.0);
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{yp:.2}" x2="{x0:.2}" y2="{yp:.2}"/>"#, x0 - 6.0);
        }
        let _ = writeln!(s, "</g>");

        let _ = writeln!(s, r#"<g class="tick-labels" font-size="14" fill="black">"#);
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let xv = self.x_range.0 + t * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + t * (self.y_range.1 - self.y_range.0);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                self.px(xv),
                y0 + 24.0,
                fmt_sig_digits(xv, 3)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 10.0,
                self.py(yv) + 5.0,
                fmt_sig_digits(yv, 3)
            );
        }
        let _ = writeln!(s, "</g>");

        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="30" font-size="18" text-anchor="middle">{}</text>"#,
            0.5 * (x0 + x1),
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="16" text-anchor="middle">{}</text>"#,
            0.5 * (x0 + x1),
            HEIGHT - 25.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="25" y="{:.2}" font-size="16" text-anchor="middle" transform="rotate(-90 25 {:.2})">{}</text>"#,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            escape(&self.y_label)
        );

        for series in &self.series {
            let dash = if series.dashed { r#" stroke-dasharray="8 5""# } else { "" };
            for segment in &series.segments {
                let points: Vec<String> = segment
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline class="series" data-series="{}" fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
                    series.name,
                    series.color,
                    points.join(" ")
                );
            }
        }

        let _ = writeln!(s, r#"<g class="legend" font-size="14">"#);
        for (i, series) in self.series.iter().enumerate() {
            let y = TOP + 20.0 + 22.0 * i as f64;
            let x = x1 - 220.0;
            let dash = if series.dashed { r#" stroke-dasharray="8 5""# } else { "" };
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
                x + 40.0,
                series.color
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                x + 50.0,
                y + 5.0,
                escape(series.label)
            );
        }
        let _ = writeln!(s, "</g>");
        s.push_str("</svg>\n");
        s
    }
}

fn alpha_range(rows: &[SweepRow]) -> (f64, f64) {
    let lo = rows.first().map_or(0.0, |r| r.alpha);
    let hi = rows.last().map_or(1.0, |r| r.alpha);
    if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    }
}

/// Average fidelity against α: optimized scheme (solid) and no operation
/// (dashed).
pub fn fidelity_chart(rows: &[SweepRow]) -> LineChart {
    let y_min = rows
        .iter()
        .map(|r| r.f_noop.min(r.f_bar))
        .fold(1.0_f64, f64::min);
    let y_lo = (y_min * 20.0).floor() / 20.0;
    LineChart {
        title: "Average fidelity vs depolarization".into(),
        x_label: "alpha".into(),
        y_label: "average fidelity".into(),
        x_range: alpha_range(rows),
        y_range: (y_lo.min(0.95), 1.0),
        series: vec![
            Series {
                name: "f_bar",
                label: "cbit + amplitude damping",
                color: "#1f4e9c",
                dashed: false,
                segments: vec![rows.iter().map(|r| (r.alpha, r.f_bar)).collect()],
            },
            Series {
                name: "f_noop",
                label: "no operation",
                color: "#555555",
                dashed: true,
                segments: vec![rows.iter().map(|r| (r.alpha, r.f_noop)).collect()],
            },
        ],
    }
}

/// Optimal β against α, broken wherever the optimum switches branch.
pub fn beta_chart(rows: &[SweepRow]) -> LineChart {
    let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if i > 0 && rows[i - 1].branch != r.branch {
            segments.push(std::mem::take(&mut current));
        }
        current.push((r.alpha, r.beta_opt));
    }
    if !current.is_empty() {
        segments.push(current);
    }
    LineChart {
        title: "Optimal partition angle vs depolarization".into(),
        x_label: "alpha".into(),
        y_label: "beta_opt (rad)".into(),
        x_range: alpha_range(rows),
        y_range: (0.0, 1.6),
        series: vec![Series {
            name: "beta_opt",
            label: "optimal beta",
            color: "#1f4e9c",
            dashed: false,
            segments,
        }],
    }
}
