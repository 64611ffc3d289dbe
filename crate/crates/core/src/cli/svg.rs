//! Minimal static SVG line plots.
//!
//! Output depends only on the data: coordinates are printed with two decimals
//! and long series are decimated to per-pixel min/max envelopes.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
/// Columns of the decimation grid; a series longer than twice this is reduced.
const BUCKETS: usize = 1600;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    Line,
    Dashed,
    /// Step function: horizontal run then vertical jump.
    Steps,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
    /// Horizontal reference lines `(y, label)`.
    pub h_lines: Vec<(f64, String)>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range: widen(x_range),
            y_range: widen(y_range),
            series: Vec::new(),
            h_lines: Vec::new(),
        }
    }

    pub fn series(mut self, label: &str, color: &'static str, style: Style, points: Vec<(f64, f64)>) -> Self {
        self.series.push(Series {
            label: label.into(),
            color,
            style,
            points,
        });
        self
    }

    pub fn h_line(mut self, y: f64, label: &str) -> Self {
        self.h_lines.push((y, label.into()));
        self
    }

    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        self.axes(&mut s);
        for (y, label) in &self.h_lines {
            let py = self.sy(*y);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#888" stroke-dasharray="2 3"/>"##,
                WIDTH - RIGHT
            );
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="#555">{}</text>"##,
                WIDTH - RIGHT - 4.0,
                py - 4.0,
                escape(label)
            );
        }
        for series in &self.series {
            self.draw_series(&mut s, series);
        }
        self.legend(&mut s);
        s.push_str("</svg>\n");
        s
    }

    fn axes(&self, s: &mut String) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            s,
            r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        for k in 0..=5 {
            let f = k as f64 / 5.0;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let px = self.sx(xv);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                tick(xv)
            );
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let py = self.sy(yv);
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );
    }

    fn draw_series(&self, s: &mut String, series: &Series) {
        // Runs of finite points become separate polylines.
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(x, y) in &series.points {
            if x.is_finite() && y.is_finite() {
                runs.last_mut().expect("non-empty").push((x, y));
            } else if !runs.last().expect("non-empty").is_empty() {
                runs.push(Vec::new());
            }
        }
        let dash = if series.style == Style::Dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let pts = match series.style {
                Style::Steps => staircase(run),
                _ => run.clone(),
            };
            let pts = decimate(&pts, self.x_range);
            let mut coords = String::new();
            for (i, (x, y)) in pts.iter().enumerate() {
                if i > 0 {
                    coords.push(' ');
                }
                let _ = write!(coords, "{:.2},{:.2}", self.sx(*x), self.sy(*y));
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.2"{dash} points="{coords}"/>"#,
                series.color
            );
        }
    }

    fn legend(&self, s: &mut String) {
        for (i, series) in self.series.iter().enumerate() {
            let y = TOP + 16.0 + 16.0 * i as f64;
            let x = LEFT + 10.0;
            let dash = if series.style == Style::Dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"{dash}/><text x="{:.2}" y="{y:.2}">{}</text>"#,
                y - 4.0,
                x + 20.0,
                y - 4.0,
                series.color,
                x + 26.0,
                escape(&series.label)
            );
        }
    }
}

fn staircase(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(2 * points.len());
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            out.push((x, points[i - 1].1));
        }
        out.push((x, y));
    }
    out
}

/// Keeps first, last, and per-column min/max points of a series sorted by x.
pub fn decimate(points: &[(f64, f64)], x_range: (f64, f64)) -> Vec<(f64, f64)> {
    if points.len() <= 2 * BUCKETS {
        return points.to_vec();
    }
    let (lo, hi) = x_range;
    let width = (hi - lo) / BUCKETS as f64;
    let bucket = |x: f64| (((x - lo) / width).floor().max(0.0) as usize).min(BUCKETS - 1);
    let mut out = vec![points[0]];
    let mut i = 1;
    let last = points.len() - 1;
    while i < last {
        let b = bucket(points[i].0);
        let (mut min_i, mut max_i) = (i, i);
        let mut j = i;
        while j < last && bucket(points[j].0) == b {
            if points[j].1 < points[min_i].1 {
                min_i = j;
            }
            if points[j].1 > points[max_i].1 {
                max_i = j;
            }
            j += 1;
        }
        let (a, c) = if min_i <= max_i { (min_i, max_i) } else { (max_i, min_i) };
        out.push(points[a]);
        if c != a {
            out.push(points[c]);
        }
        i = j;
    }
    out.push(points[last]);
    out
}

fn tick(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let s = if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    };
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
