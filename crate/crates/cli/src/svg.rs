//! Minimal static SVG rendering of log-log scaling plots.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Measured points with symmetric error bars.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    /// `(x, y, half_width)`.
    pub points: Vec<(f64, f64, f64)>,
}

/// A bound drawn as a dashed line through its evaluated values.
#[derive(Debug, Clone)]
pub struct ReferenceLine {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl ReferenceLine {
    /// Log-log slope between the first and last point.
    pub fn slope(&self) -> f64 {
        let (a, b) = (self.points[0], self.points[self.points.len() - 1]);
        (b.1.ln() - a.1.ln()) / (b.0.ln() - a.0.ln())
    }
}

#[derive(Debug, Clone)]
pub struct LogLogPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub references: Vec<ReferenceLine>,
}

struct Axis {
    lo: f64,
    hi: f64,
    start: f64,
    len: f64,
    flip: bool,
}

impl Axis {
    /// Decade-aligned log axis covering `[min, max]`.
    fn new(min: f64, max: f64, start: f64, len: f64, flip: bool) -> Self {
        let mut lo = min.log10().floor();
        let mut hi = max.log10().ceil();
        if hi <= lo {
            hi = lo + 1.0;
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        Axis { lo, hi, start, len, flip }
    }

    fn map(&self, v: f64) -> f64 {
        let f = (v.log10() - self.lo) / (self.hi - self.lo);
        if self.flip {
            self.start + self.len * (1.0 - f)
        } else {
            self.start + self.len * f
        }
    }

    /// `(value, is_decade)` ticks; minor ticks at 2 and 5 when the axis spans
    /// few decades.
    fn ticks(&self) -> Vec<(f64, bool)> {
        let minor = self.hi - self.lo <= 3.0;
        let mut out = Vec::new();
        for e in self.lo as i32..=self.hi as i32 {
            let base = 10f64.powi(e);
            out.push((base, true));
            if minor && (e as f64) < self.hi {
                out.push((2.0 * base, false));
                out.push((5.0 * base, false));
            }
        }
        out
    }
}

fn fmt_tick(v: f64) -> String {
    if (1e-3..1e5).contains(&v) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.0e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl LogLogPlot {
    pub fn render(&self) -> String {
        let xs = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let xs: Vec<f64> = xs.chain(self.references.iter().flat_map(|r| r.points.iter().map(|p| p.0))).collect();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(_, y, e) in &s.points {
                ys.push(y + e);
                if y - e > 0.0 {
                    ys.push(y - e);
                } else {
                    ys.push(y);
                }
            }
        }
        ys.extend(self.references.iter().flat_map(|r| r.points.iter().map(|p| p.1)));
        let xs: Vec<f64> = xs.into_iter().filter(|v| *v > 0.0 && v.is_finite()).collect();
        let ys: Vec<f64> = ys.into_iter().filter(|v| *v > 0.0 && v.is_finite()).collect();
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let xa = Axis::new(min(&xs), max(&xs), LEFT, pw, false);
        let ya = Axis::new(min(&ys), max(&ys), TOP, ph, true);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );

        // grid and ticks
        let _ = writeln!(s, r##"<g class="axes" stroke="#ccc" stroke-width="0.5">"##);
        for (v, major) in xa.ticks() {
            let x = xa.map(v);
            if major {
                let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}"/>"#, TOP + ph);
            }
        }
        for (v, major) in ya.ticks() {
            let y = ya.map(v);
            if major {
                let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#, LEFT + pw);
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        for (v, major) in xa.ticks() {
            let x = xa.map(v);
            let len = if major { 6.0 } else { 3.0 };
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                TOP + ph,
                TOP + ph + len
            );
            if major || xa.hi - xa.lo <= 1.0 {
                let _ = writeln!(
                    s,
                    r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                    TOP + ph + 20.0,
                    fmt_tick(v)
                );
            }
        }
        for (v, major) in ya.ticks() {
            let y = ya.map(v);
            let len = if major { 6.0 } else { 3.0 };
            let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - len);
            if major || ya.hi - ya.lo <= 1.0 {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                    LEFT - 9.0,
                    y + 4.0,
                    fmt_tick(v)
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let mut legend = Vec::new();
        for (i, r) in self.references.iter().enumerate() {
            let color = PALETTE[(i + 2) % PALETTE.len()];
            let pts: Vec<String> =
                r.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", xa.map(x), ya.map(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline class="reference" data-name="{}" data-slope="{:.6}" points="{}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                escape(&r.name),
                r.slope(),
                pts.join(" ")
            );
            legend.push((format!("{} (slope {:.3})", r.name, r.slope()), color, true));
        }
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> =
                series.points.iter().map(|&(x, y, _)| format!("{:.2},{:.2}", xa.map(x), ya.map(y))).collect();
            let _ = writeln!(
                s,
                r#"<g class="series" data-name="{}"><polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                escape(&series.name),
                pts.join(" ")
            );
            for &(x, y, e) in &series.points {
                let px = xa.map(x);
                let lo = if y - e > 0.0 { y - e } else { y };
                let _ = writeln!(
                    s,
                    r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="{color}"/><circle cx="{px:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    ya.map(lo),
                    ya.map(y + e),
                    ya.map(y)
                );
            }
            let _ = writeln!(s, "</g>");
            legend.push((series.name.clone(), color, false));
        }

        let lx = LEFT + pw + 16.0;
        for (i, (label, color, dashed)) in legend.iter().enumerate() {
            let y = TOP + 12.0 + 20.0 * i as f64;
            let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
                lx + 24.0,
                lx + 30.0,
                y + 4.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
