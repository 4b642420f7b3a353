//! Minimal SVG line-chart writer.

use std::fmt::Write as _;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Color `i` of a fixed ten-color cycle.
pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub dashed: bool,
    pub width: f64,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, color: &str) -> Self {
        Self {
            name: name.into(),
            points,
            color: color.to_string(),
            dashed: false,
            width: 1.5,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Vertical markers `(x, label)`.
    pub markers: Vec<(f64, String)>,
    /// Draw `y = x`.
    pub diagonal: bool,
    pub legend: bool,
    /// Fixed y range; otherwise from the data.
    pub y_range: Option<(f64, f64)>,
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * self.w
    }
    fn py(&self, y: f64) -> f64 {
        self.y0 + self.h - (y - self.ymin) / (self.ymax - self.ymin) * self.h
    }
}

fn bounds(plot: &Plot) -> (f64, f64, f64, f64) {
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &plot.series {
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                xs = (xs.0.min(x), xs.1.max(x));
                ys = (ys.0.min(y), ys.1.max(y));
            }
        }
    }
    if !xs.0.is_finite() {
        xs = (0.0, 1.0);
        ys = (0.0, 1.0);
    }
    if plot.diagonal {
        ys = (ys.0.min(xs.0), ys.1.max(xs.1));
    }
    if let Some(r) = plot.y_range {
        ys = r;
    }
    if xs.1 <= xs.0 {
        xs.1 = xs.0 + 1.0;
    }
    if ys.1 <= ys.0 {
        ys.1 = ys.0 + 1.0;
    }
    (xs.0, xs.1, ys.0, ys.1)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn draw(out: &mut String, plot: &Plot, ox: f64, oy: f64, width: f64, height: f64) {
    let (xmin, xmax, ymin, ymax) = bounds(plot);
    let f = Frame {
        x0: ox + 60.0,
        y0: oy + 36.0,
        w: width - 80.0 - if plot.legend { 110.0 } else { 0.0 },
        h: height - 86.0,
        xmin,
        xmax,
        ymin,
        ymax,
    };
    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333"/>"##,
        f.x0, f.y0, f.w, f.h
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        f.x0 + f.w / 2.0,
        oy + 22.0,
        escape(&plot.title)
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = xmin + t * (xmax - xmin);
        let yv = ymin + t * (ymax - ymin);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
            f.px(xv),
            f.y0 + f.h + 14.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"#,
            f.x0 - 4.0,
            f.py(yv) + 3.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        f.x0 + f.w / 2.0,
        f.y0 + f.h + 32.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        ox + 16.0,
        f.y0 + f.h / 2.0,
        ox + 16.0,
        f.y0 + f.h / 2.0,
        escape(&plot.y_label)
    );
    if plot.diagonal {
        let lo = xmin.max(ymin);
        let hi = xmax.min(ymax);
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#999" stroke-dasharray="4 3"/>"##,
            f.px(lo),
            f.py(lo),
            f.px(hi),
            f.py(hi)
        );
    }
    for (x, label) in &plot.markers {
        if *x < xmin || *x > xmax {
            continue;
        }
        let _ = writeln!(
            out,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="#555" stroke-dasharray="2 2"/>"##,
            f.px(*x),
            f.y0,
            f.y0 + f.h
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            f.px(*x) + 3.0,
            f.y0 + 12.0,
            escape(label)
        );
    }
    for s in &plot.series {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
            .collect();
        let dash = if s.dashed {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="{}"{} points="{}"><title>{}</title></polyline>"#,
            s.color,
            s.width,
            dash,
            pts.join(" "),
            escape(&s.name)
        );
    }
    if plot.legend {
        let lx = f.x0 + f.w + 10.0;
        for (i, s) in plot.series.iter().enumerate() {
            let ly = f.y0 + 12.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
                lx,
                ly,
                lx + 18.0,
                ly,
                s.color,
                lx + 22.0,
                ly + 3.0,
                escape(&s.name)
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

/// Render plots side by side in one document.
pub fn render(plots: &[Plot], panel_width: f64, panel_height: f64) -> String {
    let total_w = panel_width * plots.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{panel_height:.0}" viewBox="0 0 {total_w:.0} {panel_height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in plots.iter().enumerate() {
        draw(
            &mut out,
            p,
            i as f64 * panel_width,
            0.0,
            panel_width,
            panel_height,
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let plot = Plot {
            title: "a < b".into(),
            series: (0..3)
                .map(|i| Series::new(format!("s{i}"), vec![(0.0, i as f64), (1.0, 2.0)], color(i)))
                .collect(),
            diagonal: true,
            ..Default::default()
        };
        let svg = render(&[plot], 400.0, 300.0);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.starts_with("<svg"));
    }
}
