//! Minimal static SVG plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 50.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Plot {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    legend: Vec<(String, String)>,
}

impl Plot {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Self { x: widen(x), y: widen(y), body: String::new(), legend: Vec::new() }
    }

    /// Bounds of the finite values in `vals`, or `(0, 1)`.
    pub fn range(vals: impl IntoIterator<Item = f64>) -> (f64, f64) {
        let (lo, hi) = vals
            .into_iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo.is_finite() {
            (lo, hi)
        } else {
            (0.0, 1.0)
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, label: Option<&str>) {
        let _ = writeln!(self.body, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, self.points(pts));
        if let Some(l) = label {
            self.legend.push((l.to_string(), color.to_string()));
        }
    }

    /// Filled region between `lower` and `upper` sampled at the same abscissae.
    pub fn band(&mut self, lower: &[(f64, f64)], upper: &[(f64, f64)], color: &str, label: &str) {
        let mut ring: Vec<(f64, f64)> = lower.to_vec();
        ring.extend(upper.iter().rev());
        let _ = writeln!(
            self.body,
            r#"<polygon fill="{color}" fill-opacity="0.3" stroke="{color}" stroke-width="1" points="{}"/>"#,
            self.points(&ring)
        );
        self.legend.push((label.to_string(), color.to_string()));
    }

    /// Axis-aligned cell `[x0, x1] x [y0, y1]`.
    pub fn cell(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (c, d) = (self.py(y1), self.py(y0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{c:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            (b - a).max(0.0),
            (d - c).max(0.0)
        );
    }

    pub fn render(&self, title: &str, xlabel: &str, ylabel: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        s.push_str(&self.body);
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(s, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
        let tick = |v: f64| format!("{v:.3}");
        let _ = writeln!(s, r#"<text x="{l}" y="{}" font-size="11">{}</text>"#, b + 15.0, tick(self.x.0));
        let _ = writeln!(s, r#"<text x="{r}" y="{}" font-size="11" text-anchor="end">{}</text>"#, b + 15.0, tick(self.x.1));
        let _ = writeln!(s, r#"<text x="{}" y="{b}" font-size="11" text-anchor="end">{}</text>"#, l - 4.0, tick(self.y.0));
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, l - 4.0, t + 10.0, tick(self.y.1));
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, b + 35.0, escape(xlabel));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(ylabel)
        );
        let _ = writeln!(s, r#"<text x="{}" y="25" font-size="15" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = t + 15.0 + 16.0 * i as f64;
            let _ = writeln!(s, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, r - 110.0, y - 9.0);
            let _ = writeln!(s, r#"<text x="{}" y="{y}" font-size="11">{}</text>"#, r - 95.0, escape(label));
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Linear blue-to-yellow ramp for `u` in `[0, 1]`.
pub fn ramp(u: f64) -> String {
    let u = if u.is_finite() { u.clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(48.0, 250.0), lerp(18.0, 230.0), lerp(120.0, 40.0))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
