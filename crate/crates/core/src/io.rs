//! Number formatting, CSV and a small SVG line-chart emitter.

use std::fmt::Write as _;

/// 17 significant digits, `.` separator; `nan`, `inf`, `-inf` spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// CSV with a header row and LF line endings.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
}

/// Polyline chart with axes and tick labels.
#[derive(Debug, Clone)]
pub struct SvgPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Optional clipping of the y-range.
    pub y_range: Option<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-300);
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn short(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        SvgPlot { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), series: vec![], y_range: None }
    }

    pub fn line(mut self, label: &str, points: Vec<(f64, f64)>, color: &'static str) -> Self {
        self.series.push(Series { label: label.into(), points, color });
        self
    }

    pub fn render(&self) -> String {
        let pts = self.series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if let Some((a, b)) = self.y_range {
            y0 = a;
            y1 = b;
        }
        if !(x0 < x1) {
            x0 -= 1.0;
            x1 += 1.0;
        }
        if !(y0 < y1) {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
        let py = |y: f64| H - MB - (y.clamp(y0, y1) - y0) / (y1 - y0) * (H - MT - MB);

        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#, W / 2.0, esc(&self.title));
        let _ = writeln!(
            s,
            r#"<path d="M{ml},{mt} L{ml},{b} L{r},{b}" fill="none" stroke="black"/>"#,
            ml = ML,
            mt = MT,
            b = H - MB,
            r = W - MR
        );
        for t in ticks(x0, x1) {
            let x = px(t);
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, H - MB, H - MB + 5.0);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, H - MB + 18.0, short(t));
        }
        for t in ticks(y0, y1) {
            let y = py(t);
            let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{ML}" y2="{y:.2}" stroke="black"/>"#, ML - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#, ML - 8.0, y + 4.0, short(t));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#, (ML + W - MR) / 2.0, H - 12.0, esc(&self.x_label));
        let _ = writeln!(s, r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#, (MT + H - MB) / 2.0, (MT + H - MB) / 2.0, esc(&self.y_label));
        for (i, ser) in self.series.iter().enumerate() {
            let mut d = String::new();
            let mut pen_up = true;
            for &(x, y) in &ser.points {
                if !(x.is_finite() && y.is_finite()) {
                    pen_up = true;
                    continue;
                }
                let _ = write!(d, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, px(x), py(y));
                pen_up = false;
            }
            let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.6"/>"#, d.trim_end(), ser.color);
            let ly = MT + 16.0 * (i as f64 + 1.0);
            let _ = writeln!(s, r#"<text x="{}" y="{ly:.2}" font-family="sans-serif" font-size="12" fill="{}" text-anchor="end">{}</text>"#, W - MR - 6.0, ser.color, esc(&ser.label));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn esc(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        let x = 0.123_456_789_012_345_67_f64;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_uses_lf() {
        let s = csv(&["a", "b"], vec![vec!["1".into(), "2".into()]]);
        assert_eq!(s, "a,b\n1,2\n");
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let p = SvgPlot::new("t", "x", "y").line("s", vec![(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN), (3.0, 0.5)], "black");
        let a = p.render();
        assert_eq!(a, p.render());
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<path").count(), 2);
    }
}
