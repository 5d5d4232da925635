//! CSV and SVG writers.

use std::fmt::Write as _;

/// 17 significant digits in scientific notation.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Target function; sets the vertical range of the plot.
    Reference,
    Approximant,
    /// Written to CSV only.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub role: Role,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub xs: Vec<f64>,
    pub series: Vec<Series>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for s in &self.series {
            out.push(',');
            out.push_str(&s.name);
        }
        out.push('\n');
        for (i, x) in self.xs.iter().enumerate() {
            out.push_str(&fmt17(*x));
            for s in &self.series {
                out.push(',');
                out.push_str(&fmt17(s.values[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        svg(self)
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 8] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];

/// Round tick spacing giving about `count` intervals.
fn tick_step(span: f64, count: f64) -> f64 {
    let raw = span / count;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(v: f64, step: f64) -> String {
    let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
    let digits = (-step.log10().floor()).max(0.0) as usize;
    if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.digits$}")
    }
}

fn y_range(t: &Table) -> (f64, f64) {
    let finite = |role: Role| -> Vec<f64> {
        t.series
            .iter()
            .filter(|s| s.role == role)
            .flat_map(|s| s.values.iter().copied())
            .filter(|v| v.is_finite())
            .collect()
    };
    let mut vals = finite(Role::Reference);
    if vals.is_empty() {
        vals = finite(Role::Approximant);
    }
    let (lo, hi) = vals.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = if hi > lo { 0.25 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

fn svg(t: &Table) -> String {
    let (ml, mr, mt, mb) = MARGIN;
    let (pw, ph) = (WIDTH - ml - mr, HEIGHT - mt - mb);
    let (x0, x1) = (t.xs[0], t.xs[t.xs.len() - 1]);
    let (y0, y1) = y_range(t);
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + (y1 - y) / (y1 - y0) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&t.title));
    let _ = writeln!(s, r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);

    for (lo, hi, vertical) in [(x0, x1, true), (y0, y1, false)] {
        let step = tick_step(hi - lo, 8.0);
        let mut k = (lo / step).ceil() as i64;
        while (k as f64) * step <= hi + step * 1e-9 {
            let v = k as f64 * step;
            if vertical {
                let px = sx(v);
                let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, mt + ph, mt + ph + 5.0);
                let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, mt + ph + 18.0, tick_label(v, step));
            } else {
                let py = sy(v);
                let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{ml}" y2="{py:.2}" stroke="black"/>"#, ml - 5.0);
                let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, ml - 8.0, py + 4.0, tick_label(v, step));
            }
            k += 1;
        }
    }
    if y0 < 0.0 && y1 > 0.0 {
        let py = sy(0.0);
        let _ = writeln!(s, r##"<line x1="{ml}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#bbbbbb"/>"##, ml + pw);
    }

    let _ = writeln!(s, r#"<clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath>"#);
    let plotted: Vec<&Series> = t.series.iter().filter(|s| s.role != Role::Error).collect();
    for (i, ser) in plotted.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if ser.role == Role::Approximant { r#" stroke-dasharray="6 3""# } else { "" };
        // break the line at non-finite values and far outside the frame
        let limit = 10.0 * (y1 - y0);
        let mut segment = String::new();
        let flush = |seg: &mut String, s: &mut String| {
            if seg.matches(' ').count() >= 2 {
                let _ = writeln!(s, r#"<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#, seg.trim_end());
            }
            seg.clear();
        };
        for (x, y) in t.xs.iter().zip(&ser.values) {
            if y.is_finite() && (y - 0.5 * (y0 + y1)).abs() <= limit {
                let _ = write!(segment, "{:.2},{:.2} ", sx(*x), sy(*y));
            } else {
                flush(&mut segment, &mut s);
            }
        }
        flush(&mut segment, &mut s);
        let ly = mt + 16.0 + 16.0 * i as f64;
        let lx = ml + pw - 150.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/>"#, lx + 24.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&ser.name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
