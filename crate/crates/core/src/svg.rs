//! Minimal SVG overlay plots: histogram bars, a density step function, and axis ticks.
//!
//! Coordinate mapping: the canvas is `WIDTH × HEIGHT` user units with a `MARGIN` border;
//! data `x ∈ [x_min, x_max]` maps linearly onto `[MARGIN, WIDTH − MARGIN]` and
//! `y ∈ [0, y_max]` onto `[HEIGHT − MARGIN, MARGIN]`. Coordinates are printed with
//! three decimals, so output is byte-stable for equal inputs.

use std::fmt::Write;

use crate::density::CrystalDensity;
use crate::sampler::Bin;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;
pub const MARGIN: f64 = 50.0;

const BAR_FILL: &str = "#4a7ebb";
const CURVE_STROKE: &str = "#2e9e44";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Viewport {
    pub fn map_x(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    pub fn map_y(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - y / self.y_max * (HEIGHT - 2.0 * MARGIN)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Overlay<'a> {
    pub title: String,
    /// Embedded verbatim (after escaping) as an XML comment.
    pub comment: Option<String>,
    pub density: Option<&'a CrystalDensity>,
    /// Histogram bars, drawn normalized to unit area.
    pub bins: &'a [Bin],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Overlay<'_> {
    fn bar_total(&self) -> f64 {
        self.bins.iter().map(|b| b.count as f64).sum()
    }

    fn bar_height(&self, b: &Bin, total: f64) -> f64 {
        b.count as f64 / (total * (b.right - b.left))
    }

    /// Data window covering every bar and density interval, with a small pad.
    pub fn viewport(&self) -> Viewport {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_max: f64 = 0.0;
        if let Some(d) = self.density {
            for &[a, b] in d.intervals() {
                x_min = x_min.min(a);
                x_max = x_max.max(b);
            }
            if !d.intervals().is_empty() {
                y_max = y_max.max(d.height());
            }
        }
        let total = self.bar_total();
        for b in self.bins {
            x_min = x_min.min(b.left);
            x_max = x_max.max(b.right);
            y_max = y_max.max(self.bar_height(b, total));
        }
        if !x_min.is_finite() {
            (x_min, x_max) = (0.0, 1.0);
        }
        if x_max - x_min < 1e-9 {
            x_max = x_min + 1.0;
        }
        let pad = 0.05 * (x_max - x_min);
        if y_max <= 0.0 {
            y_max = 1.0;
        }
        Viewport { x_min: x_min - pad, x_max: x_max + pad, y_max: 1.1 * y_max }
    }

    pub fn render(&self) -> String {
        let vp = self.viewport();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        if let Some(c) = &self.comment {
            let _ = writeln!(s, "<!-- {} -->", c.replace("--", "- -"));
        }
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(&self.title)
        );

        let total = self.bar_total();
        if total > 0.0 {
            let _ = writeln!(s, r#"<g fill="{BAR_FILL}" fill-opacity="0.6">"#);
            for b in self.bins {
                let (x0, x1) = (vp.map_x(b.left), vp.map_x(b.right));
                let y = vp.map_y(self.bar_height(b, total));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}"/>"#,
                    x1 - x0,
                    vp.map_y(0.0) - y
                );
            }
            let _ = writeln!(s, "</g>");
        }

        if let Some(d) = self.density {
            let base = vp.map_y(0.0);
            let top = vp.map_y(d.height());
            let mut path = format!("M{:.3},{base:.3}", vp.map_x(vp.x_min));
            for &[a, b] in d.intervals() {
                let (xa, xb) = (vp.map_x(a), vp.map_x(b));
                let _ = write!(path, " L{xa:.3},{base:.3} L{xa:.3},{top:.3} L{xb:.3},{top:.3} L{xb:.3},{base:.3}");
            }
            let _ = write!(path, " L{:.3},{base:.3}", vp.map_x(vp.x_max));
            let _ = writeln!(
                s,
                r#"<path d="{path}" fill="none" stroke="{CURVE_STROKE}" stroke-width="1.5"/>"#
            );
        }

        self.axes(&mut s, &vp);
        s.push_str("</svg>\n");
        s
    }

    fn axes(&self, s: &mut String, vp: &Viewport) {
        let (x0, x1) = (MARGIN, WIDTH - MARGIN);
        let (y0, y1) = (HEIGHT - MARGIN, MARGIN);
        let _ = writeln!(s, r#"<g stroke="black" stroke-width="1" font-size="11">"#);
        let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}"/>"#);
        let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x0:.3}" y2="{y1:.3}"/>"#);
        let step = tick_step(vp.x_max - vp.x_min);
        let mut t = (vp.x_min / step).ceil() * step;
        while t <= vp.x_max {
            let x = vp.map_x(t);
            let _ = writeln!(s, r#"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{:.3}"/>"#, y0 + 5.0);
            let _ = writeln!(
                s,
                r#"<text x="{x:.3}" y="{:.3}" stroke="none" text-anchor="middle">{}</text>"#,
                y0 + 18.0,
                tick_label(t, step)
            );
            t += step;
        }
        let ystep = tick_step(vp.y_max);
        let mut t = 0.0;
        while t <= vp.y_max {
            let y = vp.map_y(t);
            let _ = writeln!(s, r#"<line x1="{:.3}" y1="{y:.3}" x2="{x0:.3}" y2="{y:.3}"/>"#, x0 - 5.0);
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{:.3}" stroke="none" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                y + 4.0,
                tick_label(t, ystep)
            );
            t += ystep;
        }
        let _ = writeln!(s, "</g>");
    }
}

/// A 1-2-5 step giving at most about ten ticks over `span`.
fn tick_step(span: f64) -> f64 {
    let raw = span / 10.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

fn tick_label(t: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let v = if t.abs() < step * 1e-9 { 0.0 } else { t };
    format!("{v:.decimals$}")
}
