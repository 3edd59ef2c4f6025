//! Plain SVG output for the G-curve, the staircase polygon and curve traces.

use std::fmt::Write;

use super::GCurve;
use crate::geodesiclab::hyperboloid::{distance, origin};
use crate::geodesiclab::PiecewiseGeodesic;
use crate::region::{GeneralizedPolygon, StepFunction};
use crate::Complex64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 40.0;

/// Affine map from a data window to the SVG canvas (y pointing up).
struct Canvas {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    body: String,
}

impl Canvas {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Canvas { x0, x1, y0, y1, body: String::new() }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let u = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN);
        let v = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN);
        (u, v)
    }

    fn polyline(&mut self, pts: &[(f64, f64)], colour: &str) {
        let mut d = String::new();
        for &(x, y) in pts {
            let (u, v) = self.px(x, y);
            let _ = write!(d, "{u:.2},{v:.2} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            d.trim_end()
        );
    }

    fn dot(&mut self, x: f64, y: f64, colour: &str) {
        let (u, v) = self.px(x, y);
        let _ = writeln!(self.body, r#"<circle cx="{u:.2}" cy="{v:.2}" r="3" fill="{colour}"/>"#);
    }

    fn label(&mut self, x: f64, y: f64, text: &str) {
        let (u, v) = self.px(x, y);
        let _ = writeln!(self.body, r#"<text x="{u:.2}" y="{v:.2}" font-size="12" font-family="sans-serif">{text}</text>"#);
    }

    fn axes(&mut self) {
        let (x0, x1, y0, y1) = (self.x0, self.x1, self.y0, self.y1);
        if y0 <= 0.0 && y1 >= 0.0 {
            self.polyline(&[(x0, 0.0), (x1, 0.0)], "#999");
        }
        if x0 <= 0.0 && x1 >= 0.0 {
            self.polyline(&[(0.0, y0), (0.0, y1)], "#999");
        }
        self.label(x0, y0, &format!("{x0:.2}"));
        self.label(x1, y0, &format!("{x1:.2}"));
        self.label(x0, y1, &format!("{y1:.2}"));
    }

    fn finish(self, title: &str) -> String {
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
                "\n<title>{t}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{b}</svg>\n"
            ),
            w = WIDTH,
            h = HEIGHT,
            t = title,
            b = self.body
        )
    }
}

/// `G(L)` (black) under the horocycle value `2 asin(tanh(L/2))` (red).
pub fn gcurve_svg(curve: &GCurve) -> String {
    let x1 = curve.rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let y1 = curve.rows.iter().map(|r| r.2.max(r.1)).fold(0.0, f64::max) * 1.05;
    let mut c = Canvas::new(0.0, x1.max(1e-9), 0.0, y1.max(1e-9));
    c.axes();
    let g: Vec<(f64, f64)> = curve.rows.iter().map(|r| (r.0, r.1)).collect();
    let h: Vec<(f64, f64)> = curve.rows.iter().map(|r| (r.0, r.2)).collect();
    c.polyline(&h, "#c0392b");
    c.polyline(&g, "black");
    c.label(0.05 * x1, 0.95 * y1, "G(L) and 2 asin(tanh(L/2))");
    c.finish("G(L)")
}

/// The staircase boundary, clipped to `|x| ≤ x_view`, with marked points.
pub fn polygon_svg(polygon: &GeneralizedPolygon, step: &StepFunction, marked: &[Complex64], x_view: f64) -> String {
    let depth = step.values.iter().copied().fold(0.0, f64::max);
    let top = marked.iter().map(|m| m.im).fold(1.0, f64::max);
    let mut c = Canvas::new(-x_view, x_view, -1.2 * depth, 1.1 * top);
    c.axes();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    pts.push((-x_view, 0.0));
    for w in polygon.finite_vertices() {
        if w.re.abs() <= x_view {
            pts.push((w.re, w.im));
        }
    }
    pts.push((x_view, 0.0));
    c.polyline(&pts, "black");
    for m in marked {
        c.dot(m.re, m.im, "#2c7fb8");
    }
    c.finish("staircase region")
}

/// Columns `t, s(t), x0, x1, x2, x3` at `n + 1` equally spaced times.
pub fn trajectory_table(gamma: &PiecewiseGeodesic, n: usize) -> String {
    let n = n.max(1);
    let times: Vec<f64> = (0..=n).map(|i| gamma.length * (i as f64 / n as f64)).collect();
    let pts = gamma.trace_many(&times);
    let mut out = String::from("# t\ts\tx0\tx1\tx2\tx3\n");
    for (t, p) in times.iter().zip(&pts) {
        let s = distance(&origin(), p);
        let _ = writeln!(out, "{t:.9}\t{s:.12}\t{:.12}\t{:.12}\t{:.12}\t{:.12}", p[0], p[1], p[2], p[3]);
    }
    out
}

/// Poincaré-disk projection of the first two spatial coordinates.
pub fn trajectory_svg(gamma: &PiecewiseGeodesic, n: usize) -> String {
    let n = n.max(1);
    let times: Vec<f64> = (0..=n).map(|i| gamma.length * (i as f64 / n as f64)).collect();
    let pts: Vec<(f64, f64)> = gamma
        .trace_many(&times)
        .iter()
        .map(|p| (p[1] / (1.0 + p[0]), p[2] / (1.0 + p[0])))
        .collect();
    let mut c = Canvas::new(-1.0, 1.0, -1.0, 1.0);
    let circle: Vec<(f64, f64)> = (0..=256)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / 256.0;
            (a.cos(), a.sin())
        })
        .collect();
    c.polyline(&circle, "#999");
    c.polyline(&pts, "black");
    c.dot(0.0, 0.0, "#2c7fb8");
    c.finish("piecewise geodesic")
}
