use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::step::StepFunction;
use crate::error::{Error, Result};

/// A polygon vertex; exactly one vertex of a [`GeneralizedPolygon`] is at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vertex {
    Finite(Complex64),
    Infinite,
}

/// Polygon with one vertex at infinity, listed so that the interior lies to
/// the left of the boundary.
///
/// `angle_params[k]` is the interior angle at vertex `k` divided by `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolygonDocument", try_from = "PolygonDocument")]
pub struct GeneralizedPolygon {
    vertices: Vec<Vertex>,
    angle_params: Vec<f64>,
}

/// Plain serialized form: finite coordinates, the position of the vertex at
/// infinity in the full list, and all angle parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub finite_vertices: Vec<[f64; 2]>,
    pub infinite_index: usize,
    pub angle_params: Vec<f64>,
}

impl From<GeneralizedPolygon> for PolygonDocument {
    fn from(p: GeneralizedPolygon) -> Self {
        PolygonDocument {
            finite_vertices: p.finite_vertices().iter().map(|w| [w.re, w.im]).collect(),
            infinite_index: p.infinite_index(),
            angle_params: p.angle_params,
        }
    }
}

impl TryFrom<PolygonDocument> for GeneralizedPolygon {
    type Error = Error;

    fn try_from(doc: PolygonDocument) -> Result<Self> {
        let mut vertices: Vec<Vertex> = doc
            .finite_vertices
            .iter()
            .map(|p| Vertex::Finite(Complex64::new(p[0], p[1])))
            .collect();
        if doc.infinite_index > vertices.len() {
            return Err(Error::Polygon("infinite vertex index out of range".into()));
        }
        vertices.insert(doc.infinite_index, Vertex::Infinite);
        GeneralizedPolygon::new(vertices, doc.angle_params)
    }
}

const ANGLE_SUM_TOL: f64 = 1e-9;

impl GeneralizedPolygon {
    /// Validates the angle sum, the finite/infinite angle ranges, the
    /// local turning at interior finite vertices, and simplicity.
    pub fn new(vertices: Vec<Vertex>, angle_params: Vec<f64>) -> Result<Self> {
        if vertices.len() != angle_params.len() {
            return Err(Error::Polygon("one angle parameter per vertex required".into()));
        }
        let n_inf = vertices.iter().filter(|v| matches!(v, Vertex::Infinite)).count();
        if n_inf != 1 {
            return Err(Error::Polygon(format!("expected one vertex at infinity, found {n_inf}")));
        }
        if vertices.len() < 2 {
            return Err(Error::Polygon("need at least one finite vertex".into()));
        }
        let n = vertices.len() as f64;
        let sum: f64 = angle_params.iter().sum();
        if (sum - (n - 2.0)).abs() > ANGLE_SUM_TOL {
            return Err(Error::Polygon(format!("angle sum {sum} differs from n - 2 = {}", n - 2.0)));
        }
        for (v, &a) in vertices.iter().zip(&angle_params) {
            let ok = match v {
                Vertex::Finite(w) => a > 0.0 && a <= 2.0 && w.re.is_finite() && w.im.is_finite(),
                Vertex::Infinite => (-2.0..=0.0).contains(&a),
            };
            if !ok {
                return Err(Error::Polygon(format!("angle parameter {a} out of range")));
            }
        }
        let p = GeneralizedPolygon { vertices, angle_params };
        p.check_turning()?;
        p.check_simple()?;
        Ok(p)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn angle_params(&self) -> &[f64] {
        &self.angle_params
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn infinite_index(&self) -> usize {
        self.vertices
            .iter()
            .position(|v| matches!(v, Vertex::Infinite))
            .expect("validated")
    }

    /// Finite vertices in boundary order starting right after the vertex at infinity.
    pub fn finite_vertices(&self) -> Vec<Complex64> {
        self.rotated().0
    }

    /// Angle parameters of the finite vertices in the order of [`Self::finite_vertices`],
    /// followed by the angle parameter at infinity.
    pub fn finite_angles(&self) -> (Vec<f64>, f64) {
        let (_, a, inf) = self.rotated();
        (a, inf)
    }

    fn rotated(&self) -> (Vec<Complex64>, Vec<f64>, f64) {
        let n = self.vertices.len();
        let i = self.infinite_index();
        let mut w = Vec::with_capacity(n - 1);
        let mut a = Vec::with_capacity(n - 1);
        for k in 1..n {
            let j = (i + k) % n;
            if let Vertex::Finite(p) = self.vertices[j] {
                w.push(p);
                a.push(self.angle_params[j]);
            }
        }
        (w, a, self.angle_params[i])
    }

    /// Unit directions of the ray arriving at the first finite vertex and the
    /// ray leaving the last one. With a single finite vertex the outgoing ray
    /// points along `+x`.
    pub fn ray_directions(&self) -> (Complex64, Complex64) {
        let (w, a, _) = self.rotated();
        let m = w.len();
        let turn = |alpha: f64| Complex64::from_polar(1.0, std::f64::consts::PI * (1.0 - alpha));
        if m == 1 {
            let out = Complex64::new(1.0, 0.0);
            return (out / turn(a[0]), out);
        }
        let first = (w[1] - w[0]) / (w[1] - w[0]).norm();
        let last = (w[m - 1] - w[m - 2]) / (w[m - 1] - w[m - 2]).norm();
        (first / turn(a[0]), last * turn(a[m - 1]))
    }

    /// Finite side lengths `|w_{k+1} - w_k|`.
    pub fn side_lengths(&self) -> Vec<f64> {
        self.finite_vertices().windows(2).map(|p| (p[1] - p[0]).norm()).collect()
    }

    fn check_turning(&self) -> Result<()> {
        let (w, a, _) = self.rotated();
        for k in 1..w.len().saturating_sub(1) {
            let d0 = w[k] - w[k - 1];
            let d1 = w[k + 1] - w[k];
            if d0.norm() == 0.0 || d1.norm() == 0.0 {
                return Err(Error::Polygon(format!("zero-length side at vertex {k}")));
            }
            let turn = (d1 / d0).arg() / std::f64::consts::PI;
            let expected = 1.0 - a[k];
            // A half turn is ambiguous (a cusp) and is accepted either way.
            let diff = (turn - expected).rem_euclid(2.0);
            let diff = diff.min(2.0 - diff);
            if diff > 1e-9 {
                return Err(Error::Polygon(format!(
                    "angle parameter {} at vertex {k} does not match the geometry (turn {turn})",
                    a[k]
                )));
            }
        }
        Ok(())
    }

    /// Brute force over all pairs of non-adjacent edges, including the two rays.
    fn check_simple(&self) -> Result<()> {
        let (w, _, _) = self.rotated();
        let m = w.len();
        let (d_in, d_out) = self.ray_directions();
        // Rays are truncated far beyond the finite extent.
        let extent = w.iter().map(|p| p.norm()).fold(1.0, f64::max) * 1e3;
        let mut edges: Vec<(Complex64, Complex64)> = Vec::with_capacity(m + 1);
        edges.push((w[0] - d_in * extent, w[0]));
        for k in 0..m.saturating_sub(1) {
            edges.push((w[k], w[k + 1]));
        }
        edges.push((w[m - 1], w[m - 1] + d_out * extent));
        let e = edges.len();
        for i in 0..e {
            for j in (i + 2)..e {
                if i == 0 && j == e - 1 {
                    // The two rays meet only at infinity.
                    continue;
                }
                if segments_intersect(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                    return Err(Error::Polygon(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).re * (c - a).im - (b - a).im * (c - a).re
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// Closed segment intersection test.
pub fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Boundary of `{y > -s(x)}`: along the real axis to `(-a, 0)`, down the
/// staircase graph of `-s`, back up at `x = a`, and out along the real axis
/// to the vertex at infinity. Corners turning left get `α = 1/2`, right
/// turns `α = 3/2`; the vertex at infinity takes `α = -1`.
pub fn polygon_from_step(step: &StepFunction) -> Result<GeneralizedPolygon> {
    let bp = &step.breakpoints;
    let vals = &step.values;
    let mut pts: Vec<Complex64> = Vec::with_capacity(2 * vals.len() + 2);
    pts.push(Complex64::new(bp[0], 0.0));
    for (j, &v) in vals.iter().enumerate() {
        pts.push(Complex64::new(bp[j], -v));
        pts.push(Complex64::new(bp[j + 1], -v));
    }
    pts.push(Complex64::new(bp[bp.len() - 1], 0.0));
    // Drop zero-length sides (equal neighbouring values survive only below the merge tolerance).
    pts.dedup_by(|b, a| (*b - *a).norm() == 0.0);

    let m = pts.len();
    let mut angles = Vec::with_capacity(m + 1);
    for k in 0..m {
        let d_in = if k == 0 { Complex64::new(1.0, 0.0) } else { pts[k] - pts[k - 1] };
        let d_out = if k + 1 == m { Complex64::new(1.0, 0.0) } else { pts[k + 1] - pts[k] };
        let turn = (d_out / d_in).arg();
        angles.push(if turn > 1e-12 {
            0.5
        } else if turn < -1e-12 {
            1.5
        } else {
            1.0
        });
    }
    let inf_angle = m as f64 + 1.0 - 2.0 - angles.iter().sum::<f64>();
    let mut vertices: Vec<Vertex> = pts.into_iter().map(Vertex::Finite).collect();
    vertices.push(Vertex::Infinite);
    angles.push(inf_angle);
    GeneralizedPolygon::new(vertices, angles)
}
