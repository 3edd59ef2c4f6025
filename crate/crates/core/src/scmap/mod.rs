//! Schwarz–Christoffel maps from the upper half-plane onto a
//! [`GeneralizedPolygon`] whose vertex at infinity has its prevertex at `∞`.
//!
//! With finite vertices `w_0..w_{m-1}`, prevertices `z_0 < … < z_{m-1}` and
//! exponents `β_k = α_k - 1`, the map is
//! `f(z) = A + C ∫_{z_0}^{z} Π_k (ζ - z_k)^{β_k} dζ`.

mod quad;
mod solve;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RuleCache;
use crate::region::{segments_intersect, GeneralizedPolygon};
use quad::{path_integral, PathStart};

pub use solve::ScOptions;

pub const DEFAULT_QUAD_ORDER: usize = 8;
pub const DEFAULT_SC_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Adjacent prevertices closer than this trigger a crowding warning.
pub const CROWDING_GAP: f64 = 1e-12;

/// Solved map data. Immutable once built; evaluation is safe from many threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "ScMapDocument", try_from = "ScMapDocument")]
pub struct SCMap {
    polygon: GeneralizedPolygon,
    vertices: Vec<Complex64>,
    prevertices: Vec<f64>,
    betas: Vec<f64>,
    affine_scale: Complex64,
    affine_shift: Complex64,
    quad_order: usize,
    tol: f64,
    accuracy: f64,
    iterations: usize,
    residual: f64,
    pin: usize,
    warnings: Vec<String>,
    rules: RuleCache,
}

/// Serialized form of an [`SCMap`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScMapDocument {
    pub polygon: GeneralizedPolygon,
    pub prevertices: Vec<f64>,
    pub angle_params: Vec<f64>,
    pub affine_scale: Complex64,
    pub affine_shift: Complex64,
    pub quad_order: usize,
    pub tol: f64,
    pub accuracy: f64,
    pub iterations: usize,
    pub residual: f64,
    pub pin: usize,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl From<SCMap> for ScMapDocument {
    fn from(m: SCMap) -> Self {
        let (angle_params, _) = m.polygon.finite_angles();
        ScMapDocument {
            polygon: m.polygon,
            prevertices: m.prevertices,
            angle_params,
            affine_scale: m.affine_scale,
            affine_shift: m.affine_shift,
            quad_order: m.quad_order,
            tol: m.tol,
            accuracy: m.accuracy,
            iterations: m.iterations,
            residual: m.residual,
            pin: m.pin,
            warnings: m.warnings,
        }
    }
}

impl TryFrom<ScMapDocument> for SCMap {
    type Error = Error;

    fn try_from(d: ScMapDocument) -> Result<Self> {
        let vertices = d.polygon.finite_vertices();
        let (alphas, _) = d.polygon.finite_angles();
        if d.prevertices.len() != vertices.len() || d.angle_params != alphas {
            return Err(Error::Polygon("map document does not match its polygon".into()));
        }
        if d.prevertices.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Polygon("prevertices must be strictly ascending".into()));
        }
        if d.quad_order == 0 {
            return Err(Error::Precondition("quadrature order must be positive".into()));
        }
        Ok(SCMap {
            betas: alphas.iter().map(|a| a - 1.0).collect(),
            polygon: d.polygon,
            vertices,
            prevertices: d.prevertices,
            affine_scale: d.affine_scale,
            affine_shift: d.affine_shift,
            quad_order: d.quad_order,
            tol: d.tol,
            accuracy: d.accuracy,
            iterations: d.iterations,
            residual: d.residual,
            pin: d.pin,
            warnings: d.warnings,
            rules: RuleCache::new(d.quad_order),
        })
    }
}

/// Solves the parameter problem with default pinning and iteration cap.
pub fn solve_parameters(polygon: &GeneralizedPolygon, quad_order: usize, tol: f64) -> Result<SCMap> {
    SCMap::solve(polygon, &ScOptions { quad_order, tol, ..ScOptions::default() })
}

pub fn sc_forward(map: &SCMap, z: Complex64) -> Result<Complex64> {
    map.forward(z)
}

pub fn sc_inverse(map: &SCMap, w: Complex64, tol: f64) -> Result<Complex64> {
    map.inverse(w, tol)
}

impl SCMap {
    pub fn solve(polygon: &GeneralizedPolygon, opts: &ScOptions) -> Result<SCMap> {
        solve::solve(polygon, opts)
    }

    pub fn polygon(&self) -> &GeneralizedPolygon {
        &self.polygon
    }

    pub fn prevertices(&self) -> &[f64] {
        &self.prevertices
    }

    /// Angle parameters of the finite vertices, in prevertex order.
    pub fn angle_params(&self) -> Vec<f64> {
        self.betas.iter().map(|b| b + 1.0).collect()
    }

    pub fn affine_scale(&self) -> Complex64 {
        self.affine_scale
    }

    pub fn affine_shift(&self) -> Complex64 {
        self.affine_shift
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    /// Largest distance between a finite vertex and the image of its prevertex.
    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Max-norm of the side-length residual vector at the solution.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Index `p` of the pinned prevertex pair `z_p = -1`, `z_{p+1} = 0`.
    pub fn pin(&self) -> usize {
        self.pin
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Images of the finite prevertices, integrated side by side along the real axis.
    pub fn vertex_images(&self) -> Vec<Complex64> {
        solve::vertex_images(&self.prevertices, &self.betas, self.affine_scale, self.affine_shift, &self.rules)
    }

    /// `f'(z)`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.affine_scale * quad::integrand(z, &self.prevertices, &self.betas, None)
    }

    /// `f(z)` for `z` in the closed upper half-plane, integrating from the
    /// nearest prevertex along a straight segment.
    pub fn forward(&self, z: Complex64) -> Result<Complex64> {
        let k = self.nearest_prevertex(check_upper(z)?);
        Ok(self.forward_from(k, z))
    }

    /// `f(z)` integrated from prevertex `k`.
    pub fn forward_from_prevertex(&self, k: usize, z: Complex64) -> Result<Complex64> {
        if k >= self.prevertices.len() {
            return Err(Error::Precondition(format!("no prevertex with index {k}")));
        }
        Ok(self.forward_from(k, check_upper(z)?))
    }

    /// `f(z)` along the two-leg path prevertex → `via` → `z`.
    pub fn forward_via(&self, z: Complex64, via: Complex64) -> Result<Complex64> {
        let base = self.forward(via)?;
        check_upper(z)?;
        Ok(base
            + self.affine_scale * path_integral(PathStart::Point(via), z, &self.prevertices, &self.betas, &self.rules))
    }

    fn forward_from(&self, k: usize, z: Complex64) -> Complex64 {
        if z.im == 0.0 && z.re == self.prevertices[k] {
            return self.vertices[k];
        }
        self.vertices[k]
            + self.affine_scale * path_integral(PathStart::Prevertex(k), z, &self.prevertices, &self.betas, &self.rules)
    }

    fn nearest_prevertex(&self, z: Complex64) -> usize {
        let mut best = (0, f64::INFINITY);
        for (k, &zk) in self.prevertices.iter().enumerate() {
            let d = (z - zk).norm_sqr();
            if d < best.1 {
                best = (k, d);
            }
        }
        best.0
    }

    /// Solves `f(z) = w` for `z` in the upper half-plane: integrate
    /// `dz/dw = 1/f'(z)` from an interior anchor, then Newton-polish.
    pub fn inverse(&self, w: Complex64, tol: f64) -> Result<Complex64> {
        if !(w.re.is_finite() && w.im.is_finite()) || !(tol > 0.0) {
            return Err(Error::Precondition("inverse needs a finite target and a positive tolerance".into()));
        }
        if !self.is_interior(w) {
            return Err(Error::Inversion {
                w_re: w.re,
                w_im: w.im,
                reason: "target is not interior to the polygon".into(),
            });
        }
        let (lo, hi) = (self.prevertices[0], *self.prevertices.last().expect("nonempty"));
        let centre = 0.5 * (lo + hi);
        let mut height = (hi - lo).max(1.0);
        let mut last_reason = String::from("no admissible anchor");
        for _ in 0..8 {
            let za = Complex64::new(centre, height);
            let wa = self.forward_from(self.nearest_prevertex(za), za);
            let corner = Complex64::new(w.re, wa.im);
            if !(self.segment_inside(wa, corner) && self.segment_inside(corner, w)) {
                height *= 4.0;
                continue;
            }
            for steps in [24usize, 96, 384] {
                let z1 = self.continue_along(za, wa, corner, steps);
                let z2 = self.continue_along(z1, corner, w, steps);
                match self.polish(z2, w, tol) {
                    Ok(z) => return Ok(z),
                    Err(reason) => last_reason = reason,
                }
            }
            height *= 4.0;
        }
        Err(Error::Inversion { w_re: w.re, w_im: w.im, reason: last_reason })
    }

    /// RK4 on `dz/dτ = (w1 - w0)/f'(z)` for τ ∈ [0, 1].
    fn continue_along(&self, z0: Complex64, w0: Complex64, w1: Complex64, steps: usize) -> Complex64 {
        let dw = w1 - w0;
        if dw.norm() == 0.0 {
            return z0;
        }
        let h = 1.0 / steps as f64;
        let rhs = |z: Complex64| {
            let z = if z.im > 0.0 { z } else { Complex64::new(z.re, 1e-300) };
            dw / self.derivative(z)
        };
        let mut z = z0;
        for _ in 0..steps {
            let k1 = rhs(z);
            let k2 = rhs(z + k1 * (0.5 * h));
            let k3 = rhs(z + k2 * (0.5 * h));
            let k4 = rhs(z + k3 * h);
            z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            if z.im <= 0.0 {
                z.im = f64::MIN_POSITIVE.sqrt();
            }
        }
        z
    }

    fn polish(&self, z0: Complex64, w: Complex64, tol: f64) -> std::result::Result<Complex64, String> {
        let mut z = z0;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err("continuation left the half-plane".into());
        }
        if z.im <= 0.0 {
            z.im = 1e-12 * (1.0 + z.re.abs());
        }
        let mut err = (self.forward_from(self.nearest_prevertex(z), z) - w).norm();
        for _ in 0..60 {
            if err < tol {
                return Ok(z);
            }
            let fz = self.forward_from(self.nearest_prevertex(z), z);
            let step = (fz - w) / self.derivative(z);
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = z - step * lambda;
                if cand.im > 0.0 && cand.re.is_finite() {
                    let e = (self.forward_from(self.nearest_prevertex(cand), cand) - w).norm();
                    if e < err {
                        z = cand;
                        err = e;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if err < tol {
            Ok(z)
        } else {
            Err(format!("Newton stalled at residual {err:.3e}"))
        }
    }

    /// Finite boundary edges with both rays truncated far away.
    fn boundary_edges(&self) -> Vec<(Complex64, Complex64)> {
        let w = &self.vertices;
        let m = w.len();
        let (d_in, d_out) = self.polygon.ray_directions();
        let extent = w.iter().map(|p| p.norm()).fold(1.0, f64::max) * 1e6;
        let mut edges = Vec::with_capacity(m + 1);
        edges.push((w[0] - d_in * extent, w[0]));
        for k in 0..m - 1 {
            edges.push((w[k], w[k + 1]));
        }
        edges.push((w[m - 1], w[m - 1] + d_out * extent));
        edges
    }

    fn segment_inside(&self, a: Complex64, b: Complex64) -> bool {
        if a == b {
            return true;
        }
        !self.boundary_edges().iter().any(|&(p, q)| segments_intersect(a, b, p, q))
    }

    /// Interior test by winding: rays are closed by a large arc through the
    /// side of the plane the interior faces at infinity.
    pub fn is_interior(&self, w: Complex64) -> bool {
        let edges = self.boundary_edges();
        if edges.iter().any(|&(p, q)| quad::point_segment_distance(w, p, q) == 0.0) {
            return false;
        }
        // Close the boundary with a polyline far away that turns left.
        let start = edges.last().expect("edges").1;
        let end = edges[0].0;
        let r = start.norm().max(end.norm());
        let mut pts: Vec<Complex64> = Vec::new();
        pts.push(edges[0].0);
        for &(_, q) in &edges {
            pts.push(q);
        }
        let a0 = start.arg();
        let mut a1 = end.arg();
        while a1 <= a0 {
            a1 += 2.0 * std::f64::consts::PI;
        }
        for i in 1..64 {
            let t = a0 + (a1 - a0) * i as f64 / 64.0;
            pts.push(Complex64::from_polar(r, t));
        }
        let mut winding = 0.0;
        for i in 0..pts.len() {
            let p = pts[i] - w;
            let q = pts[(i + 1) % pts.len()] - w;
            winding += (q / p).arg();
        }
        winding > std::f64::consts::PI
    }
}

fn check_upper(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Precondition("evaluation at the prevertex at infinity".into()));
    }
    if z.im < 0.0 {
        return Err(Error::Precondition(format!("point {z} lies below the real axis")));
    }
    Ok(z)
}
