//! End-to-end computation of the distance bound `H(L)` and the dilatation
//! bound `K(L) = e^{H(L)}`, the scan over `L`, and the reference tables.

mod documents;
mod figures;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bendbounds::{c1, c1_domain_max};
use crate::error::{Error, Result};
use crate::hypmetric::{domain_distance, halfplane_distance, halfstrip_distance, halfstrip_parameters, DistanceCertificate};
use crate::numerics::golden_section;
use crate::region::{build_step, default_half_width, polygon_from_step, GeneralizedPolygon, StepFunction, DEFAULT_TAIL_THRESHOLD};
use crate::scmap::{solve_parameters, SCMap, DEFAULT_SC_TOL};
use crate::specialfn::g_func;
use crate::Complex64;

pub use documents::{Provenance, RunDocument};
pub use figures::{gcurve_svg, polygon_svg, trajectory_svg, trajectory_table};

pub const DEFAULT_SAMPLES: usize = crate::region::DEFAULT_SAMPLES_PER_BRANCH;
pub const DEFAULT_QUAD: usize = crate::scmap::DEFAULT_QUAD_ORDER;
/// Tolerance on `|f(z) - w|` when inverting the map at the marked points.
pub const INVERSE_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub half_width: f64,
    pub interval_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct BoundResult {
    pub L: f64,
    pub G_value: f64,
    pub c1_value: f64,
    pub samples_per_branch: usize,
    pub quad_order: usize,
    pub sc_tol: f64,
    pub step_stats: StepStats,
    pub polygon_vertices: usize,
    pub sc_accuracy: f64,
    pub sc_iterations: usize,
    pub H: f64,
    pub K: f64,
    pub certificate: DistanceCertificate,
    pub warnings: Vec<String>,
}

/// Intermediate objects of one run, kept for figures and caching.
#[derive(Debug, Clone)]
pub struct BoundArtifacts {
    pub result: BoundResult,
    pub step: StepFunction,
    pub polygon: GeneralizedPolygon,
    pub map: SCMap,
}

fn check_l(l: f64) -> Result<()> {
    if !(l > 0.0 && l < c1_domain_max()) {
        return Err(Error::Precondition(format!("L = {l} must lie in (0, 2 asinh 1)")));
    }
    Ok(())
}

pub fn compute_bound(l: f64, samples_per_branch: usize, quad_order: usize) -> Result<BoundResult> {
    Ok(compute_bound_artifacts(l, samples_per_branch, quad_order)?.result)
}

/// Step function, polygon, conformal map and the distance between `0` and
/// `i·c₁(L)`, with the half-plane and half-strip comparison distances.
pub fn compute_bound_artifacts(l: f64, samples_per_branch: usize, quad_order: usize) -> Result<BoundArtifacts> {
    check_l(l)?;
    if samples_per_branch == 0 || quad_order == 0 {
        return Err(Error::Precondition("sample count and quadrature order must be positive".into()));
    }
    let g_value = g_func(l).map_err(|e| e.at("tangent problem"))?;
    let c1_value = c1(l).map_err(|e| e.at("roundness bound"))?;
    let half_width = default_half_width(l, DEFAULT_TAIL_THRESHOLD).map_err(|e| e.at("half width"))?;
    let step = build_step(l, half_width, samples_per_branch).map_err(|e| e.at("step function"))?;
    let polygon = polygon_from_step(&step).map_err(|e| e.at("polygon"))?;
    log::info!("L = {l}: {} step intervals, {} polygon vertices", step.interval_count(), polygon.len());
    let map = solve_parameters(&polygon, quad_order, DEFAULT_SC_TOL).map_err(|e| e.at("conformal map"))?;
    log::info!("L = {l}: map solved in {} iterations, accuracy {:.2e}", map.iterations(), map.accuracy());

    let p = Complex64::new(0.0, 0.0);
    let q = Complex64::new(0.0, c1_value);
    let h = domain_distance(&map, p, q, INVERSE_TOL).map_err(|e| e.at("domain distance"))?;
    let lower = halfplane_distance(g_value, p, q).map_err(|e| e.at("half-plane bound"))?;
    let (a0, q0) = halfstrip_parameters(&step).map_err(|e| e.at("half-strip bound"))?;
    let upper = halfstrip_distance(a0, q0, p, q).map_err(|e| e.at("half-strip bound"))?;
    let certificate = DistanceCertificate { value: h, lower_bound: lower, upper_bound: upper, map_accuracy: map.accuracy() };
    if !certificate.holds() {
        return Err(Error::Certificate(format!(
            "distance {h} is not within [{lower}, {upper}] (map accuracy {:e})",
            map.accuracy()
        )));
    }
    log::info!("L = {l}: H = {h}, K = {}", h.exp());
    let result = BoundResult {
        L: l,
        G_value: g_value,
        c1_value,
        samples_per_branch,
        quad_order,
        sc_tol: DEFAULT_SC_TOL,
        step_stats: StepStats { half_width, interval_count: step.interval_count() },
        polygon_vertices: polygon.len(),
        sc_accuracy: map.accuracy(),
        sc_iterations: map.iterations(),
        H: h,
        K: h.exp(),
        certificate,
        warnings: map.warnings().to_vec(),
    };
    Ok(BoundArtifacts { result, step, polygon, map })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Optimum {
    pub l_best: f64,
    pub result: BoundResult,
    /// `(L, K(L))` at the coarse scan points.
    pub scan: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Coarse scan of `K(L)` at `coarse_steps` equally spaced points of
/// `[l_min, l_max]`, then golden-section refinement between the neighbours of
/// the best scan point.
pub fn optimize_l(l_min: f64, l_max: f64, coarse_steps: usize, tol: f64) -> Result<Optimum> {
    optimize_l_with(l_min, l_max, coarse_steps, tol, DEFAULT_SAMPLES, DEFAULT_QUAD)
}

pub fn optimize_l_with(
    l_min: f64,
    l_max: f64,
    coarse_steps: usize,
    tol: f64,
    samples_per_branch: usize,
    quad_order: usize,
) -> Result<Optimum> {
    check_l(l_min)?;
    if !(l_min < l_max) || coarse_steps < 3 || !(tol > 0.0) {
        return Err(Error::Precondition("need l_min < l_max, at least 3 scan points and tol > 0".into()));
    }
    let mut warnings = Vec::new();
    let full: Vec<f64> = (0..coarse_steps)
        .map(|i| l_min + (l_max - l_min) * i as f64 / (coarse_steps - 1) as f64)
        .collect();
    // c₁ is only defined below 2 asinh 1; later scan points are dropped.
    let grid: Vec<f64> = full.iter().copied().filter(|&l| check_l(l).is_ok()).collect();
    if grid.len() < full.len() {
        warnings.push(format!(
            "dropped {} scan points at or above 2 asinh 1 = {:.6}",
            full.len() - grid.len(),
            c1_domain_max()
        ));
    }
    if grid.len() < 3 {
        return Err(Error::Precondition("fewer than 3 admissible scan points".into()));
    }
    let results = scan(&grid, samples_per_branch, quad_order)?;
    let scan_k: Vec<(f64, f64)> = grid.iter().zip(&results).map(|(&l, r)| (l, r.K)).collect();

    let interior_minima = (1..scan_k.len() - 1)
        .filter(|&i| scan_k[i].1 < scan_k[i - 1].1 && scan_k[i].1 < scan_k[i + 1].1)
        .count();
    if interior_minima > 1 {
        warnings.push(format!("scan of K(L) is not unimodal ({interior_minima} local minima)"));
    }
    let best = (0..scan_k.len())
        .min_by(|&a, &b| scan_k[a].1.total_cmp(&scan_k[b].1))
        .expect("nonempty scan");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];

    let mut failure = None;
    let mut evaluated: Vec<BoundResult> = Vec::new();
    let min = golden_section(
        |l| match compute_bound(l, samples_per_branch, quad_order) {
            Ok(r) => {
                let k = r.K;
                evaluated.push(r);
                k
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        tol,
    );
    if let Some(e) = failure {
        return Err(e.at("golden-section refinement"));
    }
    log::info!("golden-section minimum at L = {} after {} evaluations", min.x, evaluated.len());
    let refined = evaluated.into_iter().find(|r| r.L == min.x).expect("minimum was evaluated");
    let (l_best, result) = if refined.K <= results[best].K {
        (min.x, refined)
    } else {
        warnings.push("refinement did not improve on the scan; returning the scan minimum".into());
        (grid[best], results[best].clone())
    };
    Ok(Optimum { l_best, result, scan: scan_k, warnings })
}

/// Scan points are independent, so they are spread over the available cores.
fn scan(grid: &[f64], samples: usize, quad: usize) -> Result<Vec<BoundResult>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(grid.len());
    let mut slots: Vec<Option<Result<BoundResult>>> = vec![None; grid.len()];
    std::thread::scope(|s| {
        for (w, chunk) in slots.chunks_mut(grid.len().div_ceil(workers)).enumerate() {
            let start = w * grid.len().div_ceil(workers);
            s.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(compute_bound(grid[start + k], samples, quad));
                }
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every scan point computed")).collect()
}

/// `2 asin(tanh(L/2))`, the roundness of the horocycle polygon.
pub fn horocycle_bound(l: f64) -> f64 {
    2.0 * (0.5 * l).tanh().asin()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GCurve {
    /// `(L, G(L), 2 asin(tanh(L/2)))`.
    pub rows: Vec<(f64, f64, f64)>,
    /// Whether `G(L)` stays strictly below the horocycle value at every row.
    pub dominated: bool,
}

impl GCurve {
    pub fn to_table(&self) -> String {
        let mut out = String::from("# L\tG(L)\t2asin(tanh(L/2))\n");
        for (l, g, h) in &self.rows {
            out.push_str(&format!("{l:.12}\t{g:.15}\t{h:.15}\n"));
        }
        out
    }
}

pub fn emit_gcurve(l_grid: &[f64]) -> Result<GCurve> {
    let mut rows = Vec::with_capacity(l_grid.len());
    for &l in l_grid {
        if !(l > 0.0 && l <= c1_domain_max()) {
            return Err(Error::Precondition(format!("L = {l} outside (0, 2 asinh 1]")));
        }
        rows.push((l, g_func(l)?, horocycle_bound(l)));
    }
    let dominated = rows.iter().all(|(_, g, h)| g < h);
    Ok(GCurve { rows, dominated })
}

/// `n` equally spaced points of `(0, 2 asinh 1]`.
pub fn gcurve_grid(n: usize) -> Vec<f64> {
    let top = c1_domain_max();
    (1..=n).map(|i| top * (i as f64 / n as f64)).collect()
}

/// `F(1) = 2π - 2 asin(sech 1)`, the earlier bound on the roundness of domes.
pub fn emit_fbound_reference() -> f64 {
    2.0 * PI - 2.0 * (1.0 / 1f64.cosh()).asin()
}
