use serde::{Deserialize, Serialize};

use super::hyperboloid::{distance, klein, Point};
use super::profile::theta_s_profile;
use super::{roundness, PiecewiseGeodesic};
use crate::error::{Error, Result};
use crate::region::segments_intersect;
use crate::specialfn::solve_tangent;
use crate::specialfn::DEFAULT_TANGENT_TOL;
use crate::Complex64;

/// Slack allowed on the angle bound.
pub const HILL_SLACK: f64 = 1e-9;
/// Slack allowed on the bilipschitz ratio.
pub const BILIP_SLACK: f64 = 1e-6;
/// Sampling step for the angle profile and for bilipschitz pairs.
pub const SAMPLE_STEP: f64 = 0.01;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HillReport {
    #[serde(rename = "L")]
    pub l: f64,
    pub roundness: f64,
    pub g_value: f64,
    /// `Θ(L) + G(L)`.
    pub theta_bound: f64,
    pub max_theta_plus: f64,
    pub margin: f64,
    pub precondition_met: bool,
    pub holds: bool,
}

/// Samples `θ⁺` along the curve (every bend plus a uniform grid) and compares
/// its maximum with `Θ(L) + G(L)`. When the roundness exceeds `G(L)` the report
/// says so in `precondition_met` and `holds` is false.
pub fn check_hill_bound(gamma: &PiecewiseGeodesic, l: f64) -> Result<HillReport> {
    let tangent = solve_tangent(l, DEFAULT_TANGENT_TOL)?;
    let rho = roundness(gamma, l);
    let precondition_met = rho <= tangent.g_value;
    let profile = theta_s_profile(gamma, &uniform_grid(gamma.length, SAMPLE_STEP))?;
    let max_theta_plus = profile.max_theta_plus();
    let theta_bound = tangent.theta + tangent.g_value;
    Ok(HillReport {
        l,
        roundness: rho,
        g_value: tangent.g_value,
        theta_bound,
        max_theta_plus,
        margin: theta_bound - max_theta_plus,
        precondition_met,
        holds: precondition_met && max_theta_plus <= theta_bound + HILL_SLACK,
    })
}

fn uniform_grid(length: f64, step: f64) -> Vec<f64> {
    let n = (length / step).ceil().max(1.0) as usize;
    (0..=n).map(|i| length * (i as f64 / n as f64)).collect()
}

/// Smallest distance between sample points more than `2·resolution` apart in
/// arc length. For planar curves, a crossing of two sampled chords (straight
/// in the Klein model) returns `0`.
pub fn check_embedding(gamma: &PiecewiseGeodesic, resolution: f64) -> Result<f64> {
    if !(resolution > 0.0) {
        return Err(Error::Domain { what: "resolution", value: resolution, domain: "(0, ∞)" });
    }
    let times = uniform_grid(gamma.length, resolution);
    let h = gamma.length / (times.len() - 1) as f64;
    let pts = gamma.trace_many(&times);
    let planar = gamma.dimension == 2;
    let kl: Vec<Complex64> = pts.iter().map(|p| {
        let (x, y) = klein(p);
        Complex64::new(x, y)
    }).collect();
    let window = 2.0 * resolution;
    let n = pts.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let mut j = i + 1;
        while j < n && times[j] - times[i] <= window {
            j += 1;
        }
        while j < n {
            let d = distance(&pts[i], &pts[j]);
            best = best.min(d);
            if planar && d <= 2.0 * h && i + 1 < n && j + 1 < n && segments_intersect(kl[i], kl[i + 1], kl[j], kl[j + 1]) {
                return Ok(0.0);
            }
            // The curve is 1-Lipschitz, so nothing closer can appear for a while.
            let floor = if planar { best.max(2.0 * h) } else { best };
            let skip = ((d - floor) / h).floor();
            j += if skip >= 1.0 { skip as usize } else { 1 };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BilipschitzReport {
    #[serde(rename = "L")]
    pub l: f64,
    pub roundness: f64,
    pub g_value: f64,
    /// `(G(L) - roundness)/2`.
    pub b: f64,
    /// `sin²(B/2)`.
    pub predicted: f64,
    /// Smallest sampled `d(γ(t₁), γ(t₂)) / |t₁ - t₂|`.
    pub measured: f64,
    pub precondition_met: bool,
    pub holds: bool,
}

pub fn bilipschitz_report(gamma: &PiecewiseGeodesic, l: f64) -> Result<BilipschitzReport> {
    bilipschitz_report_with_step(gamma, l, SAMPLE_STEP)
}

/// Exhaustive pair sampling at spacing `step`.
pub fn bilipschitz_report_with_step(gamma: &PiecewiseGeodesic, l: f64, step: f64) -> Result<BilipschitzReport> {
    if !(step > 0.0) {
        return Err(Error::Domain { what: "step", value: step, domain: "(0, ∞)" });
    }
    let g_value = solve_tangent(l, DEFAULT_TANGENT_TOL)?.g_value;
    let rho = roundness(gamma, l);
    let precondition_met = rho < g_value;
    let b = 0.5 * (g_value - rho);
    let predicted = (0.5 * b).sin().powi(2);
    let times = uniform_grid(gamma.length, step);
    let pts: Vec<Point> = gamma.trace_many(&times);
    let mut measured = 1.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let ratio = distance(&pts[i], &pts[j]) / (times[j] - times[i]);
            measured = measured.min(ratio);
        }
    }
    Ok(BilipschitzReport {
        l,
        roundness: rho,
        g_value,
        b,
        predicted,
        measured,
        precondition_met,
        holds: precondition_met && measured >= predicted - BILIP_SLACK,
    })
}
