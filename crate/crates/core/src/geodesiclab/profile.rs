use serde::{Deserialize, Serialize};

use nalgebra::Vector4;

use super::hyperboloid::{distance, local_radial, origin, tangent_angle, Frame, Point};
use super::PiecewiseGeodesic;
use crate::error::{Error, Result};

/// Series start of the ODE route: integration begins at this arc length.
const ODE_START: f64 = 1e-6;

/// Distance to the start point and the angle between the tangent and the
/// outward radial direction, sampled along the curve.
///
/// The trigonometric values come from the traced frames; the `ode_*` columns
/// integrate `s' = cos θ`, `θ' = -sin θ / tanh s` between bends.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaProfile {
    pub sample_times: Vec<f64>,
    pub s_values: Vec<f64>,
    pub theta_plus: Vec<f64>,
    pub theta_minus: Vec<f64>,
    pub ode_s_values: Vec<f64>,
    pub ode_theta_plus: Vec<f64>,
}

impl ThetaProfile {
    /// Largest disagreement between the two routes in `s` or `θ⁺`.
    pub fn route_discrepancy(&self) -> f64 {
        let ds = self.s_values.iter().zip(&self.ode_s_values).map(|(a, b)| (a - b).abs());
        let dt = self.theta_plus.iter().zip(&self.ode_theta_plus).map(|(a, b)| (a - b).abs());
        ds.chain(dt).fold(0.0, f64::max)
    }

    pub fn max_theta_plus(&self) -> f64 {
        self.theta_plus.iter().copied().fold(0.0, f64::max)
    }
}

/// Angle between the frame tangent and the direction away from the origin
/// (zero at the origin itself).
fn theta_at(frame: &Frame) -> f64 {
    match local_radial(frame, &origin()) {
        Some(u) => tangent_angle(&u, &Vector4::new(0.0, 1.0, 0.0, 0.0)),
        None => 0.0,
    }
}

/// Profile on `grid` (bend times are merged in).
pub fn theta_s_profile(gamma: &PiecewiseGeodesic, grid: &[f64]) -> Result<ThetaProfile> {
    if let Some(t) = grid.iter().find(|t| !(**t >= 0.0 && **t <= gamma.length)) {
        return Err(Error::Domain { what: "profile time", value: *t, domain: "[0, length]" });
    }
    let mut times: Vec<f64> = grid.iter().chain(&gamma.bend_times).copied().collect();
    times.sort_by(f64::total_cmp);
    times.dedup();

    let frames = gamma.frames();
    let mut s_values = Vec::with_capacity(times.len());
    let mut theta_plus = Vec::with_capacity(times.len());
    let mut theta_minus = Vec::with_capacity(times.len());
    for &t in &times {
        let after = gamma.frame_at(&frames, t);
        let before = gamma.frame_before(&frames, t);
        let p: Point = after.column(0).into_owned();
        s_values.push(distance(&origin(), &p));
        theta_plus.push(theta_at(&after));
        theta_minus.push(theta_at(&before));
    }

    let (ode_s_values, ode_theta_plus) = ode_route(gamma, &frames, &times);
    Ok(ThetaProfile { sample_times: times, s_values, theta_plus, theta_minus, ode_s_values, ode_theta_plus })
}

/// Integrates the radial ODE through the sorted `times`. Planar curves carry
/// a signed angle and jump by `±φ_i`; in 3-space the post-bend angle is read
/// from the frame.
fn ode_route(gamma: &PiecewiseGeodesic, frames: &[Frame], times: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let planar = gamma.dimension == 2;
    let mut s_out = Vec::with_capacity(times.len());
    let mut th_out = Vec::with_capacity(times.len());

    // Until the first bend the curve is radial: s = t, θ = 0.
    let mut t = 0.0;
    let mut s = 0.0;
    let mut psi = 0.0;
    let mut next_bend = 0;
    let rhs = |s: f64, psi: f64| (psi.cos(), -psi.sin() / s.tanh());
    let advance = |t0: f64, t1: f64, s: &mut f64, psi: &mut f64| {
        if t1 <= t0 {
            return;
        }
        if *psi == 0.0 {
            *s += t1 - t0;
            return;
        }
        let mut tt = t0;
        if *s == 0.0 {
            // Leaving the origin along a non-radial direction cannot happen
            // for a curve that starts there; keep the series start anyway.
            *s = ODE_START;
            tt += ODE_START;
        }
        while tt < t1 {
            let h = (1e-3f64).min(0.01 * *s).max(1e-9).min(t1 - tt);
            let (k1s, k1p) = rhs(*s, *psi);
            let (k2s, k2p) = rhs(*s + 0.5 * h * k1s, *psi + 0.5 * h * k1p);
            let (k3s, k3p) = rhs(*s + 0.5 * h * k2s, *psi + 0.5 * h * k2p);
            let (k4s, k4p) = rhs(*s + h * k3s, *psi + h * k3p);
            *s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            *psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            tt += h;
        }
    };
    for &target in times {
        // Cross every bend at or before the target.
        while next_bend < gamma.bend_count() && gamma.bend_times[next_bend] <= target {
            let tb = gamma.bend_times[next_bend];
            advance(t, tb, &mut s, &mut psi);
            t = tb;
            if planar {
                let sign = if gamma.torsions[next_bend] == 0.0 { 1.0 } else { -1.0 };
                psi += sign * gamma.bend_angles[next_bend];
            } else {
                psi = angle_after_bend(frames, next_bend);
            }
            next_bend += 1;
        }
        advance(t, target, &mut s, &mut psi);
        t = target;
        s_out.push(s);
        th_out.push(wrap_abs(psi));
    }
    (s_out, th_out)
}

/// Angle right after bend `i`, read from the traced frame.
fn angle_after_bend(frames: &[Frame], i: usize) -> f64 {
    theta_at(&frames[i + 1])
}

fn wrap_abs(psi: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let r = (psi + pi).rem_euclid(2.0 * pi) - pi;
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Signed angle from the radial direction to the tangent, positive
    /// towards the first normal.
    fn signed_theta(frame: &Frame) -> f64 {
        match local_radial(frame, &origin()) {
            Some(u) => -u[2].atan2(u[1]),
            None => 0.0,
        }
    }

    #[test]
    fn straight_profile() {
        let g = PiecewiseGeodesic::straight(3.0);
        let grid: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
        let p = theta_s_profile(&g, &grid).unwrap();
        for (t, (s, th)) in p.sample_times.iter().zip(p.s_values.iter().zip(&p.theta_plus)) {
            assert!((s - t).abs() < 1e-12);
            assert!(th.abs() < 1e-7);
        }
    }

    #[test]
    fn planar_jump_equals_bend_angle() {
        let g = PiecewiseGeodesic::planar(vec![0.7, 1.6], vec![0.5, 0.3], 2.5).unwrap();
        let p = theta_s_profile(&g, &[0.0, 1.0, 2.0, 2.5]).unwrap();
        let i = p.sample_times.iter().position(|&t| t == 0.7).unwrap();
        assert!((p.theta_plus[i] - p.theta_minus[i] - 0.5).abs() < 1e-12);
        assert!(p.route_discrepancy() < 1e-6);
    }

    #[test]
    fn signed_angle_sign() {
        let g = PiecewiseGeodesic::planar(vec![0.7], vec![0.5], 2.5).unwrap();
        let f = g.frames();
        assert!((signed_theta(&f[1]) - 0.5).abs() < 1e-12);
    }
}
