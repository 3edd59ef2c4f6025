use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::hyperboloid::{bend, direction_to, distance, from_half_plane, local_radial, origin, tangent_angle, Point};
use super::{roundness, PiecewiseGeodesic};
use crate::error::{Error, Result};
use crate::numerics::golden_section;

/// Planar curve through `n` points of the horocycle `y = 1` in the upper
/// half-plane, consecutive points a distance `l` apart. Segment lengths and
/// bend angles are measured from the point coordinates, each corner after
/// translating it to `x = 0` (an isometry that keeps the coordinates small).
pub fn horocycle_polygon(l: f64, n: usize) -> Result<PiecewiseGeodesic> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    if n < 3 {
        return Err(Error::Precondition(format!("need at least 3 points, got {n}")));
    }
    let spacing = 2.0 * (0.5 * l).sinh();
    let xs: Vec<f64> = (0..n).map(|k| k as f64 * spacing).collect();
    let local = |k: usize, j: usize| from_half_plane(xs[j] - xs[k], 1.0);
    let mut times = Vec::with_capacity(n - 2);
    let mut angles = Vec::with_capacity(n - 2);
    let mut t = 0.0;
    for k in 1..n - 1 {
        let here = local(k, k);
        t += distance(&local(k, k - 1), &here);
        let back = direction_to(&here, &local(k, k - 1)).expect("distinct points");
        let ahead = direction_to(&here, &local(k, k + 1)).expect("distinct points");
        times.push(t);
        angles.push(std::f64::consts::PI - tangent_angle(&back, &ahead));
    }
    let length = t + distance(&local(n - 1, n - 2), &local(n - 1, n - 1));
    PiecewiseGeodesic::planar(times, angles, length)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoscelesReport {
    pub theta: f64,
    /// Minimum over `p ∈ g_b` of `d(p, g_0) + d(p, g_k)`.
    pub ell: f64,
    /// `|sinh(ℓ/2) - cos θ|`.
    pub residual: f64,
    /// Polar angle of the minimizing point on `g_b`.
    pub minimizer_angle: f64,
    /// Angles between `g_b` and the two perpendiculars dropped from the minimizer.
    pub angle_to_g0: f64,
    pub angle_to_gk: f64,
}

impl IsoscelesReport {
    pub fn equal_angle_defect(&self) -> f64 {
        (self.angle_to_g0 - self.angle_to_gk).abs()
    }
}

/// In the upper half-plane take `g_0 = {x = -1}` and `g_k = {x = 1}` (sharing
/// the ideal point `∞`) and `g_b` the semicircle `|z| = 1/cos θ`, which meets
/// both at angle `θ`. The distance to a vertical line satisfies
/// `sinh d = |x - c| / y`.
pub fn isosceles_identity(theta: f64) -> Result<IsoscelesReport> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain { what: "theta", value: theta, domain: "(0, π/2)" });
    }
    let r = 1.0 / theta.cos();
    let point = |phi: f64| (r * phi.cos(), r * phi.sin());
    let total = |phi: f64| {
        let (x, y) = point(phi);
        ((x + 1.0).abs() / y).asinh() + ((x - 1.0).abs() / y).asinh()
    };
    let lo = theta;
    let hi = std::f64::consts::PI - theta;
    let min = golden_section(total, lo, hi, 1e-12);
    let (x, y) = point(min.x);
    // Perpendiculars to the vertical lines are circles centred on them, so
    // each angle with g_b is the angle between the two radius vectors.
    let angle_between = |cx: f64| {
        let (ax, ay) = (x - cx, y);
        let dot = ax * x + ay * y;
        let cross = ax * y - ay * x;
        cross.abs().atan2(dot)
    };
    Ok(IsoscelesReport {
        theta,
        ell: min.fx,
        residual: ((0.5 * min.fx).sinh() - theta.cos()).abs(),
        minimizer_angle: min.x,
        angle_to_g0: angle_between(-1.0),
        angle_to_gk: angle_between(1.0),
    })
}

/// Unrolls a curve into the plane triangle by triangle: the triangles
/// `(γ(0), γ(t_i), γ(t_{i+1}))` are laid out in a fan around the image of
/// `γ(0)`, which preserves every distance to the start point. The planar bend
/// at `t_i` is `π - (A_i + B_i)` with `A_i`, `B_i` the angles at `γ(t_i)`
/// between the start direction and the incoming and outgoing segments.
pub fn planar_unroll(gamma: &PiecewiseGeodesic) -> Result<PiecewiseGeodesic> {
    if gamma.bend_times.first().is_some_and(|&t| t == 0.0) {
        return Err(Error::Precondition("the start point must not be a bend point".into()));
    }
    let frames = gamma.frames();
    let o = origin();
    let e1 = Point::new(0.0, 1.0, 0.0, 0.0);
    let mut angles = Vec::with_capacity(gamma.bend_count());
    let mut torsions = Vec::with_capacity(gamma.bend_count());
    for (i, &t) in gamma.bend_times.iter().enumerate() {
        // Angles are read in the incoming frame, where the bend point is the origin.
        let before = gamma.frame_before(&frames, t);
        let to_start = -local_radial(&before, &o)
            .ok_or_else(|| Error::Precondition(format!("bend {i} sits at the start point")))?;
        let v_out: Point = bend(gamma.bend_angles[i], gamma.torsions[i]) * e1;
        let a = tangent_angle(&(-e1), &to_start);
        let b = tangent_angle(&v_out, &to_start);
        let turn = std::f64::consts::PI - (a + b);
        angles.push(turn.abs());
        torsions.push(if turn >= 0.0 { 0.0 } else { std::f64::consts::PI });
    }
    PiecewiseGeodesic::new(gamma.bend_times.clone(), angles, torsions, 2, gamma.length)
}

/// Parameters of the random curve family used by the property checks.
#[derive(Debug, Clone)]
pub struct RandomCurveSpec {
    /// Window length for the roundness budget.
    pub l: f64,
    /// Target roundness.
    pub budget: f64,
    pub dimension: u8,
    pub max_bends: usize,
}

/// Bend count uniform in `1..=max_bends`, exponential gaps with mean `L/2`,
/// uniform angles rescaled so the roundness equals the budget, uniform
/// torsions in 3-space. The curve runs one window past its last bend.
pub fn random_curve<R: Rng + ?Sized>(rng: &mut R, spec: &RandomCurveSpec) -> Result<PiecewiseGeodesic> {
    if !(spec.l > 0.0) || !(spec.budget >= 0.0 && spec.budget < std::f64::consts::PI) || spec.max_bends == 0 {
        return Err(Error::Precondition("random curve needs L > 0, budget in [0, π) and bends".into()));
    }
    let gaps = Exp::new(2.0 / spec.l).map_err(|e| Error::Precondition(e.to_string()))?;
    let n = rng.random_range(1..=spec.max_bends);
    let mut times = Vec::with_capacity(n);
    let mut t = 0.0;
    while times.len() < n {
        let gap: f64 = gaps.sample(rng);
        if gap > 0.0 {
            t += gap;
            times.push(t);
        }
    }
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let torsions: Vec<f64> = if spec.dimension == 3 {
        (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
    } else {
        vec![0.0; n]
    };
    let length = t + spec.l;
    let unit = PiecewiseGeodesic::new(times.clone(), raw.clone(), torsions.clone(), spec.dimension, length)?;
    let scale = spec.budget / roundness(&unit, spec.l);
    let angles = raw.iter().map(|a| a * scale).collect();
    PiecewiseGeodesic::new(times, angles, torsions, spec.dimension, length)
}

#[cfg(test)]
mod tests {
    use super::super::hyperboloid::{minkowski, origin};
    use super::*;

    #[test]
    fn horocycle_angles() {
        let g = horocycle_polygon(1.0, 6).unwrap();
        let expect = 2.0 * (0.5f64).tanh().asin();
        for a in &g.bend_angles {
            assert!((a - expect).abs() < 1e-12);
        }
        for (k, t) in g.bend_times.iter().enumerate() {
            assert!((t - (k + 1) as f64).abs() < 1e-12);
        }
        assert!((roundness(&g, 1.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn isosceles_at_sixty_degrees() {
        let r = isosceles_identity(std::f64::consts::FRAC_PI_3).unwrap();
        assert!((r.ell - 2.0 * (0.5f64).asinh()).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        assert!(r.equal_angle_defect() < 1e-6);
        assert!(isosceles_identity(0.0).is_err());
    }

    #[test]
    fn unroll_keeps_start_distances() {
        let g = PiecewiseGeodesic::new(vec![0.5, 1.1], vec![0.7, 0.6], vec![0.0, 1.2], 3, 2.0).unwrap();
        let flat = planar_unroll(&g).unwrap();
        for i in 0..=40 {
            let t = 2.0 * i as f64 / 40.0;
            let a = distance(&origin(), &g.trace(t).unwrap());
            let b = distance(&origin(), &flat.trace(t).unwrap());
            assert!((a - b).abs() < 1e-12, "t = {t}");
        }
        assert!(flat.bend_angles[1] <= 0.6 + 1e-12);
        let p = flat.trace(1.7).unwrap();
        assert!((minkowski(&p, &p) + 1.0).abs() < 1e-10 && p[3] == 0.0);
    }
}
