//! Poincaré distance in the upper half-plane, in a mapped polygon, and in
//! the two comparison domains that sandwich the staircase region.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::StepFunction;
use crate::scmap::SCMap;

/// Fraction of `s(0)` that the step function must keep on the half-strip span.
pub const STRIP_LEVEL: f64 = 0.9;
/// Safety factor applied to the minimum of `s` on the half-strip span.
pub const STRIP_DEPTH_FACTOR: f64 = 0.999;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub map_accuracy: f64,
}

impl DistanceCertificate {
    pub fn holds(&self) -> bool {
        self.value.is_finite()
            && self.lower_bound.is_finite()
            && self.upper_bound.is_finite()
            && self.lower_bound <= self.value
            && self.value <= self.upper_bound
    }
}

pub fn d_uhp(z: Complex64, w: Complex64) -> Result<f64> {
    for p in [z, w] {
        if !(p.im > 0.0) || !p.re.is_finite() || !p.im.is_finite() {
            return Err(Error::Domain {
                what: "point of the upper half-plane",
                value: p.im,
                domain: "Im > 0",
            });
        }
    }
    let arg = 1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im);
    Ok(arg.max(1.0).acosh())
}

/// Distance between two interior points of the mapped polygon.
pub fn domain_distance(map: &SCMap, p: Complex64, q: Complex64, tol: f64) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let zp = map.inverse(p, tol)?;
    let zq = map.inverse(q, tol)?;
    d_uhp(zp, zq)
}

/// Distance in the half-plane `{y > -m}`.
pub fn halfplane_distance(m: f64, p: Complex64, q: Complex64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::Domain { what: "half-plane depth", value: m, domain: "m > 0" });
    }
    let shift = Complex64::new(0.0, m);
    if !(p.im > -m) || !(q.im > -m) {
        return Err(Error::Precondition(format!("points must lie above y = {}", -m)));
    }
    d_uhp(p + shift, q + shift)
}

/// Distance in the half-strip `{|x| < a, y > -q0}`, via
/// `z ↦ sin(π(z + i q0)/(2a))`.
pub fn halfstrip_distance(a: f64, q0: f64, p: Complex64, q: Complex64) -> Result<f64> {
    if !(a > 0.0) || !(q0 > 0.0) {
        return Err(Error::Precondition("half-strip needs a > 0 and q0 > 0".into()));
    }
    let to_uhp = |z: Complex64| -> Result<Complex64> {
        if !(z.re.abs() < a) || !(z.im > -q0) {
            return Err(Error::Precondition(format!("point {z} is outside the half-strip")));
        }
        Ok((std::f64::consts::PI * (z + Complex64::new(0.0, q0)) / (2.0 * a)).sin())
    };
    if p == q {
        return Ok(0.0);
    }
    d_uhp(to_uhp(p)?, to_uhp(q)?)
}

/// `(a0, q0)`: the widest breakpoint span around 0 on which
/// `s ≥ 0.9·s(0)`, and a depth just below the minimum of `s` there.
pub fn halfstrip_parameters(step: &StepFunction) -> Result<(f64, f64)> {
    let centre = step.center_value();
    let level = STRIP_LEVEL * centre;
    let bp = &step.breakpoints;
    let vals = &step.values;
    let j0 = step.interval_of(0.0);
    let (mut lo, mut hi) = (j0, j0);
    while lo > 0 && vals[lo - 1] >= level {
        lo -= 1;
    }
    while hi + 1 < vals.len() && vals[hi + 1] >= level {
        hi += 1;
    }
    // Largest span symmetric about 0.
    let a0 = (-bp[lo]).min(bp[hi + 1]);
    let min_s = step.min_on(a0);
    if !(a0 > 0.0) || !(min_s > 0.0) {
        return Err(Error::Certificate("no half-strip fits under the step function".into()));
    }
    Ok((a0, STRIP_DEPTH_FACTOR * min_s))
}
