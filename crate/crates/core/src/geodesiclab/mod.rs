//! Piecewise geodesics in hyperbolic 2- and 3-space, traced in the
//! hyperboloid model, and numerical checks of the angle, embedding and
//! bilipschitz bounds for curves of small roundness.

mod checks;
mod constructions;
pub mod hyperboloid;
mod profile;
mod trials;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use hyperboloid::{boost, bend, Frame, Point};

pub use checks::{bilipschitz_report, check_embedding, check_hill_bound, BilipschitzReport, HillReport};
pub use constructions::{
    horocycle_polygon, isosceles_identity, planar_unroll, random_curve, IsoscelesReport, RandomCurveSpec,
};
pub use profile::{theta_s_profile, ThetaProfile};
pub use trials::{run_trials, TrialKind, TrialSummary, BUDGET_FRACTION, EMBEDDING_RESOLUTION, MAX_BENDS, UNROLL_TOL};

/// Relative slack when comparing window lengths with `L`, so that bends
/// placed exactly `L` apart are not counted in one open window.
const WINDOW_TIE: f64 = 1e-12;

/// Unit-speed curve on `[0, length]` starting at the hyperboloid origin along
/// `e_1`, bent by `bend_angles[i]` at arc length `bend_times[i]`.
///
/// `torsions[i]` rotates the bending direction about the incoming tangent,
/// measured from the first normal of the frame carried along the curve;
/// `0` and `π` give left and right turns in the plane `x_3 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseGeodesic {
    pub bend_times: Vec<f64>,
    pub bend_angles: Vec<f64>,
    pub torsions: Vec<f64>,
    pub dimension: u8,
    pub length: f64,
}

impl PiecewiseGeodesic {
    pub fn new(
        bend_times: Vec<f64>,
        bend_angles: Vec<f64>,
        torsions: Vec<f64>,
        dimension: u8,
        length: f64,
    ) -> Result<Self> {
        let n = bend_times.len();
        if bend_angles.len() != n || torsions.len() != n {
            return Err(Error::Precondition("bend data must have equal lengths".into()));
        }
        if dimension != 2 && dimension != 3 {
            return Err(Error::Precondition(format!("dimension {dimension} is not 2 or 3")));
        }
        if bend_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("bend times must be strictly ascending".into()));
        }
        if bend_times.first().is_some_and(|&t| t < 0.0) || bend_times.last().is_some_and(|&t| t > length) {
            return Err(Error::Precondition("bend times must lie in [0, length]".into()));
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::Precondition(format!("bad curve length {length}")));
        }
        if let Some(a) = bend_angles.iter().find(|a| !(**a >= 0.0 && **a < std::f64::consts::PI)) {
            return Err(Error::Precondition(format!("bend angle {a} outside [0, π)")));
        }
        let tau = std::f64::consts::TAU;
        if let Some(t) = torsions.iter().find(|t| !(**t >= 0.0 && **t < tau)) {
            return Err(Error::Precondition(format!("torsion {t} outside [0, 2π)")));
        }
        if dimension == 2 && torsions.iter().any(|&t| t != 0.0 && t != std::f64::consts::PI) {
            return Err(Error::Precondition("planar curves only allow torsion 0 or π".into()));
        }
        Ok(PiecewiseGeodesic { bend_times, bend_angles, torsions, dimension, length })
    }

    /// Planar curve turning left at every bend.
    pub fn planar(bend_times: Vec<f64>, bend_angles: Vec<f64>, length: f64) -> Result<Self> {
        let n = bend_times.len();
        Self::new(bend_times, bend_angles, vec![0.0; n], 2, length)
    }

    pub fn straight(length: f64) -> Self {
        PiecewiseGeodesic { bend_times: vec![], bend_angles: vec![], torsions: vec![], dimension: 2, length }
    }

    pub fn bend_count(&self) -> usize {
        self.bend_times.len()
    }

    /// Frames just after each bend, with the start frame in front.
    pub fn frames(&self) -> Vec<Frame> {
        let mut out = Vec::with_capacity(self.bend_count() + 1);
        let mut f = Frame::identity();
        out.push(f);
        let mut t = 0.0;
        for i in 0..self.bend_count() {
            f = f * boost(self.bend_times[i] - t) * bend(self.bend_angles[i], self.torsions[i]);
            t = self.bend_times[i];
            out.push(f);
        }
        out
    }

    /// Index into [`Self::frames`] of the segment carrying time `t`; a bend
    /// at exactly `t` counts as already taken.
    fn segment_of(&self, t: f64) -> usize {
        self.bend_times.partition_point(|&b| b <= t)
    }

    fn segment_start(&self, seg: usize) -> f64 {
        if seg == 0 { 0.0 } else { self.bend_times[seg - 1] }
    }

    /// Frame at time `t` (after any bend at `t`), given precomputed frames.
    pub(crate) fn frame_at(&self, frames: &[Frame], t: f64) -> Frame {
        let seg = self.segment_of(t);
        frames[seg] * boost(t - self.segment_start(seg))
    }

    /// Frame at time `t` before any bend at `t`.
    pub(crate) fn frame_before(&self, frames: &[Frame], t: f64) -> Frame {
        let seg = self.bend_times.partition_point(|&b| b < t);
        frames[seg] * boost(t - self.segment_start(seg))
    }

    pub fn trace(&self, t: f64) -> Result<Point> {
        if !(t >= 0.0 && t <= self.length) {
            return Err(Error::Domain { what: "curve parameter", value: t, domain: "[0, length]" });
        }
        Ok(self.frame_at(&self.frames(), t).column(0).into_owned())
    }

    /// Points at many times with one frame computation.
    pub fn trace_many(&self, times: &[f64]) -> Vec<Point> {
        let frames = self.frames();
        times.iter().map(|&t| self.frame_at(&frames, t).column(0).into_owned()).collect()
    }
}

/// Largest total bending in an open window of length `l`.
pub fn roundness(gamma: &PiecewiseGeodesic, l: f64) -> f64 {
    let t = &gamma.bend_times;
    let a = &gamma.bend_angles;
    let mut best = 0.0f64;
    let mut sum = 0.0;
    let mut j = 0;
    for k in 0..t.len() {
        sum += a[k];
        while t[k] - t[j] >= l * (1.0 - WINDOW_TIE) {
            sum -= a[j];
            j += 1;
        }
        best = best.max(sum);
    }
    best
}
