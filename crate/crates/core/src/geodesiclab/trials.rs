//! Seeded batches of random curves run through one of the checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::{bilipschitz_report, check_embedding, check_hill_bound, BILIP_SLACK, HILL_SLACK};
use super::constructions::{planar_unroll, random_curve, RandomCurveSpec};
use super::hyperboloid::{distance, origin};
use super::PiecewiseGeodesic;
use crate::error::{Error, Result};
use crate::specialfn::g_func;

/// Fraction of `G(L)` used as the roundness of random curves.
pub const BUDGET_FRACTION: f64 = 0.9;
/// Bend counts are uniform in `1..=MAX_BENDS`.
pub const MAX_BENDS: usize = 10;
/// Sampling resolution of the embedding check.
pub const EMBEDDING_RESOLUTION: f64 = 1e-3;
/// Tolerance on distance preservation and angle growth under unrolling.
pub const UNROLL_TOL: f64 = 1e-9;
const UNROLL_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialKind {
    Hill,
    Embedding,
    Bilipschitz,
    Unroll,
}

/// Outcome of a batch. `worst_margin` is the smallest slack seen over all
/// trials; a trial fails when its margin is negative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialSummary {
    pub kind: TrialKind,
    #[serde(rename = "L")]
    pub l: f64,
    pub seed: u64,
    pub trials: usize,
    pub budget: f64,
    pub failures: usize,
    pub worst_margin: f64,
    pub first_failure: Option<String>,
}

impl TrialSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `trials` random curves of roundness `0.9·G(L)` through `kind`.
/// Curves alternate between the plane and 3-space, except for unrolling,
/// which always starts from 3-space.
pub fn run_trials(kind: TrialKind, l: f64, seed: u64, trials: usize) -> Result<TrialSummary> {
    let budget = BUDGET_FRACTION * g_func(l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = TrialSummary {
        kind,
        l,
        seed,
        trials,
        budget,
        failures: 0,
        worst_margin: f64::INFINITY,
        first_failure: None,
    };
    for trial in 0..trials {
        let dimension = if kind == TrialKind::Unroll || trial % 2 == 1 { 3 } else { 2 };
        let spec = RandomCurveSpec { l, budget, dimension, max_bends: MAX_BENDS };
        let gamma = random_curve(&mut rng, &spec)?;
        let margin = trial_margin(kind, &gamma, l)?;
        summary.worst_margin = summary.worst_margin.min(margin);
        if !(margin >= 0.0) {
            summary.failures += 1;
            summary.first_failure.get_or_insert_with(|| {
                format!("trial {trial}: margin {margin:e} for {gamma:?}")
            });
        }
    }
    Ok(summary)
}

fn trial_margin(kind: TrialKind, gamma: &PiecewiseGeodesic, l: f64) -> Result<f64> {
    match kind {
        TrialKind::Hill => {
            let r = check_hill_bound(gamma, l)?;
            if !r.precondition_met {
                return Err(Error::Precondition(format!("roundness {} above G(L)", r.roundness)));
            }
            Ok(r.margin + HILL_SLACK)
        }
        TrialKind::Embedding => check_embedding(gamma, EMBEDDING_RESOLUTION),
        TrialKind::Bilipschitz => {
            let r = bilipschitz_report(gamma, l)?;
            Ok(r.measured - (r.predicted - BILIP_SLACK))
        }
        TrialKind::Unroll => {
            let flat = planar_unroll(gamma)?;
            let o = origin();
            let mut worst = 0.0f64;
            for i in 0..=UNROLL_SAMPLES {
                let t = gamma.length * (i as f64 / UNROLL_SAMPLES as f64);
                let a = distance(&o, &gamma.trace(t)?);
                let b = distance(&o, &flat.trace(t)?);
                worst = worst.max((a - b).abs());
            }
            for (a, b) in flat.bend_angles.iter().zip(&gamma.bend_angles) {
                worst = worst.max(a - b);
            }
            Ok(UNROLL_TOL - worst)
        }
    }
}
