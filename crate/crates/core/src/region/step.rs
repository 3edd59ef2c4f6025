use serde::{Deserialize, Serialize};

use crate::bendbounds::{
    ceil_ratio, f_shear_unchecked, g_shear_unchecked, q_bound, q_profile, q_tail_abscissa,
};
use crate::error::{check_finite, Error, Result};
use crate::specialfn::g_func;

pub const DEFAULT_SAMPLES_PER_BRANCH: usize = 64;

/// `Q(L, a)` must fall below this at the default half width. `Q` decays
/// only like `1/x`, so this gives `a ≈ 38` at `L = 1.48`; wider strips move
/// the distance between the marked points by less than `1e-5`.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 0.05;

/// Adjacent steps closer than this are merged (keeping the lower value).
/// Where the two branches of `Q` cross, truncation leaves neighbouring values
/// a few `1e-12` apart; the resulting tiny sides defeat the conformal map
/// solver in double precision.
pub const MERGE_TOLERANCE: f64 = 1e-9;

const DECIMALS: f64 = 1e12;

/// Truncates a positive value to 12 decimal digits, rounding down with a
/// margin of `1e-13` for the error of the double precision evaluation.
pub fn truncate_down(v: f64) -> f64 {
    ((v - 1e-13) * DECIMALS).floor() / DECIMALS
}

/// Piecewise constant lower bound `s(x) ≤ Q(L, x)` on `[-a, a]`, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    #[serde(rename = "L")]
    pub l: f64,
    pub half_width: f64,
    /// Strictly ascending, from `-a` to `a`.
    pub breakpoints: Vec<f64>,
    /// `values[j]` holds on `(breakpoints[j], breakpoints[j+1])`.
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn interval_count(&self) -> usize {
        self.values.len()
    }

    /// `s(x)`. At a breakpoint the smaller neighbouring value is returned,
    /// which is the depth of the region boundary there.
    pub fn eval(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let (first, last) = (bp[0], bp[bp.len() - 1]);
        if x < first || x > last {
            return 0.0;
        }
        if x == first || x == last {
            return 0.0;
        }
        match bp.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => self.values[i - 1].min(self.values[i]),
            Err(i) => self.values[i - 1],
        }
    }

    /// Minimum of `s` over the intervals meeting `[-w, w]`.
    pub fn min_on(&self, w: f64) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .filter(|(b, _)| b[1] > -w && b[0] < w)
            .map(|(_, &v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the interval containing `x` (the right one at a breakpoint),
    /// clamped to the first and last interval.
    pub fn interval_of(&self, x: f64) -> usize {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        i.saturating_sub(1).min(self.values.len() - 1)
    }

    /// Value on the interval containing 0.
    pub fn center_value(&self) -> f64 {
        self.eval_open(0.0)
    }

    fn eval_open(&self, x: f64) -> f64 {
        match self.breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) if i > 0 && i < self.values.len() => self.values[i - 1].min(self.values[i]),
            Ok(_) => 0.0,
            Err(0) => 0.0,
            Err(i) if i > self.values.len() => 0.0,
            Err(i) => self.values[i - 1],
        }
    }

    /// Checks `s(x) ≤ Q(L, x)` at `n` uniform points of `[-a, a]`.
    pub fn certify_grid(&self, n: usize) -> Result<()> {
        let a = self.half_width;
        for i in 0..n {
            let x = -a + 2.0 * a * (i as f64 + 0.5) / n as f64;
            let s = self.eval(x);
            let q = q_bound(self.l, x)?;
            if s > q {
                return Err(Error::Certification { x, step: s, bound: q });
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let bp = &self.breakpoints;
        if bp.len() != self.values.len() + 1 || self.values.is_empty() {
            return Err(Error::Precondition("step function shape mismatch".into()));
        }
        if bp.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("breakpoints not strictly ascending".into()));
        }
        if let Some(v) = self.values.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Precondition(format!("non-positive step value {v}")));
        }
        Ok(())
    }
}

/// Smallest integer half width `a` with `Q(L, x) < threshold` for `x ≥ a`
/// (checked at the scan resolution of [`q_tail_abscissa`]).
pub fn default_half_width(l: f64, threshold: f64) -> Result<f64> {
    Ok(q_tail_abscissa(l, threshold)?.ceil())
}

/// A sub-interval `[lo, hi]` of `[0, a]` on which the ceiling is at most `k_max`.
struct Piece {
    lo: f64,
    hi: f64,
    k_max: u64,
}

fn g_of_g(l: f64, x: f64) -> Result<f64> {
    let inner = g_shear_unchecked(l, x);
    if inner > 0.0 {
        g_func(inner)
    } else {
        Ok(0.0)
    }
}

/// Builds the certified step function on `[-a, a]`.
///
/// The partition of `[0, a]` contains every jump of `⌈f(L,x)/L⌉` (the lower
/// end of its bracket), every crossing of the two branches of `Q`, and
/// the points of a uniform grid with `samples_per_branch` cells that fall
/// inside pieces where `G(g(L, x))` dominates. On `[x_j, x_{j+1}]` the value is the larger of
/// `G(L)/k` with `k` the ceiling at `x_{j+1}` and `G(g(L, x_{j+1}))`, both
/// lower bounds because `f` increases and `G(g(L, ·))` decreases on `[0, ∞)`.
/// The negative half is the mirror image.
pub fn build_step(l: f64, half_width: f64, samples_per_branch: usize) -> Result<StepFunction> {
    check_finite("L", l)?;
    check_finite("half_width", half_width)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    if half_width <= 0.0 {
        return Err(Error::Domain { what: "half_width", value: half_width, domain: "(0, ∞)" });
    }
    if samples_per_branch == 0 {
        return Err(Error::Precondition("samples_per_branch must be positive".into()));
    }
    let g_l = g_func(l)?;
    let profile = q_profile(l, half_width)?;

    // Pieces delimited by jumps; then split by crossovers.
    let mut pieces = Vec::new();
    let mut lo = 0.0;
    let mut k = 2u64;
    for &(jlo, _) in &profile.jump_brackets {
        if jlo > lo && jlo < half_width {
            pieces.push(Piece { lo, hi: jlo, k_max: k });
            lo = jlo;
        }
        k += 1;
    }
    let k_last = ceil_ratio(f_shear_unchecked(l, half_width), l).max(2);
    pieces.push(Piece { lo, hi: half_width, k_max: k_last });
    for &(clo, _) in &profile.crossover_intervals {
        if let Some(i) = pieces.iter().position(|p| p.lo < clo && clo < p.hi) {
            let p = &pieces[i];
            let right = Piece { lo: clo, hi: p.hi, k_max: p.k_max };
            pieces[i].hi = clo;
            pieces.insert(i + 1, right);
        }
    }

    // A uniform grid of `samples_per_branch` cells on [0, X], X the right end
    // of the last piece where G(g) dominates. Doubling the count nests grids.
    let mut dominated = Vec::with_capacity(pieces.len());
    for p in &pieces {
        let mid = 0.5 * (p.lo + p.hi);
        let ceiling_branch = g_l / ceil_ratio(f_shear_unchecked(l, mid), l) as f64;
        dominated.push(g_of_g(l, mid)? > ceiling_branch);
    }
    let branch_end = pieces
        .iter()
        .zip(&dominated)
        .filter(|(_, &d)| d)
        .map(|(p, _)| p.hi)
        .fold(0.0, f64::max);
    let cell = branch_end / samples_per_branch as f64;

    let mut right_breaks: Vec<f64> = vec![0.0];
    let mut right_values: Vec<f64> = Vec::new();
    for (p, &dom) in pieces.iter().zip(&dominated) {
        let mut cuts: Vec<f64> = Vec::new();
        if dom {
            let first = (p.lo / cell).floor() as usize + 1;
            cuts.extend((first..samples_per_branch).map(|i| i as f64 * cell).filter(|&x| x > p.lo && x < p.hi));
        }
        cuts.push(p.hi);
        for x_right in cuts {
            let k = ceil_ratio(f_shear_unchecked(l, x_right), l).min(p.k_max).max(1);
            let v = truncate_down(g_l / k as f64).max(truncate_down(g_of_g(l, x_right)?));
            right_breaks.push(x_right);
            right_values.push(v);
        }
    }

    // Mirror; the two intervals touching 0 share a value and are joined.
    let n = right_values.len();
    let mut breakpoints = Vec::with_capacity(2 * n + 1);
    let mut values = Vec::with_capacity(2 * n);
    for i in (1..=n).rev() {
        breakpoints.push(-right_breaks[i]);
    }
    for i in (0..n).rev() {
        values.push(right_values[i]);
    }
    values.pop();
    breakpoints.extend(right_breaks.iter().skip(1).copied());
    values.extend(right_values.iter().copied());

    let mut step = StepFunction { l, half_width, breakpoints, values };
    merge_flat_steps(&mut step);
    step.validate()?;
    certify_build(&step)?;
    Ok(step)
}

/// Joins neighbours whose values differ by less than [`MERGE_TOLERANCE`].
fn merge_flat_steps(step: &mut StepFunction) {
    let mut bp = vec![step.breakpoints[0]];
    let mut vals: Vec<f64> = Vec::with_capacity(step.values.len());
    for (j, &v) in step.values.iter().enumerate() {
        match vals.last_mut() {
            Some(last) if (*last - v).abs() < MERGE_TOLERANCE => {
                *last = last.min(v);
                *bp.last_mut().expect("non-empty") = step.breakpoints[j + 1];
            }
            _ => {
                vals.push(v);
                bp.push(step.breakpoints[j + 1]);
            }
        }
    }
    step.breakpoints = bp;
    step.values = vals;
}

/// Spot check: both ends of every interval plus a uniform grid.
fn certify_build(step: &StepFunction) -> Result<()> {
    for (b, &v) in step.breakpoints.windows(2).zip(&step.values) {
        for x in [b[0], b[1]] {
            let q = q_bound(step.l, x)?;
            if v > q {
                return Err(Error::Certification { x, step: v, bound: q });
            }
        }
    }
    step.certify_grid(2048)
}
