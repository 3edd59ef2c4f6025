//! The hill function `h(x) = acos(tanh x)` and the tangent-line problem
//! that defines `c(L)`, `Θ(L)` and `G(L)`.
//!
//! For fixed `L > 0` the tangent to the graph of `h` at `(c, h(c))` passes
//! through `(c - L, h(c - L))` for exactly one `c ∈ (0, L)`. Then
//! `Θ(L) = h(c)` and `G(L) = h(c - L) - h(c) = -L h'(c)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::numerics::{brent, RootOptions};

/// Residual target used by [`g_func`].
pub const DEFAULT_TANGENT_TOL: f64 = 1e-14;

/// `h(x) = acos(tanh x)`, a decreasing homeomorphism `ℝ → (0, π)`.
///
/// Evaluated as `2·atan(e^{-x})`, which keeps full relative precision in
/// the tail where `tanh x` rounds to 1.
pub fn hill(x: f64) -> Result<f64> {
    check_finite("x", x)?;
    Ok(hill_unchecked(x))
}

#[inline]
pub(crate) fn hill_unchecked(x: f64) -> f64 {
    2.0 * (-x).exp().atan()
}

/// `h'(x) = -sech(x)`.
pub fn hill_deriv(x: f64) -> Result<f64> {
    check_finite("x", x)?;
    Ok(hill_deriv_unchecked(x))
}

#[inline]
pub(crate) fn hill_deriv_unchecked(x: f64) -> f64 {
    -1.0 / x.cosh()
}

/// `h(c - L) - h(c)` without subtracting two numbers near `π/2`.
///
/// Uses `atan p - atan q = atan((p - q)/(1 + pq))` with `p = e^{L-c}`, `q = e^{-c}`.
fn hill_drop(c: f64, l: f64) -> f64 {
    if l > 30.0 || c.abs() > 300.0 {
        return hill_unchecked(c - l) - hill_unchecked(c);
    }
    let num = (-c).exp() * l.exp_m1();
    let den = 1.0 + (l - 2.0 * c).exp();
    2.0 * (num / den).atan()
}

/// `r(c) = h(c - L) - h(c) + L h'(c)`; its root in `(0, L)` is `c(L)`.
pub fn tangent_residual(c: f64, l: f64) -> f64 {
    hill_drop(c, l) + l * hill_deriv_unchecked(c)
}

/// Solution of the tangent-line problem for a given `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentSolution {
    #[serde(rename = "L")]
    pub l: f64,
    pub c: f64,
    /// `Θ(L) = h(c)`.
    pub theta: f64,
    /// `G(L) = h(c - L) - h(c)`.
    pub g_value: f64,
    /// `|L h'(c) - h(c) + h(c - L)|` at the returned `c`.
    pub residual: f64,
}

impl TangentSolution {
    /// The second expression for `G(L)`, `-L h'(c)`.
    pub fn g_from_slope(&self) -> f64 {
        -self.l * hill_deriv_unchecked(self.c)
    }
}

/// Finds `c(L)` by Brent's method on `[εL, L - εL]`.
/// Below this `L` the root and `G` come from their power series in `L`.
const SERIES_CUTOFF: f64 = 1e-2;

pub fn solve_tangent(l: f64, tol: f64) -> Result<TangentSolution> {
    check_finite("L", l)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    if l > 700.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, 700]" });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "tol", value: tol, domain: "(0, ∞)" });
    }
    if l < SERIES_CUTOFF {
        // The residual is O(L³) and drowns in rounding; use the expansion.
        let l2 = l * l;
        let c = l * (1.0 / 3.0 - l2 / 162.0 + 23.0 * l2 * l2 / 68040.0);
        let g_value = l * (1.0 - l2 / 18.0 + l2 * l2 / 216.0 - 179.0 * l2 * l2 * l2 / 408240.0);
        return Ok(TangentSolution {
            l,
            c,
            theta: hill_unchecked(c),
            g_value,
            residual: tangent_residual(c, l).abs(),
        });
    }
    let eps = 1e-12 * l;
    let opts = RootOptions {
        ftol: tol,
        xtol: 4.0 * f64::EPSILON * l,
        max_iter: 300,
    };
    let root = brent(|c| tangent_residual(c, l), eps, l - eps, opts)?;
    let c = root.x;
    let theta = hill_unchecked(c);
    let g_value = hill_drop(c, l);
    Ok(TangentSolution {
        l,
        c,
        theta,
        g_value,
        residual: tangent_residual(c, l).abs(),
    })
}

/// `G(L)` at the default residual target.
pub fn g_func(l: f64) -> Result<f64> {
    Ok(solve_tangent(l, DEFAULT_TANGENT_TOL)?.g_value)
}

/// `Θ(L)`.
pub fn theta_func(l: f64) -> Result<f64> {
    Ok(solve_tangent(l, DEFAULT_TANGENT_TOL)?.theta)
}
