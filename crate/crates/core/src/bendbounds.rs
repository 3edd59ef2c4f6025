//! Scalar bounds on bending and shearing: `c₁(L)`, `f(L, x)`, `g(L, x)`,
//! the threshold `L₀` and the region profile `Q(L, x)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::numerics::{brent, RootOptions};
use crate::specialfn::g_func;

/// Upper end of the domain of [`c1`], `2·asinh(1)`.
pub fn c1_domain_max() -> f64 {
    2.0 * 1f64.asinh()
}

/// `c₁(L) = 2·acos(-sinh(L/2))`, the bound on the bending of an embedded
/// pleated plane with L-roundness at most 1.
pub fn c1(l: f64) -> Result<f64> {
    check_finite("L", l)?;
    if l <= 0.0 || l >= c1_domain_max() {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, 2·asinh 1)" });
    }
    Ok(2.0 * (-(0.5 * l).sinh()).acos())
}

/// `asinh(e^{t} sinh L)` for `t ≥ 0`, stable when `e^t` overflows.
fn asinh_scaled_up(l: f64, t: f64) -> f64 {
    let ln_sinh = if l > 20.0 {
        l - std::f64::consts::LN_2
    } else {
        l.sinh().ln()
    };
    let ln_y = t + ln_sinh;
    if ln_y > 20.0 {
        // asinh y = ln(2y) + 1/(4y²) + ...
        ln_y + std::f64::consts::LN_2 + 0.25 * (-2.0 * ln_y).exp()
    } else {
        ln_y.exp().asinh()
    }
}

/// `f(L, x) = min(L e^{|x|/2}, asinh(e^{|x|} sinh L))`.
pub fn f_shear(l: f64, x: f64) -> Result<f64> {
    check_finite("L", l)?;
    check_finite("x", x)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    Ok(f_shear_unchecked(l, x))
}

pub(crate) fn f_shear_unchecked(l: f64, x: f64) -> f64 {
    let t = x.abs();
    let exp_branch = l * (0.5 * t).exp();
    exp_branch.min(asinh_scaled_up(l, t))
}

/// `g(L, x) = max(L e^{-|x|/2}, asinh(e^{-|x|} sinh L))`.
pub fn g_shear(l: f64, x: f64) -> Result<f64> {
    check_finite("L", l)?;
    check_finite("x", x)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    Ok(g_shear_unchecked(l, x))
}

pub(crate) fn g_shear_unchecked(l: f64, x: f64) -> f64 {
    let t = x.abs();
    let exp_branch = l * (-0.5 * t).exp();
    let sinh_branch = if l > 20.0 {
        // e^{-t} sinh L without overflow.
        (l - t - std::f64::consts::LN_2).exp().asinh()
    } else {
        ((-t).exp() * l.sinh()).asinh()
    };
    exp_branch.max(sinh_branch)
}

/// `L₀`, the positive root of `2 tanh L = L`. Below it `g(L, x) = L e^{-|x|/2}`.
pub fn solve_l0(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "tol", value: tol, domain: "(0, ∞)" });
    }
    let root = brent(
        |l| 2.0 * l.tanh() - l,
        1.0,
        3.0,
        RootOptions { ftol: tol, xtol: 1e-15, max_iter: 200 },
    )?;
    Ok(root.x)
}

/// Number of length-`L` arcs needed to cover length `f`, i.e. `⌈f/L⌉`.
///
/// Within `1e-12` (relative) of an integer the larger candidate is returned,
/// which can only lower the ceiling branch of [`q_bound`].
pub(crate) fn ceil_ratio(f: f64, l: f64) -> u64 {
    let r = f / l;
    let near = r.round();
    if (r - near).abs() <= 1e-12 * r.max(1.0) {
        near as u64 + 1
    } else {
        r.ceil() as u64
    }
}

/// Exact ceiling `⌈f(L, x)/L⌉` as used by the definition of `Q`.
pub fn ceil_count(l: f64, x: f64) -> u64 {
    (f_shear_unchecked(l, x) / l).ceil() as u64
}

/// The two branches of `Q(L, x)`: `G(L)/⌈f(L,x)/L⌉` and `G(g(L, x))`.
pub fn q_branches(l: f64, x: f64) -> Result<(f64, f64)> {
    check_finite("x", x)?;
    let g = g_func(l)?;
    let k = ceil_count(l, x).max(1);
    let inner = g_shear_unchecked(l, x);
    let second = if inner > 0.0 { g_func(inner)? } else { 0.0 };
    Ok((g / k as f64, second))
}

/// `Q(L, x) = max(G(L)/⌈f(L,x)/L⌉, G(g(L, x)))`.
pub fn q_bound(l: f64, x: f64) -> Result<f64> {
    check_finite("L", l)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    let (a, b) = q_branches(l, x)?;
    Ok(a.max(b))
}

/// Jump locations and branch crossings of `Q(L, ·)` on `[0, x_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QProfile {
    #[serde(rename = "L")]
    pub l: f64,
    pub x_max: f64,
    /// Solutions of `f(L, x) = kL` for `k = 2, 3, ...`, ascending.
    pub jump_abscissas: Vec<f64>,
    /// Brackets `[lo, hi]` (each at most `1e-10` wide) with `f(L, lo) < kL ≤ f(L, hi)`.
    pub jump_brackets: Vec<(f64, f64)>,
    /// Brackets of sign changes of `G(L)/⌈f/L⌉ - G(g(L, x))` inside
    /// intervals where the ceiling is constant.
    pub crossover_intervals: Vec<(f64, f64)>,
    /// Both branch values at each crossover midpoint.
    pub crossover_branch_values: Vec<(f64, f64)>,
}

/// Largest admissible bracket width for jumps and crossovers.
pub const PROFILE_RESOLUTION: f64 = 1e-10;

/// Inverse of `f(L, ·)` on `[0, ∞)` at level `y ≥ L`.
fn f_inverse(l: f64, y: f64) -> f64 {
    // f = min of two increasing branches, so it reaches y once both do.
    let x_exp = 2.0 * (y / l).ln();
    let ln_sinh = |v: f64| {
        if v > 20.0 {
            v - std::f64::consts::LN_2 + (-2.0 * v).exp_m1().ln_1p()
        } else {
            v.sinh().ln()
        }
    };
    let x_sinh = ln_sinh(y) - ln_sinh(l);
    x_exp.max(x_sinh).max(0.0)
}

/// Brackets the solution of `f(L, x) = kL` to width `PROFILE_RESOLUTION`.
fn bracket_jump(l: f64, k: u64) -> Result<(f64, f64)> {
    let target = k as f64 * l;
    let guess = f_inverse(l, target);
    let below = |x: f64| f_shear_unchecked(l, x) < target;
    let mut step = 1e-12 * guess.max(1.0);
    let (mut lo, mut hi) = (guess - step, guess + step);
    for _ in 0..200 {
        if below(lo) && !below(hi) {
            break;
        }
        step *= 2.0;
        lo = (guess - step).max(0.0);
        hi = guess + step;
    }
    if !(below(lo) && !below(hi)) {
        return Err(Error::NoConvergence {
            method: "jump bracketing",
            iterations: 200,
            residual: f_shear_unchecked(l, guess) - target,
            tol: PROFILE_RESOLUTION,
        });
    }
    while hi - lo > PROFILE_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Locates every jump of the ceiling branch and every crossing of the two
/// branches of `Q(L, ·)` on `[0, x_max]`.
pub fn q_profile(l: f64, x_max: f64) -> Result<QProfile> {
    check_finite("L", l)?;
    check_finite("x_max", x_max)?;
    if l <= 0.0 {
        return Err(Error::Domain { what: "L", value: l, domain: "(0, ∞)" });
    }
    if x_max <= 0.0 {
        return Err(Error::Domain { what: "x_max", value: x_max, domain: "(0, ∞)" });
    }
    let g_l = g_func(l)?;
    let f_max = f_shear_unchecked(l, x_max);
    let mut jump_abscissas = Vec::new();
    let mut jump_brackets = Vec::new();
    let mut k = 2u64;
    while (k as f64) * l <= f_max {
        let (lo, hi) = bracket_jump(l, k)?;
        if lo > x_max {
            break;
        }
        jump_abscissas.push(0.5 * (lo + hi));
        jump_brackets.push((lo, hi));
        k += 1;
    }

    // Between consecutive jumps the ceiling equals a constant m and the
    // difference G/m - G(g(L,x)) is increasing in x, so it changes sign at
    // most once per piece.
    let mut crossover_intervals = Vec::new();
    let mut crossover_branch_values = Vec::new();
    let mut edges = vec![0.0];
    edges.extend(jump_brackets.iter().map(|b| b.0));
    edges.push(x_max);
    let mut piece_starts: Vec<f64> = vec![0.0];
    piece_starts.extend(jump_brackets.iter().map(|b| b.1));
    for (i, (&start, &end)) in piece_starts.iter().zip(edges.iter().skip(1)).enumerate() {
        if end <= start {
            continue;
        }
        let m = (i + 2) as f64;
        let diff = |x: f64| -> f64 {
            let inner = g_shear_unchecked(l, x);
            let second = if inner > 0.0 { g_func(inner).unwrap_or(0.0) } else { 0.0 };
            g_l / m - second
        };
        // Start strictly inside the piece where the ceiling equals m.
        let a = if i == 0 { start + 1e-300 } else { start };
        let (da, db) = (diff(a), diff(end));
        if da < 0.0 && db > 0.0 {
            let root = brent(
                diff,
                a,
                end,
                RootOptions { ftol: f64::INFINITY, xtol: PROFILE_RESOLUTION, max_iter: 300 },
            )?;
            let (lo, hi) = root.bracket;
            if hi - lo > PROFILE_RESOLUTION {
                return Err(Error::NoConvergence {
                    method: "crossover isolation",
                    iterations: root.iterations,
                    residual: hi - lo,
                    tol: PROFILE_RESOLUTION,
                });
            }
            let mid = 0.5 * (lo + hi);
            let (b1, b2) = q_branches(l, mid)?;
            crossover_intervals.push((lo, hi));
            crossover_branch_values.push((b1, b2));
        }
    }

    Ok(QProfile {
        l,
        x_max,
        jump_abscissas,
        jump_brackets,
        crossover_intervals,
        crossover_branch_values,
    })
}

/// Smallest `x` (to within 1e-6) with `Q(L, x) < threshold`, scanning outward.
pub fn q_tail_abscissa(l: f64, threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::Domain { what: "threshold", value: threshold, domain: "(0, ∞)" });
    }
    let mut hi = 1.0;
    while q_bound(l, hi)? >= threshold {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Domain { what: "threshold", value: threshold, domain: "too small" });
        }
    }
    // Q is not monotone across jumps, so refine on a scan from below.
    let mut lo = 0.0;
    let mut x = 0.0;
    let step = (hi / 4096.0).max(1e-3);
    while x < hi {
        if q_bound(l, x)? >= threshold {
            lo = x;
        }
        x += step;
    }
    let mut a = lo;
    let mut b = (lo + step).min(hi);
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        if q_bound(l, m)? >= threshold { a = m } else { b = m }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn c1_reference_values() {
        assert!((c1(1e-12).unwrap() - PI).abs() < 1e-6);
        assert!((c1(1.48).unwrap() - 5.027888826784).abs() < 1e-9);
        assert!((c1(c1_domain_max() - 1e-12).unwrap() - 2.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn c1_domain() {
        assert!(c1(0.0).is_err());
        assert!(c1(c1_domain_max()).is_err());
        assert!(c1(2.0).is_err());
        assert!(c1(f64::NAN).is_err());
    }

    #[test]
    fn c1_increasing() {
        let mut prev = c1(0.01).unwrap();
        for i in 2..170 {
            let v = c1(i as f64 * 0.01).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn shear_at_zero() {
        assert_eq!(f_shear(1.48, 0.0).unwrap(), 1.48);
        assert_eq!(g_shear(1.48, 0.0).unwrap(), 1.48);
    }

    #[test]
    fn f_at_one_four() {
        // Independent 40-digit evaluation: asinh(e⁴ sinh 1) = 4.8546472605076857...
        let expected = 4.854_647_260_507_685_7_f64;
        assert!((f_shear(1.0, 4.0).unwrap() - expected).abs() < 1e-14);
        assert!(f_shear(1.0, 4.0).unwrap() < (2.0f64).exp());
    }

    #[test]
    fn g_exponential_branch_below_l0() {
        let v = g_shear(1.48, 3.0).unwrap();
        assert!((v - 1.48 * (-1.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn l0_reference() {
        let l0 = solve_l0(1e-10).unwrap();
        assert!((l0 - 1.91501).abs() < 1e-5);
        assert!((2.0 * l0.tanh() - l0).abs() < 1e-10);
        assert!(2.0 * 1f64.tanh() - 1.0 > 0.0);
        assert!(2.0 * 3f64.tanh() - 3.0 < 0.0);
    }

    #[test]
    fn large_x_is_finite() {
        let f = f_shear(1.48, 5000.0).unwrap();
        assert!(f.is_finite() && f > 5000.0);
        assert!(g_shear(1.48, 5000.0).unwrap() >= 0.0);
    }

    #[test]
    fn q_at_origin_is_g() {
        assert_eq!(q_bound(1.48, 0.0).unwrap(), g_func(1.48).unwrap());
    }

    #[test]
    fn q_at_fifty_by_direct_evaluation() {
        // Both branches evaluated directly: ⌈f(1.48, 50)/1.48⌉ = 35 and
        // G(1.48 e^{-25}) ≈ 2e-11, so Q = G(1.48)/35.
        let q = q_bound(1.48, 50.0).unwrap();
        let f = 50.0 + (2.0 * 1.48f64.sinh()).ln();
        assert_eq!((f / 1.48).ceil(), 35.0);
        assert!((q - g_func(1.48).unwrap() / 35.0).abs() < 1e-15);
        assert!(q < g_func(1.48).unwrap());
    }

    #[test]
    fn first_jump_solves_f_equals_2l() {
        let p = q_profile(1.48, 20.0).unwrap();
        let x = p.jump_abscissas[0];
        assert!((f_shear(1.48, x).unwrap() - 2.0 * 1.48).abs() < 1e-9);
        for (lo, hi) in &p.jump_brackets {
            assert!(hi - lo <= PROFILE_RESOLUTION);
        }
    }

    #[test]
    fn crossovers_change_sign() {
        let p = q_profile(1.48, 20.0).unwrap();
        assert!(!p.crossover_intervals.is_empty());
        for &(lo, hi) in &p.crossover_intervals {
            let (a1, b1) = q_branches(1.48, lo).unwrap();
            let (a2, b2) = q_branches(1.48, hi).unwrap();
            assert!((a1 - b1) * (a2 - b2) <= 0.0, "[{lo}, {hi}]");
            assert!(hi - lo <= PROFILE_RESOLUTION);
        }
    }
}
