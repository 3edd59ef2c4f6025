//! Bracketed root finding (Brent's method).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Stop once `|f(x)|` falls below this value ...
    pub ftol: f64,
    /// ... and the sign-change bracket is no wider than this.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            ftol: f64::INFINITY,
            xtol: 1e-14,
            max_iter: 200,
        }
    }
}

/// Result of [`brent`]. `bracket` always encloses a verified sign change
/// (or an exact zero at `x`).
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

impl Root {
    pub fn width(&self) -> f64 {
        (self.bracket.1 - self.bracket.0).abs()
    }
}

/// Brent's method on `[a, b]`.
///
/// Combines inverse quadratic interpolation and secant steps with a
/// bisection safeguard. Fails with [`Error::Bracket`] when `f(a)` and
/// `f(b)` have the same sign and with [`Error::NoConvergence`] when the
/// residual target is not met before the bracket collapses or the
/// iteration cap is hit.
pub fn brent<F>(mut f: F, a: f64, b: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() {
        return Err(Error::non_finite("f(a)", fa));
    }
    if !fb.is_finite() {
        return Err(Error::non_finite("f(b)", fb));
    }
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, bracket: (b, b), iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { a, b, fa, fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let machine = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let half = 0.5 * (c - b);
        let width = (c - b).abs();
        let width_ok = width <= opts.xtol || half.abs() <= machine;
        if fb == 0.0 || (width_ok && fb.abs() < opts.ftol) {
            return Ok(finish(b, fb, c, iter));
        }
        if half.abs() <= machine {
            // Bracket collapsed without meeting the residual target.
            return Err(Error::NoConvergence {
                method: "brent",
                iterations: iter,
                residual: fb.abs(),
                tol: opts.ftol,
            });
        }

        let tol1 = machine + 0.5 * opts.xtol.min(0.1 * width);
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * half * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(half) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::non_finite("f(x)", fb));
        }
    }
    Err(Error::NoConvergence {
        method: "brent",
        iterations: opts.max_iter,
        residual: fb.abs(),
        tol: opts.ftol,
    })
}

fn finish(b: f64, fb: f64, c: f64, iterations: usize) -> Root {
    let bracket = if fb == 0.0 { (b, b) } else { (b.min(c), b.max(c)) };
    Root { x: b, fx: fb, bracket, iterations }
}
