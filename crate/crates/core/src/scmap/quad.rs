//! Compound Gauss–Jacobi integration of the Schwarz–Christoffel integrand
//! `Π_k (ζ - z_k)^{β_k}` with real prevertices `z_k` and `β_k = α_k - 1`.
//!
//! Every integration piece is at most half as long as its distance to the
//! nearest singularity that is not one of its own (weighted) endpoints.

use num_complex::Complex64;

use crate::numerics::RuleCache;

/// One piece `[lo, hi]` of a subdivided interval, flagged when an end is a
/// singular prevertex absorbed into the Jacobi weight.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub sing_lo: bool,
    pub sing_hi: bool,
}

/// Bisects `[0, 1]` (a path parameter) until every piece satisfies
/// `len ≤ ½·dist(piece)`, where `dist(lo, hi, sing_lo, sing_hi)` is the
/// distance from the piece to the nearest relevant singularity in
/// parameter units.
pub(crate) fn subdivide<D>(sing_lo: bool, sing_hi: bool, dist: D) -> Vec<Piece>
where
    D: Fn(f64, f64, bool, bool) -> f64,
{
    let mut out = Vec::new();
    let mut stack = vec![Piece { lo: 0.0, hi: 1.0, sing_lo, sing_hi }];
    while let Some(p) = stack.pop() {
        let len = p.hi - p.lo;
        let d = dist(p.lo, p.hi, p.sing_lo, p.sing_hi);
        if len <= 0.5 * d || len < 1e-15 {
            out.push(p);
            continue;
        }
        let mid = 0.5 * (p.lo + p.hi);
        // Push right first so pieces come out left to right.
        stack.push(Piece { lo: mid, hi: p.hi, sing_lo: false, sing_hi: p.sing_hi });
        stack.push(Piece { lo: p.lo, hi: mid, sing_lo: p.sing_lo, sing_hi: false });
    }
    out
}

/// `∫_{z_j}^{z_{j+1}} Π_k |x - z_k|^{β_k} dx` and, optionally, its gradient
/// with respect to every prevertex.
///
/// Prevertices enter only through `gaps[i] = z_{i+1} - z_i`, so distances to
/// close neighbours keep full relative precision when prevertices crowd.
pub(crate) fn side_integral(
    j: usize,
    gaps: &[f64],
    beta: &[f64],
    rules: &RuleCache,
    grad: Option<&mut [f64]>,
) -> f64 {
    let m = gaps.len() + 1;
    let delta = gaps[j];
    // |z_j - z_k| for k < j and |z_k - z_{j+1}| for k > j + 1.
    let mut behind = vec![0.0; m];
    for k in (0..j).rev() {
        behind[k] = behind[k + 1] + gaps[k];
    }
    for k in j + 2..m {
        behind[k] = behind[k - 1] + gaps[k - 1];
    }
    let left_gap = if j > 0 { gaps[j - 1] } else { f64::INFINITY };
    let right_gap = if j + 2 < m { gaps[j + 1] } else { f64::INFINITY };
    // Distances in units of the side length.
    let dist = |lo: f64, hi: f64, sl: bool, sh: bool| -> f64 {
        let mut d = (delta * lo + left_gap).min(delta * (1.0 - hi) + right_gap);
        if !sl {
            d = d.min(delta * lo);
        }
        if !sh {
            d = d.min(delta * (1.0 - hi));
        }
        d / delta
    };
    let pieces = subdivide(true, true, dist);

    // Signed x - z_k from the node's distances to both ends of the side.
    let offset = |k: usize, from_left: f64, from_right: f64| -> f64 {
        if k < j {
            from_left + behind[k]
        } else if k == j {
            from_left
        } else if k == j + 1 {
            -from_right
        } else {
            -(from_right + behind[k])
        }
    };

    let want_grad = grad.is_some();
    let mut g_acc = grad;
    let mut total = 0.0;
    // Σ_i c_i T(x_i)(z_{j+1} - x_i) and Σ_i c_i T(x_i)(x_i - z_j).
    let (mut t_left, mut t_right) = (0.0, 0.0);
    for p in &pieces {
        let half_t = 0.5 * (p.hi - p.lo);
        let half = delta * half_t;
        let ea = if p.sing_hi { beta[j + 1] } else { 0.0 };
        let eb = if p.sing_lo { beta[j] } else { 0.0 };
        let rule = rules.get(ea, eb);
        let scale = half * half.powf(ea + eb);
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let from_left = delta * (p.lo + half_t * (1.0 + u));
            let from_right = delta * ((1.0 - p.hi) + half_t * (1.0 - u));
            let mut log_sum = 0.0;
            for k in 0..m {
                if (k == j && p.sing_lo) || (k == j + 1 && p.sing_hi) {
                    continue;
                }
                log_sum += beta[k] * offset(k, from_left, from_right).abs().ln();
            }
            let c = scale * w * log_sum.exp();
            total += c;
            if let Some(g) = g_acc.as_deref_mut() {
                let mut t = 0.0;
                for k in 0..m {
                    if k == j || k == j + 1 {
                        continue;
                    }
                    let r = beta[k] / offset(k, from_left, from_right);
                    t += r;
                    g[k] -= c * r;
                }
                t_left += c * t * from_right;
                t_right += c * t * from_left;
            }
        }
    }
    if want_grad {
        let g = g_acc.expect("gradient buffer");
        let homog = 1.0 + beta[j] + beta[j + 1];
        g[j] += -homog * total / delta + t_left / delta;
        g[j + 1] += homog * total / delta + t_right / delta;
    }
    total
}

/// Consecutive differences of sorted prevertices.
pub(crate) fn gaps_of(z: &[f64]) -> Vec<f64> {
    z.windows(2).map(|w| w[1] - w[0]).collect()
}

/// `Π_k (ζ - z_k)^{β_k}` on the closed upper half-plane (principal branches,
/// arguments in `[0, π]`).
pub(crate) fn integrand(zeta: Complex64, z: &[f64], beta: &[f64], skip: Option<usize>) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    let y = if zeta.im > 0.0 { zeta.im } else { 0.0 };
    for (k, (&zk, &bk)) in z.iter().zip(beta).enumerate() {
        if Some(k) == skip {
            continue;
        }
        let dx = zeta.re - zk;
        re += 0.5 * bk * (dx * dx + y * y).ln();
        im += bk * y.atan2(dx);
    }
    Complex64::from_polar(re.exp(), im)
}

/// `z^β` with the argument of `z` taken in `[0, π]`.
pub(crate) fn upper_pow(z: Complex64, beta: f64) -> Complex64 {
    let y = if z.im > 0.0 { z.im } else { 0.0 };
    let arg = y.atan2(z.re);
    Complex64::from_polar(z.norm().powf(beta), beta * arg)
}

/// `∫_{z_k}^{target} Π (ζ - z_j)^{β_j} dζ` along the straight segment, where
/// `start` is either a prevertex index (singular start) or a regular point.
pub(crate) fn path_integral(
    start: PathStart,
    target: Complex64,
    z: &[f64],
    beta: &[f64],
    rules: &RuleCache,
) -> Complex64 {
    let (origin, sing) = match start {
        PathStart::Prevertex(k) => (Complex64::new(z[k], 0.0), Some(k)),
        PathStart::Point(p) => (p, None),
    };
    let dir = target - origin;
    let len = dir.norm();
    if len == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let dist = |lo: f64, hi: f64, sl: bool, _sh: bool| -> f64 {
        let a = origin + dir * lo;
        let b = origin + dir * hi;
        let mut d = f64::INFINITY;
        for (k, &zk) in z.iter().enumerate() {
            if sl && Some(k) == sing {
                continue;
            }
            d = d.min(point_segment_distance(Complex64::new(zk, 0.0), a, b));
        }
        d / len
    };
    let pieces = subdivide(sing.is_some(), false, dist);
    let mut total = Complex64::new(0.0, 0.0);
    for p in &pieces {
        let half = 0.5 * (p.hi - p.lo);
        let mid = 0.5 * (p.hi + p.lo);
        if p.sing_lo {
            let k = sing.expect("singular start");
            let bk = beta[k];
            let rule = rules.get(0.0, bk);
            // (ζ - z_k)^{β_k} = dir^{β_k} (half)^{β_k} (1+u)^{β_k}
            let pref = upper_pow(dir, bk) * half.powf(bk) * dir * half;
            let mut acc = Complex64::new(0.0, 0.0);
            for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                let zeta = origin + dir * (mid + half * u);
                acc += integrand(zeta, z, beta, Some(k)) * w;
            }
            total += pref * acc;
        } else {
            let rule = rules.get(0.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                let zeta = origin + dir * (mid + half * u);
                acc += integrand(zeta, z, beta, None) * w;
            }
            total += dir * half * acc;
        }
    }
    total
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum PathStart {
    Prevertex(usize),
    Point(Complex64),
}

pub(crate) fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / l2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivision_respects_distance_rule() {
        // Singularity just left of 0 at distance 1e-3.
        let pieces = subdivide(true, true, |lo, hi, sl, _| {
            let d = lo + 1e-3;
            let _ = hi;
            if sl { (1e-3f64).max(0.0) + 1.0 } else { d }
        });
        assert!(pieces.len() > 1);
        let mut x = 0.0;
        for p in &pieces {
            assert_eq!(p.lo, x);
            x = p.hi;
        }
        assert_eq!(x, 1.0);
    }

    #[test]
    fn arcsine_side() {
        // ∫_{-1}^{1} (x+1)^{-1/2} (1-x)^{-1/2} dx = π (sign of (x-1)^{-1/2} ignored in modulus).
        let rules = RuleCache::new(8);
        let z = [-1.0, 1.0];
        let beta = [-0.5, -0.5];
        let v = side_integral(0, &gaps_of(&z), &beta, &rules, None);
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let rules = RuleCache::new(8);
        let z = vec![-1.0, 0.0, 0.3, 0.35, 1.2, 2.0];
        let beta = vec![0.5, -0.5, -0.5, 0.5, 0.5, -0.5];
        for j in 0..z.len() - 1 {
            let mut g = vec![0.0; z.len()];
            side_integral(j, &gaps_of(&z), &beta, &rules, Some(&mut g));
            for k in 0..z.len() {
                let h = 1e-7;
                let mut zp = z.clone();
                zp[k] += h;
                let mut zm = z.clone();
                zm[k] -= h;
                let fd = (side_integral(j, &gaps_of(&zp), &beta, &rules, None)
                    - side_integral(j, &gaps_of(&zm), &beta, &rules, None))
                    / (2.0 * h);
                assert!((fd - g[k]).abs() < 1e-6 * (1.0 + fd.abs()), "side {j}, z_{k}: {fd} vs {}", g[k]);
            }
        }
    }
}
