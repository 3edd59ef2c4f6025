//! The parameter problem: choose prevertices so that every finite side has
//! the right length relative to side 0.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::quad::{gaps_of, side_integral};
use super::{SCMap, CROWDING_GAP, DEFAULT_MAX_ITER, DEFAULT_QUAD_ORDER, DEFAULT_SC_TOL};
use crate::error::{Error, Result};
use crate::numerics::RuleCache;
use crate::region::GeneralizedPolygon;

#[derive(Debug, Clone)]
pub struct ScOptions {
    pub quad_order: usize,
    /// Target max-norm of the log side-length residuals.
    pub tol: f64,
    pub max_iter: usize,
    /// Finite prevertices `pin` and `pin + 1` are fixed at `-1` and `0`.
    pub pin: usize,
}

impl Default for ScOptions {
    fn default() -> Self {
        ScOptions {
            quad_order: DEFAULT_QUAD_ORDER,
            tol: DEFAULT_SC_TOL,
            max_iter: DEFAULT_MAX_ITER,
            pin: 0,
        }
    }
}

/// Unknowns are `ln(z_{i+1} - z_i)` for every gap `i` except the pinned one.
struct Problem<'a> {
    betas: &'a [f64],
    log_lengths: Vec<f64>,
    pin: usize,
    rules: &'a RuleCache,
}

impl Problem<'_> {
    fn m(&self) -> usize {
        self.betas.len()
    }

    fn gap_of_unknown(&self, u: usize) -> usize {
        if u < self.pin {
            u
        } else {
            u + 1
        }
    }

    fn gaps(&self, u: &DVector<f64>) -> Vec<f64> {
        (0..self.m() - 1)
            .map(|g| match g.cmp(&self.pin) {
                std::cmp::Ordering::Less => u[g].exp(),
                std::cmp::Ordering::Equal => 1.0,
                std::cmp::Ordering::Greater => u[g - 1].exp(),
            })
            .collect()
    }

    fn prevertices(&self, u: &DVector<f64>) -> Vec<f64> {
        let m = self.m();
        let p = self.pin;
        let mut z = vec![0.0; m];
        z[p] = -1.0;
        z[p + 1] = 0.0;
        for i in p + 1..m - 1 {
            z[i + 1] = z[i] + u[i - 1].exp();
        }
        for i in (0..p).rev() {
            z[i] = z[i + 1] - u[i].exp();
        }
        z
    }

    /// Residuals `ln(I_j/I_0) - ln(ℓ_j/ℓ_0)` for `j = 1..m-1`, with the
    /// Jacobian in the unknowns when requested.
    fn evaluate(&self, u: &DVector<f64>, jacobian: bool) -> (DVector<f64>, Option<DMatrix<f64>>) {
        let m = self.m();
        let gaps = self.gaps(u);
        let n = m - 2;
        let mut grads = vec![vec![0.0; m]; if jacobian { m - 1 } else { 0 }];
        let mut ints = vec![0.0; m - 1];
        for j in 0..m - 1 {
            let g = if jacobian { Some(grads[j].as_mut_slice()) } else { None };
            ints[j] = side_integral(j, &gaps, self.betas, self.rules, g);
        }
        let r = DVector::from_fn(n, |i, _| {
            let j = i + 1;
            (ints[j] / ints[0]).ln() - (self.log_lengths[j] - self.log_lengths[0])
        });
        if !jacobian {
            return (r, None);
        }
        // Derivatives with respect to the prevertices.
        let jz = DMatrix::from_fn(n, m, |i, k| grads[i + 1][k] / ints[i + 1] - grads[0][k] / ints[0]);
        // Chain rule through the cumulative gaps.
        let mut ju = DMatrix::zeros(n, n);
        for col in 0..n {
            let gap = self.gap_of_unknown(col);
            let g = gaps[gap];
            for row in 0..n {
                let s: f64 = if gap > self.pin {
                    (gap + 1..m).map(|k| jz[(row, k)]).sum::<f64>() * g
                } else {
                    -(0..=gap).map(|k| jz[(row, k)]).sum::<f64>() * g
                };
                ju[(row, col)] = s;
            }
        }
        (r, Some(ju))
    }
}

fn max_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a: f64, x| a.max(x.abs()))
}

pub(super) fn solve(polygon: &GeneralizedPolygon, opts: &ScOptions) -> Result<SCMap> {
    if opts.quad_order == 0 || !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::Precondition("solver options must be positive".into()));
    }
    let vertices = polygon.finite_vertices();
    let (alphas, _) = polygon.finite_angles();
    let m = vertices.len();
    let betas: Vec<f64> = alphas.iter().map(|a| a - 1.0).collect();
    let rules = RuleCache::new(opts.quad_order);
    if m > 1 && opts.pin + 1 >= m {
        return Err(Error::Precondition(format!("pin index {} needs a following vertex", opts.pin)));
    }

    let (prevertices, iterations, residual) = if m == 1 {
        (vec![0.0], 0, 0.0)
    } else if m == 2 {
        (vec![-1.0, 0.0], 0, 0.0)
    } else {
        newton(&betas, &polygon.side_lengths(), opts, &rules)?
    };

    let (scale, shift) = if m == 1 {
        let (_, d_out) = polygon.ray_directions();
        (d_out, vertices[0])
    } else {
        // Side 0 runs along arg C + π Σ_{k>0} β_k.
        let i0 = side_integral(0, &gaps_of(&prevertices), &betas, &rules, None);
        let phase: f64 = betas[1..].iter().sum::<f64>() * std::f64::consts::PI;
        ((vertices[1] - vertices[0]) / (Complex64::from_polar(i0, phase)), vertices[0])
    };

    let images = vertex_images(&prevertices, &betas, scale, shift, &rules);
    let accuracy = images.iter().zip(&vertices).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let mut warnings = Vec::new();
    for (i, p) in prevertices.windows(2).enumerate() {
        if p[1] - p[0] < CROWDING_GAP {
            warnings.push(format!("prevertices {i} and {} are crowded (gap {:.3e})", i + 1, p[1] - p[0]));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(SCMap {
        polygon: polygon.clone(),
        vertices,
        prevertices,
        betas,
        affine_scale: scale,
        affine_shift: shift,
        quad_order: opts.quad_order,
        tol: opts.tol,
        accuracy,
        iterations,
        residual,
        pin: if m == 1 { 0 } else { opts.pin },
        warnings,
        rules,
    })
}

/// Damped Newton with a backtracking line search on the residual max-norm.
fn newton(betas: &[f64], lengths: &[f64], opts: &ScOptions, rules: &RuleCache) -> Result<(Vec<f64>, usize, f64)> {
    let m = betas.len();
    let problem = Problem {
        betas,
        log_lengths: lengths.iter().map(|l| l.ln()).collect(),
        pin: opts.pin,
        rules,
    };
    // Gaps proportional to side lengths, pinned gap normalized to 1.
    let ref_len = lengths[opts.pin];
    let mut u = DVector::from_fn(m - 2, |i, _| (lengths[problem.gap_of_unknown(i)] / ref_len).ln());
    let (mut r, _) = problem.evaluate(&u, false);
    let mut norm = max_norm(&r);
    let mut iter = 0;
    while iter < opts.max_iter {
        if norm < opts.tol {
            break;
        }
        iter += 1;
        let (_, jac) = problem.evaluate(&u, true);
        let jac = jac.expect("jacobian requested");
        let step = jac.lu().solve(&(-&r)).ok_or_else(|| Error::ScParameters {
            iterations: iter,
            max_residual: norm,
            residuals: r.iter().copied().collect(),
        })?;
        // Keep any single log-gap change moderate.
        let biggest = max_norm(&step);
        let cap = if biggest > 2.0 { 2.0 / biggest } else { 1.0 };
        let mut lambda = cap;
        let mut improved = false;
        for _ in 0..30 {
            let trial = &u + &step * lambda;
            let (rt, _) = problem.evaluate(&trial, false);
            let nt = max_norm(&rt);
            if nt.is_finite() && nt < norm * (1.0 - 1e-4 * lambda) {
                u = trial;
                r = rt;
                norm = nt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if !(norm < opts.tol) {
        return Err(Error::ScParameters {
            iterations: iter,
            max_residual: norm,
            residuals: r.iter().copied().collect(),
        });
    }
    Ok((problem.prevertices(&u), iter, norm))
}

/// `A + C Σ_{i<k} e^{iπ Σ_{l>i} β_l} I_i`.
pub(super) fn vertex_images(
    z: &[f64],
    betas: &[f64],
    scale: Complex64,
    shift: Complex64,
    rules: &RuleCache,
) -> Vec<Complex64> {
    let m = z.len();
    let mut out = Vec::with_capacity(m);
    let mut w = shift;
    out.push(w);
    let mut tail: f64 = betas.iter().skip(1).sum();
    let gaps = gaps_of(z);
    for i in 0..m.saturating_sub(1) {
        let len = side_integral(i, &gaps, betas, rules, None);
        w += scale * Complex64::from_polar(len, std::f64::consts::PI * tail);
        out.push(w);
        tail -= betas[i + 1];
    }
    out
}
