//! Gauss–Jacobi rules on `[-1, 1]` for the weight `(1 - u)^a (1 + u)^b`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

/// Nodes and weights of an `n`-point Gauss–Jacobi rule.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    /// Golub–Welsch construction from the symmetric Jacobi matrix.
    ///
    /// `a` is the exponent at `u = 1`, `b` the exponent at `u = -1`; both must exceed `-1`.
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
        let ab = a + b;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let diag = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * kf + ab;
                (b * b - a * a) / (s * (s + 2.0))
            };
            m[(k, k)] = diag;
            if k + 1 < n {
                let j = kf + 1.0;
                let s = 2.0 * j + ab;
                let off2 = if k == 0 {
                    // (1 + a + b) cancels between numerator and denominator.
                    4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                let off = off2.sqrt();
                m[(k, k + 1)] = off;
                m[(k + 1, k)] = off;
            }
        }
        let eig = m.symmetric_eigen();
        let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(ab + 2.0);
        let mu0 = ln_mu0.exp();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        GaussJacobi {
            a,
            b,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{-1}^{1} (1-u)^a (1+u)^b f(u) du`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(u)).sum()
    }
}

/// Thread-safe memo of rules keyed by `(a, b)` for a fixed order.
#[derive(Debug)]
pub struct RuleCache {
    order: usize,
    rules: RwLock<HashMap<(u64, u64), Arc<GaussJacobi>>>,
}

impl RuleCache {
    pub fn new(order: usize) -> Self {
        RuleCache {
            order,
            rules: RwLock::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, a: f64, b: f64) -> Arc<GaussJacobi> {
        // Normalize -0.0 so it shares the key of 0.0.
        let key = ((a + 0.0).to_bits(), (b + 0.0).to_bits());
        if let Some(rule) = self.rules.read().expect("rule cache poisoned").get(&key) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(GaussJacobi::new(self.order, a, b));
        self.rules
            .write()
            .expect("rule cache poisoned")
            .entry(key)
            .or_insert(rule)
            .clone()
    }
}

impl Clone for RuleCache {
    fn clone(&self) -> Self {
        RuleCache {
            order: self.order,
            rules: RwLock::new(self.rules.read().expect("rule cache poisoned").clone()),
        }
    }
}
