//! Least-squares Monte Carlo conditional expectations on a discrete
//! filtration.
//!
//! Conditioning at node `k` regresses per-scenario targets on a polynomial
//! basis of the Brownian state.  The basis is the orthonormal Hermite
//! family in `u = W_{t_k} / sqrt(t_k)`: `u` is standard normal, so the Gram
//! matrix is near the identity and fitted coefficients do not leak noise
//! into each other; raw powers condition badly enough to triple the error
//! of downstream martingale-increment estimates.  Node 0 carries no
//! information, so conditioning there is the plain sample mean.  A ridge
//! term stabilizes the normal equations; rank trouble escalates the ridge
//! and flags the fit.

use crate::stochastic::{BrownianBundle, ScalarPath, TimeGrid};

/// Conditioning features and regression configuration for one bundle.
#[derive(Debug, Clone)]
pub struct DiscreteFiltration {
    pub grid: TimeGrid,
    pub paths: usize,
    /// Polynomial degree of the basis in the normalized Brownian state.
    pub degree: usize,
    /// Relative ridge factor on the Gram diagonal.
    pub ridge: f64,
    w: ScalarPath,
}

/// Outcome of one regression: fitted values per scenario plus a flag for
/// ridge escalation.
#[derive(Debug, Clone)]
pub struct Fit {
    pub predicted: Vec<f64>,
    /// Set when the base ridge was not enough and had to be escalated.
    pub ridge_fallback: bool,
}

impl DiscreteFiltration {
    pub fn new(bundle: &BrownianBundle, degree: usize, ridge: f64) -> Self {
        Self {
            grid: bundle.grid,
            paths: bundle.paths,
            degree,
            ridge,
            w: bundle
                .brownian_nodes(0)
                .expect("component 0 always present"),
        }
    }

    pub fn brownian(&self) -> &ScalarPath {
        &self.w
    }

    /// Normalized conditioning state at `(path, node)`.
    #[inline]
    fn state(&self, path: usize, k: usize) -> f64 {
        let t = self.grid.node(k);
        if t > 0.0 {
            self.w.at(path, k) / t.sqrt()
        } else {
            0.0
        }
    }

    /// Conditional expectation of `targets` given the state at node `k`,
    /// evaluated scenario-wise.
    pub fn condition(&self, k: usize, targets: &[f64]) -> Fit {
        assert_eq!(targets.len(), self.paths);
        if k == 0 {
            let mean = targets.iter().sum::<f64>() / targets.len() as f64;
            return Fit {
                predicted: vec![mean; targets.len()],
                ridge_fallback: false,
            };
        }
        let d = self.degree + 1;
        let n = self.paths;

        // Gram matrix and moment vector of the Hermite basis.
        let mut gram = vec![0.0f64; d * d];
        let mut rhs = vec![0.0f64; d];
        let mut feats = vec![0.0f64; d];
        for path in 0..n {
            hermite_features(self.state(path, k), &mut feats);
            for i in 0..d {
                for j in i..d {
                    gram[i * d + j] += feats[i] * feats[j];
                }
                rhs[i] += feats[i] * targets[path];
            }
        }
        for i in 0..d {
            for j in 0..i {
                gram[i * d + j] = gram[j * d + i];
            }
        }

        let scale = (0..d).map(|i| gram[i * d + i]).fold(0.0, f64::max);
        // Ridge relative to the sample count (targets and the leading basis
        // column are O(1) each), not to the largest moment, which would
        // over-shrink low-order coefficients.
        let mut ridge = self.ridge * (n as f64).max(1.0);
        let mut ridge_fallback = false;
        let beta = loop {
            match solve_spd(&gram, &rhs, ridge, d) {
                Some(beta) => break beta,
                None => {
                    ridge *= 100.0;
                    ridge_fallback = true;
                    if ridge > scale.max(1.0) {
                        // Fully degenerate: fall back to the mean.
                        let mean = targets.iter().sum::<f64>() / n as f64;
                        let mut beta = vec![0.0; d];
                        beta[0] = mean;
                        break beta;
                    }
                }
            }
        };

        let mut feats = vec![0.0f64; d];
        let predicted = (0..n)
            .map(|path| {
                hermite_features(self.state(path, k), &mut feats);
                beta.iter().zip(&feats).map(|(b, f)| b * f).sum()
            })
            .collect();
        Fit {
            predicted,
            ridge_fallback,
        }
    }
}

/// Orthonormal probabilists' Hermite values `he_0(u) .. he_d(u)` via the
/// normalized three-term recurrence.
#[inline]
fn hermite_features(u: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = u;
    }
    for j in 2..out.len() {
        out[j] = (u * out[j - 1] - ((j - 1) as f64).sqrt() * out[j - 2]) / (j as f64).sqrt();
    }
}

/// Cholesky solve of `(G + ridge I) x = b`; `None` when the factorization
/// hits a nonpositive pivot.
fn solve_spd(gram: &[f64], rhs: &[f64], ridge: f64, d: usize) -> Option<Vec<f64>> {
    let mut a = gram.to_vec();
    for i in 0..d {
        a[i * d + i] += ridge;
    }
    // In-place Cholesky, lower triangle.
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for k in 0..j {
                s -= a[i * d + k] * a[j * d + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                a[i * d + i] = s.sqrt();
            } else {
                a[i * d + j] = s / a[j * d + j];
            }
        }
    }
    let mut y = rhs.to_vec();
    for i in 0..d {
        for k in 0..i {
            y[i] -= a[i * d + k] * y[k];
        }
        y[i] /= a[i * d + i];
    }
    for i in (0..d).rev() {
        for k in i + 1..d {
            y[i] -= a[k * d + i] * y[k];
        }
        y[i] /= a[i * d + i];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::BrownianBundle;

    fn filt(steps: usize, paths: usize, seed: u64) -> (BrownianBundle, DiscreteFiltration) {
        let grid = TimeGrid::new(1.0, steps).unwrap();
        let bundle = BrownianBundle::generate(grid, paths, 1, seed);
        let filt = DiscreteFiltration::new(&bundle, 3, 1e-8);
        (bundle, filt)
    }

    #[test]
    fn constants_regress_to_themselves() {
        let (_, filt) = filt(16, 500, 1);
        let targets = vec![2.5; 500];
        for k in [0, 1, 8, 16] {
            let fit = filt.condition(k, &targets);
            assert!(!fit.ridge_fallback);
            for v in fit.predicted {
                assert!((v - 2.5).abs() < 1e-5, "{v}");
            }
        }
    }

    #[test]
    fn martingale_projection_of_terminal_brownian() {
        // E[W_T | W_t] = W_t is inside the basis span.
        let (bundle, filt) = filt(32, 20_000, 2);
        let w = bundle.brownian_nodes(0).unwrap();
        let targets: Vec<f64> = (0..bundle.paths).map(|p| w.at(p, 32)).collect();
        let k = 16;
        let fit = filt.condition(k, &targets);
        let err: f64 = (0..bundle.paths)
            .map(|p| (fit.predicted[p] - w.at(p, k)).abs())
            .sum::<f64>()
            / bundle.paths as f64;
        assert!(err < 0.02, "mean abs err {err}");
    }

    #[test]
    fn squared_brownian_projection() {
        // E[W_T^2 | W_t] = W_t^2 + (T - t), exactly representable at
        // degree >= 2.
        let (bundle, filt) = filt(32, 20_000, 3);
        let w = bundle.brownian_nodes(0).unwrap();
        let targets: Vec<f64> = (0..bundle.paths).map(|p| w.at(p, 32).powi(2)).collect();
        let k = 8;
        let t = filt.grid.node(k);
        let fit = filt.condition(k, &targets);
        let err: f64 = (0..bundle.paths)
            .map(|p| (fit.predicted[p] - (w.at(p, k).powi(2) + (1.0 - t))).abs())
            .sum::<f64>()
            / bundle.paths as f64;
        assert!(err < 0.03, "mean abs err {err}");
    }

    #[test]
    fn node_zero_is_sample_mean() {
        let (_, filt) = filt(8, 100, 4);
        let targets: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let fit = filt.condition(0, &targets);
        assert!((fit.predicted[17] - 49.5).abs() < 1e-12);
    }
}
