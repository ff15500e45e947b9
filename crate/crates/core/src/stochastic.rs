//! Time grids, Brownian path generation, and classical (single-valued)
//! Ito/Lebesgue integration, the scalar substrate under every selection.
//!
//! Randomness is counter-based: each increment is produced by hashing
//! `(seed, path, step, dim)`, so path `i` is bit-identical whether the
//! bundle holds a hundred paths or a million, bundles are reproducible
//! across runs, and generation parallelizes without shared state.

use rayon::prelude::*;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KernelError {
    #[error("time grids differ: {0} vs {1} steps")]
    GridMismatch(usize, usize),
    #[error("invalid grid: horizon {horizon}, steps {steps}")]
    InvalidGrid { horizon: f64, steps: usize },
    #[error("path shape mismatch: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("dimension {dim} out of range (bundle has {dims})")]
    DimOutOfRange { dim: usize, dims: usize },
}

/// Uniform partition of `[0, horizon]` into `steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub horizon: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self, KernelError> {
        if horizon > 0.0 && horizon.is_finite() && steps >= 1 {
            Ok(Self { horizon, steps })
        } else {
            Err(KernelError::InvalidGrid { horizon, steps })
        }
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Node `t_k = k * horizon / steps`; valid for `k in 0..=steps`.
    pub fn node(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.steps as f64
    }

    /// Number of nodes, one more than steps.
    pub fn nodes(&self) -> usize {
        self.steps + 1
    }

    fn check(&self, other: &TimeGrid) -> Result<(), KernelError> {
        if self == other {
            Ok(())
        } else {
            Err(KernelError::GridMismatch(self.steps, other.steps))
        }
    }
}

/// SplitMix64 finalizer: a full-avalanche 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Distinct odd multipliers keep the (path, step, dim) coordinates from
/// aliasing before the avalanche.
#[inline]
fn counter_key(seed: u64, path: u64, step: u64, dim: u64) -> u64 {
    let mut k = seed ^ 0x5851_f42d_4c95_7f2d;
    k = mix64(k.wrapping_add(path.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    k = mix64(k ^ step.wrapping_mul(0xc2b2_ae3d_27d4_eb4f));
    mix64(k ^ dim.wrapping_mul(0x1656_67b1_9e37_79f9))
}

/// Uniform in the open unit interval, strictly away from 0 and 1.
#[inline]
fn to_unit(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal draw for one counter key (Box-Muller, cosine branch).
#[inline]
pub fn standard_normal(key: u64) -> f64 {
    let u1 = to_unit(mix64(key ^ 0x9e37_79b9_7f4a_7c15));
    let u2 = to_unit(mix64(key ^ 0xd1b5_4a32_d192_ed03));
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Uniform draw in `(0,1)` for one counter key.
#[inline]
pub fn unit_uniform(key: u64) -> f64 {
    to_unit(mix64(key ^ 0xa076_1d64_78bd_642f))
}

/// Brownian increments for `paths` scenarios of an `dims`-dimensional
/// Brownian motion on a shared time grid, components independent.
#[derive(Debug, Clone)]
pub struct BrownianBundle {
    pub grid: TimeGrid,
    pub paths: usize,
    pub dims: usize,
    pub seed: u64,
    /// `dw[(path * steps + step) * dims + dim]`, variance `dt` each.
    dw: Vec<f64>,
}

impl BrownianBundle {
    pub fn generate(grid: TimeGrid, paths: usize, dims: usize, seed: u64) -> Self {
        let steps = grid.steps;
        let sqrt_dt = grid.dt().sqrt();
        let mut dw = vec![0.0; paths * steps * dims];
        dw.par_chunks_mut(steps * dims)
            .enumerate()
            .for_each(|(path, chunk)| {
                for step in 0..steps {
                    for dim in 0..dims {
                        let key = counter_key(seed, path as u64, step as u64, dim as u64);
                        chunk[step * dims + dim] = sqrt_dt * standard_normal(key);
                    }
                }
            });
        Self {
            grid,
            paths,
            dims,
            seed,
            dw,
        }
    }

    #[inline]
    pub fn dw(&self, path: usize, step: usize, dim: usize) -> f64 {
        self.dw[(path * self.grid.steps + step) * self.dims + dim]
    }

    /// Increments of one path/component.
    pub fn increments(&self, path: usize, dim: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid.steps).map(move |k| self.dw(path, k, dim))
    }

    /// Test hook: surgically overwrite one increment.
    pub fn perturb(&mut self, path: usize, step: usize, dim: usize, value: f64) {
        self.dw[(path * self.grid.steps + step) * self.dims + dim] = value;
    }

    /// Cumulative Brownian values `W_{t_k}` for one component, as a path
    /// table over all nodes.
    pub fn brownian_nodes(&self, dim: usize) -> Result<ScalarPath, KernelError> {
        if dim >= self.dims {
            return Err(KernelError::DimOutOfRange {
                dim,
                dims: self.dims,
            });
        }
        let nodes = self.grid.nodes();
        let mut values = vec![0.0; self.paths * nodes];
        values
            .par_chunks_mut(nodes)
            .enumerate()
            .for_each(|(path, row)| {
                let mut w = 0.0;
                row[0] = 0.0;
                for k in 0..self.grid.steps {
                    w += self.dw(path, k, dim);
                    row[k + 1] = w;
                }
            });
        Ok(ScalarPath {
            grid: self.grid,
            paths: self.paths,
            values,
        })
    }
}

/// A per-path table of real values at every grid node.  Adaptedness is by
/// construction: builders fill nodes left to right from increments strictly
/// before the node.
#[derive(Debug, Clone)]
pub struct ScalarPath {
    pub grid: TimeGrid,
    pub paths: usize,
    /// `values[path * grid.nodes() + k]`.
    values: Vec<f64>,
}

impl ScalarPath {
    pub fn zeros(grid: TimeGrid, paths: usize) -> Self {
        Self {
            grid,
            paths,
            values: vec![0.0; paths * grid.nodes()],
        }
    }

    /// Builds an adapted path table by evaluating `f(t_k, w_k)` on the
    /// Brownian state of the chosen component.
    pub fn adapted<F>(bundle: &BrownianBundle, dim: usize, f: F) -> Result<Self, KernelError>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let w = bundle.brownian_nodes(dim)?;
        let nodes = bundle.grid.nodes();
        let mut values = vec![0.0; bundle.paths * nodes];
        values
            .par_chunks_mut(nodes)
            .enumerate()
            .for_each(|(path, row)| {
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = f(bundle.grid.node(k), w.at(path, k));
                }
            });
        Ok(Self {
            grid: bundle.grid,
            paths: bundle.paths,
            values,
        })
    }

    #[inline]
    pub fn at(&self, path: usize, k: usize) -> f64 {
        self.values[path * self.grid.nodes() + k]
    }

    #[inline]
    pub fn set(&mut self, path: usize, k: usize, v: f64) {
        self.values[path * self.grid.nodes() + k] = v;
    }

    pub fn row(&self, path: usize) -> &[f64] {
        let n = self.grid.nodes();
        &self.values[path * n..(path + 1) * n]
    }
}

/// Left-endpoint Ito integral `sum_k phi(t_k) dW_k` per path.
pub fn ito_integral(
    phi: &ScalarPath,
    bundle: &BrownianBundle,
    dim: usize,
) -> Result<Vec<f64>, KernelError> {
    phi.grid.check(&bundle.grid)?;
    if phi.paths != bundle.paths {
        return Err(KernelError::ShapeMismatch(phi.paths, bundle.paths));
    }
    windowed_ito_integral(phi, bundle, dim, 0, bundle.grid.steps)
}

/// Ito integral over the step window `[from, to)`.
pub fn windowed_ito_integral(
    phi: &ScalarPath,
    bundle: &BrownianBundle,
    dim: usize,
    from: usize,
    to: usize,
) -> Result<Vec<f64>, KernelError> {
    if dim >= bundle.dims {
        return Err(KernelError::DimOutOfRange {
            dim,
            dims: bundle.dims,
        });
    }
    Ok((0..bundle.paths)
        .into_par_iter()
        .map(|path| {
            let mut acc = 0.0;
            for k in from..to {
                acc += phi.at(path, k) * bundle.dw(path, k, dim);
            }
            acc
        })
        .collect())
}

/// Left-endpoint Riemann sum `sum_k psi(t_k) dt` per path.
pub fn lebesgue_integral(psi: &ScalarPath) -> Vec<f64> {
    windowed_lebesgue_integral(psi, 0, psi.grid.steps)
}

/// Riemann sum over the step window `[from, to)`.
pub fn windowed_lebesgue_integral(psi: &ScalarPath, from: usize, to: usize) -> Vec<f64> {
    let dt = psi.grid.dt();
    (0..psi.paths)
        .into_par_iter()
        .map(|path| {
            let mut acc = 0.0;
            for k in from..to {
                acc += psi.at(path, k);
            }
            acc * dt
        })
        .collect()
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (denominator `n`).
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}
