//! Set-valued Ito processes and the transformation identity.
//!
//! A set-valued Ito process `X_t = x0 + ∫ f dW + ∫ g ds` with interval
//! coefficients is realized as the hull, per scenario and node, of the
//! single-valued Euler paths driven by pairs of adapted selections
//! `(f-selection, g-selection)`.  The transformation check compares, over
//! the *same* selection pairs,
//!
//! * the image hull of the transform along the stored pair paths, against
//! * the classical Ito expansion accumulated along each pair path,
//!
//! so the comparison isolates the formula itself, not the sampling.  The
//! residual gap per pair is ordinary Euler discretization error, O(sqrt(dt))
//! per path, which the pass threshold budgets explicitly.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::convex::Interval;
use crate::integrals::SetPath;
use crate::selection::{IntervalProcess, Recipe, SelectionError, SelectionFamily};
use crate::stochastic::{std_dev, BrownianBundle, ScalarPath};
use crate::tolerances;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ItoError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error("transform partials disagree with finite differences: max rel err {0:.3e}")]
    GradientCheck(f64),
    #[error("backward form invalid: erosion fails on {failures} of {total} (path,node) cells")]
    BackwardForm { failures: usize, total: usize },
    #[error("transform {0:?} is declared incompatible with hull closure")]
    ClosureIncompatible(String),
}

/// A scalar transform `phi(t, x)` with declared partial derivatives.
#[derive(Clone)]
pub struct Transform {
    pub name: String,
    phi: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    d_t: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    d_x: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    d_xx: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    /// Declared compatibility of the map with hull closure (continuous maps
    /// of the line qualify; user maps assert it).
    pub closure_compatible: bool,
    /// Declared bound feeding the discretization budget of the pass
    /// threshold; zero for affine maps, whose expansion is exact.
    pub curvature_scale: f64,
    /// Whether the threshold constants were calibrated for this map.
    pub calibrated: bool,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Transform({})", self.name)
    }
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            phi: Arc::new(|_, x| x),
            d_t: Arc::new(|_, _| 0.0),
            d_x: Arc::new(|_, _| 1.0),
            d_xx: Arc::new(|_, _| 0.0),
            closure_compatible: true,
            curvature_scale: 0.0,
            calibrated: true,
        }
    }

    /// `x -> a x + b`.
    pub fn affine(a: f64, b: f64) -> Self {
        Self {
            name: format!("affine({a},{b})"),
            phi: Arc::new(move |_, x| a * x + b),
            d_t: Arc::new(|_, _| 0.0),
            d_x: Arc::new(move |_, _| a),
            d_xx: Arc::new(|_, _| 0.0),
            closure_compatible: true,
            curvature_scale: 0.0,
            calibrated: true,
        }
    }

    pub fn square() -> Self {
        Self {
            name: "square".into(),
            phi: Arc::new(|_, x| x * x),
            d_t: Arc::new(|_, _| 0.0),
            d_x: Arc::new(|_, x| 2.0 * x),
            d_xx: Arc::new(|_, _| 2.0),
            closure_compatible: true,
            curvature_scale: 1.0,
            calibrated: true,
        }
    }

    /// `phi(t, x) = t x`.
    pub fn time_scaled() -> Self {
        Self {
            name: "time_scaled".into(),
            phi: Arc::new(|t, x| t * x),
            d_t: Arc::new(|_, x| x),
            d_x: Arc::new(|t, _| t),
            d_xx: Arc::new(|_, _| 0.0),
            closure_compatible: true,
            curvature_scale: 1.0,
            calibrated: true,
        }
    }

    /// User-supplied map; accepted but flagged as uncalibrated.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        name: impl Into<String>,
        phi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        d_t: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        d_x: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        d_xx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        closure_compatible: bool,
        curvature_scale: f64,
    ) -> Self {
        Self {
            name: name.into(),
            phi: Arc::new(phi),
            d_t: Arc::new(d_t),
            d_x: Arc::new(d_x),
            d_xx: Arc::new(d_xx),
            closure_compatible,
            curvature_scale,
            calibrated: false,
        }
    }

    #[inline]
    pub fn phi(&self, t: f64, x: f64) -> f64 {
        (self.phi)(t, x)
    }

    #[inline]
    pub fn d_t(&self, t: f64, x: f64) -> f64 {
        (self.d_t)(t, x)
    }

    #[inline]
    pub fn d_x(&self, t: f64, x: f64) -> f64 {
        (self.d_x)(t, x)
    }

    #[inline]
    pub fn d_xx(&self, t: f64, x: f64) -> f64 {
        (self.d_xx)(t, x)
    }

    /// Central-difference audit of the declared partials over a sample
    /// lattice; returns the worst relative error.
    pub fn gradient_defect(&self, t_range: (f64, f64), x_range: (f64, f64)) -> f64 {
        let h = 1e-5;
        // Second differences divide by h^2, so they need a wider stencil to
        // stay above rounding noise.
        let h2 = 1e-4;
        let mut worst = 0.0f64;
        let rel = |est: f64, decl: f64| {
            let scale = est.abs().max(decl.abs()).max(1.0);
            (est - decl).abs() / scale
        };
        for i in 0..=10 {
            for j in 0..=10 {
                let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / 10.0;
                let x = x_range.0 + (x_range.1 - x_range.0) * j as f64 / 10.0;
                let dt_est = (self.phi(t + h, x) - self.phi(t - h, x)) / (2.0 * h);
                let dx_est = (self.phi(t, x + h) - self.phi(t, x - h)) / (2.0 * h);
                let dxx_est = (self.phi(t, x + h2) - 2.0 * self.phi(t, x)
                    + self.phi(t, x - h2))
                    / (h2 * h2);
                worst = worst.max(rel(dt_est, self.d_t(t, x)));
                worst = worst.max(rel(dx_est, self.d_x(t, x)));
                worst = worst.max(rel(dxx_est, self.d_xx(t, x)));
            }
        }
        worst
    }

    /// Errors when the declared partials fail the finite-difference audit.
    pub fn check_gradients(&self, t_range: (f64, f64), x_range: (f64, f64)) -> Result<(), ItoError> {
        let defect = self.gradient_defect(t_range, x_range);
        if defect <= tolerances::GRADIENT_CHECK_REL {
            Ok(())
        } else {
            Err(ItoError::GradientCheck(defect))
        }
    }
}

/// Data of a set-valued Ito process: a point start and interval-valued
/// diffusion/drift coefficients.
#[derive(Debug, Clone)]
pub struct SetItoSpec {
    pub x0: f64,
    pub diffusion: IntervalProcess,
    pub drift: IntervalProcess,
}

/// Selection pairing for a process: the product of a diffusion family and a
/// drift family, with singleton processes collapsing to one member.
#[derive(Debug, Clone)]
pub struct PairFamily {
    pub diffusion: SelectionFamily,
    pub drift: SelectionFamily,
}

impl PairFamily {
    pub fn build(
        spec: &SetItoSpec,
        bundle: &BrownianBundle,
        members: usize,
        recipe: Recipe,
        seed: u64,
    ) -> Result<Self, ItoError> {
        Ok(Self {
            diffusion: SelectionFamily::build(
                &spec.diffusion,
                &bundle.grid,
                members,
                recipe,
                seed,
            )?,
            drift: SelectionFamily::build(
                &spec.drift,
                &bundle.grid,
                members,
                recipe,
                seed ^ 0xa5a5_5a5a,
            )?,
        })
    }

    pub fn pair_count(&self) -> usize {
        self.diffusion.len() * self.drift.len()
    }
}

/// Euler paths of every selection pair, stored per pair.  Memory is
/// `pairs * paths * nodes` doubles; intended for direct inspection at
/// small sizes (the streaming verifier below avoids the storage).
#[derive(Debug)]
pub struct EulerFan {
    pub spec: SetItoSpec,
    pub pairs: PairFamily,
    /// One path table per (diffusion member, drift member), drift-major.
    pub pair_paths: Vec<ScalarPath>,
    pub hull: SetPath,
}

/// Simulates the set-valued Ito process as the hull of pairwise Euler
/// paths, keeping every pair path.
pub fn simulate_set_ito(
    spec: &SetItoSpec,
    bundle: &BrownianBundle,
    members: usize,
    recipe: Recipe,
    seed: u64,
) -> Result<EulerFan, ItoError> {
    let pairs = PairFamily::build(spec, bundle, members, recipe, seed)?;
    let grid = bundle.grid;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let nodes = grid.nodes();
    let dt = grid.dt();

    let mut pair_paths = Vec::with_capacity(pairs.pair_count());
    let mut hull = SetPath::filled(grid, bundle.paths, nodes, Interval::point(f64::NAN));
    for path in 0..bundle.paths {
        hull.set(path, 0, Interval::point(spec.x0));
    }
    for di in 0..pairs.diffusion.len() {
        for gi in 0..pairs.drift.len() {
            let mut table = ScalarPath::zeros(grid, bundle.paths);
            for path in 0..bundle.paths {
                let mut x = spec.x0;
                table.set(path, 0, x);
                for k in 0..grid.steps {
                    let t = grid.node(k);
                    let wv = w.at(path, k);
                    let f = pairs.diffusion.value(di, k, t, wv);
                    let g = pairs.drift.value(gi, k, t, wv);
                    x += f * bundle.dw(path, k, 0) + g * dt;
                    table.set(path, k + 1, x);
                    update_hull(&mut hull, path, k + 1, x);
                }
            }
            pair_paths.push(table);
        }
    }
    Ok(EulerFan {
        spec: spec.clone(),
        pairs,
        pair_paths,
        hull,
    })
}

/// Image hull of the transform along the stored pair paths.
pub fn ito_lhs(transform: &Transform, fan: &EulerFan) -> SetPath {
    let grid = fan.hull.grid;
    let mut out = SetPath::filled(
        grid,
        fan.hull.paths,
        fan.hull.nodes,
        Interval::point(f64::NAN),
    );
    for path in 0..fan.hull.paths {
        for k in 0..fan.hull.nodes {
            let t = grid.node(k);
            let mut hull: Option<Interval> = None;
            for table in &fan.pair_paths {
                let v = transform.phi(t, table.at(path, k));
                hull = Some(match hull {
                    None => Interval::point(v),
                    Some(h) => h.join(Interval::point(v)),
                });
            }
            out.set(path, k, hull.expect("at least one pair"));
        }
    }
    out
}

/// Classical Ito expansion accumulated along each pair path, hulled across
/// pairs.  Uses the same selection pairing as the simulation.
pub fn ito_rhs(transform: &Transform, fan: &EulerFan, bundle: &BrownianBundle) -> SetPath {
    let grid = fan.hull.grid;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let dt = grid.dt();
    let mut out = SetPath::filled(
        grid,
        fan.hull.paths,
        fan.hull.nodes,
        Interval::point(f64::NAN),
    );
    let drift_members = fan.pairs.drift.len();
    for (pair_idx, table) in fan.pair_paths.iter().enumerate() {
        let di = pair_idx / drift_members;
        let gi = pair_idx % drift_members;
        for path in 0..fan.hull.paths {
            let mut acc = transform.phi(0.0, fan.spec.x0);
            update_hull(&mut out, path, 0, acc);
            for k in 0..grid.steps {
                let t = grid.node(k);
                let wv = w.at(path, k);
                let x = table.at(path, k);
                let f = fan.pairs.diffusion.value(di, k, t, wv);
                let g = fan.pairs.drift.value(gi, k, t, wv);
                acc += transform.d_x(t, x) * f * bundle.dw(path, k, 0)
                    + (transform.d_t(t, x)
                        + transform.d_x(t, x) * g
                        + 0.5 * transform.d_xx(t, x) * f * f)
                        * dt;
                update_hull(&mut out, path, k + 1, acc);
            }
        }
    }
    out
}

fn update_hull(path_table: &mut SetPath, path: usize, k: usize, v: f64) {
    let cur = path_table.at(path, k);
    let next = if cur.lo.is_nan() {
        Interval::point(v)
    } else {
        cur.join(Interval::point(v))
    };
    path_table.set(path, k, next);
}

/// Outcome of the transformation-identity check.
#[derive(Debug, Clone)]
pub struct ItoReport {
    /// Max over nodes of the scenario-mean Hausdorff gap between image and
    /// expansion hulls.
    pub max_mean_distance: f64,
    /// Worst per-scenario gap over all nodes.
    pub max_distance: f64,
    /// Frozen-threshold budget for this run.
    pub threshold: f64,
    pub pass: bool,
    /// Per-node scenario-mean distances, for trend reporting.
    pub per_node_mean: Vec<f64>,
    /// Per-node worst-scenario distances.
    pub per_node_max: Vec<f64>,
}

/// Pass budget: discretization term `A sqrt(dt) * curvature * coeff` plus a
/// hull term `B * eps_hull`.  Constants frozen in [`crate::tolerances`].
pub fn pass_threshold(transform: &Transform, spec: &SetItoSpec, bundle: &BrownianBundle) -> f64 {
    let grid = bundle.grid;
    let fb = spec.diffusion.norm_bound(&grid);
    let gb = spec.drift.norm_bound(&grid);
    let coeff = fb * fb + gb * gb + fb * gb;
    tolerances::ITO_THRESHOLD_SLOPE
        * grid.dt().sqrt()
        * transform.curvature_scale
        * coeff
        * (2.0 * grid.horizon).sqrt()
        + tolerances::ITO_THRESHOLD_HULL * tolerances::HULL_DETERMINISTIC
}

/// Finite-sample spot check of the declared hull-closure compatibility:
/// compares the dense image of the simulated hull interval with the hull
/// of the transform over the stored pair values, on a thinned set of
/// (scenario, node) cells.  The gap is a coverage diagnostic for the pair
/// family, shrinking as the family grows; it is reported, not gated.
pub fn closure_spot_defect(transform: &Transform, fan: &EulerFan) -> f64 {
    let paths = fan.hull.paths;
    let nodes = fan.hull.nodes;
    let grid = fan.hull.grid;
    let mut worst = 0.0f64;
    for p in (0..paths).step_by((paths / 8).max(1)) {
        for k in (0..nodes).step_by((nodes / 8).max(1)) {
            let t = grid.node(k);
            let hull = fan.hull.at(p, k);
            // Dense image of the hull interval.
            let mut dense: Option<Interval> = None;
            for i in 0..=64 {
                let x = hull.lo + hull.width() * i as f64 / 64.0;
                let v = Interval::point(transform.phi(t, x));
                dense = Some(match dense {
                    None => v,
                    Some(h) => h.join(v),
                });
            }
            // Hull over the stored pair values.
            let mut points: Option<Interval> = None;
            for table in &fan.pair_paths {
                let v = Interval::point(transform.phi(t, table.at(p, k)));
                points = Some(match points {
                    None => v,
                    Some(h) => h.join(v),
                });
            }
            worst = worst.max(dense.unwrap().hausdorff(points.unwrap()));
        }
    }
    worst
}

/// Streaming transformation check: image hull vs expansion hull over the
/// same selection pairs, without storing pair paths.
pub fn verify_ito_formula(
    transform: &Transform,
    spec: &SetItoSpec,
    bundle: &BrownianBundle,
    members: usize,
    recipe: Recipe,
    seed: u64,
) -> Result<ItoReport, ItoError> {
    if !transform.closure_compatible {
        return Err(ItoError::ClosureIncompatible(transform.name.clone()));
    }
    let pairs = PairFamily::build(spec, bundle, members, recipe, seed)?;
    let grid = bundle.grid;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let dt = grid.dt();
    let nodes = grid.nodes();

    // Distance accumulators per node: sum over paths and max over paths.
    let per_path: Vec<(Vec<f64>, f64)> = (0..bundle.paths)
        .into_par_iter()
        .map(|path| {
            let mut lhs = vec![Interval::point(f64::NAN); nodes];
            let mut rhs = lhs.clone();
            for di in 0..pairs.diffusion.len() {
                for gi in 0..pairs.drift.len() {
                    let mut x = spec.x0;
                    let mut acc = transform.phi(0.0, spec.x0);
                    join_nan(&mut lhs[0], transform.phi(0.0, x));
                    join_nan(&mut rhs[0], acc);
                    for k in 0..grid.steps {
                        let t = grid.node(k);
                        let wv = w.at(path, k);
                        let f = pairs.diffusion.value(di, k, t, wv);
                        let g = pairs.drift.value(gi, k, t, wv);
                        let dw = bundle.dw(path, k, 0);
                        acc += transform.d_x(t, x) * f * dw
                            + (transform.d_t(t, x)
                                + transform.d_x(t, x) * g
                                + 0.5 * transform.d_xx(t, x) * f * f)
                                * dt;
                        x += f * dw + g * dt;
                        join_nan(&mut lhs[k + 1], transform.phi(grid.node(k + 1), x));
                        join_nan(&mut rhs[k + 1], acc);
                    }
                }
            }
            let dists: Vec<f64> = (0..nodes).map(|k| lhs[k].hausdorff(rhs[k])).collect();
            let worst = dists.iter().copied().fold(0.0, f64::max);
            (dists, worst)
        })
        .collect();

    let mut per_node_mean = vec![0.0; nodes];
    let mut per_node_max = vec![0.0f64; nodes];
    let mut max_distance = 0.0f64;
    for (dists, worst) in &per_path {
        for (k, d) in dists.iter().enumerate() {
            per_node_mean[k] += d;
            per_node_max[k] = per_node_max[k].max(*d);
        }
        max_distance = max_distance.max(*worst);
    }
    for v in &mut per_node_mean {
        *v /= bundle.paths as f64;
    }
    let max_mean_distance = per_node_mean.iter().copied().fold(0.0, f64::max);
    let threshold = pass_threshold(transform, spec, bundle);
    Ok(ItoReport {
        max_mean_distance,
        max_distance,
        threshold,
        pass: max_mean_distance <= threshold,
        per_node_mean,
        per_node_max,
    })
}

#[inline]
fn join_nan(slot: &mut Interval, v: f64) {
    if slot.lo.is_nan() {
        *slot = Interval::point(v);
    } else {
        *slot = slot.join(Interval::point(v));
    }
}

/// Backward problem data for the squared-process inclusion: the process
/// `X(t) = x_T + ∫_t^T f(s, Z) ds ⊖ ∫_t^T Z dW` with `Z` in the
/// martingale-integral class.
#[derive(Clone)]
pub struct SquareInclusionProblem {
    /// Terminal set as a function of the terminal Brownian state,
    /// evaluated at `(horizon, W_T)`.
    pub terminal: IntervalProcess,
    pub z: IntervalProcess,
    /// Scalar driver evaluated on z-selections.
    pub driver: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for SquareInclusionProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SquareInclusionProblem(terminal={:?}, z={:?})",
            self.terminal, self.z
        )
    }
}

#[derive(Debug, Clone)]
pub struct InclusionReport {
    /// Fraction of scenarios passing `LHS ⊆ RHS + eps` per node.
    pub per_node_pass: Vec<f64>,
    pub min_pass_fraction: f64,
    /// Largest one-sided excess over the tolerance ball.
    pub worst_excess: f64,
    /// Tolerance radius: the Monte Carlo band of the classical per-pair
    /// defect at its widest node.
    pub epsilon: f64,
}

/// Checks the squared-process inclusion on matched selections.  The
/// backward form is validated first: the erosion defining `X` must exist
/// at every (scenario, node).
pub fn verify_square_inclusion(
    problem: &SquareInclusionProblem,
    bundle: &BrownianBundle,
    members: usize,
    recipe: Recipe,
    seed: u64,
) -> Result<InclusionReport, ItoError> {
    let grid = bundle.grid;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let dt = grid.dt();
    let nodes = grid.nodes();
    let zfam = SelectionFamily::build(&problem.z, &grid, members, recipe, seed)?;
    let tfam = SelectionFamily::build(&problem.terminal, &grid, members, recipe, seed ^ 0x77)?;

    // Structural audit: X(t) = (x_T + suffix f) ⊖ suffix ∫Z dW nodewise.
    let failures: usize = (0..bundle.paths)
        .into_par_iter()
        .map(|path| {
            let w_t = w.at(path, grid.steps);
            let terminal = problem.terminal.value(grid.horizon, w_t);
            let mut fails = 0;
            // Suffix accumulation from the horizon down.
            let mut f_low = 0.0;
            let mut f_high = 0.0;
            let mut z_int = Interval::zero();
            for k in (0..grid.steps).rev() {
                let t = grid.node(k);
                let wv = w.at(path, k);
                let ziv = problem.z.value(t, wv);
                // Driver image over z-selections: monotone endpoints suffice
                // for the audit hull.
                let fa = (problem.driver)(t, ziv.lo);
                let fb = (problem.driver)(t, ziv.hi);
                f_low += fa.min(fb) * dt;
                f_high += fa.max(fb) * dt;
                let dw = bundle.dw(path, k, 0);
                z_int = z_int.add(Interval::hull_of(ziv.lo * dw, ziv.hi * dw));
                let a = Interval {
                    lo: terminal.lo + f_low,
                    hi: terminal.hi + f_high,
                };
                if a.hukuhara(z_int).is_none() {
                    fails += 1;
                }
            }
            fails
        })
        .sum();
    if failures > 0 {
        return Err(ItoError::BackwardForm {
            failures,
            total: bundle.paths * grid.steps,
        });
    }

    struct NodeStats {
        excess: Vec<f64>,
        defect_band: Vec<f64>,
    }

    let stats: Vec<NodeStats> = (0..bundle.paths)
        .into_par_iter()
        .map(|path| {
            let w_t = w.at(path, grid.steps);
            let mut lhs = vec![Interval::point(f64::NAN); nodes];
            let mut rhs = lhs.clone();
            let mut defect = vec![0.0f64; nodes];
            let mut first = true;
            for zi in 0..zfam.len() {
                for ti in 0..tfam.len() {
                    let a = tfam.value(ti, grid.steps, grid.horizon, w_t);
                    // Backward pair path and suffix sums.
                    let mut x = vec![0.0; nodes];
                    x[grid.steps] = a;
                    for k in (0..grid.steps).rev() {
                        let t = grid.node(k);
                        let wv = w.at(path, k);
                        let z = zfam.value(zi, k, t, wv);
                        let f = (problem.driver)(t, z);
                        x[k] = x[k + 1] + f * dt - z * bundle.dw(path, k, 0);
                    }
                    let mut z_sq = 0.0;
                    let mut xf = 0.0;
                    let mut xz_dw = 0.0;
                    join_nan(&mut lhs[grid.steps], a * a);
                    join_nan(&mut rhs[grid.steps], a * a);
                    for k in (0..grid.steps).rev() {
                        let t = grid.node(k);
                        let wv = w.at(path, k);
                        let z = zfam.value(zi, k, t, wv);
                        let f = (problem.driver)(t, z);
                        z_sq += z * z * dt;
                        xf += x[k] * f * dt;
                        xz_dw += x[k] * z * bundle.dw(path, k, 0);
                        let l = x[k] * x[k] + z_sq;
                        let r = a * a + 2.0 * xf - 2.0 * xz_dw;
                        join_nan(&mut lhs[k], l);
                        join_nan(&mut rhs[k], r);
                        if first {
                            defect[k] = l - r;
                        }
                    }
                    first = false;
                }
            }
            let excess: Vec<f64> = (0..nodes)
                .map(|k| {
                    let l = lhs[k];
                    let r = rhs[k];
                    (r.lo - l.lo).max(l.hi - r.hi).max(0.0)
                })
                .collect();
            NodeStats {
                excess,
                defect_band: defect,
            }
        })
        .collect();

    // One tolerance ball for the whole run: the band of the classical
    // per-pair defect at its widest node.  A per-node band would shrink to
    // a single fat-tailed chi-square term near the horizon and flag its
    // ordinary tail mass as violations.
    let mut epsilon = 1e-9f64;
    for k in 0..nodes {
        let defects: Vec<f64> = stats.iter().map(|s| s.defect_band[k]).collect();
        epsilon = epsilon.max(tolerances::MC_BAND_SIGMAS * std_dev(&defects));
    }

    let mut per_node_pass = vec![0.0; nodes];
    let mut worst_excess = 0.0f64;
    for s in &stats {
        for k in 0..nodes {
            if s.excess[k] <= epsilon {
                per_node_pass[k] += 1.0;
            }
            worst_excess = worst_excess.max(s.excess[k] - epsilon);
        }
    }
    for v in &mut per_node_pass {
        *v /= bundle.paths as f64;
    }
    let min_pass_fraction = per_node_pass.iter().copied().fold(1.0, f64::min);

    Ok(InclusionReport {
        per_node_pass,
        min_pass_fraction,
        worst_excess,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::TimeGrid;

    fn bundle(steps: usize, paths: usize, seed: u64) -> BrownianBundle {
        BrownianBundle::generate(TimeGrid::new(1.0, steps).unwrap(), paths, 1, seed)
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn zero_coefficients_freeze_the_start() {
        let b = bundle(16, 8, 1);
        let spec = SetItoSpec {
            x0: 0.75,
            diffusion: IntervalProcess::singleton(0.0),
            drift: IntervalProcess::singleton(0.0),
        };
        let fan = simulate_set_ito(&spec, &b, 4, Recipe::Mix, 1).unwrap();
        assert_eq!(fan.pair_paths.len(), 1);
        for p in 0..8 {
            for k in 0..=16 {
                assert_eq!(fan.hull.at(p, k), Interval::point(0.75));
            }
        }
    }

    #[test]
    fn drift_only_interval_reaches_endpoint_hull() {
        let b = bundle(64, 16, 2);
        let spec = SetItoSpec {
            x0: 0.0,
            diffusion: IntervalProcess::singleton(0.0),
            drift: IntervalProcess::constant(iv(0.0, 1.0)),
        };
        let fan = simulate_set_ito(&spec, &b, 8, Recipe::Mix, 3).unwrap();
        for p in 0..16 {
            assert!(fan.hull.at(p, 64).hausdorff(iv(0.0, 1.0)) <= 1e-10);
        }
    }

    #[test]
    fn singleton_diffusion_tracks_brownian() {
        let b = bundle(32, 8, 3);
        let spec = SetItoSpec {
            x0: 0.0,
            diffusion: IntervalProcess::singleton(1.0),
            drift: IntervalProcess::singleton(0.0),
        };
        let fan = simulate_set_ito(&spec, &b, 2, Recipe::Extreme, 1).unwrap();
        let w = b.brownian_nodes(0).unwrap();
        for p in 0..8 {
            for k in 0..=32 {
                let h = fan.hull.at(p, k);
                assert!(h.is_point());
                assert!((h.lo - w.at(p, k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lhs_identity_translation_and_square_image() {
        let b = bundle(16, 4, 4);
        let spec = SetItoSpec {
            x0: -0.5,
            diffusion: IntervalProcess::constant(iv(0.5, 1.0)),
            drift: IntervalProcess::singleton(0.0),
        };
        let fan = simulate_set_ito(&spec, &b, 4, Recipe::Mix, 5).unwrap();
        let id = ito_lhs(&Transform::identity(), &fan);
        let shift = ito_lhs(&Transform::affine(1.0, 2.5), &fan);
        for p in 0..4 {
            for k in 0..=16 {
                assert!(id.at(p, k).hausdorff(fan.hull.at(p, k)) <= 1e-12);
                assert!(shift
                    .at(p, k)
                    .hausdorff(fan.hull.at(p, k).shift(2.5))
                    .abs()
                    <= 1e-12);
            }
        }
        // Square image handles sign changes through the image, not endpoints:
        // hulls of squared pair values are always nonnegative.
        let sq = ito_lhs(&Transform::square(), &fan);
        for p in 0..4 {
            for k in 0..=16 {
                assert!(sq.at(p, k).lo >= 0.0 || fan.hull.at(p, k).lo > 0.0);
            }
        }
    }

    #[test]
    fn rhs_identity_reproduces_simulation() {
        let b = bundle(32, 8, 5);
        let spec = SetItoSpec {
            x0: 1.0,
            diffusion: IntervalProcess::constant(iv(0.2, 0.7)),
            drift: IntervalProcess::constant(iv(-0.3, 0.4)),
        };
        let fan = simulate_set_ito(&spec, &b, 4, Recipe::Mix, 6).unwrap();
        let rhs = ito_rhs(&Transform::identity(), &fan, &b);
        assert!(rhs.max_hausdorff(&fan.hull) <= 1e-12);
    }

    #[test]
    fn rhs_square_matches_classical_oracle_for_singletons() {
        // For f = {sigma}, g = {0}: the expansion accumulates
        // x0^2 + 2 sigma sum(x dW) + sigma^2 t along the single path.
        let sigma = 0.8;
        let b = bundle(64, 32, 6);
        let spec = SetItoSpec {
            x0: 0.3,
            diffusion: IntervalProcess::singleton(sigma),
            drift: IntervalProcess::singleton(0.0),
        };
        let fan = simulate_set_ito(&spec, &b, 2, Recipe::Extreme, 1).unwrap();
        let rhs = ito_rhs(&Transform::square(), &fan, &b);
        let table = &fan.pair_paths[0];
        for p in 0..32 {
            let mut acc = 0.3f64 * 0.3;
            assert!((rhs.at(p, 0).lo - acc).abs() < 1e-12);
            for k in 0..64 {
                acc += 2.0 * sigma * table.at(p, k) * b.dw(p, k, 0)
                    + sigma * sigma * b.grid.dt();
                let got = rhs.at(p, k + 1);
                assert!(got.is_point());
                assert!((got.lo - acc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn verify_identity_is_exact() {
        let b = bundle(64, 32, 7);
        let spec = SetItoSpec {
            x0: 0.0,
            diffusion: IntervalProcess::constant(iv(0.5, 1.0)),
            drift: IntervalProcess::constant(iv(-0.2, 0.2)),
        };
        let rep =
            verify_ito_formula(&Transform::identity(), &spec, &b, 6, Recipe::Mix, 2).unwrap();
        assert!(rep.max_distance <= 1e-12);
        assert!(rep.pass);
    }

    #[test]
    fn verify_square_euler_scaling() {
        // The defect shrinks as the grid refines (three levels, one seed).
        let spec = SetItoSpec {
            x0: 0.0,
            diffusion: IntervalProcess::singleton(1.0),
            drift: IntervalProcess::singleton(0.0),
        };
        let mut dists = Vec::new();
        for steps in [64, 256, 1024] {
            let b = bundle(steps, 256, 11);
            let rep =
                verify_ito_formula(&Transform::square(), &spec, &b, 2, Recipe::Extreme, 1)
                    .unwrap();
            assert!(rep.pass, "steps {steps}: {rep:?}");
            dists.push(rep.max_mean_distance);
        }
        assert!(dists[0] > dists[1] && dists[1] > dists[2], "{dists:?}");
    }

    #[test]
    fn gradient_audit_accepts_declared_and_rejects_wrong() {
        for t in [
            Transform::identity(),
            Transform::square(),
            Transform::time_scaled(),
            Transform::affine(2.0, -1.0),
        ] {
            assert!(t.check_gradients((0.0, 1.0), (-2.0, 2.0)).is_ok());
        }
        let wrong = Transform::custom(
            "broken",
            |_, x| x * x,
            |_, _| 0.0,
            |_, _| 1.0, // should be 2x
            |_, _| 2.0,
            true,
            1.0,
        );
        assert!(wrong.check_gradients((0.0, 1.0), (-2.0, 2.0)).is_err());
        assert!(!wrong.calibrated);
    }

    #[test]
    fn time_scaled_drift_only_builds_quadratic_hull() {
        // phi(t,x) = t x with f = {0}, g = [0,1]: both sides develop the
        // hull [0, t^2] up to left-endpoint Riemann error.
        let b = bundle(256, 8, 12);
        let spec = SetItoSpec {
            x0: 0.0,
            diffusion: IntervalProcess::singleton(0.0),
            drift: IntervalProcess::constant(iv(0.0, 1.0)),
        };
        let fan = simulate_set_ito(&spec, &b, 8, Recipe::Support, 3).unwrap();
        let lhs = ito_lhs(&Transform::time_scaled(), &fan);
        let rhs = ito_rhs(&Transform::time_scaled(), &fan, &b);
        let dt = b.grid.dt();
        for k in [64usize, 128, 256] {
            let t = b.grid.node(k);
            let expect = iv(0.0, t * t);
            for p in 0..8 {
                assert!(lhs.at(p, k).hausdorff(expect) <= 1e-12);
                assert!(
                    rhs.at(p, k).hausdorff(expect) <= 3.0 * dt,
                    "node {k}: {:?}",
                    rhs.at(p, k)
                );
            }
        }
        assert!(lhs.max_hausdorff(&rhs) <= 3.0 * dt);
    }

    #[test]
    fn closure_declaration_gate_and_spot_check() {
        let b = bundle(32, 8, 13);
        let spec = SetItoSpec {
            x0: 0.2,
            diffusion: IntervalProcess::constant(iv(0.5, 1.0)),
            drift: IntervalProcess::singleton(0.0),
        };
        let undeclared = Transform::custom(
            "opaque",
            |_, x| x,
            |_, _| 0.0,
            |_, _| 1.0,
            |_, _| 0.0,
            false,
            0.0,
        );
        assert!(matches!(
            verify_ito_formula(&undeclared, &spec, &b, 4, Recipe::Mix, 1),
            Err(ItoError::ClosureIncompatible(_))
        ));

        // Identity maps intervals to themselves exactly, and the square
        // map's coverage gap stays a small fraction of the image scale.
        let fan = simulate_set_ito(&spec, &b, 16, Recipe::Mix, 1).unwrap();
        assert!(closure_spot_defect(&Transform::identity(), &fan) <= 1e-12);
        let defect = closure_spot_defect(&Transform::square(), &fan);
        assert!(defect <= 0.05, "square coverage gap {defect}");
    }

    #[test]
    fn finite_hull_addition_law() {
        // Hulls of finite scalar samples: hull(S1) + hull(S2) = hull(S1+S2).
        let s1 = [0.3, -1.2, 0.9, 0.0];
        let s2 = [2.0, 1.5, -0.4];
        let hull = |xs: &[f64]| {
            xs.iter()
                .fold(Interval::point(xs[0]), |h, &v| h.join(Interval::point(v)))
        };
        let lhs = hull(&s1).add(hull(&s2));
        let sums: Vec<f64> = s1
            .iter()
            .flat_map(|a| s2.iter().map(move |b| a + b))
            .collect();
        assert!(lhs.hausdorff(hull(&sums)) <= 1e-12);
    }

    #[test]
    fn square_inclusion_zero_driver_zero_z() {
        let b = bundle(32, 512, 8);
        let problem = SquareInclusionProblem {
            terminal: IntervalProcess::constant(iv(0.0, 1.0)),
            z: IntervalProcess::singleton(0.0),
            driver: Arc::new(|_, _| 0.0),
        };
        let rep = verify_square_inclusion(&problem, &b, 8, Recipe::Mix, 3).unwrap();
        assert!(rep.min_pass_fraction >= 0.999, "{rep:?}");
    }

    #[test]
    fn square_inclusion_singleton_reduces_to_classical_identity() {
        let b = bundle(64, 2048, 9);
        let problem = SquareInclusionProblem {
            terminal: IntervalProcess::singleton(1.2),
            z: IntervalProcess::singleton(0.7),
            driver: Arc::new(|_, _| 0.0),
        };
        let rep = verify_square_inclusion(&problem, &b, 2, Recipe::Extreme, 4).unwrap();
        assert!(rep.min_pass_fraction >= 0.999, "{rep:?}");
    }

    #[test]
    fn square_inclusion_backward_form_failure_detected() {
        // Wide Z against a point terminal: the erosion defining X cannot
        // exist once the stochastic window widens.
        let b = bundle(32, 64, 10);
        let problem = SquareInclusionProblem {
            terminal: IntervalProcess::singleton(0.0),
            z: IntervalProcess::constant(iv(0.0, 1.0)),
            driver: Arc::new(|_, _| 0.0),
        };
        assert!(matches!(
            verify_square_inclusion(&problem, &b, 4, Recipe::Mix, 5),
            Err(ItoError::BackwardForm { .. })
        ));
    }
}
