//! Set-valued integrals of interval-valued processes.
//!
//! Two routes compute `∫ F dt` and `∫ G dW` per scenario:
//!
//! * the **selection route**: the convex hull of finitely many adapted
//!   selection integrals, the constructive approximation exposed as
//!   [`set_integral`];
//! * the **closure route**: the per-step hull Minkowski sum
//!   `Σ_k hull{lo_k · w_k, hi_k · w_k}` (`w_k` the step weight `dt` or
//!   `dW_k`), which is the exact scenario-wise limit of selection hulls
//!   closed under window concatenation on interval carriers.
//!
//! The closure route splits and adds exactly by construction, so the
//! additivity/splitting/difference laws hold on it to rounding error; the
//! selection route is checked against it as an inner approximation.  The
//! two never share code, which keeps each an independent witness for the
//! other.

use rayon::prelude::*;
use thiserror::Error;

use crate::convex::Interval;
use crate::selection::{
    selection_integrals, IntegralKind, IntervalProcess, Recipe, SelectionFamily, SelectionError,
};
use crate::stochastic::{mean, std_dev, BrownianBundle, TimeGrid};
use crate::tolerances;

/// A time-indexed interval per scenario: the realized path of a set-valued
/// process or integral.
#[derive(Debug, Clone)]
pub struct SetPath {
    pub grid: TimeGrid,
    pub paths: usize,
    /// Number of stored nodes (integral paths store `steps + 1`).
    pub nodes: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl SetPath {
    pub fn filled(grid: TimeGrid, paths: usize, nodes: usize, iv: Interval) -> Self {
        Self {
            grid,
            paths,
            nodes,
            lo: vec![iv.lo; paths * nodes],
            hi: vec![iv.hi; paths * nodes],
        }
    }

    pub fn zeros(grid: TimeGrid, paths: usize, nodes: usize) -> Self {
        Self::filled(grid, paths, nodes, Interval::zero())
    }

    #[inline]
    pub fn at(&self, path: usize, k: usize) -> Interval {
        let i = path * self.nodes + k;
        Interval {
            lo: self.lo[i],
            hi: self.hi[i],
        }
    }

    #[inline]
    pub fn set(&mut self, path: usize, k: usize, iv: Interval) {
        let i = path * self.nodes + k;
        self.lo[i] = iv.lo;
        self.hi[i] = iv.hi;
    }

    /// Scenario-average of endpoints at a node: the expectation interval.
    pub fn mean_interval(&self, k: usize) -> Interval {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for path in 0..self.paths {
            let iv = self.at(path, k);
            lo += iv.lo;
            hi += iv.hi;
        }
        let n = self.paths as f64;
        Interval {
            lo: lo / n,
            hi: hi / n,
        }
    }

    /// Largest Hausdorff gap to another path table over all scenarios and
    /// nodes.
    pub fn max_hausdorff(&self, other: &SetPath) -> f64 {
        assert_eq!(self.nodes, other.nodes);
        assert_eq!(self.paths, other.paths);
        (0..self.paths)
            .into_par_iter()
            .map(|p| {
                let mut worst = 0.0f64;
                for k in 0..self.nodes {
                    worst = worst.max(self.at(p, k).hausdorff(other.at(p, k)));
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Scenario-mean Hausdorff gap per node, maximized over nodes.
    pub fn max_mean_hausdorff(&self, other: &SetPath) -> f64 {
        assert_eq!(self.nodes, other.nodes);
        let per_node: Vec<f64> = (0..self.nodes)
            .map(|k| {
                (0..self.paths)
                    .map(|p| self.at(p, k).hausdorff(other.at(p, k)))
                    .sum::<f64>()
                    / self.paths as f64
            })
            .collect();
        per_node.into_iter().fold(0.0, f64::max)
    }
}

/// Provenance of a hull-of-selections integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyProvenance {
    pub members: usize,
    pub recipe: Recipe,
    pub seed: u64,
}

/// Result of a windowed set-valued integral on the selection route.
#[derive(Debug, Clone)]
pub struct SetIntegralResult {
    /// Hull of the family's integrals per scenario.
    pub per_path: Vec<Interval>,
    pub provenance: FamilyProvenance,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum IntegralError {
    #[error("window [{from}, {to}) not within 0..{steps} grid steps")]
    BadWindow {
        from: usize,
        to: usize,
        steps: usize,
    },
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error("nodewise Hukuhara difference does not exist at step {step}")]
    NodewiseDifference { step: usize },
}

fn check_window(grid: &TimeGrid, from: usize, to: usize) -> Result<(), IntegralError> {
    if from <= to && to <= grid.steps {
        Ok(())
    } else {
        Err(IntegralError::BadWindow {
            from,
            to,
            steps: grid.steps,
        })
    }
}

/// Hull of selection integrals over the step window `[from, to)`: the
/// indicator-windowed set integral on the selection route.
#[allow(clippy::too_many_arguments)]
pub fn set_integral(
    process: &IntervalProcess,
    bundle: &BrownianBundle,
    kind: IntegralKind,
    from: usize,
    to: usize,
    members: usize,
    recipe: Recipe,
    seed: u64,
) -> Result<SetIntegralResult, IntegralError> {
    check_window(&bundle.grid, from, to)?;
    let family = SelectionFamily::build(process, &bundle.grid, members, recipe, seed)?;
    let ints = selection_integrals(&family, bundle, kind, from, to);
    let per_path = (0..bundle.paths)
        .map(|p| {
            ints.iter().fold(Interval::point(ints[0][p]), |h, m| {
                h.join(Interval::point(m[p]))
            })
        })
        .collect();
    Ok(SetIntegralResult {
        per_path,
        provenance: FamilyProvenance {
            members: family.len(),
            recipe,
            seed,
        },
    })
}

/// Closure-route integral: cumulative per-step hulls, one node table per
/// scenario.  Node `k` holds the integral over `[0, t_k)`; windows are
/// differences of nodes, exactly.
pub fn closure_integral_path(
    process: &IntervalProcess,
    bundle: &BrownianBundle,
    kind: IntegralKind,
) -> SetPath {
    let grid = bundle.grid;
    let w = bundle
        .brownian_nodes(0)
        .expect("component 0 always present");
    let dt = grid.dt();
    let nodes = grid.nodes();
    let mut out = SetPath::zeros(grid, bundle.paths, nodes);
    for path in 0..bundle.paths {
        let mut acc = Interval::zero();
        out.set(path, 0, acc);
        for k in 0..grid.steps {
            let iv = process.value(grid.node(k), w.at(path, k));
            let weight = match kind {
                IntegralKind::Dt => dt,
                IntegralKind::Dw => bundle.dw(path, k, 0),
            };
            acc = acc.add(Interval::hull_of(iv.lo * weight, iv.hi * weight));
            out.set(path, k + 1, acc);
        }
    }
    out
}

/// Closure-route integral over a step window, per scenario.
pub fn closure_integral_window(
    process: &IntervalProcess,
    bundle: &BrownianBundle,
    kind: IntegralKind,
    from: usize,
    to: usize,
) -> Result<Vec<Interval>, IntegralError> {
    check_window(&bundle.grid, from, to)?;
    let w = bundle
        .brownian_nodes(0)
        .expect("component 0 always present");
    let dt = bundle.grid.dt();
    Ok((0..bundle.paths)
        .into_par_iter()
        .map(|path| {
            let mut acc = Interval::zero();
            for k in from..to {
                let iv = process.value(bundle.grid.node(k), w.at(path, k));
                let weight = match kind {
                    IntegralKind::Dt => dt,
                    IntegralKind::Dw => bundle.dw(path, k, 0),
                };
                acc = acc.add(Interval::hull_of(iv.lo * weight, iv.hi * weight));
            }
            acc
        })
        .collect())
}

/// Closure-route integral of a constant box-valued process over a step
/// window.  Coordinates decouple under Minkowski sums and scalar step
/// weights, so a box integrates per axis.
pub fn box_closure_integral_window(
    set: &crate::convex::BoxSet,
    bundle: &BrownianBundle,
    kind: IntegralKind,
    from: usize,
    to: usize,
) -> Result<Vec<crate::convex::BoxSet>, IntegralError> {
    check_window(&bundle.grid, from, to)?;
    let per_axis: Vec<Vec<Interval>> = set
        .axes
        .iter()
        .map(|axis| {
            closure_integral_window(
                &IntervalProcess::constant(*axis),
                bundle,
                kind,
                from,
                to,
            )
        })
        .collect::<Result<_, _>>()?;
    Ok((0..bundle.paths)
        .map(|p| crate::convex::BoxSet::new(per_axis.iter().map(|a| a[p]).collect()))
        .collect())
}

/// Additivity report: distances between `∫(F1+F2)` and `∫F1 + ∫F2`, and,
/// when requested, between `∫(F1 ⊖ F2)` and `∫F1 ⊖ ∫F2`.
#[derive(Debug, Clone)]
pub struct AdditivityReport {
    /// Max over nodes of scenario-mean Hausdorff distance (sum law).
    pub sum_distance: f64,
    /// Same for the difference law; `None` when not requested.
    pub difference_distance: Option<f64>,
}

/// Verifies the sum (and optionally difference) laws on the closure route,
/// nodewise over the full grid.
pub fn verify_additivity(
    f1: &IntervalProcess,
    f2: &IntervalProcess,
    bundle: &BrownianBundle,
    kind: IntegralKind,
    check_difference: bool,
) -> Result<AdditivityReport, IntegralError> {
    let grid = bundle.grid;
    let sum_proc = combine(f1, f2, |a, b| a.add(b));
    let lhs_sum = closure_integral_path(&sum_proc, bundle, kind);
    let i1 = closure_integral_path(f1, bundle, kind);
    let i2 = closure_integral_path(f2, bundle, kind);

    let mut rhs_sum = SetPath::zeros(grid, bundle.paths, grid.nodes());
    for p in 0..bundle.paths {
        for k in 0..grid.nodes() {
            rhs_sum.set(p, k, i1.at(p, k).add(i2.at(p, k)));
        }
    }
    let sum_distance = lhs_sum.max_mean_hausdorff(&rhs_sum);

    let difference_distance = if check_difference {
        // F1 ⊖ F2 must exist nodewise; surface the first failure.
        let w = bundle.brownian_nodes(0).expect("component 0");
        for k in 0..=grid.steps {
            let t = grid.node(k);
            for p in 0..bundle.paths {
                if f1.value(t, w.at(p, k)).hukuhara(f2.value(t, w.at(p, k))).is_none() {
                    return Err(IntegralError::NodewiseDifference { step: k });
                }
            }
        }
        let diff_proc = combine_fallible(f1, f2, k_diff)?;
        let lhs = closure_integral_path(&diff_proc, bundle, kind);
        let mut rhs = SetPath::zeros(grid, bundle.paths, grid.nodes());
        for p in 0..bundle.paths {
            for k in 0..grid.nodes() {
                let d = i1
                    .at(p, k)
                    .hukuhara(i2.at(p, k))
                    .ok_or(IntegralError::NodewiseDifference { step: k })?;
                rhs.set(p, k, d);
            }
        }
        Some(lhs.max_mean_hausdorff(&rhs))
    } else {
        None
    };

    Ok(AdditivityReport {
        sum_distance,
        difference_distance,
    })
}

fn k_diff(a: Interval, b: Interval) -> Option<Interval> {
    a.hukuhara(b)
}

fn combine(
    f1: &IntervalProcess,
    f2: &IntervalProcess,
    op: fn(Interval, Interval) -> Interval,
) -> IntervalProcess {
    let (a, b) = (f1.clone(), f2.clone());
    IntervalProcess::state_fn(f64::INFINITY, move |t, w| op(a.value(t, w), b.value(t, w)))
}

fn combine_fallible(
    f1: &IntervalProcess,
    f2: &IntervalProcess,
    op: fn(Interval, Interval) -> Option<Interval>,
) -> Result<IntervalProcess, IntegralError> {
    let (a, b) = (f1.clone(), f2.clone());
    Ok(IntervalProcess::state_fn(f64::INFINITY, move |t, w| {
        op(a.value(t, w), b.value(t, w)).unwrap_or(Interval::zero())
    }))
}

/// Splitting check on the closure route: the full-window integral equals
/// left window plus right window at every interior node, and the right
/// window is the Hukuhara difference of full minus left.
pub fn splitting_defect(
    process: &IntervalProcess,
    bundle: &BrownianBundle,
    kind: IntegralKind,
) -> f64 {
    let cum = closure_integral_path(process, bundle, kind);
    let steps = bundle.grid.steps;
    (0..bundle.paths)
        .into_par_iter()
        .map(|p| {
            let full = cum.at(p, steps);
            let mut worst = 0.0f64;
            for k in 0..=steps {
                let left = cum.at(p, k);
                // Widths accumulate monotonically along the path, so the
                // difference exists; the fallback only absorbs sub-ulp
                // rounding crossings.
                let right = full.hukuhara(left).unwrap_or_else(|| {
                    Interval::point(0.5 * ((full.lo - left.lo) + (full.hi - left.hi)))
                });
                worst = worst.max(left.add(right).hausdorff(full));
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Outcome of the set-valued isometry comparison for one process.
#[derive(Debug, Clone)]
pub struct IsometryReport {
    /// Hull over selections of the per-selection mean of `(∫ φ dW)^2`.
    pub lhs: Interval,
    /// Hull over selections of the per-selection mean of `∫ φ^2 dt`.
    pub rhs: Interval,
    pub hausdorff: f64,
    /// Hull of per-selection integral means; the zero-mean clause asks this
    /// to sit inside the Monte Carlo band around `{0}`.
    pub mean_hull: Interval,
    pub mean_band: f64,
    /// Band for the two-sided comparison: the largest per-selection
    /// Monte Carlo band across both statistics.
    pub comparison_band: f64,
}

/// Empirical two-sided check of the set-valued Ito isometry for a
/// one-dimensional process: both sides are hulls of per-selection sample
/// statistics.
pub fn setvalued_isometry_check(
    process: &IntervalProcess,
    bundle: &BrownianBundle,
    members: usize,
    recipe: Recipe,
    seed: u64,
) -> Result<IsometryReport, IntegralError> {
    let grid = bundle.grid;
    let family = SelectionFamily::build(process, &grid, members, recipe, seed)?;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let dt = grid.dt();

    let mut lhs = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };
    let mut rhs = lhs;
    let mut mean_hull = lhs;
    let mut mean_band = 0.0f64;
    let mut comparison_band = 0.0f64;

    for i in 0..family.len() {
        let stats: Vec<(f64, f64)> = (0..bundle.paths)
            .into_par_iter()
            .map(|path| {
                let mut ito = 0.0;
                let mut quad = 0.0;
                for k in 0..grid.steps {
                    let v = family.value(i, k, grid.node(k), w.at(path, k));
                    ito += v * bundle.dw(path, k, 0);
                    quad += v * v * dt;
                }
                (ito, quad)
            })
            .collect();
        let itos: Vec<f64> = stats.iter().map(|s| s.0).collect();
        let sqs: Vec<f64> = stats.iter().map(|s| s.0 * s.0).collect();
        let quads: Vec<f64> = stats.iter().map(|s| s.1).collect();

        let m_sq = mean(&sqs);
        let m_quad = mean(&quads);
        let m_ito = mean(&itos);
        lhs = lhs.join(Interval::point(m_sq));
        rhs = rhs.join(Interval::point(m_quad));
        mean_hull = mean_hull.join(Interval::point(m_ito));
        mean_band = mean_band.max(tolerances::mc_band(std_dev(&itos), bundle.paths));
        let diff: Vec<f64> = sqs.iter().zip(&quads).map(|(a, b)| a - b).collect();
        comparison_band = comparison_band.max(tolerances::mc_band(std_dev(&diff), bundle.paths));
    }

    Ok(IsometryReport {
        lhs,
        rhs,
        hausdorff: lhs.hausdorff(rhs),
        mean_hull,
        mean_band,
        comparison_band,
    })
}

/// Verdict of the integral-equality diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityVerdict {
    /// Integrals and processes both indistinguishable at tolerance.
    Pass,
    /// Integrals already distinguish the processes.
    Distinguishable,
    /// Integrals agree but the processes do not: the implication failed.
    Violation,
}

#[derive(Debug, Clone)]
pub struct EqualityDiagnostic {
    /// Scenario-mean over paths of the max-node Hausdorff distance between
    /// cumulative stochastic integrals.
    pub integral_distance: f64,
    /// Max over nodes of scenario-mean Hausdorff distance between the
    /// process values.
    pub process_distance: f64,
    pub verdict: EqualityVerdict,
}

/// Numerical contrapositive of "equal stochastic integrals force equal
/// integrands": if the integral paths agree within `eps_int`, the process
/// paths must agree within `eps_proc`.
pub fn integral_equality_diagnostic(
    x: &IntervalProcess,
    y: &IntervalProcess,
    bundle: &BrownianBundle,
    eps_int: f64,
    eps_proc: f64,
) -> EqualityDiagnostic {
    let ix = closure_integral_path(x, bundle, IntegralKind::Dw);
    let iy = closure_integral_path(y, bundle, IntegralKind::Dw);
    let per_path: Vec<f64> = (0..bundle.paths)
        .into_par_iter()
        .map(|p| {
            let mut worst = 0.0f64;
            for k in 0..ix.nodes {
                worst = worst.max(ix.at(p, k).hausdorff(iy.at(p, k)));
            }
            worst
        })
        .collect();
    let integral_distance = mean(&per_path);

    let grid = bundle.grid;
    let w = bundle.brownian_nodes(0).expect("component 0");
    let mut process_distance = 0.0f64;
    for k in 0..=grid.steps {
        let t = grid.node(k);
        let d = (0..bundle.paths)
            .map(|p| x.value(t, w.at(p, k)).hausdorff(y.value(t, w.at(p, k))))
            .sum::<f64>()
            / bundle.paths as f64;
        process_distance = process_distance.max(d);
    }

    let verdict = if integral_distance > eps_int {
        EqualityVerdict::Distinguishable
    } else if process_distance <= eps_proc {
        EqualityVerdict::Pass
    } else {
        EqualityVerdict::Violation
    };

    EqualityDiagnostic {
        integral_distance,
        process_distance,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::HULL_DETERMINISTIC;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn bundle(steps: usize, paths: usize, seed: u64) -> BrownianBundle {
        BrownianBundle::generate(TimeGrid::new(1.0, steps).unwrap(), paths, 1, seed)
    }

    #[test]
    fn constant_dt_integral_hits_endpoint_hull() {
        let b = bundle(64, 8, 1);
        let f = IntervalProcess::constant(iv(0.25, 2.0));
        let r = set_integral(&f, &b, IntegralKind::Dt, 0, 64, 8, Recipe::Mix, 3).unwrap();
        for hull in &r.per_path {
            assert!(hull.hausdorff(iv(0.25, 2.0)) <= HULL_DETERMINISTIC);
        }
        // Closure route agrees.
        let c = closure_integral_window(&f, &b, IntegralKind::Dt, 0, 64).unwrap();
        for hull in &c {
            assert!(hull.hausdorff(iv(0.25, 2.0)) <= HULL_DETERMINISTIC);
        }
    }

    #[test]
    fn zero_process_integrates_to_zero() {
        let b = bundle(32, 8, 2);
        let f = IntervalProcess::singleton(0.0);
        for kind in [IntegralKind::Dt, IntegralKind::Dw] {
            let r = set_integral(&f, &b, kind, 0, 32, 2, Recipe::Extreme, 3).unwrap();
            for hull in &r.per_path {
                assert_eq!(*hull, Interval::zero());
            }
        }
    }

    #[test]
    fn window_is_closure_difference() {
        // Right window equals full ⊖ left on the closure route, per path.
        let b = bundle(40, 32, 7);
        let f = IntervalProcess::state_fn(3.0, |t, w| {
            let m = t + 0.3 * (w).sin();
            iv(m - 0.5, m + 0.7)
        });
        for kind in [IntegralKind::Dt, IntegralKind::Dw] {
            let cum = closure_integral_path(&f, &b, kind);
            let split = 13;
            let right = closure_integral_window(&f, &b, kind, split, 40).unwrap();
            for p in 0..b.paths {
                let full = cum.at(p, 40);
                let left = cum.at(p, split);
                let diff = full.hukuhara(left).expect("split exists");
                assert!(diff.hausdorff(right[p]) <= 1e-12);
            }
        }
    }

    #[test]
    fn bad_window_rejected() {
        let b = bundle(10, 2, 1);
        let f = IntervalProcess::singleton(1.0);
        assert!(matches!(
            set_integral(&f, &b, IntegralKind::Dt, 0, 11, 2, Recipe::Mix, 1),
            Err(IntegralError::BadWindow { .. })
        ));
    }

    #[test]
    fn additivity_of_constant_processes() {
        let b = bundle(50, 16, 4);
        let f1 = IntervalProcess::constant(iv(0.0, 1.0));
        let f2 = IntervalProcess::constant(iv(1.0, 2.0));
        let rep = verify_additivity(&f1, &f2, &b, IntegralKind::Dt, false).unwrap();
        assert!(rep.sum_distance <= 1e-10);
        // Both sides are [1,3] at the horizon.
        let sum = combine(&f1, &f2, |a, b| a.add(b));
        let cum = closure_integral_path(&sum, &b, IntegralKind::Dt);
        assert!(cum.at(0, 50).hausdorff(iv(1.0, 3.0)) <= 1e-10);
    }

    #[test]
    fn additivity_with_zero_is_trivial() {
        let b = bundle(20, 8, 5);
        let f1 = IntervalProcess::constant(iv(-1.0, 4.0));
        let f2 = IntervalProcess::singleton(0.0);
        for kind in [IntegralKind::Dt, IntegralKind::Dw] {
            let rep = verify_additivity(&f1, &f2, &b, kind, true).unwrap();
            assert!(rep.sum_distance <= 1e-12);
            assert!(rep.difference_distance.unwrap() <= 1e-12);
        }
    }

    #[test]
    fn additivity_difference_clause() {
        let b = bundle(30, 16, 6);
        let f1 = IntervalProcess::constant(iv(0.0, 3.0));
        let f2 = IntervalProcess::constant(iv(1.0, 2.0));
        let rep = verify_additivity(&f1, &f2, &b, IntegralKind::Dw, true).unwrap();
        assert!(rep.sum_distance <= 1e-12);
        assert!(rep.difference_distance.unwrap() <= 1e-12);

        // Nonexistent nodewise difference is a reported failure.
        let narrow = IntervalProcess::constant(iv(0.0, 1.0));
        let wide = IntervalProcess::constant(iv(0.0, 2.0));
        assert!(matches!(
            verify_additivity(&narrow, &wide, &b, IntegralKind::Dt, true),
            Err(IntegralError::NodewiseDifference { .. })
        ));
    }

    #[test]
    fn splitting_is_exact_on_closure_route() {
        let b = bundle(64, 32, 8);
        let f = IntervalProcess::time_fn(|t| iv(-t, 1.0 + t));
        for kind in [IntegralKind::Dt, IntegralKind::Dw] {
            assert!(splitting_defect(&f, &b, kind) <= 1e-12);
        }
    }

    #[test]
    fn selection_hull_sits_inside_closure_hull() {
        let b = bundle(48, 64, 9);
        let f = IntervalProcess::constant(iv(-1.0, 1.0));
        let sel = set_integral(&f, &b, IntegralKind::Dw, 0, 48, 16, Recipe::Support, 2).unwrap();
        let closure = closure_integral_window(&f, &b, IntegralKind::Dw, 0, 48).unwrap();
        for p in 0..b.paths {
            assert!(sel.per_path[p].lo >= closure[p].lo - 1e-12);
            assert!(sel.per_path[p].hi <= closure[p].hi + 1e-12);
        }
    }

    #[test]
    fn inclusion_monotonicity() {
        let b = bundle(32, 32, 10);
        let small = IntervalProcess::constant(iv(0.2, 0.8));
        let large = IntervalProcess::constant(iv(0.0, 1.0));
        for kind in [IntegralKind::Dt, IntegralKind::Dw] {
            let a = closure_integral_window(&small, &b, kind, 0, 32).unwrap();
            let c = closure_integral_window(&large, &b, kind, 0, 32).unwrap();
            for p in 0..b.paths {
                assert!(a[p].lo >= c[p].lo - 1e-12 && a[p].hi <= c[p].hi + 1e-12);
            }
        }
    }

    #[test]
    fn box_integral_decomposes_per_axis() {
        let b = bundle(32, 16, 13);
        let set = crate::convex::BoxSet::new(vec![iv(0.0, 1.0), iv(-2.0, 0.5)]);
        let dt_ints = box_closure_integral_window(&set, &b, IntegralKind::Dt, 0, 32).unwrap();
        for bx in &dt_ints {
            assert!(bx.axes[0].hausdorff(iv(0.0, 1.0)) <= 1e-12);
            assert!(bx.axes[1].hausdorff(iv(-2.0, 0.5)) <= 1e-12);
        }
        let dw_ints = box_closure_integral_window(&set, &b, IntegralKind::Dw, 0, 32).unwrap();
        let scalar0 =
            closure_integral_window(&IntervalProcess::constant(iv(0.0, 1.0)), &b, IntegralKind::Dw, 0, 32)
                .unwrap();
        for (bx, s0) in dw_ints.iter().zip(&scalar0) {
            assert!(bx.axes[0].hausdorff(*s0) <= 1e-12);
        }
    }

    #[test]
    fn isometry_singleton_degenerates_to_classical() {
        let b = bundle(64, 20_000, 11);
        let f = IntervalProcess::singleton(1.5);
        let rep = setvalued_isometry_check(&f, &b, 4, Recipe::Mix, 1).unwrap();
        // Both sides collapse to {c^2 T} = {2.25}.
        assert!(rep.rhs.hausdorff(Interval::point(2.25)) <= 1e-12);
        assert!(rep.lhs.hausdorff(Interval::point(2.25)) <= rep.comparison_band);
        assert!(rep.mean_hull.norm() <= rep.mean_band);
    }

    #[test]
    fn equality_diagnostic_cases() {
        let b = bundle(32, 2_000, 12);
        let x = IntervalProcess::constant(iv(0.0, 1.0));

        let d = integral_equality_diagnostic(&x, &x, &b, 1e-9, 1e-9);
        assert_eq!(d.verdict, EqualityVerdict::Pass);
        assert_eq!(d.integral_distance, 0.0);
        assert_eq!(d.process_distance, 0.0);

        let shifted = IntervalProcess::constant(iv(0.1, 1.1));
        let d = integral_equality_diagnostic(&x, &shifted, &b, 0.01, 0.01);
        assert_eq!(d.verdict, EqualityVerdict::Distinguishable);
        assert!((d.process_distance - 0.1).abs() < 1e-12);
        // Shift of 0.1 moves the integral by 0.1 * |W| scale.
        assert!(d.integral_distance > 0.01);
    }
}
