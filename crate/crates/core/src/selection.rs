//! Finite adapted-selection families for set-valued processes.
//!
//! A selection is a single-valued adapted process lying inside the set at
//! every node.  Families are stored as *rules* (endpoint / convex-mixture
//! recipes), not as materialized value tables, so a family over a hundred
//! thousand paths costs nothing until its values are streamed.  The convex
//! hull of the family's integrals is the computational stand-in for the
//! closure of all square-integrable adapted selections; enriching the
//! family can only grow that hull.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::convex::{BoxSet, Interval};
use crate::stochastic::{unit_uniform, BrownianBundle, ScalarPath, TimeGrid};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SelectionError {
    #[error("need at least {min} selections for this recipe, got {got}")]
    FamilyTooSmall { min: usize, got: usize },
}

/// An interval-valued process on the grid: constant, deterministic in time,
/// or a function of (time, Brownian state).
#[derive(Clone)]
pub enum IntervalProcess {
    Constant(Interval),
    TimeDependent(Arc<dyn Fn(f64) -> Interval + Send + Sync>),
    StateDependent {
        f: Arc<dyn Fn(f64, f64) -> Interval + Send + Sync>,
        /// Declared uniform bound on `sup |value|`; the square-integrable
        /// boundedness witness for carriers that cannot be scanned.
        bound: f64,
    },
}

impl std::fmt::Debug for IntervalProcess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntervalProcess::Constant(iv) => write!(f, "Constant({iv})"),
            IntervalProcess::TimeDependent(_) => write!(f, "TimeDependent(..)"),
            IntervalProcess::StateDependent { bound, .. } => {
                write!(f, "StateDependent(bound={bound})")
            }
        }
    }
}

impl IntervalProcess {
    pub fn constant(iv: Interval) -> Self {
        IntervalProcess::Constant(iv)
    }

    pub fn singleton(x: f64) -> Self {
        IntervalProcess::Constant(Interval::point(x))
    }

    pub fn time_fn(f: impl Fn(f64) -> Interval + Send + Sync + 'static) -> Self {
        IntervalProcess::TimeDependent(Arc::new(f))
    }

    pub fn state_fn(bound: f64, f: impl Fn(f64, f64) -> Interval + Send + Sync + 'static) -> Self {
        IntervalProcess::StateDependent {
            f: Arc::new(f),
            bound,
        }
    }

    #[inline]
    pub fn value(&self, t: f64, w: f64) -> Interval {
        match self {
            IntervalProcess::Constant(iv) => *iv,
            IntervalProcess::TimeDependent(f) => f(t),
            IntervalProcess::StateDependent { f, .. } => f(t, w),
        }
    }

    /// Whether every value is a single point (selection families collapse
    /// to one member).
    pub fn is_singleton_on(&self, grid: &TimeGrid) -> bool {
        match self {
            IntervalProcess::Constant(iv) => iv.is_point(),
            IntervalProcess::TimeDependent(f) => {
                (0..=grid.steps).all(|k| f(grid.node(k)).is_point())
            }
            IntervalProcess::StateDependent { .. } => false,
        }
    }

    /// Finite bound on `sup |value|` over the grid, the boundedness witness.
    pub fn norm_bound(&self, grid: &TimeGrid) -> f64 {
        match self {
            IntervalProcess::Constant(iv) => iv.norm(),
            IntervalProcess::TimeDependent(f) => (0..=grid.steps)
                .map(|k| f(grid.node(k)).norm())
                .fold(0.0, f64::max),
            IntervalProcess::StateDependent { bound, .. } => *bound,
        }
    }
}

/// How a family member picks its point inside each interval value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionRule {
    /// Lower endpoint at every node.
    Lower,
    /// Upper endpoint at every node.
    Upper,
    /// Deterministic time-varying mixture: the weight at step `k` is a
    /// counter-RNG uniform keyed by `(key, k)`.  Constant-in-scenario
    /// weights are trivially adapted.
    DeterministicMix { key: u64 },
    /// Scenario-dependent mixture `sigmoid(a w + b)` of the Brownian state;
    /// adapted because it reads only the current state.
    AdaptedMix { a: f64, b: f64 },
}

impl SelectionRule {
    #[inline]
    pub fn weight(self, k: usize, w: f64) -> f64 {
        match self {
            SelectionRule::Lower => 0.0,
            SelectionRule::Upper => 1.0,
            SelectionRule::DeterministicMix { key } => {
                unit_uniform(key.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
            }
            SelectionRule::AdaptedMix { a, b } => 1.0 / (1.0 + (-(a * w + b)).exp()),
        }
    }

    /// Point inside `iv` chosen by this rule; weight 0 is the lower
    /// endpoint, 1 the upper.
    #[inline]
    pub fn pick(self, iv: Interval, k: usize, w: f64) -> f64 {
        let lambda = self.weight(k, w);
        iv.lo + lambda * (iv.hi - iv.lo)
    }
}

/// Which mixture rules pad a family past the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    /// Endpoint selections only.
    Extreme,
    /// Endpoints plus deterministic time-varying mixtures.  The mixtures
    /// make the family's stochastic-integral hull grow toward the
    /// decomposable closure.
    Support,
    /// Endpoints plus alternating deterministic and state-adapted mixtures.
    Mix,
}

impl Recipe {
    pub fn parse(s: &str) -> Option<Recipe> {
        match s {
            "extreme" => Some(Recipe::Extreme),
            "support" => Some(Recipe::Support),
            "mix" => Some(Recipe::Mix),
            _ => None,
        }
    }
}

/// Default family size when the caller has no better budget: endpoints
/// alone are exact for deterministic interval integrands, anything
/// scenario-dependent gets a rich family.
pub fn default_members(process: &IntervalProcess, grid: &TimeGrid) -> usize {
    if process.is_singleton_on(grid) {
        1
    } else {
        match process {
            IntervalProcess::Constant(_) | IntervalProcess::TimeDependent(_) => 2,
            IntervalProcess::StateDependent { .. } => 32,
        }
    }
}

/// A finite family of adapted selections of one interval-valued process.
#[derive(Debug, Clone)]
pub struct SelectionFamily {
    pub process: IntervalProcess,
    pub recipe: Recipe,
    pub seed: u64,
    rules: Vec<SelectionRule>,
}

impl SelectionFamily {
    /// Builds `k` selections: the two endpoints always, then mixtures per
    /// the recipe.  Singleton processes collapse to one member.
    pub fn build(
        process: &IntervalProcess,
        grid: &TimeGrid,
        k: usize,
        recipe: Recipe,
        seed: u64,
    ) -> Result<Self, SelectionError> {
        if process.is_singleton_on(grid) {
            return Ok(Self {
                process: process.clone(),
                recipe,
                seed,
                rules: vec![SelectionRule::Lower],
            });
        }
        let min = 2;
        if k < min {
            return Err(SelectionError::FamilyTooSmall { min, got: k });
        }
        let mut rules = vec![SelectionRule::Lower, SelectionRule::Upper];
        for i in 2..k {
            let rule = match recipe {
                Recipe::Extreme => {
                    // Extra extreme slots alternate the endpoints.
                    if i % 2 == 0 {
                        SelectionRule::Lower
                    } else {
                        SelectionRule::Upper
                    }
                }
                Recipe::Support => SelectionRule::DeterministicMix {
                    key: seed.wrapping_add(0x1234_5678_9abc_def1u64.wrapping_mul(i as u64)),
                },
                Recipe::Mix => {
                    if i % 2 == 0 {
                        SelectionRule::DeterministicMix {
                            key: seed.wrapping_add(0x1234_5678_9abc_def1u64.wrapping_mul(i as u64)),
                        }
                    } else {
                        let u = unit_uniform(seed.wrapping_add(i as u64));
                        let v = unit_uniform(seed.wrapping_add(i as u64) ^ 0x5555);
                        SelectionRule::AdaptedMix {
                            a: 2.0 * u - 1.0,
                            b: 2.0 * v - 1.0,
                        }
                    }
                }
            };
            rules.push(rule);
        }
        Ok(Self {
            process: process.clone(),
            recipe,
            seed,
            rules,
        })
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[SelectionRule] {
        &self.rules
    }

    /// Value of member `i` at `(t_k, path)` given the Brownian state `w`.
    #[inline]
    pub fn value(&self, i: usize, k: usize, t: f64, w: f64) -> f64 {
        self.rules[i].pick(self.process.value(t, w), k, w)
    }

    /// Materializes member `i` as a path table (small runs and audits).
    pub fn member_path(&self, i: usize, bundle: &BrownianBundle) -> ScalarPath {
        let w = bundle
            .brownian_nodes(0)
            .expect("component 0 always present");
        let mut out = ScalarPath::zeros(bundle.grid, bundle.paths);
        for path in 0..bundle.paths {
            for k in 0..bundle.grid.nodes() {
                let t = bundle.grid.node(k);
                out.set(path, k, self.value(i, k, t, w.at(path, k)));
            }
        }
        out
    }

    /// Audits membership: largest signed distance of any member value to
    /// its set over all nodes and paths (nonpositive means inside).
    pub fn membership_excess(&self, bundle: &BrownianBundle) -> f64 {
        let w = bundle
            .brownian_nodes(0)
            .expect("component 0 always present");
        (0..bundle.paths)
            .into_par_iter()
            .map(|path| {
                let mut worst = f64::NEG_INFINITY;
                for k in 0..bundle.grid.nodes() {
                    let t = bundle.grid.node(k);
                    let iv = self.process.value(t, w.at(path, k));
                    for i in 0..self.rules.len() {
                        let v = self.value(i, k, t, w.at(path, k));
                        worst = worst.max((iv.lo - v).max(v - iv.hi));
                    }
                }
                worst
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
}

/// Kind of integral applied to each family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    /// Riemann sum against `dt`.
    Dt,
    /// Left-endpoint stochastic sum against `dW`.
    Dw,
}

/// Integrals of every family member over the step window `[from, to)`:
/// `out[i][path]`.
pub fn selection_integrals(
    family: &SelectionFamily,
    bundle: &BrownianBundle,
    kind: IntegralKind,
    from: usize,
    to: usize,
) -> Vec<Vec<f64>> {
    let w = bundle
        .brownian_nodes(0)
        .expect("component 0 always present");
    let dt = bundle.grid.dt();
    (0..family.len())
        .map(|i| {
            (0..bundle.paths)
                .into_par_iter()
                .map(|path| {
                    let mut acc = 0.0;
                    for k in from..to {
                        let t = bundle.grid.node(k);
                        let v = family.value(i, k, t, w.at(path, k));
                        acc += match kind {
                            IntegralKind::Dt => v * dt,
                            IntegralKind::Dw => v * bundle.dw(path, k, 0),
                        };
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Per-coordinate selection families for a box-valued constant process.
/// Coordinates decouple under every operation used here, so a box family
/// is the product of its axis families.
#[derive(Debug, Clone)]
pub struct BoxSelectionFamily {
    pub axes: Vec<SelectionFamily>,
}

impl BoxSelectionFamily {
    pub fn build(
        set: &BoxSet,
        grid: &TimeGrid,
        k: usize,
        recipe: Recipe,
        seed: u64,
    ) -> Result<Self, SelectionError> {
        let axes = set
            .axes
            .iter()
            .enumerate()
            .map(|(i, axis)| {
                SelectionFamily::build(
                    &IntervalProcess::constant(*axis),
                    grid,
                    k,
                    recipe,
                    seed.wrapping_add(i as u64),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { axes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::BrownianBundle;

    fn setup(steps: usize, paths: usize) -> (TimeGrid, BrownianBundle) {
        let grid = TimeGrid::new(1.0, steps).unwrap();
        let bundle = BrownianBundle::generate(grid, paths, 1, 77);
        (grid, bundle)
    }

    #[test]
    fn constant_interval_endpoints() {
        let (grid, bundle) = setup(8, 16);
        let f = IntervalProcess::constant(Interval::new(0.0, 1.0).unwrap());
        let fam = SelectionFamily::build(&f, &grid, 2, Recipe::Extreme, 1).unwrap();
        assert_eq!(fam.len(), 2);
        let lo = fam.member_path(0, &bundle);
        let hi = fam.member_path(1, &bundle);
        for p in 0..16 {
            for k in 0..=8 {
                assert_eq!(lo.at(p, k), 0.0);
                assert_eq!(hi.at(p, k), 1.0);
            }
        }
    }

    #[test]
    fn singleton_collapses_family() {
        let (grid, bundle) = setup(4, 4);
        let f = IntervalProcess::singleton(2.5);
        let fam = SelectionFamily::build(&f, &grid, 7, Recipe::Mix, 1).unwrap();
        assert_eq!(fam.len(), 1);
        let path = fam.member_path(0, &bundle);
        assert!(path.row(2).iter().all(|&v| v == 2.5));
    }

    #[test]
    fn family_too_small_rejected() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let f = IntervalProcess::constant(Interval::new(0.0, 1.0).unwrap());
        assert_eq!(
            SelectionFamily::build(&f, &grid, 1, Recipe::Mix, 1).unwrap_err(),
            SelectionError::FamilyTooSmall { min: 2, got: 1 }
        );
    }

    #[test]
    fn growing_interval_membership_audit() {
        let (grid, bundle) = setup(16, 64);
        let f = IntervalProcess::time_fn(|t| Interval::new(0.0, t).unwrap());
        let fam = SelectionFamily::build(&f, &grid, 5, Recipe::Mix, 42).unwrap();
        // All mixture values stay inside [0, t] at every node.
        assert!(fam.membership_excess(&bundle) <= 0.0);
    }

    #[test]
    fn endpoint_dominance_for_dt_integrals() {
        let (grid, bundle) = setup(32, 8);
        let f = IntervalProcess::constant(Interval::new(-0.5, 2.0).unwrap());
        let fam = SelectionFamily::build(&f, &grid, 8, Recipe::Mix, 5).unwrap();
        let ints = selection_integrals(&fam, &bundle, IntegralKind::Dt, 0, grid.steps);
        // dt weights are positive, so the endpoint members bound the family.
        for path in 0..8 {
            let lo = ints[0][path];
            let hi = ints[1][path];
            assert!((lo - (-0.5)).abs() < 1e-12);
            assert!((hi - 2.0).abs() < 1e-12);
            for member in &ints[2..] {
                assert!(member[path] >= lo - 1e-12 && member[path] <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn dw_integrals_of_endpoints() {
        let (grid, bundle) = setup(16, 32);
        let f = IntervalProcess::constant(Interval::new(0.0, 1.0).unwrap());
        let fam = SelectionFamily::build(&f, &grid, 2, Recipe::Extreme, 5).unwrap();
        let ints = selection_integrals(&fam, &bundle, IntegralKind::Dw, 0, grid.steps);
        let w = bundle.brownian_nodes(0).unwrap();
        for path in 0..32 {
            assert_eq!(ints[0][path], 0.0);
            assert!((ints[1][path] - w.at(path, 16)).abs() < 1e-12);
        }
    }

    #[test]
    fn default_family_sizes() {
        let grid = TimeGrid::new(1.0, 8).unwrap();
        assert_eq!(default_members(&IntervalProcess::singleton(2.0), &grid), 1);
        assert_eq!(
            default_members(
                &IntervalProcess::constant(Interval::new(0.0, 1.0).unwrap()),
                &grid
            ),
            2
        );
        assert_eq!(
            default_members(
                &IntervalProcess::state_fn(2.0, |_, w| Interval::hull_of(0.0, w.tanh())),
                &grid
            ),
            32
        );
    }

    #[test]
    fn box_family_membership_per_coordinate() {
        let (grid, bundle) = setup(8, 16);
        let set = BoxSet::new(vec![
            Interval::new(0.0, 1.0).unwrap(),
            Interval::new(-2.0, -1.0).unwrap(),
        ]);
        let fam = BoxSelectionFamily::build(&set, &grid, 6, Recipe::Mix, 3).unwrap();
        assert_eq!(fam.axes.len(), 2);
        let w = bundle.brownian_nodes(0).unwrap();
        for (axis, family) in fam.axes.iter().enumerate() {
            for i in 0..family.len() {
                for p in 0..bundle.paths {
                    for k in 0..=grid.steps {
                        let v = family.value(i, k, grid.node(k), w.at(p, k));
                        assert!(set.axes[axis].contains(v, 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn enrichment_grows_the_hull() {
        let (grid, bundle) = setup(64, 16);
        let f = IntervalProcess::constant(Interval::new(-1.0, 1.0).unwrap());
        let small = SelectionFamily::build(&f, &grid, 4, Recipe::Support, 9).unwrap();
        let big = SelectionFamily::build(&f, &grid, 12, Recipe::Support, 9).unwrap();
        // The first members of the bigger family are exactly the smaller one.
        assert_eq!(&big.rules()[..4], small.rules());
        let si = selection_integrals(&small, &bundle, IntegralKind::Dw, 0, grid.steps);
        let bi = selection_integrals(&big, &bundle, IntegralKind::Dw, 0, grid.steps);
        for path in 0..16 {
            let hull_small = si
                .iter()
                .map(|m| m[path])
                .fold(Interval::point(si[0][path]), |h, v| {
                    h.join(Interval::point(v))
                });
            let hull_big = bi
                .iter()
                .map(|m| m[path])
                .fold(Interval::point(bi[0][path]), |h, v| {
                    h.join(Interval::point(v))
                });
            assert!(hull_big.lo <= hull_small.lo + 1e-12);
            assert!(hull_big.hi >= hull_small.hi - 1e-12);
        }
    }
}
