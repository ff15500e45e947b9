//! Cross-module flows: the selection engine, both integral routes, the
//! process simulator, and the backward solver agreeing with each other on
//! shared inputs.

use svito_core::bsde::{
    picard_step, solve_svbsde, Driver, SolverConfig, SvbsdeProblem, TerminalCondition,
};
use svito_core::integrals::{closure_integral_path, SetPath};
use svito_core::ito::{simulate_set_ito, SetItoSpec};
use svito_core::regression::DiscreteFiltration;
use svito_core::selection::IntegralKind;
use svito_core::{BrownianBundle, Interval, IntervalProcess, Recipe, TimeGrid};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

#[test]
fn drift_only_process_equals_closure_integral() {
    // With zero diffusion, the simulated hull is the dt-integral of the
    // drift set, which the closure route computes exactly.
    let grid = TimeGrid::new(1.0, 128).unwrap();
    let bundle = BrownianBundle::generate(grid, 16, 1, 31);
    let drift = IntervalProcess::time_fn(|t| iv(-t, 0.5 + t));
    let spec = SetItoSpec {
        x0: 0.25,
        diffusion: IntervalProcess::singleton(0.0),
        drift: drift.clone(),
    };
    let fan = simulate_set_ito(&spec, &bundle, 8, Recipe::Support, 5).unwrap();
    let closure = closure_integral_path(&drift, &bundle, IntegralKind::Dt);
    for p in 0..16 {
        for k in 0..=128 {
            let expect = closure.at(p, k).shift(0.25);
            // Endpoint selections attain the dt hull exactly; mixtures
            // stay inside.
            assert!(
                fan.hull.at(p, k).hausdorff(expect) <= 1e-10,
                "node {k}: {:?} vs {expect:?}",
                fan.hull.at(p, k)
            );
        }
    }
}

#[test]
fn diffusion_hull_is_inner_approximation_of_closure_route() {
    let grid = TimeGrid::new(1.0, 64).unwrap();
    let bundle = BrownianBundle::generate(grid, 32, 1, 32);
    let diffusion = IntervalProcess::constant(iv(-0.5, 1.0));
    let spec = SetItoSpec {
        x0: 0.0,
        diffusion: diffusion.clone(),
        drift: IntervalProcess::singleton(0.0),
    };
    let fan = simulate_set_ito(&spec, &bundle, 16, Recipe::Support, 6).unwrap();
    let closure = closure_integral_path(&diffusion, &bundle, IntegralKind::Dw);
    for p in 0..32 {
        for k in 0..=64 {
            let outer = closure.at(p, k);
            let inner = fan.hull.at(p, k);
            assert!(inner.lo >= outer.lo - 1e-12 && inner.hi <= outer.hi + 1e-12);
        }
    }
}

#[test]
fn solver_limit_is_one_sweep_for_frozen_driver() {
    // A driver that ignores the iterates makes a single backward sweep the
    // fixed point: the solver's limit equals the sweep's output.
    let grid = TimeGrid::new(0.5, 64).unwrap();
    let bundle = BrownianBundle::generate(grid, 4_000, 1, 33);
    let filt = DiscreteFiltration::new(&bundle, 3, 1e-8);
    let problem = SvbsdeProblem {
        terminal: TerminalCondition::BrownianShift {
            alpha: -0.25,
            beta: 0.25,
        },
        driver: Driver::Constant(iv(0.0, 0.5)),
        horizon: 0.5,
    };
    let x0 = SetPath::zeros(grid, bundle.paths, grid.nodes());
    let z0 = SetPath::zeros(grid, bundle.paths, grid.steps);
    let sweep = picard_step(&x0, &z0, &problem, &bundle, &filt, 16);
    let solved = solve_svbsde(
        &problem,
        &bundle,
        &filt,
        &SolverConfig {
            residual_tol: 0.25,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    assert!(solved.converged);
    assert!(solved.y.max_hausdorff(&sweep.x) <= 1e-12);
    assert!(solved.z.max_hausdorff(&sweep.z) <= 1e-12);
}
