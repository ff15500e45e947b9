//! Implementations of the experiment subcommands.

use std::path::Path;

use svito_core::bsde::{solve_svbsde, SolverConfig};
use svito_core::integrals::{setvalued_isometry_check, splitting_defect};
use svito_core::ito::{verify_ito_formula, SetItoSpec, Transform};
use svito_core::laws;
use svito_core::regression::DiscreteFiltration;
use svito_core::selection::SelectionFamily;
use svito_core::tolerances;
use svito_core::{BrownianBundle, Interval, IntegralKind, IntervalProcess, Recipe, TimeGrid};

use crate::config::BsdeConfig;
use crate::output::{run_dir, write_artifact, Csv};

/// Exit-status classes of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    CheckFailed,
    /// Ran to completion but refuses a verdict (e.g. a non-convergent
    /// probe).
    Inconclusive,
}

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CommandError {
    fn from(e: std::io::Error) -> Self {
        CommandError::Io(e)
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(m) => write!(f, "usage error: {m}"),
            CommandError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

pub fn parse_recipe(name: &str) -> Result<Recipe, CommandError> {
    Recipe::parse(name).ok_or_else(|| {
        CommandError::Usage(format!(
            "recipe {name:?} unknown; expected extreme, support, or mix"
        ))
    })
}

fn parse_interval(text: &str) -> Result<Interval, CommandError> {
    text.parse::<Interval>()
        .map_err(|e| CommandError::Usage(e.to_string()))
}

fn grid(horizon: f64, steps: usize) -> Result<TimeGrid, CommandError> {
    TimeGrid::new(horizon, steps).map_err(|e| CommandError::Usage(e.to_string()))
}

/// Randomized algebra law suite plus erosion-oracle agreement.
pub fn algebra_check(
    out_root: &Path,
    trials: usize,
    max_dim: usize,
    seed: u64,
) -> Result<Outcome, CommandError> {
    if trials == 0 {
        return Err(CommandError::Usage("trials must be positive".into()));
    }
    if !(1..=8).contains(&max_dim) {
        return Err(CommandError::Usage("max-dim must be in 1..=8".into()));
    }
    let canonical = format!("algebra-check trials={trials} max_dim={max_dim} seed={seed}");
    let dir = run_dir(out_root, "algebra-check", &canonical)?;

    let mut csv = Csv::new("check,trials,max_error,tolerance,pass");
    let mut all_pass = true;
    for law in laws::interval_law_suite(trials, seed) {
        all_pass &= law.pass;
        csv.row(&[
            &law.name,
            &law.trials,
            &law.max_error,
            &law.tolerance,
            &law.pass,
        ]);
    }
    for law in laws::box_law_suite(trials / 10 + 1, max_dim, seed ^ 0x10) {
        all_pass &= law.pass;
        csv.row(&[
            &law.name,
            &law.trials,
            &law.max_error,
            &law.tolerance,
            &law.pass,
        ]);
    }
    let iv_agree = laws::erosion_agreement_intervals(trials / 10 + 1, seed ^ 0x20);
    all_pass &= iv_agree.disagreements == 0;
    csv.row(&[
        &"erosion_agreement_intervals",
        &iv_agree.trials,
        &(iv_agree.disagreements as f64),
        &0.0,
        &(iv_agree.disagreements == 0),
    ]);
    let bx_agree = laws::erosion_agreement_boxes(trials / 20 + 1, seed ^ 0x30);
    all_pass &= bx_agree.disagreements == 0;
    csv.row(&[
        &"erosion_agreement_boxes",
        &bx_agree.trials,
        &(bx_agree.disagreements as f64),
        &0.0,
        &(bx_agree.disagreements == 0),
    ]);
    let witness = laws::witness_audit_intervals(trials / 10 + 1, seed ^ 0x40);
    all_pass &= witness.pass;
    csv.row(&[
        &witness.name,
        &witness.trials,
        &witness.max_error,
        &witness.tolerance,
        &witness.pass,
    ]);

    write_artifact(&dir, "algebra.csv", &csv.finish())?;
    let summary = format!(
        "config: {canonical}\nall checks pass: {all_pass}\nrows: algebra.csv\n"
    );
    write_artifact(&dir, "summary.txt", &summary)?;
    print!("{summary}");
    Ok(if all_pass {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}

/// Two-sided set-valued isometry check for one interval.
#[allow(clippy::too_many_arguments)]
pub fn isometry(
    out_root: &Path,
    set: &str,
    paths: usize,
    steps: usize,
    selections: usize,
    horizon: f64,
    recipe: &str,
    seed: u64,
    dump_increments: usize,
    audit_family: usize,
) -> Result<Outcome, CommandError> {
    let iv = parse_interval(set)?;
    let recipe = parse_recipe(recipe)?;
    let grid = grid(horizon, steps)?;
    let canonical = format!(
        "isometry set={iv} paths={paths} steps={steps} selections={selections} \
         horizon={horizon} recipe={recipe:?} seed={seed} \
         dump_increments={dump_increments} audit_family={audit_family}"
    );
    let dir = run_dir(out_root, "isometry", &canonical)?;

    let bundle = BrownianBundle::generate(grid, paths, 1, seed);
    let process = IntervalProcess::constant(iv);

    if dump_increments > 0 {
        let mut csv = Csv::new("path,step,dim,dW");
        for p in 0..dump_increments.min(paths) {
            for k in 0..steps {
                csv.row(&[&p, &k, &0, &bundle.dw(p, k, 0)]);
            }
        }
        write_artifact(&dir, "increments.csv", &csv.finish())?;
    }
    if audit_family > 0 {
        let family = SelectionFamily::build(&process, &grid, selections, recipe, seed)
            .map_err(|e| CommandError::Usage(e.to_string()))?;
        let w = bundle
            .brownian_nodes(0)
            .expect("component 0 always present");
        let mut csv = Csv::new("selection,step,path,value,member");
        for i in 0..family.len() {
            for k in 0..=steps {
                for p in 0..audit_family.min(paths) {
                    let t = grid.node(k);
                    let value = family.value(i, k, t, w.at(p, k));
                    let member = process.value(t, w.at(p, k)).contains(value, 1e-12);
                    csv.row(&[&i, &k, &p, &value, &member]);
                }
            }
        }
        write_artifact(&dir, "family_audit.csv", &csv.finish())?;
    }
    let report = setvalued_isometry_check(&process, &bundle, selections, recipe, seed)
        .map_err(|e| CommandError::Usage(e.to_string()))?;
    let split_dt = splitting_defect(&process, &bundle, IntegralKind::Dt);
    let split_dw = splitting_defect(&process, &bundle, IntegralKind::Dw);

    let band = report.comparison_band.max(0.02);
    let sides_ok = report.hausdorff <= band;
    let mean_ok = report.mean_hull.norm() <= report.mean_band;
    let split_ok = split_dt <= tolerances::EXACT_ALGEBRA && split_dw <= tolerances::EXACT_ALGEBRA;

    let mut csv = Csv::new("check,node,path,lhs_lo,lhs_hi,rhs_lo,rhs_hi,hausdorff");
    csv.row(&[
        &"isometry",
        &-1,
        &-1,
        &report.lhs.lo,
        &report.lhs.hi,
        &report.rhs.lo,
        &report.rhs.hi,
        &report.hausdorff,
    ]);
    csv.row(&[
        &"zero_mean",
        &-1,
        &-1,
        &report.mean_hull.lo,
        &report.mean_hull.hi,
        &0.0,
        &0.0,
        &report.mean_hull.norm(),
    ]);
    csv.row(&[&"splitting_dt", &-1, &-1, &0.0, &0.0, &0.0, &0.0, &split_dt]);
    csv.row(&[&"splitting_dw", &-1, &-1, &0.0, &0.0, &0.0, &0.0, &split_dw]);
    write_artifact(&dir, "report.csv", &csv.finish())?;

    let all = sides_ok && mean_ok && split_ok;
    let summary = format!(
        "config: {canonical}\n\
         isometry sides: lhs=[{},{}] rhs=[{},{}] hausdorff={} band={band} pass={sides_ok}\n\
         zero mean: hull=[{},{}] band={} pass={mean_ok}\n\
         splitting: dt={split_dt} dw={split_dw} pass={split_ok}\n\
         all checks pass: {all}\nrows: report.csv\n",
        report.lhs.lo,
        report.lhs.hi,
        report.rhs.lo,
        report.rhs.hi,
        report.hausdorff,
        report.mean_hull.lo,
        report.mean_hull.hi,
        report.mean_band,
    );
    write_artifact(&dir, "summary.txt", &summary)?;
    print!("{summary}");
    Ok(if all { Outcome::Pass } else { Outcome::CheckFailed })
}

pub fn parse_transform(name: &str) -> Result<Transform, CommandError> {
    match name {
        "identity" => Ok(Transform::identity()),
        "square" => Ok(Transform::square()),
        "time-scaled" => Ok(Transform::time_scaled()),
        other => Err(CommandError::Usage(format!(
            "phi {other:?} unknown; expected identity, square, or time-scaled"
        ))),
    }
}

/// Transformation-identity verification for one coefficient pair.
#[allow(clippy::too_many_arguments)]
pub fn ito_verify(
    out_root: &Path,
    phi: &str,
    x0: f64,
    diffusion: &str,
    drift: &str,
    paths: usize,
    steps: usize,
    selections: usize,
    horizon: f64,
    recipe: &str,
    seed: u64,
) -> Result<Outcome, CommandError> {
    let transform = parse_transform(phi)?;
    let f = parse_interval(diffusion)?;
    let g = parse_interval(drift)?;
    let recipe = parse_recipe(recipe)?;
    let grid = grid(horizon, steps)?;
    let canonical = format!(
        "ito-verify phi={phi} x0={x0} f={f} g={g} paths={paths} steps={steps} \
         selections={selections} horizon={horizon} recipe={recipe:?} seed={seed}"
    );
    let dir = run_dir(out_root, "ito-verify", &canonical)?;

    let spec = SetItoSpec {
        x0,
        diffusion: IntervalProcess::constant(f),
        drift: IntervalProcess::constant(g),
    };
    let reach = x0.abs() + f.norm() * 3.0 * horizon.sqrt() + g.norm() * horizon + 1.0;
    let gradient_defect = transform.gradient_defect((0.0, horizon), (-reach, reach));
    let gradient_ok = gradient_defect <= tolerances::GRADIENT_CHECK_REL;

    let bundle = BrownianBundle::generate(grid, paths, 1, seed);
    let report = verify_ito_formula(&transform, &spec, &bundle, selections, recipe, seed)
        .map_err(|e| CommandError::Usage(e.to_string()))?;

    let mut csv = Csv::new("node,max_hausdorff,threshold,pass");
    for k in 0..report.per_node_max.len() {
        csv.row(&[
            &k,
            &report.per_node_max[k],
            &report.threshold,
            &(report.per_node_mean[k] <= report.threshold),
        ]);
    }
    write_artifact(&dir, "report.csv", &csv.finish())?;

    let all = report.pass && gradient_ok;
    let summary = format!(
        "config: {canonical}\n\
         gradient audit: defect={gradient_defect} pass={gradient_ok}\n\
         transform check: max_mean={} max={} threshold={} calibrated={} pass={}\n\
         all checks pass: {all}\nrows: report.csv (pass gates the scenario-mean gap)\n",
        report.max_mean_distance,
        report.max_distance,
        report.threshold,
        transform.calibrated,
        report.pass,
    );
    write_artifact(&dir, "summary.txt", &summary)?;
    print!("{summary}");
    Ok(if all { Outcome::Pass } else { Outcome::CheckFailed })
}

/// Solves a configured backward problem and writes the Picard report,
/// solution dump, and verdict summary.
pub fn bsde_solve(out_root: &Path, config_text: &str) -> Result<Outcome, CommandError> {
    let config: BsdeConfig = serde_json::from_str(config_text)
        .map_err(|e| CommandError::Usage(format!("config: {e}")))?;
    config.validate().map_err(CommandError::Usage)?;
    let canonical = config.canonical();
    let dir = run_dir(out_root, "bsde-solve", &canonical)?;

    let grid = grid(config.horizon, config.steps)?;
    let bundle = BrownianBundle::generate(grid, config.paths, 1, config.seed);
    let filt = DiscreteFiltration::new(&bundle, config.basis_degree, config.ridge);
    let problem = config.to_problem();
    let solver = SolverConfig {
        max_iter: config.max_iter,
        tol: config.tol,
        residual_tol: config.residual_tol,
        selections: config.selections,
        ..SolverConfig::default()
    };

    let report = match solve_svbsde(&problem, &bundle, &filt, &solver) {
        Ok(r) => r,
        Err(e) => {
            let summary = format!("config: {canonical}\nsolver diagnostic failure: {e}\n");
            write_artifact(&dir, "summary.txt", &summary)?;
            print!("{summary}");
            return Ok(Outcome::CheckFailed);
        }
    };

    let mut picard = Csv::new("iter,u_p,v_p,ratio_u,ratio_v,envelope");
    for p in 1..=report.iterations {
        let i = p - 1;
        picard.row(&[
            &p,
            &report.u[i],
            &report.v[i],
            &(if i > 0 { report.ratios_u[i - 1] } else { f64::NAN }),
            &(if i > 0 { report.ratios_v[i - 1] } else { f64::NAN }),
            &report.envelope_u[i],
        ]);
    }
    write_artifact(&dir, "picard_report.csv", &picard.finish())?;

    let dump = config.dump_paths.min(config.paths);
    let mut solution = Csv::new("node,path,y_lo,y_hi,z_lo,z_hi");
    for k in 0..=config.steps {
        for p in 0..dump {
            let y = report.y.at(p, k);
            let z = if k < config.steps {
                report.z.at(p, k)
            } else {
                report.z.at(p, config.steps - 1)
            };
            solution.row(&[&k, &p, &y.lo, &y.hi, &z.lo, &z.hi]);
        }
    }
    write_artifact(&dir, "solution.csv", &solution.finish())?;

    let envelope_ok = (2..=report.iterations).all(|p| {
        let bound = report.envelope_u[p - 1];
        !bound.is_finite() || report.u[p - 1] <= 4.0 * bound
    });
    let mut checks = Csv::new("check,value,threshold,pass");
    checks.row(&[
        &"converged",
        &(report.iterations as f64),
        &(config.max_iter as f64),
        &report.converged,
    ]);
    checks.row(&[
        &"fixed_point_residual",
        &report.residual,
        &config.residual_tol,
        &report.residual_ok,
    ]);
    checks.row(&[&"envelope_within_4x", &f64::NAN, &4.0, &envelope_ok]);
    checks.row(&[
        &"existence_violations",
        &(report.existence_violations as f64),
        &0.0,
        &(report.existence_violations == 0),
    ]);
    checks.row(&[
        &"martingale_defect",
        &report.martingale_defect,
        &f64::NAN,
        &true,
    ]);
    checks.row(&[
        &"z_martingale_defect",
        &report.z_martingale_defect,
        &f64::NAN,
        &true,
    ]);
    write_artifact(&dir, "checks.csv", &checks.finish())?;
    let verdict = if !report.converged {
        "non-convergent"
    } else if report.residual_ok && envelope_ok {
        "converged"
    } else {
        "converged-with-failed-checks"
    };
    let summary = format!(
        "config: {canonical}\n\
         verdict: {verdict}\n\
         iterations: {} (rows: picard_report.csv)\n\
         residual: {} (tolerance {}) ok={}\n\
         envelope within 4x: {envelope_ok}\n\
         existence violations: {} (worst deficit {})\n\
         martingale defect: {}  z-martingale defect: {}\n\
         lipschitz c: {}  c_bar: {}\n\
         verdict rows: checks.csv\n\
         solution dump: {dump} paths (rows: solution.csv)\n",
        report.iterations,
        report.residual,
        config.residual_tol,
        report.residual_ok,
        report.existence_violations,
        report.worst_existence_deficit,
        report.martingale_defect,
        report.z_martingale_defect,
        report.lipschitz,
        report.c_bar,
    );
    write_artifact(&dir, "summary.txt", &summary)?;
    print!("{summary}");

    Ok(if !report.converged {
        Outcome::Inconclusive
    } else if report.residual_ok && envelope_ok {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}
