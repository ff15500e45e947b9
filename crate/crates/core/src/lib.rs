//! Numerical engine for set-valued stochastic calculus on compact convex
//! carriers.
//!
//! The crate is organized bottom-up:
//!
//! * [`convex`]: intervals, boxes, and support-sampled polytopes with the
//!   exact Minkowski/Hukuhara algebra and certified differences;
//! * [`stochastic`]: time grids, counter-seeded Brownian bundles, and
//!   classical Ito/Lebesgue integration;
//! * [`selection`]: finite adapted-selection families of interval-valued
//!   processes;
//! * [`integrals`]: set-valued `∫ F dt` / `∫ G dW` with the additivity,
//!   splitting, and isometry laws as the test surface;
//! * [`ito`]: set-valued Ito processes, the transformation identity, and
//!   the squared-process inclusion;
//! * [`regression`]: least-squares Monte Carlo conditional expectations;
//! * [`bsde`]: the Picard solver for set-valued backward equations with
//!   contraction and uniqueness diagnostics;
//! * [`laws`]: randomized law suites and brute-force oracles for the
//!   algebra;
//! * [`tolerances`]: every numeric threshold, in one place.
//!
//! Everything is deterministic for a fixed seed: randomness is
//! counter-based per (path, step, dimension), and reductions run in fixed
//! order, so reruns are bit-identical regardless of thread count.

pub mod bsde;
pub mod convex;
pub mod integrals;
pub mod ito;
pub mod laws;
pub mod regression;
pub mod selection;
pub mod stochastic;
pub mod tolerances;

pub use convex::{BoxSet, ConvexSet, DirectionGrid, HukuharaResult, Interval, SetError, SupportSet};
pub use selection::{IntegralKind, IntervalProcess, Recipe, SelectionFamily};
pub use stochastic::{BrownianBundle, ScalarPath, TimeGrid};
