//! Centralized numeric tolerances.
//!
//! Every threshold used by the library and its verification suites lives
//! here with a short justification, so no module invents its own magic
//! numbers.

/// Algebraic identities on interval/box carriers are closed-form endpoint
/// arithmetic.  A handful of f64 additions accumulates well under 1e-12
/// for operands of magnitude O(10).
pub const EXACT_ALGEBRA: f64 = 1e-12;

/// Default existence tolerance for the certified Hukuhara difference.
/// Endpoint arithmetic would give an exactly zero reconstruction residual;
/// support-sampled carriers need slack for the re-convexification sweep.
pub const HUKUHARA_EXISTENCE: f64 = 1e-9;

/// Hull tolerance for deterministic (dt-kind) set integrals, where finite
/// endpoint selections attain the exact interval hull and only Riemann-sum
/// rounding remains.
pub const HULL_DETERMINISTIC: f64 = 1e-8;

/// Feasibility slack for support-function tightening: a polytope is declared
/// empty once some direction pair certifies negative width beyond this.
pub const SUPPORT_FEASIBILITY: f64 = 1e-10;

/// Relative tolerance for finite-difference checks of declared transform
/// derivatives.  Central differences with h ~ 1e-5 carry O(h^2) truncation
/// plus O(eps/h) cancellation, both below 1e-6 relative for smooth maps.
pub const GRADIENT_CHECK_REL: f64 = 1e-6;

/// Number of sample standard deviations spanned by a Monte Carlo
/// confidence band.  Five sigma keeps the false-failure probability of a
/// single comparison below 1e-6.
pub const MC_BAND_SIGMAS: f64 = 5.0;

/// Confidence band for a Monte Carlo mean estimate from `m` samples with
/// per-sample standard deviation `sigma_hat`.
pub fn mc_band(sigma_hat: f64, m: usize) -> f64 {
    MC_BAND_SIGMAS * sigma_hat / (m as f64).sqrt()
}

/// Frozen slope of the Ito-formula pass threshold `A*sqrt(dt)*scale + B*eps_hull`.
/// Calibrated once on singleton-coefficient square transforms (where the
/// exact discrete defect distribution is N(0, 2*sigma^4*T*dt) per node) and
/// kept with a factor-of-three margin over the observed 5-sigma envelope.
pub const ITO_THRESHOLD_SLOPE: f64 = 12.0;

/// Frozen hull-term weight of the Ito-formula pass threshold.
pub const ITO_THRESHOLD_HULL: f64 = 10.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        assert!(EXACT_ALGEBRA < HULL_DETERMINISTIC);
        assert!(SUPPORT_FEASIBILITY < HUKUHARA_EXISTENCE);
    }

    #[test]
    fn band_scaling() {
        let b = mc_band(2.0, 10_000);
        assert!((b - 5.0 * 2.0 / 100.0).abs() < 1e-15);
    }
}
