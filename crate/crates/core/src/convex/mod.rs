//! Compact convex sets and their Minkowski/Hukuhara algebra.
//!
//! Three carriers are supported, all closed under Minkowski addition and
//! nonnegative scaling:
//!
//! * [`Interval`]: a compact interval `[lo, hi]` on the line,
//! * [`BoxSet`]: an axis-aligned box, one interval per coordinate,
//! * [`SupportSet`]: a planar polytope given by support values on a fixed,
//!   shared direction grid.
//!
//! Intervals and boxes make every identity of the algebra exactly testable;
//! the support-sampled carrier covers general convex bodies at grid
//! resolution.  All values are immutable and all operations are pure, so
//! sets can be shared freely across threads.
//!
//! The Hukuhara difference `A ⊖ B` (the unique `C` with `A = B + C`, when
//! one exists) is computed as the erosion `{x : x + B ⊆ A}` followed by a
//! reconstruction certificate: the result is accepted only if `B + E`
//! rebuilds `A` within a caller-supplied tolerance, and otherwise a
//! nonexistence witness is returned as a value, not an error.

use thiserror::Error;

mod literal;
mod support;

pub use support::{DirectionGrid, SupportSet};

/// Structural failures of set operations.  Nonexistence of a Hukuhara
/// difference is *not* an error; mixing representations, dimensions, or
/// direction grids is.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SetError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("representation mismatch: {0} vs {1}")]
    VariantMismatch(&'static str, &'static str),
    #[error("direction grids differ; sets on distinct grids do not interact")]
    GridMismatch,
    #[error("negative scale factor requires a symmetric direction grid")]
    AsymmetricGrid,
    #[error("invalid interval: lo {lo} > hi {hi}")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("support values define an empty set")]
    EmptySupport,
    #[error("direction grid needs at least {min} directions, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("cannot parse set literal {text:?}: {reason}")]
    Literal { text: String, reason: String },
}

/// A compact interval `[lo, hi]`, the one-dimensional carrier.
///
/// Singletons have `lo == hi`; `{0}` is an ordinary interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Checked constructor; rejects `lo > hi` and non-finite endpoints.
    pub fn new(lo: f64, hi: f64) -> Result<Self, SetError> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(SetError::InvalidInterval { lo, hi })
        }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    /// Smallest interval containing both arguments (order-free).
    pub fn hull_of(a: f64, b: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn radius(self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }

    /// Minkowski sum: endpointwise addition.
    pub fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }

    /// Translation by a scalar.
    pub fn shift(self, c: f64) -> Interval {
        Interval {
            lo: self.lo + c,
            hi: self.hi + c,
        }
    }

    /// `{alpha * a : a in self}`; endpoints swap for negative factors.
    pub fn scale(self, alpha: f64) -> Interval {
        if alpha >= 0.0 {
            Interval {
                lo: alpha * self.lo,
                hi: alpha * self.hi,
            }
        } else {
            Interval {
                lo: alpha * self.hi,
                hi: alpha * self.lo,
            }
        }
    }

    /// Convex hull of the union.
    pub fn join(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo.min(rhs.lo),
            hi: self.hi.max(rhs.hi),
        }
    }

    /// Hukuhara difference, existing iff `width(self) >= width(rhs)`.
    /// The erosion `[self.lo - rhs.lo, self.hi - rhs.hi]` is then the unique
    /// witness of `self = rhs + C`.
    pub fn hukuhara(self, rhs: Interval) -> Option<Interval> {
        let lo = self.lo - rhs.lo;
        let hi = self.hi - rhs.hi;
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Hausdorff distance: the larger endpoint gap.
    pub fn hausdorff(self, rhs: Interval) -> f64 {
        (self.lo - rhs.lo).abs().max((self.hi - rhs.hi).abs())
    }

    /// `sup { |a| : a in self }`, the distance to the origin set.
    pub fn norm(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Image of the interval under `x -> x^2`.  A sign change maps through
    /// the image (minimum 0), not through endpoint squaring.
    pub fn squared_image(self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo <= 0.0 && self.hi >= 0.0 {
            Interval {
                lo: 0.0,
                hi: a.max(b),
            }
        } else {
            Interval {
                lo: a.min(b),
                hi: a.max(b),
            }
        }
    }

    /// Checks whether `self` is a translate of `rhs` (equivalently: both
    /// Hukuhara differences exist) and returns the shift.
    pub fn translation_of(self, rhs: Interval, tol: f64) -> Option<f64> {
        if (self.width() - rhs.width()).abs() <= tol {
            Some(self.midpoint() - rhs.midpoint())
        } else {
            None
        }
    }
}

/// An axis-aligned box: one interval per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    pub axes: Vec<Interval>,
}

impl BoxSet {
    pub fn new(axes: Vec<Interval>) -> Self {
        Self { axes }
    }

    pub fn point(coords: &[f64]) -> Self {
        Self {
            axes: coords.iter().map(|&x| Interval::point(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    fn check_dim(&self, rhs: &BoxSet) -> Result<(), SetError> {
        if self.dim() == rhs.dim() {
            Ok(())
        } else {
            Err(SetError::DimensionMismatch(self.dim(), rhs.dim()))
        }
    }

    pub fn add(&self, rhs: &BoxSet) -> Result<BoxSet, SetError> {
        self.check_dim(rhs)?;
        Ok(BoxSet {
            axes: self
                .axes
                .iter()
                .zip(&rhs.axes)
                .map(|(a, b)| a.add(*b))
                .collect(),
        })
    }

    pub fn scale(&self, alpha: f64) -> BoxSet {
        BoxSet {
            axes: self.axes.iter().map(|a| a.scale(alpha)).collect(),
        }
    }

    pub fn hukuhara(&self, rhs: &BoxSet) -> Result<Option<BoxSet>, SetError> {
        self.check_dim(rhs)?;
        let mut axes = Vec::with_capacity(self.dim());
        for (a, b) in self.axes.iter().zip(&rhs.axes) {
            match a.hukuhara(*b) {
                Some(c) => axes.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(BoxSet { axes }))
    }

    /// Hausdorff distance under the Euclidean point metric.  Directed
    /// per-axis endpoint gaps combine as a Euclidean sum, which keeps
    /// `norm() == hausdorff(point 0)` and `|A ⊖ B| == hausdorff(A, B)`
    /// consistent in every dimension.
    pub fn hausdorff(&self, rhs: &BoxSet) -> Result<f64, SetError> {
        self.check_dim(rhs)?;
        let mut fwd = 0.0f64;
        let mut bwd = 0.0f64;
        for (a, b) in self.axes.iter().zip(&rhs.axes) {
            let f = (b.lo - a.lo).max(a.hi - b.hi).max(0.0);
            let g = (a.lo - b.lo).max(b.hi - a.hi).max(0.0);
            fwd += f * f;
            bwd += g * g;
        }
        Ok(fwd.sqrt().max(bwd.sqrt()))
    }

    /// Euclidean norm of the farthest corner from the origin.
    pub fn norm(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        point.len() == self.dim()
            && self
                .axes
                .iter()
                .zip(point)
                .all(|(a, &x)| a.contains(x, tol))
    }

    pub fn translation_of(&self, rhs: &BoxSet, tol: f64) -> Result<Option<Vec<f64>>, SetError> {
        self.check_dim(rhs)?;
        let mut shift = Vec::with_capacity(self.dim());
        for (a, b) in self.axes.iter().zip(&rhs.axes) {
            match a.translation_of(*b, tol) {
                Some(c) => shift.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(shift))
    }
}

/// A compact convex set in one of the three supported representations.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    Interval(Interval),
    Box(BoxSet),
    Support(SupportSet),
}

/// Why a Hukuhara difference failed to exist, with an extreme point of the
/// minuend at which no admissible translate of the subtrahend fits.
#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceWitness {
    /// Extreme point of `A` that cannot be covered by any `x + B ⊆ A`.
    pub extreme_point: Vec<f64>,
    pub detail: WitnessDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessDetail {
    /// `A` is narrower than `B` along `axis`; since Minkowski addition can
    /// only widen, `A = B + C` is impossible.
    WidthDeficit {
        axis: usize,
        minuend_width: f64,
        subtrahend_width: f64,
    },
    /// Reconstruction `B + E` falls short of `A` by `deficit` in the given
    /// grid direction after the erosion was re-convexified.
    SupportDeficit { direction: usize, deficit: f64 },
}

/// Outcome of a certified Hukuhara difference.
#[derive(Debug, Clone, PartialEq)]
pub enum HukuharaResult {
    Exists {
        difference: ConvexSet,
        /// Hausdorff residual of the reconstruction `B + C` against `A`.
        residual: f64,
    },
    Nonexistent(NonexistenceWitness),
}

impl HukuharaResult {
    pub fn exists(&self) -> bool {
        matches!(self, HukuharaResult::Exists { .. })
    }

    pub fn difference(&self) -> Option<&ConvexSet> {
        match self {
            HukuharaResult::Exists { difference, .. } => Some(difference),
            HukuharaResult::Nonexistent(_) => None,
        }
    }
}

impl ConvexSet {
    pub fn interval(lo: f64, hi: f64) -> Result<Self, SetError> {
        Interval::new(lo, hi).map(ConvexSet::Interval)
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            ConvexSet::Interval(_) => "interval",
            ConvexSet::Box(_) => "box",
            ConvexSet::Support(_) => "support-sampled",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Interval(_) => 1,
            ConvexSet::Box(b) => b.dim(),
            ConvexSet::Support(_) => 2,
        }
    }

    /// Minkowski sum.  Both operands must share representation, dimension,
    /// and (for support-sampled sets) the direction grid.
    pub fn minkowski_sum(&self, rhs: &ConvexSet) -> Result<ConvexSet, SetError> {
        match (self, rhs) {
            (ConvexSet::Interval(a), ConvexSet::Interval(b)) => Ok(ConvexSet::Interval(a.add(*b))),
            (ConvexSet::Box(a), ConvexSet::Box(b)) => a.add(b).map(ConvexSet::Box),
            (ConvexSet::Support(a), ConvexSet::Support(b)) => a.add(b).map(ConvexSet::Support),
            _ => Err(SetError::VariantMismatch(
                self.variant_name(),
                rhs.variant_name(),
            )),
        }
    }

    /// `{alpha * a : a in A}`.  Negative factors on support-sampled sets
    /// need a symmetric direction grid.
    pub fn scalar_mul(&self, alpha: f64) -> Result<ConvexSet, SetError> {
        match self {
            ConvexSet::Interval(a) => Ok(ConvexSet::Interval(a.scale(alpha))),
            ConvexSet::Box(a) => Ok(ConvexSet::Box(a.scale(alpha))),
            ConvexSet::Support(a) => a.scale(alpha).map(ConvexSet::Support),
        }
    }

    /// Certified Hukuhara difference: erosion plus reconstruction check at
    /// tolerance `tol`.  Nonexistence is a value carrying a witness.
    pub fn hukuhara_diff(&self, rhs: &ConvexSet, tol: f64) -> Result<HukuharaResult, SetError> {
        match (self, rhs) {
            (ConvexSet::Interval(a), ConvexSet::Interval(b)) => {
                Ok(interval_hukuhara_certified(*a, *b, tol))
            }
            (ConvexSet::Box(a), ConvexSet::Box(b)) => {
                a.check_dim(b)?;
                Ok(box_hukuhara_certified(a, b, tol))
            }
            (ConvexSet::Support(a), ConvexSet::Support(b)) => a.hukuhara_certified(b, tol),
            _ => Err(SetError::VariantMismatch(
                self.variant_name(),
                rhs.variant_name(),
            )),
        }
    }

    /// Hausdorff distance.  Exact for intervals and boxes; grid-relative
    /// (a lower bound over the shared direction grid) for support-sampled
    /// sets.
    pub fn hausdorff_distance(&self, rhs: &ConvexSet) -> Result<f64, SetError> {
        match (self, rhs) {
            (ConvexSet::Interval(a), ConvexSet::Interval(b)) => Ok(a.hausdorff(*b)),
            (ConvexSet::Box(a), ConvexSet::Box(b)) => a.hausdorff(b),
            (ConvexSet::Support(a), ConvexSet::Support(b)) => a.hausdorff(b),
            _ => Err(SetError::VariantMismatch(
                self.variant_name(),
                rhs.variant_name(),
            )),
        }
    }

    /// `sup { |a| : a in A }`, the Hausdorff distance to `{0}`.
    pub fn set_norm(&self) -> f64 {
        match self {
            ConvexSet::Interval(a) => a.norm(),
            ConvexSet::Box(a) => a.norm(),
            ConvexSet::Support(a) => a.norm(),
        }
    }

    /// Returns the translation vector `c` with `A = B + {c}` if `A` is a
    /// translate of `B` (equivalently, both `A ⊖ B` and `B ⊖ A` exist).
    pub fn is_translation(&self, rhs: &ConvexSet, tol: f64) -> Result<Option<Vec<f64>>, SetError> {
        let fwd = self.hukuhara_diff(rhs, tol)?;
        let bwd = rhs.hukuhara_diff(self, tol)?;
        match (fwd, bwd) {
            (HukuharaResult::Exists { difference, .. }, HukuharaResult::Exists { .. }) => {
                Ok(Some(match difference {
                    ConvexSet::Interval(c) => vec![c.midpoint()],
                    ConvexSet::Box(c) => c.axes.iter().map(|a| a.midpoint()).collect(),
                    ConvexSet::Support(c) => c.centroid_of_vertices(),
                }))
            }
            _ => Ok(None),
        }
    }
}

fn interval_hukuhara_certified(a: Interval, b: Interval, tol: f64) -> HukuharaResult {
    let deficit = b.width() - a.width();
    if deficit > tol {
        return HukuharaResult::Nonexistent(NonexistenceWitness {
            extreme_point: vec![a.lo],
            detail: WitnessDetail::WidthDeficit {
                axis: 0,
                minuend_width: a.width(),
                subtrahend_width: b.width(),
            },
        });
    }
    // Degenerate deficits within tolerance collapse the erosion to a point.
    let difference = if deficit > 0.0 {
        Interval::point(0.5 * ((a.lo - b.lo) + (a.hi - b.hi)))
    } else {
        Interval {
            lo: a.lo - b.lo,
            hi: a.hi - b.hi,
        }
    };
    let residual = b.add(difference).hausdorff(a);
    HukuharaResult::Exists {
        difference: ConvexSet::Interval(difference),
        residual,
    }
}

fn box_hukuhara_certified(a: &BoxSet, b: &BoxSet, tol: f64) -> HukuharaResult {
    for (axis, (ai, bi)) in a.axes.iter().zip(&b.axes).enumerate() {
        if bi.width() - ai.width() > tol {
            // The corner of A sitting on the deficient face is a witness.
            let corner = a.axes.iter().map(|ax| ax.lo).collect();
            return HukuharaResult::Nonexistent(NonexistenceWitness {
                extreme_point: corner,
                detail: WitnessDetail::WidthDeficit {
                    axis,
                    minuend_width: ai.width(),
                    subtrahend_width: bi.width(),
                },
            });
        }
    }
    let mut axes = Vec::with_capacity(a.dim());
    let mut residual = 0.0f64;
    for (ai, bi) in a.axes.iter().zip(&b.axes) {
        match interval_hukuhara_certified(*ai, *bi, tol) {
            HukuharaResult::Exists {
                difference: ConvexSet::Interval(c),
                residual: r,
            } => {
                axes.push(c);
                residual = residual.max(r);
            }
            _ => unreachable!("width audit above guarantees existence per axis"),
        }
    }
    HukuharaResult::Exists {
        difference: ConvexSet::Box(BoxSet { axes }),
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{EXACT_ALGEBRA, HUKUHARA_EXISTENCE};
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn minkowski_endpoints() {
        assert_eq!(iv(0.0, 1.0).add(iv(2.0, 3.0)), iv(2.0, 4.0));
        // {0} is the additive identity.
        let a = iv(-1.5, 2.25);
        assert_eq!(a.add(Interval::zero()), a);
    }

    #[test]
    fn box_sum_against_dense_sample_hull() {
        // Brute-force oracle: hull of pairwise sums over dense samples.
        let a = BoxSet::new(vec![iv(0.0, 1.0), iv(-1.0, 0.0)]);
        let b = BoxSet::new(vec![iv(1.0, 2.0), iv(0.0, 2.0)]);
        let sum = a.add(&b).unwrap();

        let steps = 40;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    for l in 0..=steps {
                        let p = [
                            a.axes[0].lo + a.axes[0].width() * i as f64 / steps as f64
                                + b.axes[0].lo
                                + b.axes[0].width() * k as f64 / steps as f64,
                            a.axes[1].lo + a.axes[1].width() * j as f64 / steps as f64
                                + b.axes[1].lo
                                + b.axes[1].width() * l as f64 / steps as f64,
                        ];
                        for d in 0..2 {
                            lo[d] = lo[d].min(p[d]);
                            hi[d] = hi[d].max(p[d]);
                        }
                    }
                }
            }
        }
        for d in 0..2 {
            assert!((sum.axes[d].lo - lo[d]).abs() < 1e-12);
            assert!((sum.axes[d].hi - hi[d]).abs() < 1e-12);
        }
        assert_eq!(sum, BoxSet::new(vec![iv(1.0, 3.0), iv(-1.0, 2.0)]));
    }

    #[test]
    fn scalar_mul_examples() {
        assert_eq!(iv(-1.0, 3.0).scale(2.0), iv(-2.0, 6.0));
        assert_eq!(iv(0.0, 1.0).scale(-1.0), iv(-1.0, 0.0));
        assert_eq!(iv(-7.0, 4.0).scale(0.0), Interval::zero());
    }

    #[test]
    fn hukuhara_interval_examples() {
        // [0,3] ⊖ [1,2] = [-1,1], certified by reconstruction.
        let r = interval_hukuhara_certified(iv(0.0, 3.0), iv(1.0, 2.0), HUKUHARA_EXISTENCE);
        match &r {
            HukuharaResult::Exists {
                difference: ConvexSet::Interval(c),
                residual,
            } => {
                assert_eq!(*c, iv(-1.0, 1.0));
                assert!(*residual <= HUKUHARA_EXISTENCE);
                assert_eq!(iv(1.0, 2.0).add(*c), iv(0.0, 3.0));
            }
            _ => panic!("difference must exist"),
        }

        // A ⊖ A = {0}.
        let a = iv(-2.5, 4.0);
        assert_eq!(a.hukuhara(a), Some(Interval::zero()));

        // Width deficit: [0,1] ⊖ [0,2] has no witness set.
        let r = interval_hukuhara_certified(iv(0.0, 1.0), iv(0.0, 2.0), HUKUHARA_EXISTENCE);
        match r {
            HukuharaResult::Nonexistent(w) => {
                assert_eq!(w.extreme_point, vec![0.0]);
                assert!(matches!(w.detail, WitnessDetail::WidthDeficit { .. }));
            }
            _ => panic!("must not exist"),
        }
    }

    #[test]
    fn hausdorff_and_norm_basics() {
        assert_eq!(iv(0.0, 1.0).hausdorff(iv(0.0, 2.0)), 1.0);
        assert_eq!(iv(3.0, 4.0).hausdorff(iv(3.0, 4.0)), 0.0);
        assert_eq!(iv(-2.0, 1.0).norm(), 2.0);
        assert_eq!(Interval::zero().norm(), 0.0);
        // Triangle-inequality boundary case: ‖[1,2]+[3,4]‖ = 6 = ‖[1,2]‖+‖[3,4]‖.
        let s = iv(1.0, 2.0).add(iv(3.0, 4.0));
        assert_eq!(s, iv(4.0, 6.0));
        assert_eq!(s.norm(), iv(1.0, 2.0).norm() + iv(3.0, 4.0).norm());
    }

    #[test]
    fn translation_examples() {
        let t = ConvexSet::Interval(iv(1.0, 2.0))
            .is_translation(&ConvexSet::Interval(iv(0.0, 1.0)), 1e-12)
            .unwrap();
        assert_eq!(t, Some(vec![1.0]));

        // A ⊖ B exists but B ⊖ A does not: not a translation.
        let t = ConvexSet::Interval(iv(0.0, 2.0))
            .is_translation(&ConvexSet::Interval(iv(0.0, 1.0)), 1e-12)
            .unwrap();
        assert_eq!(t, None);

        let a = ConvexSet::Interval(iv(-3.0, 5.0));
        assert_eq!(a.is_translation(&a, 1e-12).unwrap(), Some(vec![0.0]));
    }

    #[test]
    fn squared_image_handles_sign_change() {
        assert_eq!(iv(-1.0, 2.0).squared_image(), iv(0.0, 4.0));
        assert_eq!(iv(1.0, 2.0).squared_image(), iv(1.0, 4.0));
        assert_eq!(iv(-3.0, -1.0).squared_image(), iv(1.0, 9.0));
    }

    #[test]
    fn variant_mismatch_is_structural_error() {
        let a = ConvexSet::Interval(iv(0.0, 1.0));
        let b = ConvexSet::Box(BoxSet::new(vec![iv(0.0, 1.0)]));
        assert!(matches!(
            a.minkowski_sum(&b),
            Err(SetError::VariantMismatch(_, _))
        ));
        let c = ConvexSet::Box(BoxSet::new(vec![iv(0.0, 1.0), iv(0.0, 1.0)]));
        assert!(matches!(
            b.minkowski_sum(&c),
            Err(SetError::DimensionMismatch(1, 2))
        ));
    }

    prop_compose! {
        fn arb_interval()(mid in -10.0f64..10.0, rad in 0.0f64..5.0) -> Interval {
            Interval { lo: mid - rad, hi: mid + rad }
        }
    }

    proptest! {
        #[test]
        fn sum_commutative_associative(a in arb_interval(), b in arb_interval(), c in arb_interval()) {
            prop_assert!(a.add(b).hausdorff(b.add(a)) <= EXACT_ALGEBRA);
            prop_assert!(a.add(b).add(c).hausdorff(a.add(b.add(c))) <= EXACT_ALGEBRA);
        }

        // Cancellation: h(A+C, B+C) = h(A, B) exactly on intervals.
        #[test]
        fn cancellation_law(a in arb_interval(), b in arb_interval(), c in arb_interval()) {
            let lhs = a.add(c).hausdorff(b.add(c));
            prop_assert!((lhs - a.hausdorff(b)).abs() <= EXACT_ALGEBRA);
        }

        // Identities that hold whenever the differences are built to exist:
        // with A = B + C, the difference recovers C and rebuilds A.
        #[test]
        fn hukuhara_roundtrip(b in arb_interval(), c in arb_interval()) {
            let a = b.add(c);
            let d = a.hukuhara(b).expect("constructed to exist");
            prop_assert!(d.hausdorff(c) <= EXACT_ALGEBRA);
            prop_assert!(b.add(d).hausdorff(a) <= EXACT_ALGEBRA);
        }

        #[test]
        fn norm_axioms(a in arb_interval(), b in arb_interval(), alpha in -4.0f64..4.0) {
            prop_assert!((a.scale(alpha).norm() - alpha.abs() * a.norm()).abs() <= EXACT_ALGEBRA);
            prop_assert!(a.add(b).norm() <= a.norm() + b.norm() + EXACT_ALGEBRA);
            prop_assert!((a.norm() == 0.0) == (a == Interval::zero()));
        }

        // ‖A ⊖ B‖ = h(A, B) whenever the difference exists.
        #[test]
        fn norm_of_difference_is_distance(b in arb_interval(), c in arb_interval()) {
            let a = b.add(c);
            let d = a.hukuhara(b).unwrap();
            prop_assert!((d.norm() - a.hausdorff(b)).abs() <= EXACT_ALGEBRA);
        }

        #[test]
        fn hausdorff_metric_axioms(a in arb_interval(), b in arb_interval(), c in arb_interval()) {
            prop_assert!((a.hausdorff(b) - b.hausdorff(a)).abs() <= EXACT_ALGEBRA);
            prop_assert!(a.hausdorff(c) <= a.hausdorff(b) + b.hausdorff(c) + EXACT_ALGEBRA);
            prop_assert!((a.hausdorff(b) == 0.0) == (a == b));
        }
    }
}
