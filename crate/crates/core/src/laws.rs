//! Randomized verification suites for the convex-set algebra.
//!
//! Each suite draws counter-seeded random sets, constructs whatever
//! Hukuhara differences a law needs so that they exist (`A := B + C`
//! patterns), and records the worst deviation over all trials.  The
//! erosion suite pits the certified difference against a brute-force
//! oracle that knows nothing about endpoint formulas: it scans a dense
//! grid of candidate translates and applies the extreme-point covering
//! characterization directly.

use rayon::prelude::*;

use crate::convex::{BoxSet, ConvexSet, HukuharaResult, Interval};
use crate::stochastic::unit_uniform;
use crate::tolerances::{EXACT_ALGEBRA, HUKUHARA_EXISTENCE};

/// One law's outcome over a batch of randomized trials.
#[derive(Debug, Clone)]
pub struct LawResult {
    pub name: &'static str,
    pub trials: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn result(name: &'static str, trials: usize, max_error: f64, tolerance: f64) -> LawResult {
    LawResult {
        name,
        trials,
        max_error,
        tolerance,
        pass: max_error <= tolerance,
    }
}

fn uniform(seed: u64, trial: usize, salt: u64) -> f64 {
    unit_uniform(
        seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt.wrapping_mul(0x1656_67b1),
    )
}

fn rand_interval(seed: u64, trial: usize, salt: u64) -> Interval {
    let mid = 10.0 * uniform(seed, trial, salt) - 5.0;
    let rad = 3.0 * uniform(seed, trial, salt ^ 0xff);
    Interval {
        lo: mid - rad,
        hi: mid + rad,
    }
}

fn rand_box(seed: u64, trial: usize, salt: u64, dim: usize) -> BoxSet {
    BoxSet::new(
        (0..dim)
            .map(|d| rand_interval(seed, trial, salt.wrapping_add(101 * d as u64)))
            .collect(),
    )
}

/// Worst per-trial defect of the difference/sum identity suite on interval
/// carriers.  Every identity is built so the differences it needs exist.
pub fn interval_law_suite(trials: usize, seed: u64) -> Vec<LawResult> {
    #[derive(Default, Clone)]
    struct Worst {
        vals: [f64; 10],
    }
    impl Worst {
        fn merge(mut self, other: Worst) -> Worst {
            for i in 0..self.vals.len() {
                self.vals[i] = self.vals[i].max(other.vals[i]);
            }
            self
        }
    }

    let worst = (0..trials)
        .into_par_iter()
        .fold(Worst::default, |mut acc, i| {
            let a = rand_interval(seed, i, 1);
            let b = rand_interval(seed, i, 2);
            let c = rand_interval(seed, i, 3);
            let d1 = rand_interval(seed, i, 4);
            let d2 = rand_interval(seed, i, 5);
            let alpha = 8.0 * uniform(seed, i, 6) - 4.0;

            // Self-difference and zero identities.
            let e0 = a
                .hukuhara(a)
                .map(|z| z.hausdorff(Interval::zero()))
                .unwrap_or(f64::INFINITY)
                .max(
                    a.hukuhara(Interval::zero())
                        .map(|z| z.hausdorff(a))
                        .unwrap_or(f64::INFINITY),
                );

            // Difference of sums splits into sum of differences:
            // A1 = A2 + D1, B1 = B2 + D2.
            let (a2, b2) = (a, b);
            let (a1, b1) = (a2.add(d1), b2.add(d2));
            let e1 = a1
                .add(b1)
                .hukuhara(a2.add(b2))
                .map(|lhs| lhs.hausdorff(d1.add(d2)))
                .unwrap_or(f64::INFINITY);

            // Mixed associativity of sum and difference:
            // with B1 = B2 + D2 and A1 ⊖ B2 = E existing (A1 := B2 + C),
            // (A1+B1) ⊖ B2 = A1 + (B1 ⊖ B2) = (A1 ⊖ B2) + B1.
            let a1m = b2.add(c);
            let lhs = a1m.add(b1).hukuhara(b2);
            let mid = a1m.add(d2); // A1 + (B1 ⊖ B2)
            let rhs = c.add(b1); // (A1 ⊖ B2) + B1
            let e2 = lhs
                .map(|l| l.hausdorff(mid).max(l.hausdorff(rhs)).max(mid.hausdorff(rhs)))
                .unwrap_or(f64::INFINITY);

            // Reconstruction: A = B + (A ⊖ B) with A := B + C.
            let ab = b.add(c);
            let e3 = ab
                .hukuhara(b)
                .map(|diff| b.add(diff).hausdorff(ab))
                .unwrap_or(f64::INFINITY);

            // Widening keeps existence: A ⊖ C exists forces (A+B) ⊖ C to
            // exist, with value (A ⊖ C) + B.
            let acd = c.add(d1); // A with A ⊖ C = D1
            let e4 = acd
                .add(b)
                .hukuhara(c)
                .map(|v| v.hausdorff(d1.add(b)))
                .unwrap_or(f64::INFINITY);

            // Chaining: A ⊖ C and C ⊖ B exist force
            // A ⊖ B = (A ⊖ C) + (C ⊖ B); here A = C + D1 and C = B + D2.
            let cc = b.add(d2);
            let aa = cc.add(d1);
            let e5 = aa
                .hukuhara(b)
                .map(|v| v.hausdorff(d1.add(d2)))
                .unwrap_or(f64::INFINITY);

            // Cancellation: adding C changes no distances.
            let e6 = (a.add(c).hausdorff(b.add(c)) - a.hausdorff(b)).abs();

            // Norm of a difference is the distance.
            let e7 = ab
                .hukuhara(b)
                .map(|v| (v.norm() - ab.hausdorff(b)).abs())
                .unwrap_or(f64::INFINITY);

            // Translation detection: A = B + {c} in both directions.
            let shift = 4.0 * uniform(seed, i, 7) - 2.0;
            let translated = b.shift(shift);
            let e8 = match ConvexSet::Interval(translated)
                .is_translation(&ConvexSet::Interval(b), EXACT_ALGEBRA)
            {
                Ok(Some(v)) => (v[0] - shift).abs(),
                _ => f64::INFINITY,
            };
            // Width mismatch must refuse a translation vector.
            let widened = b.add(Interval::new(0.0, 1.0 + uniform(seed, i, 8)).unwrap());
            let e8b = match ConvexSet::Interval(widened)
                .is_translation(&ConvexSet::Interval(b), EXACT_ALGEBRA)
            {
                Ok(None) => 0.0,
                _ => f64::INFINITY,
            };

            // Norm axioms.
            let e9 = (a.scale(alpha).norm() - alpha.abs() * a.norm())
                .abs()
                .max((a.add(b).norm() - a.norm() - b.norm()).max(0.0));

            let trial_vals = [e0, e1, e2, e3, e4, e5, e6, e7, e8.max(e8b), e9];
            for k in 0..acc.vals.len() {
                acc.vals[k] = acc.vals[k].max(trial_vals[k]);
            }
            acc
        })
        .reduce(Worst::default, Worst::merge);

    let names = [
        "self_difference_and_zero",
        "difference_of_sums",
        "sum_difference_associativity",
        "reconstruction",
        "widening_preserves_existence",
        "difference_chaining",
        "cancellation",
        "difference_norm_is_distance",
        "translation_equivalence",
        "norm_axioms",
    ];
    names
        .iter()
        .zip(worst.vals)
        .map(|(n, v)| result(n, trials, v, EXACT_ALGEBRA))
        .collect()
}

/// Box-carrier version of the identity suite, cycling dimensions
/// `1..=max_dim`.
pub fn box_law_suite(trials: usize, max_dim: usize, seed: u64) -> Vec<LawResult> {
    let worst = (0..trials)
        .into_par_iter()
        .fold(
            || [0.0f64; 4],
            |mut acc, i| {
                let dim = 1 + i % max_dim;
                let b = rand_box(seed, i, 11, dim);
                let c = rand_box(seed, i, 12, dim);
                let d = rand_box(seed, i, 13, dim);
                let a = b.add(&c).unwrap();

                // Reconstruction through the certified interface.
                let e0 = match ConvexSet::Box(a.clone())
                    .hukuhara_diff(&ConvexSet::Box(b.clone()), HUKUHARA_EXISTENCE)
                    .unwrap()
                {
                    HukuharaResult::Exists {
                        difference: ConvexSet::Box(diff),
                        residual,
                    } => b
                        .add(&diff)
                        .unwrap()
                        .hausdorff(&a)
                        .unwrap()
                        .max(residual)
                        .max(diff.hausdorff(&c).unwrap()),
                    _ => f64::INFINITY,
                };

                // Cancellation on boxes.
                let lhs = a.add(&d).unwrap().hausdorff(&b.add(&d).unwrap()).unwrap();
                let e1 = (lhs - a.hausdorff(&b).unwrap()).abs();

                // Distance equals the norm of the difference.
                let e2 = match ConvexSet::Box(a.clone())
                    .hukuhara_diff(&ConvexSet::Box(b.clone()), HUKUHARA_EXISTENCE)
                    .unwrap()
                {
                    HukuharaResult::Exists { difference, .. } => {
                        (difference.set_norm() - a.hausdorff(&b).unwrap()).abs()
                    }
                    _ => f64::INFINITY,
                };

                // Translation equivalence with a random shift vector.
                let shift: Vec<f64> = (0..dim)
                    .map(|k| 4.0 * uniform(seed, i, 20 + k as u64) - 2.0)
                    .collect();
                let translated = BoxSet::new(
                    b.axes
                        .iter()
                        .zip(&shift)
                        .map(|(axis, &s)| axis.shift(s))
                        .collect(),
                );
                let e3 = match ConvexSet::Box(translated)
                    .is_translation(&ConvexSet::Box(b.clone()), EXACT_ALGEBRA)
                {
                    Ok(Some(v)) => v
                        .iter()
                        .zip(&shift)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max),
                    _ => f64::INFINITY,
                };

                for (slot, e) in acc.iter_mut().zip([e0, e1, e2, e3]) {
                    *slot = slot.max(e);
                }
                acc
            },
        )
        .reduce(
            || [0.0f64; 4],
            |mut a, b| {
                for i in 0..a.len() {
                    a[i] = a[i].max(b[i]);
                }
                a
            },
        );

    ["box_reconstruction", "box_cancellation", "box_difference_norm", "box_translation"]
        .iter()
        .zip(worst)
        .map(|(n, v)| result(n, trials, v, EXACT_ALGEBRA))
        .collect()
}

/// Erosion agreement between the certified difference and the dense
/// brute-force oracle.
#[derive(Debug, Clone)]
pub struct ErosionAgreement {
    pub trials: usize,
    pub disagreements: usize,
    pub exists_count: usize,
}

/// Brute-force existence oracle for intervals: scan candidate translates on
/// a dense grid, asking for each extreme point of `a` whether some
/// translate covers it while staying inside `a` (up to the grid pitch).
fn interval_erosion_oracle(a: Interval, b: Interval, pitch: f64) -> bool {
    let span_lo = a.lo - b.hi - 1.0;
    let span_hi = a.hi - b.lo + 1.0;
    let cells = ((span_hi - span_lo) / pitch).ceil() as usize;
    let slack = pitch;
    for &extreme in &[a.lo, a.hi] {
        let mut covered = false;
        for i in 0..=cells {
            let x = span_lo + i as f64 * pitch;
            let inside = x + b.lo >= a.lo - slack && x + b.hi <= a.hi + slack;
            let covers = x + b.lo - slack <= extreme && extreme <= x + b.hi + slack;
            if inside && covers {
                covered = true;
                break;
            }
        }
        if !covered {
            return false;
        }
    }
    true
}

/// Same oracle in two dimensions: a dense grid of planar translates against
/// the four corners of `a`.  The pitch stays well under the sampling
/// margin so grid misses cannot flip a verdict.
fn box2_erosion_oracle(a: &BoxSet, b: &BoxSet, pitch_target: f64) -> bool {
    let (ax, ay) = (a.axes[0], a.axes[1]);
    let (bx, by) = (b.axes[0], b.axes[1]);
    let lo = [ax.lo - bx.hi - 0.5, ay.lo - by.hi - 0.5];
    let hi = [ax.hi - bx.lo + 0.5, ay.hi - by.lo + 0.5];
    let cells = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / pitch_target).ceil() as usize;
    let pitch = [
        (hi[0] - lo[0]) / cells as f64,
        (hi[1] - lo[1]) / cells as f64,
    ];
    let slack = pitch[0].max(pitch[1]);
    let corners = [
        [ax.lo, ay.lo],
        [ax.lo, ay.hi],
        [ax.hi, ay.lo],
        [ax.hi, ay.hi],
    ];
    'corner: for corner in corners {
        for i in 0..=cells {
            let x = lo[0] + i as f64 * pitch[0];
            let ix = x + bx.lo >= ax.lo - slack && x + bx.hi <= ax.hi + slack;
            let cx = x + bx.lo - slack <= corner[0] && corner[0] <= x + bx.hi + slack;
            if !(ix && cx) {
                continue;
            }
            for j in 0..=cells {
                let y = lo[1] + j as f64 * pitch[1];
                let iy = y + by.lo >= ay.lo - slack && y + by.hi <= ay.hi + slack;
                let cy = y + by.lo - slack <= corner[1] && corner[1] <= y + by.hi + slack;
                if ix && iy && cx && cy {
                    continue 'corner;
                }
            }
        }
        return false;
    }
    true
}

/// Margin keeping sampled pairs away from the existence boundary, where a
/// finite-pitch oracle could legitimately flip.
const EROSION_WIDTH_MARGIN: f64 = 0.05;

fn margin_interval_pair(seed: u64, trial: usize, salt: u64) -> (Interval, Interval) {
    let mut bump = 0;
    loop {
        let a = rand_interval(seed, trial, salt.wrapping_add(bump));
        let b = rand_interval(seed, trial, salt.wrapping_add(bump) ^ 0xabc);
        if (a.width() - b.width()).abs() >= EROSION_WIDTH_MARGIN {
            return (a, b);
        }
        bump += 1000;
    }
}

/// Certified-vs-brute-force agreement on interval pairs.
pub fn erosion_agreement_intervals(trials: usize, seed: u64) -> ErosionAgreement {
    let (disagreements, exists_count) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (a, b) = margin_interval_pair(seed, i, 31);
            let certified = ConvexSet::Interval(a)
                .hukuhara_diff(&ConvexSet::Interval(b), HUKUHARA_EXISTENCE)
                .unwrap()
                .exists();
            let oracle = interval_erosion_oracle(a, b, 0.01);
            (
                usize::from(certified != oracle),
                usize::from(certified),
            )
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    ErosionAgreement {
        trials,
        disagreements,
        exists_count,
    }
}

/// Certified-vs-brute-force agreement on planar box pairs.
pub fn erosion_agreement_boxes(trials: usize, seed: u64) -> ErosionAgreement {
    let (disagreements, exists_count) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (ax, bx) = margin_interval_pair(seed, i, 41);
            let (ay, by) = margin_interval_pair(seed, i, 43);
            let a = BoxSet::new(vec![ax, ay]);
            let b = BoxSet::new(vec![bx, by]);
            let certified = ConvexSet::Box(a.clone())
                .hukuhara_diff(&ConvexSet::Box(b.clone()), HUKUHARA_EXISTENCE)
                .unwrap()
                .exists();
            let oracle = box2_erosion_oracle(&a, &b, 0.01);
            (
                usize::from(certified != oracle),
                usize::from(certified),
            )
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    ErosionAgreement {
        trials,
        disagreements,
        exists_count,
    }
}

/// Nonexistence witnesses honour the extreme-point characterization: for
/// every reported witness, no admissible translate covers it (checked
/// exhaustively on intervals).
pub fn witness_audit_intervals(trials: usize, seed: u64) -> LawResult {
    let failures: usize = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (a, b) = margin_interval_pair(seed, i, 53);
            match ConvexSet::Interval(a)
                .hukuhara_diff(&ConvexSet::Interval(b), HUKUHARA_EXISTENCE)
                .unwrap()
            {
                HukuharaResult::Exists { .. } => 0,
                HukuharaResult::Nonexistent(w) => {
                    let point = w.extreme_point[0];
                    // Exhaustive scan: any x with point ∈ x+B and x+B ⊆ A
                    // would contradict the witness.
                    let pitch = 1e-3;
                    let mut covered = false;
                    let lo = a.lo - b.hi - 0.5;
                    let steps = ((a.hi - b.lo + 0.5 - lo) / pitch) as usize;
                    for s in 0..=steps {
                        let x = lo + s as f64 * pitch;
                        if x + b.lo >= a.lo - 1e-9
                            && x + b.hi <= a.hi + 1e-9
                            && x + b.lo <= point + 1e-9
                            && point <= x + b.hi + 1e-9
                        {
                            covered = true;
                            break;
                        }
                    }
                    usize::from(covered)
                }
            }
        })
        .sum();
    LawResult {
        name: "nonexistence_witness",
        trials,
        max_error: failures as f64,
        tolerance: 0.0,
        pass: failures == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_suite_clean_at_small_size() {
        for law in interval_law_suite(2_000, 7) {
            assert!(law.pass, "{law:?}");
        }
    }

    #[test]
    fn box_suite_clean_at_small_size() {
        for law in box_law_suite(500, 4, 8) {
            assert!(law.pass, "{law:?}");
        }
    }

    #[test]
    fn erosion_oracles_agree_at_small_size() {
        let iv = erosion_agreement_intervals(500, 9);
        assert_eq!(iv.disagreements, 0, "{iv:?}");
        assert!(iv.exists_count > 0 && iv.exists_count < iv.trials);
        let bx = erosion_agreement_boxes(100, 10);
        assert_eq!(bx.disagreements, 0, "{bx:?}");
    }

    #[test]
    fn witnesses_hold_up() {
        let w = witness_audit_intervals(500, 11);
        assert!(w.pass, "{w:?}");
    }
}
