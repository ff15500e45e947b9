//! Support-sampled planar convex sets.
//!
//! A set is stored as its support values `h[j] = sup_{a in A} <a, d_j>` on a
//! fixed, ordered grid of unit directions shared by every set that
//! interacts.  The represented body is the polygon `∩_j { x : <x,d_j> <= h[j] }`.
//!
//! Support values are kept *tight*: on a grid with angular spacing below
//! pi/2, a vector of values is the restriction of a genuine support function
//! exactly when each value is dominated by the vertex of its two angular
//! neighbours.  Construction and every derived operation therefore run a
//! sweep that caps `h[j]` at `(h[j-1] + h[j+1]) / (2 cos θ)` until a fixed
//! point, which re-convexifies raw candidates and exposes empty sets as
//! collapsing widths.  All distances on this carrier are grid-relative.

use std::sync::Arc;

use super::{HukuharaResult, NonexistenceWitness, SetError, WitnessDetail};

/// Fixed ordered grid of unit directions in the plane.
///
/// Grids are immutable and compared by value; two sets interact only when
/// their grids are identical.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    angles: Vec<f64>,
    dirs: Vec<[f64; 2]>,
    /// `opposite[j]` is the index of `-d_j` when the grid is symmetric.
    opposite: Option<Vec<usize>>,
}

/// Angular spacing must stay below pi/2 for neighbour tightening to see
/// every vertex, so fewer than five directions cannot represent a bounded
/// polygon.
const MIN_DIRECTIONS: usize = 5;

impl DirectionGrid {
    /// Uniform grid of `m` directions at angles `2 pi j / m`.  Even `m`
    /// yields a symmetric grid (every direction has its antipode).
    pub fn uniform(m: usize) -> Result<Arc<Self>, SetError> {
        if m < MIN_DIRECTIONS {
            return Err(SetError::GridTooCoarse {
                min: MIN_DIRECTIONS,
                got: m,
            });
        }
        let angles: Vec<f64> = (0..m)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
            .collect();
        Self::from_angles(angles)
    }

    /// Grid from explicit angles (radians in `[0, 2 pi)`, strictly
    /// increasing).  Consecutive gaps, including the wrap-around, must stay
    /// below pi/2.
    pub fn from_angles(angles: Vec<f64>) -> Result<Arc<Self>, SetError> {
        let m = angles.len();
        if m < MIN_DIRECTIONS {
            return Err(SetError::GridTooCoarse {
                min: MIN_DIRECTIONS,
                got: m,
            });
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        for j in 0..m {
            let next = if j + 1 < m {
                angles[j + 1]
            } else {
                angles[0] + two_pi
            };
            let gap = next - angles[j];
            if !(gap > 0.0 && gap < std::f64::consts::FRAC_PI_2) {
                return Err(SetError::GridTooCoarse { min: m + 1, got: m });
            }
        }
        let dirs: Vec<[f64; 2]> = angles.iter().map(|&a| [a.cos(), a.sin()]).collect();
        let opposite = antipode_map(&angles);
        Ok(Arc::new(Self {
            angles,
            dirs,
            opposite,
        }))
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.dirs
    }

    pub fn is_symmetric(&self) -> bool {
        self.opposite.is_some()
    }

    /// Intersection of boundary lines `<x, d_j> = h_j` and `<x, d_k> = h_k`.
    fn line_intersection(&self, j: usize, k: usize, hj: f64, hk: f64) -> [f64; 2] {
        let [ax, ay] = self.dirs[j];
        let [bx, by] = self.dirs[k];
        let det = ax * by - ay * bx;
        [(hj * by - hk * ay) / det, (ax * hk - bx * hj) / det]
    }
}

fn antipode_map(angles: &[f64]) -> Option<Vec<usize>> {
    let m = angles.len();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut map = vec![usize::MAX; m];
    for j in 0..m {
        let target = (angles[j] + std::f64::consts::PI) % two_pi;
        let found = angles
            .iter()
            .position(|&a| (a - target).abs() < 1e-12 || (a - target).abs() > two_pi - 1e-12)?;
        map[j] = found;
    }
    Some(map)
}

/// A planar convex polytope stored as tight support values on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    grid: Arc<DirectionGrid>,
    values: Vec<f64>,
}

/// Sweeps of the neighbour-tightening pass; the pass is a monotone
/// contraction, so this cap is generous for grids up to a few hundred
/// directions.
const TIGHTEN_SWEEPS: usize = 256;

impl SupportSet {
    /// Builds a set from raw support candidates, re-convexifying them and
    /// rejecting empty polygons.
    pub fn new(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Self, SetError> {
        if values.len() != grid.len() {
            return Err(SetError::DimensionMismatch(values.len(), grid.len()));
        }
        let tightened =
            tighten(&grid, values).ok_or(SetError::EmptySupport)?;
        Ok(Self {
            grid,
            values: tightened,
        })
    }

    /// Support values of a single point.
    pub fn point(grid: Arc<DirectionGrid>, p: [f64; 2]) -> Self {
        let values = grid
            .directions()
            .iter()
            .map(|d| d[0] * p[0] + d[1] * p[1])
            .collect();
        Self { grid, values }
    }

    /// Support values of an axis-aligned rectangle, exact on any grid.
    pub fn from_rectangle(
        grid: Arc<DirectionGrid>,
        x: super::Interval,
        y: super::Interval,
    ) -> Self {
        let values = grid
            .directions()
            .iter()
            .map(|d| {
                let sx = if d[0] >= 0.0 { x.hi } else { x.lo };
                let sy = if d[1] >= 0.0 { y.hi } else { y.lo };
                d[0] * sx + d[1] * sy
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<DirectionGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_grid(&self, rhs: &SupportSet) -> Result<(), SetError> {
        if self.grid == rhs.grid {
            Ok(())
        } else {
            Err(SetError::GridMismatch)
        }
    }

    /// Minkowski sum: support functions add, and tightness is preserved.
    pub fn add(&self, rhs: &SupportSet) -> Result<SupportSet, SetError> {
        self.check_grid(rhs)?;
        Ok(SupportSet {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, alpha: f64) -> Result<SupportSet, SetError> {
        if alpha >= 0.0 {
            Ok(SupportSet {
                grid: self.grid.clone(),
                values: self.values.iter().map(|v| alpha * v).collect(),
            })
        } else {
            // h_{alpha A}(d) = |alpha| h_A(-d): needs the antipode of every
            // direction to be on the grid.
            let Some(opp) = &self.grid.opposite else {
                return Err(SetError::AsymmetricGrid);
            };
            let values = (0..self.values.len())
                .map(|j| -alpha * self.values[opp[j]])
                .collect();
            Ok(SupportSet {
                grid: self.grid.clone(),
                values,
            })
        }
    }

    /// Grid-relative Hausdorff distance: the largest support gap over the
    /// shared directions.
    pub fn hausdorff(&self, rhs: &SupportSet) -> Result<f64, SetError> {
        self.check_grid(rhs)?;
        Ok(self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Vertices as intersections of neighbouring boundary lines.  For tight
    /// support values every such point lies on the polygon boundary.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let m = self.grid.len();
        (0..m)
            .map(|j| {
                let k = (j + 1) % m;
                self.grid
                    .line_intersection(j, k, self.values[j], self.values[k])
            })
            .collect()
    }

    /// `sup { |a| : a in A }` over the boundary vertices.
    pub fn norm(&self) -> f64 {
        self.vertices()
            .iter()
            .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
            .fold(0.0, f64::max)
    }

    pub(super) fn centroid_of_vertices(&self) -> Vec<f64> {
        let vs = self.vertices();
        let n = vs.len() as f64;
        let (mut x, mut y) = (0.0, 0.0);
        for v in &vs {
            x += v[0];
            y += v[1];
        }
        vec![x / n, y / n]
    }

    /// Certified Hukuhara difference via erosion candidates
    /// `h_A[j] - h_B[j]`, re-convexification, and reconstruction.
    pub fn hukuhara_certified(
        &self,
        rhs: &SupportSet,
        tol: f64,
    ) -> Result<HukuharaResult, SetError> {
        self.check_grid(rhs)?;
        let candidates: Vec<f64> = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| a - b)
            .collect();
        let Some(tight) = tighten(&self.grid, candidates) else {
            // Erosion empty: A cannot contain any translate of B.  Witness
            // with the support point of A in the direction of worst width
            // deficit.
            let j = worst_width_direction(&self.grid, &self.values, &rhs.values);
            return Ok(HukuharaResult::Nonexistent(NonexistenceWitness {
                extreme_point: self.support_point(j).to_vec(),
                detail: WitnessDetail::SupportDeficit {
                    direction: j,
                    deficit: f64::INFINITY,
                },
            }));
        };
        // Reconstruction check: B + E must reach A in every direction.
        // Tightening only lowers values, so the residual is one-sided.
        let mut worst = 0.0f64;
        let mut worst_dir = 0;
        for j in 0..tight.len() {
            let deficit = self.values[j] - (rhs.values[j] + tight[j]);
            if deficit > worst {
                worst = deficit;
                worst_dir = j;
            }
        }
        if worst > tol {
            return Ok(HukuharaResult::Nonexistent(NonexistenceWitness {
                extreme_point: self.support_point(worst_dir).to_vec(),
                detail: WitnessDetail::SupportDeficit {
                    direction: worst_dir,
                    deficit: worst,
                },
            }));
        }
        Ok(HukuharaResult::Exists {
            difference: super::ConvexSet::Support(SupportSet {
                grid: self.grid.clone(),
                values: tight,
            }),
            residual: worst,
        })
    }

    /// A boundary point attaining (grid-relatively) the support in
    /// direction `j`.
    fn support_point(&self, j: usize) -> [f64; 2] {
        let m = self.grid.len();
        let k = (j + 1) % m;
        self.grid
            .line_intersection(j, k, self.values[j], self.values[k])
    }

    /// Membership test against all grid half-planes.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        self.grid
            .directions()
            .iter()
            .zip(&self.values)
            .all(|(d, &h)| d[0] * p[0] + d[1] * p[1] <= h + tol)
    }
}

/// Largest-deficit direction among antipodal width checks (symmetric grids)
/// or raw support gaps otherwise.
fn worst_width_direction(grid: &DirectionGrid, a: &[f64], b: &[f64]) -> usize {
    if let Some(opp) = &grid.opposite {
        (0..a.len())
            .max_by(|&i, &j| {
                let wi = (b[i] + b[opp[i]]) - (a[i] + a[opp[i]]);
                let wj = (b[j] + b[opp[j]]) - (a[j] + a[opp[j]]);
                wi.partial_cmp(&wj).unwrap()
            })
            .unwrap_or(0)
    } else {
        (0..a.len())
            .max_by(|&i, &j| (b[i] - a[i]).partial_cmp(&(b[j] - a[j])).unwrap())
            .unwrap_or(0)
    }
}

/// Neighbour-tightening fixed point.  Returns `None` when the candidates
/// describe an empty polygon (detected through collapsing antipodal widths
/// or runaway decrease).
fn tighten(grid: &DirectionGrid, mut h: Vec<f64>) -> Option<Vec<f64>> {
    let m = grid.len();
    let scale = h.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let feas = crate::tolerances::SUPPORT_FEASIBILITY * scale;
    for _ in 0..TIGHTEN_SWEEPS {
        let mut changed = false;
        for j in 0..m {
            let prev = h[(j + m - 1) % m];
            let next = h[(j + 1) % m];
            // A constraint cannot stick out past the vertex of its two
            // angular neighbours (gaps < pi/2 keep that vertex well defined).
            let v = grid.line_intersection((j + m - 1) % m, (j + 1) % m, prev, next);
            let cap = grid.dirs[j][0] * v[0] + grid.dirs[j][1] * v[1];
            if cap < h[j] - 1e-15 * scale.max(1.0) {
                h[j] = cap;
                changed = true;
            }
        }
        if let Some(opp) = &grid.opposite {
            for j in 0..m {
                if h[j] + h[opp[j]] < -feas {
                    return None;
                }
            }
        }
        if h.iter().any(|v| !v.is_finite() || *v < -1e12 * scale.max(1.0)) {
            return None;
        }
        if !changed {
            return Some(h);
        }
    }
    Some(h)
}
