//! Integer-valued diagonally increasing graphons described by their upper
//! boundary `r`.
//!
//! The graphon is `w(x, y) = 1` iff `l(x) <= y <= r(x)`, where `r` is a
//! non-decreasing piecewise-linear function with `r(x) >= x` and `r(1) = 1`,
//! and `l` is its generalized inverse `l(y) = inf { x : r(x) >= y }`.
//! Symmetry makes this the same as `max(x, y) <= r(min(x, y))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{PointGraphon, StepGraphon};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySpec {
    xs: Vec<f64>,
    rs: Vec<f64>,
}

impl BoundarySpec {
    /// Validates breakpoints `(x, r(x))`: `x` strictly increasing from 0 to 1,
    /// `r` non-decreasing, `r(x) >= x` and `r(1) = 1`.
    pub fn new(breakpoints: &[(f64, f64)]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidBoundary(
                "need at least two breakpoints".into(),
            ));
        }
        if breakpoints
            .iter()
            .any(|(x, r)| !x.is_finite() || !r.is_finite())
        {
            return Err(Error::InvalidBoundary("breakpoints must be finite".into()));
        }
        let (xs, rs): (Vec<f64>, Vec<f64>) = breakpoints.iter().copied().unzip();
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(Error::InvalidBoundary(
                "first x must be 0 and last x must be 1".into(),
            ));
        }
        if *rs.last().unwrap() != 1.0 {
            return Err(Error::InvalidBoundary("r(1) must equal 1".into()));
        }
        for k in 1..xs.len() {
            if xs[k] <= xs[k - 1] {
                return Err(Error::InvalidBoundary(format!(
                    "x values must be strictly increasing (x[{}] = {} <= x[{}] = {})",
                    k,
                    xs[k],
                    k - 1,
                    xs[k - 1]
                )));
            }
            if rs[k] < rs[k - 1] {
                return Err(Error::InvalidBoundary(format!(
                    "r must be non-decreasing (r({}) = {} < r({}) = {})",
                    xs[k],
                    rs[k],
                    xs[k - 1],
                    rs[k - 1]
                )));
            }
        }
        // r - x is linear between breakpoints, so checking breakpoints suffices.
        for (&x, &r) in xs.iter().zip(&rs) {
            if r < x {
                return Err(Error::InvalidBoundary(format!("r({x}) = {r} < {x}")));
            }
        }
        Ok(BoundarySpec { xs, rs })
    }

    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        self.xs
            .iter()
            .copied()
            .zip(self.rs.iter().copied())
            .collect()
    }

    pub(crate) fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub(crate) fn rs(&self) -> &[f64] {
        &self.rs
    }

    /// Upper boundary `r(x)`, exact at breakpoints.
    pub fn r(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        // Segment k covers [xs[k], xs[k+1]).
        let k = self.xs.partition_point(|&t| t <= x).saturating_sub(1);
        if k + 1 >= self.xs.len() {
            return *self.rs.last().unwrap();
        }
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let (r0, r1) = (self.rs[k], self.rs[k + 1]);
        if x == x0 {
            r0
        } else {
            r0 + (r1 - r0) * (x - x0) / (x1 - x0)
        }
    }

    /// Lower boundary `l(y) = inf { x : r(x) >= y }`, and 0 for `y <= r(0)`.
    pub fn l(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, 1.0);
        if y <= self.rs[0] {
            return 0.0;
        }
        // First breakpoint index with r >= y; r(0) < y so k >= 1.
        let k = self.rs.partition_point(|&r| r < y);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (r0, r1) = (self.rs[k - 1], self.rs[k]);
        if y == r1 {
            x1
        } else {
            x0 + (y - r0) * (x1 - x0) / (r1 - r0)
        }
    }

    /// Whether `(x, y)` lies in the support `l(x) <= y <= r(x)`.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        hi <= self.r(lo)
    }

    /// Points in the open interval `(a, b)` where `r` crosses `level`.
    fn crossings(&self, level: f64, a: f64, b: f64, out: &mut Vec<f64>) {
        for k in 0..self.xs.len() - 1 {
            let (r0, r1) = (self.rs[k], self.rs[k + 1]);
            if (r0 < level && level < r1) || (r1 < level && level < r0) {
                let (x0, x1) = (self.xs[k], self.xs[k + 1]);
                let t = x0 + (level - r0) * (x1 - x0) / (r1 - r0);
                if a < t && t < b {
                    out.push(t);
                }
            }
        }
    }

    /// Exact integral over `[a, b]` of `f`, which must be linear between
    /// consecutive breakpoints of `r` and crossings of `r` with `levels`.
    fn integrate_piecewise(&self, a: f64, b: f64, levels: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        let mut cuts = vec![a, b];
        cuts.extend(self.xs.iter().copied().filter(|&t| a < t && t < b));
        for &level in levels {
            self.crossings(level, a, b, &mut cuts);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2)
            .map(|w| 0.5 * (f(w[0]) + f(w[1])) * (w[1] - w[0]))
            .sum()
    }
}

impl PointGraphon for BoundarySpec {
    fn value(&self, x: f64, y: f64) -> f64 {
        if self.contains(x, y) {
            1.0
        } else {
            0.0
        }
    }
}

/// Block averages of the boundary graphon on an `n`-block equipartition,
/// computed in closed form from the piecewise-linear boundary.
pub fn boundary_to_step_graphon(b: &BoundarySpec, n: usize) -> Result<StepGraphon> {
    if n == 0 {
        return Err(Error::InvalidGraphon("block count must be positive".into()));
    }
    let h = 1.0 / n as f64;
    let area_scale = (n * n) as f64;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let (a, e) = (i as f64 * h, (i + 1) as f64 * h);
        // Diagonal block: {x <= y <= r(x)} and its mirror image.
        let top = e;
        let diag = b.integrate_piecewise(a, e, &[top], |x| (b.r(x).min(top) - x).max(0.0));
        values[i * n + i] = (2.0 * diag * area_scale).clamp(0.0, 1.0);
        for j in i + 1..n {
            let lo = j as f64 * h;
            let hi = lo + h;
            let area = b.integrate_piecewise(a, e, &[lo, hi], |x| (b.r(x) - lo).clamp(0.0, h));
            let v = (area * area_scale).clamp(0.0, 1.0);
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    StepGraphon::new(n, values)
}

#[derive(Serialize, Deserialize)]
struct BoundaryRepr {
    breakpoints: Vec<[f64; 2]>,
}

impl Serialize for BoundarySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoundaryRepr {
            breakpoints: self
                .breakpoints()
                .into_iter()
                .map(|(x, r)| [x, r])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundarySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BoundaryRepr::deserialize(d)?;
        let pts: Vec<_> = repr.breakpoints.iter().map(|p| (p[0], p[1])).collect();
        BoundarySpec::new(&pts).map_err(serde::de::Error::custom)
    }
}

/// Boundaries used throughout tests and examples.
pub mod examples {
    use super::BoundarySpec;

    /// `r(x) = 1/4 + x/2` on `[0, 1/2]`, `1/2 + 2(x - 1/2)` on `(1/2, 3/4]`,
    /// and 1 afterwards. Its only fixed point is `1/2`.
    pub fn two_sided() -> BoundarySpec {
        BoundarySpec::new(&[(0.0, 0.25), (0.5, 0.5), (0.75, 1.0), (1.0, 1.0)])
            .expect("valid boundary")
    }

    /// `r(x) = min(1, x + 1/2)`.
    pub fn half_shift() -> BoundarySpec {
        BoundarySpec::new(&[(0.0, 0.5), (0.5, 1.0), (1.0, 1.0)]).expect("valid boundary")
    }

    /// `r(x) = 1`: the constant graphon 1.
    pub fn full() -> BoundarySpec {
        BoundarySpec::new(&[(0.0, 1.0), (1.0, 1.0)]).expect("valid boundary")
    }

    /// Touches the diagonal at 1/4, 1/2 and 3/4.
    pub fn three_fixed_points() -> BoundarySpec {
        BoundarySpec::new(&[
            (0.0, 0.125),
            (0.25, 0.25),
            (0.375, 0.4375),
            (0.5, 0.5),
            (0.625, 0.6875),
            (0.75, 0.75),
            (0.875, 1.0),
            (1.0, 1.0),
        ])
        .expect("valid boundary")
    }

    /// `r(0) = 0`, `r(x) > x` inside, and `r < 1` before 1: `L = {1}`, `R = {0}`.
    pub fn both_ends() -> BoundarySpec {
        BoundarySpec::new(&[(0.0, 0.0), (0.5, 0.75), (1.0, 1.0)]).expect("valid boundary")
    }
}
