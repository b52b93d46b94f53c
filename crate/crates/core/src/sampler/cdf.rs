//! Piecewise-linear distribution functions and the 0/1 graphon they induce
//! through the distance-one threshold.

use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_to_step_graphon, BoundarySpec};
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;

/// A strictly increasing piecewise-linear cdf, given by knots `(t, F(t))`
/// running from `F = 0` to `F = 1`. JSON: `{"knots": [[t, F], ...]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseCdf {
    ts: Vec<f64>,
    fs: Vec<f64>,
}

impl PiecewiseCdf {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidCdf("need at least two knots".into()));
        }
        if knots.iter().any(|(t, f)| !t.is_finite() || !f.is_finite()) {
            return Err(Error::InvalidCdf("knots must be finite".into()));
        }
        let (ts, fs): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
        if fs[0] != 0.0 || *fs.last().unwrap() != 1.0 {
            return Err(Error::InvalidCdf("F must run from 0 to 1".into()));
        }
        for k in 1..ts.len() {
            if ts[k] <= ts[k - 1] || fs[k] <= fs[k - 1] {
                return Err(Error::InvalidCdf(format!(
                    "knots must be strictly increasing in both coordinates (knot {k})"
                )));
            }
        }
        Ok(PiecewiseCdf { ts, fs })
    }

    /// The uniform distribution on `[a, b]`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(&[(a, 0.0), (b, 1.0)])
    }

    pub fn knots(&self) -> Vec<(f64, f64)> {
        self.ts
            .iter()
            .copied()
            .zip(self.fs.iter().copied())
            .collect()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.ts[0], *self.ts.last().unwrap())
    }

    fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
        if x <= xs[0] {
            return ys[0];
        }
        if x >= *xs.last().unwrap() {
            return *ys.last().unwrap();
        }
        let k = xs.partition_point(|&t| t <= x) - 1;
        if x == xs[k] {
            return ys[k];
        }
        ys[k] + (ys[k + 1] - ys[k]) * (x - xs[k]) / (xs[k + 1] - xs[k])
    }

    pub fn cdf(&self, t: f64) -> f64 {
        Self::interpolate(&self.ts, &self.fs, t)
    }

    pub fn inverse(&self, u: f64) -> f64 {
        Self::interpolate(&self.fs, &self.ts, u)
    }
}

#[derive(Serialize, Deserialize)]
struct CdfRepr {
    knots: Vec<[f64; 2]>,
}

impl Serialize for PiecewiseCdf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CdfRepr {
            knots: self.knots().into_iter().map(|(t, f)| [t, f]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseCdf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CdfRepr::deserialize(d)?;
        let knots: Vec<_> = repr.knots.iter().map(|k| (k[0], k[1])).collect();
        PiecewiseCdf::new(&knots).map_err(serde::de::Error::custom)
    }
}

/// The boundary `r(x) = F(min(F^{-1}(x) + 1, sup))` of the graphon
/// `w_F(x, y) = [|F^{-1}(x) - F^{-1}(y)| <= 1]`.
///
/// `r` is linear between the points `0`, `1`, `F(t_k)` and `F(t_k - 1)`, so
/// evaluating it there describes it exactly.
pub fn boundary_from_cdf(cdf: &PiecewiseCdf) -> Result<BoundarySpec> {
    let (lo, hi) = cdf.support();
    let mut xs = vec![0.0, 1.0];
    for &t in &cdf.ts {
        xs.push(cdf.cdf(t));
        if t - 1.0 > lo {
            xs.push(cdf.cdf(t - 1.0));
        }
    }
    xs.retain(|x| (0.0..=1.0).contains(x));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut points = Vec::with_capacity(xs.len());
    let mut prev = 0.0f64;
    for &x in &xs {
        let r = cdf
            .cdf((cdf.inverse(x) + 1.0).min(hi))
            .max(x)
            .max(prev)
            .min(1.0);
        prev = r;
        points.push((x, r));
    }
    points.last_mut().unwrap().1 = 1.0;
    BoundarySpec::new(&points)
}

/// Block averages of `w_F`.
pub fn graphon_from_cdf(cdf: &PiecewiseCdf, n_blocks: usize) -> Result<StepGraphon> {
    boundary_to_step_graphon(&boundary_from_cdf(cdf)?, n_blocks)
}
