//! Step graphons: symmetric functions on `[0,1]^2` that are constant on the
//! blocks `I_i x I_j` of the equipartition `I_i = [i/n, (i+1)/n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Ordering};

/// Symmetry tolerance applied when constructing or loading step graphons.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// A function that can be evaluated pointwise on `[0,1]^2`.
pub trait PointGraphon {
    fn value(&self, x: f64, y: f64) -> f64;
}

/// Symmetric `n x n` block step function.
#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon {
    n: usize,
    values: Vec<f64>,
}

impl StepGraphon {
    /// Builds a step graphon from row-major values. Values must be finite
    /// and symmetric within [`SYMMETRY_TOL`].
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraphon("block count must be positive".into()));
        }
        if values.len() != n * n {
            return Err(Error::InvalidGraphon(format!(
                "expected {} values for {n} blocks, got {}",
                n * n,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGraphon(format!(
                "value at ({}, {}) is not finite",
                k / n,
                k % n
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                let diff = (values[i * n + j] - values[j * n + i]).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::Asymmetric { i, j, diff });
                }
            }
        }
        Ok(StepGraphon { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidGraphon(format!(
                "row {r} has {} entries, expected {n}",
                rows[r].len()
            )));
        }
        StepGraphon::new(n, rows.concat())
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        StepGraphon::new(n, vec![p; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// The bound `c = max |w|`.
    pub fn bound(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when every value lies in `[0, 1]`.
    pub fn is_unit_valued(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }

    /// Block index containing `x`, with the half-open convention and the
    /// point `1` assigned to the last block.
    #[inline]
    pub fn block_of(&self, x: f64) -> usize {
        ((x * self.n as f64).floor() as usize).min(self.n - 1)
    }

    /// `w^sigma(i, j) = w(sigma(i), sigma(j))` for a block permutation sigma.
    pub fn permuted(&self, sigma: &[usize]) -> StepGraphon {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.get(sigma[i], sigma[j]);
            }
        }
        StepGraphon { n, values }
    }

    /// Subdivides every block into `m x m` equal blocks. The function on
    /// `[0,1]^2` is unchanged.
    pub fn refined(&self, m: usize) -> StepGraphon {
        assert!(m > 0, "refinement factor must be positive");
        let n = self.n * m;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.get(i / m, j / m);
            }
        }
        StepGraphon { n, values }
    }

    /// Pointwise difference; both operands must have the same block count.
    pub fn difference(&self, other: &StepGraphon) -> Result<StepGraphon> {
        if self.n != other.n {
            return Err(Error::InvalidGraphon(format!(
                "block counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(StepGraphon { n: self.n, values })
    }

    pub fn scaled(&self, factor: f64) -> StepGraphon {
        StepGraphon {
            n: self.n,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Block-measure weighted L1 norm `sum |a_ij| / n^2`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / (self.n * self.n) as f64
    }

    /// Integer rescaling of the values, when every value is a dyadic
    /// rational `k / 2^e` with `e <= 16` and `|k| < 2^40`.
    pub(crate) fn dyadic_levels(&self) -> Option<DyadicLevels> {
        const MAX_EXP: i32 = 16;
        let mut exp = 0;
        for &v in &self.values {
            let mut e = exp;
            while (v * f64::from(1u32 << e)).fract() != 0.0 {
                e += 1;
                if e > MAX_EXP {
                    return None;
                }
            }
            exp = e;
        }
        let scale = 1i64 << exp;
        let mut scaled = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            let s = v * scale as f64;
            if s.abs() >= (1u64 << 40) as f64 {
                return None;
            }
            scaled.push(s as i64);
        }
        Some(DyadicLevels {
            n: self.n,
            scale,
            scaled,
        })
    }
}

/// Values of a step graphon multiplied by a common power of two.
#[derive(Clone, Debug)]
pub(crate) struct DyadicLevels {
    pub n: usize,
    pub scale: i64,
    pub scaled: Vec<i64>,
}

impl PointGraphon for StepGraphon {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.get(self.block_of(x), self.block_of(y))
    }
}

/// Represents `g` as a step graphon with vertices laid out in `order`:
/// block `(i, j)` is 1 when the vertices of rank `i` and `j` are adjacent
/// or `i = j`, and 0 otherwise.
pub fn graph_to_step_graphon(g: &Graph, order: &Ordering) -> Result<StepGraphon> {
    order.check_for(g)?;
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidGraphon("graph has no vertices".into()));
    }
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j || g.has_edge(order.vertex_at(i), order.vertex_at(j)) {
                values[i * n + j] = 1.0;
            }
        }
    }
    Ok(StepGraphon { n, values })
}

#[derive(Serialize, Deserialize)]
pub(crate) struct StepGraphonRepr {
    pub n: usize,
    pub values: Vec<Vec<f64>>,
}

impl Serialize for StepGraphon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepGraphonRepr {
            n: self.n,
            values: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepGraphon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StepGraphonRepr::deserialize(d)?;
        let g = StepGraphon::from_rows(&repr.values).map_err(serde::de::Error::custom)?;
        if g.n() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but values have {} rows",
                repr.n,
                g.n()
            )));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_is_all_ones() {
        let w = graph_to_step_graphon(&Graph::complete(2), &Ordering::identity(2)).unwrap();
        assert_eq!(w.values(), &[1.0; 4]);
    }

    #[test]
    fn empty_graph_is_identity_pattern() {
        let g = Graph::empty(3);
        let o = Ordering::from_perm(vec![2, 0, 1]).unwrap();
        let w = graph_to_step_graphon(&g, &o).unwrap();
        assert_eq!(
            w.rows(),
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn path_read_off() {
        let w = graph_to_step_graphon(&Graph::path(3), &Ordering::identity(3)).unwrap();
        assert_eq!(
            w.rows(),
            vec![
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0],
                vec![0.0, 1.0, 1.0]
            ]
        );
    }

    #[test]
    fn asymmetry_rejected() {
        let err = StepGraphon::from_rows(&[vec![0.0, 0.5], vec![0.501, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { i: 0, j: 1, .. }));
        assert!(StepGraphon::from_rows(&[vec![0.0, 0.5], vec![0.5 + 1e-12, 0.0]]).is_ok());
    }

    #[test]
    fn dyadic_levels_for_quarters() {
        let w = StepGraphon::from_rows(&[vec![0.25, 0.5], vec![0.5, 1.0]]).unwrap();
        let d = w.dyadic_levels().unwrap();
        assert_eq!(d.scale, 4);
        assert_eq!(d.scaled, vec![1, 2, 2, 4]);
        let w = StepGraphon::from_rows(&[vec![0.1]]).unwrap();
        assert!(w.dyadic_levels().is_none());
    }

    #[test]
    fn refinement_preserves_point_values() {
        let w = StepGraphon::from_rows(&[vec![0.25, 0.5], vec![0.5, 1.0]]).unwrap();
        let r = w.refined(3);
        for &(x, y) in &[(0.1, 0.2), (0.6, 0.1), (0.9, 0.95), (0.49, 0.51)] {
            assert_eq!(w.value(x, y), r.value(x, y));
        }
    }
}
