//! Riemann-sum evaluation of `Gamma(w, A)` straight from its definition, for
//! cross-checking the closed forms.

use crate::error::{Error, Result};
use crate::graph::SubsetMask;
use crate::graphon::PointGraphon;

/// `Gamma(w, A)` on an `m x m` midpoint grid, where `A` is the union of the
/// blocks `[k/n, (k+1)/n)` listed in `a` (with `n = a.universe()`).
///
/// Cells `p < q` contribute with weight `1/m^2`; in the inner integrals the
/// cell containing the endpoint counts with half weight.
pub fn gamma_grid_oracle(w: &dyn PointGraphon, a: &SubsetMask, m: usize) -> Result<f64> {
    let n = a.universe();
    if n == 0 || m < 4 * n {
        return Err(Error::Precondition(format!(
            "grid resolution {m} must be at least 4 x {n} blocks"
        )));
    }
    let centre = |p: usize| (p as f64 + 0.5) / m as f64;
    let in_a: Vec<f64> = (0..m)
        .map(|p| {
            let k = ((centre(p) * n as f64).floor() as usize).min(n - 1);
            if a.contains(k) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let wv: Vec<f64> = (0..m * m)
        .map(|k| w.value(centre(k / m), centre(k % m)))
        .collect();
    let h = 1.0 / m as f64;

    // full[p * m + c] = h * sum_{r < p, r in A} w(z_r, x_c); the cell
    // holding the endpoint itself is added with half weight below.
    let mut full = vec![0.0; m * m];
    for p in 1..m {
        for c in 0..m {
            full[p * m + c] = full[(p - 1) * m + c] + h * in_a[p - 1] * wv[(p - 1) * m + c];
        }
    }
    let mut below = vec![0.0; m * m];
    for p in 0..m {
        for c in 0..m {
            below[p * m + c] = full[p * m + c] + 0.5 * h * in_a[p] * wv[p * m + c];
        }
    }
    let mut full_up = vec![0.0; m * m];
    for p in (0..m - 1).rev() {
        for c in 0..m {
            full_up[p * m + c] = full_up[(p + 1) * m + c] + h * in_a[p + 1] * wv[(p + 1) * m + c];
        }
    }

    let mut total = 0.0;
    for p in 0..m {
        for q in p + 1..m {
            let lo = below[p * m + q] - below[p * m + p];
            let above_q = |c: usize| full_up[q * m + c] + 0.5 * h * in_a[q] * wv[q * m + c];
            let hi = above_q(p) - above_q(q);
            total += lo.max(0.0) + hi.max(0.0);
        }
    }
    Ok(total * h * h)
}
