//! Cut norm and block-permutation cut distance of step functions, and the
//! two continuity estimates built on them.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{guard, Result};
use crate::gamma::{gamma, next_permutation, GammaReport, SearchOptions, EXACT_SUBSET_LIMIT};
use crate::graph::{lex_cmp, SubsetMask};
use crate::graphon::StepGraphon;
use crate::Mode;

/// Largest block count for the exact cut norm.
pub const EXACT_CUT_LIMIT: usize = 22;
/// Largest common block count for exhaustive permutation search.
pub const EXACT_DISTANCE_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct CutNormReport {
    pub value: f64,
    pub witness_s: SubsetMask,
    pub witness_t: SubsetMask,
    pub mode: Mode,
}

/// A (not necessarily symmetric) `n x n` block step function; entry `(i, j)`
/// is the value on `I_i x I_j`.
struct Blocks<'a> {
    n: usize,
    a: &'a [f64],
}

impl Blocks<'_> {
    /// `|int_{S x T} f| = |sum_{i in S, j in T} a_ij| / n^2`.
    fn integral(&self, s: &[bool], t: &[bool]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in (0..n).filter(|&i| s[i]) {
            for j in (0..n).filter(|&j| t[j]) {
                total += self.a[i * n + j];
            }
        }
        total / (n * n) as f64
    }

    /// Best `T` for fixed column sums: the positive columns, or the negative
    /// ones when they weigh more. Returns `(sum, T)`.
    fn best_t(col: &[f64]) -> (f64, Vec<bool>) {
        let pos: f64 = col.iter().filter(|&&c| c > 0.0).sum();
        let neg: f64 = -col.iter().filter(|&&c| c < 0.0).sum::<f64>();
        if pos >= neg {
            (pos, col.iter().map(|&c| c > 0.0).collect())
        } else {
            (neg, col.iter().map(|&c| c < 0.0).collect())
        }
    }

    fn report(&self, s: Vec<bool>, t: Vec<bool>, mode: Mode) -> CutNormReport {
        CutNormReport {
            value: self.integral(&s, &t).abs(),
            witness_s: SubsetMask::from_bools(s),
            witness_t: SubsetMask::from_bools(t),
            mode,
        }
    }

    /// Gray-code enumeration over `S` with incremental column sums.
    fn exact(&self) -> Result<CutNormReport> {
        let n = self.n;
        guard("exact cut norm", n, EXACT_CUT_LIMIT)?;
        let mut s = vec![false; n];
        let mut col = vec![0.0; n];
        let mut best = (0.0, vec![false; n], vec![false; n]);
        for step in 1u64..1u64 << n {
            let flip = step.trailing_zeros() as usize;
            s[flip] = !s[flip];
            let sign = if s[flip] { 1.0 } else { -1.0 };
            for (c, v) in col.iter_mut().enumerate() {
                *v += sign * self.a[flip * n + c];
            }
            let (v, t) = Self::best_t(&col);
            let better = v > best.0 || (v == best.0 && v > 0.0 && lex_cmp(&s, &best.1).is_lt());
            if better {
                best = (v, s.clone(), t);
            }
        }
        Ok(self.report(best.1, best.2, Mode::Exact))
    }

    /// Alternating maximization from seeded starts.
    fn heuristic(&self, restarts: usize, seed: u64) -> CutNormReport {
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut starts = vec![vec![true; n]];
        for k in 0..n {
            let mut s = vec![false; n];
            s[k] = true;
            starts.push(s);
        }
        for _ in 0..restarts {
            starts.push((0..n).map(|_| rng.random_bool(0.5)).collect());
        }
        let mut best = (f64::NEG_INFINITY, vec![false; n], vec![false; n]);
        for mut s in starts {
            let mut cur = f64::NEG_INFINITY;
            let mut t;
            loop {
                let col: Vec<f64> = (0..n)
                    .map(|c| (0..n).filter(|&r| s[r]).map(|r| self.a[r * n + c]).sum())
                    .collect();
                t = Self::best_t(&col).1;
                let row: Vec<f64> = (0..n)
                    .map(|r| (0..n).filter(|&c| t[c]).map(|c| self.a[r * n + c]).sum())
                    .collect();
                s = Self::best_t(&row).1;
                let v = self.integral(&s, &t).abs();
                if v <= cur {
                    break;
                }
                cur = v;
            }
            if cur > best.0 || (cur == best.0 && lex_cmp(&s, &best.1).is_lt()) {
                best = (cur, s, t);
            }
        }
        self.report(best.1, best.2, Mode::Heuristic)
    }

    fn cut_norm(&self, mode: Mode) -> Result<CutNormReport> {
        match mode {
            Mode::Exact => self.exact(),
            Mode::Heuristic => Ok(self.heuristic(16, 0)),
        }
    }
}

/// `||w||_cut = sup_{S,T} |int_{S x T} w|`, attained at unions of blocks.
pub fn cut_norm(w: &StepGraphon, mode: Mode) -> Result<CutNormReport> {
    Blocks {
        n: w.n(),
        a: w.values(),
    }
    .cut_norm(mode)
}

#[derive(Clone, Debug, Serialize)]
pub struct CutDistanceReport {
    /// `||w1 - w2^sigma||_cut` for the best permutation found; an upper bound
    /// on the cut distance.
    pub value: f64,
    pub permutation: Vec<usize>,
    pub blocks: usize,
    pub mode: Mode,
}

/// Refines both graphons to a common block count.
pub fn common_refinement(w1: &StepGraphon, w2: &StepGraphon) -> (StepGraphon, StepGraphon) {
    let n = w1.n().lcm(&w2.n());
    (w1.refined(n / w1.n()), w2.refined(n / w2.n()))
}

/// Minimizes `||w1 - w2^sigma||_cut` over block permutations `sigma` of the
/// common refinement.
pub fn cut_distance_blocks(
    w1: &StepGraphon,
    w2: &StepGraphon,
    mode: Mode,
) -> Result<CutDistanceReport> {
    let (a, b) = common_refinement(w1, w2);
    let n = a.n();
    let inner = if n <= EXACT_CUT_LIMIT {
        Mode::Exact
    } else {
        Mode::Heuristic
    };
    let score = |sigma: &[usize]| -> Result<f64> {
        let diff = a.difference(&b.permuted(sigma))?;
        Ok(cut_norm(&diff, inner)?.value)
    };
    let mut best_sigma: Vec<usize> = (0..n).collect();
    let mut best = score(&best_sigma)?;
    match mode {
        Mode::Exact => {
            guard(
                "exact block-permutation enumeration",
                n,
                EXACT_DISTANCE_LIMIT,
            )?;
            let mut sigma = best_sigma.clone();
            while best > 0.0 && next_permutation(&mut sigma) {
                let v = score(&sigma)?;
                if v < best {
                    best = v;
                    best_sigma = sigma.clone();
                }
            }
        }
        Mode::Heuristic => {
            let mut improved = true;
            while improved && best > 0.0 {
                improved = false;
                for i in 0..n.saturating_sub(1) {
                    let mut sigma = best_sigma.clone();
                    sigma.swap(i, i + 1);
                    let v = score(&sigma)?;
                    if v < best {
                        best = v;
                        best_sigma = sigma;
                        improved = true;
                    }
                }
            }
        }
    }
    Ok(CutDistanceReport {
        value: best,
        permutation: best_sigma,
        blocks: n,
        mode,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiReport {
    /// Cut norm of `w chi` over sets that are unions of blocks; a lower bound.
    pub lower: f64,
    /// Cut norm of the strictly upper block part plus the L1 mass of the
    /// diagonal triangles; an upper bound.
    pub upper: f64,
    pub witness_s: SubsetMask,
    pub witness_t: SubsetMask,
    pub cut_norm_w: f64,
    /// `2 sqrt(||w||_cut)`.
    pub bound: f64,
    /// `||w||_inf <= 2` and `||w||_cut <= 1/2`.
    pub preconditions_met: bool,
    /// `lower <= bound`.
    pub holds: bool,
}

/// Brackets `||w chi||_cut` for `chi(x, y) = [x <= y]` and compares it with
/// `2 sqrt(||w||_cut)`.
///
/// Inside a diagonal block `w chi` is `a_ii` on the upper triangle, so a
/// union-of-blocks rectangle integrates it to `sum_{i in S, j in T} b_ij / n^2`
/// with `b_ij = a_ij` above the diagonal, `a_ii / 2` on it and `0` below.
pub fn chi_product(w: &StepGraphon, mode: Mode) -> Result<ChiReport> {
    let n = w.n();
    let mut b = vec![0.0; n * n];
    let mut upper_part = vec![0.0; n * n];
    for i in 0..n {
        b[i * n + i] = w.get(i, i) / 2.0;
        for j in i + 1..n {
            b[i * n + j] = w.get(i, j);
            upper_part[i * n + j] = w.get(i, j);
        }
    }
    let lower = Blocks { n, a: &b }.cut_norm(mode)?;
    let diag_mass: f64 = (0..n).map(|i| w.get(i, i).abs()).sum::<f64>() / (2 * n * n) as f64;
    let upper = match mode {
        Mode::Exact => Blocks { n, a: &upper_part }.exact()?.value + diag_mass,
        // The heuristic cut norm is itself only a lower estimate; fall back to
        // the L1 norm, which always dominates.
        Mode::Heuristic => {
            upper_part.iter().map(|v| v.abs()).sum::<f64>() / (n * n) as f64 + diag_mass
        }
    };
    let cut_w = cut_norm(w, mode)?.value;
    let bound = 2.0 * cut_w.sqrt();
    let sup = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ChiReport {
        lower: lower.value,
        upper: upper.max(lower.value),
        witness_s: lower.witness_s,
        witness_t: lower.witness_t,
        cut_norm_w: cut_w,
        bound,
        preconditions_met: sup <= 2.0 && cut_w <= 0.5,
        holds: lower.value <= bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub gamma1: GammaReport,
    pub gamma2: GammaReport,
    /// Blocks used for the `Gamma` computations (a common refinement).
    pub blocks: usize,
    /// `||w1 - w2||_cut`.
    pub distance: f64,
    /// `2 d + 2 sqrt(d)`.
    pub rhs: f64,
    /// Largest `|b1 - b2|` over band endpoints `b1`, `b2`.
    pub lhs_max: f64,
    /// Both graphons take values in `[0, 1]` and have cut norm at most 1/4.
    pub preconditions_met: bool,
    pub holds: bool,
}

/// Default cap on the refined block count used by [`continuity_check`].
pub const CONTINUITY_BLOCKS: usize = 16;

/// Evaluates `|Gamma(w1) - Gamma(w2)| <= 2 d + 2 sqrt(d)` with
/// `d = ||w1 - w2||_cut` at every pairing of the two `Gamma` band endpoints.
///
/// Both graphons are refined to the largest multiple of their common block
/// count not exceeding `max_blocks`; refinement leaves `Gamma` unchanged and
/// narrows the bands.
pub fn continuity_check(
    w1: &StepGraphon,
    w2: &StepGraphon,
    max_blocks: usize,
) -> Result<ContinuityReport> {
    let (a, b) = common_refinement(w1, w2);
    let distance = cut_norm(&a.difference(&b)?, Mode::Exact)?.value;
    let factor = (max_blocks / a.n()).max(1);
    let (a, b) = (a.refined(factor), b.refined(factor));
    let mode = if a.n() <= EXACT_SUBSET_LIMIT {
        Mode::Exact
    } else {
        Mode::Heuristic
    };
    let opts = SearchOptions {
        mode,
        ..SearchOptions::default()
    };
    let g1 = gamma(&a, &opts)?;
    let g2 = gamma(&b, &opts)?;
    let rhs = 2.0 * distance + 2.0 * distance.sqrt();
    let mut lhs_max = 0.0f64;
    // Equal functions have equal Gamma, whatever the band width.
    if a != b {
        for x in [g1.lower, g1.upper] {
            for y in [g2.lower, g2.upper] {
                lhs_max = lhs_max.max((x - y).abs());
            }
        }
    }
    let fits = |w: &StepGraphon| -> Result<bool> {
        Ok(w.is_unit_valued() && cut_norm(w, Mode::Exact)?.value <= 0.25)
    };
    Ok(ContinuityReport {
        blocks: a.n(),
        preconditions_met: fits(w1)? && fits(w2)?,
        holds: lhs_max <= rhs,
        gamma1: g1,
        gamma2: g2,
        distance,
        rhs,
        lhs_max,
    })
}
