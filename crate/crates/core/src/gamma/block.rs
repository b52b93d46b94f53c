//! `g_w`, `Gamma(w, A)`, `Gamma(w)` and `Gamma~(w)` for step graphons.
//!
//! Values that are dyadic rationals are handled in exact arithmetic after a
//! common power-of-two rescaling; other inputs fall back to `f64`.

use num_traits::CheckedMul;
use serde::Serialize;

use super::kernel::{positive_sum, ramp_sum_exact, ramp_sum_f64, PairProfile};
use super::search::{better, exhaustive_below, flip_ascent, random_starts};
use super::star::{next_permutation, SearchOptions, EXACT_SUBSET_LIMIT};
use crate::error::{guard, Error, Result};
use crate::exact::{serde_opt_rational, to_f64, Rational};
use crate::graph::SubsetMask;
use crate::graphon::{DyadicLevels, StepGraphon};
use crate::Mode;

/// Largest block count for exhaustive block-permutation search.
pub const EXACT_PERMUTATION_LIMIT: usize = 8;

/// Tolerance used by [`diagonally_increasing_check`].
pub const DI_TOL: f64 = 1e-12;

/// Slack when comparing floating candidates before exact re-evaluation.
const FLOAT_SLACK: f64 = 1e-9;

/// A real value, with its exact rational form when one is available.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaValue {
    pub value: f64,
    #[serde(serialize_with = "serde_opt_rational::serialize")]
    pub exact: Option<Rational>,
}

impl GammaValue {
    fn from_exact(q: Rational) -> Self {
        GammaValue {
            value: to_f64(&q),
            exact: Some(q),
        }
    }

    fn from_f64(value: f64) -> Self {
        GammaValue { value, exact: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub estimate: f64,
    #[serde(serialize_with = "serde_opt_rational::serialize")]
    pub estimate_exact: Option<Rational>,
    pub lower: f64,
    pub upper: f64,
    pub best_subset: SubsetMask,
    pub band_source: String,
    pub mode: Mode,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaTildeReport {
    /// Smallest `Gamma` estimate found over the searched block permutations.
    pub estimate: f64,
    #[serde(serialize_with = "serde_opt_rational::serialize")]
    pub estimate_exact: Option<Rational>,
    pub permutation: Vec<usize>,
    pub mode: Mode,
    /// Always true: block permutations are a subclass of all relabelings.
    pub upper_bound: bool,
}

struct Levels<'a> {
    w: &'a StepGraphon,
    dyadic: Option<DyadicLevels>,
}

impl<'a> Levels<'a> {
    fn new(w: &'a StepGraphon) -> Self {
        Levels {
            w,
            dyadic: w.dyadic_levels(),
        }
    }

    fn n(&self) -> usize {
        self.w.n()
    }

    /// `1 / (n^3 scale)` as a rational.
    fn denominator(&self, d: &DyadicLevels) -> Option<Rational> {
        let n = d.n as i128;
        let den = n
            .checked_mul(n)?
            .checked_mul(n)?
            .checked_mul(d.scale as i128)?;
        Some(Rational::new(1, den))
    }

    fn cube(&self) -> f64 {
        (self.n() as f64).powi(3)
    }

    fn ramp_exact(&self, profile: &mut PairProfile<i64>, members: &[bool]) -> Option<Rational> {
        let d = self.dyadic.as_ref()?;
        let sum = ramp_sum_exact(profile, &d.scaled, members)?;
        sum.checked_mul(&self.denominator(d)?)
    }

    fn positive_exact(&self, profile: &mut PairProfile<i64>, members: &[bool]) -> Option<Rational> {
        let d = self.dyadic.as_ref()?;
        let sum = positive_sum(profile, &d.scaled, members);
        Rational::from_integer(sum as i128).checked_mul(&self.denominator(d)?)
    }
}

fn check_subset(w: &StepGraphon, a: &SubsetMask) -> Result<()> {
    if a.universe() != w.n() {
        return Err(Error::InvalidSubset(format!(
            "subset over {} blocks for a {}-block graphon",
            a.universe(),
            w.n()
        )));
    }
    Ok(())
}

/// `g_w` at the block-aligned set `a`.
pub fn g_w(w: &StepGraphon, a: &SubsetMask) -> Result<GammaValue> {
    check_subset(w, a)?;
    let lv = Levels::new(w);
    let n = w.n();
    if let Some(q) = lv.positive_exact(&mut PairProfile::new(n), a.as_bools()) {
        return Ok(GammaValue::from_exact(q));
    }
    let v = positive_sum(&mut PairProfile::new(n), w.values(), a.as_bools());
    Ok(GammaValue::from_f64(v / lv.cube()))
}

/// `Gamma(w, A)` for a block-aligned set `A`, in closed form.
pub fn gamma_block_exact(w: &StepGraphon, a: &SubsetMask) -> Result<GammaValue> {
    check_subset(w, a)?;
    let lv = Levels::new(w);
    let n = w.n();
    if let Some(q) = lv.ramp_exact(&mut PairProfile::new(n), a.as_bools()) {
        return Ok(GammaValue::from_exact(q));
    }
    let v = ramp_sum_f64(&mut PairProfile::new(n), w.values(), a.as_bools());
    Ok(GammaValue::from_f64(v / lv.cube()))
}

/// Result of maximizing a block-subset objective.
struct Maximum {
    value: GammaValue,
    subset: Vec<bool>,
}

/// Maximizes a subset objective given in floating and (optionally) exact
/// form. The floating pass selects near-optimal candidates, which are then
/// compared exactly.
fn maximize(
    n: usize,
    mode: Mode,
    opts: &SearchOptions,
    mut float: impl FnMut(&[bool]) -> f64,
    mut exact: impl FnMut(&[bool]) -> Option<Rational>,
) -> Result<Maximum> {
    let candidates: Vec<Vec<bool>> = match mode {
        Mode::Exact => {
            guard("exact block-subset enumeration", n, EXACT_SUBSET_LIMIT)?;
            let values: Vec<f64> = (0u64..1 << n)
                .map(|bits| float(SubsetMask::from_bits(n, bits).as_bools()))
                .collect();
            let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let slack = FLOAT_SLACK * top.abs().max(1.0);
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v >= top - slack)
                .map(|(bits, _)| SubsetMask::from_bits(n, bits as u64).as_bools().to_vec())
                .collect()
        }
        Mode::Heuristic => {
            let mut starts = random_starts(n, opts.restarts, opts.seed);
            for k in 0..n {
                let mut s = vec![false; n];
                s[k] = true;
                starts.push(s);
            }
            vec![flip_ascent(&starts, &mut float).1]
        }
    };
    let mut best: Option<(Option<Rational>, f64, Vec<bool>)> = None;
    for set in candidates {
        let q = exact(&set);
        let v = float(&set);
        let replace = match &best {
            None => true,
            Some((Some(bq), _, bs)) if q.is_some() => {
                let q = q.as_ref().unwrap();
                q > bq || (q == bq && crate::graph::lex_cmp(&set, bs).is_lt())
            }
            Some((_, bv, bs)) => better(&v, &set, bv, bs),
        };
        if replace {
            best = Some((q, v, set));
        }
    }
    let (q, v, subset) = best.expect("candidate list is non-empty");
    let value = match q {
        Some(q) => GammaValue::from_exact(q),
        None => GammaValue::from_f64(v),
    };
    Ok(Maximum { value, subset })
}

/// `max_A g_w(A)` over block-aligned `A`, with a maximizer.
pub fn max_g_w(w: &StepGraphon, opts: &SearchOptions) -> Result<(GammaValue, SubsetMask)> {
    let lv = Levels::new(w);
    let n = w.n();
    let mut pf = PairProfile::new(n);
    let mut pi = PairProfile::new(n);
    let cube = lv.cube();
    let m = maximize(
        n,
        opts.mode,
        opts,
        |s| positive_sum(&mut pf, w.values(), s) / cube,
        |s| lv.positive_exact(&mut pi, s),
    )?;
    Ok((m.value, SubsetMask::from_bools(m.subset)))
}

/// `max_A Gamma(w, A)` over block-aligned `A`, with the band that contains
/// the supremum over all measurable `A`.
pub fn gamma(w: &StepGraphon, opts: &SearchOptions) -> Result<GammaReport> {
    let lv = Levels::new(w);
    let n = w.n();
    let cube = lv.cube();
    let mut pf = PairProfile::new(n);
    let mut pi = PairProfile::new(n);
    let best = maximize(
        n,
        opts.mode,
        opts,
        |s| ramp_sum_f64(&mut pf, w.values(), s) / cube,
        |s| lv.ramp_exact(&mut pi, s),
    )?;
    let estimate = best.value.value;
    let c = w.bound();
    let coarse = estimate + 4.0 * c / n as f64;
    let (upper, band_source) = match opts.mode {
        Mode::Exact => {
            let (gmax, _) = max_g_w(w, opts)?;
            let fine = gmax.value + diagonal_excess(w);
            if fine < coarse {
                (
                    fine.max(estimate),
                    "exact block enumeration; upper = max g_w + diagonal excess".to_string(),
                )
            } else {
                (coarse, "exact block enumeration; upper = estimate + 4c/n".to_string())
            }
        }
        Mode::Heuristic => (
            coarse,
            "heuristic block search; lower is a lower bound only, upper = estimate + 4c/n is not certified"
                .to_string(),
        ),
    };
    Ok(GammaReport {
        estimate,
        estimate_exact: best.value.exact,
        lower: estimate,
        upper,
        best_subset: SubsetMask::from_bools(best.subset),
        band_source,
        mode: opts.mode,
    })
}

/// `(1/n^3) sum_{i<j} ([a_ij - a_ii]_+ + [a_ji - a_jj]_+)`: the most the
/// partial diagonal blocks of a measurable set can add on top of `g_w`.
pub fn diagonal_excess(w: &StepGraphon) -> f64 {
    let n = w.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += (w.get(i, j) - w.get(i, i)).max(0.0) + (w.get(j, i) - w.get(j, j)).max(0.0);
        }
    }
    total / (n as f64).powi(3)
}

/// Whether every row is non-increasing moving away from the diagonal.
pub fn diagonally_increasing_check(w: &StepGraphon) -> bool {
    let n = w.n();
    (0..n).all(|i| {
        (i + 1..n).all(|j| w.get(i, j) <= w.get(i, j - 1) + DI_TOL)
            && (0..i).all(|j| w.get(i, j) <= w.get(i, j + 1) + DI_TOL)
    })
}

/// Smallest `Gamma` estimate over block permutations of `w`.
pub fn gamma_tilde(w: &StepGraphon, opts: &SearchOptions) -> Result<GammaTildeReport> {
    let n = w.n();
    let inner_opts = SearchOptions {
        mode: if n <= EXACT_SUBSET_LIMIT {
            Mode::Exact
        } else {
            Mode::Heuristic
        },
        ..opts.clone()
    };
    let score = |sigma: &[usize], cutoff: Option<f64>| -> Option<f64> {
        let ws = w.permuted(sigma);
        let cube = (n as f64).powi(3);
        let mut pf = PairProfile::new(n);
        if inner_opts.mode == Mode::Exact {
            exhaustive_below(n, cutoff.as_ref(), &[], |s| {
                ramp_sum_f64(&mut pf, ws.values(), s) / cube
            })
            .map(|(v, _)| v)
        } else {
            gamma(&ws, &inner_opts).ok().map(|r| r.estimate)
        }
    };
    let mut best_sigma: Vec<usize> = (0..n).collect();
    let mut best = score(&best_sigma, None).expect("no cutoff");
    match opts.mode {
        Mode::Exact => {
            guard(
                "exact block-permutation enumeration",
                n,
                EXACT_PERMUTATION_LIMIT,
            )?;
            let mut sigma = best_sigma.clone();
            while best > 0.0 && next_permutation(&mut sigma) {
                if let Some(v) = score(&sigma, Some(best)) {
                    if v < best {
                        best = v;
                        best_sigma = sigma.clone();
                    }
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
                    if let Some(v) = score(&sigma, Some(best)) {
                        if v < best {
                            best = v;
                            best_sigma = sigma;
                            improved = true;
                        }
                    }
                }
            }
        }
    }
    let report = gamma(&w.permuted(&best_sigma), &inner_opts)?;
    Ok(GammaTildeReport {
        estimate: report.estimate,
        estimate_exact: report.estimate_exact,
        permutation: best_sigma,
        mode: opts.mode,
        upper_bound: true,
    })
}
