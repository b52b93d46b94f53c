//! Uniform linear embeddings of 0/1 diagonally increasing graphons given by
//! a boundary `r`: a map `pi` into the line with `w(x, y) = 1` when
//! `|pi(x) - pi(y)| < 1` and `w(x, y) = 0` when it exceeds 1.
//!
//! Existence is decided by the fixed points of `r` and its generalized
//! inverse `l`. The map is assembled from chains of anchors `a_{i+1} = r(a_i)`
//! (or `l(a_i)`) on which `pi` steps by exactly one.

use serde::Serialize;

use crate::boundary::BoundarySpec;
use crate::error::{Error, Result};

/// Anchor chains stop once consecutive anchors are closer than this.
pub const ANCHOR_EPS: f64 = 1e-9;
/// Hard cap on the number of anchors in one chain.
pub const MAX_ANCHORS: usize = 10_000;
/// Tolerance for deciding `r(x) = x` at breakpoints.
const FIXED_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointSets {
    /// Fixed points of `l` in `(0, 1]`.
    pub l: Vec<f64>,
    /// Fixed points of `r` in `[0, 1)`.
    pub r: Vec<f64>,
    /// `r` (equivalently `l`) is strictly increasing wherever its value lies
    /// strictly between 0 and 1.
    pub consistent: bool,
    /// Intervals on which `r` is the identity; non-empty means uncountably
    /// many fixed points.
    pub identity_segments: Vec<(f64, f64)>,
}

impl FixedPointSets {
    pub fn infinite(&self) -> bool {
        !self.identity_segments.is_empty()
    }

    fn total(&self) -> usize {
        self.l.len() + self.r.len()
    }
}

/// Solves `r(z) = z` segment by segment. Since `r(x) - x >= 0` is linear on
/// each segment, fixed points are breakpoints unless a whole segment is the
/// identity.
pub fn fixed_point_sets(b: &BoundarySpec) -> FixedPointSets {
    let xs = b.xs();
    let rs = b.rs();
    let on_diag = |k: usize| (rs[k] - xs[k]).abs() <= FIXED_TOL;
    let mut identity_segments = Vec::new();
    let mut consistent = true;
    for k in 0..xs.len() - 1 {
        if on_diag(k) && on_diag(k + 1) {
            identity_segments.push((xs[k], xs[k + 1]));
        }
        let flat = rs[k] == rs[k + 1];
        if flat && rs[k] > 0.0 && rs[k] < 1.0 {
            consistent = false;
        }
    }
    let mut r = Vec::new();
    let mut l = Vec::new();
    for k in 0..xs.len() {
        if !on_diag(k) {
            continue;
        }
        let z = xs[k];
        if z < 1.0 {
            r.push(z);
        }
        // z in (0, 1] is a fixed point of l unless r is already at z
        // somewhere to its left, i.e. the segment ending at z is flat.
        if z > 0.0 && rs[k - 1] < rs[k] {
            l.push(z);
        }
    }
    FixedPointSets {
        l,
        r,
        consistent,
        identity_segments,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// No fixed point except possibly `1` in `L`: one chain up from 0.
    Case1,
    /// `R = {0}`, `L` empty: one chain down from 1.
    Case2,
    /// `L = R = {a}` with `0 < a < 1`: chains on both sides of `a`.
    Case3,
    /// `L = {1}`, `R = {0}`: two chains glued at 1/2.
    Case4,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformDecision {
    pub exists: bool,
    /// An increasing uniform embedding exists.
    pub increasing_available: bool,
    /// A bounded uniform embedding exists.
    pub bounded: bool,
    pub case_tag: Option<Case>,
    pub fixed_points: FixedPointSets,
}

fn consistent_sets(b: &BoundarySpec) -> Result<FixedPointSets> {
    let fp = fixed_point_sets(b);
    if !fp.consistent {
        return Err(Error::NotConsistent(
            "r is constant on a segment where its value lies strictly between 0 and 1".into(),
        ));
    }
    if fp.infinite() {
        return Err(Error::NotConsistent(format!(
            "r equals the identity on {:?}, giving uncountably many fixed points",
            fp.identity_segments
        )));
    }
    Ok(fp)
}

/// Decides whether `b` admits a uniform linear embedding.
pub fn decide_uniform_embedding(b: &BoundarySpec) -> Result<UniformDecision> {
    let fp = consistent_sets(b)?;
    let exists = fp.total() <= 2;
    let edge_only = fp.l.iter().all(|&z| z == 1.0) && fp.r.iter().all(|&z| z == 0.0);
    let case_tag = exists.then(|| {
        let interior = fp.r.iter().any(|&z| z > 0.0);
        let zero_in_r = fp.r.contains(&0.0);
        let one_in_l = fp.l.contains(&1.0);
        match (interior, zero_in_r, one_in_l) {
            (true, _, _) => Case::Case3,
            (false, true, true) => Case::Case4,
            (false, true, false) => Case::Case2,
            (false, false, _) => Case::Case1,
        }
    });
    Ok(UniformDecision {
        exists,
        increasing_available: exists && edge_only,
        bounded: exists && fp.total() == 0,
        case_tag,
        fixed_points: fp,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Anchors increase, `a_{i+1} = r(a_i)`.
    Up,
    /// Anchors decrease, `a_{i+1} = l(a_i)`.
    Down,
}

/// One piece of `pi`: `pi(a_i) = base + step * i`, linear between `a_0` and
/// `a_1`, and `pi(x) = pi(back(x)) + step` deeper in, where `back` is `l` for
/// upward chains and `r` for downward ones.
#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    pub direction: Direction,
    pub anchors: Vec<f64>,
    pub base: f64,
    pub step: f64,
    /// The chain stopped short of its limit point.
    pub truncated: bool,
}

impl Chain {
    fn build(b: &BoundarySpec, start: f64, direction: Direction, base: f64, step: f64) -> Chain {
        let mut anchors = vec![start];
        let mut truncated = false;
        loop {
            let cur = *anchors.last().unwrap();
            let next = match direction {
                Direction::Up => b.r(cur),
                Direction::Down => b.l(cur),
            };
            let gap = (next - cur).abs();
            if gap == 0.0 {
                truncated = anchors.len() < 2;
                break;
            }
            anchors.push(next);
            let done = match direction {
                Direction::Up => next >= 1.0,
                Direction::Down => next <= 0.0,
            };
            if done {
                break;
            }
            if gap < ANCHOR_EPS || anchors.len() >= MAX_ANCHORS {
                truncated = true;
                break;
            }
        }
        Chain {
            direction,
            anchors,
            base,
            step,
            truncated,
        }
    }

    /// Closed range of `x` covered by the anchors.
    pub fn domain(&self) -> (f64, f64) {
        let first = self.anchors[0];
        let last = *self.anchors.last().unwrap();
        (first.min(last), first.max(last))
    }

    /// `pi(x)`, or `None` outside the materialized anchors.
    pub fn eval(&self, b: &BoundarySpec, x: f64) -> Option<f64> {
        let a = &self.anchors;
        if a.len() < 2 {
            return (x == a[0]).then_some(self.base);
        }
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return None;
        }
        // Depth i: x lies between a_i and a_{i+1}, the end nearer a_0 open.
        let depth = match self.direction {
            Direction::Up => a.partition_point(|&t| t < x).saturating_sub(1),
            Direction::Down => a.partition_point(|&t| t > x).saturating_sub(1),
        };
        let mut y = x;
        for _ in 0..depth {
            y = match self.direction {
                Direction::Up => b.l(y),
                Direction::Down => b.r(y),
            };
        }
        let (a0, a1) = (a[0], a[1]);
        let frac = ((y - a0) / (a1 - a0)).clamp(0.0, 1.0);
        Some(self.base + self.step * (frac + depth as f64))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformEmbedding {
    pub case_tag: Case,
    /// Chains in evaluation order; see [`UniformEmbedding::eval`].
    pub chains: Vec<Chain>,
    /// Isolated point with a prescribed value.
    pub point: Option<(f64, f64)>,
    /// Points below this go to `chains[1]` when there are two chains.
    pub split: Option<f64>,
    pub increasing: bool,
    pub bounded: bool,
    pub truncated: bool,
}

impl UniformEmbedding {
    /// `pi(x)`, or [`Error::OutOfRange`] beyond the materialized anchors.
    pub fn eval(&self, b: &BoundarySpec, x: f64) -> Result<f64> {
        if let Some((p, v)) = self.point {
            if x == p {
                return Ok(v);
            }
        }
        let chain = match (self.split, self.chains.len()) {
            (Some(s), 2) if x < s => &self.chains[1],
            (Some(_), 2) => &self.chains[0],
            _ => {
                // Case 3: upward chain below the fixed point, downward above.
                let p = self.point.map(|(p, _)| p);
                match p {
                    Some(p) if x > p => &self.chains[1],
                    _ => &self.chains[0],
                }
            }
        };
        chain.eval(b, x).ok_or(Error::OutOfRange(x))
    }

    /// Largest `|pi|` over the anchors.
    pub fn max_abs_anchor_value(&self) -> f64 {
        self.chains
            .iter()
            .map(|c| (c.base.abs() + c.step.abs() * (c.anchors.len() - 1) as f64).max(c.base.abs()))
            .fold(self.point.map_or(0.0, |(_, v)| v.abs()), f64::max)
    }
}

/// Builds `pi` following the case split of the existence proof.
pub fn build_embedding(b: &BoundarySpec) -> Result<UniformEmbedding> {
    let d = decide_uniform_embedding(b)?;
    let Some(case) = d.case_tag else {
        return Err(Error::Precondition(format!(
            "no uniform embedding: {} fixed points of l and {} of r",
            d.fixed_points.l.len(),
            d.fixed_points.r.len()
        )));
    };
    let (chains, point, split) = match case {
        Case::Case1 => (
            vec![Chain::build(b, 0.0, Direction::Up, 0.0, 1.0)],
            None,
            None,
        ),
        Case::Case2 => (
            vec![Chain::build(b, 1.0, Direction::Down, 0.0, -1.0)],
            None,
            None,
        ),
        Case::Case3 => {
            let a = d.fixed_points.r[0];
            (
                vec![
                    Chain::build(b, 0.0, Direction::Up, 0.0, 1.0),
                    Chain::build(b, 1.0, Direction::Down, -2.0, -1.0),
                ],
                Some((a, -1.0)),
                None,
            )
        }
        Case::Case4 => {
            let x1 = b.r(0.5);
            (
                vec![
                    Chain::build(b, 0.5, Direction::Up, 0.0, 1.0),
                    Chain::build(b, x1, Direction::Down, 1.0, -1.0),
                ],
                None,
                Some(0.5),
            )
        }
    };
    let truncated = chains.iter().any(|c| c.truncated);
    Ok(UniformEmbedding {
        case_tag: case,
        chains,
        point,
        split,
        increasing: d.increasing_available,
        bounded: d.bounded,
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub grid: usize,
    pub margin: f64,
    /// Pairs on which both implications were tested.
    pub checked: usize,
    /// Pairs skipped because the distance is within `margin` of 1.
    pub skipped_near_threshold: usize,
    /// Grid points where `pi` was not available.
    pub out_of_range_points: usize,
    pub violations: usize,
    /// Smallest `|d - 1|` among checked pairs.
    pub min_slack: f64,
}

/// Checks `d < 1 => w = 1` and `d > 1 => w = 0` on the midpoint grid of
/// `[0, 1]^2`, with `d = |pi(x) - pi(y)|`.
pub fn verify_embedding(
    b: &BoundarySpec,
    pi: impl Fn(f64) -> Option<f64>,
    m: usize,
    margin: f64,
) -> VerifyReport {
    let pts: Vec<(f64, Option<f64>)> = (0..m)
        .map(|p| {
            let x = (p as f64 + 0.5) / m as f64;
            (x, pi(x))
        })
        .collect();
    let mut report = VerifyReport {
        grid: m,
        margin,
        checked: 0,
        skipped_near_threshold: 0,
        out_of_range_points: pts.iter().filter(|(_, v)| v.is_none()).count(),
        violations: 0,
        min_slack: f64::INFINITY,
    };
    for (p, &(x, px)) in pts.iter().enumerate() {
        let Some(px) = px else { continue };
        for &(y, py) in &pts[p + 1..] {
            let Some(py) = py else { continue };
            let d = (px - py).abs();
            if (d - 1.0).abs() < margin {
                report.skipped_near_threshold += 1;
                continue;
            }
            report.checked += 1;
            report.min_slack = report.min_slack.min((d - 1.0).abs());
            if (d < 1.0) != b.contains(x, y) {
                report.violations += 1;
            }
        }
    }
    report
}

/// Convenience wrapper verifying a constructed embedding.
pub fn verify_built(b: &BoundarySpec, e: &UniformEmbedding, m: usize, margin: f64) -> VerifyReport {
    verify_embedding(b, |x| e.eval(b, x).ok(), m, margin)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockingSequence {
    pub point: f64,
    /// `"L"` for a sequence rising to the point through `r`, `"R"` for one
    /// falling to it through `l`.
    pub side: &'static str,
    pub terms: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub sequences: Vec<BlockingSequence>,
    pub identity_segments: Vec<(f64, f64)>,
    pub statement: String,
}

/// Number of terms reported per blocking sequence.
const REFUTATION_TERMS: usize = 12;

/// Certificate that no uniform embedding exists.
///
/// Every isolated fixed point `z` is the limit of a sequence `s_{k+1} = r(s_k)`
/// from below (or `l` from above) whose consecutive terms are adjacent and
/// whose non-consecutive terms need not be, so an embedding has to carry the
/// sequence off to infinity within one half-line. Sequences of different
/// fixed points are disjoint and start in disjoint thirds of the gaps
/// between fixed points.
pub fn refute_embedding_witness(b: &BoundarySpec) -> Result<Refutation> {
    let fp = fixed_point_sets(b);
    if !fp.consistent {
        return Err(Error::NotConsistent(
            "r is constant on a segment where its value lies strictly between 0 and 1".into(),
        ));
    }
    if fp.infinite() {
        return Ok(Refutation {
            sequences: Vec::new(),
            identity_segments: fp.identity_segments.clone(),
            statement: format!(
                "r is the identity on {:?}; every point there is a fixed point, and an embedding \
                 can separate only countably many of them onto their own half-lines",
                fp.identity_segments
            ),
        });
    }
    if fp.total() <= 2 {
        return Err(Error::Precondition(format!(
            "a uniform embedding exists ({} fixed points of l, {} of r)",
            fp.l.len(),
            fp.r.len()
        )));
    }
    let mut points: Vec<f64> = fp.l.iter().chain(&fp.r).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut sequences = Vec::new();
    for (k, &z) in points.iter().enumerate() {
        let below = if k == 0 { 0.0 } else { points[k - 1] };
        let above = points.get(k + 1).copied().unwrap_or(1.0);
        let (side, start, f): (&'static str, f64, Box<dyn Fn(f64) -> f64>) =
            if fp.l.contains(&z) && z > below {
                ("L", below + 2.0 * (z - below) / 3.0, Box::new(|x| b.r(x)))
            } else {
                ("R", z + (above - z) / 3.0, Box::new(|x| b.l(x)))
            };
        let mut terms = vec![start];
        while terms.len() < REFUTATION_TERMS {
            let next = f(*terms.last().unwrap());
            if next == *terms.last().unwrap() {
                break;
            }
            terms.push(next);
        }
        sequences.push(BlockingSequence {
            point: z,
            side,
            terms,
        });
    }
    let statement = format!(
        "{} fixed points each need a half-line of their own, but the line has only two",
        sequences.len()
    );
    Ok(Refutation {
        sequences,
        identity_segments: Vec::new(),
        statement,
    })
}

/// `pi(x) = log2(1/4 - x/2)` below 1/2, `0` at 1/2 and `-log2(x/2 - 1/4)`
/// above: a closed-form uniform embedding of [`crate::boundary::examples::two_sided`].
pub fn two_sided_closed_form(x: f64) -> Option<f64> {
    if !(0.0..=1.0).contains(&x) {
        return None;
    }
    Some(if x < 0.5 {
        (0.25 - x / 2.0).log2()
    } else if x == 0.5 {
        0.0
    } else {
        -(x / 2.0 - 0.25).log2()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::examples;

    #[test]
    fn fixed_points_of_examples() {
        let fp = fixed_point_sets(&examples::two_sided());
        assert_eq!((fp.l.clone(), fp.r.clone()), (vec![0.5], vec![0.5]));
        assert!(fp.consistent && !fp.infinite());
        let fp = fixed_point_sets(&examples::half_shift());
        assert!(fp.l.is_empty() && fp.r.is_empty());
        let fp = fixed_point_sets(&examples::both_ends());
        assert_eq!((fp.l.clone(), fp.r.clone()), (vec![1.0], vec![0.0]));
        let b = BoundarySpec::new(&[(0.0, 0.2), (0.3, 0.3), (0.4, 0.4), (0.5, 1.0), (1.0, 1.0)])
            .unwrap();
        assert_eq!(fixed_point_sets(&b).identity_segments, vec![(0.3, 0.4)]);
        assert!(decide_uniform_embedding(&b).is_err());
    }

    #[test]
    fn flat_interior_segment_is_inconsistent() {
        let b = BoundarySpec::new(&[(0.0, 0.6), (0.4, 0.6), (0.6, 1.0), (1.0, 1.0)]).unwrap();
        assert!(!fixed_point_sets(&b).consistent);
        assert!(matches!(
            decide_uniform_embedding(&b),
            Err(Error::NotConsistent(_))
        ));
    }

    #[test]
    fn decisions() {
        let d = decide_uniform_embedding(&examples::two_sided()).unwrap();
        assert!(d.exists && !d.increasing_available && !d.bounded);
        assert_eq!(d.case_tag, Some(Case::Case3));
        let d = decide_uniform_embedding(&examples::half_shift()).unwrap();
        assert!(d.exists && d.increasing_available && d.bounded);
        assert_eq!(d.case_tag, Some(Case::Case1));
        let d = decide_uniform_embedding(&examples::both_ends()).unwrap();
        assert!(d.exists && !d.bounded);
        assert_eq!(d.case_tag, Some(Case::Case4));
        let d = decide_uniform_embedding(&examples::three_fixed_points()).unwrap();
        assert!(!d.exists && d.case_tag.is_none());
    }

    #[test]
    fn half_shift_chain_by_hand() {
        let b = examples::half_shift();
        let e = build_embedding(&b).unwrap();
        assert_eq!(e.chains[0].anchors, vec![0.0, 0.5, 1.0]);
        assert_eq!(e.eval(&b, 0.0).unwrap(), 0.0);
        assert_eq!(e.eval(&b, 0.5).unwrap(), 1.0);
        assert_eq!(e.eval(&b, 1.0).unwrap(), 2.0);
        assert_eq!(e.eval(&b, 0.75).unwrap(), 1.5);
        assert!(!e.truncated);
    }

    #[test]
    fn full_graphon_gives_identity() {
        let b = examples::full();
        let e = build_embedding(&b).unwrap();
        for x in [0.0, 0.3, 0.9, 1.0] {
            assert_eq!(e.eval(&b, x).unwrap(), x);
        }
    }

    #[test]
    fn every_case_verifies() {
        let reflected =
            BoundarySpec::new(&[(0.0, 0.0), (0.25, 0.5), (0.5, 1.0), (1.0, 1.0)]).unwrap();
        let one_in_l = BoundarySpec::new(&[(0.0, 0.5), (1.0, 1.0)]).unwrap();
        for (b, case) in [
            (examples::half_shift(), Case::Case1),
            (one_in_l, Case::Case1),
            (reflected, Case::Case2),
            (examples::two_sided(), Case::Case3),
            (examples::both_ends(), Case::Case4),
        ] {
            let e = build_embedding(&b).unwrap();
            assert_eq!(e.case_tag, case);
            let r = verify_built(&b, &e, 400, 1e-6);
            assert_eq!(r.violations, 0, "{case:?}: {r:?}");
            assert!(r.checked > 50_000, "{case:?}: {r:?}");
        }
    }

    #[test]
    fn closed_form_example() {
        let b = examples::two_sided();
        assert_eq!(two_sided_closed_form(0.0), Some(-2.0));
        assert_eq!(two_sided_closed_form(1.0), Some(2.0));
        assert_eq!(two_sided_closed_form(0.5), Some(0.0));
        let r = verify_embedding(&b, two_sided_closed_form, 400, 1e-6);
        assert_eq!(r.violations, 0);
        assert_eq!(r.out_of_range_points, 0);
    }

    #[test]
    fn corrupted_map_is_caught() {
        let b = examples::half_shift();
        let e = build_embedding(&b).unwrap();
        let bad = |x: f64| {
            e.eval(&b, x)
                .ok()
                .map(|v| if x > 0.5 { v + 0.5 } else { v })
        };
        assert!(verify_embedding(&b, bad, 200, 1e-6).violations > 0);
    }

    #[test]
    fn refutations() {
        let r = refute_embedding_witness(&examples::three_fixed_points()).unwrap();
        assert_eq!(r.sequences.len(), 3);
        let pts: Vec<f64> = r.sequences.iter().map(|s| s.point).collect();
        assert_eq!(pts, vec![0.25, 0.5, 0.75]);
        for s in &r.sequences {
            assert!(s.terms.len() >= 3);
            let last = *s.terms.last().unwrap();
            assert!((last - s.point).abs() < (s.terms[0] - s.point).abs());
        }
        // Disjoint ranges.
        let mut ranges: Vec<(f64, f64)> = r
            .sequences
            .iter()
            .map(|s| {
                let lo = s.terms.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = s.terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect();
        ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(ranges.windows(2).all(|w| w[0].1 < w[1].0));
        assert!(matches!(
            refute_embedding_witness(&examples::two_sided()),
            Err(Error::Precondition(_))
        ));
        let ident =
            BoundarySpec::new(&[(0.0, 0.2), (0.3, 0.3), (0.4, 0.4), (0.5, 1.0), (1.0, 1.0)])
                .unwrap();
        let r = refute_embedding_witness(&ident).unwrap();
        assert!(r.statement.contains("countably"));
    }

    /// Claims about the anchor chains of a Case 3 boundary.
    #[test]
    fn anchor_claims() {
        let b = examples::two_sided();
        let e = build_embedding(&b).unwrap();
        let fp = fixed_point_sets(&b);
        let a = fp.r[0];
        let up = &e.chains[0];
        // (i) the rising chain stays below a and is truncated next to it.
        assert!(up.anchors.iter().all(|&x| x < a));
        assert!(up.truncated);
        let last = *up.anchors.last().unwrap();
        assert!((b.l(last) - last).abs() < ANCHOR_EPS * 4.0 || (a - last) < 1e-8);
        // (ii) a chain that stops in finitely many steps does so at 0 or 1.
        let hs = build_embedding(&examples::half_shift()).unwrap();
        assert!((hs.chains[0].anchors.last().unwrap() - 1.0).abs() < 1e-12);
        // (iii) no fixed point of l strictly inside (0, a).
        assert!(fp.l.iter().all(|&z| !(0.0 < z && z < a)));
        // pi strictly increasing on the rising piece.
        let mut prev = f64::NEG_INFINITY;
        for k in 0..200 {
            let x = a * k as f64 / 200.0;
            let v = e.eval(&b, x).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn boundedness_matches_decision() {
        for b in [
            examples::half_shift(),
            examples::two_sided(),
            examples::both_ends(),
            examples::full(),
        ] {
            let e = build_embedding(&b).unwrap();
            let span = e.max_abs_anchor_value();
            assert_eq!(e.bounded, span < 10.0, "{b:?}");
        }
    }
}
