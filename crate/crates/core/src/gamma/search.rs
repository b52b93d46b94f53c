//! Maximization of subset functions: exhaustive enumeration and single-flip
//! coordinate ascent. Ties always go to the lexicographically smaller subset.

use std::cmp::Ordering as CmpOrdering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::lex_cmp;

/// Whether `(v, set)` beats `(best_v, best_set)`.
pub(crate) fn better<T: PartialOrd>(v: &T, set: &[bool], best_v: &T, best_set: &[bool]) -> bool {
    match v.partial_cmp(best_v) {
        Some(CmpOrdering::Greater) => true,
        Some(CmpOrdering::Equal) => lex_cmp(set, best_set) == CmpOrdering::Less,
        _ => false,
    }
}

/// Maximizes `f` over all `2^n` subsets. Callers enforce the size guard.
pub(crate) fn exhaustive<T: PartialOrd>(
    n: usize,
    mut f: impl FnMut(&[bool]) -> T,
) -> (T, Vec<bool>) {
    assert!(n < 63, "exhaustive subset search needs n < 63");
    let mut members = vec![false; n];
    let mut best_v = f(&members);
    let mut best_set = members.clone();
    for bits in 1u64..1u64 << n {
        for (k, m) in members.iter_mut().enumerate() {
            *m = bits >> k & 1 == 1;
        }
        let v = f(&members);
        if better(&v, &members, &best_v, &best_set) {
            best_v = v;
            best_set.copy_from_slice(&members);
        }
    }
    (best_v, best_set)
}

/// Like [`exhaustive`], but gives up (returning `None`) as soon as some
/// subset reaches `cutoff`. `warm` subsets are tried first.
pub(crate) fn exhaustive_below<T: PartialOrd + Clone>(
    n: usize,
    cutoff: Option<&T>,
    warm: &[Vec<bool>],
    mut f: impl FnMut(&[bool]) -> T,
) -> Option<(T, Vec<bool>)> {
    assert!(n < 63, "exhaustive subset search needs n < 63");
    let reached = |v: &T| cutoff.is_some_and(|c| v >= c);
    for w in warm {
        if reached(&f(w)) {
            return None;
        }
    }
    let mut members = vec![false; n];
    let mut best_v = f(&members);
    if reached(&best_v) {
        return None;
    }
    let mut best_set = members.clone();
    for bits in 1u64..1u64 << n {
        for (k, m) in members.iter_mut().enumerate() {
            *m = bits >> k & 1 == 1;
        }
        let v = f(&members);
        if reached(&v) {
            return None;
        }
        if better(&v, &members, &best_v, &best_set) {
            best_v = v;
            best_set.copy_from_slice(&members);
        }
    }
    Some((best_v, best_set))
}

/// First-improvement single-flip ascent from each start; returns the best
/// local optimum found.
pub(crate) fn flip_ascent<T: PartialOrd + Clone>(
    starts: &[Vec<bool>],
    mut f: impl FnMut(&[bool]) -> T,
) -> (T, Vec<bool>) {
    assert!(!starts.is_empty(), "flip ascent needs a start");
    let mut best: Option<(T, Vec<bool>)> = None;
    for start in starts {
        let mut cur = start.clone();
        let mut cur_v = f(&cur);
        loop {
            let mut improved = false;
            for k in 0..cur.len() {
                cur[k] = !cur[k];
                let v = f(&cur);
                if v > cur_v {
                    cur_v = v;
                    improved = true;
                } else {
                    cur[k] = !cur[k];
                }
            }
            if !improved {
                break;
            }
        }
        match &best {
            Some((bv, bs)) if !better(&cur_v, &cur, bv, bs) => {}
            _ => best = Some((cur_v, cur)),
        }
    }
    best.unwrap()
}

/// The full set followed by `restarts` seeded random subsets.
pub(crate) fn random_starts(n: usize, restarts: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x5ab5e7);
    let mut starts = vec![vec![true; n]];
    for _ in 0..restarts {
        starts.push((0..n).map(|_| rng.random_bool(0.5)).collect());
    }
    starts
}
