//! Per-block-pair decomposition shared by `Gamma*`, `g_w` and `Gamma(w, A)`.
//!
//! For a block-aligned set `A` and block pair `i < j`, the first bracketed
//! integrand of `Gamma(w, A)` is `(s1 + t d1) / n` for `t` in `[0, 1]`, where
//!
//! * `s1 = sum_{k < i, k in A} (a_kj - a_ki)` and `d1 = [i in A] (a_ij - a_ii)`;
//!
//! and the mirror integrand uses
//!
//! * `s2 = sum_{k > j, k in A} (a_ki - a_kj)` and `d2 = [j in A] (a_ji - a_jj)`.
//!
//! Then `g_w(A) = sum ([s1]_+ + [s2]_+) / n^3` and
//! `Gamma(w, A) = sum (J(s1, d1) + J(s2, d2)) / n^3` with
//! `J(s, d) = int_0^1 [s + t d]_+ dt`. For graphs, `a` is the adjacency
//! matrix in rank order and `n^3 Gamma*(G, <, A) = sum ([s1]_+ + [s2]_+)`.

use std::ops::{Add, Sub};

use num_traits::CheckedDiv;

use crate::exact::{checked_sum, Rational};

pub(crate) trait Level:
    Copy + Default + PartialOrd + Add<Output = Self> + Sub<Output = Self>
{
}
impl Level for i64 {}
impl Level for f64 {}

/// Reusable prefix/suffix buffers for one `n x n` level matrix.
pub(crate) struct PairProfile<V> {
    n: usize,
    /// `prefix[i * n + c] = sum_{k < i, k in A} a_kc`
    prefix: Vec<V>,
    /// `suffix[j * n + c] = sum_{k > j, k in A} a_kc`
    suffix: Vec<V>,
}

impl<V: Level> PairProfile<V> {
    pub fn new(n: usize) -> Self {
        PairProfile {
            n,
            prefix: vec![V::default(); n * n],
            suffix: vec![V::default(); n * n],
        }
    }

    /// Calls `f(i, j, s1, d1, s2, d2)` for every block pair `i < j`.
    pub fn for_each_pair(
        &mut self,
        a: &[V],
        members: &[bool],
        mut f: impl FnMut(usize, usize, V, V, V, V),
    ) {
        let n = self.n;
        debug_assert_eq!(a.len(), n * n);
        debug_assert_eq!(members.len(), n);
        if n == 0 {
            return;
        }
        let zero = V::default();
        for c in 0..n {
            self.prefix[c] = zero;
            self.suffix[(n - 1) * n + c] = zero;
        }
        for i in 1..n {
            let (done, rest) = self.prefix.split_at_mut(i * n);
            let prev = &done[(i - 1) * n..];
            let row = &a[(i - 1) * n..i * n];
            let add = members[i - 1];
            for c in 0..n {
                rest[c] = if add { prev[c] + row[c] } else { prev[c] };
            }
        }
        for j in (0..n - 1).rev() {
            let (head, tail) = self.suffix.split_at_mut((j + 1) * n);
            let next = &tail[..n];
            let row = &a[(j + 1) * n..(j + 2) * n];
            let add = members[j + 1];
            let cur = &mut head[j * n..];
            for c in 0..n {
                cur[c] = if add { next[c] + row[c] } else { next[c] };
            }
        }
        for i in 0..n {
            let p = &self.prefix[i * n..(i + 1) * n];
            let aii = a[i * n + i];
            for j in i + 1..n {
                let s1 = p[j] - p[i];
                let d1 = if members[i] { a[i * n + j] - aii } else { zero };
                let q = &self.suffix[j * n..(j + 1) * n];
                let s2 = q[i] - q[j];
                let d2 = if members[j] {
                    a[j * n + i] - a[j * n + j]
                } else {
                    zero
                };
                f(i, j, s1, d1, s2, d2);
            }
        }
    }
}

/// `sum ([s1]_+ + [s2]_+)` over block pairs.
pub(crate) fn positive_sum<V: Level>(profile: &mut PairProfile<V>, a: &[V], members: &[bool]) -> V {
    let zero = V::default();
    let mut acc = zero;
    profile.for_each_pair(a, members, |_, _, s1, _, s2, _| {
        if s1 > zero {
            acc = acc + s1;
        }
        if s2 > zero {
            acc = acc + s2;
        }
    });
    acc
}

/// `J(s, d) = int_0^1 [s + t d]_+ dt`.
pub(crate) fn ramp_f64(s: f64, d: f64) -> f64 {
    let (f0, f1) = (s, s + d);
    if f0 >= 0.0 && f1 >= 0.0 {
        0.5 * (f0 + f1)
    } else if f0 <= 0.0 && f1 <= 0.0 {
        0.0
    } else {
        let pos = f0.max(f1);
        pos * pos / (2.0 * d.abs())
    }
}

/// Exact accumulator for `sum 2 J(s, d)` with integer `s`, `d`: an integer
/// part plus fractional parts `m^2 / |d|` grouped by denominator.
#[derive(Default)]
pub(crate) struct ExactRamp {
    twice_int: i128,
    fractions: Vec<(i128, i128)>,
}

impl ExactRamp {
    pub fn add(&mut self, s: i64, d: i64) {
        let (f0, f1) = (s as i128, (s + d) as i128);
        if f0 >= 0 && f1 >= 0 {
            self.twice_int += f0 + f1;
        } else if f0 <= 0 && f1 <= 0 {
        } else {
            let pos = f0.max(f1);
            let den = (d as i128).abs();
            let num = pos * pos;
            match self.fractions.iter_mut().find(|(d, _)| *d == den) {
                Some((_, acc)) => *acc += num,
                None => self.fractions.push((den, num)),
            }
        }
    }

    /// `sum J` as an exact rational, or `None` on overflow.
    pub fn total(&self) -> Option<Rational> {
        let twice = checked_sum(
            std::iter::once((self.twice_int, 1))
                .chain(self.fractions.iter().map(|&(den, num)| (num, den))),
        )?;
        twice.checked_div(&Rational::from_integer(2))
    }
}

/// `sum (J(s1, d1) + J(s2, d2))` over block pairs, exactly.
pub(crate) fn ramp_sum_exact(
    profile: &mut PairProfile<i64>,
    a: &[i64],
    members: &[bool],
) -> Option<Rational> {
    let mut acc = ExactRamp::default();
    profile.for_each_pair(a, members, |_, _, s1, d1, s2, d2| {
        acc.add(s1, d1);
        acc.add(s2, d2);
    });
    acc.total()
}

pub(crate) fn ramp_sum_f64(profile: &mut PairProfile<f64>, a: &[f64], members: &[bool]) -> f64 {
    let mut acc = 0.0;
    profile.for_each_pair(a, members, |_, _, s1, d1, s2, d2| {
        acc += ramp_f64(s1, d1) + ramp_f64(s2, d2);
    });
    acc
}
