//! `Gamma*` for finite graphs: fixed subset, fixed ordering, and the minimum
//! over orderings.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::kernel::{positive_sum, PairProfile};
use super::search::{exhaustive, exhaustive_below, flip_ascent, random_starts};
use crate::error::{guard, Error, Result};
use crate::exact::{serde_rational, to_f64, Rational};
use crate::geometric::seriation;
use crate::graph::{Graph, Ordering, SubsetMask};
use crate::Mode;

/// Largest graph for exhaustive subset enumeration.
pub const EXACT_SUBSET_LIMIT: usize = 20;
/// Largest graph for exhaustive ordering enumeration.
pub const EXACT_ORDER_LIMIT: usize = 9;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Random starts for the flip-ascent inner maximizer.
    pub restarts: usize,
    /// Orderings evaluated by the heuristic outer local search.
    pub order_budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: Mode::Exact,
            seed: 0,
            restarts: 16,
            order_budget: 2000,
        }
    }
}

impl SearchOptions {
    pub fn heuristic(seed: u64) -> Self {
        SearchOptions {
            mode: Mode::Heuristic,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaStarReport {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub value: Rational,
    pub value_f64: f64,
    pub best_subset: SubsetMask,
    pub ordering: Ordering,
    pub mode: Mode,
    pub restarts_used: usize,
    /// Whether the inner maximum was taken over all subsets.
    pub subsets_exhaustive: bool,
    /// Whether the outer minimum was taken over all orderings.
    pub orderings_exhaustive: bool,
}

fn normalize(n: usize, numer: i64) -> Rational {
    let n = n as i128;
    Rational::new(numer as i128, (n * n * n).max(1))
}

/// `Gamma*(G, <, A)`.
pub fn gamma_star_fixed(g: &Graph, order: &Ordering, a: &SubsetMask) -> Result<Rational> {
    order.check_for(g)?;
    if a.universe() != g.n() {
        return Err(Error::InvalidSubset(format!(
            "subset over {} elements for a graph on {} vertices",
            a.universe(),
            g.n()
        )));
    }
    let n = g.n();
    let adj = g.ranked_adjacency(order);
    let ranked: Vec<bool> = (0..n).map(|r| a.contains(order.vertex_at(r))).collect();
    Ok(normalize(
        n,
        positive_sum(&mut PairProfile::new(n), &adj, &ranked),
    ))
}

/// Inner maximizer over rank-space subsets. Returns the numerator of the
/// maximum and the maximizing subset in rank space.
struct Inner {
    n: usize,
    profile: PairProfile<i64>,
}

impl Inner {
    fn new(n: usize) -> Self {
        Inner {
            n,
            profile: PairProfile::new(n),
        }
    }

    fn exact(&mut self, adj: &[i64]) -> (i64, Vec<bool>) {
        let profile = &mut self.profile;
        exhaustive(self.n, |m| positive_sum(profile, adj, m))
    }

    fn exact_below(
        &mut self,
        adj: &[i64],
        cutoff: Option<i64>,
        warm: &[Vec<bool>],
    ) -> Option<(i64, Vec<bool>)> {
        let profile = &mut self.profile;
        exhaustive_below(self.n, cutoff.as_ref(), warm, |m| {
            positive_sum(profile, adj, m)
        })
    }

    /// Flip ascent from the full set, the best singleton and random starts.
    /// A violated geometric condition always shows up on some singleton, so
    /// a zero result is never a false zero.
    fn heuristic(&mut self, adj: &[i64], restarts: usize, seed: u64) -> (i64, Vec<bool>) {
        let n = self.n;
        let profile = &mut self.profile;
        let mut starts = random_starts(n, restarts, seed);
        let mut best_single: Option<(i64, usize)> = None;
        let mut single = vec![false; n];
        for k in 0..n {
            single[k] = true;
            let v = positive_sum(profile, adj, &single);
            single[k] = false;
            if v > 0 && best_single.is_none_or(|(b, _)| v > b) {
                best_single = Some((v, k));
            }
        }
        if let Some((_, k)) = best_single {
            single[k] = true;
            starts.insert(1, single);
        }
        flip_ascent(&starts, |m| positive_sum(profile, adj, m))
    }
}

fn to_vertex_subset(order: &Ordering, ranked: &[bool]) -> SubsetMask {
    let mut members = vec![false; ranked.len()];
    for (r, &m) in ranked.iter().enumerate() {
        members[order.vertex_at(r)] = m;
    }
    SubsetMask::from_bools(members)
}

/// `Gamma*(G, <) = max_A Gamma*(G, <, A)`.
pub fn gamma_star_order(
    g: &Graph,
    order: &Ordering,
    opts: &SearchOptions,
) -> Result<GammaStarReport> {
    order.check_for(g)?;
    let n = g.n();
    let adj = g.ranked_adjacency(order);
    let mut inner = Inner::new(n);
    let (numer, ranked, exhaustive) = match opts.mode {
        Mode::Exact => {
            guard("exact subset enumeration", n, EXACT_SUBSET_LIMIT)?;
            let (v, s) = inner.exact(&adj);
            (v, s, true)
        }
        Mode::Heuristic => {
            let (v, s) = inner.heuristic(&adj, opts.restarts, opts.seed);
            (v, s, false)
        }
    };
    let value = normalize(n, numer);
    Ok(GammaStarReport {
        value_f64: to_f64(&value),
        value,
        best_subset: to_vertex_subset(order, &ranked),
        ordering: order.clone(),
        mode: opts.mode,
        restarts_used: if exhaustive { 0 } else { opts.restarts },
        subsets_exhaustive: exhaustive,
        orderings_exhaustive: false,
    })
}

/// `Gamma*(G) = min over orderings of Gamma*(G, <)`.
pub fn gamma_star(g: &Graph, opts: &SearchOptions) -> Result<GammaStarReport> {
    gamma_star_with_starts(g, opts, &[])
}

/// As [`gamma_star`]; in heuristic mode `extra` orderings join the start
/// portfolio ahead of the built-in ones.
pub fn gamma_star_with_starts(
    g: &Graph,
    opts: &SearchOptions,
    extra: &[Ordering],
) -> Result<GammaStarReport> {
    for o in extra {
        o.check_for(g)?;
    }
    match opts.mode {
        Mode::Exact => exact_over_orderings(g),
        Mode::Heuristic => heuristic_over_orderings(g, opts, extra),
    }
}

/// Rearranges `p` into the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn exact_over_orderings(g: &Graph) -> Result<GammaStarReport> {
    let n = g.n();
    guard("exact ordering enumeration", n, EXACT_ORDER_LIMIT)?;
    let mut inner = Inner::new(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(i64, Ordering, Vec<bool>)> = None;
    let mut warm: Vec<Vec<bool>> = Vec::new();
    loop {
        // Reversal leaves Gamma*(G, <) unchanged; visit each pair once.
        if n < 2 || perm[0] < perm[n - 1] {
            let order = Ordering::from_perm(perm.clone())?;
            let adj = g.ranked_adjacency(&order);
            let cutoff = best.as_ref().map(|b| b.0);
            if let Some((v, set)) = inner.exact_below(&adj, cutoff, &warm) {
                warm.insert(0, set.clone());
                warm.truncate(4);
                best = Some((v, order, set));
                if v == 0 {
                    break;
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (numer, order, ranked) = best.expect("at least one ordering is visited");
    let value = normalize(n, numer);
    Ok(GammaStarReport {
        value_f64: to_f64(&value),
        value,
        best_subset: to_vertex_subset(&order, &ranked),
        ordering: order,
        mode: Mode::Exact,
        restarts_used: 0,
        subsets_exhaustive: true,
        orderings_exhaustive: true,
    })
}

fn heuristic_over_orderings(
    g: &Graph,
    opts: &SearchOptions,
    extra: &[Ordering],
) -> Result<GammaStarReport> {
    let n = g.n();
    let mut inner = Inner::new(n);
    let evals = std::cell::Cell::new(0usize);
    let eval = |perm: &[usize], inner: &mut Inner| -> (i64, Vec<bool>) {
        evals.set(evals.get() + 1);
        let order = Ordering::from_perm(perm.to_vec()).expect("search keeps permutations valid");
        inner.heuristic(&g.ranked_adjacency(&order), opts.restarts, opts.seed)
    };

    let mut starts: Vec<Vec<usize>> = extra.iter().map(|o| o.perm().to_vec()).collect();
    starts.push(seriation::fiedler_order(g).perm().to_vec());
    starts.push(seriation::lbfs_order(g).perm().to_vec());
    let degrees: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
    starts.push(Ordering::sorted_by_key(&degrees).perm().to_vec());
    let mut random: Vec<usize> = (0..n).collect();
    random.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
    starts.push(random);

    let mut best: Option<(i64, Vec<usize>, Vec<bool>)> = None;
    for p in starts {
        let (v, s) = eval(&p, &mut inner);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, p, s));
        }
        if v == 0 {
            break;
        }
    }
    let (mut best_v, mut best_p, mut best_s) = best.expect("start portfolio is non-empty");

    // First-improvement descent over adjacent transpositions, then 2-opt
    // segment reversals.
    let budget = opts.order_budget.max(1);
    'outer: while best_v > 0 && evals.get() < budget {
        for i in 0..n.saturating_sub(1) {
            let mut p = best_p.clone();
            p.swap(i, i + 1);
            let (v, s) = eval(&p, &mut inner);
            if v < best_v {
                (best_v, best_p, best_s) = (v, p, s);
                continue 'outer;
            }
            if evals.get() >= budget {
                break 'outer;
            }
        }
        for len in 3..=n {
            for i in 0..=n - len {
                let mut p = best_p.clone();
                p[i..i + len].reverse();
                let (v, s) = eval(&p, &mut inner);
                if v < best_v {
                    (best_v, best_p, best_s) = (v, p, s);
                    continue 'outer;
                }
                if evals.get() >= budget {
                    break 'outer;
                }
            }
        }
        break;
    }

    let order = Ordering::from_perm(best_p)?;
    let value = normalize(n, best_v);
    Ok(GammaStarReport {
        value_f64: to_f64(&value),
        value,
        best_subset: to_vertex_subset(&order, &best_s),
        ordering: order,
        mode: Mode::Heuristic,
        restarts_used: opts.restarts,
        subsets_exhaustive: false,
        orderings_exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal double sum over vertex pairs with explicit set counts.
    fn oracle_fixed(g: &Graph, order: &Ordering, a: &[bool]) -> Rational {
        let n = g.n();
        let mut total = 0i64;
        for u in 0..n {
            for v in 0..n {
                if order.rank_of(u) >= order.rank_of(v) {
                    continue;
                }
                let down = |x: usize| order.rank_of(x) < order.rank_of(u);
                let up = |x: usize| order.rank_of(x) > order.rank_of(v);
                let count = |w: usize, pred: &dyn Fn(usize) -> bool| {
                    (0..n)
                        .filter(|&x| a[x] && pred(x) && g.has_edge(w, x))
                        .count() as i64
                };
                total += (count(v, &down) - count(u, &down)).max(0);
                total += (count(u, &up) - count(v, &up)).max(0);
            }
        }
        normalize(n, total)
    }

    fn oracle_star(g: &Graph) -> Rational {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Rational> = None;
        loop {
            let order = Ordering::from_perm(perm.clone()).unwrap();
            let inner = (0u64..1 << n)
                .map(|bits| oracle_fixed(g, &order, SubsetMask::from_bits(n, bits).as_bools()))
                .max()
                .unwrap();
            best = Some(best.map_or(inner, |b| b.min(inner)));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap()
    }

    #[test]
    fn fixed_matches_literal_sum() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 3), (1, 2), (2, 5), (3, 4), (1, 4), (4, 5)])
            .unwrap();
        let order = Ordering::from_perm(vec![2, 0, 5, 1, 4, 3]).unwrap();
        for bits in 0u64..1 << 6 {
            let a = SubsetMask::from_bits(6, bits);
            assert_eq!(
                gamma_star_fixed(&g, &order, &a).unwrap(),
                oracle_fixed(&g, &order, a.as_bools())
            );
        }
    }

    #[test]
    fn star_in_bad_order_is_positive() {
        let g = Graph::star(3);
        let order = Ordering::from_perm(vec![1, 2, 0, 3]).unwrap();
        let best = (0..16u64)
            .map(|bits| {
                let a = SubsetMask::from_bits(4, bits);
                let v = gamma_star_fixed(&g, &order, &a).unwrap();
                assert_eq!(v, oracle_fixed(&g, &order, a.as_bools()));
                v
            })
            .max()
            .unwrap();
        assert!(best > Rational::from_integer(0));
    }

    #[test]
    fn empty_subset_and_path_are_zero() {
        let g = Graph::path(4);
        let id = Ordering::identity(4);
        assert_eq!(
            gamma_star_fixed(&g, &id, &SubsetMask::empty(4)).unwrap(),
            Rational::from_integer(0)
        );
        assert_eq!(
            gamma_star_fixed(&g, &id, &SubsetMask::full(4)).unwrap(),
            Rational::from_integer(0)
        );
        let r = gamma_star_order(&g, &id, &SearchOptions::default()).unwrap();
        assert_eq!(r.value, Rational::from_integer(0));
        assert!(r.best_subset.is_empty());
    }

    #[test]
    fn clique_is_zero_in_any_order() {
        let g = Graph::complete(5);
        let order = Ordering::from_perm(vec![3, 1, 4, 0, 2]).unwrap();
        assert_eq!(
            gamma_star_order(&g, &order, &SearchOptions::default())
                .unwrap()
                .value,
            Rational::from_integer(0)
        );
    }

    #[test]
    fn exact_minimum_matches_brute_force() {
        for g in [
            Graph::star(3),
            Graph::cycle(4),
            Graph::path(4),
            Graph::cycle(5),
        ] {
            let r = gamma_star(&g, &SearchOptions::default()).unwrap();
            assert_eq!(r.value, oracle_star(&g), "{g:?}");
            let again = gamma_star_order(&g, &r.ordering, &SearchOptions::default()).unwrap();
            assert_eq!(again.value, r.value);
            assert_eq!(again.best_subset, r.best_subset);
        }
        assert!(oracle_star(&Graph::star(3)) > Rational::from_integer(0));
        assert!(oracle_star(&Graph::cycle(4)) > Rational::from_integer(0));
    }

    #[test]
    fn heuristic_never_exceeds_exact_and_finds_zero() {
        let g = Graph::from_edges(
            7,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (3, 5),
                (5, 6),
            ],
        )
        .unwrap();
        let shuffled = g.relabel(&[4, 0, 6, 2, 1, 5, 3]).unwrap();
        let r = gamma_star(&shuffled, &SearchOptions::heuristic(3)).unwrap();
        assert_eq!(r.value, Rational::from_integer(0));
        let c5 = Graph::cycle(5);
        let exact = gamma_star(&c5, &SearchOptions::default()).unwrap();
        let heur = gamma_star(&c5, &SearchOptions::heuristic(1)).unwrap();
        let at_heur = gamma_star_order(&c5, &heur.ordering, &SearchOptions::default()).unwrap();
        assert!(at_heur.value >= heur.value);
        assert!(at_heur.value >= exact.value);
    }

    #[test]
    fn guards() {
        let g = Graph::path(10);
        assert!(matches!(
            gamma_star(&g, &SearchOptions::default()),
            Err(Error::CostGuard { .. })
        ));
        let g = Graph::path(21);
        let id = Ordering::identity(21);
        assert!(matches!(
            gamma_star_order(&g, &id, &SearchOptions::default()),
            Err(Error::CostGuard { .. })
        ));
    }

    #[test]
    fn next_permutation_visits_all() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
