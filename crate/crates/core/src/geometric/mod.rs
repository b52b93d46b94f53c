//! Recognition of one-dimensional geometric (unit interval) graphs and their
//! line embeddings.

pub mod seriation;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::graph::{Graph, Ordering};
use crate::Mode;

/// Largest graph accepted by the exact ordering search.
pub const EXACT_SEARCH_LIMIT: usize = 20;

/// Outcome of [`check_geometric_condition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricCheck {
    pub holds: bool,
    /// `(v, z, w)` with `v < z < w` in the order, `v ~ w`, and `z` missing
    /// an edge to `v` or to `w`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Rank span `(lo, hi)` of the closed neighborhood of the vertex at `rank`.
fn closed_span(g: &Graph, order: &Ordering, rank: usize) -> (usize, usize, usize) {
    let v = order.vertex_at(rank);
    let mut lo = rank;
    let mut hi = rank;
    for &u in g.neighbors(v) {
        let r = order.rank_of(u);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi, g.degree(v) + 1)
}

/// Tests whether every `v < z < w` with `v ~ w` has `z ~ v` and `z ~ w`.
///
/// Runs in `O(n^2)`: the condition holds iff every closed neighborhood
/// occupies a contiguous block of ranks.
pub fn check_geometric_condition(g: &Graph, order: &Ordering) -> Result<GeometricCheck> {
    order.check_for(g)?;
    for rank in 0..g.n() {
        let (lo, hi, size) = closed_span(g, order, rank);
        if hi - lo + 1 == size {
            continue;
        }
        let v = order.vertex_at(rank);
        let gap = (lo..=hi)
            .find(|&k| k != rank && !g.has_edge(v, order.vertex_at(k)))
            .expect("a span larger than the neighborhood has a gap");
        let witness = if gap < rank {
            (order.vertex_at(lo), order.vertex_at(gap), v)
        } else {
            (v, order.vertex_at(gap), order.vertex_at(hi))
        };
        return Ok(GeometricCheck {
            holds: false,
            witness: Some(witness),
        });
    }
    Ok(GeometricCheck {
        holds: true,
        witness: None,
    })
}

/// Number of rank positions missing from closed-neighborhood spans; zero
/// exactly when the condition holds.
pub fn violation_count(g: &Graph, order: &Ordering) -> usize {
    (0..g.n())
        .map(|r| {
            let (lo, hi, size) = closed_span(g, order, r);
            hi - lo + 1 - size
        })
        .sum()
}

/// Searches for an ordering satisfying the geometric condition.
///
/// Exact mode returns `Ok(None)` only when no such ordering exists. Heuristic
/// mode returns `Ok(None)` when its portfolio fails, which is inconclusive.
pub fn find_geometric_ordering(g: &Graph, mode: Mode) -> Result<Option<Ordering>> {
    match mode {
        Mode::Exact => {
            guard("exact ordering search", g.n(), EXACT_SEARCH_LIMIT)?;
            let mut perm = Vec::with_capacity(g.n());
            for comp in g.components() {
                match exact_component(g, &comp) {
                    Some(p) => perm.extend(p),
                    None => return Ok(None),
                }
            }
            Ok(Some(Ordering::from_perm(perm)?))
        }
        Mode::Heuristic => Ok(heuristic_search(g)),
    }
}

/// Depth-first search over orderings of one connected component in
/// lexicographic order. Appending `w` is allowed iff its earlier neighbors
/// form a clique occupying a suffix of the prefix; in a connected graph that
/// suffix is never empty.
fn exact_component(g: &Graph, comp: &[usize]) -> Option<Vec<usize>> {
    fn extend(g: &Graph, comp: &[usize], prefix: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if prefix.len() == comp.len() {
            return true;
        }
        for &w in comp {
            if used[w] || !can_append(g, prefix, w) {
                continue;
            }
            used[w] = true;
            prefix.push(w);
            if extend(g, comp, prefix, used) {
                return true;
            }
            prefix.pop();
            used[w] = false;
        }
        false
    }
    let mut prefix = Vec::with_capacity(comp.len());
    let mut used = vec![false; g.n()];
    extend(g, comp, &mut prefix, &mut used).then_some(prefix)
}

fn can_append(g: &Graph, prefix: &[usize], w: usize) -> bool {
    let t = prefix.len();
    if t == 0 {
        return true;
    }
    let Some(m) = prefix.iter().position(|&u| g.has_edge(u, w)) else {
        return false;
    };
    let suffix = &prefix[m..];
    suffix.iter().all(|&u| g.has_edge(u, w))
        && suffix
            .iter()
            .enumerate()
            .all(|(i, &a)| suffix[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Fiedler and LBFS candidates (each also reversed), then segment-reversal
/// descent on the violation count from the best candidate.
fn heuristic_search(g: &Graph) -> Option<Ordering> {
    let mut candidates = vec![seriation::fiedler_order(g)];
    candidates.extend(seriation::lbfs_sweeps(g, 5));
    let mut best: Option<(usize, Ordering)> = None;
    for c in candidates {
        for o in [c.reversed(), c] {
            let v = violation_count(g, &o);
            if v == 0 {
                return Some(o);
            }
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, o));
            }
        }
    }
    let (mut best_v, best_o) = best?;
    let n = g.n();
    let mut perm = best_o.perm().to_vec();
    let mut budget = 20_000usize;
    'outer: while budget > 0 {
        for len in 2..=n {
            for i in 0..=n - len {
                perm[i..i + len].reverse();
                let o = Ordering::from_perm(perm.clone()).expect("reversal keeps a permutation");
                let v = violation_count(g, &o);
                budget -= 1;
                if v < best_v {
                    if v == 0 {
                        return Some(o);
                    }
                    best_v = v;
                    continue 'outer;
                }
                perm[i..i + len].reverse();
                if budget == 0 {
                    break 'outer;
                }
            }
        }
        break;
    }
    None
}

/// Coordinates on the real line, keyed by vertex id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineEmbedding {
    pub coords: BTreeMap<usize, f64>,
}

impl LineEmbedding {
    /// Whether `u ~ v` iff `|coord(u) - coord(v)| < 1`, and coordinates are
    /// distinct.
    pub fn certifies(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.coords.len() != n {
            return false;
        }
        (0..n).all(|u| {
            (u + 1..n).all(|v| {
                let d = (self.coords[&u] - self.coords[&v]).abs();
                d > 0.0 && (d < 1.0) == g.has_edge(u, v)
            })
        })
    }
}

/// Places the vertices of `g` on the line in the given order so that
/// adjacency is exactly distance below one.
///
/// Vertex `v_t` with earliest earlier neighbor `v_m` goes to the midpoint of
/// `(max(x_{t-1}, x_{m-1} + 1), x_m + 1)`, dropping the second term when
/// `m = 0`; a vertex with no earlier neighbor goes to `x_{t-1} + 2`.
pub fn construct_line_embedding(g: &Graph, order: &Ordering) -> Result<LineEmbedding> {
    let check = check_geometric_condition(g, order)?;
    if let Some((v, z, w)) = check.witness {
        return Err(Error::Precondition(format!(
            "ordering violates the geometric condition at ({v}, {z}, {w})"
        )));
    }
    let n = g.n();
    let mut x: Vec<f64> = Vec::with_capacity(n);
    for t in 0..n {
        let v = order.vertex_at(t);
        let first = (0..t).find(|&k| g.has_edge(order.vertex_at(k), v));
        let coord = match (t, first) {
            (0, _) => 0.0,
            (_, None) => x[t - 1] + 2.0,
            (_, Some(m)) => {
                let lo = if m == 0 {
                    x[t - 1]
                } else {
                    x[t - 1].max(x[m - 1] + 1.0)
                };
                0.5 * (lo + x[m] + 1.0)
            }
        };
        x.push(coord);
    }
    Ok(LineEmbedding {
        coords: (0..n).map(|t| (order.vertex_at(t), x[t])).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::next_permutation;

    /// The triple condition checked literally.
    fn oracle(g: &Graph, order: &Ordering) -> bool {
        let n = g.n();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (v, z, w) = (order.vertex_at(a), order.vertex_at(b), order.vertex_at(c));
                    if g.has_edge(v, w) && !(g.has_edge(z, v) && g.has_edge(z, w)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn all_orders(n: usize) -> Vec<Ordering> {
        let mut p: Vec<usize> = (0..n).collect();
        let mut out = vec![Ordering::from_perm(p.clone()).unwrap()];
        while next_permutation(&mut p) {
            out.push(Ordering::from_perm(p.clone()).unwrap());
        }
        out
    }

    fn is_valid_witness(g: &Graph, order: &Ordering, (v, z, w): (usize, usize, usize)) -> bool {
        order.rank_of(v) < order.rank_of(z)
            && order.rank_of(z) < order.rank_of(w)
            && g.has_edge(v, w)
            && !(g.has_edge(z, v) && g.has_edge(z, w))
    }

    #[test]
    fn check_matches_triple_oracle() {
        let graphs = [
            Graph::path(4),
            Graph::star(3),
            Graph::cycle(4),
            Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap(),
        ];
        for g in &graphs {
            for o in all_orders(g.n()) {
                let c = check_geometric_condition(g, &o).unwrap();
                assert_eq!(c.holds, oracle(g, &o));
                assert_eq!(c.holds, violation_count(g, &o) == 0);
                if let Some(w) = c.witness {
                    assert!(is_valid_witness(g, &o, w));
                }
            }
        }
    }

    #[test]
    fn star_and_cycle_have_no_ordering() {
        for g in [Graph::star(3), Graph::cycle(4)] {
            assert!(all_orders(4).iter().all(|o| !oracle(&g, o)));
            assert_eq!(find_geometric_ordering(&g, Mode::Exact).unwrap(), None);
        }
        assert!(
            check_geometric_condition(&Graph::path(4), &Ordering::identity(4))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn clique_accepts_identity() {
        let g = Graph::complete(5);
        assert_eq!(
            find_geometric_ordering(&g, Mode::Exact).unwrap(),
            Some(Ordering::identity(5))
        );
    }

    #[test]
    fn exact_search_agrees_with_enumeration() {
        let g = Graph::from_edges(6, &[(0, 3), (3, 1), (1, 5), (5, 2), (3, 5), (2, 4)]).unwrap();
        let any = all_orders(6).into_iter().any(|o| oracle(&g, &o));
        let found = find_geometric_ordering(&g, Mode::Exact).unwrap();
        assert_eq!(found.is_some(), any);
        if let Some(o) = found {
            assert!(oracle(&g, &o));
        }
    }

    #[test]
    fn embeddings_certify() {
        let single = construct_line_embedding(&Graph::empty(1), &Ordering::identity(1)).unwrap();
        assert_eq!(single.coords[&0], 0.0);
        let k3 = construct_line_embedding(&Graph::complete(3), &Ordering::identity(3)).unwrap();
        assert!(k3.coords[&0] < k3.coords[&1] && k3.coords[&1] < k3.coords[&2]);
        assert!(k3.certifies(&Graph::complete(3)));
        let p3 = Graph::path(3);
        let e = construct_line_embedding(&p3, &Ordering::identity(3)).unwrap();
        assert!((e.coords[&0] - e.coords[&1]).abs() < 1.0);
        assert!((e.coords[&1] - e.coords[&2]).abs() < 1.0);
        assert!((e.coords[&0] - e.coords[&2]).abs() > 1.0);
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (4, 5)]).unwrap();
        let o = find_geometric_ordering(&g, Mode::Exact).unwrap().unwrap();
        assert!(construct_line_embedding(&g, &o).unwrap().certifies(&g));
    }

    #[test]
    fn embedding_rejects_bad_order() {
        let err = construct_line_embedding(&Graph::star(3), &Ordering::identity(4)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn embedding_json_shape() {
        let e = construct_line_embedding(&Graph::path(2), &Ordering::identity(2)).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"coords":{"0":0.0,"1":0.5}}"#);
    }
}
