//! Candidate orderings: spectral (Fiedler) sort and lexicographic BFS sweeps.

use nalgebra::DMatrix;

use crate::graph::{Graph, Ordering};

/// Sorts each connected component by its Fiedler vector and concatenates the
/// components in order of their smallest vertex.
pub fn fiedler_order(g: &Graph) -> Ordering {
    let mut perm = Vec::with_capacity(g.n());
    for comp in g.components() {
        perm.extend(fiedler_component(g, &comp));
    }
    Ordering::from_perm(perm).expect("components partition the vertices")
}

fn fiedler_component(g: &Graph, comp: &[usize]) -> Vec<usize> {
    let k = comp.len();
    if k <= 2 {
        return comp.to_vec();
    }
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in comp.iter().enumerate() {
        index[v] = i;
    }
    let mut lap = DMatrix::<f64>::zeros(k, k);
    for (i, &v) in comp.iter().enumerate() {
        lap[(i, i)] = g.degree(v) as f64;
        for &u in g.neighbors(v) {
            lap[(i, index[u])] = -1.0;
        }
    }
    let eig = lap.symmetric_eigen();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let mut fiedler: Vec<f64> = eig.eigenvectors.column(idx[1]).iter().copied().collect();
    // Fix the sign so the result does not depend on the solver's choice.
    if let Some(&first) = fiedler.iter().find(|x| x.abs() > 1e-12) {
        if first > 0.0 {
            fiedler.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        fiedler[a]
            .total_cmp(&fiedler[b])
            .then(comp[a].cmp(&comp[b]))
    });
    order.into_iter().map(|i| comp[i]).collect()
}

/// One lexicographic BFS over `comp`; ties go to the vertex listed first in
/// `initial`.
fn lbfs(g: &Graph, initial: Vec<usize>) -> Vec<usize> {
    let mut slices: Vec<Vec<usize>> = vec![initial];
    let mut out = Vec::new();
    while let Some(first) = slices.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            slices.remove(0);
        }
        out.push(v);
        let mut next = Vec::with_capacity(slices.len() * 2);
        for s in slices {
            let (near, far): (Vec<usize>, Vec<usize>) =
                s.into_iter().partition(|&u| g.has_edge(u, v));
            if !near.is_empty() {
                next.push(near);
            }
            if !far.is_empty() {
                next.push(far);
            }
        }
        slices = next;
    }
    out
}

/// Successive LBFS sweeps on each component, every sweep after the first
/// breaking ties toward the vertex that came last in the previous one.
/// Returns the per-sweep orderings of the whole graph.
pub fn lbfs_sweeps(g: &Graph, sweeps: usize) -> Vec<Ordering> {
    let comps = g.components();
    let mut per_comp: Vec<Vec<Vec<usize>>> = Vec::new();
    for comp in &comps {
        let mut runs = Vec::new();
        let mut prev = lbfs(g, comp.clone());
        runs.push(prev.clone());
        for _ in 1..sweeps {
            let initial: Vec<usize> = prev.iter().rev().copied().collect();
            prev = lbfs(g, initial);
            runs.push(prev.clone());
        }
        per_comp.push(runs);
    }
    (0..sweeps)
        .map(|s| {
            let perm: Vec<usize> = per_comp
                .iter()
                .flat_map(|runs| runs[s].iter().copied())
                .collect();
            Ordering::from_perm(perm).expect("components partition the vertices")
        })
        .collect()
}

/// The third sweep of the LBFS, LBFS+, LBFS+ scheme, which orders every
/// connected unit interval graph properly.
pub fn lbfs_order(g: &Graph) -> Ordering {
    lbfs_sweeps(g, 3).pop().expect("three sweeps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometric::check_geometric_condition;

    #[test]
    fn path_orders_are_monotone() {
        let g = Graph::path(6).relabel(&[3, 0, 5, 1, 4, 2]).unwrap();
        for o in [fiedler_order(&g), lbfs_order(&g)] {
            assert!(check_geometric_condition(&g, &o).unwrap().holds, "{o:?}");
        }
    }

    #[test]
    fn lbfs_visits_every_vertex() {
        let g = Graph::from_edges(7, &[(0, 1), (2, 3), (3, 4), (5, 6)]).unwrap();
        for o in lbfs_sweeps(&g, 4) {
            assert_eq!(o.len(), 7);
        }
    }
}
