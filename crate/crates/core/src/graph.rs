//! Simple undirected graphs, vertex orderings and vertex/block subsets.

use std::cmp::Ordering as CmpOrdering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph without edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// and endpoints outside `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            g.insert(u, v);
        }
        Ok(g)
    }

    fn insert(&mut self, u: usize, v: usize) {
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Neighbors of `v` in insertion order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Relabels vertices: vertex `v` of `self` becomes `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Graph> {
        Ordering::from_perm(map.to_vec())?;
        if map.len() != self.n {
            return Err(Error::InvalidOrdering(format!(
                "relabeling has length {} for a graph on {} vertices",
                map.len(),
                self.n
            )));
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (map[u], map[v]))
            .collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Adjacency matrix as 0/1 integers, rows and columns listed in `order`.
    pub(crate) fn ranked_adjacency(&self, order: &Ordering) -> Vec<i64> {
        let n = self.n;
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            let u = order.vertex_at(i);
            for j in 0..n {
                if i != j && self.has_edge(u, order.vertex_at(j)) {
                    a[i * n + j] = 1;
                }
            }
        }
        a
    }

    /// Connected components, each sorted ascending, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.neighbors[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let edges: Vec<_> = repr.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(repr.n, &edges).map_err(serde::de::Error::custom)
    }
}

/// A linear order on vertices: `perm[k]` is the vertex of rank `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordering {
    perm: Vec<usize>,
    position: Vec<usize>,
}

impl Ordering {
    pub fn identity(n: usize) -> Self {
        Ordering {
            perm: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut position = vec![usize::MAX; n];
        for (k, &v) in perm.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrdering(format!(
                    "vertex {v} out of range for {n} vertices"
                )));
            }
            if position[v] != usize::MAX {
                return Err(Error::InvalidOrdering(format!("vertex {v} appears twice")));
            }
            position[v] = k;
        }
        Ok(Ordering { perm, position })
    }

    /// Orders vertices by increasing key; ties go to the smaller vertex id.
    pub fn sorted_by_key(keys: &[f64]) -> Self {
        let mut perm: Vec<usize> = (0..keys.len()).collect();
        perm.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
        Ordering::from_perm(perm).expect("sorted indices form a permutation")
    }

    /// Uniform random ordering from a seeded ChaCha8 shuffle.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ordering::from_perm(perm).expect("a shuffle is a permutation")
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    #[inline]
    pub fn vertex_at(&self, rank: usize) -> usize {
        self.perm[rank]
    }

    #[inline]
    pub fn rank_of(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn reversed(&self) -> Self {
        let mut perm = self.perm.clone();
        perm.reverse();
        Ordering::from_perm(perm).expect("reversal preserves bijectivity")
    }

    /// Checks that the ordering covers exactly the vertices of `g`.
    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::InvalidOrdering(format!(
                "ordering has {} entries, graph has {} vertices",
                self.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

impl Serialize for Ordering {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.perm.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ordering {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let perm = Vec::<usize>::deserialize(d)?;
        Ordering::from_perm(perm).map_err(serde::de::Error::custom)
    }
}

/// A subset of `0..n` (vertex ids for graphs, block indices for step graphons).
///
/// Subsets compare lexicographically by their sorted member lists; this is
/// the tie-break order used by every optimizer in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    members: Vec<bool>,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask {
            members: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask {
            members: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut members = vec![false; n];
        for &k in indices {
            if k >= n {
                return Err(Error::InvalidSubset(format!("member {k} outside 0..{n}")));
            }
            members[k] = true;
        }
        Ok(SubsetMask { members })
    }

    pub fn from_bools(members: Vec<bool>) -> Self {
        SubsetMask { members }
    }

    /// Bit `k` of `bits` decides membership of `k`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SubsetMask {
            members: (0..n).map(|k| bits >> k & 1 == 1).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members[k]
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(k, &m)| m.then_some(k))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.indices()
            .cmp(&other.indices())
            .then(self.members.len().cmp(&other.members.len()))
    }
}

/// Lexicographic comparison of two membership vectors by sorted member lists.
pub(crate) fn lex_cmp(a: &[bool], b: &[bool]) -> CmpOrdering {
    let ia = a.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k);
    let ib = b.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k);
    ia.cmp(ib)
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            universe: usize,
            members: Vec<usize>,
        }
        Repr {
            universe: self.universe(),
            members: self.indices(),
        }
        .serialize(s)
    }
}
