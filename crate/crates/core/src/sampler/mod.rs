//! w-random graphs, threshold graphs from a distribution on the line, and
//! homomorphism densities.
//!
//! Randomness comes from ChaCha8 seeded with the user seed. Stream 0 draws
//! the latent positions; after sorting, the pairs `(i, j > i)` of vertex `i`
//! draw from stream `i + 1`. Each row is therefore reproducible on its own.

mod cdf;
mod homdensity;

pub use cdf::{boundary_from_cdf, graphon_from_cdf, PiecewiseCdf};
pub use homdensity::{hom_density_graph, hom_density_graphon, Motif};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Ordering};
use crate::graphon::PointGraphon;
use crate::io::GraphonSource;

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub graph: Graph,
    /// Latent value of each vertex. Vertices are numbered in increasing
    /// latent order, so the identity is the latent ordering.
    pub latents: Vec<f64>,
    /// `draw_index[v]` is the position at which vertex `v`'s latent was drawn.
    pub draw_index: Vec<usize>,
    /// Points on the line, for threshold samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
    pub seed: u64,
    pub source: String,
}

impl SampleRecord {
    pub fn latent_order(&self) -> Ordering {
        Ordering::identity(self.graph.n())
    }
}

fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` uniform latents and returns them sorted, with draw indices.
fn sorted_latents(n: usize, seed: u64) -> (Vec<f64>, Vec<usize>) {
    let mut rng = rng_stream(seed, 0);
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let order = Ordering::sorted_by_key(&raw);
    let draw_index = order.perm().to_vec();
    (draw_index.iter().map(|&k| raw[k]).collect(), draw_index)
}

/// `G(n, w)`: i.i.d. uniform latents, each pair linked independently with
/// probability `w(x_i, x_j)`.
pub fn sample_w_random(w: &GraphonSource, n: usize, seed: u64) -> Result<SampleRecord> {
    if n == 0 {
        return Err(Error::Precondition("sample size must be positive".into()));
    }
    let (latents, draw_index) = sorted_latents(n, seed);
    let mut edges = Vec::new();
    for i in 0..n {
        let mut rng = rng_stream(seed, i as u64 + 1);
        for j in i + 1..n {
            let p = w.value(latents[i], latents[j]);
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(SampleRecord {
        graph: Graph::from_edges(n, &edges)?,
        latents,
        draw_index,
        positions: None,
        seed,
        source: w.describe(),
    })
}

/// Points `F^{-1}(u_j)` for uniform `u_j`, linked when at distance at most 1.
pub fn sample_geometric_cdf(cdf: &PiecewiseCdf, n: usize, seed: u64) -> Result<SampleRecord> {
    if n == 0 {
        return Err(Error::Precondition("sample size must be positive".into()));
    }
    let (latents, draw_index) = sorted_latents(n, seed);
    let positions: Vec<f64> = latents.iter().map(|&u| cdf.inverse(u)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (positions[j] - positions[i]).abs() <= 1.0 {
                edges.push((i, j));
            }
        }
    }
    Ok(SampleRecord {
        graph: Graph::from_edges(n, &edges)?,
        latents,
        draw_index,
        positions: Some(positions),
        seed,
        source: format!("threshold graph on a cdf with {} knots", cdf.knots().len()),
    })
}
