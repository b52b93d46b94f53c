//! Linear embeddability of graphs and graphons.
//!
//! Finite graphs are measured by `Gamma*`, which vanishes exactly on unit
//! interval graphs; step graphons by `Gamma` and `Gamma~`. Supporting pieces
//! cover cut norms, w-random sampling, unit interval recognition with
//! explicit line embeddings, and uniform linear embeddings of 0/1 graphons
//! given by a boundary function.

pub mod boundary;
pub mod cutmetric;
pub mod error;
pub mod exact;
pub mod gamma;
pub mod geometric;
pub mod graph;
pub mod graphon;
pub mod io;
pub mod sampler;
pub mod uniform;

use serde::{Deserialize, Serialize};

pub use boundary::{boundary_to_step_graphon, BoundarySpec};
pub use error::{Error, Result};
pub use exact::{format_rational, Rational};
pub use graph::{Graph, Ordering, SubsetMask};
pub use graphon::{graph_to_step_graphon, PointGraphon, StepGraphon};

/// Whether an optimizer must be exhaustive or may stop at a local optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "heuristic" => Ok(Mode::Heuristic),
            other => Err(Error::Precondition(format!("unknown mode `{other}`"))),
        }
    }
}
