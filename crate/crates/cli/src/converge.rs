//! The convergence experiment: `Gamma*(G_n, <)` for w-random graphs of
//! growing size under several vertex orderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use linembed::gamma::{gamma_star_order, SearchOptions, EXACT_SUBSET_LIMIT};
use linembed::geometric::seriation;
use linembed::io::GraphonSource;
use linembed::sampler::sample_w_random;
use linembed::{Error, Mode, Ordering};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "n,seed,ordering,gamma_star,mode,elapsed_ms,status";

/// Largest `n` for which `auto` mode maximizes over all subsets.
pub const AUTO_EXACT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingKind {
    Fiedler,
    Latent,
    Lbfs,
    Random,
}

impl OrderingKind {
    pub fn name(self) -> &'static str {
        match self {
            OrderingKind::Fiedler => "fiedler",
            OrderingKind::Latent => "latent",
            OrderingKind::Lbfs => "lbfs",
            OrderingKind::Random => "random",
        }
    }
}

impl std::str::FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fiedler" => Ok(OrderingKind::Fiedler),
            "latent" => Ok(OrderingKind::Latent),
            "lbfs" => Ok(OrderingKind::Lbfs),
            "random" => Ok(OrderingKind::Random),
            other => Err(format!(
                "unknown ordering `{other}` (expected latent, fiedler, lbfs or random)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergeMode {
    Exact,
    Heuristic,
    /// Exact up to [`AUTO_EXACT_LIMIT`] vertices, heuristic above.
    #[default]
    Auto,
}

impl std::str::FromStr for ConvergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(ConvergeMode::Exact),
            "heuristic" => Ok(ConvergeMode::Heuristic),
            "auto" => Ok(ConvergeMode::Auto),
            other => Err(format!(
                "unknown mode `{other}` (expected exact, heuristic or auto)"
            )),
        }
    }
}

impl ConvergeMode {
    fn for_size(self, n: usize) -> Mode {
        match self {
            ConvergeMode::Exact => Mode::Exact,
            ConvergeMode::Heuristic => Mode::Heuristic,
            ConvergeMode::Auto if n <= AUTO_EXACT_LIMIT => Mode::Exact,
            ConvergeMode::Auto => Mode::Heuristic,
        }
    }
}

fn default_orderings() -> Vec<OrderingKind> {
    vec![OrderingKind::Latent]
}

fn default_restarts() -> usize {
    SearchOptions::default().restarts
}

/// JSON config for `converge --config`. Seeds run from `base_seed` to
/// `base_seed + seeds_per_size - 1`; each seed drives both the sample and
/// the heuristic search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: PathBuf,
    pub sizes: Vec<usize>,
    pub seeds_per_size: u64,
    #[serde(default = "default_orderings")]
    pub orderings: Vec<OrderingKind>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub mode: ConvergeMode,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Fill the `elapsed_ms` column. Off by default so reruns are
    /// byte-identical.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.sizes.is_empty() {
            return Err(Error::Precondition("sizes must not be empty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "sizes must be strictly increasing".into(),
            ));
        }
        if self.sizes[0] == 0 {
            return Err(Error::Precondition("sizes must be positive".into()));
        }
        if self.seeds_per_size == 0 {
            return Err(Error::Precondition(
                "seeds_per_size must be at least 1".into(),
            ));
        }
        if self.orderings.is_empty() {
            return Err(Error::Precondition(
                "at least one ordering is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub seed: u64,
    pub ordering: OrderingKind,
    pub gamma_star: Option<f64>,
    pub mode: Option<Mode>,
    pub elapsed_ms: Option<u128>,
    pub status: String,
}

fn ordering_for(kind: OrderingKind, g: &linembed::Graph, seed: u64) -> Ordering {
    match kind {
        OrderingKind::Latent => Ordering::identity(g.n()),
        OrderingKind::Fiedler => seriation::fiedler_order(g),
        OrderingKind::Lbfs => seriation::lbfs_order(g),
        OrderingKind::Random => Ordering::random(g.n(), seed),
    }
}

fn run_cell(
    source: &GraphonSource,
    cfg: &ExperimentConfig,
    n: usize,
    seed: u64,
) -> Vec<ConvergeRow> {
    let start = Instant::now();
    let sample = sample_w_random(source, n, seed);
    cfg.orderings
        .iter()
        .map(|&kind| {
            let mode = cfg.mode.for_size(n);
            let opts = SearchOptions {
                mode,
                seed,
                restarts: cfg.restarts,
                ..SearchOptions::default()
            };
            let result = sample.as_ref().map_err(|e| e.to_string()).and_then(|s| {
                let order = ordering_for(kind, &s.graph, seed);
                gamma_star_order(&s.graph, &order, &opts).map_err(|e| e.to_string())
            });
            let elapsed_ms = cfg.timing.then(|| start.elapsed().as_millis());
            match result {
                Ok(r) => ConvergeRow {
                    n,
                    seed,
                    ordering: kind,
                    gamma_star: Some(r.value_f64),
                    mode: Some(r.mode),
                    elapsed_ms,
                    status: "ok".into(),
                },
                Err(msg) => ConvergeRow {
                    n,
                    seed,
                    ordering: kind,
                    gamma_star: None,
                    mode: None,
                    elapsed_ms,
                    status: format!("error: {}", msg.replace([',', '\n'], ";")),
                },
            }
        })
        .collect()
}

/// Runs every `(n, seed)` cell, in parallel, and returns rows sorted by
/// `(n, seed, ordering)`.
pub fn run_converge(
    cfg: &ExperimentConfig,
    source: &GraphonSource,
) -> Result<Vec<ConvergeRow>, Error> {
    cfg.validate()?;
    // Exact mode is refused up front rather than row by row.
    if cfg.mode == ConvergeMode::Exact {
        let largest = *cfg.sizes.last().unwrap();
        if largest > EXACT_SUBSET_LIMIT {
            return Err(Error::CostGuard {
                what: "exact subset enumeration",
                size: largest,
                limit: EXACT_SUBSET_LIMIT,
            });
        }
    }
    let cells: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.seeds_per_size).map(move |k| (n, cfg.base_seed + k)))
        .collect();
    let mut rows: Vec<ConvergeRow> = cells
        .par_iter()
        .flat_map_iter(|&(n, seed)| run_cell(source, cfg, n, seed))
        .collect();
    rows.sort_by(|a, b| (a.n, a.seed, a.ordering.name()).cmp(&(b.n, b.seed, b.ordering.name())));
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ConvergeRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let value = r.gamma_star.map(|v| v.to_string()).unwrap_or_default();
        let mode = r
            .mode
            .map(|m| match m {
                Mode::Exact => "exact",
                Mode::Heuristic => "heuristic",
            })
            .unwrap_or_default();
        let elapsed = r.elapsed_ms.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.seed,
            r.ordering.name(),
            value,
            mode,
            elapsed,
            r.status
        )
        .unwrap();
    }
    out
}

/// Median `gamma_star` per `(n, ordering)` over the successful rows.
pub fn medians(rows: &[ConvergeRow]) -> BTreeMap<(usize, OrderingKind), f64> {
    let mut groups: BTreeMap<(usize, OrderingKind), Vec<f64>> = BTreeMap::new();
    for r in rows {
        if let Some(v) = r.gamma_star {
            groups.entry((r.n, r.ordering)).or_default().push(v);
        }
    }
    groups
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by(f64::total_cmp);
            let m = v.len();
            let med = if m % 2 == 1 {
                v[m / 2]
            } else {
                (v[m / 2 - 1] + v[m / 2]) / 2.0
            };
            (k, med)
        })
        .collect()
}
