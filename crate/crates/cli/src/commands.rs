use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use linembed::boundary::boundary_to_step_graphon;
use linembed::cutmetric::{cut_distance_blocks, cut_norm};
use linembed::exact::to_f64;
use linembed::gamma::{gamma, gamma_star, gamma_star_order, gamma_tilde, SearchOptions};
use linembed::geometric::{
    check_geometric_condition, construct_line_embedding, find_geometric_ordering, seriation,
    EXACT_SEARCH_LIMIT,
};
use linembed::io::{parse_boundary, parse_graph, parse_graphon_source, GraphonSource};
use linembed::sampler::{
    hom_density_graph, hom_density_graphon, sample_geometric_cdf, sample_w_random, Motif,
    PiecewiseCdf, SampleRecord,
};
use linembed::uniform::{
    build_embedding, decide_uniform_embedding, refute_embedding_witness, verify_built,
};
use linembed::{format_rational, Error, Graph, Mode, Ordering, StepGraphon, SubsetMask};
use serde::Serialize;
use serde_json::json;

use crate::converge::{medians, rows_to_csv, run_converge, ExperimentConfig};
use crate::{thread_count, to_json, CliError, CliResult, Command, Format, Search};

pub fn dispatch(command: Command) -> CliResult {
    match command {
        Command::GammaStar {
            graph,
            order,
            search,
            order_budget,
            format,
        } => cmd_gamma_star(&graph, order, &search, order_budget, format),
        Command::Gamma {
            graphon,
            search,
            tilde,
            blocks,
            format,
        } => cmd_gamma(&graphon, &search, tilde, blocks, format),
        Command::Cutnorm {
            graphon,
            mode,
            blocks,
            format,
        } => cmd_cutnorm(&graphon, mode, blocks, format),
        Command::Cutdist {
            first,
            second,
            mode,
            blocks,
            format,
        } => cmd_cutdist(&first, &second, mode, blocks, format),
        Command::Sample {
            graphon,
            cdf,
            n,
            seed,
            count,
            format,
        } => cmd_sample(graphon.as_deref(), cdf.as_deref(), n, seed, count, format),
        Command::Homdensity {
            input,
            motif,
            blocks,
            format,
        } => cmd_homdensity(&input, motif.as_deref(), blocks, format),
        Command::Recognize {
            graph,
            mode,
            format,
        } => cmd_recognize(&graph, mode, format),
        Command::EmbedGeometric {
            graph,
            order,
            mode,
            format,
        } => cmd_embed_geometric(&graph, order, mode, format),
        Command::EmbedUniform {
            boundary,
            grid,
            margin,
            format,
        } => cmd_embed_uniform(&boundary, grid, margin, format),
        Command::Converge {
            config,
            source,
            sizes,
            seeds,
            orderings,
            mode,
            seed,
            restarts,
            output,
            timing,
        } => {
            let mut cfg = match &config {
                Some(path) => serde_json::from_str::<ExperimentConfig>(&read(path)?)?,
                None => ExperimentConfig {
                    source: source
                        .clone()
                        .ok_or_else(|| CliError::input("--source or --config is required"))?,
                    sizes: Vec::new(),
                    seeds_per_size: 10,
                    orderings: vec![crate::converge::OrderingKind::Latent],
                    output: None,
                    mode: Default::default(),
                    base_seed: 0,
                    restarts: SearchOptions::default().restarts,
                    timing: false,
                },
            };
            if let Some(s) = source {
                cfg.source = s;
            }
            if let Some(s) = sizes {
                cfg.sizes = s;
            }
            if let Some(s) = seeds {
                cfg.seeds_per_size = s;
            }
            if let Some(o) = orderings {
                cfg.orderings = o;
            }
            if let Some(m) = mode {
                cfg.mode = m;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(r) = restarts {
                cfg.restarts = r;
            }
            if output.is_some() {
                cfg.output = output;
            }
            cfg.timing |= timing;
            cmd_converge(&cfg)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_graphon_source(path: &Path) -> Result<GraphonSource, CliError> {
    parse_graphon_source(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_boundary(path: &Path) -> Result<linembed::BoundarySpec, CliError> {
    parse_boundary(&read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Heuristic => "heuristic",
    }
}

fn subset_field(s: &SubsetMask) -> String {
    join(s.indices())
}

/// Step graphon from a file; boundary graphons are block-averaged.
fn load_step(path: &Path, blocks: usize) -> Result<StepGraphon, CliError> {
    Ok(match load_graphon_source(path)? {
        GraphonSource::Step(w) => w,
        GraphonSource::Boundary(b) => boundary_to_step_graphon(&b, blocks)?,
    })
}

fn ordering_arg(order: Option<Vec<usize>>, g: &Graph) -> Result<Option<Ordering>, CliError> {
    order
        .map(|p| {
            let o = Ordering::from_perm(p)?;
            o.check_for(g)?;
            Ok(o)
        })
        .transpose()
}

fn cmd_gamma_star(
    path: &Path,
    order: Option<Vec<usize>>,
    search: &Search,
    budget: usize,
    format: Format,
) -> CliResult {
    let g = load_graph(path)?;
    let opts = SearchOptions {
        mode: search.mode,
        seed: search.seed,
        restarts: search.restarts,
        order_budget: budget,
    };
    let report = match ordering_arg(order, &g)? {
        Some(o) => gamma_star_order(&g, &o, &opts)?,
        None => gamma_star(&g, &opts)?,
    };
    if format.csv {
        return Ok(format!(
            "value,value_f64,mode,ordering,best_subset,subsets_exhaustive,orderings_exhaustive\n{},{},{},{},{},{},{}\n",
            format_rational(&report.value),
            report.value_f64,
            mode_name(report.mode),
            join(report.ordering.perm()),
            subset_field(&report.best_subset),
            report.subsets_exhaustive,
            report.orderings_exhaustive
        ));
    }
    to_json(&report)
}

fn cmd_gamma(
    path: &Path,
    search: &Search,
    tilde: bool,
    blocks: usize,
    format: Format,
) -> CliResult {
    let w = load_step(path, blocks)?;
    let opts = SearchOptions {
        mode: search.mode,
        seed: search.seed,
        restarts: search.restarts,
        ..SearchOptions::default()
    };
    let report = gamma(&w, &opts)?;
    let tilde = tilde.then(|| gamma_tilde(&w, &opts)).transpose()?;
    if format.csv {
        let exact = report
            .estimate_exact
            .as_ref()
            .map(format_rational)
            .unwrap_or_default();
        let (t, perm) = tilde
            .as_ref()
            .map(|t| (t.estimate.to_string(), join(&t.permutation)))
            .unwrap_or_default();
        return Ok(format!(
            "estimate,estimate_exact,lower,upper,best_subset,mode,band_source,tilde,tilde_permutation\n{},{},{},{},{},{},{},{},{}\n",
            report.estimate,
            exact,
            report.lower,
            report.upper,
            subset_field(&report.best_subset),
            mode_name(report.mode),
            csv_field(&report.band_source),
            t,
            perm
        ));
    }
    to_json(&json!({ "gamma": report, "tilde": tilde }))
}

fn cmd_cutnorm(path: &Path, mode: Mode, blocks: usize, format: Format) -> CliResult {
    let w = load_step(path, blocks)?;
    let report = cut_norm(&w, mode)?;
    if format.csv {
        return Ok(format!(
            "value,witness_s,witness_t,mode\n{},{},{},{}\n",
            report.value,
            subset_field(&report.witness_s),
            subset_field(&report.witness_t),
            mode_name(report.mode)
        ));
    }
    to_json(&report)
}

fn cmd_cutdist(
    first: &Path,
    second: &Path,
    mode: Mode,
    blocks: usize,
    format: Format,
) -> CliResult {
    let w1 = load_step(first, blocks)?;
    let w2 = load_step(second, blocks)?;
    let report = cut_distance_blocks(&w1, &w2, mode)?;
    if format.csv {
        return Ok(format!(
            "value,permutation,blocks,mode\n{},{},{},{}\n",
            report.value,
            join(&report.permutation),
            report.blocks,
            mode_name(report.mode)
        ));
    }
    to_json(&report)
}

pub const SAMPLE_CSV_HEADER: &str = "seed,n,edges,t_k2,t_p3,t_k3,t_c4,t_p4";

fn sample_csv_row(out: &mut String, s: &SampleRecord) {
    let g = &s.graph;
    write!(out, "{},{},{}", s.seed, g.n(), g.edge_count()).unwrap();
    for m in Motif::ALL {
        write!(out, ",{}", to_f64(&hom_density_graph(m, g))).unwrap();
    }
    out.push('\n');
}

fn cmd_sample(
    graphon: Option<&Path>,
    cdf: Option<&Path>,
    n: usize,
    seed: u64,
    count: u64,
    format: Format,
) -> CliResult {
    if count == 0 {
        return Err(CliError::input("--count must be at least 1"));
    }
    let draw: Box<dyn Fn(u64) -> Result<SampleRecord, Error>> = match (graphon, cdf) {
        (Some(path), _) => {
            let src = load_graphon_source(path)?;
            Box::new(move |s| sample_w_random(&src, n, s))
        }
        (None, Some(path)) => {
            let cdf: PiecewiseCdf = serde_json::from_str(&read(path)?)?;
            Box::new(move |s| sample_geometric_cdf(&cdf, n, s))
        }
        (None, None) => return Err(CliError::input("one of --graphon or --cdf is required")),
    };
    let samples = (seed..seed + count)
        .map(&draw)
        .collect::<Result<Vec<_>, _>>()?;
    if format.csv {
        let mut out = format!("{SAMPLE_CSV_HEADER}\n");
        for s in &samples {
            sample_csv_row(&mut out, s);
        }
        return Ok(out);
    }
    if samples.len() == 1 {
        to_json(&samples[0])
    } else {
        to_json(&samples)
    }
}

#[derive(Serialize)]
struct DensityEntry {
    motif: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    decimal: f64,
}

fn cmd_homdensity(path: &Path, motif: Option<&str>, blocks: usize, format: Format) -> CliResult {
    let motifs: Vec<Motif> = match motif {
        Some(m) => vec![m.parse()?],
        None => Motif::ALL.to_vec(),
    };
    let text = read(path)?;
    let is_graphon = text.trim_start().starts_with('{') && {
        let v: serde_json::Value = serde_json::from_str(&text)?;
        v.get("values").is_some() || v.get("breakpoints").is_some()
    };
    let (kind, entries): (&str, Vec<DensityEntry>) = if is_graphon {
        let w = load_step(path, blocks)?;
        let entries = motifs
            .iter()
            .map(|&m| DensityEntry {
                motif: m.name(),
                value: None,
                decimal: hom_density_graphon(m, &w),
            })
            .collect();
        ("graphon", entries)
    } else {
        let g = parse_graph(&text).map_err(|e| in_file(path, e))?;
        let entries = motifs
            .iter()
            .map(|&m| {
                let q = hom_density_graph(m, &g);
                DensityEntry {
                    motif: m.name(),
                    value: Some(format_rational(&q)),
                    decimal: to_f64(&q),
                }
            })
            .collect();
        ("graph", entries)
    };
    if format.csv {
        let mut out = String::from("motif,value,decimal\n");
        for e in &entries {
            writeln!(
                out,
                "{},{},{}",
                e.motif,
                e.value.as_deref().unwrap_or(""),
                e.decimal
            )
            .unwrap();
        }
        return Ok(out);
    }
    to_json(&json!({ "input": kind, "densities": entries }))
}

#[derive(Serialize)]
struct Recognition {
    /// `None` when a heuristic search found no witness.
    geometric: Option<bool>,
    conclusive: bool,
    message: &'static str,
    ordering: Option<Ordering>,
    /// A violating triple `(v, z, w)` under `witness_ordering`.
    witness: Option<(usize, usize, usize)>,
    witness_ordering: Option<Ordering>,
}

fn recognize(g: &Graph, mode: Mode) -> Result<Recognition, CliError> {
    let mode = match mode {
        Mode::Exact if g.n() > EXACT_SEARCH_LIMIT => {
            return Err(Error::CostGuard {
                what: "exact geometric ordering search",
                size: g.n(),
                limit: EXACT_SEARCH_LIMIT,
            }
            .into())
        }
        m => m,
    };
    Ok(match find_geometric_ordering(g, mode)? {
        Some(o) => Recognition {
            geometric: Some(true),
            conclusive: true,
            message: "one-dimensional geometric",
            ordering: Some(o),
            witness: None,
            witness_ordering: None,
        },
        None => {
            let probe = seriation::lbfs_order(g);
            let check = check_geometric_condition(g, &probe)?;
            let exact = mode == Mode::Exact;
            Recognition {
                geometric: exact.then_some(false),
                conclusive: exact,
                message: if exact {
                    "not one-dimensional geometric"
                } else {
                    "no witness ordering found (inconclusive)"
                },
                ordering: None,
                witness: check.witness,
                witness_ordering: Some(probe),
            }
        }
    })
}

fn cmd_recognize(path: &Path, mode: Mode, format: Format) -> CliResult {
    let g = load_graph(path)?;
    let r = recognize(&g, mode)?;
    if format.csv {
        let geometric = r
            .geometric
            .map(|b| b.to_string())
            .unwrap_or_else(|| "unknown".into());
        let witness = r
            .witness
            .map(|(a, b, c)| format!("{a} {b} {c}"))
            .unwrap_or_default();
        return Ok(format!(
            "geometric,conclusive,ordering,witness\n{},{},{},{}\n",
            geometric,
            r.conclusive,
            r.ordering
                .as_ref()
                .map(|o| join(o.perm()))
                .unwrap_or_default(),
            witness
        ));
    }
    to_json(&r)
}

fn cmd_embed_geometric(
    path: &Path,
    order: Option<Vec<usize>>,
    mode: Mode,
    format: Format,
) -> CliResult {
    let g = load_graph(path)?;
    let order = match ordering_arg(order, &g)? {
        Some(o) => {
            let check = check_geometric_condition(&g, &o)?;
            if !check.holds {
                return Err(CliError::precondition(
                    "the ordering violates the interval condition",
                    Some(
                        json!({ "geometric": false, "witness": check.witness, "witness_ordering": o }),
                    ),
                ));
            }
            o
        }
        None => {
            let r = recognize(&g, mode)?;
            match r.ordering {
                Some(o) => o,
                None => {
                    return Err(CliError::precondition(
                        r.message,
                        Some(serde_json::to_value(&r)?),
                    ))
                }
            }
        }
    };
    let embedding = construct_line_embedding(&g, &order)?;
    if format.csv {
        let mut out = String::from("vertex,coord\n");
        for (v, x) in &embedding.coords {
            writeln!(out, "{v},{x}").unwrap();
        }
        return Ok(out);
    }
    to_json(&json!({ "ordering": order, "coords": embedding.coords }))
}

fn cmd_embed_uniform(path: &Path, grid: usize, margin: f64, format: Format) -> CliResult {
    let b = load_boundary(path)?;
    let decision = match decide_uniform_embedding(&b) {
        Ok(d) => d,
        Err(e @ Error::NotConsistent(_)) => {
            let detail = refute_embedding_witness(&b)
                .ok()
                .map(|r| json!({ "refutation": r }));
            return Err(CliError::precondition(e.to_string(), detail));
        }
        Err(e) => return Err(e.into()),
    };
    if !decision.exists {
        let refutation = refute_embedding_witness(&b)?;
        return Err(CliError::precondition(
            "no uniform embedding exists",
            Some(json!({ "decision": decision, "refutation": refutation })),
        ));
    }
    let embedding = build_embedding(&b)?;
    let verification = verify_built(&b, &embedding, grid, margin);
    if format.csv {
        return Ok(format!(
            "case,exists,increasing,bounded,truncated,violations,checked,skipped_near_threshold,out_of_range_points\n{:?},{},{},{},{},{},{},{},{}\n",
            embedding.case_tag,
            decision.exists,
            decision.increasing_available,
            decision.bounded,
            embedding.truncated,
            verification.violations,
            verification.checked,
            verification.skipped_near_threshold,
            verification.out_of_range_points
        ));
    }
    to_json(&json!({ "decision": decision, "embedding": embedding, "verification": verification }))
}

fn cmd_converge(cfg: &ExperimentConfig) -> CliResult {
    let source = load_graphon_source(&cfg.source)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_count() {
        pool = pool.num_threads(k);
    }
    let pool = pool.build().map_err(|e| CliError::input(e.to_string()))?;
    let rows = pool.install(|| run_converge(cfg, &source))?;
    let csv = rows_to_csv(&rows);
    match &cfg.output {
        None => Ok(csv),
        Some(path) => {
            write_file(path, &csv)?;
            let summary: Vec<_> = medians(&rows)
                .into_iter()
                .map(|((n, o), m)| json!({ "n": n, "ordering": o, "median_gamma_star": m }))
                .collect();
            to_json(&json!({ "rows": rows.len(), "output": path, "medians": summary }))
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}
