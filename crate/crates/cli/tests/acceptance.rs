//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion outside `KNOWN_RED` fails.
//!
//! Run with `cargo test --test acceptance`.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use linembed::boundary::examples;
use linembed::cutmetric::{chi_product, continuity_check, cut_norm, CONTINUITY_BLOCKS};
use linembed::gamma::{
    diagonally_increasing_check, gamma, gamma_star, gamma_star_order, gamma_tilde, max_g_w,
    SearchOptions,
};
use linembed::geometric::find_geometric_ordering;
use linembed::uniform::{
    build_embedding, decide_uniform_embedding, refute_embedding_witness, two_sided_closed_form,
    verify_built, verify_embedding, Case,
};
use linembed::{graph_to_step_graphon, Graph, Mode, Ordering, Rational, StepGraphon};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail for reasons recorded in the README.
const KNOWN_RED: &[u32] = &[7, 9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn linembed(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_linembed"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("LINEMBED_THREADS", t),
        None => cmd.env_remove("LINEMBED_THREADS"),
    };
    let out = cmd.output().expect("run linembed");
    assert!(
        out.status.success(),
        "linembed {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.random();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Ordering {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    Ordering::from_perm(p).unwrap()
}

/// Symmetric `n`-block graphon whose entries are `lo + k / denom` for
/// integer `k` in `0..=span`.
fn random_graphon(rng: &mut ChaCha8Rng, n: usize, lo: f64, span: u32, denom: f64) -> StepGraphon {
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = lo + rng.random_range(0..=span) as f64 / denom;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    StepGraphon::new(n, values).unwrap()
}

/// Halves `w` until its cut norm is at most `cap`. Halving keeps entries dyadic.
fn shrink_to(w: StepGraphon, cap: f64) -> StepGraphon {
    let mut w = w;
    while cut_norm(&w, Mode::Exact).unwrap().value > cap {
        w = w.scaled(0.5);
    }
    w
}

/// One representative of each isomorphism class of graphs on 4 vertices.
fn graphs_on_four() -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
        .collect();
    let mut perms = Vec::new();
    let mut p = vec![0, 1, 2, 3];
    permutations(&mut p, 0, &mut perms);
    let canonical = |mask: u32| {
        perms
            .iter()
            .map(|s: &Vec<usize>| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(0u32, |acc, (_, &(u, v))| {
                        let (a, b) = (s[u].min(s[v]), s[u].max(s[v]));
                        acc | 1 << pairs.iter().position(|&q| q == (a, b)).unwrap()
                    })
            })
            .min()
            .unwrap()
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0..64u32 {
        if seen.insert(canonical(mask)) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(Graph::from_edges(4, &edges).unwrap());
        }
    }
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut corpus = graphs_on_four();
    let classes = corpus.len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.random_range(1..=7);
        corpus.push(random_graph(&mut rng, n));
    }
    let mut mismatches = 0;
    let mut zeros = 0;
    for g in &corpus {
        let zero =
            gamma_star(g, &SearchOptions::default()).unwrap().value == Rational::from_integer(0);
        let found = find_geometric_ordering(g, Mode::Exact).unwrap().is_some();
        zeros += zero as usize;
        mismatches += (zero != found) as usize;
    }
    let elapsed = start.elapsed();
    outcome(
        classes == 11 && mismatches == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} graphs ({classes} classes on 4 vertices + 200 random), {zeros} with zero Gamma*, {mismatches} mismatches, {:.1?}",
            corpus.len(),
            elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    let mut di = 0;
    let mut inexact = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let w = random_graphon(&mut rng, n, 0.0, 4, 4.0);
        let report = gamma(&w, &SearchOptions::default()).unwrap();
        inexact += report.estimate_exact.is_none() as usize;
        let zero = report.estimate_exact == Some(Rational::from_integer(0));
        let holds = diagonally_increasing_check(&w);
        di += holds as usize;
        mismatches += (zero != holds) as usize;
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && inexact == 0 && elapsed < Duration::from_secs(60),
        format!("500 graphons, {di} diagonally increasing, {mismatches} mismatches, {inexact} inexact, {elapsed:.1?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad_sandwich = 0;
    let mut bad_band = 0;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=12);
        let g = random_graph(&mut rng, n);
        let order = random_order(&mut rng, n);
        let star = gamma_star_order(&g, &order, &SearchOptions::default()).unwrap();
        let w = graph_to_step_graphon(&g, &order).unwrap();
        let report = gamma(&w, &SearchOptions::default()).unwrap();
        let est = report
            .estimate_exact
            .expect("graph-derived graphons are exact");
        let diff = star.value - est;
        let gap = if diff < Rational::from_integer(0) {
            -diff
        } else {
            diff
        };
        if gap > Rational::new(2, n as i128) {
            bad_sandwich += 1;
        }
        worst = worst.max(n as f64 * linembed::exact::to_f64(&gap));
        for b in [report.lower, report.upper] {
            if (star.value_f64 - b).abs() > 6.0 / n as f64 {
                bad_band += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad_sandwich == 0 && bad_band == 0 && elapsed < Duration::from_secs(120),
        format!(
            "200 pairs, {bad_sandwich} over 2/n, {bad_band} band endpoints over 6/n, max n*gap {worst:.3}, {elapsed:.1?}"
        ),
    )
}

/// `g_w` straight from its defining double sum, with `beta` in block units.
fn g_w_oracle(w: &[[i128; 3]; 3], beta: [i128; 3]) -> Rational {
    let n = 3;
    let mut total = Rational::from_integer(0);
    for i in 0..n {
        for j in i + 1..n {
            let lo: i128 = (0..i).map(|k| beta[k] * (w[k][j] - w[k][i])).sum();
            let hi: i128 = (j + 1..n).map(|k| beta[k] * (w[k][i] - w[k][j])).sum();
            total += Rational::new(lo.max(0) + hi.max(0), n as i128);
        }
    }
    total / Rational::from_integer((n * n) as i128)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let a = [[0, 0, 1], [0, 0, 0], [1, 0, 0]];
    let w = StepGraphon::from_rows(&a.map(|r| r.map(|v| v as f64).to_vec())).unwrap();
    let (best, subset) = max_g_w(&w, &SearchOptions::default()).unwrap();
    let oracle = (0..8u32)
        .map(|bits| {
            g_w_oracle(
                &a,
                [
                    (bits & 1) as i128,
                    (bits >> 1 & 1) as i128,
                    (bits >> 2 & 1) as i128,
                ],
            )
        })
        .max()
        .unwrap();
    let target = Rational::new(2, 27);
    let elapsed = start.elapsed();
    outcome(
        best.exact == Some(target) && oracle == target && elapsed < Duration::from_secs(1),
        format!(
            "max g_w = {} at {:?}, oracle {}, {elapsed:.1?}",
            best.exact
                .map(|q| linembed::format_rational(&q))
                .unwrap_or_else(|| best.value.to_string()),
            subset.indices(),
            linembed::format_rational(&oracle)
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    let mut unmet = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..100 {
        let w1 = shrink_to(random_graphon(&mut rng, 4, 0.0, 16, 16.0), 0.25);
        let w2 = shrink_to(random_graphon(&mut rng, 4, 0.0, 16, 16.0), 0.25);
        let r = continuity_check(&w1, &w2, CONTINUITY_BLOCKS).unwrap();
        unmet += !r.preconditions_met as usize;
        failures += !r.holds as usize;
        tightest = tightest.min(r.rhs - r.lhs_max);
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && unmet == 0 && elapsed < Duration::from_secs(120),
        format!("100 pairs, {failures} violations, {unmet} outside preconditions, min slack {tightest:.4}, {elapsed:.1?}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    let mut unmet = 0;
    let mut worst_ratio = 0.0f64;
    for _ in 0..100 {
        let w = shrink_to(random_graphon(&mut rng, 4, -2.0, 32, 8.0), 0.5);
        let r = chi_product(&w, Mode::Exact).unwrap();
        unmet += !r.preconditions_met as usize;
        failures += (r.lower > r.bound) as usize;
        if r.bound > 0.0 {
            worst_ratio = worst_ratio.max(r.lower / r.bound);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && unmet == 0 && elapsed < Duration::from_secs(60),
        format!(
            "100 graphons, {failures} violations, {unmet} outside preconditions, max lower/bound {worst_ratio:.3}, {elapsed:.1?}"
        ),
    )
}

const CONVERGE_SIZES: [usize; 4] = [20, 40, 80, 160];

fn converge_csv(dir: &Path, source: &str, tag: &str, threads: Option<&str>) -> String {
    let out = dir.join(format!("{tag}.csv"));
    let config = serde_json::json!({
        "source": data(source),
        "sizes": CONVERGE_SIZES,
        "seeds_per_size": 20,
        "orderings": ["latent"],
        "output": out,
    });
    let cfg = dir.join(format!("{tag}.json"));
    std::fs::write(&cfg, config.to_string()).unwrap();
    linembed(&["converge", "--config", cfg.to_str().unwrap()], threads);
    std::fs::read_to_string(out).unwrap()
}

fn medians(csv: &str) -> BTreeMap<usize, f64> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[6], "ok", "{line}");
        groups
            .entry(f[0].parse().unwrap())
            .or_default()
            .push(f[3].parse().unwrap());
    }
    groups
        .into_iter()
        .map(|(n, mut v)| {
            v.sort_by(f64::total_cmp);
            let m = v.len();
            (
                n,
                if m % 2 == 1 {
                    v[m / 2]
                } else {
                    (v[m / 2 - 1] + v[m / 2]) / 2.0
                },
            )
        })
        .collect()
}

fn format_medians(m: &BTreeMap<usize, f64>) -> String {
    m.iter()
        .map(|(n, v)| format!("{n}:{v:.5}"))
        .collect::<Vec<_>>()
        .join(" ")
}

struct ConvergeRuns {
    di: String,
    corner: String,
}

fn criterion_7(dir: &Path) -> (Outcome, ConvergeRuns) {
    let start = Instant::now();
    let di = converge_csv(dir, "two_sided.json", "di", None);
    let corner = converge_csv(dir, "corner.json", "corner", None);
    let elapsed = start.elapsed();
    let md = medians(&di);
    let mc = medians(&corner);
    let values: Vec<f64> = md.values().copied().collect();
    let decreasing = values.windows(2).all(|p| p[1] < p[0]);
    let small = md[&160] < 0.005;
    let w =
        linembed::io::parse_step_graphon(&std::fs::read_to_string(data("corner.json")).unwrap())
            .unwrap();
    let tilde = gamma_tilde(&w, &SearchOptions::default()).unwrap().estimate;
    let above = mc[&160] > tilde / 2.0;
    let pass = decreasing && small && above && elapsed < Duration::from_secs(600);
    let detail = format!(
        "boundary medians [{}] strictly decreasing: {decreasing}, n=160 below 0.005: {small}; \
         corner medians [{}] n=160 above half of Gamma~ = {tilde:.5}: {above}; {elapsed:.1?}",
        format_medians(&md),
        format_medians(&mc)
    );
    (outcome(pass, detail), ConvergeRuns { di, corner })
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();

    let b = examples::two_sided();
    let d = decide_uniform_embedding(&b).unwrap();
    let a_case = d.exists && d.case_tag == Some(Case::Case3);
    let a_sets = d.fixed_points.l == [0.5] && d.fixed_points.r == [0.5];
    let closed = verify_embedding(&b, two_sided_closed_form, 400, 1e-6);
    let built = verify_built(&b, &build_embedding(&b).unwrap(), 400, 1e-6);
    let spots = two_sided_closed_form(0.0) == Some(-2.0)
        && two_sided_closed_form(1.0) == Some(2.0)
        && two_sided_closed_form(0.5) == Some(0.0);
    let a = a_case && a_sets && closed.violations == 0 && built.violations == 0 && spots;
    notes.push(format!(
        "(a) {:?} L={:?} R={:?}, closed form {} violations, constructed {} violations ({} unevaluated), spot values {spots}",
        d.case_tag, d.fixed_points.l, d.fixed_points.r, closed.violations, built.violations, built.out_of_range_points
    ));

    let b = examples::three_fixed_points();
    let d = decide_uniform_embedding(&b).unwrap();
    let refutation = refute_embedding_witness(&b).unwrap();
    let b_ok = !d.exists && refutation.sequences.len() == 3;
    notes.push(format!(
        "(b) exists={} with {} blocking sequences",
        d.exists,
        refutation.sequences.len()
    ));

    let b = examples::half_shift();
    let d = decide_uniform_embedding(&b).unwrap();
    let e = build_embedding(&b).unwrap();
    let v = verify_built(&b, &e, 400, 1e-6);
    let c_ok = d.exists
        && d.bounded
        && d.increasing_available
        && d.case_tag == Some(Case::Case1)
        && v.violations == 0
        && v.out_of_range_points == 0;
    notes.push(format!(
        "(c) {:?} bounded={} increasing={} with {} violations",
        d.case_tag, d.bounded, d.increasing_available, v.violations
    ));

    let elapsed = start.elapsed();
    notes.push(format!("{elapsed:.1?}"));
    outcome(
        a && b_ok && c_ok && elapsed < Duration::from_secs(60),
        notes.join("; "),
    )
}

/// Mean and standard error of the mean.
fn mean_se(v: &[f64]) -> (f64, f64) {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn sample_csv(threads: Option<&str>) -> String {
    let half = data("half.json");
    let out = linembed(
        &[
            "sample",
            "--graphon",
            half.to_str().unwrap(),
            "--n",
            "200",
            "--count",
            "100",
            "--csv",
        ],
        threads,
    );
    String::from_utf8(out.stdout).unwrap()
}

fn criterion_9() -> (Outcome, String) {
    let start = Instant::now();
    let csv = sample_csv(None);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let column = |name: &str| -> Vec<f64> {
        let k = header.iter().position(|h| *h == name).unwrap();
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
            .collect()
    };
    let n = 200.0f64;
    let (k2, k2_se) = mean_se(&column("t_k2"));
    let (k3, k3_se) = mean_se(&column("t_k3"));
    let z2 = (k2 - 0.5) / k2_se;
    let z3 = (k3 - 0.125) / k3_se;
    // Expectations for a simple graph, whose adjacency matrix has a zero diagonal.
    let finite_k2 = (n - 1.0) / (2.0 * n);
    let finite_k3 = (n - 1.0) * (n - 2.0) / (8.0 * n * n);
    let elapsed = start.elapsed();
    let pass = z2.abs() <= 4.0 && z3.abs() <= 4.0 && elapsed < Duration::from_secs(120);
    let detail = format!(
        "t(K2) mean {k2:.5} (z = {z2:.2} against 1/2, {:.2} against {finite_k2}); \
         t(K3) mean {k3:.5} (z = {z3:.2} against 1/8, {:.2} against {finite_k3:.6}); {elapsed:.1?}",
        (k2 - finite_k2) / k2_se,
        (k3 - finite_k3) / k3_se
    );
    (outcome(pass, detail), csv)
}

fn criterion_10(dir: &Path, runs: &ConvergeRuns, samples: &str) -> Outcome {
    let di = converge_csv(dir, "two_sided.json", "di_again", Some("1"));
    let corner = converge_csv(dir, "corner.json", "corner_again", Some("3"));
    let sample_again = sample_csv(Some("2"));
    let same = [
        di == runs.di,
        corner == runs.corner,
        sample_again == samples,
    ];
    outcome(
        same.iter().all(|&s| s),
        format!(
            "converge boundary identical: {}, converge corner identical: {}, sample identical: {} (reruns on 1, 3 and 2 threads)",
            same[0], same[1], same[2]
        ),
    )
}

fn main() {
    // Honour `cargo test -- --list` and filters without running anything.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |k: u32, o: Outcome| {
        let tag = match (o.pass, KNOWN_RED.contains(&k)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {k:>2}: {tag}: {}", o.detail);
        results.push((k, o));
    };
    report(1, criterion_1());
    report(2, criterion_2());
    report(3, criterion_3());
    report(4, criterion_4());
    report(5, criterion_5());
    report(6, criterion_6());
    let (c7, runs) = criterion_7(dir.path());
    report(7, c7);
    report(8, criterion_8());
    let (c9, samples) = criterion_9();
    report(9, c9);
    report(10, criterion_10(dir.path(), &runs, &samples));

    let unexpected: Vec<u32> = results
        .iter()
        .filter(|(k, o)| !o.pass && !KNOWN_RED.contains(k))
        .map(|(k, _)| *k)
        .collect();
    let passed = results.iter().filter(|(_, o)| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        println!("acceptance: unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
