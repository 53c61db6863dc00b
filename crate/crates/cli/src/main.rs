use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use netf_core::dgp::{generate_presets, DEFAULT_BURN_IN};
use netf_core::{
    ari, avg_silhouette, feature_matrix_for, kmeans, load_csv, load_ucr_tsv, minmax_rescale,
    nmi_with, pca, select_k, Dataset, FeatureMatrix, KMeansConfig, Mapping, NmiNormalization,
    Partition, Preset, SelectionMetric, DEFAULT_ETA,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

/// Complex-network features and feature-based clustering for time series.
#[derive(Parser)]
#[command(name = "netf", version)]
struct Cli {
    /// Worker threads for series-level parallelism (default: available parallelism).
    #[arg(long, global = true, env = "NETF_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a labelled dataset from the model presets.
    Generate(GenerateArgs),
    /// Map each series to its graphs and write the feature matrix.
    Features(FeaturesArgs),
    /// Rescale, project and cluster a feature matrix.
    Cluster(ClusterArgs),
    /// Compare two assignment files.
    Eval(EvalArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Comma-separated preset names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    preset: Vec<String>,
    /// Realizations per preset.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum InputFormat {
    /// Comma-separated rows, optional leading label column.
    Csv,
    /// Tab-separated rows with a leading class label.
    Ucr,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Csv)]
    format: InputFormat,
    /// The first CSV column holds class labels.
    #[arg(long)]
    labels: bool,
    /// Quantile count for the quantile graph.
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: usize,
    #[arg(long, value_delimiter = ',', default_value = "wnvg,whvg,qg")]
    mappings: Vec<Mapping>,
    /// Feature CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving one edge list per series and mapping.
    #[arg(long)]
    export_graphs: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum NmiNorm {
    Geometric,
    Arithmetic,
}

impl From<NmiNorm> for NmiNormalization {
    fn from(n: NmiNorm) -> Self {
        match n {
            NmiNorm::Geometric => NmiNormalization::Geometric,
            NmiNorm::Arithmetic => NmiNormalization::Arithmetic,
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// Feature CSV written by `features`.
    #[arg(long)]
    input: PathBuf,
    #[arg(
        long,
        conflicts_with = "select_k",
        required_unless_present = "select_k"
    )]
    k: Option<usize>,
    /// Candidate range `min:max` for choosing k.
    #[arg(long, value_parser = parse_range)]
    select_k: Option<(usize, usize)>,
    /// Score used by --select-k.
    #[arg(long, default_value = "as")]
    metric: SelectionMetric,
    #[arg(long, default_value_t = 10)]
    repetitions: usize,
    /// k-means restarts per repetition.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cluster on the leading principal component scores only.
    #[arg(long)]
    pcs: Option<usize>,
    #[arg(long, value_enum, default_value_t = NmiNorm::Geometric)]
    nmi_norm: NmiNorm,
    /// Report JSON path; standard output when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Assignment CSV (`id,cluster`) from the lowest-inertia repetition.
    #[arg(long)]
    assignments: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, value_enum, default_value_t = NmiNorm::Geometric)]
    nmi_norm: NmiNorm,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected min:max, got {s:?}"))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("invalid range {a}:{b}"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        ensure!(n > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("building thread pool")?;
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Features(a) => cmd_features(a),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_manifest(out: &Path, command: &str, body: serde_json::Value) -> Result<()> {
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "output": out.display().to_string(),
        "parameters": body,
    });
    write_json(&manifest_path(out), &manifest)
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let presets = if a.preset.iter().any(|p| p.eq_ignore_ascii_case("all")) {
        ensure!(
            a.preset.len() == 1,
            "`all` cannot be combined with other presets"
        );
        Preset::ALL.to_vec()
    } else {
        a.preset
            .iter()
            .map(|name| {
                Preset::from_name(name.trim()).with_context(|| {
                    let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                    format!("unknown preset {name:?} (known: {})", known.join(", "))
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    ensure!(a.n > 0, "--n must be positive");

    let models: Vec<(String, netf_core::ModelSpec)> = presets
        .iter()
        .map(|p| (p.label().to_string(), p.spec()))
        .collect();
    let ds = if a.burn_in == DEFAULT_BURN_IN {
        generate_presets(&presets, a.n, a.length, a.seed)?
    } else {
        netf_core::dgp::generate_dataset(&models, a.n, a.length, a.seed, a.burn_in)?
    };
    netf_core::write_csv(&ds, &a.out)?;

    let specs: Vec<_> = presets
        .iter()
        .zip(&models)
        .enumerate()
        .map(|(i, (p, (label, spec)))| {
            let first = a.seed.wrapping_add((i * a.n) as u64);
            json!({
                "preset": p.name(),
                "label": label,
                "spec": spec,
                "seeds": [first, first.wrapping_add(a.n as u64 - 1)],
            })
        })
        .collect();
    write_manifest(
        &a.out,
        "generate",
        json!({
            "seed": a.seed,
            "n": a.n,
            "length": a.length,
            "burn_in": a.burn_in,
            "rows": ds.len(),
            "models": specs,
        }),
    )?;
    log::info!("wrote {} series to {}", ds.len(), a.out.display());
    Ok(())
}

fn load_dataset(path: &Path, format: InputFormat, labels: bool) -> Result<Dataset> {
    let ds = match format {
        InputFormat::Csv => load_csv(path, labels)?,
        InputFormat::Ucr => load_ucr_tsv(path)?,
    };
    Ok(ds)
}

fn dedup_mappings(mappings: &[Mapping]) -> Result<Vec<Mapping>> {
    ensure!(!mappings.is_empty(), "no mappings requested");
    let mut out = Vec::new();
    for &m in mappings {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

fn cmd_features(a: FeaturesArgs) -> Result<()> {
    let ds = load_dataset(&a.input, a.format, a.labels)?;
    let mappings = dedup_mappings(&a.mappings)?;
    let fm = feature_matrix_for(&ds, a.eta, &mappings)?;
    for w in fm.warnings() {
        eprintln!("warning: {w}");
    }

    if let Some(dir) = &a.export_graphs {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        ds.series().par_iter().try_for_each(|s| -> Result<()> {
            for &m in &mappings {
                let g = m.graph(s.values(), a.eta)?;
                let path = dir.join(format!("{}_{}.edges", s.id(), m.name()));
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                g.write_edge_list(&mut w)?;
                w.flush()?;
            }
            Ok(())
        })?;
    }

    match &a.out {
        Some(path) => {
            fm.write_csv_file(path)?;
            let names: Vec<_> = mappings.iter().map(|m| m.name()).collect();
            write_manifest(
                path,
                "features",
                json!({
                    "input": a.input.display().to_string(),
                    "format": a.format,
                    "labels": ds.has_labels(),
                    "eta": a.eta,
                    "mappings": names,
                    "rows": fm.row_count(),
                    "columns": fm.columns(),
                    "warnings": fm.warnings(),
                }),
            )?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            fm.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Repetition {
    seed: u64,
    inertia: f64,
    #[serde(rename = "as")]
    silhouette: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nmi: Option<f64>,
}

#[derive(Serialize)]
struct ClusterReport {
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    selection: Option<netf_core::cluster::KSelection>,
    items: usize,
    components: usize,
    repetitions: usize,
    restarts: usize,
    seed: u64,
    #[serde(rename = "as")]
    silhouette: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ari: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nmi: Option<f64>,
    per_repetition: Vec<Repetition>,
    explained_variance: Vec<f64>,
    explained_variance_ratio: Vec<f64>,
    loadings: Vec<Vec<f64>>,
    feature_columns: Vec<String>,
    warnings: Vec<String>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn cmd_cluster(a: ClusterArgs) -> Result<()> {
    ensure!(a.repetitions > 0, "--repetitions must be positive");
    ensure!(a.restarts > 0, "--restarts must be positive");
    let fm = FeatureMatrix::read_csv_file(&a.input)?;
    ensure!(fm.row_count() >= 2, "need at least two rows to cluster");
    let truth = fm.labels().map(Partition::from_labels);

    let scaled = minmax_rescale(&fm);
    for w in scaled.warnings() {
        eprintln!("warning: {w}");
    }
    let model = pca(scaled.rows())?;
    let components = match a.pcs {
        Some(m) => {
            ensure!(
                m >= 1 && m <= model.loadings.len(),
                "--pcs must be in 1..={}",
                model.loadings.len()
            );
            m
        }
        None => model.loadings.len(),
    };
    let points = model.leading_scores(components);

    let base = KMeansConfig::new(a.k.unwrap_or(1), a.seed).with_restarts(a.restarts);
    let (k, selection) = match (a.k, a.select_k) {
        (Some(k), None) => (k, None),
        (None, Some((lo, hi))) => {
            let sel = select_k(&points, lo, hi, a.metric, truth.as_ref(), &base)?;
            (sel.k, Some(sel))
        }
        _ => bail!("exactly one of --k and --select-k is required"),
    };
    ensure!(
        k >= 1 && k <= points.len(),
        "k = {k} invalid for {} items",
        points.len()
    );

    let norm = NmiNormalization::from(a.nmi_norm);
    let runs = (0..a.repetitions)
        .map(|r| {
            let seed = a.seed.wrapping_add(r as u64);
            let res = kmeans(&points, &KMeansConfig { k, seed, ..base })?;
            let silhouette = if res.k >= 2 {
                avg_silhouette(&points, &res.partition)?
            } else {
                0.0
            };
            let (ari_v, nmi_v) = match &truth {
                Some(t) => (
                    Some(ari(&res.partition, t)?),
                    Some(nmi_with(&res.partition, t, norm)?),
                ),
                None => (None, None),
            };
            let rep = Repetition {
                seed,
                inertia: res.inertia,
                silhouette,
                ari: ari_v,
                nmi: nmi_v,
            };
            Ok((rep, res.partition))
        })
        .collect::<Result<Vec<_>>>()?;

    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.0.inertia.total_cmp(&b.0.inertia).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one repetition");

    if let Some(path) = &a.assignments {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "id,cluster")?;
        for (id, c) in fm.row_ids().iter().zip(runs[best].1.assignments()) {
            writeln!(w, "{id},{c}")?;
        }
        w.flush()?;
    }

    let reps: Vec<Repetition> = runs.into_iter().map(|(r, _)| r).collect();
    let report = ClusterReport {
        k,
        selection,
        items: points.len(),
        components,
        repetitions: a.repetitions,
        restarts: a.restarts,
        seed: a.seed,
        silhouette: mean(reps.iter().map(|r| r.silhouette)),
        ari: truth
            .as_ref()
            .map(|_| mean(reps.iter().filter_map(|r| r.ari))),
        nmi: truth
            .as_ref()
            .map(|_| mean(reps.iter().filter_map(|r| r.nmi))),
        per_repetition: reps,
        explained_variance: model.explained_variance.clone(),
        explained_variance_ratio: model.explained_variance_ratio.clone(),
        loadings: model.loadings.clone(),
        feature_columns: fm.columns().to_vec(),
        warnings: scaled.warnings().to_vec(),
    };

    match &a.report {
        Some(path) => {
            write_json(path, &report)?;
            write_manifest(
                path,
                "cluster",
                json!({
                    "input": a.input.display().to_string(),
                    "k": a.k,
                    "select_k": a.select_k,
                    "metric": a.metric,
                    "repetitions": a.repetitions,
                    "restarts": a.restarts,
                    "seed": a.seed,
                    "pcs": a.pcs,
                    "nmi_norm": a.nmi_norm,
                    "assignments": a.assignments.as_ref().map(|p| p.display().to_string()),
                    "best_repetition": best,
                }),
            )?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn read_assignments(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .with_context(|| format!("{} is empty", path.display()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    ensure!(
        cols.len() == 2 && cols[0] == "id",
        "{}: expected header `id,<label>`, got {header:?}",
        path.display()
    );
    lines
        .map(|(i, line)| {
            let (id, c) = line
                .split_once(',')
                .with_context(|| format!("{}: line {} has no comma", path.display(), i + 1))?;
            Ok((id.trim().to_string(), c.trim().to_string()))
        })
        .collect()
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let pred = read_assignments(&a.pred)?;
    let truth = read_assignments(&a.truth)?;
    let mut truth_by_id: HashMap<&str, &str> = HashMap::with_capacity(truth.len());
    for (id, c) in &truth {
        ensure!(
            truth_by_id.insert(id, c).is_none(),
            "duplicate id {id:?} in {}",
            a.truth.display()
        );
    }
    ensure!(
        pred.len() == truth.len(),
        "id mismatch: {} rows in {}, {} in {}",
        pred.len(),
        a.pred.display(),
        truth.len(),
        a.truth.display()
    );
    ensure!(!pred.is_empty(), "no assignments to compare");
    let mut p_labels = Vec::with_capacity(pred.len());
    let mut t_labels = Vec::with_capacity(pred.len());
    for (id, c) in &pred {
        let t = truth_by_id
            .remove(id.as_str())
            .with_context(|| format!("id mismatch: {id:?} missing from {}", a.truth.display()))?;
        p_labels.push(c.as_str());
        t_labels.push(t);
    }
    let p = Partition::from_labels(&p_labels);
    let t = Partition::from_labels(&t_labels);
    let report = json!({
        "items": pred.len(),
        "ari": ari(&p, &t)?,
        "nmi": nmi_with(&p, &t, a.nmi_norm.into())?,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
