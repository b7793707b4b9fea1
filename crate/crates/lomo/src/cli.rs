//! The `lomo` command line.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lomo_core::eval::{cross_validate_fused, grid_search, make_folds, EvalOptions, FoldPolicy, FoldSpec, Fusion, Grid, Metric};
use lomo_core::pipeline::{train_classifier, FusionMode};
use lomo_core::synth::{generate_synthetic, NegativeMode, SynthConfig};
use lomo_core::{ModelKind, ModelSpec, Pooling, SequenceSample, Solver, Task, TrainConfig};
use serde_json::json;

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::container::{read_model, write_model, ModelFile};
use crate::error::{Error, Result};
use crate::exec::Parallel;
use crate::lseq::write_lseq;
use crate::manifest::{load_dataset, write_manifest, Dataset, Entry, Manifest, MANIFEST_VERSION};
use crate::run_record::{now_ms, RunRecord};

#[derive(Debug, Parser)]
#[command(name = "lomo", version, about = "Latent ordinal models for sequence classification")]
pub struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a manifest and write the model file.
    Train(TrainCmd),
    /// Score the sequences of a manifest with a trained model.
    Predict(PredictCmd),
    /// Cross-validate a model kind, optionally with a grid or late fusion.
    Eval(EvalCmd),
    /// Generate a synthetic planted-order dataset.
    Synth(SynthCmd),
    /// Compare inference solvers on random instances.
    InferBench(BenchCmd),
}

fn parse_kind(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse().map_err(|e: lomo_core::Error| e.to_string())
}

fn parse_solver(s: &str) -> std::result::Result<Solver, String> {
    s.parse().map_err(|e: lomo_core::Error| e.to_string())
}

fn parse_pooling(s: &str) -> std::result::Result<Pooling, String> {
    s.parse().map_err(|e: lomo_core::Error| e.to_string())
}

/// Hyperparameters shared by `train` and `eval`.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "lomo", value_parser = parse_kind)]
    pub model_kind: ModelKind,
    #[arg(long, default_value_t = 3)]
    pub events: usize,
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub lambda1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma_g: f64,
    #[arg(long, default_value_t = 5)]
    pub coverage_t: usize,
    #[arg(long, default_value_t = 10_000)]
    pub maxiter: usize,
    /// Training seed; falls back to LOMO_SEED, then 0.
    #[arg(long, env = "LOMO_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value = "mean", value_parser = parse_pooling)]
    pub pooling: Pooling,
    /// Solver for the latent assignment during training.
    #[arg(long, default_value = "greedy", value_parser = parse_solver)]
    pub solver: Solver,
    #[arg(long, default_value_t = 1e-4)]
    pub init_scale: f64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

impl ModelArgs {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn spec(&self, kind: ModelKind) -> ModelSpec {
        ModelSpec::new(
            kind,
            TrainConfig {
                events: self.events,
                eta: self.eta,
                lambda1: self.lambda1,
                lambda2: self.lambda2,
                gamma_g: self.gamma_g,
                coverage_t: self.coverage_t,
                maxiter: self.maxiter,
                seed: self.seed(),
                pooling: self.pooling,
                ordinal_enabled: true,
                init_scale: self.init_scale,
                solver: self.solver,
                trace_interval: 0,
            },
        )
    }
}

#[derive(Debug, Args)]
pub struct TrainCmd {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the objective trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictCmd {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "greedy", value_parser = parse_solver)]
    pub solver: Solver,
    /// Add the latent frames, order rank and score parts of every model.
    #[arg(long)]
    pub dump_latents: bool,
    /// TSV file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct EvalCmd {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated subset of acc,avgclassacc,map,auc,eer.
    #[arg(long, default_value = "acc,avgclassacc,map,auc,eer")]
    pub metrics: String,
    /// random:K, group:K, logo or manifest.
    #[arg(long, default_value = "random:10")]
    pub folds: String,
    /// Solver used to score held-out samples.
    #[arg(long, default_value = "greedy", value_parser = parse_solver)]
    pub predict_solver: Solver,
    /// JSON grid file with lambda1, coverage_t, gamma_g and fusion_weights.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Metric the grid search maximizes; the first of --metrics by default.
    #[arg(long)]
    pub select: Option<String>,
    /// Comma-separated channels `kind[@manifest]` to fuse; a channel without
    /// a manifest uses --manifest.
    #[arg(long)]
    pub fuse: Option<String>,
    #[arg(long, default_value = "equal")]
    pub fusion: String,
    /// Comma-separated per-channel weights for z-score fusion.
    #[arg(long)]
    pub weights: Option<String>,
    /// Report file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthCmd {
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    #[arg(long, default_value_t = 30)]
    pub n_min: usize,
    #[arg(long, default_value_t = 30)]
    pub n_max: usize,
    /// Number of planted events.
    #[arg(long, default_value_t = 3)]
    pub events: usize,
    #[arg(long, default_value_t = 200)]
    pub n_pos: usize,
    #[arg(long, default_value_t = 200)]
    pub n_neg: usize,
    #[arg(long, default_value_t = 0.15)]
    pub noise_sigma: f64,
    /// shuffled_order or events_absent.
    #[arg(long, default_value = "shuffled_order")]
    pub neg_mode: String,
    #[arg(long, default_value_t = 3)]
    pub min_gap: usize,
    #[arg(long, env = "LOMO_SEED")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchCmd {
    /// Comma-separated sequence lengths.
    #[arg(long, default_value = "50,100,300")]
    pub frames: String,
    #[arg(long, default_value = "2,3")]
    pub events: String,
    #[arg(long, default_value = "3")]
    pub coverage_t: String,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    #[arg(long, default_value = "greedy,dp,brute")]
    pub solvers: String,
    #[arg(long, env = "LOMO_SEED")]
    pub seed: Option<u64>,
    /// CSV file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn usage(message: impl Into<String>) -> Error {
    Error::Usage(message.into())
}

fn parse_list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>> {
    let items: Vec<T> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| usage(format!("bad {what} `{s}`"))))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(usage(format!("empty {what} list")));
    }
    Ok(items)
}

/// Parses `--folds`.
pub fn parse_folds(text: &str, dataset: &Dataset, seed: u64) -> Result<FoldSpec> {
    let samples = &dataset.samples;
    let k = |v: &str| v.parse::<usize>().map_err(|_| usage(format!("bad fold count `{v}`")));
    let spec = match text.split_once(':') {
        Some(("random", v)) => make_folds(samples, FoldPolicy::RandomKFold, k(v)?, seed)?,
        Some(("group", v)) => make_folds(samples, FoldPolicy::GroupKFold, k(v)?, seed)?,
        None if text == "logo" => make_folds(samples, FoldPolicy::LeaveOneGroupOut, 0, seed)?,
        None if text == "manifest" => FoldSpec::fixed(samples, &dataset.folds)?,
        _ => return Err(usage(format!("unknown fold policy `{text}`"))),
    };
    Ok(spec)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, text: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text).and_then(|()| out.flush()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn record_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".run.json");
    out.with_file_name(name)
}

fn finish_record(record: RunRecord, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => record.finish(&record_path(p)),
        None => {
            record.finish_to_stderr();
            Ok(())
        }
    }
}

fn pool(jobs: usize) -> Result<Parallel> {
    Parallel::new(jobs).map_err(|e| usage(format!("cannot start {jobs} workers: {e}")))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn train(cmd: &TrainCmd, argv: &[String], started: u128) -> Result<()> {
    let data = load_dataset(&cmd.manifest)?;
    let spec = cmd.model.spec(cmd.model.model_kind);
    let mut config = spec.resolved();
    config.validate()?;
    let task = Task::detect(&data.samples)?;
    let exec = pool(cmd.model.jobs)?;
    log::info!("training {} on {} sequences ({:?})", spec.kind.name(), data.samples.len(), task);

    let mut outputs = vec![display(&cmd.out)];
    let classifier = if let (Some(trace_path), Task::Binary) = (&cmd.trace, task) {
        let report = lomo_core::train(&data.samples, &config)?;
        let mut w = csv::Writer::from_path(trace_path).map_err(|e| Error::format(trace_path, e.to_string()))?;
        w.write_record(["iteration", "objective"]).map_err(|e| Error::format(trace_path, e.to_string()))?;
        for p in &report.trace {
            w.write_record([p.iteration.to_string(), format!("{:?}", p.objective)])
                .map_err(|e| Error::format(trace_path, e.to_string()))?;
        }
        w.flush().map_err(|e| Error::io(trace_path, e))?;
        outputs.push(display(trace_path));
        log::info!("{} margin violations", report.violations);
        lomo_core::Classifier::Binary(report.model)
    } else {
        if cmd.trace.is_some() {
            log::warn!("--trace is only written for binary tasks");
        }
        train_classifier(&data.samples, &spec, task, &exec)?
    };
    write_model(&cmd.out, &ModelFile { kind: spec.kind, seed: config.seed, classifier })?;

    config.trace_interval = 0;
    let mut record = RunRecord::new(
        "train",
        argv,
        json!({
            "manifest": display(&cmd.manifest),
            "model_kind": spec.kind.name(),
            "task": task,
            "config": config,
            "jobs": cmd.model.jobs,
        }),
        Some(config.seed),
        started,
    );
    record.outputs = outputs;
    finish_record(record, Some(&cmd.out))
}

fn predict(cmd: &PredictCmd, argv: &[String], started: u128) -> Result<()> {
    let file = read_model(&cmd.model)?;
    let data = load_dataset(&cmd.manifest)?;
    let classifier = &file.classifier;
    if classifier.dim() != data.dim {
        return Err(lomo_core::Error::DimensionMismatch { expected: classifier.dim(), found: data.dim }.into());
    }
    let exec = pool(cmd.jobs)?;
    let rows = lomo_core::Executor::map(&exec, data.samples.len(), |i| classifier.latents(&data.samples[i], cmd.solver));

    let models = classifier.models();
    let binary = models.len() == 1 && matches!(classifier, lomo_core::Classifier::Binary(_));
    let prefix = |c: usize| if binary { String::new() } else { format!("c{c}_") };
    let mut header = vec!["id".to_string(), "label".into(), "decision".into()];
    for c in 0..models.len() {
        header.push(if binary { "score".into() } else { format!("score_{c}") });
    }
    if cmd.dump_latents {
        for (c, m) in models.iter().enumerate() {
            let p = prefix(c);
            header.extend((1..=m.events()).map(|j| format!("{p}k_{j}")));
            for col in ["perm_rank", "template_score", "ordering_cost", "global_score"] {
                header.push(format!("{p}{col}"));
            }
        }
    }
    let mut out = header.join("\t");
    out.push('\n');
    for (sample, latents) in data.samples.iter().zip(rows) {
        let latents = latents?;
        let scores: Vec<f64> = latents.iter().map(|a| a.total).collect();
        let mut fields = vec![sample.id().to_string(), sample.label().to_string(), classifier.decide(&scores).to_string()];
        fields.extend(scores.iter().map(|s| format!("{s:?}")));
        if cmd.dump_latents {
            for a in &latents {
                fields.extend(a.k.iter().map(usize::to_string));
                fields.push(a.perm_rank.to_string());
                fields.extend([a.template_score, a.ordering_cost, a.global_score].iter().map(|v| format!("{v:?}")));
            }
        }
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    emit(cmd.out.as_deref(), out.as_bytes())?;

    let mut record = RunRecord::new(
        "predict",
        argv,
        json!({
            "model": display(&cmd.model),
            "model_kind": file.kind.name(),
            "manifest": display(&cmd.manifest),
            "solver": cmd.solver,
            "dump_latents": cmd.dump_latents,
            "jobs": cmd.jobs,
        }),
        Some(file.seed),
        started,
    );
    record.outputs = cmd.out.iter().map(|p| display(p)).collect();
    finish_record(record, cmd.out.as_deref())
}

struct Channel {
    kind: ModelKind,
    manifest: PathBuf,
}

fn parse_channels(cmd: &EvalCmd) -> Result<Vec<Channel>> {
    let Some(list) = &cmd.fuse else {
        return Ok(vec![Channel { kind: cmd.model.model_kind, manifest: cmd.manifest.clone() }]);
    };
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (kind, manifest) = match item.split_once('@') {
                Some((k, m)) => (k, PathBuf::from(m)),
                None => (item, cmd.manifest.clone()),
            };
            Ok(Channel { kind: parse_kind(kind).map_err(usage)?, manifest })
        })
        .collect()
}

fn eval(cmd: &EvalCmd, argv: &[String], started: u128) -> Result<()> {
    let metrics: Vec<Metric> = parse_list("metric", &cmd.metrics)?;
    let fusion_mode: FusionMode = cmd.fusion.parse().map_err(|e: lomo_core::Error| usage(e.to_string()))?;
    let weights: Option<Vec<f64>> = cmd.weights.as_deref().map(|w| parse_list("weight", w)).transpose()?;
    let select = match &cmd.select {
        Some(s) => s.parse().map_err(|e: lomo_core::Error| usage(e.to_string()))?,
        None => metrics[0],
    };
    let channels = parse_channels(cmd)?;
    if channels.is_empty() {
        return Err(usage("--fuse lists no channels"));
    }
    if cmd.fuse.is_none() && cmd.weights.is_some() {
        return Err(usage("--weights needs --fuse"));
    }
    let grid: Option<Grid> = match &cmd.grid {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Some(serde_json::from_str(&text).map_err(|e| Error::Parse { path: p.clone(), line: e.line(), message: e.to_string() })?)
        }
        None => None,
    };

    let mut datasets = Vec::new();
    for ch in &channels {
        datasets.push(load_dataset(&ch.manifest)?);
    }
    let seed = cmd.model.seed();
    let folds = parse_folds(&cmd.folds, &datasets[0], seed)?;
    let specs: Vec<ModelSpec> = channels.iter().map(|c| cmd.model.spec(c.kind)).collect();
    for s in &specs {
        s.resolved().validate()?;
    }
    let samples: Vec<&[SequenceSample]> = datasets.iter().map(|d| d.samples.as_slice()).collect();
    let options = EvalOptions { metrics: metrics.clone(), solver: cmd.predict_solver };
    let exec = pool(cmd.model.jobs)?;
    let fused = cmd.fuse.is_some();
    let fusion = fused.then(|| Fusion { mode: fusion_mode, weights: weights.clone() });

    let value = match &grid {
        Some(grid) => {
            let result = grid_search(&samples, &folds, &specs, grid, fusion_mode, &options, select, &exec)?;
            let mut value = serde_json::to_value(&result.report).expect("report serializes");
            value["grid"] = json!({
                "metric": result.metric,
                "best": result.best,
                "best_value": result.best_value,
                "rows": result.rows,
            });
            value
        }
        None => {
            let report = if fused {
                cross_validate_fused(&samples, &folds, &specs, fusion.as_ref(), &options, &exec)?
            } else {
                cross_validate_fused(&samples, &folds, &specs, None, &options, &exec)?
            };
            serde_json::to_value(&report).expect("report serializes")
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    emit(cmd.out.as_deref(), text.as_bytes())?;

    let mut record = RunRecord::new(
        "eval",
        argv,
        json!({
            "manifests": channels.iter().map(|c| display(&c.manifest)).collect::<Vec<_>>(),
            "model_kinds": channels.iter().map(|c| c.kind.name()).collect::<Vec<_>>(),
            "configs": specs.iter().map(ModelSpec::resolved).collect::<Vec<_>>(),
            "metrics": metrics,
            "folds": folds.name,
            "predict_solver": cmd.predict_solver,
            "grid": grid,
            "select": select,
            "fusion": fused.then_some(fusion_mode),
            "weights": weights,
            "jobs": cmd.model.jobs,
        }),
        Some(seed),
        started,
    );
    record.outputs = cmd.out.iter().map(|p| display(p)).collect();
    finish_record(record, cmd.out.as_deref())
}

fn write_split(dir: &Path, name: &str, samples: &[SequenceSample], dim: usize) -> Result<Vec<String>> {
    let sub = dir.join(name);
    std::fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
    let mut entries = Vec::new();
    for s in samples {
        let rel = format!("{name}/{}.lseq", s.id());
        write_lseq(dir.join(&rel), std::slice::from_ref(s))?;
        entries.push(Entry { path: rel, label: s.label(), group: None, fold: None });
    }
    let manifest = dir.join(format!("{name}.json"));
    write_manifest(&manifest, &Manifest { version: MANIFEST_VERSION, dim, entries })?;
    Ok(vec![display(&manifest)])
}

fn synth(cmd: &SynthCmd, argv: &[String], started: u128) -> Result<()> {
    let neg_mode: NegativeMode = cmd.neg_mode.parse().map_err(|e: lomo_core::Error| usage(e.to_string()))?;
    let config = SynthConfig {
        dim: cmd.dim,
        n_min: cmd.n_min,
        n_max: cmd.n_max,
        events: cmd.events,
        n_pos: cmd.n_pos,
        n_neg: cmd.n_neg,
        noise_sigma: cmd.noise_sigma,
        neg_mode,
        min_gap: cmd.min_gap,
        seed: cmd.seed.unwrap_or(0),
    };
    let data = generate_synthetic(&config)?;
    for w in &data.warnings {
        log::warn!("{w}");
    }
    std::fs::create_dir_all(&cmd.out).map_err(|e| Error::io(&cmd.out, e))?;
    let mut outputs = write_split(&cmd.out, "train", &data.train, config.dim)?;
    outputs.extend(write_split(&cmd.out, "test", &data.test, config.dim)?);

    let planted = cmd.out.join("planted.tsv");
    let mut text = String::from("id\tlabel\tframes\tpositions\tperm_rank\n");
    for r in &data.records {
        let positions: Vec<String> = r.positions.iter().map(usize::to_string).collect();
        text.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.id, r.label, r.frames, positions.join(","), r.perm_rank));
    }
    std::fs::write(&planted, text).map_err(|e| Error::io(&planted, e))?;
    outputs.push(display(&planted));

    let mut record = RunRecord::new("synth", argv, serde_json::to_value(&config).expect("config serializes"), Some(config.seed), started);
    record.outputs = outputs;
    record.finish(&cmd.out.join("run.json"))
}

fn infer_bench(cmd: &BenchCmd, argv: &[String], started: u128) -> Result<()> {
    let solvers = cmd
        .solvers
        .split(',')
        .map(|s| parse_solver(s.trim()).map_err(usage))
        .collect::<Result<Vec<_>>>()?;
    let config = BenchConfig {
        frames: parse_list("frame count", &cmd.frames)?,
        events: parse_list("event count", &cmd.events)?,
        coverage: parse_list("coverage", &cmd.coverage_t)?,
        dim: cmd.dim,
        instances: cmd.instances,
        solvers,
        seed: cmd.seed.unwrap_or(0),
    };
    if config.dim == 0 || config.instances == 0 {
        return Err(usage("--dim and --instances must be positive"));
    }
    if let Some(&m) = config.events.iter().find(|&&m| m == 0 || m > lomo_core::MAX_EVENTS) {
        return Err(usage(format!("event count {m} outside 1..={}", lomo_core::MAX_EVENTS)));
    }
    let (rows, notices) = run_bench(&config)?;
    for n in &notices {
        eprintln!("notice: {n}");
    }
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).map_err(|e| Error::io("<csv>", e))?;
    emit(cmd.out.as_deref(), &csv)?;

    let mut record = RunRecord::new(
        "infer-bench",
        argv,
        json!({
            "frames": config.frames,
            "events": config.events,
            "coverage_t": config.coverage,
            "dim": config.dim,
            "instances": config.instances,
            "solvers": config.solvers,
        }),
        Some(config.seed),
        started,
    );
    record.outputs = cmd.out.iter().map(|p| display(p)).collect();
    finish_record(record, cmd.out.as_deref())
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    let started = now_ms();
    match &cli.command {
        Command::Train(c) => train(c, argv, started),
        Command::Predict(c) => predict(c, argv, started),
        Command::Eval(c) => eval(c, argv, started),
        Command::Synth(c) => synth(c, argv, started),
        Command::InferBench(c) => infer_bench(c, argv, started),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match run(&cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn record_path_appends_suffix() {
        assert_eq!(record_path(Path::new("out/model.lomo")), PathBuf::from("out/model.lomo.run.json"));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list::<usize>("n", "1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(matches!(parse_list::<usize>("n", "1,x"), Err(Error::Usage(_))));
        assert!(matches!(parse_list::<usize>("n", ""), Err(Error::Usage(_))));
    }
}
