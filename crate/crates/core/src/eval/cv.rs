//! Cross-validated evaluation of single models and late-fused ensembles.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::folds::{FoldPolicy, FoldSpec};
use super::metrics::{accuracy, auc, average_class_accuracy, average_precision, roc_eer_rate};
use crate::hash::Fnv1a;
use crate::pipeline::{decide, late_fusion, predict_table, train_classifier, FusionMode, ScoreTable};
use crate::{Error, Executor, ModelSpec, Result, SequenceSample, Solver, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Accuracy,
    AvgClassAccuracy,
    MeanAp,
    Auc,
    EerRate,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Accuracy, Metric::AvgClassAccuracy, Metric::MeanAp, Metric::Auc, Metric::EerRate];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "acc",
            Metric::AvgClassAccuracy => "avgclassacc",
            Metric::MeanAp => "map",
            Metric::Auc => "auc",
            Metric::EerRate => "eer",
        }
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(alloc::format!("unknown metric `{s}`")))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Metric {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub metrics: Vec<Metric>,
    /// Solver used when scoring held-out samples.
    pub solver: Solver,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { metrics: Metric::ALL.to_vec(), solver: Solver::Greedy }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Fusion {
    pub mode: FusionMode,
    pub weights: Option<Vec<f64>>,
}

/// Metric values by name; `None` where a metric is undefined for the data
/// (for example AUC on a fold holding a single class).
pub type MetricValues = BTreeMap<String, Option<f64>>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassMetrics {
    pub label: i64,
    pub support: usize,
    pub recall: Option<f64>,
    pub average_precision: Option<f64>,
    pub auc: Option<f64>,
    pub eer_rate: Option<f64>,
}

/// Raw confusion counts, rows true label and columns prediction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Confusion {
    pub labels: Vec<i64>,
    pub counts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Evaluation {
    pub metrics: MetricValues,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: Confusion,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub metrics: MetricValues,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FusionInfo {
    pub mode: FusionMode,
    pub channels: usize,
    pub weights: Option<Vec<f64>>,
    /// Which samples the z-score statistics are computed over.
    pub zscore_statistics: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EvalReport {
    pub config_fingerprint: String,
    pub task: Task,
    pub fold_name: String,
    pub fold_policy: FoldPolicy,
    pub metrics: Vec<Metric>,
    pub folds: Vec<FoldResult>,
    /// Mean of the per-fold values over folds where the metric is defined.
    pub aggregate: MetricValues,
    /// Metrics over all held-out predictions taken together.
    pub pooled: Evaluation,
    pub fusion: Option<FusionInfo>,
}

fn positives(labels: &[i64], class: i64) -> Vec<bool> {
    labels.iter().map(|&l| l == class).collect()
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedMetric(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Scores every requested metric on a score table.
///
/// Binary tables have one column and ranking metrics refer to the +1 class.
/// Multiclass ranking metrics are per-class one-vs-rest values averaged over
/// the classes where they are defined.
pub fn evaluate_table(table: &ScoreTable, labels: &[i64], task: Task, metrics: &[Metric]) -> Result<Evaluation> {
    if table.rows() != labels.len() {
        return Err(Error::TableMismatch(alloc::format!("{} rows for {} labels", table.rows(), labels.len())));
    }
    if table.columns != task.columns() {
        return Err(Error::TableMismatch("score columns do not match the task".into()));
    }
    if table.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let class_labels = task.labels();
    if let Some(&l) = labels.iter().find(|l| !class_labels.contains(l)) {
        return Err(Error::InvalidLabel { label: l, reason: "not a class of this task" });
    }
    let predictions: Vec<i64> = (0..table.rows()).map(|i| decide(task, table.row(i))).collect();

    let mut per_class = Vec::with_capacity(class_labels.len());
    for (c, &label) in class_labels.iter().enumerate() {
        let scores = match task {
            Task::Binary if label == 1 => table.column(0),
            Task::Binary => table.column(0).into_iter().map(|s| -s).collect(),
            Task::Multiclass { .. } => table.column(c),
        };
        let pos = positives(labels, label);
        let support = pos.iter().filter(|&&b| b).count();
        let hits = predictions.iter().zip(labels).filter(|(p, l)| **l == label && **p == label).count();
        per_class.push(ClassMetrics {
            label,
            support,
            recall: (support > 0).then(|| hits as f64 / support as f64),
            average_precision: defined(average_precision(&scores, &pos))?,
            auc: defined(auc(&scores, &pos))?,
            eer_rate: defined(roc_eer_rate(&scores, &pos))?,
        });
    }

    let ranked: Vec<&ClassMetrics> = match task {
        Task::Binary => per_class.iter().filter(|c| c.label == 1).collect(),
        Task::Multiclass { .. } => per_class.iter().collect(),
    };
    let mut values = MetricValues::new();
    for &m in metrics {
        let v = match m {
            Metric::Accuracy => defined(accuracy(&predictions, labels))?,
            Metric::AvgClassAccuracy => defined(average_class_accuracy(&predictions, labels))?,
            Metric::MeanAp => mean_defined(ranked.iter().map(|c| c.average_precision)),
            Metric::Auc => mean_defined(ranked.iter().map(|c| c.auc)),
            Metric::EerRate => mean_defined(ranked.iter().map(|c| c.eer_rate)),
        };
        values.insert(String::from(m.name()), v);
    }

    let index = |l: i64| class_labels.iter().position(|&c| c == l).expect("checked above");
    let mut counts = vec![vec![0usize; class_labels.len()]; class_labels.len()];
    for (&p, &l) in predictions.iter().zip(labels) {
        counts[index(l)][index(p)] += 1;
    }
    Ok(Evaluation { metrics: values, per_class, confusion: Confusion { labels: class_labels, counts } })
}

/// Cross-validates a single model spec.
pub fn cross_validate<E: Executor>(
    dataset: &[SequenceSample],
    folds: &FoldSpec,
    spec: &ModelSpec,
    options: &EvalOptions,
    exec: &E,
) -> Result<EvalReport> {
    cross_validate_fused(&[dataset], folds, core::slice::from_ref(spec), None, options, exec)
}

/// Cross-validates one spec per channel and fuses the held-out scores.
///
/// Channels describe the same samples (matched by id, labels must agree),
/// typically with different features. Every fold trains each channel on the
/// training samples, scores the held-out ones and fuses them with `fusion`;
/// z-score statistics are taken over the held-out fold. With a single channel
/// and no fusion the scores are used as they are.
pub fn cross_validate_fused<E: Executor>(
    channels: &[&[SequenceSample]],
    folds: &FoldSpec,
    specs: &[ModelSpec],
    fusion: Option<&Fusion>,
    options: &EvalOptions,
    exec: &E,
) -> Result<EvalReport> {
    if channels.is_empty() || channels.len() != specs.len() {
        return Err(Error::InvalidConfig(alloc::format!(
            "{} channels for {} model specs",
            channels.len(),
            specs.len()
        )));
    }
    if channels.len() > 1 && fusion.is_none() {
        return Err(Error::InvalidConfig("several channels need a fusion mode".into()));
    }
    let base = channels[0];
    let aligned = align_channels(channels)?;
    let task = Task::detect(base)?;

    let per_fold = exec.map(folds.folds, |fold| -> Result<(FoldResult, ScoreTable, Vec<i64>)> {
        let (train_idx, test_idx) = folds.split(base, fold)?;
        assert!(
            train_idx.iter().all(|i| !test_idx.contains(i)),
            "a training sample appeared in its own evaluation fold"
        );
        if train_idx.is_empty() || test_idx.is_empty() {
            return Err(Error::InvalidFolds(alloc::format!("fold {fold} leaves an empty side")));
        }
        let mut tables = Vec::with_capacity(channels.len());
        for (c, spec) in specs.iter().enumerate() {
            let pick = |idx: &[usize]| -> Vec<SequenceSample> {
                idx.iter().map(|&i| channels[c][aligned[c][i]].clone()).collect()
            };
            let train = pick(&train_idx);
            let test = pick(&test_idx);
            let classifier = train_classifier(&train, spec, task, exec)?;
            tables.push(predict_table(&classifier, &test, options.solver, exec)?);
        }
        let table = match fusion {
            Some(f) => late_fusion(&tables, f.mode, f.weights.as_deref())?,
            None => tables.pop().expect("one channel"),
        };
        let labels: Vec<i64> = test_idx.iter().map(|&i| base[i].label()).collect();
        let eval = evaluate_table(&table, &labels, task, &options.metrics)?;
        let result = FoldResult { fold, train_size: train_idx.len(), test_size: test_idx.len(), metrics: eval.metrics };
        Ok((result, table, labels))
    });

    let mut fold_results = Vec::with_capacity(folds.folds);
    let mut pooled_table: Option<ScoreTable> = None;
    let mut pooled_labels = Vec::new();
    for r in per_fold {
        let (result, table, labels) = r?;
        fold_results.push(result);
        pooled_labels.extend(labels);
        match &mut pooled_table {
            Some(t) => t.extend(&table)?,
            None => pooled_table = Some(table),
        }
    }
    let pooled_table = pooled_table.ok_or_else(|| Error::InvalidFolds("no folds".into()))?;
    let pooled = evaluate_table(&pooled_table, &pooled_labels, task, &options.metrics)?;

    let mut aggregate = MetricValues::new();
    for m in &options.metrics {
        let name = m.name();
        aggregate.insert(String::from(name), mean_defined(fold_results.iter().map(|f| f.metrics[name])));
    }

    Ok(EvalReport {
        config_fingerprint: fingerprint(specs, fusion, options, folds),
        task,
        fold_name: folds.name.clone(),
        fold_policy: folds.policy,
        metrics: options.metrics.clone(),
        folds: fold_results,
        aggregate,
        pooled,
        fusion: fusion.map(|f| FusionInfo {
            mode: f.mode,
            channels: channels.len(),
            weights: f.weights.clone(),
            zscore_statistics: "evaluation_set",
        }),
    })
}

/// For each channel, the index of the sample matching each base sample.
fn align_channels(channels: &[&[SequenceSample]]) -> Result<Vec<Vec<usize>>> {
    let base = channels[0];
    let mut out = Vec::with_capacity(channels.len());
    for channel in channels {
        if channel.len() != base.len() {
            return Err(Error::TableMismatch("channels cover different samples".into()));
        }
        let index: BTreeMap<&str, usize> = channel.iter().enumerate().map(|(i, s)| (s.id(), i)).collect();
        let mut map = Vec::with_capacity(base.len());
        for s in base {
            let &j = index
                .get(s.id())
                .ok_or_else(|| Error::TableMismatch(alloc::format!("sample `{}` missing from a channel", s.id())))?;
            if channel[j].label() != s.label() {
                return Err(Error::TableMismatch(alloc::format!("labels of `{}` differ between channels", s.id())));
            }
            map.push(j);
        }
        out.push(map);
    }
    Ok(out)
}

fn fingerprint(specs: &[ModelSpec], fusion: Option<&Fusion>, options: &EvalOptions, folds: &FoldSpec) -> String {
    let mut h = Fnv1a::new();
    let refs: Vec<&ModelSpec> = specs.iter().collect();
    h.write(crate::pipeline::fingerprint_of(&refs).as_bytes());
    h.write(alloc::format!("|{fusion:?}|{options:?}|{}", folds.name).as_bytes());
    for (id, f) in &folds.assignment {
        h.write(id.as_bytes()).write(&(*f as u64).to_le_bytes());
    }
    alloc::format!("{:016x}", h.finish())
}
