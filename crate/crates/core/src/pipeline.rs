//! Baseline ladder, one-vs-all multiclass, prediction and late fusion.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::hash::Fnv1a;
use crate::inference::{infer, InferenceConfig};
use crate::training::{train, TrainConfig, TrainReport};
use crate::{Error, Executor, LatentAssignment, Model, Pooling, Result, SequenceSample, Solver};

/// Which model family a spec trains. Each kind pins some config fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ModelKind {
    /// Linear SVM on mean-pooled frames.
    Mnp,
    /// Linear SVM on max-pooled frames.
    Mxp,
    /// Single template on the best frame, no ordering term.
    Mil,
    Lomo,
    /// LOMo with the ordering costs frozen at zero.
    LomoOrd0,
    /// Global temporal pooling only.
    Gtp,
    /// Adaptive model with a single template.
    MilGtp,
    /// Adaptive LOMo: local ordinal term blended with the global template.
    Alomo,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Mnp,
        ModelKind::Mxp,
        ModelKind::Mil,
        ModelKind::Lomo,
        ModelKind::LomoOrd0,
        ModelKind::Gtp,
        ModelKind::MilGtp,
        ModelKind::Alomo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Mnp => "mnp",
            ModelKind::Mxp => "mxp",
            ModelKind::Mil => "mil",
            ModelKind::Lomo => "lomo",
            ModelKind::LomoOrd0 => "lomo-ord0",
            ModelKind::Gtp => "gtp",
            ModelKind::MilGtp => "mil-gtp",
            ModelKind::Alomo => "alomo",
        }
    }

    /// Stable on-disk code.
    pub fn code(self) -> u8 {
        match self {
            ModelKind::Mnp => 0,
            ModelKind::Mxp => 1,
            ModelKind::Mil => 2,
            ModelKind::Lomo => 3,
            ModelKind::LomoOrd0 => 4,
            ModelKind::Gtp => 5,
            ModelKind::MilGtp => 6,
            ModelKind::Alomo => 7,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }
}

impl core::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(alloc::format!("unknown model kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub config: TrainConfig,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, config: TrainConfig) -> Self {
        ModelSpec { kind, config }
    }

    /// The training config with the fields this kind pins overwritten.
    pub fn resolved(&self) -> TrainConfig {
        let mut c = self.config.clone();
        match self.kind {
            ModelKind::Mnp | ModelKind::Mxp => {
                c.events = 1;
                c.gamma_g = 1.0;
                c.pooling = if self.kind == ModelKind::Mnp { Pooling::Mean } else { Pooling::Max };
            }
            ModelKind::Mil => {
                c.events = 1;
                c.ordinal_enabled = false;
                c.gamma_g = 0.0;
            }
            ModelKind::Lomo => c.gamma_g = 0.0,
            ModelKind::LomoOrd0 => {
                c.gamma_g = 0.0;
                c.ordinal_enabled = false;
            }
            ModelKind::Gtp => c.gamma_g = 1.0,
            ModelKind::MilGtp => c.events = 1,
            ModelKind::Alomo => {}
        }
        c
    }

    /// Stable 64-bit hex digest of the resolved config.
    pub fn fingerprint(&self) -> String {
        fingerprint_of(&[self])
    }
}

pub(crate) fn fingerprint_of(specs: &[&ModelSpec]) -> String {
    let mut h = Fnv1a::new();
    for spec in specs {
        let text = alloc::format!("{}|{:?}", spec.kind.name(), spec.resolved());
        h.write(text.as_bytes());
    }
    alloc::format!("{:016x}", h.finish())
}

/// Binary (labels -1/+1) or multiclass (labels 0..classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Task {
    Binary,
    Multiclass { classes: usize },
}

impl Task {
    /// Labels all in {-1, +1} mean binary; otherwise labels must form the
    /// contiguous set `0..K` with `K >= 2` and every class present.
    pub fn detect(dataset: &[SequenceSample]) -> Result<Task> {
        if dataset.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if dataset.iter().all(|s| s.label() == 1 || s.label() == -1) {
            return Ok(Task::Binary);
        }
        if let Some(s) = dataset.iter().find(|s| s.label() < 0) {
            return Err(Error::InvalidLabel { label: s.label(), reason: "mixes binary and class-index labels" });
        }
        let classes = dataset.iter().map(|s| s.label()).max().unwrap_or(0) as usize + 1;
        if classes < 2 {
            return Err(Error::InvalidLabel { label: 0, reason: "need at least two classes" });
        }
        let mut counts = vec![0usize; classes];
        for s in dataset {
            counts[s.label() as usize] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(empty as i64));
        }
        Ok(Task::Multiclass { classes })
    }

    /// Class labels in score-column order. Binary tasks have one score column
    /// but two labels, listed as `[-1, 1]`.
    pub fn labels(self) -> Vec<i64> {
        match self {
            Task::Binary => vec![-1, 1],
            Task::Multiclass { classes } => (0..classes as i64).collect(),
        }
    }

    pub fn columns(self) -> usize {
        match self {
            Task::Binary => 1,
            Task::Multiclass { classes } => classes,
        }
    }
}

/// One binary model per class, predicting by argmax.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    pub class_labels: Vec<i64>,
    pub models: Vec<Model>,
}

impl MulticlassModel {
    pub fn new(class_labels: Vec<i64>, models: Vec<Model>) -> Result<Self> {
        if class_labels.len() != models.len() || models.is_empty() {
            return Err(Error::InvalidModel("need exactly one model per class".into()));
        }
        let dim = models[0].dim();
        if let Some(m) = models.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
        }
        Ok(MulticlassModel { class_labels, models })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Binary(Model),
    Multiclass(MulticlassModel),
}

impl Classifier {
    pub fn dim(&self) -> usize {
        match self {
            Classifier::Binary(m) => m.dim(),
            Classifier::Multiclass(mc) => mc.models[0].dim(),
        }
    }

    pub fn models(&self) -> &[Model] {
        match self {
            Classifier::Binary(m) => core::slice::from_ref(m),
            Classifier::Multiclass(mc) => &mc.models,
        }
    }

    pub fn task(&self) -> Task {
        match self {
            Classifier::Binary(_) => Task::Binary,
            Classifier::Multiclass(mc) => Task::Multiclass { classes: mc.models.len() },
        }
    }

    /// Best latent assignment of every underlying model.
    pub fn latents(&self, sample: &SequenceSample, solver: Solver) -> Result<Vec<LatentAssignment>> {
        self.models()
            .iter()
            .map(|m| infer(m, sample, &InferenceConfig::for_model(m, solver)))
            .collect()
    }

    /// Raw scores: one value for binary models, one per class otherwise.
    pub fn scores(&self, sample: &SequenceSample, solver: Solver) -> Result<Vec<f64>> {
        Ok(self.latents(sample, solver)?.into_iter().map(|a| a.total).collect())
    }

    /// Predicted label for a score vector produced by [`Classifier::scores`].
    pub fn decide(&self, scores: &[f64]) -> i64 {
        match self {
            Classifier::Binary(_) => decide_binary(scores[0]),
            Classifier::Multiclass(mc) => mc.class_labels[argmax(scores)],
        }
    }
}

/// Sign decision; a score of exactly 0 counts as positive.
pub fn decide_binary(score: f64) -> i64 {
    if score >= 0.0 {
        1
    } else {
        -1
    }
}

/// Index of the largest score, smallest index on ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Decision for a row of a score table under `task`.
pub fn decide(task: Task, scores: &[f64]) -> i64 {
    match task {
        Task::Binary => decide_binary(scores[0]),
        Task::Multiclass { .. } => argmax(scores) as i64,
    }
}

/// Trains a single binary model with the spec's pinned config.
pub fn train_binary(dataset: &[SequenceSample], spec: &ModelSpec) -> Result<TrainReport> {
    train(dataset, &spec.resolved())
}

/// Seed for the one-vs-all model of class `class_index`.
pub fn class_seed(base: u64, class_index: usize) -> u64 {
    // splitmix64 finalizer over the combined value
    let mut z = base ^ (class_index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One-vs-all: class `c` relabeled +1, every other class -1.
pub fn train_multiclass<E: Executor>(
    dataset: &[SequenceSample],
    spec: &ModelSpec,
    exec: &E,
) -> Result<MulticlassModel> {
    let Task::Multiclass { classes } = Task::detect(dataset)? else {
        return Err(Error::InvalidLabel { label: -1, reason: "multiclass training needs class-index labels" });
    };
    train_one_vs_all(dataset, spec, classes, exec)
}

fn train_one_vs_all<E: Executor>(
    dataset: &[SequenceSample],
    spec: &ModelSpec,
    classes: usize,
    exec: &E,
) -> Result<MulticlassModel> {
    let mut counts = vec![0usize; classes];
    for s in dataset {
        let label = s.label();
        if label < 0 || label as usize >= classes {
            return Err(Error::InvalidLabel { label, reason: "outside the class set" });
        }
        counts[label as usize] += 1;
    }
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyClass(empty as i64));
    }
    let models = exec.map(classes, |c| {
        let relabeled: Vec<SequenceSample> = dataset
            .iter()
            .map(|s| s.with_label(if s.label() == c as i64 { 1 } else { -1 }))
            .collect();
        let mut config = spec.resolved();
        config.seed = class_seed(spec.config.seed, c);
        train(&relabeled, &config).map(|r| r.model)
    });
    let models = models.into_iter().collect::<Result<Vec<_>>>()?;
    MulticlassModel::new((0..classes as i64).collect(), models)
}

/// Trains a binary model or a one-vs-all ensemble depending on `task`.
pub fn train_classifier<E: Executor>(
    dataset: &[SequenceSample],
    spec: &ModelSpec,
    task: Task,
    exec: &E,
) -> Result<Classifier> {
    match task {
        Task::Binary => Ok(Classifier::Binary(train_binary(dataset, spec)?.model)),
        Task::Multiclass { classes } => {
            Ok(Classifier::Multiclass(train_one_vs_all(dataset, spec, classes, exec)?))
        }
    }
}

/// Per-sample score vectors for a set of samples, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreTable {
    pub ids: Vec<String>,
    pub columns: usize,
    pub values: Vec<f64>,
}

impl ScoreTable {
    pub fn new(ids: Vec<String>, columns: usize, values: Vec<f64>) -> Result<Self> {
        if columns == 0 || values.len() != ids.len() * columns {
            return Err(Error::TableMismatch(alloc::format!(
                "{} values for {} rows x {} columns",
                values.len(),
                ids.len(),
                columns
            )));
        }
        Ok(ScoreTable { ids, columns, values })
    }

    pub fn rows(&self) -> usize {
        self.ids.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.columns..(i + 1) * self.columns]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows()).map(|i| self.values[i * self.columns + c]).collect()
    }

    /// Appends the rows of `other`, which must have the same width.
    pub fn extend(&mut self, other: &ScoreTable) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::TableMismatch("column count differs".into()));
        }
        self.ids.extend(other.ids.iter().cloned());
        self.values.extend_from_slice(&other.values);
        Ok(())
    }
}

/// Scores every sample with `classifier`.
pub fn predict_table<E: Executor>(
    classifier: &Classifier,
    samples: &[SequenceSample],
    solver: Solver,
    exec: &E,
) -> Result<ScoreTable> {
    let rows = exec.map(samples.len(), |i| classifier.scores(&samples[i], solver));
    let mut values = Vec::with_capacity(samples.len() * classifier.task().columns());
    for row in rows {
        values.extend(row?);
    }
    ScoreTable::new(
        samples.iter().map(|s| String::from(s.id())).collect(),
        classifier.task().columns(),
        values,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FusionMode {
    /// Arithmetic mean of raw scores.
    #[default]
    EqualMean,
    /// Weighted sum of per-table, per-class z-scores.
    ZscoreWeighted,
}

impl core::str::FromStr for FusionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" | "equal_mean" => Ok(FusionMode::EqualMean),
            "zscore" | "zscore_weighted" => Ok(FusionMode::ZscoreWeighted),
            other => Err(Error::InvalidConfig(alloc::format!("unknown fusion mode `{other}`"))),
        }
    }
}

/// Combines score tables for the same samples and classes.
///
/// Rows of later tables are matched to the first table by id. For z-score
/// fusion the mean and variance (denominator `n`) of each table column are
/// taken over the rows being fused; a constant column normalizes to zeros.
/// Weights default to 1 and are only accepted in z-score mode.
pub fn late_fusion(tables: &[ScoreTable], mode: FusionMode, weights: Option<&[f64]>) -> Result<ScoreTable> {
    let first = tables.first().ok_or_else(|| Error::TableMismatch("no tables to fuse".into()))?;
    let (rows, columns) = (first.rows(), first.columns);
    if let Some(w) = weights {
        if mode == FusionMode::EqualMean {
            return Err(Error::InvalidConfig("weights apply to z-score fusion only".into()));
        }
        if w.len() != tables.len() {
            return Err(Error::TableMismatch(alloc::format!(
                "{} weights for {} tables",
                w.len(),
                tables.len()
            )));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, id) in first.ids.iter().enumerate() {
        if index.insert(id.as_str(), i).is_some() {
            return Err(Error::TableMismatch(alloc::format!("duplicate sample id `{id}`")));
        }
    }

    // aligned[t][row * columns + c], rows in the first table's order
    let mut aligned: Vec<Vec<f64>> = Vec::with_capacity(tables.len());
    for table in tables {
        if table.columns != columns || table.rows() != rows {
            return Err(Error::TableMismatch("tables cover different samples or classes".into()));
        }
        if table.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut values = vec![0.0; rows * columns];
        let mut seen = vec![false; rows];
        for (i, id) in table.ids.iter().enumerate() {
            let &target = index
                .get(id.as_str())
                .ok_or_else(|| Error::TableMismatch(alloc::format!("sample `{id}` missing from the first table")))?;
            if core::mem::replace(&mut seen[target], true) {
                return Err(Error::TableMismatch(alloc::format!("duplicate sample id `{id}`")));
            }
            values[target * columns..(target + 1) * columns].copy_from_slice(table.row(i));
        }
        aligned.push(values);
    }

    let mut fused = vec![0.0; rows * columns];
    match mode {
        FusionMode::EqualMean => {
            for values in &aligned {
                for (f, v) in fused.iter_mut().zip(values) {
                    *f += v;
                }
            }
            let n = tables.len() as f64;
            fused.iter_mut().for_each(|f| *f /= n);
        }
        FusionMode::ZscoreWeighted => {
            for (t, values) in aligned.iter().enumerate() {
                let w = weights.map_or(1.0, |w| w[t]);
                for c in 0..columns {
                    let column: Vec<f64> = (0..rows).map(|r| values[r * columns + c]).collect();
                    let z = zscore(&column);
                    for r in 0..rows {
                        fused[r * columns + c] += w * z[r];
                    }
                }
            }
        }
    }
    ScoreTable::new(first.ids.clone(), columns, fused)
}

/// Zero-mean, unit-variance rescaling with population variance.
pub fn zscore(values: &[f64]) -> Vec<f64> {
    if values.is_empty() || values.iter().all(|&v| v == values[0]) {
        return vec![0.0; values.len()];
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = crate::linalg::sqrt(var);
    values.iter().map(|v| (v - mean) / sd).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ModelParts, Sequential};
    use alloc::string::ToString;
    use approx::assert_abs_diff_eq;

    fn table(ids: &[&str], columns: usize, values: &[f64]) -> ScoreTable {
        ScoreTable::new(ids.iter().map(|s| s.to_string()).collect(), columns, values.to_vec()).unwrap()
    }

    #[test]
    fn kinds_pin_config() {
        let base = TrainConfig { events: 3, gamma_g: 0.4, ordinal_enabled: true, ..TrainConfig::default() };
        let r = |k| ModelSpec::new(k, base.clone()).resolved();
        assert_eq!((r(ModelKind::Mnp).events, r(ModelKind::Mnp).gamma_g, r(ModelKind::Mnp).pooling), (1, 1.0, Pooling::Mean));
        assert_eq!((r(ModelKind::Mxp).events, r(ModelKind::Mxp).gamma_g, r(ModelKind::Mxp).pooling), (1, 1.0, Pooling::Max));
        let mil = r(ModelKind::Mil);
        assert_eq!((mil.events, mil.ordinal_enabled, mil.gamma_g), (1, false, 0.0));
        assert_eq!(r(ModelKind::Lomo).gamma_g, 0.0);
        let ord0 = r(ModelKind::LomoOrd0);
        assert_eq!((ord0.gamma_g, ord0.ordinal_enabled, ord0.events), (0.0, false, 3));
        assert_eq!(r(ModelKind::Gtp).gamma_g, 1.0);
        assert_eq!((r(ModelKind::MilGtp).events, r(ModelKind::MilGtp).gamma_g), (1, 0.4));
        assert_eq!(r(ModelKind::Alomo), base);
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
            assert_eq!(ModelKind::from_code(k.code()), Some(k));
        }
    }

    #[test]
    fn fingerprint_tracks_resolved_config() {
        let a = ModelSpec::new(ModelKind::Mil, TrainConfig { events: 3, ..TrainConfig::default() });
        let b = ModelSpec::new(ModelKind::Mil, TrainConfig { events: 5, ..TrainConfig::default() });
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = ModelSpec::new(ModelKind::Lomo, TrainConfig::default());
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }

    #[test]
    fn decisions() {
        assert_eq!(decide_binary(0.0), 1);
        assert_eq!(decide_binary(-1e-300), -1);
        assert_eq!(argmax(&[0.2, 0.9, 0.9]), 1);
        assert_eq!(decide(Task::Multiclass { classes: 3 }, &[0.2, 0.9, 0.9]), 1);
    }

    #[test]
    fn task_detection() {
        let s = |label| SequenceSample::new("s", label, None, 1, vec![0.0]).unwrap();
        assert_eq!(Task::detect(&[s(1), s(-1)]).unwrap(), Task::Binary);
        assert_eq!(Task::detect(&[s(0), s(2), s(1)]).unwrap(), Task::Multiclass { classes: 3 });
        assert_eq!(Task::detect(&[s(0), s(2)]), Err(Error::EmptyClass(1)));
        assert!(Task::detect(&[s(0), s(-1)]).is_err());
        assert!(Task::detect(&[s(0)]).is_err());
        assert_eq!(Task::detect(&[]), Err(Error::EmptyDataset));
    }

    fn indicator_dataset() -> Vec<SequenceSample> {
        // Class c sequences contain one frame with coordinate c set; the rest
        // is background in the last coordinate.
        let mut out = Vec::new();
        for c in 0..3 {
            for rep in 0..6 {
                let n = 6;
                let mut frames = vec![vec![0.0, 0.0, 0.0, 1.0]; n];
                frames[(rep + c) % n][c] = 1.0;
                frames[(rep + c) % n][3] = 0.0;
                out.push(SequenceSample::from_frames(alloc::format!("c{c}-{rep}"), c as i64, None, &frames).unwrap());
            }
        }
        out
    }

    #[test]
    fn one_vs_all_separates_indicator_toy() {
        let data = indicator_dataset();
        let spec = ModelSpec::new(
            ModelKind::Mil,
            TrainConfig { maxiter: 3000, seed: 4, lambda1: 1e-4, ..TrainConfig::default() },
        );
        let mc = train_multiclass(&data, &spec, &Sequential).unwrap();
        assert_eq!(mc.models.len(), 3);
        let clf = Classifier::Multiclass(mc.clone());
        for s in &data {
            let scores = clf.scores(s, Solver::Greedy).unwrap();
            assert_eq!(clf.decide(&scores), s.label(), "{} {scores:?}", s.id());
        }
        assert_eq!(train_multiclass(&data, &spec, &Sequential).unwrap(), mc);
    }

    #[test]
    fn two_classes_two_models() {
        let data: Vec<SequenceSample> = indicator_dataset().into_iter().filter(|s| s.label() < 2).collect();
        let spec = ModelSpec::new(ModelKind::Mil, TrainConfig { maxiter: 50, ..TrainConfig::default() });
        assert_eq!(train_multiclass(&data, &spec, &Sequential).unwrap().models.len(), 2);
        let binary: Vec<SequenceSample> = data.iter().map(|s| s.with_label(1)).collect();
        assert!(train_multiclass(&binary, &spec, &Sequential).is_err());
    }

    #[test]
    fn class_seeds_differ() {
        let seeds: Vec<u64> = (0..5).map(|c| class_seed(42, c)).collect();
        for i in 0..5 {
            for j in i + 1..5 {
                assert_ne!(seeds[i], seeds[j]);
            }
        }
        assert_eq!(class_seed(42, 3), seeds[3]);
    }

    #[test]
    fn mil_scores_are_max_frame_response() {
        let model = Model::from_parts(ModelParts {
            events: 1,
            dim: 2,
            templates: vec![0.5, -1.0],
            ordering_costs: vec![0.0],
            global_template: None,
            gamma_g: 0.0,
            pooling: Pooling::Mean,
            coverage: 7,
        })
        .unwrap();
        let s = SequenceSample::from_frames("m", 1, None, &[vec![1.0, 1.0], vec![3.0, 0.5], vec![-2.0, -2.0]]).unwrap();
        let clf = Classifier::Binary(model);
        let brute = s.frames().map(|x| 0.5 * x[0] - x[1]).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(clf.scores(&s, Solver::Greedy).unwrap(), vec![brute]);
    }

    #[test]
    fn fusion_examples() {
        let a = table(&["x", "y", "z"], 1, &[1.0, 2.0, 3.0]);
        let b = table(&["x", "y", "z"], 1, &[30.0, 20.0, 10.0]);
        let z = late_fusion(&[a.clone(), b.clone()], FusionMode::ZscoreWeighted, Some(&[1.0, 1.0])).unwrap();
        for v in &z.values {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
        let za = late_fusion(core::slice::from_ref(&a), FusionMode::ZscoreWeighted, None).unwrap();
        let s = 1.224744871391589;
        assert_abs_diff_eq!(za.values[0], -s, epsilon = 1e-12);
        assert_abs_diff_eq!(za.values[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(za.values[2], s, epsilon = 1e-12);

        assert_eq!(late_fusion(&[a.clone(), a.clone()], FusionMode::EqualMean, None).unwrap(), a);
        assert_eq!(late_fusion(core::slice::from_ref(&a), FusionMode::EqualMean, None).unwrap(), a);
    }

    #[test]
    fn fusion_aligns_by_id_and_validates() {
        let a = table(&["x", "y"], 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = table(&["y", "x"], 2, &[30.0, 40.0, 10.0, 20.0]);
        let f = late_fusion(&[a.clone(), b], FusionMode::EqualMean, None).unwrap();
        assert_eq!(f.values, vec![5.5, 11.0, 16.5, 22.0]);

        let c = table(&["x", "q"], 2, &[0.0; 4]);
        assert!(matches!(late_fusion(&[a.clone(), c], FusionMode::EqualMean, None), Err(Error::TableMismatch(_))));
        let nan = table(&["x", "y"], 2, &[0.0, f64::NAN, 0.0, 0.0]);
        assert_eq!(late_fusion(&[a.clone(), nan], FusionMode::EqualMean, None), Err(Error::NonFinite));
        assert!(late_fusion(core::slice::from_ref(&a), FusionMode::ZscoreWeighted, Some(&[1.0, 2.0])).is_err());
        assert!(late_fusion(core::slice::from_ref(&a), FusionMode::EqualMean, Some(&[1.0])).is_err());
        assert!(late_fusion(&[], FusionMode::EqualMean, None).is_err());
    }

    #[test]
    fn constant_column_normalizes_to_zero() {
        assert_eq!(zscore(&[0.1, 0.1, 0.1]), vec![0.0; 3]);
    }
}
