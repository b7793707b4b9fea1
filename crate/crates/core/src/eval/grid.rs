//! Staged hyperparameter grid search.
//!
//! Stage 1 sweeps `lambda1 x coverage_t` with `gamma_g = 0`. Stage 2 fixes the
//! winning pair and sweeps `gamma_g`. Stage 3, only with several channels,
//! fixes everything else and sweeps fusion weight vectors drawn from the
//! weight grid. An empty axis keeps the value from the base spec and is not
//! swept. Ties go to the earlier row; rows are in ascending order, so ties
//! favor smaller `lambda1`, then smaller `coverage_t`, then smaller `gamma_g`.

use alloc::vec::Vec;

use super::cv::{cross_validate_fused, EvalOptions, EvalReport, Fusion, Metric};
use super::folds::FoldSpec;
use crate::pipeline::FusionMode;
use crate::{Error, Executor, ModelSpec, Result, SequenceSample};

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Grid {
    pub lambda1: Vec<f64>,
    pub coverage_t: Vec<usize>,
    pub gamma_g: Vec<f64>,
    /// Candidate weights per channel; vectors are all combinations except
    /// all-zero.
    pub fusion_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridPoint {
    pub lambda1: f64,
    pub coverage_t: usize,
    pub gamma_g: f64,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridRow {
    pub stage: u8,
    pub point: GridPoint,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridResult {
    pub metric: Metric,
    pub best: GridPoint,
    pub best_value: Option<f64>,
    pub rows: Vec<GridRow>,
    /// Full report of the selected configuration.
    pub report: EvalReport,
}

fn sorted_f64(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// All weight vectors of length `channels` over `values`, lexicographic,
/// without the all-zero vector.
fn weight_vectors(values: &[f64], channels: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = alloc::vec![Vec::new()];
    for _ in 0..channels {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&w| {
                    let mut v = prefix.clone();
                    v.push(w);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&w| w != 0.0));
    out
}

fn better(candidate: Option<f64>, incumbent: Option<f64>) -> bool {
    match (candidate, incumbent) {
        (Some(c), Some(i)) => c > i,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Runs the staged search, scoring each point by the aggregate of `select`.
///
/// `specs` holds one base spec per channel; grid values are applied to every
/// channel alike. `fusion_mode` is used when there are several channels.
#[allow(clippy::too_many_arguments)]
pub fn grid_search<E: Executor>(
    channels: &[&[SequenceSample]],
    folds: &FoldSpec,
    specs: &[ModelSpec],
    grid: &Grid,
    fusion_mode: FusionMode,
    options: &EvalOptions,
    select: Metric,
    exec: &E,
) -> Result<GridResult> {
    if grid.lambda1.is_empty() && grid.coverage_t.is_empty() && grid.gamma_g.is_empty() && grid.fusion_weights.is_empty()
    {
        return Err(Error::EmptyGrid);
    }
    let base = specs.first().ok_or_else(|| Error::InvalidConfig("no model spec".into()))?;
    let mut options = options.clone();
    if !options.metrics.contains(&select) {
        options.metrics.push(select);
    }
    let multi = channels.len() > 1;

    let lambdas = if grid.lambda1.is_empty() { alloc::vec![base.config.lambda1] } else { sorted_f64(&grid.lambda1)? };
    let mut ts = if grid.coverage_t.is_empty() { alloc::vec![base.config.coverage_t] } else { grid.coverage_t.clone() };
    ts.sort_unstable();
    ts.dedup();
    let gammas = sorted_f64(&grid.gamma_g)?;
    let weight_values = sorted_f64(&grid.fusion_weights)?;
    if gammas.iter().any(|g| !(0.0..=1.0).contains(g)) {
        return Err(Error::InvalidConfig("gamma_g grid values must lie in [0, 1]".into()));
    }

    let stage1_gamma = if gammas.is_empty() { base.config.gamma_g } else { 0.0 };
    let mut default_weights = None;
    if multi && fusion_mode == FusionMode::ZscoreWeighted {
        default_weights = Some(alloc::vec![1.0; channels.len()]);
    }

    let evaluate = |points: &[GridPoint]| -> Result<Vec<EvalReport>> {
        exec.map(points.len(), |i| {
            let p = &points[i];
            let specs: Vec<ModelSpec> = specs
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.config.lambda1 = p.lambda1;
                    s.config.coverage_t = p.coverage_t;
                    s.config.gamma_g = p.gamma_g;
                    s
                })
                .collect();
            let fusion = multi.then(|| Fusion { mode: fusion_mode, weights: p.weights.clone() });
            cross_validate_fused(channels, folds, &specs, fusion.as_ref(), &options, exec)
        })
        .into_iter()
        .collect()
    };

    if multi && !weight_values.is_empty() && fusion_mode == FusionMode::EqualMean {
        return Err(Error::InvalidConfig("fusion weights need z-score fusion".into()));
    }

    let mut rows: Vec<GridRow> = Vec::new();
    let mut best: Option<(usize, EvalReport)> = None;

    let stage1: Vec<GridPoint> = lambdas
        .iter()
        .flat_map(|&lambda1| {
            let weights = default_weights.clone();
            ts.iter().map(move |&coverage_t| GridPoint {
                lambda1,
                coverage_t,
                gamma_g: stage1_gamma,
                weights: weights.clone(),
            })
        })
        .collect();
    let reports = evaluate(&stage1)?;
    record(1, stage1, reports, select, &mut rows, &mut best);

    if !gammas.is_empty() {
        let anchor = rows[best.as_ref().expect("stage 1 ran").0].point.clone();
        let points: Vec<GridPoint> = gammas.iter().map(|&gamma_g| GridPoint { gamma_g, ..anchor.clone() }).collect();
        let reports = evaluate(&points)?;
        record(2, points, reports, select, &mut rows, &mut best);
    }

    if multi && !weight_values.is_empty() {
        let anchor = rows[best.as_ref().expect("stage 1 ran").0].point.clone();
        let points: Vec<GridPoint> = weight_vectors(&weight_values, channels.len())
            .into_iter()
            .map(|w| GridPoint { weights: Some(w), ..anchor.clone() })
            .collect();
        let reports = evaluate(&points)?;
        record(3, points, reports, select, &mut rows, &mut best);
    }

    let (index, report) = best.expect("at least one row");
    Ok(GridResult {
        metric: select,
        best: rows[index].point.clone(),
        best_value: rows[index].value,
        rows,
        report,
    })
}

/// Appends a stage's rows. The first row of a new stage replaces the
/// incumbent; within a stage only a strictly better value does.
fn record(
    stage: u8,
    points: Vec<GridPoint>,
    reports: Vec<EvalReport>,
    select: Metric,
    rows: &mut Vec<GridRow>,
    best: &mut Option<(usize, EvalReport)>,
) {
    for (point, report) in points.into_iter().zip(reports) {
        let value = report.aggregate.get(select.name()).copied().flatten();
        let take = match best {
            None => true,
            Some((i, _)) if rows[*i].stage != stage => true,
            Some((i, _)) => better(value, rows[*i].value),
        };
        rows.push(GridRow { stage, point, value });
        if take {
            *best = Some((rows.len() - 1, report));
        }
    }
}
