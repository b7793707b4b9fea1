//! Ranking and classification metrics.
//!
//! Ranking metrics sort by descending score with ties kept in input order.
//! AUC and EER work on tie groups, so they do not depend on that order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{Error, Result};

fn check_scores(scores: &[f64], positives: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != positives.len() {
        return Err(Error::TableMismatch(alloc::format!(
            "{} scores for {} labels",
            scores.len(),
            positives.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }
    let p = positives.iter().filter(|&&b| b).count();
    Ok((p, positives.len() - p))
}

/// Indices by descending score, stable on ties.
fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// `(positives, negatives)` per group of equal scores, best group first.
fn tie_groups(scores: &[f64], positives: &[bool]) -> Vec<(u64, u64)> {
    let order = ranking(scores);
    let mut groups: Vec<(u64, u64)> = Vec::new();
    let mut last = None;
    for i in order {
        if last != Some(scores[i]) {
            groups.push((0, 0));
            last = Some(scores[i]);
        }
        let g = groups.last_mut().expect("pushed above");
        if positives[i] {
            g.0 += 1;
        } else {
            g.1 += 1;
        }
    }
    groups
}

/// Non-interpolated average precision: the mean, over positives, of the
/// precision at each positive's rank.
pub fn average_precision(scores: &[f64], positives: &[bool]) -> Result<f64> {
    let (p, _) = check_scores(scores, positives)?;
    if p == 0 {
        return Err(Error::UndefinedMetric("average precision needs at least one positive"));
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank, i) in ranking(scores).into_iter().enumerate() {
        if positives[i] {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(sum / p as f64)
}

/// Unweighted mean of per-class average precision; each entry is one
/// class's `(scores, positives)` column.
pub fn mean_average_precision(classes: &[(Vec<f64>, Vec<bool>)]) -> Result<f64> {
    if classes.is_empty() {
        return Err(Error::UndefinedMetric("mean average precision needs at least one class"));
    }
    let mut sum = 0.0;
    for (scores, positives) in classes {
        sum += average_precision(scores, positives)?;
    }
    Ok(sum / classes.len() as f64)
}

/// Mann-Whitney estimate of the area under the ROC curve, ties counting 1/2.
pub fn auc(scores: &[f64], positives: &[bool]) -> Result<f64> {
    let (p, n) = check_scores(scores, positives)?;
    if p == 0 || n == 0 {
        return Err(Error::UndefinedMetric("AUC needs both classes"));
    }
    // Twice the Mann-Whitney count, accumulated exactly in integers.
    let mut twice_wins: u128 = 0;
    let mut negatives_below = n as u128;
    for (gp, gn) in tie_groups(scores, positives) {
        let (gp, gn) = (gp as u128, gn as u128);
        negatives_below -= gn;
        twice_wins += 2 * gp * negatives_below + gp * gn;
    }
    Ok(twice_wins as f64 / (2.0 * p as f64 * n as f64))
}

/// Classification rate at the ROC equal-error point, `1 - EER`.
///
/// Walks the ROC vertices from the strictest threshold; where FPR and FNR
/// cross between two vertices the crossing is interpolated linearly.
pub fn roc_eer_rate(scores: &[f64], positives: &[bool]) -> Result<f64> {
    let (p, n) = check_scores(scores, positives)?;
    if p == 0 || n == 0 {
        return Err(Error::UndefinedMetric("ROC-EER needs both classes"));
    }
    let (p, n) = (p as i128, n as i128);
    // (FPR - FNR) * P * N, exact; nondecreasing along the curve.
    let gap = |fp: i128, tp: i128| fp * p + tp * n - p * n;
    let (mut fp, mut tp) = (0i128, 0i128);
    let mut prev = (fp, tp, gap(fp, tp));
    for (gp, gn) in tie_groups(scores, positives) {
        fp += gn as i128;
        tp += gp as i128;
        let g = gap(fp, tp);
        if g == 0 {
            return Ok(1.0 - fp as f64 / n as f64);
        }
        if g > 0 {
            let (fp0, _, g0) = prev;
            let alpha = (-g0) as f64 / (g - g0) as f64;
            let fpr0 = fp0 as f64 / n as f64;
            let fpr1 = fp as f64 / n as f64;
            return Ok(1.0 - (fpr0 + alpha * (fpr1 - fpr0)));
        }
        prev = (fp, tp, g);
    }
    unreachable!("the last ROC vertex has FPR = 1 and FNR = 0")
}

/// Fraction of predictions equal to the label.
pub fn accuracy(predictions: &[i64], labels: &[i64]) -> Result<f64> {
    check_predictions(predictions, labels)?;
    let correct = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(correct as f64 / labels.len() as f64)
}

/// Recall of every class present in `labels`, ordered by label.
pub fn per_class_recall(predictions: &[i64], labels: &[i64]) -> Result<BTreeMap<i64, f64>> {
    check_predictions(predictions, labels)?;
    let mut counts: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for (p, l) in predictions.iter().zip(labels) {
        let e = counts.entry(*l).or_default();
        e.1 += 1;
        if p == l {
            e.0 += 1;
        }
    }
    Ok(counts.into_iter().map(|(l, (hit, total))| (l, hit as f64 / total as f64)).collect())
}

/// Mean of per-class recall over the classes present in `labels`.
pub fn average_class_accuracy(predictions: &[i64], labels: &[i64]) -> Result<f64> {
    let recall = per_class_recall(predictions, labels)?;
    Ok(recall.values().sum::<f64>() / recall.len() as f64)
}

fn check_predictions(predictions: &[i64], labels: &[i64]) -> Result<()> {
    if predictions.len() != labels.len() {
        return Err(Error::TableMismatch(alloc::format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(())
}
