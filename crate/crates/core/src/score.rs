//! Scoring a sequence under a fixed latent assignment.

use alloc::vec::Vec;

use crate::linalg::dot;
use crate::{effective_t, perm_rank, pool, Error, Model, Result, SequenceSample};

/// A latent assignment together with the score it achieves.
///
/// `k[i]` is the 0-based frame on which template `i` fires.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatentAssignment {
    pub k: Vec<usize>,
    /// 1-based rank of the order pattern of `k`.
    pub perm_rank: usize,
    /// `(1/M) sum_i <w_i, x_{k_i}>`
    pub template_score: f64,
    pub ordering_cost: f64,
    /// `<w_g, Pool(X)>`, 0 without a global template.
    pub global_score: f64,
    /// `gamma_g * global + (1 - gamma_g) * (template + ordering)`
    pub total: f64,
}

/// Scores `sample` with the latent frames fixed to `k`.
///
/// `k` must respect the coverage constraint at the effective radius for this
/// sequence length.
pub fn score_fixed(model: &Model, sample: &SequenceSample, k: &[usize]) -> Result<LatentAssignment> {
    check_dims(model, sample)?;
    let t_eff = effective_t(sample.len(), model.events(), model.coverage())?;
    score_with_radius(model, sample, k, t_eff)
}

pub(crate) fn score_with_radius(
    model: &Model,
    sample: &SequenceSample,
    k: &[usize],
    t_eff: usize,
) -> Result<LatentAssignment> {
    check_dims(model, sample)?;
    check_assignment(k, model.events(), sample.len(), t_eff)?;
    let global = global_score(model, sample);
    Ok(assemble(model, sample, k, global))
}

/// Builds the breakdown for an assignment already known to be valid.
pub(crate) fn assemble(
    model: &Model,
    sample: &SequenceSample,
    k: &[usize],
    global_score: f64,
) -> LatentAssignment {
    let m = model.events();
    let mut sum = 0.0;
    for (i, &f) in k.iter().enumerate() {
        sum += dot(model.template(i), sample.frame(f));
    }
    let template_score = sum / m as f64;
    let rank = perm_rank(k).expect("validated assignment has distinct entries");
    let ordering_cost = model.ordering_cost(rank);
    let gamma = model.gamma_g();
    let total = gamma * global_score + (1.0 - gamma) * (template_score + ordering_cost);
    LatentAssignment { k: k.to_vec(), perm_rank: rank, template_score, ordering_cost, global_score, total }
}

/// `<w_g, Pool(X)>`, or 0 when the model has no global template.
pub fn global_score(model: &Model, sample: &SequenceSample) -> f64 {
    match model.global_template() {
        Some(g) => dot(g, &pool(sample, model.pooling())),
        None => 0.0,
    }
}

pub(crate) fn check_dims(model: &Model, sample: &SequenceSample) -> Result<()> {
    if model.dim() != sample.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: sample.dim() });
    }
    Ok(())
}

/// Every entry a valid frame and every pair at least `t_eff + 1` apart.
pub(crate) fn check_assignment(k: &[usize], events: usize, frames: usize, t_eff: usize) -> Result<()> {
    if k.len() != events {
        return Err(Error::ConstraintViolation(alloc::format!(
            "expected {events} latent positions, got {}",
            k.len()
        )));
    }
    if let Some(&f) = k.iter().find(|&&f| f >= frames) {
        return Err(Error::ConstraintViolation(alloc::format!(
            "frame {f} out of range for {frames} frames"
        )));
    }
    for i in 0..k.len() {
        for j in i + 1..k.len() {
            if k[i] == k[j] {
                return Err(Error::TiedLatentPositions);
            }
            if k[i].abs_diff(k[j]) < t_eff + 1 {
                return Err(Error::ConstraintViolation(alloc::format!(
                    "frames {} and {} closer than {}",
                    k[i],
                    k[j],
                    t_eff + 1
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ModelParts, Pooling};
    use alloc::vec;

    fn model(events: usize, dim: usize, templates: Vec<f64>, costs: Vec<f64>) -> Model {
        Model::from_parts(ModelParts {
            events,
            dim,
            templates,
            ordering_costs: costs,
            global_template: None,
            gamma_g: 0.0,
            pooling: Pooling::Mean,
            coverage: 0,
        })
        .unwrap()
    }

    #[test]
    fn single_template_dot_product() {
        let m = model(1, 2, vec![1.0, 0.0], vec![0.0]);
        let s = SequenceSample::from_frames(
            "s",
            1,
            None,
            &[vec![9.0, 9.0], vec![9.0, 9.0], vec![0.5, 2.0]],
        )
        .unwrap();
        // third frame, 0-based index 2
        let a = score_fixed(&m, &s, &[2]).unwrap();
        assert_eq!(a.total, 0.5);
        assert_eq!(a.perm_rank, 1);
    }

    #[test]
    fn two_templates_hand_evaluated() {
        let m = model(2, 2, vec![1.0, 0.0, 0.0, 1.0], vec![0.5, -0.5]);
        let s = SequenceSample::from_frames("s", 1, None, &[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let a = score_fixed(&m, &s, &[0, 1]).unwrap();
        assert_eq!(a.template_score, 2.5);
        assert_eq!(a.perm_rank, 1);
        assert_eq!(a.ordering_cost, 0.5);
        assert_eq!(a.total, 3.0);
    }

    #[test]
    fn zero_templates_leave_only_ordering_cost() {
        let costs: Vec<f64> = (1..=6).map(|j| j as f64).collect();
        let m = model(3, 2, vec![0.0; 6], costs);
        let frames: Vec<Vec<f64>> = (0..6).map(|f| vec![f as f64, 1.0]).collect();
        let s = SequenceSample::from_frames("s", 1, None, &frames).unwrap();
        for k in [[0, 2, 4], [4, 2, 0], [2, 0, 5], [1, 5, 3]] {
            let a = score_fixed(&m, &s, &k).unwrap();
            assert_eq!(a.total, perm_rank(&k).unwrap() as f64);
        }
    }

    #[test]
    fn adaptive_blend() {
        let parts = ModelParts {
            events: 1,
            dim: 2,
            templates: vec![1.0, 0.0],
            ordering_costs: vec![1.0],
            global_template: Some(vec![0.0, 2.0]),
            gamma_g: 0.25,
            pooling: Pooling::Mean,
            coverage: 0,
        };
        let m = Model::from_parts(parts).unwrap();
        let s = SequenceSample::from_frames("s", 1, None, &[vec![4.0, 1.0], vec![0.0, 3.0]]).unwrap();
        let a = score_fixed(&m, &s, &[0]).unwrap();
        assert_eq!(a.global_score, 4.0);
        assert_eq!(a.total, 0.25 * 4.0 + 0.75 * (4.0 + 1.0));
    }

    #[test]
    fn errors() {
        let m = model(2, 2, vec![0.0; 4], vec![0.0; 2]).with_coverage(1);
        let s = SequenceSample::from_frames("s", 1, None, &[vec![0.0; 2], vec![0.0; 2], vec![0.0; 2]])
            .unwrap();
        assert!(matches!(score_fixed(&m, &s, &[0, 1]), Err(Error::ConstraintViolation(_))));
        assert!(matches!(score_fixed(&m, &s, &[0, 3]), Err(Error::ConstraintViolation(_))));
        assert!(matches!(score_fixed(&m, &s, &[2, 2]), Err(Error::TiedLatentPositions)));
        assert!(score_fixed(&m, &s, &[0, 2]).is_ok());
        let wrong = SequenceSample::from_frames("w", 1, None, &[vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert!(matches!(score_fixed(&m, &wrong, &[0, 1]), Err(Error::DimensionMismatch { .. })));
    }
}
