//! Stochastic subgradient training on the regularized hinge loss.
//!
//! Each iteration draws one sample uniformly with replacement, infers its
//! latent assignment, and updates the model only if the sample violates the
//! margin (`y * s < 1`). Regularization shrinkage is applied inside that
//! branch only, so the objective is not guaranteed to decrease monotonically.
//!
//! Randomness comes from `ChaCha8Rng` (`rand_chacha` 0.9) seeded with
//! `seed_from_u64`; sample indices use `Rng::random_range` from `rand` 0.9.
//! Both algorithms are fixed for a given crate version, so seeds reproduce
//! across platforms.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::inference::{infer, InferenceConfig, Solver};
use crate::linalg::scale_add;
use crate::score::{check_dims, score_with_radius};
use crate::{effective_t, pool, Error, Model, Pooling, Result, SequenceSample};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TrainConfig {
    /// Number of sub-event templates `M`.
    pub events: usize,
    /// Learning rate, constant across iterations.
    pub eta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma_g: f64,
    pub coverage_t: usize,
    pub maxiter: usize,
    pub seed: u64,
    pub pooling: Pooling,
    /// When false the ordering costs stay at zero.
    pub ordinal_enabled: bool,
    /// Templates start uniform on `[0, init_scale]`.
    pub init_scale: f64,
    /// Solver used for the latent assignment during training.
    pub solver: Solver,
    /// Iterations between objective evaluations; 0 picks `maxiter / 100`.
    pub trace_interval: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            events: 3,
            eta: 0.05,
            lambda1: 1e-5,
            lambda2: 0.0,
            gamma_g: 0.0,
            coverage_t: 5,
            maxiter: 10_000,
            seed: 0,
            pooling: Pooling::Mean,
            ordinal_enabled: true,
            init_scale: 1e-4,
            solver: Solver::Greedy,
            trace_interval: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let reals = [self.eta, self.lambda1, self.lambda2, self.gamma_g, self.init_scale];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite hyperparameter".into()));
        }
        if self.eta <= 0.0 {
            return Err(Error::InvalidConfig(alloc::format!("eta must be > 0, got {}", self.eta)));
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 {
            return Err(Error::InvalidConfig("regularization weights must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma_g) {
            return Err(Error::InvalidConfig(alloc::format!(
                "gamma_g = {} outside [0, 1]",
                self.gamma_g
            )));
        }
        if self.init_scale < 0.0 {
            return Err(Error::InvalidConfig("init_scale must be >= 0".into()));
        }
        if self.events == 0 || self.events > crate::MAX_EVENTS {
            return Err(Error::InvalidConfig(alloc::format!(
                "events must be in [1, {}], got {}",
                crate::MAX_EVENTS,
                self.events
            )));
        }
        Ok(())
    }

    fn inference(&self) -> InferenceConfig {
        InferenceConfig { solver: self.solver, coverage_t: self.coverage_t, clamp: true }
    }

    fn effective_trace_interval(&self) -> usize {
        if self.trace_interval > 0 {
            self.trace_interval
        } else {
            (self.maxiter / 100).max(1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    pub iteration: usize,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub model: Model,
    /// Objective at iteration 0, every `trace_interval` iterations, and at
    /// the end.
    pub trace: Vec<TracePoint>,
    /// Iterations whose sample violated the margin.
    pub violations: usize,
    /// Wall-clock time; filled in by callers that have a clock.
    pub elapsed: Option<Duration>,
}

/// Initial model: template coordinates i.i.d. uniform on `[0, init_scale]`,
/// all ordering costs zero. The global template, present when
/// `gamma_g > 0`, is drawn the same way after the local templates.
pub fn init_model(config: &TrainConfig, dim: usize, seed: u64) -> Result<Model> {
    init_with_rng(config, dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn init_with_rng(config: &TrainConfig, dim: usize, rng: &mut ChaCha8Rng) -> Result<Model> {
    config.validate()?;
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be >= 1".into()));
    }
    let mut parts =
        Model::zeros(config.events, dim, config.gamma_g, config.pooling, config.coverage_t)?.into_parts();
    let scale = config.init_scale;
    for v in &mut parts.templates {
        *v = rng.random::<f64>() * scale;
    }
    if let Some(g) = &mut parts.global_template {
        for v in g.iter_mut() {
            *v = rng.random::<f64>() * scale;
        }
    }
    Model::from_parts(parts)
}

fn check_binary(sample: &SequenceSample) -> Result<f64> {
    match sample.label() {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        label => Err(Error::InvalidLabel { label, reason: "binary training needs labels -1/+1" }),
    }
}

/// One stochastic update. Returns whether the sample violated the margin;
/// when it did not, the model is left untouched.
pub fn sgd_step(model: &mut Model, sample: &SequenceSample, config: &TrainConfig) -> Result<bool> {
    check_dims(model, sample)?;
    let y = check_binary(sample)?;
    let assignment = infer(model, sample, &config.inference())?;
    if y * assignment.total >= 1.0 {
        return Ok(false);
    }

    let eta = config.eta;
    let gamma = model.gamma_g();
    let m = model.events() as f64;
    let shrink_w = 1.0 - config.lambda1 * eta;
    let local_step = eta * (1.0 - gamma) * y;

    for (i, &f) in assignment.k.iter().enumerate() {
        scale_add(model.template_mut(i), shrink_w, local_step / m, sample.frame(f));
    }
    if config.ordinal_enabled {
        let shrink_c = 1.0 - config.lambda2 * eta;
        let costs = model.ordering_costs_mut();
        costs.iter_mut().for_each(|c| *c *= shrink_c);
        costs[assignment.perm_rank - 1] += local_step;
    }
    if model.global_template().is_some() {
        let pooled = pool(sample, model.pooling());
        let global_step = eta * gamma * y;
        if let Some(g) = model.global_template_mut() {
            scale_add(g, shrink_w, global_step, &pooled);
        }
    }
    Ok(true)
}

fn check_dataset(dataset: &[SequenceSample]) -> Result<usize> {
    let first = dataset.first().ok_or(Error::EmptyDataset)?;
    let dim = first.dim();
    for s in dataset {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
        }
    }
    Ok(dim)
}

/// Runs `maxiter` stochastic updates from [`init_model`] with the config seed.
pub fn train(dataset: &[SequenceSample], config: &TrainConfig) -> Result<TrainReport> {
    let dim = check_dataset(dataset)?;
    for s in dataset {
        check_binary(s)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = init_with_rng(config, dim, &mut rng)?;

    let interval = config.effective_trace_interval();
    let mut trace = vec![TracePoint { iteration: 0, objective: objective(&model, dataset, config, config.solver)? }];
    let mut violations = 0;
    for iteration in 1..=config.maxiter {
        let idx = rng.random_range(0..dataset.len());
        if sgd_step(&mut model, &dataset[idx], config)? {
            violations += 1;
        }
        if iteration % interval == 0 || iteration == config.maxiter {
            trace.push(TracePoint { iteration, objective: objective(&model, dataset, config, config.solver)? });
        }
    }
    log::debug!("trained {} iterations, {} margin violations", config.maxiter, violations);
    Ok(TrainReport { model, trace, violations, elapsed: None })
}

/// Regularized mean hinge loss:
/// `l1/2 (sum |w_i|^2 + |w_g|^2) + l2/2 sum c_j^2 + mean max(0, 1 - y s)`.
pub fn objective(model: &Model, dataset: &[SequenceSample], config: &TrainConfig, solver: Solver) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let inference = InferenceConfig { solver, coverage_t: model.coverage(), clamp: true };
    let mut hinge = 0.0;
    for s in dataset {
        let y = check_binary(s)?;
        let score = infer(model, s, &inference)?.total;
        hinge += (1.0 - y * score).max(0.0);
    }
    Ok(regularizer(model, config) + hinge / dataset.len() as f64)
}

fn regularizer(model: &Model, config: &TrainConfig) -> f64 {
    0.5 * config.lambda1 * model.weight_norm_sq() + 0.5 * config.lambda2 * model.cost_norm_sq()
}

/// Gradient of [`fixed_assignment_loss`], laid out like the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub templates: Vec<f64>,
    pub ordering_costs: Vec<f64>,
    pub global_template: Option<Vec<f64>>,
}

/// Loss of one sample with its latent assignment frozen to `k`:
/// the regularizer plus `max(0, 1 - y s_k)`.
pub fn fixed_assignment_loss(model: &Model, sample: &SequenceSample, k: &[usize], config: &TrainConfig) -> Result<f64> {
    let y = check_binary(sample)?;
    let t_eff = effective_t(sample.len(), model.events(), model.coverage())?;
    let s = score_with_radius(model, sample, k, t_eff)?.total;
    Ok(regularizer(model, config) + (1.0 - y * s).max(0.0))
}

/// Analytic subgradient of [`fixed_assignment_loss`]. Inside the margin:
/// `l1 w_i - (1 - g) y x_{k_i} / M` for templates,
/// `l2 c_j - (1 - g) y [j = rank(k)]` for costs, and
/// `l1 w_g - g y Pool(X)` for the global template. Outside, only the
/// regularizer terms remain.
pub fn fixed_assignment_gradient(
    model: &Model,
    sample: &SequenceSample,
    k: &[usize],
    config: &TrainConfig,
) -> Result<Gradient> {
    let y = check_binary(sample)?;
    let t_eff = effective_t(sample.len(), model.events(), model.coverage())?;
    let assignment = score_with_radius(model, sample, k, t_eff)?;
    let (l1, l2) = (config.lambda1, config.lambda2);
    let gamma = model.gamma_g();
    let m = model.events() as f64;

    let mut templates: Vec<f64> = model.templates().iter().map(|w| l1 * w).collect();
    let mut ordering_costs: Vec<f64> = model.ordering_costs().iter().map(|c| l2 * c).collect();
    let mut global_template = model.global_template().map(|g| g.iter().map(|w| l1 * w).collect::<Vec<_>>());

    if y * assignment.total < 1.0 {
        let d = model.dim();
        for (i, &f) in k.iter().enumerate() {
            scale_add(&mut templates[i * d..(i + 1) * d], 1.0, -(1.0 - gamma) * y / m, sample.frame(f));
        }
        ordering_costs[assignment.perm_rank - 1] -= (1.0 - gamma) * y;
        if let Some(g) = &mut global_template {
            scale_add(g, 1.0, -gamma * y, &pool(sample, model.pooling()));
        }
    }
    Ok(Gradient { templates, ordering_costs, global_template })
}
