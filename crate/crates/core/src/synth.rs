//! Synthetic sequences with planted sub-events in a known temporal order.
//!
//! Positives contain `events` orthogonal unit prototypes at increasing random
//! positions, in canonical order. Negatives either contain the same
//! prototypes in a different order or none at all. Every other frame is
//! zero, and Gaussian noise is added to every coordinate of every frame.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::linalg::{dot, norm_sq, scale_add, sqrt};
use crate::{factorial, pattern_from_rank, Error, Result, SequenceSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NegativeMode {
    /// Same prototypes, non-identity order drawn uniformly.
    #[default]
    ShuffledOrder,
    /// No prototypes.
    EventsAbsent,
}

impl NegativeMode {
    pub fn name(self) -> &'static str {
        match self {
            NegativeMode::ShuffledOrder => "shuffled_order",
            NegativeMode::EventsAbsent => "events_absent",
        }
    }
}

impl core::str::FromStr for NegativeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shuffled_order" | "shuffled-order" => Ok(NegativeMode::ShuffledOrder),
            "events_absent" | "events-absent" => Ok(NegativeMode::EventsAbsent),
            other => Err(Error::InvalidConfig(alloc::format!("unknown negative mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SynthConfig {
    pub dim: usize,
    /// Sequence lengths are uniform on `n_min..=n_max`.
    pub n_min: usize,
    pub n_max: usize,
    pub events: usize,
    /// Positives across train and test together.
    pub n_pos: usize,
    pub n_neg: usize,
    pub noise_sigma: f64,
    pub neg_mode: NegativeMode,
    /// Planted frames are at least `min_gap + 1` apart.
    pub min_gap: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            dim: 16,
            n_min: 30,
            n_max: 30,
            events: 3,
            n_pos: 200,
            n_neg: 200,
            noise_sigma: 0.15,
            neg_mode: NegativeMode::ShuffledOrder,
            min_gap: 3,
            seed: 0,
        }
    }
}

/// How one generated sequence was built.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PlantRecord {
    pub id: String,
    pub label: i64,
    pub frames: usize,
    /// Frame holding each prototype; empty when none were planted.
    pub positions: Vec<usize>,
    /// Order-pattern rank of `positions`, 0 when nothing was planted.
    pub perm_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub train: Vec<SequenceSample>,
    pub test: Vec<SequenceSample>,
    /// Row-major `events x dim`.
    pub prototypes: Vec<f64>,
    pub records: Vec<PlantRecord>,
    pub warnings: Vec<String>,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.dim == 0 || self.events == 0 {
            return Err(Error::InvalidConfig("dim and events must be >= 1".into()));
        }
        if self.events > crate::MAX_EVENTS {
            return Err(Error::InvalidConfig(alloc::format!("at most {} events", crate::MAX_EVENTS)));
        }
        if self.n_min > self.n_max {
            return Err(Error::InvalidConfig("n_min > n_max".into()));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig("noise_sigma must be finite and >= 0".into()));
        }
        let needed = self.events * (self.min_gap + 1);
        if self.n_min < needed {
            return Err(Error::Infeasible(alloc::format!(
                "n_min = {} cannot hold {} events with gap {} (need {needed})",
                self.n_min,
                self.events,
                self.min_gap
            )));
        }
        if self.neg_mode == NegativeMode::ShuffledOrder && self.events < 2 && self.n_neg > 0 {
            return Err(Error::Infeasible("shuffled-order negatives need at least two events".into()));
        }
        if self.dim < self.events {
            warnings.push(alloc::format!(
                "dim {} < events {}: prototypes cannot all be orthogonal",
                self.dim,
                self.events
            ));
        }
        Ok(warnings)
    }
}

/// Unit-norm prototypes, Gram-Schmidt orthogonalized while the dimension
/// allows it.
fn prototypes(config: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = config.dim;
    let mut out: Vec<f64> = Vec::with_capacity(config.events * d);
    for i in 0..config.events {
        loop {
            let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let basis = if i < d { i } else { 0 };
            for j in 0..basis {
                let u = &out[j * d..(j + 1) * d];
                let proj = dot(&v, u);
                scale_add(&mut v, 1.0, -proj, u);
            }
            let norm = sqrt(norm_sq(&v));
            if norm > 1e-6 {
                v.iter_mut().for_each(|x| *x /= norm);
                out.extend(v);
                break;
            }
        }
    }
    out
}

/// Increasing positions with consecutive gaps of at least `min_gap + 1`,
/// uniform over all such placements.
fn placements(n: usize, events: usize, min_gap: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let slack = n - 1 - (events - 1) * (min_gap + 1);
    let mut picks: Vec<usize> = rand::seq::index::sample(rng, slack + events, events).into_vec();
    picks.sort_unstable();
    picks.iter().enumerate().map(|(j, &a)| a + j * min_gap).collect()
}

/// Generates a dataset and splits it: within each class, a seeded shuffle
/// puts the first half (rounded up) in `train` and the rest in `test`.
pub fn generate_synthetic(config: &SynthConfig) -> Result<SynthData> {
    let warnings = config.validate()?;
    for w in &warnings {
        log::warn!("{w}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = config.dim;
    let m = config.events;
    let protos = prototypes(config, &mut rng);
    let noise = Normal::new(0.0, config.noise_sigma).map_err(|_| Error::InvalidConfig("bad noise_sigma".into()))?;

    let mut samples = Vec::with_capacity(config.n_pos + config.n_neg);
    let mut records = Vec::with_capacity(config.n_pos + config.n_neg);
    let total = config.n_pos + config.n_neg;
    let width = alloc::format!("{}", total.saturating_sub(1)).len();
    for idx in 0..total {
        let positive = idx < config.n_pos;
        let label = if positive { 1 } else { -1 };
        let n = rng.random_range(config.n_min..=config.n_max);
        let mut data = vec![0.0; n * d];
        let (positions, rank) = if positive || config.neg_mode == NegativeMode::ShuffledOrder {
            let slots = placements(n, m, config.min_gap, &mut rng);
            let rank = if positive { 1 } else { rng.random_range(2..=factorial(m)) };
            // prototype i goes to the slot given by its place in the pattern
            let pattern = pattern_from_rank(m, rank)?;
            let positions: Vec<usize> = pattern.iter().map(|&r| slots[r]).collect();
            for (i, &f) in positions.iter().enumerate() {
                data[f * d..(f + 1) * d].copy_from_slice(&protos[i * d..(i + 1) * d]);
            }
            (positions, rank)
        } else {
            (Vec::new(), 0)
        };
        for x in data.iter_mut() {
            *x += noise.sample(&mut rng);
        }
        let id = alloc::format!("{}{:0width$}", if positive { "pos" } else { "neg" }, idx);
        log::debug!("{id}: label {label}, {n} frames, prototypes at {positions:?} (rank {rank})");
        records.push(PlantRecord { id: id.clone(), label, frames: n, positions, perm_rank: rank });
        samples.push(SequenceSample::new(id, label, None, d, data)?);
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [1i64, -1] {
        let mut members: Vec<SequenceSample> = samples.iter().filter(|s| s.label() == class).cloned().collect();
        members.shuffle(&mut rng);
        let cut = members.len().div_ceil(2);
        let rest = members.split_off(cut);
        train.extend(members);
        test.extend(rest);
    }
    Ok(SynthData { train, test, prototypes: protos, records, warnings })
}
