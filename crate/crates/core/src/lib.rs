//! Latent ordinal models for weakly supervised sequence classification.
//!
//! A model holds `M` sub-event templates that each fire on one frame of a
//! sequence, plus a learned cost for every one of the `M!` temporal orders in
//! which they can fire. Scoring maximizes over the latent frame assignment;
//! training is a stochastic subgradient method on the regularized hinge loss
//! using only sequence-level labels. The adaptive variant blends in a global
//! template applied to a temporally pooled descriptor.
//!
//! This crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! wall-clock timing live in the `lomo` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod hash;

pub mod eval;
pub mod exec;
pub mod inference;
pub mod linalg;
pub mod model;
pub mod perm;
pub mod pipeline;
pub mod sample;
pub mod score;
pub mod synth;
pub mod training;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use inference::{effective_t, infer, infer_brute, infer_dp, infer_greedy, InferenceConfig, Solver};
pub use model::{Model, ModelParts, Pooling, MAX_EVENTS};
pub use perm::{factorial, pattern_from_rank, perm_rank};
pub use pipeline::{Classifier, ModelKind, ModelSpec, MulticlassModel, Task};
pub use sample::{pool, SequenceSample};
pub use score::{score_fixed, LatentAssignment};
pub use training::{init_model, objective, sgd_step, train, TrainConfig, TrainReport};
