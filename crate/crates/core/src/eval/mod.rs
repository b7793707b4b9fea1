//! Metrics, folds, cross-validation and grid search.

pub mod cv;
pub mod folds;
pub mod grid;
pub mod metrics;

pub use cv::{cross_validate, cross_validate_fused, evaluate_table, EvalOptions, EvalReport, Fusion, Metric};
pub use folds::{make_folds, FoldPolicy, FoldSpec};
pub use grid::{grid_search, Grid, GridPoint, GridResult};
pub use metrics::{accuracy, auc, average_class_accuracy, average_precision, mean_average_precision, roc_eer_rate};
