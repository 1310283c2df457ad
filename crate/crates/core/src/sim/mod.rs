//! Simulation models and Monte-Carlo experiment runners.

mod experiments;
mod logit;
mod metrics;
mod models;

pub use experiments::{run_classification_experiment, run_df_experiment, DfCurves, MetricCurves};
pub use logit::{bayes_error_mc, draw_logit_additive, LogitAdditiveSpec, LogitDraw};
pub use metrics::{metrics, Metrics};
pub use models::{
    draw_linear, draw_regression, friedman1_mean, make_friedman1, make_model, Friedman1Spec,
    LinearModelSpec, RegressionDraw, RegressionModel,
};
