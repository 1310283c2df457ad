//! L2Boost and BinomialBoost.

mod binomial;
mod config;
mod l2;
mod step;
mod working;

pub use binomial::{binomial_boost, predict_binomial, BinomBoostPath, BinomialPrediction};
pub use config::{BoostConfig, Learner};
pub use l2::{l2boost, predict_l2, L2BoostPath, L2Booster};
pub use step::{BaseStep, StepModel};
pub use working::{
    mean_surrogate_loss, probability, surrogate_loss, working_response_linear,
    working_response_quadratic, DEFAULT_QUADRATIC_CAP,
};
