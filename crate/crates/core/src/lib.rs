//! Boosting with componentwise base learners and degrees-of-freedom
//! estimation for the boosting operator.
//!
//! * [`datamodel`]: fixed designs, dense hat operators, seeded generators.
//! * [`baselearners`]: componentwise linear least squares, smoothing
//!   splines, stumps and small trees.
//! * [`boost`]: L2Boost (with optional tracking of `B_m`) and BinomialBoost.
//! * [`dof`]: trace, active-set and Monte-Carlo covariance degrees of freedom.
//! * [`sim`]: the simulation models and experiment runners.

// index loops mirror the banded and matrix algebra; negated comparisons reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod baselearners;
pub mod boost;
pub mod datamodel;
pub mod dof;
mod error;
pub mod sim;

pub use baselearners::{ComponentFit, SplineBank, SplineSmoother, TreeFit};
pub use boost::{
    binomial_boost, l2boost, predict_binomial, predict_l2, BinomBoostPath, BoostConfig,
    L2BoostPath, L2Booster, Learner,
};
pub use datamodel::{DesignMatrix, HatOperator, RNG_ALGORITHM};
pub use dof::{aic_stop, df_actset, df_trace, df_true_mc, AicStop, DfEstimator};
pub use error::{Error, Result};
pub use sim::{DfCurves, LinearModelSpec, LogitAdditiveSpec, MetricCurves, Metrics};
