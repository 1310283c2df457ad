use std::sync::Arc;

use crate::baselearners::{fit_stump, fit_tree, select_linear, select_spline, SplineBank, TreeFit};
use crate::datamodel::DesignMatrix;
use crate::error::{Error, Result};

use super::config::Learner;

/// What one boosting iteration added, in a form that can predict new rows.
#[derive(Debug, Clone, PartialEq)]
pub enum StepModel {
    /// `intercept + slope · (x_index − center)`.
    Linear {
        index: usize,
        center: f64,
        intercept: f64,
        slope: f64,
    },
    /// Smoothing-spline fit, stored by its values at the column's knots.
    Spline {
        index: usize,
        knot_values: Vec<f64>,
    },
    Tree(TreeFit),
}

/// A base-learner fit of one iteration's working response (before scaling by `ν`).
#[derive(Debug, Clone, PartialEq)]
pub struct BaseStep {
    /// Selected covariate; the root split variable for trees.
    pub selected_index: usize,
    pub model: StepModel,
    /// Base fit at the training rows.
    pub fitted: Vec<f64>,
}

impl StepModel {
    pub fn predict(&self, x: &DesignMatrix, bank: Option<&SplineBank>) -> Vec<f64> {
        match self {
            StepModel::Linear {
                index,
                center,
                intercept,
                slope,
            } => x
                .column(*index)
                .iter()
                .map(|v| intercept + slope * (v - center))
                .collect(),
            StepModel::Spline { index, knot_values } => {
                let smoother = bank
                    .and_then(|b| b.get(*index))
                    .expect("spline step without its smoother");
                let f = smoother.interpolant(knot_values);
                x.column(*index).iter().map(|&v| f.eval(v)).collect()
            }
            StepModel::Tree(tree) => tree.predict(x),
        }
    }
}

/// A learner with any per-design precomputation (spline calibration) done.
#[derive(Debug, Clone)]
pub(crate) struct PreparedLearner {
    pub learner: Learner,
    pub bank: Option<Arc<SplineBank>>,
}

impl PreparedLearner {
    pub fn new(x: &DesignMatrix, learner: Learner) -> Result<Self> {
        let bank = match learner {
            Learner::ComponentwiseSpline { df } => Some(Arc::new(SplineBank::calibrate(x, df)?)),
            _ => None,
        };
        Ok(Self { learner, bank })
    }

    /// Fits `r`. With `with_intercept = false` the linear learner uses only
    /// the centered rank-one term.
    pub fn fit(&self, x: &DesignMatrix, r: &[f64], with_intercept: bool) -> Result<BaseStep> {
        match self.learner {
            Learner::ComponentwiseLinear => {
                let c = select_linear(x, r)?;
                let intercept = if with_intercept { c.intercept } else { 0.0 };
                let fitted = x
                    .centered_column(c.index)
                    .iter()
                    .map(|v| intercept + c.slope * v)
                    .collect();
                Ok(BaseStep {
                    selected_index: c.index,
                    model: StepModel::Linear {
                        index: c.index,
                        center: x.col_means()[c.index],
                        intercept,
                        slope: c.slope,
                    },
                    fitted,
                })
            }
            Learner::ComponentwiseSpline { .. } => {
                let bank = self.bank.as_deref().ok_or(Error::AllColumnsConstant)?;
                let c = select_spline(bank, r)?;
                Ok(BaseStep {
                    selected_index: c.index,
                    model: StepModel::Spline {
                        index: c.index,
                        knot_values: c.knot_values,
                    },
                    fitted: c.fitted,
                })
            }
            Learner::Stump => tree_step(fit_stump(x, r)?),
            Learner::Tree { max_leaves } => tree_step(fit_tree(x, r, max_leaves)?),
        }
    }
}

fn tree_step(tree: TreeFit) -> Result<BaseStep> {
    let selected_index = tree.root_feature().ok_or(Error::NoValidSplit)?;
    let fitted = tree.fitted.clone();
    Ok(BaseStep {
        selected_index,
        model: StepModel::Tree(tree),
        fitted,
    })
}
