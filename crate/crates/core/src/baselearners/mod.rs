//! Base procedures fitted by least squares to a working response.

mod band;
mod linear;
mod spline;
mod tree;

pub use linear::fit_componentwise_linear;
pub use spline::{
    calibrate_spline, fit_componentwise_spline, NaturalCubic, SplineBank, SplineSmoother,
};
pub use tree::{
    fit_stump, fit_tree, fit_tree_with, TreeFit, TreeNode, TreeParams, DEFAULT_MIN_LEAF,
};

pub(crate) use linear::{check_response, select_linear};
pub(crate) use spline::select_spline;

use crate::datamodel::HatOperator;

/// Result of a componentwise (linear or spline) fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentFit {
    pub selected_index: usize,
    pub fitted: Vec<f64>,
    /// The smoother that produced `fitted`.
    pub hat: Option<HatOperator>,
    /// `(intercept, slope)` on the centered column, linear learner only.
    pub coef: Option<(f64, f64)>,
}
