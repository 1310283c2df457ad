use crate::error::{Error, Result};

/// Base procedure used in every boosting iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Learner {
    ComponentwiseLinear,
    ComponentwiseSpline { df: f64 },
    Stump,
    Tree { max_leaves: usize },
}

impl Learner {
    /// Linear smoothers admit a hat operator.
    pub fn is_linear_smoother(&self) -> bool {
        matches!(
            self,
            Learner::ComponentwiseLinear | Learner::ComponentwiseSpline { .. }
        )
    }

    pub fn name(&self) -> String {
        match self {
            Learner::ComponentwiseLinear => "linear".into(),
            Learner::ComponentwiseSpline { df } => format!("spline(df={df})"),
            Learner::Stump => "stump".into(),
            Learner::Tree { max_leaves } => format!("tree({max_leaves})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConfig {
    /// Step size in `(0, 1]`.
    pub nu: f64,
    pub mstop: usize,
    pub learner: Learner,
    /// Materialize the boosting operator `B_m` every iteration.
    pub track_hat: bool,
    /// Keep every `B_m` on the path (otherwise only their traces).
    pub retain_hat_path: bool,
}

impl BoostConfig {
    pub fn new(learner: Learner, nu: f64, mstop: usize) -> Self {
        Self {
            nu,
            mstop,
            learner,
            track_hat: false,
            retain_hat_path: false,
        }
    }

    pub fn with_hat(mut self, retain_path: bool) -> Self {
        self.track_hat = true;
        self.retain_hat_path = retain_path;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "step size must lie in (0, 1], got {}",
                self.nu
            )));
        }
        if self.mstop == 0 {
            return Err(Error::InvalidInput("mstop must be >= 1".into()));
        }
        if self.track_hat && !self.learner.is_linear_smoother() {
            return Err(Error::InvalidInput(format!(
                "hat tracking needs a linear or spline learner, got {}",
                self.learner.name()
            )));
        }
        match self.learner {
            Learner::ComponentwiseSpline { df } if !(df > 2.0) => Err(Error::InvalidInput(
                format!("spline df must exceed 2, got {df}"),
            )),
            Learner::Tree { max_leaves } if max_leaves < 2 => Err(Error::InvalidInput(format!(
                "max_leaves must be >= 2, got {max_leaves}"
            ))),
            _ => Ok(()),
        }
    }
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self::new(Learner::ComponentwiseLinear, 0.1, 100)
    }
}
