use std::sync::Arc;

use crate::baselearners::{check_response, SplineBank};
use crate::datamodel::DesignMatrix;
use crate::error::{Error, Result};

use super::config::{BoostConfig, Learner};
use super::l2::aggregate_linear;
use super::step::{BaseStep, PreparedLearner};
use super::working::{mean_surrogate_loss, probability, working_response_linear};

/// Record of a BinomialBoost run. Scores are half log-odds.
#[derive(Debug, Clone)]
pub struct BinomBoostPath {
    pub nu: f64,
    pub learner: Learner,
    /// `f_0 = ½ log(p̄ / (1 − p̄))`.
    pub offset: f64,
    pub steps: Vec<BaseStep>,
    /// Training scores `f^(m)(x_i)` for `m = 0..=mstop`.
    pub score_path: Vec<Vec<f64>>,
    pub response: Vec<f64>,
    p: usize,
    bank: Option<Arc<SplineBank>>,
}

impl BinomBoostPath {
    pub fn mstop(&self) -> usize {
        self.steps.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn spline_bank(&self) -> Option<&SplineBank> {
        self.bank.as_deref()
    }

    /// Mean training surrogate loss after `m` iterations.
    pub fn train_loss(&self, m: usize) -> Result<f64> {
        let f = self.score_path.get(m).ok_or(Error::IterationOutOfRange {
            m,
            len: self.mstop(),
        })?;
        Ok(mean_surrogate_loss(&self.response, f))
    }

    /// Calls `visit(m, scores)` for every `m = 0..=mstop` with the scores at
    /// the rows of `x`, adding one step at a time.
    pub fn staged_scores(
        &self,
        x: &DesignMatrix,
        mut visit: impl FnMut(usize, &[f64]),
    ) -> Result<()> {
        if x.p() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: x.p(),
            });
        }
        let mut f = vec![self.offset; x.n()];
        visit(0, &f);
        for (k, step) in self.steps.iter().enumerate() {
            for (fi, v) in f.iter_mut().zip(step.model.predict(x, self.spline_bank())) {
                *fi += self.nu * v;
            }
            visit(k + 1, &f);
        }
        Ok(())
    }

    /// Half-log-odds intercept and slopes for the linear learner.
    pub fn linear_coefficients(&self, m: usize) -> Result<(f64, Vec<f64>)> {
        if self.learner != Learner::ComponentwiseLinear {
            return Err(Error::InvalidInput(
                "coefficients exist only for the linear learner".into(),
            ));
        }
        if m > self.mstop() {
            return Err(Error::IterationOutOfRange {
                m,
                len: self.mstop(),
            });
        }
        Ok(aggregate_linear(
            self.offset,
            self.nu,
            self.p,
            &self.steps[..m],
        ))
    }
}

/// BinomialBoost by functional gradient descent: each iteration fits
/// `z_i = 2(y_i − p_i)` by least squares and adds `ν` times the fit. No line search.
pub fn binomial_boost(x: &DesignMatrix, y: &[f64], config: &BoostConfig) -> Result<BinomBoostPath> {
    config.validate()?;
    if config.track_hat {
        return Err(Error::InvalidInput(
            "hat tracking is defined for L2 boosting only".into(),
        ));
    }
    check_response(x, y)?;
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::InvalidInput("binomial labels must be 0 or 1".into()));
    }
    let n = x.n();
    let ybar = y.iter().sum::<f64>() / n as f64;
    if ybar == 0.0 || ybar == 1.0 {
        return Err(Error::SingleClassInput);
    }
    let prepared = PreparedLearner::new(x, config.learner)?;

    let offset = 0.5 * (ybar / (1.0 - ybar)).ln();
    let mut f = vec![offset; n];
    let mut score_path = Vec::with_capacity(config.mstop + 1);
    score_path.push(f.clone());
    let mut steps = Vec::with_capacity(config.mstop);
    let mut z = vec![0.0; n];
    for _ in 0..config.mstop {
        for ((zi, &yi), &fi) in z.iter_mut().zip(y).zip(&f) {
            *zi = working_response_linear(yi, probability(fi));
        }
        let step = prepared.fit(x, &z, true)?;
        for (fi, s) in f.iter_mut().zip(&step.fitted) {
            *fi += config.nu * s;
        }
        score_path.push(f.clone());
        steps.push(step);
    }
    Ok(BinomBoostPath {
        nu: config.nu,
        learner: config.learner,
        offset,
        steps,
        score_path,
        response: y.to_vec(),
        p: x.p(),
        bank: prepared.bank,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialPrediction {
    pub scores: Vec<f64>,
    pub probs: Vec<f64>,
    /// 1 when the score is strictly positive.
    pub labels: Vec<u8>,
}

impl BinomialPrediction {
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let probs = scores.iter().map(|&f| probability(f)).collect();
        let labels = scores.iter().map(|&f| u8::from(f > 0.0)).collect();
        Self {
            scores,
            probs,
            labels,
        }
    }
}

pub fn predict_binomial(
    path: &BinomBoostPath,
    m: usize,
    xnew: &DesignMatrix,
) -> Result<BinomialPrediction> {
    if xnew.p() != path.p {
        return Err(Error::DimensionMismatch {
            expected: path.p,
            got: xnew.p(),
        });
    }
    if m > path.mstop() {
        return Err(Error::IterationOutOfRange {
            m,
            len: path.mstop(),
        });
    }
    let mut f = vec![path.offset; xnew.n()];
    for step in &path.steps[..m] {
        for (fi, v) in f
            .iter_mut()
            .zip(step.model.predict(xnew, path.spline_bank()))
        {
            *fi += path.nu * v;
        }
    }
    Ok(BinomialPrediction::from_scores(f))
}
