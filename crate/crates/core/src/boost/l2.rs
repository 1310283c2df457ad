use std::sync::Arc;

use crate::baselearners::{check_response, SplineBank};
use crate::datamodel::{DesignMatrix, HatOperator};
use crate::error::{Error, Result};

use super::config::{BoostConfig, Learner};
use super::step::{BaseStep, PreparedLearner, StepModel};

/// Full record of an L2Boost run.
#[derive(Debug, Clone)]
pub struct L2BoostPath {
    pub nu: f64,
    pub learner: Learner,
    /// `ȳ`, fitted once at `m = 0`.
    pub intercept: f64,
    pub steps: Vec<BaseStep>,
    /// `Ŷ^(m)` for `m = 0..=mstop`.
    pub fitted_path: Vec<Vec<f64>>,
    pub response: Vec<f64>,
    /// `trace(B_m)` for `m = 0..=mstop` when the hat was tracked.
    pub hat_traces: Option<Vec<f64>>,
    /// `B_0..B_mstop` when tracked and retained.
    pub hat_path: Option<Vec<HatOperator>>,
    p: usize,
    bank: Option<Arc<SplineBank>>,
}

impl L2BoostPath {
    pub fn mstop(&self) -> usize {
        self.steps.len()
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn selected_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.selected_index)
    }

    pub fn fitted(&self, m: usize) -> Result<&[f64]> {
        self.fitted_path
            .get(m)
            .map(Vec::as_slice)
            .ok_or(Error::IterationOutOfRange {
                m,
                len: self.mstop(),
            })
    }

    /// Training residual sum of squares after `m` iterations.
    pub fn rss(&self, m: usize) -> Result<f64> {
        Ok(self
            .response
            .iter()
            .zip(self.fitted(m)?)
            .map(|(y, f)| (y - f) * (y - f))
            .sum())
    }

    pub fn spline_bank(&self) -> Option<&SplineBank> {
        self.bank.as_deref()
    }

    /// Intercept and per-column slopes (on the original covariate scale)
    /// after `m` iterations of the componentwise linear learner.
    pub fn linear_coefficients(&self, m: usize) -> Result<(f64, Vec<f64>)> {
        if self.learner != Learner::ComponentwiseLinear {
            return Err(Error::InvalidInput(
                "coefficients exist only for the linear learner".into(),
            ));
        }
        self.fitted(m)?;
        Ok(aggregate_linear(
            self.intercept,
            self.nu,
            self.p,
            &self.steps[..m],
        ))
    }
}

pub(crate) fn aggregate_linear(
    offset: f64,
    nu: f64,
    p: usize,
    steps: &[BaseStep],
) -> (f64, Vec<f64>) {
    let mut intercept = offset;
    let mut beta = vec![0.0; p];
    for s in steps {
        if let StepModel::Linear {
            index,
            center,
            intercept: a,
            slope,
        } = s.model
        {
            beta[index] += nu * slope;
            intercept += nu * (a - slope * center);
        }
    }
    (intercept, beta)
}

/// L2Boost bound to one design, so spline calibration is done once and
/// reused across many responses.
#[derive(Debug, Clone)]
pub struct L2Booster<'a> {
    x: &'a DesignMatrix,
    config: BoostConfig,
    prepared: PreparedLearner,
}

impl<'a> L2Booster<'a> {
    pub fn new(x: &'a DesignMatrix, config: BoostConfig) -> Result<Self> {
        config.validate()?;
        let prepared = PreparedLearner::new(x, config.learner)?;
        Ok(Self {
            x,
            config,
            prepared,
        })
    }

    pub fn config(&self) -> &BoostConfig {
        &self.config
    }

    pub fn spline_bank(&self) -> Option<&SplineBank> {
        self.prepared.bank.as_deref()
    }

    pub fn fit(&self, y: &[f64]) -> Result<L2BoostPath> {
        let x = self.x;
        check_response(x, y)?;
        let n = x.n();
        let nu = self.config.nu;
        let intercept = y.iter().sum::<f64>() / n as f64;
        let mut fitted = vec![intercept; n];
        let mut fitted_path = Vec::with_capacity(self.config.mstop + 1);
        fitted_path.push(fitted.clone());

        let track = self.config.track_hat;
        let mut hat = track.then(|| HatOperator::mean_projection(n));
        let mut traces = track.then(|| vec![1.0]);
        let mut hat_path =
            (track && self.config.retain_hat_path).then(|| vec![HatOperator::mean_projection(n)]);

        let mut steps = Vec::with_capacity(self.config.mstop);
        let mut residual = vec![0.0; n];
        for _ in 0..self.config.mstop {
            for ((r, yi), fi) in residual.iter_mut().zip(y).zip(&fitted) {
                *r = yi - fi;
            }
            let step = self.prepared.fit(x, &residual, false)?;
            for (f, s) in fitted.iter_mut().zip(&step.fitted) {
                *f += nu * s;
            }
            if let Some(b) = hat.as_mut() {
                self.update_hat(b, &step);
                traces.as_mut().unwrap().push(b.trace());
                if let Some(path) = hat_path.as_mut() {
                    path.push(b.clone());
                }
            }
            fitted_path.push(fitted.clone());
            steps.push(step);
        }

        Ok(L2BoostPath {
            nu,
            learner: self.config.learner,
            intercept,
            steps,
            fitted_path,
            response: y.to_vec(),
            hat_traces: traces,
            hat_path,
            p: x.p(),
            bank: self.prepared.bank.clone(),
        })
    }

    /// `B ← B + ν H (I − B)` with `H` the selected component's smoother.
    fn update_hat(&self, b: &mut HatOperator, step: &BaseStep) {
        let n = b.n();
        let nu = self.config.nu;
        match &step.model {
            StepModel::Linear { index, .. } => {
                let xc = self.x.centered_column(*index);
                let norm = self.x.centered_col_sq_norms()[*index];
                // v = x̃ᵀ(I − B)
                let mut v = xc.to_vec();
                for (i, &xi) in xc.iter().enumerate() {
                    if xi != 0.0 {
                        for (vl, bil) in v.iter_mut().zip(b.row(i)) {
                            *vl -= xi * bil;
                        }
                    }
                }
                let data = b.as_mut_slice();
                for (i, &xi) in xc.iter().enumerate() {
                    let scale = nu * xi / norm;
                    for (d, vl) in data[i * n..(i + 1) * n].iter_mut().zip(&v) {
                        *d += scale * vl;
                    }
                }
            }
            StepModel::Spline { index, .. } => {
                let smoother = self
                    .prepared
                    .bank
                    .as_ref()
                    .and_then(|bk| bk.get(*index))
                    .expect("calibrated smoother");
                let mut col = vec![0.0; n];
                for l in 0..n {
                    for (i, c) in col.iter_mut().enumerate() {
                        *c = if i == l { 1.0 } else { 0.0 } - b.get(i, l);
                    }
                    let sc = smoother.apply(&col);
                    for (i, v) in sc.iter().enumerate() {
                        b.set(i, l, b.get(i, l) + nu * v);
                    }
                }
            }
            StepModel::Tree(_) => unreachable!("validated: trees carry no hat operator"),
        }
    }
}

/// Runs L2Boost: `Ŷ^(m) = Ŷ^(m−1) + ν·H_{s_m}(Y − Ŷ^(m−1))` starting from `ȳ`.
pub fn l2boost(x: &DesignMatrix, y: &[f64], config: &BoostConfig) -> Result<L2BoostPath> {
    L2Booster::new(x, *config)?.fit(y)
}

/// Prediction after `m` iterations at new rows.
pub fn predict_l2(path: &L2BoostPath, m: usize, xnew: &DesignMatrix) -> Result<Vec<f64>> {
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
    let mut out = vec![path.intercept; xnew.n()];
    for step in &path.steps[..m] {
        for (o, v) in out
            .iter_mut()
            .zip(step.model.predict(xnew, path.spline_bank()))
        {
            *o += path.nu * v;
        }
    }
    Ok(out)
}
