use rayon::prelude::*;

use crate::boost::{binomial_boost, BinomialPrediction, BoostConfig, L2Booster, Learner};
use crate::dof::{covariance_df, df_actset_curve, grid_fits, mean_and_se};
use crate::error::{Error, Result};

use super::logit::{draw_logit_additive, LogitAdditiveSpec};
use super::metrics::{metrics, Metrics};
use super::models::RegressionModel;

/// Per-replicate df curves plus the Monte-Carlo covariance df, all on the
/// same `m_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfCurves {
    pub m_grid: Vec<usize>,
    /// `[replicate][grid index]`.
    pub df_trace: Vec<Vec<f64>>,
    pub df_actset: Vec<Vec<usize>>,
    pub df_true_hat: Vec<f64>,
    pub df_true_se: Vec<f64>,
    pub sigma_sq: f64,
}

impl DfCurves {
    pub fn replicates(&self) -> usize {
        self.df_trace.len()
    }

    /// Mean and standard error of `df_trace` across replicates.
    pub fn trace_summary(&self) -> (Vec<f64>, Vec<f64>) {
        mean_and_se(&self.df_trace)
    }
}

fn check_grid(m_grid: &[usize], mstop: usize) -> Result<()> {
    match m_grid.iter().find(|&&m| m > mstop) {
        Some(&m) => Err(Error::IterationOutOfRange { m, len: mstop }),
        None => Ok(()),
    }
}

/// Runs `replicates` noise draws on the model's fixed design and records
/// `trace(B_m)`, the active-set df and the covariance df for every `m` in
/// `m_grid`. Hat tracking is switched on regardless of `config.track_hat`.
pub fn run_df_experiment<M: RegressionModel + ?Sized>(
    model: &M,
    config: &BoostConfig,
    m_grid: &[usize],
    replicates: usize,
) -> Result<DfCurves> {
    if replicates < 2 {
        return Err(Error::InvalidInput("need at least 2 replicates".into()));
    }
    check_grid(m_grid, config.mstop)?;
    let config = config.with_hat(false);
    let x = model.design()?;
    let mu = model.mean(&x);
    let booster = L2Booster::new(&x, config)?;
    let sigma_sq = model.sigma_sq();

    let per_rep = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let eps = model.noise(x.n(), r as u64);
            let y: Vec<f64> = mu.iter().zip(&eps).map(|(m, e)| m + e).collect();
            let path = booster.fit(&y)?;
            let traces = path.hat_traces.as_ref().expect("tracking enabled");
            let actset = df_actset_curve(&path);
            let trace_row: Vec<f64> = m_grid.iter().map(|&m| traces[m]).collect();
            let actset_row: Vec<usize> = m_grid.iter().map(|&m| actset[m]).collect();
            let fits = grid_fits(&path, m_grid)?;
            Ok((trace_row, actset_row, fits, eps))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut df_trace = Vec::with_capacity(replicates);
    let mut df_actset = Vec::with_capacity(replicates);
    let mut fits = Vec::with_capacity(replicates);
    let mut noise = Vec::with_capacity(replicates);
    for (t, a, f, e) in per_rep {
        df_trace.push(t);
        df_actset.push(a);
        fits.push(f);
        noise.push(e);
    }
    let (df_true_hat, df_true_se) = covariance_df(&fits, &noise, sigma_sq);
    Ok(DfCurves {
        m_grid: m_grid.to_vec(),
        df_trace,
        df_actset,
        df_true_hat,
        df_true_se,
        sigma_sq,
    })
}

/// Test metrics of one learner across simulations.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCurves {
    pub learner: Learner,
    pub m_grid: Vec<usize>,
    /// `[simulation][grid index]`.
    pub per_sim: Vec<Vec<Metrics>>,
    pub mean: Vec<Metrics>,
    pub se: Vec<Metrics>,
}

fn summarize(per_sim: &[Vec<Metrics>]) -> (Vec<Metrics>, Vec<Metrics>) {
    let pick = |f: fn(&Metrics) -> f64| -> (Vec<f64>, Vec<f64>) {
        let rows: Vec<Vec<f64>> = per_sim
            .iter()
            .map(|row| row.iter().map(f).collect())
            .collect();
        mean_and_se(&rows)
    };
    let (mis_m, mis_s) = pick(|m| m.misclassification);
    let (sur_m, sur_s) = pick(|m| m.surrogate_loss);
    let (abs_m, abs_s) = pick(|m| m.abs_prob_error);
    let zip = |a: Vec<f64>, b: Vec<f64>, c: Vec<f64>| -> Vec<Metrics> {
        a.into_iter()
            .zip(b)
            .zip(c)
            .map(
                |((misclassification, surrogate_loss), abs_prob_error)| Metrics {
                    misclassification,
                    surrogate_loss,
                    abs_prob_error,
                },
            )
            .collect()
    };
    (zip(mis_m, sur_m, abs_m), zip(mis_s, sur_s, abs_s))
}

/// BinomialBoost on `nsim` fresh draws of the additive logistic model,
/// every learner fitted to the same draw, evaluated on the test set at each
/// `m` in `m_grid`.
pub fn run_classification_experiment(
    spec: &LogitAdditiveSpec,
    learners: &[Learner],
    nsim: usize,
    mstop: usize,
    nu: f64,
    m_grid: &[usize],
) -> Result<Vec<MetricCurves>> {
    if nsim == 0 || learners.is_empty() {
        return Err(Error::InvalidInput(
            "need at least one simulation and one learner".into(),
        ));
    }
    check_grid(m_grid, mstop)?;
    let mut wanted = vec![None; mstop + 1];
    for (k, &m) in m_grid.iter().enumerate() {
        wanted[m] = Some(k);
    }

    // [sim][learner][grid]
    let results = (0..nsim)
        .into_par_iter()
        .map(|s| {
            let draw = draw_logit_additive(spec, s as u64)?;
            learners
                .iter()
                .map(|&learner| {
                    let path = binomial_boost(
                        &draw.x_train,
                        &draw.y_train,
                        &BoostConfig::new(learner, nu, mstop),
                    )?;
                    let mut row = vec![Metrics::default(); m_grid.len()];
                    let mut err = None;
                    path.staged_scores(&draw.x_test, |m, f| {
                        if let Some(k) = wanted[m] {
                            let pred = BinomialPrediction::from_scores(f.to_vec());
                            match metrics(
                                &pred.scores,
                                &pred.probs,
                                &pred.labels,
                                &draw.y_test,
                                &draw.p_test,
                            ) {
                                Ok(v) => row[k] = v,
                                Err(e) => err = Some(e),
                            }
                        }
                    })?;
                    err.map_or(Ok(row), Err)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(learners
        .iter()
        .enumerate()
        .map(|(l, &learner)| {
            let per_sim: Vec<Vec<Metrics>> = results.iter().map(|sim| sim[l].clone()).collect();
            let (mean, se) = summarize(&per_sim);
            MetricCurves {
                learner,
                m_grid: m_grid.to_vec(),
                per_sim,
                mean,
                se,
            }
        })
        .collect())
}
