//! Degrees-of-freedom estimators for L2Boost and corrected-AIC stopping.

use std::collections::HashSet;

use crate::boost::{BoostConfig, L2BoostPath, L2Booster};
use crate::error::{Error, Result};
use crate::sim::RegressionModel;

/// `trace(B_m)`.
pub fn df_trace(path: &L2BoostPath, m: usize) -> Result<f64> {
    let traces = path.hat_traces.as_ref().ok_or(Error::HatNotTracked)?;
    traces.get(m).copied().ok_or(Error::IterationOutOfRange {
        m,
        len: path.mstop(),
    })
}

/// One (intercept) plus the number of distinct covariates selected in the
/// first `m` iterations.
pub fn df_actset(path: &L2BoostPath, m: usize) -> Result<usize> {
    if m > path.mstop() {
        return Err(Error::IterationOutOfRange {
            m,
            len: path.mstop(),
        });
    }
    Ok(1 + path
        .selected_indices()
        .take(m)
        .collect::<HashSet<_>>()
        .len())
}

/// Active-set df for every `m = 0..=mstop` in one pass.
pub fn df_actset_curve(path: &L2BoostPath) -> Vec<usize> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(path.mstop() + 1);
    out.push(1);
    for j in path.selected_indices() {
        seen.insert(j);
        out.push(1 + seen.len());
    }
    out
}

/// `Ŷ^(m)` for each `m` in `m_grid`.
pub(crate) fn grid_fits(path: &L2BoostPath, m_grid: &[usize]) -> Result<Vec<Vec<f64>>> {
    m_grid
        .iter()
        .map(|&m| path.fitted(m).map(<[f64]>::to_vec))
        .collect()
}

/// Covariance df from `R` replicates on a fixed design, given each
/// replicate's grid fits `[replicate][grid][i]` and its noise vector.
///
/// Per replicate and grid point the term is
/// `R/(R−1) · Σ_i (Ŷ_i − mean_r Ŷ_i) ε_i / σ²`. Centering by the replicate
/// mean removes the `Σ_i E[Ŷ_i] ε_i` part, whose variance grows with the
/// signal, and the `R/(R−1)` factor keeps the mean of the terms unbiased
/// because noise is independent across replicates. Returns the mean and
/// sd / √R of the terms.
pub(crate) fn covariance_df(
    fits: &[Vec<Vec<f64>>],
    eps: &[Vec<f64>],
    sigma_sq: f64,
) -> (Vec<f64>, Vec<f64>) {
    let r = fits.len();
    let grid = fits.first().map_or(0, Vec::len);
    let scale = r as f64 / (r as f64 - 1.0) / sigma_sq;
    let mut terms = vec![vec![0.0; grid]; r];
    for k in 0..grid {
        let n = fits[0][k].len();
        let mut centre = vec![0.0; n];
        for fit in fits {
            for (c, v) in centre.iter_mut().zip(&fit[k]) {
                *c += v / r as f64;
            }
        }
        for (row, (fit, e)) in terms.iter_mut().zip(fits.iter().zip(eps)) {
            let dot: f64 = fit[k]
                .iter()
                .zip(&centre)
                .zip(e)
                .map(|((f, c), e)| (f - c) * e)
                .sum();
            row[k] = scale * dot;
        }
    }
    mean_and_se(&terms)
}

/// Mean and standard error (sd / √R) of per-replicate values, column-wise.
pub(crate) fn mean_and_se(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let r = rows.len() as f64;
    let k = rows.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; k];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / r;
        }
    }
    let se = (0..k)
        .map(|j| {
            if rows.len() < 2 {
                return f64::NAN;
            }
            let ss: f64 = rows.iter().map(|row| (row[j] - mean[j]).powi(2)).sum();
            (ss / (r - 1.0)).sqrt() / r.sqrt()
        })
        .collect();
    (mean, se)
}

/// Monte-Carlo estimate of the covariance degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct DfTrueEstimate {
    pub m_grid: Vec<usize>,
    pub estimate: Vec<f64>,
    pub se: Vec<f64>,
}

/// Estimates `df_true(m) = Σ_i Cov(Ŷ_i, Y_i) / σ²` by redrawing the noise
/// `replicates` times on the model's fixed design.
pub fn df_true_mc<M: RegressionModel + ?Sized>(
    model: &M,
    config: &BoostConfig,
    m_grid: &[usize],
    replicates: usize,
) -> Result<DfTrueEstimate> {
    use rayon::prelude::*;

    if replicates < 2 {
        return Err(Error::InvalidInput("need at least 2 replicates".into()));
    }
    let mut config = *config;
    config.track_hat = false;
    let x = model.design()?;
    let mu = model.mean(&x);
    let booster = L2Booster::new(&x, config)?;
    let sigma_sq = model.sigma_sq();
    let runs = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let eps = model.noise(x.n(), r as u64);
            let y: Vec<f64> = mu.iter().zip(&eps).map(|(m, e)| m + e).collect();
            let path = booster.fit(&y)?;
            Ok((grid_fits(&path, m_grid)?, eps))
        })
        .collect::<Result<Vec<_>>>()?;
    let (fits, eps): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    let (estimate, se) = covariance_df(&fits, &eps, sigma_sq);
    Ok(DfTrueEstimate {
        m_grid: m_grid.to_vec(),
        estimate,
        se,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfEstimator {
    Trace,
    ActiveSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AicStop {
    pub m_star: usize,
    pub criterion: f64,
    /// Criterion for every `m = 0..=mstop`; `None` where `df + 2 ≥ n`.
    pub values: Vec<Option<f64>>,
}

/// Corrected AIC: `log(RSS/n) + (1 + df/n) / (1 − (df + 2)/n)`.
pub fn corrected_aic(rss: f64, df: f64, n: usize) -> Option<f64> {
    let n = n as f64;
    if df + 2.0 >= n {
        return None;
    }
    Some((rss / n).ln() + (1.0 + df / n) / (1.0 - (df + 2.0) / n))
}

/// Iteration minimizing the corrected AIC; ties go to the smallest `m`.
pub fn aic_stop(path: &L2BoostPath, estimator: DfEstimator) -> Result<AicStop> {
    let n = path.n();
    let df: Vec<f64> = match estimator {
        DfEstimator::Trace => path.hat_traces.clone().ok_or(Error::HatNotTracked)?,
        DfEstimator::ActiveSet => df_actset_curve(path)
            .into_iter()
            .map(|d| d as f64)
            .collect(),
    };
    let mut values = Vec::with_capacity(df.len());
    let mut best: Option<(usize, f64)> = None;
    for (m, &d) in df.iter().enumerate() {
        let v = corrected_aic(path.rss(m)?, d, n);
        if let Some(v) = v {
            // −∞ (zero RSS) compares equal to itself, so ties keep the earliest m
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((m, v));
            }
        }
        values.push(v);
    }
    let (m_star, criterion) = best.ok_or(Error::NoAdmissibleIteration)?;
    Ok(AicStop {
        m_star,
        criterion,
        values,
    })
}
