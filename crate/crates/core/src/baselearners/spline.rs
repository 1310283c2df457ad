//! Natural cubic smoothing splines in Reinsch form.
//!
//! With knots at the sorted unique x-values `t_0 < … < t_{u−1}`, multiplicities
//! `W`, band matrices `Q` (u × (u−2)) and `R` ((u−2) × (u−2)), the roughness
//! matrix is `K = Q R⁻¹ Qᵀ` and the knot-level smoother is
//! `A = (W + λK)⁻¹ = W⁻¹ − W⁻¹ Q (R/λ + QᵀW⁻¹Q)⁻¹ QᵀW⁻¹`.
//! Applied to observations, `S = E A Eᵀ` where `E` maps knots to rows.
//! Everything except the dense hat runs in `O(u)` per vector.
//!
//! The x-values are mapped to `[0, 1]` before building the penalty, so `λ`
//! is on the unit-interval scale regardless of the covariate's units.

use rayon::prelude::*;

use super::band::{BandCholesky, SymBand};
use super::linear::check_response;
use super::ComponentFit;
use crate::datamodel::{DesignMatrix, HatOperator};
use crate::error::{Error, Result};

const LOG_LAMBDA_RANGE: (f64, f64) = (-20.0, 20.0);
const MAX_BISECTIONS: usize = 200;
const DF_TOLERANCE: f64 = 1e-6;
/// x-values closer than this fraction of the range share a knot.
pub(crate) const KNOT_MERGE_TOL: f64 = 1e-5;

/// Knot geometry shared by every `λ`.
#[derive(Debug, Clone)]
struct KnotBasis {
    /// Unique sorted knots in original units.
    knots: Vec<f64>,
    origin: f64,
    span: f64,
    weights: Vec<f64>,
    knot_of: Vec<usize>,
    /// Spacings on the unit scale.
    h: Vec<f64>,
    /// `R`, tridiagonal.
    r: SymBand,
    /// `QᵀW⁻¹Q`, pentadiagonal.
    qtwq: SymBand,
}

impl KnotBasis {
    fn new(x: &[f64], merge_tol: f64) -> Result<Self> {
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        let lo = order.first().map_or(0.0, |&i| x[i]);
        let hi = order.last().map_or(0.0, |&i| x[i]);
        let tol = merge_tol * (hi - lo);
        let mut knots: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut group_start = f64::NEG_INFINITY;
        let mut knot_of = vec![0; x.len()];
        for &i in &order {
            if knots.is_empty() || x[i] - group_start > tol {
                group_start = x[i];
                knots.push(0.0);
                weights.push(0.0);
            }
            let k = knots.len() - 1;
            weights[k] += 1.0;
            // running mean of the merged x-values
            knots[k] += (x[i] - knots[k]) / weights[k];
            knot_of[i] = k;
        }
        let u = knots.len();
        if u < 3 {
            return Err(Error::TooFewUniqueValues {
                needed: 2.0,
                found: u,
            });
        }
        let origin = knots[0];
        let span = knots[u - 1] - origin;
        let scaled: Vec<f64> = knots.iter().map(|t| (t - origin) / span).collect();
        let h: Vec<f64> = scaled.windows(2).map(|w| w[1] - w[0]).collect();

        let m = u - 2;
        let mut r = SymBand::zeros(m, 1);
        for j in 0..m {
            r.add(j, j, (h[j] + h[j + 1]) / 3.0);
            if j + 1 < m {
                r.add(j + 1, j, h[j + 1] / 6.0);
            }
        }
        let mut basis = Self {
            knots,
            origin,
            span,
            weights,
            knot_of,
            h,
            r,
            qtwq: SymBand::zeros(m, 2),
        };
        let mut qtwq = SymBand::zeros(m, 2);
        for j in 0..m {
            for k in j..(j + 3).min(m) {
                let mut s = 0.0;
                for i in k..=(j + 2) {
                    s += basis.q(i, j) * basis.q(i, k) / basis.weights[i];
                }
                qtwq.add(k, j, s);
            }
        }
        basis.qtwq = qtwq;
        Ok(basis)
    }

    fn u(&self) -> usize {
        self.knots.len()
    }

    /// Entry `(i, j)` of `Q`; nonzero only for `i ∈ {j, j+1, j+2}`.
    fn q(&self, i: usize, j: usize) -> f64 {
        match i.wrapping_sub(j) {
            0 => 1.0 / self.h[j],
            1 => -1.0 / self.h[j] - 1.0 / self.h[j + 1],
            2 => 1.0 / self.h[j + 1],
            _ => 0.0,
        }
    }

    fn middle(&self, lambda: f64) -> Option<BandCholesky> {
        self.qtwq.add_scaled(&self.r, 1.0 / lambda).cholesky()
    }

    /// `trace(A W) = 2 + trace(M⁻¹ R) / λ`, the degrees of freedom of the
    /// observation-level smoother. The 2 is the linear null space.
    fn df(&self, chol: &BandCholesky, lambda: f64) -> f64 {
        let m = self.u() - 2;
        let mut extra = 0.0;
        let mut col = vec![0.0; m];
        for k in 0..m {
            col.iter_mut().for_each(|v| *v = 0.0);
            for i in k.saturating_sub(1)..(k + 2).min(m) {
                col[i] = self.r.get(i, k);
            }
            chol.solve_in_place(&mut col);
            extra += col[k];
        }
        2.0 + extra / lambda
    }

    /// `A b` for knot-level `b`.
    fn apply_knots(&self, chol: &BandCholesky, b: &[f64]) -> Vec<f64> {
        let u = self.u();
        let wb: Vec<f64> = b.iter().zip(&self.weights).map(|(v, w)| v / w).collect();
        let mut c: Vec<f64> = (0..u - 2)
            .map(|j| {
                self.q(j, j) * wb[j] + self.q(j + 1, j) * wb[j + 1] + self.q(j + 2, j) * wb[j + 2]
            })
            .collect();
        chol.solve_in_place(&mut c);
        (0..u)
            .map(|i| {
                let mut e = 0.0;
                for j in i.saturating_sub(2)..=i.min(u - 3) {
                    e += self.q(i, j) * c[j];
                }
                wb[i] - e / self.weights[i]
            })
            .collect()
    }

    fn collapse(&self, v: &[f64]) -> Vec<f64> {
        let mut b = vec![0.0; self.u()];
        for (&k, &val) in self.knot_of.iter().zip(v) {
            b[k] += val;
        }
        b
    }
}

/// Natural cubic smoothing spline on one covariate, calibrated to a
/// target trace.
#[derive(Debug, Clone)]
pub struct SplineSmoother {
    basis: KnotBasis,
    chol: BandCholesky,
    lambda: f64,
    target_df: f64,
    hat: HatOperator,
}

impl SplineSmoother {
    /// Smoother for a fixed `λ` on the unit-scaled x-axis.
    pub fn with_lambda(x: &[f64], lambda: f64) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite x-value".into()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let basis = KnotBasis::new(x, KNOT_MERGE_TOL)?;
        let chol = basis.middle(lambda).ok_or_else(|| {
            Error::InvalidInput(format!(
                "penalty system not positive definite at lambda {lambda}"
            ))
        })?;
        let target_df = basis.df(&chol, lambda);
        let mut smoother = Self {
            basis,
            chol,
            lambda,
            target_df,
            hat: HatOperator::zeros(0),
        };
        smoother.hat = smoother.dense_hat();
        Ok(smoother)
    }

    pub fn knots(&self) -> &[f64] {
        &self.basis.knots
    }

    pub fn weights(&self) -> &[f64] {
        &self.basis.weights
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn target_df(&self) -> f64 {
        self.target_df
    }

    pub fn hat(&self) -> &HatOperator {
        &self.hat
    }

    /// Trace computed from the band factorization.
    pub fn df(&self) -> f64 {
        self.basis.df(&self.chol, self.lambda)
    }

    /// Fitted values at the knots for observation-level response `v`.
    pub fn knot_fit(&self, v: &[f64]) -> Vec<f64> {
        self.basis.apply_knots(&self.chol, &self.basis.collapse(v))
    }

    /// `S v` without forming `S`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let g = self.knot_fit(v);
        self.basis.knot_of.iter().map(|&k| g[k]).collect()
    }

    /// Broadcasts knot values back to observations.
    pub fn expand(&self, knot_values: &[f64]) -> Vec<f64> {
        self.basis.knot_of.iter().map(|&k| knot_values[k]).collect()
    }

    fn dense_hat(&self) -> HatOperator {
        let u = self.basis.u();
        let mut a = vec![vec![0.0; u]; u];
        let mut e = vec![0.0; u];
        for (l, col) in a.iter_mut().enumerate() {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[l] = 1.0;
            *col = self.basis.apply_knots(&self.chol, &e);
        }
        let n = self.basis.knot_of.len();
        let mut hat = HatOperator::zeros(n);
        for i in 0..n {
            let ki = self.basis.knot_of[i];
            for j in 0..n {
                // A is symmetric; column ki equals row ki.
                hat.set(i, j, a[ki][self.basis.knot_of[j]]);
            }
        }
        hat
    }

    /// Natural cubic spline through `knot_values`, linear beyond the knots.
    pub fn interpolant(&self, knot_values: &[f64]) -> NaturalCubic {
        NaturalCubic::new(&self.basis, knot_values)
    }
}

/// Bisection on `log λ ∈ [−20, 20]` for `trace(S_λ) = target_df`.
pub fn calibrate_spline(x: &[f64], target_df: f64) -> Result<SplineSmoother> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite x-value".into()));
    }
    let basis = KnotBasis::new(x, KNOT_MERGE_TOL).map_err(|_| Error::TooFewUniqueValues {
        needed: target_df,
        found: count_unique(x),
    })?;
    let u = basis.u();
    if !(target_df > 2.0 && target_df < u as f64) {
        return Err(Error::TooFewUniqueValues {
            needed: target_df,
            found: u,
        });
    }

    let df_at = |log_lambda: f64| -> Option<(BandCholesky, f64)> {
        let chol = basis.middle(log_lambda.exp())?;
        let df = basis.df(&chol, log_lambda.exp());
        Some((chol, df))
    };
    let (mut lo, mut hi) = LOG_LAMBDA_RANGE;
    let failed = || Error::CalibrationFailed {
        target: target_df,
        low: LOG_LAMBDA_RANGE.0,
        high: LOG_LAMBDA_RANGE.1,
    };
    let (_, df_lo) = df_at(lo).ok_or_else(failed)?;
    let (_, df_hi) = df_at(hi).ok_or_else(failed)?;
    // df decreases in lambda
    if !(df_lo >= target_df && df_hi <= target_df) {
        return Err(failed());
    }

    // aim below the tolerance so round-off in other trace routes stays inside it
    let mut best: Option<(f64, f64, BandCholesky)> = None;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let (chol, df) = df_at(mid).ok_or_else(failed)?;
        let miss = (df - target_df).abs();
        let done = miss < 0.1 * DF_TOLERANCE;
        if best.as_ref().is_none_or(|(b, _, _)| miss < *b) {
            best = Some((miss, mid, chol));
        }
        if done {
            break;
        }
        if df > target_df {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let found = best
        .filter(|(miss, _, _)| *miss < DF_TOLERANCE)
        .map(|(_, mid, chol)| (mid, chol));
    let (log_lambda, chol) = found.ok_or_else(failed)?;
    let mut smoother = SplineSmoother {
        basis,
        chol,
        lambda: log_lambda.exp(),
        target_df,
        hat: HatOperator::zeros(0),
    };
    smoother.hat = smoother.dense_hat();
    Ok(smoother)
}

fn count_unique(x: &[f64]) -> usize {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// One calibrated smoother per eligible column of a fixed design.
#[derive(Debug, Clone)]
pub struct SplineBank {
    smoothers: Vec<Option<SplineSmoother>>,
    target_df: f64,
}

impl SplineBank {
    /// Calibrates every non-constant column in parallel.
    pub fn calibrate(x: &DesignMatrix, target_df: f64) -> Result<Self> {
        let smoothers = (0..x.p())
            .into_par_iter()
            .map(|j| {
                if x.is_constant(j) {
                    Ok(None)
                } else {
                    calibrate_spline(x.column(j), target_df).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if smoothers.iter().all(Option::is_none) {
            return Err(Error::AllColumnsConstant);
        }
        Ok(Self {
            smoothers,
            target_df,
        })
    }

    pub fn get(&self, j: usize) -> Option<&SplineSmoother> {
        self.smoothers.get(j).and_then(Option::as_ref)
    }

    pub fn len(&self) -> usize {
        self.smoothers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.smoothers.is_empty()
    }

    pub fn target_df(&self) -> f64 {
        self.target_df
    }

    pub fn n(&self) -> usize {
        self.smoothers
            .iter()
            .flatten()
            .next()
            .map_or(0, |s| s.basis.knot_of.len())
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SplineChoice {
    pub index: usize,
    pub knot_values: Vec<f64>,
    pub fitted: Vec<f64>,
}

/// Column minimizing `‖r − S_j r‖²`; ties go to the lowest index.
pub(crate) fn select_spline(bank: &SplineBank, r: &[f64]) -> Result<SplineChoice> {
    let mut best: Option<(f64, SplineChoice)> = None;
    for (j, s) in bank.smoothers.iter().enumerate() {
        let Some(s) = s else { continue };
        let knot_values = s.knot_fit(r);
        let fitted = s.expand(&knot_values);
        let rss: f64 = r.iter().zip(&fitted).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(b, _)| rss < *b) {
            best = Some((
                rss,
                SplineChoice {
                    index: j,
                    knot_values,
                    fitted,
                },
            ));
        }
    }
    best.map(|(_, c)| c).ok_or(Error::AllColumnsConstant)
}

/// Componentwise smoothing spline: the column whose smoother leaves the
/// smallest residual sum of squares.
pub fn fit_componentwise_spline(
    x: &DesignMatrix,
    r: &[f64],
    bank: &SplineBank,
) -> Result<ComponentFit> {
    check_response(x, r)?;
    if bank.len() != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p(),
            got: bank.len(),
        });
    }
    let choice = select_spline(bank, r)?;
    let hat = bank.get(choice.index).map(|s| s.hat.clone());
    Ok(ComponentFit {
        selected_index: choice.index,
        fitted: choice.fitted,
        hat,
        coef: None,
    })
}

/// Natural cubic interpolating spline with linear extrapolation.
#[derive(Debug, Clone)]
pub struct NaturalCubic {
    origin: f64,
    span: f64,
    /// Unit-scale knots.
    t: Vec<f64>,
    g: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    gamma: Vec<f64>,
}

impl NaturalCubic {
    fn new(basis: &KnotBasis, knot_values: &[f64]) -> Self {
        let u = basis.u();
        assert_eq!(knot_values.len(), u);
        // R γ = Qᵀ g
        let mut rhs: Vec<f64> = (0..u - 2)
            .map(|j| {
                basis.q(j, j) * knot_values[j]
                    + basis.q(j + 1, j) * knot_values[j + 1]
                    + basis.q(j + 2, j) * knot_values[j + 2]
            })
            .collect();
        basis
            .r
            .cholesky()
            .expect("R is positive definite")
            .solve_in_place(&mut rhs);
        let mut gamma = Vec::with_capacity(u);
        gamma.push(0.0);
        gamma.extend(rhs);
        gamma.push(0.0);
        let mut t = Vec::with_capacity(u);
        t.push(0.0);
        for h in &basis.h {
            t.push(t.last().unwrap() + h);
        }
        Self {
            origin: basis.origin,
            span: basis.span,
            t,
            g: knot_values.to_vec(),
            gamma,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = (x - self.origin) / self.span;
        let u = self.t.len();
        // points that would have been merged into a knot take its value
        let k = self.t.partition_point(|&v| v < s);
        for j in [k.saturating_sub(1), k.min(u - 1)] {
            if (s - self.t[j]).abs() <= KNOT_MERGE_TOL {
                return self.g[j];
            }
        }
        if s <= 0.0 {
            let h = self.t[1] - self.t[0];
            let slope = (self.g[1] - self.g[0]) / h - h * self.gamma[1] / 6.0;
            return self.g[0] + slope * s;
        }
        if s >= self.t[u - 1] {
            let h = self.t[u - 1] - self.t[u - 2];
            let slope = (self.g[u - 1] - self.g[u - 2]) / h + h * self.gamma[u - 2] / 6.0;
            return self.g[u - 1] + slope * (s - self.t[u - 1]);
        }
        let i = self
            .t
            .partition_point(|&v| v <= s)
            .saturating_sub(1)
            .min(u - 2);
        let (tl, tr) = (self.t[i], self.t[i + 1]);
        let h = tr - tl;
        let (a, b) = (s - tl, tr - s);
        (a * self.g[i + 1] + b * self.g[i]) / h
            - a * b / 6.0 * ((1.0 + a / h) * self.gamma[i + 1] + (1.0 + b / h) * self.gamma[i])
    }
}
