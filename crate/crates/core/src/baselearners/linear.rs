use crate::datamodel::{DesignMatrix, HatOperator};
use crate::error::{Error, Result};

use super::ComponentFit;

/// Best single-covariate least-squares fit of `r` on a centered column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LinearChoice {
    pub index: usize,
    /// Mean of the working response.
    pub intercept: f64,
    /// Slope on the centered column.
    pub slope: f64,
}

/// Selects the column maximizing `(x̃ᵀr)² / ‖x̃‖²`, which minimizes the RSS of
/// the simple regression with intercept. Ties go to the lowest index.
pub(crate) fn select_linear(x: &DesignMatrix, r: &[f64]) -> Result<LinearChoice> {
    let mut best: Option<(usize, f64, f64)> = None;
    for j in x.eligible_columns() {
        let xc = x.centered_column(j);
        let norm = x.centered_col_sq_norms()[j];
        let cross: f64 = xc.iter().zip(r).map(|(a, b)| a * b).sum();
        let reduction = cross * cross / norm;
        if best.is_none_or(|(_, red, _)| reduction > red) {
            best = Some((j, reduction, cross / norm));
        }
    }
    let (index, _, slope) = best.ok_or(Error::AllColumnsConstant)?;
    let intercept = r.iter().sum::<f64>() / r.len() as f64;
    Ok(LinearChoice {
        index,
        intercept,
        slope,
    })
}

/// Componentwise linear least squares with intercept.
///
/// The returned hat is `(1/n)·11ᵀ + x̃x̃ᵀ/‖x̃‖²` for the selected column, so a
/// single fit has trace exactly 2.
pub fn fit_componentwise_linear(x: &DesignMatrix, r: &[f64]) -> Result<ComponentFit> {
    check_response(x, r)?;
    let choice = select_linear(x, r)?;
    let xc = x.centered_column(choice.index);
    let fitted = xc
        .iter()
        .map(|v| choice.intercept + choice.slope * v)
        .collect();

    let n = x.n();
    let mut hat = HatOperator::rank_one_projection(xc);
    for v in hat.as_mut_slice() {
        *v += 1.0 / n as f64;
    }
    Ok(ComponentFit {
        selected_index: choice.index,
        fitted,
        hat: Some(hat),
        coef: Some((choice.intercept, choice.slope)),
    })
}

pub(crate) fn check_response(x: &DesignMatrix, r: &[f64]) -> Result<()> {
    if r.len() != x.n() {
        return Err(Error::LengthMismatch(x.n(), r.len()));
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "working response has non-finite values".into(),
        ));
    }
    Ok(())
}
