use crate::boost::surrogate_loss;
use crate::error::{Error, Result};

/// Test-set classification metrics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub misclassification: f64,
    pub surrogate_loss: f64,
    pub abs_prob_error: f64,
}

/// Misclassification rate, mean binomial surrogate loss of the scores and
/// mean absolute error of the probabilities.
pub fn metrics(
    scores: &[f64],
    probs: &[f64],
    labels: &[u8],
    y_test: &[f64],
    p_test: &[f64],
) -> Result<Metrics> {
    let n = scores.len();
    for len in [probs.len(), labels.len(), y_test.len(), p_test.len()] {
        if len != n {
            return Err(Error::LengthMismatch(n, len));
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty test set".into()));
    }
    let nf = n as f64;
    let misclassification = labels
        .iter()
        .zip(y_test)
        .filter(|(l, y)| f64::from(**l) != **y)
        .count() as f64
        / nf;
    let surrogate = scores
        .iter()
        .zip(y_test)
        .map(|(&f, &y)| surrogate_loss(y, f))
        .sum::<f64>()
        / nf;
    let abs_prob_error = probs
        .iter()
        .zip(p_test)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / nf;
    Ok(Metrics {
        misclassification,
        surrogate_loss: surrogate,
        abs_prob_error,
    })
}
