//! Working responses and the binomial surrogate loss, with the score `f`
//! parameterized as half the log-odds: `p = 1 / (1 + exp(−2f))`.

const PROB_FLOOR: f64 = 1e-10;

/// Default threshold for [`working_response_quadratic`].
pub const DEFAULT_QUADRATIC_CAP: f64 = 4.0;

/// Negative gradient of the surrogate loss: `2(y − p)`.
pub fn working_response_linear(y: f64, p: f64) -> f64 {
    2.0 * (y - p)
}

/// LogitBoost working response `½(y − p) / (p(1 − p))`, clamped to `[−cap, cap]`.
pub fn working_response_quadratic(y: f64, p: f64, cap: f64) -> f64 {
    let p = p.clamp(PROB_FLOOR, 1.0 - PROB_FLOOR);
    (0.5 * (y - p) / (p * (1.0 - p))).clamp(-cap, cap)
}

pub fn probability(f: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * f).exp())
}

/// `log(1 + exp(−2(2y − 1)f))`, evaluated without overflow.
pub fn surrogate_loss(y: f64, f: f64) -> f64 {
    let z = -2.0 * (2.0 * y - 1.0) * f;
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

pub fn mean_surrogate_loss(y: &[f64], f: &[f64]) -> f64 {
    y.iter()
        .zip(f)
        .map(|(&yi, &fi)| surrogate_loss(yi, fi))
        .sum::<f64>()
        / y.len() as f64
}
