use rand::Rng;

use crate::datamodel::{derive_seed, rng_from_seed, BoostRng, DesignMatrix};
use crate::error::{Error, Result};

/// Additive logistic model `logit p(x) = amplitude · Σ_{j<active} (x_j − 0.5)`
/// with `x ~ U[0,1]^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogitAdditiveSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub p: usize,
    pub amplitude: f64,
    pub active: usize,
    pub seed: u64,
}

impl Default for LogitAdditiveSpec {
    fn default() -> Self {
        Self {
            n_train: 100,
            n_test: 2000,
            p: 20,
            amplitude: 8.0,
            active: 5,
            seed: 6,
        }
    }
}

impl LogitAdditiveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.active > self.p {
            return Err(Error::InvalidInput(format!(
                "active ({}) exceeds p ({})",
                self.active, self.p
            )));
        }
        if self.n_train < 2 || self.n_test < 2 {
            return Err(Error::InvalidInput(
                "train and test sets need at least 2 rows".into(),
            ));
        }
        Ok(())
    }

    /// `P(Y = 1 | x)`.
    pub fn probability(&self, row: &[f64]) -> f64 {
        let eta: f64 = row[..self.active].iter().map(|v| v - 0.5).sum::<f64>() * self.amplitude;
        1.0 / (1.0 + (-eta).exp())
    }
}

/// One simulation's training and test sets.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitDraw {
    pub x_train: DesignMatrix,
    pub y_train: Vec<f64>,
    pub x_test: DesignMatrix,
    pub y_test: Vec<f64>,
    /// True conditional probabilities at the test rows.
    pub p_test: Vec<f64>,
}

fn draw_block(
    spec: &LogitAdditiveSpec,
    n: usize,
    rng: &mut BoostRng,
) -> Result<(DesignMatrix, Vec<f64>, Vec<f64>)> {
    let mut rows = Vec::with_capacity(n);
    let mut probs = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..spec.p).map(|_| rng.random::<f64>()).collect();
        let p = spec.probability(&row);
        labels.push(f64::from(rng.random::<f64>() < p));
        probs.push(p);
        rows.push(row);
    }
    Ok((DesignMatrix::from_rows(&rows)?, labels, probs))
}

/// Fresh uniform train and test sets for simulation `replicate`.
pub fn draw_logit_additive(spec: &LogitAdditiveSpec, replicate: u64) -> Result<LogitDraw> {
    spec.validate()?;
    let mut rng = rng_from_seed(derive_seed(spec.seed, replicate));
    let (x_train, y_train, _) = draw_block(spec, spec.n_train, &mut rng)?;
    let (x_test, y_test, p_test) = draw_block(spec, spec.n_test, &mut rng)?;
    Ok(LogitDraw {
        x_train,
        y_train,
        x_test,
        y_test,
        p_test,
    })
}

/// `E[min(p(X), 1 − p(X))]` from `draws` fresh uniform points.
pub fn bayes_error_mc(spec: &LogitAdditiveSpec, draws: usize) -> Result<f64> {
    spec.validate()?;
    if draws == 0 {
        return Err(Error::InvalidInput("need at least one draw".into()));
    }
    let mut rng = rng_from_seed(derive_seed(spec.seed, u64::MAX));
    let mut row = vec![0.0; spec.active];
    let mut total = 0.0;
    for _ in 0..draws {
        row.iter_mut().for_each(|v| *v = rng.random::<f64>());
        let p = spec.probability(&row);
        total += p.min(1.0 - p);
    }
    Ok(total / draws as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_values() {
        let spec = LogitAdditiveSpec::default();
        let mut row = vec![0.5; 20];
        assert_eq!(spec.probability(&row), 0.5);
        row[..5].fill(1.0);
        assert!((spec.probability(&row) - 1.0 / (1.0 + (-20.0f64).exp())).abs() < 1e-15);
        row[5..].fill(0.0);
        assert!((spec.probability(&row) - 1.0 / (1.0 + (-20.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn bayes_error_limits() {
        let flat = LogitAdditiveSpec {
            amplitude: 0.0,
            ..Default::default()
        };
        assert_eq!(bayes_error_mc(&flat, 1000).unwrap(), 0.5);
        let sharp = LogitAdditiveSpec {
            amplitude: 1e4,
            ..Default::default()
        };
        assert!(bayes_error_mc(&sharp, 10_000).unwrap() < 0.005);
    }

    #[test]
    fn draws_have_requested_shapes() {
        let spec = LogitAdditiveSpec {
            n_test: 300,
            ..Default::default()
        };
        let d = draw_logit_additive(&spec, 3).unwrap();
        assert_eq!((d.x_train.n(), d.x_train.p()), (100, 20));
        assert_eq!(
            (d.x_test.n(), d.y_test.len(), d.p_test.len()),
            (300, 300, 300)
        );
        assert!(d.y_train.iter().all(|&y| y == 0.0 || y == 1.0));
        assert_eq!(d, draw_logit_additive(&spec, 3).unwrap());
        assert_ne!(d.x_train, draw_logit_additive(&spec, 4).unwrap().x_train);
    }

    #[test]
    fn labels_follow_true_probabilities() {
        let spec = LogitAdditiveSpec {
            n_train: 2,
            n_test: 100_000,
            ..Default::default()
        };
        let d = draw_logit_additive(&spec, 0).unwrap();
        let mut buckets = [(0.0, 0.0, 0.0); 10];
        for (p, y) in d.p_test.iter().zip(&d.y_test) {
            let b = ((p * 10.0) as usize).min(9);
            buckets[b].0 += 1.0;
            buckets[b].1 += y;
            buckets[b].2 += p;
        }
        for (count, ones, psum) in buckets {
            if count < 100.0 {
                continue;
            }
            let pbar = psum / count;
            let se = (pbar * (1.0 - pbar) / count).sqrt();
            assert!((ones / count - pbar).abs() < 4.0 * se + 1e-3);
        }
    }
}
