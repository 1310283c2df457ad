use rand_distr::{Distribution, StandardNormal};

use crate::datamodel::{
    derive_seed, rng_from_seed, sample_ar_design, sample_uniform_design, ARDesignSpec,
    DesignMatrix, UniformDesignSpec,
};
use crate::error::{Error, Result};

/// A regression model with a fixed design, known mean and Gaussian noise.
pub trait RegressionModel: Sync {
    fn name(&self) -> String;
    /// The design, identical on every call.
    fn design(&self) -> Result<DesignMatrix>;
    fn mean(&self, x: &DesignMatrix) -> Vec<f64>;
    fn sigma_sq(&self) -> f64;
    fn noise_seed_base(&self) -> u64;

    /// `N(0, σ²)` noise vector for one replicate.
    fn noise(&self, n: usize, replicate: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(derive_seed(self.noise_seed_base(), replicate));
        let sd = self.sigma_sq().sqrt();
        (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                sd * e
            })
            .collect()
    }
}

/// `Y = Xβ + ε` on an AR(0.5) Gaussian design.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModelSpec {
    pub id: u8,
    pub beta: Vec<f64>,
    pub sigma_sq: f64,
    pub design: ARDesignSpec,
    pub noise_seed_base: u64,
}

impl LinearModelSpec {
    pub fn n(&self) -> usize {
        self.design.n
    }

    pub fn p(&self) -> usize {
        self.design.p
    }

    /// Number of nonzero coefficients.
    pub fn p_eff(&self) -> usize {
        self.beta.iter().filter(|b| **b != 0.0).count()
    }

    /// Design and noise seeds derived from one master seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.design.seed = derive_seed(seed, 0);
        self.noise_seed_base = derive_seed(seed, 1);
        self
    }

    /// `βᵀΣβ` with `Σ_{jk} = rho^{|j−k|}`: the population variance of the mean.
    pub fn signal_variance(&self) -> f64 {
        let rho = self.design.rho;
        let mut s = 0.0;
        for (j, bj) in self.beta.iter().enumerate() {
            for (k, bk) in self.beta.iter().enumerate() {
                s += bj * bk * rho.powi((j as i32 - k as i32).abs());
            }
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                got: self.beta.len(),
            });
        }
        if !(self.sigma_sq > 0.0) {
            return Err(Error::InvalidInput(
                "noise variance must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl RegressionModel for LinearModelSpec {
    fn name(&self) -> String {
        format!("model{}", self.id)
    }

    fn design(&self) -> Result<DesignMatrix> {
        self.validate()?;
        sample_ar_design(&self.design)
    }

    fn mean(&self, x: &DesignMatrix) -> Vec<f64> {
        x.mul_vec(&self.beta)
            .expect("beta length checked by validate")
    }

    fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    fn noise_seed_base(&self) -> u64 {
        self.noise_seed_base
    }
}

/// The sparse and dense linear models (ids 1–3), all with `n = 100`, unit
/// noise and an AR(0.5) design.
///
/// * 1: `p = 10`, `β_5 = √34.5`, all other coefficients zero.
/// * 2: `p = 200`, same nonzero coefficient as model 1.
/// * 3: `p = 200`, `β = (1,1,1,1,1, 0.5,0.5,0.5,0.5,0.5, 0, …)`.
///
/// `beta` is 0-based, so `β_5` is `beta[4]`.
pub fn make_model(id: u8) -> Result<LinearModelSpec> {
    let p = match id {
        1 => 10,
        2 | 3 => 200,
        _ => return Err(Error::UnknownModelId(id.to_string())),
    };
    let mut beta = vec![0.0; p];
    if id == 3 {
        beta[..5].fill(1.0);
        beta[5..10].fill(0.5);
    } else {
        beta[4] = 34.5f64.sqrt();
    }
    Ok(LinearModelSpec {
        id,
        beta,
        sigma_sq: 1.0,
        design: ARDesignSpec {
            n: 100,
            p,
            rho: 0.5,
            seed: 0,
        },
        noise_seed_base: 0,
    }
    .with_seed(u64::from(id)))
}

/// `10 sin(π x1 x2) + 20 (x3 − 0.5)² + 10 x4 + 5 x5`.
pub fn friedman1_mean(row: &[f64]) -> f64 {
    10.0 * (std::f64::consts::PI * row[0] * row[1]).sin()
        + 20.0 * (row[2] - 0.5).powi(2)
        + 10.0 * row[3]
        + 5.0 * row[4]
}

/// Friedman #1 additive model on a uniform design.
#[derive(Debug, Clone, PartialEq)]
pub struct Friedman1Spec {
    pub sigma_sq: f64,
    pub design: UniformDesignSpec,
    pub noise_seed_base: u64,
}

impl Friedman1Spec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.design.seed = derive_seed(seed, 0);
        self.noise_seed_base = derive_seed(seed, 1);
        self
    }
}

impl RegressionModel for Friedman1Spec {
    fn name(&self) -> String {
        format!("friedman1(sigma2={})", self.sigma_sq)
    }

    fn design(&self) -> Result<DesignMatrix> {
        if self.design.p < 5 {
            return Err(Error::InvalidInput("Friedman #1 needs p >= 5".into()));
        }
        if !(self.sigma_sq > 0.0) {
            return Err(Error::InvalidInput(
                "noise variance must be positive".into(),
            ));
        }
        sample_uniform_design(&self.design)
    }

    fn mean(&self, x: &DesignMatrix) -> Vec<f64> {
        (0..x.n()).map(|i| friedman1_mean(&x.row(i)[..5])).collect()
    }

    fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    fn noise_seed_base(&self) -> u64 {
        self.noise_seed_base
    }
}

/// Friedman #1 with `n = 100`, `p = 20` and the given noise variance
/// (1 for the low-noise and 10 for the high-noise variant).
pub fn make_friedman1(sigma_sq: f64) -> Friedman1Spec {
    Friedman1Spec {
        sigma_sq,
        design: UniformDesignSpec {
            n: 100,
            p: 20,
            seed: 0,
        },
        noise_seed_base: 0,
    }
    .with_seed(4)
}

/// One noise replicate on a fixed design.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDraw {
    pub x: DesignMatrix,
    pub y: Vec<f64>,
    pub mu: Vec<f64>,
    pub eps: Vec<f64>,
}

/// Draws replicate `replicate` of any fixed-design model.
pub fn draw_regression<M: RegressionModel + ?Sized>(
    model: &M,
    replicate: u64,
) -> Result<RegressionDraw> {
    let x = model.design()?;
    let mu = model.mean(&x);
    let eps = model.noise(x.n(), replicate);
    let y = mu.iter().zip(&eps).map(|(m, e)| m + e).collect();
    Ok(RegressionDraw { x, y, mu, eps })
}

pub fn draw_linear(spec: &LinearModelSpec, replicate: u64) -> Result<RegressionDraw> {
    draw_regression(spec, replicate)
}
