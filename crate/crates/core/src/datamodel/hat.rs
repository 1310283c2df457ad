use crate::error::{Error, Result};

/// Dense `n × n` linear smoother, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HatOperator {
    n: usize,
    data: Vec<f64>,
}

impl HatOperator {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch(n * n, data.len()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "hat operator has non-finite entries".into(),
            ));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut h = Self::zeros(n);
        for i in 0..n {
            h.data[i * n + i] = 1.0;
        }
        h
    }

    /// `(1/n)·1·1ᵀ`, the projection onto constants.
    pub fn mean_projection(n: usize) -> Self {
        Self {
            n,
            data: vec![1.0 / n as f64; n * n],
        }
    }

    /// `u uᵀ / ‖u‖²`.
    pub fn rank_one_projection(u: &[f64]) -> Self {
        let n = u.len();
        let norm: f64 = u.iter().map(|v| v * v).sum();
        let mut h = Self::zeros(n);
        if norm > 0.0 {
            for i in 0..n {
                for j in 0..n {
                    h.data[i * n + j] = u[i] * u[j] / norm;
                }
            }
        }
        h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(
            v.len(),
            self.n,
            "hat operator applied to a vector of the wrong length"
        );
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn matmul(&self, other: &HatOperator) -> HatOperator {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = HatOperator::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a != 0.0 {
                    for (o, b) in out_row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }

    /// Largest `|H_ij − H_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &HatOperator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Sum of the diagonal.
pub fn trace(h: &HatOperator) -> f64 {
    h.trace()
}
