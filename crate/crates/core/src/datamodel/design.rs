use rand::Rng;
use rand_distr::StandardNormal;

use super::rng::rng_from_seed;
use crate::error::{Error, Result};

/// Fixed `n × p` covariate matrix stored column-wise.
///
/// Centered columns, their squared norms and the ascending sort order of
/// every column are computed once at construction, since both the
/// componentwise learners and the tree learners reuse them every iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    columns: Vec<Vec<f64>>,
    col_means: Vec<f64>,
    centered: Vec<Vec<f64>>,
    centered_col_sq_norms: Vec<f64>,
    sort_order: Vec<Vec<usize>>,
}

impl DesignMatrix {
    /// Builds a design from columns. Requires `n ≥ 2`, `p ≥ 1` and finite entries.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let p = columns.len();
        if p == 0 {
            return Err(Error::InvalidInput(
                "design needs at least one column".into(),
            ));
        }
        let n = columns[0].len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "design needs n >= 2 rows, got {n}"
            )));
        }
        for col in &columns {
            if col.len() != n {
                return Err(Error::LengthMismatch(n, col.len()));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(
                    "design contains non-finite values".into(),
                ));
            }
        }

        let col_means: Vec<f64> = columns
            .iter()
            .map(|c| c.iter().sum::<f64>() / n as f64)
            .collect();
        let centered: Vec<Vec<f64>> = columns
            .iter()
            .zip(&col_means)
            .map(|(c, &m)| c.iter().map(|v| v - m).collect())
            .collect();
        let centered_col_sq_norms = centered
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum())
            .collect();
        let sort_order = columns
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| c[a].total_cmp(&c[b]).then(a.cmp(&b)));
                idx
            })
            .collect();

        Ok(Self {
            n,
            columns,
            col_means,
            centered,
            centered_col_sq_norms,
            sort_order,
        })
    }

    /// Builds a design from row vectors.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); p];
        for row in rows {
            if row.len() != p {
                return Err(Error::LengthMismatch(p, row.len()));
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::from_columns(columns)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.columns[j][i]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn col_means(&self) -> &[f64] {
        &self.col_means
    }

    pub fn centered_column(&self, j: usize) -> &[f64] {
        &self.centered[j]
    }

    /// `Σ_i (x_ij − mean_j)²` for every column.
    pub fn centered_col_sq_norms(&self) -> &[f64] {
        &self.centered_col_sq_norms
    }

    /// Row indices of column `j` in ascending order of value (ties by row index).
    pub fn sort_order(&self, j: usize) -> &[usize] {
        &self.sort_order[j]
    }

    /// A column is constant when its centered norm is exactly zero.
    pub fn is_constant(&self, j: usize) -> bool {
        self.centered_col_sq_norms[j] == 0.0
    }

    /// Columns eligible for componentwise selection.
    pub fn eligible_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.p()).filter(move |&j| !self.is_constant(j))
    }

    /// `X β` for a length-`p` coefficient vector.
    pub fn mul_vec(&self, beta: &[f64]) -> Result<Vec<f64>> {
        if beta.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: self.p(),
                got: beta.len(),
            });
        }
        let mut out = vec![0.0; self.n];
        for (col, &b) in self.columns.iter().zip(beta) {
            if b != 0.0 {
                for (o, v) in out.iter_mut().zip(col) {
                    *o += b * v;
                }
            }
        }
        Ok(out)
    }
}

/// Gaussian design with AR(1) correlation `rho^{|j−k|}` across columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ARDesignSpec {
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDesignSpec {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
}

/// Draws `n` i.i.d. rows from `N_p(0, Σ)` with `Σ_{jk} = rho^{|j−k|}`, using
/// the stationary recursion `x_1 = e_1`, `x_j = rho·x_{j−1} + sqrt(1 − rho²)·e_j`.
pub fn sample_ar_design(spec: &ARDesignSpec) -> Result<DesignMatrix> {
    if !(spec.rho.abs() < 1.0) {
        return Err(Error::InvalidInput(format!(
            "AR correlation must satisfy |rho| < 1, got {}",
            spec.rho
        )));
    }
    if spec.p == 0 {
        return Err(Error::InvalidInput("p must be >= 1".into()));
    }
    let mut rng = rng_from_seed(spec.seed);
    let innov = (1.0 - spec.rho * spec.rho).sqrt();
    let mut columns = vec![vec![0.0; spec.n]; spec.p];
    for i in 0..spec.n {
        let mut prev = 0.0;
        for (j, col) in columns.iter_mut().enumerate() {
            let e: f64 = rng.sample(StandardNormal);
            let x = if j == 0 {
                e
            } else {
                spec.rho * prev + innov * e
            };
            col[i] = x;
            prev = x;
        }
    }
    DesignMatrix::from_columns(columns)
}

/// Draws `n` i.i.d. rows uniform on `[0, 1]^p`.
pub fn sample_uniform_design(spec: &UniformDesignSpec) -> Result<DesignMatrix> {
    if spec.p == 0 {
        return Err(Error::InvalidInput("p must be >= 1".into()));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut columns = vec![vec![0.0; spec.n]; spec.p];
    for i in 0..spec.n {
        for col in columns.iter_mut() {
            col[i] = rng.random::<f64>();
        }
    }
    DesignMatrix::from_columns(columns)
}
