//! Cholesky factorization for symmetric positive-definite band matrices.

/// Lower band storage: `lower[i][k]` is entry `(i, i − k)` for `k ≤ bandwidth`.
#[derive(Debug, Clone)]
pub(crate) struct SymBand {
    n: usize,
    bandwidth: usize,
    lower: Vec<Vec<f64>>,
}

impl SymBand {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bandwidth,
            lower: vec![vec![0.0; bandwidth + 1]; n],
        }
    }

    /// Adds `v` at `(i, j)` (and implicitly `(j, i)`); requires `|i − j| ≤ bandwidth`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(i - j <= self.bandwidth);
        self.lower[i][i - j] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bandwidth {
            0.0
        } else {
            self.lower[i][i - j]
        }
    }

    /// `self + scale · other`, same shape.
    pub fn add_scaled(&self, other: &SymBand, scale: f64) -> SymBand {
        let mut out = self.clone();
        for (row, orow) in out.lower.iter_mut().zip(&other.lower) {
            for (a, b) in row.iter_mut().zip(orow) {
                *a += scale * b;
            }
        }
        out
    }

    pub fn cholesky(&self) -> Option<BandCholesky> {
        let (n, b) = (self.n, self.bandwidth);
        let mut l = vec![vec![0.0; b + 1]; n];
        for i in 0..n {
            let lo = i.saturating_sub(b);
            for k in lo..=i {
                let mut s = self.lower[i][i - k];
                for j in lo.max(k.saturating_sub(b))..k {
                    s -= l[i][i - j] * l[k][k - j];
                }
                if i == k {
                    if !(s > 0.0) {
                        return None;
                    }
                    l[i][0] = s.sqrt();
                } else {
                    l[i][i - k] = s / l[k][0];
                }
            }
        }
        Some(BandCholesky { n, bandwidth: b, l })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BandCholesky {
    n: usize,
    bandwidth: usize,
    l: Vec<Vec<f64>>,
}

impl BandCholesky {
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, b) = (self.n, self.bandwidth);
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(b)..i {
                s -= self.l[i][i - j] * x[j];
            }
            x[i] = s / self.l[i][0];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n.min(i + b + 1) {
                s -= self.l[k][k - i] * x[k];
            }
            x[i] = s / self.l[i][0];
        }
    }
}
