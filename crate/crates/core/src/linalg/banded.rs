//! Cholesky factorization of a symmetric positive definite band matrix.

use alloc::vec;
use alloc::vec::Vec;

/// Lower factor `L` with `G = L Lᵀ`, stored row by row over the band
/// `j ∈ [i − bw, i]`.
#[derive(Debug, Clone)]
pub(crate) struct BandCholesky {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

impl BandCholesky {
    /// `entry(i, j)` must return `G[i][j]` for `j ≤ i`, `i − j ≤ bw`.
    /// Returns `None` if a pivot is not positive.
    pub(crate) fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Option<Self> {
        let width = bw + 1;
        let mut band = vec![0.0; n * width];
        let at = |i: usize, j: usize| i * width + (j + bw - i);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let start = lo.max(j.saturating_sub(bw));
                let mut s = entry(i, j);
                for k in start..j {
                    s -= band[at(i, k)] * band[at(j, k)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return None;
                    }
                    band[at(i, i)] = libm::sqrt(s);
                } else {
                    band[at(i, j)] = s / band[at(j, j)];
                }
            }
        }
        Some(Self { n, bw, band })
    }

    /// Solves `G x = b` in place.
    pub(crate) fn solve_in_place(&self, x: &mut [f64]) {
        let width = self.bw + 1;
        let at = |i: usize, j: usize| i * width + (j + self.bw - i);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut s = x[i];
            for k in lo..i {
                s -= self.band[at(i, k)] * x[k];
            }
            x[i] = s / self.band[at(i, i)];
        }
        for i in (0..self.n).rev() {
            let hi = (i + self.bw).min(self.n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s -= self.band[at(k, i)] * x[k];
            }
            x[i] = s / self.band[at(i, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        // 1-D Laplacian with Dirichlet ends plus a shift.
        let n = 7;
        let g = |i: usize, j: usize| if i == j { 2.5 } else if i.abs_diff(j) == 1 { -1.0 } else { 0.0 };
        let chol = BandCholesky::factor(n, 1, g).unwrap();
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| g(i.max(j), i.min(j)) * x_true[j]).sum())
            .collect();
        chol.solve_in_place(&mut b);
        for (a, e) in b.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-13);
        }
    }

    #[test]
    fn detects_indefinite_matrix() {
        let g = |i: usize, j: usize| if i == j { -1.0 } else { 0.0 };
        assert!(BandCholesky::factor(3, 1, g).is_none());
    }
}
