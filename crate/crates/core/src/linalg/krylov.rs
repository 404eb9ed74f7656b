//! Block Krylov subspace with Rayleigh–Ritz extraction for the largest
//! eigenvalues of a symmetric positive definite operator.
//!
//! Used on the shift-inverted operator, where the wanted eigenvalues are
//! well separated from the bulk. A block of three start vectors captures the
//! two-fold cosine/sine degeneracies of concentric guides, which a
//! single-vector Lanczos run can only find by rounding accident.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{axpy, dot, norm};

const BLOCK: usize = 3;

#[derive(Debug, Clone)]
pub(crate) struct RitzPair {
    pub theta: f64,
    pub vector: Vec<f64>,
}

pub(crate) struct KrylovOptions {
    pub want: usize,
    /// Converged when `‖Op y − θ y‖ ≤ tol·θ` for every wanted pair.
    pub tol: f64,
    pub seed: u64,
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0)
        .collect()
}

/// Orthonormalizes `x` against `basis` (two Gram–Schmidt passes). Returns
/// `None` when `x` is numerically inside the span.
fn orthonormalize(basis: &[Vec<f64>], mut x: Vec<f64>) -> Option<Vec<f64>> {
    let start = norm(&x);
    if start == 0.0 || !start.is_finite() {
        return None;
    }
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &x);
            axpy(-c, q, &mut x);
        }
    }
    let len = norm(&x);
    if len <= 1e-10 * start {
        return None;
    }
    x.iter_mut().for_each(|v| *v /= len);
    Some(x)
}

/// Largest `want` eigenpairs of the operator `apply` (`n × n`, SPD), sorted by
/// decreasing eigenvalue. Ritz pairs are returned even if the tolerance was
/// not met once the subspace spans the whole space; callers check residuals.
pub(crate) fn largest_eigenpairs(
    n: usize,
    opts: &KrylovOptions,
    mut apply: impl FnMut(&[f64], &mut [f64]),
) -> Vec<RitzPair> {
    let want = opts.want.min(n);
    let mut dim = n.min((2 * want + 20).max(40));
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
        let mut images: Vec<Vec<f64>> = Vec::with_capacity(dim);
        let mut block: Vec<Vec<f64>> = (0..BLOCK.min(n)).map(|_| random_vector(&mut rng, n)).collect();

        while basis.len() < dim {
            let mut next = Vec::with_capacity(block.len());
            for x in block.drain(..) {
                if basis.len() >= dim {
                    break;
                }
                if let Some(q) = orthonormalize(&basis, x) {
                    let mut w = vec![0.0; n];
                    apply(&q, &mut w);
                    next.push(w.clone());
                    basis.push(q);
                    images.push(w);
                }
            }
            if next.is_empty() {
                // Invariant subspace reached; continue from fresh directions.
                next = (0..BLOCK).map(|_| random_vector(&mut rng, n)).collect();
            }
            block = next;
        }

        let k = basis.len();
        let h = DMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i])));
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let mut pairs = Vec::with_capacity(want);
        let mut converged = true;
        for &col in order.iter().take(want) {
            let theta = eig.eigenvalues[col];
            let s = eig.eigenvectors.column(col);
            let mut y = vec![0.0; n];
            let mut r = vec![0.0; n];
            for (i, &si) in s.iter().enumerate() {
                axpy(si, &basis[i], &mut y);
                axpy(si, &images[i], &mut r);
            }
            axpy(-theta, &y, &mut r);
            if !(norm(&r) <= opts.tol * theta.abs()) {
                converged = false;
            }
            pairs.push(RitzPair { theta, vector: y });
        }
        if converged || dim == n {
            return pairs;
        }
        dim = n.min(dim * 2);
    }
}
