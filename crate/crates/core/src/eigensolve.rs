//! Smallest-|λ| eigenpairs of `A v = λ B v`.
//!
//! `A` is not symmetric (the `F_ρ/ρ` term), but `S = diag(w)·A` is for the
//! row weights produced by assembly, and `D = diag(w)·B` is positive. The
//! pencil `(S, D)` is therefore symmetric-definite with a real, non-positive
//! spectrum, and is solved through `C = D^{−1/2} S D^{−1/2}`:
//!
//! * small problems: dense symmetric decomposition of `C`;
//! * larger ones: shift-invert with `(σ − C)⁻¹ = D^{1/2} (σD − S)⁻¹ D^{1/2}`,
//!   a banded Cholesky factor and a block Krylov Rayleigh–Ritz iteration.
//!
//! Every pair returned is checked against the unsymmetrized `A` and `B`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::assembly::DiscreteOperator;
use crate::linalg::banded::BandCholesky;
use crate::linalg::krylov::{largest_eigenpairs, KrylovOptions};
use crate::media::ModeFamily;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Residual acceptance: `‖Av − λBv‖₂ ≤ RESIDUAL_BOUND·‖A‖_∞·‖v‖₂`.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// `tol_zero = ZERO_RATIO · max |λ|` over the returned pairs.
pub const ZERO_RATIO: f64 = 1e-6;

/// Relative asymmetry of `diag(w)·A` above which the operator is rejected.
const SYMMETRY_TOL: f64 = 1e-10;

/// Shift `σ = SHIFT_SCALE / r1²` for the shift-invert path. Positive so the
/// shifted TE operator (constant null vector) stays definite.
const SHIFT_SCALE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub count: usize,
    /// Problems with at most this many unknowns use the dense path.
    pub dense_limit: usize,
    /// Seed of the Krylov start block.
    pub seed: u64,
}

impl SolveOptions {
    pub fn new(count: usize) -> Self {
        Self {
            count,
            dense_limit: 600,
            seed: 0x5eed_c0a8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Eigenvalue in 1/m², non-positive.
    pub lambda: f64,
    /// Normalized so the largest-magnitude entry is `+1`.
    pub vector: Vec<f64>,
    /// `‖A v − λ B v‖₂ / ‖v‖₂`.
    pub residual: f64,
}

/// Result of one eigensolve.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub family: ModeFamily,
    /// Physical modes, ascending in `|λ|`.
    pub pairs: Vec<EigenPair>,
    /// The constant TE eigenvector (`λ ≈ 0`), excluded from `pairs`.
    pub null_mode: Option<EigenPair>,
    pub tol_zero: f64,
    /// `‖A‖_∞`.
    pub operator_norm: f64,
}

pub fn solve_eigs(op: &DiscreteOperator, count: usize) -> Result<Spectrum> {
    solve_eigs_with(op, &SolveOptions::new(count))
}

pub fn solve_eigs_with(op: &DiscreteOperator, opts: &SolveOptions) -> Result<Spectrum> {
    let n = op.total_unknowns();
    let family = op.family();
    let raw_count = opts.count + usize::from(family == ModeFamily::Te);
    if raw_count > n {
        return Err(Error::InsufficientSpectrum {
            requested: raw_count,
            available: n,
        });
    }

    let (s, d) = symmetric_pencil(op)?;
    let sqrt_d: Vec<f64> = d.iter().map(|&x| libm::sqrt(x)).collect();

    let raw: Vec<(f64, Vec<f64>)> = if n <= opts.dense_limit {
        dense_pairs(&s, &sqrt_d, raw_count)
    } else {
        let r1 = op.grid().r1();
        shift_invert_pairs(&s, &d, &sqrt_d, raw_count, SHIFT_SCALE / (r1 * r1), opts.seed)?
    };

    let operator_norm = op.a().norm_inf();
    let mut pairs = Vec::with_capacity(raw.len());
    for (lambda, y) in raw {
        let mut v: Vec<f64> = y.iter().zip(&sqrt_d).map(|(yi, si)| yi / si).collect();
        normalize_sign_fixed(&mut v);
        let residual = op.residual(lambda, &v)?;
        if !(residual <= RESIDUAL_BOUND * operator_norm) {
            return Err(Error::ConvergenceFailure(format!(
                "residual {residual:.3e} for lambda = {lambda:.6e} exceeds {:.3e}",
                RESIDUAL_BOUND * operator_norm
            )));
        }
        pairs.push(EigenPair {
            lambda,
            vector: v,
            residual,
        });
    }
    pairs.sort_by(|a, b| a.lambda.abs().total_cmp(&b.lambda.abs()));

    let max_abs = pairs.iter().map(|p| p.lambda.abs()).fold(0.0, f64::max);
    let tol_zero = ZERO_RATIO * max_abs;
    if let Some(p) = pairs.iter().find(|p| p.lambda > tol_zero) {
        return Err(Error::ConvergenceFailure(format!(
            "positive eigenvalue {:.6e} in a non-positive spectrum",
            p.lambda
        )));
    }
    let zeros = pairs.iter().filter(|p| p.lambda.abs() <= tol_zero).count();
    let expected_zeros = usize::from(family == ModeFamily::Te);
    if zeros != expected_zeros {
        return Err(Error::ConvergenceFailure(format!(
            "{family} spectrum has {zeros} eigenvalues below tol_zero = {tol_zero:.3e}, expected {expected_zeros}"
        )));
    }
    let null_mode = if expected_zeros == 1 {
        Some(pairs.remove(0))
    } else {
        None
    };

    Ok(Spectrum {
        family,
        pairs,
        null_mode,
        tol_zero,
        operator_norm,
    })
}

/// `S = diag(w)·A` (symmetrized after checking) and `D = diag(w)·B`.
fn symmetric_pencil(op: &DiscreteOperator) -> Result<(CsrMatrix, Vec<f64>)> {
    let a = op.a();
    let w = op.row_weights();
    let scale = a
        .triplets()
        .map(|(i, _, v)| (w[i] * v).abs())
        .fold(0.0, f64::max);
    let mut worst = 0.0f64;
    let rows = (0..a.nrows()).map(|i| {
        let row: Vec<(usize, f64)> = a
            .row(i)
            .map(|(j, v)| {
                let sij = w[i] * v;
                let sji = w[j] * a.get(j, i);
                worst = worst.max((sij - sji).abs());
                (j, 0.5 * (sij + sji))
            })
            .collect();
        row
    });
    let s = CsrMatrix::from_rows(a.ncols(), rows.collect::<Vec<_>>());
    if worst > SYMMETRY_TOL * scale {
        return Err(Error::ConvergenceFailure(format!(
            "weighted operator is not symmetric (asymmetry {worst:.3e} vs scale {scale:.3e})"
        )));
    }
    let d = op.b_diagonal().iter().zip(w).map(|(b, w)| b * w).collect();
    Ok((s, d))
}

/// Largest (closest to zero) eigenpairs of `C`, as `(λ, y)` with unit `y`.
fn dense_pairs(s: &CsrMatrix, sqrt_d: &[f64], count: usize) -> Vec<(f64, Vec<f64>)> {
    let n = s.nrows();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for (i, j, v) in s.triplets() {
        c[(i, j)] = v / (sqrt_d[i] * sqrt_d[j]);
    }
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].abs().total_cmp(&eig.eigenvalues[b].abs()));
    order
        .into_iter()
        .take(count)
        .map(|col| (eig.eigenvalues[col], eig.eigenvectors.column(col).iter().copied().collect()))
        .collect()
}

fn shift_invert_pairs(
    s: &CsrMatrix,
    d: &[f64],
    sqrt_d: &[f64],
    count: usize,
    sigma: f64,
    seed: u64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = s.nrows();
    let bw = s.bandwidth();
    let chol = BandCholesky::factor(n, bw, |i, j| {
        let diag = if i == j { sigma * d[i] } else { 0.0 };
        diag - s.get(i, j)
    })
    .ok_or_else(|| Error::ConvergenceFailure("shifted operator is not definite".into()))?;

    let opts = KrylovOptions {
        want: count,
        tol: 1e-11,
        seed,
    };
    let ritz = largest_eigenpairs(n, &opts, |x, y| {
        for i in 0..n {
            y[i] = sqrt_d[i] * x[i];
        }
        chol.solve_in_place(y);
        for i in 0..n {
            y[i] *= sqrt_d[i];
        }
    });
    if ritz.len() < count {
        return Err(Error::ConvergenceFailure(format!(
            "Krylov iteration produced {} of {count} pairs",
            ritz.len()
        )));
    }
    Ok(ritz
        .into_iter()
        .map(|p| (sigma - 1.0 / p.theta, p.vector))
        .collect())
}

/// Scales `v` so its largest-magnitude entry is `+1`. Among entries within a
/// relative `1e-9` of the maximum, the lowest index decides the sign.
pub(crate) fn normalize_sign_fixed(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= (1.0 - 1e-9) * max)
        .expect("max is attained");
    let scale = if v[pivot] < 0.0 { -1.0 / max } else { 1.0 / max };
    v.iter_mut().for_each(|x| *x *= scale);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble;
    use crate::geometry::{ConcentricMap, EccentricGeometry};
    use crate::grid::PolarGrid;

    fn operator(d_mm: f64, m: usize, n: usize, family: ModeFamily) -> DiscreteOperator {
        let g = EccentricGeometry::from_millimeters(5.0, 0.25, d_mm).unwrap();
        let map = ConcentricMap::build(&g).unwrap();
        let grid = PolarGrid::new(map.r0_mapped(), map.r1_mapped(), m, n).unwrap();
        assemble(&grid, &map, family).unwrap()
    }

    #[test]
    fn normalization_fixes_sign() {
        let mut v = vec![0.5, -2.0, 1.0];
        normalize_sign_fixed(&mut v);
        assert_eq!(v, vec![-0.25, 1.0, -0.5]);
    }

    #[test]
    fn te_constant_mode_is_split_off() {
        let op = operator(1.0, 8, 17, ModeFamily::Te);
        let sp = solve_eigs(&op, 4).unwrap();
        assert_eq!(sp.pairs.len(), 4);
        let null = sp.null_mode.unwrap();
        assert!(null.lambda.abs() <= sp.tol_zero);
        let spread = null.vector.iter().cloned().fold(f64::MIN, f64::max)
            - null.vector.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-6);
        assert!(sp.pairs.iter().all(|p| p.lambda < -sp.tol_zero));
    }

    #[test]
    fn tm_has_no_null_mode_and_sorted_output() {
        let op = operator(1.0, 8, 17, ModeFamily::Tm);
        let sp = solve_eigs(&op, 5).unwrap();
        assert!(sp.null_mode.is_none());
        for w in sp.pairs.windows(2) {
            assert!(w[0].lambda.abs() <= w[1].lambda.abs());
        }
        for p in &sp.pairs {
            assert!(p.residual <= RESIDUAL_BOUND * sp.operator_norm);
            let max = p.vector.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!((max - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dense_and_shift_invert_paths_agree() {
        for fam in ModeFamily::ALL {
            let op = operator(1.0, 10, 41, fam);
            let dense = solve_eigs(&op, 6).unwrap();
            let mut opts = SolveOptions::new(6);
            opts.dense_limit = 0;
            let sparse = solve_eigs_with(&op, &opts).unwrap();
            for (a, b) in dense.pairs.iter().zip(&sparse.pairs) {
                assert!((a.lambda - b.lambda).abs() <= 1e-9 * a.lambda.abs(), "{fam}: {} vs {}", a.lambda, b.lambda);
            }
        }
    }

    #[test]
    fn too_many_modes() {
        let op = operator(1.0, 4, 5, ModeFamily::Te);
        assert!(matches!(
            solve_eigs(&op, 16),
            Err(Error::InsufficientSpectrum { requested: 17, available: 16 })
        ));
    }

    #[test]
    fn deterministic() {
        let op = operator(2.0, 12, 49, ModeFamily::Tm);
        let mut opts = SolveOptions::new(4);
        opts.dense_limit = 0;
        let a = solve_eigs_with(&op, &opts).unwrap();
        let b = solve_eigs_with(&op, &opts).unwrap();
        assert_eq!(a, b);
    }
}
