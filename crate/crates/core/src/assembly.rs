//! Assembly of the generalized eigenproblem `A v = λ B v`.
//!
//! `A` is the five-point central-difference form of
//! `F_ρρ + F_ρ/ρ + F_φφ/ρ²`, `B` is the diagonal of `|J|⁻¹` at each unknown.
//! TM rows drop neighbours on the conductor rings (`F = 0`). TE rows on the
//! conductor rings fold the mirrored ghost node `F(ρ_{−1}) = F(ρ_1)` into the
//! single interior neighbour, which doubles its second-difference coefficient
//! and cancels the first-derivative term.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::ConcentricMap;
use crate::grid::{PolarGrid, UnknownIndexing};
use crate::media::ModeFamily;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Relative tolerance when comparing grid and map radii.
const DOMAIN_MATCH_TOL: f64 = 1e-12;

/// Coefficients of one interior five-point row at radius `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub center: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub phi: f64,
}

impl Stencil {
    pub fn interior(rho: f64, h_rho: f64, h_phi: f64) -> Self {
        let radial = 1.0 / (h_rho * h_rho);
        let first = 1.0 / (2.0 * rho * h_rho);
        let phi = 1.0 / (rho * rho * h_phi * h_phi);
        Self {
            center: -2.0 * radial - 2.0 * phi,
            rho_plus: radial + first,
            rho_minus: radial - first,
            phi,
        }
    }

    pub fn sum(&self) -> f64 {
        self.center + self.rho_plus + self.rho_minus + 2.0 * self.phi
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    a: CsrMatrix,
    b: Vec<f64>,
    row_weights: Vec<f64>,
    indexing: UnknownIndexing,
    grid: PolarGrid,
    map: ConcentricMap,
}

/// Builds `A` and `B` for one mode family.
pub fn assemble(grid: &PolarGrid, map: &ConcentricMap, family: ModeFamily) -> Result<DiscreteOperator> {
    let scale = map.r1_mapped();
    if (grid.r0() - map.r0_mapped()).abs() > DOMAIN_MATCH_TOL * scale
        || (grid.r1() - map.r1_mapped()).abs() > DOMAIN_MATCH_TOL * scale
    {
        return Err(Error::MismatchedDomain {
            grid_r0: grid.r0(),
            grid_r1: grid.r1(),
            map_r0: map.r0_mapped(),
            map_r1: map.r1_mapped(),
        });
    }

    let ix = grid.indexing(family);
    let n = ix.total_unknowns();
    let last_ring = grid.radial_nodes() - 1;
    let (h_rho, h_phi) = (grid.h_rho(), grid.h_phi());

    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    let mut b = vec![0.0; n];
    let mut row_weights = vec![0.0; n];

    for k in 0..n {
        let (ring, angle) = ix.position(k).expect("k < total_unknowns");
        let rho = grid.rho(ring);
        let st = Stencil::interior(rho, h_rho, h_phi);
        let mut row = Vec::with_capacity(5);
        row.push((k, st.center));
        for step in [-1, 1] {
            let col = ix.index(ring, ix.angle_neighbor(angle, step))?;
            row.push((col, st.phi));
        }

        // Symmetrizing row weight: w_i a_ij = w_j a_ji.
        let weight = match family {
            ModeFamily::Te if ring == 0 => {
                row.push((ix.index(1, angle)?, st.rho_plus + st.rho_minus));
                0.5 * (rho + 0.5 * h_rho)
            }
            ModeFamily::Te if ring == last_ring => {
                row.push((ix.index(ring - 1, angle)?, st.rho_plus + st.rho_minus));
                0.5 * (rho - 0.5 * h_rho)
            }
            _ => {
                if ix.contains_ring(ring - 1) {
                    row.push((ix.index(ring - 1, angle)?, st.rho_minus));
                }
                if ix.contains_ring(ring + 1) {
                    row.push((ix.index(ring + 1, angle)?, st.rho_plus));
                }
                rho
            }
        };
        rows.push(row);
        b[k] = map.weight(rho, grid.phi(angle));
        row_weights[k] = weight;
    }

    Ok(DiscreteOperator {
        a: CsrMatrix::from_rows(n, rows),
        b,
        row_weights,
        indexing: ix,
        grid: grid.clone(),
        map: *map,
    })
}

impl DiscreteOperator {
    /// Stencil matrix `A` (entries in 1/m²).
    pub fn a(&self) -> &CsrMatrix {
        &self.a
    }

    /// Diagonal of `B`.
    pub fn b_diagonal(&self) -> &[f64] {
        &self.b
    }

    /// Positive weights `w` such that `diag(w)·A` is symmetric.
    pub fn row_weights(&self) -> &[f64] {
        &self.row_weights
    }

    pub fn indexing(&self) -> &UnknownIndexing {
        &self.indexing
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn map(&self) -> &ConcentricMap {
        &self.map
    }

    pub fn family(&self) -> ModeFamily {
        self.indexing.family()
    }

    pub fn total_unknowns(&self) -> usize {
        self.indexing.total_unknowns()
    }

    /// `A·v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.a.mul_vec(v)
    }

    /// `‖A v − λ B v‖₂ / ‖v‖₂`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> Result<f64> {
        let av = self.apply(v)?;
        let num: f64 = av
            .iter()
            .zip(&self.b)
            .zip(v)
            .map(|((a, b), x)| {
                let r = a - lambda * b * x;
                r * r
            })
            .sum();
        let den: f64 = v.iter().map(|x| x * x).sum();
        Ok(libm::sqrt(num / den))
    }
}

/// `A·v`.
pub fn apply_operator(op: &DiscreteOperator, v: &[f64]) -> Result<Vec<f64>> {
    op.apply(v)
}
