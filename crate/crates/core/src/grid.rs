//! Uniform polar grid on the concentric annulus and the numbering of unknowns.
//!
//! Node indices are zero-based: ring `i ∈ 0..M` sits at `ρ = r0 + i·h_ρ`, angle
//! `j ∈ 0..N` at `φ = j·h_φ`, with `h_φ = 2π/(N−1)`. Angle `N−1` duplicates angle
//! `0` (the 2π seam), so only `N−1` azimuthal columns carry unknowns and
//! azimuthal neighbours wrap around.
//!
//! TM unknowns live on rings `1..=M−2` (the conductor rings are Dirichlet);
//! TE unknowns live on every ring.

use alloc::format;
use alloc::vec::Vec;

use crate::constants::TAU;
use crate::media::ModeFamily;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    radial_nodes: usize,
    azimuthal_nodes: usize,
    h_rho: f64,
    h_phi: f64,
    rho_nodes: Vec<f64>,
    phi_nodes: Vec<f64>,
    r0: f64,
    r1: f64,
}

impl PolarGrid {
    /// `radial_nodes` is `M`, `azimuthal_nodes` is `N` including the seam duplicate.
    pub fn new(r0: f64, r1: f64, radial_nodes: usize, azimuthal_nodes: usize) -> Result<Self> {
        if !(r0.is_finite() && r1.is_finite() && r0 > 0.0 && r0 < r1) {
            return Err(Error::InvalidAnnulus { r0, r1 });
        }
        if radial_nodes < 3 {
            return Err(Error::InvalidResolution(format!(
                "need M >= 3 radial nodes, got {radial_nodes}"
            )));
        }
        if azimuthal_nodes < 5 {
            return Err(Error::InvalidResolution(format!(
                "need N >= 5 azimuthal nodes, got {azimuthal_nodes}"
            )));
        }
        let h_rho = (r1 - r0) / (radial_nodes - 1) as f64;
        let h_phi = TAU / (azimuthal_nodes - 1) as f64;
        let mut rho_nodes: Vec<f64> = (0..radial_nodes).map(|i| r0 + i as f64 * h_rho).collect();
        rho_nodes[radial_nodes - 1] = r1;
        let mut phi_nodes: Vec<f64> = (0..azimuthal_nodes).map(|j| j as f64 * h_phi).collect();
        phi_nodes[azimuthal_nodes - 1] = TAU;
        Ok(Self {
            radial_nodes,
            azimuthal_nodes,
            h_rho,
            h_phi,
            rho_nodes,
            phi_nodes,
            r0,
            r1,
        })
    }

    /// `M`
    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    /// `N`, counting the seam duplicate.
    pub fn azimuthal_nodes(&self) -> usize {
        self.azimuthal_nodes
    }

    /// `N − 1` distinct azimuthal columns.
    pub fn unique_angles(&self) -> usize {
        self.azimuthal_nodes - 1
    }

    pub fn h_rho(&self) -> f64 {
        self.h_rho
    }

    pub fn h_phi(&self) -> f64 {
        self.h_phi
    }

    pub fn rho_nodes(&self) -> &[f64] {
        &self.rho_nodes
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn rho(&self, ring: usize) -> f64 {
        self.rho_nodes[ring]
    }

    pub fn phi(&self, angle: usize) -> f64 {
        self.phi_nodes[angle]
    }

    pub fn indexing(&self, family: ModeFamily) -> UnknownIndexing {
        UnknownIndexing::new(self, family)
    }
}

/// Row-major numbering of unknowns, angle fastest:
/// `k = (ring − first_ring)·(N−1) + angle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownIndexing {
    family: ModeFamily,
    first_ring: usize,
    ring_count: usize,
    unique_angles: usize,
}

impl UnknownIndexing {
    pub fn new(grid: &PolarGrid, family: ModeFamily) -> Self {
        let m = grid.radial_nodes();
        let (first_ring, ring_count) = match family {
            ModeFamily::Tm => (1, m - 2),
            ModeFamily::Te => (0, m),
        };
        Self {
            family,
            first_ring,
            ring_count,
            unique_angles: grid.unique_angles(),
        }
    }

    pub fn family(&self) -> ModeFamily {
        self.family
    }

    pub fn first_ring(&self) -> usize {
        self.first_ring
    }

    /// One past the last ring carrying unknowns.
    pub fn end_ring(&self) -> usize {
        self.first_ring + self.ring_count
    }

    pub fn ring_count(&self) -> usize {
        self.ring_count
    }

    pub fn unique_angles(&self) -> usize {
        self.unique_angles
    }

    /// `(M−2)(N−1)` for TM, `M(N−1)` for TE.
    pub fn total_unknowns(&self) -> usize {
        self.ring_count * self.unique_angles
    }

    pub fn contains_ring(&self, ring: usize) -> bool {
        ring >= self.first_ring && ring < self.end_ring()
    }

    /// Maps the seam node (angle `N−1`) onto angle 0.
    pub fn fold_angle(&self, angle: usize) -> usize {
        if angle == self.unique_angles {
            0
        } else {
            angle
        }
    }

    pub fn index(&self, ring: usize, angle: usize) -> Result<usize> {
        if !self.contains_ring(ring) || angle >= self.unique_angles {
            return Err(Error::IndexOutOfRange { ring, angle });
        }
        Ok((ring - self.first_ring) * self.unique_angles + angle)
    }

    /// Inverse of [`UnknownIndexing::index`].
    pub fn position(&self, k: usize) -> Option<(usize, usize)> {
        (k < self.total_unknowns())
            .then(|| (self.first_ring + k / self.unique_angles, k % self.unique_angles))
    }

    /// Azimuthal neighbour with periodic wrap: `step = +1` or `−1`.
    pub fn angle_neighbor(&self, angle: usize, step: isize) -> usize {
        let p = self.unique_angles as isize;
        (angle as isize + step).rem_euclid(p) as usize
    }
}
