//! Analytic cutoffs of the concentric coaxial guide.
//!
//! TM cutoffs are the zeros of `J_m(k r0) Y_m(k r1) − J_m(k r1) Y_m(k r0)`,
//! TE cutoffs those of the same cross-product of derivatives. Roots are
//! bracketed by sign changes on a uniform scan and refined by bisection.

use alloc::vec::Vec;

use crate::media::ModeFamily;
use crate::{Error, Result};

/// Bisection stops once the bracket is below this fraction of the root.
const BISECTION_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossProductRoot {
    pub family: ModeFamily,
    pub m: u32,
    pub n: usize,
    /// Cutoff wavenumber in rad/m.
    pub k: f64,
}

pub fn bessel_j(m: u32, x: f64) -> f64 {
    libm::jn(m as i32, x)
}

pub fn bessel_y(m: u32, x: f64) -> f64 {
    libm::yn(m as i32, x)
}

/// `J′_m(x)` from the recurrence `(J_{m−1} − J_{m+1}) / 2`, `J′_0 = −J_1`.
pub fn bessel_j_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
    }
}

pub fn bessel_y_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -bessel_y(1, x)
    } else {
        0.5 * (bessel_y(m - 1, x) - bessel_y(m + 1, x))
    }
}

/// Cross-product value at `k` together with the larger magnitude of its two
/// product terms (the local function scale).
pub fn cross_product(family: ModeFamily, m: u32, k: f64, r0: f64, r1: f64) -> (f64, f64) {
    let (a, b) = (k * r0, k * r1);
    let (p, q) = match family {
        ModeFamily::Tm => (bessel_j(m, a) * bessel_y(m, b), bessel_j(m, b) * bessel_y(m, a)),
        ModeFamily::Te => (
            bessel_j_prime(m, a) * bessel_y_prime(m, b),
            bessel_j_prime(m, b) * bessel_y_prime(m, a),
        ),
    };
    (p - q, p.abs().max(q.abs()))
}

/// First `count` cutoff wavenumbers of order `m`, strictly increasing.
pub fn concentric_cutoffs(
    r0: f64,
    r1: f64,
    family: ModeFamily,
    m: u32,
    count: usize,
) -> Result<Vec<CrossProductRoot>> {
    if !(r0.is_finite() && r1.is_finite() && r0 > 0.0 && r0 < r1) {
        return Err(Error::InvalidAnnulus { r0, r1 });
    }
    let gap = r1 - r0;
    let step = core::f64::consts::PI / (8.0 * gap);
    // Roots are asymptotically π/gap apart; order m pushes the first one to ~m/r1.
    let mut bound = (count as f64 + 2.0) * core::f64::consts::PI / gap + 2.0 * (m as f64 + 1.0) / r1;
    let f = |k: f64| cross_product(family, m, k, r0, r1).0;

    for attempt in 0..2 {
        let mut roots = Vec::with_capacity(count);
        let mut lo = step;
        let mut f_lo = f(lo);
        while roots.len() < count && lo < bound {
            let hi = lo + step;
            let f_hi = f(hi);
            if f_lo == 0.0 {
                roots.push(lo);
            } else if f_lo.signum() != f_hi.signum() {
                roots.push(bisect(&f, lo, hi, f_lo));
            }
            lo = hi;
            f_lo = f_hi;
        }
        if roots.len() == count {
            return Ok(roots
                .into_iter()
                .enumerate()
                .map(|(i, k)| CrossProductRoot {
                    family,
                    m,
                    n: i + 1,
                    k,
                })
                .collect());
        }
        if attempt == 1 {
            return Err(Error::BracketingFailure {
                found: roots.len(),
                requested: count,
                bound,
            });
        }
        bound *= 2.0;
    }
    unreachable!()
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_RTOL * mid {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
