//! Physical mode labels `TM_mn` / `TE_mn` with even/odd parity.
//!
//! The azimuthal order is half the number of sign changes around the ring of
//! largest amplitude. Nodal lines survive the deformation of the field by
//! eccentricity, whereas its Fourier content does not: the fundamental mode of
//! a strongly eccentric guide is a lopsided bump with as much `cos φ` as
//! constant content. Parity is the exact reflection symmetry about `φ = 0`,
//! which the map preserves: symmetric modes are even, antisymmetric ones odd.
//! Degenerate cosine/sine pairs (concentric guides) come out of the solver in
//! an arbitrary rotation and are first re-mixed into pure cosine and sine members.

use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::assembly::DiscreteOperator;
use crate::eigensolve::{normalize_sign_fixed, EigenPair};
use crate::media::ModeFamily;
use crate::{Error, Result};

/// Eigenvalues closer than this (relative) are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Ring samples below this fraction of the ring maximum are treated as nodes.
const NODE_FLOOR: f64 = 1e-6;

/// Largest `‖v ∓ Rv‖ / ‖v ± Rv‖` for which a mode counts as having a parity.
const PARITY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub family: ModeFamily,
    pub m: usize,
    pub n: usize,
    pub parity: Parity,
}

impl fmt::Display for ModeLabel {
    /// `TM01`, `TE11e`, `TE11o`; orders of two or more digits are written
    /// `TM(12,3)e`. Axisymmetric modes carry no parity suffix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m < 10 && self.n < 10 {
            write!(f, "{}{}{}", self.family, self.m, self.n)?;
        } else {
            write!(f, "{}({},{})", self.family, self.m, self.n)?;
        }
        if self.m > 0 {
            f.write_str(match self.parity {
                Parity::Even => "e",
                Parity::Odd => "o",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Parses the [`fmt::Display`] form. A missing parity suffix means even.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(format!("{s:?}"));
        let s = s.trim();
        let family = match s.get(..2).map(|p| p.to_ascii_uppercase()) {
            Some(p) if p == "TM" => ModeFamily::Tm,
            Some(p) if p == "TE" => ModeFamily::Te,
            _ => return Err(bad()),
        };
        let rest = &s[2..];
        let (body, parity) = match rest.chars().last() {
            Some('e') | Some('E') => (&rest[..rest.len() - 1], Parity::Even),
            Some('o') | Some('O') => (&rest[..rest.len() - 1], Parity::Odd),
            _ => (rest, Parity::Even),
        };
        let (m, n) = if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            let (m, n) = inner.split_once(',').ok_or_else(bad)?;
            (m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?)
        } else if body.len() == 2 && body.bytes().all(|b| b.is_ascii_digit()) {
            ((body.as_bytes()[0] - b'0') as usize, (body.as_bytes()[1] - b'0') as usize)
        } else {
            return Err(bad());
        };
        if n == 0 {
            return Err(bad());
        }
        Ok(Self {
            family,
            m,
            n,
            parity,
        })
    }
}

impl ModeLabel {
    pub fn name(&self) -> String {
        format!("{self}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMode {
    pub pair: EigenPair,
    pub label: ModeLabel,
    /// The nodal count differs between the peak ring and a neighbour, or the
    /// mode is neither symmetric nor antisymmetric.
    pub ambiguous: bool,
}

/// Cosine and sine coefficients of one ring for every order `0..=P/2`.
struct RingSpectrum {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl RingSpectrum {
    fn of(samples: &[f64], phis: &[f64]) -> Self {
        let p = samples.len();
        let orders = p / 2 + 1;
        let mut cos = alloc::vec![0.0; orders];
        let mut sin = alloc::vec![0.0; orders];
        for m in 0..orders {
            let (mut c, mut s) = (0.0, 0.0);
            for (f, &phi) in samples.iter().zip(phis) {
                let arg = m as f64 * phi;
                c += f * libm::cos(arg);
                s += f * libm::sin(arg);
            }
            // Amplitude normalization: constant term 1/P, others 2/P (Nyquist 1/P).
            let scale = if m == 0 || 2 * m == p { 1.0 } else { 2.0 } / p as f64;
            cos[m] = c * scale;
            sin[m] = s * scale;
        }
        Self { cos, sin }
    }

    fn amplitude(&self, m: usize) -> f64 {
        libm::hypot(self.cos[m], self.sin[m])
    }

    /// Order with the largest amplitude.
    fn dominant(&self) -> usize {
        (0..self.cos.len())
            .fold((0, -1.0), |best, m| {
                let a = self.amplitude(m);
                if a > best.1 {
                    (m, a)
                } else {
                    best
                }
            })
            .0
    }
}

/// Sign changes around a closed ring, skipping near-zero samples.
fn sign_changes(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let signs: Vec<bool> = samples
        .iter()
        .filter(|x| x.abs() > NODE_FLOOR * peak)
        .map(|&x| x > 0.0)
        .collect();
    match signs.last() {
        None => 0,
        Some(&last) => {
            let mut prev = last;
            let mut count = 0;
            for &s in &signs {
                if s != prev {
                    count += 1;
                }
                prev = s;
            }
            count
        }
    }
}

/// `(‖v − Rv‖, ‖v + Rv‖)` for the reflection `R: φ → −φ`.
fn reflection_norms(op: &DiscreteOperator, v: &[f64]) -> (f64, f64) {
    let ix = op.indexing();
    let p = ix.unique_angles();
    let (mut minus, mut plus) = (0.0, 0.0);
    for (k, &x) in v.iter().enumerate() {
        let (ring, angle) = ix.position(k).expect("index in range");
        let mirror = ix.index(ring, (p - angle) % p).expect("mirror node exists");
        let y = v[mirror];
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    (libm::sqrt(minus), libm::sqrt(plus))
}

fn ring_of_max_amplitude(op: &DiscreteOperator, v: &[f64]) -> usize {
    let ix = op.indexing();
    let (k, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (k, x)| if x.abs() > acc.1 { (k, x.abs()) } else { acc });
    ix.position(k).map(|(ring, _)| ring).unwrap_or(ix.first_ring())
}

fn ring_samples<'a>(op: &DiscreteOperator, v: &'a [f64], ring: usize) -> &'a [f64] {
    let ix = op.indexing();
    let start = ix.index(ring, 0).expect("ring carries unknowns");
    &v[start..start + ix.unique_angles()]
}

/// Assigns labels to pairs sorted ascending in `|λ|`.
pub fn label_modes(pairs: Vec<EigenPair>, op: &DiscreteOperator) -> Vec<LabeledMode> {
    let family = op.family();
    let phis = &op.grid().phi_nodes()[..op.indexing().unique_angles()];

    let mut pairs = pairs;
    remix_degenerate_pairs(&mut pairs, op, phis);

    let ix = op.indexing();
    let mut counts: Vec<((usize, Parity), usize)> = Vec::new();
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let ring = ring_of_max_amplitude(op, &pair.vector);
        let changes = sign_changes(ring_samples(op, &pair.vector, ring));
        let m = changes / 2;
        let neighbours_agree = [ring.wrapping_sub(1), ring + 1]
            .into_iter()
            .filter(|&r| ix.contains_ring(r))
            .all(|r| sign_changes(ring_samples(op, &pair.vector, r)) == changes);
        let (minus, plus) = reflection_norms(op, &pair.vector);
        let definite = minus.min(plus) <= PARITY_TOL * minus.max(plus);
        let parity = if m == 0 || minus <= plus {
            Parity::Even
        } else {
            Parity::Odd
        };
        let n = match counts.iter_mut().find(|(key, _)| *key == (m, parity)) {
            Some((_, c)) => {
                *c += 1;
                *c
            }
            None => {
                counts.push(((m, parity), 1));
                1
            }
        };
        out.push(LabeledMode {
            pair,
            label: ModeLabel {
                family,
                m,
                n,
                parity,
            },
            ambiguous: !neighbours_agree || !definite,
        });
    }
    out
}

/// Rotates each two-member degenerate cluster into a cosine member (first)
/// and a sine member (second) of its dominant order.
fn remix_degenerate_pairs(pairs: &mut [EigenPair], op: &DiscreteOperator, phis: &[f64]) {
    let mut i = 0;
    while i + 1 < pairs.len() {
        let (la, lb) = (pairs[i].lambda, pairs[i + 1].lambda);
        let clustered = (la - lb).abs() < DEGENERACY_TOL * la.abs();
        let third = i + 2 < pairs.len() && (pairs[i + 2].lambda - la).abs() < DEGENERACY_TOL * la.abs();
        if !clustered || third {
            i += 1;
            continue;
        }
        let ring = ring_of_max_amplitude(op, &pairs[i].vector);
        let sa = RingSpectrum::of(ring_samples(op, &pairs[i].vector, ring), phis);
        let sb = RingSpectrum::of(ring_samples(op, &pairs[i + 1].vector, ring), phis);
        let m = sa.dominant();
        if m > 0 {
            let (ca, sna, cb, snb) = (sa.cos[m], sa.sin[m], sb.cos[m], sb.sin[m]);
            if (ca * snb - cb * sna).abs() > 1e-12 * (ca.abs() + sna.abs()) * (cb.abs() + snb.abs()) {
                let u = pairs[i].vector.clone();
                let w = pairs[i + 1].vector.clone();
                let even: Vec<f64> = u.iter().zip(&w).map(|(x, y)| snb * x - sna * y).collect();
                let odd: Vec<f64> = u.iter().zip(&w).map(|(x, y)| cb * x - ca * y).collect();
                for (slot, mut v) in [(i, even), (i + 1, odd)] {
                    normalize_sign_fixed(&mut v);
                    if let Ok(r) = op.residual(pairs[slot].lambda, &v) {
                        pairs[slot].residual = r;
                    }
                    pairs[slot].vector = v;
                }
            }
        }
        i += 2;
    }
}
