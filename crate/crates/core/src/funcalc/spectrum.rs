//! Local spectra and the point-set utilities behind them.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schur::schur;
use crate::tower::OperatorTower;

/// Canonical order on spectral points: ascending real part, then imaginary.
pub fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Index of the point in `candidates` nearest to `z` within `tol`. Ties go to
/// the lexicographically smallest candidate.
pub fn nearest_within(z: Complex64, candidates: &[Complex64], tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let d = (c - z).norm();
        if d > tol {
            continue;
        }
        best = match best {
            None => Some((i, d)),
            Some((bi, bd)) => {
                if d < bd || (d == bd && canonical_cmp(c, &candidates[bi]) == Ordering::Less) {
                    Some((i, d))
                } else {
                    Some((bi, bd))
                }
            }
        };
    }
    best.map(|(i, _)| i)
}

/// Tolerance-deduplicated union in canonical order. The first occurrence of
/// each cluster is kept as its representative.
pub fn dedup_points<'a>(
    points: impl IntoIterator<Item = &'a Complex64>,
    tol: f64,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &z in points {
        if nearest_within(z, &out, tol).is_none() {
            out.push(z);
        }
    }
    out.sort_by(canonical_cmp);
    out
}

/// Whether `small ⊆ big` as multisets, pairing greedily by nearest neighbour
/// within `tol`.
pub fn multiset_contained(small: &[Complex64], big: &[Complex64], tol: f64) -> bool {
    let mut pool: Vec<Complex64> = big.to_vec();
    let mut sorted_small = small.to_vec();
    sorted_small.sort_by(canonical_cmp);
    for z in sorted_small {
        match nearest_within(z, &pool, tol) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Hausdorff distance between two finite point sets. Two empty sets are at
/// distance zero; an empty and a nonempty set at infinity.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |xs: &[Complex64], ys: &[Complex64]| {
        xs.iter()
            .map(|x| {
                ys.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Eigenvalues per level and their merged union.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSpectrum {
    /// `per_level[α]` lists the `d_α` eigenvalues of level `α + 1`, with
    /// multiplicity, in canonical order.
    pub per_level: Vec<Vec<Complex64>>,
    /// Deduplicated union in canonical order.
    pub merged: Vec<Complex64>,
    /// False when the tower was not normal; nesting of `per_level` then
    /// rests on the block structure alone.
    pub normal: bool,
    /// Matching tolerance used for `merged`.
    pub tol: f64,
}

impl LocalSpectrum {
    /// Smallest 1-based level whose eigenvalue list contains `z`.
    pub fn first_level(&self, z: Complex64) -> Option<usize> {
        self.per_level
            .iter()
            .position(|lvl| nearest_within(z, lvl, self.tol).is_some())
            .map(|i| i + 1)
    }

    /// Whether `z` is an eigenvalue of level `level` (1-based).
    pub fn contains_at(&self, level: usize, z: Complex64) -> bool {
        self.per_level
            .get(level.wrapping_sub(1))
            .is_some_and(|lvl| nearest_within(z, lvl, self.tol).is_some())
    }

    /// `per_level[α] ⊆ per_level[β]` as multisets for all `α ≤ β`.
    pub fn is_nested(&self) -> bool {
        (0..self.per_level.len()).all(|a| {
            ((a + 1)..self.per_level.len())
                .all(|b| multiset_contained(&self.per_level[a], &self.per_level[b], self.tol))
        })
    }

    /// No two merged points closer than the matching tolerance.
    pub fn is_separated(&self) -> bool {
        self.merged.iter().enumerate().all(|(i, a)| {
            self.merged[i + 1..]
                .iter()
                .all(|b| (a - b).norm() > self.tol)
        })
    }
}

/// Eigenvalues of every level via the Schur form.
pub fn local_spectrum(
    tower: &OperatorTower,
    eig_tol: f64,
    normal_tol: f64,
) -> Result<LocalSpectrum> {
    let mut per_level = Vec::with_capacity(tower.num_levels());
    for (i, m) in tower.levels().iter().enumerate() {
        let s = schur(m).ok_or(Error::EigensolverFailure { level: i + 1 })?;
        let mut ev = s.eigenvalues();
        ev.sort_by(canonical_cmp);
        per_level.push(ev);
    }
    let merged = dedup_points(per_level.iter().flatten(), eig_tol);
    Ok(LocalSpectrum {
        per_level,
        merged,
        normal: tower.is_normal(normal_tol).normal,
        tol: eig_tol,
    })
}
