//! Random instance generation shared by the integration tests.
//!
//! Towers are planted: level `N` is `blockdiag(U_1 D_1 U_1*, …, U_N D_N U_N*)`
//! with random unitaries `U_k` and chosen eigenvalues `D_k`, and lower levels
//! are leading truncations. The planted eigenvalues and the block in which
//! each first appears are the oracle for spectra and character levels.

#![allow(dead_code)]

pub mod checks;

use loctower::{ComplexMatrix, IndexChain, OperatorTower, TablePoint, Term};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    General,
    Real,
    UnitCircle,
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub tower: OperatorTower,
    /// Eigenvalues planted in each block, block `k` covering coordinates
    /// `d_{k-1}..d_k`.
    pub blocks: Vec<Vec<Complex64>>,
    pub kind: SpectrumKind,
}

impl Planted {
    /// Distinct planted values with the 1-based level where each first appears.
    pub fn distinct_with_levels(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for (k, block) in self.blocks.iter().enumerate() {
            for &z in block {
                if !out.iter().any(|(w, _)| (w - z).norm() < 1e-12) {
                    out.push((z, k + 1));
                }
            }
        }
        out
    }

    /// Planted eigenvalues of level `level` (1-based), with multiplicity.
    pub fn level_values(&self, level: usize) -> Vec<Complex64> {
        self.blocks[..level].iter().flatten().copied().collect()
    }
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-ish random unitary: modified Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..n {
        for i in 0..j {
            let (head, tail) = cols.split_at_mut(j);
            let qi = &head[i];
            let v = &mut tail[0];
            let dot: Complex64 = qi.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, q) in v.iter_mut().zip(qi) {
                *x -= dot * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut data = vec![c(0.0, 0.0); n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            data[i * n + j] = z;
        }
    }
    ComplexMatrix::new(n, n, data).unwrap()
}

pub fn random_dims(rng: &mut impl Rng, max_levels: usize, max_dim: usize) -> Vec<usize> {
    let n = rng.gen_range(1..=max_levels);
    loop {
        let mut dims = Vec::with_capacity(n);
        let mut d = 0;
        for _ in 0..n {
            d += rng.gen_range(1..=4);
            dims.push(d);
        }
        if d <= max_dim {
            return dims;
        }
    }
}

fn random_value(rng: &mut impl Rng, kind: SpectrumKind) -> Complex64 {
    match kind {
        SpectrumKind::General => c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        SpectrumKind::Real => c(rng.gen_range(-3.0..3.0), 0.0),
        SpectrumKind::UnitCircle => Complex64::from_polar(1.0, rng.gen_range(-3.1..3.1)),
    }
}

/// Picks eigenvalues at least `0.05` apart, with occasional deliberate repeats.
fn pick_values(
    rng: &mut impl Rng,
    kind: SpectrumKind,
    count: usize,
    used: &mut Vec<Complex64>,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if !used.is_empty() && rng.gen_bool(0.15) {
            out.push(*used.choose(rng).unwrap());
            continue;
        }
        let z = random_value(rng, kind);
        if used.iter().all(|w| (w - z).norm() >= 0.05) {
            used.push(z);
            out.push(z);
        }
    }
    out
}

pub fn planted_tower(
    rng: &mut impl Rng,
    kind: SpectrumKind,
    max_levels: usize,
    max_dim: usize,
) -> Planted {
    let dims = random_dims(rng, max_levels, max_dim);
    let top = *dims.last().unwrap();
    let mut used = Vec::new();
    let mut blocks = Vec::with_capacity(dims.len());
    let mut big = ComplexMatrix::zeros(top, top);
    let mut start = 0;
    for &end in &dims {
        let size = end - start;
        let values = pick_values(rng, kind, size, &mut used);
        let u = random_unitary(rng, size);
        let block = u
            .matmul(&ComplexMatrix::from_diagonal(&values))
            .matmul(&u.adjoint());
        for i in 0..size {
            for j in 0..size {
                big[(start + i, start + j)] = block[(i, j)];
            }
        }
        blocks.push(values);
        start = end;
    }
    let chain = IndexChain::new(dims).unwrap();
    let tower = OperatorTower::from_top(chain, &big, 1e-10).unwrap();
    Planted {
        tower,
        blocks,
        kind,
    }
}

pub fn random_kind(rng: &mut impl Rng) -> SpectrumKind {
    *[
        SpectrumKind::General,
        SpectrumKind::Real,
        SpectrumKind::UnitCircle,
    ]
    .choose(rng)
    .unwrap()
}

/// Polynomial in `z, z̄` of total degree at most 3.
pub fn random_polynomial(rng: &mut impl Rng) -> Vec<Term> {
    let n_terms = rng.gen_range(1..=4);
    (0..n_terms)
        .map(|_| {
            let deg = rng.gen_range(0..=3u32);
            let j = rng.gen_range(0..=deg);
            Term::new(j, deg - j, gaussian(rng) * 0.5)
        })
        .collect()
}

/// Table over the planted distinct values with random outputs.
pub fn random_table(rng: &mut impl Rng, planted: &Planted) -> Vec<TablePoint> {
    planted
        .distinct_with_levels()
        .into_iter()
        .map(|(z, _)| TablePoint {
            z,
            fz: gaussian(rng),
        })
        .collect()
}

/// Coherent tower of random block-diagonal (not necessarily normal) levels.
pub fn random_block_tower(rng: &mut impl Rng, dims: &[usize]) -> OperatorTower {
    let top = *dims.last().unwrap();
    let mut big = ComplexMatrix::zeros(top, top);
    let mut start = 0;
    for &end in dims {
        for i in start..end {
            for j in start..end {
                big[(i, j)] = gaussian(rng);
            }
        }
        start = end;
    }
    OperatorTower::from_top(IndexChain::new(dims.to_vec()).unwrap(), &big, 1e-10).unwrap()
}

pub fn max_level_diff(a: &OperatorTower, b: &OperatorTower) -> f64 {
    a.levels()
        .iter()
        .zip(b.levels())
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max)
}
