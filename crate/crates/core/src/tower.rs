//! Nested coordinate spaces and coherent operator towers.
//!
//! Level `α` of an [`IndexChain`] is the span of the first `d_α` coordinate
//! vectors, so the chain `H_1 ⊆ H_2 ⊆ … ⊆ H_N` is fixed by its dimensions.
//! An [`OperatorTower`] holds one square matrix per level. It is coherent
//! when, for every `α ≤ β`, level `β` is block diagonal over the split
//! `(first d_α coordinates) ⊕ (rest)` and its top-left block is level `α`.
//! That is exactly the statement that `H_α` reduces `T_β` and `T_β|H_α = T_α`.
//!
//! Levels are 1-based throughout the public API.

use num_complex::Complex64;

use crate::error::{CoherenceKind, Error, Result};
use crate::matrix::ComplexMatrix;

/// Default cap on the number of levels.
pub const DEFAULT_MAX_LEVELS: usize = 64;

/// Tolerances shared by the tower, calculus and character code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Coherence / reduction checks (absolute, entrywise).
    pub coherence: f64,
    /// Norm identities (relative).
    pub numeric: f64,
    /// Eigenvalue matching and deduplication (absolute).
    pub eigen: f64,
    /// Commutator-norm bound for normality (absolute).
    pub normality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coherence: 1e-10,
            numeric: 1e-9,
            eigen: 1e-8,
            normality: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexChain {
    dims: Vec<usize>,
}

impl IndexChain {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_max_levels(dims, DEFAULT_MAX_LEVELS)
    }

    pub fn with_max_levels(dims: Vec<usize>, max_levels: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidChain("no levels".into()));
        }
        if dims.len() > max_levels {
            return Err(Error::InvalidChain(format!(
                "{} levels exceeds the maximum of {max_levels}",
                dims.len()
            )));
        }
        if dims[0] == 0 {
            return Err(Error::InvalidChain(
                "level dimensions must be positive".into(),
            ));
        }
        if let Some(w) = dims.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidChain(format!(
                "dimensions must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { dims })
    }

    /// Chain with dimensions `1, 2, …, n`.
    pub fn unit_steps(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of level `level` (1-based).
    pub fn dim(&self, level: usize) -> Result<usize> {
        self.check_level(level)?;
        Ok(self.dims[level - 1])
    }

    pub fn top_dim(&self) -> usize {
        *self.dims.last().expect("chain is nonempty")
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.dims.len() {
            Err(Error::LevelOutOfRange {
                level,
                max: self.dims.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Per-level operator norms `p_α(T) = ‖T_α‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormVector {
    pub values: Vec<f64>,
}

impl SeminormVector {
    /// `values[α] ≤ values[β] + tol` for every `α ≤ β`.
    pub fn is_upward_filtered(&self, tol: f64) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(a, &va)| self.values[a..].iter().all(|&vb| va <= vb + tol))
    }
}

/// Worst-level report from [`OperatorTower::is_normal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityCertificate {
    pub normal: bool,
    /// 1-based level with the largest commutator norm.
    pub worst_level: usize,
    /// `‖T_α T_α* − T_α* T_α‖` at that level.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTower {
    chain: IndexChain,
    levels: Vec<ComplexMatrix>,
    /// Tolerance the tower was validated against.
    tol: f64,
}

/// Checks both tower invariants and returns the tower on success.
pub fn validate_tower(
    chain: IndexChain,
    raw_levels: Vec<ComplexMatrix>,
    tol: f64,
) -> Result<OperatorTower> {
    if raw_levels.len() != chain.len() {
        return Err(Error::DimensionMismatch(format!(
            "chain has {} levels but {} matrices were given",
            chain.len(),
            raw_levels.len()
        )));
    }
    for (i, (m, &d)) in raw_levels.iter().zip(chain.dims()).enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "level {} must be {d}x{d}, got {}x{}",
                i + 1,
                m.rows(),
                m.cols()
            )));
        }
        if let Some(idx) = m
            .as_slice()
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFiniteEntry {
                level: i + 1,
                row: idx / d,
                col: idx % d,
            });
        }
    }
    check_coherence(&chain, &raw_levels, tol)?;
    Ok(OperatorTower {
        chain,
        levels: raw_levels,
        tol,
    })
}

fn check_coherence(chain: &IndexChain, levels: &[ComplexMatrix], tol: f64) -> Result<()> {
    let dims = chain.dims();
    for a in 0..levels.len() {
        let da = dims[a];
        for b in (a + 1)..levels.len() {
            let db = dims[b];
            let big = &levels[b];

            let mut restriction = 0.0_f64;
            for i in 0..da {
                for j in 0..da {
                    restriction = restriction.max((big[(i, j)] - levels[a][(i, j)]).norm());
                }
            }
            if restriction > tol {
                return Err(Error::CoherenceViolation {
                    alpha: a + 1,
                    beta: b + 1,
                    deviation: restriction,
                    kind: CoherenceKind::Restriction,
                });
            }

            let mut reduction = 0.0_f64;
            for i in 0..da {
                for j in da..db {
                    reduction = reduction.max(big[(i, j)].norm()).max(big[(j, i)].norm());
                }
            }
            if reduction > tol {
                return Err(Error::CoherenceViolation {
                    alpha: a + 1,
                    beta: b + 1,
                    deviation: reduction,
                    kind: CoherenceKind::Reduction,
                });
            }
        }
    }
    Ok(())
}

impl OperatorTower {
    /// Builds every level as the leading truncation of `top` and validates.
    pub fn from_top(chain: IndexChain, top: &ComplexMatrix, tol: f64) -> Result<Self> {
        if top.rows() != chain.top_dim() || !top.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "top level must be {0}x{0}, got {1}x{2}",
                chain.top_dim(),
                top.rows(),
                top.cols()
            )));
        }
        let levels = chain
            .dims()
            .iter()
            .map(|&d| top.block(0, d, 0, d))
            .collect();
        validate_tower(chain, levels, tol)
    }

    /// Diagonal tower with `diag.len() == chain.top_dim()`.
    pub fn diagonal(chain: IndexChain, diag: &[Complex64]) -> Result<Self> {
        if diag.len() != chain.top_dim() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal needs {} entries, got {}",
                chain.top_dim(),
                diag.len()
            )));
        }
        let top = ComplexMatrix::from_diagonal(diag);
        Self::from_top(chain, &top, 0.0)
    }

    pub fn identity(chain: IndexChain) -> Self {
        let levels = chain
            .dims()
            .iter()
            .map(|&d| ComplexMatrix::identity(d))
            .collect();
        Self {
            chain,
            levels,
            tol: 0.0,
        }
    }

    pub fn zeros(chain: IndexChain) -> Self {
        let levels = chain
            .dims()
            .iter()
            .map(|&d| ComplexMatrix::zeros(d, d))
            .collect();
        Self {
            chain,
            levels,
            tol: 0.0,
        }
    }

    pub fn chain(&self) -> &IndexChain {
        &self.chain
    }

    pub fn levels(&self) -> &[ComplexMatrix] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> &ComplexMatrix {
        self.levels.last().expect("tower is nonempty")
    }

    /// Level `level` (1-based) as an owned matrix.
    pub fn restrict(&self, level: usize) -> Result<ComplexMatrix> {
        self.chain.check_level(level)?;
        Ok(self.levels[level - 1].clone())
    }

    /// Borrowing variant of [`restrict`](Self::restrict).
    pub fn level(&self, level: usize) -> Result<&ComplexMatrix> {
        self.chain.check_level(level)?;
        Ok(&self.levels[level - 1])
    }

    fn same_chain(&self, other: &Self) -> Result<()> {
        if self.chain == other.chain {
            Ok(())
        } else {
            Err(Error::ChainMismatch)
        }
    }

    /// Wraps levelwise output of an algebra operation. In debug builds the
    /// result is re-validated against `tol`.
    fn derived(&self, levels: Vec<ComplexMatrix>, tol: f64) -> Self {
        debug_assert!(
            check_coherence(&self.chain, &levels, tol.max(1e-12)).is_ok(),
            "algebra produced an incoherent tower"
        );
        Self {
            chain: self.chain.clone(),
            levels,
            tol,
        }
    }

    fn scale_hint(&self) -> f64 {
        1.0 + self.levels.iter().map(|m| m.max_abs()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        let levels = self.levels.iter().map(|m| m.adjoint()).collect();
        self.derived(levels, self.tol)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_chain(other)?;
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(self.derived(levels, self.tol + other.tol))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_chain(other)?;
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(self.derived(levels, self.tol + other.tol))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let levels = self.levels.iter().map(|m| m.scale(c)).collect();
        self.derived(levels, self.tol * c.norm().max(1.0))
    }

    /// Levelwise product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_chain(other)?;
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.matmul(b))
            .collect();
        // entrywise error of a product of approximately coherent levels
        let d = self.chain.top_dim() as f64;
        let tol = d * (self.tol * other.scale_hint() + other.tol * self.scale_hint());
        Ok(self.derived(levels, tol))
    }

    pub fn seminorms(&self) -> SeminormVector {
        SeminormVector {
            values: self.levels.iter().map(|m| m.spectral_norm()).collect(),
        }
    }

    /// Normality check `‖T_α T_α* − T_α* T_α‖ ≤ tol` at every level.
    pub fn is_normal(&self, tol: f64) -> NormalityCertificate {
        let mut worst_level = 1;
        let mut deviation = 0.0_f64;
        for (i, m) in self.levels.iter().enumerate() {
            let adj = m.adjoint();
            let comm = m.matmul(&adj).sub(&adj.matmul(m));
            let dev = comm.spectral_norm();
            if dev > deviation {
                deviation = dev;
                worst_level = i + 1;
            }
        }
        NormalityCertificate {
            normal: deviation <= tol,
            worst_level,
            deviation,
        }
    }

    /// `‖Q T_β − T_β Q‖` for the projection `Q` onto the first `d_α`
    /// coordinates. Zero for a coherent tower.
    pub fn projection_commutator(&self, alpha: usize, beta: usize) -> Result<f64> {
        let da = self.chain.dim(alpha)?;
        let big = self.level(beta)?;
        let db = big.rows();
        let mut q = ComplexMatrix::zeros(db, db);
        for i in 0..da.min(db) {
            q[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(q.matmul(big).sub(&big.matmul(&q)).spectral_norm())
    }
}
