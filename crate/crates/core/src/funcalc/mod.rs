//! Local spectrum and continuous functional calculus of normal towers.
//!
//! For a normal tower every level diagonalizes unitarily, `T_α = U_α D_α U_α*`,
//! and `f(T)` is assembled level by level as `U_α f(D_α) U_α*`. Because each
//! `H_α` reduces `T_β`, the pieces fit together into a coherent tower again.
//! [`polynomial_calculus`] evaluates `p(T, T*)` by plain matrix products and
//! serves as the independent cross-check for polynomial inputs.

mod function;
mod spectrum;

pub use function::{FunctionSpec, NamedFunction, TablePoint, Term};
pub use spectrum::{
    canonical_cmp, dedup_points, hausdorff, local_spectrum, multiset_contained, nearest_within,
    LocalSpectrum,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::schur::schur;
use crate::tower::{validate_tower, OperatorTower, Tolerances};

/// Allowed strictly-upper mass of the Schur factor, relative to `‖T_α‖`.
const DIAGONAL_BACKSTOP: f64 = 1e-8;

/// Unitary diagonalization `m = U diag(eigenvalues) U*` of a normal matrix.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub unitary: ComplexMatrix,
    pub eigenvalues: Vec<Complex64>,
}

impl Diagonalization {
    /// `U diag(values) U*`.
    pub fn rebuild(&self, values: &[Complex64]) -> ComplexMatrix {
        let n = values.len();
        let mut scaled = self.unitary.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= values[j];
            }
        }
        scaled.matmul(&self.unitary.adjoint())
    }
}

/// Diagonalizes a normal matrix through its Schur form. `level` is only used
/// for error reporting.
pub fn diagonalize(m: &ComplexMatrix, level: usize) -> Result<Diagonalization> {
    let s = schur(m).ok_or(Error::EigensolverFailure { level })?;
    let departure = s.departure();
    let bound = DIAGONAL_BACKSTOP * m.spectral_norm();
    if departure > bound {
        return Err(Error::NotNormal {
            level,
            deviation: departure,
            tol: bound,
        });
    }
    Ok(Diagonalization {
        eigenvalues: s.eigenvalues(),
        unitary: s.unitary,
    })
}

pub fn require_normal(tower: &OperatorTower, tol: f64) -> Result<()> {
    let cert = tower.is_normal(tol);
    if cert.normal {
        Ok(())
    } else {
        Err(Error::NotNormal {
            level: cert.worst_level,
            deviation: cert.deviation,
            tol,
        })
    }
}

/// Continuous functional calculus `f(T)`.
///
/// `identity`, `conj` and constants are exact: they return `T`, `T*` and
/// `c·I` without a round trip through the eigenbasis.
pub fn apply_function(
    tower: &OperatorTower,
    f: &FunctionSpec,
    tols: &Tolerances,
) -> Result<OperatorTower> {
    f.validate(tols.eigen)?;
    require_normal(tower, tols.normality)?;

    if let FunctionSpec::Named { name } = f {
        match name {
            NamedFunction::Identity => return Ok(tower.clone()),
            NamedFunction::Conj => return Ok(tower.adjoint()),
            NamedFunction::Const(c) => {
                return Ok(OperatorTower::identity(tower.chain().clone()).scale(*c))
            }
            _ => {}
        }
    }

    let mut levels = Vec::with_capacity(tower.num_levels());
    for (i, m) in tower.levels().iter().enumerate() {
        let diag = diagonalize(m, i + 1)?;
        let values = diag
            .eigenvalues
            .iter()
            .map(|&z| f.eval(z, tols.eigen))
            .collect::<Result<Vec<_>>>()?;
        levels.push(diag.rebuild(&values));
    }
    validate_tower(tower.chain().clone(), levels, 10.0 * tols.coherence)
}

/// `Σ coeff · T^j (T*)^k`, evaluated by direct matrix products.
pub fn polynomial_calculus(
    tower: &OperatorTower,
    terms: &[Term],
    tols: &Tolerances,
) -> Result<OperatorTower> {
    require_normal(tower, tols.normality)?;
    let mut levels = Vec::with_capacity(tower.num_levels());
    for m in tower.levels() {
        let n = m.rows();
        let adj = m.adjoint();
        let max_j = terms.iter().map(|t| t.j).max().unwrap_or(0) as usize;
        let max_k = terms.iter().map(|t| t.k).max().unwrap_or(0) as usize;
        let pows = powers(m, max_j);
        let adj_pows = powers(&adj, max_k);
        let mut acc = ComplexMatrix::zeros(n, n);
        for t in terms {
            let term = pows[t.j as usize].matmul(&adj_pows[t.k as usize]);
            acc = acc.add(&term.scale(t.coeff));
        }
        levels.push(acc);
    }
    validate_tower(tower.chain().clone(), levels, 10.0 * tols.coherence)
}

fn powers(m: &ComplexMatrix, max: usize) -> Vec<ComplexMatrix> {
    let mut out = vec![ComplexMatrix::identity(m.rows())];
    for p in 1..=max {
        let next = out[p - 1].matmul(m);
        out.push(next);
    }
    out
}

/// Self-adjoint / unitary / normal flags, decided from the spectrum and
/// cross-checked by direct norm tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub self_adjoint: bool,
    pub unitary: bool,
    pub normal: bool,
    /// `‖T_α − T_α*‖ ≤ tol` at every level.
    pub direct_self_adjoint: bool,
    /// `‖T_α T_α* − I‖ ≤ tol` at every level.
    pub direct_unitary: bool,
}

impl Classification {
    pub fn routes_agree(&self) -> bool {
        self.self_adjoint == self.direct_self_adjoint && self.unitary == self.direct_unitary
    }
}

pub fn classify(tower: &OperatorTower, tol: f64, tols: &Tolerances) -> Result<Classification> {
    let normal = tower.is_normal(tol).normal;
    let spec = local_spectrum(tower, tols.eigen, tol)?;
    let max_im = spec.merged.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let max_circle = spec
        .merged
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);

    let direct_self_adjoint = tower
        .levels()
        .iter()
        .all(|m| m.sub(&m.adjoint()).spectral_norm() <= tol);
    let direct_unitary = tower.levels().iter().all(|m| {
        m.matmul(&m.adjoint())
            .sub(&ComplexMatrix::identity(m.rows()))
            .spectral_norm()
            <= tol
    });

    Ok(Classification {
        self_adjoint: normal && max_im <= tol,
        unitary: normal && max_circle <= tol,
        normal,
        direct_self_adjoint,
        direct_unitary,
    })
}

/// Outcome of comparing `σ_loc(f(T))` with `f(σ_loc(T))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMappingReport {
    /// Merged local spectrum of `f(T)`.
    pub spectrum_of_image: Vec<Complex64>,
    /// `f` applied to the merged local spectrum of `T`, deduplicated.
    pub image_of_spectrum: Vec<Complex64>,
    pub hausdorff: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn check_spectral_mapping(
    tower: &OperatorTower,
    f: &FunctionSpec,
    tol: f64,
    tols: &Tolerances,
) -> Result<SpectralMappingReport> {
    let image = apply_function(tower, f, tols)?;
    let spectrum_of_image = local_spectrum(&image, tols.eigen, tols.normality)?.merged;

    let base = local_spectrum(tower, tols.eigen, tols.normality)?;
    let mapped = base
        .merged
        .iter()
        .map(|&z| f.eval(z, tols.eigen))
        .collect::<Result<Vec<_>>>()?;
    let image_of_spectrum = dedup_points(mapped.iter(), tols.eigen);

    let distance = hausdorff(&spectrum_of_image, &image_of_spectrum);
    Ok(SpectralMappingReport {
        spectrum_of_image,
        image_of_spectrum,
        hausdorff: distance,
        tol,
        pass: distance <= tol,
    })
}
