//! Characters of the commutative algebra generated by a normal tower, and the
//! Gelfand-type transform.
//!
//! Every character of `A[T]` factors through some level and is evaluation at
//! a point of `σ(T_α)`. A character is therefore stored as the spectral value
//! together with the smallest level through which it factors; moving it to a
//! higher level changes nothing but the tag. Repeated eigenvalues give a
//! single character.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::{
    apply_function, canonical_cmp, diagonalize, local_spectrum, nearest_within,
    polynomial_calculus, require_normal, FunctionSpec, LocalSpectrum, Term,
};
use crate::rel_close;
use crate::tower::{OperatorTower, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub min_level: usize,
    pub value: Complex64,
}

/// An element `f(T)` of `A[T]`, presented by its defining function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub expr: FunctionSpec,
}

impl AlgebraElement {
    pub fn new(expr: FunctionSpec) -> Self {
        Self { expr }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandValue {
    pub character: Character,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryLevel {
    pub level: usize,
    /// Operator seminorm of the materialized element.
    pub p: f64,
    /// Sup of the Gelfand transform over characters factoring through the level.
    pub q: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub levels: Vec<IsometryLevel>,
    pub rel_tol: f64,
    pub pass: bool,
}

/// Character space of a normal tower, with the local spectrum it was built from.
#[derive(Debug, Clone)]
pub struct CharacterSpace {
    spectrum: LocalSpectrum,
    characters: Vec<Character>,
}

impl CharacterSpace {
    pub fn new(tower: &OperatorTower, tols: &Tolerances) -> Result<Self> {
        require_normal(tower, tols.normality)?;
        let spectrum = local_spectrum(tower, tols.eigen, tols.normality)?;
        let mut characters: Vec<Character> = spectrum
            .merged
            .iter()
            .map(|&value| Character {
                min_level: spectrum
                    .first_level(value)
                    .expect("merged points come from some level"),
                value,
            })
            .collect();
        characters.sort_by(|a, b| canonical_cmp(&a.value, &b.value));
        Ok(Self {
            spectrum,
            characters,
        })
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn spectrum(&self) -> &LocalSpectrum {
        &self.spectrum
    }

    fn num_levels(&self) -> usize {
        self.spectrum.per_level.len()
    }

    fn check_known(&self, phi: &Character) -> Result<()> {
        let values: Vec<Complex64> = self.characters.iter().map(|c| c.value).collect();
        match nearest_within(phi.value, &values, self.spectrum.tol) {
            Some(i) if self.characters[i].min_level == phi.min_level => Ok(()),
            _ => Err(Error::UnknownCharacter {
                min_level: phi.min_level,
                value: phi.value,
            }),
        }
    }

    /// Whether `phi` factors through level `alpha`.
    pub fn factor_level(&self, phi: &Character, alpha: usize) -> Result<bool> {
        if alpha == 0 || alpha > self.num_levels() {
            return Err(Error::LevelOutOfRange {
                level: alpha,
                max: self.num_levels(),
            });
        }
        self.check_known(phi)?;
        Ok(self.spectrum.contains_at(alpha, phi.value))
    }

    /// `Γ(a)(Φ) = f(λ)` for every character `Φ` at `λ`.
    pub fn gelfand(&self, a: &AlgebraElement) -> Result<Vec<GelfandValue>> {
        let tol = self.spectrum.tol;
        a.expr.check_coverage(&self.spectrum.merged, tol)?;
        self.characters
            .iter()
            .map(|&character| {
                Ok(GelfandValue {
                    character,
                    value: a.expr.eval(character.value, tol)?,
                })
            })
            .collect()
    }

    pub fn evaluate(&self, phi: &Character, a: &AlgebraElement) -> Result<Complex64> {
        self.check_known(phi)?;
        a.expr.eval(phi.value, self.spectrum.tol)
    }

    /// Membership of `a` in the maximal ideal `Ker Φ`.
    pub fn kernel_contains(&self, phi: &Character, a: &AlgebraElement, tol: f64) -> Result<bool> {
        Ok(self.evaluate(phi, a)?.norm() <= tol)
    }

    pub fn local_isometry_check(
        &self,
        tower: &OperatorTower,
        a: &AlgebraElement,
        rel_tol: f64,
        tols: &Tolerances,
    ) -> Result<IsometryReport> {
        let gamma = self.gelfand(a)?;
        let materialized = apply_function(tower, &a.expr, tols)?;
        let p_values = materialized.seminorms().values;
        let mut levels = Vec::with_capacity(p_values.len());
        for (i, &p) in p_values.iter().enumerate() {
            let level = i + 1;
            let q = gamma
                .iter()
                .filter(|g| self.spectrum.contains_at(level, g.character.value))
                .map(|g| g.value.norm())
                .fold(0.0, f64::max);
            levels.push(IsometryLevel {
                level,
                p,
                q,
                deviation: (p - q).abs(),
            });
        }
        let pass = levels.iter().all(|l| rel_close(l.p, l.q, rel_tol));
        Ok(IsometryReport {
            levels,
            rel_tol,
            pass,
        })
    }
}

pub fn enumerate_characters(tower: &OperatorTower, tols: &Tolerances) -> Result<Vec<Character>> {
    Ok(CharacterSpace::new(tower, tols)?.characters)
}

pub fn factor_level(
    tower: &OperatorTower,
    phi: &Character,
    alpha: usize,
    tols: &Tolerances,
) -> Result<bool> {
    CharacterSpace::new(tower, tols)?.factor_level(phi, alpha)
}

pub fn gelfand(
    tower: &OperatorTower,
    a: &AlgebraElement,
    tols: &Tolerances,
) -> Result<Vec<GelfandValue>> {
    CharacterSpace::new(tower, tols)?.gelfand(a)
}

pub fn local_isometry_check(
    tower: &OperatorTower,
    a: &AlgebraElement,
    rel_tol: f64,
    tols: &Tolerances,
) -> Result<IsometryReport> {
    CharacterSpace::new(tower, tols)?.local_isometry_check(tower, a, rel_tol, tols)
}

pub fn kernel_contains(
    tower: &OperatorTower,
    phi: &Character,
    a: &AlgebraElement,
    tol: f64,
    tols: &Tolerances,
) -> Result<bool> {
    CharacterSpace::new(tower, tols)?.kernel_contains(phi, a, tol)
}

/// Gelfand value of a polynomial element through the eigenbasis: materialize
/// `p(T_α, T_α*)` at `α = Φ.min_level` by matrix products, conjugate into the
/// basis diagonalizing `T_α`, and read the diagonal entry paired with `Φ`.
pub fn gelfand_via_diagonalization(
    tower: &OperatorTower,
    terms: &[Term],
    phi: &Character,
    tols: &Tolerances,
) -> Result<Complex64> {
    let level = phi.min_level;
    let poly = polynomial_calculus(tower, terms, tols)?;
    let p_level = poly.level(level)?;
    let diag = diagonalize(tower.level(level)?, level)?;
    let idx = nearest_within(phi.value, &diag.eigenvalues, tols.eigen).ok_or(
        Error::UnknownCharacter {
            min_level: phi.min_level,
            value: phi.value,
        },
    )?;
    let u = &diag.unitary;
    let in_basis = u.adjoint().matmul(p_level).matmul(u);
    Ok(in_basis[(idx, idx)])
}
