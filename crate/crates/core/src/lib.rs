//! Finite models of locally Hilbert spaces and locally bounded operators.
//!
//! A locally bounded operator on a union of nested Hilbert spaces is modelled
//! as a coherent tower of matrices, one per level ([`tower`]). On top of that:
//! local spectra and the continuous functional calculus for normal towers
//! ([`funcalc`]), characters and the Gelfand-type transform of the algebra a
//! normal tower generates ([`character`]), and grid-sampled function algebras
//! with the classic counterexamples about multiplicative functionals
//! ([`function_algebra`]).

pub mod character;
pub mod cli;
pub mod error;
pub mod funcalc;
pub mod function_algebra;
mod hermitian;
pub mod io;
pub mod matrix;
pub mod schur;
pub mod tower;

pub use character::{AlgebraElement, Character, CharacterSpace};
pub use error::{Error, Result};
pub use funcalc::{FunctionSpec, LocalSpectrum, NamedFunction, TablePoint, Term};
pub use matrix::ComplexMatrix;
pub use tower::{validate_tower, IndexChain, OperatorTower, SeminormVector, Tolerances};

/// Values below this magnitude are compared absolutely in [`rel_close`].
pub const REL_FLOOR: f64 = 1e-6;

/// `|a − b| ≤ rel · max(|a|, |b|, REL_FLOOR)`.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(REL_FLOOR)
}
