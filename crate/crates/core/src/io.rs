//! Structured-text interchange: towers, function specs, characters.
//!
//! Towers are `{"dims": [...], "levels": [[[re, im], ...], ...]}` with each
//! level a row-major list of `[re, im]` pairs. Output is compact JSON whose
//! floats use shortest round-trip formatting, so parse ∘ serialize is the
//! identity on anything this module emits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::{FunctionSpec, NamedFunction};
use crate::matrix::ComplexMatrix;
use crate::tower::{validate_tower, IndexChain, OperatorTower};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFile {
    dims: Vec<usize>,
    levels: Vec<Vec<Complex64>>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("in-memory values serialize")
}

/// Parses and validates a tower at coherence tolerance `coh_tol`.
pub fn parse_tower(text: &str, coh_tol: f64) -> Result<OperatorTower> {
    let raw: TowerFile = from_json(text)?;
    let chain = IndexChain::new(raw.dims)?;
    if raw.levels.len() != chain.len() {
        return Err(Error::DimensionMismatch(format!(
            "chain has {} levels but {} matrices were given",
            chain.len(),
            raw.levels.len()
        )));
    }
    let mut levels = Vec::with_capacity(raw.levels.len());
    for (i, (entries, &d)) in raw.levels.into_iter().zip(chain.dims()).enumerate() {
        let m = ComplexMatrix::new(d, d, entries).map_err(|e| match e {
            Error::NonFiniteEntry { row, col, .. } => Error::NonFiniteEntry {
                level: i + 1,
                row,
                col,
            },
            Error::DimensionMismatch(msg) => {
                Error::DimensionMismatch(format!("level {}: {msg}", i + 1))
            }
            other => other,
        })?;
        levels.push(m);
    }
    validate_tower(chain, levels, coh_tol)
}

pub fn serialize_tower(tower: &OperatorTower) -> String {
    to_json(&TowerFile {
        dims: tower.chain().dims().to_vec(),
        levels: tower
            .levels()
            .iter()
            .map(|m| m.as_slice().to_vec())
            .collect(),
    })
}

pub fn parse_function(text: &str) -> Result<FunctionSpec> {
    from_json(text)
}

pub fn serialize_function(f: &FunctionSpec) -> String {
    to_json(f)
}

/// Inline function argument: `named:<name>` (e.g. `named:exp`,
/// `named:const:1,0`) or a JSON object.
pub fn parse_function_inline(arg: &str) -> Result<FunctionSpec> {
    let arg = arg.trim();
    if let Some(name) = arg.strip_prefix("named:") {
        let name: NamedFunction = name.parse()?;
        return Ok(FunctionSpec::named(name));
    }
    if arg.starts_with('{') {
        return parse_function(arg);
    }
    Err(Error::InvalidFunction(format!(
        "expected named:<name> or a JSON function spec, got {arg:?}"
    )))
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    to_json(value)
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    from_json(text)
}
