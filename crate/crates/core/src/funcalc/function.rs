//! Continuous functions on a finite spectrum.
//!
//! Three presentations: polynomials in `z` and `z̄`, a closed set of named
//! functions, and lookup tables. Arbitrary user functions enter as tables.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectrum::nearest_within;
use crate::error::{Error, Result};

/// `coeff · z^j · z̄^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub j: u32,
    pub k: u32,
    pub coeff: Complex64,
}

impl Term {
    pub fn new(j: u32, k: u32, coeff: Complex64) -> Self {
        Self { j, k, coeff }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeff * z.powu(self.j) * z.conj().powu(self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedFunction {
    Identity,
    Conj,
    Exp,
    Re,
    Im,
    Abs2,
    Const(Complex64),
}

impl NamedFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            NamedFunction::Identity => z,
            NamedFunction::Conj => z.conj(),
            NamedFunction::Exp => z.exp(),
            NamedFunction::Re => Complex64::new(z.re, 0.0),
            NamedFunction::Im => Complex64::new(z.im, 0.0),
            NamedFunction::Abs2 => Complex64::new(z.norm_sqr(), 0.0),
            NamedFunction::Const(c) => c,
        }
    }

    /// `conj ∘ self`, when it is again a named function.
    fn conjugated(&self) -> Option<Self> {
        match *self {
            NamedFunction::Identity => Some(NamedFunction::Conj),
            NamedFunction::Conj => Some(NamedFunction::Identity),
            NamedFunction::Re | NamedFunction::Im | NamedFunction::Abs2 => Some(*self),
            NamedFunction::Const(c) => Some(NamedFunction::Const(c.conj())),
            NamedFunction::Exp => None,
        }
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFunction::Identity => f.write_str("identity"),
            NamedFunction::Conj => f.write_str("conj"),
            NamedFunction::Exp => f.write_str("exp"),
            NamedFunction::Re => f.write_str("re"),
            NamedFunction::Im => f.write_str("im"),
            NamedFunction::Abs2 => f.write_str("abs2"),
            NamedFunction::Const(c) => write!(f, "const:{},{}", c.re, c.im),
        }
    }
}

impl FromStr for NamedFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => NamedFunction::Identity,
            "conj" => NamedFunction::Conj,
            "exp" => NamedFunction::Exp,
            "re" => NamedFunction::Re,
            "im" => NamedFunction::Im,
            "abs2" => NamedFunction::Abs2,
            _ => {
                let body = s.strip_prefix("const:").ok_or_else(|| {
                    Error::InvalidFunction(format!("unknown function name {s:?}"))
                })?;
                let (re, im) = body.split_once(',').unwrap_or((body, "0"));
                let parse = |t: &str| -> Result<f64> {
                    let v: f64 = t
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidFunction(format!("bad constant {s:?}")))?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::InvalidFunction(format!("non-finite constant {s:?}")))
                    }
                };
                NamedFunction::Const(Complex64::new(parse(re)?, parse(im)?))
            }
        })
    }
}

impl Serialize for NamedFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NamedFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TablePoint {
    pub z: Complex64,
    pub fz: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionSpec {
    Polynomial { terms: Vec<Term> },
    Named { name: NamedFunction },
    Table { points: Vec<TablePoint> },
}

impl FunctionSpec {
    pub fn named(name: NamedFunction) -> Self {
        FunctionSpec::Named { name }
    }

    pub fn polynomial(terms: Vec<Term>) -> Self {
        FunctionSpec::Polynomial { terms }
    }

    pub fn table(points: Vec<TablePoint>) -> Self {
        FunctionSpec::Table { points }
    }

    /// Evaluates `g` at every point of `support` and stores the result as a table.
    pub fn tabulate(support: &[Complex64], g: impl Fn(Complex64) -> Complex64) -> Self {
        FunctionSpec::Table {
            points: support
                .iter()
                .map(|&z| TablePoint { z, fz: g(z) })
                .collect(),
        }
    }

    /// Checks finiteness and, for tables, pairwise separation beyond `eig_tol`.
    pub fn validate(&self, eig_tol: f64) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        match self {
            FunctionSpec::Polynomial { terms } => {
                if terms.iter().any(|t| !finite(&t.coeff)) {
                    return Err(Error::InvalidFunction("non-finite coefficient".into()));
                }
            }
            FunctionSpec::Named { name } => {
                if let NamedFunction::Const(c) = name {
                    if !finite(c) {
                        return Err(Error::InvalidFunction("non-finite constant".into()));
                    }
                }
            }
            FunctionSpec::Table { points } => {
                if points.iter().any(|p| !finite(&p.z) || !finite(&p.fz)) {
                    return Err(Error::InvalidFunction("non-finite table entry".into()));
                }
                for (i, p) in points.iter().enumerate() {
                    if let Some(q) = points[i + 1..]
                        .iter()
                        .find(|q| (q.z - p.z).norm() <= eig_tol)
                    {
                        return Err(Error::InvalidFunction(format!(
                            "table points {} and {} are not distinct",
                            p.z, q.z
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Value at a spectral point. Tables are looked up by nearest point
    /// within `eig_tol`.
    pub fn eval(&self, z: Complex64, eig_tol: f64) -> Result<Complex64> {
        match self {
            FunctionSpec::Polynomial { terms } => Ok(terms.iter().map(|t| t.eval(z)).sum()),
            FunctionSpec::Named { name } => Ok(name.eval(z)),
            FunctionSpec::Table { points } => {
                let zs: Vec<Complex64> = points.iter().map(|p| p.z).collect();
                nearest_within(z, &zs, eig_tol)
                    .map(|i| points[i].fz)
                    .ok_or(Error::TableCoverageGap { point: z })
            }
        }
    }

    /// Fails with `TableCoverageGap` if some point of `support` is not covered.
    pub fn check_coverage(&self, support: &[Complex64], eig_tol: f64) -> Result<()> {
        for &z in support {
            self.eval(z, eig_tol)?;
        }
        Ok(())
    }

    /// `conj ∘ f`. Falls back to a table over `support` when no closed form
    /// exists.
    pub fn conjugate(&self, support: &[Complex64], eig_tol: f64) -> Result<Self> {
        match self {
            FunctionSpec::Polynomial { terms } => Ok(FunctionSpec::Polynomial {
                terms: terms
                    .iter()
                    .map(|t| Term::new(t.k, t.j, t.coeff.conj()))
                    .collect(),
            }),
            FunctionSpec::Named { name } => match name.conjugated() {
                Some(n) => Ok(FunctionSpec::Named { name: n }),
                None => self.tabulated_map(support, eig_tol, |w| w.conj()),
            },
            FunctionSpec::Table { points } => Ok(FunctionSpec::Table {
                points: points
                    .iter()
                    .map(|p| TablePoint {
                        z: p.z,
                        fz: p.fz.conj(),
                    })
                    .collect(),
            }),
        }
    }

    /// Pointwise product `f · g`. Two polynomials multiply symbolically;
    /// anything else becomes a table over `support`.
    pub fn product(&self, other: &Self, support: &[Complex64], eig_tol: f64) -> Result<Self> {
        if let (FunctionSpec::Polynomial { terms: a }, FunctionSpec::Polynomial { terms: b }) =
            (self, other)
        {
            let mut out: Vec<Term> = Vec::new();
            for s in a {
                for t in b {
                    let (j, k) = (s.j + t.j, s.k + t.k);
                    let coeff = s.coeff * t.coeff;
                    match out.iter_mut().find(|u| u.j == j && u.k == k) {
                        Some(u) => u.coeff += coeff,
                        None => out.push(Term::new(j, k, coeff)),
                    }
                }
            }
            return Ok(FunctionSpec::Polynomial { terms: out });
        }
        let mut points = Vec::with_capacity(support.len());
        for &z in support {
            points.push(TablePoint {
                z,
                fz: self.eval(z, eig_tol)? * other.eval(z, eig_tol)?,
            });
        }
        Ok(FunctionSpec::Table { points })
    }

    fn tabulated_map(
        &self,
        support: &[Complex64],
        eig_tol: f64,
        g: impl Fn(Complex64) -> Complex64,
    ) -> Result<Self> {
        let mut points = Vec::with_capacity(support.len());
        for &z in support {
            points.push(TablePoint {
                z,
                fz: g(self.eval(z, eig_tol)?),
            });
        }
        Ok(FunctionSpec::Table { points })
    }

    pub fn as_polynomial(&self) -> Option<&[Term]> {
        match self {
            FunctionSpec::Polynomial { terms } => Some(terms),
            _ => None,
        }
    }
}
