//! Grid model of the function algebras `C(ℝ) = lim C([-n, n])` and
//! `C([0, ∞))` with seminorms taken over `[1/2, n]`.
//!
//! A function is stored by its samples on the finest (level `N`) grid. Level
//! grids are nested: every level-`n` grid point is a level-`n+1` grid point,
//! so a level seminorm is a maximum over a contiguous slice of the samples.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Left endpoint of every half-line interval `[1/2, n]`.
pub const HALFLINE_LEFT: f64 = 0.5;

pub const DEFAULT_SAMPLES_PER_UNIT: usize = 1000;

const MIN_SAMPLES_PER_UNIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMode {
    /// Level `n` is `[-n, n]`.
    Symmetric,
    /// Level `n` is `[1/2, n]`.
    Halfline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalChain {
    mode: IntervalMode,
    levels: usize,
    samples_per_unit: usize,
    /// Level-`N` grid, ascending.
    points: Vec<f64>,
}

impl IntervalChain {
    pub fn new(mode: IntervalMode, levels: usize, samples_per_unit: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidChain("need at least one level".into()));
        }
        if samples_per_unit < MIN_SAMPLES_PER_UNIT {
            return Err(Error::InvalidChain(format!(
                "samples_per_unit must be at least {MIN_SAMPLES_PER_UNIT}, got {samples_per_unit}"
            )));
        }
        let spu = samples_per_unit as f64;
        let top = (levels * samples_per_unit) as i64;
        let points = match mode {
            IntervalMode::Symmetric => (-top..=top).map(|k| k as f64 / spu).collect(),
            IntervalMode::Halfline => {
                let first = (samples_per_unit / 2 + 1) as i64;
                std::iter::once(HALFLINE_LEFT)
                    .chain((first..=top).map(|k| k as f64 / spu))
                    .collect()
            }
        };
        Ok(Self {
            mode,
            levels,
            samples_per_unit,
            points,
        })
    }

    pub fn mode(&self) -> IntervalMode {
        self.mode
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn samples_per_unit(&self) -> usize {
        self.samples_per_unit
    }

    /// The level-`N` grid.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Endpoints of the level-`n` interval.
    pub fn interval(&self, n: usize) -> Result<(f64, f64)> {
        self.check_level(n)?;
        Ok(match self.mode {
            IntervalMode::Symmetric => (-(n as f64), n as f64),
            IntervalMode::Halfline => (HALFLINE_LEFT, n as f64),
        })
    }

    /// Index range of the level-`n` grid inside [`points`](Self::points).
    pub fn level_range(&self, n: usize) -> Result<Range<usize>> {
        self.check_level(n)?;
        let spu = self.samples_per_unit;
        Ok(match self.mode {
            IntervalMode::Symmetric => {
                let centre = self.levels * spu;
                (centre - n * spu)..(centre + n * spu + 1)
            }
            IntervalMode::Halfline => {
                let first = spu / 2 + 1;
                0..(n * spu - first + 2)
            }
        })
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.levels {
            Err(Error::LevelOutOfRange {
                level: n,
                max: self.levels,
            })
        } else {
            Ok(())
        }
    }

    /// Point evaluation `ν_x`, tagged with the smallest level whose interval
    /// contains `x`.
    pub fn evaluation_character(&self, x: f64) -> Result<EvaluationCharacter> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain { x });
        }
        let needed = match self.mode {
            IntervalMode::Symmetric => x.abs(),
            IntervalMode::Halfline => {
                if x < HALFLINE_LEFT {
                    return Err(Error::OutOfDomain { x });
                }
                x
            }
        };
        let min_level = (needed.ceil() as usize).max(1);
        if min_level > self.levels {
            return Err(Error::OutOfDomain { x });
        }
        Ok(EvaluationCharacter { min_level, x })
    }

    fn nearest_index(&self, x: f64) -> usize {
        let pts = &self.points;
        let i = pts.partition_point(|&t| t < x);
        if i == 0 {
            0
        } else if i == pts.len() {
            pts.len() - 1
        } else if (pts[i] - x).abs() < (x - pts[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }
}

/// Evaluation at a point of the level-`min_level` interval.
///
/// Applied to a grid function it reads the nearest sample. For an `L`-Lipschitz
/// function the error is at most `L / (2 · samples_per_unit)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationCharacter {
    pub min_level: usize,
    pub x: f64,
}

impl EvaluationCharacter {
    pub fn apply(&self, f: &GridFunction) -> Complex64 {
        f.values[f.chain.nearest_index(self.x)]
    }
}

/// Built-in generators, also accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// `t ↦ t`
    Identity,
    /// `t` clamped to `[-1, 1]`
    Clamp1,
    /// `t ↦ 1 / (2 + t ℓ²)`
    Gl(u32),
    Const(Complex64),
    Exp,
}

impl Generator {
    pub fn eval(&self, t: f64) -> Complex64 {
        match *self {
            Generator::Identity => Complex64::new(t, 0.0),
            Generator::Clamp1 => Complex64::new(t.clamp(-1.0, 1.0), 0.0),
            Generator::Gl(l) => Complex64::new(g_ell(l, t), 0.0),
            Generator::Const(c) => c,
            Generator::Exp => Complex64::new(t.exp(), 0.0),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Identity => f.write_str("identity"),
            Generator::Clamp1 => f.write_str("clamp1"),
            Generator::Gl(l) => write!(f, "gl:{l}"),
            Generator::Const(c) => write!(f, "const:{},{}", c.re, c.im),
            Generator::Exp => f.write_str("exp"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFunction(format!("unknown generator {s:?}"));
        Ok(match s {
            "identity" => Generator::Identity,
            "clamp1" => Generator::Clamp1,
            "exp" => Generator::Exp,
            _ => {
                if let Some(l) = s.strip_prefix("gl:") {
                    let l: u32 = l.trim().parse().map_err(|_| bad())?;
                    if l == 0 {
                        return Err(bad());
                    }
                    Generator::Gl(l)
                } else if let Some(body) = s.strip_prefix("const:") {
                    let (re, im) = body.split_once(',').unwrap_or((body, "0"));
                    let re: f64 = re.trim().parse().map_err(|_| bad())?;
                    let im: f64 = im.trim().parse().map_err(|_| bad())?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(bad());
                    }
                    Generator::Const(Complex64::new(re, im))
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

/// `g_ℓ(t) = 1 / (2 + t ℓ²)`.
pub fn g_ell(l: u32, t: f64) -> f64 {
    let l = l as f64;
    1.0 / (2.0 + t * l * l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    chain: IntervalChain,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(chain: IntervalChain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != chain.points.len() {
            return Err(Error::DimensionMismatch(format!(
                "grid has {} points, got {} samples",
                chain.points.len(),
                values.len()
            )));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Parse("non-finite grid sample".into()));
        }
        Ok(Self { chain, values })
    }

    pub fn from_fn(chain: &IntervalChain, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = chain.points.iter().map(|&t| f(t)).collect();
        Self::new(chain.clone(), values)
    }

    pub fn generate(chain: &IntervalChain, g: Generator) -> Result<Self> {
        Self::from_fn(chain, |t| g.eval(t))
    }

    pub fn chain(&self) -> &IntervalChain {
        &self.chain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.chain != other.chain {
            return Err(Error::ChainMismatch);
        }
        Ok(Self {
            chain: self.chain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn conj(&self) -> Self {
        Self {
            chain: self.chain.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `p_n(f)`: max modulus over the level-`n` grid.
    pub fn seminorm_p(&self, n: usize) -> Result<f64> {
        let range = self.chain.level_range(n)?;
        Ok(self.values[range]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

/// `π_n(f) = π_n(g)`, i.e. `p_n(f − g) ≤ tol`.
pub fn quotient_equal(f: &GridFunction, g: &GridFunction, n: usize, tol: f64) -> Result<bool> {
    Ok(f.sub(g)?.seminorm_p(n)? <= tol)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GridFunctionFile {
    mode: IntervalMode,
    #[serde(rename = "N")]
    levels: usize,
    samples_per_unit: usize,
    values: Vec<Complex64>,
}

impl Serialize for GridFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridFunctionFile {
            mode: self.chain.mode,
            levels: self.chain.levels,
            samples_per_unit: self.chain.samples_per_unit,
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GridFunctionFile::deserialize(d)?;
        let chain = IntervalChain::new(raw.mode, raw.levels, raw.samples_per_unit)
            .map_err(serde::de::Error::custom)?;
        GridFunction::new(chain, raw.values).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub l: u32,
    pub n: usize,
    /// Grid seminorm `p_n(g_ℓ)`.
    pub p_n: f64,
    /// Closed form `2 / (4 + ℓ²)`.
    pub closed_form: f64,
    /// Radius `1/ℓ` of the seminorm ball.
    pub bound: f64,
    /// `Φ(g_ℓ) = g_ℓ(0)`.
    pub phi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub rows: Vec<WitnessRow>,
    /// Whether evaluation at 0 is induced by some level (it never is).
    pub phi_factors_through_level: bool,
    pub pass: bool,
}

/// Grid tolerance for matching `p_n(g_ℓ)` against its closed form.
pub const WITNESS_TOL: f64 = 1e-6;

/// Shows that `Φ(f) = f(0)` is discontinuous on the half-line algebra: every
/// seminorm ball of radius `1/ℓ` contains `g_ℓ`, while `Φ(g_ℓ) = 1/2`.
pub fn noncontinuity_witness(chain: &IntervalChain, max_l: u32) -> Result<WitnessReport> {
    if chain.mode != IntervalMode::Halfline {
        return Err(Error::InvalidChain(
            "the witness needs the half-line chain".into(),
        ));
    }
    let mut rows = Vec::new();
    for l in 1..=max_l {
        let g = GridFunction::generate(chain, Generator::Gl(l))?;
        // 0 is outside every level interval; Φ is evaluated from the formula
        let phi = g_ell(l, 0.0);
        let lf = l as f64;
        let closed_form = 2.0 / (4.0 + lf * lf);
        let bound = 1.0 / lf;
        for n in 1..=chain.levels {
            let p_n = g.seminorm_p(n)?;
            rows.push(WitnessRow {
                l,
                n,
                p_n,
                closed_form,
                bound,
                phi,
                pass: p_n < bound && (p_n - closed_form).abs() <= WITNESS_TOL && phi == 0.5,
            });
        }
    }
    let phi_factors_through_level = chain.evaluation_character(0.0).is_ok();
    let pass = !phi_factors_through_level && rows.iter().all(|r| r.pass);
    Ok(WitnessReport {
        rows,
        phi_factors_through_level,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    /// `p_1(f − g)` for `f = t`, `g = clamp(t, -1, 1)`.
    pub p1_difference: f64,
    pub f_at_2: f64,
    pub g_at_2: f64,
    /// Smallest level through which evaluation at 2 factors.
    pub eval_2_min_level: usize,
    /// `π_n(f) = π_n(g)` for `n = 1..N`.
    pub equal_by_level: Vec<bool>,
    pub pass: bool,
}

/// Two functions agreeing on `[-1, 1]` but not at 2: evaluation at 2 cannot
/// factor through the first quotient.
pub fn quotient_counterexample(chain: &IntervalChain, tol: f64) -> Result<QuotientReport> {
    if chain.mode != IntervalMode::Symmetric {
        return Err(Error::InvalidChain(
            "the counterexample needs the symmetric chain".into(),
        ));
    }
    let f = GridFunction::generate(chain, Generator::Identity)?;
    let g = GridFunction::generate(chain, Generator::Clamp1)?;
    let p1 = f.sub(&g)?.seminorm_p(1)?;
    let nu = chain.evaluation_character(2.0)?;
    let (f2, g2) = (nu.apply(&f).re, nu.apply(&g).re);
    let equal_by_level = (1..=chain.levels)
        .map(|n| quotient_equal(&f, &g, n, tol))
        .collect::<Result<Vec<_>>>()?;
    let pass = p1 <= tol && (f2 - g2).abs() == 1.0 && nu.min_level == 2;
    Ok(QuotientReport {
        p1_difference: p1,
        f_at_2: f2,
        g_at_2: g2,
        eval_2_min_level: nu.min_level,
        equal_by_level,
        pass,
    })
}
