//! Command-line front end.
//!
//! `loctower <subcommand> [input] [--fn SPEC] [--level K] [--tol X]
//! [--coh-tol X] [--eig-tol X] [--out PATH] [--pretty]`
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on validation or math
//! errors (with a `{code, message, context}` object on stdout).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::character::{AlgebraElement, CharacterSpace};
use crate::error::Error;
use crate::funcalc::{
    apply_function, check_spectral_mapping, classify, local_spectrum, FunctionSpec, NamedFunction,
};
use crate::function_algebra::{
    noncontinuity_witness, quotient_counterexample, IntervalChain, IntervalMode,
};
use crate::io;
use crate::tower::{IndexChain, OperatorTower, Tolerances};

const DEFAULT_NORMALITY_TOL: f64 = 1e-9;
const DEFAULT_REPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Validate,
    Spectrum,
    Apply,
    Classify,
    Gelfand,
    Characters,
    Isometry,
    Specmap,
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    NoncontinuousCharacter,
    QuotientCounterexample,
    NumberMatrix,
    ExpCalculus,
}

#[derive(Debug, Parser)]
#[command(
    name = "loctower",
    version,
    about = "Coherent operator towers, local spectra and functional calculus"
)]
pub struct Command {
    #[arg(value_enum)]
    pub subcommand: Subcommand,
    /// Tower file, or the demo name for `demo`.
    pub input: Option<String>,
    /// Function: `named:<name>`, inline JSON, or a path to a JSON file.
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long)]
    pub level: Option<usize>,
    /// Normality tolerance; also the pass threshold for `specmap` and `isometry`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "coh-tol", default_value_t = 1e-10)]
    pub coh_tol: f64,
    #[arg(long = "eig-tol", default_value_t = 1e-8)]
    pub eig_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
    /// Largest ℓ for the non-continuity demo.
    #[arg(long = "max-l", default_value_t = 10)]
    pub max_l: u32,
    /// Number of interval levels for the function-algebra demos.
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    #[arg(long = "samples-per-unit", default_value_t = crate::function_algebra::DEFAULT_SAMPLES_PER_UNIT)]
    pub samples_per_unit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = match Command::try_parse_from(argv) {
        Ok(cmd) => cmd,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(e.to_string())
                }
                _ => Outcome::usage(e.to_string()),
            }
        }
    };
    match execute(&cmd) {
        Ok(text) => match &cmd.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome::ok(String::new()),
                Err(e) => math_failure(Error::Io(format!("{}: {e}", path.display()))),
            },
            None => Outcome::ok(text),
        },
        Err(Failure::Usage(msg)) => Outcome::usage(msg),
        Err(Failure::Math(e)) => math_failure(e),
    }
}

fn math_failure(e: Error) -> Outcome {
    Outcome {
        code: 2,
        stdout: format!("{}\n", e.to_json()),
        stderr: String::new(),
    }
}

fn tolerances(cmd: &Command) -> CmdResult<Tolerances> {
    for (name, v) in [
        ("--tol", cmd.tol.unwrap_or(1.0)),
        ("--coh-tol", cmd.coh_tol),
        ("--eig-tol", cmd.eig_tol),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(Tolerances {
        coherence: cmd.coh_tol,
        eigen: cmd.eig_tol,
        normality: cmd.tol.unwrap_or(DEFAULT_NORMALITY_TOL),
        ..Tolerances::default()
    })
}

fn load_tower(cmd: &Command, tols: &Tolerances) -> CmdResult<OperatorTower> {
    let path = cmd
        .input
        .as_deref()
        .ok_or_else(|| Failure::Usage("missing input tower file".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    Ok(io::parse_tower(&text, tols.coherence)?)
}

fn load_function(cmd: &Command) -> CmdResult<FunctionSpec> {
    let arg = cmd
        .function
        .as_deref()
        .ok_or_else(|| Failure::Usage("this subcommand needs --fn".into()))?;
    let trimmed = arg.trim();
    if trimmed.starts_with("named:") || trimmed.starts_with('{') {
        return Ok(io::parse_function_inline(trimmed)?);
    }
    let text =
        std::fs::read_to_string(trimmed).map_err(|e| Error::Io(format!("{trimmed}: {e}")))?;
    Ok(io::parse_function(&text)?)
}

fn execute(cmd: &Command) -> CmdResult<String> {
    let tols = tolerances(cmd)?;
    if cmd.subcommand == Subcommand::Demo {
        return run_demo(cmd, &tols);
    }
    let needs_fn = matches!(
        cmd.subcommand,
        Subcommand::Apply | Subcommand::Gelfand | Subcommand::Isometry | Subcommand::Specmap
    );
    if needs_fn && cmd.function.is_none() {
        return Err(Failure::Usage("this subcommand needs --fn".into()));
    }
    let tower = load_tower(cmd, &tols)?;
    let out = match cmd.subcommand {
        Subcommand::Validate => validate(cmd, &tower, &tols)?,
        Subcommand::Spectrum => spectrum(cmd, &tower, &tols)?,
        Subcommand::Apply => {
            let f = load_function(cmd)?;
            let image = apply_function(&tower, &f, &tols)?;
            if cmd.pretty {
                pretty_tower(&image)
            } else {
                io::serialize_tower(&image) + "\n"
            }
        }
        Subcommand::Classify => {
            let c = classify(&tower, tols.normality, &tols)?;
            let v = json!({
                "self_adjoint": c.self_adjoint,
                "unitary": c.unitary,
                "normal": c.normal,
                "direct_self_adjoint": c.direct_self_adjoint,
                "direct_unitary": c.direct_unitary,
                "routes_agree": c.routes_agree(),
            });
            render(cmd, &v, || {
                format!(
                    "normal        {}\nself-adjoint  {}\nunitary       {}\nroutes agree  {}\n",
                    c.normal,
                    c.self_adjoint,
                    c.unitary,
                    c.routes_agree()
                )
            })
        }
        Subcommand::Characters => {
            let space = CharacterSpace::new(&tower, &tols)?;
            let v = serde_json::to_value(space.characters()).expect("serializable");
            render(cmd, &v, || {
                let mut s = format!("{:>9}  {}\n", "min_level", "value");
                for ch in space.characters() {
                    let _ = writeln!(s, "{:>9}  {}", ch.min_level, fmt_c(ch.value));
                }
                s
            })
        }
        Subcommand::Gelfand => {
            let a = AlgebraElement::new(load_function(cmd)?);
            let space = CharacterSpace::new(&tower, &tols)?;
            let values = space.gelfand(&a)?;
            let v = serde_json::to_value(&values).expect("serializable");
            render(cmd, &v, || {
                let mut s = format!("{:>9}  {:>28}  {}\n", "min_level", "character", "Γ(a)");
                for g in &values {
                    let _ = writeln!(
                        s,
                        "{:>9}  {:>28}  {}",
                        g.character.min_level,
                        fmt_c(g.character.value),
                        fmt_c(g.value)
                    );
                }
                s
            })
        }
        Subcommand::Isometry => {
            let a = AlgebraElement::new(load_function(cmd)?);
            let space = CharacterSpace::new(&tower, &tols)?;
            let rel = cmd.tol.unwrap_or(DEFAULT_REPORT_TOL);
            let report = space.local_isometry_check(&tower, &a, rel, &tols)?;
            let v = serde_json::to_value(&report).expect("serializable");
            render(cmd, &v, || {
                let mut s = format!(
                    "{:>5}  {:>22}  {:>22}  {:>10}\n",
                    "level", "p", "q", "deviation"
                );
                for l in &report.levels {
                    let _ = writeln!(
                        s,
                        "{:>5}  {:>22}  {:>22}  {:>10.3e}",
                        l.level, l.p, l.q, l.deviation
                    );
                }
                let _ = writeln!(s, "{}", status(report.pass));
                s
            })
        }
        Subcommand::Specmap => {
            let f = load_function(cmd)?;
            let tol = cmd.tol.unwrap_or(DEFAULT_REPORT_TOL);
            let r = check_spectral_mapping(&tower, &f, tol, &tols)?;
            let v = specmap_json(&r);
            render(cmd, &v, || {
                format!(
                    "σ_loc(f(T)) = {}\nf(σ_loc(T)) = {}\nHausdorff distance {:e} (tol {:e})  {}\n",
                    fmt_list(&r.spectrum_of_image),
                    fmt_list(&r.image_of_spectrum),
                    r.hausdorff,
                    r.tol,
                    status(r.pass)
                )
            })
        }
        Subcommand::Demo => unreachable!("handled above"),
    };
    Ok(out)
}

fn validate(cmd: &Command, tower: &OperatorTower, tols: &Tolerances) -> CmdResult<String> {
    if let Some(k) = cmd.level {
        let m = tower.restrict(k)?;
        let v = json!({"level": k, "dim": m.rows(), "matrix": pairs(m.as_slice())});
        return Ok(render(cmd, &v, || pretty_matrix(&m)));
    }
    let cert = tower.is_normal(tols.normality);
    let seminorms = tower.seminorms().values;
    let v = json!({
        "valid": true,
        "dims": tower.chain().dims(),
        "normal": cert.normal,
        "seminorms": seminorms,
    });
    Ok(render(cmd, &v, || {
        let mut s = String::from("valid tower\n");
        let _ = writeln!(s, "{:>5}  {:>5}  {:>22}", "level", "dim", "‖T_α‖");
        for (i, (d, p)) in tower.chain().dims().iter().zip(&seminorms).enumerate() {
            let _ = writeln!(s, "{:>5}  {:>5}  {:>22}", i + 1, d, p);
        }
        let _ = writeln!(
            s,
            "normal: {} (worst level {}, deviation {:e})",
            cert.normal, cert.worst_level, cert.deviation
        );
        s
    }))
}

fn spectrum(cmd: &Command, tower: &OperatorTower, tols: &Tolerances) -> CmdResult<String> {
    let spec = local_spectrum(tower, tols.eigen, tols.normality)?;
    if let Some(k) = cmd.level {
        tower.chain().check_level(k)?;
        let ev = &spec.per_level[k - 1];
        let v = json!({"level": k, "eigenvalues": pairs(ev)});
        return Ok(render(cmd, &v, || format!("σ(T_{k}) = {}\n", fmt_list(ev))));
    }
    let v = json!({
        "per_level": spec.per_level.iter().map(|l| pairs(l)).collect::<Vec<_>>(),
        "merged": pairs(&spec.merged),
        "normal": spec.normal,
    });
    Ok(render(cmd, &v, || {
        let mut s = String::new();
        for (i, l) in spec.per_level.iter().enumerate() {
            let _ = writeln!(s, "σ(T_{}) = {}", i + 1, fmt_list(l));
        }
        let _ = writeln!(s, "σ_loc(T) = {}", fmt_list(&spec.merged));
        if !spec.normal {
            s.push_str("warning: tower is not normal\n");
        }
        s
    }))
}

fn run_demo(cmd: &Command, tols: &Tolerances) -> CmdResult<String> {
    let name = cmd
        .input
        .as_deref()
        .ok_or_else(|| Failure::Usage("demo needs a name".into()))?;
    let demo = Demo::from_str(name, false).map_err(|_| {
        Failure::Usage(format!(
            "unknown demo {name:?}; expected noncontinuous-character, quotient-counterexample, number-matrix or exp-calculus"
        ))
    })?;
    match demo {
        Demo::NoncontinuousCharacter => {
            let chain =
                IntervalChain::new(IntervalMode::Halfline, cmd.levels, cmd.samples_per_unit)?;
            let r = noncontinuity_witness(&chain, cmd.max_l)?;
            let v = serde_json::to_value(&r).expect("serializable");
            Ok(render(cmd, &v, || {
                let mut s = format!(
                    "{:>3}  {:>3}  {:>22}  {:>22}  {:>5}  {}\n",
                    "l", "n", "p_n(g_l)", "1/l", "Φ(g_l)", "status"
                );
                for row in &r.rows {
                    let _ = writeln!(
                        s,
                        "{:>3}  {:>3}  {:>22}  {:>22}  {:>5}  {}",
                        row.l,
                        row.n,
                        row.p_n,
                        row.bound,
                        row.phi,
                        status(row.pass)
                    );
                }
                let _ = writeln!(
                    s,
                    "Φ induced by some level: {}",
                    r.phi_factors_through_level
                );
                s
            }))
        }
        Demo::QuotientCounterexample => {
            let chain = IntervalChain::new(
                IntervalMode::Symmetric,
                cmd.levels.max(2),
                cmd.samples_per_unit,
            )?;
            let r = quotient_counterexample(&chain, tols.numeric)?;
            let v = serde_json::to_value(&r).expect("serializable");
            Ok(render(cmd, &v, || {
                format!(
                    "p_1(f - g) = {:e}\nf(2) = {}, g(2) = {}\nevaluation at 2 first factors through level {}\n{}\n",
                    r.p1_difference,
                    r.f_at_2,
                    r.g_at_2,
                    r.eval_2_min_level,
                    status(r.pass)
                )
            }))
        }
        Demo::NumberMatrix => {
            let tower = number_matrix_tower(6);
            let space = CharacterSpace::new(&tower, tols)?;
            let spec = space.spectrum();
            let c = classify(&tower, tols.normality, tols)?;
            let v = json!({
                "tower": serde_json::from_str::<Value>(&io::serialize_tower(&tower)).expect("valid json"),
                "per_level": spec.per_level.iter().map(|l| pairs(l)).collect::<Vec<_>>(),
                "merged": pairs(&spec.merged),
                "characters": serde_json::to_value(space.characters()).expect("serializable"),
                "seminorms": tower.seminorms().values,
                "self_adjoint": c.self_adjoint,
                "unitary": c.unitary,
            });
            Ok(render(cmd, &v, || {
                let mut s = String::new();
                for (i, l) in spec.per_level.iter().enumerate() {
                    let _ = writeln!(s, "σ(T_{}) = {}", i + 1, fmt_list(l));
                }
                let _ = writeln!(s, "σ_loc(T) = {}", fmt_list(&spec.merged));
                let _ = writeln!(s, "self-adjoint {}, unitary {}", c.self_adjoint, c.unitary);
                s
            }))
        }
        Demo::ExpCalculus => {
            let xs = exp_demo_entries();
            let chain = IndexChain::unit_steps(xs.len())?;
            let diag: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            let tower = OperatorTower::diagonal(chain, &diag)?;
            let f = FunctionSpec::named(NamedFunction::Exp);
            let image = apply_function(&tower, &f, tols)?;
            let got: Vec<f64> = image.top().diagonal().iter().map(|z| z.re).collect();
            let max_rel = xs
                .iter()
                .zip(&got)
                .map(|(x, g)| (g - x.exp()).abs() / x.exp())
                .fold(0.0, f64::max);
            let r = check_spectral_mapping(&tower, &f, DEFAULT_REPORT_TOL, tols)?;
            let v = json!({
                "entries": xs,
                "exp_entries": got,
                "max_relative_error": max_rel,
                "spectral_mapping": specmap_json(&r),
            });
            Ok(render(cmd, &v, || {
                let mut s = format!("{:>6}  {:>22}\n", "x", "exp(T) entry");
                for (x, g) in xs.iter().zip(&got) {
                    let _ = writeln!(s, "{:>6}  {:>22}", x, g);
                }
                let _ = writeln!(
                    s,
                    "max relative error {:e}\nHausdorff(σ_loc(f(T)), f(σ_loc(T))) = {:e}  {}",
                    max_rel,
                    r.hausdorff,
                    status(r.pass)
                );
                s
            }))
        }
    }
}

/// Diagonal tower `diag(1, 1/2, 3, 1/4, 5, …)` on the chain `1, 2, …, n`.
pub fn number_matrix_tower(n: usize) -> OperatorTower {
    let diag: Vec<Complex64> = (1..=n)
        .map(|k| {
            if k % 2 == 1 {
                Complex64::new(k as f64, 0.0)
            } else {
                Complex64::new(1.0 / k as f64, 0.0)
            }
        })
        .collect();
    OperatorTower::diagonal(IndexChain::unit_steps(n).expect("n ≥ 1"), &diag)
        .expect("diagonal towers are coherent")
}

/// Real diagonal entries used by the `exp-calculus` demo.
pub fn exp_demo_entries() -> Vec<f64> {
    vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
}

fn specmap_json(r: &crate::funcalc::SpectralMappingReport) -> Value {
    json!({
        "spectrum_of_image": pairs(&r.spectrum_of_image),
        "image_of_spectrum": pairs(&r.image_of_spectrum),
        "hausdorff": r.hausdorff,
        "tol": r.tol,
        "pass": r.pass,
    })
}

fn render(cmd: &Command, v: &Value, pretty: impl FnOnce() -> String) -> String {
    if cmd.pretty {
        pretty()
    } else {
        format!("{v}\n")
    }
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn fmt_list(zs: &[Complex64]) -> String {
    let items: Vec<String> = zs.iter().map(|&z| fmt_c(z)).collect();
    format!("{{{}}}", items.join(", "))
}

fn pretty_matrix(m: &crate::matrix::ComplexMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| format!("{:>24}", fmt_c(m[(i, j)])))
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

fn pretty_tower(t: &OperatorTower) -> String {
    let mut s = String::new();
    for (i, m) in t.levels().iter().enumerate() {
        let _ = writeln!(s, "level {} ({}x{})", i + 1, m.rows(), m.cols());
        s.push_str(&pretty_matrix(m));
    }
    s
}
