//! Every structural law checked on one random planted instance.
//!
//! Failures are tagged with the group they belong to so the acceptance
//! runner can report them per criterion.

use loctower::character::{gelfand_via_diagonalization, AlgebraElement, CharacterSpace};
use loctower::funcalc::{
    apply_function, check_spectral_mapping, classify, local_spectrum, multiset_contained,
    polynomial_calculus, FunctionSpec, NamedFunction, Term,
};
use loctower::{rel_close, validate_tower, ComplexMatrix, OperatorTower, Tolerances};
use num_complex::Complex64;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    /// Coherence, seminorm laws, spectra, calculus laws, classification.
    Properties,
    /// Character bijection, planted min levels, factorization monotonicity.
    Characters,
    /// Calculus vs polynomial products; Gelfand vs eigenbasis route.
    Oracles,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub failures: Vec<(Group, String)>,
    pub max_poly_gap: f64,
    pub max_gelfand_gap: f64,
    pub max_hausdorff: f64,
}

impl Outcome {
    fn fail(&mut self, g: Group, msg: String) {
        self.failures.push((g, msg));
    }
}

const HOMOMORPHISM_TOL: f64 = 1e-8;
const ISOMETRY_REL: f64 = 1e-8;
const SPECMAP_TOL: f64 = 1e-7;
const ORACLE_TOL: f64 = 1e-8;

fn dense_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut data = vec![c(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = c(0.0, 0.0);
            for k in 0..n {
                acc += a[(i, k)] * b[(k, j)];
            }
            data[i * n + j] = acc;
        }
    }
    ComplexMatrix::new(n, n, data).unwrap()
}

fn eval_terms(terms: &[Term], z: Complex64) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for t in terms {
        let mut v = t.coeff;
        for _ in 0..t.j {
            v *= z;
        }
        for _ in 0..t.k {
            v *= z.conj();
        }
        acc += v;
    }
    acc
}

pub fn check_instance(seed: u64) -> Outcome {
    let mut out = Outcome::default();
    let tols = Tolerances::default();
    let mut r = rng(seed);
    let kind = random_kind(&mut r);
    let planted = planted_tower(&mut r, kind, 6, 16);
    let t = &planted.tower;
    let dims = t.chain().dims().to_vec();
    let n_levels = dims.len();
    let other = random_block_tower(&mut r, &dims);
    let f_terms = random_polynomial(&mut r);
    let g_terms = random_polynomial(&mut r);
    let table = random_table(&mut r, &planted);
    let scalar = gaussian(&mut r);
    let tag = format!("seed {seed} dims {dims:?} {kind:?}");

    // coherence closure and projection commutation
    let derived = [
        ("adjoint", t.adjoint()),
        ("add", t.add(&other).unwrap()),
        ("scale", other.scale(scalar)),
        ("compose", t.compose(&other).unwrap()),
        ("compose-rev", other.compose(t).unwrap()),
    ];
    for (name, d) in &derived {
        if let Err(e) = validate_tower(d.chain().clone(), d.levels().to_vec(), tols.coherence) {
            out.fail(
                Group::Properties,
                format!("{tag}: {name} lost coherence: {e}"),
            );
        }
    }
    let prod = t.compose(&other).unwrap();
    for (i, (a, b)) in t.levels().iter().zip(other.levels()).enumerate() {
        let dev = prod.levels()[i].max_abs_diff(&dense_product(a, b));
        if dev > 1e-12 {
            out.fail(
                Group::Properties,
                format!("{tag}: compose differs from dense product by {dev:e}"),
            );
        }
    }
    for a in 1..=n_levels {
        for b in a..=n_levels {
            let dev = other.projection_commutator(a, b).unwrap();
            if dev > tols.coherence {
                out.fail(
                    Group::Properties,
                    format!("{tag}: [Q_{a},{b}, T] = {dev:e}"),
                );
            }
        }
    }

    // C*-seminorm laws
    let id = OperatorTower::identity(t.chain().clone());
    if id.seminorms().values.iter().any(|&v| v != 1.0) {
        out.fail(Group::Properties, format!("{tag}: p(1) != 1"));
    }
    for x in [t, &other] {
        let p = x.seminorms().values;
        let p_adj = x.adjoint().seminorms().values;
        let p_gram = x.adjoint().compose(x).unwrap().seminorms().values;
        let p_other = other.seminorms().values;
        let p_prod = x.compose(&other).unwrap().seminorms().values;
        if !x.seminorms().is_upward_filtered(tols.numeric) {
            out.fail(
                Group::Properties,
                format!("{tag}: seminorms not upward filtered"),
            );
        }
        for i in 0..n_levels {
            if !rel_close(p[i], p_adj[i], tols.numeric) {
                out.fail(Group::Properties, format!("{tag}: p(T*) != p(T) at {i}"));
            }
            if !rel_close(p_gram[i], p[i] * p[i], tols.numeric) {
                out.fail(Group::Properties, format!("{tag}: p(T*T) != p(T)^2 at {i}"));
            }
            if p_prod[i] > p[i] * p_other[i] * (1.0 + tols.numeric) + tols.numeric {
                out.fail(
                    Group::Properties,
                    format!("{tag}: submultiplicativity at {i}"),
                );
            }
        }
    }

    // local spectrum against the planting
    let spec = match local_spectrum(t, tols.eigen, tols.normality) {
        Ok(s) => s,
        Err(e) => {
            out.fail(Group::Properties, format!("{tag}: spectrum failed: {e}"));
            return out;
        }
    };
    for level in 1..=n_levels {
        let planted_vals = planted.level_values(level);
        let got = &spec.per_level[level - 1];
        if got.len() != dims[level - 1]
            || !multiset_contained(got, &planted_vals, tols.eigen)
            || !multiset_contained(&planted_vals, got, tols.eigen)
        {
            out.fail(
                Group::Properties,
                format!("{tag}: σ(T_{level}) differs from planted"),
            );
        }
    }
    if !spec.is_nested() {
        out.fail(
            Group::Properties,
            format!("{tag}: spectral inclusion fails"),
        );
    }
    if !spec.is_separated() {
        out.fail(
            Group::Properties,
            format!("{tag}: merged spectrum not separated"),
        );
    }

    // functional calculus
    let f = FunctionSpec::polynomial(f_terms.clone());
    let g = FunctionSpec::polynomial(g_terms.clone());
    let h = FunctionSpec::table(table.clone());
    let support = spec.merged.clone();
    let fc = |spec: &FunctionSpec| apply_function(t, spec, &tols);

    let (tf, tg, th) = match (fc(&f), fc(&g), fc(&h)) {
        (Ok(a), Ok(b), Ok(cc)) => (a, b, cc),
        (a, b, cc) => {
            out.fail(
                Group::Properties,
                format!(
                    "{tag}: calculus failed: {:?} {:?} {:?}",
                    a.err(),
                    b.err(),
                    cc.err()
                ),
            );
            return out;
        }
    };

    for (name, x) in [("f(T)", &tf), ("g(T)", &tg), ("h(T)", &th)] {
        if let Err(e) = validate_tower(x.chain().clone(), x.levels().to_vec(), tols.coherence) {
            out.fail(
                Group::Properties,
                format!("{tag}: {name} lost coherence: {e}"),
            );
        }
    }

    // two pipelines on polynomials
    for (terms, via_spectrum) in [(&f_terms, &tf), (&g_terms, &tg)] {
        let direct = polynomial_calculus(t, terms, &tols).unwrap();
        let gap = max_level_diff(&direct, via_spectrum);
        out.max_poly_gap = out.max_poly_gap.max(gap);
        if gap > ORACLE_TOL {
            out.fail(
                Group::Oracles,
                format!("{tag}: polynomial pipelines differ by {gap:e}"),
            );
        }
    }

    // unit, homomorphism, star
    let one = fc(&FunctionSpec::named(NamedFunction::Const(c(1.0, 0.0)))).unwrap();
    if max_level_diff(&one, &id) != 0.0 {
        out.fail(Group::Properties, format!("{tag}: Φ(1) != I"));
    }
    for (a_spec, b_spec, ta, tb) in [(&f, &g, &tf, &tg), (&f, &h, &tf, &th)] {
        let prod_spec = a_spec.product(b_spec, &support, tols.eigen).unwrap();
        let lhs = fc(&prod_spec).unwrap();
        let rhs = ta.compose(tb).unwrap();
        let gap = max_level_diff(&lhs, &rhs);
        if gap > HOMOMORPHISM_TOL {
            out.fail(
                Group::Properties,
                format!("{tag}: Φ(fg) != Φ(f)Φ(g) by {gap:e}"),
            );
        }
    }
    for (s, ts) in [(&f, &tf), (&h, &th)] {
        let conj_spec = s.conjugate(&support, tols.eigen).unwrap();
        let gap = max_level_diff(&fc(&conj_spec).unwrap(), &ts.adjoint());
        if gap > HOMOMORPHISM_TOL {
            out.fail(
                Group::Properties,
                format!("{tag}: Φ(f̄) != Φ(f)* by {gap:e}"),
            );
        }
    }

    // local isometry of the calculus
    for (s, ts) in [(&f, &tf), (&h, &th)] {
        let p = ts.seminorms().values;
        for level in 1..=n_levels {
            let sup = spec.per_level[level - 1]
                .iter()
                .map(|&z| s.eval(z, tols.eigen).unwrap().norm())
                .fold(0.0, f64::max);
            if !rel_close(p[level - 1], sup, ISOMETRY_REL) {
                out.fail(
                    Group::Properties,
                    format!(
                        "{tag}: s_{level}(f(T)) = {} but sup |f| = {sup}",
                        p[level - 1]
                    ),
                );
            }
        }
    }

    // spectral mapping
    for s in [&f, &h, &FunctionSpec::named(NamedFunction::Exp)] {
        match check_spectral_mapping(t, s, SPECMAP_TOL, &tols) {
            Ok(rep) => {
                out.max_hausdorff = out.max_hausdorff.max(rep.hausdorff);
                if !rep.pass {
                    out.fail(
                        Group::Properties,
                        format!("{tag}: spectral mapping off by {:e}", rep.hausdorff),
                    );
                }
            }
            Err(e) => out.fail(
                Group::Properties,
                format!("{tag}: spectral mapping failed: {e}"),
            ),
        }
    }

    // classification, both routes
    let cls = classify(t, tols.normality, &tols).unwrap();
    let (want_sa, want_u) = match kind {
        SpectrumKind::Real => (true, false),
        SpectrumKind::UnitCircle => (false, true),
        SpectrumKind::General => (false, false),
    };
    let trivially_both = planted
        .distinct_with_levels()
        .iter()
        .all(|(z, _)| (z.norm() - 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);
    if !cls.normal
        || !cls.routes_agree()
        || (!trivially_both && (cls.self_adjoint != want_sa || cls.unitary != want_u))
    {
        out.fail(Group::Properties, format!("{tag}: classification {cls:?}"));
    }

    // characters
    let space = match CharacterSpace::new(t, &tols) {
        Ok(s) => s,
        Err(e) => {
            out.fail(Group::Characters, format!("{tag}: characters failed: {e}"));
            return out;
        }
    };
    let chars = space.characters();
    let oracle = planted.distinct_with_levels();
    if chars.len() != spec.merged.len() || chars.len() != oracle.len() {
        out.fail(
            Group::Characters,
            format!(
                "{tag}: {} characters, {} merged, {} planted",
                chars.len(),
                spec.merged.len(),
                oracle.len()
            ),
        );
    }
    for (z, level) in &oracle {
        match chars.iter().find(|ch| (ch.value - z).norm() <= tols.eigen) {
            Some(ch) if ch.min_level == *level => {}
            Some(ch) => out.fail(
                Group::Characters,
                format!(
                    "{tag}: {z} has min_level {} but was planted at {level}",
                    ch.min_level
                ),
            ),
            None => out.fail(
                Group::Characters,
                format!("{tag}: no character at planted {z}"),
            ),
        }
    }
    for ch in chars {
        if !spec
            .merged
            .iter()
            .any(|m| (m - ch.value).norm() <= tols.eigen)
        {
            out.fail(
                Group::Characters,
                format!("{tag}: character {} not in spectrum", ch.value),
            );
        }
        for alpha in 1..=n_levels {
            let factors = space.factor_level(ch, alpha).unwrap();
            if factors != (alpha >= ch.min_level) {
                out.fail(
                    Group::Characters,
                    format!("{tag}: factor_level({}, {alpha}) = {factors}", ch.min_level),
                );
            }
        }
    }

    // Gelfand transform
    let el = |s: &FunctionSpec| AlgebraElement::new(s.clone());
    let gf = space.gelfand(&el(&f)).unwrap();
    let gh = space.gelfand(&el(&h)).unwrap();
    let gfh = space
        .gelfand(&el(&f.product(&h, &support, tols.eigen).unwrap()))
        .unwrap();
    let gfc = space
        .gelfand(&el(&f.conjugate(&support, tols.eigen).unwrap()))
        .unwrap();
    for i in 0..chars.len() {
        if (gfh[i].value - gf[i].value * gh[i].value).norm() > HOMOMORPHISM_TOL {
            out.fail(Group::Properties, format!("{tag}: Γ(fh) != Γ(f)Γ(h)"));
        }
        if (gfc[i].value - gf[i].value.conj()).norm() > HOMOMORPHISM_TOL {
            out.fail(Group::Properties, format!("{tag}: Γ(f*) != Γ(f)*"));
        }
    }
    for s in [&f, &h] {
        let rep = space
            .local_isometry_check(t, &el(s), ISOMETRY_REL, &tols)
            .unwrap();
        if !rep.pass {
            out.fail(
                Group::Properties,
                format!("{tag}: Gelfand isometry {:?}", rep.levels),
            );
        }
    }
    for ch in chars {
        let via = gelfand_via_diagonalization(t, &f_terms, ch, &tols).unwrap();
        let direct = eval_terms(&f_terms, ch.value);
        let gap = (via - direct).norm();
        out.max_gelfand_gap = out.max_gelfand_gap.max(gap);
        if gap > ORACLE_TOL {
            out.fail(
                Group::Oracles,
                format!("{tag}: Gelfand routes differ by {gap:e}"),
            );
        }
    }

    // kernel membership matches evaluation on a small family
    for ch in chars {
        let shift = eval_terms(&f_terms, ch.value);
        let mut shifted = f_terms.clone();
        shifted.push(Term::new(0, 0, -shift));
        let family = [
            FunctionSpec::polynomial(shifted.clone()),
            f.clone(),
            h.clone(),
            FunctionSpec::named(NamedFunction::Const(c(1.0, 0.0))),
            FunctionSpec::polynomial(vec![
                Term::new(1, 0, c(1.0, 0.0)),
                Term::new(0, 0, -ch.value),
            ]),
        ];
        for (k, a) in family.iter().enumerate() {
            let inside = space.kernel_contains(ch, &el(a), 1e-12).unwrap();
            let oracle_value = match a {
                FunctionSpec::Polynomial { terms } => eval_terms(terms, ch.value),
                FunctionSpec::Table { points } => points
                    .iter()
                    .find(|p| (p.z - ch.value).norm() <= tols.eigen)
                    .map(|p| p.fz)
                    .unwrap(),
                _ => c(1.0, 0.0),
            };
            if inside != (oracle_value.norm() <= 1e-12) {
                out.fail(
                    Group::Properties,
                    format!("{tag}: kernel membership {k} disagrees"),
                );
            }
        }
        if !space
            .kernel_contains(ch, &el(&FunctionSpec::polynomial(shifted)), 1e-12)
            .unwrap()
        {
            out.fail(Group::Properties, format!("{tag}: f - f(λ) not in Ker Φ"));
        }
    }

    out
}
