//! Seeded property suites. Each trial draws its own generator from `(seed, trial)`, so a
//! failing trial replays alone; failures carry the offending objects as input documents.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    build_slices, compute_orthogonal, compute_orthogonal_via_ordering, DegreeMap, GradedAlgebra, Presentation,
};
use crate::complexes::{
    conditions_y, conditions_yo, contract_g, contract_h, equivalence_f, equivalence_f_dual, extract_module,
    hom_complexes_dim, in_g_star, in_t_star, in_y, iso_complexes, nu, nu_twisted, psi, rotate_parallel_arrows,
    ComplexOfGraded,
};
use crate::corpus::{commutative_two_loop, default_field, truncated_loops, AlgebraBundle};
use crate::error::{Error, Result};
use crate::grmod::{
    in_g, in_l, in_l_e, in_lo, is_torsionfree, presented_in_degrees, torsion_submodule, GradedModule, TorsionParams,
};
use crate::io::{complex_to_doc, module_to_doc, presentation_doc, ModuleDoc};
use crate::koszul::{ext_dims, is_n_koszul};
use crate::linalg::{Field, Subspace};
use crate::quiver::{PathElement, PathTable, Quiver};
use crate::random::{
    annihilating_quotient, random_cyclic_quotient, random_free_algebra_module, random_generators, random_presentation,
    PresentationShape,
};

pub const SUITES: [&str; 10] =
    ["prop21", "prop22", "lemma31", "lemma32", "prop42", "thm43", "remark44", "thm46", "cor47", "koszul"];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    /// Run the oracle suites against the twisted differential instead of the real one.
    pub mutate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub message: String,
    pub counterexample: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    /// Counts of trial classes (verdict kinds, negative controls, ...).
    pub classes: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn class(&self, name: &str) -> usize {
        self.classes.get(name).copied().unwrap_or(0)
    }
}

/// What one trial found: the classes it belongs to, and a failure if any.
#[derive(Default)]
struct Outcome {
    classes: Vec<String>,
    failure: Option<(String, Value)>,
}

impl Outcome {
    fn class(mut self, c: impl Into<String>) -> Self {
        self.classes.push(c.into());
        self
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String, ce: impl FnOnce() -> Value) {
        if !ok && self.failure.is_none() {
            self.failure = Some((msg(), ce()));
        }
    }
}

/// Algebras shared by the trials of a run.
#[derive(Default)]
pub struct Corpus {
    one_loop: OnceCell<AlgebraBundle>,
    two_loop: OnceCell<AlgebraBundle>,
    one_loop_op: OnceCell<AlgebraBundle>,
    two_loop_op: OnceCell<AlgebraBundle>,
    xxy: OnceCell<AlgebraBundle>,
    commutative: OnceCell<AlgebraBundle>,
    truncated: OnceCell<BTreeMap<(usize, usize), AlgebraBundle>>,
    oracle_algebra: Option<AlgebraBundle>,
}

/// Two loops, n = 3, every path of length 3 except `x.x.y` a relation: a finite algebra
/// whose orthogonal is nonzero.
pub fn single_surviving_path(field: Field) -> Result<Presentation> {
    let q = Quiver::from_triples(1, &[("x", 0, 0), ("y", 0, 0)])?;
    let keep = q.parse_path("x.x.y")?;
    let rels = crate::quiver::enumerate_paths(&q, 3)
        .into_iter()
        .filter(|p| *p != keep)
        .map(|p| PathElement::from_terms(field, 3, [(p, 1)]))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(field, q, 3, rels, None)
}

impl Corpus {
    /// Draws the modules of the oracle suites over `b` instead of the built-in pool.
    pub fn with_oracle_algebra(b: AlgebraBundle) -> Self {
        Corpus { oracle_algebra: Some(b), ..Default::default() }
    }

    pub fn one_loop(&self) -> &AlgebraBundle {
        self.one_loop.get_or_init(|| AlgebraBundle::new(truncated_loops(default_field(), 1, 3).unwrap(), 12).unwrap())
    }

    pub fn two_loop(&self) -> &AlgebraBundle {
        self.two_loop.get_or_init(|| AlgebraBundle::new(truncated_loops(default_field(), 2, 3).unwrap(), 8).unwrap())
    }

    pub fn one_loop_op(&self) -> &AlgebraBundle {
        self.one_loop_op.get_or_init(|| self.one_loop().opposite().unwrap())
    }

    pub fn two_loop_op(&self) -> &AlgebraBundle {
        self.two_loop_op.get_or_init(|| self.two_loop().opposite().unwrap())
    }

    pub fn xxy(&self) -> &AlgebraBundle {
        self.xxy.get_or_init(|| AlgebraBundle::new(single_surviving_path(default_field()).unwrap(), 9).unwrap())
    }

    pub fn commutative(&self) -> &AlgebraBundle {
        self.commutative.get_or_init(|| AlgebraBundle::new(commutative_two_loop(default_field()).unwrap(), 8).unwrap())
    }

    /// Truncated algebras `(loops, n)` for the Koszul and torsion suites.
    pub fn truncated(&self, loops: usize, n: usize) -> &AlgebraBundle {
        let all = self.truncated.get_or_init(|| {
            [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3)]
                .into_iter()
                .map(|(l, n)| {
                    let window = if l == 1 { 4 * n } else { 3 * n + 1 };
                    ((l, n), AlgebraBundle::new(truncated_loops(default_field(), l, n).unwrap(), window).unwrap())
                })
                .collect()
        });
        &all[&(loops, n)]
    }
}

fn module_ce(b: &AlgebraBundle, named: &[(&str, &GradedModule, &str)]) -> Value {
    let modules: BTreeMap<String, ModuleDoc> =
        named.iter().map(|(k, m, over)| (k.to_string(), module_to_doc(m, over))).collect();
    serde_json::to_value(presentation_doc(&b.pres, b.lambda_slices.top(), modules)).expect("serializable")
}

fn complex_ce(b: &AlgebraBundle, name: &str, c: &ComplexOfGraded) -> Value {
    let mut doc = presentation_doc(&b.pres, b.lambda_slices.top(), BTreeMap::new());
    doc.complexes.insert(name.into(), complex_to_doc(c, "lambda"));
    serde_json::to_value(doc).expect("serializable")
}

pub fn run_suite(name: &str, opts: &SuiteOptions, corpus: &Corpus) -> Result<SuiteReport> {
    let trial: fn(&mut ChaCha8Rng, &SuiteOptions, &Corpus) -> Result<Outcome> = match name {
        "prop21" => trial_dual_basis_and_psi,
        "prop22" => trial_nu_oracle,
        "lemma31" => trial_torsionfree,
        "lemma32" => trial_torsion_transport,
        "prop42" => trial_contraction_kernel,
        "thm43" => trial_equivalence,
        "remark44" => trial_duality_square,
        "thm46" => trial_dual_pipeline,
        "cor47" => trial_even_presentations,
        "koszul" => trial_koszul,
        _ => return Err(Error::Precondition(format!("unknown suite '{name}' (known: {})", SUITES.join(", ")))),
    };
    let mut report = SuiteReport {
        suite: name.into(),
        seed: opts.seed,
        trials: opts.trials,
        passed: 0,
        classes: BTreeMap::new(),
        failures: vec![],
    };
    for t in 0..opts.trials {
        let mut rng = trial_rng(opts.seed, t);
        let out = trial(&mut rng, opts, corpus)?;
        for c in out.classes {
            *report.classes.entry(c).or_default() += 1;
        }
        match out.failure {
            None => report.passed += 1,
            Some((message, counterexample)) => report.failures.push(Failure { trial: t, message, counterexample }),
        }
    }
    Ok(report)
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

// ---- complex condition oracle ----

/// A presentation for the oracle suites with its algebras, the relation-free `KQ^op`
/// and the module window used.
struct OracleSetup {
    bundle: AlgebraBundle,
    free: Arc<GradedAlgebra>,
}

fn total_paths(q: &Quiver, top: usize) -> u128 {
    (0..=top).map(|k| q.path_count(k)).sum()
}

/// A random presentation (sometimes a fixed one with a nonzero orthogonal), computed
/// through degree `3n`.
fn oracle_setup(rng: &mut ChaCha8Rng, corpus: &Corpus) -> Result<OracleSetup> {
    let pick = rng.gen_range(0..6);
    let bundle = match (&corpus.oracle_algebra, pick) {
        (Some(b), _) => b.clone(),
        (None, 0 | 1) => corpus.xxy().clone(),
        (None, 2) => corpus.commutative().clone(),
        (None, _) => loop {
            let shape = PresentationShape { max_vertices: 3, max_arrows: 4, degrees: &[2, 3, 4], max_relations: 3 };
            let pres = random_presentation(rng, default_field(), shape)?;
            let top = 3 * pres.n();
            if total_paths(pres.quiver(), top) <= 1200 {
                break AlgebraBundle::new(pres, top)?;
            }
        },
    };
    let b = &bundle;
    let pres = Presentation::new(b.field(), b.dual_pres.quiver().clone(), b.n(), vec![], None)?;
    let free = Arc::new(GradedAlgebra::path(Arc::new(build_slices(&pres, b.lambda_slices.top())?)));
    Ok(OracleSetup { bundle, free })
}

/// Whether `m` annihilates `I_n^⊥`, read off the orthogonal computed by the pairing.
/// Modules over `Λ^!` itself pass trivially; `m` must otherwise live over `KQ^op`.
pub fn annihilates_orthogonal(b: &AlgebraBundle, m: &GradedModule) -> Result<bool> {
    let n = b.n();
    let base = m.algebra().base();
    if Arc::ptr_eq(m.algebra(), &b.dual) || (base.top() >= n && base.dims() == b.dual_slices.dims()[..=base.top()]) {
        return Ok(true);
    }
    if base.top() < n || base.ideal(n).dim() != 0 || base.quiver().arrows() != b.dual_pres.quiver().arrows() {
        return Err(Error::Precondition("the orthogonal oracle needs a module over KQ^op or the dual".into()));
    }
    let perp = compute_orthogonal(&b.lambda_slices).basis_vectors();
    Ok(m.degrees().all(|d| d + n as i64 > m.hi() || perp.iter().all(|v| m.element_action(n, v, d).is_zero())))
}

/// Whether some path of length `n` acts nonzero on `m`.
fn moves_degree_n(m: &GradedModule, n: usize) -> bool {
    let paths = m.algebra().dim(n);
    m.degrees().any(|d| d + n as i64 <= m.hi() && (0..paths).any(|i| !m.basis_action(n, i, d).is_zero()))
}

/// A random module over `KQ^op` in degrees `0..=n+1` with at most 3 dimensions per
/// degree on which paths of length n act nontrivially; half the time it is forced to
/// annihilate the orthogonal.
fn oracle_module(rng: &mut ChaCha8Rng, s: &OracleSetup) -> Result<GradedModule> {
    let n = s.bundle.n();
    let forced = rng.gen_bool(0.5);
    let perp = compute_orthogonal(&s.bundle.lambda_slices);
    let elems: Vec<(usize, Vec<u32>)> = perp.basis_vectors().into_iter().map(|v| (n, v)).collect();
    let mut last = None;
    for _ in 0..20 {
        let m = random_free_algebra_module(rng, s.free.clone(), 0, n as i64 + 1, 3)?;
        let m = if forced { annihilating_quotient(&m, &elems)? } else { m };
        if moves_degree_n(&m, n) {
            return Ok(m);
        }
        last = Some(m);
    }
    Ok(last.expect("at least one attempt"))
}

fn oracle_trial(rng: &mut ChaCha8Rng, corpus: &Corpus, which: &str, mutate: bool) -> Result<Outcome> {
    let s = oracle_setup(rng, corpus)?;
    let b = &s.bundle;
    let m = oracle_module(rng, &s)?;
    let expected = annihilates_orthogonal(b, &m)?;
    let n = b.n();
    let c = match (which, mutate) {
        ("psi", false) => psi(&m, &b.lambda, true)?,
        (_, false) => nu(&m, &b.lambda, true)?,
        // the twisted differential stands in for a faulty implementation of either functor
        (_, true) => nu_twisted(&m, &b.lambda, true, &rotate_parallel_arrows(b.lambda.quiver()))?,
    };
    let got = c.is_n_complex(n);
    let mut out = Outcome::default().class(if expected { "annihilates" } else { "does_not_annihilate" });
    out.check(
        got == expected,
        || format!("{which}(M) is_n_complex = {got} but M·I^⊥ = 0 is {expected}"),
        || module_ce(b, &[("M", &m, "free_op")]),
    );
    Ok(out)
}

fn trial_dual_basis_and_psi(rng: &mut ChaCha8Rng, opts: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    // dual basis against the pairing kernel on a fresh random presentation
    let pres = random_presentation(rng, default_field(), PresentationShape::default())?;
    let n = pres.n();
    let slices = build_slices(&pres, n)?;
    let data = compute_orthogonal_via_ordering(&slices)?;
    let table = PathTable::new(&pres.quiver().opposite(), n);
    let span = Subspace::from_vectors(
        pres.field(),
        table.len(),
        &data.h_basis.iter().map(|h| h.to_vector(&table)).collect::<Vec<_>>(),
    );
    let direct = compute_orthogonal(&slices);
    let mut out = oracle_trial(rng, corpus, "psi", opts.mutate)?;
    out.check(
        span == direct && data.h_basis.len() == direct.dim(),
        || "dual basis does not span the pairing kernel".into(),
        || serde_json::to_value(presentation_doc(&pres, n, BTreeMap::new())).expect("serializable"),
    );
    Ok(out)
}

fn trial_nu_oracle(rng: &mut ChaCha8Rng, opts: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    oracle_trial(rng, corpus, "nu", opts.mutate)
}

// ---- torsion ----

const TORSION_PARAMS: [(usize, usize, i64); 5] = [(3, 1, 0), (3, 1, 2), (4, 1, 0), (4, 1, 1), (2, 1, 0)];

fn random_dual_module(rng: &mut ChaCha8Rng, b: &AlgebraBundle, hi: i64) -> Result<GradedModule> {
    let count = rng.gen_range(1..=2);
    let gens = random_generators(rng, b.lambda.vertex_count(), &[0, 1, 2, 3, 4], count);
    let rels = rng.gen_range(1..=4);
    random_cyclic_quotient(rng, b.dual.clone(), &gens, hi, &[1, 2, 3, 4, 5, 6], rels)
}

fn trial_torsionfree(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let (n, r, m) = *TORSION_PARAMS.choose(rng).expect("nonempty");
    let loops = rng.gen_range(1..=2);
    let b = corpus.truncated(if n == 4 { 1 } else { loops }, n);
    let params = TorsionParams::new(n, r, m)?;
    let module = random_dual_module(rng, b, 6)?;
    let free = is_torsionfree(&module, &params);
    let t_zero = torsion_submodule(&module, &params).iter().all(|s| s.is_zero());
    let mut out = Outcome::default().class(if free { "torsionfree" } else { "torsion" });
    out.check(
        free == t_zero,
        || format!("(n, r, m) = ({n}, {r}, {m}): torsionfree = {free}, torsion submodule zero = {t_zero}"),
        || module_ce(b, &[("M", &module, "dual")]),
    );
    Ok(out)
}

fn trial_torsion_transport(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let b = if rng.gen_bool(0.5) { corpus.one_loop() } else { corpus.two_loop() };
    let params = TorsionParams::new(3, 1, 0)?;
    let m = random_dual_module(rng, b, 5)?;
    let c = nu(&m, &b.lambda, false)?;
    let (g, g_star) = (in_g(&m, &params), in_g_star(&c, &params)?);
    let t = m.support().iter().all(|&d| !params.in_s(d));
    let t_star = in_t_star(&c, &params);
    let mut out = Outcome::default().class(if g { "in_G" } else { "not_in_G" });
    out.check(g == g_star, || format!("in_G = {g}, in_G* of ν(M) = {g_star}"), || module_ce(b, &[("M", &m, "dual")]));
    out.check(
        t == t_star,
        || format!("M_S = 0 is {t}, in_T* of ν(M) = {t_star}"),
        || module_ce(b, &[("M", &m, "dual")]),
    );
    Ok(out)
}

fn trial_contraction_kernel(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let b = if rng.gen_bool(0.5) { corpus.one_loop() } else { corpus.two_loop() };
    let params = TorsionParams::new(3, 1, 0)?;
    let m = random_dual_module(rng, b, 5)?;
    let c = nu(&m, &b.lambda, false)?;
    let h = contract_h(&c, 0);
    let g = contract_g(&c, 0);
    let t_star = in_t_star(&c, &params);
    let mut out = Outcome::default().class(if t_star { "in_T*" } else { "not_in_T*" });
    let ce = || module_ce(b, &[("M", &m, "dual")]);
    out.check(h.trimmed().is_zero() == t_star, || format!("H(ν(M)) zero vs in_T* = {t_star}"), ce);
    out.check(h.is_n_complex(2) && g.is_n_complex(2), || "a contraction is not a 2-complex".into(), ce);
    Ok(out)
}

// ---- the equivalence ----

/// A random module in `L(S, U)` with small dimensions: the restriction of a module in
/// `G`, which `F` must carry to `H(ν(M))`.
fn random_l_module(
    rng: &mut ChaCha8Rng,
    b: &AlgebraBundle,
    params: &TorsionParams,
) -> Result<(GradedModule, GradedModule)> {
    loop {
        let count = rng.gen_range(1..=2);
        let gens = random_generators(rng, b.lambda.vertex_count(), &[0, 3], count);
        let rels = rng.gen_range(3..=6);
        let m = random_cyclic_quotient(rng, b.dual.clone(), &gens, 4, &[1, 2, 3, 4], rels)?;
        if !in_g(&m, params) {
            continue;
        }
        let x = m.restrict_s(params.m, b.u.clone())?;
        if !x.is_zero() && x.degrees().all(|d| x.dim(d) <= 2) && in_l(&x, params)? {
            return Ok((m, x));
        }
    }
}

/// Breaks condition (a) by summing a term cogenerated one degree off, or condition
/// (b) by zeroing the even differentials.
fn negative_control(rng: &mut ChaCha8Rng, b: &AlgebraBundle, c: &ComplexOfGraded) -> Result<ComplexOfGraded> {
    let odd_nonzero = c.positions().any(|k| k.rem_euclid(2) == 1 && !c.term(k).is_zero());
    if rng.gen_bool(0.5) && odd_nonzero {
        let terms: Vec<GradedModule> = c.positions().map(|k| c.term(k)).collect();
        let diffs = c
            .positions()
            .take(terms.len().saturating_sub(1))
            .map(|k| {
                if k.rem_euclid(2) == 0 {
                    crate::grmod::GradedMorphism::zero(&c.term(k), &c.term(k + 1))
                } else {
                    c.diff(k)
                }
            })
            .collect();
        return ComplexOfGraded::new(c.algebra().clone(), 2, c.lo(), terms, diffs);
    }
    let k = if c.is_zero() { 0 } else { c.lo() };
    let dm = DegreeMap::new(0, b.n());
    let extra = crate::complexes::coinduced(&b.lambda, &vec![1; b.lambda.vertex_count()], dm.delta(k) + 1, false)?;
    c.direct_sum(&ComplexOfGraded::stalk(extra, k, 2))
}

fn trial_equivalence(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let b = corpus.two_loop();
    let params = TorsionParams::new(3, 1, 0)?;
    let (m1, x1) = random_l_module(rng, b, &params)?;
    let (_, x2) = random_l_module(rng, b, &params)?;
    let ce = || module_ce(b, &[("X", &x1, "u"), ("Y", &x2, "u")]);
    let f1 = equivalence_f(&x1, &params, &b.lambda)?;
    let f2 = equivalence_f(&x2, &params, &b.lambda)?;
    let (hm, hc) = (x1.hom_dim(&x2)?, hom_complexes_dim(&f1, &f2)?);
    let mut out = Outcome::default().class(format!("hom_dim_{hm}"));
    out.check(hm == hc, || format!("dim Hom(X, Y) = {hm} but dim Hom(F X, F Y) = {hc}"), ce);
    let square = contract_h(&nu(&m1, &b.lambda, false)?, 0);
    out.check(iso_complexes(&f1, &square)?, || "F(X) is not H(ν(M)) for the module M restricting to X".into(), ce);
    let back = extract_module(&f1, &params, &b.u)?;
    out.check(back.find_isomorphism(&x1)?.is_some(), || "extracting from F(X) does not give X".into(), ce);
    let again = equivalence_f(&back, &params, &b.lambda)?;
    out.check(iso_complexes(&again, &f1)?, || "F of the extracted module is not the complex".into(), ce);
    let (ok, _) = in_y(&f1, &params, &b.u)?;
    out.check(ok, || "F(X) is not recognized in Y".into(), ce);
    let bad = negative_control(rng, b, &f1)?;
    let rejected = !in_y(&bad, &params, &b.u)?.0 && conditions_y(&bad, &params)?.is_some();
    out.check(rejected, || "a complex violating (a) or (b) passed the Y test".into(), || complex_ce(b, "C", &bad));
    Ok(out.class("negative_control"))
}

fn trial_duality_square(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let (b, op) = if rng.gen_bool(0.5) {
        (corpus.one_loop(), corpus.one_loop_op())
    } else {
        (corpus.two_loop(), corpus.two_loop_op())
    };
    let count = rng.gen_range(1..=2);
    let gens = random_generators(rng, 1, &[-2, -1, 0], count);
    let rels = rng.gen_range(2..=5);
    let m = random_cyclic_quotient(rng, op.dual.clone(), &gens, 2, &[-1, 0, 1, 2], rels)?;
    let left = nu(&m, &op.lambda, false)?.dual(b.lambda.clone())?;
    let right = psi(&m.graded_dual(b.dual.clone())?, &b.lambda, false)?;
    let mut out = Outcome::default().class("module");
    out.check(
        iso_complexes(&left, &right)?,
        || "D(ν(M)) is not Ψ(D(M))".into(),
        || {
            let mut doc = presentation_doc(&op.pres, op.lambda_slices.top(), BTreeMap::new());
            doc.modules.insert("M".into(), module_to_doc(&m, "dual"));
            serde_json::to_value(doc).expect("serializable")
        },
    );
    Ok(out)
}

fn trial_dual_pipeline(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let (b, op) = (corpus.two_loop(), corpus.two_loop_op());
    let params = TorsionParams::new(3, 1, 0)?;
    // a module over U^op, either the restriction of a module in G or a random quotient
    let y = if rng.gen_bool(0.6) {
        random_l_module(rng, op, &params)?.1
    } else {
        let gens = random_generators(rng, 1, &[0, 3], 1);
        let rels = rng.gen_range(1..=3);
        random_cyclic_quotient(rng, op.u.clone(), &gens, 4, &[1, 2, 3, 4], rels)?
    };
    let x = y.graded_dual(b.u.clone())?;
    let (lo, l) = (in_lo(&x, &params)?, in_l(&y, &params)?);
    let ce = || module_ce(b, &[("X", &x, "u")]);
    let mut out = Outcome::default().class(if lo { "in_Lo" } else { "not_in_Lo" });
    out.check(lo == l, || format!("in_Lo(X) = {lo} but in_L(D X) = {l}"), ce);
    if lo {
        match equivalence_f_dual(&x, &params, &b.lambda, op) {
            Ok(c) => out.check(conditions_yo(&c, &params)?.is_none(), || "dual output violates (a)/(b)".into(), ce),
            Err(e) => out.check(false, || format!("dual equivalence failed: {e}"), ce),
        }
    }
    Ok(out)
}

fn trial_even_presentations(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let b = if rng.gen_bool(0.5) { corpus.one_loop() } else { corpus.two_loop() };
    let even = rng.gen_bool(0.6);
    let degrees: &[i64] = if even { &[0, 2] } else { &[1, 3] };
    let count = rng.gen_range(1..=2);
    let gens = random_generators(rng, 1, degrees, count);
    let rel_degrees: Vec<i64> = if even { vec![2, 4] } else { vec![1, 2, 3, 4] };
    let rels = rng.gen_range(0..=3);
    let v = random_cyclic_quotient(rng, b.e.clone(), &gens, 3, &rel_degrees, rels)?;
    let presented_even = presented_in_degrees(&v, |d| d.rem_euclid(2) == 0)?;
    let l = in_l_e(&v)?;
    let mut out = Outcome::default();
    if presented_even {
        out = out.class("presented_even");
        out.check(l, || "presented in even degrees but not in L_E".into(), || module_ce(b, &[("V", &v, "e")]));
    } else if !l {
        out = out.class("odd_failure");
    } else {
        out = out.class("odd_in_L_E");
    }
    Ok(out)
}

fn trial_koszul(rng: &mut ChaCha8Rng, _: &SuiteOptions, corpus: &Corpus) -> Result<Outcome> {
    let (loops, n, bound) = *[(1, 2, 6), (1, 3, 6), (1, 4, 6), (2, 2, 4), (2, 3, 5)].choose(rng).expect("nonempty");
    let b = corpus.truncated(loops, n);
    let dm = DegreeMap::new(0, n);
    let koszul = is_n_koszul(&b.lambda, bound)?;
    let ext = ext_dims(&b.lambda, bound)?;
    let mut out = Outcome::default().class(format!("{loops}_loops_n{n}"));
    let ce = || json!({ "loops": loops, "n": n, "bound": bound });
    out.check(koszul, || "truncated algebra reported not n-Koszul".into(), ce);
    for (j, t) in ext.iter().enumerate() {
        let want = b.dual_slices.dim(dm.delta(j as i64) as usize);
        out.check(
            t[0][0] == want,
            || format!("dim Ext^{j} = {} but dim of the dual in degree δ({j}) = {want}", t[0][0]),
            ce,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_few_trials() {
        let corpus = Corpus::default();
        let opts = SuiteOptions { trials: 8, seed: 11, mutate: false };
        for name in SUITES {
            let r = run_suite(name, &opts, &corpus).unwrap();
            assert!(r.ok(), "{name}: {:?}", r.failures.iter().map(|f| &f.message).collect::<Vec<_>>());
            assert_eq!(r.passed, 8);
        }
    }

    #[test]
    fn twisted_differential_is_caught_with_a_replayable_counterexample() {
        let corpus = Corpus::default();
        let opts = SuiteOptions { trials: 30, seed: 3, mutate: true };
        let r = run_suite("prop22", &opts, &corpus).unwrap();
        assert!(!r.ok());
        let f = &r.failures[0];
        let doc = crate::io::InputDocument::from_json(&f.counterexample.to_string()).unwrap();
        assert!(doc.modules.contains_key("M"));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let opts = SuiteOptions { trials: 1, seed: 0, mutate: false };
        assert!(run_suite("nope", &opts, &Corpus::default()).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let opts = SuiteOptions { trials: 6, seed: 5, mutate: false };
        let a = run_suite("lemma32", &opts, &Corpus::default()).unwrap();
        let b = run_suite("lemma32", &opts, &Corpus::default()).unwrap();
        assert_eq!(a.classes, b.classes);
    }
}
