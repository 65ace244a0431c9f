//! JSON documents: presentations with named modules and complexes, and their
//! serialization for reports.
//!
//! Paths are written as arrow names joined by dots, `"x.y.x"` meaning x then y then x.
//! Matrices are lists of rows. A module lists, for each generator of its algebra (by
//! name, e.g. `"x^o"` or `"y^o.x^o.x^o"`), one matrix per degree of its window; missing
//! generators act by zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{build_slices, GradedAlgebra, Presentation};
use crate::complexes::ComplexOfGraded;
use crate::corpus::AlgebraBundle;
use crate::error::{Error, Result};
use crate::grmod::{GradedModule, GradedMorphism};
use crate::linalg::{Field, Matrix, DEFAULT_MODULUS};
use crate::quiver::{PathElement, Quiver};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuiverDoc {
    pub vertices: usize,
    pub arrows: Vec<ArrowDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleDoc {
    /// One of `lambda`, `dual`, `u`, `e`, `free_op`, or the same with an `_op` suffix
    /// for the opposite algebra.
    pub over: String,
    pub lo: i64,
    /// Vertex dimensions per degree, from `lo`.
    pub dims: Vec<Vec<usize>>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexDoc {
    pub period: usize,
    pub lo: i64,
    /// Modules over `lambda` (or `lambda_op`).
    pub terms: Vec<ModuleDoc>,
    /// `differentials[i]`: one matrix per degree of the window of `terms[i]`.
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputDocument {
    #[serde(default)]
    pub modulus: Option<u32>,
    pub quiver: QuiverDoc,
    pub n: usize,
    /// Each relation is a list of `[coefficient, path]` terms.
    #[serde(default)]
    pub relations: Vec<Vec<(i64, String)>>,
    /// Use every path of length n as a relation (`relations` is then ignored).
    #[serde(default)]
    pub truncated: bool,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub m: Option<i64>,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDoc>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDoc>,
}

fn parse_err(path: impl Into<String>, e: impl std::fmt::Display) -> Error {
    Error::Parse { path: path.into(), msg: e.to_string() }
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn field(&self, modulus: Option<u32>) -> Result<Field> {
        Field::new(modulus.or(self.modulus).unwrap_or(DEFAULT_MODULUS))
    }

    pub fn presentation(&self, field: Field) -> Result<Presentation> {
        let triples: Vec<(&str, usize, usize)> =
            self.quiver.arrows.iter().map(|a| (a.name.as_str(), a.source, a.target)).collect();
        let q = Quiver::from_triples(self.quiver.vertices, &triples).map_err(|e| parse_err("quiver", e))?;
        if self.truncated {
            return Presentation::truncated(field, q, self.n).map_err(|e| parse_err("truncated", e));
        }
        let mut rels = Vec::new();
        for (i, terms) in self.relations.iter().enumerate() {
            let mut parsed = Vec::new();
            for (j, (c, p)) in terms.iter().enumerate() {
                let path = q.parse_path(p).map_err(|e| parse_err(format!("relations[{i}][{j}]"), e))?;
                parsed.push((path, *c));
            }
            let degree = parsed.first().map_or(self.n, |(p, _)| p.len());
            let rel =
                PathElement::from_terms(field, degree, parsed).map_err(|e| parse_err(format!("relations[{i}]"), e))?;
            rels.push(rel);
        }
        Presentation::new(field, q, self.n, rels, None).map_err(|e| parse_err("relations", e))
    }

    /// The algebras of the presentation computed through `window` (default `4n`).
    pub fn bundle(&self, field: Field, window: Option<usize>) -> Result<AlgebraBundle> {
        let w = window.or(self.window).unwrap_or(4 * self.n);
        AlgebraBundle::new(self.presentation(field)?, w)
    }
}

/// A document holding `pres` (relations written out unless it is truncated) and the given modules.
pub fn presentation_doc(pres: &Presentation, window: usize, modules: BTreeMap<String, ModuleDoc>) -> InputDocument {
    let q = pres.quiver();
    let truncated = pres.degree_cap() == Some(pres.n() - 1);
    let relations = if truncated {
        vec![]
    } else {
        pres.relations().iter().map(|r| r.terms().map(|(p, c)| (i64::from(c), q.format_path(p))).collect()).collect()
    };
    InputDocument {
        modulus: Some(pres.field().modulus()),
        quiver: QuiverDoc {
            vertices: q.vertex_count(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowDoc { name: a.name.clone(), source: a.source, target: a.target })
                .collect(),
        },
        n: pres.n(),
        relations,
        truncated,
        window: Some(window),
        m: None,
        r: None,
        modules,
        complexes: BTreeMap::new(),
    }
}

/// The bundle for a presentation and, lazily, its opposite.
pub struct Algebras {
    pub bundle: AlgebraBundle,
    op: std::cell::OnceCell<AlgebraBundle>,
    free_op: std::cell::OnceCell<Arc<GradedAlgebra>>,
}

impl Algebras {
    pub fn new(bundle: AlgebraBundle) -> Self {
        Algebras { bundle, op: Default::default(), free_op: Default::default() }
    }

    pub fn opposite(&self) -> Result<&AlgebraBundle> {
        if self.op.get().is_none() {
            let _ = self.op.set(self.bundle.opposite()?);
        }
        Ok(self.op.get().expect("set"))
    }

    /// `KQ^op` without relations, through the bundle's window.
    pub fn free_op(&self) -> Result<Arc<GradedAlgebra>> {
        if self.free_op.get().is_none() {
            let b = &self.bundle;
            let pres = Presentation::new(b.field(), b.dual_pres.quiver().clone(), b.n(), vec![], None)?;
            let slices = build_slices(&pres, b.lambda_slices.top())?;
            let _ = self.free_op.set(Arc::new(GradedAlgebra::path(Arc::new(slices))));
        }
        Ok(self.free_op.get().expect("set").clone())
    }

    pub fn resolve(&self, name: &str) -> Result<Arc<GradedAlgebra>> {
        let (base, b) = match name.strip_suffix("_op") {
            Some(base) => (base, self.opposite()?),
            None => (name, &self.bundle),
        };
        Ok(match base {
            "lambda" => b.lambda.clone(),
            "dual" => b.dual.clone(),
            "u" => b.u.clone(),
            "e" => b.e.clone(),
            "free" if name == "free_op" => self.free_op()?,
            _ => return Err(parse_err("over", format!("unknown algebra '{name}'"))),
        })
    }
}

fn matrix_from_rows(field: Field, rows: usize, cols: usize, data: &[Vec<i64>], at: &str) -> Result<Matrix> {
    if data.is_empty() {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(parse_err(at, format!("expected a {rows}x{cols} matrix")));
    }
    Matrix::from_rows(field, data).map_err(|e| parse_err(at, e))
}

fn rows_of(m: &Matrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|&x| i64::from(x)).collect()).collect()
}

pub fn module_from_doc(doc: &ModuleDoc, algebra: Arc<GradedAlgebra>, at: &str) -> Result<GradedModule> {
    let f = algebra.field();
    let nv = algebra.vertex_count();
    if let Some(i) = doc.dims.iter().position(|d| d.len() != nv) {
        return Err(parse_err(format!("{at}.dims[{i}]"), format!("expected {nv} vertex dimensions")));
    }
    for name in doc.actions.keys() {
        if !algebra.generators().iter().any(|g| &g.name == name) {
            return Err(parse_err(format!("{at}.actions"), format!("unknown generator '{name}'")));
        }
    }
    let hi = doc.lo + doc.dims.len() as i64 - 1;
    let dim = |d: i64| if d < doc.lo || d > hi { 0 } else { doc.dims[(d - doc.lo) as usize].iter().sum::<usize>() };
    let mut actions = Vec::new();
    for gen in algebra.generators() {
        let e = gen.degree as i64;
        let given = doc.actions.get(&gen.name);
        let mut acts = Vec::new();
        for (i, d) in (doc.lo..=hi).enumerate() {
            let rows = if d + e <= hi { dim(d + e) } else { 0 };
            let data = given.and_then(|g| g.get(i)).map(|x| x.as_slice()).unwrap_or(&[]);
            acts.push(matrix_from_rows(f, rows, dim(d), data, &format!("{at}.actions.{}[{i}]", gen.name))?);
        }
        actions.push(acts);
    }
    GradedModule::new(algebra, doc.lo, doc.dims.clone(), actions).map_err(|e| parse_err(at, e))
}

pub fn module_to_doc(m: &GradedModule, over: &str) -> ModuleDoc {
    let m = m.trimmed();
    let mut actions = BTreeMap::new();
    for (g, gen) in m.algebra().generators().iter().enumerate() {
        let mats: Vec<Vec<Vec<i64>>> = m.degrees().map(|d| rows_of(&m.action(g, d))).collect();
        if mats.iter().flatten().flatten().any(|&x| x != 0) {
            actions.insert(gen.name.clone(), mats);
        }
    }
    ModuleDoc { over: over.into(), lo: m.lo(), dims: m.degrees().map(|d| m.vertex_dims(d)).collect(), actions }
}

pub fn complex_from_doc(doc: &ComplexDoc, algebras: &Algebras, at: &str) -> Result<ComplexOfGraded> {
    let over = doc.terms.first().map_or("lambda", |t| t.over.as_str());
    let lambda = algebras.resolve(over)?;
    let terms: Vec<GradedModule> = doc
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.over != over {
                return Err(parse_err(format!("{at}.terms[{i}]"), "all terms must live over one algebra"));
            }
            module_from_doc(t, lambda.clone(), &format!("{at}.terms[{i}]"))
        })
        .collect::<Result<_>>()?;
    if terms.is_empty() {
        return Ok(ComplexOfGraded::zero(lambda, doc.period));
    }
    let f = lambda.field();
    let mut diffs = Vec::new();
    for i in 0..terms.len() - 1 {
        let (s, t) = (&terms[i], &terms[i + 1]);
        let given = doc.differentials.get(i);
        let maps = s
            .degrees()
            .enumerate()
            .map(|(k, d)| {
                let data = given.and_then(|g| g.get(k)).map(|x| x.as_slice()).unwrap_or(&[]);
                matrix_from_rows(f, t.dim(d), s.dim(d), data, &format!("{at}.differentials[{i}][{k}]"))
            })
            .collect::<Result<_>>()?;
        diffs.push(GradedMorphism { lo: s.lo(), maps });
    }
    ComplexOfGraded::new(lambda, doc.period, doc.lo, terms, diffs).map_err(|e| parse_err(at, e))
}

pub fn complex_to_doc(c: &ComplexOfGraded, over: &str) -> ComplexDoc {
    let c = c.trimmed();
    let terms: Vec<GradedModule> = c.positions().map(|k| c.term(k)).collect();
    let docs = terms.iter().map(|t| module_to_doc(t, over)).collect::<Vec<_>>();
    // differentials are written against the trimmed windows of the documents
    let trimmed: Vec<GradedModule> = terms.iter().map(|t| t.trimmed()).collect();
    let differentials = c
        .positions()
        .zip(0..)
        .take(terms.len().saturating_sub(1))
        .map(|(k, i)| {
            let (s, t) = (&trimmed[i], &trimmed[i + 1]);
            let d = c.diff(k);
            s.degrees().map(|deg| rows_of(&d.at(deg, s, t))).collect()
        })
        .collect();
    ComplexDoc { period: c.period(), lo: c.lo(), terms: docs, differentials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{default_field, truncated_loops};

    const ONE_LOOP: &str = r#"{
        "quiver": {"vertices": 1, "arrows": [{"name": "a", "source": 0, "target": 0}]},
        "n": 3,
        "relations": [[[1, "a.a.a"]]],
        "window": 9,
        "modules": {
            "S": {"over": "dual", "lo": 0, "dims": [[1]]},
            "R": {"over": "u", "lo": 0, "dims": [[1], [1]], "actions": {"a^o": [[[1]], []]}}
        }
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let doc = InputDocument::from_json(ONE_LOOP).unwrap();
        let f = doc.field(None).unwrap();
        let alg = Algebras::new(doc.bundle(f, None).unwrap());
        assert_eq!(alg.bundle.lambda_slices.dims()[..4], [1, 1, 1, 0]);
        let r = module_from_doc(&doc.modules["R"], alg.resolve("u").unwrap(), "modules.R").unwrap();
        assert_eq!(module_to_doc(&r, "u"), doc.modules["R"]);
        let again = InputDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
        let written = presentation_doc(&alg.bundle.pres, 9, doc.modules.clone());
        let reparsed = written.presentation(f).unwrap();
        assert_eq!(reparsed.relations(), alg.bundle.pres.relations());
    }

    #[test]
    fn diagnostics_name_the_location() {
        let err = InputDocument::from_json("{\"n\": 3,\n \"quiver\": 5}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let mut doc = InputDocument::from_json(ONE_LOOP).unwrap();
        doc.modules.get_mut("R").unwrap().actions.insert("a^o".into(), vec![vec![vec![1, 1]], vec![]]);
        let alg = Algebras::new(doc.bundle(default_field(), None).unwrap());
        let err = module_from_doc(&doc.modules["R"], alg.resolve("u").unwrap(), "modules.R").unwrap_err();
        assert!(err.to_string().contains("modules.R.actions.a^o[0]"), "{err}");
        assert!(alg.resolve("nonsense").is_err());
    }

    #[test]
    fn complexes_round_trip() {
        let b = AlgebraBundle::new(truncated_loops(default_field(), 1, 3).unwrap(), 9).unwrap();
        let reg = GradedModule::regular(b.dual.clone(), 3).unwrap();
        let c = crate::complexes::nu(&reg, &b.lambda, false).unwrap();
        let doc = complex_to_doc(&c, "lambda");
        let alg = Algebras::new(b);
        let back = complex_from_doc(&doc, &alg, "c").unwrap();
        assert!(crate::complexes::iso_complexes(&back, &c).unwrap());
        assert_eq!(complex_to_doc(&back, "lambda"), doc);
    }
}
