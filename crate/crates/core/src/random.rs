//! Seeded random instances: presentations, modules and matrices.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{GradedAlgebra, Presentation};
use crate::error::Result;
use crate::grmod::{FreeLayout, GradedModule};
use crate::linalg::{Field, Matrix, Subspace};
use crate::quiver::{enumerate_paths, PathElement, Quiver};

pub fn random_matrix(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..field.modulus()));
        }
    }
    m
}

/// A random invertible matrix (rejection sampling).
pub fn random_invertible(rng: &mut impl Rng, field: Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_vector(rng: &mut impl Rng, field: Field, n: usize) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..field.modulus())).collect()
}

/// Bounds for [`random_presentation`].
#[derive(Debug, Clone, Copy)]
pub struct PresentationShape {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub degrees: &'static [usize],
    pub max_relations: usize,
}

impl Default for PresentationShape {
    fn default() -> Self {
        PresentationShape { max_vertices: 3, max_arrows: 4, degrees: &[2, 3, 4], max_relations: 3 }
    }
}

/// A random quiver with homogeneous relations of degree `n`, each supported on one
/// pair of endpoints.
pub fn random_presentation(rng: &mut impl Rng, field: Field, shape: PresentationShape) -> Result<Presentation> {
    loop {
        let nv = rng.gen_range(1..=shape.max_vertices);
        let na = rng.gen_range(1..=shape.max_arrows);
        let names: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
        let triples: Vec<(&str, usize, usize)> =
            names.iter().map(|s| (s.as_str(), rng.gen_range(0..nv), rng.gen_range(0..nv))).collect();
        let q = Quiver::from_triples(nv, &triples)?;
        let n = *shape.degrees.choose(rng).expect("nonempty degree list");
        let paths = enumerate_paths(&q, n);
        if paths.is_empty() {
            continue;
        }
        let mut rels = Vec::new();
        for _ in 0..rng.gen_range(0..=shape.max_relations) {
            let anchor = paths.choose(rng).expect("nonempty");
            let block: Vec<_> =
                paths.iter().filter(|p| p.source() == anchor.source() && p.target(&q) == anchor.target(&q)).collect();
            let mut terms = Vec::new();
            for p in block {
                if rng.gen_bool(0.6) {
                    terms.push((p.clone(), rng.gen_range(1..field.modulus()) as i64));
                }
            }
            let rel = PathElement::from_terms(field, n, terms)?;
            if !rel.is_zero() {
                rels.push(rel);
            }
        }
        return Presentation::new(field, q, n, rels, None);
    }
}

/// Random vertex dimensions per degree in `[lo, hi]`, each total at most `max_dim`.
pub fn random_dims(rng: &mut impl Rng, vertices: usize, lo: i64, hi: i64, max_dim: usize) -> Vec<Vec<usize>> {
    (lo..=hi)
        .map(|_| {
            let total = rng.gen_range(0..=max_dim);
            let mut dims = vec![0; vertices];
            for _ in 0..total {
                dims[rng.gen_range(0..vertices)] += 1;
            }
            dims
        })
        .collect()
}

/// A module with random block-structured actions. Valid exactly when the algebra is a
/// path algebra without relations (every choice of arrow actions is a module).
pub fn random_free_algebra_module(
    rng: &mut impl Rng,
    algebra: Arc<GradedAlgebra>,
    lo: i64,
    hi: i64,
    max_dim: usize,
) -> Result<GradedModule> {
    let f = algebra.field();
    let comps = random_dims(rng, algebra.vertex_count(), lo, hi, max_dim);
    let dims = |d: i64| -> Vec<usize> {
        if d < lo || d > hi {
            vec![0; algebra.vertex_count()]
        } else {
            comps[(d - lo) as usize].clone()
        }
    };
    let mut actions = Vec::new();
    for gen in algebra.generators() {
        let e = gen.degree as i64;
        let mut acts = Vec::new();
        for d in lo..=hi {
            let (src, tgt) = (dims(d), dims(d + e));
            let rows: usize = if d + e <= hi { tgt.iter().sum() } else { 0 };
            let mut m = Matrix::zeros(f, rows, src.iter().sum());
            if rows > 0 {
                let r0: usize = tgt[..gen.target].iter().sum();
                let c0: usize = src[..gen.source].iter().sum();
                let block = random_matrix(rng, f, tgt[gen.target], src[gen.source]);
                m.set_block(r0, c0, &block);
            }
            acts.push(m);
        }
        actions.push(acts);
    }
    GradedModule::from_parts(algebra, lo, comps, actions)
}

/// The quotient of `m` by the submodule generated by `x·a` for all `x` and all the
/// given homogeneous algebra elements `(degree, coordinates)`.
pub fn annihilating_quotient(m: &GradedModule, elements: &[(usize, Vec<u32>)]) -> Result<GradedModule> {
    let f = m.field();
    let mut gens: Vec<Subspace> = m.degrees().map(|d| Subspace::zero(f, m.dim(d))).collect();
    for d in m.degrees() {
        for (e, coords) in elements {
            let t = d + *e as i64;
            if t > m.hi() || m.dim(d) == 0 || m.dim(t) == 0 {
                continue;
            }
            let img = m.element_action(*e, coords, d).image();
            let i = (t - m.lo()) as usize;
            gens[i] = gens[i].sum(&img)?;
        }
    }
    let sub = m.generated_submodule(&gens);
    Ok(m.quotient(&sub)?.0)
}

/// The same module data over another algebra with the same generators, validated there.
pub fn retarget(m: &GradedModule, algebra: Arc<GradedAlgebra>) -> Result<GradedModule> {
    let comps: Vec<Vec<usize>> = m.degrees().map(|d| m.vertex_dims(d)).collect();
    GradedModule::new(algebra, m.lo(), comps, m.actions().to_vec())
}

/// A random quotient of the free module on `gens`, truncated at `hi`, by the submodule
/// generated by `relations` random elements in random degrees among `relation_degrees`.
pub fn random_cyclic_quotient(
    rng: &mut impl Rng,
    algebra: Arc<GradedAlgebra>,
    gens: &[(usize, i64)],
    hi: i64,
    relation_degrees: &[i64],
    relations: usize,
) -> Result<GradedModule> {
    let free = FreeLayout::new(algebra, gens, hi)?.module;
    if free.is_zero() {
        return Ok(free);
    }
    let f = free.field();
    let mut sub: Vec<Subspace> = free.degrees().map(|d| Subspace::zero(f, free.dim(d))).collect();
    let usable: Vec<i64> = relation_degrees.iter().copied().filter(|&d| free.dim(d) > 0).collect();
    for _ in 0..relations {
        let Some(&d) = usable.choose(rng) else { break };
        // a random element supported at one vertex keeps the relation homogeneous for Λ_0
        let verts = free.basis_vertices(d);
        let v = verts[rng.gen_range(0..verts.len())];
        let mut x = random_vector(rng, f, free.dim(d));
        for (c, w) in x.iter_mut().zip(&verts) {
            if *w != v {
                *c = 0;
            }
        }
        let i = (d - free.lo()) as usize;
        sub[i] = sub[i].sum(&Subspace::from_vectors(f, free.dim(d), &[x]))?;
    }
    let closed = free.generated_submodule(&sub);
    Ok(free.quotient(&closed)?.0)
}

/// Random generator list: `count` generators at random vertices in degrees drawn from `degrees`.
pub fn random_generators(rng: &mut impl Rng, vertices: usize, degrees: &[i64], count: usize) -> Vec<(usize, i64)> {
    (0..count).map(|_| (rng.gen_range(0..vertices), *degrees.choose(rng).expect("nonempty"))).collect()
}
