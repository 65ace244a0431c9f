//! Finite-dimensional graded right modules over a [`GradedAlgebra`], given by
//! component dimensions per vertex and generator-action matrices.
//!
//! Within each degree the basis is ordered by vertex: all basis vectors at
//! vertex 0 first, then vertex 1, and so on. Components outside `[lo, hi]` are zero,
//! so every module here is genuinely finite-dimensional and every "for all degrees"
//! condition is decided exactly.

mod membership;
mod torsion;

pub use membership::{comultiplication, in_g, in_l, in_l_e, in_lo, kernel_condition, regrade_e_to_u};
pub use torsion::{is_torsionfree, torsion_submodule, TorsionParams};

use std::sync::Arc;

use crate::algebra::{AlgebraKind, GradedAlgebra};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{EquationSystem, Field, Matrix, Subspace};

/// Random combinations tried before an isomorphism search gives up.
pub const ISO_TRIALS: usize = 24;

#[derive(Debug, Clone)]
pub struct GradedModule {
    algebra: Arc<GradedAlgebra>,
    lo: i64,
    comps: Vec<Vec<usize>>,
    actions: Vec<Vec<Matrix>>,
}

/// A degree-preserving map of graded modules; `maps[i]` acts on degree `lo + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMorphism {
    pub lo: i64,
    pub maps: Vec<Matrix>,
}

impl GradedMorphism {
    pub fn zero(source: &GradedModule, target: &GradedModule) -> Self {
        let f = source.field();
        GradedMorphism {
            lo: source.lo,
            maps: source.degrees().map(|d| Matrix::zeros(f, target.dim(d), source.dim(d))).collect(),
        }
    }

    pub fn identity(m: &GradedModule) -> Self {
        GradedMorphism { lo: m.lo, maps: m.degrees().map(|d| Matrix::identity(m.field(), m.dim(d))).collect() }
    }

    /// The component in degree `d`, shaped `target.dim(d) x source.dim(d)`.
    pub fn at(&self, d: i64, source: &GradedModule, target: &GradedModule) -> Matrix {
        let i = d - self.lo;
        if i >= 0 && (i as usize) < self.maps.len() {
            let m = &self.maps[i as usize];
            if m.rows() == target.dim(d) && m.cols() == source.dim(d) {
                return m.clone();
            }
        }
        Matrix::zeros(source.field(), target.dim(d), source.dim(d))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GradedMorphism, a: &GradedModule, b: &GradedModule, c: &GradedModule) -> Self {
        GradedMorphism {
            lo: a.lo,
            maps: a.degrees().map(|d| other.at(d, b, c).mul_unchecked(&self.at(d, a, b))).collect(),
        }
    }

    pub fn add(&self, other: &GradedMorphism, a: &GradedModule, b: &GradedModule) -> Self {
        GradedMorphism {
            lo: a.lo,
            maps: a.degrees().map(|d| self.at(d, a, b).add(&other.at(d, a, b)).expect("same shape")).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self, a: &GradedModule, b: &GradedModule) -> bool {
        a.degrees().chain(b.degrees()).all(|d| self.at(d, a, b).is_invertible() || (a.dim(d) == 0 && b.dim(d) == 0))
    }

    /// Kernel subspaces of the source, per degree of the source window.
    pub fn kernel(&self, a: &GradedModule, b: &GradedModule) -> Vec<Subspace> {
        a.degrees().map(|d| self.at(d, a, b).kernel()).collect()
    }

    /// Image subspaces of the target, per degree of the target window.
    pub fn image(&self, a: &GradedModule, b: &GradedModule) -> Vec<Subspace> {
        b.degrees().map(|d| self.at(d, a, b).image()).collect()
    }
}

impl GradedModule {
    /// Builds and validates a module.
    pub fn new(
        algebra: Arc<GradedAlgebra>,
        lo: i64,
        comps: Vec<Vec<usize>>,
        actions: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let m = Self::from_parts(algebra, lo, comps, actions)?;
        let problems = m.validate();
        if problems.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModule(problems.join("; ")))
        }
    }

    /// Builds a module checking only matrix shapes.
    pub fn from_parts(
        algebra: Arc<GradedAlgebra>,
        lo: i64,
        comps: Vec<Vec<usize>>,
        actions: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let nv = algebra.vertex_count();
        for (i, c) in comps.iter().enumerate() {
            if c.len() != nv {
                return Err(Error::InvalidModule(format!(
                    "degree {} lists {} vertex dimensions, expected {nv}",
                    lo + i as i64,
                    c.len()
                )));
            }
        }
        if actions.len() != algebra.generators().len() {
            return Err(Error::InvalidModule(format!(
                "{} generator actions given, algebra has {} generators",
                actions.len(),
                algebra.generators().len()
            )));
        }
        let m = GradedModule { algebra, lo, comps, actions };
        for (g, acts) in m.actions.iter().enumerate() {
            let e = m.algebra.generators()[g].degree as i64;
            if acts.len() != m.comps.len() {
                return Err(Error::InvalidModule(format!(
                    "generator {} has {} matrices for {} degrees",
                    m.algebra.generators()[g].name,
                    acts.len(),
                    m.comps.len()
                )));
            }
            for (i, a) in acts.iter().enumerate() {
                let d = lo + i as i64;
                if a.rows() != m.dim(d + e) || a.cols() != m.dim(d) {
                    return Err(Error::Dimension(format!(
                        "action of {} from degree {d} is {}x{}, expected {}x{}",
                        m.algebra.generators()[g].name,
                        a.rows(),
                        a.cols(),
                        m.dim(d + e),
                        m.dim(d)
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn zero(algebra: Arc<GradedAlgebra>) -> Self {
        let gens = algebra.generators().len();
        GradedModule { algebra, lo: 0, comps: vec![], actions: vec![vec![]; gens] }
    }

    /// The simple module at vertex `v` concentrated in degree `d`.
    pub fn simple(algebra: Arc<GradedAlgebra>, v: usize, d: i64) -> Self {
        let nv = algebra.vertex_count();
        let mut c = vec![0; nv];
        c[v] = 1;
        let f = algebra.field();
        let gens = algebra.generators().len();
        GradedModule { algebra, lo: d, comps: vec![c], actions: vec![vec![Matrix::zeros(f, 0, 1)]; gens] }
    }

    /// `⊕_j e_{v_j} A[-d_j]`, truncated to degrees `<= hi`.
    pub fn free(algebra: Arc<GradedAlgebra>, gens: &[(usize, i64)], hi: i64) -> Result<Self> {
        Ok(FreeLayout::new(algebra, gens, hi)?.module)
    }

    /// The right regular module `A`, truncated to degrees `<= hi`.
    pub fn regular(algebra: Arc<GradedAlgebra>, hi: i64) -> Result<Self> {
        let gens: Vec<(usize, i64)> = (0..algebra.vertex_count()).map(|v| (v, 0)).collect();
        Self::free(algebra, &gens, hi)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    fn idx(&self, d: i64) -> Option<usize> {
        let i = d - self.lo;
        (i >= 0 && (i as usize) < self.comps.len()).then_some(i as usize)
    }

    /// Dimension per vertex in degree `d`.
    pub fn vertex_dims(&self, d: i64) -> Vec<usize> {
        self.idx(d).map_or_else(|| vec![0; self.algebra.vertex_count()], |i| self.comps[i].clone())
    }

    pub fn dim(&self, d: i64) -> usize {
        self.idx(d).map_or(0, |i| self.comps[i].iter().sum())
    }

    pub fn total_dim(&self) -> usize {
        self.comps.iter().flatten().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Degrees with a nonzero component.
    pub fn support(&self) -> Vec<i64> {
        self.degrees().filter(|&d| self.dim(d) > 0).collect()
    }

    /// Start of the block of vertex `v` in degree `d`.
    pub fn block_start(&self, d: i64, v: usize) -> usize {
        self.vertex_dims(d)[..v].iter().sum()
    }

    /// Vertex of each basis vector in degree `d`.
    pub fn basis_vertices(&self, d: i64) -> Vec<usize> {
        self.vertex_dims(d).iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect()
    }

    /// Action of generator `g` from degree `d`.
    pub fn action(&self, g: usize, d: i64) -> Matrix {
        let e = self.algebra.generators()[g].degree as i64;
        match self.idx(d) {
            Some(i) => self.actions[g][i].clone(),
            None => Matrix::zeros(self.field(), self.dim(d + e), self.dim(d)),
        }
    }

    pub fn actions(&self) -> &[Vec<Matrix>] {
        &self.actions
    }

    /// `x ↦ x·(Σ c_g g)` from degree `d`, for a combination of generators of equal degree.
    pub fn letter_action(&self, letter: &[(usize, u32)], d: i64, degree: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.dim(d + degree as i64), self.dim(d));
        for &(g, c) in letter {
            out.add_assign_scaled(&self.action(g, d), c);
        }
        out
    }

    /// Action of the basis element `i` of the algebra's degree-`e` component, from degree `d`.
    pub fn basis_action(&self, e: usize, i: usize, d: i64) -> Matrix {
        let f = self.field();
        if e == 0 {
            let (v, _) = self.algebra.basis_endpoints(0)[i];
            let mut m = Matrix::zeros(f, self.dim(d), self.dim(d));
            let start = self.block_start(d, v);
            for k in 0..self.vertex_dims(d)[v] {
                m.set(start + k, start + k, 1);
            }
            return m;
        }
        let word = self.algebra.word_for_basis(e, i);
        let mut acc = Matrix::identity(f, self.dim(d));
        let mut cur = d;
        for letter in word {
            let deg = self.algebra.generators()[letter[0].0].degree;
            acc = self.letter_action(&letter, cur, deg).mul_unchecked(&acc);
            cur += deg as i64;
        }
        acc
    }

    /// Action of a homogeneous algebra element of degree `e` given in basis coordinates.
    pub fn element_action(&self, e: usize, coords: &[u32], d: i64) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.dim(d + e as i64), self.dim(d));
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                out.add_assign_scaled(&self.basis_action(e, i, d), c);
            }
        }
        out
    }

    /// Every violated module axiom, as readable messages.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let alg = &self.algebra;
        for (g, gen) in alg.generators().iter().enumerate() {
            for d in self.degrees() {
                let m = self.action(g, d);
                let rv = self.basis_vertices(d + gen.degree as i64);
                let cv = self.basis_vertices(d);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if m.get(r, c) != 0 && (rv[r] != gen.target || cv[c] != gen.source) {
                            problems.push(format!(
                                "action of {} from degree {d} leaves its vertex block at ({r}, {c})",
                                gen.name
                            ));
                        }
                    }
                }
            }
        }
        if !problems.is_empty() || self.comps.is_empty() {
            return problems;
        }
        let span = (self.hi() - self.lo) as usize;
        for e in 1..=span {
            if !alg.knows(e) {
                problems.push(format!("algebra component of degree {e} is outside the computed window"));
                return problems;
            }
        }
        for e in 1..=span {
            for i in 0..alg.dim(e) {
                for (g, gen) in alg.generators().iter().enumerate() {
                    let total = e + gen.degree;
                    if total > span {
                        continue;
                    }
                    let prod = alg.right_generator(e, g).column(i);
                    for d in self.lo..=self.hi() - total as i64 {
                        if self.dim(d) == 0 || self.dim(d + total as i64) == 0 {
                            continue;
                        }
                        let lhs = self.element_action(total, &prod, d);
                        let rhs = self.action(g, d + e as i64).mul_unchecked(&self.basis_action(e, i, d));
                        if lhs != rhs {
                            let path = alg.quiver().format_path(alg.basis_path(e, i));
                            problems.push(format!(
                                "(x·{path})·{} differs from x·({path}·{}) on degree {d}",
                                gen.name, gen.name
                            ));
                        }
                    }
                }
            }
        }
        problems
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `M[k]` with `M[k]_d = M_{d+k}`.
    pub fn shift(&self, k: i64) -> GradedModule {
        GradedModule { lo: self.lo - k, ..self.clone() }
    }

    /// Same module on a wider (or trimmed) window `[lo, hi]`; components outside the old window are zero.
    pub fn rewindow(&self, lo: i64, hi: i64) -> GradedModule {
        let nv = self.algebra.vertex_count();
        let f = self.field();
        let comps: Vec<Vec<usize>> = (lo..=hi).map(|d| self.vertex_dims(d)).collect();
        for d in self.support() {
            assert!(d >= lo && d <= hi, "rewindow would drop degree {d}");
        }
        let actions = (0..self.algebra.generators().len())
            .map(|g| {
                let e = self.algebra.generators()[g].degree as i64;
                (lo..=hi)
                    .map(|d| if d + e > hi { Matrix::zeros(f, 0, self.dim(d)) } else { self.action(g, d) })
                    .collect()
            })
            .collect();
        let _ = nv;
        GradedModule { algebra: self.algebra.clone(), lo, comps, actions }
    }

    /// Smallest window holding the support (the zero module keeps an empty window).
    pub fn trimmed(&self) -> GradedModule {
        let s = self.support();
        match (s.first(), s.last()) {
            (Some(&a), Some(&b)) => self.rewindow(a, b),
            _ => GradedModule::zero(self.algebra.clone()),
        }
    }

    /// Degree-0 morphisms `self -> other`, as a canonical basis.
    pub fn hom_space(&self, other: &GradedModule) -> Result<Vec<GradedMorphism>> {
        check_same_algebra(self, other)?;
        let layout = HomLayout::new(self, other);
        let mut sys = EquationSystem::new(self.field(), layout.unknowns);
        layout.add_commutation(&mut sys, self, other);
        Ok(sys.solutions().basis_vectors().iter().map(|v| layout.morphism(v, self, other)).collect())
    }

    pub fn hom_dim(&self, other: &GradedModule) -> Result<usize> {
        check_same_algebra(self, other)?;
        let layout = HomLayout::new(self, other);
        let mut sys = EquationSystem::new(self.field(), layout.unknowns);
        layout.add_commutation(&mut sys, self, other);
        Ok(sys.nullity())
    }

    /// Some isomorphism `self -> other`, searched among random combinations of a Hom basis.
    /// `None` when the vertex dimensions differ or no trial combination is invertible.
    pub fn find_isomorphism(&self, other: &GradedModule) -> Result<Option<GradedMorphism>> {
        check_same_algebra(self, other)?;
        let degrees = self.lo.min(other.lo)..=self.hi().max(other.hi());
        if degrees.clone().any(|d| self.vertex_dims(d) != other.vertex_dims(d)) {
            return Ok(None);
        }
        if self.is_zero() {
            return Ok(Some(GradedMorphism::zero(self, other)));
        }
        let basis = self.hom_space(other)?;
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..ISO_TRIALS {
            let mut acc = GradedMorphism::zero(self, other);
            for b in &basis {
                let c = rng.gen_range(0..f.modulus());
                let scaled = GradedMorphism { lo: b.lo, maps: b.maps.iter().map(|m| m.scale(c)).collect() };
                acc = acc.add(&scaled, self, other);
            }
            if acc.is_iso(self, other) {
                return Ok(Some(acc));
            }
        }
        Ok(None)
    }

    /// Whether `f` is a module morphism `self -> other`.
    pub fn is_morphism(&self, f: &GradedMorphism, other: &GradedModule) -> bool {
        for d in self.degrees() {
            let fd = f.at(d, self, other);
            let (tv, sv) = (other.basis_vertices(d), self.basis_vertices(d));
            for r in 0..fd.rows() {
                for c in 0..fd.cols() {
                    if fd.get(r, c) != 0 && tv[r] != sv[c] {
                        return false;
                    }
                }
            }
            for (g, gen) in self.algebra.generators().iter().enumerate() {
                let e = gen.degree as i64;
                let lhs = f.at(d + e, self, other).mul_unchecked(&self.action(g, d));
                let rhs = other.action(g, d).mul_unchecked(&fd);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Per degree of the window, the sum of images of all generator actions (`M J`).
    pub fn radical(&self) -> Vec<Subspace> {
        let f = self.field();
        self.degrees()
            .map(|d| {
                let mut s = Subspace::zero(f, self.dim(d));
                for (g, gen) in self.algebra.generators().iter().enumerate() {
                    let src = d - gen.degree as i64;
                    if self.dim(src) > 0 && self.dim(d) > 0 {
                        s = s.sum(&self.action(g, src).image()).expect("same ambient");
                    }
                }
                s
            })
            .collect()
    }

    /// Per degree, the joint kernel of all generator actions (`Soc M`).
    pub fn socle(&self) -> Vec<Subspace> {
        self.degrees().map(|d| self.annihilator(d, |_| true)).collect()
    }

    /// Joint kernel in degree `d` of the generators selected by `pick`.
    pub fn annihilator(&self, d: i64, pick: impl Fn(usize) -> bool) -> Subspace {
        let f = self.field();
        let mut stacked = Matrix::zeros(f, 0, self.dim(d));
        for g in 0..self.algebra.generators().len() {
            if pick(g) {
                stacked = stacked.vstack(&self.action(g, d)).expect("same width");
            }
        }
        stacked.kernel()
    }

    /// Dimensions of `M / M J` per degree and vertex.
    pub fn top_dims(&self) -> Vec<(i64, Vec<usize>)> {
        let rad = self.radical();
        self.degrees().zip(rad).map(|(d, r)| (d, per_vertex_codim(self, d, &r))).collect()
    }

    /// Dimensions of the socle per degree and vertex.
    pub fn socle_dims(&self) -> Vec<(i64, Vec<usize>)> {
        self.degrees()
            .zip(self.socle())
            .map(|(d, s)| {
                let full = self.vertex_dims(d);
                let codim = per_vertex_codim(self, d, &s);
                (d, full.iter().zip(codim).map(|(a, b)| a - b).collect())
            })
            .collect()
    }

    /// Whether `M / M J` is concentrated in degrees satisfying `x`.
    pub fn generated_in_degrees(&self, x: impl Fn(i64) -> bool) -> bool {
        self.degrees().zip(self.radical()).all(|(d, r)| x(d) || r.dim() == self.dim(d))
    }

    /// Whether the socle is concentrated in degrees satisfying `x`.
    pub fn cogenerated_in_degrees(&self, x: impl Fn(i64) -> bool) -> bool {
        self.degrees().zip(self.socle()).all(|(d, s)| x(d) || s.is_zero())
    }

    /// The submodule generated by the given per-degree subspaces (window-indexed).
    pub fn generated_submodule(&self, gens: &[Subspace]) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = gens.to_vec();
        for d in self.degrees() {
            let i = (d - self.lo) as usize;
            for (g, gen) in self.algebra.generators().iter().enumerate() {
                let src = d - gen.degree as i64;
                if let Some(j) = self.idx(src) {
                    if out[j].is_zero() {
                        continue;
                    }
                    let img = out[j].map(&self.action(g, src)).expect("shapes agree");
                    out[i] = out[i].sum(&img).expect("same ambient");
                }
            }
        }
        out
    }

    /// Whether per-degree subspaces are closed under all generator actions.
    pub fn is_closed(&self, spaces: &[Subspace]) -> bool {
        self.degrees().all(|d| {
            let s = &spaces[(d - self.lo) as usize];
            self.algebra.generators().iter().enumerate().all(|(g, gen)| match self.idx(d + gen.degree as i64) {
                Some(j) => s.map(&self.action(g, d)).and_then(|img| spaces[j].contains(&img)).unwrap_or(false),
                None => true,
            })
        })
    }

    /// The submodule with the given components, and its inclusion.
    pub fn submodule(&self, spaces: &[Subspace]) -> Result<(GradedModule, GradedMorphism)> {
        if spaces.len() != self.comps.len() {
            return Err(Error::Dimension("one subspace per degree of the window is required".into()));
        }
        if !self.is_closed(spaces) {
            return Err(Error::InvalidModule("subspaces are not closed under the action".into()));
        }
        let f = self.field();
        let mut bases: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut comps = Vec::new();
        for d in self.degrees() {
            let (vecs, dims) = vertex_split(self, d, &spaces[(d - self.lo) as usize])?;
            bases.push(vecs);
            comps.push(dims);
        }
        let incl: Vec<Matrix> =
            self.degrees().zip(&bases).map(|(d, b)| Matrix::from_columns(f, self.dim(d), b)).collect();
        let mut actions = Vec::new();
        for (g, gen) in self.algebra.generators().iter().enumerate() {
            let e = gen.degree as i64;
            let mut acts = Vec::new();
            for d in self.degrees() {
                let i = (d - self.lo) as usize;
                let rows = self.idx(d + e).map_or(0, |j| bases[j].len());
                let mut m = Matrix::zeros(f, rows, bases[i].len());
                if rows > 0 {
                    let j = (d + e - self.lo) as usize;
                    let a = self.action(g, d);
                    for (c, v) in bases[i].iter().enumerate() {
                        let img = a.apply(v);
                        let coords = incl[j].solve(&img).expect("closed under action");
                        for (r, x) in coords.into_iter().enumerate() {
                            m.set(r, c, x);
                        }
                    }
                }
                acts.push(m);
            }
            actions.push(acts);
        }
        let sub = GradedModule { algebra: self.algebra.clone(), lo: self.lo, comps, actions };
        Ok((sub, GradedMorphism { lo: self.lo, maps: incl }))
    }

    /// The quotient by the given components, and the projection.
    pub fn quotient(&self, spaces: &[Subspace]) -> Result<(GradedModule, GradedMorphism)> {
        if spaces.len() != self.comps.len() {
            return Err(Error::Dimension("one subspace per degree of the window is required".into()));
        }
        if !self.is_closed(spaces) {
            return Err(Error::InvalidModule("subspaces are not closed under the action".into()));
        }
        let f = self.field();
        let mut keep = Vec::new();
        let mut comps = Vec::new();
        let mut proj = Vec::new();
        for d in self.degrees() {
            let s = &spaces[(d - self.lo) as usize];
            let np = s.non_pivots();
            let verts = self.basis_vertices(d);
            let mut dims = vec![0; self.algebra.vertex_count()];
            for &c in &np {
                dims[verts[c]] += 1;
            }
            let mut p = Matrix::zeros(f, np.len(), self.dim(d));
            for c in 0..self.dim(d) {
                let mut unit = vec![0; self.dim(d)];
                unit[c] = 1;
                let nf = s.normal_form(&unit);
                for (r, &k) in np.iter().enumerate() {
                    p.set(r, c, nf[k]);
                }
            }
            keep.push(np);
            comps.push(dims);
            proj.push(p);
        }
        let mut actions = Vec::new();
        for (g, gen) in self.algebra.generators().iter().enumerate() {
            let e = gen.degree as i64;
            let mut acts = Vec::new();
            for d in self.degrees() {
                let i = (d - self.lo) as usize;
                let a = self.action(g, d);
                let m = match self.idx(d + e) {
                    Some(j) => proj[j].mul_unchecked(&a).select_columns(&keep[i]),
                    None => Matrix::zeros(f, 0, keep[i].len()),
                };
                acts.push(m);
            }
            actions.push(acts);
        }
        let q = GradedModule { algebra: self.algebra.clone(), lo: self.lo, comps, actions };
        Ok((q, GradedMorphism { lo: self.lo, maps: proj }))
    }

    /// `self ⊕ other` with the canonical injections and projections
    /// `(sum, i1, i2, p1, p2)`.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<(GradedModule, [GradedMorphism; 4])> {
        check_same_algebra(self, other)?;
        let f = self.field();
        let nv = self.algebra.vertex_count();
        let windows: Vec<(i64, i64)> =
            [self, other].iter().filter(|m| !m.comps.is_empty()).map(|m| (m.lo, m.hi())).collect();
        let lo = windows.iter().map(|w| w.0).min().unwrap_or(0);
        let hi = windows.iter().map(|w| w.1).max().unwrap_or(-1);
        // positions of the two summands inside the vertex-ordered sum
        let place = |d: i64| -> (Vec<usize>, Vec<usize>) {
            let (a, b) = (self.vertex_dims(d), other.vertex_dims(d));
            let (mut pa, mut pb) = (Vec::new(), Vec::new());
            let mut pos = 0;
            for v in 0..nv {
                for _ in 0..a[v] {
                    pa.push(pos);
                    pos += 1;
                }
                for _ in 0..b[v] {
                    pb.push(pos);
                    pos += 1;
                }
            }
            (pa, pb)
        };
        let comps: Vec<Vec<usize>> = (lo..=hi)
            .map(|d| self.vertex_dims(d).iter().zip(other.vertex_dims(d)).map(|(a, b)| a + b).collect())
            .collect();
        let total = |d: i64| self.dim(d) + other.dim(d);
        let inj = |d: i64, pa: &[usize], n: usize| {
            let mut m = Matrix::zeros(f, total(d), n);
            for (c, &r) in pa.iter().enumerate() {
                m.set(r, c, 1);
            }
            m
        };
        let (mut i1, mut i2, mut p1, mut p2) = (vec![], vec![], vec![], vec![]);
        for d in lo..=hi {
            let (pa, pb) = place(d);
            let a = inj(d, &pa, self.dim(d));
            let b = inj(d, &pb, other.dim(d));
            p1.push(a.transpose());
            p2.push(b.transpose());
            i1.push(a);
            i2.push(b);
        }
        let mut actions = Vec::new();
        for (g, gen) in self.algebra.generators().iter().enumerate() {
            let e = gen.degree as i64;
            let mut acts = Vec::new();
            for d in lo..=hi {
                let rows = if d + e <= hi { total(d + e) } else { 0 };
                let mut m = Matrix::zeros(f, rows, total(d));
                if rows > 0 {
                    let (pa, pb) = place(d);
                    let (qa, qb) = place(d + e);
                    let (x, y) = (self.action(g, d), other.action(g, d));
                    for (c, &cc) in pa.iter().enumerate() {
                        for (r, &rr) in qa.iter().enumerate() {
                            m.set(rr, cc, x.get(r, c));
                        }
                    }
                    for (c, &cc) in pb.iter().enumerate() {
                        for (r, &rr) in qb.iter().enumerate() {
                            m.set(rr, cc, y.get(r, c));
                        }
                    }
                }
                acts.push(m);
            }
            actions.push(acts);
        }
        let sum = GradedModule { algebra: self.algebra.clone(), lo, comps, actions };
        let mk = |maps: Vec<Matrix>, from_lo: i64| GradedMorphism { lo: from_lo, maps };
        // injections are indexed from the summand's own window
        let restrict = |maps: &[Matrix], m: &GradedModule| -> Vec<Matrix> {
            m.degrees().map(|d| maps[(d - lo) as usize].clone()).collect()
        };
        let i1m = mk(restrict(&i1, self), self.lo);
        let i2m = mk(restrict(&i2, other), other.lo);
        Ok((sum, [i1m, i2m, mk(p1, lo), mk(p2, lo)]))
    }

    /// Applies a change of basis `b_d` (invertible, vertex-block diagonal) in every degree.
    pub fn conjugate(&self, change: &[Matrix]) -> GradedModule {
        let inv: Vec<Matrix> = change.iter().map(|m| m.inverse().expect("invertible")).collect();
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(g, acts)| {
                let e = self.algebra.generators()[g].degree as i64;
                acts.iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let d = self.lo + i as i64;
                        match self.idx(d + e) {
                            Some(j) => change[j].mul_unchecked(a).mul_unchecked(&inv[i]),
                            None => a.clone(),
                        }
                    })
                    .collect()
            })
            .collect();
        GradedModule { actions, ..self.clone() }
    }

    /// The graded dual `D(M)`, with `D(M)_d = (M_{-d})^*`, over the opposite algebra `target`.
    pub fn graded_dual(&self, target: Arc<GradedAlgebra>) -> Result<GradedModule> {
        let src = &self.algebra;
        if target.kind() != src.kind() || target.quiver() != &src.quiver().opposite() {
            return Err(Error::Precondition("target algebra is not the opposite of the module's algebra".into()));
        }
        let f = self.field();
        let lo = -self.hi();
        let hi = -self.lo;
        let comps: Vec<Vec<usize>> = (lo..=hi).map(|d| self.vertex_dims(-d)).collect();
        let mut actions = Vec::new();
        for gen in target.generators() {
            let e = gen.degree;
            let rev = gen.path.opposite(target.quiver());
            let coords = src.reduce_path(e, &rev)?;
            let mut acts = Vec::new();
            for d in lo..=hi {
                let m = if d + e as i64 > hi {
                    Matrix::zeros(f, 0, self.dim(-d))
                } else {
                    self.element_action(e, &coords, -d - e as i64).transpose()
                };
                acts.push(m);
            }
            actions.push(acts);
        }
        GradedModule::from_parts(target, lo, comps, actions)
    }

    /// Keeps the components in degrees of `S = m + (nZ ∪ (nZ+1))`, as a module over the
    /// support-restricted algebra `target` (which must share this module's base algebra).
    pub fn restrict_s(&self, m: i64, target: Arc<GradedAlgebra>) -> Result<GradedModule> {
        if self.algebra.kind() != AlgebraKind::Path || target.kind() != AlgebraKind::USupport {
            return Err(Error::Precondition("restriction goes from the dual algebra to its U-support".into()));
        }
        if !Arc::ptr_eq(self.algebra.base(), target.base()) && self.algebra.base().dims() != target.base().dims() {
            return Err(Error::Precondition("restriction target has a different base algebra".into()));
        }
        let n = target.n();
        let dm = crate::algebra::DegreeMap::new(m, n);
        let f = self.field();
        let comps: Vec<Vec<usize>> = self
            .degrees()
            .map(|d| if dm.contains(d) { self.vertex_dims(d) } else { vec![0; self.algebra.vertex_count()] })
            .collect();
        let tmp = GradedModule { algebra: target.clone(), lo: self.lo, comps: comps.clone(), actions: vec![] };
        let mut actions = Vec::new();
        for (g, gen) in target.generators().iter().enumerate() {
            let e = gen.degree as i64;
            let mut acts = Vec::new();
            for d in self.degrees() {
                let keep = dm.contains(d) && dm.contains(d + e) && d + e <= self.hi();
                let m = if keep {
                    if g < target.arrow_count() {
                        self.action(g, d)
                    } else {
                        let mut coords = vec![0; target.base().dim(n)];
                        coords[g - target.arrow_count()] = 1;
                        self.element_action(n, &coords, d)
                    }
                } else {
                    Matrix::zeros(f, tmp.dim(d + e), tmp.dim(d))
                };
                acts.push(m);
            }
            actions.push(acts);
        }
        GradedModule::from_parts(target, self.lo, comps, actions)
    }
}

pub(crate) fn check_same_algebra(a: &GradedModule, b: &GradedModule) -> Result<()> {
    let (x, y) = (&a.algebra, &b.algebra);
    if Arc::ptr_eq(x, y)
        || (x.kind() == y.kind() && x.generators() == y.generators() && x.base().dims() == y.base().dims())
    {
        Ok(())
    } else {
        Err(Error::Precondition("modules live over different algebras".into()))
    }
}

/// Per vertex, `dim M_{d,v} - dim (s ∩ block v)` for a vertex-graded subspace `s`.
fn per_vertex_codim(m: &GradedModule, d: i64, s: &Subspace) -> Vec<usize> {
    let verts = m.basis_vertices(d);
    let mut out = m.vertex_dims(d);
    for &p in s.pivots() {
        out[verts[p]] -= 1;
    }
    out
}

/// Splits a vertex-graded subspace of `M_d` into per-vertex bases, ordered by vertex.
fn vertex_split(m: &GradedModule, d: i64, s: &Subspace) -> Result<(Vec<Vec<u32>>, Vec<usize>)> {
    let f = m.field();
    let verts = m.basis_vertices(d);
    let nv = m.algebra.vertex_count();
    let mut out = Vec::new();
    let mut dims = vec![0; nv];
    let mut total = 0;
    for v in 0..nv {
        let parts: Vec<Vec<u32>> = s
            .basis_vectors()
            .into_iter()
            .map(|mut row| {
                for (x, &w) in row.iter_mut().zip(&verts) {
                    if w != v {
                        *x = 0;
                    }
                }
                row
            })
            .collect();
        let sv = Subspace::from_vectors(f, s.ambient_dim(), &parts);
        dims[v] = sv.dim();
        total += sv.dim();
        out.extend(sv.basis_vectors());
    }
    if total != s.dim() {
        return Err(Error::InvalidModule(format!("subspace in degree {d} is not graded by vertices")));
    }
    Ok((out, dims))
}

/// Unknown layout of a degree-0 morphism `M -> N`: one block per degree and vertex.
pub(crate) struct HomLayout {
    pub unknowns: usize,
    /// `offsets[i][v]`: first unknown of the block of degree `m.lo + i`, vertex `v`.
    offsets: Vec<Vec<usize>>,
}

impl HomLayout {
    pub fn new(m: &GradedModule, n: &GradedModule) -> Self {
        Self::with_start(m, n, 0)
    }

    pub fn with_start(m: &GradedModule, n: &GradedModule, start: usize) -> Self {
        let mut next = start;
        let mut offsets = Vec::new();
        for d in m.degrees() {
            let (a, b) = (m.vertex_dims(d), n.vertex_dims(d));
            let mut row = Vec::new();
            for v in 0..a.len() {
                row.push(next);
                next += a[v] * b[v];
            }
            offsets.push(row);
        }
        HomLayout { unknowns: next - start, offsets }
    }

    /// Index of the unknown `f_d[r, c]`, if that entry is not forced to vanish.
    pub fn var(&self, m: &GradedModule, n: &GradedModule, d: i64, r: usize, c: usize) -> Option<usize> {
        let i = d - m.lo;
        if i < 0 || i as usize >= self.offsets.len() {
            return None;
        }
        let (mv, nv) = (m.basis_vertices(d), n.basis_vertices(d));
        let v = mv[c];
        if nv[r] != v {
            return None;
        }
        let rr = r - n.block_start(d, v);
        let cc = c - m.block_start(d, v);
        Some(self.offsets[i as usize][v] + rr * m.vertex_dims(d)[v] + cc)
    }

    /// Equations `f_{d+e} ∘ M.g = N.g ∘ f_d` for all generators and degrees.
    pub fn add_commutation(&self, sys: &mut EquationSystem, m: &GradedModule, n: &GradedModule) {
        let f = m.field();
        for (g, gen) in m.algebra.generators().iter().enumerate() {
            let e = gen.degree as i64;
            for d in m.degrees() {
                let (a, b) = (m.action(g, d), n.action(g, d));
                let rows: Vec<usize> =
                    (0..n.dim(d + e)).filter(|&r| n.basis_vertices(d + e)[r] == gen.target).collect();
                let cols: Vec<usize> = (0..m.dim(d)).filter(|&c| m.basis_vertices(d)[c] == gen.source).collect();
                for &r in &rows {
                    for &c in &cols {
                        let mut terms = Vec::new();
                        for k in 0..m.dim(d + e) {
                            let x = a.get(k, c);
                            if x != 0 {
                                if let Some(u) = self.var(m, n, d + e, r, k) {
                                    terms.push((u, x));
                                }
                            }
                        }
                        for k in 0..n.dim(d) {
                            let x = b.get(r, k);
                            if x != 0 {
                                if let Some(u) = self.var(m, n, d, k, c) {
                                    terms.push((u, f.neg(x)));
                                }
                            }
                        }
                        sys.add_equation(&terms);
                    }
                }
            }
        }
    }

    /// The morphism whose unknowns are read from the solution vector `v`.
    pub fn morphism(&self, v: &[u32], m: &GradedModule, n: &GradedModule) -> GradedMorphism {
        let f = m.field();
        let maps = m
            .degrees()
            .map(|d| {
                let mut mat = Matrix::zeros(f, n.dim(d), m.dim(d));
                for r in 0..n.dim(d) {
                    for c in 0..m.dim(d) {
                        if let Some(u) = self.var(m, n, d, r, c) {
                            mat.set(r, c, v[u]);
                        }
                    }
                }
                mat
            })
            .collect();
        GradedMorphism { lo: m.lo, maps }
    }
}

/// Bookkeeping for a truncated free module `⊕_j e_{v_j} A[-d_j]`.
pub struct FreeLayout {
    pub module: GradedModule,
    pub gens: Vec<(usize, i64)>,
    /// `entries[i]`: for each basis vector of degree `lo + i`, the pair (generator, algebra basis index).
    pub entries: Vec<Vec<(usize, usize)>>,
}

impl FreeLayout {
    pub fn new(algebra: Arc<GradedAlgebra>, gens: &[(usize, i64)], hi: i64) -> Result<Self> {
        let f = algebra.field();
        let nv = algebra.vertex_count();
        let Some(lo) = gens.iter().map(|g| g.1).min() else {
            let zero = GradedModule::zero(algebra);
            return Ok(FreeLayout { module: zero, gens: vec![], entries: vec![] });
        };
        let hi = hi.max(lo - 1);
        for e in 0..=(hi - lo).max(0) as usize {
            if !algebra.knows(e) {
                return Err(Error::Window(format!(
                    "free module needs the algebra component of degree {e}, beyond the computed window"
                )));
            }
        }
        let mut entries = Vec::new();
        let mut comps = Vec::new();
        for d in lo..=hi {
            let mut list = Vec::new();
            let mut dims = vec![0; nv];
            for w in 0..nv {
                for (j, &(v, dj)) in gens.iter().enumerate() {
                    if d < dj {
                        continue;
                    }
                    let e = (d - dj) as usize;
                    for (i, (s, t)) in algebra.basis_endpoints(e).into_iter().enumerate() {
                        if s == v && t == w {
                            list.push((j, i));
                            dims[w] += 1;
                        }
                    }
                }
            }
            entries.push(list);
            comps.push(dims);
        }
        let pos = |d: i64, j: usize, i: usize| -> Option<usize> {
            let k = d - lo;
            if k < 0 || d > hi {
                return None;
            }
            entries[k as usize].iter().position(|&x| x == (j, i))
        };
        let mut actions = Vec::new();
        for (g, gen) in algebra.generators().iter().enumerate() {
            let e = gen.degree as i64;
            let mut acts = Vec::new();
            for d in lo..=hi {
                let k = (d - lo) as usize;
                let rows = if d + e <= hi { comps[(d + e - lo) as usize].iter().sum() } else { 0 };
                let mut m = Matrix::zeros(f, rows, entries[k].len());
                if rows > 0 {
                    let mut cache: std::collections::HashMap<usize, Matrix> = Default::default();
                    for (c, &(j, i)) in entries[k].iter().enumerate() {
                        let ae = (d - gens[j].1) as usize;
                        let rm = cache.entry(ae).or_insert_with(|| algebra.right_generator(ae, g));
                        let col = rm.column(i);
                        for (i2, x) in col.into_iter().enumerate() {
                            if x != 0 {
                                let r = pos(d + e, j, i2).expect("product stays in the free module");
                                m.set(r, c, x);
                            }
                        }
                    }
                }
                acts.push(m);
            }
            actions.push(acts);
        }
        let module = GradedModule { algebra, lo, comps, actions };
        Ok(FreeLayout { module, gens: gens.to_vec(), entries })
    }

    /// The morphism to `target` sending generator `j` to `images[j]` (a vector of
    /// `target` in degree `d_j`, supported at vertex `v_j`).
    pub fn map_to(&self, target: &GradedModule, images: &[Vec<u32>]) -> GradedMorphism {
        let f = target.field();
        let m = &self.module;
        let maps = m
            .degrees()
            .enumerate()
            .map(|(k, d)| {
                let mut mat = Matrix::zeros(f, target.dim(d), m.dim(d));
                for (c, &(j, i)) in self.entries[k].iter().enumerate() {
                    let dj = self.gens[j].1;
                    let e = (d - dj) as usize;
                    if target.dim(d) == 0 {
                        continue;
                    }
                    let col = target.basis_action(e, i, dj).apply(&images[j]);
                    for (r, x) in col.into_iter().enumerate() {
                        mat.set(r, c, x);
                    }
                }
                mat
            })
            .collect();
        GradedMorphism { lo: m.lo, maps }
    }
}

/// Minimal projective cover `P -> M` truncated to degrees `<= hi`, with generator list.
pub fn projective_cover(m: &GradedModule, hi: i64) -> Result<(FreeLayout, GradedMorphism)> {
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for (d, rad) in m.degrees().zip(m.radical()) {
        let verts = m.basis_vertices(d);
        for c in rad.non_pivots() {
            let mut x = vec![0; m.dim(d)];
            x[c] = 1;
            gens.push((verts[c], d));
            images.push(x);
        }
    }
    let layout = FreeLayout::new(m.algebra.clone(), &gens, hi)?;
    let map = layout.map_to(m, &images);
    Ok((layout, map))
}

/// Generators `(vertex, degree)` of a free module.
pub type Generators = Vec<(usize, i64)>;

/// Degrees and vertices of the generators of `P0` and `P1` in a minimal presentation
/// `P1 -> P0 -> M -> 0`.
pub fn minimal_presentation(m: &GradedModule) -> Result<(Generators, Generators)> {
    if m.is_zero() {
        return Ok((vec![], vec![]));
    }
    let maxgen = m.algebra.generators().iter().map(|g| g.degree as i64).max().unwrap_or(1);
    let hi = m.hi() + maxgen;
    let (p0, pi) = projective_cover(m, hi)?;
    let ker = pi.kernel(&p0.module, m);
    let (omega, _) = p0.module.submodule(&ker)?;
    let mut p1 = Vec::new();
    for (d, dims) in omega.top_dims() {
        for (v, &k) in dims.iter().enumerate() {
            for _ in 0..k {
                p1.push((v, d));
            }
        }
    }
    Ok((p0.gens, p1))
}

/// Whether `M` has a minimal projective presentation with all generators in degrees satisfying `x`.
pub fn presented_in_degrees(m: &GradedModule, x: impl Fn(i64) -> bool) -> Result<bool> {
    let (p0, p1) = minimal_presentation(m)?;
    Ok(p0.iter().chain(&p1).all(|&(_, d)| x(d)))
}

#[cfg(test)]
mod tests;
#[cfg(test)]
pub(crate) mod tests_support;
