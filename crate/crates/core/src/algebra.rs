//! Graded quotients of path algebras, their n-homogeneous duals, the
//! support-restricted dual and the regraded Yoneda algebra.
//!
//! Ideal slices are computed degree by degree by two-sided closure:
//! `I_k = I_{k-1} KQ_1 + KQ_1 I_{k-1} + span(relations of degree k)`.
//! Basis elements of `KQ_k / I_k` are the paths that are not pivots of the
//! canonical echelon basis of `I_k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::quiver::{Path, PathElement, PathTable, Quiver};

/// A quiver with homogeneous relations of degree at least `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    field: Field,
    quiver: Quiver,
    n: usize,
    relations: Vec<PathElement>,
    degree_cap: Option<usize>,
}

impl Presentation {
    pub fn new(
        field: Field,
        quiver: Quiver,
        n: usize,
        relations: Vec<PathElement>,
        degree_cap: Option<usize>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Presentation(format!("homogeneity degree must be at least 2 (got {n})")));
        }
        let mut split = Vec::new();
        for (i, r) in relations.iter().enumerate() {
            if r.degree() < n {
                return Err(Error::Presentation(format!("relation {i} has degree {} < n = {n}", r.degree())));
            }
            split.extend(r.split_by_endpoints(&quiver));
        }
        Ok(Presentation { field, quiver, n, relations: split, degree_cap })
    }

    /// `KQ / <Q_n>`.
    pub fn truncated(field: Field, quiver: Quiver, n: usize) -> Result<Self> {
        let rels = crate::quiver::enumerate_paths(&quiver, n)
            .into_iter()
            .map(|p| PathElement::from_terms(field, n, [(p, 1)]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, quiver, n, rels, Some(n - 1))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[PathElement] {
        &self.relations
    }

    pub fn degree_cap(&self) -> Option<usize> {
        self.degree_cap
    }

    /// The opposite algebra `KQ^op / I^op`.
    pub fn opposite(&self) -> Presentation {
        Presentation {
            field: self.field,
            quiver: self.quiver.opposite(),
            n: self.n,
            relations: self.relations.iter().map(|r| r.opposite(&self.quiver)).collect(),
            degree_cap: self.degree_cap,
        }
    }
}

/// Graded components of `KQ / I` in degrees `0..=top`.
#[derive(Debug, Clone)]
pub struct AlgebraSlices {
    field: Field,
    quiver: Quiver,
    n: usize,
    top: usize,
    tables: Vec<PathTable>,
    ideal: Vec<Subspace>,
    basis: Vec<Vec<usize>>,
    basis_pos: Vec<Vec<Option<usize>>>,
    pivot_row: Vec<Vec<Option<usize>>>,
    right: Vec<Vec<Matrix>>,
    left: Vec<Vec<Matrix>>,
}

/// Computes the slices `I_k` and `Λ_k = KQ_k / I_k` for `k <= top`.
pub fn build_slices(pres: &Presentation, top: usize) -> Result<AlgebraSlices> {
    if top < pres.n {
        return Err(Error::Window(format!("slice window {top} is below the homogeneity degree {}", pres.n)));
    }
    let field = pres.field;
    let q = &pres.quiver;
    let tables: Vec<PathTable> = (0..=top).map(|k| PathTable::new(q, k)).collect();
    let mut ideal: Vec<Subspace> = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let cols = tables[k].len();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        if k > 0 {
            let prev = &ideal[k - 1];
            for row in prev.basis_vectors() {
                for a in 0..q.arrows().len() {
                    for side in [false, true] {
                        let mut v = vec![0u32; cols];
                        let mut any = false;
                        for (i, &c) in row.iter().enumerate() {
                            if c == 0 {
                                continue;
                            }
                            let p = &tables[k - 1].paths[i];
                            let arrow = Path::new(q, vec![a]).expect("single arrow");
                            let ext = if side { arrow.concat(q, p) } else { p.concat(q, &arrow) };
                            if let Some(ext) = ext {
                                let j = tables[k].index_of(&ext).expect("path of length k");
                                v[j] = field.add(v[j], c);
                                any = true;
                            }
                        }
                        if any {
                            rows.push(v);
                        }
                    }
                }
            }
        }
        for r in pres.relations.iter().filter(|r| r.degree() == k) {
            rows.push(r.to_vector(&tables[k]));
        }
        ideal.push(Subspace::from_vectors(field, cols, &rows));
    }

    let mut basis = Vec::new();
    let mut basis_pos = Vec::new();
    let mut pivot_row = Vec::new();
    for k in 0..=top {
        let np = ideal[k].non_pivots();
        let mut pos = vec![None; tables[k].len()];
        for (i, &c) in np.iter().enumerate() {
            pos[c] = Some(i);
        }
        let mut prow = vec![None; tables[k].len()];
        for (r, &c) in ideal[k].pivots().iter().enumerate() {
            prow[c] = Some(r);
        }
        basis.push(np);
        basis_pos.push(pos);
        pivot_row.push(prow);
    }

    let mut slices = AlgebraSlices {
        field,
        quiver: q.clone(),
        n: pres.n,
        top,
        tables,
        ideal,
        basis,
        basis_pos,
        pivot_row,
        right: vec![],
        left: vec![],
    };
    for k in 0..top {
        let mut right = Vec::new();
        let mut left = Vec::new();
        for a in 0..q.arrows().len() {
            let arrow = Path::new(q, vec![a]).expect("single arrow");
            let mut rm = Matrix::zeros(field, slices.dim(k + 1), slices.dim(k));
            let mut lm = Matrix::zeros(field, slices.dim(k + 1), slices.dim(k));
            for (i, &pi) in slices.basis[k].iter().enumerate() {
                let p = &slices.tables[k].paths[pi];
                if let Some(pa) = p.concat(q, &arrow) {
                    for (r, c) in slices.reduce_path(&pa).into_iter().enumerate() {
                        if c != 0 {
                            rm.set(r, i, c);
                        }
                    }
                }
                if let Some(ap) = arrow.concat(q, p) {
                    for (r, c) in slices.reduce_path(&ap).into_iter().enumerate() {
                        if c != 0 {
                            lm.set(r, i, c);
                        }
                    }
                }
            }
            right.push(rm);
            left.push(lm);
        }
        slices.right.push(right);
        slices.left.push(left);
    }

    if let Some(cap) = pres.degree_cap {
        for k in cap + 1..=top {
            if slices.dim(k) != 0 {
                return Err(Error::Presentation(format!(
                    "degree cap {cap} violated: component of degree {k} has dimension {}",
                    slices.dim(k)
                )));
            }
        }
    }
    Ok(slices)
}

impl AlgebraSlices {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest degree computed.
    pub fn top(&self) -> usize {
        self.top
    }

    /// True when some computed component vanishes, hence all later ones do.
    pub fn is_finite(&self) -> bool {
        (0..=self.top).any(|k| self.basis[k].is_empty())
    }

    /// Largest degree with a nonzero component, when finite.
    pub fn top_nonzero_degree(&self) -> Option<usize> {
        self.is_finite().then(|| (0..=self.top).rev().find(|&k| !self.basis[k].is_empty()).unwrap_or(0))
    }

    /// Whether degree `k` is known (computed, or zero by finiteness).
    pub fn knows(&self, k: usize) -> bool {
        k <= self.top || self.is_finite()
    }

    pub fn dim(&self, k: usize) -> usize {
        if k > self.top {
            assert!(self.is_finite(), "degree {k} is beyond the computed window {}", self.top);
            return 0;
        }
        self.basis[k].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|k| self.dim(k)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn ideal(&self, k: usize) -> &Subspace {
        &self.ideal[k]
    }

    pub fn paths(&self, k: usize) -> &PathTable {
        &self.tables[k]
    }

    pub fn basis_path(&self, k: usize, i: usize) -> &Path {
        &self.tables[k].paths[self.basis[k][i]]
    }

    pub fn basis_paths(&self, k: usize) -> Vec<&Path> {
        if k > self.top {
            return vec![];
        }
        self.basis[k].iter().map(|&i| &self.tables[k].paths[i]).collect()
    }

    /// `(source, target)` of every basis element of degree `k`.
    pub fn basis_endpoints(&self, k: usize) -> Vec<(usize, usize)> {
        self.basis_paths(k).iter().map(|p| (p.source(), p.target(&self.quiver))).collect()
    }

    /// Dimension of `e_i Λ_k e_j` for every endpoint pair that occurs.
    pub fn dims_by_endpoints(&self, k: usize) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for e in self.basis_endpoints(k) {
            *out.entry(e).or_insert(0) += 1;
        }
        out
    }

    /// Coordinates of the image of a path in the basis of its degree.
    pub fn reduce_path(&self, p: &Path) -> Vec<u32> {
        let k = p.len();
        if k > self.top {
            assert!(self.is_finite(), "path of length {k} is beyond the computed window");
            return vec![];
        }
        let idx = self.tables[k].index_of(p).expect("path of the quiver");
        let mut out = vec![0u32; self.dim(k)];
        if let Some(i) = self.basis_pos[k][idx] {
            out[i] = 1;
        } else {
            let r = self.pivot_row[k][idx].expect("non-basis path is a pivot");
            let row = self.ideal[k].basis().row(r);
            for (i, &c) in self.basis[k].iter().enumerate() {
                out[i] = self.field.neg(row[c]);
            }
        }
        out
    }

    /// Coordinates of the image of a vector over the path basis of degree `k`.
    pub fn reduce_vector(&self, k: usize, v: &[u32]) -> Vec<u32> {
        let nf = self.ideal[k].normal_form(v);
        self.basis[k].iter().map(|&c| nf[c]).collect()
    }

    pub fn reduce_element(&self, e: &PathElement) -> Vec<u32> {
        self.reduce_vector(e.degree(), &e.to_vector(&self.tables[e.degree()]))
    }

    /// Right multiplication by arrow `a`: `Λ_k -> Λ_{k+1}`.
    pub fn right_arrow(&self, k: usize, a: usize) -> Matrix {
        if k < self.top {
            self.right[k][a].clone()
        } else {
            Matrix::zeros(self.field, self.dim(k + 1), self.dim(k))
        }
    }

    /// Left multiplication by arrow `a`: `Λ_k -> Λ_{k+1}`.
    pub fn left_arrow(&self, k: usize, a: usize) -> Matrix {
        if k < self.top {
            self.left[k][a].clone()
        } else {
            Matrix::zeros(self.field, self.dim(k + 1), self.dim(k))
        }
    }

    /// Right multiplication by a path: `Λ_k -> Λ_{k + len}`.
    pub fn right_path(&self, k: usize, p: &Path) -> Matrix {
        if p.is_empty() {
            let mut m = Matrix::zeros(self.field, self.dim(k), self.dim(k));
            for (i, (_, t)) in self.basis_endpoints(k).into_iter().enumerate() {
                if t == p.source() {
                    m.set(i, i, 1);
                }
            }
            return m;
        }
        let mut acc: Option<Matrix> = None;
        for (step, &a) in p.arrows().iter().enumerate() {
            let m = self.right_arrow(k + step, a);
            acc = Some(match acc {
                None => m,
                Some(prev) => m.mul_unchecked(&prev),
            });
        }
        acc.expect("nonempty path")
    }

    /// Left multiplication by a path: `Λ_k -> Λ_{k + len}`.
    pub fn left_path(&self, k: usize, p: &Path) -> Matrix {
        if p.is_empty() {
            let mut m = Matrix::zeros(self.field, self.dim(k), self.dim(k));
            for (i, (s, _)) in self.basis_endpoints(k).into_iter().enumerate() {
                if s == p.source() {
                    m.set(i, i, 1);
                }
            }
            return m;
        }
        let mut acc: Option<Matrix> = None;
        for (step, &a) in p.arrows().iter().rev().enumerate() {
            let m = self.left_arrow(k + step, a);
            acc = Some(match acc {
                None => m,
                Some(prev) => m.mul_unchecked(&prev),
            });
        }
        acc.expect("nonempty path")
    }

    /// Product of homogeneous elements given in basis coordinates.
    pub fn multiply(&self, j: usize, a: &[u32], k: usize, b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.dim(j + k)];
        for (i, &c) in b.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let prod = self.right_path(j, self.basis_path(k, i)).apply(a);
            for (o, v) in out.iter_mut().zip(prod) {
                *o = self.field.add(*o, self.field.mul(c, v));
            }
        }
        out
    }
}

/// The orthogonal `I_n^⊥ ⊆ KQ_n^op` as the kernel of the pairing against a basis of `I_n`.
/// Coordinates are over the canonical paths of length `n` in the opposite quiver.
pub fn compute_orthogonal(slices: &AlgebraSlices) -> Subspace {
    let n = slices.n;
    let field = slices.field;
    let q = &slices.quiver;
    let op = q.opposite();
    let op_table = PathTable::new(&op, n);
    let table = &slices.tables[n];
    // path in Q_n  ->  index of its reverse in Q^op_n
    let to_op: Vec<usize> =
        table.paths.iter().map(|p| op_table.index_of(&p.opposite(q)).expect("reverse path")).collect();
    let gram = slices.ideal[n].basis();
    let ker = if gram.rows() == 0 { Subspace::full(field, table.len()) } else { gram.kernel() };
    let vectors: Vec<Vec<u32>> = ker
        .basis_vectors()
        .into_iter()
        .map(|v| {
            let mut w = vec![0u32; op_table.len()];
            for (i, c) in v.into_iter().enumerate() {
                w[to_op[i]] = c;
            }
            w
        })
        .collect();
    Subspace::from_vectors(field, op_table.len(), &vectors)
}

/// The ordering of `Q_n` into basis / non-basis / ideal blocks and the
/// resulting dual basis `h_i = p_i^o + Σ_j λ_{ij} p_j^o` of `I_n^⊥`.
#[derive(Debug, Clone)]
pub struct DualData {
    /// Path indices (into `Q_n`) of the basis block, in canonical order.
    pub basis_block: Vec<usize>,
    /// Paths outside `I` that are not basis paths.
    pub dependent_block: Vec<usize>,
    /// Paths lying in `I`.
    pub ideal_block: Vec<usize>,
    /// `lambda[i][j]`: coefficient of basis path `i` in the expansion of dependent path `j`.
    pub lambda: Vec<Vec<u32>>,
    /// Basis of the orthogonal, as elements over the opposite quiver.
    pub h_basis: Vec<PathElement>,
    /// Span of `h_basis` in the canonical coordinates of `KQ_n^op`.
    pub orthogonal: Subspace,
}

pub fn compute_orthogonal_via_ordering(slices: &AlgebraSlices) -> Result<DualData> {
    let n = slices.n;
    let field = slices.field;
    let q = &slices.quiver;
    let op = q.opposite();
    let op_table = PathTable::new(&op, n);
    let table = &slices.tables[n];
    let ideal = &slices.ideal[n];
    let unit = |i: usize| {
        let mut v = vec![0u32; table.len()];
        v[i] = 1;
        v
    };

    let mut basis_block = Vec::new();
    let mut dependent_block = Vec::new();
    let mut ideal_block = Vec::new();
    let mut span = ideal.clone();
    for i in 0..table.len() {
        let v = unit(i);
        if ideal.contains_vector(&v) {
            ideal_block.push(i);
        } else if span.contains_vector(&v) {
            dependent_block.push(i);
        } else {
            basis_block.push(i);
            span = span.sum(&Subspace::from_vectors(field, table.len(), &[v]))?;
        }
    }

    // Solve p_j = Σ_i λ_ij p_i + (element of I) for every dependent path.
    let mut cols: Vec<Vec<u32>> = basis_block.iter().map(|&i| unit(i)).collect();
    cols.extend(ideal.basis_vectors());
    let system = Matrix::from_columns(field, table.len(), &cols);
    let r = basis_block.len();
    let mut lambda = vec![vec![0u32; dependent_block.len()]; r];
    for (jj, &j) in dependent_block.iter().enumerate() {
        let x = system
            .solve(&unit(j))
            .ok_or_else(|| Error::Presentation("dependent path outside the span of basis paths and I".into()))?;
        for (ii, row) in lambda.iter_mut().enumerate() {
            row[jj] = x[ii];
        }
    }

    let mut h_basis = Vec::with_capacity(r);
    let mut vectors = Vec::with_capacity(r);
    for (ii, &i) in basis_block.iter().enumerate() {
        let mut terms = vec![(table.paths[i].opposite(q), 1i64)];
        for (jj, &j) in dependent_block.iter().enumerate() {
            if lambda[ii][jj] != 0 {
                terms.push((table.paths[j].opposite(q), lambda[ii][jj] as i64));
            }
        }
        let h = PathElement::from_terms(field, n, terms)?;
        vectors.push(h.to_vector(&op_table));
        h_basis.push(h);
    }
    let orthogonal = Subspace::from_vectors(field, op_table.len(), &vectors);
    Ok(DualData { basis_block, dependent_block, ideal_block, lambda, h_basis, orthogonal })
}

/// Presentation of the n-homogeneous dual `KQ^op / <I_n^⊥>`.
pub fn dual_presentation(pres: &Presentation, slices: &AlgebraSlices) -> Result<Presentation> {
    let data = compute_orthogonal_via_ordering(slices)?;
    Presentation::new(pres.field, pres.quiver.opposite(), pres.n, data.h_basis, None)
}

/// Slices of the dual algebra through degree `top`.
pub fn build_dual(pres: &Presentation, top: usize) -> Result<(Presentation, AlgebraSlices)> {
    let slices = build_slices(pres, pres.n.max(1))?;
    let dual = dual_presentation(pres, &slices)?;
    let dual_slices = build_slices(&dual, top)?;
    Ok((dual, dual_slices))
}

/// The regrading map `δ_m(2k) = m + kn`, `δ_m(2k+1) = m + kn + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeMap {
    pub m: i64,
    pub n: usize,
}

impl DegreeMap {
    pub fn new(m: i64, n: usize) -> Self {
        DegreeMap { m, n }
    }

    pub fn delta(&self, j: i64) -> i64 {
        let k = j.div_euclid(2);
        self.m + k * self.n as i64 + j.rem_euclid(2)
    }

    /// Whether `d` lies in the image `S = m + (nZ ∪ (nZ + 1))`.
    pub fn contains(&self, d: i64) -> bool {
        let r = (d - self.m).rem_euclid(self.n as i64);
        r == 0 || r == 1 || self.n == 1
    }

    pub fn inverse(&self, d: i64) -> Option<i64> {
        if !self.contains(d) {
            return None;
        }
        let n = self.n as i64;
        if n == 2 {
            return Some(d - self.m);
        }
        let k = (d - self.m).div_euclid(n);
        let r = (d - self.m).rem_euclid(n);
        Some(2 * k + r)
    }
}

pub fn delta(dmap: &DegreeMap, j: i64) -> i64 {
    dmap.delta(j)
}

/// Which of the three gradings an algebra carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// A path algebra quotient with its natural grading (Λ, Λ^!, KQ^op, ...).
    Path,
    /// Λ^!_U: components in degrees `nZ ∪ (nZ+1)` of the dual, other products zero.
    USupport,
    /// E: the same algebra with `E_j = Λ^!_{δ(j)}`.
    Yoneda,
}

/// A generator of an algebra, with the path representing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub path: Path,
    pub source: usize,
    pub target: usize,
}

/// A graded algebra presented by generators of positive degree, viewed through
/// one of the gradings of [`AlgebraKind`]. This is the type modules are built over.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    kind: AlgebraKind,
    base: Arc<AlgebraSlices>,
    n: usize,
    generators: Vec<Generator>,
}

impl GradedAlgebra {
    pub fn path(base: Arc<AlgebraSlices>) -> Self {
        let q = base.quiver().clone();
        let generators = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| Generator {
                name: a.name.clone(),
                degree: 1,
                path: Path::new(&q, vec![i]).expect("arrow"),
                source: a.source,
                target: a.target,
            })
            .collect();
        let n = base.n();
        GradedAlgebra { kind: AlgebraKind::Path, base, n, generators }
    }

    fn with_degree_n_generators(kind: AlgebraKind, dual: Arc<AlgebraSlices>) -> Self {
        let n = dual.n();
        let mut alg = Self::path(dual);
        alg.kind = kind;
        let gen_degree = if kind == AlgebraKind::Yoneda { 2 } else { n };
        let q = alg.base.quiver().clone();
        if alg.base.top() >= n {
            for p in alg.base.basis_paths(n) {
                alg.generators.push(Generator {
                    name: q.format_path(p),
                    degree: gen_degree,
                    path: p.clone(),
                    source: p.source(),
                    target: p.target(&q),
                });
            }
        }
        alg
    }

    /// Λ^!_U, generated by the arrows and a basis of Λ^!_n.
    pub fn u_support(dual: Arc<AlgebraSlices>) -> Self {
        Self::with_degree_n_generators(AlgebraKind::USupport, dual)
    }

    /// E with `E_j = Λ^!_{δ(j)}`, generated in degrees 1 and 2.
    pub fn yoneda(dual: Arc<AlgebraSlices>) -> Self {
        Self::with_degree_n_generators(AlgebraKind::Yoneda, dual)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn base(&self) -> &Arc<AlgebraSlices> {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn quiver(&self) -> &Quiver {
        self.base.quiver()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.base.quiver().vertex_count()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arrow_count(&self) -> usize {
        self.base.quiver().arrows().len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Indices of the generators of degree `n` (empty for path kind).
    pub fn degree_n_generators(&self) -> std::ops::Range<usize> {
        self.arrow_count()..self.generators.len()
    }

    /// Degree of the underlying path algebra that own degree `d` lives in.
    pub fn base_degree(&self, d: usize) -> Option<usize> {
        match self.kind {
            AlgebraKind::Path => Some(d),
            AlgebraKind::USupport => {
                let r = d % self.n;
                (r == 0 || r == 1).then_some(d)
            }
            AlgebraKind::Yoneda => Some(DegreeMap::new(0, self.n).delta(d as i64) as usize),
        }
    }

    /// Highest own degree whose component is known.
    pub fn top(&self) -> usize {
        if self.base.is_finite() {
            return usize::MAX / 4;
        }
        let t = self.base.top();
        match self.kind {
            AlgebraKind::Path | AlgebraKind::USupport => t,
            AlgebraKind::Yoneda => {
                (0..).take_while(|&j| self.base_degree(j + 1).unwrap() <= t).last().map_or(0, |j| j + 1)
            }
        }
    }

    pub fn knows(&self, d: usize) -> bool {
        match self.base_degree(d) {
            Some(b) => self.base.knows(b),
            None => true,
        }
    }

    pub fn dim(&self, d: usize) -> usize {
        self.base_degree(d).map_or(0, |b| self.base.dim(b))
    }

    pub fn basis_path(&self, d: usize, i: usize) -> &Path {
        self.base.basis_path(self.base_degree(d).expect("degree in support"), i)
    }

    pub fn basis_endpoints(&self, d: usize) -> Vec<(usize, usize)> {
        self.base_degree(d).map_or(vec![], |b| self.base.basis_endpoints(b))
    }

    /// Right multiplication by generator `g`: `A_d -> A_{d + deg g}`.
    pub fn right_generator(&self, d: usize, g: usize) -> Matrix {
        let gen = &self.generators[g];
        let target = d + gen.degree;
        let zero = Matrix::zeros(self.field(), self.dim(target), self.dim(d));
        match (self.base_degree(d), self.base_degree(target)) {
            (Some(b), Some(bt)) if b + gen.path.len() == bt => {
                if self.dim(d) == 0 || self.dim(target) == 0 {
                    zero
                } else {
                    self.base.right_path(b, &gen.path)
                }
            }
            _ => zero,
        }
    }

    /// Coordinates, in the own-degree-`d` basis, of the element represented by a path.
    pub fn reduce_path(&self, d: usize, p: &Path) -> Result<Vec<u32>> {
        match self.base_degree(d) {
            Some(b) if b == p.len() => Ok(self.base.reduce_path(p)),
            _ => Err(Error::UnsupportedDegree(format!("path of length {} in own degree {d}", p.len()))),
        }
    }

    /// Writes the basis element `i` of own degree `d` as a product of letters,
    /// each letter a linear combination of generators (all of one degree).
    pub fn word_for_basis(&self, d: usize, i: usize) -> Vec<Vec<(usize, u32)>> {
        let p = self.basis_path(d, i).clone();
        let q = self.quiver();
        match self.kind {
            AlgebraKind::Path => p.arrows().iter().map(|&a| vec![(a, 1)]).collect(),
            AlgebraKind::USupport | AlgebraKind::Yoneda => {
                let n = self.n;
                let chunks = p.len() / n;
                let offset = self.arrow_count();
                let mut word = Vec::new();
                for c in 0..chunks {
                    let chunk = p.slice(q, c * n, (c + 1) * n);
                    let coords = self.base.reduce_path(&chunk);
                    word.push(
                        coords.into_iter().enumerate().filter(|(_, v)| *v != 0).map(|(j, v)| (offset + j, v)).collect(),
                    );
                }
                for &a in &p.arrows()[chunks * n..] {
                    word.push(vec![(a, 1)]);
                }
                word
            }
        }
    }

    /// Product of homogeneous elements in own-degree coordinates (zero when
    /// the product leaves the support).
    pub fn multiply(&self, j: usize, a: &[u32], k: usize, b: &[u32]) -> Vec<u32> {
        match (self.base_degree(j), self.base_degree(k), self.base_degree(j + k)) {
            (Some(bj), Some(bk), Some(bt)) if bj + bk == bt => self.base.multiply(bj, a, bk, b),
            _ => vec![0; self.dim(j + k)],
        }
    }
}
