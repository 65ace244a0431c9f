//! The functors Ψ (`M ↦ M ⊗ Λ`) and ν (`M ↦ Hom_{Λ_0}(Λ, M)`) from graded modules over
//! `KQ^op` (or any quotient of it) to n-complexes of graded Λ-modules.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{AlgebraKind, GradedAlgebra};
use crate::error::{Error, Result};
use crate::grmod::{GradedModule, GradedMorphism};
use crate::linalg::Matrix;
use crate::quiver::Quiver;

use super::ComplexOfGraded;

/// Basis bookkeeping for `N ⊗_{Λ_0} Λ[k]` or `Hom_{Λ_0}(Λ, N)[k]`, with `N` a
/// `Λ_0`-module given by its vertex dimensions.
pub(crate) struct TermLayout {
    pub module: GradedModule,
    /// Per degree of the module window: `(Λ basis index, N basis index)` of each basis vector.
    pub entries: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
    /// Per degree: the Λ-degree of the entries.
    pub lambda_degree: Vec<usize>,
}

impl TermLayout {
    pub fn pos(&self, d: i64, b: usize, y: usize) -> Option<usize> {
        let i = d - self.module.lo();
        if i < 0 || i as usize >= self.index.len() {
            return None;
        }
        self.index[i as usize].get(&(b, y)).copied()
    }

    pub fn lambda_degree_at(&self, d: i64) -> Option<usize> {
        let i = d - self.module.lo();
        (i >= 0 && (i as usize) < self.lambda_degree.len()).then(|| self.lambda_degree[i as usize])
    }
}

fn block_starts(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let s = *acc;
            *acc += d;
            Some(s)
        })
        .collect()
}

fn check_path_algebra(lambda: &GradedAlgebra) -> Result<()> {
    if lambda.kind() != AlgebraKind::Path {
        return Err(Error::Precondition("complex terms live over Λ with its path grading".into()));
    }
    Ok(())
}

/// Largest Λ-degree to use: the top nonzero degree when Λ is finite, otherwise the
/// computed window if the caller accepts a windowed dual.
fn lambda_top(lambda: &GradedAlgebra, allow_windowed: bool) -> Result<usize> {
    match lambda.base().top_nonzero_degree() {
        Some(t) => Ok(t),
        None if allow_windowed => Ok(lambda.base().top()),
        None => Err(Error::InfiniteAlgebra),
    }
}

/// `Hom_{Λ_0}(Λ, N)[shift]`: in degree `d` the maps `Λ_{-d-shift} -> N`, with
/// `(f·λ)(a) = f(λa)`. A basis vector `(b, y)` sends the basis path `b` to the basis
/// vector `y` of `N e_{t(b)}`; it lies in the vertex block `s(b)`.
pub(crate) fn coinduced_layout(lambda: &Arc<GradedAlgebra>, dims: &[usize], shift: i64, top: usize) -> TermLayout {
    let base = lambda.base();
    let f = lambda.field();
    let nv = lambda.vertex_count();
    let starts = block_starts(dims);
    let (lo, hi) = (-shift - top as i64, -shift);
    let mut entries = Vec::new();
    let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    let mut comps = Vec::new();
    let mut lambda_degree = Vec::new();
    for d in lo..=hi {
        let e = (-d - shift) as usize;
        let ends = base.basis_endpoints(e);
        let mut list = Vec::new();
        let mut vd = vec![0; nv];
        for v in 0..nv {
            for (b, &(s, t)) in ends.iter().enumerate() {
                if s != v {
                    continue;
                }
                for y in starts[t]..starts[t] + dims[t] {
                    list.push((b, y));
                    vd[v] += 1;
                }
            }
        }
        index.push(list.iter().enumerate().map(|(i, &k)| (k, i)).collect());
        entries.push(list);
        comps.push(vd);
        lambda_degree.push(e);
    }
    let dim = |d: i64| if d < lo || d > hi { 0 } else { entries[(d - lo) as usize].len() };
    let mut actions = Vec::new();
    for g in 0..lambda.generators().len() {
        let mut acts = Vec::new();
        for d in lo..=hi {
            let e = lambda_degree[(d - lo) as usize];
            let mut m = Matrix::zeros(f, dim(d + 1), dim(d));
            if e >= 1 {
                // (f·β)(a) = f(βa)
                let left = base.left_arrow(e - 1, g);
                let tgt: &HashMap<(usize, usize), usize> = &index[(d + 1 - lo) as usize];
                for (c, &(b, y)) in entries[(d - lo) as usize].iter().enumerate() {
                    for a in 0..left.cols() {
                        let x = left.get(b, a);
                        if x != 0 {
                            if let Some(&r) = tgt.get(&(a, y)) {
                                m.set(r, c, x);
                            }
                        }
                    }
                }
            }
            acts.push(m);
        }
        actions.push(acts);
    }
    let module = GradedModule::from_parts(lambda.clone(), lo, comps, actions).expect("consistent shapes");
    TermLayout { module, entries, index, lambda_degree }
}

/// `N ⊗_{Λ_0} Λ[shift]` restricted to Λ-degrees `≤ top`: in degree `d` the tensors
/// `y ⊗ b` with `b ∈ Λ_{d+shift}` and `y ∈ N e_{s(b)}`, in the vertex block `t(b)`.
pub(crate) fn induced_layout(lambda: &Arc<GradedAlgebra>, dims: &[usize], shift: i64, top: usize) -> TermLayout {
    let base = lambda.base();
    let f = lambda.field();
    let nv = lambda.vertex_count();
    let starts = block_starts(dims);
    let (lo, hi) = (-shift, top as i64 - shift);
    let mut entries = Vec::new();
    let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::new();
    let mut comps = Vec::new();
    let mut lambda_degree = Vec::new();
    for d in lo..=hi {
        let e = (d + shift) as usize;
        let ends = base.basis_endpoints(e);
        let mut list = Vec::new();
        let mut vd = vec![0; nv];
        for v in 0..nv {
            for (b, &(s, t)) in ends.iter().enumerate() {
                if t != v {
                    continue;
                }
                for y in starts[s]..starts[s] + dims[s] {
                    list.push((b, y));
                    vd[v] += 1;
                }
            }
        }
        index.push(list.iter().enumerate().map(|(i, &k)| (k, i)).collect());
        entries.push(list);
        comps.push(vd);
        lambda_degree.push(e);
    }
    let dim = |d: i64| if d < lo || d > hi { 0 } else { entries[(d - lo) as usize].len() };
    let mut actions = Vec::new();
    for g in 0..lambda.generators().len() {
        let mut acts = Vec::new();
        for d in lo..=hi {
            let e = lambda_degree[(d - lo) as usize];
            let mut m = Matrix::zeros(f, dim(d + 1), dim(d));
            if d < hi {
                // (y ⊗ b)·β = y ⊗ bβ
                let right = base.right_arrow(e, g);
                let tgt = &index[(d + 1 - lo) as usize];
                for (c, &(b, y)) in entries[(d - lo) as usize].iter().enumerate() {
                    for b2 in 0..right.rows() {
                        let x = right.get(b2, b);
                        if x != 0 {
                            if let Some(&r) = tgt.get(&(b2, y)) {
                                m.set(r, c, x);
                            }
                        }
                    }
                }
            }
            acts.push(m);
        }
        actions.push(acts);
    }
    let module = GradedModule::from_parts(lambda.clone(), lo, comps, actions).expect("consistent shapes");
    TermLayout { module, entries, index, lambda_degree }
}

/// `Hom_{Λ_0}(Λ, N)[shift]` for `N` with the given vertex dimensions; requires Λ finite
/// unless `allow_windowed`, in which case maps vanishing beyond the window are used.
pub fn coinduced(
    lambda: &Arc<GradedAlgebra>,
    dims: &[usize],
    shift: i64,
    allow_windowed: bool,
) -> Result<GradedModule> {
    check_path_algebra(lambda)?;
    let top = lambda_top(lambda, allow_windowed)?;
    Ok(coinduced_layout(lambda, dims, shift, top).module)
}

/// `N ⊗_{Λ_0} Λ[shift]`, truncated to Λ-degrees `≤ top` (by default the top nonzero
/// degree of a finite Λ).
pub fn induced(lambda: &Arc<GradedAlgebra>, dims: &[usize], shift: i64, top: Option<usize>) -> Result<GradedModule> {
    check_path_algebra(lambda)?;
    let top = match top {
        Some(t) => t,
        None => lambda_top(lambda, false)?,
    };
    Ok(induced_layout(lambda, dims, shift, top).module)
}

fn check_source(m: &GradedModule, lambda: &GradedAlgebra) -> Result<()> {
    check_path_algebra(lambda)?;
    let alg = m.algebra();
    if alg.quiver() != &lambda.quiver().opposite() {
        return Err(Error::Precondition("module must live over a quotient of KQ^op for Λ = KQ/I".into()));
    }
    Ok(())
}

/// `Ψ(M)`: position `k` is `M_k ⊗ Λ[k]`, with `d(x ⊗ 1) = Σ_α x·α^o ⊗ α`.
///
/// For infinite Λ (`allow_windowed`), all terms are cut at the same module degree so that
/// the result is a quotient complex of the true one.
pub fn psi(m: &GradedModule, lambda: &Arc<GradedAlgebra>, allow_windowed: bool) -> Result<ComplexOfGraded> {
    check_source(m, lambda)?;
    let m = m.trimmed();
    if m.is_zero() {
        return Ok(ComplexOfGraded::zero(lambda.clone(), lambda.n()));
    }
    let finite = lambda.base().top_nonzero_degree();
    let top_at = |k: i64| -> Result<usize> {
        match finite {
            Some(t) => Ok(t),
            None if allow_windowed => {
                let t = lambda.base().top() as i64 - (m.hi() - k);
                if t < 0 {
                    return Err(Error::Window("algebra window too small for the module's span".into()));
                }
                Ok(t as usize)
            }
            None => Err(Error::InfiniteAlgebra),
        }
    };
    let base = lambda.base();
    let f = m.field();
    let layouts: Vec<TermLayout> =
        m.degrees().map(|k| Ok(induced_layout(lambda, &m.vertex_dims(k), k, top_at(k)?))).collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    for k in m.lo()..m.hi() {
        let (src, tgt) = (&layouts[(k - m.lo()) as usize], &layouts[(k + 1 - m.lo()) as usize]);
        let acts: Vec<Matrix> = (0..lambda.arrow_count()).map(|a| m.action(a, k)).collect();
        let maps = src
            .module
            .degrees()
            .map(|d| {
                let mut out = Matrix::zeros(f, tgt.module.dim(d), src.module.dim(d));
                let Some(e) = src.lambda_degree_at(d) else { return out };
                if tgt.lambda_degree_at(d).is_none() {
                    return out;
                }
                for (a, act) in acts.iter().enumerate() {
                    let left = base.left_arrow(e, a);
                    for (c, &(b, y)) in src.entries[(d - src.module.lo()) as usize].iter().enumerate() {
                        for b2 in 0..left.rows() {
                            let lv = left.get(b2, b);
                            if lv == 0 {
                                continue;
                            }
                            for y2 in 0..act.rows() {
                                let av = act.get(y2, y);
                                if av != 0 {
                                    if let Some(r) = tgt.pos(d, b2, y2) {
                                        out.add_at(r, c, f.mul(lv, av));
                                    }
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        diffs.push(GradedMorphism { lo: src.module.lo(), maps });
    }
    let terms = layouts.into_iter().map(|l| l.module).collect();
    Ok(ComplexOfGraded::from_parts(lambda.clone(), lambda.n(), m.lo(), terms, diffs))
}

/// `ν(M)`: position `j` is `Hom_{Λ_0}(Λ, M_j)[j]`, with `(df)(a) = Σ_α f(aα)·α^o`.
pub fn nu(m: &GradedModule, lambda: &Arc<GradedAlgebra>, allow_windowed: bool) -> Result<ComplexOfGraded> {
    let identity: Vec<usize> = (0..lambda.arrow_count()).collect();
    nu_twisted(m, lambda, allow_windowed, &identity)
}

/// `ν` with the arrow acting in the differential replaced through `twist`:
/// `(df)(a) = Σ_α f(aα)·twist(α)^o`. With the identity this is [`nu`]; other
/// permutations of parallel arrows give a deliberately wrong functor.
pub fn nu_twisted(
    m: &GradedModule,
    lambda: &Arc<GradedAlgebra>,
    allow_windowed: bool,
    twist: &[usize],
) -> Result<ComplexOfGraded> {
    check_source(m, lambda)?;
    let q = lambda.quiver();
    if twist.len() != lambda.arrow_count()
        || twist.iter().enumerate().any(|(a, &b)| {
            b >= q.arrows().len()
                || q.arrows()[a].source != q.arrows()[b].source
                || q.arrows()[a].target != q.arrows()[b].target
        })
    {
        return Err(Error::Precondition("twist must map each arrow to a parallel arrow".into()));
    }
    let top = lambda_top(lambda, allow_windowed)?;
    let m = m.trimmed();
    if m.is_zero() {
        return Ok(ComplexOfGraded::zero(lambda.clone(), lambda.n()));
    }
    let base = lambda.base();
    let f = m.field();
    let layouts: Vec<TermLayout> = m.degrees().map(|j| coinduced_layout(lambda, &m.vertex_dims(j), j, top)).collect();
    let mut diffs = Vec::new();
    for j in m.lo()..m.hi() {
        let (src, tgt) = (&layouts[(j - m.lo()) as usize], &layouts[(j + 1 - m.lo()) as usize]);
        let acts: Vec<Matrix> = twist.iter().map(|&b| m.action(b, j)).collect();
        let maps = src
            .module
            .degrees()
            .map(|d| {
                differential_block(
                    src,
                    tgt,
                    d,
                    &acts,
                    |e| (e >= 1).then(|| (0..acts.len()).map(|a| base.right_arrow(e - 1, a)).collect()),
                    f,
                )
            })
            .collect();
        diffs.push(GradedMorphism { lo: src.module.lo(), maps });
    }
    let terms = layouts.into_iter().map(|l| l.module).collect();
    Ok(ComplexOfGraded::from_parts(lambda.clone(), lambda.n(), m.lo(), terms, diffs))
}

/// The degree-`d` block of a map between coinduced terms of the form
/// `(Df)(a) = Σ_i f(a·w_i)·φ_i`, where `mults(e)` gives the matrices of `a ↦ a·w_i`
/// into Λ-degree `e` and `acts[i]` the matrix of `φ_i` on `N`.
pub(crate) fn differential_block(
    src: &TermLayout,
    tgt: &TermLayout,
    d: i64,
    acts: &[Matrix],
    mults: impl Fn(usize) -> Option<Vec<Matrix>>,
    f: crate::linalg::Field,
) -> Matrix {
    let mut out = Matrix::zeros(f, tgt.module.dim(d), src.module.dim(d));
    let (Some(e), Some(_)) = (src.lambda_degree_at(d), tgt.lambda_degree_at(d)) else { return out };
    let Some(mats) = mults(e) else { return out };
    for (mat, act) in mats.iter().zip(acts) {
        // mat: Λ_{e'} -> Λ_e, column a holds a·w
        for (c, &(b, y)) in src.entries[(d - src.module.lo()) as usize].iter().enumerate() {
            for a in 0..mat.cols() {
                let w = mat.get(b, a);
                if w == 0 {
                    continue;
                }
                for y2 in 0..act.rows() {
                    let v = act.get(y2, y);
                    if v != 0 {
                        if let Some(r) = tgt.pos(d, a, y2) {
                            out.add_at(r, c, f.mul(w, v));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A permutation of the arrows sending each arrow to the next one parallel to it
/// (cyclically); arrows without a parallel partner stay fixed.
pub fn rotate_parallel_arrows(q: &Quiver) -> Vec<usize> {
    let arrows = q.arrows();
    (0..arrows.len())
        .map(|a| {
            let same: Vec<usize> = (0..arrows.len())
                .filter(|&b| arrows[b].source == arrows[a].source && arrows[b].target == arrows[a].target)
                .collect();
            let i = same.iter().position(|&b| b == a).expect("arrow is parallel to itself");
            same[(i + 1) % same.len()]
        })
        .collect()
}
