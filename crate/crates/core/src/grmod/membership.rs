//! Membership predicates for the subcategories of modules over the dual algebra,
//! its U-support and the Yoneda algebra.

use std::sync::Arc;

use crate::algebra::{AlgebraKind, DegreeMap, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::quiver::{Path, PathTable};

use super::{is_torsionfree, GradedModule, TorsionParams};

/// Torsionfree and generated in degrees of `(S:U)`.
pub fn in_g(m: &GradedModule, params: &TorsionParams) -> bool {
    is_torsionfree(m, params) && m.generated_in_degrees(|d| params.in_quotient(d))
}

/// For each base degree `s`: every `Σ_α x_α ⊗ α^o` in the kernel of the degree-1
/// multiplication, multiplied on the right by `Λ^!_{n-1}`, lies in the kernel of the
/// degree-n multiplication.
pub fn kernel_condition(x: &GradedModule, base_degrees: impl IntoIterator<Item = i64>) -> Result<bool> {
    let alg = x.algebra();
    let base = alg.base();
    let n = alg.n();
    if base.top() < n {
        return Err(Error::Window("dual algebra must be known through degree n".into()));
    }
    let arrows = alg.arrow_count();
    let offset = arrows;
    let f = x.field();
    // products α^o · b for b a basis element of degree n-1, in degree-n coordinates
    let products: Vec<Matrix> = (0..arrows).map(|g| base.left_arrow(n - 1, g)).collect();
    for s in base_degrees {
        let ds = x.dim(s);
        if ds == 0 {
            continue;
        }
        let mut mu1 = Matrix::zeros(f, x.dim(s + 1), 0);
        for g in 0..arrows {
            mu1 = mu1.hstack(&x.action(g, s)).expect("same height");
        }
        let kernel = mu1.kernel();
        if kernel.is_zero() {
            continue;
        }
        let step = alg.generators()[offset].degree as i64;
        let target = x.dim(s + step);
        let deg_n: Vec<Matrix> = alg.degree_n_generators().map(|h| x.action(h, s)).collect();
        for v in kernel.basis_vectors() {
            for b in 0..base.dim(n - 1) {
                let mut out = vec![0u32; target];
                for g in 0..arrows {
                    let xg = &v[g * ds..(g + 1) * ds];
                    if xg.iter().all(|&c| c == 0) {
                        continue;
                    }
                    for (i, c) in products[g].column(b).into_iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (o, y) in out.iter_mut().zip(deg_n[i].apply(xg)) {
                            *o = f.add(*o, f.mul(c, y));
                        }
                    }
                }
                if out.iter().any(|&c| c != 0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Membership in `L(S, U)` for a module over the U-support algebra.
pub fn in_l(x: &GradedModule, params: &TorsionParams) -> Result<bool> {
    let alg = x.algebra();
    if alg.kind() != AlgebraKind::USupport || params.n != alg.n() || params.r != 1 {
        return Err(Error::Precondition("in_L needs a module over the U-support algebra with r = 1".into()));
    }
    if let Some(d) = x.support().into_iter().find(|&d| !params.in_s(d)) {
        return Err(Error::Precondition(format!("module has a component in degree {d} outside S")));
    }
    if !x.generated_in_degrees(|d| params.in_quotient(d)) {
        return Ok(false);
    }
    let n = params.n as i64;
    let bases: Vec<i64> = x.degrees().filter(|&d| (d - params.m).rem_euclid(n) == 0).collect();
    kernel_condition(x, bases)
}

/// Membership in `L_E` for a module over the Yoneda algebra.
pub fn in_l_e(v: &GradedModule) -> Result<bool> {
    let alg = v.algebra();
    if alg.kind() != AlgebraKind::Yoneda {
        return Err(Error::Precondition("in_L_E needs a module over the Yoneda algebra".into()));
    }
    if alg.n() == 2 {
        return Ok(true);
    }
    if !v.generated_in_degrees(|d| d.rem_euclid(2) == 0) {
        return Ok(false);
    }
    let evens: Vec<i64> = v.degrees().filter(|d| d.rem_euclid(2) == 0).collect();
    kernel_condition(v, evens)
}

/// Moves an E-module to the U-support algebra along `j ↦ δ_0(j)`. Fails when a
/// degree-1 element acts nontrivially from an odd degree, which has no counterpart there.
pub fn regrade_e_to_u(v: &GradedModule, target: Arc<GradedAlgebra>) -> Result<GradedModule> {
    let alg = v.algebra();
    if alg.kind() != AlgebraKind::Yoneda || target.kind() != AlgebraKind::USupport || alg.n() != target.n() {
        return Err(Error::Precondition("regrading goes from the Yoneda algebra to the U-support algebra".into()));
    }
    let n = alg.n();
    let dm = DegreeMap::new(0, n);
    let f = v.field();
    let nv = alg.vertex_count();
    if v.is_zero() {
        return Ok(GradedModule::zero(target));
    }
    let (lo, hi) = (dm.delta(v.lo()), dm.delta(v.hi()));
    let back = |d: i64| dm.inverse(d).filter(|j| *j >= v.lo() && *j <= v.hi());
    let comps: Vec<Vec<usize>> = (lo..=hi).map(|d| back(d).map_or(vec![0; nv], |j| v.vertex_dims(j))).collect();
    let dim = |d: i64| back(d).map_or(0, |j| v.dim(j));
    let mut actions = Vec::new();
    for (g, gen) in target.generators().iter().enumerate() {
        let e = gen.degree as i64;
        let mut acts = Vec::new();
        for d in lo..=hi {
            let rows = if d + e <= hi { dim(d + e) } else { 0 };
            let m = match (back(d), back(d + e)) {
                (Some(j), Some(j2)) if rows > 0 && j2 == j + alg.generators()[g].degree as i64 => v.action(g, j),
                _ => Matrix::zeros(f, rows, dim(d)),
            };
            acts.push(m);
        }
        actions.push(acts);
    }
    if n > 2 {
        for j in v.degrees().filter(|j| j.rem_euclid(2) == 1) {
            if (0..alg.arrow_count()).any(|g| !v.action(g, j).is_zero()) {
                return Err(Error::Precondition(format!("degree-1 elements act nontrivially from odd degree {j}")));
            }
        }
    }
    GradedModule::from_parts(target, lo, comps, actions)
}

/// `Δ_{s,u}: X_{-s-u} -> X_{-s} ⊗ KQ_u`, `x ↦ Σ_{p ∈ Q_u} x·p̄^o ⊗ p`, where `Q` is the
/// quiver opposite to the algebra's. Rows are grouped by path in canonical order.
pub fn comultiplication(x: &GradedModule, s: i64, u: usize) -> Result<Matrix> {
    let alg = x.algebra();
    if alg.base_degree(u).is_none() {
        return Err(Error::UnsupportedDegree(format!("{u} is not a degree of the algebra")));
    }
    if !alg.knows(u) {
        return Err(Error::Window(format!("algebra degree {u} is outside the computed window")));
    }
    let f = x.field();
    let q = alg.quiver().opposite();
    let table = PathTable::new(&q, u);
    let (src, tgt) = (-s - u as i64, -s);
    let dt = x.dim(tgt);
    let mut out = Matrix::zeros(f, table.len() * dt, x.dim(src));
    for (k, p) in table.paths.iter().enumerate() {
        let po = if u == 0 { Path::trivial(p.source()) } else { p.opposite(&q) };
        let coords = alg.reduce_path(u, &po)?;
        let act = x.element_action(u, &coords, src);
        out.set_block(k * dt, 0, &act);
    }
    Ok(out)
}

/// Membership in `L^o(S, U)`: cogenerated in degrees `-(S:U)` and, for each `s = m + kn`,
/// the image of `Δ_{s,n}` lies in the image of `Δ_{s,1} ⊗ 1` under `KQ_n ≅ KQ_1 ⊗ KQ_{n-1}`.
pub fn in_lo(x: &GradedModule, params: &TorsionParams) -> Result<bool> {
    let alg = x.algebra();
    if alg.kind() != AlgebraKind::USupport || params.n != alg.n() || params.r != 1 {
        return Err(Error::Precondition("in_Lo needs a module over the U-support algebra with r = 1".into()));
    }
    if let Some(d) = x.support().into_iter().find(|&d| !params.in_s(-d)) {
        return Err(Error::Precondition(format!("module has a component in degree {d} outside -S")));
    }
    if !x.cogenerated_in_degrees(|d| params.in_quotient(-d)) {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let f = x.field();
    let n = params.n;
    let q = alg.quiver().opposite();
    let qn = PathTable::new(&q, n);
    let q1 = PathTable::new(&q, 1);
    let qm = PathTable::new(&q, n - 1);
    let nn = n as i64;
    let k_lo = (-x.hi() - params.m).div_euclid(nn) - 1;
    let k_hi = (-x.lo() - params.m).div_euclid(nn) + 1;
    for k in k_lo..=k_hi {
        let s = params.m + k * nn;
        if x.dim(-s - nn) == 0 || x.dim(-s) == 0 {
            continue;
        }
        let big = comultiplication(x, s, n)?;
        let one = comultiplication(x, s, 1)?;
        let dt = x.dim(-s);
        let ambient = qn.len() * dt;
        let mut span = Vec::new();
        for qq in &qm.paths {
            for y in 0..x.dim(-s - 1) {
                let mut v = vec![0u32; ambient];
                for (a, alpha) in q1.paths.iter().enumerate() {
                    if let Some(p) = alpha.concat(&q, qq) {
                        let pi = qn.index_of(&p).expect("path of length n");
                        for t in 0..dt {
                            v[pi * dt + t] = one.get(a * dt + t, y);
                        }
                    }
                }
                span.push(v);
            }
        }
        let image = Subspace::from_vectors(f, ambient, &span);
        for c in 0..big.cols() {
            if !image.contains_vector(&big.column(c)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
