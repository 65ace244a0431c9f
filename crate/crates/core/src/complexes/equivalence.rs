//! Torsion-class predicates on complexes, the equivalence `F: L(S, U) -> Y(S, U)` with
//! its inverse, and the dual pipeline through `D`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraKind, DegreeMap, GradedAlgebra};
use crate::corpus::AlgebraBundle;
use crate::error::{Error, Result};
use crate::grmod::{in_l, in_lo, GradedModule, GradedMorphism, TorsionParams};
use crate::linalg::Matrix;
use crate::quiver::{Path, PathTable};

use super::functors::{coinduced_layout, differential_block, TermLayout};
use super::{certify, contained, iso_complexes, ComplexOfGraded, Flavor};

/// Membership in `T*_S`: every term at a position of `S` vanishes.
pub fn in_t_star(c: &ComplexOfGraded, params: &TorsionParams) -> bool {
    c.positions().filter(|&j| params.in_s(j)).all(|j| c.term(j).is_zero())
}

/// Membership in `G*(S, U)` for an almost injective n-complex:
/// (a) no nonzero map `D(Λ)[j] -> Ker d^j` for `j ∉ S`, and
/// (b) `Soc(I^j) ⊆ Im d^{j-1}` for `j ≢ m (mod n)`.
pub fn in_g_star(c: &ComplexOfGraded, params: &TorsionParams) -> Result<bool> {
    if 2 * params.r == params.n && params.n == 2 {
        return Ok(true);
    }
    let lambda = c.algebra();
    let top = lambda.base().top_nonzero_degree().ok_or(Error::InfiniteAlgebra)?;
    let ones = vec![1; lambda.vertex_count()];
    for j in c.positions().filter(|&j| !params.in_s(j)) {
        let t = c.term(j);
        if t.is_zero() {
            continue;
        }
        let (ker, _) = t.submodule(&c.diff(j).kernel(&t, &c.term(j + 1)))?;
        let dl = coinduced_layout(lambda, &ones, j, top).module;
        if dl.hom_dim(&ker)? > 0 {
            return Ok(false);
        }
    }
    let n = params.n as i64;
    for j in c.positions().filter(|&j| (j - params.m).rem_euclid(n) != 0) {
        let t = c.term(j);
        let img = c.diff(j - 1).image(&c.term(j - 1), &t);
        if !contained(&t.socle(), &img) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_u_module(x: &GradedModule) -> Result<()> {
    if x.algebra().kind() != AlgebraKind::USupport {
        return Err(Error::Precondition("expected a module over the U-support algebra".into()));
    }
    Ok(())
}

/// `μ: ⊕_α X_s -> X_{s+1}`, `(x_α) ↦ Σ x_α·α^o`.
fn degree_one_multiplication(x: &GradedModule, s: i64) -> Matrix {
    let mut mu = Matrix::zeros(x.field(), x.dim(s + 1), 0);
    for a in 0..x.algebra().arrow_count() {
        mu = mu.hstack(&x.action(a, s)).expect("same height");
    }
    mu
}

/// A right inverse of `⊕_α X_s -> X_{s+1}`: a decomposition `y = Σ_α σ_α(y)·α^o`.
pub fn canonical_section(x: &GradedModule, s: i64) -> Result<Matrix> {
    let mu = degree_one_multiplication(x, s);
    mu.solve_matrix(&Matrix::identity(x.field(), x.dim(s + 1)))
        .ok_or_else(|| Error::Precondition(format!("degree {} is not reached from degree {s} by arrows", s + 1)))
}

/// The canonical section moved by random elements of the kernel of the multiplication.
pub fn random_section(x: &GradedModule, s: i64, rng: &mut impl Rng) -> Result<Matrix> {
    let mut sec = canonical_section(x, s)?;
    let f = x.field();
    let ker = degree_one_multiplication(x, s).kernel();
    for c in 0..sec.cols() {
        for v in ker.basis_vectors() {
            let k = rng.gen_range(0..f.modulus());
            for (r, val) in v.into_iter().enumerate() {
                sec.add_at(r, c, f.mul(k, val));
            }
        }
    }
    Ok(sec)
}

/// `ξ(· ⊗ p^o): X_{s+1} -> X_{s+n}` for each `p ∈ Q_{n-1}` (canonical order), computed
/// from a decomposition `section` as `Σ_α σ_α(y)·(pα)^o`.
pub fn xi_maps(x: &GradedModule, s: i64, section: &Matrix) -> Result<Vec<Matrix>> {
    check_u_module(x)?;
    let alg = x.algebra();
    let n = alg.n();
    let q = alg.quiver().opposite();
    let f = x.field();
    let ds = x.dim(s);
    let table = PathTable::new(&q, n - 1);
    let mut out = Vec::new();
    for p in &table.paths {
        let mut xi = Matrix::zeros(f, x.dim(s + n as i64), x.dim(s + 1));
        for a in 0..alg.arrow_count() {
            let Some(pa) = p.concat(&q, &Path::new(&q, vec![a])?) else { continue };
            let coords = alg.reduce_path(n, &pa.opposite(&q))?;
            let act = x.element_action(n, &coords, s);
            let part = section.block(a * ds, ds, 0, section.cols());
            xi.add_assign_scaled(&act.mul_unchecked(&part), 1);
        }
        out.push(xi);
    }
    Ok(out)
}

/// `F(X)`: position `2j` is `Hom_{Λ_0}(Λ, X_{m+jn})[m+jn]`, position `2j+1` is
/// `Hom_{Λ_0}(Λ, X_{m+jn+1})[m+jn+1]`; the even differentials apply the arrows and
/// the odd ones apply `ξ` along all paths of length `n-1`.
pub fn equivalence_f(x: &GradedModule, params: &TorsionParams, lambda: &Arc<GradedAlgebra>) -> Result<ComplexOfGraded> {
    check_u_module(x)?;
    if !in_l(x, params)? {
        return Err(Error::Precondition("module is not in L(S, U)".into()));
    }
    let top = lambda.base().top_nonzero_degree().ok_or(Error::InfiniteAlgebra)?;
    let x = x.trimmed();
    if x.is_zero() {
        return Ok(ComplexOfGraded::zero(lambda.clone(), 2));
    }
    let n = params.n as i64;
    let dm = DegreeMap::new(params.m, params.n);
    let (j_lo, j_hi) = ((x.lo() - params.m).div_euclid(n), (x.hi() - params.m).div_euclid(n));
    let base = lambda.base();
    let f = x.field();
    let mut layouts: Vec<TermLayout> = Vec::new();
    for k in 2 * j_lo..=2 * j_hi + 1 {
        let s = dm.delta(k);
        layouts.push(coinduced_layout(lambda, &x.vertex_dims(s), s, top));
    }
    let q = lambda.quiver();
    let paths = PathTable::new(q, params.n - 1).paths;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut diffs = Vec::new();
    for k in 2 * j_lo..2 * j_hi + 1 {
        let i = (k - 2 * j_lo) as usize;
        let (src, tgt) = (&layouts[i], &layouts[i + 1]);
        let s = dm.delta(k);
        let maps: Vec<Matrix> = if k.rem_euclid(2) == 0 {
            let acts: Vec<Matrix> = (0..lambda.arrow_count()).map(|a| x.action(a, s)).collect();
            src.module
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
                .collect()
        } else {
            let prev = s - 1;
            let xis = if x.dim(s) == 0 {
                vec![Matrix::zeros(f, x.dim(prev + n), 0); paths.len()]
            } else {
                let xi = xi_maps(&x, prev, &canonical_section(&x, prev)?)?;
                let again = xi_maps(&x, prev, &random_section(&x, prev, &mut rng)?)?;
                if xi != again {
                    return Err(Error::Precondition(format!("ξ depends on the decomposition in degree {s}")));
                }
                xi
            };
            let step = params.n - 1;
            src.module
                .degrees()
                .map(|d| {
                    differential_block(
                        src,
                        tgt,
                        d,
                        &xis,
                        |e| (e >= step).then(|| paths.iter().map(|p| base.right_path(e - step, p)).collect()),
                        f,
                    )
                })
                .collect()
        };
        diffs.push(GradedMorphism { lo: src.module.lo(), maps });
    }
    let terms = layouts.into_iter().map(|l| l.module).collect();
    Ok(ComplexOfGraded::from_parts(lambda.clone(), 2, 2 * j_lo, terms, diffs).trimmed())
}

/// Conditions of membership in `Y(S, U)` other than liftability: (a) position `j`
/// almost injective cogenerated in degree `-δ_m(j)`; (b) for `n > 2`,
/// `Soc(I^{2j+1}) ⊆ Im d^{2j}`. Returns the first violation.
pub fn conditions_y(c: &ComplexOfGraded, params: &TorsionParams) -> Result<Option<String>> {
    if c.period() != 2 {
        return Ok(Some("not a 2-complex".into()));
    }
    if !c.is_n_complex(2) {
        return Ok(Some("d∘d is not zero".into()));
    }
    let dm = DegreeMap::new(params.m, params.n);
    if certify(c, Flavor::AlmostInjective, |k| -dm.delta(k))?.is_none() {
        return Ok(Some("condition (a): some term is not almost injective cogenerated in degree -δ_m(j)".into()));
    }
    if params.n > 2 {
        for k in (c.lo() - 1..=c.hi()).filter(|k| k.rem_euclid(2) == 1) {
            let t = c.term(k);
            let img = c.diff(k - 1).image(&c.term(k - 1), &t);
            if !contained(&t.socle(), &img) {
                return Ok(Some(format!("condition (b): socle of position {k} is not in the image")));
            }
        }
    }
    Ok(None)
}

/// Solves for the element of `term` in degree `d` whose products with the given algebra
/// elements (matrices from degree `d`) are `targets`.
fn solve_evaluation(evals: &[Matrix], targets: &[Vec<u32>], cols: usize) -> Option<Vec<u32>> {
    let f = evals.first().map(|m| m.field())?;
    let mut stacked = Matrix::zeros(f, 0, cols);
    let mut rhs = Vec::new();
    for (m, t) in evals.iter().zip(targets) {
        stacked = stacked.vstack(m).expect("same width");
        rhs.extend_from_slice(t);
    }
    stacked.solve(&rhs)
}

/// Recovers `X` with `F(X) ≅ c` from a complex satisfying the conditions of `Y`.
///
/// `X_{δ_m(k)}` is the socle degree of position `k`. An arrow acts from even degrees
/// through `d^{2j}` after identifying `(I^{2j})_{-s-1}` with `Hom_{Λ_0}(Λ_1, X_s)` by
/// evaluation; `ξ(y ⊗ p^o)` is read off `d^{2j+1}` the same way with `Λ_{n-1}`, and
/// the degree-n generators act as composites of these.
pub fn extract_module(c: &ComplexOfGraded, params: &TorsionParams, u: &Arc<GradedAlgebra>) -> Result<GradedModule> {
    if u.kind() != AlgebraKind::USupport || u.n() != params.n {
        return Err(Error::Precondition("target must be the U-support algebra for the same n".into()));
    }
    if let Some(reason) = conditions_y(c, params)? {
        return Err(Error::Precondition(reason));
    }
    let c = c.trimmed();
    if c.is_zero() {
        return Ok(GradedModule::zero(u.clone()));
    }
    let lambda = c.algebra().clone();
    let f = lambda.field();
    let n = params.n;
    let dm = DegreeMap::new(params.m, n);
    let (lo, hi) = (dm.delta(c.lo()), dm.delta(c.hi()));
    let nv = u.vertex_count();
    let pos_of = |d: i64| dm.inverse(d).filter(|k| *k >= c.lo() && *k <= c.hi());
    let comps: Vec<Vec<usize>> =
        (lo..=hi).map(|d| pos_of(d).map_or(vec![0; nv], |k| c.term(k).vertex_dims(-d))).collect();
    let dim = |d: i64| if d < lo || d > hi { 0 } else { comps[(d - lo) as usize].iter().sum::<usize>() };
    let q = lambda.quiver().clone();
    let arrows = lambda.arrow_count();
    let short_paths = PathTable::new(&q, n - 1).paths;
    let bv = |d: i64| -> Vec<usize> {
        let k = pos_of(d).expect("degree in S");
        c.term(k).basis_vertices(-d)
    };

    // y ↦ ξ(y ⊗ p^o) for y ∈ X_{s1} with s1 = δ_m(k), k odd: X_{s1} -> X_{s1+n-1}
    let xi_from = |k: i64, p: &Path| -> Result<Matrix> {
        let s1 = dm.delta(k);
        let term = c.term(k);
        let d = -s1 - (n as i64 - 1);
        let mut out = Matrix::zeros(f, dim(s1 + n as i64 - 1), dim(s1));
        if dim(s1) == 0 || out.rows() == 0 {
            return Ok(out);
        }
        let evals: Vec<Matrix> = short_paths
            .iter()
            .map(|p2| Ok(term.element_action(n - 1, &lambda.reduce_path(n - 1, p2)?, d)))
            .collect::<Result<_>>()?;
        let diff = c.diff(k).at(d, &term, &c.term(k + 1));
        let verts = bv(s1);
        let pi = short_paths.iter().position(|x| x == p).expect("path of length n-1");
        for y in 0..dim(s1) {
            if verts[y] != p.target(&q) {
                continue;
            }
            let targets: Vec<Vec<u32>> = (0..short_paths.len())
                .map(|i| {
                    let mut t = vec![0; dim(s1)];
                    if i == pi {
                        t[y] = 1;
                    }
                    t
                })
                .collect();
            let g = solve_evaluation(&evals, &targets, term.dim(d))
                .ok_or_else(|| Error::Precondition(format!("position {k} is not cogenerated as required")))?;
            for (r, v) in diff.apply(&g).into_iter().enumerate() {
                out.set(r, y, v);
            }
        }
        Ok(out)
    };

    // arrow actions from every degree of S that has a successor in S reached by one arrow
    let mut arrow_acts: std::collections::HashMap<(usize, i64), Matrix> = Default::default();
    for k in c.lo() - 1..=c.hi() {
        let s = dm.delta(k);
        if dim(s) == 0 {
            continue;
        }
        if k.rem_euclid(2) == 0 {
            let term = c.term(k);
            let d = -s - 1;
            let evals: Vec<Matrix> = (0..arrows).map(|b| term.action(b, d)).collect();
            let diff = c.diff(k).at(d, &term, &c.term(k + 1));
            let verts = bv(s);
            for a in 0..arrows {
                let mut out = Matrix::zeros(f, dim(s + 1), dim(s));
                if term.dim(d) > 0 {
                    for x in 0..dim(s) {
                        if verts[x] != q.arrows()[a].target {
                            continue;
                        }
                        let targets: Vec<Vec<u32>> = (0..arrows)
                            .map(|b| {
                                let mut t = vec![0; dim(s)];
                                if b == a {
                                    t[x] = 1;
                                }
                                t
                            })
                            .collect();
                        let g = solve_evaluation(&evals, &targets, term.dim(d)).ok_or_else(|| {
                            Error::Precondition(format!("position {k} is not cogenerated as required"))
                        })?;
                        for (r, v) in diff.apply(&g).into_iter().enumerate() {
                            out.set(r, x, v);
                        }
                    }
                }
                arrow_acts.insert((a, s), out);
            }
        } else if n == 2 {
            for a in 0..arrows {
                let p = Path::new(&q, vec![a])?;
                arrow_acts.insert((a, s), xi_from(k, &p)?);
            }
        }
    }
    let arrow = |a: usize, s: i64| -> Matrix {
        arrow_acts.get(&(a, s)).cloned().unwrap_or_else(|| Matrix::zeros(f, dim(s + 1), dim(s)))
    };

    let mut actions: Vec<Vec<Matrix>> = Vec::new();
    let qo = u.quiver();
    for (g, gen) in u.generators().iter().enumerate() {
        let e = gen.degree as i64;
        let mut acts = Vec::new();
        for d in lo..=hi {
            let rows = if d + e <= hi { dim(d + e) } else { 0 };
            let mut m = Matrix::zeros(f, rows, dim(d));
            if rows > 0 && dim(d) > 0 {
                if g < arrows {
                    if dm.contains(d + 1) {
                        m = arrow(g, d);
                    }
                } else if let Some(k) = pos_of(d) {
                    let pi = &gen.path;
                    if k.rem_euclid(2) == 0 {
                        // x·(α^o ρ) = ξ((x·α^o) ⊗ ρ)
                        let a = pi.arrows()[0];
                        let rho = pi.slice(qo, 1, n);
                        let xi = xi_from(k + 1, &rho.opposite(qo))?;
                        m = xi.mul_unchecked(&arrow(a, d));
                    } else {
                        // y·(ρ β^o) = ξ(y ⊗ ρ)·β^o
                        let b = pi.arrows()[n - 1];
                        let rho = pi.slice(qo, 0, n - 1);
                        let xi = xi_from(k, &rho.opposite(qo))?;
                        m = arrow(b, d + n as i64 - 1).mul_unchecked(&xi);
                    }
                }
            }
            acts.push(m);
        }
        actions.push(acts);
    }
    GradedModule::new(u.clone(), lo, comps, actions)
}

/// Membership in `Y(S, U)`: conditions (a), (b) and `F(extract(c)) ≅ c`. The extracted
/// module is returned as a witness.
pub fn in_y(
    c: &ComplexOfGraded,
    params: &TorsionParams,
    u: &Arc<GradedAlgebra>,
) -> Result<(bool, Option<GradedModule>)> {
    if conditions_y(c, params)?.is_some() {
        return Ok((false, None));
    }
    let x = match extract_module(c, params, u) {
        Ok(x) => x,
        Err(Error::Precondition(_)) | Err(Error::InvalidModule(_)) => return Ok((false, None)),
        Err(e) => return Err(e),
    };
    if !in_l(&x, params)? {
        return Ok((false, None));
    }
    let rebuilt = equivalence_f(&x, params, c.algebra())?;
    if iso_complexes(&rebuilt, c)? {
        Ok((true, Some(x)))
    } else {
        Ok((false, None))
    }
}

/// Conditions of membership in `Y^o(S, U)` other than liftability: (a) position `j`
/// projective generated in degree `δ_m(-j)`; (b) for `n > 2`,
/// `Ker d^{2k-1} ⊆ P^{2k-1}·J`. Returns the first violation.
pub fn conditions_yo(c: &ComplexOfGraded, params: &TorsionParams) -> Result<Option<String>> {
    if c.period() != 2 {
        return Ok(Some("not a 2-complex".into()));
    }
    if !c.is_n_complex(2) {
        return Ok(Some("d∘d is not zero".into()));
    }
    let dm = DegreeMap::new(params.m, params.n);
    if certify(c, Flavor::Projective, |j| dm.delta(-j))?.is_none() {
        return Ok(Some("condition (a): some term is not projective generated in degree δ_m(-j)".into()));
    }
    if params.n > 2 {
        for k in c.positions().filter(|k| k.rem_euclid(2) == 1) {
            let t = c.term(k);
            let ker = c.diff(k).kernel(&t, &c.term(k + 1));
            if !contained(&ker, &t.radical()) {
                return Ok(Some(format!("condition (b): kernel at position {k} leaves the radical")));
            }
        }
    }
    Ok(None)
}

/// Membership in `Y^o(S, U)`: conditions (a), (b), and `D(c) ∈ Y(S, U)` over `Λ^op`.
pub fn in_yo(c: &ComplexOfGraded, params: &TorsionParams, op: &AlgebraBundle) -> Result<bool> {
    if conditions_yo(c, params)?.is_some() {
        return Ok(false);
    }
    let dc = c.dual(op.lambda.clone())?;
    Ok(in_y(&dc, params, &op.u)?.0)
}

/// The dual equivalence `L^o(S, U) -> Y^o(S, U)`: `X ↦ D(F(D X))`, with `F` taken over
/// `Λ^op` (the bundle `op`). The output is checked against the conditions of `Y^o`.
pub fn equivalence_f_dual(
    x: &GradedModule,
    params: &TorsionParams,
    lambda: &Arc<GradedAlgebra>,
    op: &AlgebraBundle,
) -> Result<ComplexOfGraded> {
    check_u_module(x)?;
    if !in_lo(x, params)? {
        return Err(Error::Precondition("module is not in L^o(S, U)".into()));
    }
    let dx = x.graded_dual(op.u.clone())?;
    let out = equivalence_f(&dx, params, &op.lambda)?.dual(lambda.clone())?;
    if let Some(reason) = conditions_yo(&out, params)? {
        return Err(Error::Precondition(format!("dual construction produced a complex outside Y^o: {reason}")));
    }
    Ok(out)
}
